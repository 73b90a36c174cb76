//! Fixture self-tests: the eight checks behind `equidec selftest` and the
//! acceptance suite. Every check is exact; there are no tolerances anywhere.

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::arith::{self, Rat};
use crate::ehrhart::{self, SimplexType, ALL_TYPES};
use crate::equidec;
use crate::geom::{self, Mode, PointQ, PolytopeV, Simplex};
use crate::halfuni::{self, certify_open_partition};
use crate::triangulate;
use crate::white::{self, coprime_pairs, white_tetrahedron};

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn result(id: u8, name: &'static str, passed: bool, detail: String) -> CriterionResult {
    CriterionResult { id, name, passed, detail }
}

pub fn intro_polytope_first() -> PolytopeV {
    PolytopeV::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 3], &[2, 1, 3], &[1, 2, 3]])
}

pub fn intro_polytope_second() -> PolytopeV {
    PolytopeV::from_ints(&[
        &[1, 0, 0],
        &[-1, 0, 0],
        &[0, 1, 0],
        &[0, -1, 0],
        &[1, 1, 1],
        &[1, 0, -1],
    ])
}

fn binom(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let mut acc = 1i64;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Criterion 1: the nine closed forms equal brute-force interior counts for
/// k = 1..12; the binomial identities hold for the unprimed classes; and the
/// alternative linear expression (2k + (-1)^k - 1)/4 for the one-lattice-
/// point segment is off at k = 2 (it gives 1, the count is 0), which the
/// suite documents rather than papers over.
pub fn criterion_1() -> CriterionResult {
    let mut detail = String::new();
    let mut ok = true;
    for t in ALL_TYPES {
        let q = ehrhart::closed_form(t);
        let s = t.canonical_simplex();
        for k in 1..=12u64 {
            let counted = ehrhart::count_simplex(&s, k, Mode::Relint);
            if q.eval_int(k) != arith::int(counted as i64) {
                ok = false;
                detail = format!("{} closed form differs from count at k = {k}", t.label());
            }
        }
    }
    // binomial identities for the seven unprimed classes
    for t in [
        SimplexType::PointLat,
        SimplexType::SegLat,
        SimplexType::TriLat,
        SimplexType::TetLat,
        SimplexType::PointHalf,
        SimplexType::SegHalf,
        SimplexType::TriHalf,
    ] {
        let has_lattice_point = matches!(
            t,
            SimplexType::PointLat | SimplexType::SegLat | SimplexType::TriLat | SimplexType::TetLat
        );
        let i = t.dim() as i64;
        let s = t.canonical_simplex();
        for k in 1..=12i64 {
            let b = binom((k + 1) / 2 - 1, i); // binom(ceil(k/2) - 1, i)
            let expect = if has_lattice_point {
                b
            } else if k % 2 == 0 {
                b
            } else {
                0
            };
            let counted = ehrhart::count_simplex(&s, k as u64, Mode::Relint) as i64;
            if counted != expect {
                ok = false;
                detail = format!("binomial identity fails for {} at k = {k}", t.label());
            }
        }
    }
    // the known mismatch of the alternative expression at k = 2
    let alt = |k: i64| -> Rat {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        arith::rat(2 * k + sign - 1, 4)
    };
    let seg = SimplexType::SegLat.canonical_simplex();
    let count2 = ehrhart::count_simplex(&seg, 2, Mode::Relint);
    let mismatch_documented = alt(2) == arith::rat_int(1) && count2 == 0;
    if !mismatch_documented {
        ok = false;
        detail = "expected the alternative Delta_1^1 expression to give 1 at k = 2 against a count of 0"
            .into();
    }
    if ok {
        detail = format!(
            "nine closed forms match counts on k = 1..12; binomial identities hold; \
             noted: alternative Delta_1^1 formula gives {} at k = 2, count is {count2}",
            alt(2)
        );
    }
    result(1, "closed forms vs counting", ok, detail)
}

/// Criterion 2: the 7x7 evaluation table, exactly.
pub fn criterion_2() -> CriterionResult {
    let m = ehrhart::basis_evaluation_matrix();
    let expected: [[i64; 7]; 7] = [
        [1, 1, 1, 1, 1, 1, 1],
        [0, 1, 0, 1, 0, 1, 0],
        [0, 0, 1, 1, 2, 2, 3],
        [0, 0, 0, 1, 0, 2, 0],
        [0, 0, 0, 0, 1, 1, 3],
        [0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 1],
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if *v != arith::int(expected[i][j]) {
                ok = false;
                detail = format!("entry ({i}, {j}) is {v}, expected {}", expected[i][j]);
            }
        }
    }
    // double-check against direct interior counts
    for (i, t) in ehrhart::BASIS_ROW_TYPES.iter().enumerate() {
        let s = t.canonical_simplex();
        for k in 1..=7u64 {
            if m[i][(k - 1) as usize]
                != arith::int(ehrhart::count_simplex(&s, k, Mode::Relint) as i64)
            {
                ok = false;
                detail = format!("table row {} disagrees with counting at k = {k}", t.label());
            }
        }
    }
    if ok {
        detail = "unitriangular 7x7 evaluation table reproduced exactly".into();
    }
    result(2, "evaluation table", ok, detail)
}

/// Criterion 3: width-one classification recovers (q, class of p) on 50
/// random unimodular images of every normal form with q <= 12.
pub fn criterion_3() -> CriterionResult {
    let pairs = coprime_pairs(12);
    let failures: Vec<String> = pairs
        .par_iter()
        .flat_map(|&(p, q)| {
            let mut rng = StdRng::seed_from_u64(1000 + (100 * q + p) as u64);
            let t = white_tetrahedron(p, q);
            let expect_class = white::canonical_p(&arith::int(p), &arith::int(q)).unwrap();
            let mut errs = Vec::new();
            for trial in 0..50 {
                let u = halfuni::random_unimodular_map(&mut rng, 3);
                let image = t.transformed(&u);
                match white::white_normal_form(&image) {
                    Ok(wf) => {
                        if wf.q != arith::int(q) || wf.p_canonical != expect_class {
                            errs.push(format!(
                                "(p, q) = ({p}, {q}) trial {trial}: got q = {}, class {}",
                                wf.q, wf.p_canonical
                            ));
                        }
                    }
                    Err(e) => errs.push(format!("(p, q) = ({p}, {q}) trial {trial}: {e}")),
                }
            }
            errs
        })
        .collect();
    let ok = failures.is_empty();
    let detail = if ok {
        format!("{} normal forms, 50 random images each, class recovered exactly", pairs.len())
    } else {
        failures[0].clone()
    };
    result(3, "width-one classification", ok, detail)
}

/// Criterion 4: the half triangulations and the interior partition of every
/// normal form with q <= 12, fully certified.
pub fn criterion_4() -> CriterionResult {
    let pairs = coprime_pairs(12);
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(p, q)| one_normal_form_battery(p, q).err())
        .collect();
    let ok = failures.is_empty();
    let detail = if ok {
        format!("{} parameter pairs: halves, volumes, interior partitions all certified", pairs.len())
    } else {
        failures[0].clone()
    };
    result(4, "normal-form decompositions", ok, detail)
}

fn one_normal_form_battery(p: i64, q: i64) -> Result<(), String> {
    let err = |m: String| -> Result<(), String> { Err(format!("(p, q) = ({p}, {q}): {m}")) };
    for (half, cells) in [
        ("lower", halfuni::decompose_t_minus(p, q).map_err(|e| e.to_string())?),
        ("upper", halfuni::decompose_t_plus(p, q).map_err(|e| e.to_string())?),
    ] {
        if cells.len() != 4 * q as usize {
            return err(format!("{half} half has {} cells, expected {}", cells.len(), 4 * q));
        }
        let vol: Rat = cells.iter().map(|c| c.volume().unwrap()).sum();
        if vol != arith::rat(q, 12) {
            return err(format!("{half} half volume {vol}, expected {q}/12"));
        }
        for c in &cells {
            if !halfuni::is_half_unimodular(c) {
                return err(format!("{half} half has a non-half-unimodular cell"));
            }
            let pts = geom::lattice_points(c.vertices(), 1, Mode::Closed);
            if pts.len() != 1 || !c.vertices().contains(&pts[0]) {
                return err(format!(
                    "{half} half cell has {} lattice points or a non-vertex one",
                    pts.len()
                ));
            }
        }
    }
    let pieces = halfuni::interior_open_decomposition(p, q).map_err(|e| e.to_string())?;
    let three = pieces.iter().filter(|pc| pc.simplex.dim() == 3).count();
    if three != 8 * q as usize {
        return err(format!("{three} interior cells, expected {}", 8 * q));
    }
    let source = PolytopeV::new(white_tetrahedron(p, q).vertices().to_vec()).unwrap();
    certify_open_partition(&pieces, &source, Mode::Relint, &[1, 2, 4])
        .map_err(|e| format!("(p, q) = ({p}, {q}): {e}"))?;
    Ok(())
}

/// Criterion 5: the counting identity over 100 random lattice polytopes.
pub fn criterion_5() -> CriterionResult {
    let seeds: Vec<u64> = (0..100).collect();
    let failures: Vec<String> = seeds
        .par_iter()
        .filter_map(|&seed| {
            let mut rng = StdRng::seed_from_u64(777 + seed);
            let p = halfuni::random_lattice_polytope(&mut rng, 8, 4);
            let d = match halfuni::decompose_polytope(&p) {
                Ok(d) => d,
                Err(e) => return Some(format!("seed {seed}: {e}")),
            };
            let tv = d.type_vector();
            let qp = tv.quasipolynomial();
            for k in 1..=10u64 {
                let counted = ehrhart::count_polytope(&d.source, k, Mode::Closed);
                if qp.eval_int(k) != arith::int(counted as i64) {
                    return Some(format!("seed {seed}: identity fails at k = {k}"));
                }
            }
            let vol = triangulate::polytope_volume(&d.source);
            let cells = Rat::from_integer(arith::int(tv.count(SimplexType::TetLat) as i64));
            if cells != vol.clone() * arith::rat_int(48) {
                return Some(format!(
                    "seed {seed}: {cells} top cells against 48 * volume = {}",
                    vol * arith::rat_int(48)
                ));
            }
            None
        })
        .collect();
    let ok = failures.is_empty();
    let detail = if ok {
        "100 random polytopes: counting identity at k = 1..10 and the 48 * volume cell count".into()
    } else {
        failures[0].clone()
    };
    result(5, "counting identity on random polytopes", ok, detail)
}

/// Criterion 6: the three-dimensional fixture pair round-trips through
/// certificate generation and verification.
pub fn criterion_6() -> CriterionResult {
    let p = intro_polytope_first();
    let q = intro_polytope_second();
    let qp_p = match ehrhart::fit_quasipolynomial(&p, Mode::Closed) {
        Ok(f) => f,
        Err(e) => return result(6, "fixture pair certificate", false, e.to_string()),
    };
    let qp_q = ehrhart::fit_quasipolynomial(&q, Mode::Closed).unwrap();
    if qp_p != qp_q || qp_p.period != 1 || qp_p.degree != 3 {
        return result(
            6,
            "fixture pair certificate",
            false,
            format!("expected one shared degree-3 polynomial, got {qp_p} and {qp_q}"),
        );
    }
    let cert = match equidec::equidecompose(&p, &q) {
        Ok(c) => c,
        Err(e) => return result(6, "fixture pair certificate", false, e.to_string()),
    };
    let report = equidec::verify_certificate(&p, &q, &cert, &[1, 2, 4]);
    let ok = report.passed;
    let detail = if ok {
        format!(
            "shared polynomial {qp_p}; certificate with {} pairs passes all six checks",
            cert.pairs.len()
        )
    } else {
        let failing: Vec<String> =
            report.checks.iter().filter(|c| !c.passed).map(|c| c.detail.clone()).collect();
        failing.join("; ")
    };
    result(6, "fixture pair certificate", ok, detail)
}

/// Criterion 7: the one- and two-dimensional fixtures: the rational polygon
/// pair counts, the period-5 interval pair, and the orbit profiles that
/// separate the intervals.
pub fn criterion_7() -> CriterionResult {
    let polygon_a = PolytopeV::new(vec![
        PointQ::new(vec![arith::rat_int(-4), arith::rat_int(0)]),
        PointQ::new(vec![arith::rat_int(-1), arith::rat_int(0)]),
        PointQ::new(vec![arith::rat_int(-3), arith::rat(2, 3)]),
    ])
    .unwrap();
    let polygon_b = PolytopeV::new(vec![
        PointQ::new(vec![arith::rat_int(1), arith::rat_int(0)]),
        PointQ::new(vec![arith::rat_int(3), arith::rat_int(0)]),
        PointQ::new(vec![arith::rat_int(1), arith::rat_int(1)]),
    ])
    .unwrap();
    for k in 1..=12u64 {
        let ca = ehrhart::count_polytope(&polygon_a, k, Mode::Closed);
        let cb = ehrhart::count_polytope(&polygon_b, k, Mode::Closed);
        if ca != cb {
            return result(
                7,
                "one- and two-dimensional fixtures",
                false,
                format!("polygon counts differ at k = {k}: {ca} vs {cb}"),
            );
        }
    }
    let q1 = PolytopeV::new(vec![
        PointQ::new(vec![arith::rat(1, 5)]),
        PointQ::new(vec![arith::rat(6, 5)]),
    ])
    .unwrap();
    let q2 = PolytopeV::new(vec![
        PointQ::new(vec![arith::rat(2, 5)]),
        PointQ::new(vec![arith::rat(7, 5)]),
    ])
    .unwrap();
    if !ehrhart::ehrhart_equivalent(&q1, &q2) {
        return result(7, "one- and two-dimensional fixtures", false, "intervals not equivalent".into());
    }
    let f = ehrhart::fit_quasipolynomial(&q1, Mode::Closed).unwrap();
    let structure_ok = f.period == 5
        && (0..5usize).all(|r| {
            f.coeffs[r][1] == Rat::one()
                && f.coeffs[r][0] == if r == 0 { Rat::one() } else { Rat::zero() }
        });
    if !structure_ok {
        return result(
            7,
            "one- and two-dimensional fixtures",
            false,
            format!("interval quasipolynomial has unexpected shape: {f}"),
        );
    }
    let o1 = ehrhart::orbit_profile_1d(&q1, 5);
    let o2 = ehrhart::orbit_profile_1d(&q2, 5);
    let profiles_ok = o1.get(&1) == Some(&3) && o2.get(&1) == Some(&2) && o1 != o2;
    if !profiles_ok {
        return result(
            7,
            "one- and two-dimensional fixtures",
            false,
            format!("orbit profiles {o1:?} vs {o2:?}"),
        );
    }
    result(
        7,
        "one- and two-dimensional fixtures",
        true,
        format!(
            "polygon counts equal on k = 1..12; intervals share k + [5 | k] and split on orbits \
             ({:?} vs {:?})",
            o1, o2
        ),
    )
}

/// Criterion 8: the verifier rejects each of the four certificate
/// mutations through the specific check that should catch it.
pub fn criterion_8() -> CriterionResult {
    let p = intro_polytope_first();
    let q = intro_polytope_second();
    let cert = match equidec::equidecompose(&p, &q) {
        Ok(c) => c,
        Err(e) => return result(8, "mutation robustness", false, e.to_string()),
    };

    // deleted three-dimensional pair: the volume check sees the gap at any
    // scale; the audit sees it once the grid is fine enough to place a
    // point inside the missing open tetrahedron, which happens at scale 8
    let mut c1 = cert.clone();
    let i = c1.pairs.iter().position(|pr| pr.source.dim() == 3).unwrap();
    c1.pairs.remove(i);
    let r1 = equidec::verify_certificate(&p, &q, &c1, &[1, 8]);
    let deleted_ok = !r1.passed && !r1.check(4).passed && !r1.check(5).passed;

    // non-unimodular matrix
    let mut c2 = cert.clone();
    for x in c2.pairs[0].map.linear[0].iter_mut() {
        *x *= arith::rat_int(2);
    }
    let r2 = equidec::verify_certificate(&p, &q, &c2, &[1]);
    let matrix_ok = !r2.check(1).passed;

    // half-integer translation
    let mut c3 = cert.clone();
    c3.pairs[0].map.translation[2] += arith::rat(1, 2);
    let r3 = equidec::verify_certificate(&p, &q, &c3, &[1]);
    let translation_ok = !r3.check(1).passed;

    // mismatched piece
    let mut c4 = cert.clone();
    let n = c4.pairs.len();
    c4.pairs[n - 1].target = Simplex::from_ints(&[&[9, 9, 9]]);
    let r4 = equidec::verify_certificate(&p, &q, &c4, &[1]);
    let mismatch_ok = !r4.check(2).passed;

    let ok = deleted_ok && matrix_ok && translation_ok && mismatch_ok;
    let detail = if ok {
        "deleted pair, scaled matrix, half-integer translation and mismatched piece all rejected \
         by their specific checks"
            .into()
    } else {
        format!(
            "deleted: {deleted_ok}, matrix: {matrix_ok}, translation: {translation_ok}, \
             mismatch: {mismatch_ok}"
        )
    };
    result(8, "mutation robustness", ok, detail)
}

pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ]
}
