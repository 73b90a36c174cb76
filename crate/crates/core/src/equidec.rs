//! Equidecomposition certificates between Ehrhart-equivalent lattice
//! 3-polytopes, and an adversarial verifier for them.
//!
//! The builder pairs pieces of equal class from the two decompositions and
//! composes their canonical maps. The verifier is a separate code path: it
//! re-derives every fact it needs from the raw certificate data and never
//! reuses the builder's canonical maps.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{Rat, UnimodularMap};
use crate::ehrhart::{self, SimplexType, TypeVector};
use crate::error::Error;
use crate::geom::{self, rat_det, Mode, PointQ, PolytopeV, Simplex};
use crate::halfuni::{self, Decomposition};
use crate::triangulate;

/// Untrusted affine map as it appears in certificates: rational entries so
/// the verifier can reject non-integral or non-unimodular data instead of
/// the parser.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineMapQ {
    /// rows of the linear part
    pub linear: Vec<Vec<Rat>>,
    pub translation: Vec<Rat>,
}

impl AffineMapQ {
    pub fn apply(&self, p: &PointQ) -> PointQ {
        let coords = self
            .linear
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| {
                row.iter().zip(&p.coords).map(|(a, b)| a * b).sum::<Rat>() + t
            })
            .collect();
        PointQ::new(coords)
    }

    pub fn is_unimodular_integral(&self) -> bool {
        let entries_ok = self.linear.iter().flatten().all(|x| x.is_integer())
            && self.translation.iter().all(|x| x.is_integer());
        if !entries_ok {
            return false;
        }
        let det = rat_det(&self.linear);
        det.abs() == Rat::one()
    }
}

impl From<&UnimodularMap> for AffineMapQ {
    fn from(u: &UnimodularMap) -> Self {
        let d = u.dim();
        AffineMapQ {
            linear: (0..d)
                .map(|i| u.linear.row(i).iter().map(|x| Rat::from_integer(x.clone())).collect())
                .collect(),
            translation: u.translation.iter().map(|x| Rat::from_integer(x.clone())).collect(),
        }
    }
}

/// One matched pair: a piece of the first polytope, the unimodular map, and
/// the image piece of the second polytope.
#[derive(Clone, Debug)]
pub struct CertPair {
    pub source: Simplex,
    pub map: AffineMapQ,
    pub target: Simplex,
    pub stype: SimplexType,
}

#[derive(Clone, Debug)]
pub struct EquidecompCertificate {
    pub pairs: Vec<CertPair>,
    pub type_vector: TypeVector,
}

pub fn type_vector(d: &Decomposition) -> TypeVector {
    d.type_vector()
}

/// Build a certificate for two Ehrhart-equivalent lattice polytopes by
/// decomposing both and pairing pieces of equal class in lexicographic
/// order.
pub fn equidecompose(p: &PolytopeV, q: &PolytopeV) -> Result<EquidecompCertificate, Error> {
    for body in [p, q] {
        if !body.is_lattice() {
            return Err(Error::NotLatticePolytope("vertices must be integral".into()));
        }
    }
    let qp_left = ehrhart::fit_quasipolynomial(&p.embedded(3), Mode::Closed)?;
    let qp_right = ehrhart::fit_quasipolynomial(&q.embedded(3), Mode::Closed)?;
    if qp_left != qp_right {
        return Err(Error::NotEhrhartEquivalent {
            left: Box::new(qp_left),
            right: Box::new(qp_right),
        });
    }
    let da = halfuni::decompose_polytope(p)?;
    let db = halfuni::decompose_polytope(q)?;
    let tva = da.type_vector();
    let tvb = db.type_vector();
    assert_eq!(
        tva, tvb,
        "equal quasipolynomials force equal type vectors (linear independence of the class forms)"
    );

    let group = |d: &Decomposition| -> BTreeMap<SimplexType, Vec<(Simplex, UnimodularMap)>> {
        let mut m: BTreeMap<SimplexType, Vec<(Simplex, UnimodularMap)>> = BTreeMap::new();
        for piece in &d.pieces {
            m.entry(piece.stype)
                .or_default()
                .push((piece.simplex.clone(), piece.to_canonical.clone()));
        }
        for v in m.values_mut() {
            v.sort_by(|a, b| a.0.sorted_key().cmp(&b.0.sorted_key()));
        }
        m
    };
    let ga = group(&da);
    let gb = group(&db);

    let mut pairs = Vec::new();
    for (ty, left) in &ga {
        let right = &gb[ty];
        assert_eq!(left.len(), right.len());
        for ((ls, lmap), (rs, rmap)) in left.iter().zip(right) {
            let map = rmap.inverse().compose(lmap);
            let img: Vec<PointQ> =
                ls.vertices().iter().map(|v| geom::apply_map(&map, v)).collect();
            let mut img_sorted = img.clone();
            img_sorted.sort();
            assert_eq!(img_sorted, rs.sorted_key(), "canonical-map composition hits the partner");
            pairs.push(CertPair {
                source: ls.clone(),
                map: AffineMapQ::from(&map),
                target: rs.clone(),
                stype: *ty,
            });
        }
    }
    Ok(EquidecompCertificate { pairs, type_vector: tva })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn check(&self, id: u8) -> &CheckResult {
        self.checks.iter().find(|c| c.id == id).expect("check ids are 1..=6")
    }
}

fn partition_checks(
    label: &str,
    pieces: &[Simplex],
    body: &PolytopeV,
    scales: &[u64],
) -> (bool, String, bool, String) {
    let fss: Vec<Option<geom::FacetSystem>> =
        pieces.par_iter().map(|s| s.facet_system().ok()).collect();

    // pairwise disjointness
    let n = pieces.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let clash = pairs
        .par_iter()
        .find_any(|(i, j)| {
            if geom::boxes_strictly_separated(&pieces[*i], &pieces[*j]) {
                return false;
            }
            match (&fss[*i], &fss[*j]) {
                (Some(a), Some(b)) => !geom::pieces_disjoint_fs(a, b),
                _ => true,
            }
        })
        .map(|(i, j)| format!("{label}: pieces {i} and {j} overlap"));
    let (disjoint_ok, disjoint_msg) = match clash {
        Some(m) => (false, m),
        None => (true, format!("{label}: {n} pieces pairwise disjoint")),
    };
    let mut audit_ok = true;
    let mut audit_msg = String::new();
    'outer: for &s in scales {
        let pts = geom::lattice_points(body.vertices(), s, Mode::Closed);
        for x in &pts {
            let hits = fss
                .iter()
                .filter(|fs| fs.as_ref().map(|f| f.contains(x, Mode::Relint)).unwrap_or(false))
                .count();
            if hits != 1 {
                audit_ok = false;
                audit_msg =
                    format!("{label}: point {:?} at scale {s} covered {hits} times", x.coords);
                break 'outer;
            }
        }
        audit_msg = format!("{label}: audits clean at scales {scales:?}");
    }
    (disjoint_ok, disjoint_msg, audit_ok, audit_msg)
}

/// Independent verification of a certificate against the two polytopes. The
/// verifier trusts nothing: every check recomputes from raw data.
pub fn verify_certificate(
    p: &PolytopeV,
    q: &PolytopeV,
    cert: &EquidecompCertificate,
    scales: &[u64],
) -> VerificationReport {
    let p = p.embedded(3);
    let q = q.embedded(3);
    let mut checks = Vec::new();

    // (1) every map is unimodular with an integer translation
    let bad_map = cert.pairs.iter().position(|pr| !pr.map.is_unimodular_integral());
    checks.push(CheckResult {
        id: 1,
        name: "maps unimodular with integer translation".into(),
        passed: bad_map.is_none(),
        detail: match bad_map {
            Some(i) => format!("pair {i} has a non-unimodular or non-integral map"),
            None => format!("{} maps checked", cert.pairs.len()),
        },
    });

    // (2) map(piece) equals the partner piece, as vertex sets
    let bad_pair = cert.pairs.iter().position(|pr| {
        let mut img: Vec<PointQ> =
            pr.source.vertices().iter().map(|v| pr.map.apply(v)).collect();
        img.sort();
        img != pr.target.sorted_key()
    });
    checks.push(CheckResult {
        id: 2,
        name: "piece images match".into(),
        passed: bad_pair.is_none(),
        detail: match bad_pair {
            Some(i) => format!("pair {i}: map(source) differs from target"),
            None => "all images equal their partners".into(),
        },
    });

    // (3) + (5) partition checks on both sides
    let src_pieces: Vec<Simplex> = cert.pairs.iter().map(|pr| pr.source.clone()).collect();
    let tgt_pieces: Vec<Simplex> = cert.pairs.iter().map(|pr| pr.target.clone()).collect();
    let (d1, m1, a1, am1) = partition_checks("first polytope", &src_pieces, &p, scales);
    let (d2, m2, a2, am2) = partition_checks("second polytope", &tgt_pieces, &q, scales);
    checks.push(CheckResult {
        id: 3,
        name: "pieces pairwise disjoint".into(),
        passed: d1 && d2,
        detail: if d1 { m2.clone() } else { m1.clone() },
    });

    // (4) volumes
    let vol_sum = |pieces: &[Simplex]| -> Rat {
        pieces
            .iter()
            .filter(|s| s.dim() == 3)
            .map(|s| s.volume().expect("full-dimensional piece"))
            .sum()
    };
    let vp = triangulate::polytope_volume(&p);
    let vq = triangulate::polytope_volume(&q);
    let sp = vol_sum(&src_pieces);
    let sq = vol_sum(&tgt_pieces);
    let vol_ok = sp == vp && sq == vq && vp == vq;
    checks.push(CheckResult {
        id: 4,
        name: "piece volumes sum to the polytope volumes".into(),
        passed: vol_ok,
        detail: format!("sums {sp} and {sq} against volumes {vp} and {vq}"),
    });

    checks.push(CheckResult {
        id: 5,
        name: "grid point audit".into(),
        passed: a1 && a2,
        detail: if a1 { am2 } else { am1 },
    });

    // (6) the classified type counts reproduce the counting quasipolynomial
    let qp_check = (|| -> Result<(bool, String), Error> {
        let mut tv = TypeVector::default();
        for s in &src_pieces {
            tv.bump(halfuni::classify(s)?);
        }
        let mut tv2 = TypeVector::default();
        for s in &tgt_pieces {
            tv2.bump(halfuni::classify(s)?);
        }
        let lhs = tv.quasipolynomial();
        let fitted_p = ehrhart::fit_quasipolynomial(&p, Mode::Closed)?;
        let fitted_q = ehrhart::fit_quasipolynomial(&q, Mode::Closed)?;
        let ok = lhs == fitted_p && tv2.quasipolynomial() == fitted_q && fitted_p == fitted_q;
        Ok((ok, format!("class sums {lhs} against fits {fitted_p} and {fitted_q}")))
    })();
    let (qp_ok, qp_detail) = match qp_check {
        Ok(x) => x,
        Err(e) => (false, format!("classification failed: {e}")),
    };
    checks.push(CheckResult {
        id: 6,
        name: "class quasipolynomials sum to the Ehrhart quasipolynomial".into(),
        passed: qp_ok,
        detail: qp_detail,
    });

    let passed = checks.iter().all(|c| c.passed);
    VerificationReport { checks, passed }
}

/// Decide equidecomposability by comparing type vectors of the two
/// decompositions; agrees with Ehrhart equivalence in dimension <= 3.
pub fn equidecomposable_quick(p: &PolytopeV, q: &PolytopeV) -> Result<bool, Error> {
    for body in [p, q] {
        if !body.is_lattice() {
            return Err(Error::NotLatticePolytope("vertices must be integral".into()));
        }
    }
    let da = halfuni::decompose_polytope(p)?;
    let db = halfuni::decompose_polytope(q)?;
    Ok(da.type_vector() == db.type_vector())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;

    fn intro_p() -> PolytopeV {
        PolytopeV::from_ints(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[1, 1, 3],
            &[2, 1, 3],
            &[1, 2, 3],
        ])
    }

    fn intro_p_prime() -> PolytopeV {
        PolytopeV::from_ints(&[
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[1, 1, 1],
            &[1, 0, -1],
        ])
    }

    #[test]
    fn certificate_roundtrip_intro_pair() {
        let p = intro_p();
        let q = intro_p_prime();
        let cert = equidecompose(&p, &q).unwrap();
        let report = verify_certificate(&p, &q, &cert, &[1, 2]);
        assert!(report.passed, "{:?}", report.checks);
    }

    #[test]
    fn self_certificate() {
        let p = PolytopeV::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let cert = equidecompose(&p, &p).unwrap();
        let report = verify_certificate(&p, &p, &cert, &[1, 2]);
        assert!(report.passed);
    }

    #[test]
    fn volume_mismatch_rejected() {
        let tet = PolytopeV::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let cube = PolytopeV::from_ints(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ]);
        match equidecompose(&tet, &cube) {
            Err(Error::NotEhrhartEquivalent { .. }) => {}
            other => panic!("expected NotEhrhartEquivalent, got {other:?}"),
        }
    }

    #[test]
    fn quick_equivalences() {
        let tet = PolytopeV::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let image = {
            use rand::SeedableRng;
            let mut rng = rand::rngs::StdRng::seed_from_u64(5);
            let u = halfuni::random_unimodular_map(&mut rng, 3);
            tet.transformed(&u)
        };
        assert!(equidecomposable_quick(&tet, &image).unwrap());
        let taller = PolytopeV::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]);
        assert!(!equidecomposable_quick(&tet, &taller).unwrap());
    }

    #[test]
    fn mutation_deleted_pair() {
        let p = intro_p();
        let q = intro_p_prime();
        let mut cert = equidecompose(&p, &q).unwrap();
        let i = cert.pairs.iter().position(|pr| pr.source.dim() == 3).unwrap();
        cert.pairs.remove(i);
        // the missing open tetrahedron first contains a grid point at scale
        // 8, so the audit needs that scale to notice; the volume check sees
        // the gap at any scale
        let report = verify_certificate(&p, &q, &cert, &[1, 8]);
        assert!(!report.passed);
        assert!(!report.check(4).passed && !report.check(5).passed);
    }

    #[test]
    fn mutation_deleted_low_dim_pair_caught_by_class_sums() {
        let p = intro_p();
        let q = intro_p_prime();
        let mut cert = equidecompose(&p, &q).unwrap();
        // a two-dimensional piece has no interior grid points at small
        // scales, so the volume and audit checks stay green and the class
        // quasipolynomial sum is what has to reject it
        let i = cert.pairs.iter().position(|pr| pr.source.dim() == 2).unwrap();
        cert.pairs.remove(i);
        let report = verify_certificate(&p, &q, &cert, &[1, 2]);
        assert!(!report.passed);
        assert!(!report.check(6).passed);
    }

    #[test]
    fn mutation_half_translation() {
        let p = intro_p();
        let q = intro_p_prime();
        let mut cert = equidecompose(&p, &q).unwrap();
        cert.pairs[0].map.translation[0] += arith::rat(1, 2);
        let report = verify_certificate(&p, &q, &cert, &[1]);
        assert!(!report.check(1).passed);
    }

    #[test]
    fn mutation_bad_matrix() {
        let p = intro_p();
        let q = intro_p_prime();
        let mut cert = equidecompose(&p, &q).unwrap();
        for x in cert.pairs[0].map.linear[0].iter_mut() {
            *x *= arith::rat_int(2); // doubles the determinant
        }
        let report = verify_certificate(&p, &q, &cert, &[1]);
        assert!(!report.check(1).passed);
    }

    #[test]
    fn mutation_mismatched_piece() {
        let p = intro_p();
        let q = intro_p_prime();
        let mut cert = equidecompose(&p, &q).unwrap();
        let far = Simplex::from_ints(&[&[9, 9, 9]]);
        let n = cert.pairs.len();
        cert.pairs[n - 1].target = far;
        let report = verify_certificate(&p, &q, &cert, &[1]);
        assert!(!report.check(2).passed);
    }
}
