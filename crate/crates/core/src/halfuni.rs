//! Decomposition of lattice 3-polytopes into relatively open half-unimodular
//! simplices.
//!
//! A simplex is half-unimodular when its second dilation is a unimodular
//! lattice simplex; there are nine classes up to unimodular equivalence and
//! the pipeline here only ever produces seven of them. Full-dimensional
//! cells are handled through the width-one normal form: the two halves of
//! conv{(0,0,0),(1,0,0),(0,0,1),(p,q,1)} split by the plane z = 1/2 each get
//! a triangulation into 4q half-unimodular tetrahedra built from a zigzag of
//! midpoints of the middle parallelogram, ordered once by height and once by
//! the functional q*x1 - p*x2.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::arith::{self, complete_to_basis, cross, dot, inv_mod, Int, IntMat, Rat, UnimodularMap};
use crate::ehrhart::{self, SimplexType, TypeVector};
use crate::error::Error;
use crate::geom::{self, apply_map, Mode, PointQ, PolytopeV, Simplex};
use crate::triangulate::{self, normalize_low_dim_empty};
use crate::white::{self, white_tetrahedron};

/// The midpoints of the middle parallelogram of the width-one normal form,
/// listed twice: `a` ordered by the second coordinate, `b` ordered by the
/// functional q*x1 - p*x2. Both sequences share their endpoints and coincide
/// as sets.
#[derive(Clone, Debug)]
pub struct FundamentalPoints {
    pub a: Vec<PointQ>,
    pub b: Vec<PointQ>,
    pub p_prime: Int,
}

fn check_pq(p: i64, q: i64) -> Result<(), Error> {
    if q < 1 || p < 0 || (q > 1 && p >= q) || arith::int(p).gcd(&arith::int(q)) != Int::one() {
        return Err(Error::NotCoprime(format!(
            "(p, q) = ({p}, {q}) must satisfy 0 <= p < q and gcd(p, q) = 1"
        )));
    }
    Ok(())
}

pub fn fundamental_points(p: i64, q: i64) -> Result<FundamentalPoints, Error> {
    check_pq(p, q)?;
    let mut a = Vec::with_capacity(q as usize + 1);
    a.push(PointQ::from_halves(&[0, 0, 1]));
    for i in 1..q {
        let ceil = (i * p + q - 1).div_euclid(q);
        a.push(PointQ::from_halves(&[ceil, i, 1]));
    }
    a.push(PointQ::from_halves(&[p + 1, q, 1]));

    let p_prime = if q == 1 { Int::zero() } else { inv_mod(&arith::int(-p), &arith::int(q))? };
    let pp = p_prime.to_i64().expect("inverse fits");
    let mut b = Vec::with_capacity(q as usize + 1);
    b.push(PointQ::from_halves(&[0, 0, 1]));
    for j in 1..q {
        let y = (j * pp).rem_euclid(q);
        let num = j + y * p;
        assert_eq!(num % q, 0, "first coordinate of the functional-ordered point is integral");
        b.push(PointQ::from_halves(&[num / q, y, 1]));
    }
    b.push(PointQ::from_halves(&[p + 1, q, 1]));

    let fp = FundamentalPoints { a, b, p_prime };
    debug_assert_eq!(
        fp.a.iter().collect::<BTreeSet<_>>(),
        fp.b.iter().collect::<BTreeSet<_>>()
    );
    debug_assert!({
        // strictly increasing along b under f(x) = q*x1 - p*x2
        let f = |pt: &PointQ| {
            &pt.coords[0] * arith::rat_int(q) - &pt.coords[1] * arith::rat_int(p)
        };
        fp.b.windows(2).all(|w| f(&w[0]) < f(&w[1]))
    });
    Ok(fp)
}

/// Ear-clipping triangulation of a simple polygon lying in a plane z = const
/// whose vertices are exactly the half-integer points of the region. Returns
/// len - 2 positive-area triangles; zero-area ears are skipped.
pub fn triangulate_monotone_region(cycle: &[PointQ]) -> Result<Vec<Simplex>, Error> {
    let n = cycle.len();
    if n < 3 {
        return Err(Error::DegeneratePolygon("fewer than three vertices".into()));
    }
    let z = &cycle[0].coords[2];
    if cycle.iter().any(|p| &p.coords[2] != z) {
        return Err(Error::DegeneratePolygon("polygon is not planar in z".into()));
    }
    // doubled 2d integer coordinates
    let two = arith::rat_int(2);
    let uv: Vec<(Int, Int)> = cycle
        .iter()
        .map(|p| {
            let u = (&p.coords[0] * &two).to_integer();
            let v = (&p.coords[1] * &two).to_integer();
            if &p.coords[0] * &two != Rat::from_integer(u.clone()) {
                // non half-integral input
                return Err(Error::DegeneratePolygon("vertices must be half-integral".into()));
            }
            Ok((u, v))
        })
        .collect::<Result<_, _>>()?;

    let area2: Int = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            &uv[i].0 * &uv[j].1 - &uv[j].0 * &uv[i].1
        })
        .sum();
    if area2.is_zero() {
        return Err(Error::DegeneratePolygon("zero area".into()));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    if area2.is_negative() {
        idx.reverse();
    }

    let orient = |a: usize, b: usize, c: usize| -> Int {
        (&uv[b].0 - &uv[a].0) * (&uv[c].1 - &uv[a].1)
            - (&uv[c].0 - &uv[a].0) * (&uv[b].1 - &uv[a].1)
    };
    let in_closed_triangle = |a: usize, b: usize, c: usize, x: usize| -> bool {
        !orient(a, b, x).is_negative()
            && !orient(b, c, x).is_negative()
            && !orient(c, a, x).is_negative()
    };

    let mut tris = Vec::with_capacity(n - 2);
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (a, b, c) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            if !orient(a, b, c).is_positive() {
                continue; // reflex or zero-area ear
            }
            let blocked = idx
                .iter()
                .any(|&x| x != a && x != b && x != c && in_closed_triangle(a, b, c, x));
            if blocked {
                continue;
            }
            tris.push(Simplex::new(vec![
                cycle[a].clone(),
                cycle[b].clone(),
                cycle[c].clone(),
            ])?);
            idx.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(Error::DegeneratePolygon("no ear found; polygon is not simple".into()));
        }
    }
    let (a, b, c) = (idx[0], idx[1], idx[2]);
    if orient(a, b, c).is_zero() {
        return Err(Error::DegeneratePolygon("final triangle is degenerate".into()));
    }
    tris.push(Simplex::new(vec![cycle[a].clone(), cycle[b].clone(), cycle[c].clone()])?);
    Ok(tris)
}

fn cone(tri: &Simplex, apex: &PointQ) -> Simplex {
    let mut verts = tri.vertices().to_vec();
    verts.push(apex.clone());
    Simplex::new(verts).expect("apex off the triangle plane")
}

/// Triangulation of the lower half (z <= 1/2) of the normal-form
/// tetrahedron: 4q half-unimodular cells, each containing exactly one
/// integer point, a vertex.
pub fn decompose_t_minus(p: i64, q: i64) -> Result<Vec<Simplex>, Error> {
    let fp = fundamental_points(p, q)?;
    let corner_ad = PointQ::from_halves(&[p, q, 1]);
    let corner_bc = PointQ::from_halves(&[1, 0, 1]);
    let apex_a = PointQ::from_ints(&[0, 0, 0]);
    let apex_b = PointQ::from_ints(&[1, 0, 0]);
    let mid = PointQ::from_halves(&[1, 0, 0]);

    let mut cells = Vec::with_capacity(4 * q as usize);
    let mut cycle_l = fp.a.clone();
    cycle_l.push(corner_ad);
    for tri in triangulate_monotone_region(&cycle_l)? {
        cells.push(cone(&tri, &apex_a));
    }
    let mut cycle_r = fp.a.clone();
    cycle_r.push(corner_bc);
    for tri in triangulate_monotone_region(&cycle_r)? {
        cells.push(cone(&tri, &apex_b));
    }
    for w in fp.a.windows(2) {
        cells.push(
            Simplex::new(vec![apex_a.clone(), mid.clone(), w[0].clone(), w[1].clone()])
                .expect("positive-volume middle cell"),
        );
        cells.push(
            Simplex::new(vec![mid.clone(), apex_b.clone(), w[0].clone(), w[1].clone()])
                .expect("positive-volume middle cell"),
        );
    }
    assert_eq!(cells.len(), 4 * q as usize);
    Ok(cells)
}

/// Triangulation of the upper half (z >= 1/2): the mirror construction,
/// with the zigzag ordered by the functional q*x1 - p*x2 and the cones taken
/// from the two top vertices.
pub fn decompose_t_plus(p: i64, q: i64) -> Result<Vec<Simplex>, Error> {
    let fp = fundamental_points(p, q)?;
    let corner_ad = PointQ::from_halves(&[p, q, 1]);
    let corner_bc = PointQ::from_halves(&[1, 0, 1]);
    let apex_c = PointQ::from_ints(&[0, 0, 1]);
    let apex_d = PointQ::from_ints(&[p, q, 1]);
    let mid = PointQ::from_halves(&[p, q, 2]);

    let mut cells = Vec::with_capacity(4 * q as usize);
    let mut cycle_d = fp.b.clone();
    cycle_d.push(corner_bc);
    for tri in triangulate_monotone_region(&cycle_d)? {
        cells.push(cone(&tri, &apex_c));
    }
    let mut cycle_u = fp.b.clone();
    cycle_u.push(corner_ad);
    for tri in triangulate_monotone_region(&cycle_u)? {
        cells.push(cone(&tri, &apex_d));
    }
    for w in fp.b.windows(2) {
        cells.push(
            Simplex::new(vec![apex_c.clone(), mid.clone(), w[0].clone(), w[1].clone()])
                .expect("positive-volume middle cell"),
        );
        cells.push(
            Simplex::new(vec![mid.clone(), apex_d.clone(), w[0].clone(), w[1].clone()])
                .expect("positive-volume middle cell"),
        );
    }
    assert_eq!(cells.len(), 4 * q as usize);
    Ok(cells)
}

/// Is the doubled simplex a unimodular lattice simplex?
pub fn is_half_unimodular(s: &Simplex) -> bool {
    if s.ambient_dim() != 3 {
        return false;
    }
    let two = arith::rat_int(2);
    let doubled: Option<Vec<Vec<Int>>> = s
        .vertices()
        .iter()
        .map(|v| {
            let w: Vec<Rat> = v.coords.iter().map(|c| c * &two).collect();
            w.iter()
                .all(|c| c.is_integer())
                .then(|| w.iter().map(|c| c.to_integer()).collect())
        })
        .collect();
    let Some(doubled) = doubled else { return false };
    let edges: Vec<Vec<Int>> = doubled[1..]
        .iter()
        .map(|v| v.iter().zip(&doubled[0]).map(|(a, b)| a - b).collect())
        .collect();
    complete_to_basis(&edges, 3).is_ok()
}

/// One of the nine classes, decided by lattice content: a lattice point
/// present (then necessarily unique), else a lattice-free affine span, else
/// the shifted classes.
pub fn classify(s: &Simplex) -> Result<SimplexType, Error> {
    if !is_half_unimodular(s) {
        return Err(Error::NotHalfUnimodular(
            "doubled simplex is not a unimodular lattice simplex".into(),
        ));
    }
    let npts = geom::lattice_points(s.vertices(), 1, Mode::Closed).len();
    let t = match (s.dim(), npts) {
        (0, 1) => SimplexType::PointLat,
        (1, 1) => SimplexType::SegLat,
        (2, 1) => SimplexType::TriLat,
        (3, 1) => SimplexType::TetLat,
        (i, 0) => {
            if geom::affine_span_has_lattice_point(s) {
                match i {
                    2 => SimplexType::TriShifted,
                    3 => SimplexType::TetShifted,
                    _ => {
                        return Err(Error::NotHalfUnimodular(
                            "lattice-point-free low-dimensional simplex with a lattice span".into(),
                        ))
                    }
                }
            } else {
                match i {
                    0 => SimplexType::PointHalf,
                    1 => SimplexType::SegHalf,
                    2 => SimplexType::TriHalf,
                    _ => unreachable!("a full-dimensional span contains lattice points"),
                }
            }
        }
        _ => {
            return Err(Error::NotHalfUnimodular(
                "half-unimodular simplex with more than one lattice point".into(),
            ))
        }
    };
    Ok(t)
}

fn doubled_vertices(s: &Simplex) -> Vec<Vec<Int>> {
    let two = arith::rat_int(2);
    s.vertices()
        .iter()
        .map(|v| v.coords.iter().map(|c| (c * &two).to_integer()).collect())
        .collect()
}

fn mod2(v: &[Int]) -> Vec<Int> {
    v.iter().map(|x| x.mod_floor(&arith::int(2))).collect()
}

fn is_even(v: &[Int]) -> bool {
    v.iter().all(|x| x.is_even())
}

/// A vector congruent to `parity` mod 2 that extends `f1` to a saturated
/// pair. Requires parity not in {0, f1 mod 2}.
fn saturated_partner(f1: &[Int], parity: &[Int]) -> Option<Vec<Int>> {
    let g = complete_to_basis(&[f1.to_vec()], 3).ok()?;
    // coefficients c in {0,1}^3 with G c = parity (mod 2)
    let mut coeffs = None;
    'outer: for c0 in 0..2i64 {
        for c1 in 0..2i64 {
            for c2 in 0..2i64 {
                let c = arith::ivec(&[c0, c1, c2]);
                if mod2(&g.mul_vec(&c)) == *parity {
                    coeffs = Some(c);
                    break 'outer;
                }
            }
        }
    }
    let c = coeffs?;
    let (beta_p, gamma_p) = (c[1].clone(), c[2].clone());
    if beta_p.is_zero() && gamma_p.is_zero() {
        return None; // parity lies in the span of f1 mod 2
    }
    let (beta, gamma) = if beta_p.is_one() {
        (Int::one(), gamma_p)
    } else {
        (Int::zero(), Int::one())
    };
    let mut b = vec![Int::zero(); 3];
    for j in 0..3 {
        b[j] = &c[0] * g.at(j, 0) + &beta * g.at(j, 1) + &gamma * g.at(j, 2);
    }
    debug_assert_eq!(mod2(&b), *parity);
    debug_assert!(arith::content(&cross(f1, &b)).is_one());
    Some(b)
}

/// A vector b with n.b = 1 and b congruent to `parity` mod 2 (when given).
/// Requires n primitive, and n.parity odd when a parity is prescribed.
fn dual_partner(n: &[Int], parity: Option<&[Int]>) -> Option<Vec<Int>> {
    match parity {
        None => Some(arith::solve_dot(n, &Int::one())),
        Some(par) => {
            let t = dot(n, par);
            if t.is_even() {
                return None;
            }
            let target = Int::one();
            let z = arith::solve_dot(n, &((&target - &t) / arith::int(2)));
            let b: Vec<Int> = par.iter().zip(&z).map(|(p, zi)| p + zi * arith::int(2)).collect();
            debug_assert_eq!(dot(n, &b), target);
            debug_assert_eq!(mod2(&b), *par);
            Some(b)
        }
    }
}

/// W in GL(3,Z) with W E_j = F_j for all j and W u0 = w0 (mod 2), if one
/// exists for this vertex ordering.
fn linear_part_with_parity(
    es: &[Vec<Int>],
    fs: &[Vec<Int>],
    u0: &[Int],
    w0: &[Int],
) -> Option<IntMat> {
    let i = es.len();
    if i == 0 {
        let u_par = mod2(u0);
        let w_par = mod2(w0);
        if is_even(u0) {
            return is_even(w0).then(IntMat::identity3);
        }
        if is_even(w0) {
            return None;
        }
        let au = complete_to_basis(&[u_par.clone()], 3).ok()?;
        let bw = complete_to_basis(&[w_par.clone()], 3).ok()?;
        let w = bw.mul(&au.inverse_unimodular());
        return (mod2(&w.mul_vec(u0)) == w_par).then_some(w);
    }
    let a = complete_to_basis(es, 3).ok()?;
    let a_inv = a.inverse_unimodular();
    let y = a_inv.mul_vec(u0);
    // r = w0 - sum_j y_j F_j (mod 2)
    let mut r = w0.to_vec();
    for (j, f) in fs.iter().enumerate() {
        for (rk, fk) in r.iter_mut().zip(f) {
            *rk -= &y[j + 1 - 1] * fk;
        }
    }
    let r = mod2(&r);
    let finish = |cols: Vec<Vec<Int>>| -> Option<IntMat> {
        let b = IntMat::from_cols(3, cols);
        if !b.det().abs().is_one() {
            return None;
        }
        let w = b.mul(&a_inv);
        for (e, f) in es.iter().zip(fs) {
            if w.mul_vec(e) != *f {
                return None;
            }
        }
        (mod2(&w.mul_vec(u0)) == mod2(w0)).then_some(w)
    };
    match i {
        3 => finish(fs.to_vec()),
        2 => {
            let y3_odd = y[2].is_odd();
            if !y3_odd {
                if r.iter().any(|x| !x.is_zero()) {
                    return None;
                }
                let b = complete_to_basis(fs, 3).ok()?;
                finish((0..3).map(|j| b.col(j).to_vec()).collect())
            } else {
                let n = cross(&fs[0], &fs[1]);
                let b3 = dual_partner(&n, Some(&r))?;
                finish(vec![fs[0].clone(), fs[1].clone(), b3])
            }
        }
        1 => {
            let f1 = &fs[0];
            let f1_par = mod2(f1);
            let (y2_odd, y3_odd) = (y[1].is_odd(), y[2].is_odd());
            match (y2_odd, y3_odd) {
                (false, false) => {
                    if r.iter().any(|x| !x.is_zero()) {
                        return None;
                    }
                    let b = complete_to_basis(&[f1.clone()], 3).ok()?;
                    finish((0..3).map(|j| b.col(j).to_vec()).collect())
                }
                (true, false) | (false, true) => {
                    if r.iter().all(|x| x.is_zero()) || r == f1_par {
                        return None;
                    }
                    let b_fixed = saturated_partner(f1, &r)?;
                    let n = cross(f1, &b_fixed);
                    let b_free = dual_partner(&n, None)?;
                    let cols = if y2_odd {
                        vec![f1.clone(), b_fixed, b_free]
                    } else {
                        vec![f1.clone(), b_free, b_fixed]
                    };
                    finish(cols)
                }
                (true, true) => {
                    for c0 in 0..2i64 {
                        for c1 in 0..2i64 {
                            for c2 in 0..2i64 {
                                let b2p = arith::ivec(&[c0, c1, c2]);
                                if b2p.iter().all(|x| x.is_zero()) || b2p == f1_par {
                                    continue;
                                }
                                let b3p: Vec<Int> =
                                    r.iter().zip(&b2p).map(|(a, b)| (a + b).mod_floor(&arith::int(2))).collect();
                                let Some(b2) = saturated_partner(f1, &b2p) else { continue };
                                let n = cross(f1, &b2);
                                let Some(b3) = dual_partner(&n, Some(&b3p)) else { continue };
                                if let Some(w) = finish(vec![f1.clone(), b2, b3]) {
                                    return Some(w);
                                }
                            }
                        }
                    }
                    None
                }
            }
        }
        _ => unreachable!(),
    }
}

impl IntMat {
    fn identity3() -> IntMat {
        IntMat::identity(3)
    }
}

/// Unimodular map with integer translation sending the vertex set of `s`
/// onto the canonical representative of its class. The search runs over
/// vertex orderings and repairs the translation parity through the free
/// completion columns; the postcondition is re-checked before returning.
pub fn canonical_map(s: &Simplex, t: SimplexType) -> Result<UnimodularMap, Error> {
    if classify(s)? != t {
        return Err(Error::NoMapFound(format!(
            "simplex classifies as {}, not {}",
            classify(s)?.label(),
            t.label()
        )));
    }
    let target = t.canonical_simplex();
    let us = doubled_vertices(s);
    let ws = doubled_vertices(&target);
    let i = s.dim();
    let target_set: BTreeSet<PointQ> = target.vertices().iter().cloned().collect();

    for perm in (0..=i).permutations(i + 1) {
        let wp: Vec<&Vec<Int>> = perm.iter().map(|&j| &ws[j]).collect();
        let es: Vec<Vec<Int>> = us[1..]
            .iter()
            .map(|u| u.iter().zip(&us[0]).map(|(a, b)| a - b).collect())
            .collect();
        let fsv: Vec<Vec<Int>> = wp[1..]
            .iter()
            .map(|w| w.iter().zip(wp[0]).map(|(a, b)| a - b).collect())
            .collect();
        let Some(w) = linear_part_with_parity(&es, &fsv, &us[0], wp[0]) else {
            continue;
        };
        let wu0 = w.mul_vec(&us[0]);
        let tau2: Vec<Int> = wp[0].iter().zip(&wu0).map(|(a, b)| a - b).collect();
        if !is_even(&tau2) {
            continue;
        }
        let tau: Vec<Int> = tau2.iter().map(|x| x / arith::int(2)).collect();
        let map = UnimodularMap::new(w, tau);
        let image: BTreeSet<PointQ> =
            s.vertices().iter().map(|v| apply_map(&map, v)).collect();
        if image == target_set {
            return Ok(map);
        }
    }
    Err(Error::NoMapFound(format!(
        "no unimodular map onto the canonical {} representative",
        t.label()
    )))
}

/// A relatively open piece: the simplex (openness is contextual), its class,
/// and an eager map onto the class representative.
#[derive(Clone, Debug)]
pub struct OpenSimplexPiece {
    pub simplex: Simplex,
    pub stype: SimplexType,
    pub to_canonical: UnimodularMap,
}

impl OpenSimplexPiece {
    pub fn new(simplex: Simplex, stype: SimplexType, to_canonical: UnimodularMap) -> Self {
        debug_assert!({
            let img: BTreeSet<PointQ> =
                simplex.vertices().iter().map(|v| apply_map(&to_canonical, v)).collect();
            let want: BTreeSet<PointQ> =
                stype.canonical_simplex().vertices().iter().cloned().collect();
            img == want
        });
        OpenSimplexPiece { simplex, stype, to_canonical }
    }

    pub fn transformed(&self, map: &UnimodularMap) -> OpenSimplexPiece {
        OpenSimplexPiece {
            simplex: self.simplex.transformed(&map.inverse()),
            stype: self.stype,
            to_canonical: self.to_canonical.compose(map),
        }
    }
}

/// Deduplicated faces of a cell list, every vertex subset of every cell.
fn all_faces(cells: &[Simplex]) -> Vec<Simplex> {
    let mut seen: BTreeSet<Vec<PointQ>> = BTreeSet::new();
    let mut out = Vec::new();
    for c in cells {
        let n = c.vertices().len();
        for size in 1..=n {
            for f in c.vertices().iter().cloned().combinations(size) {
                let mut key = f.clone();
                key.sort();
                if seen.insert(key) {
                    out.push(Simplex::new(f).expect("face of a simplex"));
                }
            }
        }
    }
    out
}

fn on_plane(s: &Simplex, n: &[Int], c: &Int) -> bool {
    s.vertices().iter().all(|v| {
        n.iter()
            .zip(&v.coords)
            .map(|(a, b)| Rat::from_integer(a.clone()) * b)
            .sum::<Rat>()
            == Rat::from_integer(c.clone())
    })
}

/// The open pieces partitioning the interior of the normal-form tetrahedron:
/// faces of the lower complex interior to the lower half, faces of the upper
/// complex interior to the upper half, and faces of the upper complex inside
/// the open middle parallelogram. All 8q three-dimensional pieces have a
/// lattice vertex.
pub fn interior_open_decomposition(p: i64, q: i64) -> Result<Vec<OpenSimplexPiece>, Error> {
    check_pq(p, q)?;
    let t = white_tetrahedron(p, q);
    let fs_t = t.facet_system()?;
    // boundary hyperplanes of the two halves: the four facet planes plus the
    // splitting plane 2z = 1
    let mut half_planes: Vec<(Vec<Int>, Int)> =
        fs_t.inequalities.iter().map(|(n, c)| (n.clone(), c.clone())).collect();
    assert_eq!(half_planes.len(), 4);
    half_planes.push((arith::ivec(&[0, 0, 2]), Int::one()));
    // edge planes of the middle parallelogram within z = 1/2
    let quad_planes: Vec<(Vec<Int>, Int)> = vec![
        (arith::ivec(&[0, 1, 0]), Int::zero()),
        (arith::ivec(&[0, 2, 0]), arith::int(q)),
        (arith::ivec(&[q, -p, 0]), Int::zero()),
        (arith::ivec(&[2 * q, -2 * p, 0]), arith::int(q)),
    ];
    let z_plane = (arith::ivec(&[0, 0, 2]), Int::one());

    let cells_minus = decompose_t_minus(p, q)?;
    let cells_plus = decompose_t_plus(p, q)?;

    let mut picked: Vec<Simplex> = Vec::new();
    for f in all_faces(&cells_minus) {
        if !half_planes.iter().any(|(n, c)| on_plane(&f, n, c)) {
            picked.push(f);
        }
    }
    for f in all_faces(&cells_plus) {
        if !half_planes.iter().any(|(n, c)| on_plane(&f, n, c)) {
            picked.push(f);
        } else if on_plane(&f, &z_plane.0, &z_plane.1)
            && !quad_planes.iter().any(|(n, c)| on_plane(&f, n, c))
        {
            picked.push(f);
        }
    }

    let pieces: Vec<OpenSimplexPiece> = picked
        .into_iter()
        .map(|f| {
            let ty = classify(&f)?;
            let map = canonical_map(&f, ty)?;
            Ok(OpenSimplexPiece::new(f, ty, map))
        })
        .collect::<Result<_, Error>>()?;

    let three = pieces.iter().filter(|pc| pc.simplex.dim() == 3).count();
    assert_eq!(three, 8 * q as usize, "interior pieces of top dimension");
    assert!(
        pieces.iter().all(|pc| ehrhart::PIPELINE_TYPES.contains(&pc.stype)),
        "only the seven pipeline classes occur"
    );
    Ok(pieces)
}

/// Fixed subdivision of the open standard simplex of dimension 0, 1 or 2
/// into half-unimodular open pieces. The quadrilateral at the origin is
/// split by the diagonal to the far edge midpoint, which avoids the shifted
/// triangle class.
pub fn open_template(dim: usize) -> Vec<(Simplex, SimplexType)> {
    match dim {
        0 => vec![(Simplex::from_ints(&[&[0, 0, 0]]), SimplexType::PointLat)],
        1 => vec![
            (Simplex::from_halves(&[&[0, 0, 0], &[1, 0, 0]]), SimplexType::SegLat),
            (Simplex::from_halves(&[&[1, 0, 0]]), SimplexType::PointHalf),
            (Simplex::from_halves(&[&[1, 0, 0], &[2, 0, 0]]), SimplexType::SegLat),
        ],
        2 => vec![
            (Simplex::from_halves(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0]]), SimplexType::TriLat),
            (Simplex::from_halves(&[&[0, 0, 0], &[0, 1, 0], &[1, 1, 0]]), SimplexType::TriLat),
            (Simplex::from_halves(&[&[1, 0, 0], &[2, 0, 0], &[1, 1, 0]]), SimplexType::TriLat),
            (Simplex::from_halves(&[&[0, 1, 0], &[0, 2, 0], &[1, 1, 0]]), SimplexType::TriLat),
            (Simplex::from_halves(&[&[0, 0, 0], &[1, 1, 0]]), SimplexType::SegLat),
            (Simplex::from_halves(&[&[1, 0, 0], &[1, 1, 0]]), SimplexType::SegHalf),
            (Simplex::from_halves(&[&[0, 1, 0], &[1, 1, 0]]), SimplexType::SegHalf),
        ],
        _ => panic!("templates exist for dimensions 0..=2"),
    }
}

/// A decomposition of a lattice polytope into relatively open
/// half-unimodular pieces.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub pieces: Vec<OpenSimplexPiece>,
    pub source: PolytopeV,
}

impl Decomposition {
    pub fn type_vector(&self) -> TypeVector {
        let mut tv = TypeVector::default();
        for p in &self.pieces {
            tv.bump(p.stype);
        }
        tv
    }
}

/// Decompose a lattice polytope of dimension <= 3 into relatively open
/// half-unimodular pieces of the seven pipeline classes, each carrying its
/// canonical map.
pub fn decompose_polytope(p: &PolytopeV) -> Result<Decomposition, Error> {
    if !p.is_lattice() {
        return Err(Error::NotLatticePolytope("vertices must be integral".into()));
    }
    let p3 = if p.ambient_dim() < 3 { p.embedded(3) } else { p.clone() };
    let tri = triangulate::empty_triangulation(&p3)?;
    let faces = triangulate::open_face_partition(&tri);

    // canonical maps of the fixed template pieces, computed once
    let templates: Vec<Vec<OpenSimplexPiece>> = (0..=2)
        .map(|d| {
            open_template(d)
                .into_iter()
                .map(|(s, ty)| {
                    let m = canonical_map(&s, ty).expect("template pieces are canonical-mappable");
                    OpenSimplexPiece::new(s, ty, m)
                })
                .collect()
        })
        .collect();

    let mut inner_cache: BTreeMap<(Int, Int), Vec<OpenSimplexPiece>> = BTreeMap::new();
    let mut pieces = Vec::new();
    for (face, fdim) in faces {
        if fdim <= 2 {
            let u = normalize_low_dim_empty(&face)?;
            for tpl in &templates[fdim] {
                pieces.push(tpl.transformed(&u));
            }
        } else {
            let wf = white::white_normal_form(&face)?;
            let key = (wf.p.clone(), wf.q.clone());
            if !inner_cache.contains_key(&key) {
                let pq = (
                    wf.p.to_i64().expect("desk-scale determinant"),
                    wf.q.to_i64().expect("desk-scale determinant"),
                );
                inner_cache.insert(key.clone(), interior_open_decomposition(pq.0, pq.1)?);
            }
            for inner in &inner_cache[&key] {
                pieces.push(inner.transformed(&wf.map));
            }
        }
    }
    assert!(pieces.iter().all(|pc| ehrhart::PIPELINE_TYPES.contains(&pc.stype)));
    Ok(Decomposition { pieces, source: p3 })
}

/// Certify that the relative interiors of `pieces` partition the body
/// `source` taken with `mode`: exact pairwise disjointness, volume sum,
/// point audits at the given scales, and the Ehrhart identity.
pub fn certify_open_partition(
    pieces: &[OpenSimplexPiece],
    source: &PolytopeV,
    mode: Mode,
    scales: &[u64],
) -> Result<(), Error> {
    let piece_fs: Vec<geom::FacetSystem> = pieces
        .par_iter()
        .map(|pc| pc.simplex.facet_system().expect("valid piece"))
        .collect();

    // pairwise disjoint relative interiors
    let n = pieces.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let clash = pairs.par_iter().find_any(|(i, j)| {
        let (a, b) = (&pieces[*i].simplex, &pieces[*j].simplex);
        if geom::boxes_strictly_separated(a, b) {
            return false;
        }
        !geom::pieces_disjoint_fs(&piece_fs[*i], &piece_fs[*j])
    });
    if let Some((i, j)) = clash {
        return Err(Error::DegenerateInput(format!(
            "pieces {i} and {j} have intersecting relative interiors"
        )));
    }

    // volumes of the top-dimensional pieces
    let vol: Rat = pieces
        .iter()
        .filter(|pc| pc.simplex.dim() == 3)
        .map(|pc| pc.simplex.volume().expect("full-dimensional piece"))
        .sum();
    let source_vol = triangulate::polytope_volume(source);
    if vol != source_vol {
        return Err(Error::DegenerateInput(format!(
            "piece volumes sum to {vol}, expected {source_vol}"
        )));
    }
    for &s in scales {
        let pts = geom::lattice_points(source.vertices(), s, mode);
        let bad = pts.par_iter().find_any(|x| {
            let hits = piece_fs.iter().filter(|fs| fs.contains(x, Mode::Relint)).count();
            hits != 1
        });
        if let Some(x) = bad {
            let hits = piece_fs.iter().filter(|fs| fs.contains(x, Mode::Relint)).count();
            return Err(Error::DegenerateInput(format!(
                "point {:?} at scale {s} lies in {hits} pieces",
                x.coords
            )));
        }
    }

    // Ehrhart identity: the weighted interior quasipolynomials of the classes
    // sum to the counting quasipolynomial of the source
    let mut tv = TypeVector::default();
    for pc in pieces {
        tv.bump(pc.stype);
    }
    let lhs = tv.quasipolynomial();
    let rhs = ehrhart::fit_quasipolynomial(source, mode)?;
    if lhs != rhs {
        return Err(Error::DegenerateInput(format!(
            "type-vector quasipolynomial {lhs} differs from the fitted {rhs}"
        )));
    }
    Ok(())
}

impl Decomposition {
    pub fn certify(&self, scales: &[u64]) -> Result<(), Error> {
        certify_open_partition(&self.pieces, &self.source, Mode::Closed, scales)
    }
}

/// Random element of GL(d,Z) semidirect Z^d with small entries, as a product
/// of shears, swaps and sign flips.
pub fn random_unimodular_map<R: Rng>(rng: &mut R, d: usize) -> UnimodularMap {
    let mut m = IntMat::identity(d);
    for _ in 0..6 {
        let mut rows: Vec<Vec<Int>> = (0..d).map(|i| m.row(i)).collect();
        match rng.gen_range(0..3) {
            0 => {
                let i = rng.gen_range(0..d);
                let j = rng.gen_range(0..d);
                if i != j {
                    let f = arith::int(rng.gen_range(-2..=2));
                    let rj = rows[j].clone();
                    for (a, b) in rows[i].iter_mut().zip(&rj) {
                        *a += &f * b;
                    }
                }
            }
            1 => {
                let i = rng.gen_range(0..d);
                let j = rng.gen_range(0..d);
                rows.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..d);
                for a in rows[i].iter_mut() {
                    *a = -&*a;
                }
            }
        }
        m = IntMat::from_rows(&rows);
    }
    let t: Vec<Int> = (0..d).map(|_| arith::int(rng.gen_range(-4..=4))).collect();
    UnimodularMap::new(m, t)
}

/// Random lattice polytope: the hull of `npts` points drawn from the box
/// [0, hi]^3.
pub fn random_lattice_polytope<R: Rng>(rng: &mut R, npts: usize, hi: i64) -> PolytopeV {
    let pts: Vec<PointQ> = (0..npts)
        .map(|_| {
            PointQ::from_ints(&[
                rng.gen_range(0..=hi),
                rng.gen_range(0..=hi),
                rng.gen_range(0..=hi),
            ])
        })
        .collect();
    PolytopeV::new(pts).expect("nonempty point set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn fundamental_points_7_12() {
        let fp = fundamental_points(7, 12).unwrap();
        assert_eq!(fp.a.len(), 13);
        assert_eq!(fp.a[1], PointQ::from_halves(&[1, 1, 1]));
        assert_eq!(fp.p_prime, arith::int(5));
        assert_eq!(fp.b[1], PointQ::from_halves(&[3, 5, 1]));
        let sa: BTreeSet<_> = fp.a.iter().collect();
        let sb: BTreeSet<_> = fp.b.iter().collect();
        assert_eq!(sa, sb);
    }

    #[test]
    fn region_triangle_counts() {
        let fp = fundamental_points(7, 12).unwrap();
        let mut cycle = fp.a.clone();
        cycle.push(PointQ::from_halves(&[7, 12, 1]));
        let tris = triangulate_monotone_region(&cycle).unwrap();
        assert_eq!(tris.len(), 12);

        let quad = vec![
            PointQ::from_halves(&[0, 0, 1]),
            PointQ::from_halves(&[2, 0, 1]),
            PointQ::from_halves(&[2, 2, 1]),
            PointQ::from_halves(&[0, 2, 1]),
        ];
        assert_eq!(triangulate_monotone_region(&quad).unwrap().len(), 2);

        // three collinear consecutive vertices still yield n - 2 triangles
        let with_collinear = vec![
            PointQ::from_halves(&[0, 0, 1]),
            PointQ::from_halves(&[1, 0, 1]),
            PointQ::from_halves(&[2, 0, 1]),
            PointQ::from_halves(&[2, 2, 1]),
        ];
        assert_eq!(triangulate_monotone_region(&with_collinear).unwrap().len(), 2);
    }

    #[test]
    fn t_minus_counts_and_volumes() {
        for (p, q) in [(0i64, 1i64), (1, 2), (7, 12)] {
            let cells = decompose_t_minus(p, q).unwrap();
            assert_eq!(cells.len(), 4 * q as usize);
            let vol: Rat = cells.iter().map(|c| c.volume().unwrap()).sum();
            assert_eq!(vol, arith::rat(q, 12));
            for c in &cells {
                assert!(is_half_unimodular(c), "cell {c:?}");
                let pts = geom::lattice_points(c.vertices(), 1, Mode::Closed);
                assert_eq!(pts.len(), 1);
                assert!(c.vertices().contains(&pts[0]));
            }
        }
    }

    #[test]
    fn t_plus_counts_and_volumes() {
        for (p, q) in [(0i64, 1i64), (1, 2), (2, 5)] {
            let cells = decompose_t_plus(p, q).unwrap();
            assert_eq!(cells.len(), 4 * q as usize);
            let vol: Rat = cells.iter().map(|c| c.volume().unwrap()).sum();
            assert_eq!(vol, arith::rat(q, 12));
            for c in &cells {
                assert!(is_half_unimodular(c));
                let pts = geom::lattice_points(c.vertices(), 1, Mode::Closed);
                assert_eq!(pts.len(), 1);
                assert!(c.vertices().contains(&pts[0]));
            }
        }
    }

    #[test]
    fn classify_examples() {
        let shifted = Simplex::from_halves(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        assert_eq!(classify(&shifted).unwrap(), SimplexType::TriShifted);
        let pt = Simplex::from_halves(&[&[1, 1, 1]]);
        assert_eq!(classify(&pt).unwrap(), SimplexType::PointHalf);
        let tet = Simplex::from_halves(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(classify(&tet).unwrap(), SimplexType::TetLat);
        let not_half = Simplex::from_ints(&[&[0, 0, 0], &[2, 0, 0]]);
        assert!(classify(&not_half).is_err());
    }

    #[test]
    fn canonical_map_examples() {
        // the half point at (1/2,1/2,1/2) maps onto (1/2,0,0)
        let pt = Simplex::from_halves(&[&[1, 1, 1]]);
        let m = canonical_map(&pt, SimplexType::PointHalf).unwrap();
        assert_eq!(
            apply_map(&m, &PointQ::from_halves(&[1, 1, 1])),
            PointQ::from_halves(&[1, 0, 0])
        );

        // canonical representatives accept the identity (or any valid map)
        for t in ehrhart::ALL_TYPES {
            let s = t.canonical_simplex();
            let m = canonical_map(&s, t).unwrap();
            let img: BTreeSet<PointQ> =
                s.vertices().iter().map(|v| apply_map(&m, v)).collect();
            let want: BTreeSet<PointQ> = s.vertices().iter().cloned().collect();
            assert_eq!(img, want);
        }

        // a lattice translate needs only the translation repaired
        let moved = SimplexType::TetLat.canonical_simplex().translated_int(&arith::ivec(&[1, 1, 1]));
        let m = canonical_map(&moved, SimplexType::TetLat).unwrap();
        let img: BTreeSet<PointQ> =
            moved.vertices().iter().map(|v| apply_map(&m, v)).collect();
        let want: BTreeSet<PointQ> =
            SimplexType::TetLat.canonical_simplex().vertices().iter().cloned().collect();
        assert_eq!(img, want);
    }

    #[test]
    fn canonical_map_random_images() {
        let mut rng = StdRng::seed_from_u64(3);
        for t in ehrhart::ALL_TYPES {
            for _ in 0..8 {
                let u = random_unimodular_map(&mut rng, 3);
                let s = t.canonical_simplex().transformed(&u);
                assert_eq!(classify(&s).unwrap(), t, "type invariance for {}", t.label());
                let m = canonical_map(&s, t).unwrap();
                let img: BTreeSet<PointQ> =
                    s.vertices().iter().map(|v| apply_map(&m, v)).collect();
                let want: BTreeSet<PointQ> =
                    t.canonical_simplex().vertices().iter().cloned().collect();
                assert_eq!(img, want);
            }
        }
    }

    #[test]
    fn open_template_partitions() {
        for d in 0..=2usize {
            let tpl = open_template(d);
            let counts = tpl.len();
            match d {
                0 => assert_eq!(counts, 1),
                1 => assert_eq!(counts, 3),
                _ => assert_eq!(counts, 7),
            }
            for (s, ty) in &tpl {
                assert_eq!(classify(s).unwrap(), *ty);
            }
            // every half-grid point of the open standard simplex is covered
            // exactly once
            let std_simplex = match d {
                0 => Simplex::from_ints(&[&[0, 0, 0]]),
                1 => Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0]]),
                _ => Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]),
            };
            for s in [1u64, 2, 4] {
                for x in geom::lattice_points(std_simplex.vertices(), s, Mode::Relint) {
                    let hits = tpl
                        .iter()
                        .filter(|(f, _)| f.contains_barycentric(&x, Mode::Relint))
                        .count();
                    assert_eq!(hits, 1, "dim {d}, scale {s}, point {x:?}");
                }
            }
        }
    }

    #[test]
    fn interior_decomposition_small() {
        let pieces = interior_open_decomposition(2, 5).unwrap();
        let three = pieces.iter().filter(|pc| pc.simplex.dim() == 3).count();
        assert_eq!(three, 40);
        assert!(pieces.iter().all(|pc| pc.stype != SimplexType::TriShifted
            && pc.stype != SimplexType::TetShifted));

        let t = white_tetrahedron(2, 5);
        let source = PolytopeV::new(t.vertices().to_vec()).unwrap();
        certify_open_partition(&pieces, &source, Mode::Relint, &[1, 2]).unwrap();
    }

    #[test]
    fn interior_decomposition_unimodular_case() {
        let pieces = interior_open_decomposition(0, 1).unwrap();
        let mut tv = TypeVector::default();
        for pc in &pieces {
            tv.bump(pc.stype);
        }
        let qp = tv.quasipolynomial();
        // interior count of a unimodular tetrahedron is binom(k-1, 3)
        for k in 1..=10u64 {
            let expect = if k >= 4 { (k - 1) * (k - 2) * (k - 3) / 6 } else { 0 };
            assert_eq!(qp.eval_int(k), arith::int(expect as i64));
        }
    }

    #[test]
    fn decompose_unit_tetrahedron() {
        let p = PolytopeV::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let d = decompose_polytope(&p).unwrap();
        let tv = d.type_vector();
        assert_eq!(tv.count(SimplexType::TetLat), 8);
        let qp = tv.quasipolynomial();
        for k in 1..=10u64 {
            let expect = (k + 1) * (k + 2) * (k + 3) / 6;
            assert_eq!(qp.eval_int(k), arith::int(expect as i64));
        }
        d.certify(&[1, 2]).unwrap();
    }

    #[test]
    fn decompose_intro_polytope() {
        let pp = PolytopeV::from_ints(&[
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[1, 1, 1],
            &[1, 0, -1],
        ]);
        let d = decompose_polytope(&pp).unwrap();
        let tv = d.type_vector();
        let vol = triangulate::polytope_volume(&pp);
        assert_eq!(
            Rat::from_integer(arith::int(tv.count(SimplexType::TetLat) as i64)),
            vol * arith::rat_int(48)
        );
        let qp = tv.quasipolynomial();
        let fitted = ehrhart::fit_quasipolynomial(&d.source, Mode::Closed).unwrap();
        assert_eq!(qp, fitted);
    }
}
