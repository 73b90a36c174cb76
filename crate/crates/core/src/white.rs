//! Width-one structure of empty tetrahedra.
//!
//! Every empty lattice tetrahedron of determinant q is unimodularly
//! equivalent to the normal form conv{(0,0,0), (1,0,0), (0,0,1), (p,q,1)}
//! with gcd(p,q) = 1, and two forms (p,q), (p',q) are equivalent exactly
//! when p' = +-p^{+-1} mod q. This module computes the width-one direction,
//! an explicit map onto the normal form, and the canonical class
//! representative of p.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, complete_to_basis, inv_mod, Int, IntMat, Rat, UnimodularMap};
use crate::error::Error;
use crate::geom::{self, Mode, Simplex};

/// The normal form tetrahedron conv{(0,0,0), (1,0,0), (0,0,1), (p,q,1)}.
pub fn white_tetrahedron(p: i64, q: i64) -> Simplex {
    Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[p, q, 1]])
}

#[derive(Clone, Debug)]
pub struct WhiteForm {
    pub p: Int,
    pub q: Int,
    /// map(T) has vertex set {(0,0,0), (1,0,0), (0,0,1), (p,q,1)}
    pub map: UnimodularMap,
    /// min of {+-p^{+-1} mod q}; the class invariant
    pub p_canonical: Int,
}

fn integral_vertices(t: &Simplex) -> Result<Vec<Vec<Int>>, Error> {
    t.vertices()
        .iter()
        .map(|v| v.to_int_vec().ok_or_else(|| Error::NotEmpty("vertices must be integral".into())))
        .collect()
}

/// Compress the tetrahedron unimodularly before scanning, so that emptiness
/// checks stay cheap for skewed inputs.
fn reduced_copy(t: &Simplex) -> (Simplex, UnimodularMap) {
    let verts = integral_vertices(t).expect("integral vertices");
    let edges: Vec<Vec<Int>> = verts[1..]
        .iter()
        .map(|v| v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect())
        .collect();
    let e = IntMat::from_cols(3, edges);
    let (_, v) = arith::col_hnf(&e.transpose());
    let u = v.transpose();
    let mut tr = u.mul_vec(&verts[0]);
    for x in &mut tr {
        *x = -&*x;
    }
    let map = UnimodularMap::new(u, tr);
    (t.transformed(&map), map)
}

/// Emptiness of a lattice tetrahedron, checked on a unimodularly reduced
/// copy to keep the bounding box small.
pub fn is_empty_tetrahedron(t: &Simplex) -> Result<bool, Error> {
    if t.dim() != 3 || t.ambient_dim() != 3 {
        return Err(Error::NotEmpty("expected a full-dimensional tetrahedron in Z^3".into()));
    }
    integral_vertices(t)?;
    let (r, _) = reduced_copy(t);
    Ok(geom::lattice_points(r.vertices(), 1, Mode::Closed).len() == 4)
}

fn ensure_empty(t: &Simplex) -> Result<(), Error> {
    if !is_empty_tetrahedron(t)? {
        return Err(Error::NotEmpty("tetrahedron contains extra lattice points".into()));
    }
    Ok(())
}

/// Primitive integer functional taking exactly two values c, c+1 on the
/// vertices, two vertices on each level.
pub fn width_one_direction(t: &Simplex) -> Result<Vec<Int>, Error> {
    ensure_empty(t)?;
    let verts = integral_vertices(t)?;
    let edges: Vec<Vec<Rat>> =
        t.vertices()[1..].iter().map(|v| v.sub(&t.vertices()[0])).collect();
    let rows: Vec<Vec<Rat>> = (0..3).map(|j| edges.iter().map(|e| e[j].clone()).collect()).collect();
    // w . (v_i - v_0) = s_i: solve the transposed system for each sign pattern
    let sys: Vec<Vec<Rat>> = (0..3).map(|i| (0..3).map(|j| rows[j][i].clone()).collect()).collect();
    let mut found: BTreeSet<Vec<Int>> = BTreeSet::new();
    for s0 in -1i64..=1 {
        for s1 in -1i64..=1 {
            for s2 in -1i64..=1 {
                let pattern = [s0, s1, s2];
                // levels {0, s_i} must be two values at distance one, two each
                let mut levels: Vec<i64> = vec![0];
                levels.extend_from_slice(&pattern);
                levels.sort();
                if !(levels[0] == levels[1] && levels[2] == levels[3] && levels[2] - levels[1] == 1)
                {
                    continue;
                }
                let rhs: Vec<Rat> = pattern.iter().map(|&s| arith::rat_int(s)).collect();
                let Some(w) = geom::rat_solve(&sys, &rhs) else { continue };
                if !w.iter().all(|x| x.is_integer()) {
                    continue;
                }
                let w: Vec<Int> = w.iter().map(|x| x.to_integer()).collect();
                // sign-normalize: first nonzero entry positive
                let wn = if w.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false)
                {
                    w.iter().map(|x| -x).collect()
                } else {
                    w.clone()
                };
                found.insert(wn);
            }
        }
    }
    let w = found
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoWidthOne("no width-one functional; not an empty tetrahedron?".into()))?;
    debug_assert!(arith::content(&w).is_one());
    debug_assert!({
        let vals: BTreeSet<Int> = verts.iter().map(|v| arith::dot(&w, v)).collect();
        vals.len() == 2
    });
    Ok(w)
}

/// Normal form of an empty tetrahedron: the pair (p, q), an explicit
/// unimodular map onto the normal form, and the canonical class
/// representative of p.
pub fn white_normal_form(t: &Simplex) -> Result<WhiteForm, Error> {
    let w = width_one_direction(t)?; // verifies emptiness

    // move the width direction to the third coordinate
    let c = complete_to_basis(&[w.clone()], 3)?;
    let m = IntMat::from_rows(&[c.col(1).to_vec(), c.col(2).to_vec(), c.col(0).to_vec()]);
    let mut map = UnimodularMap::new(m, vec![Int::zero(); 3]);
    let mut cur = t.transformed(&map);

    // the level of the lexicographically smallest vertex becomes level zero
    let vs = integral_vertices(&cur)?;
    let lexmin = vs.iter().min().unwrap();
    let zmin = vs.iter().map(|v| v[2].clone()).min().unwrap();
    let step = if lexmin[2] == zmin {
        UnimodularMap::translation_only(vec![Int::zero(), Int::zero(), -zmin])
    } else {
        let flip = IntMat::from_rows_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        UnimodularMap::new(flip, vec![Int::zero(), Int::zero(), &zmin + 1])
    };
    map = step.compose(&map);
    cur = t.transformed(&map);

    // translate the lex-min bottom vertex to the origin
    let vs = integral_vertices(&cur)?;
    let bottom: Vec<&Vec<Int>> = vs.iter().filter(|v| v[2].is_zero()).collect();
    assert_eq!(bottom.len(), 2, "width-one split is two and two");
    let a = (*bottom.iter().min().unwrap()).clone();
    let step = UnimodularMap::translation_only(a.iter().map(|x| -x).collect());
    map = step.compose(&map);
    cur = t.transformed(&map);

    // send the bottom edge to (0,0,0)-(1,0,0) fixing the z-coordinate
    let vs = integral_vertices(&cur)?;
    let b = vs.iter().find(|v| v[2].is_zero() && !v.iter().all(|x| x.is_zero())).unwrap();
    let (g, x, y) = arith::ext_gcd(&b[0], &b[1]);
    assert!(g.is_one(), "bottom edge of an empty tetrahedron is primitive");
    let s2 = IntMat::from_rows(&[
        vec![x, y, Int::zero()],
        vec![-&b[1], b[0].clone(), Int::zero()],
        vec![Int::zero(), Int::zero(), Int::one()],
    ]);
    let step = UnimodularMap::new(s2, vec![Int::zero(); 3]);
    map = step.compose(&map);
    cur = t.transformed(&map);

    // shear the lex-min top vertex to (0,0,1)
    let vs = integral_vertices(&cur)?;
    let top: Vec<&Vec<Int>> = vs.iter().filter(|v| v[2].is_one()).collect();
    assert_eq!(top.len(), 2);
    let c0 = (*top.iter().min().unwrap()).clone();
    let shear = IntMat::from_rows(&[
        vec![Int::one(), Int::zero(), -&c0[0]],
        vec![Int::zero(), Int::one(), -&c0[1]],
        vec![Int::zero(), Int::zero(), Int::one()],
    ]);
    let step = UnimodularMap::new(shear, vec![Int::zero(); 3]);
    map = step.compose(&map);
    cur = t.transformed(&map);

    // the remaining top vertex is (p~, q~, 1); normalize q > 0, 0 <= p < q
    let vs = integral_vertices(&cur)?;
    let d = vs
        .iter()
        .find(|v| v[2].is_one() && !(v[0].is_zero() && v[1].is_zero()))
        .expect("second top vertex");
    if d[1].is_negative() {
        let flip = IntMat::from_rows_i64(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]]);
        let step = UnimodularMap::new(flip, vec![Int::zero(); 3]);
        map = step.compose(&map);
        cur = t.transformed(&map);
    }
    let vs = integral_vertices(&cur)?;
    let d = vs
        .iter()
        .find(|v| v[2].is_one() && !(v[0].is_zero() && v[1].is_zero()))
        .unwrap()
        .clone();
    let q = d[1].clone();
    let shift = -d[0].div_floor(&q);
    let shear = IntMat::from_rows(&[
        vec![Int::one(), shift, Int::zero()],
        vec![Int::zero(), Int::one(), Int::zero()],
        vec![Int::zero(), Int::zero(), Int::one()],
    ]);
    let step = UnimodularMap::new(shear, vec![Int::zero(); 3]);
    map = step.compose(&map);
    cur = t.transformed(&map);

    let vs = integral_vertices(&cur)?;
    let d = vs
        .iter()
        .find(|v| v[2].is_one() && !(v[0].is_zero() && v[1].is_zero()))
        .unwrap()
        .clone();
    let p = d[0].clone();

    // postconditions
    assert!(q.is_positive());
    assert!(p >= Int::zero() && p < q || (q.is_one() && p.is_zero()));
    assert!(p.gcd(&q).is_one());
    let expect: BTreeSet<Vec<Int>> = [
        arith::ivec(&[0, 0, 0]),
        arith::ivec(&[1, 0, 0]),
        arith::ivec(&[0, 0, 1]),
        vec![p.clone(), q.clone(), Int::one()],
    ]
    .into_iter()
    .collect();
    let image: BTreeSet<Vec<Int>> = vs.into_iter().collect();
    assert_eq!(image, expect, "normal-form postcondition");
    let vol = t.volume().expect("full-dimensional");
    assert_eq!(Rat::from_integer(q.clone()), vol * arith::rat_int(6), "q = 6 * volume");

    let p_canonical = canonical_p(&p, &q)?;
    Ok(WhiteForm { p, q, map, p_canonical })
}

/// min of {p, -p, p^{-1}, -p^{-1}} mod q; zero when q = 1.
pub fn canonical_p(p: &Int, q: &Int) -> Result<Int, Error> {
    if q.is_one() {
        return Ok(Int::zero());
    }
    if !p.gcd(q).is_one() {
        return Err(Error::NotCoprime(format!("gcd({p}, {q}) != 1")));
    }
    let pm = p.mod_floor(q);
    let pinv = inv_mod(&pm, q)?;
    let cands = [
        pm.clone(),
        (-&pm).mod_floor(q),
        pinv.clone(),
        (-&pinv).mod_floor(q),
    ];
    Ok(cands.into_iter().min().unwrap())
}

/// Coprime pairs (p, q) with 0 <= p < q <= qmax (p = 0 only for q = 1).
pub fn coprime_pairs(qmax: u64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for q in 1..=qmax as i64 {
        if q == 1 {
            out.push((0, 1));
            continue;
        }
        for p in 1..q {
            if arith::int(p).gcd(&arith::int(q)).is_one() {
                out.push((p, q));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn width_direction_examples() {
        let t = white_tetrahedron(7, 12);
        assert_eq!(width_one_direction(&t).unwrap(), arith::ivec(&[0, 0, 1]));

        let unit = Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let w = width_one_direction(&unit).unwrap();
        let vals: BTreeSet<Int> = unit
            .vertices()
            .iter()
            .map(|v| arith::dot(&w, &v.to_int_vec().unwrap()))
            .collect();
        assert_eq!(vals.len(), 2);

        let bad = Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 3]]);
        assert!(matches!(width_one_direction(&bad), Err(Error::NotEmpty(_))));
    }

    #[test]
    fn normal_form_of_normal_form() {
        let t = white_tetrahedron(7, 12);
        let wf = white_normal_form(&t).unwrap();
        assert_eq!(wf.q, arith::int(12));
        assert_eq!(wf.p_canonical, arith::int(5));
        assert!(wf.p == arith::int(7) || wf.p == arith::int(5));
    }

    #[test]
    fn unit_tetrahedron_q1() {
        let unit = Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let wf = white_normal_form(&unit).unwrap();
        assert_eq!(wf.q, arith::int(1));
        assert_eq!(wf.p, arith::int(0));
        assert_eq!(wf.p_canonical, arith::int(0));
    }

    #[test]
    fn canonical_p_examples() {
        assert_eq!(canonical_p(&arith::int(7), &arith::int(12)).unwrap(), arith::int(5));
        assert_eq!(canonical_p(&arith::int(2), &arith::int(5)).unwrap(), arith::int(2));
        assert_eq!(canonical_p(&arith::int(1), &arith::int(1)).unwrap(), arith::int(0));
        assert!(canonical_p(&arith::int(4), &arith::int(12)).is_err());
    }

    #[test]
    fn invariance_under_random_maps() {
        let mut rng = StdRng::seed_from_u64(11);
        for (p, q) in [(2i64, 5i64), (3, 7), (7, 12)] {
            let t = white_tetrahedron(p, q);
            let expect = canonical_p(&arith::int(p), &arith::int(q)).unwrap();
            for _ in 0..10 {
                let u = crate::halfuni::random_unimodular_map(&mut rng, 3);
                let wf = white_normal_form(&t.transformed(&u)).unwrap();
                assert_eq!(wf.q, arith::int(q));
                assert_eq!(wf.p_canonical, expect);
            }
        }
    }
}
