//! Ehrhart counting functions and quasipolynomials.
//!
//! Ground truth throughout is brute-force lattice-point counting; the closed
//! forms for the nine half-unimodular classes are validated against it, not
//! the other way around.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Int, Rat};
use crate::error::Error;
use crate::geom::{lattice_points_fs, FacetSystem, Mode, PointQ, PolytopeV, Simplex};

/// Quasipolynomial with period `period` and rational coefficient rows, one
/// row per residue class. Evaluation at k uses row k mod period. Canonical
/// form has minimal period and no trailing all-zero coefficient columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuasiPolynomial {
    pub period: u64,
    pub degree: usize,
    /// coeffs[r][i] is the coefficient of k^i on residue class r.
    pub coeffs: Vec<Vec<Rat>>,
}

impl QuasiPolynomial {
    pub fn new(period: u64, coeffs: Vec<Vec<Rat>>) -> Self {
        assert_eq!(coeffs.len(), period as usize);
        assert!(!coeffs.is_empty());
        let degree = coeffs[0].len().saturating_sub(1);
        assert!(coeffs.iter().all(|row| row.len() == degree + 1));
        QuasiPolynomial { period, degree, coeffs }.canonicalized()
    }

    pub fn zero() -> Self {
        QuasiPolynomial { period: 1, degree: 0, coeffs: vec![vec![Rat::zero()]] }
    }

    pub fn eval(&self, k: u64) -> Rat {
        let r = (k % self.period) as usize;
        let kq = arith::rat_int(k as i64);
        let mut acc = Rat::zero();
        for c in self.coeffs[r].iter().rev() {
            acc = acc * &kq + c;
        }
        acc
    }

    pub fn eval_int(&self, k: u64) -> Int {
        let v = self.eval(k);
        assert!(v.is_integer(), "quasipolynomial value at {k} is not an integer");
        v.to_integer()
    }

    /// Minimal-period form with trailing zero coefficient columns trimmed.
    pub fn canonicalized(&self) -> Self {
        let mut deg = 0;
        for row in &self.coeffs {
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    deg = deg.max(i);
                }
            }
        }
        let rows: Vec<Vec<Rat>> =
            self.coeffs.iter().map(|row| row[..=deg.min(row.len() - 1)].to_vec()).collect();
        let d = self.period;
        for cand in 1..=d {
            if d % cand != 0 {
                continue;
            }
            let ok = (0..d as usize).all(|r| rows[r] == rows[r % cand as usize]);
            if ok {
                return QuasiPolynomial {
                    period: cand,
                    degree: deg,
                    coeffs: rows[..cand as usize].to_vec(),
                };
            }
        }
        unreachable!("period divides itself");
    }

    pub fn add(&self, other: &QuasiPolynomial) -> QuasiPolynomial {
        let period = self.period.lcm(&other.period);
        let degree = self.degree.max(other.degree);
        let mut coeffs = Vec::with_capacity(period as usize);
        for r in 0..period {
            let a = &self.coeffs[(r % self.period) as usize];
            let b = &other.coeffs[(r % other.period) as usize];
            let mut row = vec![Rat::zero(); degree + 1];
            for (i, c) in a.iter().enumerate() {
                row[i] += c;
            }
            for (i, c) in b.iter().enumerate() {
                row[i] += c;
            }
            coeffs.push(row);
        }
        QuasiPolynomial::new(period, coeffs)
    }

    pub fn scaled(&self, f: &Int) -> QuasiPolynomial {
        let fr = Rat::from_integer(f.clone());
        QuasiPolynomial::new(
            self.period,
            self.coeffs.iter().map(|row| row.iter().map(|c| c * &fr).collect()).collect(),
        )
    }
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "period {}: ", self.period)?;
        for (r, row) in self.coeffs.iter().enumerate() {
            if r > 0 {
                write!(f, " | ")?;
            }
            let mut first = true;
            for (i, c) in row.iter().enumerate().rev() {
                if c.is_zero() && !(i == 0 && first) {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                match i {
                    0 => write!(f, "{c}")?,
                    1 => write!(f, "{c}*k")?,
                    _ => write!(f, "{c}*k^{i}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}

/// The nine half-unimodular classes in R^3. The letter encodes the lattice
/// content: `Lat` has exactly one lattice point, `Half` has none and a
/// lattice-free affine span, `Shifted` has none but a span containing
/// lattice points.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum SimplexType {
    #[serde(rename = "Delta_0^1")]
    PointLat,
    #[serde(rename = "Delta_1^1")]
    SegLat,
    #[serde(rename = "Delta_2^1")]
    TriLat,
    #[serde(rename = "Delta_3^1")]
    TetLat,
    #[serde(rename = "Delta_0^0")]
    PointHalf,
    #[serde(rename = "Delta_1^0")]
    SegHalf,
    #[serde(rename = "Delta_2^0")]
    TriHalf,
    #[serde(rename = "Delta'_2")]
    TriShifted,
    #[serde(rename = "Delta'_3")]
    TetShifted,
}

pub const ALL_TYPES: [SimplexType; 9] = [
    SimplexType::PointLat,
    SimplexType::SegLat,
    SimplexType::TriLat,
    SimplexType::TetLat,
    SimplexType::PointHalf,
    SimplexType::SegHalf,
    SimplexType::TriHalf,
    SimplexType::TriShifted,
    SimplexType::TetShifted,
];

/// The seven classes the decomposition pipeline produces.
pub const PIPELINE_TYPES: [SimplexType; 7] = [
    SimplexType::PointLat,
    SimplexType::SegLat,
    SimplexType::TriLat,
    SimplexType::TetLat,
    SimplexType::PointHalf,
    SimplexType::SegHalf,
    SimplexType::TriHalf,
];

impl SimplexType {
    pub fn label(&self) -> &'static str {
        match self {
            SimplexType::PointLat => "Delta_0^1",
            SimplexType::SegLat => "Delta_1^1",
            SimplexType::TriLat => "Delta_2^1",
            SimplexType::TetLat => "Delta_3^1",
            SimplexType::PointHalf => "Delta_0^0",
            SimplexType::SegHalf => "Delta_1^0",
            SimplexType::TriHalf => "Delta_2^0",
            SimplexType::TriShifted => "Delta'_2",
            SimplexType::TetShifted => "Delta'_3",
        }
    }

    pub fn from_label(s: &str) -> Option<SimplexType> {
        ALL_TYPES.iter().copied().find(|t| t.label() == s)
    }

    pub fn dim(&self) -> usize {
        match self {
            SimplexType::PointLat | SimplexType::PointHalf => 0,
            SimplexType::SegLat | SimplexType::SegHalf => 1,
            SimplexType::TriLat | SimplexType::TriHalf | SimplexType::TriShifted => 2,
            SimplexType::TetLat | SimplexType::TetShifted => 3,
        }
    }

    /// The canonical representative, ambient dimension 3.
    pub fn canonical_simplex(&self) -> Simplex {
        match self {
            SimplexType::PointLat => Simplex::from_halves(&[&[0, 0, 0]]),
            SimplexType::SegLat => Simplex::from_halves(&[&[0, 0, 0], &[1, 0, 0]]),
            SimplexType::TriLat => Simplex::from_halves(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]),
            SimplexType::TetLat => {
                Simplex::from_halves(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
            }
            SimplexType::PointHalf => Simplex::from_halves(&[&[1, 0, 0]]),
            SimplexType::SegHalf => Simplex::from_halves(&[&[1, 0, 0], &[0, 1, 0]]),
            SimplexType::TriHalf => Simplex::from_halves(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            SimplexType::TriShifted => Simplex::from_halves(&[&[1, 1, 0], &[2, 1, 0], &[1, 2, 0]]),
            SimplexType::TetShifted => {
                Simplex::from_halves(&[&[1, 1, 0], &[2, 1, 0], &[1, 2, 0], &[1, 1, 1]])
            }
        }
    }
}

impl fmt::Display for SimplexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Piece counts per class.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct TypeVector(pub BTreeMap<SimplexType, u64>);

impl TypeVector {
    pub fn count(&self, t: SimplexType) -> u64 {
        self.0.get(&t).copied().unwrap_or(0)
    }

    pub fn bump(&mut self, t: SimplexType) {
        *self.0.entry(t).or_insert(0) += 1;
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    /// Sum of the classes' interior Ehrhart quasipolynomials, weighted by
    /// the counts.
    pub fn quasipolynomial(&self) -> QuasiPolynomial {
        let mut acc = QuasiPolynomial::zero();
        for (t, n) in &self.0 {
            if *n > 0 {
                acc = acc.add(&closed_form(*t).scaled(&arith::int(*n as i64)));
            }
        }
        acc
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, n) in &self.0 {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", t.label(), n)?;
            first = false;
        }
        Ok(())
    }
}

/// |kB cap Z^d| (closed) or the same for the relative interior.
pub fn count(verts: &[PointQ], k: u64, mode: Mode) -> u64 {
    let fs = FacetSystem::of_points(verts).expect("valid body");
    count_with_fs(verts, &fs, k, mode)
}

/// Counting with a precomputed facet system of the undilated body.
pub fn count_with_fs(verts: &[PointQ], fs: &FacetSystem, k: u64, mode: Mode) -> u64 {
    let kk = arith::int(k as i64);
    let scaled_fs = FacetSystem {
        ambient_dim: fs.ambient_dim,
        dim: fs.dim,
        equalities: fs.equalities.iter().map(|(n, c)| (n.clone(), c * &kk)).collect(),
        inequalities: fs.inequalities.iter().map(|(n, c)| (n.clone(), c * &kk)).collect(),
    };
    let kr = arith::rat_int(k as i64);
    let scaled_verts: Vec<PointQ> = verts.iter().map(|v| v.scaled(&kr)).collect();
    crate::geom::count_lattice_points(&scaled_verts, &scaled_fs, 1, mode)
}

pub fn count_polytope(p: &PolytopeV, k: u64, mode: Mode) -> u64 {
    count(p.vertices(), k, mode)
}

pub fn count_simplex(s: &Simplex, k: u64, mode: Mode) -> u64 {
    count(s.vertices(), k, mode)
}

/// Least D >= 1 such that the D-th dilation is a lattice polytope.
pub fn denominator(p: &PolytopeV) -> Int {
    p.vertices().iter().fold(Int::one(), |acc, v| acc.lcm(&v.denominator()))
}

/// Fit the Ehrhart quasipolynomial of the body by exact Lagrange
/// interpolation on the window 1..=D(d+1) per residue class, validated on
/// the following window of the same size.
pub fn fit_quasipolynomial(p: &PolytopeV, mode: Mode) -> Result<QuasiPolynomial, Error> {
    let d_big = denominator(p);
    let period: u64 = d_big.to_u64().expect("desk-scale denominator");
    let dim = p.dim();
    let fs = p.facet_system()?;
    let window = period * (dim as u64 + 1);
    let counts: Vec<u64> =
        (1..=2 * window).map(|k| count_with_fs(p.vertices(), &fs, k, mode)).collect();
    let mut coeffs = Vec::with_capacity(period as usize);
    for r in 0..period {
        let ks: Vec<u64> = (1..=window).filter(|k| k % period == r).collect();
        assert_eq!(ks.len(), dim + 1);
        let pts: Vec<(Rat, Rat)> = ks
            .iter()
            .map(|&k| (arith::rat_int(k as i64), arith::rat_int(counts[(k - 1) as usize] as i64)))
            .collect();
        coeffs.push(lagrange(&pts, dim));
    }
    // rows are indexed by k mod period
    let qp = QuasiPolynomial {
        period,
        degree: dim,
        coeffs,
    };
    for k in window + 1..=2 * window {
        let expected = arith::rat_int(counts[(k - 1) as usize] as i64);
        if qp.eval(k) != expected {
            return Err(Error::FitMismatch(format!(
                "validation failed at k = {k}: fitted {} vs counted {expected}",
                qp.eval(k)
            )));
        }
    }
    Ok(qp.canonicalized())
}

fn lagrange(pts: &[(Rat, Rat)], degree: usize) -> Vec<Rat> {
    let n = pts.len();
    let mut acc = vec![Rat::zero(); degree + 1];
    for i in 0..n {
        // basis poly prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut poly = vec![Rat::one()];
        let mut denom = Rat::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            poly = poly_mul(&poly, &[-pts[j].0.clone(), Rat::one()]);
            denom *= &pts[i].0 - &pts[j].0;
        }
        let f = &pts[i].1 / denom;
        for (a, c) in acc.iter_mut().zip(&poly) {
            *a += c * &f;
        }
    }
    acc
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// binom(c + k/2, i) expanded as a polynomial in k.
fn binom_poly(c: &Rat, i: usize) -> Vec<Rat> {
    let mut poly = vec![Rat::one()];
    for j in 0..i {
        // (c - j + k/2)
        let lin = vec![c - arith::rat_int(j as i64), arith::rat(1, 2)];
        poly = poly_mul(&poly, &lin);
    }
    let fact: i64 = (1..=i as i64).product();
    let f = arith::rat(1, fact.max(1));
    poly.into_iter().map(|x| x * &f).collect()
}

/// Closed-form interior Ehrhart quasipolynomial of the class; equals the
/// brute-force count of the canonical representative's relative interior at
/// every k >= 1.
pub fn closed_form(t: SimplexType) -> QuasiPolynomial {
    let i = t.dim();
    let zero = vec![Rat::zero()];
    // even k = 2m: every class counts binom(m - 1, dim)
    let even = binom_poly(&arith::rat(-1, 1), i);
    let odd = match t {
        SimplexType::PointLat | SimplexType::SegLat | SimplexType::TriLat | SimplexType::TetLat => {
            // odd k = 2m - 1: binom(m - 1, dim)
            binom_poly(&arith::rat(-1, 2), i)
        }
        SimplexType::PointHalf | SimplexType::SegHalf | SimplexType::TriHalf => zero,
        // odd k = 2m - 1: binom(m, dim)
        SimplexType::TriShifted | SimplexType::TetShifted => binom_poly(&arith::rat(1, 2), i),
    };
    let width = even.len().max(odd.len()).max(1);
    let pad = |mut v: Vec<Rat>| {
        v.resize(width, Rat::zero());
        v
    };
    QuasiPolynomial::new(2, vec![pad(even), pad(odd)])
}

/// Identical canonical quasipolynomials?
pub fn ehrhart_equivalent(a: &PolytopeV, b: &PolytopeV) -> bool {
    let qa = fit_quasipolynomial(a, Mode::Closed).expect("fit is internally validated");
    let qb = fit_quasipolynomial(b, Mode::Closed).expect("fit is internally validated");
    qa == qb
}

pub const BASIS_ROW_TYPES: [SimplexType; 7] = [
    SimplexType::PointLat,
    SimplexType::PointHalf,
    SimplexType::SegLat,
    SimplexType::SegHalf,
    SimplexType::TriLat,
    SimplexType::TriHalf,
    SimplexType::TetLat,
];

/// Evaluations of the seven interior quasipolynomials at k = 1..7. Row r has
/// zeros before position r and a one there, so the matrix is unitriangular
/// and the seven quasipolynomials are linearly independent.
pub fn basis_evaluation_matrix() -> Vec<Vec<Int>> {
    BASIS_ROW_TYPES
        .iter()
        .map(|t| {
            let q = closed_form(*t);
            (1..=7).map(|k| q.eval_int(k)).collect()
        })
        .collect()
}

/// Counts of the points of (1/q)Z inside a rational 1-polytope, split by
/// orbit of the unimodular affine action on (1/q)Z / Z. The orbit of a/q is
/// {+-a mod q}; the key is min(a mod q, -a mod q), so 0 labels Z itself.
pub fn orbit_profile_1d(p: &PolytopeV, q: u64) -> BTreeMap<u64, u64> {
    assert_eq!(p.ambient_dim(), 1, "orbit profiles are one-dimensional");
    let pts = crate::geom::lattice_points(p.vertices(), q, Mode::Closed);
    let qi = arith::int(q as i64);
    let mut out = BTreeMap::new();
    for pt in pts {
        let m = (&pt.coords[0] * Rat::from_integer(qi.clone())).to_integer();
        let a = m.mod_floor(&qi);
        let b = (-&a).mod_floor(&qi);
        let label: u64 = a.min(b).to_u64().expect("residue fits");
        *out.entry(label).or_insert(0) += 1;
    }
    out
}

pub fn orbit_label(residue: u64, q: u64) -> String {
    if residue == 0 {
        "Z".to_string()
    } else {
        format!("{residue}/{q}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Mode;

    fn interval(a: (i64, i64), b: (i64, i64)) -> PolytopeV {
        PolytopeV::new(vec![
            PointQ::new(vec![arith::rat(a.0, a.1)]),
            PointQ::new(vec![arith::rat(b.0, b.1)]),
        ])
        .unwrap()
    }

    #[test]
    fn unit_interval_counts() {
        let q = interval((0, 1), (1, 1));
        for k in 1..=10 {
            assert_eq!(count_polytope(&q, k, Mode::Closed), k + 1);
        }
    }

    #[test]
    fn relint_counts_of_named_simplices() {
        let tri_half = SimplexType::TriHalf.canonical_simplex();
        assert_eq!(count_simplex(&tri_half, 6, Mode::Relint), 1);
        let tet_lat = SimplexType::TetLat.canonical_simplex();
        assert_eq!(count_simplex(&tet_lat, 8, Mode::Relint), 1);
    }

    #[test]
    fn denominators() {
        assert_eq!(denominator(&interval((1, 5), (6, 5))), arith::int(5));
        assert_eq!(denominator(&interval((0, 1), (3, 1))), arith::int(1));
        let half = PolytopeV::new(SimplexType::TriHalf.canonical_simplex().vertices().to_vec())
            .unwrap();
        assert_eq!(denominator(&half), arith::int(2));
    }

    #[test]
    fn fit_interval_one_fifth() {
        let q = interval((1, 5), (6, 5));
        let f = fit_quasipolynomial(&q, Mode::Closed).unwrap();
        assert_eq!(f.period, 5);
        assert_eq!(f.degree, 1);
        for r in 0..5usize {
            assert_eq!(f.coeffs[r][1], Rat::one());
            let c0 = if r == 0 { Rat::one() } else { Rat::zero() };
            assert_eq!(f.coeffs[r][0], c0);
        }
    }

    #[test]
    fn fit_unit_tetrahedron() {
        let t = PolytopeV::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let f = fit_quasipolynomial(&t, Mode::Closed).unwrap();
        assert_eq!(f.period, 1);
        // (k+1)(k+2)(k+3)/6 = 1 + 11k/6 + k^2 + k^3/6
        assert_eq!(
            f.coeffs[0],
            vec![arith::rat_int(1), arith::rat(11, 6), arith::rat_int(1), arith::rat(1, 6)]
        );
        for k in 1..=12u64 {
            assert_eq!(f.eval_int(k), arith::int(((k + 1) * (k + 2) * (k + 3) / 6) as i64));
        }
    }

    #[test]
    fn fit_relint_point_half() {
        let p = PolytopeV::new(SimplexType::PointHalf.canonical_simplex().vertices().to_vec())
            .unwrap();
        let f = fit_quasipolynomial(&p, Mode::Relint).unwrap();
        assert_eq!(f.period, 2);
        for k in 1..=8 {
            assert_eq!(f.eval_int(k), arith::int(if k % 2 == 0 { 1 } else { 0 }));
        }
    }

    #[test]
    fn closed_forms_match_counting() {
        for t in ALL_TYPES {
            let q = closed_form(t);
            let s = t.canonical_simplex();
            for k in 1..=12u64 {
                assert_eq!(
                    q.eval_int(k),
                    arith::int(count_simplex(&s, k, Mode::Relint) as i64),
                    "{} at k = {k}",
                    t.label()
                );
            }
        }
    }

    #[test]
    fn closed_form_spot_values() {
        assert_eq!(closed_form(SimplexType::SegLat).eval_int(3), arith::int(1));
        assert_eq!(closed_form(SimplexType::TriShifted).eval_int(3), arith::int(1));
        for k in [1u64, 3, 5, 7, 9, 11] {
            assert_eq!(closed_form(SimplexType::TriHalf).eval_int(k), arith::int(0));
        }
    }

    #[test]
    fn equivalences() {
        assert!(ehrhart_equivalent(&interval((1, 5), (6, 5)), &interval((2, 5), (7, 5))));
        assert!(!ehrhart_equivalent(&interval((0, 1), (1, 1)), &interval((1, 5), (6, 5))));
    }

    #[test]
    fn intro_pair_equivalent() {
        let p = PolytopeV::from_ints(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[1, 1, 3],
            &[2, 1, 3],
            &[1, 2, 3],
        ]);
        let pp = PolytopeV::from_ints(&[
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[1, 1, 1],
            &[1, 0, -1],
        ]);
        assert!(ehrhart_equivalent(&p, &pp));
    }

    #[test]
    fn evaluation_matrix_unitriangular() {
        let m = basis_evaluation_matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if j < i {
                    assert_eq!(*v, arith::int(0), "row {i} col {j}");
                } else if j == i {
                    assert_eq!(*v, arith::int(1), "diagonal at {i}");
                }
            }
        }
        assert_eq!(closed_form(SimplexType::TetLat).eval_int(8), arith::int(1));
    }

    #[test]
    fn orbit_profiles() {
        let q1 = interval((1, 5), (6, 5));
        let q2 = interval((2, 5), (7, 5));
        let p1 = orbit_profile_1d(&q1, 5);
        let p2 = orbit_profile_1d(&q2, 5);
        assert_eq!(p1, BTreeMap::from([(0, 1), (1, 3), (2, 2)]));
        assert_eq!(p2, BTreeMap::from([(0, 1), (1, 2), (2, 3)]));
        let u = interval((0, 1), (1, 1));
        assert_eq!(orbit_profile_1d(&u, 1), BTreeMap::from([(0, 2)]));
    }

    #[test]
    fn unimodular_invariance_of_counts() {
        use crate::arith::{IntMat, UnimodularMap};
        let t = PolytopeV::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[3, 5, 1]]);
        let u = UnimodularMap::new(
            IntMat::from_rows_i64(&[&[1, 1, 0], &[0, 1, 2], &[0, 0, 1]]),
            arith::ivec(&[-2, 1, 3]),
        );
        let tu = t.transformed(&u);
        for k in 1..=6 {
            assert_eq!(
                count_polytope(&t, k, Mode::Closed),
                count_polytope(&tu, k, Mode::Closed)
            );
            assert_eq!(
                count_polytope(&t, k, Mode::Relint),
                count_polytope(&tu, k, Mode::Relint)
            );
        }
    }
}
