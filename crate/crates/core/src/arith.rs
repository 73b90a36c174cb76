//! Exact integer and rational arithmetic kernel.
//!
//! Everything downstream (geometry, counting, decomposition) is built on the
//! primitives here: arbitrary-precision integers, small integer matrices,
//! column-style Hermite normal form with its unimodular transform, completion
//! of saturated vector sets to lattice bases, and modular inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Int = BigInt;
pub type Rat = num_rational::BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(int(n), int(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

pub fn ivec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn cross(a: &[Int], b: &[Int]) -> Vec<Int> {
    assert_eq!(a.len(), 3);
    assert_eq!(b.len(), 3);
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// gcd of all entries; zero for the empty or all-zero vector.
pub fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divide out the content and fix the sign so the first nonzero entry is
/// positive. Returns the all-zero vector unchanged.
pub fn primitive_signed(v: &[Int]) -> Vec<Int> {
    let c = content(v);
    if c.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<Int> = v.iter().map(|x| x / &c).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut out {
                *x = -&*x;
            }
        }
    }
    out
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Solve n . z = m over the integers for primitive n (content 1).
pub fn solve_dot(n: &[Int], m: &Int) -> Vec<Int> {
    assert_eq!(content(n), Int::one(), "solve_dot requires a primitive vector");
    // fold pairwise: find z with n.z = 1, then scale by m
    let mut coeffs = vec![Int::zero(); n.len()];
    let mut g = n[0].clone();
    coeffs[0] = Int::one();
    for i in 1..n.len() {
        let (g2, x, y) = ext_gcd(&g, &n[i]);
        for c in coeffs.iter_mut().take(i) {
            *c = &*c * &x;
        }
        coeffs[i] = y;
        g = g2;
    }
    debug_assert!(g.abs().is_one());
    let scale = m * &g; // g is +-1
    coeffs.into_iter().map(|c| c * &scale).collect()
}

/// Inverse of `a` modulo `q`, in [1, q-1].
pub fn inv_mod(a: &Int, q: &Int) -> Result<Int, Error> {
    if *q < int(2) {
        return Err(Error::NotCoprime(format!("modulus {q} must be at least 2")));
    }
    let a_red = a.mod_floor(q);
    let (g, x, _) = ext_gcd(&a_red, q);
    if !g.is_one() {
        return Err(Error::NotCoprime(format!("{a} is not invertible modulo {q}")));
    }
    Ok(x.mod_floor(q))
}

/// Small integer matrix, column-major. Rows and columns both stay <= 3 in
/// this crate, apart from Hermite-form inputs which may be rectangular.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    nrows: usize,
    cols: Vec<Vec<Int>>,
}

impl IntMat {
    pub fn from_cols(nrows: usize, cols: Vec<Vec<Int>>) -> Self {
        for c in &cols {
            assert_eq!(c.len(), nrows);
        }
        IntMat { nrows, cols }
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Self {
        let nrows = rows.len();
        let ncols = if nrows == 0 { 0 } else { rows[0].len() };
        let cols = (0..ncols)
            .map(|j| rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        IntMat { nrows, cols }
    }

    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(&rows.iter().map(|r| ivec(r)).collect::<Vec<_>>())
    }

    pub fn identity(n: usize) -> Self {
        let cols = (0..n)
            .map(|j| (0..n).map(|i| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        IntMat { nrows: n, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn at(&self, i: usize, j: usize) -> &Int {
        &self.cols[j][i]
    }

    pub fn col(&self, j: usize) -> &[Int] {
        &self.cols[j]
    }

    pub fn set_col(&mut self, j: usize, v: Vec<Int>) {
        assert_eq!(v.len(), self.nrows);
        self.cols[j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        self.cols.iter().map(|c| c[i].clone()).collect()
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_cols(self.ncols(), (0..self.nrows).map(|i| self.row(i)).collect())
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.ncols(), other.nrows);
        let cols = (0..other.ncols()).map(|j| self.mul_vec(other.col(j))).collect();
        IntMat::from_cols(self.nrows, cols)
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.ncols());
        let mut out = vec![Int::zero(); self.nrows];
        for (c, vj) in self.cols.iter().zip(v) {
            if vj.is_zero() {
                continue;
            }
            for (o, ci) in out.iter_mut().zip(c) {
                *o += ci * vj;
            }
        }
        out
    }

    pub fn mul_vec_rat(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.ncols());
        let mut out = vec![Rat::zero(); self.nrows];
        for (c, vj) in self.cols.iter().zip(v) {
            for (o, ci) in out.iter_mut().zip(c) {
                *o += Rat::from_integer(ci.clone()) * vj;
            }
        }
        out
    }

    /// Exact determinant, square matrices of size up to 3.
    pub fn det(&self) -> Int {
        assert_eq!(self.nrows, self.ncols(), "determinant of non-square matrix");
        match self.nrows {
            0 => Int::one(),
            1 => self.at(0, 0).clone(),
            2 => self.at(0, 0) * self.at(1, 1) - self.at(1, 0) * self.at(0, 1),
            3 => {
                let m = |i: usize, j: usize| self.at(i, j);
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
            n => panic!("determinant not implemented for {n}x{n}"),
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.nrows == self.ncols() && self.det().abs().is_one()
    }

    /// Inverse of a matrix with determinant +-1, via the adjugate.
    pub fn inverse_unimodular(&self) -> IntMat {
        let d = self.det();
        assert!(d.abs().is_one(), "matrix is not unimodular");
        let n = self.nrows;
        let minor = |i: usize, j: usize| -> Int {
            let ri: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            let cj: Vec<usize> = (0..n).filter(|&k| k != j).collect();
            match n {
                1 => Int::one(),
                2 => self.at(ri[0], cj[0]).clone(),
                3 => {
                    self.at(ri[0], cj[0]) * self.at(ri[1], cj[1])
                        - self.at(ri[0], cj[1]) * self.at(ri[1], cj[0])
                }
                _ => panic!("inverse not implemented for {n}x{n}"),
            }
        };
        let cols = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        // adjugate: cofactor at (j, i)
                        let sign = if (i + j) % 2 == 0 { Int::one() } else { -Int::one() };
                        sign * minor(j, i) * &d // d = +-1 so dividing is multiplying
                    })
                    .collect()
            })
            .collect();
        IntMat::from_cols(n, cols)
    }
}

/// Element of GL(d,Z) semidirect Z^d: x -> linear * x + translation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnimodularMap {
    pub linear: IntMat,
    pub translation: Vec<Int>,
}

impl UnimodularMap {
    pub fn new(linear: IntMat, translation: Vec<Int>) -> Self {
        assert!(linear.is_unimodular(), "linear part must have determinant +-1");
        assert_eq!(linear.nrows(), translation.len());
        UnimodularMap { linear, translation }
    }

    pub fn identity(d: usize) -> Self {
        UnimodularMap::new(IntMat::identity(d), vec![Int::zero(); d])
    }

    pub fn translation_only(t: Vec<Int>) -> Self {
        UnimodularMap::new(IntMat::identity(t.len()), t)
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply_int(&self, v: &[Int]) -> Vec<Int> {
        let mut out = self.linear.mul_vec(v);
        for (o, t) in out.iter_mut().zip(&self.translation) {
            *o += t;
        }
        out
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = self.linear.mul_vec_rat(v);
        for (o, t) in out.iter_mut().zip(&self.translation) {
            *o += Rat::from_integer(t.clone());
        }
        out
    }

    /// self after `first`: (self . first)(x) = self(first(x)).
    pub fn compose(&self, first: &UnimodularMap) -> UnimodularMap {
        let linear = self.linear.mul(&first.linear);
        let mut translation = self.linear.mul_vec(&first.translation);
        for (t, s) in translation.iter_mut().zip(&self.translation) {
            *t += s;
        }
        UnimodularMap { linear, translation }
    }

    pub fn inverse(&self) -> UnimodularMap {
        let inv = self.linear.inverse_unimodular();
        let mut t = inv.mul_vec(&self.translation);
        for x in &mut t {
            *x = -&*x;
        }
        UnimodularMap { linear: inv, translation: t }
    }
}

/// Exposed form of the exact determinant.
pub fn det(m: &IntMat) -> Int {
    m.det()
}

/// Column-style Hermite normal form.
///
/// Returns (H, U) with m * U = H, U unimodular. H is in column echelon form:
/// pivot rows strictly increase across the nonzero columns, pivots are
/// positive, and in each pivot row the entries of earlier columns are reduced
/// into [0, pivot).
pub fn col_hnf(m: &IntMat) -> (IntMat, IntMat) {
    let mut h = m.clone();
    let mut u = IntMat::identity(m.ncols());
    let (nrows, ncols) = (h.nrows(), h.ncols());

    let col_sub = |h: &mut IntMat, u: &mut IntMat, dst: usize, src: usize, q: &Int| {
        // column dst -= q * column src
        for mat in [h, u] {
            let s: Vec<Int> = mat.col(src).to_vec();
            let d = mat.col(dst).to_vec();
            mat.set_col(dst, d.into_iter().zip(s).map(|(dv, sv)| dv - q * sv).collect());
        }
    };
    let col_neg = |h: &mut IntMat, u: &mut IntMat, j: usize| {
        for mat in [h, u] {
            let c: Vec<Int> = mat.col(j).iter().map(|x| -x).collect();
            mat.set_col(j, c);
        }
    };
    let col_swap = |h: &mut IntMat, u: &mut IntMat, a: usize, b: usize| {
        for mat in [h, u] {
            mat.cols.swap(a, b);
        }
    };

    let mut pivot_col = 0;
    for row in 0..nrows {
        if pivot_col == ncols {
            break;
        }
        // gcd-eliminate row entries in columns pivot_col.. down to one nonzero
        loop {
            let mut best: Option<usize> = None;
            for j in pivot_col..ncols {
                if !h.at(row, j).is_zero() {
                    best = match best {
                        None => Some(j),
                        Some(b) if h.at(row, j).abs() < h.at(row, b).abs() => Some(j),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            col_swap(&mut h, &mut u, pivot_col, b);
            let mut done = true;
            for j in pivot_col + 1..ncols {
                if !h.at(row, j).is_zero() {
                    let q = h.at(row, j).div_floor(h.at(row, pivot_col));
                    col_sub(&mut h, &mut u, j, pivot_col, &q);
                    if !h.at(row, j).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h.at(row, pivot_col).is_zero() {
            continue;
        }
        if h.at(row, pivot_col).is_negative() {
            col_neg(&mut h, &mut u, pivot_col);
        }
        // reduce earlier columns against the new pivot
        let p = h.at(row, pivot_col).clone();
        for j in 0..pivot_col {
            let q = h.at(row, j).div_floor(&p);
            if !q.is_zero() {
                col_sub(&mut h, &mut u, j, pivot_col, &q);
            }
        }
        pivot_col += 1;
    }
    debug_assert!(u.is_unimodular());
    debug_assert_eq!(m.mul(&u), h);
    (h, u)
}

/// Integer kernel of m: columns v with m * v = 0, as a lattice basis.
pub fn kernel_basis(m: &IntMat) -> Vec<Vec<Int>> {
    let (h, u) = col_hnf(m);
    (0..m.ncols())
        .filter(|&j| h.col(j).iter().all(|x| x.is_zero()))
        .map(|j| u.col(j).to_vec())
        .collect()
}

/// One integer solution of m * x = b, if any exists.
pub fn solve_int(m: &IntMat, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(b.len(), m.nrows());
    let (h, u) = col_hnf(m);
    let mut residual = b.to_vec();
    let mut y = vec![Int::zero(); m.ncols()];
    let mut col = 0;
    for row in 0..m.nrows() {
        if col < m.ncols() && !h.at(row, col).is_zero() {
            let p = h.at(row, col);
            let (q, r) = residual[row].div_rem(p);
            if !r.is_zero() {
                return None;
            }
            for i in 0..m.nrows() {
                residual[i] -= &q * h.at(i, col);
            }
            y[col] = q;
            col += 1;
        } else if !residual[row].is_zero() {
            return None;
        }
    }
    Some(u.mul_vec(&y))
}

/// Extend `vs` (independent, saturated) to a basis of Z^d. The returned
/// matrix is in GL(d,Z) and its leading columns are exactly `vs`.
pub fn complete_to_basis(vs: &[Vec<Int>], d: usize) -> Result<IntMat, Error> {
    let k = vs.len();
    assert!(k <= d);
    if k == 0 {
        return Ok(IntMat::identity(d));
    }
    for v in vs {
        assert_eq!(v.len(), d);
    }
    let m = IntMat::from_cols(d, vs.to_vec());
    // column-reduce the transpose: M^T V = [L | 0], then M = V^{-T} [L^T; 0]
    let (hl, v) = col_hnf(&m.transpose());
    let l = IntMat::from_cols(k, (0..k).map(|j| hl.col(j)[..k].to_vec()).collect());
    for j in k..hl.ncols() {
        if hl.col(j).iter().any(|x| !x.is_zero()) {
            return Err(Error::NotSaturated("vectors are not linearly independent".into()));
        }
    }
    // rows k.. of the nonzero columns must vanish for rank k
    if (0..k).any(|j| hl.col(j)[k..].iter().any(|x| !x.is_zero())) {
        // cannot happen: hl has k rows when m has k columns
        unreachable!();
    }
    if !l.det().abs().is_one() {
        return Err(Error::NotSaturated(
            "vectors do not span a saturated sublattice; no unimodular completion exists".into(),
        ));
    }
    // B = [[L^T, 0], [0, I]], G = V^{-T} B has |det| = 1 and leading columns vs
    let vinv_t = v.inverse_unimodular().transpose();
    let mut bcols: Vec<Vec<Int>> = Vec::with_capacity(d);
    for j in 0..k {
        let mut c = l.transpose().col(j).to_vec();
        c.resize(d, Int::zero());
        bcols.push(c);
    }
    for j in k..d {
        let mut c = vec![Int::zero(); d];
        c[j] = Int::one();
        bcols.push(c);
    }
    let g = vinv_t.mul(&IntMat::from_cols(d, bcols));
    debug_assert!(g.is_unimodular());
    for (j, vj) in vs.iter().enumerate() {
        debug_assert_eq!(g.col(j), &vj[..]);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn det_examples() {
        assert_eq!(IntMat::identity(3).det(), int(1));
        // edge-vector matrix of the width-one tetrahedron with parameters (3,5)
        let m = IntMat::from_rows_i64(&[&[1, 0, 0], &[0, 0, 1], &[3, 5, 1]]);
        assert_eq!(m.det(), int(-5));
        let s = IntMat::from_rows_i64(&[&[1, 0, 0], &[2, 0, 0], &[0, 0, 1]]);
        assert_eq!(s.det(), int(0));
    }

    #[test]
    fn hnf_identity_and_single_column() {
        let id = IntMat::identity(3);
        let (h, u) = col_hnf(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);

        let m = IntMat::from_cols(3, vec![ivec(&[2, 4, 6])]);
        let (h, u) = col_hnf(&m);
        assert_eq!(h.col(0), &ivec(&[2, 4, 6])[..]);
        assert_eq!(u, IntMat::identity(1));
    }

    #[test]
    fn hnf_two_columns() {
        let m = IntMat::from_cols(3, vec![ivec(&[1, 2, 0]), ivec(&[0, 0, 1])]);
        let (h, u) = col_hnf(&m);
        assert_eq!(m.mul(&u), h);
        assert!(u.is_unimodular());
        assert_eq!(h.at(0, 0), &int(1));
    }

    #[test]
    fn hnf_random_contract() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..200 {
            let nrows = rng.gen_range(1..=3);
            let ncols = rng.gen_range(1..=3);
            let cols: Vec<Vec<Int>> = (0..ncols)
                .map(|_| (0..nrows).map(|_| int(rng.gen_range(-9..=9))).collect())
                .collect();
            let m = IntMat::from_cols(nrows, cols);
            let (h, u) = col_hnf(&m);
            assert_eq!(m.mul(&u), h);
            assert!(u.det().abs().is_one());
        }
    }

    #[test]
    fn complete_to_basis_examples() {
        let g = complete_to_basis(&[ivec(&[1, 0, 0])], 3).unwrap();
        assert!(g.is_unimodular());
        assert_eq!(g.col(0), &ivec(&[1, 0, 0])[..]);

        let g = complete_to_basis(&[ivec(&[1, 2, 0])], 3).unwrap();
        assert!(g.det().abs().is_one());
        assert_eq!(g.col(0), &ivec(&[1, 2, 0])[..]);

        assert!(matches!(
            complete_to_basis(&[ivec(&[2, 0, 0])], 3),
            Err(Error::NotSaturated(_))
        ));
    }

    #[test]
    fn complete_to_basis_random() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut accepted = 0;
        for _ in 0..400 {
            let d = rng.gen_range(1..=3);
            let k = rng.gen_range(1..=d);
            let vs: Vec<Vec<Int>> =
                (0..k).map(|_| (0..d).map(|_| int(rng.gen_range(-4..=4))).collect()).collect();
            if let Ok(g) = complete_to_basis(&vs, d) {
                accepted += 1;
                assert!(g.det().abs().is_one());
                for (j, v) in vs.iter().enumerate() {
                    assert_eq!(g.col(j), &v[..]);
                }
            }
        }
        assert!(accepted > 50);
    }

    #[test]
    fn inv_mod_examples() {
        assert_eq!(inv_mod(&int(5), &int(12)).unwrap(), int(5));
        assert_eq!(inv_mod(&int(1), &int(7)).unwrap(), int(1));
        assert!(matches!(inv_mod(&int(4), &int(12)), Err(Error::NotCoprime(_))));
    }

    #[test]
    fn inv_mod_exhaustive_small() {
        for q in 2..=100i64 {
            for a in 1..q {
                if int(a).gcd(&int(q)).is_one() {
                    let r = inv_mod(&int(a), &int(q)).unwrap();
                    assert!(r >= int(1) && r < int(q));
                    assert_eq!((r * int(a)).mod_floor(&int(q)), int(1));
                }
            }
        }
    }

    #[test]
    fn solve_int_and_kernel() {
        let m = IntMat::from_rows_i64(&[&[2, 0, 1], &[0, 3, 0]]);
        let x = solve_int(&m, &ivec(&[5, 6])).unwrap();
        assert_eq!(m.mul_vec(&x), ivec(&[5, 6]));
        assert!(solve_int(&m, &ivec(&[5, 7])).is_none());
        for v in kernel_basis(&m) {
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn unimodular_map_compose_inverse() {
        let w = UnimodularMap::new(
            IntMat::from_rows_i64(&[&[1, 2, 0], &[0, 1, 0], &[0, 0, 1]]),
            ivec(&[3, -1, 0]),
        );
        let inv = w.inverse();
        let p = ivec(&[5, 7, -2]);
        assert_eq!(inv.apply_int(&w.apply_int(&p)), p);
        let c = w.compose(&inv);
        assert_eq!(c.apply_int(&p), p);
    }

    #[test]
    fn solve_dot_examples() {
        let n = ivec(&[3, 5, 7]);
        let z = solve_dot(&n, &int(4));
        assert_eq!(dot(&n, &z), int(4));
    }
}
