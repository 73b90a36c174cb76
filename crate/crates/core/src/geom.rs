//! Exact polytope and simplex primitives in ambient dimension 1..=3.
//!
//! All bodies are described by rational vertex lists. Facet systems carry the
//! affine-span equations of lower-dimensional bodies explicitly, in cleared
//! integer form, so membership never touches floating point.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, kernel_basis, solve_int, Int, IntMat, Rat, UnimodularMap};
use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Closed,
    Relint,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PointQ {
    pub coords: Vec<Rat>,
}

impl PointQ {
    pub fn new(coords: Vec<Rat>) -> Self {
        let d = coords.len();
        assert!((1..=3).contains(&d), "ambient dimension must be 1..=3");
        PointQ { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        PointQ::new(coords.iter().map(|&c| arith::rat_int(c)).collect())
    }

    /// Point with coordinates coords/2.
    pub fn from_halves(coords: &[i64]) -> Self {
        PointQ::new(coords.iter().map(|&c| arith::rat(c, 2)).collect())
    }

    pub fn from_int_vec(coords: &[Int]) -> Self {
        PointQ::new(coords.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn to_int_vec(&self) -> Option<Vec<Int>> {
        self.is_integral().then(|| self.coords.iter().map(|c| c.to_integer()).collect())
    }

    pub fn sub(&self, other: &PointQ) -> Vec<Rat> {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect()
    }

    pub fn scaled(&self, k: &Rat) -> PointQ {
        PointQ::new(self.coords.iter().map(|c| c * k).collect())
    }

    /// lcm of coordinate denominators.
    pub fn denominator(&self) -> Int {
        self.coords.iter().fold(Int::one(), |l, c| l.lcm(c.denom()))
    }

    /// Pad with zero coordinates up to ambient dimension `d`.
    pub fn embedded(&self, d: usize) -> PointQ {
        assert!(d >= self.dim());
        let mut coords = self.coords.clone();
        coords.resize(d, Rat::zero());
        PointQ::new(coords)
    }
}

pub fn apply_map(map: &UnimodularMap, p: &PointQ) -> PointQ {
    PointQ::new(map.apply_rat(&p.coords))
}

/// Determinant of a small square rational matrix (rows), n <= 3.
pub fn rat_det(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    match n {
        0 => Rat::one(),
        1 => rows[0][0].clone(),
        2 => &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0],
        3 => {
            let m = |i: usize, j: usize| &rows[i][j];
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => panic!("rat_det not implemented for {n}x{n}"),
    }
}

/// Solve a square rational system rows * x = rhs by Gaussian elimination.
/// Returns None when the matrix is singular.
pub fn rat_solve(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = rows.len();
    let mut a: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            assert_eq!(r.len(), n);
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..=n {
                    let s = &a[col][j] * &f;
                    a[i][j] = &a[i][j] - &s;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Indices of a maximal linearly independent subset of `vecs`.
fn independent_subset(vecs: &[Vec<Rat>]) -> Vec<usize> {
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vecs.iter().enumerate() {
        let mut w = v.clone();
        // reduce against current echelon basis
        for b in &basis {
            let piv = b.iter().position(|x| !x.is_zero()).unwrap();
            if !w[piv].is_zero() {
                let f = &w[piv] / &b[piv];
                for j in 0..w.len() {
                    let s = &b[j] * &f;
                    w[j] = &w[j] - &s;
                }
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            basis.push(w);
            idx.push(i);
        }
    }
    idx
}

pub fn affine_rank(points: &[PointQ]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| p.sub(&points[0])).collect();
    independent_subset(&diffs).len()
}

/// Simplex given by an ordered, affinely independent vertex tuple.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Simplex {
    verts: Vec<PointQ>,
}

impl Simplex {
    pub fn new(verts: Vec<PointQ>) -> Result<Self, Error> {
        assert!(!verts.is_empty());
        let d = verts[0].dim();
        assert!(verts.iter().all(|v| v.dim() == d));
        if affine_rank(&verts) != verts.len() - 1 {
            return Err(Error::DegenerateInput(
                "simplex vertices are not affinely independent".into(),
            ));
        }
        Ok(Simplex { verts })
    }

    pub fn from_ints(verts: &[&[i64]]) -> Self {
        Simplex::new(verts.iter().map(|v| PointQ::from_ints(v)).collect()).unwrap()
    }

    pub fn from_halves(verts: &[&[i64]]) -> Self {
        Simplex::new(verts.iter().map(|v| PointQ::from_halves(v)).collect()).unwrap()
    }

    pub fn vertices(&self) -> &[PointQ] {
        &self.verts
    }

    pub fn dim(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.verts[0].dim()
    }

    /// Vertex set comparison, ignoring order.
    pub fn same_vertex_set(&self, other: &Simplex) -> bool {
        let mut a = self.verts.clone();
        let mut b = other.verts.clone();
        a.sort();
        b.sort();
        a == b
    }

    /// Vertices sorted, as a canonical key for deterministic orderings.
    pub fn sorted_key(&self) -> Vec<PointQ> {
        let mut a = self.verts.clone();
        a.sort();
        a
    }

    pub fn transformed(&self, map: &UnimodularMap) -> Simplex {
        Simplex::new(self.verts.iter().map(|v| apply_map(map, v)).collect())
            .expect("unimodular image of a simplex is a simplex")
    }

    pub fn translated_int(&self, t: &[Int]) -> Simplex {
        let map = UnimodularMap::translation_only(t.to_vec());
        self.transformed(&map)
    }

    pub fn scaled(&self, k: &Rat) -> Simplex {
        Simplex::new(self.verts.iter().map(|v| v.scaled(k)).collect()).expect("scaling keeps independence")
    }

    /// Exact barycentric coordinates of x, if x lies in the affine span.
    pub fn barycentric(&self, x: &PointQ) -> Option<Vec<Rat>> {
        // solve sum lambda_i v_i = x, sum lambda_i = 1
        let n = self.verts.len();
        let d = self.ambient_dim();
        // unknowns lambda_1.. relative to v_0: v_0 + sum_{i>=1} l_i (v_i - v_0) = x
        let diffs: Vec<Vec<Rat>> = self.verts[1..].iter().map(|v| v.sub(&self.verts[0])).collect();
        let target = x.sub(&self.verts[0]);
        // pick independent coordinate rows
        let rows_all: Vec<Vec<Rat>> = (0..d)
            .map(|j| diffs.iter().map(|dv| dv[j].clone()).collect::<Vec<_>>())
            .collect();
        let rows_idx = independent_subset(&rows_all);
        if rows_idx.len() != n - 1 {
            return None; // cannot happen for a valid simplex
        }
        let sys: Vec<Vec<Rat>> = rows_idx.iter().map(|&j| rows_all[j].clone()).collect();
        let rhs: Vec<Rat> = rows_idx.iter().map(|&j| target[j].clone()).collect();
        let lam = rat_solve(&sys, &rhs)?;
        // verify the solution on all coordinates (x must be in the span)
        for j in 0..d {
            let mut acc = Rat::zero();
            for (l, dv) in lam.iter().zip(&diffs) {
                acc += l * &dv[j];
            }
            if acc != target[j] {
                return None;
            }
        }
        let mut out = Vec::with_capacity(n);
        let l0 = Rat::one() - lam.iter().fold(Rat::zero(), |a, b| a + b);
        out.push(l0);
        out.extend(lam);
        Some(out)
    }

    /// Membership through barycentric coordinates; the independent second
    /// route next to the facet-system one.
    pub fn contains_barycentric(&self, x: &PointQ, mode: Mode) -> bool {
        match self.barycentric(x) {
            None => false,
            Some(lams) => match mode {
                Mode::Closed => lams.iter().all(|l| !l.is_negative()),
                Mode::Relint => lams.iter().all(|l| l.is_positive()),
            },
        }
    }

    /// Volume of a full-dimensional simplex: |det of edge vectors| / d!.
    pub fn volume(&self) -> Result<Rat, Error> {
        let d = self.ambient_dim();
        if self.dim() != d {
            return Err(Error::NotFullDim(format!(
                "simplex of dimension {} in ambient dimension {}",
                self.dim(),
                d
            )));
        }
        let rows: Vec<Vec<Rat>> = self.verts[1..].iter().map(|v| v.sub(&self.verts[0])).collect();
        let factorial: i64 = (1..=d as i64).product();
        Ok(rat_det(&rows).abs() / arith::rat_int(factorial))
    }

    pub fn facet_system(&self) -> Result<FacetSystem, Error> {
        let fs = FacetSystem::of_points(&self.verts)?;
        if fs.dim != self.dim() {
            return Err(Error::DegenerateInput("claimed dimension mismatches rank".into()));
        }
        Ok(fs)
    }

    pub fn contains(&self, x: &PointQ, mode: Mode) -> bool {
        self.facet_system().expect("valid simplex").contains(x, mode)
    }
}

/// Rational polytope as an irredundant vertex list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolytopeV {
    verts: Vec<PointQ>,
    dim: usize,
}

impl PolytopeV {
    /// Hull of the given generators; reduces to the extreme points.
    pub fn new(generators: Vec<PointQ>) -> Result<Self, Error> {
        if generators.is_empty() {
            return Err(Error::DegenerateInput("empty generator list".into()));
        }
        let d = generators[0].dim();
        if generators.iter().any(|p| p.dim() != d) {
            return Err(Error::DegenerateInput("mixed ambient dimensions".into()));
        }
        let mut pts = generators;
        pts.sort();
        pts.dedup();
        // drop points lying in the hull of the others
        loop {
            let mut removed = false;
            for i in 0..pts.len() {
                let rest: Vec<PointQ> =
                    pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
                if !rest.is_empty() && point_in_hull(&rest, &pts[i]) {
                    pts.remove(i);
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
        }
        let dim = affine_rank(&pts);
        Ok(PolytopeV { verts: pts, dim })
    }

    pub fn from_ints(verts: &[&[i64]]) -> Self {
        PolytopeV::new(verts.iter().map(|v| PointQ::from_ints(v)).collect()).unwrap()
    }

    pub fn vertices(&self) -> &[PointQ] {
        &self.verts
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.verts[0].dim()
    }

    pub fn is_lattice(&self) -> bool {
        self.verts.iter().all(|v| v.is_integral())
    }

    pub fn facet_system(&self) -> Result<FacetSystem, Error> {
        FacetSystem::of_points(&self.verts)
    }

    pub fn scaled(&self, k: &Rat) -> PolytopeV {
        PolytopeV { verts: self.verts.iter().map(|v| v.scaled(k)).collect(), dim: self.dim }
    }

    pub fn transformed(&self, map: &UnimodularMap) -> PolytopeV {
        PolytopeV { verts: self.verts.iter().map(|v| apply_map(map, v)).collect(), dim: self.dim }
    }

    pub fn embedded(&self, d: usize) -> PolytopeV {
        PolytopeV { verts: self.verts.iter().map(|v| v.embedded(d)).collect(), dim: self.dim }
    }
}

impl From<&Simplex> for PolytopeV {
    fn from(s: &Simplex) -> PolytopeV {
        PolytopeV { verts: s.vertices().to_vec(), dim: s.dim() }
    }
}

/// Caratheodory-style exact hull membership: x lies in conv(pts) iff it lies
/// in a simplex spanned by affinely independent points of `pts`.
pub fn point_in_hull(pts: &[PointQ], x: &PointQ) -> bool {
    let r = affine_rank(pts);
    if pts.iter().any(|p| p == x) {
        return true;
    }
    subsets_of_size(pts.len(), r + 1).any(|idx| {
        let verts: Vec<PointQ> = idx.iter().map(|&i| pts[i].clone()).collect();
        match Simplex::new(verts) {
            Ok(s) => s.contains_barycentric(x, Mode::Closed),
            Err(_) => false,
        }
    })
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(k)
}

/// Exact H-description: affine-span equations plus facet inequalities, all in
/// cleared integer form. A point belongs to the closed body iff it satisfies
/// every equation n.x = c and every inequality n.x <= c.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FacetSystem {
    pub ambient_dim: usize,
    pub dim: usize,
    /// pairs (n, c) meaning n.x = c
    pub equalities: Vec<(Vec<Int>, Int)>,
    /// pairs (n, c) meaning n.x <= c
    pub inequalities: Vec<(Vec<Int>, Int)>,
}

impl FacetSystem {
    pub fn of_points(points: &[PointQ]) -> Result<FacetSystem, Error> {
        if points.is_empty() {
            return Err(Error::DegenerateInput("no points".into()));
        }
        let d = points[0].dim();
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let v0 = pts[0].clone();
        let diffs: Vec<Vec<Rat>> = pts.iter().map(|p| p.sub(&v0)).collect();
        let basis_idx = independent_subset(&diffs);
        let r = basis_idx.len();

        // span equations: integer kernel of the direction matrix
        let mut equalities = Vec::new();
        if r < d {
            let dir_cols: Vec<Vec<Int>> = basis_idx
                .iter()
                .map(|&i| clear_denominators(&diffs[i]))
                .collect();
            // normals n with n . dir = 0 for all span directions
            let dirs_t = IntMat::from_cols(d, dir_cols).transpose();
            for n in kernel_basis(&dirs_t) {
                let n = arith::primitive_signed(&n);
                let c: Rat = n
                    .iter()
                    .zip(&v0.coords)
                    .map(|(ni, x)| Rat::from_integer(ni.clone()) * x)
                    .sum();
                let den = c.denom().clone();
                let nn: Vec<Int> = n.iter().map(|x| x * &den).collect();
                let (nn, cc) = reduce_equation(nn, c.numer().clone());
                equalities.push((nn, cc));
            }
        }

        // facet inequalities, computed in span coordinates
        let mut inequalities = Vec::new();
        if r > 0 {
            let bas: Vec<Vec<Rat>> = basis_idx.iter().map(|&i| diffs[i].clone()).collect();
            // choose r independent coordinate rows of the basis matrix
            let coord_rows: Vec<Vec<Rat>> = (0..d)
                .map(|j| bas.iter().map(|b| b[j].clone()).collect())
                .collect();
            let rows_sel = independent_subset(&coord_rows);
            assert_eq!(rows_sel.len(), r);
            let sys: Vec<Vec<Rat>> = rows_sel.iter().map(|&j| coord_rows[j].clone()).collect();
            let span_coords = |p: &PointQ| -> Vec<Rat> {
                let dv = p.sub(&v0);
                let rhs: Vec<Rat> = rows_sel.iter().map(|&j| dv[j].clone()).collect();
                rat_solve(&sys, &rhs).expect("selected rows are independent")
            };
            let ys: Vec<Vec<Rat>> = pts.iter().map(|p| span_coords(p)).collect();

            let mut seen = std::collections::BTreeSet::new();
            for idx in subsets_of_size(pts.len(), r) {
                if let Some((m, c)) = hyperplane_through(&ys, &idx) {
                    // orient so that all points satisfy m.y <= c
                    let mut pos = false;
                    let mut neg = false;
                    for y in &ys {
                        let v: Rat = m.iter().zip(y).map(|(a, b)| a * b).sum::<Rat>() - &c;
                        if v.is_positive() {
                            pos = true;
                        }
                        if v.is_negative() {
                            neg = true;
                        }
                    }
                    if pos && neg {
                        continue; // cuts through the body: not a facet
                    }
                    let (m, c) = if pos {
                        (m.iter().map(|x| -x).collect::<Vec<Rat>>(), -c)
                    } else {
                        (m, c)
                    };
                    // pull back to ambient coordinates: y = L (x - v0) with
                    // L the inverse of the selected-row submatrix
                    let mut n_amb = vec![Rat::zero(); d];
                    // solve sys^T w = m; then n = sum w_j e_{rows_sel[j]}
                    let sys_t: Vec<Vec<Rat>> =
                        (0..r).map(|i| (0..r).map(|j| sys[j][i].clone()).collect()).collect();
                    let w = rat_solve(&sys_t, &m).expect("independent rows");
                    for (k, &j) in rows_sel.iter().enumerate() {
                        n_amb[j] = w[k].clone();
                    }
                    let c_amb: Rat = c
                        + n_amb
                            .iter()
                            .zip(&v0.coords)
                            .map(|(a, b)| a * b)
                            .sum::<Rat>();
                    let (n_int, c_int) = clear_inequality(&n_amb, &c_amb);
                    if seen.insert((n_int.clone(), c_int.clone())) {
                        inequalities.push((n_int, c_int));
                    }
                }
            }
        }

        Ok(FacetSystem { ambient_dim: d, dim: r, equalities, inequalities })
    }

    pub fn contains(&self, x: &PointQ, mode: Mode) -> bool {
        assert_eq!(x.dim(), self.ambient_dim);
        let eval = |n: &[Int], c: &Int| -> Rat {
            n.iter()
                .zip(&x.coords)
                .map(|(ni, xi)| Rat::from_integer(ni.clone()) * xi)
                .sum::<Rat>()
                - Rat::from_integer(c.clone())
        };
        for (n, c) in &self.equalities {
            if !eval(n, c).is_zero() {
                return false;
            }
        }
        for (n, c) in &self.inequalities {
            let v = eval(n, c);
            match mode {
                Mode::Closed => {
                    if v.is_positive() {
                        return false;
                    }
                }
                Mode::Relint => {
                    if !v.is_negative() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Membership of the point m/s, evaluated in integer arithmetic.
    pub fn contains_scaled(&self, m: &[Int], s: &Int, mode: Mode) -> bool {
        for (n, c) in &self.equalities {
            if arith::dot(n, m) != c * s {
                return false;
            }
        }
        for (n, c) in &self.inequalities {
            let lhs = arith::dot(n, m);
            let rhs = c * s;
            let ok = match mode {
                Mode::Closed => lhs <= rhs,
                Mode::Relint => lhs < rhs,
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

fn clear_denominators(v: &[Rat]) -> Vec<Int> {
    let den = v.iter().fold(Int::one(), |l, c| l.lcm(c.denom()));
    v.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect()
}

fn reduce_equation(mut n: Vec<Int>, mut c: Int) -> (Vec<Int>, Int) {
    let mut g = arith::content(&n).gcd(&c);
    if g.is_zero() {
        g = Int::one();
    }
    for x in &mut n {
        *x = &*x / &g;
    }
    c = &c / &g;
    // canonical sign: first nonzero coefficient positive
    if n.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false) {
        for x in &mut n {
            *x = -&*x;
        }
        c = -c;
    }
    (n, c)
}

/// Clear an inequality n.x <= c to primitive integer form without flipping
/// its direction.
fn clear_inequality(n: &[Rat], c: &Rat) -> (Vec<Int>, Int) {
    let mut den = c.denom().clone();
    for x in n {
        den = den.lcm(x.denom());
    }
    let mut ni: Vec<Int> = n.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
    let mut ci = (c * Rat::from_integer(den.clone())).to_integer();
    let mut g = arith::content(&ni).gcd(&ci);
    if g.is_zero() {
        g = Int::one();
    }
    for x in &mut ni {
        *x = &*x / &g;
    }
    ci = &ci / &g;
    (ni, ci)
}

/// Unique hyperplane through the selected points, as primitive (m, c) with
/// m.y = c, or None when the selection is degenerate.
fn hyperplane_through(ys: &[Vec<Rat>], idx: &[usize]) -> Option<(Vec<Rat>, Rat)> {
    let r = ys[0].len();
    assert_eq!(idx.len(), r);
    if r == 1 {
        return Some((vec![Rat::one()], ys[idx[0]][0].clone()));
    }
    // normal orthogonal to the in-plane differences
    let base = &ys[idx[0]];
    let diffs: Vec<Vec<Rat>> = idx[1..].iter().map(|&i| {
        ys[i].iter().zip(base).map(|(a, b)| a - b).collect()
    }).collect();
    if independent_subset(&diffs).len() != r - 1 {
        return None;
    }
    let m: Vec<Rat> = match r {
        2 => vec![-diffs[0][1].clone(), diffs[0][0].clone()],
        3 => {
            let a = &diffs[0];
            let b = &diffs[1];
            vec![
                &a[1] * &b[2] - &a[2] * &b[1],
                &a[2] * &b[0] - &a[0] * &b[2],
                &a[0] * &b[1] - &a[1] * &b[0],
            ]
        }
        _ => unreachable!(),
    };
    let c: Rat = m.iter().zip(base).map(|(a, b)| a * b).sum();
    Some((m, c))
}

/// All points of (1/s)Z^d inside the body given by `verts`, by exact
/// bounding-box scan plus containment.
pub fn lattice_points(verts: &[PointQ], scale: u64, mode: Mode) -> Vec<PointQ> {
    let fs = FacetSystem::of_points(verts).expect("valid body");
    lattice_points_fs(verts, &fs, scale, mode)
}

pub fn lattice_points_fs(verts: &[PointQ], fs: &FacetSystem, scale: u64, mode: Mode) -> Vec<PointQ> {
    let s = arith::int(scale as i64);
    let mut out = Vec::new();
    scan_lattice_points(verts, fs, scale, mode, |m| {
        out.push(PointQ::new(m.iter().map(|x| Rat::new(x.clone(), s.clone())).collect()));
    });
    out
}

/// Numerator vectors m of the grid points m/s in the body; the integer-only
/// variant behind counting and the partition audits.
pub fn lattice_points_scaled(
    verts: &[PointQ],
    fs: &FacetSystem,
    scale: u64,
    mode: Mode,
) -> Vec<Vec<Int>> {
    let mut out = Vec::new();
    scan_lattice_points(verts, fs, scale, mode, |m| out.push(m.to_vec()));
    out
}

pub fn count_lattice_points(verts: &[PointQ], fs: &FacetSystem, scale: u64, mode: Mode) -> u64 {
    let mut n = 0;
    scan_lattice_points(verts, fs, scale, mode, |_| n += 1);
    n
}

fn scan_lattice_points(
    verts: &[PointQ],
    fs: &FacetSystem,
    scale: u64,
    mode: Mode,
    mut visit: impl FnMut(&[Int]),
) {
    let d = verts[0].dim();
    let s = arith::int(scale as i64);
    let srat = Rat::from_integer(s.clone());
    let mut lo = vec![Int::zero(); d];
    let mut hi = vec![Int::zero(); d];
    for j in 0..d {
        let mut mn = &verts[0].coords[j] * &srat;
        let mut mx = mn.clone();
        for v in verts.iter().skip(1) {
            let x = &v.coords[j] * &srat;
            if x < mn {
                mn = x.clone();
            }
            if x > mx {
                mx = x;
            }
        }
        lo[j] = mn.ceil().to_integer();
        hi[j] = mx.floor().to_integer();
    }
    if (0..d).any(|j| lo[j] > hi[j]) {
        return;
    }
    let mut cursor: Vec<Int> = lo.clone();
    'scan: loop {
        if fs.contains_scaled(&cursor, &s, mode) {
            visit(&cursor);
        }
        // advance odometer
        for j in (0..d).rev() {
            if cursor[j] < hi[j] {
                cursor[j] += Int::one();
                for jj in j + 1..d {
                    cursor[jj] = lo[jj].clone();
                }
                continue 'scan;
            }
        }
        break;
    }
}

/// Does the affine span of the simplex contain a lattice point?
pub fn affine_span_has_lattice_point(s: &Simplex) -> bool {
    let fs = s.facet_system().expect("valid simplex");
    if fs.equalities.is_empty() {
        return true;
    }
    let rows: Vec<Vec<Int>> = fs.equalities.iter().map(|(n, _)| n.clone()).collect();
    let rhs: Vec<Int> = fs.equalities.iter().map(|(_, c)| c.clone()).collect();
    solve_int(&IntMat::from_rows(&rows), &rhs).is_some()
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin feasibility for strict/weak rational systems
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct LinCon {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    pub strict: bool,
}

/// Exact feasibility of { eq: a.x = b } union { con: a.x < b or a.x <= b }.
pub fn feasible(equalities: &[(Vec<Rat>, Rat)], cons: &[LinCon]) -> bool {
    let d = equalities
        .first()
        .map(|(a, _)| a.len())
        .or_else(|| cons.first().map(|c| c.coeffs.len()))
        .unwrap_or(0);
    let mut eqs: Vec<(Vec<Rat>, Rat)> = equalities.to_vec();
    let mut ineqs: Vec<LinCon> = cons.to_vec();

    // eliminate equalities by substitution
    while let Some(pos) = eqs.iter().position(|(a, _)| a.iter().any(|x| !x.is_zero())) {
        let (a, b) = eqs.remove(pos);
        let j = a.iter().position(|x| !x.is_zero()).unwrap();
        let aj = a[j].clone();
        let arow: Vec<Rat> = a.iter().map(|x| x / &aj).collect();
        let brow = &b / &aj;
        for (ea, eb) in &mut eqs {
            if !ea[j].is_zero() {
                let f = ea[j].clone();
                for (x, ax) in ea.iter_mut().zip(&arow) {
                    let s = ax * &f;
                    *x = &*x - &s;
                }
                let s = &brow * &f;
                *eb = &*eb - &s;
            }
        }
        for c in &mut ineqs {
            if !c.coeffs[j].is_zero() {
                let f = c.coeffs[j].clone();
                for (x, ax) in c.coeffs.iter_mut().zip(&arow) {
                    let s = ax * &f;
                    *x = &*x - &s;
                }
                let s = &brow * &f;
                c.rhs = &c.rhs - &s;
            }
        }
    }
    // remaining equalities are 0 = b
    if eqs.iter().any(|(_, b)| !b.is_zero()) {
        return false;
    }

    // Fourier-Motzkin on the inequalities
    for j in 0..d {
        let (with_var, rest): (Vec<LinCon>, Vec<LinCon>) =
            ineqs.into_iter().partition(|c| !c.coeffs[j].is_zero());
        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        for c in with_var {
            let aj = c.coeffs[j].clone();
            let coeffs: Vec<Rat> = c
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, x)| if k == j { Rat::zero() } else { x / &aj })
                .collect();
            let rhs = &c.rhs / &aj;
            if aj.is_positive() {
                // x_j <= rhs - coeffs.x
                uppers.push(LinCon { coeffs, rhs, strict: c.strict });
            } else {
                // x_j >= rhs - coeffs.x  (inequality flipped by negative division)
                lowers.push(LinCon { coeffs, rhs, strict: c.strict });
            }
        }
        let mut next = rest;
        for l in &lowers {
            for u in &uppers {
                // l-bound <= x_j <= u-bound: (u.rhs - u.coeffs.x) - (l.rhs - l.coeffs.x) >= 0
                let coeffs: Vec<Rat> =
                    u.coeffs.iter().zip(&l.coeffs).map(|(a, b)| a - b).collect();
                let rhs = &u.rhs - &l.rhs;
                next.push(LinCon { coeffs, rhs, strict: l.strict || u.strict });
            }
        }
        ineqs = next;
    }

    // only constant constraints remain: 0 (<|<=) rhs
    ineqs.iter().all(|c| {
        debug_assert!(c.coeffs.iter().all(|x| x.is_zero()));
        if c.strict {
            c.rhs.is_positive()
        } else {
            !c.rhs.is_negative()
        }
    })
}

/// Relative-interior system of a simplex as rational constraints.
pub fn relint_system(s: &Simplex) -> (Vec<(Vec<Rat>, Rat)>, Vec<LinCon>) {
    relint_system_fs(&s.facet_system().expect("valid simplex"))
}

/// Relative-interior constraints from a precomputed facet system.
pub fn relint_system_fs(fs: &FacetSystem) -> (Vec<(Vec<Rat>, Rat)>, Vec<LinCon>) {
    let eqs = fs
        .equalities
        .iter()
        .map(|(n, c)| {
            (
                n.iter().map(|x| Rat::from_integer(x.clone())).collect(),
                Rat::from_integer(c.clone()),
            )
        })
        .collect();
    let cons = fs
        .inequalities
        .iter()
        .map(|(n, c)| LinCon {
            coeffs: n.iter().map(|x| Rat::from_integer(x.clone())).collect(),
            rhs: Rat::from_integer(c.clone()),
            strict: true,
        })
        .collect();
    (eqs, cons)
}

/// Exact test: are the relative interiors of two simplices disjoint?
pub fn pieces_disjoint(a: &Simplex, b: &Simplex) -> bool {
    pieces_disjoint_fs(
        &a.facet_system().expect("valid simplex"),
        &b.facet_system().expect("valid simplex"),
    )
}

/// Disjointness from precomputed facet systems; the workhorse behind the
/// quadratic certification scans.
pub fn pieces_disjoint_fs(fa: &FacetSystem, fb: &FacetSystem) -> bool {
    let (ea, ca) = relint_system_fs(fa);
    let (eb, cb) = relint_system_fs(fb);
    let eqs: Vec<_> = ea.into_iter().chain(eb).collect();
    let cons: Vec<_> = ca.into_iter().chain(cb).collect();
    !feasible(&eqs, &cons)
}

/// Quick reject for disjointness scans: strictly separated bounding boxes.
pub fn boxes_strictly_separated(a: &Simplex, b: &Simplex) -> bool {
    let d = a.ambient_dim();
    for j in 0..d {
        let (mut amin, mut amax) = (a.vertices()[0].coords[j].clone(), a.vertices()[0].coords[j].clone());
        for v in a.vertices() {
            if v.coords[j] < amin {
                amin = v.coords[j].clone();
            }
            if v.coords[j] > amax {
                amax = v.coords[j].clone();
            }
        }
        let (mut bmin, mut bmax) = (b.vertices()[0].coords[j].clone(), b.vertices()[0].coords[j].clone());
        for v in b.vertices() {
            if v.coords[j] < bmin {
                bmin = v.coords[j].clone();
            }
            if v.coords[j] > bmax {
                bmax = v.coords[j].clone();
            }
        }
        if amax < bmin || bmax < amin {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ivec, rat, rat_int};

    fn unit_tetrahedron() -> Simplex {
        Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
    }

    #[test]
    fn facet_system_unit_tetrahedron() {
        let fs = unit_tetrahedron().facet_system().unwrap();
        assert!(fs.equalities.is_empty());
        assert_eq!(fs.inequalities.len(), 4);
        let mut ineqs = fs.inequalities.clone();
        ineqs.sort();
        assert!(ineqs.contains(&(ivec(&[-1, 0, 0]), int(0))));
        assert!(ineqs.contains(&(ivec(&[1, 1, 1]), int(1))));
    }

    #[test]
    fn facet_system_interval() {
        let seg = Simplex::new(vec![
            PointQ::new(vec![rat(1, 5)]),
            PointQ::new(vec![rat(6, 5)]),
        ])
        .unwrap();
        let fs = seg.facet_system().unwrap();
        let mut ineqs = fs.inequalities.clone();
        ineqs.sort();
        // 1 <= 5x <= 6 in cleared form
        assert_eq!(ineqs, vec![(ivec(&[-5]), int(-1)), (ivec(&[5]), int(6))]);
    }

    #[test]
    fn facet_system_shifted_triangle() {
        let tri = Simplex::from_halves(&[&[1, 1, 0], &[2, 1, 0], &[1, 2, 0]]);
        let fs = tri.facet_system().unwrap();
        assert_eq!(fs.equalities, vec![(ivec(&[0, 0, 1]), int(0))]);
        assert_eq!(fs.inequalities.len(), 3);
        // centroid of the triangle is interior
        let centroid = PointQ::new(vec![rat(2, 3), rat(2, 3), rat(0, 1)]);
        assert!(fs.contains(&centroid, Mode::Relint));
    }

    #[test]
    fn contains_examples() {
        let t = unit_tetrahedron();
        assert!(t.contains(&PointQ::new(vec![rat(1, 4), rat(1, 4), rat(1, 4)]), Mode::Relint));
        let boundary = PointQ::new(vec![rat(1, 2), rat(1, 2), rat_int(0)]);
        assert!(!t.contains(&boundary, Mode::Relint));
        assert!(t.contains(&boundary, Mode::Closed));

        // the midpoint of an edge of the shifted triangle is on the
        // boundary: one barycentric coordinate vanishes
        let tri = Simplex::from_halves(&[&[1, 1, 0], &[2, 1, 0], &[1, 2, 0]]);
        let x = PointQ::new(vec![rat(3, 4), rat(3, 4), rat_int(0)]);
        let bary = tri.barycentric(&x).unwrap();
        assert!(bary.iter().any(|l| l.is_zero()));
        assert!(!tri.contains(&x, Mode::Relint));
        assert!(tri.contains(&x, Mode::Closed));
        assert!(tri.contains(&PointQ::new(vec![rat(2, 3), rat(2, 3), rat_int(0)]), Mode::Relint));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(unit_tetrahedron().volume().unwrap(), rat(1, 6));
        let t712 = Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[7, 12, 1]]);
        assert_eq!(t712.volume().unwrap(), rat_int(2));
        let half = Simplex::from_halves(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(half.volume().unwrap(), rat(1, 48));
        let flat = Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert!(matches!(flat.volume(), Err(Error::NotFullDim(_))));
    }

    #[test]
    fn lattice_point_examples() {
        let t = unit_tetrahedron();
        assert_eq!(lattice_points(t.vertices(), 1, Mode::Closed).len(), 4);

        // half-integer points of the width-one normal form with q = 12:
        // 4 vertices + 6 edge midpoints + 11 interior parallelogram points
        let t712 = Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[7, 12, 1]]);
        assert_eq!(lattice_points(t712.vertices(), 2, Mode::Closed).len(), 21);

        let half_tri = Simplex::from_halves(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(lattice_points(half_tri.vertices(), 1, Mode::Closed).len(), 0);
    }

    #[test]
    fn two_membership_paths_agree() {
        let bodies = [
            unit_tetrahedron(),
            Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[2, 5, 1]]),
            Simplex::from_halves(&[&[1, 1, 0], &[2, 1, 0], &[1, 2, 0]]),
        ];
        for s in &bodies {
            for k in 1..=6i64 {
                let dilated = s.scaled(&rat_int(k));
                let fs = dilated.facet_system().unwrap();
                let pts = lattice_points(dilated.vertices(), 1, Mode::Closed);
                // facet-system route against the barycentric route on the
                // whole bounding box
                let bbox = lattice_points_fs(
                    dilated.vertices(),
                    &FacetSystem {
                        ambient_dim: fs.ambient_dim,
                        dim: fs.dim,
                        equalities: vec![],
                        inequalities: vec![],
                    },
                    1,
                    Mode::Closed,
                );
                let count_bary = bbox
                    .iter()
                    .filter(|x| dilated.contains_barycentric(x, Mode::Closed))
                    .count();
                assert_eq!(pts.len(), count_bary, "k = {k}");
                for x in &bbox {
                    assert_eq!(
                        fs.contains(x, Mode::Relint) || !fs.contains(x, Mode::Closed),
                        dilated.contains_barycentric(x, Mode::Relint)
                            || !dilated.contains_barycentric(x, Mode::Closed)
                    );
                }
            }
        }
    }

    #[test]
    fn span_lattice_points() {
        let shifted = Simplex::from_halves(&[&[1, 1, 0], &[2, 1, 0], &[1, 2, 0]]);
        assert!(affine_span_has_lattice_point(&shifted));
        let half_tri = Simplex::from_halves(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(!affine_span_has_lattice_point(&half_tri));
        let seg = Simplex::from_halves(&[&[1, 0, 0], &[0, 1, 0]]);
        assert!(!affine_span_has_lattice_point(&seg));
    }

    #[test]
    fn disjointness_examples() {
        let a = unit_tetrahedron();
        let b = Simplex::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert!(pieces_disjoint(&a, &b)); // shared facet only
        assert!(!pieces_disjoint(&a, &a));
        let c = Simplex::from_halves(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let d = c.translated_int(&ivec(&[1, 0, 0]));
        assert!(pieces_disjoint(&c, &d));
        // symmetry
        assert_eq!(pieces_disjoint(&a, &b), pieces_disjoint(&b, &a));
    }

    #[test]
    fn polytope_reduction() {
        // midpoint generators are dropped
        let p = PolytopeV::from_ints(&[&[0], &[1], &[2]]);
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.dim(), 1);
        let square = PolytopeV::from_ints(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]]);
        assert_eq!(square.vertices().len(), 4);
        assert_eq!(square.dim(), 2);
    }
}
