//! Triangulation of lattice polytopes into empty simplices.
//!
//! Points are inserted in lexicographic order. A point outside the current
//! hull cones over the visible boundary facets; a point inside stellarly
//! subdivides its carrier face; a point outside the current affine span
//! cones over every cell. Since every lattice point of the polytope becomes
//! a vertex, all cells end up empty, which is re-verified per cell.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::arith::{complete_to_basis, Int, Rat, UnimodularMap};
use crate::error::Error;
use crate::geom::{self, lattice_points, Mode, PointQ, PolytopeV, Simplex};

/// Triangulation of a lattice polytope whose vertex set is all of its
/// lattice points, so that every cell is an empty simplex.
#[derive(Clone, Debug)]
pub struct EmptyTriangulation {
    pub points: Vec<PointQ>,
    /// top-dimensional cells as sorted index tuples into `points`
    pub cells: Vec<Vec<usize>>,
    pub dim: usize,
}

impl EmptyTriangulation {
    pub fn cell_simplex(&self, cell: &[usize]) -> Simplex {
        Simplex::new(cell.iter().map(|&i| self.points[i].clone()).collect())
            .expect("cells are simplices")
    }

    pub fn cell_simplices(&self) -> Vec<Simplex> {
        self.cells.iter().map(|c| self.cell_simplex(c)).collect()
    }
}

/// Core placing construction over an arbitrary finite point set.
pub fn placing_triangulation(points: &[PointQ]) -> (Vec<Vec<usize>>, usize) {
    assert!(!points.is_empty());
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]));

    let mut cells: Vec<Vec<usize>> = vec![vec![order[0]]];
    let mut active: Vec<usize> = vec![order[0]];
    let mut dim = 0usize;

    for &pi in order.iter().skip(1) {
        let p = &points[pi];
        let span_rank = {
            let mut pts: Vec<PointQ> = active.iter().map(|&i| points[i].clone()).collect();
            pts.push(p.clone());
            geom::affine_rank(&pts)
        };
        if span_rank > dim {
            // dimension jump: cone every cell to the new point
            for c in &mut cells {
                c.push(pi);
                c.sort();
            }
            dim = span_rank;
        } else {
            // carrier cells (closed containment)
            let mut containing: Vec<(usize, Vec<usize>)> = Vec::new();
            for (ci, c) in cells.iter().enumerate() {
                let s = Simplex::new(c.iter().map(|&i| points[i].clone()).collect())
                    .expect("valid cell");
                if let Some(lams) = s.barycentric(p) {
                    if lams.iter().all(|l| !l.is_negative()) {
                        let support: Vec<usize> = c
                            .iter()
                            .zip(&lams)
                            .filter(|(_, l)| l.is_positive())
                            .map(|(&v, _)| v)
                            .collect();
                        containing.push((ci, support));
                    }
                }
            }
            if containing.is_empty() {
                // outside the hull: cone over visible boundary facets
                let visible = visible_boundary_facets(points, &cells, p);
                assert!(!visible.is_empty(), "outside point sees at least one facet");
                for f in visible {
                    let mut c = f.clone();
                    c.push(pi);
                    c.sort();
                    cells.push(c);
                }
            } else {
                // stellar subdivision of the carrier face
                let mut new_cells = Vec::new();
                let mut drop = BTreeSet::new();
                for (ci, support) in &containing {
                    drop.insert(*ci);
                    for &v in support {
                        let mut c: Vec<usize> =
                            cells[*ci].iter().copied().filter(|&x| x != v).collect();
                        c.push(pi);
                        c.sort();
                        new_cells.push(c);
                    }
                }
                cells = cells
                    .into_iter()
                    .enumerate()
                    .filter(|(ci, _)| !drop.contains(ci))
                    .map(|(_, c)| c)
                    .collect();
                cells.extend(new_cells);
            }
        }
        active.push(pi);
    }
    cells.sort();
    cells.dedup();
    (cells, dim)
}

/// Boundary facets (faces used by exactly one cell) that the point strictly
/// sees from outside.
fn visible_boundary_facets(points: &[PointQ], cells: &[Vec<usize>], p: &PointQ) -> Vec<Vec<usize>> {
    let mut facet_owner: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for c in cells {
        for skip in 0..c.len() {
            let f: Vec<usize> =
                c.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
            facet_owner.entry(f).or_default().push(c[skip]);
        }
    }
    let mut out = Vec::new();
    for (f, owners) in facet_owner {
        if owners.len() != 1 {
            continue;
        }
        let fverts: Vec<PointQ> = f.iter().map(|&i| points[i].clone()).collect();
        let opposite = &points[owners[0]];
        if side_of_facet(&fverts, opposite, p) {
            out.push(f);
        }
    }
    out
}

/// True when `p` is strictly on the other side of the facet's hyperplane
/// (within the current span) from the reference point `inside`.
fn side_of_facet(fverts: &[PointQ], inside: &PointQ, p: &PointQ) -> bool {
    // the facet hyperplane within the span of fverts + inside
    let mut pts = fverts.to_vec();
    pts.push(inside.clone());
    let fs = geom::FacetSystem::of_points(&pts).expect("facet plus apex is a valid body");
    // find the inequality tight on all facet vertices and slack on `inside`
    for (n, c) in &fs.inequalities {
        let val = |x: &PointQ| -> Rat {
            n.iter().zip(&x.coords).map(|(a, b)| Rat::from_integer(a.clone()) * b).sum::<Rat>()
                - Rat::from_integer(c.clone())
        };
        if fverts.iter().all(|v| val(v).is_zero()) && val(inside).is_negative() {
            return val(p).is_positive();
        }
    }
    false
}

/// Triangulate a lattice polytope using all of its lattice points as
/// vertices; every cell is an empty simplex.
pub fn empty_triangulation(p: &PolytopeV) -> Result<EmptyTriangulation, Error> {
    if !p.is_lattice() {
        return Err(Error::NotLatticePolytope("vertices must be integral".into()));
    }
    let pts = lattice_points(p.vertices(), 1, Mode::Closed);
    let (cells, dim) = placing_triangulation(&pts);
    let tri = EmptyTriangulation { points: pts, cells, dim };
    debug_assert_eq!(tri.dim, p.dim());
    for c in &tri.cells {
        debug_assert!(cell_is_empty(&tri.cell_simplex(c)));
    }
    Ok(tri)
}

/// A lattice simplex is empty when its only lattice points are vertices.
pub fn cell_is_empty(s: &Simplex) -> bool {
    lattice_points(s.vertices(), 1, Mode::Closed).len() == s.vertices().len()
}

/// All faces of all cells, deduplicated, tagged with their dimension. The
/// relative interiors of the faces partition the polytope.
pub fn open_face_partition(t: &EmptyTriangulation) -> Vec<(Simplex, usize)> {
    use itertools::Itertools;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in &t.cells {
        for size in 1..=c.len() {
            for f in c.iter().copied().combinations(size) {
                seen.insert(f);
            }
        }
    }
    seen.into_iter()
        .map(|f| {
            let dim = f.len() - 1;
            (t.cell_simplex(&f), dim)
        })
        .collect()
}

/// Unimodular map carrying an empty lattice simplex of dimension <= 2 onto
/// the standard simplex conv(0, e_1, .., e_i) of its ambient space.
pub fn normalize_low_dim_empty(s: &Simplex) -> Result<UnimodularMap, Error> {
    let i = s.dim();
    let d = s.ambient_dim();
    assert!(i <= 2, "only dimensions 0..=2");
    let verts: Vec<Vec<Int>> = s
        .vertices()
        .iter()
        .map(|v| {
            v.to_int_vec().ok_or_else(|| Error::NotEmpty("vertices must be integral".into()))
        })
        .collect::<Result<_, _>>()?;
    if !cell_is_empty(s) {
        return Err(Error::NotEmpty(format!(
            "simplex contains lattice points besides its {} vertices",
            verts.len()
        )));
    }
    let edges: Vec<Vec<Int>> = verts[1..]
        .iter()
        .map(|v| v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect())
        .collect();
    // an empty simplex of dimension <= 2 has saturated edge vectors
    let a = complete_to_basis(&edges, d)?;
    let w = a.inverse_unimodular();
    let mut t = w.mul_vec(&verts[0]);
    for x in &mut t {
        *x = -&*x;
    }
    let map = UnimodularMap::new(w, t);
    // postcondition: image is the standard simplex
    let image: BTreeSet<Vec<Int>> =
        verts.iter().map(|v| map.apply_int(v)).collect();
    let mut expect: BTreeSet<Vec<Int>> = BTreeSet::new();
    expect.insert(vec![Int::zero(); d]);
    for j in 0..i {
        let mut e = vec![Int::zero(); d];
        e[j] = Int::from(1);
        expect.insert(e);
    }
    assert_eq!(image, expect, "normalization postcondition");
    Ok(map)
}

/// Exact volume of the hull of a point set, full-dimensional or not
/// (lower-dimensional bodies have volume zero).
pub fn polytope_volume(p: &PolytopeV) -> Rat {
    if p.dim() < p.ambient_dim() {
        return Rat::zero();
    }
    let (cells, _) = placing_triangulation(p.vertices());
    cells
        .iter()
        .map(|c| {
            let s =
                Simplex::new(c.iter().map(|&i| p.vertices()[i].clone()).collect()).expect("cell");
            s.volume().expect("full-dimensional cell")
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{self, ivec};

    #[test]
    fn unit_tetrahedron_single_cell() {
        let p = PolytopeV::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let t = empty_triangulation(&p).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert_eq!(open_face_partition(&t).len(), 15);
    }

    #[test]
    fn segment_two_cells() {
        let p = PolytopeV::from_ints(&[&[0], &[2]]);
        let t = empty_triangulation(&p).unwrap();
        assert_eq!(t.cells.len(), 2);
        for c in &t.cells {
            assert!(cell_is_empty(&t.cell_simplex(c)));
        }
    }

    #[test]
    fn unit_cube_six_cells() {
        let verts: Vec<&[i64]> = vec![
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ];
        let p = PolytopeV::from_ints(&verts);
        let t = empty_triangulation(&p).unwrap();
        assert_eq!(t.cells.len(), 6);
        let vol: Rat = t.cell_simplices().iter().map(|s| s.volume().unwrap()).sum();
        assert_eq!(vol, arith::rat_int(1));
        for c in &t.cells {
            assert!(cell_is_empty(&t.cell_simplex(c)));
        }
    }

    #[test]
    fn square_face_partition() {
        let p = PolytopeV::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let t = empty_triangulation(&p).unwrap();
        assert_eq!(t.cells.len(), 2);
        let faces = open_face_partition(&t);
        assert_eq!(faces.len(), 11); // 2 triangles + 5 edges + 4 vertices
    }

    #[test]
    fn empty_tetrahedron_t25_faces() {
        let p = PolytopeV::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[2, 5, 1]]);
        let t = empty_triangulation(&p).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert_eq!(open_face_partition(&t).len(), 15);
    }

    #[test]
    fn face_partition_point_audit() {
        let p = PolytopeV::from_ints(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        let t = empty_triangulation(&p).unwrap();
        let faces = open_face_partition(&t);
        for s in [1u64, 2] {
            let pts = lattice_points(p.vertices(), s, Mode::Closed);
            for x in pts {
                let n = faces
                    .iter()
                    .filter(|(f, _)| f.contains_barycentric(&x, Mode::Relint))
                    .count();
                assert_eq!(n, 1, "point {x:?} at scale {s}");
            }
        }
        let vol: Rat = t.cell_simplices().iter().map(|s| s.volume().unwrap()).sum();
        assert_eq!(vol, polytope_volume(&p));
    }

    #[test]
    fn normalize_examples() {
        let seg = Simplex::from_ints(&[&[2, 3, 5], &[3, 3, 5]]);
        let u = normalize_low_dim_empty(&seg).unwrap();
        let img: BTreeSet<Vec<Int>> = seg
            .vertices()
            .iter()
            .map(|v| u.apply_int(&v.to_int_vec().unwrap()))
            .collect();
        assert_eq!(img, BTreeSet::from([ivec(&[0, 0, 0]), ivec(&[1, 0, 0])]));

        let tri = Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let u = normalize_low_dim_empty(&tri).unwrap();
        assert_eq!(u, UnimodularMap::identity(3));

        let bad = Simplex::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[1, 2, 0]]);
        assert!(matches!(normalize_low_dim_empty(&bad), Err(Error::NotEmpty(_))));
    }
}
