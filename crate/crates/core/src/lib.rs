//! Exact Ehrhart counting and GL(3,Z)-equidecomposition certificates for
//! lattice 3-polytopes.
//!
//! The pipeline: count lattice points of dilations exactly and fit the
//! Ehrhart quasipolynomial (`ehrhart`); triangulate lattice polytopes into
//! empty simplices (`triangulate`); bring empty tetrahedra to width-one
//! normal form (`white`); decompose everything into relatively open
//! half-unimodular simplices of nine possible classes (`halfuni`); and pair
//! pieces of Ehrhart-equivalent polytopes into an explicit certificate that
//! an independent verifier can check from scratch (`equidec`).

pub mod arith;
pub mod ehrhart;
pub mod equidec;
pub mod error;
pub mod formats;
pub mod geom;
pub mod halfuni;
pub mod selftest;
pub mod triangulate;
pub mod white;

pub use arith::{Int, IntMat, Rat, UnimodularMap};
pub use error::Error;
pub use geom::{Mode, PointQ, PolytopeV, Simplex};
