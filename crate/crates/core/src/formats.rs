//! File formats: JSON schemas for polytopes, simplices, quasipolynomials,
//! decompositions, certificates and verification reports, plus OFF mesh
//! export for three-dimensional pieces.
//!
//! Rationals are written as bare integers when they are integral and fit a
//! 64-bit value, and as strings "a/b" in lowest terms otherwise. Parsers
//! accept both forms everywhere.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::arith::{Int, Rat};
use crate::ehrhart::{QuasiPolynomial, SimplexType, TypeVector};
use crate::equidec::{AffineMapQ, CertPair, EquidecompCertificate};
use crate::error::Error;
use crate::geom::{PointQ, PolytopeV, Simplex};
use crate::halfuni::Decomposition;

pub const CERTIFICATE_SCHEMA: &str = "equidec/certificate/1";

/// Exact rational in JSON: a bare integer or a string "a/b".
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JsonRat(pub Rat);

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Some(v) = self.0.to_integer().to_i64() {
                return s.serialize_i64(v);
            }
        }
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = JsonRat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string \"a/b\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonRat, E> {
                Ok(JsonRat(Rat::from_integer(Int::from(v))))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonRat, E> {
                Ok(JsonRat(Rat::from_integer(Int::from(v))))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonRat, E> {
                Rat::from_str(v.trim())
                    .map(JsonRat)
                    .map_err(|e| E::custom(format!("bad rational {v:?}: {e}")))
            }
        }
        d.deserialize_any(V)
    }
}

fn point_to_json(p: &PointQ) -> Vec<JsonRat> {
    p.coords.iter().map(|c| JsonRat(c.clone())).collect()
}

fn point_from_json(v: &[JsonRat]) -> Result<PointQ, Error> {
    if v.is_empty() || v.len() > 3 {
        return Err(Error::DegenerateInput(format!(
            "points must have 1..=3 coordinates, got {}",
            v.len()
        )));
    }
    Ok(PointQ::new(v.iter().map(|r| r.0.clone()).collect()))
}

/// Vertex-list description of a polytope (or simplex).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub dim: usize,
    pub vertices: Vec<Vec<JsonRat>>,
}

impl PolytopeFile {
    pub fn from_polytope(p: &PolytopeV) -> Self {
        PolytopeFile {
            dim: p.ambient_dim(),
            vertices: p.vertices().iter().map(point_to_json).collect(),
        }
    }

    pub fn from_simplex(s: &Simplex) -> Self {
        PolytopeFile {
            dim: s.ambient_dim(),
            vertices: s.vertices().iter().map(point_to_json).collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<PolytopeV, Error> {
        let pts = self.parse_points()?;
        PolytopeV::new(pts)
    }

    pub fn to_simplex(&self) -> Result<Simplex, Error> {
        Simplex::new(self.parse_points()?)
    }

    fn parse_points(&self) -> Result<Vec<PointQ>, Error> {
        self.vertices
            .iter()
            .map(|v| {
                if v.len() != self.dim {
                    return Err(Error::DegenerateInput(format!(
                        "vertex has {} coordinates, dim says {}",
                        v.len(),
                        self.dim
                    )));
                }
                point_from_json(v)
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasiPolynomialFile {
    pub period: u64,
    pub degree: usize,
    /// one row of coefficients c_0..c_degree per residue class
    pub coefficients: Vec<Vec<JsonRat>>,
}

impl QuasiPolynomialFile {
    pub fn from_qp(q: &QuasiPolynomial) -> Self {
        QuasiPolynomialFile {
            period: q.period,
            degree: q.degree,
            coefficients: q
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| JsonRat(c.clone())).collect())
                .collect(),
        }
    }

    pub fn to_qp(&self) -> QuasiPolynomial {
        QuasiPolynomial::new(
            self.period,
            self.coefficients
                .iter()
                .map(|row| row.iter().map(|c| c.0.clone()).collect())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapFile {
    /// rows of the linear part
    pub matrix: Vec<Vec<JsonRat>>,
    pub translation: Vec<JsonRat>,
}

impl MapFile {
    pub fn from_map(m: &AffineMapQ) -> Self {
        MapFile {
            matrix: m
                .linear
                .iter()
                .map(|row| row.iter().map(|c| JsonRat(c.clone())).collect())
                .collect(),
            translation: m.translation.iter().map(|c| JsonRat(c.clone())).collect(),
        }
    }

    pub fn to_map(&self) -> Result<AffineMapQ, Error> {
        if self.matrix.len() != 3
            || self.matrix.iter().any(|r| r.len() != 3)
            || self.translation.len() != 3
        {
            return Err(Error::DegenerateInput("maps must be 3x3 with a 3-translation".into()));
        }
        Ok(AffineMapQ {
            linear: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|c| c.0.clone()).collect())
                .collect(),
            translation: self.translation.iter().map(|c| c.0.clone()).collect(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertPairFile {
    #[serde(rename = "type")]
    pub stype: String,
    pub source: Vec<Vec<JsonRat>>,
    pub map: MapFile,
    pub target: Vec<Vec<JsonRat>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: String,
    pub type_vector: TypeVector,
    pub pairs: Vec<CertPairFile>,
}

impl CertificateFile {
    pub fn from_certificate(c: &EquidecompCertificate) -> Self {
        CertificateFile {
            schema: CERTIFICATE_SCHEMA.to_string(),
            type_vector: c.type_vector.clone(),
            pairs: c
                .pairs
                .iter()
                .map(|p| CertPairFile {
                    stype: p.stype.label().to_string(),
                    source: p.source.vertices().iter().map(point_to_json).collect(),
                    map: MapFile::from_map(&p.map),
                    target: p.target.vertices().iter().map(point_to_json).collect(),
                })
                .collect(),
        }
    }

    pub fn to_certificate(&self) -> Result<EquidecompCertificate, Error> {
        if self.schema != CERTIFICATE_SCHEMA {
            return Err(Error::DegenerateInput(format!(
                "unknown certificate schema {:?}",
                self.schema
            )));
        }
        let pairs = self
            .pairs
            .iter()
            .map(|p| {
                let parse_simplex = |vs: &Vec<Vec<JsonRat>>| -> Result<Simplex, Error> {
                    let pts: Vec<PointQ> =
                        vs.iter().map(|v| point_from_json(v)).collect::<Result<_, _>>()?;
                    Simplex::new(pts.into_iter().map(|p| p.embedded(3)).collect())
                };
                let stype = SimplexType::from_label(&p.stype).ok_or_else(|| {
                    Error::DegenerateInput(format!("unknown class label {:?}", p.stype))
                })?;
                Ok(CertPair {
                    source: parse_simplex(&p.source)?,
                    map: p.map.to_map()?,
                    target: parse_simplex(&p.target)?,
                    stype,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let mut tv = TypeVector::default();
        for p in &pairs {
            tv.bump(p.stype);
        }
        Ok(EquidecompCertificate { pairs, type_vector: tv })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceFile {
    #[serde(rename = "type")]
    pub stype: String,
    pub dim: usize,
    pub vertices: Vec<Vec<JsonRat>>,
    pub to_canonical: MapFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub source: PolytopeFile,
    pub type_vector: TypeVector,
    pub pieces: Vec<PieceFile>,
}

impl DecompositionFile {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        DecompositionFile {
            source: PolytopeFile::from_polytope(&d.source),
            type_vector: d.type_vector(),
            pieces: d
                .pieces
                .iter()
                .map(|p| PieceFile {
                    stype: p.stype.label().to_string(),
                    dim: p.simplex.dim(),
                    vertices: p.simplex.vertices().iter().map(point_to_json).collect(),
                    to_canonical: MapFile::from_map(&AffineMapQ::from(&p.to_canonical)),
                })
                .collect(),
        }
    }
}

/// OFF mesh of one tetrahedral piece: 4 vertices, 4 triangular faces.
/// Half-integer coordinates are written as decimals here, and only here.
pub fn off_mesh(s: &Simplex) -> String {
    assert_eq!(s.dim(), 3, "OFF export is for three-dimensional pieces");
    let mut out = String::from("OFF\n4 4 6\n");
    for v in s.vertices() {
        let coords: Vec<String> = v
            .coords
            .iter()
            .map(|c| {
                let f = c.to_f64().expect("half-integer coordinate");
                if f == f.trunc() {
                    format!("{}", f as i64)
                } else {
                    format!("{f}")
                }
            })
            .collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    for face in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
        out.push_str(&format!("3 {} {} {}\n", face[0], face[1], face[2]));
    }
    out
}

/// Signed rational helper for display in reports.
pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else if r.is_negative() {
        format!("-{}/{}", r.numer().abs(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
