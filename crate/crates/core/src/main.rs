//! Command-line surface. Exit codes: 0 success, 1 domain errors, 2
//! malformed input. Domain errors carry a machine-readable code on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::json;

use equidec::ehrhart;
use equidec::equidec as certs;
use equidec::error::Error;
use equidec::formats::{
    CertificateFile, DecompositionFile, MapFile, PolytopeFile, QuasiPolynomialFile,
};
use equidec::geom::{Mode, PolytopeV};
use equidec::{halfuni, selftest, white};

#[derive(Parser)]
#[command(name = "equidec", version, about = "Exact Ehrhart counting and unimodular equidecomposition certificates for lattice 3-polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the Ehrhart quasipolynomial of a polytope and print raw counts
    Ehrhart {
        poly: PathBuf,
        /// count the relative interior instead of the closed polytope
        #[arg(long)]
        relint: bool,
        /// how many raw counts to report
        #[arg(long, default_value_t = 0)]
        kmax: u64,
    },
    /// Decompose a lattice polytope into open half-unimodular pieces
    Decompose {
        poly: PathBuf,
        /// write the decomposition as JSON here
        #[arg(long)]
        out: Option<PathBuf>,
        /// write one OFF mesh per three-dimensional piece into this directory
        #[arg(long)]
        off: Option<PathBuf>,
    },
    /// Classify a half-unimodular simplex
    Classify { simplex: PathBuf },
    /// Width-one normal form of an empty lattice tetrahedron
    White { tetra: PathBuf },
    /// Build an equidecomposition certificate for two lattice polytopes
    Equidecompose {
        p: PathBuf,
        q: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a certificate against the two polytopes, trusting nothing
    Verify {
        p: PathBuf,
        q: PathBuf,
        cert: PathBuf,
        /// audit the grids (1/s)Z^3 for s = 1..=depth
        #[arg(long, default_value_t = 4)]
        grid_depth: u64,
    },
    /// Run the fixture self-tests and print one line per criterion
    Selftest,
}

enum CliError {
    Domain(Error),
    Malformed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn emit_error(code: &str, message: &str) {
    eprintln!("{}", json!({ "error": { "code": code, "message": message } }));
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Malformed(format!("cannot parse {}: {e}", path.display())))
}

fn read_polytope(path: &Path) -> Result<PolytopeV, CliError> {
    let file: PolytopeFile = read_json(path)?;
    file.to_polytope().map_err(|e| CliError::Malformed(e.to_string()))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Malformed(format!("serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Ehrhart { poly, relint, kmax } => {
            let p = read_polytope(&poly)?;
            let mode = if relint { Mode::Relint } else { Mode::Closed };
            let qp = ehrhart::fit_quasipolynomial(&p, mode)?;
            let kmax = if kmax == 0 {
                2 * qp.period * (p.dim() as u64 + 1)
            } else {
                kmax
            };
            let counts: Vec<u64> =
                (1..=kmax).map(|k| ehrhart::count_polytope(&p, k, mode)).collect();
            let out = json!({
                "quasipolynomial": QuasiPolynomialFile::from_qp(&qp),
                "pretty": qp.to_string(),
                "counts": counts,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::Decompose { poly, out, off } => {
            let p = read_polytope(&poly)?;
            let d = halfuni::decompose_polytope(&p)?;
            let file = DecompositionFile::from_decomposition(&d);
            if let Some(out) = out {
                write_json(&out, &file)?;
            }
            if let Some(dir) = off {
                std::fs::create_dir_all(&dir)
                    .map_err(|e| CliError::Malformed(format!("cannot create {}: {e}", dir.display())))?;
                let mut idx = 0usize;
                for piece in &d.pieces {
                    if piece.simplex.dim() == 3 {
                        let mesh = equidec::formats::off_mesh(&piece.simplex);
                        let path = dir.join(format!("piece_{idx:04}.off"));
                        std::fs::write(&path, mesh).map_err(|e| {
                            CliError::Malformed(format!("cannot write {}: {e}", path.display()))
                        })?;
                        idx += 1;
                    }
                }
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "pieces": d.pieces.len(),
                    "type_vector": d.type_vector(),
                }))
                .unwrap()
            );
            Ok(0)
        }
        Command::Classify { simplex } => {
            let file: PolytopeFile = read_json(&simplex)?;
            let s = file.to_simplex().map_err(|e| CliError::Malformed(e.to_string()))?;
            let s3 = equidec::geom::Simplex::new(
                s.vertices().iter().map(|v| v.embedded(3)).collect(),
            )
            .map_err(|e| CliError::Malformed(e.to_string()))?;
            let t = halfuni::classify(&s3)?;
            println!("{}", json!({ "type": t.label() }));
            Ok(0)
        }
        Command::White { tetra } => {
            let file: PolytopeFile = read_json(&tetra)?;
            let s = file.to_simplex().map_err(|e| CliError::Malformed(e.to_string()))?;
            let wf = white::white_normal_form(&s)?;
            let out = json!({
                "p": wf.p.to_i64().expect("desk-scale determinant"),
                "q": wf.q.to_i64().expect("desk-scale determinant"),
                "p_canonical": wf.p_canonical.to_i64().expect("desk-scale determinant"),
                "map": MapFile::from_map(&certs::AffineMapQ::from(&wf.map)),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::Equidecompose { p, q, out } => {
            let pp = read_polytope(&p)?;
            let qq = read_polytope(&q)?;
            let cert = certs::equidecompose(&pp, &qq)?;
            let file = CertificateFile::from_certificate(&cert);
            if let Some(out) = out {
                write_json(&out, &file)?;
            } else {
                println!("{}", serde_json::to_string_pretty(&file).unwrap());
            }
            eprintln!(
                "certificate with {} pairs; type vector: {}",
                cert.pairs.len(),
                cert.type_vector
            );
            Ok(0)
        }
        Command::Verify { p, q, cert, grid_depth } => {
            let pp = read_polytope(&p)?;
            let qq = read_polytope(&q)?;
            let cert_file: CertificateFile = read_json(&cert)?;
            let cert = cert_file.to_certificate().map_err(|e| CliError::Malformed(e.to_string()))?;
            let scales: Vec<u64> = (1..=grid_depth.max(1)).collect();
            let report = certs::verify_certificate(&pp, &qq, &cert, &scales);
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            if report.passed {
                Ok(0)
            } else {
                emit_error("VERIFICATION_FAILED", "one or more certificate checks failed");
                Ok(1)
            }
        }
        Command::Selftest => {
            let results = selftest::run_all();
            let mut all = true;
            println!("{:<4} {:<40} {:<6} detail", "id", "criterion", "status");
            for r in &results {
                all &= r.passed;
                println!(
                    "{:<4} {:<40} {:<6} {}",
                    r.id,
                    r.name,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.detail
                );
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Domain(e)) => {
            emit_error(e.code(), &e.to_string());
            ExitCode::from(1)
        }
        Err(CliError::Malformed(m)) => {
            emit_error("MALFORMED_INPUT", &m);
            ExitCode::from(2)
        }
    }
}
