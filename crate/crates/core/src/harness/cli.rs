//! Command line front end.
//!
//! Every command reads JSON values from file arguments (`-` reads
//! standard input, a leading `{` or `[` is parsed inline) and writes a
//! single JSON document to standard output. Exit codes: 0 success,
//! 1 validation or usage error, 2 convergence failure, 3 suite
//! violation.

use super::json::{ManifoldDescriptor, ValueJson};
use super::{configure_threads, run_suite, RandomModel};
use crate::error::{Error, Result};
use crate::foliation;
use crate::geometry;
use crate::opalg::{CMatrix, UnitizedHermitian};
use crate::project::{self, ProjectOpts};
use crate::triple::{is_triple_system, TripleSystem};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Read;

#[derive(Parser)]
#[command(
    name = "spdcone",
    version,
    about = "Geometry of the cone of positive unitized operators",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geodesic distance between two points.
    Dist { a: String, b: String },
    /// Point on the geodesic from the first point to the second.
    Geodesic {
        /// Curve parameter; 0 is the first point, 1 the second.
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        a: String,
        b: String,
    },
    /// Riemannian exponential of a tangent vector at a point.
    Expmap { p: String, v: String },
    /// Riemannian logarithm of the second point at the first.
    Logmap { p: String, q: String },
    /// Parallel transport of a tangent vector between two points.
    Transport { p: String, q: String, w: String },
    /// Curvature tensor applied to three tangent vectors at a point.
    Curvature {
        p: String,
        x: String,
        y: String,
        z: String,
    },
    /// Sectional curvature of the plane spanned by two tangents.
    Sectional { p: String, x: String, y: String },
    /// Geodesic symmetry of the second point through the first.
    Symmetry { p: String, q: String },
    /// Nearest point projection onto a geodesically convex submanifold.
    Project {
        /// Submanifold descriptor, inline JSON or a file path.
        #[arg(long)]
        manifold: String,
        /// Relative gradient tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Iteration budget.
        #[arg(long = "max-iter", default_value_t = 500)]
        max_iter: usize,
        p: String,
    },
    /// Factorizations built on the nearest point projection.
    Decompose {
        #[arg(long)]
        kind: DecomposeKind,
        /// Submanifold descriptor for the mvm and polar kinds.
        #[arg(long)]
        manifold: Option<String>,
        /// Positive shift for the diag kind; the scalar part of the
        /// input value adds to it.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
        /// Corner size for the block kinds.
        #[arg(long)]
        k: Option<usize>,
        input: String,
    },
    /// Leaf and scale coordinates of the scalar foliation.
    Foliation {
        #[command(subcommand)]
        action: FoliationCmd,
    },
    /// Closure checks and generators for candidate submanifolds.
    Triple {
        #[command(subcommand)]
        action: TripleCmd,
    },
    /// Run a named invariant suite over random instances.
    Suite {
        name: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long = "spectral-lo", default_value_t = 0.1)]
        spectral_lo: f64,
        #[arg(long = "spectral-hi", default_value_t = 10.0)]
        spectral_hi: f64,
        #[arg(long = "norm-bound", default_value_t = 1.0)]
        norm_bound: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeKind {
    /// Two sided splitting e^a = e^x e^v e^x relative to a manifold.
    Mvm,
    /// Diagonal splitting lambda + a = D e^w D.
    Diag,
    /// Relative polar factorization g = e^x e^v u.
    Polar,
    /// Corner splitting of e^b over the top-left block manifold.
    Block,
    /// Scaled corner polar factorization g = lambda r e^v u.
    Blockpolar,
}

#[derive(Subcommand)]
enum FoliationCmd {
    /// Split a point into its unit-leaf part and its scale.
    Split { p: String },
    /// Project a point onto the leaf with the given scale.
    Project {
        #[arg(long)]
        lambda: f64,
        p: String,
    },
}

#[derive(Subcommand)]
enum TripleCmd {
    /// Decide whether the given vectors span a closed triple system.
    Check { basis: String },
    /// Emit the generators of a named submanifold descriptor.
    Generate { descriptor: String },
}

/// Reads a JSON document from an inline literal, a file, or stdin.
fn read_source(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Usage(format!("reading standard input: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Usage(format!("reading {arg}: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let text = read_source(arg)?;
    serde_json::from_str(&text).map_err(|e| Error::Usage(format!("malformed JSON in {arg}: {e}")))
}

fn read_value(arg: &str) -> Result<ValueJson> {
    parse_json(arg)
}

fn read_point(arg: &str) -> Result<crate::opalg::ConePoint> {
    read_value(arg)?.to_point()
}

fn read_tangent(arg: &str) -> Result<UnitizedHermitian> {
    read_value(arg)?.to_hermitian()
}

fn read_manifold(arg: &str) -> Result<TripleSystem> {
    let descriptor: ManifoldDescriptor = parse_json(arg)?;
    descriptor.build()
}

fn require<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| Error::Usage(format!("this kind requires {what}")))
}

fn render(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}

fn matrix_only(arg: &str) -> Result<CMatrix> {
    let h = read_tangent(arg)?;
    if h.scalar().abs() > 1e-12 {
        return Err(Error::Usage(
            "this kind takes a value with zero scalar part".into(),
        ));
    }
    Ok(h.hs().clone())
}

fn execute(cli: Cli) -> Result<(String, i32)> {
    let out = match cli.cmd {
        Command::Dist { a, b } => {
            let d = geometry::distance(&read_point(&a)?, &read_point(&b)?)?;
            render(&json!({ "distance": d }))
        }
        Command::Geodesic { t, a, b } => {
            let c = geometry::geodesic_eval(&read_point(&a)?, &read_point(&b)?, t)?;
            render(&serde_json::to_value(ValueJson::from_point(&c)).unwrap())
        }
        Command::Expmap { p, v } => {
            let q = geometry::exp_point(&read_point(&p)?, &read_tangent(&v)?)?;
            render(&serde_json::to_value(ValueJson::from_point(&q)).unwrap())
        }
        Command::Logmap { p, q } => {
            let v = geometry::log_point(&read_point(&p)?, &read_point(&q)?)?;
            render(&serde_json::to_value(ValueJson::from_hermitian(&v)).unwrap())
        }
        Command::Transport { p, q, w } => {
            let moved =
                geometry::parallel_transport(&read_point(&p)?, &read_point(&q)?, &read_tangent(&w)?)?;
            render(&serde_json::to_value(ValueJson::from_hermitian(&moved)).unwrap())
        }
        Command::Curvature { p, x, y, z } => {
            let r = geometry::curvature(
                &read_point(&p)?,
                &read_tangent(&x)?,
                &read_tangent(&y)?,
                &read_tangent(&z)?,
            )?;
            render(&serde_json::to_value(ValueJson::from_hermitian(&r)).unwrap())
        }
        Command::Sectional { p, x, y } => {
            let kappa =
                geometry::sectional(&read_point(&p)?, &read_tangent(&x)?, &read_tangent(&y)?)?;
            render(&json!({ "sectional": kappa }))
        }
        Command::Symmetry { p, q } => {
            let s = geometry::symmetry(&read_point(&p)?, &read_point(&q)?)?;
            render(&serde_json::to_value(ValueJson::from_point(&s)).unwrap())
        }
        Command::Project {
            manifold,
            tol,
            max_iter,
            p,
        } => {
            let m = read_manifold(&manifold)?;
            let opts = ProjectOpts {
                tol,
                max_iter,
                init: None,
            };
            let res = project::project(&m, &read_point(&p)?, &opts)?;
            render(&json!({
                "foot": ValueJson::from_point(&res.foot),
                "normal": ValueJson::from_hermitian(&res.normal),
                "iterations": res.iterations,
                "residual": res.residual,
            }))
        }
        Command::Decompose {
            kind,
            manifold,
            lambda,
            k,
            input,
        } => decompose(kind, manifold, lambda, k, &input)?,
        Command::Foliation { action } => match action {
            FoliationCmd::Split { p } => {
                let (s1, lambda) = foliation::split(&read_point(&p)?);
                render(&json!({
                    "s1": ValueJson::from_point(&s1),
                    "lambda": lambda,
                }))
            }
            FoliationCmd::Project { lambda, p } => {
                let moved = foliation::leaf_project(&read_point(&p)?, lambda)?;
                render(&serde_json::to_value(ValueJson::from_point(&moved)).unwrap())
            }
        },
        Command::Triple { action } => match action {
            TripleCmd::Check { basis } => {
                let values: Vec<ValueJson> = parse_json(&basis)?;
                let vectors = values
                    .iter()
                    .map(|v| v.to_hermitian())
                    .collect::<Result<Vec<_>>>()?;
                let (closed, residual) = is_triple_system(&vectors, crate::triple::CLOSURE_TOL)?;
                let dim = if closed {
                    Some(TripleSystem::new(vectors)?.dim())
                } else {
                    None
                };
                render(&json!({
                    "is_triple_system": closed,
                    "residual": residual,
                    "dim": dim,
                }))
            }
            TripleCmd::Generate { descriptor } => {
                let m = read_manifold(&descriptor)?;
                let basis: Vec<ValueJson> =
                    m.basis().iter().map(ValueJson::from_hermitian).collect();
                render(&json!({ "basis": basis, "dim": m.dim() }))
            }
        },
        Command::Suite {
            name,
            trials,
            seed,
            dim,
            spectral_lo,
            spectral_hi,
            norm_bound,
        } => {
            configure_threads();
            let model = RandomModel {
                seed,
                n: dim,
                spectral_range: [spectral_lo, spectral_hi],
                norm_bound,
            };
            let report = run_suite(&name, &model, trials)?;
            let text = render(&serde_json::to_value(&report).unwrap());
            let code = if report.passed() { 0 } else { 3 };
            return Ok((text, code));
        }
    };
    Ok((out, 0))
}

fn decompose(
    kind: DecomposeKind,
    manifold: Option<String>,
    lambda: Option<f64>,
    k: Option<usize>,
    input: &str,
) -> Result<String> {
    Ok(match kind {
        DecomposeKind::Mvm => {
            let m = read_manifold(&require(manifold, "--manifold")?)?;
            let (x, v) = project::decompose_mvm(&m, &read_tangent(input)?)?;
            render(&json!({
                "x": ValueJson::from_hermitian(&x),
                "v": ValueJson::from_hermitian(&v),
            }))
        }
        DecomposeKind::Diag => {
            let shift = require(lambda, "--lambda")?;
            let h = read_tangent(input)?;
            let (d, w) = project::diag_decompose(h.hs(), shift + h.scalar())?;
            render(&json!({
                "d": ValueJson::from_matrix(&d),
                "w": ValueJson::from_matrix(&w),
            }))
        }
        DecomposeKind::Polar => {
            let m = read_manifold(&require(manifold, "--manifold")?)?;
            let g = read_value(input)?.to_operator()?;
            let (ex, ev, u) = project::polar_relative(&m, &g)?;
            render(&json!({
                "ex": ValueJson::from_point(&ex),
                "ev": ValueJson::from_point(&ev),
                "u": ValueJson::from_operator(&u),
            }))
        }
        DecomposeKind::Block => {
            let corner = require(k, "--k")?;
            let dec = project::block_decompose(&matrix_only(input)?, corner)?;
            render(&json!({
                "a": ValueJson::from_matrix(&dec.a),
                "x": ValueJson::from_matrix(&dec.x),
                "y": ValueJson::from_matrix(&dec.y),
            }))
        }
        DecomposeKind::Blockpolar => {
            let corner = require(k, "--k")?;
            let g = read_value(input)?.to_operator()?;
            let bp = project::full_block_polar(&g, corner)?;
            render(&json!({
                "lambda": bp.lambda,
                "r": ValueJson::from_matrix(&bp.r),
                "v": ValueJson::from_hermitian(&bp.v),
                "u": ValueJson::from_operator(&bp.u),
            }))
        }
    })
}

/// Parses and runs a full command line; returns the process exit code.
pub fn run(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    match execute(cli) {
        Ok((text, code)) => {
            println!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> i32 {
        run(args.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn inline_values_flow_through_commands() {
        let a = r#"{"n":1,"scalar":[1.0,0.0],"matrix":[[[0.0,0.0]]]}"#;
        let b = format!(
            r#"{{"n":1,"scalar":[{},0.0],"matrix":[[[0.0,0.0]]]}}"#,
            std::f64::consts::E
        );
        assert_eq!(run_capture(&["spdcone", "dist", a, &b]), 0);
    }

    #[test]
    fn malformed_json_is_a_usage_error() {
        assert_eq!(run_capture(&["spdcone", "dist", "{not json", "{also bad"]), 1);
        assert_eq!(run_capture(&["spdcone", "nonsense"]), 1);
    }

    #[test]
    fn help_is_not_an_error() {
        assert_eq!(run_capture(&["spdcone", "--help"]), 0);
    }
}
