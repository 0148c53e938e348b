//! `berkline`: command-line front end over `berkline_core`.
//!
//! Every subcommand parses its inputs, calls one library function and prints
//! the result with the canonical JSON writer. Exit codes: 2 for malformed
//! input, 3 for domain errors, 1 for failed verifications and internal
//! errors.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use berkline_core::berk_points::BerkPoint;
use berkline_core::capacity::{
    chebyshev, equilibrium, frostman_check, transfinite_diameter, ChebyshevMode, DiscUnion,
};
use berkline_core::dynamics::{apply, call_silverman, lyubich_on_graph, multiplicity, RationalMap};
use berkline_core::exact_numbers::{PrimeConfig, ValExp};
use berkline_core::export::{
    canonical_json, export_dot, CertifiedEquilibrium, MultiplicityReport, PointReport, Scalar,
    SearchReport,
};
use berkline_core::harmonic::{
    evaluate_harmonic, green_function, harmonic_measures, solve_dirichlet, SimpleDomainBoundary,
};
use berkline_core::kernels::{diam_log, hsia_log, j_kernel, path_distance, spherical_log};
use berkline_core::metrized_graph::{laplacian, span, CpaFunction, DiscreteMeasure, MetrizedGraph};
use berkline_core::sampling::Sampler;
use berkline_core::Error;

#[derive(Parser)]
#[command(
    name = "berkline",
    version,
    about = "Exact potential theory on the Berkovich line"
)]
struct Cli {
    /// The residue characteristic (required).
    #[arg(long = "p", global = true)]
    p: Option<u64>,
    /// Pole: a point JSON (file or inline) or "inf".
    #[arg(long, global = true)]
    zeta: Option<String>,
    /// Attach the Frostman report to equilibrium output.
    #[arg(long, global = true)]
    emit_certificate: bool,
    /// Add an approximate decimal rendering with N digits.
    #[arg(long, global = true, value_name = "N")]
    decimal: Option<usize>,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical form and type of a point.
    Point { x: String },
    /// A kernel value in -log_p form.
    Kernel {
        #[arg(long, value_enum)]
        kind: KernelKind,
        x: String,
        y: Option<String>,
        /// Base point for the Gromov kernel j.
        #[arg(long)]
        base: Option<String>,
    },
    /// Metrized graph operations.
    Graph {
        #[command(subcommand)]
        op: GraphCmd,
    },
    /// Dirichlet problem on a simple domain.
    Poisson {
        boundary: String,
        values: String,
        #[arg(long)]
        at: Option<String>,
        /// Auxiliary point of the Cantor matrix (default: the Gauss point, or inf
        /// when the Gauss point is on the boundary).
        #[arg(long)]
        aux: Option<String>,
        /// Print the harmonic measures at --at instead of the solution value.
        #[arg(long)]
        measures: bool,
    },
    /// Green's function of a disc union.
    Green {
        #[arg(long = "E")]
        e: String,
        #[arg(long)]
        at: String,
    },
    /// Robin constant of a disc union.
    Capacity(SetArgs),
    /// Equilibrium measure of a disc union.
    Equilibrium(SetArgs),
    /// Transfinite diameter over a candidate set.
    Diameter {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Chebyshev constant over a candidate set.
    Chebyshev {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Mode::Restricted)]
        mode: Mode,
    },
    /// Rational map dynamics.
    Dynamics {
        #[command(subcommand)]
        op: DynCmd,
    },
    /// Graphviz DOT rendering of a graph.
    Export {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        measure: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Rho,
    J,
    Spherical,
    Hsia,
    Diam,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Restricted,
    Unrestricted,
}

#[derive(Args)]
struct SetArgs {
    /// Disc union JSON: [{"center": "a/b", "rexp": ...}, ...].
    set: Option<String>,
    /// Use the level-n disc cover of Z_p instead of a file.
    #[arg(long)]
    zp_level: Option<u32>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    /// Refinement depth of the default candidate set.
    #[arg(long, default_value_t = 1)]
    levels: u32,
    /// Explicit candidate points instead of the refined boundary.
    #[arg(long)]
    candidates: Option<String>,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Smallest tree containing the points and the anchor.
    Span {
        points: String,
        #[arg(long)]
        anchor: Option<String>,
    },
    /// Laplacian of the CPA function with the given vertex values.
    Laplacian {
        #[arg(long)]
        graph: String,
        values: String,
    },
    /// Retraction of a point to the graph.
    Retract {
        #[arg(long)]
        graph: String,
        x: String,
    },
}

#[derive(Subcommand)]
enum DynCmd {
    Apply(MapAt),
    Mult(MapAt),
    Height {
        #[command(flatten)]
        m: MapAt,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    Lyubich {
        #[arg(long)]
        map: String,
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
}

#[derive(Args)]
struct MapAt {
    #[arg(long)]
    map: String,
    #[arg(long)]
    at: String,
}

enum CliError {
    Schema(String),
    Domain(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Schema(m) | CliError::Domain(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::NotPrime(_) => CliError::Schema(e.to_string()),
            Error::VerificationFailed(_) => CliError::Internal(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

type Out = std::result::Result<String, CliError>;

/// Errors while building input objects are schema errors.
fn schema<T>(r: berkline_core::Result<T>) -> std::result::Result<T, CliError> {
    r.map_err(|e| CliError::Schema(e.to_string()))
}

/// A path to an existing file, or else the JSON text itself.
fn read_json(arg: &str) -> std::result::Result<serde_json::Value, CliError> {
    let text = if std::path::Path::new(arg).is_file() {
        fs::read_to_string(arg).map_err(|e| CliError::Schema(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{arg}: {e}")))
}

fn load<T: DeserializeOwned>(arg: &str) -> std::result::Result<T, CliError> {
    serde_json::from_value(read_json(arg)?).map_err(|e| CliError::Schema(format!("{arg}: {e}")))
}

fn load_point(arg: &str) -> std::result::Result<BerkPoint, CliError> {
    if arg.trim() == "inf" {
        Ok(BerkPoint::Infinity)
    } else {
        load(arg)
    }
}

fn load_set(a: &SetArgs, cfg: &PrimeConfig) -> std::result::Result<DiscUnion, CliError> {
    match (&a.set, a.zp_level) {
        (Some(_), Some(_)) => Err(CliError::Schema(
            "give either a disc union or --zp-level, not both".into(),
        )),
        (None, Some(n)) => Ok(DiscUnion::zp_level(n, cfg)),
        (Some(path), None) => schema(DiscUnion::from_json(&read_json(path)?, cfg)),
        (None, None) => Err(CliError::Schema(
            "a disc union or --zp-level is required".into(),
        )),
    }
}

fn candidates(
    e: &DiscUnion,
    s: &SearchArgs,
    cfg: &PrimeConfig,
) -> std::result::Result<Vec<BerkPoint>, CliError> {
    match &s.candidates {
        Some(path) => load(path),
        None => Ok(e.refined_candidates(s.levels, cfg)),
    }
}

fn run(cli: Cli) -> Out {
    let p = cli
        .p
        .ok_or_else(|| CliError::Schema("--p <prime> is required".into()))?;
    let cfg = PrimeConfig::new(p)?;
    let zeta = match &cli.zeta {
        Some(z) => load_point(z)?,
        None => BerkPoint::Infinity,
    };
    let dec = cli.decimal;
    let out = match &cli.cmd {
        Cmd::Point { x } => canonical_json(&PointReport::new(&load_point(x)?, &cfg)),
        Cmd::Kernel { kind, x, y, base } => {
            let x = load_point(x)?;
            let y = match y {
                Some(y) => Some(load_point(y)?),
                None => None,
            };
            let need_y = || {
                y.clone()
                    .ok_or_else(|| CliError::Schema("second point required".into()))
            };
            let (name, v) = match kind {
                KernelKind::Rho => ("rho", path_distance(&x, &need_y()?, &cfg)),
                KernelKind::J => {
                    let b = match base {
                        Some(b) => load_point(b)?,
                        None => BerkPoint::gauss(),
                    };
                    ("j", j_kernel(&x, &need_y()?, &b, &cfg))
                }
                KernelKind::Spherical => ("spherical", spherical_log(&x, &need_y()?, &cfg)),
                KernelKind::Hsia => ("hsia", hsia_log(&x, &need_y()?, &zeta, &cfg)),
                KernelKind::Diam => ("diam", diam_log(&x, &zeta, &cfg)),
            };
            canonical_json(&Scalar::new(name, v, dec))
        }
        Cmd::Graph { op } => match op {
            GraphCmd::Span { points, anchor } => {
                let pts: Vec<BerkPoint> = load(points)?;
                let anchor = match anchor {
                    Some(a) => load_point(a)?,
                    None => pts.first().cloned().unwrap_or_else(BerkPoint::gauss),
                };
                canonical_json(&span(&pts, &anchor, &cfg)?)
            }
            GraphCmd::Laplacian { graph, values } => {
                let g: MetrizedGraph = load(graph)?;
                let vals: Vec<ValExp> = load(values)?;
                let f = schema(CpaFunction::new(g, vals))?;
                canonical_json(&laplacian(&f, &cfg))
            }
            GraphCmd::Retract { graph, x } => {
                let g: MetrizedGraph = load(graph)?;
                canonical_json(&g.retract_point(&load_point(x)?, &cfg))
            }
        },
        Cmd::Poisson {
            boundary,
            values,
            at,
            aux,
            measures,
        } => {
            let b = schema(SimpleDomainBoundary::new(load(boundary)?, &cfg))?;
            let vals: Vec<ValExp> = load(values)?;
            let z = match aux {
                Some(z) => load_point(z)?,
                None => b.default_aux(&cfg),
            };
            match (at, measures) {
                (Some(at), true) => canonical_json(&harmonic_measures(&b, &load_point(at)?, &cfg)?),
                (None, true) => return Err(CliError::Schema("--measures needs --at".into())),
                (Some(at), false) => {
                    let sol = solve_dirichlet(&b, &vals, &z, &cfg)?;
                    let v = evaluate_harmonic(&sol, &load_point(at)?, &cfg)?;
                    canonical_json(&Scalar::finite("harmonic", v, dec))
                }
                (None, false) => canonical_json(&solve_dirichlet(&b, &vals, &z, &cfg)?),
            }
        }
        Cmd::Green { e, at } => {
            let e = schema(DiscUnion::from_json(&read_json(e)?, &cfg))?;
            let g = green_function(&e, &zeta, &load_point(at)?, &cfg)?;
            canonical_json(&Scalar::new("green", g, dec))
        }
        Cmd::Capacity(s) => {
            let e = load_set(s, &cfg)?;
            let r = equilibrium(&e, &zeta, &cfg)?;
            canonical_json(&Scalar::finite("robin", r.robin, dec))
        }
        Cmd::Equilibrium(s) => {
            let e = load_set(s, &cfg)?;
            let r = equilibrium(&e, &zeta, &cfg)?;
            if cli.emit_certificate {
                let mut samples = e.refined_candidates(1, &cfg);
                let mut rng = Sampler::new(cli.seed, &cfg);
                samples.extend((0..32).map(|_| rng.disc(true)));
                let cert = frostman_check(&e, &r, &zeta, &samples, &cfg);
                canonical_json(&CertifiedEquilibrium {
                    equilibrium: r,
                    certificate: cert,
                })
            } else {
                canonical_json(&r)
            }
        }
        Cmd::Diameter { set, search } => {
            let e = load_set(set, &cfg)?;
            let c = candidates(&e, search, &cfg)?;
            let v = transfinite_diameter(&e, search.n, &c, &zeta, &cfg)?;
            canonical_json(&SearchReport {
                n: search.n,
                candidates: c.len(),
                result: Scalar::finite("neg_log_transfinite_diameter", v, dec),
                side: "candidate diameter is a lower bound for d_n(E)".into(),
            })
        }
        Cmd::Chebyshev { set, search, mode } => {
            let e = load_set(set, &cfg)?;
            let c = candidates(&e, search, &cfg)?;
            let mode = match mode {
                Mode::Restricted => ChebyshevMode::Restricted,
                Mode::Unrestricted => ChebyshevMode::Unrestricted,
            };
            let v = chebyshev(&e, search.n, mode, &c, &zeta, &cfg)?;
            canonical_json(&SearchReport {
                n: search.n,
                candidates: c.len(),
                result: Scalar::finite("neg_log_chebyshev", v, dec),
                side: "candidate Chebyshev constant is an upper bound for CH_n(E)".into(),
            })
        }
        Cmd::Dynamics { op } => match op {
            DynCmd::Apply(m) => {
                let phi: RationalMap = load(&m.map)?;
                canonical_json(&apply(&phi, &load_point(&m.at)?, &cfg)?)
            }
            DynCmd::Mult(m) => {
                let phi: RationalMap = load(&m.map)?;
                let x = load_point(&m.at)?;
                let k = multiplicity(&phi, &x, &cfg)?;
                canonical_json(&MultiplicityReport {
                    point: x,
                    multiplicity: k,
                    ramification: k - 1,
                })
            }
            DynCmd::Height { m, n } => {
                let phi: RationalMap = load(&m.map)?;
                let h = call_silverman(&phi, &load_point(&m.at)?, *n, &cfg)?;
                canonical_json(&Scalar::finite("local_height", h, dec))
            }
            DynCmd::Lyubich { map, graph, n } => {
                let phi: RationalMap = load(map)?;
                let g: MetrizedGraph = load(graph)?;
                canonical_json(&lyubich_on_graph(&phi, &g, *n, &cfg)?)
            }
        },
        Cmd::Export { graph, measure } => {
            let g: MetrizedGraph = load(graph)?;
            let mu: Option<DiscreteMeasure> = match measure {
                Some(m) => Some(load(m)?),
                None => None,
            };
            export_dot(&g, mu.as_ref(), &cfg)
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
        Err(_) => ExitCode::from(1),
    }
}
