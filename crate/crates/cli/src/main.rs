use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use schwarz_pick::bounds::{distance_bound_chain, modulus_bound_chain};
use schwarz_pick::geometry::hyperbolic_distance;
use schwarz_pick::hdq::{blaschke_degree_detect, gamma_sequence, SchurStatus};
use schwarz_pick::io::{parse_dataset, parse_fn, Cx, SequenceJson, Validation, VerdictJson};
use schwarz_pick::par::Execution;
use schwarz_pick::peschl::{gamma_from_taylor, recentered};
use schwarz_pick::pick::{feasibility, FeasibilityStatus};
use schwarz_pick::verify::{self, VerifyConfig};
use schwarz_pick::{AnalyticFn, DiskPoint, Error};

const EXIT_INPUT: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_TRUNCATED: u8 = 3;
const EXIT_PROPERTY: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "schwarz-pick", version, about = "Multi-point Schwarz-Pick bounds, Schur parameters and Nevanlinna-Pick regions")]
struct Cli {
    /// Master seed for randomized commands.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,

    /// Samples per property.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SAMPLES as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,

    /// Jet order used by jet-based checks.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_JET_ORDER as u8,
          value_parser = clap::value_parser!(u8).range(3..=16))]
    jet_order: u8,

    /// Tolerance override `name=value`; `all=value` sets every tolerance.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Variability region of f(z) over all interpolants of a dataset.
    Region {
        #[arg(long)]
        data: PathBuf,
        /// Query point `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Also print this many points of the region circle.
        #[arg(long, value_name = "N")]
        emit_boundary: Option<usize>,
    },
    /// Schur parameters of a function tree at the given nodes.
    Schur {
        #[arg(long)]
        function: PathBuf,
        /// Node `re,im`; repeat for several. Defaults to the origin.
        #[arg(long = "node", allow_hyphen_values = true)]
        nodes: Vec<String>,
        /// Number of parameters when the nodes are defaulted or a single node is repeated.
        #[arg(long, default_value_t = 5)]
        length: usize,
    },
    /// Modulus and distance bound chains.
    Bounds {
        #[arg(long, conflicts_with = "data", required_unless_present = "data")]
        function: Option<PathBuf>,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Base point of the distance chain; defaults to the origin, or the
        /// first data node.
        #[arg(long, allow_hyphen_values = true)]
        z0: Option<String>,
        /// Number of chain entries; for a function the node z0 is repeated.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Nodes after z0 for a function, overriding the repeated node.
        #[arg(long = "node", allow_hyphen_values = true)]
        nodes: Vec<String>,
    },
    /// Run the seeded property suite.
    Verify {
        /// Run samples on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Infeasible(String),
    Truncated,
    Property,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| Failure::Input(format!("cannot parse `{s}` as re,im")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Failure::Input(format!("cannot parse `{s}` as re,im"))),
    }
}

fn parse_point(s: &str) -> Result<DiskPoint, Failure> {
    Ok(DiskPoint::interior(parse_complex(s)?)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_fn(path: &Path) -> Result<AnalyticFn, Failure> {
    Ok(parse_fn(&read(path)?, Some(Validation::default()))?)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn print_csv<T: Serialize>(rows: &[T]) -> Outcome {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    for row in rows {
        w.serialize(row).map_err(|e| Failure::Input(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::Input(e.to_string()))
}

// ------------------------------------------------------------------ region

#[derive(Serialize)]
struct RegionOut {
    center: Cx,
    radius: f64,
    status: FeasibilityStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    boundary: Option<Vec<Cx>>,
}

#[derive(Serialize)]
struct RegionRow {
    kind: &'static str,
    index: usize,
    re: f64,
    im: f64,
    radius: Option<f64>,
    status: Option<FeasibilityStatus>,
}

fn cmd_region(cli: &Cli, data: &Path, z: &str, emit: Option<usize>) -> Outcome {
    let data = parse_dataset(&read(data)?)?;
    let z = parse_point(z)?;
    let verdict = feasibility(&data)?;
    if verdict.status == FeasibilityStatus::Infeasible {
        print_json(&VerdictJson::from(&verdict));
        return Err(Failure::Infeasible(format!("Pick matrix not positive semi-definite (min pivot {:e})", verdict.min_pivot)));
    }
    let disk = schwarz_pick::pick::variability_region(&data, z)?;
    let boundary = emit.map(|n| {
        (0..n).map(|k| disk.boundary_point(std::f64::consts::TAU * k as f64 / n as f64).into()).collect::<Vec<Cx>>()
    });
    match cli.output {
        Output::Json => print_json(&RegionOut { center: disk.center.into(), radius: disk.radius, status: verdict.status, boundary }),
        Output::Csv => {
            let mut rows = vec![RegionRow {
                kind: "center",
                index: 0,
                re: disk.center.re,
                im: disk.center.im,
                radius: Some(disk.radius),
                status: Some(verdict.status),
            }];
            for (k, b) in boundary.iter().flatten().enumerate() {
                rows.push(RegionRow { kind: "boundary", index: k, re: b.re, im: b.im, radius: None, status: None });
            }
            print_csv(&rows)?;
        }
        Output::Plain => {
            println!("status {:?}", verdict.status);
            println!("center {} {}", disk.center.re, disk.center.im);
            println!("radius {}", disk.radius);
            for b in boundary.iter().flatten() {
                println!("boundary {} {}", b.re, b.im);
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------------------ schur

#[derive(Serialize)]
struct CrossCheck {
    closed_form: Vec<Cx>,
    max_difference: f64,
}

#[derive(Serialize)]
struct SchurOut {
    nodes: Vec<Cx>,
    #[serde(flatten)]
    sequence: SequenceJson,
    blaschke_degree: Option<usize>,
    taylor_cross_check: Option<CrossCheck>,
}

#[derive(Serialize)]
struct SchurRow {
    index: usize,
    re: f64,
    im: f64,
    modulus: f64,
    closed_re: Option<f64>,
    closed_im: Option<f64>,
}

/// `γ_1..γ_4` from the Taylor coefficients of the recentered function, for
/// a single repeated node.
fn taylor_cross_check(f: &AnalyticFn, node: DiskPoint, gammas: &[Complex64]) -> Option<CrossCheck> {
    let g = recentered(f, node).ok()?;
    let jet = g.eval_jet(DiskPoint::ORIGIN, 4).ok()?;
    let closed = gamma_from_taylor([jet.coeff(1), jet.coeff(2), jet.coeff(3), jet.coeff(4)]).ok()?;
    let max_difference = closed.iter().zip(gammas.iter().skip(1)).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Some(CrossCheck { closed_form: closed.iter().map(|&c| c.into()).collect(), max_difference })
}

fn cmd_schur(cli: &Cli, function: &Path, nodes: &[String], length: usize) -> Outcome {
    let f = load_fn(function)?;
    let nodes: Vec<DiskPoint> = match nodes {
        [] => vec![DiskPoint::ORIGIN; length],
        [one] => vec![parse_point(one)?; length],
        many => many.iter().map(|s| parse_point(s)).collect::<Result<_, _>>()?,
    };
    if nodes.is_empty() {
        return Err(Failure::Input("at least one node is needed".into()));
    }
    let seq = gamma_sequence(&f, &nodes)?;
    let repeated = nodes.iter().all(|n| *n == nodes[0]);
    let check = if repeated { taylor_cross_check(&f, nodes[0], &seq.gammas) } else { None };
    let out = SchurOut {
        nodes: nodes.iter().map(|n| n.value().into()).collect(),
        sequence: SequenceJson::from(&seq),
        blaschke_degree: blaschke_degree_detect(&seq),
        taylor_cross_check: check,
    };
    match cli.output {
        Output::Json => print_json(&out),
        Output::Csv => {
            let closed = out.taylor_cross_check.as_ref().map(|c| c.closed_form.clone()).unwrap_or_default();
            let rows: Vec<SchurRow> = seq
                .gammas
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let c = i.checked_sub(1).and_then(|k| closed.get(k));
                    SchurRow {
                        index: i,
                        re: g.re,
                        im: g.im,
                        modulus: g.norm(),
                        closed_re: c.map(|c| c.re),
                        closed_im: c.map(|c| c.im),
                    }
                })
                .collect();
            print_csv(&rows)?;
        }
        Output::Plain => {
            for (i, g) in seq.gammas.iter().enumerate() {
                println!("gamma[{i}] = {} {:+}i  |gamma| = {}", g.re, g.im, g.norm());
            }
            println!("status {:?}", seq.status);
            match out.blaschke_degree {
                Some(n) => println!("Blaschke product of degree {n}"),
                None => println!("not detected as a Blaschke product"),
            }
            if let Some(c) = &out.taylor_cross_check {
                println!("closed-form gamma[1..4] max difference {:e}", c.max_difference);
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------------------ bounds

#[derive(Serialize)]
struct BoundsOut {
    nodes: Vec<Cx>,
    gammas: Vec<Cx>,
    t_chain: Vec<f64>,
    r_chain: Vec<f64>,
    realized_modulus: Option<f64>,
    realized_exp_distance: Option<f64>,
    truncated: bool,
}

#[derive(Serialize)]
struct BoundsRow {
    index: usize,
    t_bound: f64,
    r_bound: f64,
}

fn cmd_bounds(
    cli: &Cli,
    function: Option<&Path>,
    data: Option<&Path>,
    z: &str,
    z0: Option<&str>,
    depth: usize,
    extra_nodes: &[String],
) -> Outcome {
    if depth == 0 {
        return Err(Failure::Input("depth must be at least 1".into()));
    }
    let z = parse_point(z)?;
    let (mut nodes, mut gammas, f) = match (function, data) {
        (Some(path), _) => {
            let f = load_fn(path)?;
            let z0 = z0.map(parse_point).transpose()?.unwrap_or(DiskPoint::ORIGIN);
            let nodes: Vec<DiskPoint> = if extra_nodes.is_empty() {
                vec![z0; depth]
            } else {
                let mut n = vec![z0];
                for s in extra_nodes {
                    n.push(parse_point(s)?);
                }
                n.truncate(depth);
                n
            };
            let seq = gamma_sequence(&f, &nodes)?;
            if let SchurStatus::Truncated(_) = seq.status {
                return Err(Failure::Input("the function is not bounded by one at the nodes".into()));
            }
            (nodes, seq.gammas, Some(f))
        }
        (None, Some(path)) => {
            let data = parse_dataset(&read(path)?)?;
            let verdict = feasibility(&data)?;
            if verdict.status == FeasibilityStatus::Infeasible {
                print_json(&VerdictJson::from(&verdict));
                return Err(Failure::Infeasible("interpolation data are infeasible".into()));
            }
            let mut nodes = data.nodes();
            if let Some(s) = z0 {
                if parse_point(s)? != nodes[0] {
                    return Err(Failure::Input("z0 must be the first data node".into()));
                }
            }
            let mut gammas = verdict.gammas.map(|s| s.gammas).unwrap_or_default();
            nodes.truncate(depth);
            gammas.truncate(depth);
            (nodes, gammas, None)
        }
        (None, None) => return Err(Failure::Input("either --function or --data is required".into())),
    };
    let z0 = nodes[0];
    let usable = gammas.iter().take_while(|g| g.norm() < 1.0 - schwarz_pick::hdq::EPS_UNIMODULAR).count();
    let truncated = usable < depth;
    nodes.truncate(usable);
    gammas.truncate(usable);
    let (t_chain, r_chain) = if usable == 0 {
        (Vec::new(), Vec::new())
    } else {
        (
            modulus_bound_chain(&nodes, &gammas, z)?.values,
            distance_bound_chain(&nodes, &gammas, z, z0)?.values,
        )
    };
    let (realized_modulus, realized_exp_distance) = match &f {
        Some(f) => {
            let fz = f.eval(z.value())?;
            let fz0 = f.eval(z0.value())?;
            let d = match (DiskPoint::interior(fz), DiskPoint::interior(fz0)) {
                (Ok(a), Ok(b)) => Some(hyperbolic_distance(a, b)?.exp()),
                _ => None,
            };
            (Some(fz.norm()), d)
        }
        None => (None, None),
    };
    let out = BoundsOut {
        nodes: nodes.iter().map(|n| n.value().into()).collect(),
        gammas: gammas.iter().map(|&g| g.into()).collect(),
        t_chain,
        r_chain,
        realized_modulus,
        realized_exp_distance,
        truncated,
    };
    match cli.output {
        Output::Json => print_json(&out),
        Output::Csv => {
            let rows: Vec<BoundsRow> = out
                .t_chain
                .iter()
                .zip(&out.r_chain)
                .enumerate()
                .map(|(index, (&t_bound, &r_bound))| BoundsRow { index, t_bound, r_bound })
                .collect();
            print_csv(&rows)?;
        }
        Output::Plain => {
            for (k, (t, r)) in out.t_chain.iter().zip(&out.r_chain).enumerate() {
                println!("n = {k}: |f(z)| <= {t}, exp d <= {r}");
            }
            if let Some(m) = out.realized_modulus {
                println!("realized |f(z)| = {m}");
            }
            if let Some(d) = out.realized_exp_distance {
                println!("realized exp d = {d}");
            }
            if truncated {
                println!("truncated: a unimodular parameter ends the chain after {usable} entries");
            }
        }
    }
    if truncated {
        Err(Failure::Truncated)
    } else {
        Ok(())
    }
}

// ------------------------------------------------------------------ verify

#[derive(Serialize)]
struct VerifyRow<'a> {
    property: &'a str,
    tolerance: f64,
    samples: usize,
    max_violation: f64,
    worst_sample: usize,
    exceedances: usize,
    errors: usize,
    passed: bool,
}

fn cmd_verify(cli: &Cli, sequential: bool) -> Outcome {
    let mut cfg = VerifyConfig {
        seed: cli.seed,
        samples: cli.samples as usize,
        jet_order: cli.jet_order as usize,
        execution: if sequential { Execution::Sequential } else { Execution::Parallel },
        ..VerifyConfig::default()
    };
    for entry in &cli.tol {
        let (name, value) = entry
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("--tol expects name=value, got `{entry}`")))?;
        let value: f64 = value.parse().map_err(|_| Failure::Input(format!("bad tolerance value in `{entry}`")))?;
        cfg.set_tolerance(name.trim(), value)?;
    }
    let report = verify::run(&cfg)?;
    match cli.output {
        Output::Json => println!("{}", report.to_json()),
        Output::Csv => {
            let rows: Vec<VerifyRow> = report
                .properties
                .iter()
                .map(|p| VerifyRow {
                    property: &p.name,
                    tolerance: p.tolerance,
                    samples: p.samples,
                    max_violation: p.max_violation,
                    worst_sample: p.worst_sample,
                    exceedances: p.exceedances,
                    errors: p.errors,
                    passed: p.passed,
                })
                .collect();
            print_csv(&rows)?;
        }
        Output::Plain => {
            for p in &report.properties {
                let mark = if p.passed { "ok  " } else { "FAIL" };
                println!("{mark} {:<32} max {:.3e} (tol {:.1e})", p.name, p.max_violation, p.tolerance);
                if let Some(e) = &p.first_error {
                    println!("     {} errors, first: {e}", p.errors);
                }
            }
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Region { data, z, emit_boundary } => cmd_region(cli, data, z, *emit_boundary),
        Command::Schur { function, nodes, length } => cmd_schur(cli, function, nodes, *length),
        Command::Bounds { function, data, z, z0, depth, nodes } => {
            cmd_bounds(cli, function.as_deref(), data.as_deref(), z, z0.as_deref(), *depth, nodes)
        }
        Command::Verify { sequential } => cmd_verify(cli, *sequential),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which would collide with "infeasible"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            ExitCode::from(EXIT_INFEASIBLE)
        }
        Err(Failure::Truncated) => {
            eprintln!("truncated: the Schur parameters reach modulus one before the requested depth");
            ExitCode::from(EXIT_TRUNCATED)
        }
        Err(Failure::Property) => {
            eprintln!("property failure: at least one property exceeded its tolerance");
            ExitCode::from(EXIT_PROPERTY)
        }
    }
}
