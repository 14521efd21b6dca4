//! `pwlmax`: expand, reduce, verify and compile nested max/min expressions.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pwlmax::expand::{expand, lower, ExpansionStats};
use pwlmax::linalg::KernelStrategy;
use pwlmax::parser::{parse, ExprNode};
use pwlmax::polytope::{face, minkowski, support, Direction, VPolytope};
use pwlmax::rational::parse_rational;
use pwlmax::reduce::{conjecture_probe_lincomb, is_reduced, reduce_lincomb_traced, TraceNode};
use pwlmax::relu::emit;
use pwlmax::verify::{equiv_1d, equiv_homogeneous, equiv_sample, polytope_parts, EquivReport, Verdict};
use pwlmax::{AffineFunc, Error, LinComb, Rational};

#[derive(Parser)]
#[command(
    name = "pwlmax",
    version,
    about = "Linear combinations of maxima of affine functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    output_format: Format,

    /// Seed for sampling and for the random kernel strategy.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Number of sample points for sampled equivalence checks.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct Dim {
    /// Number of variables x1..xn.
    #[arg(short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
}

impl Dim {
    fn get(&self) -> usize {
        self.n as usize
    }
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite an expression as a linear combination of maxima.
    Expand {
        #[command(flatten)]
        dim: Dim,
        /// Expression, `@FILE` or `-` for standard input.
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Reduce every maximum to affinely independent constituents.
    Reduce {
        #[command(flatten)]
        dim: Dim,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// first, last, random or random:SEED.
        #[arg(long, default_value = "first")]
        kernel_strategy: String,
        /// Write the recursion trees to FILE (.json for JSON, DOT otherwise).
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
    },
    /// Evaluate exactly at a rational point.
    Eval {
        #[command(flatten)]
        dim: Dim,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Comma separated coordinates, e.g. `1/2,-3`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Decide or test whether two expressions define the same function.
    Equiv {
        #[command(flatten)]
        dim: Dim,
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Compile to a ReLU network.
    Relu {
        #[command(flatten)]
        dim: Dim,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Write weights as doubles instead of exact rationals.
        #[arg(long)]
        floats: bool,
        /// Compile the expansion as is, without reducing it first.
        #[arg(long)]
        no_reduce: bool,
        #[arg(long, default_value = "first")]
        kernel_strategy: String,
    },
    /// Newton polytopes of homogeneous maxima.
    Polytope {
        #[command(subcommand)]
        op: PolytopeOp,
    },
    /// Reduce under several kernel strategies and compare the outputs.
    Probe {
        #[command(flatten)]
        dim: Dim,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "first,last,random:1,random:2,random:3")]
        strategies: String,
    },
}

#[derive(Subcommand)]
enum PolytopeOp {
    /// Polytope of a combination with positive coefficients.
    Tau {
        #[command(flatten)]
        dim: Dim,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Minkowski sum of two polytopes.
    Minkowski {
        #[command(flatten)]
        dim: Dim,
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Support value in a direction.
    Support {
        #[command(flatten)]
        dim: Dim,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
    /// Face maximizing a direction.
    Face {
        #[command(flatten)]
        dim: Dim,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Sample,
    #[value(name = "1d")]
    OneD,
    Homogeneous,
}

/// Why a command failed, with its exit code.
enum Failure {
    Usage(String),
    Core(Error),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidKernelVector(msg) => Failure::Invariant(msg),
            e => Failure::Core(e),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Core(_) => 2,
            Failure::Invariant(_) => 4,
        }
    }

    fn report(&self, format: Format) -> String {
        let (kind, message, position) = match self {
            Failure::Usage(m) => ("usage", m.clone(), None),
            Failure::Core(e) => (e.kind(), e.to_string(), e.position()),
            Failure::Invariant(m) => ("invariant_violation", m.clone(), None),
        };
        if format == Format::Json {
            json!({ "error": { "kind": kind, "message": message, "position": position } }).to_string()
        } else {
            format!("error: {message}")
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

/// Text written to standard output plus the exit code.
struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.output_format;
    let result = run(&cli);
    match result {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            if !out.stdout.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("{}", f.report(format));
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let fmt = cli.output_format;
    match &cli.command {
        Command::Expand { dim, expr } => cmd_expand(fmt, dim.get(), expr),
        Command::Reduce {
            dim,
            expr,
            kernel_strategy,
            trace,
        } => {
            let strategy = parse_strategy(kernel_strategy, cli.seed)?;
            cmd_reduce(fmt, dim.get(), expr, strategy, trace.as_deref())
        }
        Command::Eval { dim, expr, at } => {
            let e = read_expr(expr, dim.get())?;
            let x = parse_point(at, dim.get())?;
            let v = e.eval(&x)?;
            Ok(Outcome::ok(match fmt {
                Format::Json => json!({ "value": v.to_string() }).to_string(),
                _ => v.to_string(),
            }))
        }
        Command::Equiv {
            dim,
            left,
            right,
            method,
        } => cmd_equiv(fmt, dim.get(), left, right, *method, cli.samples as usize, cli.seed),
        Command::Relu {
            dim,
            expr,
            floats,
            no_reduce,
            kernel_strategy,
        } => {
            let strategy = parse_strategy(kernel_strategy, cli.seed)?;
            cmd_relu(fmt, dim.get(), expr, *floats, !*no_reduce, strategy)
        }
        Command::Polytope { op } => cmd_polytope(fmt, op),
        Command::Probe { dim, expr, strategies } => {
            let strategies = strategies
                .split(',')
                .map(|s| parse_strategy(s.trim(), cli.seed))
                .collect::<Result<Vec<_>, _>>()?;
            let c = lower(&read_expr(expr, dim.get())?);
            let report = conjecture_probe_lincomb(&c, &strategies)?;
            Ok(Outcome::ok(match fmt {
                Format::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
                _ => {
                    let mut s = String::new();
                    for o in &report.outcomes {
                        s.push_str(&format!("{}: {} summands\n", o.strategy, o.summands));
                    }
                    s.push_str(&format!(
                        "{} ({} distinct outputs)",
                        if report.identical { "identical" } else { "different" },
                        report.distinct_outputs
                    ));
                    s
                }
            }))
        }
    }
}

/// Reads `@FILE`, `-` (standard input) or the literal argument.
fn read_source(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn read_expr(arg: &str, n: usize) -> Result<ExprNode, Failure> {
    Ok(parse(read_source(arg)?.trim(), n)?)
}

fn parse_point(text: &str, n: usize) -> Result<Vec<Rational>, Failure> {
    let x = text
        .split(',')
        .map(|t| parse_rational(t.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        }
        .into());
    }
    Ok(x)
}

fn parse_strategy(text: &str, seed: u64) -> Result<KernelStrategy, Failure> {
    match text {
        "first" => Ok(KernelStrategy::First),
        "last" => Ok(KernelStrategy::Last),
        "random" => Ok(KernelStrategy::SeededRandom(seed)),
        _ => text
            .strip_prefix("random:")
            .and_then(|s| s.parse().ok())
            .map(KernelStrategy::SeededRandom)
            .ok_or_else(|| Failure::Usage(format!("unknown kernel strategy {text:?}"))),
    }
}

/// Constituents in input order when the expression is a plain maximum of
/// affine functions, so trace labels follow the user's numbering.
fn input_names(e: &ExprNode) -> Option<Vec<AffineFunc>> {
    let ExprNode::Max(args) = e else { return None };
    let mut names: Vec<AffineFunc> = Vec::new();
    for a in args {
        let ExprNode::Affine(f) = a else { return None };
        if !names.contains(f) {
            names.push(f.clone());
        }
    }
    Some(names)
}

fn cmd_expand(fmt: Format, n: usize, expr: &str) -> CmdResult {
    let c = expand(&read_expr(expr, n)?);
    let stats = ExpansionStats::of(&c);
    Ok(Outcome::ok(match fmt {
        Format::Json => {
            let v = json!({ "lincomb": c, "stats": stats });
            serde_json::to_string_pretty(&v).expect("expansion serializes")
        }
        _ => format!("{c}\n{}", stats_text(&stats)),
    }))
}

fn stats_text(s: &ExpansionStats) -> String {
    let histogram: Vec<String> = s
        .constituent_histogram
        .iter()
        .map(|(k, v)| format!("{k}:{v}"))
        .collect();
    format!(
        "summands {}, height {}, constituents per summand {}",
        s.summands,
        s.height,
        histogram.join(" ")
    )
}

fn cmd_reduce(fmt: Format, n: usize, expr: &str, strategy: KernelStrategy, trace: Option<&Path>) -> CmdResult {
    let e = read_expr(expr, n)?;
    let c = lower(&e);
    let (reduced, trees) = reduce_lincomb_traced(&c, &strategy)?;
    if !is_reduced(&reduced) {
        return Err(Failure::Invariant(
            "reduction left affinely dependent constituents".into(),
        ));
    }
    let names = input_names(&e);
    let dot = || TraceNode::to_dot(&trees, names.as_deref());
    let trace_json = || {
        let v: Vec<_> = trees.iter().map(|t| t.to_json(names.as_deref())).collect();
        serde_json::to_string_pretty(&v).expect("trace serializes")
    };
    if let Some(path) = trace {
        let body = if path.extension().is_some_and(|x| x == "json") {
            trace_json()
        } else {
            dot()
        };
        fs::write(path, body).map_err(|e| Failure::Usage(format!("writing {}: {e}", path.display())))?;
    }
    Ok(Outcome::ok(match fmt {
        Format::Json => reduced.to_json(),
        Format::Dot => dot(),
        Format::Text => format!("{reduced}\n{}", stats_text(&ExpansionStats::of(&reduced))),
    }))
}

fn cmd_equiv(fmt: Format, n: usize, left: &str, right: &str, method: Method, samples: usize, seed: u64) -> CmdResult {
    let a = read_expr(left, n)?;
    let b = read_expr(right, n)?;
    let homogeneous = |e: &ExprNode| e.leaves().iter().all(|f| f.is_linear());
    let report = match method {
        Method::Sample => equiv_sample(&a, &b, samples, seed)?,
        Method::OneD => equiv_1d(&lower(&a), &lower(&b))?,
        Method::Homogeneous => equiv_homogeneous(&lower(&a), &lower(&b))?,
        Method::Auto if n == 1 => equiv_1d(&lower(&a), &lower(&b))?,
        Method::Auto if n == 2 && homogeneous(&a) && homogeneous(&b) => equiv_homogeneous(&lower(&a), &lower(&b))?,
        Method::Auto => equiv_sample(&a, &b, samples, seed)?,
    };
    let code = if report.verdict == Verdict::NotEqual { 3 } else { 0 };
    let stdout = match fmt {
        Format::Json => report.to_json(),
        _ => report_text(&report),
    };
    Ok(Outcome { stdout, code })
}

fn report_text(r: &EquivReport) -> String {
    match (&r.verdict, &r.witness) {
        (Verdict::NotEqual, Some(w)) => {
            let point: Vec<String> = w.point.iter().map(ToString::to_string).collect();
            format!("not-equal at ({}): {} vs {}", point.join(", "), w.left, w.right)
        }
        (Verdict::ProbablyEqual, _) => format!("probably-equal ({} samples, seed {})", r.samples, r.seed),
        _ => "equal".to_string(),
    }
}

fn cmd_relu(fmt: Format, n: usize, expr: &str, floats: bool, reduce: bool, strategy: KernelStrategy) -> CmdResult {
    let mut c = lower(&read_expr(expr, n)?);
    if reduce {
        c = pwlmax::reduce::reduce_lincomb(&c, &strategy)?;
    }
    let net = emit(&c);
    let stats = net.stats();
    let network = if floats { net.to_json_floats() } else { net.to_json() };
    Ok(Outcome::ok(match fmt {
        Format::Json => {
            let v = json!({
                "network": serde_json::from_str::<serde_json::Value>(&network).expect("valid JSON"),
                "stats": stats,
            });
            serde_json::to_string_pretty(&v).expect("network serializes")
        }
        _ => {
            let shapes: Vec<String> = net
                .layers()
                .iter()
                .map(|l| format!("{} {}", l.activation, l.width()))
                .collect();
            format!("{stats}\nlayers: {}", shapes.join(", "))
        }
    }))
}

/// The polytope of a combination whose coefficients are all positive.
fn read_polytope(arg: &str, n: usize) -> Result<VPolytope, Failure> {
    let c: LinComb = lower(&read_expr(arg, n)?);
    let (pos, neg) = polytope_parts(&c)?;
    if neg != VPolytope::origin(n) {
        return Err(Failure::Usage(
            "expression has negative coefficients; no single polytope".into(),
        ));
    }
    Ok(pos)
}

fn parse_direction(text: &str, n: usize) -> Result<Direction, Failure> {
    Ok(Direction::new(parse_point(text, n)?)?)
}

fn polytope_out(fmt: Format, p: &VPolytope) -> String {
    match fmt {
        Format::Json => p.to_json(),
        _ => p.to_string(),
    }
}

fn cmd_polytope(fmt: Format, op: &PolytopeOp) -> CmdResult {
    let out = match op {
        PolytopeOp::Tau { dim, expr } => polytope_out(fmt, &read_polytope(expr, dim.get())?),
        PolytopeOp::Minkowski { dim, left, right } => {
            let p = read_polytope(left, dim.get())?;
            let q = read_polytope(right, dim.get())?;
            polytope_out(fmt, &minkowski(&p, &q)?)
        }
        PolytopeOp::Support { dim, expr, dir } => {
            let p = read_polytope(expr, dim.get())?;
            let h = support(&p, &parse_direction(dir, dim.get())?)?;
            match fmt {
                Format::Json => json!({ "support": h.to_string() }).to_string(),
                _ => h.to_string(),
            }
        }
        PolytopeOp::Face { dim, expr, dir } => {
            let p = read_polytope(expr, dim.get())?;
            polytope_out(fmt, &face(&p, &parse_direction(dir, dim.get())?)?)
        }
    };
    Ok(Outcome::ok(out))
}
