//! The `greedy` command line: compute, verify, probe, render and expand.

pub mod format;
pub mod svg;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use greedy_core::basisops::{expand_pointed_basis, BasisKind, DEFAULT_CAP};
use greedy_core::cluster::{
    cluster_variable, denominator_vector_of, probe_positivity, ClusterStatus, DEFAULT_TERM_BUDGET, DEFAULT_WINDOW,
};
use greedy_core::dyck::{max_dyck_path, shadow};
use greedy_core::greedy::{greedy, greedy_max_recurrence, support_region, Method, PointedElement};
use greedy_core::verify::{run_suite, Suite, VerifyParams};
use greedy_core::{LaurentPoly, SeedParams};
use num_bigint::Sign;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

pub const THREADS_ENV: &str = "GREEDY_THREADS";

#[derive(Debug, Parser)]
#[command(name = "greedy", version, about = "Greedy elements of rank-2 cluster algebras")]
pub struct Cli {
    /// Worker threads; GREEDY_THREADS takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Recurrence,
    Linear,
    Dyck,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Symmetry,
    Supports,
    Equivalence,
    Inequality,
    Basis,
    Positivity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Standard,
    Greedy,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    #[arg(short = 'b', default_value_t = 2)]
    pub b: u32,
    #[arg(short = 'c', default_value_t = 2)]
    pub c: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the greedy element x[a1,a2].
    Compute {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(short = 'a', num_args = 2, value_names = ["A1", "A2"], allow_negative_numbers = true, required = true)]
        a: Vec<i64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Recurrence)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a property suite over [min, max]^2.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = -2, allow_negative_numbers = true)]
        min: i64,
        #[arg(long, default_value_t = 6, allow_negative_numbers = true)]
        max: i64,
        /// Cluster window for the positivity suite.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-3i64, 4])]
        window: Vec<i64>,
    },
    /// Expand a combination of greedy elements at every cluster of a window.
    ProbeConjecture {
        #[arg(short = 'b', default_value_t = 3)]
        b: u32,
        #[arg(short = 'c', default_value_t = 3)]
        c: u32,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true,
              default_values_t = [DEFAULT_WINDOW.0, DEFAULT_WINDOW.1])]
        window: Vec<i64>,
        /// A term `A1,A2,COEFF`; repeatable. Defaults to x[4,7] + x[7,4] - x[1,1].
        #[arg(long = "term", allow_hyphen_values = true)]
        terms: Vec<String>,
        /// Largest expansion attempted, in terms.
        #[arg(long, default_value_t = DEFAULT_TERM_BUDGET)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write an SVG figure to stdout.
    Render {
        #[command(subcommand)]
        what: RenderWhat,
    },
    /// Expand an element in the standard or greedy basis.
    ExpandBasis {
        #[command(flatten)]
        seed: SeedArgs,
        /// Expand x[A1,A2]^pow.
        #[arg(short = 'a', num_args = 2, value_names = ["A1", "A2"], allow_negative_numbers = true)]
        a: Option<Vec<i64>>,
        #[arg(long, default_value_t = 1)]
        pow: u32,
        /// Expand a polynomial given as JSON instead.
        #[arg(long, conflicts_with = "a")]
        poly: Option<String>,
        #[arg(long, value_enum, default_value_t = BasisArg::Standard)]
        basis: BasisArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the cluster variable x_m.
    ClusterVar {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(short = 'm', allow_negative_numbers = true)]
        m: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
pub enum RenderWhat {
    /// The maximal Dyck path D^{A1 x A2}.
    Dyck { a1: usize, a2: usize },
    /// Shadows of a set of vertical edges.
    Shadows {
        a1: usize,
        a2: usize,
        #[arg(short = 'b')]
        b: usize,
        #[arg(long, value_delimiter = ',')]
        s2: Vec<usize>,
    },
    /// The support region of x[A1,A2] with its pointed support.
    Support {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(short = 'a', num_args = 2, value_names = ["A1", "A2"], allow_negative_numbers = true, required = true)]
        a: Vec<i64>,
    },
}

/// A failed command: exit code and message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

type CmdResult = Result<i32, Failure>;

fn seed(b: u32, c: u32) -> Result<SeedParams, Failure> {
    SeedParams::new(b, c).map_err(|e| Failure::usage(e.to_string()))
}

fn write_out(out: &mut (dyn Write + Send), s: &str) -> Result<(), Failure> {
    writeln!(out, "{s}").map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })
}

/// Thread count from `GREEDY_THREADS`, then `--threads`.
pub fn thread_count(flag: Option<usize>, env: Option<&str>) -> Result<Option<usize>, String> {
    match env {
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        },
        None => match flag {
            Some(0) => Err("--threads must be positive".into()),
            other => Ok(other),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn compute(
    b: u32,
    c: u32,
    a1: i64,
    a2: i64,
    method: MethodArg,
    fmt: Format,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> CmdResult {
    seed(b, c)?;
    let methods: Vec<Method> = match method {
        MethodArg::Recurrence => vec![Method::MaxRecurrence],
        MethodArg::Linear => vec![Method::LinearRecurrence],
        MethodArg::Dyck => vec![Method::Dyck],
        MethodArg::All => Method::ALL.into_iter().filter(|m| m.applies(a1, a2)).collect(),
    };
    if method == MethodArg::Linear && !(a1 > 0 && a2 > 0) {
        return Err(Failure::usage(format!("--method linear needs a1, a2 > 0, got ({a1},{a2})")));
    }
    let mut results: Vec<(Method, PointedElement)> = Vec::new();
    for m in &methods {
        let e = greedy(b, c, a1, a2, *m).map_err(|e| Failure::usage(format!("{}: {e}", m.name())))?;
        results.push((*m, e));
    }
    let (_, first) = &results[0];
    let names: Vec<&str> = methods.iter().map(|m| m.name()).collect();
    if results.len() > 1 {
        if let Some((m, _)) = results.iter().find(|(_, e)| e.grid != first.grid) {
            return Err(Failure {
                code: EXIT_INTERNAL,
                message: format!("{} disagrees with {} on x[{a1},{a2}]", m.name(), results[0].0.name()),
            });
        }
        let _ = writeln!(err, "agreement: {}", names.join(", "));
    }
    let text = match fmt {
        Format::Text => first.to_string(),
        Format::Json => format::element_json(first, &names).to_string(),
        Format::Latex => format::latex_pointed(first),
        Format::Svg => svg::support_svg(&support_region(b, c, a1, a2), first),
    };
    write_out(out, text.trim_end())?;
    Ok(EXIT_OK)
}

fn verify(
    suite: SuiteArg,
    b: u32,
    c: u32,
    min: i64,
    max: i64,
    window: &[i64],
    out: &mut (dyn Write + Send),
) -> CmdResult {
    let s = seed(b, c)?;
    if min > max {
        return Err(Failure::usage(format!("--min {min} exceeds --max {max}")));
    }
    let suite = match suite {
        SuiteArg::Symmetry => Suite::Symmetry,
        SuiteArg::Supports => Suite::Supports,
        SuiteArg::Equivalence => Suite::Equivalence,
        SuiteArg::Inequality => Suite::Inequality,
        SuiteArg::Basis => Suite::Basis,
        SuiteArg::Positivity => Suite::Positivity,
    };
    let params = VerifyParams { seed: s, min, max, window: (window[0], window[1]) };
    let report = run_suite(suite, &params);
    write_out(out, &report.to_string())?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_USAGE })
}

fn parse_term(s: &str) -> Result<(i64, i64, num_bigint::BigInt), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Failure::usage(format!("--term expects A1,A2,COEFF, got {s:?}")));
    }
    let int = |t: &str| t.parse::<i64>().map_err(|e| Failure::usage(format!("bad index {t:?}: {e}")));
    Ok((int(parts[0])?, int(parts[1])?, format::parse_coeff(parts[2]).map_err(Failure::usage)?))
}

fn probe(
    b: u32,
    c: u32,
    window: &[i64],
    terms: &[String],
    budget: usize,
    fmt: Format,
    out: &mut (dyn Write + Send),
) -> CmdResult {
    let s = seed(b, c)?;
    let (lo, hi) = (window[0], window[1]);
    if lo > hi {
        return Err(Failure::usage(format!("empty window [{lo},{hi}]")));
    }
    let terms: Vec<(i64, i64, num_bigint::BigInt)> = if terms.is_empty() {
        vec![(4, 7, 1.into()), (7, 4, 1.into()), (1, 1, (-1).into())]
    } else {
        terms.iter().map(|t| parse_term(t)).collect::<Result<_, _>>()?
    };
    let mut x = LaurentPoly::zero();
    let mut element = String::new();
    for (i, (a1, a2, k)) in terms.iter().enumerate() {
        let e = greedy_max_recurrence(b, c, *a1, *a2).map_err(|e| Failure::usage(e.to_string()))?;
        x += &e.to_laurent().scale(k);
        let mag = k.magnitude().to_string();
        let sign = match (i, k.sign()) {
            (0, Sign::Minus) => "-",
            (0, _) => "",
            (_, Sign::Minus) => " - ",
            _ => " + ",
        };
        let mag = if mag == "1" { String::new() } else { format!("{mag}*") };
        element.push_str(&format!("{sign}{mag}x[{a1},{a2}]"));
    }
    let report = probe_positivity(&x, s, (lo, hi), budget).map_err(|e| Failure::usage(e.to_string()))?;
    match fmt {
        Format::Json => {
            let clusters: Vec<serde_json::Value> = report
                .clusters
                .iter()
                .map(|(m, st)| match st {
                    ClusterStatus::Evaluated { terms, min_coefficient } => {
                        json!({ "m": m, "terms": terms, "min_coefficient": min_coefficient.to_string() })
                    }
                    ClusterStatus::Unevaluated { reached_terms_above } => {
                        json!({ "m": m, "unevaluated": true, "terms_above": reached_terms_above })
                    }
                })
                .collect();
            let v = json!({
                "evidence_only": true,
                "b": b, "c": c, "element": element, "window": [lo, hi],
                "all_nonnegative": report.all_nonnegative(),
                "negative_at": report.negative_at(),
                "unevaluated": report.unevaluated(),
                "clusters": clusters,
            });
            write_out(out, &v.to_string())?;
        }
        _ => {
            let mut lines =
                vec![format!("evidence only: finite probe of {element} at (b,c)=({b},{c}), clusters {lo}..{hi}")];
            for (m, st) in &report.clusters {
                lines.push(match st {
                    ClusterStatus::Evaluated { terms, min_coefficient } => {
                        format!("m={m}: {terms} terms, min coefficient {min_coefficient}")
                    }
                    ClusterStatus::Unevaluated { reached_terms_above } => {
                        format!("m={m}: unevaluated (more than {reached_terms_above} terms)")
                    }
                });
            }
            let neg = report.negative_at();
            let skipped = report.unevaluated();
            lines.push(if !neg.is_empty() {
                format!("negative coefficients at m = {neg:?}")
            } else if !skipped.is_empty() {
                format!("nonnegative at every evaluated cluster; {} clusters unevaluated", skipped.len())
            } else {
                "nonnegative at every cluster in the window".into()
            });
            write_out(out, &lines.join("\n"))?;
        }
    }
    Ok(EXIT_OK)
}

fn render(what: &RenderWhat, out: &mut (dyn Write + Send)) -> CmdResult {
    let text = match what {
        RenderWhat::Dyck { a1, a2 } => {
            if a1 + a2 == 0 || *a1.max(a2) > 400 {
                return Err(Failure::usage("dyck needs 0 < a1 + a2 and sides up to 400"));
            }
            svg::dyck_svg(&max_dyck_path(*a1, *a2))
        }
        RenderWhat::Shadows { a1, a2, b, s2 } => {
            if *a1 == 0 || *a2 == 0 || *b == 0 || *a1.max(a2) > 400 {
                return Err(Failure::usage("shadows needs positive a1, a2, b and sides up to 400"));
            }
            let path = max_dyck_path(*a1, *a2);
            let s2: BTreeSet<usize> = s2.iter().copied().collect();
            let report = shadow(&path, &s2, *b).map_err(|e| Failure::usage(e.to_string()))?;
            svg::shadows_svg(&path, &s2, &report)
        }
        RenderWhat::Support { seed: sa, a } => {
            seed(sa.b, sa.c)?;
            let e = greedy_max_recurrence(sa.b, sa.c, a[0], a[1]).map_err(|e| Failure::usage(e.to_string()))?;
            svg::support_svg(&support_region(sa.b, sa.c, a[0], a[1]), &e)
        }
    };
    write_out(out, text.trim_end())?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn expand(
    b: u32,
    c: u32,
    a: &Option<Vec<i64>>,
    pow: u32,
    poly: &Option<String>,
    basis: BasisArg,
    cap: usize,
    fmt: Format,
    out: &mut (dyn Write + Send),
) -> CmdResult {
    let s = seed(b, c)?;
    let x = match (a, poly) {
        (Some(a), None) => greedy_max_recurrence(b, c, a[0], a[1])
            .map_err(|e| Failure::usage(e.to_string()))?
            .to_laurent()
            .pow(pow as i64)
            .map_err(|e| Failure::usage(e.to_string()))?,
        (None, Some(p)) => LaurentPoly::from_json_str(p).map_err(|e| Failure::usage(e.to_string()))?,
        _ => return Err(Failure::usage("give either -a A1 A2 or --poly JSON")),
    };
    let kind = match basis {
        BasisArg::Standard => BasisKind::Standard,
        BasisArg::Greedy => BasisKind::Greedy,
    };
    let e = expand_pointed_basis(&x, s, kind, cap).map_err(|e| Failure::usage(e.to_string()))?;
    let text = match fmt {
        Format::Json => format::expansion_json(&e).to_string(),
        _ => format::expansion_text(&e),
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

fn cluster_var(b: u32, c: u32, m: i64, fmt: Format, out: &mut (dyn Write + Send)) -> CmdResult {
    let s = seed(b, c)?;
    let x = cluster_variable(s, m).map_err(|e| Failure::usage(e.to_string()))?;
    let text = match fmt {
        Format::Json => {
            let (d1, d2) = denominator_vector_of(s, m).map_err(|e| Failure::usage(e.to_string()))?;
            let mut v = x.to_json();
            let obj = v.as_object_mut().expect("object");
            obj.insert("m".into(), json!(m));
            obj.insert("denominator".into(), json!([d1.to_string(), d2.to_string()]));
            v.to_string()
        }
        Format::Latex => format::latex_poly(&x),
        _ => x.to_string(),
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

pub fn execute(cli: &Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CmdResult {
    match &cli.command {
        Command::Compute { seed: sa, a, method, format } => compute(sa.b, sa.c, a[0], a[1], *method, *format, out, err),
        Command::Verify { suite, seed: sa, min, max, window } => verify(*suite, sa.b, sa.c, *min, *max, window, out),
        Command::ProbeConjecture { b, c, window, terms, budget, format } => {
            probe(*b, *c, window, terms, *budget, *format, out)
        }
        Command::Render { what } => render(what, out),
        Command::ExpandBasis { seed: sa, a, pow, poly, basis, cap, format } => {
            expand(sa.b, sa.c, a, *pow, poly, *basis, *cap, *format, out)
        }
        Command::ClusterVar { seed: sa, m, format } => cluster_var(sa.b, sa.c, *m, *format, out),
    }
}

/// Parses `args`, runs the command on a pool of the requested size and
/// returns the exit code.
pub fn run<I, T>(args: I, env_threads: Option<&str>, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{shown}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{shown}");
                    EXIT_USAGE
                }
            };
        }
    };
    let threads = match thread_count(cli.threads, env_threads) {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INTERNAL;
        }
    };
    match pool.install(|| execute(&cli, out, err)) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
