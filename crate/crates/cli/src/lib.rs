//! `knotgeo` command line: argument parsing, registry loading and output
//! assembly. `run` is the whole program; `main` only forwards process state.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use knotgeo::geography::{
    default_box, gamma4_bounds, symbolic_summary, verify_torus_theorem, Engine, QueryBox, TheoremComparison,
    TorusFamily,
};
use knotgeo::rational;
use knotgeo::registry::ForbiddenKind;
use knotgeo::report::{build_document, emit_ascii, emit_json, emit_svg};
use knotgeo::{Calculator, Error, InvariantBundle, KnotExpr, Options, Registry};

pub const REGISTRY_ENV: &str = "KNOTGEO_REGISTRY";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REGISTRY: i32 = 2;
pub const EXIT_DIFF: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "knotgeo", version, about = "Nonorientable surface geography of knots")]
struct Cli {
    /// Extra registry JSON merged over the builtin one (default: $KNOTGEO_REGISTRY).
    #[arg(long, global = true, value_name = "PATH")]
    registry: Option<PathBuf>,
    /// Disable the mirrored delta line for knots with delta > 0.
    #[arg(long, global = true)]
    no_mirror_delta: bool,
    /// Accept Upsilon values that rely on base cases beyond the anchored range.
    #[arg(long, global = true)]
    allow_extrapolated_upsilon_base: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the invariant bundle.
    Invariants {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Classify every lattice point of a box.
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// e_min,e_max,h_max
        #[arg(long = "box", value_name = "E_MIN,E_MAX,H_MAX", allow_hyphen_values = true)]
        qbox: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the gamma4 bounds with their certificates.
    Gamma4 {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Compare the engine with the closed-form statement for T(2,n) or T(3,n).
    Verify {
        #[arg(value_enum)]
        family: Family,
        n: u64,
        #[arg(long = "box", value_name = "E_MIN,E_MAX,H_MAX", allow_hyphen_values = true)]
        qbox: Option<String>,
    },
    /// Draw the classification.
    Plot {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long = "box", value_name = "E_MIN,E_MAX,H_MAX", allow_hyphen_values = true)]
        qbox: Option<String>,
        #[arg(long, value_enum, default_value_t = PlotFormat::Svg)]
        format: PlotFormat,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Ascii,
    Svg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlotFormat {
    Svg,
    Ascii,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    T2,
    T3,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Registry(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Registry(_) => EXIT_REGISTRY,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Registry(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) => Failure::Registry(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Settings that are not subcommand-specific.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub registry_path: Option<PathBuf>,
    pub options: Options,
}

struct Context {
    registry: Registry,
    options: Options,
}

impl Context {
    fn load(cfg: &CliConfig, err: &mut dyn Write) -> Result<Self, Failure> {
        let mut registry = Registry::builtin();
        if let Some(path) = &cfg.registry_path {
            let user = Registry::load(path).map_err(|e| Failure::Registry(e.to_string()))?;
            for w in registry.merge(user) {
                let _ = writeln!(err, "warning: {w}");
            }
        }
        Ok(Context { registry, options: cfg.options })
    }

    fn parse(&self, text: &str) -> Result<KnotExpr, Failure> {
        self.registry.parse(text).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn bundle(&self, text: &str) -> Result<InvariantBundle, Failure> {
        let k = self.parse(text)?;
        Ok(Calculator::new(&self.registry, self.options).bundle(&k)?)
    }
}

fn parse_box(text: &str) -> Result<QueryBox, Failure> {
    let bad = || Failure::Usage(format!("invalid box {text:?}: expected e_min,e_max,h_max"));
    let parts: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    match parts[..] {
        [a, b, c] => Ok(QueryBox::new(a, b, c)?),
        _ => Err(bad()),
    }
}

fn resolve_box(text: &Option<String>, bundle: &InvariantBundle) -> Result<QueryBox, Failure> {
    match text {
        Some(t) => parse_box(t),
        None => Ok(default_box(bundle)),
    }
}

/// Runs one invocation. Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "error: {}", text.trim_start_matches("error: "));
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let registry_path = cli
        .registry
        .clone()
        .or_else(|| std::env::var_os(REGISTRY_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    let cfg = CliConfig {
        registry_path,
        options: Options {
            allow_extrapolated_upsilon: cli.allow_extrapolated_upsilon_base,
            mirror_delta: !cli.no_mirror_delta,
        },
    };
    let mut buf = String::new();
    let code = match dispatch(&cli.command, &cfg, &mut buf, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            return f.code();
        }
    };
    if out.write_all(buf.as_bytes()).is_err() {
        return EXIT_USAGE;
    }
    code
}

fn dispatch(cmd: &Command, cfg: &CliConfig, out: &mut String, err: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = Context::load(cfg, err)?;
    match cmd {
        Command::Invariants { expr } => invariants(&ctx, expr, out),
        Command::Classify { expr, qbox, format } => {
            let fmt = match format {
                Format::Json => None,
                Format::Ascii => Some(PlotFormat::Ascii),
                Format::Svg => Some(PlotFormat::Svg),
            };
            render(&ctx, expr, qbox, fmt, out)
        }
        Command::Plot { expr, qbox, format } => render(&ctx, expr, qbox, Some(*format), out),
        Command::Gamma4 { expr } => gamma4(&ctx, expr, out),
        Command::Verify { family, n, qbox } => verify(&ctx, *family, *n, qbox, out),
    }
}

fn invariants(ctx: &Context, expr: &str, out: &mut String) -> Result<i32, Failure> {
    let b = ctx.bundle(expr)?;
    out.push_str(&format!(
        "sigma: {}, upsilon1: {}, arf: {}, det: {}\n",
        b.sigma,
        rational::to_text(&b.upsilon1),
        b.arf,
        b.det
    ));
    out.push_str(&format!("knot: {}\n", b.knot.to_text()));
    let delta = b.delta.as_ref().map_or_else(|| "unknown".to_string(), rational::to_text);
    out.push_str(&format!("delta: {delta}\n"));
    out.push_str(&format!("g4_upper: {}\n", b.g4_upper));
    out.push_str(&format!("gamma4_upper: {} ({})\n", b.gamma4_upper, b.gamma4_upper_reason));
    if let Some(g) = b.gamma4_exact {
        out.push_str(&format!("gamma4_exact: {g}\n"));
    }
    for a in &b.apexes {
        out.push_str(&format!("apex: {} {}\n", a.point, a.certificate));
    }
    for f in &b.forbidden_facts {
        let what = match &f.kind {
            ForbiddenKind::HLevel { h } => format!("h = {h}"),
            ForbiddenKind::Point(p) => p.to_string(),
        };
        out.push_str(&format!("forbidden: {what} ({})\n", f.provenance));
    }
    if b.upsilon_extrapolated {
        out.push_str("upsilon1 uses extrapolated base cases\n");
    }
    Ok(EXIT_OK)
}

fn render(
    ctx: &Context,
    expr: &str,
    qbox: &Option<String>,
    format: Option<PlotFormat>,
    out: &mut String,
) -> Result<i32, Failure> {
    let b = ctx.bundle(expr)?;
    let qbox = resolve_box(qbox, &b)?;
    let report = symbolic_summary(&b)?;
    let points = Engine::new(&b)?.classify_box(&qbox)?;
    let text = match format {
        None => emit_json(&build_document(&b, &report, &qbox, &points, &ctx.registry.hash())),
        Some(PlotFormat::Ascii) => emit_ascii(&points, &qbox)?,
        Some(PlotFormat::Svg) => emit_svg(&report, &points, &qbox)?,
    };
    out.push_str(&text);
    Ok(EXIT_OK)
}

fn gamma4(ctx: &Context, expr: &str, out: &mut String) -> Result<i32, Failure> {
    let b = ctx.bundle(expr)?;
    let report = symbolic_summary(&b)?;
    let g = gamma4_bounds(&b, &report)?;
    out.push_str(&format!("gamma4: {} ≤ γ₄ ≤ {}\n", g.lower, g.upper));
    out.push_str(&format!("lower: {}\n", g.lower_certificate));
    out.push_str(&format!("upper: {}\n", g.upper_certificate));
    Ok(EXIT_OK)
}

fn verify(ctx: &Context, family: Family, n: u64, qbox: &Option<String>, out: &mut String) -> Result<i32, Failure> {
    let family = match family {
        Family::T2 => TorusFamily::Two,
        Family::T3 => TorusFamily::Three,
    };
    let qbox = qbox.as_deref().map(parse_box).transpose()?;
    let c = verify_torus_theorem(family, n, qbox, &ctx.registry, ctx.options)?;
    write_comparison(&c, out);
    Ok(if c.is_verified() { EXIT_OK } else { EXIT_DIFF })
}

fn write_comparison(c: &TheoremComparison, out: &mut String) {
    let q = &c.qbox;
    let verdict = if c.is_verified() { "verified" } else { "DIFF" };
    out.push_str(&format!("T({},{}): {verdict}\n", c.family.p(), c.n));
    out.push_str(&format!("box: e in [{}, {}], h <= {}\n", q.e_min, q.e_max, q.h_max));
    out.push_str(&format!("unknown points: {}\n", c.unknown_count));
    for r in &c.unknown_rays {
        let (de, dh) = r.direction();
        out.push_str(&format!("unknown ray: {} direction ({de:+},{dh:+})\n", r.start));
    }
    match (c.expected_unknown_count, &c.expected_ray) {
        (Some(k), _) => out.push_str(&format!("expected unknown points: {k}\n")),
        (None, Some(r)) => out.push_str(&format!("expected unknown ray: {}\n", r.start)),
        (None, None) => out.push_str("expected unknown points: 0\n"),
    }
    for p in &c.endpoint_conflicts {
        out.push_str(&format!("stated both realizable and unknown: {p}\n"));
    }
    if let Some(k) = c.literal_unknown_count {
        out.push_str(&format!(
            "literal reading: {k} unknown points, {} differences\n",
            c.literal_diff.len()
        ));
    }
    out.push_str(&format!("differences: {}\n", c.diff.len()));
    for d in &c.diff {
        out.push_str(&format!("  {d}\n"));
    }
}
