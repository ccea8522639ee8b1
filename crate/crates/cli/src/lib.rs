//! Command-line front end for `vdkernel`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage error,
//! 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use vdkernel::simulate::write_endpoint_csv;
use vdkernel::{kernel, run_suite, simulate, CaseTag, EPoint, Error, KernelParams, QuadConfig, SimPlan, Suite};

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping the number of simulation workers.
pub const THREADS_ENV: &str = "VDKERNEL_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub gamma: f64,
    pub quad: QuadConfig,
    pub output_format: OutputFormat,
    pub out_path: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "vdkernel", version, about = "Heat kernels on a glued 3D/half-line space")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Distortion parameter γ > 0.
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, global = true, default_value_t = QuadConfig::default().abs_tol)]
    abs_tol: f64,
    #[arg(long, global = true, default_value_t = QuadConfig::default().rel_tol)]
    rel_tol: f64,
    #[arg(long, global = true, default_value_t = QuadConfig::default().max_panels)]
    max_panels: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate p(t, x, y) at one pair of points.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Point as JSON, e.g. '{"component":"E1","coords":[1,0,0]}'.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Tabulate the kernel over times, radii and cases.
    Table {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        t_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        radius_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "i,ii,iii,iv")]
        cases: Vec<String>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a simulation plan and write path endpoints.
    Simulate {
        /// Plan as inline JSON or a path to a JSON file.
        #[arg(long)]
        plan: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

/// Failure modes, each mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::InvalidPoint(_)
            | Error::InvalidGamma(_)
            | Error::InvalidConfig(_)
            | Error::InvalidPlan(_)
            | Error::ResourceGuard(_)
            | Error::UnsupportedPattern(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl CliConfig {
    fn from_args(g: &GlobalArgs) -> Result<Self, Failure> {
        let quad = QuadConfig { abs_tol: g.abs_tol, rel_tol: g.rel_tol, max_panels: g.max_panels, ..QuadConfig::default() };
        quad.validate()?;
        KernelParams::new(g.gamma)?;
        Ok(Self { gamma: g.gamma, quad, output_format: g.format, out_path: g.out.clone() })
    }

    pub fn params(&self) -> KernelParams {
        KernelParams::new(self.gamma).expect("validated")
    }

    fn sink(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out_path {
            Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
            None => Box::new(io::BufWriter::new(io::stdout().lock())),
        })
    }
}

fn parse_point(name: &str, s: &str) -> Result<EPoint, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("--{name}: {e}")))
}

fn check_time(t: f64) -> Result<(), Failure> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--t must be finite and > 0, got {t}")))
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

#[derive(Serialize)]
struct EvalOut {
    t: f64,
    x: EPoint,
    y: EPoint,
    value: f64,
    error_estimate: f64,
    case: CaseTag,
}

fn eval(cfg: &CliConfig, t: f64, x: &str, y: &str) -> Result<i32, Failure> {
    check_time(t)?;
    let (x, y) = (parse_point("x", x)?, parse_point("y", y)?);
    let v = kernel(t, &x, &y, &cfg.params(), &cfg.quad)?;
    let mut out = cfg.sink()?;
    match cfg.output_format {
        OutputFormat::Csv => {
            writeln!(out, "value,error_estimate,case")?;
            writeln!(out, "{:.16e},{:.16e},{}", v.value, v.error_estimate, v.case)?;
        }
        OutputFormat::Json => {
            let row = EvalOut { t, x, y, value: v.value, error_estimate: v.error_estimate, case: v.case };
            writeln!(out, "{}", json(&row))?;
        }
    }
    out.flush()?;
    Ok(0)
}

/// The pair of points a table row uses for `case` and radii `rx`, `ry`.
/// 3D points lie on the same ray; the origin case ignores `rx`.
fn table_points(case: CaseTag, rx: f64, ry: f64) -> vdkernel::Result<(EPoint, EPoint)> {
    Ok(match case {
        CaseTag::Both3d => (EPoint::e1_on_axis(rx)?, EPoint::e1_on_axis(ry)?),
        CaseTag::Both1d => (EPoint::e2(rx)?, EPoint::e2(ry)?),
        CaseTag::Cross => (EPoint::e1_on_axis(rx)?, EPoint::e2(ry)?),
        CaseTag::Origin => (EPoint::origin(), EPoint::e2(ry)?),
    })
}

#[derive(Serialize)]
struct TableRow {
    t: f64,
    case: CaseTag,
    rx: f64,
    ry: f64,
    value: f64,
    err: f64,
}

fn table(cfg: &CliConfig, t_list: &[f64], radii: &[f64], cases: &[String]) -> Result<i32, Failure> {
    for &t in t_list {
        check_time(t)?;
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Failure::Usage(format!("--radius-grid values must be finite and > 0, got {r}")));
    }
    let cases = cases
        .iter()
        .map(|c| CaseTag::from_label(c.trim()).ok_or_else(|| Failure::Usage(format!("unknown case {c:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let params = cfg.params();
    let mut rows = Vec::new();
    for &t in t_list {
        for &case in &cases {
            let xs: &[f64] = if case == CaseTag::Origin { &[0.0] } else { radii };
            for &rx in xs {
                for &ry in radii {
                    let (x, y) = table_points(case, rx, ry)?;
                    let v = kernel(t, &x, &y, &params, &cfg.quad)?;
                    rows.push(TableRow { t, case, rx, ry, value: v.value, err: v.error_estimate });
                }
            }
        }
    }
    let mut out = cfg.sink()?;
    match cfg.output_format {
        OutputFormat::Csv => {
            writeln!(out, "t,case,rx,ry,value,err")?;
            for r in &rows {
                writeln!(out, "{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}", r.t, r.case, r.rx, r.ry, r.value, r.err)?;
            }
        }
        OutputFormat::Json => {
            for r in &rows {
                writeln!(out, "{}", json(r))?;
            }
        }
    }
    out.flush()?;
    Ok(0)
}

fn verify(cfg: &CliConfig, suite: SuiteArg, seed: u64) -> Result<i32, Failure> {
    let suite = match suite {
        SuiteArg::Fast => Suite::Fast,
        SuiteArg::Full => Suite::Full,
    };
    let reports = with_thread_cap(|| run_suite(suite, seed, &cfg.params(), &cfg.quad))??;
    let mut out = cfg.sink()?;
    match cfg.output_format {
        OutputFormat::Json => {
            for r in &reports {
                writeln!(out, "{}", r.to_json_line())?;
            }
        }
        OutputFormat::Csv => {
            writeln!(out, "name,computed,reference,abs_error,tolerance,passed")?;
            for r in &reports {
                writeln!(
                    out,
                    "\"{}\",{:.16e},{:.16e},{:.16e},{:.16e},{}",
                    r.name.replace('"', "\"\""),
                    r.computed,
                    r.reference,
                    r.abs_error,
                    r.tolerance,
                    r.passed
                )?;
            }
        }
    }
    out.flush()?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", reports.len());
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(0)
}

fn load_plan(arg: &str) -> Result<SimPlan, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read plan file {arg}: {e}")))?
    };
    let plan: SimPlan = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("--plan: {e}")))?;
    plan.validate()?;
    Ok(plan)
}

fn run_simulation(cfg: &CliConfig, plan: &str) -> Result<i32, Failure> {
    let plan = load_plan(plan)?;
    let samples = with_thread_cap(|| simulate(&plan, &cfg.params()))??;
    let mut out = cfg.sink()?;
    match cfg.output_format {
        OutputFormat::Csv => write_endpoint_csv(&mut out, plan.scheme, &samples)?,
        OutputFormat::Json => {
            for s in &samples {
                writeln!(out, "{}", json(s))?;
            }
        }
    }
    out.flush()?;
    Ok(0)
}

/// Runs `f` on a pool capped by `VDKERNEL_THREADS` when it is set.
fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let Some(raw) = std::env::var_os(THREADS_ENV) else {
        return Ok(f());
    };
    let n: usize = raw
        .to_str()
        .and_then(|s| s.trim().parse().ok())
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Failure::Numerical(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    let cfg = CliConfig::from_args(&cli.global)?;
    match cli.command {
        Command::Eval { t, x, y } => eval(&cfg, t, &x, &y),
        Command::Table { t_list, radius_grid, cases } => table(&cfg, &t_list, &radius_grid, &cases),
        Command::Verify { suite, seed } => verify(&cfg, suite, seed),
        Command::Simulate { plan } => run_simulation(&cfg, &plan),
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nUsage: vdkernel [OPTIONS] <eval|table|verify|simulate>\nRun `vdkernel --help` for details.");
            EXIT_USAGE
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            EXIT_NUMERICAL
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            eprintln!("i/o error: {e}");
            EXIT_NUMERICAL
        }
    }
}
