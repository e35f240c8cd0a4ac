use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use avgpi::dgp::Scenario;
use avgpi::harness::{
    config_args, load_csv_column, parse_config, run_poos, run_simulation, CoverageReport,
    Evaluator, MethodSettings, PoosConfig, ReportFormat, SimConfig,
};
use avgpi::rng::rng_from_seed;
use avgpi::zxw::Anchor;
use avgpi::{Error, Method, Result};

/// Comma-separated list.
#[derive(Debug, Clone)]
struct List<T>(Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|p| p.trim().parse::<T>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(List)
    }
}

/// Differencing orders: a bare number applies to every method that supports
/// differencing, or `method:d` pairs.
#[derive(Debug, Clone)]
struct DSpec(BTreeMap<Method, f64>);

impl FromStr for DSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Ok(d) = s.trim().parse::<f64>() {
            return Ok(DSpec(
                [(Method::CltTdist, d), (Method::KernelBoot, d)].into_iter().collect(),
            ));
        }
        s.split(',')
            .map(|pair| {
                let (m, d) = pair
                    .split_once(':')
                    .ok_or_else(|| format!("expected `method:d`, got `{pair}`"))?;
                let method = m.trim().parse::<Method>().map_err(|e| e.to_string())?;
                let d = d.trim().parse::<f64>().map_err(|e| e.to_string())?;
                Ok((method, d))
            })
            .collect::<std::result::Result<_, String>>()
            .map(DSpec)
    }
}

fn parse_methods(s: &str) -> std::result::Result<List<Method>, String> {
    match s {
        "all" => Ok(List(Method::ALL.to_vec())),
        "zxw" => Ok(List(Method::ZXW.to_vec())),
        _ => s.parse(),
    }
}

fn parse_scenarios(s: &str) -> std::result::Result<List<Scenario>, String> {
    if s == "all" {
        return Ok(List(Scenario::ALL.to_vec()));
    }
    s.parse()
}

fn parse_anchor(s: &str) -> std::result::Result<Anchor, String> {
    match s {
        "mean" => Ok(Anchor::Mean),
        "last" => Ok(Anchor::Last),
        "auto" => Ok(Anchor::Auto),
        _ => Err(format!("unknown anchor `{s}` (mean, last or auto)")),
    }
}

/// Prediction intervals for the average of the next m values of a series.
///
/// ARMA orders in the model-based methods are capped at 2.
#[derive(Parser)]
#[command(name = "avgpi", version, args_override_self = true)]
struct Cli {
    /// `key = value` file of default flags; command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo coverage and width on the benchmark scenarios.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// One interval for a CSV column.
    #[command(args_override_self = true)]
    Pi(PiArgs),
    /// Rolling pseudo-out-of-sample evaluation of a CSV column.
    #[command(args_override_self = true)]
    Poos(PoosArgs),
}

#[derive(Args)]
struct Shared {
    /// Bootstrap replicates for kernel-boot and simulated paths for the
    /// model-based bootstrap methods.
    #[arg(long, default_value_t = 1000)]
    b_reps: usize,
    /// Cosine frequencies for the naive method.
    #[arg(long, default_value_t = 12)]
    q: usize,
    /// Centre of the model-free intervals: mean, last, or auto (last when
    /// d = 1, mean otherwise).
    #[arg(long, default_value = "auto", value_parser = parse_anchor)]
    anchor: Anchor,
}

impl Shared {
    fn settings(&self, d: BTreeMap<Method, f64>) -> MethodSettings {
        let mut st = MethodSettings {
            naive_q: self.q,
            boot_paths: self.b_reps,
            d,
            ..MethodSettings::default()
        };
        st.zxw.boot_reps = self.b_reps;
        st.zxw.anchor = self.anchor;
        st
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Comma-separated scenarios, or `all`.
    #[arg(long, default_value = "all", value_parser = parse_scenarios)]
    scenario: List<Scenario>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// In-sample length.
    #[arg(long, default_value_t = 260)]
    t: usize,
    #[arg(long, default_value = "20,30,40,60,90,130")]
    horizons: List<usize>,
    #[arg(long, default_value = "0.9,0.67")]
    levels: List<f64>,
    /// Comma-separated methods, `zxw` or `all`.
    #[arg(long, default_value = "zxw", value_parser = parse_methods)]
    methods: List<Method>,
    #[arg(long, default_value_t = 1.31)]
    sigma: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or text.
    #[arg(long, default_value = "text")]
    format: String,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct PiArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    column: String,
    /// Horizon.
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.9)]
    level: f64,
    #[arg(long, default_value = "kernel-boot")]
    method: Method,
    /// Differencing order (clt-tdist and kernel-boot only).
    #[arg(long, default_value_t = 0.0)]
    d: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct PoosArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    column: String,
    /// Rolling window length.
    #[arg(long, default_value_t = 260)]
    window: usize,
    #[arg(long, default_value = "20")]
    horizons: List<usize>,
    #[arg(long, default_value = "0.9,0.67")]
    levels: List<f64>,
    #[arg(long, default_value = "zxw", value_parser = parse_methods)]
    methods: List<Method>,
    /// Differencing: one number for all supporting methods, or
    /// `method:d,...`.
    #[arg(long)]
    d: Option<DSpec>,
    /// Distance between window origins; defaults to the horizon.
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "text")]
    format: String,
    #[command(flatten)]
    shared: Shared,
}

/// Inserts the flags from `--config` right after the subcommand name.
fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
        path: path.clone().into(),
        source,
    })?;
    let extra = config_args(&parse_config(&text)?);
    let pos = args
        .iter()
        .position(|a| matches!(a.as_str(), "simulate" | "pi" | "poos"))
        .map_or(args.len(), |p| p + 1);
    let mut out = args[..pos].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[pos..]);
    Ok(out)
}

fn emit(report: &CoverageReport, out: Option<&PathBuf>, format: &str) -> Result<()> {
    let format: ReportFormat = format.parse()?;
    match out {
        Some(path) => report.write(path, format),
        None => {
            print!("{}", report.render(format)?);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => {
            let cfg = SimConfig {
                scenarios: a.scenario.0,
                t: a.t,
                horizons: a.horizons.0,
                sigma: a.sigma,
                levels: a.levels.0,
                n_trials: a.trials,
                methods: a.methods.0,
                base_seed: a.seed,
                settings: a.shared.settings(BTreeMap::new()),
            };
            emit(&run_simulation(&cfg)?, a.out.as_ref(), &a.format)
        }
        Command::Pi(a) => {
            let s = load_csv_column(&a.csv, &a.column)?;
            let mut d = BTreeMap::new();
            if a.d != 0.0 {
                d.insert(a.method, a.d);
            }
            let settings = a.shared.settings(d);
            settings.validate()?;
            let eval = Evaluator::new(&s, &settings);
            let iv = eval.intervals(a.method, a.m, &[a.level], &mut rng_from_seed(a.seed))?[0];
            println!("method,horizon,level,lower,upper");
            println!("{},{},{},{},{}", iv.method, iv.horizon, iv.level, iv.lower, iv.upper);
            Ok(())
        }
        Command::Poos(a) => {
            let cfg = PoosConfig {
                csv_path: a.csv,
                column: a.column,
                t: a.window,
                horizons: a.horizons.0,
                levels: a.levels.0,
                stride: a.stride,
                methods: a.methods.0,
                base_seed: a.seed,
                settings: a.shared.settings(a.d.map(|d| d.0).unwrap_or_default()),
            };
            emit(&run_poos(&cfg)?, a.out.as_ref(), &a.format)
        }
    }
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args().collect()) {
        Ok(args) => args,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
