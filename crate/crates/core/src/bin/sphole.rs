use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sphole::bounds::{required_intensity, BoundEvaluator, DEFAULT_ORDER, SECOND_CASE_CEILING};
use sphole::experiment::{fmt_float, run_sweep, summarize, write_csv, SecondCaseSource, SweepSpec};
use sphole::{estimate, Error, NetworkConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

/// Spherical triangular holes in Rips-complex coverage of Poisson sensor
/// networks: Monte Carlo estimates and quadrature bounds.
#[derive(Parser, Debug)]
#[command(name = "sphole", version)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lower and upper bounds for one configuration.
    Bounds {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        second: SecondArgs,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        quad_order: usize,
    },
    /// Monte Carlo estimate of the hole probability.
    Simulate {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Grid sweep comparing Monte Carlo with the bounds; writes CSV.
    Sweep {
        #[arg(long, default_value_t = 10.0)]
        rs: f64,
        #[arg(long, value_delimiter = ',')]
        gamma_list: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        lambda_list: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        radius_factors: Option<Vec<f64>>,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = SecondMode::Mc)]
        second_case: SecondMode,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        quad_order: usize,
        /// Output CSV path (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest intensity whose upper bound meets a coverage target.
    Plan {
        #[command(flatten)]
        net: NetArgs,
        /// Required covered fraction, strictly between 0 and 1.
        #[arg(long)]
        target: f64,
        #[arg(long, default_value_t = SECOND_CASE_CEILING)]
        second_case: f64,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        quad_order: usize,
    },
    /// Monte Carlo estimate of the second-case probability.
    SecondCase {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        mc: McArgs,
    },
}

#[derive(Args, Debug)]
struct NetArgs {
    /// Sensing radius.
    #[arg(long, default_value_t = 10.0)]
    rs: f64,
    /// Communication radius.
    #[arg(long)]
    rc: f64,
    /// Sphere radius.
    #[arg(long)]
    radius: f64,
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SecondArgs {
    /// Second-case term added to the upper bound: a probability, `mc`
    /// (simulate it) or `ceiling` (the constant 0.0016).
    #[arg(long, default_value = "ceiling")]
    second_case: String,
    /// Trials for `--second-case mc`.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SecondMode {
    Mc,
    Ceiling,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.workers {
        Some(0) => Err(Failure::Usage("--workers must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli.command)),
            Err(e) => Err(Failure::Runtime(e.to_string())),
        },
        None => run(cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

fn config(net: &NetArgs, lambda: f64) -> Result<NetworkConfig, Failure> {
    Ok(NetworkConfig::new(net.radius, net.rs, net.rc, lambda)?)
}

fn run(cmd: Command) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Command::Bounds { net, lambda, second, quad_order } => {
            let cfg = config(&net, lambda)?;
            let term = match second.second_case.as_str() {
                "ceiling" => SECOND_CASE_CEILING,
                "mc" => estimate(&cfg, second.trials, second.seed)?.second_case.p_hat,
                s => s
                    .parse::<f64>()
                    .ok()
                    .filter(|p| (0.0..=1.0).contains(p))
                    .ok_or_else(|| Failure::Usage(format!("invalid --second-case value '{s}'")))?,
            };
            if quad_order < 4 {
                return Err(Failure::Usage("--quad-order must be at least 4".into()));
            }
            let b = BoundEvaluator::new(&cfg, quad_order)?.evaluate(lambda, term)?;
            writeln!(out, "case,lower,upper,second_case,quad_err")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                b.case,
                fmt_float(b.lower),
                fmt_float(b.upper),
                fmt_float(b.second_case_term),
                fmt_float(b.quad_error)
            )?;
        }
        Command::Simulate { net, lambda, mc } => {
            let cfg = config(&net, lambda)?;
            let e = estimate(&cfg, mc.trials, mc.seed)?.hole;
            print_estimate(&mut out, &e, mc.seed)?;
        }
        Command::SecondCase { net, lambda, mc } => {
            let cfg = config(&net, lambda)?;
            let e = estimate(&cfg, mc.trials, mc.seed)?.second_case;
            print_estimate(&mut out, &e, mc.seed)?;
        }
        Command::Sweep {
            rs,
            gamma_list,
            lambda_list,
            radius_factors,
            mc,
            second_case,
            quad_order,
            out: path,
        } => {
            let d = SweepSpec::default();
            let spec = SweepSpec {
                sensing_radius: rs,
                gammas: gamma_list.unwrap_or(d.gammas),
                lambdas: lambda_list.unwrap_or(d.lambdas),
                radius_factors: radius_factors.unwrap_or(d.radius_factors),
                trials: mc.trials,
                seed: mc.seed,
                quad_order,
                second_case: match second_case {
                    SecondMode::Mc => SecondCaseSource::Simulated,
                    SecondMode::Ceiling => SecondCaseSource::Ceiling,
                },
            };
            // open the output first so a bad path fails before the long run
            let file = path.map(File::create).transpose()?;
            let rows = run_sweep(&spec)?;
            match file {
                Some(f) => write_csv(&rows, BufWriter::new(f))?,
                None => write_csv(&rows, &mut out)?,
            }
            eprint!("{}", summarize(&rows).render());
        }
        Command::Plan { net, target, second_case, quad_order } => {
            let cfg = config(&net, 0.0)?;
            if !(target > 0.0 && target < 1.0) {
                return Err(Failure::Usage(format!("--target must lie in (0, 1), got {target}")));
            }
            let p = required_intensity(&cfg, target, second_case, quad_order)?;
            writeln!(out, "lambda,upper,peak_lambda,peak_upper")?;
            writeln!(
                out,
                "{},{},{},{}",
                fmt_float(p.intensity),
                fmt_float(p.upper),
                fmt_float(p.peak_intensity),
                fmt_float(p.peak_upper)
            )?;
        }
    }
    Ok(())
}

fn print_estimate(out: &mut impl Write, e: &sphole::MCEstimate, seed: u64) -> io::Result<()> {
    writeln!(out, "trials,hits,p_hat,stderr,ci_low,ci_high,seed")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        e.trials,
        e.hits,
        fmt_float(e.p_hat),
        fmt_float(e.stderr),
        fmt_float(e.ci95.0),
        fmt_float(e.ci95.1),
        seed
    )
}
