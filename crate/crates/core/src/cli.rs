//! The `wtg` command line.
//!
//! ```text
//! wtg play --game greedy --n 2000 --b 1 --reps 20 --seed 1 --format csv
//! wtg constants --b 1
//! wtg constants --b 0 --curve tau --grid 0.1:10:0.1
//! ```
//!
//! Exit status is 0 on success and 2 on a configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arborescence::PaymentMode;
use crate::constants::{solve_mu, solve_theta_star, t_curve, tau, theorem_bounds, zeta3_by_quadrature, TheoremBounds};
use crate::error::Error;
use crate::harness::{run_experiment_with_transcripts, ExperimentConfig, ExperimentSummary, GameVariant};
use crate::transcript::{Order, Transcript, TRANSCRIPT_SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "wtg", version, about = "Weighted Maker-Breaker game simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run replicated games and print per-rep records and a summary.
    Play(PlayArgs),
    /// Evaluate the constants behind the bounds.
    Constants(ConstantsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GameArg {
    Mapping,
    Box,
    Arb,
    Tree,
    Greedy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    BreakerFirst,
    MakerFirst,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PaymentArg {
    Rank,
    Uniform,
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Curve {
    Tau,
    T,
}

#[derive(Debug, Args)]
struct PlayArgs {
    #[arg(long, value_enum)]
    game: GameArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    b: u32,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    maker: Option<String>,
    #[arg(long)]
    breaker: Option<String>,
    #[arg(long, value_enum)]
    order: Option<OrderArg>,
    #[arg(long, value_enum, default_value = "rank")]
    payment: PaymentArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write every transcript to this JSON file.
    #[arg(long)]
    transcripts: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[arg(long)]
    b: u32,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    curve: Option<Curve>,
    /// `start:stop:step`, inclusive of `stop`.
    #[arg(long)]
    grid: Option<String>,
}

/// Contents of a `--transcripts` file.
#[derive(Debug, Serialize, serde::Deserialize)]
pub struct TranscriptFile {
    pub schema_version: u32,
    pub transcripts: Vec<Transcript>,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: SummaryView<'a>,
}

#[derive(Serialize)]
struct SummaryView<'a> {
    config: &'a ExperimentConfig,
    mean: Option<f64>,
    sd: Option<f64>,
    ci95: Option<(f64, f64)>,
    bound: f64,
    margin: Option<f64>,
    failures: usize,
    completed: usize,
}

impl<'a> From<&'a ExperimentSummary> for SummaryView<'a> {
    fn from(s: &'a ExperimentSummary) -> Self {
        Self {
            config: &s.config,
            mean: s.mean,
            sd: s.sd,
            ci95: s.ci95,
            bound: s.bound,
            margin: s.margin,
            failures: s.failures,
            completed: s.completed,
        }
    }
}

#[derive(Serialize)]
struct ConstantsReport {
    b: u32,
    mu: f64,
    theta_star: f64,
    zeta3: f64,
    n: Option<usize>,
    bounds: Option<TheoremBounds>,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Play(a) => cmd_play(&a, out),
        Command::Constants(a) => cmd_constants(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn csv_num(x: Option<f64>) -> String {
    x.map(|v| json(&v)).unwrap_or_default()
}

fn cmd_play(a: &PlayArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = ExperimentConfig {
        game: match a.game {
            GameArg::Mapping => GameVariant::Mapping,
            GameArg::Box => GameVariant::Box,
            GameArg::Arb => GameVariant::Arb,
            GameArg::Tree => GameVariant::Tree,
            GameArg::Greedy => GameVariant::Greedy,
        },
        n: a.n,
        b: a.b,
        m: a.m,
        beta: a.beta,
        reps: a.reps,
        seed: a.seed,
        maker: a.maker.clone(),
        breaker: a.breaker.clone(),
        order: a.order.map(|o| match o {
            OrderArg::BreakerFirst => Order::BreakerFirst,
            OrderArg::MakerFirst => Order::MakerFirst,
        }),
        payment: match a.payment {
            PaymentArg::Rank => PaymentMode::Rank,
            PaymentArg::Uniform => PaymentMode::Uniform,
        },
    };
    let (summary, transcripts) = run_experiment_with_transcripts(&cfg)?;
    match a.format {
        Format::Json => {
            for r in &summary.records {
                writeln!(out, "{}", json(r))?;
            }
            writeln!(out, "{}", json(&SummaryLine { summary: (&summary).into() }))?;
        }
        Format::Csv => {
            writeln!(out, "rep,cost,rounds,emergencies,failed,seed")?;
            for r in &summary.records {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.rep,
                    csv_num(r.cost),
                    r.rounds,
                    r.emergencies,
                    r.failed,
                    r.seed
                )?;
            }
            writeln!(out)?;
            writeln!(out, "game,n,b,reps,seed,mean,sd,ci95_lo,ci95_hi,bound,margin,failures,completed")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                cfg.game.name(),
                cfg.n,
                cfg.b,
                cfg.reps,
                cfg.seed,
                csv_num(summary.mean),
                csv_num(summary.sd),
                csv_num(summary.ci95.map(|c| c.0)),
                csv_num(summary.ci95.map(|c| c.1)),
                json(&summary.bound),
                csv_num(summary.margin),
                summary.failures,
                summary.completed
            )?;
        }
    }
    if let Some(path) = &a.transcripts {
        let file = TranscriptFile {
            schema_version: TRANSCRIPT_SCHEMA_VERSION,
            transcripts,
        };
        std::fs::write(path, json(&file))?;
    }
    Ok(())
}

/// Parses `start:stop:step` into its inclusive points.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = || Error::Config(format!("malformed grid '{spec}', expected start:stop:step"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [start, stop, step] = parts[..] else { return Err(bad()) };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

fn cmd_constants(a: &ConstantsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let grid = a.grid.as_deref().map(parse_grid).transpose()?;
    match a.curve {
        None => {
            if grid.is_some() {
                return Err(Failure::Config("--grid needs --curve".into()));
            }
            let report = ConstantsReport {
                b: a.b,
                mu: solve_mu(a.b),
                theta_star: solve_theta_star(),
                zeta3: zeta3_by_quadrature(),
                n: a.n,
                bounds: a.n.map(|n| theorem_bounds(n, a.b)),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("plain data serializes"))?;
        }
        Some(Curve::Tau) => {
            let grid = grid.ok_or_else(|| Failure::Config("--curve tau needs --grid".into()))?;
            if grid[0] <= 0.0 {
                return Err(Failure::Config("tau is defined for c > 0".into()));
            }
            writeln!(out, "c,tau")?;
            for c in grid {
                writeln!(out, "{},{}", json(&c), json(&tau(c)))?;
            }
        }
        Some(Curve::T) => {
            let n = a.n.ok_or_else(|| Failure::Config("--curve t needs --n".into()))?;
            if n < 4 {
                return Err(Failure::Config("--curve t needs n >= 4".into()));
            }
            let t = t_curve(n, a.b);
            let ks: Vec<usize> = match grid {
                None => (1..n).collect(),
                Some(g) => g
                    .into_iter()
                    .map(|k| {
                        let ki = k.round() as usize;
                        if (k - ki as f64).abs() > 1e-9 || ki < 1 || ki >= n {
                            Err(Failure::Config(format!("grid point {k} is not a step index in 1..{n}")))
                        } else {
                            Ok(ki)
                        }
                    })
                    .collect::<Result<_, _>>()?,
            };
            writeln!(out, "k,t")?;
            for k in ks {
                writeln!(out, "{k},{}", json(&t[k - 1]))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("wtg").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0.1:10:0.1").unwrap().len(), 100);
        assert_eq!(parse_grid("1:3:1").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_grid("1:3").is_err());
        assert!(parse_grid("3:1:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a:b:c").is_err());
    }

    #[test]
    fn constants_report() {
        let (code, out, _) = run_str(&["constants", "--b", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["mu"], 1.0);
        assert_eq!(format!("{:.4}", v["theta_star"].as_f64().unwrap()), "0.2938");
    }

    #[test]
    fn tau_curve_rows() {
        let (code, out, _) = run_str(&["constants", "--b", "0", "--curve", "tau", "--grid", "0.1:10:0.1"]);
        assert_eq!(code, 0);
        let rows: Vec<&str> = out.lines().skip(1).collect();
        assert_eq!(rows.len(), 100);
        let (c, t) = rows[0].split_once(',').unwrap();
        assert_eq!(c, "0.1");
        assert!((t.parse::<f64>().unwrap() - 0.95).abs() < 1e-12);
    }

    #[test]
    fn config_errors_exit_2() {
        assert_eq!(run_str(&["constants", "--b", "0", "--curve", "tau", "--grid", "x"]).0, 2);
        let (code, _, err) = run_str(&[
            "play", "--game", "greedy", "--n", "10", "--b", "1", "--reps", "1", "--seed", "1", "--maker", "potential",
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown maker"));
        assert_eq!(run_str(&["play", "--game", "nope"]).0, 2);
    }
}
