use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zalcman::report::{render, Format, Record};
use zalcman::selfcheck::{SelfCheck, SelfCheckReport};
use zalcman::{
    coeffs_from_measure, extremal_falpha_coeffs, falsification_sweep, maximize_phi, phi,
    sharp_bound, Alpha, DiscreteMeasure, Lambda, SearchConfig,
};

#[derive(Parser)]
#[command(
    name = "zalcman",
    version,
    about = "Sharp bounds for |λ a_n² − a_{2n−1}| over convex functions of order α"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// json, csv or pretty
    #[arg(long, global = true, default_value = "pretty")]
    format: Format,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sharp bound table over a range of n
    Bound {
        #[command(flatten)]
        p: Params,
    },
    /// Taylor coefficients of the member built from a measure
    Coeffs {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Highest coefficient index
        #[arg(long, default_value = "9")]
        n: usize,
        /// JSON file of [{"theta": .., "w": ..}]; default is a unit mass at 0
        #[arg(long)]
        measure: Option<PathBuf>,
    },
    /// Evaluate Φ for the member built from a measure
    Phi {
        #[command(flatten)]
        p: Params,
        #[arg(long)]
        measure: Option<PathBuf>,
    },
    /// Maximize |Φ| over discrete measures
    Search {
        #[command(flatten)]
        p: Params,
        #[command(flatten)]
        s: SearchArgs,
    },
    /// Run the search over the default (α, λ, n) grid
    Sweep {
        #[command(flatten)]
        s: SearchArgs,
    },
    /// Run every invariant suite at small scale
    Selfcheck {
        /// Machine-readable report
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Params {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// Single order or inclusive range a..b
    #[arg(long, value_parser = parse_range)]
    n: RangeInclusive<usize>,
}

#[derive(Args)]
struct SearchArgs {
    /// Atoms per measure (default 2n−2)
    #[arg(long)]
    atoms: Option<usize>,
    #[arg(long, default_value = "32")]
    starts: usize,
    #[arg(long, default_value = "0")]
    seed: u64,
    #[arg(long, default_value = "2000")]
    max_iters: usize,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            atoms: self.atoms,
            starts: self.starts,
            max_iters: self.max_iters,
            seed: self.seed,
            ..Default::default()
        }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad order '{t}': {e}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

/// Failure classes mapped onto process exit codes.
enum Failure {
    Check,
    Usage(String),
    Alarm,
}

impl From<zalcman::Error> for Failure {
    fn from(e: zalcman::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_measure(path: Option<&PathBuf>) -> Result<DiscreteMeasure, Failure> {
    match path {
        None => Ok(DiscreteMeasure::dirac(0.0)),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Ok(DiscreteMeasure::from_json(&text)?)
        }
    }
}

fn selfcheck_text(report: &SelfCheckReport) -> String {
    let mut out = String::new();
    for s in &report.suites {
        let status = if s.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{status} {:<24} checked={:<6} worst={:e} tol={:e}\n",
            s.name, s.checked, s.worst, s.tolerance
        ));
        if let Some(t) = &s.offending {
            out.push_str(&format!("     offending: {t}\n"));
        }
    }
    out
}

fn run(cli: &Cli) -> Result<(String, Option<Failure>), Failure> {
    let fmt = cli.format;
    match &cli.command {
        Command::Bound { p } => {
            let (alpha, lambda) = (Alpha::new(p.alpha)?, Lambda::new(p.lambda)?);
            let rows =
                p.n.clone()
                    .map(|n| sharp_bound(alpha, lambda, n).map(|b| Record::from_bound(&b)))
                    .collect::<Result<Vec<_>, _>>()?;
            Ok((render(&rows, fmt), None))
        }
        Command::Coeffs { alpha, n, measure } => {
            let alpha = Alpha::new(*alpha)?;
            let f = match measure {
                None => extremal_falpha_coeffs(alpha, *n)?,
                Some(_) => coeffs_from_measure(alpha, &load_measure(measure.as_ref())?, *n)?,
            };
            let rows: Vec<Record> = f
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| Record {
                    alpha: Some(alpha.value()),
                    n: Some(i + 1),
                    a_n: Some(zalcman::compute_an(alpha, i + 1)),
                    re: Some(c.re),
                    im: Some(c.im),
                    modulus: Some(c.norm()),
                    ..Default::default()
                })
                .collect();
            Ok((render(&rows, fmt), None))
        }
        Command::Phi { p, measure } => {
            let (alpha, lambda) = (Alpha::new(p.alpha)?, Lambda::new(p.lambda)?);
            let mu = load_measure(measure.as_ref())?;
            let mut rows = Vec::new();
            for n in p.n.clone() {
                let b = sharp_bound(alpha, lambda, n)?;
                let f = coeffs_from_measure(alpha, &mu, 2 * n - 1)?;
                let v = phi(lambda, n, &f)?;
                rows.push(Record {
                    re: Some(v.value.re),
                    im: Some(v.value.im),
                    modulus: Some(v.modulus),
                    gap: Some(b.value - v.modulus),
                    ..Record::from_bound(&b)
                });
            }
            Ok((render(&rows, fmt), None))
        }
        Command::Search { p, s } => {
            let (alpha, lambda) = (Alpha::new(p.alpha)?, Lambda::new(p.lambda)?);
            let cfg = s.config();
            cfg.validate()?;
            let mut rows = Vec::new();
            let mut alarm = false;
            for n in p.n.clone() {
                let b = sharp_bound(alpha, lambda, n)?;
                let r = maximize_phi(alpha, lambda, n, &cfg)?;
                alarm |= !r.is_sound();
                rows.push(Record::from_search(&b, &r));
            }
            Ok((render(&rows, fmt), alarm.then_some(Failure::Alarm)))
        }
        Command::Sweep { s } => {
            let report = falsification_sweep(&zalcman::search::default_grid(), &s.config())?;
            let rows: Vec<Record> = report
                .rows
                .iter()
                .map(|r| Record::from_search(&r.bound, &r.result))
                .collect();
            for (regime, gap) in &report.worst_gap {
                eprintln!("worst |gap| {regime}: {gap:e}");
            }
            Ok((
                render(&rows, fmt),
                (!report.passed).then_some(Failure::Alarm),
            ))
        }
        Command::Selfcheck { json } => {
            let report = SelfCheck::default().run();
            let text = if *json || fmt == Format::Json {
                let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                s.push('\n');
                s
            } else {
                selfcheck_text(&report)
            };
            Ok((text, (!report.passed).then_some(Failure::Check)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, failure) = match run(&cli) {
        Ok(v) => v,
        Err(f) => (String::new(), Some(f)),
    };
    if !text.is_empty() {
        let written = match &cli.out {
            Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        };
        if let Err(e) = written {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(Failure::Check) => ExitCode::from(1),
        Some(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Some(Failure::Alarm) => {
            eprintln!("error: an evaluated measure exceeded the sharp bound");
            ExitCode::from(3)
        }
    }
}
