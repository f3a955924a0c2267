//! Command-line front end: `simulate`, `contact-curve`, `validate` and
//! `expand`.

pub mod config;

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::integrator::{simulate, Trajectory};
use crate::symbolic::{expand_b, expand_l, expand_tmec};
use crate::validation::{contact_curve, run_all, Listings};

pub use config::{InitialConditions, Scenario, ScenarioConfig};

/// Environment variable limiting the number of scenarios run in parallel.
pub const THREADS_ENV: &str = "EGG_SIM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "egg-sim", version, about = "Rolling egg robot with a gimballed gyroscope")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one or more scenario files and write trajectory CSVs.
    Simulate {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
    /// Contact angle versus inclination for several axis ratios.
    ContactCurve {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 1.25, 1.5, 2.0])]
        ratios: Vec<f64>,
        #[arg(long, default_value_t = 91)]
        samples: usize,
        /// Write to a file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the model self-checks; prints one JSON object per line.
    Validate {
        /// Directory holding alternative `appendix_a.txt` / `appendix_b.txt`.
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
    /// Print an expanded sum, one term per line.
    Expand {
        #[arg(value_enum)]
        target: ExpandTarget,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpandTarget {
    #[value(name = "L")]
    L,
    #[value(name = "B")]
    B,
    #[value(name = "Tmec")]
    Tmec,
}

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. } | Error::InvalidParam { .. } | Error::InvalidShape(_) | Error::Profile { .. } => 2,
        Error::NonFinite { .. } | Error::GimbalLock { .. } | Error::DegenerateInertia { .. } => 3,
        _ => 1,
    }
}

/// Parses `args` and runs the command; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Simulate { configs } => cmd_simulate(&configs, &mut out),
        Command::ContactCurve {
            ratios,
            samples,
            output,
        } => report(cmd_contact_curve(&ratios, samples, output.as_deref(), &mut out)),
        Command::Validate { golden_dir } => match cmd_validate(golden_dir.as_deref(), &mut out) {
            Ok(true) => 0,
            Ok(false) => 1,
            Err(e) => report::<()>(Err(e)),
        },
        Command::Expand { target } => report(cmd_expand(target, &mut out)),
    }
}

fn report<T>(r: Result<T>) -> i32 {
    match r {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Where the trajectory of `config_path` is written: `run.output` relative
/// to the config's directory, or the config path with a `.csv` extension.
pub fn output_path(config_path: &Path, cfg: &ScenarioConfig) -> PathBuf {
    match &cfg.output {
        Some(o) => {
            let p = Path::new(o);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                config_path.parent().unwrap_or(Path::new("")).join(p)
            }
        }
        None => config_path.with_extension("csv"),
    }
}

/// Loads, runs and writes one scenario; returns the summary text.
pub fn run_config(path: &Path) -> Result<String> {
    let cfg = ScenarioConfig::load(path)?;
    let scenario = cfg.build()?;
    let traj = simulate(&scenario.initial, &scenario.profile, &scenario.plant, &scenario.run)?;
    let target = output_path(path, &cfg);
    if let Some(dir) = target.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let file = fs::File::create(&target).map_err(|e| Error::Io(format!("{}: {e}", target.display())))?;
    let mut w = BufWriter::new(file);
    traj.write_csv(&mut w)?;
    w.flush()?;
    Ok(summary(path, &target, &traj))
}

fn summary(config: &Path, output: &Path, traj: &Trajectory) -> String {
    let samples = &traj.samples;
    let first = &samples[0];
    let last = &samples[samples.len() - 1];
    let stiction = samples
        .iter()
        .filter(|s| s.torques.friction_mode == crate::dynamics::FrictionMode::Stiction)
        .count();
    let max_slip = samples
        .iter()
        .map(|s| s.state.slip.gamma_slip_rate.abs())
        .fold(0.0, f64::max);
    let max_tf = samples.iter().map(|s| s.torques.t_f.abs()).fold(0.0, f64::max);
    let max_tilt = samples.iter().map(|s| s.state.attitude.beta_v).fold(0.0, f64::max);
    let travel = samples
        .windows(2)
        .map(|w| (w[1].state.track.x_p - w[0].state.track.x_p).hypot(w[1].state.track.y_p - w[0].state.track.y_p))
        .sum::<f64>();
    let a = &last.state.attitude;
    format!(
        "scenario {}\n  output: {}\n  samples: {}\n  t_end: {:.6} s\n  final attitude (deg): alpha_v {:.4}, beta_v {:.4}, gamma_v {:.4}\n  max beta_v: {:.4} deg\n  contact travel: {:.6} m\n  max |t_f|: {:.6e} N*m\n  max |slip rate|: {:.6e} rad/s\n  stiction samples: {}/{}\n  final |L|: {:.6e} (initial {:.6e}) kg*m^2/s\n",
        config.display(),
        output.display(),
        samples.len(),
        last.state.time,
        a.alpha_v.to_degrees(),
        a.beta_v.to_degrees(),
        a.gamma_v.to_degrees(),
        max_tilt.to_degrees(),
        travel,
        max_tf,
        max_slip,
        stiction,
        samples.len(),
        last.angular_momentum.norm(),
        first.angular_momentum.norm(),
    )
}

fn worker_count(jobs: usize) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(available);
    cap.min(jobs).max(1)
}

/// Runs every scenario (in parallel up to [`THREADS_ENV`]); summaries are
/// printed in input order. Returns the exit status of the first failure.
pub fn cmd_simulate(configs: &[PathBuf], out: &mut impl Write) -> i32 {
    let results: Vec<Mutex<Option<Result<String>>>> = configs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..worker_count(configs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= configs.len() {
                    break;
                }
                let r = run_config(&configs[i]);
                *results[i].lock().unwrap() = Some(r);
            });
        }
    });
    let mut status = 0;
    for (path, slot) in configs.iter().zip(results) {
        match slot.into_inner().unwrap().expect("every job ran") {
            Ok(text) => {
                let _ = out.write_all(text.as_bytes());
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                if status == 0 {
                    status = exit_code(&e);
                }
            }
        }
    }
    status
}

pub fn cmd_contact_curve(ratios: &[f64], samples: usize, output: Option<&Path>, out: &mut impl Write) -> Result<()> {
    let mut text = String::from("ratio,beta_v_deg,beta_p_deg\n");
    for &ratio in ratios {
        if !(ratio >= 1.0 && ratio.is_finite()) {
            return Err(Error::config("--ratios", format!("ratios must be >= 1, got {ratio}")));
        }
        for (bv, bp) in contact_curve(ratio, samples)? {
            text.push_str(&format!("{ratio},{bv:.16e},{bp:.16e}\n"));
        }
    }
    match output {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Prints one JSON line per check and a final summary line; `Ok(false)` if
/// any check failed.
pub fn cmd_validate(golden_dir: Option<&Path>, out: &mut impl Write) -> Result<bool> {
    let listings = match golden_dir {
        None => Listings::default(),
        Some(dir) => {
            let read = |name: &str| {
                let p = dir.join(name);
                fs::read_to_string(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
            };
            Listings {
                l: read("appendix_a.txt")?,
                b: read("appendix_b.txt")?,
            }
        }
    };
    let reports = run_all(&listings);
    for r in &reports {
        writeln!(out, "{}", r.to_json())?;
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    let summary = serde_json::json!({
        "summary": true,
        "checks": reports.len(),
        "passed": reports.len() - failed.len(),
        "failed": failed,
    });
    writeln!(out, "{summary}")?;
    if !failed.is_empty() {
        eprintln!("failed checks: {}", failed.join(", "));
    }
    Ok(failed.is_empty())
}

pub fn cmd_expand(target: ExpandTarget, out: &mut impl Write) -> Result<()> {
    let sum = match target {
        ExpandTarget::L => expand_l(),
        ExpandTarget::B => expand_b()?,
        ExpandTarget::Tmec => expand_tmec()?,
    };
    out.write_all(sum.render().as_bytes())?;
    Ok(())
}
