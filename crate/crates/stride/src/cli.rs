//! The `stride` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use stride_core::GaitProfile;

use crate::config::{Overrides, Settings};
use crate::corpus::{default_sweep, generate_corpus, load_manifest};
use crate::csv::load_trace;
use crate::error::{Error, Result};
use crate::json::to_json_string;
use crate::report::{analyze, compare, events_text};

#[derive(Debug, Parser)]
#[command(name = "stride", version, about = "Step detection and walking distance from accelerometer traces")]
struct Cli {
    /// JSON settings file (defaults < file < flags).
    #[arg(long, global = true, env = "STRIDE_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect steps in a trace CSV.
    Detect {
        trace: PathBuf,
        /// Step threshold on the filtered signal, m/s².
        #[arg(long, value_name = "M_S2")]
        threshold: Option<f64>,
        #[command(flatten)]
        format: Format,
    },
    /// Estimate walked distance with the dynamic step length and the fixed
    /// step length methods.
    Estimate {
        trace: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
        #[command(flatten)]
        format: Format,
    },
    /// Generate a synthetic corpus. Without a profile file, writes the
    /// default 50-walk evaluation sweep.
    Synth {
        /// A gait profile JSON object, or an array of them.
        profile: Option<PathBuf>,
        #[arg(long, short, value_name = "DIR")]
        out_dir: PathBuf,
        /// Seed for the first profile; later profiles get seed + 1, + 2, ...
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run both estimators over a corpus and report their accuracy.
    Compare {
        manifest: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
        /// Also write the full report as JSON.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
        /// Also write `true_distance,proposed_error,baseline_error` CSV.
        #[arg(long, value_name = "PATH")]
        plot: Option<PathBuf>,
        #[command(flatten)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct Tuning {
    /// Step threshold on the filtered signal, m/s².
    #[arg(long, value_name = "M_S2")]
    threshold: Option<f64>,
    /// Length of one medium step, meters.
    #[arg(long, value_name = "M")]
    base_length: Option<f64>,
    /// Step length of the conventional estimator, meters.
    #[arg(long, value_name = "M")]
    fixed_length: Option<f64>,
}

#[derive(Debug, Args)]
struct Format {
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Aligned plain text (the default).
    #[arg(long)]
    text: bool,
}

impl From<&Tuning> for Overrides {
    fn from(t: &Tuning) -> Self {
        Self { step_threshold: t.threshold, base_step_length_m: t.base_length, fixed_step_length_m: t.fixed_length }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let config = cli.config.as_deref();
    let stdout = Path::new("<stdout>");
    let emit = |out: &mut dyn Write, text: &str| out.write_all(text.as_bytes()).map_err(|e| Error::io(stdout, e));
    match cli.command {
        Command::Detect { trace, threshold, format } => {
            let overrides = Overrides { step_threshold: threshold, ..Overrides::default() };
            let settings = Settings::resolve(config, &overrides)?;
            let analysis = analyze(&load_trace(&trace)?, &settings)?;
            let text = if format.json { to_json_string(&analysis.events) } else { events_text(&analysis.events) };
            emit(out, &text)
        }
        Command::Estimate { trace, tuning, format } => {
            let settings = Settings::resolve(config, &Overrides::from(&tuning))?;
            let analysis = analyze(&load_trace(&trace)?, &settings)?;
            let text = if format.json { to_json_string(&analysis) } else { analysis.to_text() };
            emit(out, &text)
        }
        Command::Synth { profile, out_dir, seed } => {
            let mut profiles = match &profile {
                Some(path) => read_profiles(path)?,
                None => default_sweep(),
            };
            if let Some(seed) = seed {
                for (i, p) in profiles.iter_mut().enumerate() {
                    p.seed = seed.wrapping_add(i as u64);
                }
            }
            let (_, manifest_path) = generate_corpus(&profiles, &out_dir)?;
            emit(out, &format!("{}\n", manifest_path.display()))
        }
        Command::Compare { manifest, tuning, report, plot, format } => {
            let settings = Settings::resolve(config, &Overrides::from(&tuning))?;
            let parsed = load_manifest(&manifest)?;
            let comparison = compare(&manifest, &parsed, &settings)?;
            if let Some(path) = &report {
                fs::write(path, to_json_string(&comparison)).map_err(|e| Error::io(path, e))?;
            }
            if let Some(path) = &plot {
                fs::write(path, comparison.plot_csv()).map_err(|e| Error::io(path, e))?;
            }
            if let Some(note) = &comparison.error_report_note {
                let _ = writeln!(err, "warning: error report unavailable: {note}");
            }
            let text = if format.json { to_json_string(&comparison) } else { comparison.to_text() };
            emit(out, &text)
        }
    }
}

/// A single profile object or an array of them; missing fields take their
/// defaults.
fn read_profiles(path: &Path) -> Result<Vec<GaitProfile>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let invalid = |source| Error::Profile { path: path.to_path_buf(), source };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(invalid)?;
    if value.is_array() {
        serde_json::from_value(value).map_err(invalid)
    } else {
        serde_json::from_value(value).map(|p| vec![p]).map_err(invalid)
    }
}
