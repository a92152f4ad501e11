use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wavenorm::acceptance::{self, Hooks};
use wavenorm::config::{check_tol, RunConfig};
use wavenorm::model::Model;
use wavenorm::report::{gnuplot_script, to_json, FitReport, RegimeReport};
use wavenorm::sweep::{self, SweepError};

const EXIT_CONFIG: u8 = 1;
const EXIT_BLOWUP: u8 = 2;

#[derive(Parser)]
#[command(name = "wavenorm", version, about = "Large-time L2 norms of linear evolution equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for output files; stdout is used when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Quadrature tolerance, overriding the config.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Suppress progress and summary messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate M(t) on the configured grid and write CSV.
    Sweep,
    /// Report the predicted large-time regime as JSON.
    Classify,
    /// Fit growth laws to a sweep and write JSON plus a gnuplot script.
    Fit {
        /// Prior sweep CSV; overrides `[run] input`. Without either, a sweep is run.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run the built-in verification suite.
    Verify {
        /// Comma-separated criterion ids.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
        #[arg(long, hide = true)]
        corrupt_envelope: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.into(),
    }
}

fn load(cli: &Cli) -> Result<RunConfig, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| config_error("--config <path> is required for this command"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg =
        RunConfig::parse(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    if let Some(tol) = cli.tol {
        check_tol(tol).map_err(|e| config_error(e.to_string()))?;
        cfg.tol = tol;
    }
    Ok(cfg)
}

fn build(cfg: &RunConfig) -> Result<Model, Failure> {
    Model::build(&cfg.model).map_err(|e| config_error(format!("model: {e}")))
}

/// Write to `<out>/<name>` or, without `--out`, to stdout.
fn emit(out: Option<&Path>, name: &str, content: &str) -> Result<(), Failure> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| config_error(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join(name);
            fs::write(&path, content)
                .map_err(|e| config_error(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| config_error(format!("stdout: {e}")))
        }
    }
}

fn sweep_rows(cli: &Cli, cfg: &RunConfig, model: &Model) -> Result<Vec<sweep::Row>, Failure> {
    match sweep::run(model, &cfg.grid.points(), cfg.tol) {
        Ok(rows) => Ok(rows),
        Err(err @ SweepError::Blowup { .. }) => {
            if !cli.quiet {
                eprint!("{}", to_json(&RegimeReport::new(model)));
            }
            Err(Failure {
                code: EXIT_BLOWUP,
                message: format!(
                    "refusing to sweep: {} regime; {err}",
                    model.prediction.regime.tag.name()
                ),
            })
        }
        Err(e) => Err(config_error(e.to_string())),
    }
}

fn cmd_sweep(cli: &Cli) -> Result<(), Failure> {
    let cfg = load(cli)?;
    let model = build(&cfg)?;
    let rows = sweep_rows(cli, &cfg, &model)?;
    emit(cli.out.as_deref(), "sweep.csv", &sweep::to_csv_string(&rows))?;
    if !cli.quiet {
        eprintln!("{} rows for {} ({})", rows.len(), model.name, model.prediction.regime.tag.name());
        if let Some(band) = cfg.band {
            let samples: Vec<_> = rows.iter().map(|r| (r.t, r.m)).collect();
            let env: Vec<_> = rows.iter().map(|r| (r.t, r.d)).collect();
            if let Ok(o) = wavenorm_core::sandwich_check(&samples, &env, band) {
                eprintln!(
                    "band [{}, {}]: {} (M/D from {:.6e} at t={:.3e} to {:.6e} at t={:.3e})",
                    band.0,
                    band.1,
                    if o.pass { "pass" } else { "FAIL" },
                    o.min_ratio,
                    o.t_at_min,
                    o.max_ratio,
                    o.t_at_max
                );
            }
        }
    }
    Ok(())
}

fn cmd_classify(cli: &Cli) -> Result<(), Failure> {
    let cfg = load(cli)?;
    let model = build(&cfg)?;
    emit(cli.out.as_deref(), "classify.json", &to_json(&RegimeReport::new(&model)))
}

fn cmd_fit(cli: &Cli, input: Option<&Path>) -> Result<(), Failure> {
    let cfg = load(cli)?;
    let input = input.map(Path::to_path_buf).or_else(|| cfg.input.clone());
    let (samples, csv_name, with_envelope) = match &input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
            let samples = sweep::read_samples(text.as_bytes())
                .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
            let has_d = text.lines().next().is_some_and(|h| h.split(',').any(|c| c.trim() == "D"));
            (samples, path.display().to_string(), has_d)
        }
        None => {
            let model = build(&cfg)?;
            let rows = sweep_rows(cli, &cfg, &model)?;
            if let Some(dir) = cli.out.as_deref() {
                emit(Some(dir), "sweep.csv", &sweep::to_csv_string(&rows))?;
            }
            (rows.iter().map(|r| (r.t, r.m)).collect(), "sweep.csv".to_string(), true)
        }
    };
    let fit = wavenorm_core::fit_growth(&samples, cfg.fit_window)
        .map_err(|e| config_error(format!("fit: {e}")))?;
    emit(cli.out.as_deref(), "fit.json", &to_json(&FitReport::from(&fit)))?;
    if let Some(dir) = cli.out.as_deref() {
        let script = gnuplot_script(&fit, &csv_name, with_envelope, cfg.model.name());
        emit(Some(dir), "fit.gp", &script)?;
    }
    if !cli.quiet {
        eprintln!("selected {} (residual {:.3e})", fit.model.name(), fit.residual);
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, only: Option<&[u32]>, corrupt_envelope: bool) -> Result<bool, Failure> {
    let outcomes = acceptance::run(only, Hooks { corrupt_envelope }).map_err(config_error)?;
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let mut table = String::new();
    for o in &outcomes {
        if !cli.quiet || !o.pass {
            table.push_str(&acceptance::format_line(o));
            table.push('\n');
        }
    }
    table.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
    emit(cli.out.as_deref(), "verify.txt", &table)?;
    Ok(passed == outcomes.len())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Sweep => cmd_sweep(&cli).map(|_| true),
        Command::Classify => cmd_classify(&cli).map(|_| true),
        Command::Fit { input } => cmd_fit(&cli, input.as_deref()).map(|_| true),
        Command::Verify {
            only,
            corrupt_envelope,
        } => cmd_verify(&cli, only.as_deref(), *corrupt_envelope),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
