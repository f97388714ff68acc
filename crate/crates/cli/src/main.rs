mod commands;
mod config;
mod output;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use commands::Check;
use config::{RunConfig, Settings};
use magnon_core::Execution;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact diagonalization, free-magnon envelopes and operator-inequality
/// certificates for the ferromagnetic Heisenberg chain.
///
/// Options may also come from a `key=value` file given with --config; flags win.
/// The worker count is read from MAGNON_WORKERS.
#[derive(Parser, Debug)]
#[command(name = "magnon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Free energy per site for the free and pinned chains over a beta grid.
    FreeEnergy,
    /// Run a named certificate check over a parameter grid.
    Verify {
        #[arg(value_enum)]
        check: Option<Check>,
    },
    /// Upper and lower envelopes against the leading term over a beta*S grid.
    Asymptotics,
    /// Lower-bound budget constants (E0, N0, delta, l0).
    Budget,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Key=value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Twice the spin; comma separated for grids.
    #[arg(long, global = true)]
    two_s: Option<String>,
    /// Chain lengths, comma separated.
    #[arg(long, global = true)]
    length: Option<String>,
    /// Side of a square free-boundary grid (free-energy only).
    #[arg(long, global = true)]
    extent: Option<String>,
    /// Comma list or logspace:lo:hi:n. Asymptotics reads these as beta*S.
    #[arg(long, global = true)]
    beta: Option<String>,
    /// Same as the positional check of `verify`.
    #[arg(long, global = true, value_enum)]
    check: Option<Check>,
    /// default or quick.
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Override every certificate tolerance.
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Output path; stdout if absent.
    #[arg(long, global = true)]
    out: Option<String>,
    /// csv or json. Verify emits JSON lines for json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// 1 or 2 (asymptotics).
    #[arg(long, global = true)]
    dimension: Option<String>,
    /// Add the scaled free energy column (free-energy).
    #[arg(long, global = true)]
    ratio: bool,
    /// exact-ED or lemma-5.3.
    #[arg(long, global = true)]
    e0_source: Option<String>,
    /// Prefactor of the upper-envelope box size.
    #[arg(long, global = true)]
    c_upper: Option<String>,
    /// Prefactor of the lower-envelope box size.
    #[arg(long, global = true)]
    c_lower: Option<String>,
    /// Also write a matplotlib script for the CSV output.
    #[arg(long, global = true)]
    plot_script: Option<String>,
}

impl Opts {
    fn settings(&self) -> Settings {
        let pairs = [
            ("two-s", &self.two_s),
            ("length", &self.length),
            ("extent", &self.extent),
            ("beta", &self.beta),
            ("grid", &self.grid),
            ("seed", &self.seed),
            ("tol", &self.tol),
            ("out", &self.out),
            ("format", &self.format),
            ("dimension", &self.dimension),
            ("e0-source", &self.e0_source),
            ("c-upper", &self.c_upper),
            ("c-lower", &self.c_lower),
            ("plot-script", &self.plot_script),
        ];
        let mut map: std::collections::BTreeMap<String, String> =
            pairs.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v))).collect();
        if self.ratio {
            map.insert("ratio".into(), "true".into());
        }
        Settings(map)
    }
}

fn execution() -> Result<Execution> {
    let workers = match std::env::var("MAGNON_WORKERS") {
        Ok(v) => Some(v.trim().parse::<usize>().with_context(|| format!("MAGNON_WORKERS={v:?}"))?),
        Err(_) => None,
    };
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = workers.filter(|&n| n > 1) {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("starting worker pool")?;
        }
    }
    Ok(match workers {
        Some(n) if n <= 1 => Execution::Sequential,
        _ if Execution::is_parallel_available() => Execution::Parallel,
        _ => Execution::Sequential,
    })
}

fn run(cli: Cli) -> Result<bool> {
    let file = match &cli.opts.config {
        Some(p) => Settings::load(p)?,
        None => Settings::default(),
    };
    let settings = file.clone().overlay(cli.opts.settings());
    let cfg = RunConfig::from_settings(&settings)?;
    let explicit_format = settings.get("format").is_some();
    let exec = execution()?;
    let (table, plot) = match cli.command {
        Command::FreeEnergy => {
            (commands::free_energy(&cfg, exec)?, Some(("beta", vec!["f"], vec!["variant", "l", "two_s"], true)))
        }
        Command::Asymptotics => (
            commands::asymptotics(&cfg)?,
            Some(("beta_s", vec!["upper_ratio", "lower_ratio"], vec!["two_s"], true)),
        ),
        Command::Budget => (commands::budget(&cfg)?, Some(("l", vec!["e0", "delta"], vec!["beta", "two_s"], false))),
        Command::Verify { check } => {
            let file_check = match file.get("check") {
                Some(name) => Some(
                    <Check as clap::ValueEnum>::from_str(name, false)
                        .map_err(|e| anyhow::anyhow!("check {name:?} in config: {e}"))?,
                ),
                None => None,
            };
            let Some(check) = check.or(cli.opts.check).or(file_check) else {
                anyhow::bail!("verify needs a check name: su2, php-leq-t, casimir, laplacian, vnorm, density, truncation, subadditivity, localization");
            };
            let certs = commands::verify(&cfg, check, exec)?;
            let failed = certs.iter().filter(|c| !c.passed()).count();
            let text = if explicit_format && cfg.format == config::Format::Csv {
                commands::certificate_table(&certs).render(cfg.format)?
            } else {
                certs.iter().map(|c| c.to_json_line() + "\n").collect()
            };
            output::emit(&text, cfg.out.as_deref())?;
            eprintln!("{} certificates, {failed} failed", certs.len());
            return Ok(failed == 0);
        }
    };
    output::emit(&table.render(cfg.format)?, cfg.out.as_deref())?;
    if let (Some(path), Some((x, ys, group, logx))) = (&cfg.plot_script, plot) {
        let data = cfg.out.clone().unwrap_or_else(|| "data.csv".into());
        std::fs::write(path, output::plot_script(&data, x, &ys, &group, logx)).with_context(|| format!("writing {path}"))?;
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
