use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pathwfc::{SolverConfig, Symmetry};
use pathwfc_cli::bench::{format_table, run_bench, BenchCase};
use pathwfc_cli::config::{palette, resolve_job, solver_config, FileConfig, TuningArgs};
use pathwfc_cli::generate::generate;
use pathwfc_cli::inspect::{inspect, InspectRequest};
use pathwfc_cli::{read_level, read_sketch, CliError};

#[derive(Parser)]
#[command(name = "pathwfc", version, about = "Generate NPC paths for game levels from a path sketch")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one level and write the raster, waypoints, overlay and manifest.
    Generate {
        /// TOML config file; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Moving AI map.
        #[arg(long)]
        level: Option<PathBuf>,
        /// Path sketch (PNG).
        #[arg(long)]
        sketch: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tuning: TuningArgs,
    },
    /// Time repeated solves. Cases come from `[[case]]` tables in the config
    /// file, or from every --level x --sketch pair.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        level: Vec<PathBuf>,
        #[arg(long)]
        sketch: Vec<PathBuf>,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        /// Run cases concurrently. Times then include contention.
        #[arg(long)]
        parallel: bool,
        /// Also write the report as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        tuning: TuningArgs,
    },
    /// Report dimensions, class counts, patterns and warnings.
    Inspect {
        #[arg(long)]
        sketch: Option<PathBuf>,
        #[arg(long)]
        level: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "none")]
        symmetry: Symmetry,
        /// Write a pattern contact sheet and compat table into this directory.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

fn stem(p: &std::path::Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Generate {
            config,
            level,
            sketch,
            out,
            tuning,
        } => {
            let file = config.as_deref().map(FileConfig::load).transpose()?.unwrap_or_default();
            let job = resolve_job(&file, level, sketch, out, &tuning)?;
            let outcome = generate(&job)?;
            let m = &outcome.manifest;
            match &m.failure {
                None => println!(
                    "solved in {} attempt(s), {} path(s); wrote {}",
                    m.attempts_used,
                    m.paths.as_ref().map_or(0, |p| p.count),
                    job.out.display()
                ),
                Some(f) => eprintln!(
                    "{} after {} attempt(s); see {}",
                    f.reason,
                    m.attempts_used,
                    job.out.join(pathwfc_cli::generate::MANIFEST_FILE).display()
                ),
            }
            Ok(outcome.exit_code)
        }
        Command::Bench {
            config,
            level,
            sketch,
            runs,
            parallel,
            json,
            tuning,
        } => {
            let file = config.as_deref().map(FileConfig::load).transpose()?.unwrap_or_default();
            let pal = palette(&file.palette)?;
            let base = solver_config(&SolverConfig::default(), &file.solver, &tuning);
            let mut cases = Vec::new();
            for c in &file.cases {
                let cfg = solver_config(&base, &c.solver, &tuning);
                cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
                cases.push(BenchCase {
                    name: c.name.clone().unwrap_or_else(|| format!("{}/{}", stem(&c.sketch), stem(&c.level))),
                    sketch_name: stem(&c.sketch),
                    level: read_level(&c.level)?,
                    sketch: read_sketch(&c.sketch, &pal, cfg.n)?,
                    solver: cfg,
                });
            }
            base.validate().map_err(|e| CliError::Config(e.to_string()))?;
            for s in &sketch {
                for l in &level {
                    cases.push(BenchCase {
                        name: format!("{}/{}", stem(s), stem(l)),
                        sketch_name: stem(s),
                        level: read_level(l)?,
                        sketch: read_sketch(s, &pal, base.n)?,
                        solver: base.clone(),
                    });
                }
            }
            if cases.is_empty() {
                return Err(CliError::Config("no bench cases (give [[case]] tables or --level/--sketch)".into()));
            }
            let report = run_bench(&cases, runs, parallel)?;
            print!("{}", format_table(&report));
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                std::fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            Ok(if report.cases.iter().any(|c| c.failed) { pathwfc_cli::EXIT_MAX_ATTEMPTS } else { 0 })
        }
        Command::Inspect {
            sketch,
            level,
            n,
            symmetry,
            dump,
        } => {
            let text = inspect(&InspectRequest {
                sketch,
                level,
                n,
                symmetry,
                palette: pathwfc::Palette::default(),
                dump,
            })?;
            print!("{text}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
