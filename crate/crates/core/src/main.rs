use std::path::PathBuf;
use std::process::ExitCode as ProcessExit;

use clap::{Parser, Subcommand};

use gaugelike::runner::{self, canonical_json, ExitCode, RunOutcome};

#[derive(Parser)]
#[command(name = "gaugelike", version, about = "Line-symmetry degeneracy experiments on spin lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one JSON config and write its record.
    Run {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a template over the cartesian product of the given axes.
    Sweep {
        template: PathBuf,
        /// name=v1,v2,... (L, ratio, or a dotted config path)
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn init_threads(n: Option<usize>) -> Result<(), String> {
    match n {
        Some(0) => Err("--threads must be positive".into()),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string()),
        None => Ok(()),
    }
}

fn summarize(label: &str, out: &RunOutcome) {
    let r = &out.record;
    println!("{label}: {} ({:.3}s)", r.status().to_uppercase(), r.wall_time_s);
    for (k, v) in &r.verdicts {
        println!("  {k}: {}", v.name());
    }
    for w in &r.warnings {
        println!("  warning: {w}");
    }
    if let Some(e) = &r.error {
        eprintln!("  error[{}]: {}", e.kind, e.message);
    }
}

fn run_cmd(config: PathBuf, out: PathBuf) -> ExitCode {
    let raw = match runner::read_config(&config) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            return ExitCode::for_error(&e);
        }
    };
    let (cfg, outcome) = runner::run_value(raw);
    let label = cfg.as_ref().map(|c| c.task.name()).unwrap_or("config");
    summarize(label, &outcome);
    match runner::write_outcome(&out, cfg.as_ref(), &outcome) {
        Ok(paths) => {
            for p in paths {
                println!("  wrote {}", p.display());
            }
            outcome.record.exit_code()
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::for_error(&e)
        }
    }
}

fn sweep_cmd(template: PathBuf, axes: Vec<String>, out: PathBuf) -> Result<ExitCode, gaugelike::Error> {
    let doc = runner::read_config(&template)?;
    let axes = axes.iter().map(|a| runner::parse_axis(a)).collect::<Result<Vec<_>, _>>()?;
    let result = runner::sweep(&doc, &axes)?;
    std::fs::create_dir_all(&out)?;
    for (i, p) in result.points.iter().enumerate() {
        let label = format!("point {i} [{}]", p.assignment.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "));
        summarize(&label, &p.outcome);
        std::fs::write(out.join(format!("point_{i:03}.json")), canonical_json(&p.outcome.record.to_json()) + "\n")?;
        if let Some(csv) = &p.outcome.csv {
            std::fs::write(out.join(format!("point_{i:03}.csv")), csv)?;
        }
    }
    let agg = out.join("sweep.csv");
    std::fs::write(&agg, result.aggregate_csv()?)?;
    println!("wrote {} points and {}", result.points.len(), agg.display());
    Ok(result.exit_code())
}

fn main() -> ProcessExit {
    let cli = Cli::parse();
    let threads = match &cli.command {
        Command::Run { threads, .. } | Command::Sweep { threads, .. } => *threads,
    };
    if let Err(e) = init_threads(threads) {
        eprintln!("error[config]: {e}");
        return ProcessExit::from(ExitCode::Config.code() as u8);
    }
    let code = match cli.command {
        Command::Run { config, out, .. } => run_cmd(config, out),
        Command::Sweep { template, axes, out, .. } => sweep_cmd(template, axes, out).unwrap_or_else(|e| {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::for_error(&e)
        }),
    };
    ProcessExit::from(code.code() as u8)
}
