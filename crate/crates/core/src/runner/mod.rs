//! Config-driven experiment runs with persisted, reproducible records.

mod config;
mod record;
mod sweep;
mod tasks;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{ModelSpec, OutputPaths, RunConfig, SolverBudget, Task, TaskParams, Tolerances};
pub use record::{canonical_json, digest, ErrorInfo, ExitCode, RunRecord, TOOL_NAME, TOOL_VERSION};
pub use sweep::{parse_axis, sweep, Axis as SweepAxis, SweepOutcome, SweepPoint};
pub use tasks::TaskOutput;

use crate::error::{Error, Result};

/// A record together with the table some tasks produce.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub csv: Option<String>,
}

fn error_record(config: serde_json::Value, e: &Error, wall: f64) -> RunRecord {
    RunRecord {
        config_digest: digest(&config),
        config,
        wall_time_s: wall,
        verdicts: Default::default(),
        payload: serde_json::Value::Null,
        warnings: vec![],
        error: Some(ErrorInfo { kind: e.kind().to_string(), message: e.to_string() }),
    }
}

/// Runs one validated config. Failures become error records.
pub fn run(cfg: &RunConfig) -> RunOutcome {
    let start = Instant::now();
    let config = cfg.to_value();
    match tasks::execute(cfg) {
        Ok(out) => RunOutcome {
            record: RunRecord {
                config_digest: digest(&config),
                config,
                wall_time_s: start.elapsed().as_secs_f64(),
                verdicts: out.verdicts,
                payload: out.payload,
                warnings: out.warnings,
                error: None,
            },
            csv: out.csv,
        },
        Err(e) => RunOutcome { record: error_record(config, &e, start.elapsed().as_secs_f64()), csv: None },
    }
}

/// Parses and runs a raw JSON config. Schema errors give an error record
/// that echoes the raw document.
pub fn run_value(raw: serde_json::Value) -> (Option<RunConfig>, RunOutcome) {
    match RunConfig::from_value(raw.clone()) {
        Ok(cfg) => {
            let out = run(&cfg);
            (Some(cfg), out)
        }
        Err(e) => (None, RunOutcome { record: error_record(raw, &e, 0.0), csv: None }),
    }
}

pub fn read_config(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Writes the record (and table) under `dir`; returns the paths written.
pub fn write_outcome(dir: &Path, cfg: Option<&RunConfig>, out: &RunOutcome) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let json_name = cfg.map(|c| c.json_name()).unwrap_or_else(|| "error.json".into());
    let mut written = vec![dir.join(json_name)];
    std::fs::write(&written[0], canonical_json(&out.record.to_json()) + "\n")?;
    if let (Some(c), Some(csv)) = (cfg, &out.csv) {
        let p = dir.join(c.csv_name());
        std::fs::write(&p, csv)?;
        written.push(p);
    }
    Ok(written)
}
