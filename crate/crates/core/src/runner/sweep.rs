use rayon::prelude::*;
use serde_json::Value;

use super::config::RunConfig;
use super::{run_value, RunOutcome};
use crate::error::{Error, Result};

/// One swept parameter. `L` and `ratio` are shorthands for `lattice.L` and
/// for `model.couplings.jy = ratio * jx`; anything else is a dotted path.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<Value>,
}

/// Parses `name=v1,v2,...`. Values are read as JSON, falling back to strings.
pub fn parse_axis(spec: &str) -> Result<Axis> {
    let (name, list) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("axis `{spec}` is not of the form name=v1,v2")))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(Error::Config(format!("axis `{spec}` has no name")));
    }
    let values: Vec<Value> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string())))
        .collect();
    if values.is_empty() {
        return Err(Error::Config(format!("axis `{name}` has no values")));
    }
    if values.iter().any(|v| v.as_f64().is_some_and(|x| !x.is_finite())) {
        return Err(Error::Config(format!("axis `{name}` has a non-finite value")));
    }
    Ok(Axis { name: name.to_string(), values })
}

fn set_path(doc: &mut Value, path: &str, v: Value) -> Result<()> {
    let mut cur = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, key) in parts.iter().enumerate() {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("`{path}` crosses a non-object")))?;
        if i + 1 == parts.len() {
            obj.insert(key.to_string(), v);
            return Ok(());
        }
        cur = obj.entry(key.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("split yields at least one part")
}

fn apply(doc: &mut Value, axis: &str, v: &Value) -> Result<()> {
    match axis {
        "L" => set_path(doc, "lattice.L", v.clone()),
        "ratio" => {
            let r = v.as_f64().ok_or_else(|| Error::Config(format!("ratio value {v} is not a number")))?;
            let jx = doc.pointer("/model/couplings/jx").and_then(Value::as_f64).unwrap_or(1.0);
            set_path(doc, "model.couplings.jx", Value::from(jx))?;
            set_path(doc, "model.couplings.jy", Value::from(r * jx))
        }
        path => set_path(doc, path, v.clone()),
    }
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub assignment: Vec<Value>,
    pub config: Option<RunConfig>,
    pub outcome: RunOutcome,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub axes: Vec<String>,
    pub points: Vec<SweepPoint>,
}

/// Cartesian product over `axes`, first axis slowest. Points run on the
/// current rayon pool; results keep input order. A failing point yields an
/// error record and does not stop the others.
pub fn sweep(template: &Value, axes: &[Axis]) -> Result<SweepOutcome> {
    if !template.is_object() {
        return Err(Error::Config("sweep template must be a JSON object".into()));
    }
    let mut combos: Vec<Vec<Value>> = vec![vec![]];
    for a in axes {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                a.values.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push(v.clone());
                    c
                })
            })
            .collect();
    }
    let docs = combos
        .iter()
        .map(|c| {
            let mut doc = template.clone();
            for (a, v) in axes.iter().zip(c) {
                apply(&mut doc, &a.name, v)?;
            }
            Ok(doc)
        })
        .collect::<Result<Vec<_>>>()?;
    let points = docs
        .into_par_iter()
        .zip(combos)
        .map(|(doc, assignment)| {
            let (config, outcome) = run_value(doc);
            SweepPoint { assignment, config, outcome }
        })
        .collect();
    Ok(SweepOutcome { axes: axes.iter().map(|a| a.name.clone()).collect(), points })
}

impl SweepOutcome {
    /// Worst exit status over all points.
    pub fn exit_code(&self) -> super::ExitCode {
        self.points.iter().map(|p| p.outcome.record.exit_code()).max().unwrap_or(super::ExitCode::Pass)
    }

    /// point, one column per axis, status, exit_code, verdicts, error_kind, config_digest.
    pub fn aggregate_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["point".to_string()];
        header.extend(self.axes.iter().cloned());
        header.extend(["status", "exit_code", "verdicts", "error_kind", "config_digest"].map(String::from));
        w.write_record(&header).map_err(|e| Error::Io(e.to_string()))?;
        for (i, p) in self.points.iter().enumerate() {
            let r = &p.outcome.record;
            let mut row = vec![i.to_string()];
            row.extend(p.assignment.iter().map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }));
            let verdicts: Vec<String> = r.verdicts.iter().map(|(k, v)| format!("{k}={}", v.name())).collect();
            row.push(r.status().to_string());
            row.push(r.exit_code().code().to_string());
            row.push(verdicts.join(";"));
            row.push(r.error.as_ref().map(|e| e.kind.clone()).unwrap_or_default());
            row.push(r.config_digest.clone());
            w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}
