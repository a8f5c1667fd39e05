use std::collections::BTreeMap;
use std::io;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::spectral::Verdict;

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status of a run or sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitCode {
    Pass = 0,
    VerdictFail = 1,
    Config = 2,
    Budget = 3,
    Other = 4,
}

impl ExitCode {
    pub fn for_error(e: &Error) -> Self {
        Self::for_kind(e.kind())
    }

    /// Schema and input problems are config errors.
    pub fn for_kind(kind: &str) -> Self {
        match kind {
            "config" | "invalid_lattice" | "invalid_model" | "invalid_direction" | "site_out_of_range" => {
                ExitCode::Config
            }
            "budget" => ExitCode::Budget,
            _ => ExitCode::Other,
        }
    }

    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub config: Value,
    pub config_digest: String,
    pub wall_time_s: f64,
    pub verdicts: BTreeMap<String, Verdict>,
    pub payload: Value,
    pub warnings: Vec<String>,
    pub error: Option<ErrorInfo>,
}

impl RunRecord {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.verdicts.values().all(|v| *v == Verdict::Pass)
    }

    pub fn exit_code(&self) -> ExitCode {
        match &self.error {
            Some(e) => ExitCode::for_kind(&e.kind),
            None if self.passed() => ExitCode::Pass,
            None => ExitCode::VerdictFail,
        }
    }

    pub fn status(&self) -> &'static str {
        match self.exit_code() {
            ExitCode::Pass => "pass",
            ExitCode::VerdictFail => "fail",
            _ => "error",
        }
    }

    pub fn to_json(&self) -> Value {
        let verdicts: BTreeMap<&str, &str> = self.verdicts.iter().map(|(k, v)| (k.as_str(), v.name())).collect();
        json!({
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "config": self.config,
            "config_digest": self.config_digest,
            "wall_time_s": self.wall_time_s,
            "status": self.status(),
            "exit_code": self.exit_code().code(),
            "verdicts": verdicts,
            "warnings": self.warnings,
            "error": self.error.as_ref().map(|e| json!({"kind": e.kind, "message": e.message})),
            "payload": self.payload,
        })
    }
}

/// Writes floats as 17 significant digits in exponent form. Object keys
/// come out sorted because `Value` maps are ordered.
struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

/// Byte-stable serialization used for records and digests.
pub fn canonical_json(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    serde::Serialize::serialize(v, &mut ser).expect("in-memory JSON");
    String::from_utf8(out).expect("JSON is UTF-8")
}

pub fn digest(v: &Value) -> String {
    let h = Sha256::digest(canonical_json(v).as_bytes());
    let hex: String = h.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}
