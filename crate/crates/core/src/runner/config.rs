use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeKind, LatticeSpec};
use crate::model::{Couplings, Frame, GenericTerm, ModelKind};
use crate::pauli::Axis;
use crate::spectral::SolveOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    VerifySymmetries,
    Certificate,
    Spectrum,
    Census,
    SectorCompare,
    ZipperAnalysis,
    FreeFermion,
    PerturbationSweep,
    Entropy,
    ClassicalOrbit,
    CorrelatorDecay,
    VariationalStrings,
}

impl Task {
    pub const ALL: [Task; 12] = [
        Task::VerifySymmetries,
        Task::Certificate,
        Task::Spectrum,
        Task::Census,
        Task::SectorCompare,
        Task::ZipperAnalysis,
        Task::FreeFermion,
        Task::PerturbationSweep,
        Task::Entropy,
        Task::ClassicalOrbit,
        Task::CorrelatorDecay,
        Task::VariationalStrings,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::VerifySymmetries => "verify-symmetries",
            Task::Certificate => "certificate",
            Task::Spectrum => "spectrum",
            Task::Census => "census",
            Task::SectorCompare => "sector-compare",
            Task::ZipperAnalysis => "zipper-analysis",
            Task::FreeFermion => "free-fermion",
            Task::PerturbationSweep => "perturbation-sweep",
            Task::Entropy => "entropy",
            Task::ClassicalOrbit => "classical-orbit",
            Task::CorrelatorDecay => "correlator-decay",
            Task::VariationalStrings => "variational-strings",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    #[serde(default)]
    pub couplings: Couplings,
    #[serde(default)]
    pub frame: Frame,
    /// Literal-frame terms for `generic`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<GenericTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Level grouping, relative to the spectral width.
    pub census_rel: f64,
    /// Sector-spectrum agreement, relative to the spectral width.
    pub sector_rel: f64,
    /// Multiplet selection, relative to the Hamiltonian norm bound.
    pub multiplet_rel: f64,
    pub chiral_abs: f64,
    pub residual: f64,
    /// Forced zeros, orthogonality, classical energy spread.
    pub zero: f64,
    pub entropy_bits: f64,
    pub free_fermion_gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            census_rel: 1e-9,
            sector_rel: 1e-9,
            multiplet_rel: 1e-9,
            chiral_abs: 1e-10,
            residual: 1e-10,
            zero: 1e-12,
            entropy_bits: 1e-9,
            free_fermion_gap: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBudget {
    pub dense_max_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_lowest: Option<usize>,
    /// Split sectors by commuting bit flips.
    pub refine: bool,
    /// Largest total Hilbert space dimension a run may touch.
    pub max_total_dim: u64,
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget { dense_max_dim: 8192, n_lowest: None, refine: true, max_total_dim: 1 << 22 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    /// Record file name, relative to the output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
    /// Table file name for tasks that emit one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

/// Task-specific knobs; each task reads only the ones it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskParams {
    #[serde(rename = "Ls", default, skip_serializing_if = "Option::is_none")]
    pub ls: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Vec<f64>>,
    /// Random draws for classical-orbit and partner checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sectors: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlator_axis: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: Task,
    pub lattice: LatticeSpec,
    pub model: ModelSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub solver: SolverBudget,
    #[serde(default)]
    pub output: OutputPaths,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub params: TaskParams,
}

fn default_seed() -> u64 {
    2024
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_value(v)
    }

    pub fn from_value(v: serde_json::Value) -> Result<Self> {
        let c: RunConfig = serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            dense_max_dim: self.solver.dense_max_dim,
            n_lowest: self.solver.n_lowest,
            seed: self.seed,
            refine: self.solver.refine,
            residual_tol: self.tolerances.residual,
            ..SolveOptions::default()
        }
    }

    /// Structural checks that need no lattice construction.
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("census_rel", t.census_rel),
            ("sector_rel", t.sector_rel),
            ("multiplet_rel", t.multiplet_rel),
            ("chiral_abs", t.chiral_abs),
            ("residual", t.residual),
            ("zero", t.zero),
            ("entropy_bits", t.entropy_bits),
            ("free_fermion_gap", t.free_fermion_gap),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        if self.solver.dense_max_dim == 0 || self.solver.n_lowest == Some(0) {
            return Err(Error::Config("solver limits must be positive".into()));
        }
        let c = self.model.couplings;
        let zipper_like = matches!(
            self.task,
            Task::ZipperAnalysis | Task::FreeFermion | Task::PerturbationSweep | Task::VariationalStrings
        );
        if zipper_like {
            if self.model.kind != ModelKind::Pcm {
                return Err(Error::Config(format!("{} needs model kind pcm", self.task.name())));
            }
            if !matches!(self.lattice.kind, LatticeKind::Parallelogram | LatticeKind::Cylinder) {
                return Err(Error::Config(format!("{} needs a parallelogram or cylinder lattice", self.task.name())));
            }
            if self.lattice.l.is_none() {
                return Err(Error::Config("lattice.L is required".into()));
            }
        }
        if (zipper_like || self.task == Task::ClassicalOrbit)
            && (c.jx.is_none() || c.jy.is_none()) {
                return Err(Error::Config(format!("{} needs couplings jx and jy", self.task.name())));
            }
        if self.task == Task::PerturbationSweep {
            let p = &self.params;
            if p.ls.as_ref().is_some_and(|v| v.is_empty()) || p.ratios.as_ref().is_some_and(|v| v.is_empty()) {
                return Err(Error::Config("sweep lists must be non-empty".into()));
            }
            if p.ratios.iter().flatten().any(|r| !r.is_finite()) {
                return Err(Error::Config("sweep ratios must be finite".into()));
            }
        }
        if self.params.samples == Some(0) {
            return Err(Error::Config("params.samples must be positive".into()));
        }
        Ok(())
    }

    pub fn json_name(&self) -> String {
        self.output.json.clone().unwrap_or_else(|| format!("{}.json", self.task.name()))
    }

    pub fn csv_name(&self) -> String {
        self.output.csv.clone().unwrap_or_else(|| format!("{}.csv", self.task.name()))
    }
}
