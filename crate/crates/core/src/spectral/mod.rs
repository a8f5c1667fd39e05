//! Sector-resolved exact diagonalization and the measurements built on it.

mod census;
mod lanczos;
mod observables;
pub mod ops;
mod sectors;
mod solve;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use census::{degeneracy_census, group_levels, sector_spectra_compare, Census, Level, SectorComparison, Verdict};
pub use lanczos::{lowest as lanczos_lowest, LanczosResult};
pub use observables::{connected_correlator, expectation, reduced_density, von_neumann_entropy, Expectation, Observable};
pub use sectors::{diagonal_symmetries, flip_group, sector_partition, FlipGroup, Sector, SectorLabel, SectorPartition};
pub use solve::{diagonalize, SolveOptions, VectorRequest};

use crate::model::Hamiltonian;

#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub label: SectorLabel,
    pub dim: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Eigenvectors over the sector basis, aligned with the lowest eigenvalues.
    pub vectors: Vec<Vec<Complex64>>,
    /// False when only the lowest levels were computed.
    pub complete: bool,
    /// Number of symmetry blocks the sector was split into.
    pub blocks: usize,
}

impl SectorSpectrum {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub n_sites: usize,
    /// z-masks of the strings whose parities label the sectors.
    pub blocking: Vec<u64>,
    pub sectors: Vec<SectorSpectrum>,
    /// Basis states of each sector, ascending.
    pub states: Vec<Vec<u64>>,
}

impl Spectrum {
    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.sectors.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
        all.sort_by(f64::total_cmp);
        all
    }

    pub fn ground_energy(&self) -> f64 {
        self.sectors
            .iter()
            .filter_map(|s| s.eigenvalues.first())
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn width(&self) -> f64 {
        let all = self.eigenvalues();
        match (all.first(), all.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.sectors.iter().all(|s| s.complete)
    }

    pub fn total_dim(&self) -> usize {
        self.sectors.iter().map(|s| s.dim).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.sectors.iter().map(|s| s.max_residual()).fold(0.0, f64::max)
    }

    /// Eigenvector `i` of sector `sector` embedded in the full space.
    pub fn full_vector(&self, sector: usize, i: usize) -> Result<Vec<Complex64>> {
        let s = self
            .sectors
            .get(sector)
            .ok_or_else(|| Error::Sector(format!("no sector {sector}")))?;
        let v = s
            .vectors
            .get(i)
            .ok_or_else(|| Error::Sector(format!("eigenvector {i} of sector {sector} was not stored")))?;
        let mut out = vec![Complex64::new(0.0, 0.0); ops::full_dim(self.n_sites)?];
        for (&b, &a) in self.states[sector].iter().zip(v) {
            out[b as usize] = a;
        }
        Ok(out)
    }

    /// Stored eigenpairs within `tol` of the ground energy, as
    /// (sector, index, energy).
    pub fn ground_multiplet(&self, tol: f64) -> Vec<(usize, usize, f64)> {
        let e0 = self.ground_energy();
        let mut out = Vec::new();
        for (si, s) in self.sectors.iter().enumerate() {
            for (i, &e) in s.eigenvalues.iter().enumerate() {
                if e - e0 <= tol {
                    out.push((si, i, e));
                }
            }
        }
        out
    }

    /// The ground multiplet with its full-space vectors. Fails when a
    /// sector holds more multiplet members than stored eigenvectors.
    pub fn ground_multiplet_vectors(&self, tol: f64) -> Result<(Vec<(usize, usize, f64)>, Vec<Vec<Complex64>>)> {
        let members = self.ground_multiplet(tol);
        if let Some(&(si, i, _)) = members.iter().find(|(si, i, _)| *i >= self.sectors[*si].vectors.len()) {
            return Err(Error::Sector(format!(
                "multiplet member {i} of sector {si} has no stored eigenvector"
            )));
        }
        let vectors = members.iter().map(|&(si, i, _)| self.full_vector(si, i)).collect::<Result<Vec<_>>>()?;
        Ok((members, vectors))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n_sites": self.n_sites,
            "total_dim": self.total_dim(),
            "sectors": self.sectors.iter().map(|s| json!({
                "label": s.label,
                "dim": s.dim,
                "blocks": s.blocks,
                "complete": s.complete,
                "eigenvalues": s.eigenvalues,
                "max_residual": s.max_residual(),
            })).collect::<Vec<_>>(),
        })
    }

    /// (sector, index, E) rows.
    pub fn csv_rows(&self) -> Vec<(usize, usize, f64)> {
        self.sectors
            .iter()
            .enumerate()
            .flat_map(|(si, s)| s.eigenvalues.iter().enumerate().map(move |(i, &e)| (si, i, e)))
            .collect()
    }
}

/// Diagonalizes with enough stored eigenvectors per sector to hold the
/// whole ground multiplet, widening the request until it fits.
pub fn solve_ground_multiplet(
    h: &Hamiltonian,
    partition: Option<&SectorPartition>,
    opts: &SolveOptions,
    tol: f64,
) -> Result<(Spectrum, Vec<(usize, usize, f64)>, Vec<Vec<Complex64>>)> {
    let mut k = 4usize;
    loop {
        let mut o = *opts;
        o.vectors = VectorRequest::Lowest(k);
        o.n_lowest = opts.n_lowest.map(|n| n.max(k + 1));
        let spec = diagonalize(h, partition, &o)?;
        let largest = spec.sectors.iter().map(|s| s.eigenvalues.len()).max().unwrap_or(0);
        match spec.ground_multiplet_vectors(tol) {
            Ok((m, v)) => {
                let cut_ok = spec.sectors.iter().all(|s| {
                    s.complete || s.eigenvalues.last().is_none_or(|&e| e - spec.ground_energy() > tol)
                });
                if cut_ok || k >= largest {
                    return Ok((spec, m, v));
                }
            }
            Err(e) if k >= largest => return Err(e),
            Err(_) => {}
        }
        k *= 4;
    }
}

