//! Compass-type spin models with line and plane symmetries: exact Pauli
//! algebra, lattice builders, dual-pair degeneracy certificates, sector
//! resolved exact diagonalization and zipper perturbation analysis.

pub mod bits;
pub mod error;
pub mod lattice;
pub mod model;
pub mod pauli;
pub mod perturbation;
pub mod runner;
pub mod spectral;
pub mod symmetry;

pub use error::{Error, Result};
