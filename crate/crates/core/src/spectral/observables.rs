//! Expectation values, correlators, reduced density matrices, entropy.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Hamiltonian;
use crate::pauli::PauliString;

use super::ops::{apply_hamiltonian, apply_pauli, full_dim, inner};

/// Anything that acts on full-space amplitude vectors.
pub trait Observable {
    fn n_sites(&self) -> usize;
    fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>>;
}

impl Observable for PauliString {
    fn n_sites(&self) -> usize {
        PauliString::n_sites(self)
    }

    fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        apply_pauli(self, v)
    }
}

impl Observable for Hamiltonian {
    fn n_sites(&self) -> usize {
        Hamiltonian::n_sites(self)
    }

    fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        apply_hamiltonian(self, v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub value: f64,
    pub imag_residue: f64,
}

/// Re ⟨ψ|O|ψ⟩ with the discarded imaginary part.
pub fn expectation<O: Observable + ?Sized>(state: &[Complex64], op: &O) -> Result<Expectation> {
    let ov = op.apply(state)?;
    let z = inner(state, &ov);
    Ok(Expectation { value: z.re, imag_residue: z.im.abs() })
}

/// ⟨PQ⟩ − ⟨P⟩⟨Q⟩ (real parts).
pub fn connected_correlator(state: &[Complex64], p: &PauliString, q: &PauliString) -> Result<f64> {
    let pq = p.multiply(q)?;
    Ok(expectation(state, &pq)?.value - expectation(state, p)?.value * expectation(state, q)?.value)
}

/// Reduced density matrix of `region` for a weighted mixture of pure states.
/// Region site k is bit k of the reduced index.
pub fn reduced_density(states: &[(f64, Vec<Complex64>)], n_sites: usize, region: &[usize]) -> Result<DMatrix<Complex64>> {
    let dim = full_dim(n_sites)?;
    let mut seen = vec![false; n_sites];
    for &r in region {
        if r >= n_sites {
            return Err(Error::SiteOutOfRange { site: r, n_sites });
        }
        if std::mem::replace(&mut seen[r], true) {
            return Err(Error::InvalidModel(format!("site {r} repeated in region")));
        }
    }
    if region.len() > 14 {
        return Err(Error::Budget(format!("region of {} sites", region.len())));
    }
    let wsum: f64 = states.iter().map(|s| s.0).sum();
    if (wsum - 1.0).abs() > 1e-12 || states.iter().any(|s| s.0 < 0.0) {
        return Err(Error::Numerical(format!("mixture weights sum to {wsum}")));
    }
    let env: Vec<usize> = (0..n_sites).filter(|s| !seen[*s]).collect();
    let da = 1usize << region.len();
    let de = 1usize << env.len();
    let spread = |bits: usize, sites: &[usize]| -> usize {
        sites.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &s)| 1usize << s).sum()
    };
    let a_off: Vec<usize> = (0..da).map(|i| spread(i, region)).collect();
    let e_off: Vec<usize> = (0..de).map(|i| spread(i, &env)).collect();
    let mut rho = DMatrix::<Complex64>::zeros(da, da);
    for (w, psi) in states {
        if psi.len() != dim {
            return Err(Error::SizeMismatch(dim, psi.len()));
        }
        // ψ as a da × de matrix, ρ_A = Ψ Ψ†
        let m = DMatrix::from_fn(da, de, |i, j| psi[a_off[i] | e_off[j]]);
        rho += (&m * m.adjoint()) * Complex64::new(*w, 0.0);
    }
    Ok(rho)
}

/// −Tr ρ log₂ ρ.
pub fn von_neumann_entropy(rho: &DMatrix<Complex64>) -> Result<f64> {
    let eig = rho.clone().symmetric_eigenvalues();
    let mut s = 0.0;
    for &l in eig.iter() {
        if l < -1e-12 {
            return Err(Error::Numerical(format!("density matrix has eigenvalue {l:e}")));
        }
        if l > 1e-300 {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Axis;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_expectation() {
        let psi = vec![c(0.6), c(0.8)];
        let e = expectation(&psi, &PauliString::identity(1)).unwrap();
        assert!((e.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_state_correlator_vanishes() {
        let mut psi = vec![c(0.0); 8];
        psi[0] = c(1.0);
        let z0 = PauliString::single(0, Axis::Z, 3).unwrap();
        let z2 = PauliString::single(2, Axis::Z, 3).unwrap();
        assert_eq!(connected_correlator(&psi, &z0, &z2).unwrap(), 0.0);
    }

    #[test]
    fn entangled_pair_correlator() {
        let s = 0.5f64.sqrt();
        let psi = vec![c(0.0), c(s), c(-s), c(0.0)];
        let z0 = PauliString::single(0, Axis::Z, 2).unwrap();
        let z1 = PauliString::single(1, Axis::Z, 2).unwrap();
        assert!((connected_correlator(&psi, &z0, &z1).unwrap() + 1.0).abs() < 1e-12);
        let rho = reduced_density(&[(1.0, psi)], 2, &[0]).unwrap();
        assert!((von_neumann_entropy(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_entropy() {
        // |0> on site 0, |+> on site 1
        let s = 0.5f64.sqrt();
        let psi = vec![c(s), c(0.0), c(s), c(0.0)];
        for region in [vec![0], vec![1], vec![0, 1]] {
            let rho = reduced_density(&[(1.0, psi.clone())], 2, &region).unwrap();
            assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn negative_eigenvalue_is_error() {
        let rho = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.1), c(-0.1)]));
        assert!(von_neumann_entropy(&rho).is_err());
    }
}
