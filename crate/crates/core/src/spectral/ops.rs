//! Full-space operator application on amplitude vectors.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Hamiltonian;
use crate::pauli::{phase_to_complex, PackedPauli, PauliString};

/// Largest site count for which full-space vectors are allocated.
pub const MAX_FULL_SITES: usize = 26;

pub fn full_dim(n_sites: usize) -> Result<usize> {
    if n_sites > MAX_FULL_SITES {
        return Err(Error::Budget(format!(
            "2^{n_sites} amplitudes exceed the 2^{MAX_FULL_SITES} full-space limit"
        )));
    }
    Ok(1usize << n_sites)
}

fn check_len(n_sites: usize, v: &[Complex64]) -> Result<()> {
    let dim = full_dim(n_sites)?;
    if v.len() != dim {
        return Err(Error::SizeMismatch(dim, v.len()));
    }
    Ok(())
}

fn apply_packed_add(p: &PackedPauli, coeff: Complex64, v: &[Complex64], out: &mut [Complex64]) {
    for (b, &amp) in v.iter().enumerate() {
        if amp.re == 0.0 && amp.im == 0.0 {
            continue;
        }
        let (b2, k) = p.apply(b as u64);
        out[b2 as usize] += coeff * phase_to_complex(k) * amp;
    }
}

pub fn apply_pauli(p: &PauliString, v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(p.n_sites(), v)?;
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    apply_packed_add(&p.packed()?, Complex64::new(1.0, 0.0), v, &mut out);
    Ok(out)
}

pub fn apply_hamiltonian(h: &Hamiltonian, v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(h.n_sites(), v)?;
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (c, p) in h.packed_terms()? {
        apply_packed_add(&p, Complex64::new(c, 0.0), v, &mut out);
    }
    Ok(out)
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Checks [H, S] = 0 on the full space, column by column.
pub fn commutes_dense(h: &Hamiltonian, s: &PauliString, tol: f64) -> Result<bool> {
    if h.n_sites() != s.n_sites() {
        return Err(Error::SizeMismatch(h.n_sites(), s.n_sites()));
    }
    let dim = full_dim(h.n_sites())?;
    let terms = h.packed_terms()?;
    let sp = s.packed()?;
    let scale = h.norm_bound().max(1.0);
    for b in 0..dim as u64 {
        let mut col: HashMap<u64, Complex64> = HashMap::new();
        // H S |b>
        let (sb, ks) = sp.apply(b);
        for (c, t) in &terms {
            let (tb, kt) = t.apply(sb);
            *col.entry(tb).or_default() += phase_to_complex(ks + kt) * *c;
        }
        // - S H |b>
        for (c, t) in &terms {
            let (tb, kt) = t.apply(b);
            let (stb, ks2) = sp.apply(tb);
            *col.entry(stb).or_default() -= phase_to_complex(kt + ks2) * *c;
        }
        if col.values().any(|z| z.norm() > tol * scale) {
            return Ok(false);
        }
    }
    Ok(true)
}
