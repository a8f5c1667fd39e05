//! Dense reference implementations shared by the integration tests. None of
//! them go through the bit-mask code paths under test.

#![allow(dead_code)]

use gaugelike::model::Hamiltonian;
use gaugelike::pauli::PauliString;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// X^x Z^z on one site as a 2×2 matrix.
fn site_factor(x: bool, z: bool) -> DMatrix<Complex64> {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let xm = DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]);
    let zm = DMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]);
    let id = DMatrix::identity(2, 2);
    (if x { xm } else { id.clone() }) * (if z { zm } else { id })
}

/// i^p ⊗_k X^{x_k} Z^{z_k}, with site k the k-th bit of the basis index.
pub fn dense_pauli(p: &PauliString) -> DMatrix<Complex64> {
    let n = p.n_sites();
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for k in (0..n).rev() {
        m = kron(&m, &site_factor(p.x_mask().get(k), p.z_mask().get(k)));
    }
    let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase_exp() as usize % 4];
    m * phase
}

pub fn dense_hamiltonian(h: &Hamiltonian) -> DMatrix<Complex64> {
    let d = 1usize << h.n_sites();
    let mut m = DMatrix::from_element(d, d, c(0.0, 0.0));
    for t in h.terms() {
        m += dense_pauli(&t.op) * c(t.coeff, 0.0);
    }
    m
}

pub fn dense_spectrum(h: &Hamiltonian) -> Vec<f64> {
    let mut e: Vec<f64> = dense_hamiltonian(h).symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Rank over F₂ as log₂ of the size of the row span, by enumeration.
pub fn span_rank(rows: &[Vec<u8>]) -> usize {
    let packed: Vec<u64> = rows
        .iter()
        .map(|r| r.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64 & 1) << i)))
        .collect();
    let mut span = std::collections::HashSet::new();
    for mask in 0u32..1 << packed.len() {
        let v = packed.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0u64, |a, (_, r)| a ^ r);
        span.insert(v);
    }
    span.len().trailing_zeros() as usize
}

/// Product and commutation of `p`, `q` agree with their dense matrices.
pub fn pair_agrees(p: &PauliString, q: &PauliString) -> bool {
    let (dp, dq) = (dense_pauli(p), dense_pauli(q));
    let (ab, ba) = (&dp * &dq, &dq * &dp);
    dense_pauli(&p.multiply(q).unwrap()) == ab && p.commutes(q).unwrap() == (ab == ba)
}

/// `apply_to_basis_state` reproduces every column of the dense matrix.
pub fn apply_agrees(p: &PauliString) -> bool {
    let dp = dense_pauli(p);
    let n = p.n_sites();
    (0..1u64 << n).all(|b| {
        let (b2, amp) = p.apply_to_basis_state(&gaugelike::bits::BitMask::from_u64(n, b)).unwrap();
        let target = b2.to_u64().unwrap() as usize;
        dp.column(b as usize).iter().enumerate().all(|(row, v)| *v == if row == target { amp } else { c(0.0, 0.0) })
    })
}
