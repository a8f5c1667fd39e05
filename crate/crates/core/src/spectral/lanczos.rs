//! Restarted Lanczos with full reorthogonalization and locking, for the
//! lowest few eigenpairs of a Hermitian operator given as a matvec.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::ops::{inner, norm};

pub struct LanczosResult {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
}

fn orthogonalize(v: &mut [Complex64], against: &[Vec<Complex64>]) {
    // two passes keep the basis orthogonal to working precision
    for _ in 0..2 {
        for q in against {
            let c = inner(q, v);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, 0.0)).collect();
    let n = norm(&v);
    v.into_iter().map(|x| x / n).collect()
}

/// Lowest `k` eigenpairs. `tol` bounds ‖Av − λv‖ for every returned pair.
pub fn lowest<F>(matvec: F, dim: usize, k: usize, tol: f64, seed: u64) -> Result<LanczosResult>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let k = k.min(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut locked: Vec<(f64, Vec<Complex64>, f64)> = Vec::new();
    let krylov = dim.min((2 * k + 40).max(60));
    let mut start = random_unit(dim, &mut rng);
    let mut worst = f64::INFINITY;
    let mut verified = false;
    for _restart in 0..300 {
        if locked.len() >= k && verified {
            break;
        }
        let locked_vecs: Vec<Vec<Complex64>> = locked.iter().map(|l| l.1.clone()).collect();
        let free = dim - locked.len();
        let m = krylov.min(free);
        orthogonalize(&mut start, &locked_vecs);
        let n0 = norm(&start);
        if n0 < 1e-12 {
            start = random_unit(dim, &mut rng);
            continue;
        }
        let mut basis: Vec<Vec<Complex64>> = vec![start.iter().map(|x| x / n0).collect()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for j in 0..m {
            let mut w = matvec(&basis[j]);
            let a = inner(&basis[j], &w).re;
            alpha.push(a);
            orthogonalize(&mut w, &locked_vecs);
            orthogonalize(&mut w, &basis);
            let b = norm(&w);
            if j + 1 == m || b < 1e-13 {
                beta.push(b);
                break;
            }
            beta.push(b);
            basis.push(w.into_iter().map(|x| x / b).collect());
        }
        let size = alpha.len();
        let mut t = DMatrix::<f64>::zeros(size, size);
        for i in 0..size {
            t[(i, i)] = alpha[i];
            if i + 1 < size {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let ritz = |c: usize| -> Vec<Complex64> {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            for (i, q) in basis.iter().enumerate() {
                let s = eig.eigenvectors[(i, c)];
                for (x, y) in v.iter_mut().zip(q) {
                    *x += y * s;
                }
            }
            v
        };
        // once k pairs are locked, a run from a fresh start must find
        // nothing below the k-th, which catches missed degenerate partners
        let kth = if locked.len() >= k {
            let mut v: Vec<f64> = locked.iter().map(|l| l.0).collect();
            v.sort_by(f64::total_cmp);
            v[k - 1]
        } else {
            f64::INFINITY
        };
        let mut next = None;
        let mut found_below = false;
        for &c in &order {
            let theta = eig.eigenvalues[c];
            if theta >= kth - tol {
                break;
            }
            found_below = true;
            let mut v = ritz(c);
            let n1 = norm(&v);
            let locked_now: Vec<Vec<Complex64>> = locked.iter().map(|l| l.1.clone()).collect();
            orthogonalize(&mut v, &locked_now);
            let nv = norm(&v);
            if nv < 0.5 * n1 {
                // a copy of a locked vector
                continue;
            }
            v.iter_mut().for_each(|x| *x /= nv);
            let av = matvec(&v);
            let theta = inner(&v, &av).re;
            let res = norm(&av.iter().zip(&v).map(|(a, x)| a - x * theta).collect::<Vec<_>>());
            if res <= tol {
                locked.push((theta, v, res));
            } else {
                worst = worst.min(res);
                next = Some(v);
                break;
            }
        }
        verified = locked.len() >= k && !found_below;
        // restart from the lowest unconverged Ritz vector, or from a fresh
        // random vector to hunt for missed degenerate partners
        start = match next {
            Some(v) => v,
            None => random_unit(dim, &mut rng),
        };
    }
    if locked.len() < k {
        return Err(Error::NotConverged { residual: worst });
    }
    locked.sort_by(|a, b| a.0.total_cmp(&b.0));
    locked.truncate(k);
    Ok(LanczosResult {
        values: locked.iter().map(|l| l.0).collect(),
        residuals: locked.iter().map(|l| l.2).collect(),
        vectors: locked.into_iter().map(|l| l.1).collect(),
    })
}
