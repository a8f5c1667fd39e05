//! Block assembly and eigensolvers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::Hamiltonian;
use crate::pauli::{phase_to_complex, PackedPauli};

use super::lanczos;
use super::sectors::{flip_group, FlipGroup, Sector, SectorPartition};
use super::{SectorSpectrum, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorRequest {
    None,
    /// The lowest k eigenvectors of every sector.
    Lowest(usize),
    All,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Largest block solved densely.
    pub dense_max_dim: usize,
    /// Only the lowest levels per sector; required beyond the dense limit.
    pub n_lowest: Option<usize>,
    pub vectors: VectorRequest,
    pub seed: u64,
    /// Split sectors further by the commuting bit-flip group.
    pub refine: bool,
    /// Relative residual target for the iterative solver.
    pub residual_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            dense_max_dim: 8192,
            n_lowest: None,
            vectors: VectorRequest::None,
            seed: 7,
            refine: true,
            residual_tol: 1e-10,
        }
    }
}

/// Matrix elements of one sector in the symmetrized basis, before the
/// group character is chosen.
struct Pattern {
    dim: usize,
    /// (row, col, amplitude, element bits)
    entries: Vec<(u32, u32, Complex64, u32)>,
    /// For every sector state: (representative index, element bits).
    orbit: Vec<(u32, u32)>,
    real: bool,
}

fn build_pattern(sector: &Sector, si: usize, part: &SectorPartition, terms: &[(f64, PackedPauli)], group: &FlipGroup) -> Result<Pattern> {
    let mut orbit = Vec::with_capacity(sector.states.len());
    let mut reps = Vec::new();
    let mut rep_of_pos = vec![u32::MAX; sector.states.len()];
    for (p, &s) in sector.states.iter().enumerate() {
        let (r, _) = group.representative(s);
        if r == s {
            rep_of_pos[p] = reps.len() as u32;
            reps.push(s);
        }
    }
    for &s in &sector.states {
        let (r, bits) = group.representative(s);
        let (_, rp) = part.locate(r);
        orbit.push((rep_of_pos[rp], bits));
    }
    let mut entries = Vec::new();
    let mut real = true;
    for (i, &r) in reps.iter().enumerate() {
        for (c, t) in terms {
            if *c == 0.0 {
                continue;
            }
            let (s, k) = t.apply(r);
            let (ss, sp) = part.locate(s);
            if ss != si {
                return Err(Error::Sector(format!("a term maps sector {si} into sector {ss}")));
            }
            let (j, bits) = orbit[sp];
            if k & 1 == 1 {
                real = false;
            }
            entries.push((j, i as u32, phase_to_complex(k) * *c, bits));
        }
    }
    Ok(Pattern { dim: reps.len(), entries, orbit, real })
}

fn character(bits: u32, chi: u32) -> f64 {
    if (bits & chi).count_ones() & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

struct BlockResult {
    values: Vec<f64>,
    residuals: Vec<f64>,
    /// Eigenvectors in the block basis, aligned with `values`.
    vectors: Vec<Vec<Complex64>>,
}

fn dense_block(p: &Pattern, chi: u32, keep_vectors: usize) -> BlockResult {
    let d = p.dim;
    if p.real {
        let mut m = DMatrix::<f64>::zeros(d, d);
        for &(j, i, a, bits) in &p.entries {
            m[(j as usize, i as usize)] += a.re * character(bits, chi);
        }
        let eig = SymmetricEigen::new(m.clone());
        finish_dense(eig.eigenvalues.as_slice(), d, keep_vectors, |c| {
            let v: DVector<f64> = eig.eigenvectors.column(c).into_owned();
            let r = (&m * &v - &v * eig.eigenvalues[c]).norm();
            (r, v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
        })
    } else {
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for &(j, i, a, bits) in &p.entries {
            m[(j as usize, i as usize)] += a * character(bits, chi);
        }
        let eig = SymmetricEigen::new(m.clone());
        finish_dense(eig.eigenvalues.as_slice(), d, keep_vectors, |c| {
            let v: DVector<Complex64> = eig.eigenvectors.column(c).into_owned();
            let r = (&m * &v - &v * Complex64::new(eig.eigenvalues[c], 0.0)).norm();
            (r, v.iter().copied().collect())
        })
    }
}

fn finish_dense<F>(values: &[f64], d: usize, keep_vectors: usize, col: F) -> BlockResult
where
    F: Fn(usize) -> (f64, Vec<Complex64>),
{
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = BlockResult { values: vec![], residuals: vec![], vectors: vec![] };
    for (rank, &c) in order.iter().enumerate() {
        let (r, v) = col(c);
        out.values.push(values[c]);
        out.residuals.push(r);
        if rank < keep_vectors {
            out.vectors.push(v);
        }
    }
    out
}

fn iterative_block(p: &Pattern, chi: u32, k: usize, tol: f64, seed: u64) -> Result<BlockResult> {
    // compressed rows for the matvec
    let mut rows: Vec<Vec<(u32, Complex64)>> = vec![Vec::new(); p.dim];
    for &(j, i, a, bits) in &p.entries {
        rows[j as usize].push((i, a * character(bits, chi)));
    }
    let mv = |v: &[Complex64]| -> Vec<Complex64> {
        rows.iter().map(|r| r.iter().map(|&(i, a)| a * v[i as usize]).sum()).collect()
    };
    let r = lanczos::lowest(mv, p.dim, k, tol, seed ^ chi as u64)?;
    Ok(BlockResult { values: r.values, residuals: r.residuals, vectors: r.vectors })
}

fn solve_sector(
    h: &Hamiltonian,
    sector: &Sector,
    si: usize,
    part: &SectorPartition,
    terms: &[(f64, PackedPauli)],
    group: &FlipGroup,
    opts: &SolveOptions,
) -> Result<SectorSpectrum> {
    let p = build_pattern(sector, si, part, terms, group)?;
    let g = group.order();
    let keep = match opts.vectors {
        VectorRequest::None => 0,
        VectorRequest::Lowest(k) => k,
        VectorRequest::All => usize::MAX,
    };
    let scale = h.norm_bound().max(1.0);
    let mut levels: Vec<(f64, f64, Option<(u32, usize)>)> = Vec::new();
    let mut block_vecs: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(g);
    for chi in 0..g as u32 {
        let res = if p.dim <= opts.dense_max_dim {
            let mut r = dense_block(&p, chi, keep);
            if let Some(k) = opts.n_lowest {
                r.values.truncate(k);
                r.residuals.truncate(k);
                r.vectors.truncate(k);
            }
            r
        } else {
            let k = opts.n_lowest.ok_or_else(|| {
                Error::Budget(format!(
                    "block of dimension {} exceeds dense limit {} and no n_lowest was requested",
                    p.dim, opts.dense_max_dim
                ))
            })?;
            iterative_block(&p, chi, k.min(p.dim), opts.residual_tol * scale, opts.seed)?
        };
        for (i, (&v, &r)) in res.values.iter().zip(&res.residuals).enumerate() {
            let vec_ref = if i < res.vectors.len() { Some((chi, i)) } else { None };
            levels.push((v, r, vec_ref));
        }
        block_vecs.push(res.vectors);
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(k) = opts.n_lowest {
        levels.truncate(k);
    }
    let norm = 1.0 / (g as f64).sqrt();
    let mut vectors = Vec::new();
    for (rank, l) in levels.iter().enumerate() {
        if rank >= keep {
            break;
        }
        let Some((chi, i)) = l.2 else { break };
        let bv = &block_vecs[chi as usize][i];
        vectors.push(
            p.orbit
                .iter()
                .map(|&(j, bits)| bv[j as usize] * (character(bits, chi) * norm))
                .collect(),
        );
    }
    Ok(SectorSpectrum {
        label: sector.label.clone(),
        dim: sector.states.len(),
        eigenvalues: levels.iter().map(|l| l.0).collect(),
        residuals: levels.iter().map(|l| l.1).collect(),
        complete: levels.len() == sector.states.len(),
        vectors,
        blocks: g,
    })
}

/// Diagonalizes `h` sector by sector. Without a partition the whole space
/// is a single sector.
pub fn diagonalize(h: &Hamiltonian, partition: Option<&SectorPartition>, opts: &SolveOptions) -> Result<Spectrum> {
    let owned;
    let part = match partition {
        Some(p) => {
            if p.n_sites() != h.n_sites() {
                return Err(Error::SizeMismatch(h.n_sites(), p.n_sites()));
            }
            p
        }
        None => {
            owned = SectorPartition::trivial(h.n_sites())?;
            &owned
        }
    };
    let terms = h.packed_terms()?;
    let group = if opts.refine { flip_group(h, part.blocking_masks())? } else { FlipGroup::trivial() };
    let sectors: Vec<Result<SectorSpectrum>> = part
        .sectors()
        .par_iter()
        .enumerate()
        .map(|(si, s)| solve_sector(h, s, si, part, &terms, &group, opts))
        .collect();
    let sectors = sectors.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        n_sites: h.n_sites(),
        blocking: part.blocking_masks().to_vec(),
        states: part.sectors().iter().map(|s| s.states.clone()).collect(),
        sectors,
    })
}
