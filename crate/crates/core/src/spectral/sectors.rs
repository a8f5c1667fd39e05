//! Basis-state partitions by diagonal symmetry parities, and the X-string
//! symmetry group used to split each sector further.

use crate::bits::BitMask;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::model::Hamiltonian;
use crate::pauli::{Axis, PauliString};
use crate::symmetry::f2::F2Matrix;
use crate::symmetry::line_operators;

use super::ops::full_dim;

/// Parity string (±1 per blocking symmetry) of a sector.
pub type SectorLabel = Vec<i8>;

#[derive(Debug, Clone)]
pub struct Sector {
    pub label: SectorLabel,
    /// Computational basis states, ascending.
    pub states: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct SectorPartition {
    n_sites: usize,
    blocking: Vec<u64>,
    sectors: Vec<Sector>,
    /// state -> (sector, position) packed as two u32.
    lookup: Vec<(u32, u32)>,
}

fn label_of(blocking: &[u64], b: u64) -> usize {
    blocking
        .iter()
        .enumerate()
        .map(|(j, z)| (((z & b).count_ones() & 1) as usize) << j)
        .sum()
}

/// Splits the computational basis by the parities of diagonal strings `u`.
pub fn sector_partition(h: &Hamiltonian, u: &[PauliString]) -> Result<SectorPartition> {
    let n = h.n_sites();
    let dim = full_dim(n)?;
    if u.len() > 24 {
        return Err(Error::Budget(format!("{} blocking symmetries", u.len())));
    }
    let mut blocking = Vec::with_capacity(u.len());
    for (j, s) in u.iter().enumerate() {
        if s.n_sites() != n {
            return Err(Error::SizeMismatch(n, s.n_sites()));
        }
        if !s.is_diagonal() {
            return Err(Error::Sector(format!("blocking symmetry {j} ({s}) is not diagonal")));
        }
        for t in h.terms() {
            if !t.op.commutes(s)? {
                return Err(Error::Sector(format!("term {} crosses the parity sectors of {s}", t.op)));
            }
        }
        blocking.push(s.z_mask().to_u64().expect("n ≤ 26"));
    }
    let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); 1 << blocking.len()];
    for b in 0..dim as u64 {
        buckets[label_of(&blocking, b)].push(b);
    }
    let mut sectors = Vec::new();
    let mut lookup = vec![(0u32, 0u32); dim];
    for (idx, states) in buckets.into_iter().enumerate() {
        if states.is_empty() {
            continue;
        }
        let label = (0..blocking.len()).map(|j| if idx >> j & 1 == 1 { -1 } else { 1 }).collect();
        let si = sectors.len() as u32;
        for (p, &b) in states.iter().enumerate() {
            lookup[b as usize] = (si, p as u32);
        }
        sectors.push(Sector { label, states });
    }
    Ok(SectorPartition { n_sites: n, blocking, sectors, lookup })
}

impl SectorPartition {
    /// The whole space as one sector.
    pub fn trivial(n_sites: usize) -> Result<SectorPartition> {
        let dim = full_dim(n_sites)?;
        Ok(SectorPartition {
            n_sites,
            blocking: vec![],
            sectors: vec![Sector { label: vec![], states: (0..dim as u64).collect() }],
            lookup: (0..dim as u32).map(|p| (0, p)).collect(),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    /// z-masks of the blocking symmetries.
    pub fn blocking_masks(&self) -> &[u64] {
        &self.blocking
    }

    pub fn locate(&self, b: u64) -> (usize, usize) {
        let (s, p) = self.lookup[b as usize];
        (s as usize, p as usize)
    }

    pub fn label_of_state(&self, b: u64) -> SectorLabel {
        self.sectors[self.locate(b).0].label.clone()
    }

    pub fn sector_index(&self, label: &[i8]) -> Option<usize> {
        self.sectors.iter().position(|s| s.label == label)
    }
}

/// Diagonal foliation strings of `lattice` that commute with `h`, in axis
/// then line order. These are the row symmetries in the rotated frame.
pub fn diagonal_symmetries(lattice: &Lattice, h: &Hamiltonian) -> Result<Vec<PauliString>> {
    let mut out = Vec::new();
    for axis in Axis::ALL.iter().take(lattice.dimension()) {
        for s in line_operators(lattice, *axis, h.frame())? {
            if s.op.is_diagonal() && h.terms().iter().all(|t| t.op.commutes(&s.op).unwrap_or(false)) {
                out.push(s.op);
            }
        }
    }
    Ok(out)
}

/// Group of bit-flip strings X^g that commute with every term of `h` and
/// every blocking string. Acts freely on basis states.
#[derive(Debug, Clone)]
pub struct FlipGroup {
    pub generators: Vec<u64>,
    /// (mask, generator bits) for all 2^k elements.
    pub elements: Vec<(u64, u32)>,
}

pub const MAX_FLIP_GENERATORS: usize = 16;

pub fn flip_group(h: &Hamiltonian, blocking: &[u64]) -> Result<FlipGroup> {
    let n = h.n_sites();
    let mut constraints: Vec<BitMask> = Vec::new();
    for t in h.terms() {
        if !t.op.z_mask().is_zero() {
            constraints.push(t.op.z_mask().clone());
        }
    }
    for &z in blocking {
        constraints.push(BitMask::from_u64(n, z));
    }
    let null = F2Matrix::new(n, constraints).nullspace();
    let generators: Vec<u64> = null
        .iter()
        .take(MAX_FLIP_GENERATORS)
        .map(|g| g.to_u64().expect("n ≤ 64"))
        .collect();
    let k = generators.len();
    let elements = (0u32..1 << k)
        .map(|bits| {
            let m = (0..k).filter(|i| bits >> i & 1 == 1).fold(0u64, |m, i| m ^ generators[i]);
            (m, bits)
        })
        .collect();
    Ok(FlipGroup { generators, elements })
}

impl FlipGroup {
    pub fn trivial() -> Self {
        FlipGroup { generators: vec![], elements: vec![(0, 0)] }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Smallest state in the orbit of `b` and the element bits taking it to `b`.
    pub fn representative(&self, b: u64) -> (u64, u32) {
        let mut best = (b, 0u32);
        for &(m, bits) in &self.elements {
            let c = b ^ m;
            if c < best.0 {
                best = (c, bits);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;
    use crate::model::{build_model, Couplings, Frame, ModelKind};

    fn pcm(spec: LatticeSpec) -> (Lattice, Hamiltonian) {
        let l = Lattice::build(&spec).unwrap();
        let h = build_model(&l, ModelKind::Pcm, Couplings::compass(1.0, 0.7), Frame::Rotated, &[]).unwrap();
        (l, h)
    }

    #[test]
    fn parallelogram_sectors() {
        let (l, h) = pcm(LatticeSpec::parallelogram(3, 1));
        let u = diagonal_symmetries(&l, &h).unwrap();
        assert_eq!(u.len(), 3);
        let p = sector_partition(&h, &u).unwrap();
        assert_eq!(p.sectors().len(), 8);
        assert!(p.sectors().iter().all(|s| s.states.len() == 64));
    }

    #[test]
    fn square_two_sectors() {
        let (l, h) = pcm(LatticeSpec::square_open(2));
        let p = sector_partition(&h, &diagonal_symmetries(&l, &h).unwrap()).unwrap();
        assert_eq!(p.sectors().iter().map(|s| s.states.len()).collect::<Vec<_>>(), vec![4; 4]);
    }

    #[test]
    fn non_diagonal_rejected() {
        let (_, h) = pcm(LatticeSpec::square_open(2));
        let x = PauliString::single(0, Axis::X, 4).unwrap();
        assert!(sector_partition(&h, &[x]).is_err());
        let z = PauliString::single(0, Axis::Z, 4).unwrap();
        assert!(sector_partition(&h, &[z]).is_err());
    }

    #[test]
    fn flip_group_is_column_group() {
        let (l, h) = pcm(LatticeSpec::parallelogram(4, 1));
        let u = diagonal_symmetries(&l, &h).unwrap();
        let p = sector_partition(&h, &u).unwrap();
        let g = flip_group(&h, p.blocking_masks()).unwrap();
        // 7 columns, 4 row constraints of rank 4
        assert_eq!(g.generators.len(), 3);
        for &(m, _) in &g.elements {
            for t in h.terms() {
                assert_eq!((t.op.z_mask().to_u64().unwrap() & m).count_ones() % 2, 0);
            }
        }
    }
}
