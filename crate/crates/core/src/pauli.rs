//! Multi-site Pauli strings in symplectic form.
//!
//! A string is `i^phase · X^x · Z^z` with `x`, `z` bit masks over the sites
//! (bit r is site r). The literal σ^y on a site is `i·X·Z`, so it carries
//! both bits plus one unit of phase. All products are exact: the phase is an
//! integer mod 4.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bits::BitMask;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Axis> {
        Axis::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }

    pub fn parse(s: &str) -> Result<Axis> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::InvalidDirection(other.to_string())),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `i^k` as a complex number.
pub fn phase_to_complex(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitMask,
    z: BitMask,
    phase: u8,
}

impl PauliString {
    pub fn identity(n_sites: usize) -> Self {
        PauliString {
            x: BitMask::zeros(n_sites),
            z: BitMask::zeros(n_sites),
            phase: 0,
        }
    }

    /// Builds `i^phase X^x Z^z` from raw masks.
    pub fn from_masks(x: BitMask, z: BitMask, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::SizeMismatch(x.len(), z.len()));
        }
        Ok(PauliString { x, z, phase: phase & 3 })
    }

    /// The Hermitian single-site operator σ^axis at `site`.
    pub fn single(site: usize, axis: Axis, n_sites: usize) -> Result<Self> {
        if site >= n_sites {
            return Err(Error::SiteOutOfRange { site, n_sites });
        }
        let mut p = Self::identity(n_sites);
        match axis {
            Axis::X => p.x.set(site, true),
            Axis::Z => p.z.set(site, true),
            Axis::Y => {
                p.x.set(site, true);
                p.z.set(site, true);
                p.phase = 1;
            }
        }
        Ok(p)
    }

    /// Ordered product of single-site factors.
    pub fn from_factors(n_sites: usize, factors: &[(usize, Axis)]) -> Result<Self> {
        let mut p = Self::identity(n_sites);
        for &(site, axis) in factors {
            p = p.multiply(&Self::single(site, axis, n_sites)?)?;
        }
        Ok(p)
    }

    /// Π_{r ∈ sites} i σ^axis_r.
    pub fn line_operator(n_sites: usize, sites: &[usize], axis: Axis) -> Result<Self> {
        let mut p = Self::identity(n_sites);
        for &s in sites {
            p = p.multiply(&Self::single(s, axis, n_sites)?)?;
        }
        p.phase = (p.phase + (sites.len() % 4) as u8) & 3;
        Ok(p)
    }

    pub fn n_sites(&self) -> usize {
        self.x.len()
    }

    pub fn x_mask(&self) -> &BitMask {
        &self.x
    }

    pub fn z_mask(&self) -> &BitMask {
        &self.z
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n_sites() != other.n_sites() {
            Err(Error::SizeMismatch(self.n_sites(), other.n_sites()))
        } else {
            Ok(())
        }
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        // Z^b X^c = (-1)^{|b∧c|} X^c Z^b
        let swap = self.z.and_count(&other.x) as u8;
        Ok(PauliString {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            phase: (self.phase + other.phase + 2 * (swap & 1)) & 3,
        })
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.symplectic_overlap(other).is_multiple_of(2))
    }

    fn symplectic_overlap(&self, other: &Self) -> usize {
        self.x.and_count(&other.z) + self.z.and_count(&other.x)
    }

    /// `P|b> = amp |b'>` for a computational basis state.
    pub fn apply_to_basis_state(&self, b: &BitMask) -> Result<(BitMask, Complex64)> {
        if b.len() != self.n_sites() {
            return Err(Error::SizeMismatch(self.n_sites(), b.len()));
        }
        let sign = (self.z.and_count(b) % 2) as u8 * 2;
        Ok((b.xor(&self.x), phase_to_complex(self.phase + sign)))
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize + self.x.and_count(&self.z)).is_multiple_of(2)
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// True when the string is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.x.is_zero()
    }

    pub fn support(&self) -> Vec<usize> {
        self.x.or(&self.z).ones()
    }

    pub fn weight(&self) -> usize {
        self.x.or(&self.z).count_ones()
    }

    /// Which Pauli acts on `site`, ignoring phase.
    pub fn axis_at(&self, site: usize) -> Option<Axis> {
        match (self.x.get(site), self.z.get(site)) {
            (false, false) => None,
            (true, false) => Some(Axis::X),
            (false, true) => Some(Axis::Z),
            (true, true) => Some(Axis::Y),
        }
    }

    /// Image under the site-wise unitary X→X, Y→Z, Z→−Y.
    pub fn conjugate_y_to_z(&self) -> Self {
        let n = self.n_sites();
        let mut out = Self::identity(n).with_phase(self.phase);
        for r in self.support() {
            if self.x.get(r) {
                out = out.multiply(&Self::single(r, Axis::X, n).unwrap()).unwrap();
            }
            if self.z.get(r) {
                let minus_y = Self::single(r, Axis::Y, n).unwrap();
                let minus_y = minus_y.clone().with_phase(minus_y.phase + 2);
                out = out.multiply(&minus_y).unwrap();
            }
        }
        out
    }

    /// Inverse of [`conjugate_y_to_z`](Self::conjugate_y_to_z).
    pub fn conjugate_z_to_y(&self) -> Self {
        // the map has order 4; three applications invert it
        self.conjugate_y_to_z().conjugate_y_to_z().conjugate_y_to_z()
    }

    /// Single-word form for Hilbert-space work; requires n ≤ 64.
    pub fn packed(&self) -> Result<PackedPauli> {
        match (self.x.to_u64(), self.z.to_u64()) {
            (Some(x), Some(z)) => Ok(PackedPauli { x, z, phase: self.phase }),
            _ => Err(Error::Budget(format!(
                "{} sites do not fit a single-word basis state",
                self.n_sites()
            ))),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<usize>| {
            v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "i^{} ·", self.phase)?;
        if self.is_identity() {
            return write!(f, " I");
        }
        if !self.x.is_zero() {
            write!(f, " X({})", join(self.x.ones()))?;
        }
        if !self.z.is_zero() {
            write!(f, " Z({})", join(self.z.ones()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString[{}]({self})", self.n_sites())
    }
}

/// A Pauli string packed into single words, for basis-state kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackedPauli {
    pub x: u64,
    pub z: u64,
    pub phase: u8,
}

impl PackedPauli {
    #[inline]
    pub fn apply(&self, b: u64) -> (u64, u8) {
        let sign = ((self.z & b).count_ones() & 1) as u8 * 2;
        (b ^ self.x, (self.phase + sign) & 3)
    }
}

/// A linear combination of Pauli strings in canonical `X^x Z^z` form.
#[derive(Debug, Clone, Default)]
pub struct PauliSum {
    terms: BTreeMap<(BitMask, BitMask), Complex64>,
}

impl PauliSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, coeff: Complex64, p: &PauliString) {
        let c = coeff * phase_to_complex(p.phase);
        let e = self
            .terms
            .entry((p.x.clone(), p.z.clone()))
            .or_insert(Complex64::new(0.0, 0.0));
        *e += c;
    }

    /// Commutator `[A, B]` of two weighted string lists.
    pub fn commutator(a: &[(f64, PauliString)], b: &[(f64, PauliString)]) -> Result<PauliSum> {
        let mut out = PauliSum::new();
        for (ca, pa) in a {
            for (cb, pb) in b {
                if !pa.commutes(pb)? {
                    // anticommuting: [P,Q] = 2PQ
                    out.add(Complex64::new(2.0 * ca * cb, 0.0), &pa.multiply(pb)?);
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn nonzero_terms(&self) -> usize {
        self.terms.values().filter(|c| c.norm() != 0.0).count()
    }
}
