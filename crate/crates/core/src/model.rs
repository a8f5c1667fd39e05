//! Hamiltonians as lists of real-weighted Pauli strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Bond, Lattice, LatticeKind};
use crate::pauli::{Axis, PackedPauli, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Pcm,
    CubicCompass,
    XuMoore,
    U1Cubic,
    Generic,
    Zipper,
    Cylinder,
    Sub,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Pcm => "pcm",
            ModelKind::CubicCompass => "cubic_compass",
            ModelKind::XuMoore => "xu_moore",
            ModelKind::U1Cubic => "u1_cubic",
            ModelKind::Generic => "generic",
            ModelKind::Zipper => "zipper",
            ModelKind::Cylinder => "cylinder",
            ModelKind::Sub => "sub",
        }
    }
}

/// Basis convention. `Rotated` applies X→X, Y→Z, Z→−Y on every site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Literal,
    #[default]
    Rotated,
}

impl Frame {
    /// Expresses a literal-frame operator in this frame.
    pub fn map(self, p: &PauliString) -> PauliString {
        match self {
            Frame::Literal => p.clone(),
            Frame::Rotated => p.conjugate_y_to_z(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Frame::Literal => "literal",
            Frame::Rotated => "rotated",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Couplings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
}

impl Couplings {
    pub fn compass(jx: f64, jy: f64) -> Self {
        Couplings { jx: Some(jx), jy: Some(jy), ..Default::default() }
    }

    pub fn cubic(jx: f64, jy: f64, jz: f64) -> Self {
        Couplings { jx: Some(jx), jy: Some(jy), jz: Some(jz), ..Default::default() }
    }

    pub fn xu_moore(jp: f64, h: f64) -> Self {
        Couplings { jp: Some(jp), h: Some(h), ..Default::default() }
    }

    fn need(v: Option<f64>, name: &str, kind: ModelKind) -> Result<f64> {
        let v = v.ok_or_else(|| {
            Error::InvalidModel(format!("{} needs coupling {name}", kind.name()))
        })?;
        if !v.is_finite() {
            return Err(Error::InvalidModel(format!("coupling {name} = {v} is not finite")));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SitePauli {
    pub site: usize,
    pub axis: Axis,
}

/// One term of a config-supplied model, in the literal frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericTerm {
    pub coeff: f64,
    pub paulis: Vec<SitePauli>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub op: PauliString,
}

#[derive(Debug, Clone)]
pub struct Hamiltonian {
    n_sites: usize,
    terms: Vec<Term>,
    kind: ModelKind,
    couplings: Couplings,
    frame: Frame,
}

fn bond_op(n: usize, b: &Bond, axis: Axis) -> PauliString {
    PauliString::from_factors(n, &[(b.a, axis), (b.b, axis)]).expect("bond sites in range")
}

impl Hamiltonian {
    /// Builds from literal-frame terms, mapping them into `frame`.
    pub fn from_terms(n_sites: usize, terms: Vec<Term>, kind: ModelKind, couplings: Couplings, frame: Frame) -> Result<Self> {
        let mut mapped = Vec::with_capacity(terms.len());
        for t in terms {
            if t.op.n_sites() != n_sites {
                return Err(Error::SizeMismatch(n_sites, t.op.n_sites()));
            }
            if !t.coeff.is_finite() {
                return Err(Error::InvalidModel(format!("coefficient {} is not finite", t.coeff)));
            }
            if !t.op.is_hermitian() {
                return Err(Error::InvalidModel(format!("term {} is not Hermitian", t.op)));
            }
            mapped.push(Term { coeff: t.coeff, op: frame.map(&t.op) });
        }
        Ok(Hamiltonian { n_sites, terms: mapped, kind, couplings, frame })
    }

    pub fn zero(n_sites: usize, frame: Frame) -> Self {
        Hamiltonian { n_sites, terms: vec![], kind: ModelKind::Generic, couplings: Couplings::default(), frame }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn couplings(&self) -> Couplings {
        self.couplings
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    /// Terms packed into single words (n ≤ 64).
    pub fn packed_terms(&self) -> Result<Vec<(f64, PackedPauli)>> {
        self.terms.iter().map(|t| Ok((t.coeff, t.op.packed()?))).collect()
    }

    /// Sum of |coefficients|, an upper bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    pub fn weighted_ops(&self) -> Vec<(f64, PauliString)> {
        self.terms.iter().map(|t| (t.coeff, t.op.clone())).collect()
    }

    /// Isotropic compass couplings carry an extra reflection symmetry.
    pub fn is_isotropic(&self) -> bool {
        matches!(self.kind, ModelKind::Pcm | ModelKind::Zipper | ModelKind::Cylinder)
            && self.couplings.jx.is_some()
            && self.couplings.jx == self.couplings.jy
    }
}

/// Builds one of the lattice models. `generic` is only read for
/// [`ModelKind::Generic`]. On a cylinder lattice the closure bonds are
/// included.
pub fn build_model(
    lattice: &Lattice,
    kind: ModelKind,
    couplings: Couplings,
    frame: Frame,
    generic: &[GenericTerm],
) -> Result<Hamiltonian> {
    let n = lattice.n_sites();
    let d = lattice.dimension();
    let want_dim = |want: usize| {
        if d == want {
            Ok(())
        } else {
            Err(Error::InvalidModel(format!("{} needs a {want}D lattice, got {d}D", kind.name())))
        }
    };
    let bonds = lattice.all_bonds();
    let mut terms = Vec::new();
    match kind {
        ModelKind::Pcm => {
            want_dim(2)?;
            let jx = Couplings::need(couplings.jx, "jx", kind)?;
            let jy = Couplings::need(couplings.jy, "jy", kind)?;
            for b in &bonds {
                let j = if b.axis == Axis::X { jx } else { jy };
                terms.push(Term { coeff: -j, op: bond_op(n, b, b.axis) });
            }
        }
        ModelKind::CubicCompass => {
            want_dim(3)?;
            let j = [
                Couplings::need(couplings.jx, "jx", kind)?,
                Couplings::need(couplings.jy, "jy", kind)?,
                Couplings::need(couplings.jz, "jz", kind)?,
            ];
            for b in &bonds {
                terms.push(Term { coeff: -j[b.axis.index()], op: bond_op(n, b, b.axis) });
            }
        }
        ModelKind::U1Cubic => {
            want_dim(3)?;
            let j = [
                Couplings::need(couplings.jx, "jx", kind)?,
                Couplings::need(couplings.jy, "jy", kind)?,
                Couplings::need(couplings.jz, "jz", kind)?,
            ];
            for b in &bonds {
                for flavor in Axis::ALL.into_iter().filter(|a| *a != b.axis) {
                    terms.push(Term { coeff: -j[b.axis.index()], op: bond_op(n, b, flavor) });
                }
            }
        }
        ModelKind::XuMoore => {
            want_dim(2)?;
            let jp = Couplings::need(couplings.jp, "jp", kind)?;
            let h = Couplings::need(couplings.h, "h", kind)?;
            for (i, c) in lattice.coords().iter().enumerate() {
                let corner = |dx: i64, dy: i64| lattice.site_at([c[0] + dx, c[1] + dy, 0]);
                if let (Some(a), Some(b), Some(e)) = (corner(1, 0), corner(0, 1), corner(1, 1)) {
                    let op = PauliString::from_factors(n, &[(i, Axis::Z), (a, Axis::Z), (b, Axis::Z), (e, Axis::Z)])?;
                    terms.push(Term { coeff: -jp, op });
                }
            }
            for i in 0..n {
                terms.push(Term { coeff: -h, op: PauliString::single(i, Axis::X, n)? });
            }
        }
        ModelKind::Generic => {
            if generic.is_empty() {
                return Err(Error::InvalidModel("generic model needs an explicit term list".into()));
            }
            for t in generic {
                let factors: Vec<(usize, Axis)> = t.paulis.iter().map(|p| (p.site, p.axis)).collect();
                let mut seen = std::collections::HashSet::new();
                if !factors.iter().all(|(s, _)| seen.insert(*s)) {
                    return Err(Error::InvalidModel("generic term repeats a site".into()));
                }
                terms.push(Term { coeff: t.coeff, op: PauliString::from_factors(n, &factors)? });
            }
        }
        ModelKind::Zipper | ModelKind::Cylinder | ModelKind::Sub => {
            return Err(Error::InvalidModel(format!(
                "{} is derived; use the dedicated constructor",
                kind.name()
            )))
        }
    }
    Hamiltonian::from_terms(n, terms, kind, couplings, frame)
}

/// The closure terms of a unit-shear parallelogram: −J_x XX on horizontal
/// closures, −J_y YY on vertical ones (ZZ in the rotated frame).
pub fn build_zipper(lattice: &Lattice, jx: f64, jy: f64, frame: Frame) -> Result<Hamiltonian> {
    if !matches!(lattice.kind(), LatticeKind::Parallelogram | LatticeKind::Cylinder) {
        return Err(Error::InvalidModel(format!(
            "zipper needs a parallelogram lattice, got {}",
            lattice.kind().name()
        )));
    }
    let n = lattice.n_sites();
    let terms = lattice
        .zipper_bonds()?
        .iter()
        .map(|b| Term {
            coeff: if b.axis == Axis::X { -jx } else { -jy },
            op: bond_op(n, b, b.axis),
        })
        .collect();
    Hamiltonian::from_terms(n, terms, ModelKind::Zipper, Couplings::compass(jx, jy), frame)
}

/// H_open + H_zip as a concatenated term list.
pub fn assemble_cyl(open: &Hamiltonian, zip: &Hamiltonian) -> Result<Hamiltonian> {
    if open.n_sites != zip.n_sites {
        return Err(Error::SizeMismatch(open.n_sites, zip.n_sites));
    }
    if open.frame != zip.frame {
        return Err(Error::InvalidModel(format!(
            "frame mismatch: {} vs {}",
            open.frame.name(),
            zip.frame.name()
        )));
    }
    let mut terms = open.terms.clone();
    terms.extend(zip.terms.iter().cloned());
    Ok(Hamiltonian { terms, kind: ModelKind::Cylinder, ..open.clone() })
}

/// Restriction to the listed term indices.
pub fn sub_hamiltonian(h: &Hamiltonian, subset: &[usize]) -> Result<Hamiltonian> {
    let mut terms = Vec::with_capacity(subset.len());
    for &i in subset {
        let t = h
            .terms
            .get(i)
            .ok_or_else(|| Error::InvalidModel(format!("term index {i} out of range {}", h.terms.len())))?;
        terms.push(t.clone());
    }
    Ok(Hamiltonian { terms, kind: ModelKind::Sub, ..h.clone() })
}
