//! Line and plane symmetry strings, dual-pair certificates and the
//! degeneracy bound they imply.

mod classical;
pub mod f2;

use serde_json::{json, Value};

use crate::bits::BitMask;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeKind};
use crate::model::{Frame, Hamiltonian};
use crate::pauli::{Axis, PauliString};
use crate::spectral::ops;

pub use classical::{classical_energy, classical_orbit, ClassicalConfig, ClassicalOrbit};
use f2::F2Matrix;

/// Which foliation lines a symmetry string is built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryLabel {
    pub axis: Axis,
    pub lines: Vec<usize>,
}

impl std::fmt::Display for SymmetryLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l: Vec<String> = self.lines.iter().map(|i| i.to_string()).collect();
        write!(f, "O^{}[{}]", self.axis, l.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryOp {
    pub op: PauliString,
    pub support: Vec<usize>,
    pub label: SymmetryLabel,
}

impl SymmetryOp {
    /// The ±1-valued parity operator: the string with its i^k prefactor removed.
    pub fn parity_operator(&self) -> PauliString {
        // phase |x∧z| makes the string Hermitian with square +1
        let p = (self.op.x_mask().and_count(self.op.z_mask()) % 4) as u8;
        self.op.clone().with_phase(p)
    }
}

fn line_op(lattice: &Lattice, sites: &[usize], axis: Axis, frame: Frame, label: SymmetryLabel) -> Result<SymmetryOp> {
    let op = frame.map(&PauliString::line_operator(lattice.n_sites(), sites, axis)?);
    let mut support = sites.to_vec();
    support.sort_unstable();
    Ok(SymmetryOp { op, support, label })
}

/// Foliation lines used for symmetry strings. On a cylinder the columns c
/// and c+L are one closed line.
pub fn symmetry_lines(lattice: &Lattice, axis: Axis) -> Result<Vec<Vec<usize>>> {
    let lines = lattice.foliate(axis)?;
    if lattice.kind() == LatticeKind::Cylinder && axis == Axis::X {
        let l = lattice.l();
        let mut closed: Vec<Vec<usize>> = vec![vec![]; l];
        for (c, col) in lines.iter().enumerate() {
            closed[c % l].extend(col);
        }
        for c in &mut closed {
            c.sort_unstable();
        }
        return Ok(closed);
    }
    Ok(lines)
}

/// Unverified Π iσ^axis strings over the raw foliation of `lattice`.
pub fn line_operators(lattice: &Lattice, axis: Axis, frame: Frame) -> Result<Vec<SymmetryOp>> {
    lattice
        .foliate(axis)?
        .iter()
        .enumerate()
        .map(|(i, sites)| line_op(lattice, sites, axis, frame, SymmetryLabel { axis, lines: vec![i] }))
        .collect()
}

/// One Π iσ^axis string per foliation line, each checked against `h`.
pub fn foliation_symmetries(lattice: &Lattice, h: &Hamiltonian, axis: Axis) -> Result<Vec<SymmetryOp>> {
    if lattice.n_sites() != h.n_sites() {
        return Err(Error::SizeMismatch(lattice.n_sites(), h.n_sites()));
    }
    let ops = line_operators(lattice, axis, h.frame())?;
    for s in &ops {
        if !verify_symmetry(h, &s.op)? {
            return Err(Error::SymmetryBroken { label: s.label.to_string() });
        }
    }
    Ok(ops)
}

/// Term-wise commutation, with a dense fallback for n ≤ 9 when some term
/// fails (terms may cancel in the sum). The dense answer wins.
pub fn verify_symmetry(h: &Hamiltonian, s: &PauliString) -> Result<bool> {
    if h.n_sites() != s.n_sites() {
        return Err(Error::SizeMismatch(h.n_sites(), s.n_sites()));
    }
    let mut termwise = true;
    for t in h.terms() {
        if t.coeff != 0.0 && !t.op.commutes(s)? {
            termwise = false;
            break;
        }
    }
    if termwise || h.n_sites() > 9 {
        return Ok(termwise);
    }
    ops::commutes_dense(h, s, 1e-12)
}

/// Product of the selected symmetries, in list order.
pub fn composite(symmetries: &[SymmetryOp], subset: &[usize]) -> Result<SymmetryOp> {
    let n = symmetries
        .first()
        .map(|s| s.op.n_sites())
        .ok_or_else(|| Error::InvalidModel("composite over an empty symmetry list".into()))?;
    let axis = symmetries[0].label.axis;
    let mut op = PauliString::identity(n);
    let mut lines = Vec::new();
    for &i in subset {
        let s = symmetries
            .get(i)
            .ok_or_else(|| Error::InvalidModel(format!("symmetry index {i} out of range")))?;
        if s.label.axis != axis {
            return Err(Error::InvalidModel("composite mixes directions".into()));
        }
        op = op.multiply(&s.op)?;
        lines.extend(&s.label.lines);
    }
    let support = op.support();
    Ok(SymmetryOp { op, support, label: SymmetryLabel { axis, lines } })
}

#[derive(Debug, Clone)]
pub struct DualPairCertificate {
    pub u: Vec<SymmetryOp>,
    pub v: Vec<SymmetryOp>,
    /// For each V_a, the indices of the lines it multiplies.
    pub v_lines: Vec<Vec<usize>>,
    pub u_axis: Axis,
    pub v_axis: Axis,
    /// A[c][ρ] = |V-line c ∩ U-line ρ| mod 2.
    pub parity_matrix: Vec<Vec<u8>>,
    pub rank: usize,
}

impl DualPairCertificate {
    pub fn m(&self) -> usize {
        self.u.len()
    }

    /// Re-checks the defining relations exactly.
    pub fn check(&self) -> Result<()> {
        if self.u.len() != self.v.len() || self.u.len() != self.rank {
            return Err(Error::NoDualPairs(format!(
                "|U| = {}, |V| = {}, rank = {}",
                self.u.len(),
                self.v.len(),
                self.rank
            )));
        }
        for (a, ua) in self.u.iter().enumerate() {
            for (b, ub) in self.u.iter().enumerate() {
                if !ua.op.commutes(&ub.op)? {
                    return Err(Error::NoDualPairs(format!("U_{a} and U_{b} anticommute")));
                }
            }
            for (b, vb) in self.v.iter().enumerate() {
                let c = ua.op.commutes(&vb.op)?;
                if (a == b) == c {
                    return Err(Error::NoDualPairs(format!("pair relation fails for U_{a}, V_{b}")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "M": self.m(),
            "bound": degeneracy_lower_bound(self),
            "rank": self.rank,
            "U": self.u.iter().map(|s| s.label.to_string()).collect::<Vec<_>>(),
            "U_lines": self.u.iter().map(|s| s.label.lines.clone()).collect::<Vec<_>>(),
            "V": self.v_lines,
            "u_axis": self.u_axis.name(),
            "v_axis": self.v_axis.name(),
            "parity_matrix": self.parity_matrix,
        })
    }
}

/// Intersection parities A[c][ρ] between two families of site sets.
pub fn parity_matrix(v_lines: &[Vec<usize>], u_lines: &[Vec<usize>], n_sites: usize) -> F2Matrix {
    let masks: Vec<BitMask> = u_lines.iter().map(|s| BitMask::from_indices(n_sites, s)).collect();
    let rows = v_lines
        .iter()
        .map(|c| {
            let cm = BitMask::from_indices(n_sites, c);
            let idx: Vec<usize> = masks.iter().enumerate().filter(|(_, r)| cm.and_count(r) % 2 == 1).map(|(i, _)| i).collect();
            BitMask::from_indices(u_lines.len(), &idx)
        })
        .collect();
    F2Matrix::new(u_lines.len(), rows)
}

fn certificate_for(lattice: &Lattice, h: &Hamiltonian, u_axis: Axis, v_axis: Axis) -> Result<DualPairCertificate> {
    let n = lattice.n_sites();
    let frame = h.frame();
    let u_lines = symmetry_lines(lattice, u_axis)?;
    let v_lines = symmetry_lines(lattice, v_axis)?;
    let a = parity_matrix(&v_lines, &u_lines, n);
    let rank = a.rank();
    if rank == 0 {
        return Err(Error::NoDualPairs(format!(
            "no odd intersections between {v_axis}- and {u_axis}-lines"
        )));
    }
    // independent V-lines in index order, then pivot U-lines among them
    let basis = a.greedy_independent_rows();
    let sub = F2Matrix::new(u_lines.len(), basis.iter().map(|&c| a.row(c).clone()).collect());
    let (_, pivots) = sub.rref();
    let restricted = F2Matrix::new(
        pivots.len(),
        basis
            .iter()
            .map(|&c| {
                let idx: Vec<usize> = pivots.iter().enumerate().filter(|(_, &p)| a.get(c, p)).map(|(k, _)| k).collect();
                BitMask::from_indices(pivots.len(), &idx)
            })
            .collect(),
    );
    let mut u = Vec::new();
    let mut v = Vec::new();
    let mut v_idx = Vec::new();
    for (k, &rho) in pivots.iter().enumerate() {
        let target = BitMask::from_indices(pivots.len(), &[k]);
        let combo = restricted
            .solve_row_combination(&target)
            .ok_or_else(|| Error::NoDualPairs("pivot system is singular".into()))?;
        let cols: Vec<usize> = combo.ones().iter().map(|&i| basis[i]).collect();
        let label = SymmetryLabel { axis: u_axis, lines: vec![rho] };
        let uo = line_op(lattice, &u_lines[rho], u_axis, frame, label)?;
        let mut op = PauliString::identity(n);
        for &c in &cols {
            op = op.multiply(&frame.map(&PauliString::line_operator(n, &v_lines[c], v_axis)?))?;
        }
        let vo = SymmetryOp { support: op.support(), op, label: SymmetryLabel { axis: v_axis, lines: cols.clone() } };
        for s in [&uo, &vo] {
            if !verify_symmetry(h, &s.op)? {
                return Err(Error::SymmetryBroken { label: s.label.to_string() });
            }
        }
        u.push(uo);
        v.push(vo);
        v_idx.push(cols);
    }
    let cert = DualPairCertificate {
        u,
        v,
        v_lines: v_idx,
        u_axis,
        v_axis,
        parity_matrix: a.to_bits(),
        rank,
    };
    cert.check()?;
    Ok(cert)
}

/// Dual pairs from the row (U) and column (V) foliations; in 3D the
/// y-planes pair with whichever of the x- or z-planes gives the larger rank.
pub fn find_dual_sets(lattice: &Lattice, h: &Hamiltonian) -> Result<DualPairCertificate> {
    if lattice.n_sites() != h.n_sites() {
        return Err(Error::SizeMismatch(lattice.n_sites(), h.n_sites()));
    }
    if lattice.dimension() == 2 {
        return certificate_for(lattice, h, Axis::Y, Axis::X);
    }
    let x = certificate_for(lattice, h, Axis::Y, Axis::X);
    let z = certificate_for(lattice, h, Axis::Y, Axis::Z);
    match (x, z) {
        (Ok(a), Ok(b)) => Ok(if b.rank > a.rank { b } else { a }),
        (Ok(a), Err(_)) => Ok(a),
        (Err(_), Ok(b)) => Ok(b),
        (Err(e), Err(_)) => Err(e),
    }
}

/// 2^M.
pub fn degeneracy_lower_bound(cert: &DualPairCertificate) -> u128 {
    1u128.checked_shl(cert.m() as u32).unwrap_or(u128::MAX)
}

/// Π σ^z over sublattice A, expressed in `frame`.
pub fn chiral_operator(lattice: &Lattice, frame: Frame) -> Result<PauliString> {
    let (a, _) = lattice.bipartition()?;
    let factors: Vec<(usize, Axis)> = a.iter().map(|&s| (s, Axis::Z)).collect();
    Ok(frame.map(&PauliString::from_factors(lattice.n_sites(), &factors)?))
}

/// Outcome of the pairwise (anti)commutation checks between line strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LineRelations {
    pub parallel_pairs: usize,
    pub parallel_violations: usize,
    pub crossing_pairs: usize,
    pub crossing_violations: usize,
}

impl LineRelations {
    pub fn holds(&self) -> bool {
        self.parallel_violations == 0 && self.crossing_violations == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "parallel_pairs": self.parallel_pairs,
            "parallel_violations": self.parallel_violations,
            "crossing_pairs": self.crossing_pairs,
            "crossing_violations": self.crossing_violations,
        })
    }
}

/// Lines of one direction must commute; lines of different directions
/// must anticommute exactly when they share an odd number of sites.
pub fn line_relations(lattice: &Lattice, frame: Frame) -> Result<LineRelations> {
    let axes = &Axis::ALL[..lattice.dimension()];
    let fams = axes.iter().map(|&a| line_operators(lattice, a, frame)).collect::<Result<Vec<_>>>()?;
    let mut r = LineRelations::default();
    for (i, fa) in fams.iter().enumerate() {
        for (j, fb) in fams.iter().enumerate().skip(i) {
            for (p, a) in fa.iter().enumerate() {
                for b in fb.iter().skip(if i == j { p + 1 } else { 0 }) {
                    let commutes = a.op.commutes(&b.op)?;
                    if i == j {
                        r.parallel_pairs += 1;
                        r.parallel_violations += usize::from(!commutes);
                    } else {
                        let overlap = a.support.iter().filter(|s| b.support.binary_search(s).is_ok()).count();
                        r.crossing_pairs += 1;
                        r.crossing_violations += usize::from(commutes != (overlap % 2 == 0));
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Commutator of `h` with one plane's total-flavor generator Σ σ^μ.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneGeneratorCheck {
    pub axis: Axis,
    pub plane: usize,
    pub nonzero_terms: usize,
    pub max_coeff: f64,
}

/// For every plane P ⊥ e_μ, the exact Pauli-algebra commutator
/// [H, Σ_{r∈P} σ^μ_r].
pub fn plane_generator_commutators(lattice: &Lattice, h: &Hamiltonian) -> Result<Vec<PlaneGeneratorCheck>> {
    if lattice.n_sites() != h.n_sites() {
        return Err(Error::SizeMismatch(lattice.n_sites(), h.n_sites()));
    }
    let n = lattice.n_sites();
    let hw = h.weighted_ops();
    let mut out = Vec::new();
    for &axis in &Axis::ALL[..lattice.dimension()] {
        for (plane, sites) in lattice.foliate(axis)?.iter().enumerate() {
            let g = sites
                .iter()
                .map(|&s| Ok((1.0, h.frame().map(&PauliString::single(s, axis, n)?))))
                .collect::<Result<Vec<_>>>()?;
            let c = crate::pauli::PauliSum::commutator(&hw, &g)?;
            out.push(PlaneGeneratorCheck { axis, plane, nonzero_terms: c.nonzero_terms(), max_coeff: c.max_abs_coeff() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;
    use crate::model::{build_model, build_zipper, Couplings, ModelKind};

    fn pcm(spec: LatticeSpec) -> (Lattice, Hamiltonian) {
        let l = Lattice::build(&spec).unwrap();
        let h = build_model(&l, ModelKind::Pcm, Couplings::compass(1.0, 0.7), Frame::Rotated, &[]).unwrap();
        (l, h)
    }

    #[test]
    fn parallelogram_three_pattern() {
        let (l, h) = pcm(LatticeSpec::parallelogram(3, 1));
        assert_eq!(foliation_symmetries(&l, &h, Axis::Y).unwrap().len(), 3);
        assert_eq!(foliation_symmetries(&l, &h, Axis::X).unwrap().len(), 5);
        let c = find_dual_sets(&l, &h).unwrap();
        assert_eq!(c.m(), 3);
        assert_eq!(c.v_lines, vec![vec![0], vec![0, 1], vec![1, 2]]);
        assert_eq!(degeneracy_lower_bound(&c), 8);
    }

    #[test]
    fn square_rank_one() {
        let (l, h) = pcm(LatticeSpec::square_open(3));
        let c = find_dual_sets(&l, &h).unwrap();
        assert_eq!((c.rank, c.m(), degeneracy_lower_bound(&c)), (1, 1, 2));
    }

    #[test]
    fn vacancies_rank_four() {
        let spec = LatticeSpec::square_open(4).with_vacancies(vec![vec![0, 0], vec![1, 1], vec![2, 2], vec![3, 3]]);
        let (l, h) = pcm(spec);
        assert_eq!(find_dual_sets(&l, &h).unwrap().m(), 4);
    }

    #[test]
    fn cylinder_columns() {
        let (l, h) = pcm(LatticeSpec::cylinder(8));
        let cols = l.foliate(Axis::X).unwrap();
        let single = frame_line(&l, &cols[3]);
        assert!(!verify_symmetry(&h, &single).unwrap());
        let mut both = cols[3].clone();
        both.extend(&cols[3 + 8]);
        assert!(verify_symmetry(&h, &frame_line(&l, &both)).unwrap());
        assert!(foliation_symmetries(&l, &h, Axis::X).is_err());
        assert_eq!(find_dual_sets(&l, &h).unwrap().m(), 1);
    }

    fn frame_line(l: &Lattice, sites: &[usize]) -> PauliString {
        Frame::Rotated.map(&PauliString::line_operator(l.n_sites(), sites, Axis::X).unwrap())
    }

    #[test]
    fn single_site_breaks_symmetry() {
        let (_, h) = pcm(LatticeSpec::square_open(3));
        let x0 = PauliString::single(0, Axis::X, 9).unwrap();
        assert!(!verify_symmetry(&h, &x0).unwrap());
    }

    #[test]
    fn xu_moore_columns() {
        let l = Lattice::build(&LatticeSpec::square_open(2)).unwrap();
        let h = build_model(&l, ModelKind::XuMoore, Couplings::xu_moore(1.0, 0.5), Frame::Literal, &[]).unwrap();
        let cols = foliation_symmetries(&l, &h, Axis::X).unwrap();
        assert_eq!(cols.len(), 2);
        assert!(ops::commutes_dense(&h, &cols[0].op, 1e-12).unwrap());
    }

    #[test]
    fn composites() {
        let (l, h) = pcm(LatticeSpec::parallelogram(3, 1));
        let cols = foliation_symmetries(&l, &h, Axis::X).unwrap();
        assert!(composite(&cols, &[]).unwrap().op.is_identity());
        assert_eq!(composite(&cols, &[1]).unwrap().op, cols[1].op);
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..8 {
            let subset: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
            seen.insert(composite(&cols, &subset).unwrap().op.to_string());
        }
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn chiral_anticommutes() {
        let l = Lattice::build(&LatticeSpec::square_open(2)).unwrap();
        let u = chiral_operator(&l, Frame::Literal).unwrap();
        assert_eq!(u.weight(), 2);
        let h = build_model(&l, ModelKind::Pcm, Couplings::compass(1.0, 0.7), Frame::Literal, &[]).unwrap();
        assert!(h.terms().iter().all(|t| !t.op.commutes(&u).unwrap()));
        let p = Lattice::build(&LatticeSpec::parallelogram(4, 1)).unwrap();
        let u = chiral_operator(&p, Frame::Rotated).unwrap();
        let z = build_zipper(&p, 1.0, 0.7, Frame::Rotated).unwrap();
        assert!(z.terms().iter().all(|t| !t.op.commutes(&u).unwrap()));
    }

    #[test]
    fn parity_operator_is_hermitian() {
        let (l, h) = pcm(LatticeSpec::parallelogram(3, 1));
        for s in foliation_symmetries(&l, &h, Axis::X).unwrap() {
            let p = s.parity_operator();
            assert!(p.is_hermitian());
            let sq = p.multiply(&p).unwrap();
            assert!(sq.is_identity() && sq.phase_exp() == 0);
        }
    }

    #[test]
    fn line_relations_small() {
        for l in 2..=4 {
            let lat = Lattice::build(&LatticeSpec::parallelogram(l, 1)).unwrap();
            let r = line_relations(&lat, Frame::Rotated).unwrap();
            assert!(r.holds(), "{r:?}");
            assert!(r.crossing_pairs > 0);
        }
    }

    #[test]
    fn plane_generators_cover_every_plane() {
        let lat = Lattice::build(&LatticeSpec::cubic_open(2)).unwrap();
        let h = build_model(&lat, ModelKind::U1Cubic, Couplings::cubic(1.0, 1.0, 1.0), Frame::Literal, &[]).unwrap();
        let c = plane_generator_commutators(&lat, &h).unwrap();
        assert_eq!(c.len(), 6);
    }
}
