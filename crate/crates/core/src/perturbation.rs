//! How the zipper closure acts on the degenerate manifolds of the open
//! system: projected first-order splittings, size sweeps, the free-fermion
//! zipper chain, selection-rule sparsity and string states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeSpec};
use crate::model::{assemble_cyl, build_model, build_zipper, Couplings, Frame, Hamiltonian, ModelKind, Term};
use crate::pauli::{Axis, PauliString};
use crate::spectral::{
    diagonal_symmetries, diagonalize, expectation, ops, sector_partition, solve_ground_multiplet, SectorPartition,
    SolveOptions, Spectrum, VectorRequest,
};
use crate::symmetry::{degeneracy_lower_bound, DualPairCertificate};

/// H_zip restricted to one degenerate multiplet of H_open.
#[derive(Debug, Clone)]
pub struct ProjectedOperator {
    /// (sector, index within sector, energy) of each basis vector.
    pub members: Vec<(usize, usize, f64)>,
    pub basis: Vec<Vec<Complex64>>,
    pub matrix: DMatrix<Complex64>,
    pub warnings: Vec<String>,
}

/// The multiplet of the lowest level: every stored eigenpair within `tol`
/// of the ground energy.
pub fn project_zip(
    spectrum: &Spectrum,
    h_zip: &Hamiltonian,
    tol: f64,
    cert: Option<&DualPairCertificate>,
) -> Result<ProjectedOperator> {
    if spectrum.n_sites != h_zip.n_sites() {
        return Err(Error::SizeMismatch(spectrum.n_sites, h_zip.n_sites()));
    }
    let (members, basis) = spectrum.ground_multiplet_vectors(tol)?;
    let mut warnings = Vec::new();
    if let Some(c) = cert {
        let b = degeneracy_lower_bound(c);
        if !(members.len() as u128).is_multiple_of(b) {
            warnings.push(format!(
                "multiplet of size {} is not a multiple of {b}; it may not be closed under the certificate",
                members.len()
            ));
        }
    }
    let matrix = projected_matrix(&basis, h_zip)?;
    Ok(ProjectedOperator { members, basis, matrix, warnings })
}

/// ⟨ψ_i|O|ψ_j⟩ over the given basis.
pub fn projected_matrix(basis: &[Vec<Complex64>], op: &Hamiltonian) -> Result<DMatrix<Complex64>> {
    let images = basis.iter().map(|v| ops::apply_hamiltonian(op, v)).collect::<Result<Vec<_>>>()?;
    let d = basis.len();
    Ok(DMatrix::from_fn(d, d, |i, j| ops::inner(&basis[i], &images[j])))
}

impl ProjectedOperator {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// max |M − M†|.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Spread of the real diagonal elements.
    pub fn diagonal_spread(&self) -> f64 {
        let d: Vec<f64> = (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect();
        spread(&d)
    }
}

pub fn spread(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

#[derive(Debug, Clone)]
pub struct Splitting {
    pub eigenvalues: Vec<f64>,
    pub spread: f64,
}

/// Eigenvalues of the projected operator: the first-order shifts.
pub fn first_order_splitting(proj: &ProjectedOperator) -> Splitting {
    if proj.dim() == 0 {
        return Splitting { eigenvalues: vec![], spread: 0.0 };
    }
    // symmetrize away rounding before the Hermitian solve
    let m = (&proj.matrix + proj.matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let mut e: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    let s = spread(&e);
    Splitting { eigenvalues: e, spread: s }
}

/// Rotated-frame PCM pieces on the unit-shear parallelogram of size `l`.
pub struct ZipperSetup {
    pub lattice: Lattice,
    pub open: Hamiltonian,
    pub zip: Hamiltonian,
}

pub fn zipper_setup(l: usize, jx: f64, jy: f64) -> Result<ZipperSetup> {
    let lattice = Lattice::build(&LatticeSpec::parallelogram(l, 1))?;
    let open = build_model(&lattice, ModelKind::Pcm, Couplings::compass(jx, jy), Frame::Rotated, &[])?;
    let zip = build_zipper(&lattice, jx, jy, Frame::Rotated)?;
    Ok(ZipperSetup { lattice, open, zip })
}

/// Sectors labelled by the diagonal row strings of `h`.
pub fn row_partition(lattice: &Lattice, h: &Hamiltonian) -> Result<SectorPartition> {
    let u = diagonal_symmetries(lattice, h)?;
    sector_partition(h, &u)
}

/// Row-sector spectrum of `h` on `lattice`.
pub fn sector_spectrum(lattice: &Lattice, h: &Hamiltonian, opts: &SolveOptions) -> Result<Spectrum> {
    diagonalize(h, Some(&row_partition(lattice, h)?), opts)
}

#[derive(Debug, Clone)]
pub struct ZipperPoint {
    pub l: usize,
    pub ratio: f64,
    pub multiplet_dim: usize,
    pub diagonal_spread: f64,
    pub first_order: Splitting,
    pub hermiticity_error: f64,
}

impl ZipperPoint {
    pub fn to_json(&self) -> Value {
        json!({
            "L": self.l,
            "ratio": self.ratio,
            "multiplet_dim": self.multiplet_dim,
            "diagonal_spread": self.diagonal_spread,
            "first_order_spread": self.first_order.spread,
            "first_order_eigenvalues": self.first_order.eigenvalues,
            "hermiticity_error": self.hermiticity_error,
        })
    }
}

/// First-order action of H_zip on the ground multiplet of H_open.
pub fn zipper_analysis(l: usize, jx: f64, jy: f64, tol_rel: f64, opts: &SolveOptions) -> Result<ZipperPoint> {
    let s = zipper_setup(l, jx, jy)?;
    let tol = tol_rel * s.open.norm_bound().max(1.0);
    let part = row_partition(&s.lattice, &s.open)?;
    let (spec, _, _) = solve_ground_multiplet(&s.open, Some(&part), opts, tol)?;
    let proj = project_zip(&spec, &s.zip, tol, None)?;
    Ok(ZipperPoint {
        l,
        ratio: jy / jx,
        multiplet_dim: proj.dim(),
        diagonal_spread: proj.diagonal_spread(),
        hermiticity_error: proj.hermiticity_error(),
        first_order: first_order_splitting(&proj),
    })
}

/// Least-squares slope of ln y against x. None if any y ≤ 0.
pub fn log_linear_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 || ys.iter().any(|&y| y <= 0.0 || !y.is_finite()) {
        return None;
    }
    let n = xs.len() as f64;
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub l: usize,
    pub ratio: f64,
    pub multiplet_dim: usize,
    pub spread: f64,
}

#[derive(Debug, Clone)]
pub struct SweepFit {
    pub ratio: f64,
    pub slope: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub fits: Vec<SweepFit>,
}

/// Spread of the lowest 2^L levels of the cylinder, for J_x = 1, J_y = ratio.
pub fn cylinder_spread(l: usize, ratio: f64, opts: &SolveOptions) -> Result<SweepRow> {
    let s = zipper_setup(l, 1.0, ratio)?;
    let cyl = assemble_cyl(&s.open, &s.zip)?;
    let want = 1usize << l;
    let mut o = *opts;
    o.vectors = VectorRequest::None;
    o.n_lowest = Some(want);
    let spec = sector_spectrum(&s.lattice, &cyl, &o)?;
    let all = spec.eigenvalues();
    if all.len() < want {
        return Err(Error::Numerical(format!("only {} levels available", all.len())));
    }
    Ok(SweepRow { l, ratio, multiplet_dim: want, spread: all[want - 1] - all[0] })
}

/// Rows in (ratio, L) order with one log-linear fit per ratio. A ratio
/// passes when its spreads all vanish or the fitted slope is negative.
pub fn splitting_sweep(ls: &[usize], ratios: &[f64], opts: &SolveOptions) -> Result<SweepTable> {
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &r in ratios {
        let mut pts = Vec::new();
        for &l in ls {
            pts.push(cylinder_spread(l, r, opts)?);
        }
        let xs: Vec<f64> = pts.iter().map(|p| p.l as f64).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.spread).collect();
        let slope = log_linear_slope(&xs, &ys);
        let vanishing = ys.iter().all(|&y| y.abs() <= 1e-10);
        fits.push(SweepFit { ratio: r, slope, pass: vanishing || slope.is_some_and(|s| s < 0.0) });
        rows.extend(pts);
    }
    Ok(SweepTable { rows, fits })
}

impl SweepTable {
    pub fn slope_for(&self, ratio: f64) -> Option<f64> {
        self.fits.iter().find(|f| f.ratio == ratio).and_then(|f| f.slope)
    }

    /// L, ratio, multiplet_dim, spread, fit_slope.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["L", "ratio", "multiplet_dim", "spread", "fit_slope"])
            .map_err(|e| Error::Io(e.to_string()))?;
        for r in &self.rows {
            let slope = self.slope_for(r.ratio).map(|s| format!("{s:.16e}")).unwrap_or_default();
            w.write_record([
                r.l.to_string(),
                format!("{:.16e}", r.ratio),
                r.multiplet_dim.to_string(),
                format!("{:.16e}", r.spread),
                slope,
            ])
            .map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows.iter().map(|r| json!({"L": r.l, "ratio": r.ratio, "multiplet_dim": r.multiplet_dim, "spread": r.spread})).collect::<Vec<_>>(),
            "fits": self.fits.iter().map(|f| json!({"ratio": f.ratio, "slope": f.slope, "pass": f.pass})).collect::<Vec<_>>(),
        })
    }
}

/// Closed-form zipper-chain spectrum for J_x = J_y = J.
#[derive(Debug, Clone)]
pub struct FreeFermionSpectrum {
    pub j: f64,
    pub l: usize,
    /// (k, ε_k) for k = πn/L, n = 1−L … L.
    pub modes: Vec<(f64, f64)>,
    /// Σ_k ±ε_k/2 over all sign choices, ascending.
    pub many_body: Vec<f64>,
}

pub fn zipper_free_fermion(l: usize, j: f64) -> Result<FreeFermionSpectrum> {
    if l == 0 || 2 * l > 24 {
        return Err(Error::Budget(format!("2^{} many-body levels", 2 * l)));
    }
    let li = l as i64;
    let modes: Vec<(f64, f64)> = (1 - li..=li)
        .map(|n| {
            let k = std::f64::consts::PI * n as f64 / l as f64;
            (k, 2.0 * j * (1.0 - k.cos()))
        })
        .collect();
    let m = modes.len();
    let mut many_body: Vec<f64> = (0u32..1 << m)
        .map(|signs| {
            modes
                .iter()
                .enumerate()
                .map(|(i, (_, e))| if signs >> i & 1 == 1 { e / 2.0 } else { -e / 2.0 })
                .sum()
        })
        .collect();
    many_body.sort_by(f64::total_cmp);
    Ok(FreeFermionSpectrum { j, l, modes, many_body })
}

/// The zipper unrolled into an open chain of 2L sites whose bonds alternate
/// −J_x XX and −J_y YY, starting and ending with XX.
pub fn zipper_chain(l: usize, jx: f64, jy: f64) -> Result<Hamiltonian> {
    let n = 2 * l;
    let mut terms = Vec::new();
    for i in 0..n - 1 {
        let (axis, j) = if i % 2 == 0 { (Axis::X, jx) } else { (Axis::Y, jy) };
        terms.push(Term { coeff: -j, op: PauliString::from_factors(n, &[(i, axis), (i + 1, axis)])? });
    }
    Hamiltonian::from_terms(n, terms, ModelKind::Zipper, Couplings::compass(jx, jy), Frame::Literal)
}

#[derive(Debug, Clone)]
pub struct FreeFermionCheck {
    pub l: usize,
    pub j: f64,
    pub formula_gaps: Vec<f64>,
    pub ed_gaps: Vec<f64>,
    pub max_gap_error: f64,
    pub zero_mode: bool,
}

impl FreeFermionCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "L": self.l,
            "J": self.j,
            "max_gap_error": self.max_gap_error,
            "zero_mode": self.zero_mode,
            "formula_gaps": self.formula_gaps,
            "ed_gaps": self.ed_gaps,
        })
    }
}

fn gaps(sorted: &[f64]) -> Vec<f64> {
    let m = sorted.first().copied().unwrap_or(0.0);
    sorted.iter().map(|e| e - m).collect()
}

/// Formula gaps against exact-diagonalization gaps of the zipper chain.
pub fn free_fermion_crosscheck(l: usize, jx: f64, jy: f64) -> Result<FreeFermionCheck> {
    if jx != jy {
        return Err(Error::InvalidModel(format!(
            "closed form needs J_x = J_y (got {jx}, {jy}); use the chain spectrum directly"
        )));
    }
    let ff = zipper_free_fermion(l, jx)?;
    let chain = zipper_chain(l, jx, jy)?;
    let spec = diagonalize(&chain, None, &SolveOptions::default())?;
    let fg = gaps(&ff.many_body);
    let eg = gaps(&spec.eigenvalues());
    let max_gap_error = fg.iter().zip(&eg).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let zero_mode = ff.modes.iter().any(|(k, e)| *k == 0.0 && e.abs() < 1e-15);
    Ok(FreeFermionCheck { l, j: jx, formula_gaps: fg, ed_gaps: eg, max_gap_error, zero_mode })
}

#[derive(Debug, Clone)]
pub struct BondSparsity {
    pub sites: Vec<usize>,
    pub rows_touched: Vec<usize>,
    pub total: usize,
    pub forced_zero: usize,
    pub max_forced: f64,
    pub exceptions: usize,
    /// Largest element between different sectors.
    pub max_cross_sector: f64,
}

#[derive(Debug, Clone)]
pub struct SparsityReport {
    pub bonds: Vec<BondSparsity>,
}

impl SparsityReport {
    pub fn exceptions(&self) -> usize {
        self.bonds.iter().map(|b| b.exceptions).sum()
    }

    pub fn forced_fraction(&self) -> f64 {
        let t: usize = self.bonds.iter().map(|b| b.total).sum();
        let f: usize = self.bonds.iter().map(|b| b.forced_zero).sum();
        if t == 0 {
            0.0
        } else {
            f as f64 / t as f64
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exceptions": self.exceptions(),
            "forced_fraction": self.forced_fraction(),
            "bonds": self.bonds.iter().map(|b| json!({
                "sites": b.sites,
                "rows_touched": b.rows_touched,
                "total": b.total,
                "forced_zero": b.forced_zero,
                "max_forced": b.max_forced,
                "exceptions": b.exceptions,
                "max_cross_sector": b.max_cross_sector,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks that every zipper bond has zero elements between sector
/// eigenstates whose labels differ on a row the bond does not touch.
/// Needs every eigenvector of every sector; sector label j is row j.
pub fn wigner_eckart_sparsity(lattice: &Lattice, h_zip: &Hamiltonian, spectrum: &Spectrum, tol: f64) -> Result<SparsityReport> {
    let rows = lattice.foliate(Axis::Y)?;
    if spectrum.sectors.iter().any(|s| s.vectors.len() != s.dim) {
        return Err(Error::Numerical("sparsity check needs all eigenvectors".into()));
    }
    if spectrum.blocking.len() != rows.len() {
        return Err(Error::Sector("sectors must be labelled by the rows".into()));
    }
    let mut bonds = Vec::new();
    for t in h_zip.terms() {
        let support = t.op.support();
        let touched: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.iter().any(|s| support.contains(s)))
            .map(|(i, _)| i)
            .collect();
        let p = t.op.packed()?;
        let mut rep = BondSparsity {
            sites: support.clone(),
            rows_touched: touched.clone(),
            total: 0,
            forced_zero: 0,
            max_forced: 0.0,
            exceptions: 0,
            max_cross_sector: 0.0,
        };
        for (a, sa) in spectrum.sectors.iter().enumerate() {
            // b|ψ_j> as a sparse map from sector-a states
            let images: Vec<Vec<(u64, Complex64)>> = sa
                .vectors
                .iter()
                .map(|v| {
                    spectrum.states[a]
                        .iter()
                        .zip(v)
                        .map(|(&s, &amp)| {
                            let (s2, k) = p.apply(s);
                            (s2, amp * crate::pauli::phase_to_complex(k) * t.coeff)
                        })
                        .collect()
                })
                .collect();
            for (b, sb) in spectrum.sectors.iter().enumerate() {
                let forced = sa
                    .label
                    .iter()
                    .zip(&sb.label)
                    .enumerate()
                    .any(|(row, (x, y))| x != y && !touched.contains(&row));
                let index: std::collections::HashMap<u64, usize> =
                    spectrum.states[b].iter().enumerate().map(|(i, &s)| (s, i)).collect();
                for img in &images {
                    for w in &sb.vectors {
                        let z: Complex64 = img
                            .iter()
                            .filter_map(|(s, amp)| index.get(s).map(|&i| w[i].conj() * amp))
                            .sum();
                        rep.total += 1;
                        if a != b {
                            rep.max_cross_sector = rep.max_cross_sector.max(z.norm());
                        }
                        if forced {
                            rep.forced_zero += 1;
                            rep.max_forced = rep.max_forced.max(z.norm());
                            if z.norm() > tol {
                                rep.exceptions += 1;
                            }
                        }
                    }
                }
            }
        }
        bonds.push(rep);
    }
    Ok(SparsityReport { bonds })
}

#[derive(Debug, Clone)]
pub struct StringState {
    pub n: Vec<u8>,
    pub label: Vec<i8>,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct VariationalReport {
    pub ground_energy: f64,
    pub ground_degeneracy: usize,
    pub states: Vec<StringState>,
    pub max_overlap: f64,
    pub uniform_is_min: bool,
    pub staggered_is_max: bool,
    pub warnings: Vec<String>,
}

impl VariationalReport {
    pub fn to_json(&self) -> Value {
        json!({
            "ground_energy": self.ground_energy,
            "ground_degeneracy": self.ground_degeneracy,
            "max_overlap": self.max_overlap,
            "uniform_is_min": self.uniform_is_min,
            "staggered_is_max": self.staggered_is_max,
            "warnings": self.warnings,
            "states": self.states.iter().map(|s| json!({"n": s.n, "label": s.label, "energy": s.energy})).collect::<Vec<_>>(),
        })
    }
}

fn is_uniform(l: &[i8]) -> bool {
    l.windows(2).all(|w| w[0] == w[1])
}

fn is_staggered(l: &[i8]) -> bool {
    l.windows(2).all(|w| w[0] != w[1])
}

/// Applies (O^x_1)^{n_1} … (O^x_L)^{n_L} to the cylinder ground state,
/// where O^x_c is the open-lattice column c (0-based, c < L).
pub fn variational_strings(l: usize, jx: f64, jy: f64, tol_rel: f64, opts: &SolveOptions) -> Result<VariationalReport> {
    let s = zipper_setup(l, jx, jy)?;
    let cyl = assemble_cyl(&s.open, &s.zip)?;
    let tol = tol_rel * cyl.norm_bound().max(1.0);
    let part = row_partition(&s.lattice, &cyl)?;
    let (spec, ground, _) = solve_ground_multiplet(&cyl, Some(&part), opts, tol)?;
    let mut warnings = Vec::new();
    if ground.len() > 1 {
        warnings.push(format!("cylinder ground level is {}-fold; the first member is used", ground.len()));
    }
    let (g_sector, g_idx, e0) = ground[0];
    let psi = spec.full_vector(g_sector, g_idx)?;
    let label0 = spec.sectors[g_sector].label.clone();
    let cols = s.lattice.foliate(Axis::X)?;
    let n_sites = s.lattice.n_sites();
    let col_ops: Vec<PauliString> = cols[..l]
        .iter()
        .map(|c| Ok(Frame::Rotated.map(&PauliString::line_operator(n_sites, c, Axis::X)?)))
        .collect::<Result<_>>()?;
    let mut vecs = Vec::new();
    let mut states = Vec::new();
    for mask in 0u32..1 << l {
        let n: Vec<u8> = (0..l).map(|a| (mask >> a & 1) as u8).collect();
        let mut v = psi.clone();
        let mut label = label0.clone();
        for a in 0..l {
            if n[a] == 1 {
                v = ops::apply_pauli(&col_ops[a], &v)?;
                let x = col_ops[a].x_mask().to_u64().unwrap_or(0);
                for (j, z) in spec.blocking.iter().enumerate() {
                    if (z & x).count_ones() % 2 == 1 {
                        label[j] = -label[j];
                    }
                }
            }
        }
        let e = expectation(&v, &cyl)?.value;
        states.push(StringState { n, label, energy: e });
        vecs.push(v);
    }
    let mut max_overlap: f64 = 0.0;
    for i in 0..vecs.len() {
        for j in i + 1..vecs.len() {
            max_overlap = max_overlap.max(ops::inner(&vecs[i], &vecs[j]).norm());
        }
    }
    let energies: Vec<f64> = states.iter().map(|s| s.energy).collect();
    let emin = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let emax = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let uniform_is_min = states.iter().filter(|s| is_uniform(&s.label)).all(|s| s.energy - emin <= tol)
        && states.iter().any(|s| is_uniform(&s.label));
    let staggered_is_max = states.iter().filter(|s| is_staggered(&s.label)).all(|s| emax - s.energy <= tol)
        && states.iter().any(|s| is_staggered(&s.label));
    Ok(VariationalReport {
        ground_energy: e0,
        ground_degeneracy: ground.len(),
        states,
        max_overlap,
        uniform_is_min,
        staggered_is_max,
        warnings,
    })
}

/// Spread of ⟨V_S ψ|H_sub|V_S ψ⟩ over all 2^M certificate composites V_S.
pub fn partner_expectation_spread(state: &[Complex64], cert: &DualPairCertificate, h_sub: &Hamiltonian) -> Result<f64> {
    let m = cert.m();
    if m > 20 {
        return Err(Error::Budget(format!("2^{m} composites")));
    }
    let mut values = Vec::with_capacity(1 << m);
    for mask in 0u32..1 << m {
        let mut v = state.to_vec();
        for a in 0..m {
            if mask >> a & 1 == 1 {
                v = ops::apply_pauli(&cert.v[a].op, &v)?;
            }
        }
        values.push(expectation(&v, h_sub)?.value);
    }
    Ok(spread(&values))
}

/// PCM and Xu–Moore spectra on the same open square, with J_P = J_x and
/// h = J_y. Reported side by side; no equality is implied.
#[derive(Debug, Clone)]
pub struct DualityComparison {
    pub l: usize,
    pub pcm: Vec<f64>,
    pub xu_moore: Vec<f64>,
    pub max_abs_diff: f64,
}

impl DualityComparison {
    pub fn to_json(&self) -> Value {
        json!({
            "L": self.l,
            "pcm": self.pcm,
            "xu_moore": self.xu_moore,
            "max_abs_diff": self.max_abs_diff,
        })
    }
}

pub fn duality_compare(l: usize, jx: f64, jy: f64, opts: &SolveOptions) -> Result<DualityComparison> {
    let lattice = Lattice::build(&LatticeSpec::square_open(l))?;
    let pcm = build_model(&lattice, ModelKind::Pcm, Couplings::compass(jx, jy), Frame::Rotated, &[])?;
    let xm = build_model(&lattice, ModelKind::XuMoore, Couplings::xu_moore(jx, jy), Frame::Literal, &[])?;
    let a = sector_spectrum(&lattice, &pcm, opts)?.eigenvalues();
    let b = diagonalize(&xm, None, opts)?.eigenvalues();
    let max_abs_diff = if a.len() == b.len() {
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(DualityComparison { l, pcm: a, xu_moore: b, max_abs_diff })
}
