use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::config::{RunConfig, Task};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeKind};
use crate::model::{build_model, sub_hamiltonian, Hamiltonian, ModelKind};
use crate::pauli::{Axis, PauliString};
use crate::perturbation as lab;
use crate::spectral::{
    connected_correlator, degeneracy_census, diagonal_symmetries, diagonalize, expectation, reduced_density,
    sector_partition, sector_spectra_compare, solve_ground_multiplet, von_neumann_entropy, SectorPartition, Spectrum,
    Verdict, VectorRequest,
};
use crate::symmetry::{
    chiral_operator, classical_orbit, degeneracy_lower_bound, find_dual_sets, line_relations,
    plane_generator_commutators, symmetry_lines, verify_symmetry, ClassicalConfig, DualPairCertificate,
};

/// What a task hands back to the runner.
#[derive(Debug, Default)]
pub struct TaskOutput {
    pub verdicts: BTreeMap<String, Verdict>,
    pub payload: Value,
    pub warnings: Vec<String>,
    pub csv: Option<String>,
}

impl TaskOutput {
    fn verdict(&mut self, name: &str, ok: bool) {
        self.verdicts.insert(name.to_string(), Verdict::from_bool(ok));
    }
}

pub fn execute(cfg: &RunConfig) -> Result<TaskOutput> {
    match cfg.task {
        Task::VerifySymmetries => verify_symmetries(cfg),
        Task::Certificate => certificate(cfg),
        Task::Spectrum => spectrum(cfg),
        Task::Census => census(cfg),
        Task::SectorCompare => sector_compare(cfg),
        Task::ZipperAnalysis => zipper_analysis(cfg),
        Task::FreeFermion => free_fermion(cfg),
        Task::PerturbationSweep => perturbation_sweep(cfg),
        Task::Entropy => entropy(cfg),
        Task::ClassicalOrbit => classical(cfg),
        Task::CorrelatorDecay => correlator_decay(cfg),
        Task::VariationalStrings => variational(cfg),
    }
}

fn build(cfg: &RunConfig) -> Result<(Lattice, Hamiltonian)> {
    let lattice = Lattice::build(&cfg.lattice)?;
    let m = &cfg.model;
    let h = build_model(&lattice, m.kind, m.couplings, m.frame, &m.terms)?;
    Ok((lattice, h))
}

fn check_dim(cfg: &RunConfig, n_sites: usize) -> Result<()> {
    let fits = n_sites < 64 && (1u64 << n_sites) <= cfg.solver.max_total_dim;
    if fits {
        Ok(())
    } else {
        Err(Error::Budget(format!(
            "2^{n_sites} states exceed solver.max_total_dim = {}",
            cfg.solver.max_total_dim
        )))
    }
}

/// Row-parity sectors when the model has diagonal line strings and the
/// config allows it; otherwise the whole space.
fn partition(cfg: &RunConfig, lattice: &Lattice, h: &Hamiltonian) -> Result<SectorPartition> {
    if cfg.params.sectors == Some(false) {
        return SectorPartition::trivial(h.n_sites());
    }
    let u = diagonal_symmetries(lattice, h)?;
    if u.is_empty() {
        SectorPartition::trivial(h.n_sites())
    } else {
        sector_partition(h, &u)
    }
}

fn certificate_or_none(lattice: &Lattice, h: &Hamiltonian, out: &mut TaskOutput) -> Result<Option<DualPairCertificate>> {
    match find_dual_sets(lattice, h) {
        Ok(c) => Ok(Some(c)),
        Err(e @ (Error::NoDualPairs(_) | Error::SymmetryBroken { .. })) => {
            out.warnings.push(format!("no certificate ({e}); bound taken as 1"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn multiplet_tol(cfg: &RunConfig, h: &Hamiltonian) -> f64 {
    cfg.tolerances.multiplet_rel * h.norm_bound().max(1.0)
}

fn verify_symmetries(cfg: &RunConfig) -> Result<TaskOutput> {
    let (lattice, h) = build(cfg)?;
    let mut out = TaskOutput::default();
    let mut families = serde_json::Map::new();
    let mut all_hold = true;
    for &axis in &Axis::ALL[..lattice.dimension()] {
        let mut rows = Vec::new();
        for (i, sites) in symmetry_lines(&lattice, axis)?.iter().enumerate() {
            let op = h.frame().map(&PauliString::line_operator(lattice.n_sites(), sites, axis)?);
            let ok = verify_symmetry(&h, &op)?;
            all_hold &= ok;
            rows.push(json!({"line": i, "sites": sites, "commutes": ok}));
        }
        families.insert(axis.name().to_string(), Value::Array(rows));
    }
    let rel = line_relations(&lattice, h.frame())?;
    out.verdict("relations", rel.holds());
    if matches!(h.kind(), ModelKind::Pcm | ModelKind::CubicCompass) {
        out.verdict("line_symmetries", all_hold);
    }
    let mut payload = json!({"lines": families, "relations": rel.to_json()});
    if h.kind() == ModelKind::U1Cubic {
        let checks = plane_generator_commutators(&lattice, &h)?;
        out.verdict("plane_generators", checks.iter().all(|c| c.nonzero_terms == 0));
        payload["plane_generators"] = checks
            .iter()
            .map(|c| json!({"axis": c.axis.name(), "plane": c.plane, "nonzero_terms": c.nonzero_terms, "max_coeff": c.max_coeff}))
            .collect();
    }
    if h.kind() == ModelKind::Pcm {
        match chiral_operator(&lattice, h.frame()) {
            Ok(c) => {
                let anti = h.terms().iter().map(|t| t.op.commutes(&c).map(|x| !x)).collect::<Result<Vec<_>>>()?;
                let ok = anti.iter().all(|&a| a);
                out.verdict("chiral", ok);
                payload["chiral"] = json!({"operator": c.to_string(), "anticommutes": ok});
            }
            Err(Error::NotBipartite(m)) => out.warnings.push(format!("no chiral operator: {m}")),
            Err(e) => return Err(e),
        }
    }
    out.payload = payload;
    Ok(out)
}

fn certificate(cfg: &RunConfig) -> Result<TaskOutput> {
    let (lattice, h) = build(cfg)?;
    let cert = find_dual_sets(&lattice, &h)?;
    let mut out = TaskOutput::default();
    out.verdict("certificate", cert.check().is_ok());
    out.payload = cert.to_json();
    Ok(out)
}

fn chiral_check(cfg: &RunConfig, lattice: &Lattice, h: &Hamiltonian, spec: &Spectrum, out: &mut TaskOutput) -> Result<Option<Value>> {
    if h.kind() != ModelKind::Pcm || !spec.is_complete() {
        return Ok(None);
    }
    let c = match chiral_operator(lattice, h.frame()) {
        Ok(c) => c,
        Err(Error::NotBipartite(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if h.terms().iter().any(|t| t.op.commutes(&c).unwrap_or(true)) {
        out.warnings.push("chiral operator does not anticommute with every term".into());
        return Ok(None);
    }
    let e = spec.eigenvalues();
    let dev = e.iter().zip(e.iter().rev()).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
    out.verdict("chiral", dev <= cfg.tolerances.chiral_abs);
    Ok(Some(json!({"max_mirror_deviation": dev})))
}

fn spectrum(cfg: &RunConfig) -> Result<TaskOutput> {
    let (lattice, h) = build(cfg)?;
    check_dim(cfg, lattice.n_sites())?;
    let part = partition(cfg, &lattice, &h)?;
    let spec = diagonalize(&h, Some(&part), &cfg.solve_options())?;
    let mut out = TaskOutput::default();
    let res_tol = cfg.tolerances.residual * h.norm_bound().max(1.0);
    out.verdict("residuals", spec.max_residual() <= res_tol);
    let mut payload = spec.to_json();
    payload["ground_energy"] = json!(spec.ground_energy());
    payload["max_residual"] = json!(spec.max_residual());
    if let Some(c) = chiral_check(cfg, &lattice, &h, &spec, &mut out)? {
        payload["chiral"] = c;
    }
    if h.kind() == ModelKind::XuMoore && lattice.kind() == LatticeKind::SquareOpen {
        let c = h.couplings();
        let (jp, field) = (c.jp.unwrap_or(1.0), c.h.unwrap_or(1.0));
        payload["duality"] = lab::duality_compare(lattice.l(), jp, field, &cfg.solve_options())?.to_json();
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["sector", "index", "energy"]).map_err(csv_err)?;
    for (s, i, e) in spec.csv_rows() {
        w.write_record([s.to_string(), i.to_string(), format!("{e:.16e}")]).map_err(csv_err)?;
    }
    out.csv = Some(String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("utf-8 csv"));
    out.payload = payload;
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn census(cfg: &RunConfig) -> Result<TaskOutput> {
    let (lattice, h) = build(cfg)?;
    check_dim(cfg, lattice.n_sites())?;
    let mut out = TaskOutput::default();
    let cert = certificate_or_none(&lattice, &h, &mut out)?;
    let bound = cert.as_ref().map(degeneracy_lower_bound).unwrap_or(1);
    let part = partition(cfg, &lattice, &h)?;
    let spec = diagonalize(&h, Some(&part), &cfg.solve_options())?;
    let c = degeneracy_census(&spec, cfg.tolerances.census_rel, bound)?;
    out.verdicts.insert("census".into(), c.verdict);
    if c.unstable.is_some() {
        out.warnings.push("level grouping is sensitive to the tolerance".into());
    }
    out.payload = json!({
        "M": cert.as_ref().map(|c| c.m()).unwrap_or(0),
        "bound": bound,
        "ground_energy": spec.ground_energy(),
        "ground_multiplicity": c.ground_multiplicity(),
        "census": c.to_json(),
    });
    Ok(out)
}

/// Random subsets of the terms of `h`, each of random nonzero size.
fn random_subsets(h: &Hamiltonian, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let n = h.terms().len();
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=n);
            let mut s = sample(rng, n, k).into_vec();
            s.sort_unstable();
            s
        })
        .collect()
}

fn sector_compare(cfg: &RunConfig) -> Result<TaskOutput> {
    let (lattice, h) = build(cfg)?;
    check_dim(cfg, lattice.n_sites())?;
    let cert = find_dual_sets(&lattice, &h)?;
    let u = diagonal_symmetries(&lattice, &h)?;
    let part = sector_partition(&h, &u)?;
    let mut opts = cfg.solve_options();
    let partners = cfg.params.samples.filter(|_| part.sectors().iter().map(|s| s.states.len()).sum::<usize>() <= 4096);
    if partners.is_some() {
        opts.vectors = VectorRequest::All;
    }
    let spec = diagonalize(&h, Some(&part), &opts)?;
    let cmp = sector_spectra_compare(&spec, &cert)?;
    let mut out = TaskOutput::default();
    out.verdict("sector_spectra", cmp.passes(cfg.tolerances.sector_rel));
    let mut payload = json!({
        "M": cert.m(),
        "bound": degeneracy_lower_bound(&cert),
        "sectors": spec.sectors.len(),
        "comparison": cmp.to_json(),
    });
    if let Some(count) = partners {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let subsets = random_subsets(&h, count, &mut rng);
        let subs = subsets.iter().map(|s| sub_hamiltonian(&h, s)).collect::<Result<Vec<_>>>()?;
        let mut worst: f64 = 0.0;
        for (si, s) in spec.sectors.iter().enumerate() {
            for i in 0..s.vectors.len() {
                let v = spec.full_vector(si, i)?;
                for sub in &subs {
                    worst = worst.max(lab::partner_expectation_spread(&v, &cert, sub)?);
                }
            }
        }
        let tol = cfg.tolerances.sector_rel * h.norm_bound().max(1.0);
        out.verdict("partner_expectations", worst <= tol);
        payload["partner_expectations"] = json!({"subsets": subsets.len(), "max_spread": worst});
    } else if cfg.params.samples.is_some() {
        out.warnings.push("partner expectation check skipped: more than 4096 states".into());
    }
    out.payload = payload;
    Ok(out)
}

fn jx_jy(cfg: &RunConfig) -> (f64, f64) {
    let c = cfg.model.couplings;
    (c.jx.unwrap_or(1.0), c.jy.unwrap_or(1.0))
}

fn size(cfg: &RunConfig) -> usize {
    cfg.lattice.l.unwrap_or(0)
}

fn zipper_analysis(cfg: &RunConfig) -> Result<TaskOutput> {
    let l = size(cfg);
    let (jx, jy) = jx_jy(cfg);
    check_dim(cfg, l * l)?;
    let opts = cfg.solve_options();
    let p = lab::zipper_analysis(l, jx, jy, cfg.tolerances.multiplet_rel, &opts)?;
    let mut out = TaskOutput::default();
    out.verdict("hermitian", p.hermiticity_error <= cfg.tolerances.zero * jx.abs().max(jy.abs()).max(1.0));
    let mut payload = p.to_json();
    if l * l <= 12 {
        let s = lab::zipper_setup(l, jx, jy)?;
        let mut o = opts;
        o.vectors = VectorRequest::All;
        let spec = lab::sector_spectrum(&s.lattice, &s.open, &o)?;
        let rep = lab::wigner_eckart_sparsity(&s.lattice, &s.zip, &spec, cfg.tolerances.zero)?;
        out.verdict("sparsity", rep.exceptions() == 0);
        payload["sparsity"] = rep.to_json();
    }
    out.payload = payload;
    Ok(out)
}

fn free_fermion(cfg: &RunConfig) -> Result<TaskOutput> {
    let l = size(cfg);
    let (jx, jy) = jx_jy(cfg);
    check_dim(cfg, 2 * l)?;
    let mut out = TaskOutput::default();
    let mut w = csv::Writer::from_writer(Vec::new());
    if jx == jy {
        let c = lab::free_fermion_crosscheck(l, jx, jy)?;
        out.verdict("gap_multiset", c.max_gap_error <= cfg.tolerances.free_fermion_gap);
        out.verdict("zero_mode", c.zero_mode);
        w.write_record(["index", "formula_gap", "ed_gap"]).map_err(csv_err)?;
        for (i, (a, b)) in c.formula_gaps.iter().zip(&c.ed_gaps).enumerate() {
            w.write_record([i.to_string(), format!("{a:.16e}"), format!("{b:.16e}")]).map_err(csv_err)?;
        }
        let ff = lab::zipper_free_fermion(l, jx)?;
        let mut payload = c.to_json();
        payload["modes"] = ff.modes.iter().map(|(k, e)| json!({"k": k, "epsilon": e})).collect();
        out.payload = payload;
    } else {
        out.warnings.push("closed form needs jx = jy; reporting the chain spectrum only".into());
        let chain = lab::zipper_chain(l, jx, jy)?;
        let spec = diagonalize(&chain, None, &cfg.solve_options())?;
        let e = spec.eigenvalues();
        w.write_record(["index", "ed_energy"]).map_err(csv_err)?;
        for (i, x) in e.iter().enumerate() {
            w.write_record([i.to_string(), format!("{x:.16e}")]).map_err(csv_err)?;
        }
        out.payload = json!({"L": l, "jx": jx, "jy": jy, "ed_energies": e});
    }
    out.csv = Some(String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("utf-8 csv"));
    Ok(out)
}

fn perturbation_sweep(cfg: &RunConfig) -> Result<TaskOutput> {
    let (jx, jy) = jx_jy(cfg);
    let ls = cfg.params.ls.clone().unwrap_or_else(|| vec![size(cfg)]);
    let ratios = cfg.params.ratios.clone().unwrap_or_else(|| vec![jy / jx]);
    for &l in &ls {
        check_dim(cfg, l * l)?;
    }
    let table = lab::splitting_sweep(&ls, &ratios, &cfg.solve_options())?;
    let mut out = TaskOutput::default();
    for f in &table.fits {
        out.verdict(&format!("slope[ratio={}]", f.ratio), f.pass);
    }
    out.csv = Some(table.to_csv()?);
    out.payload = table.to_json();
    Ok(out)
}

fn entropy(cfg: &RunConfig) -> Result<TaskOutput> {
    let (lattice, h) = build(cfg)?;
    check_dim(cfg, lattice.n_sites())?;
    let mut out = TaskOutput::default();
    let cert = certificate_or_none(&lattice, &h, &mut out)?;
    let m = cert.as_ref().map(|c| c.m()).unwrap_or(0);
    let part = partition(cfg, &lattice, &h)?;
    let tol = multiplet_tol(cfg, &h);
    let (_, members, vectors) = solve_ground_multiplet(&h, Some(&part), &cfg.solve_options(), tol)?;
    let d = vectors.len();
    let mix: Vec<(f64, Vec<Complex64>)> = vectors.into_iter().map(|v| (1.0 / d as f64, v)).collect();
    let region = cfg.params.region.clone().unwrap_or_else(|| (0..lattice.n_sites()).collect());
    let rho = reduced_density(&mix, lattice.n_sites(), &region)?;
    let s = von_neumann_entropy(&rho)?;
    let tol_s = cfg.tolerances.entropy_bits;
    let full = region.len() == lattice.n_sites();
    if full {
        out.verdict("entropy_bound", s >= m as f64 - tol_s);
        if d == 1 << m {
            out.verdict("entropy_equality", (s - m as f64).abs() <= tol_s);
        }
    }
    out.payload = json!({
        "M": m,
        "multiplet_dim": d,
        "multiplet_energies": members.iter().map(|m| m.2).collect::<Vec<_>>(),
        "region": region,
        "entropy_bits": s,
    });
    Ok(out)
}

fn classical(cfg: &RunConfig) -> Result<TaskOutput> {
    let lattice = Lattice::build(&cfg.lattice)?;
    let (jx, jy) = jx_jy(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = TaskOutput::default();
    let mut rows = Vec::new();
    let (mut sizes_ok, mut spread_ok) = (true, true);
    for _ in 0..cfg.params.samples.unwrap_or(5) {
        let angles: Vec<f64> = (0..lattice.n_sites()).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        let o = classical_orbit(&ClassicalConfig { angles }, &lattice, jx, jy)?;
        sizes_ok &= o.orbit_size == o.expected;
        spread_ok &= o.energy_spread <= cfg.tolerances.zero;
        out.warnings.extend(o.warnings.iter().cloned());
        rows.push(json!({"orbit_size": o.orbit_size, "expected": o.expected, "energy_spread": o.energy_spread, "energy": o.energies[0]}));
    }
    out.verdict("orbit_size", sizes_ok);
    out.verdict("energy_spread", spread_ok);
    out.payload = json!({"samples": rows});
    Ok(out)
}

fn correlator_decay(cfg: &RunConfig) -> Result<TaskOutput> {
    let (lattice, h) = build(cfg)?;
    check_dim(cfg, lattice.n_sites())?;
    let mut out = TaskOutput::default();
    let part = partition(cfg, &lattice, &h)?;
    let (_, members, vectors) = solve_ground_multiplet(&h, Some(&part), &cfg.solve_options(), multiplet_tol(cfg, &h))?;
    if members.len() > 1 {
        out.warnings.push(format!("ground level is {}-fold; the first member is used", members.len()));
    }
    let psi = &vectors[0];
    let n = lattice.n_sites();
    let axis = cfg.params.correlator_axis.unwrap_or(Axis::Z);
    let origin = cfg.params.origin.unwrap_or(0);
    if origin >= n {
        return Err(Error::SiteOutOfRange { site: origin, n_sites: n });
    }
    let op = |s: usize| PauliString::single(s, axis, n).map(|p| h.frame().map(&p));
    let p = op(origin)?;
    let c0 = lattice.coord(origin);
    let mut by_dist: BTreeMap<i64, f64> = BTreeMap::new();
    let mut rows = Vec::new();
    for r in (0..n).filter(|&r| r != origin) {
        let c = connected_correlator(psi, &p, &op(r)?)?;
        let cr = lattice.coord(r);
        let d: i64 = (0..3).map(|k| (cr[k] - c0[k]).abs()).sum();
        let e = by_dist.entry(d).or_insert(0.0);
        *e = e.max(c.abs());
        rows.push(json!({"site": r, "distance": d, "connected": c}));
    }
    let pts: Vec<(f64, f64)> = by_dist.iter().filter(|(_, c)| **c > 1e-300).map(|(&d, &c)| (d as f64, c)).collect();
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let slope = lab::log_linear_slope(&xs, &ys);
    out.verdict("decay", slope.is_some_and(|s| s < 0.0));
    out.payload = json!({
        "axis": axis.name(),
        "origin": origin,
        "ground_energy": expectation(psi, &h)?.value,
        "correlators": rows,
        "max_abs_by_distance": by_dist.iter().map(|(d, c)| json!({"distance": d, "max_abs": c})).collect::<Vec<_>>(),
        "fit_slope": slope,
    });
    Ok(out)
}

fn variational(cfg: &RunConfig) -> Result<TaskOutput> {
    let l = size(cfg);
    let (jx, jy) = jx_jy(cfg);
    check_dim(cfg, l * l)?;
    let r = lab::variational_strings(l, jx, jy, cfg.tolerances.multiplet_rel, &cfg.solve_options())?;
    let mut out = TaskOutput::default();
    out.verdict("orthogonal", r.max_overlap <= cfg.tolerances.zero);
    out.verdict("uniform_min", r.uniform_is_min);
    out.verdict("staggered_max", r.staggered_is_max);
    out.warnings.extend(r.warnings.iter().cloned());
    out.payload = r.to_json();
    Ok(out)
}

