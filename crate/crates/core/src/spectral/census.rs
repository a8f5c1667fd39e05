//! Degeneracy census and the sector-equality check.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::symmetry::DualPairCertificate;

use super::Spectrum;

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Census {
    pub levels: Vec<Level>,
    pub tol_abs: f64,
    pub bound: u128,
    pub verdict: Verdict,
    /// Set when some gap lies within a decade of the tolerance: the
    /// groupings at tol/10 and tol·10.
    pub unstable: Option<(Vec<Level>, Vec<Level>)>,
}

/// Groups sorted values, splitting wherever the gap exceeds `tol`.
pub fn group_levels(sorted: &[f64], tol: f64) -> Vec<Level> {
    let mut out: Vec<Level> = Vec::new();
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    for &e in sorted {
        match out.last_mut() {
            Some(l) if e - prev <= tol => {
                l.multiplicity += 1;
                sum += e;
                l.energy = sum / l.multiplicity as f64;
            }
            _ => {
                out.push(Level { energy: e, multiplicity: 1 });
                sum = e;
            }
        }
        prev = e;
    }
    out
}

/// Groups the full spectrum with gap ≤ tol_rel × width and checks every
/// multiplicity against `bound`.
pub fn degeneracy_census(spectrum: &Spectrum, tol_rel: f64, bound: u128) -> Result<Census> {
    if !spectrum.is_complete() {
        return Err(Error::Numerical("census needs every eigenvalue of every sector".into()));
    }
    let all = spectrum.eigenvalues();
    let width = spectrum.width();
    let tol = tol_rel * width;
    let levels = group_levels(&all, tol);
    let verdict = Verdict::from_bool(levels.iter().all(|l| (l.multiplicity as u128).is_multiple_of(bound.max(1))));
    let near = all.windows(2).any(|w| {
        let g = w[1] - w[0];
        g > tol / 10.0 && g < tol * 10.0
    });
    let unstable = near.then(|| (group_levels(&all, tol / 10.0), group_levels(&all, tol * 10.0)));
    Ok(Census { levels, tol_abs: tol, bound, verdict, unstable })
}

impl Census {
    pub fn ground_multiplicity(&self) -> usize {
        self.levels.first().map(|l| l.multiplicity).unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let lv = |v: &[Level]| v.iter().map(|l| json!({"E": l.energy, "multiplicity": l.multiplicity})).collect::<Vec<_>>();
        json!({
            "levels": lv(&self.levels),
            "tol_abs": self.tol_abs,
            "bound": self.bound,
            "verdict": self.verdict.name(),
            "unstable": self.unstable.as_ref().map(|(a, b)| json!({"tol_div_10": lv(a), "tol_mul_10": lv(b)})),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SectorComparison {
    pub max_deviation: f64,
    pub relative_deviation: f64,
    pub pairs_checked: usize,
}

impl SectorComparison {
    pub fn passes(&self, tol_rel: f64) -> bool {
        self.relative_deviation <= tol_rel
    }

    pub fn to_json(&self) -> Value {
        json!({
            "max_deviation": self.max_deviation,
            "relative_deviation": self.relative_deviation,
            "pairs_checked": self.pairs_checked,
        })
    }
}

/// For every sector and every certificate composite V_a, compares the
/// sorted spectrum with that of the sector V_a maps it to.
pub fn sector_spectra_compare(spectrum: &Spectrum, cert: &DualPairCertificate) -> Result<SectorComparison> {
    let width = spectrum.width().max(f64::MIN_POSITIVE);
    let mut max_dev: f64 = 0.0;
    let mut pairs = 0;
    for v in &cert.v {
        let x = v
            .op
            .x_mask()
            .to_u64()
            .ok_or_else(|| Error::Budget("too many sites for sector comparison".into()))?;
        // V flips the parity of each blocking string it overlaps oddly
        let flips: Vec<bool> = spectrum.blocking.iter().map(|z| (z & x).count_ones() % 2 == 1).collect();
        for s in &spectrum.sectors {
            let target: Vec<i8> = s.label.iter().zip(&flips).map(|(&l, &f)| if f { -l } else { l }).collect();
            let t = spectrum
                .sectors
                .iter()
                .find(|o| o.label == target)
                .ok_or_else(|| Error::Sector(format!("no sector with label {target:?}")))?;
            if t.dim != s.dim {
                return Err(Error::Sector(format!(
                    "partner sectors {:?} and {:?} differ in dimension",
                    s.label, t.label
                )));
            }
            for (a, b) in s.eigenvalues.iter().zip(&t.eigenvalues) {
                max_dev = max_dev.max((a - b).abs());
            }
            pairs += 1;
        }
    }
    Ok(SectorComparison { max_deviation: max_dev, relative_deviation: max_dev / width, pairs_checked: pairs })
}
