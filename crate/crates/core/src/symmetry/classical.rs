//! Classical XY limit: line reflections and the orbit they generate.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::pauli::Axis;

/// One in-plane spin angle per site, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalConfig {
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalOrbit {
    pub orbit_size: usize,
    pub expected: usize,
    pub energy_spread: f64,
    pub energies: Vec<f64>,
    pub warnings: Vec<String>,
}

/// E = −J_x Σ_x-bonds S^x S^x − J_y Σ_y-bonds S^y S^y for unit spins.
pub fn classical_energy(lattice: &Lattice, config: &ClassicalConfig, jx: f64, jy: f64) -> f64 {
    let a = &config.angles;
    lattice
        .all_bonds()
        .iter()
        .map(|b| match b.axis {
            Axis::X => -jx * a[b.a].cos() * a[b.b].cos(),
            _ => -jy * a[b.a].sin() * a[b.b].sin(),
        })
        .sum()
}

#[derive(Clone, Copy)]
enum Reflection {
    /// S^y → −S^y on every site of a column.
    Column(i64),
    /// S^x → −S^x on every site of a row.
    Row(i64),
}

const AXIS_TOL: f64 = 1e-12;

/// Applies every on/off combination of one reflection per diagonal site.
///
/// The diagonal site of row k is the k-th site of that row from the left.
/// A column reflection is used there unless it would leave that spin fixed.
pub fn classical_orbit(config: &ClassicalConfig, lattice: &Lattice, jx: f64, jy: f64) -> Result<ClassicalOrbit> {
    if lattice.dimension() != 2 {
        return Err(Error::InvalidLattice("classical orbit needs a 2D lattice".into()));
    }
    if config.angles.len() != lattice.n_sites() {
        return Err(Error::SizeMismatch(lattice.n_sites(), config.angles.len()));
    }
    if let Some(bad) = config.angles.iter().find(|a| !a.is_finite()) {
        return Err(Error::InvalidModel(format!("angle {bad} is not finite")));
    }
    let rows = lattice.foliate(Axis::Y)?;
    let mut warnings = Vec::new();
    let mut refl = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        let mut row = row.clone();
        row.sort_by_key(|&s| lattice.coord(s)[0]);
        let &site = row
            .get(k)
            .ok_or_else(|| Error::InvalidLattice(format!("row {k} has no diagonal site")))?;
        let c = lattice.coord(site);
        let t = config.angles[site];
        if t.sin().abs() <= AXIS_TOL || t.cos().abs() <= AXIS_TOL {
            warnings.push(format!("diagonal spin at site {site} lies on a reflection axis"));
        }
        refl.push(if t.sin().abs() > AXIS_TOL { Reflection::Column(c[0]) } else { Reflection::Row(c[1]) });
    }
    let l = refl.len();
    if l > 24 {
        return Err(Error::Budget(format!("2^{l} orbit members")));
    }
    let mut seen = HashSet::new();
    let mut energies = Vec::with_capacity(1 << l);
    for mask in 0u64..1 << l {
        let mut angles = config.angles.clone();
        for (k, r) in refl.iter().enumerate() {
            if mask >> k & 1 == 0 {
                continue;
            }
            for (s, a) in angles.iter_mut().enumerate() {
                let c = lattice.coord(s);
                match *r {
                    Reflection::Column(x) if c[0] == x => *a = -*a,
                    Reflection::Row(y) if c[1] == y => *a = std::f64::consts::PI - *a,
                    _ => {}
                }
            }
        }
        // compare spins by their components, rounded well above float noise
        let key: Vec<(i64, i64)> = angles
            .iter()
            .map(|a| ((a.cos() * 1e9).round() as i64, (a.sin() * 1e9).round() as i64))
            .collect();
        seen.insert(key);
        energies.push(classical_energy(lattice, &ClassicalConfig { angles }, jx, jy));
    }
    let max = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(ClassicalOrbit { orbit_size: seen.len(), expected: 1 << l, energy_spread: max - min, energies, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;

    #[test]
    fn uniform_ferromagnet() {
        let l = Lattice::build(&LatticeSpec::square_open(3)).unwrap();
        let cfg = ClassicalConfig { angles: vec![std::f64::consts::PI / 5.0; 9] };
        let o = classical_orbit(&cfg, &l, 1.0, 0.7).unwrap();
        assert_eq!(o.orbit_size, 8);
        assert!(o.energy_spread <= 1e-12);
        assert!(o.warnings.is_empty());
    }

    #[test]
    fn axis_aligned_is_reported() {
        let l = Lattice::build(&LatticeSpec::square_open(3)).unwrap();
        let cfg = ClassicalConfig { angles: vec![0.0; 9] };
        let o = classical_orbit(&cfg, &l, 1.0, 0.7).unwrap();
        assert_eq!(o.warnings.len(), 3);
        assert_eq!(o.orbit_size, 8);
    }

    #[test]
    fn wrong_size() {
        let l = Lattice::build(&LatticeSpec::square_open(3)).unwrap();
        assert!(classical_orbit(&ClassicalConfig { angles: vec![0.1; 4] }, &l, 1.0, 1.0).is_err());
    }
}
