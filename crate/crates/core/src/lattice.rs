//! Site and bond geometries with their line/plane foliations.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::pauli::Axis;

pub type Coord = [i64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    SquareOpen,
    Parallelogram,
    Cylinder,
    CubicOpen,
    Custom,
}

impl LatticeKind {
    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::SquareOpen => "square_open",
            LatticeKind::Parallelogram => "parallelogram",
            LatticeKind::Cylinder => "cylinder",
            LatticeKind::CubicOpen => "cubic_open",
            LatticeKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomGeometry {
    pub sites: Vec<Vec<i64>>,
    pub bonds: Vec<(usize, usize, Axis)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_shift: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vacancies: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomGeometry>,
}

impl LatticeSpec {
    fn sized(kind: LatticeKind, l: usize) -> Self {
        LatticeSpec { kind, l: Some(l), row_shift: None, vacancies: vec![], custom: None }
    }

    pub fn square_open(l: usize) -> Self {
        Self::sized(LatticeKind::SquareOpen, l)
    }

    pub fn parallelogram(l: usize, row_shift: i64) -> Self {
        LatticeSpec { row_shift: Some(row_shift), ..Self::sized(LatticeKind::Parallelogram, l) }
    }

    pub fn cylinder(l: usize) -> Self {
        LatticeSpec { row_shift: Some(1), ..Self::sized(LatticeKind::Cylinder, l) }
    }

    pub fn cubic_open(l: usize) -> Self {
        Self::sized(LatticeKind::CubicOpen, l)
    }

    pub fn custom(geometry: CustomGeometry) -> Self {
        LatticeSpec { kind: LatticeKind::Custom, l: None, row_shift: None, vacancies: vec![], custom: Some(geometry) }
    }

    pub fn with_vacancies(mut self, vacancies: Vec<Vec<i64>>) -> Self {
        self.vacancies = vacancies;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub axis: Axis,
}

#[derive(Debug, Clone)]
pub struct Lattice {
    kind: LatticeKind,
    l: usize,
    row_shift: i64,
    dimension: usize,
    coords: Vec<Coord>,
    bonds: Vec<Bond>,
    zipper: Vec<Bond>,
    vacancies: Vec<Coord>,
    index: HashMap<Coord, usize>,
}

fn to_coord(v: &[i64], dimension: usize) -> Result<Coord> {
    if v.len() != dimension {
        return Err(Error::InvalidLattice(format!(
            "coordinate {v:?} does not have {dimension} components"
        )));
    }
    let mut c = [0; 3];
    c[..dimension].copy_from_slice(v);
    Ok(c)
}

impl Lattice {
    pub fn build(spec: &LatticeSpec) -> Result<Lattice> {
        match spec.kind {
            LatticeKind::Custom => Self::build_custom(spec),
            kind => {
                let l = spec
                    .l
                    .ok_or_else(|| Error::Config("lattice.L is required".into()))?;
                if l < 2 {
                    return Err(Error::InvalidLattice(format!("L = {l} < 2")));
                }
                if spec.custom.is_some() {
                    return Err(Error::InvalidLattice("custom geometry given for a preset kind".into()));
                }
                let shift = match kind {
                    LatticeKind::SquareOpen | LatticeKind::CubicOpen => match spec.row_shift {
                        None | Some(0) => 0,
                        Some(s) => {
                            return Err(Error::InvalidLattice(format!(
                                "row_shift {s} not allowed for {}",
                                kind.name()
                            )))
                        }
                    },
                    LatticeKind::Parallelogram => spec.row_shift.unwrap_or(1),
                    LatticeKind::Cylinder => match spec.row_shift {
                        None | Some(1) => 1,
                        Some(s) => {
                            return Err(Error::InvalidLattice(format!(
                                "cylinder requires row_shift 1, got {s}"
                            )))
                        }
                    },
                    LatticeKind::Custom => unreachable!(),
                };
                let dimension = if kind == LatticeKind::CubicOpen { 3 } else { 2 };
                let mut all = Vec::new();
                if dimension == 2 {
                    for y in 0..l as i64 {
                        for x in 0..l as i64 {
                            all.push([shift * y + x, y, 0]);
                        }
                    }
                } else {
                    for z in 0..l as i64 {
                        for y in 0..l as i64 {
                            for x in 0..l as i64 {
                                all.push([x, y, z]);
                            }
                        }
                    }
                }
                let mut lat = Self::assemble(kind, l, shift, dimension, all, &spec.vacancies, None)?;
                if kind == LatticeKind::Cylinder {
                    lat.zipper = lat.zipper_bonds()?;
                }
                Ok(lat)
            }
        }
    }

    fn build_custom(spec: &LatticeSpec) -> Result<Lattice> {
        let g = spec
            .custom
            .as_ref()
            .ok_or_else(|| Error::Config("lattice.custom is required for kind custom".into()))?;
        let dimension = g.sites.first().map(|s| s.len()).unwrap_or(2);
        if !(2..=3).contains(&dimension) {
            return Err(Error::InvalidLattice(format!("dimension {dimension} not in {{2,3}}")));
        }
        let coords = g
            .sites
            .iter()
            .map(|s| to_coord(s, dimension))
            .collect::<Result<Vec<_>>>()?;
        let extent = coords
            .iter()
            .flat_map(|c| c.iter().copied())
            .map(|v| v.unsigned_abs() as usize + 1)
            .max()
            .unwrap_or(0);
        Self::assemble(LatticeKind::Custom, extent, 0, dimension, coords, &spec.vacancies, Some(&g.bonds))
    }

    fn assemble(
        kind: LatticeKind,
        l: usize,
        row_shift: i64,
        dimension: usize,
        all: Vec<Coord>,
        vacancies: &[Vec<i64>],
        custom_bonds: Option<&[(usize, usize, Axis)]>,
    ) -> Result<Lattice> {
        let mut seen = HashSet::new();
        for c in &all {
            if !seen.insert(*c) {
                return Err(Error::InvalidLattice(format!("duplicate site {c:?}")));
            }
        }
        let mut vac = Vec::new();
        let mut vac_set = HashSet::new();
        for v in vacancies {
            let c = to_coord(v, dimension)?;
            if !seen.contains(&c) {
                return Err(Error::InvalidLattice(format!("vacancy {v:?} is outside the lattice")));
            }
            if !vac_set.insert(c) {
                return Err(Error::InvalidLattice(format!("duplicate vacancy {v:?}")));
            }
            vac.push(c);
        }
        let coords: Vec<Coord> = all.iter().copied().filter(|c| !vac_set.contains(c)).collect();
        let index: HashMap<Coord, usize> = coords.iter().enumerate().map(|(i, c)| (*c, i)).collect();

        let bonds = match custom_bonds {
            None => {
                let mut bonds = Vec::new();
                for (i, c) in coords.iter().enumerate() {
                    for axis in Axis::ALL.iter().take(dimension) {
                        let mut n = *c;
                        n[axis.index()] += 1;
                        if let Some(&j) = index.get(&n) {
                            bonds.push(Bond { a: i, b: j, axis: *axis });
                        }
                    }
                }
                bonds
            }
            Some(list) => {
                let mut bonds = Vec::new();
                for &(a, b, axis) in list {
                    if a >= all.len() || b >= all.len() {
                        return Err(Error::InvalidLattice(format!(
                            "bond ({a},{b}) references a missing site"
                        )));
                    }
                    if axis.index() >= dimension {
                        return Err(Error::InvalidDirection(format!("{axis} in {dimension}D")));
                    }
                    let (ca, cb) = (all[a], all[b]);
                    let off: Vec<i64> = (0..3).map(|k| cb[k] - ca[k]).collect();
                    let along = off[axis.index()] != 0
                        && (0..3).all(|k| k == axis.index() || off[k] == 0);
                    if !along {
                        return Err(Error::InvalidLattice(format!(
                            "bond ({a},{b}) offset {off:?} is not along {axis}"
                        )));
                    }
                    if vac_set.contains(&ca) || vac_set.contains(&cb) {
                        continue;
                    }
                    bonds.push(Bond { a: index[&ca], b: index[&cb], axis });
                }
                bonds
            }
        };
        Ok(Lattice { kind, l, row_shift, dimension, coords, bonds, zipper: vec![], vacancies: vac, index })
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// Linear size (rows). For custom lattices, the coordinate extent.
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn row_shift(&self) -> i64 {
        self.row_shift
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn n_sites(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn coord(&self, site: usize) -> Coord {
        self.coords[site]
    }

    pub fn site_at(&self, c: Coord) -> Option<usize> {
        self.index.get(&c).copied()
    }

    /// Bonds of the open geometry (zipper bonds excluded).
    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    /// Closure bonds; non-empty only for cylinders.
    pub fn zipper(&self) -> &[Bond] {
        &self.zipper
    }

    pub fn all_bonds(&self) -> Vec<Bond> {
        self.bonds.iter().chain(&self.zipper).copied().collect()
    }

    pub fn vacancies(&self) -> &[Coord] {
        &self.vacancies
    }

    /// The same sites and open bonds without the closure.
    pub fn opened(&self) -> Lattice {
        let mut l = self.clone();
        if l.kind == LatticeKind::Cylinder {
            l.kind = LatticeKind::Parallelogram;
        }
        l.zipper.clear();
        l
    }

    /// Bonds that close a unit-shear parallelogram into a cylinder.
    ///
    /// Horizontal closures join the leftmost and rightmost site of each row;
    /// vertical closures join the leftmost site of row ρ to the rightmost
    /// site of row ρ+1.
    pub fn zipper_bonds(&self) -> Result<Vec<Bond>> {
        let shape_ok = matches!(self.kind, LatticeKind::Parallelogram | LatticeKind::Cylinder)
            && self.row_shift == 1;
        if !shape_ok {
            return Err(Error::InvalidLattice(format!(
                "zipper bonds need a unit-shear parallelogram, got {} with row_shift {}",
                self.kind.name(),
                self.row_shift
            )));
        }
        if !self.vacancies.is_empty() {
            return Err(Error::InvalidLattice("zipper bonds are undefined with vacancies".into()));
        }
        let l = self.l as i64;
        let at = |x: i64, y: i64| self.index[&[x, y, 0]];
        let mut out = Vec::with_capacity(2 * self.l - 1);
        for r in 0..l {
            out.push(Bond { a: at(r, r), b: at(r + l - 1, r), axis: Axis::X });
        }
        for r in 0..l - 1 {
            out.push(Bond { a: at(r, r), b: at(r + l, r + 1), axis: Axis::Y });
        }
        Ok(out)
    }

    /// Sites grouped by their coordinate along `axis`: columns for x, rows
    /// for y, planes in 3D. Ordered by coordinate.
    pub fn foliate(&self, axis: Axis) -> Result<Vec<Vec<usize>>> {
        if axis.index() >= self.dimension {
            return Err(Error::InvalidDirection(format!("{axis} in {}D", self.dimension)));
        }
        let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.coords.iter().enumerate() {
            groups.entry(c[axis.index()]).or_default().push(i);
        }
        Ok(groups.into_values().collect())
    }

    /// Sublattices by coordinate-sum parity; every bond must cross.
    pub fn bipartition(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        let parity = |i: usize| self.coords[i].iter().sum::<i64>().rem_euclid(2);
        for b in self.all_bonds() {
            if parity(b.a) == parity(b.b) {
                return Err(Error::NotBipartite(format!(
                    "bond ({}, {}) joins equal-parity sites",
                    b.a, b.b
                )));
            }
        }
        let (a, b): (Vec<usize>, Vec<usize>) = (0..self.n_sites()).partition(|&i| parity(i) == 0);
        Ok((a, b))
    }

    /// Deterministic JSON description (sorted keys, integers only).
    pub fn to_json(&self) -> Value {
        let coord = |c: &Coord| c[..self.dimension].to_vec();
        let bond = |b: &Bond| json!([b.a, b.b, b.axis.name()]);
        let mut fol = serde_json::Map::new();
        for axis in Axis::ALL.iter().take(self.dimension) {
            fol.insert(axis.name().into(), json!(self.foliate(*axis).unwrap()));
        }
        json!({
            "kind": self.kind.name(),
            "L": self.l,
            "row_shift": self.row_shift,
            "dimension": self.dimension,
            "sites": self.coords.iter().map(coord).collect::<Vec<_>>(),
            "bonds": self.bonds.iter().map(bond).collect::<Vec<_>>(),
            "zipper": self.zipper.iter().map(bond).collect::<Vec<_>>(),
            "vacancies": self.vacancies.iter().map(coord).collect::<Vec<_>>(),
            "foliations": Value::Object(fol),
        })
    }
}
