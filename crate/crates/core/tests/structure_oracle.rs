mod common;

use std::collections::{BTreeSet, HashMap};

use common::span_rank;
use gaugelike::lattice::{Lattice, LatticeSpec};
use gaugelike::model::{build_model, Couplings, Frame, ModelKind};
use gaugelike::pauli::Axis;
use gaugelike::symmetry::f2::F2Matrix;
use gaugelike::symmetry::{degeneracy_lower_bound, find_dual_sets, parity_matrix, symmetry_lines};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn f2_rank_matches_span_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let r = rng.gen_range(1..=10);
        let c = rng.gen_range(1..=12);
        let bits: Vec<Vec<u8>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..2)).collect()).collect();
        let m = F2Matrix::from_bits(&bits);
        assert_eq!(m.rank(), span_rank(&bits), "{bits:?}");
        assert_eq!(m.transpose().rank(), m.rank());
        for v in m.nullspace() {
            // every nullspace vector annihilates every row
            for row in &bits {
                let dot: u8 = row.iter().enumerate().filter(|(j, _)| v.get(*j)).map(|(_, b)| b).sum();
                assert_eq!(dot % 2, 0);
            }
        }
        assert_eq!(m.nullspace().len(), c - m.rank());
    }
}

/// The cylinder rebuilt from scratch on an L-periodic strip.
fn strip_bonds(l: usize) -> BTreeSet<(usize, usize, Axis)> {
    let mut out = BTreeSet::new();
    let id = |x: usize, y: usize| y * l + x % l;
    for y in 0..l {
        for x in 0..l {
            let h = (id(x, y), id(x + 1, y));
            out.insert((h.0.min(h.1), h.0.max(h.1), Axis::X));
            if y + 1 < l {
                out.insert((id(x, y), id(x, y + 1), Axis::Y));
            }
        }
    }
    out
}

#[test]
fn cylinder_matches_periodic_strip() {
    for l in 3..=6 {
        let cyl = Lattice::build(&LatticeSpec::cylinder(l)).unwrap();
        let relabel: HashMap<usize, usize> = (0..cyl.n_sites())
            .map(|s| {
                let c = cyl.coord(s);
                (s, c[1] as usize * l + (c[0] as usize) % l)
            })
            .collect();
        let got: BTreeSet<(usize, usize, Axis)> = cyl
            .all_bonds()
            .iter()
            .map(|b| {
                let (a, c) = (relabel[&b.a], relabel[&b.b]);
                (a.min(c), a.max(c), b.axis)
            })
            .collect();
        assert_eq!(cyl.all_bonds().len(), got.len(), "duplicate bonds at L={l}");
        assert_eq!(got, strip_bonds(l), "L={l}");
        assert_eq!(cyl.zipper().len(), 2 * l - 1);
        let mut degree = vec![0; cyl.n_sites()];
        for b in cyl.all_bonds() {
            degree[b.a] += 1;
            degree[b.b] += 1;
        }
        for (s, d) in degree.iter().enumerate() {
            let y = cyl.coord(s)[1] as usize;
            let want = if y == 0 || y == l - 1 { 3 } else { 4 };
            assert_eq!(*d, want, "site {s} at L={l}");
        }
    }
}

#[test]
fn certificate_rank_matches_enumerated_parity_rank() {
    let pcm = |spec: LatticeSpec| {
        let l = Lattice::build(&spec).unwrap();
        let h = build_model(&l, ModelKind::Pcm, Couplings::compass(1.0, 0.8), Frame::Rotated, &[]).unwrap();
        (l, h)
    };
    for spec in [
        LatticeSpec::square_open(3),
        LatticeSpec::square_open(4),
        LatticeSpec::parallelogram(3, 1),
        LatticeSpec::parallelogram(4, 1),
        LatticeSpec::parallelogram(4, 2),
        LatticeSpec::square_open(4).with_vacancies(vec![vec![0, 0], vec![1, 1], vec![2, 2], vec![3, 3]]),
    ] {
        let (l, h) = pcm(spec.clone());
        let cols = symmetry_lines(&l, Axis::X).unwrap();
        let rows = symmetry_lines(&l, Axis::Y).unwrap();
        let a = parity_matrix(&cols, &rows, l.n_sites()).to_bits();
        // direct intersection counts
        for (c, col) in cols.iter().enumerate() {
            for (r, row) in rows.iter().enumerate() {
                let k = col.iter().filter(|s| row.contains(s)).count();
                assert_eq!(a[c][r] as usize, k % 2);
            }
        }
        let cert = find_dual_sets(&l, &h).unwrap();
        assert_eq!(cert.m(), span_rank(&a), "{spec:?}");
        assert_eq!(degeneracy_lower_bound(&cert), 1u128 << cert.m());
        for (a, ua) in cert.u.iter().enumerate() {
            for (b, vb) in cert.v.iter().enumerate() {
                assert_eq!(ua.op.commutes(&vb.op).unwrap(), a != b);
            }
            for ub in &cert.u {
                assert!(ua.op.commutes(&ub.op).unwrap());
            }
        }
    }
}
