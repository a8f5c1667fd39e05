use gaugelike::bits::BitMask;
use gaugelike::lattice::{Lattice, LatticeSpec};
use gaugelike::model::{build_model, Couplings, Frame, ModelKind};
use gaugelike::pauli::PauliString;
use gaugelike::perturbation::{log_linear_slope, zipper_free_fermion};
use gaugelike::spectral::{group_levels, sector_partition, diagonal_symmetries};
use gaugelike::symmetry::f2::F2Matrix;
use gaugelike::symmetry::{classical_energy, classical_orbit, ClassicalConfig};
use proptest::prelude::*;

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (any::<u64>(), any::<u64>(), 0u8..4).prop_map(move |(x, z, p)| {
        PauliString::from_masks(BitMask::from_u64(n, x & mask), BitMask::from_u64(n, z & mask), p).unwrap()
    })
}

fn triple() -> impl Strategy<Value = (PauliString, PauliString, PauliString)> {
    (1usize..=64).prop_flat_map(|n| (pauli(n), pauli(n), pauli(n)))
}

proptest! {
    #[test]
    fn product_is_associative((a, b, c) in triple()) {
        let l = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let r = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn commutation_is_symmetric_and_matches_products((a, b, _) in triple()) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
        prop_assert_eq!(a.commutes(&b).unwrap(), ab == ba);
        prop_assert_eq!(ab.x_mask(), ba.x_mask());
    }

    #[test]
    fn hermitian_strings_square_to_identity((a, _, _) in triple()) {
        let sq = a.multiply(&a).unwrap();
        prop_assert!(sq.is_identity());
        prop_assert_eq!(sq.phase_exp() == 0, a.is_hermitian());
    }

    #[test]
    fn frame_map_is_an_automorphism((a, b, _) in triple()) {
        let f = |p: &PauliString| p.conjugate_y_to_z();
        prop_assert_eq!(f(&a.multiply(&b).unwrap()), f(&a).multiply(&f(&b)).unwrap());
        prop_assert_eq!(f(&a).conjugate_z_to_y(), a.clone());
        prop_assert_eq!(f(&a).is_hermitian(), a.is_hermitian());
    }

    #[test]
    fn apply_composes(p in pauli(8), q in pauli(8), b in 0u64..256) {
        let st = BitMask::from_u64(8, b);
        let (s1, a1) = q.apply_to_basis_state(&st).unwrap();
        let (s2, a2) = p.apply_to_basis_state(&s1).unwrap();
        let (s3, a3) = p.multiply(&q).unwrap().apply_to_basis_state(&st).unwrap();
        prop_assert_eq!(s2, s3);
        prop_assert!((a1 * a2 - a3).norm() < 1e-15);
    }

    #[test]
    fn f2_rank_bounds(rows in prop::collection::vec(prop::collection::vec(0u8..2, 7), 1..9)) {
        let m = F2Matrix::from_bits(&rows);
        let r = m.rank();
        prop_assert!(r <= rows.len().min(7));
        prop_assert_eq!(m.nullspace().len(), 7 - r);
        let (e, pivots) = m.rref();
        prop_assert_eq!(pivots.len(), r);
        prop_assert_eq!(e.rank(), r);
    }

    #[test]
    fn grouping_preserves_count(mut v in prop::collection::vec(-5.0f64..5.0, 1..60), tol in 1e-6f64..0.5) {
        v.sort_by(f64::total_cmp);
        let levels = group_levels(&v, tol);
        prop_assert_eq!(levels.iter().map(|l| l.multiplicity).sum::<usize>(), v.len());
        for w in levels.windows(2) {
            prop_assert!(w[1].energy > w[0].energy);
        }
    }

    #[test]
    fn free_fermion_spectrum_is_symmetric(l in 1usize..6, j in 0.1f64..3.0) {
        let ff = zipper_free_fermion(l, j).unwrap();
        prop_assert_eq!(ff.modes.len(), 2 * l);
        prop_assert_eq!(ff.many_body.len(), 1 << (2 * l));
        let n = ff.many_body.len();
        for i in 0..n {
            prop_assert!((ff.many_body[i] + ff.many_body[n - 1 - i]).abs() < 1e-9);
        }
    }

    #[test]
    fn slope_recovers_exponentials(rate in -3.0f64..3.0, a in 0.1f64..10.0) {
        let xs = [1.0, 2.0, 3.0, 5.0];
        let ys: Vec<f64> = xs.iter().map(|x| a * (rate * x).exp()).collect();
        prop_assert!((log_linear_slope(&xs, &ys).unwrap() - rate).abs() < 1e-9);
    }

    #[test]
    fn classical_orbit_is_full(l in 3usize..6, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let lat = Lattice::build(&LatticeSpec::square_open(l)).unwrap();
        let angles: Vec<f64> = (0..lat.n_sites()).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        let cfg = ClassicalConfig { angles };
        let o = classical_orbit(&cfg, &lat, 1.0, 0.7).unwrap();
        prop_assert_eq!(o.orbit_size, 1 << l);
        prop_assert!(o.energy_spread <= 1e-12);
        prop_assert!((o.energies[0] - classical_energy(&lat, &cfg, 1.0, 0.7)).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sectors_partition_the_basis(l in 2usize..4, jy in 0.1f64..2.0, shear in 0i64..2) {
        let spec = if shear == 0 { LatticeSpec::square_open(l) } else { LatticeSpec::parallelogram(l, 1) };
        let lat = Lattice::build(&spec).unwrap();
        let h = build_model(&lat, ModelKind::Pcm, Couplings::compass(1.0, jy), Frame::Rotated, &[]).unwrap();
        let part = sector_partition(&h, &diagonal_symmetries(&lat, &h).unwrap()).unwrap();
        let mut seen = vec![false; 1 << lat.n_sites()];
        for s in part.sectors() {
            for &b in &s.states {
                prop_assert!(!std::mem::replace(&mut seen[b as usize], true));
            }
        }
        prop_assert!(seen.iter().all(|&x| x));
        // every term keeps a basis state inside its sector
        for t in h.packed_terms().unwrap() {
            for b in 0..1u64 << lat.n_sites() {
                prop_assert_eq!(part.locate(b).0, part.locate(t.1.apply(b).0).0);
            }
        }
    }
}
