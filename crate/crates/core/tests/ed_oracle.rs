mod common;

use common::{c, dense_hamiltonian, dense_spectrum, max_abs_diff};
use gaugelike::lattice::{CustomGeometry, Lattice, LatticeSpec};
use gaugelike::model::{build_model, Couplings, Frame, GenericTerm, Hamiltonian, ModelKind, SitePauli};
use gaugelike::pauli::{Axis, PauliString};
use gaugelike::perturbation::{first_order_splitting, project_zip, row_partition, zipper_setup, ProjectedOperator};
use gaugelike::spectral::{
    connected_correlator, diagonal_symmetries, diagonalize, reduced_density, sector_partition, solve_ground_multiplet,
    von_neumann_entropy, SolveOptions, VectorRequest,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model(spec: LatticeSpec, kind: ModelKind, k: Couplings, frame: Frame) -> (Lattice, Hamiltonian) {
    let l = Lattice::build(&spec).unwrap();
    let h = build_model(&l, kind, k, frame, &[]).unwrap();
    (l, h)
}

fn sectored(l: &Lattice, h: &Hamiltonian, opts: &SolveOptions) -> Vec<f64> {
    let u = diagonal_symmetries(l, h).unwrap();
    let part = sector_partition(h, &u).unwrap();
    diagonalize(h, Some(&part), opts).unwrap().eigenvalues()
}

#[test]
fn sector_spectra_match_dense_oracle() {
    let pcm = Couplings::compass(1.0, 0.63);
    let cases = vec![
        model(LatticeSpec::square_open(2), ModelKind::Pcm, pcm, Frame::Rotated),
        model(LatticeSpec::square_open(3), ModelKind::Pcm, pcm, Frame::Rotated),
        model(LatticeSpec::square_open(3), ModelKind::Pcm, pcm, Frame::Literal),
        model(LatticeSpec::parallelogram(3, 1), ModelKind::Pcm, pcm, Frame::Rotated),
        model(LatticeSpec::cylinder(3), ModelKind::Pcm, pcm, Frame::Rotated),
        model(LatticeSpec::square_open(3), ModelKind::XuMoore, Couplings::xu_moore(1.0, 0.7), Frame::Literal),
        model(LatticeSpec::cubic_open(2), ModelKind::CubicCompass, Couplings::cubic(1.0, 0.8, 0.6), Frame::Rotated),
        model(LatticeSpec::cubic_open(2), ModelKind::U1Cubic, Couplings::cubic(1.0, 0.8, 0.6), Frame::Literal),
    ];
    for (l, h) in &cases {
        let want = dense_spectrum(h);
        let got = sectored(l, h, &SolveOptions::default());
        assert!(max_abs_diff(&got, &want) < 1e-10, "{:?} {:?}", l.kind(), h.kind());
        let unrefined = sectored(l, h, &SolveOptions { refine: false, ..Default::default() });
        assert!(max_abs_diff(&unrefined, &want) < 1e-10);
    }
}

#[test]
fn rotated_frame_is_isospectral() {
    for spec in [LatticeSpec::square_open(3), LatticeSpec::parallelogram(3, 1)] {
        let k = Couplings::compass(0.9, 0.4);
        let (_, lit) = model(spec.clone(), ModelKind::Pcm, k, Frame::Literal);
        let (_, rot) = model(spec, ModelKind::Pcm, k, Frame::Rotated);
        assert!(max_abs_diff(&dense_spectrum(&lit), &dense_spectrum(&rot)) < 1e-10);
    }
}

#[test]
fn generic_chain_matches_dense_oracle() {
    let n = 6;
    let sites: Vec<Vec<i64>> = (0..n).map(|i| vec![i as i64, 0]).collect();
    let bonds = (0..n - 1).map(|i| (i, i + 1, Axis::X)).collect();
    let l = Lattice::build(&LatticeSpec::custom(CustomGeometry { sites, bonds })).unwrap();
    let mut terms: Vec<GenericTerm> = (0..n - 1)
        .map(|i| GenericTerm {
            coeff: -1.0,
            paulis: vec![SitePauli { site: i, axis: Axis::Z }, SitePauli { site: i + 1, axis: Axis::Z }],
        })
        .collect();
    terms.extend((0..n).map(|i| GenericTerm { coeff: -0.8, paulis: vec![SitePauli { site: i, axis: Axis::X }] }));
    let h = build_model(&l, ModelKind::Generic, Couplings::default(), Frame::Literal, &terms).unwrap();
    let got = diagonalize(&h, None, &SolveOptions::default()).unwrap().eigenvalues();
    assert!(max_abs_diff(&got, &dense_spectrum(&h)) < 1e-10);
}

#[test]
fn iterative_path_matches_dense_lowest_levels() {
    let (l, h) = model(LatticeSpec::parallelogram(3, 1), ModelKind::Pcm, Couplings::compass(1.0, 0.5), Frame::Rotated);
    let opts = SolveOptions { dense_max_dim: 16, n_lowest: Some(3), refine: false, ..Default::default() };
    let part = row_partition(&l, &h).unwrap();
    let spec = diagonalize(&h, Some(&part), &opts).unwrap();
    assert!(!spec.is_complete());
    let want = dense_spectrum(&h);
    let got = spec.eigenvalues();
    assert!(max_abs_diff(&got[..6], &want[..6]) < 1e-9, "{:?} vs {:?}", &got[..6], &want[..6]);
    let over = SolveOptions { dense_max_dim: 16, n_lowest: None, refine: false, ..Default::default() };
    assert!(matches!(diagonalize(&h, Some(&part), &over), Err(gaugelike::Error::Budget(_))));
}

#[test]
fn eigenvectors_satisfy_dense_eigen_equation() {
    let (l, h) = model(LatticeSpec::square_open(3), ModelKind::Pcm, Couplings::compass(1.0, 0.6), Frame::Rotated);
    let part = row_partition(&l, &h).unwrap();
    let spec = diagonalize(&h, Some(&part), &SolveOptions { vectors: VectorRequest::All, ..Default::default() }).unwrap();
    let dh = dense_hamiltonian(&h);
    for (si, s) in spec.sectors.iter().enumerate() {
        for (i, &e) in s.eigenvalues.iter().enumerate() {
            let v = DVector::from_vec(spec.full_vector(si, i).unwrap());
            assert!((v.norm() - 1.0).abs() < 1e-10);
            let r = &dh * &v - &v * c(e, 0.0);
            assert!(r.norm() < 1e-9, "sector {si} level {i}");
        }
    }
}

fn dense_sandwich(basis: &[Vec<Complex64>], op: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let d = basis.len();
    DMatrix::from_fn(d, d, |i, j| {
        let a = DVector::from_vec(basis[i].clone());
        let b = DVector::from_vec(basis[j].clone());
        a.dotc(&(op * b))
    })
}

#[test]
fn projected_zipper_matches_dense_sandwich() {
    let s = zipper_setup(2, 1.0, 0.5).unwrap();
    let part = row_partition(&s.lattice, &s.open).unwrap();
    let (spec, members, _) = solve_ground_multiplet(&s.open, Some(&part), &SolveOptions::default(), 1e-9).unwrap();
    assert_eq!(members.len(), 4);
    let p = project_zip(&spec, &s.zip, 1e-9, None).unwrap();
    let want = dense_sandwich(&p.basis, &dense_hamiltonian(&s.zip));
    let err = (&p.matrix - &want).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(err < 1e-12, "{err}");
    assert!(p.hermiticity_error() < 1e-12);
}

fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(d, d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    m.qr().q()
}

#[test]
fn first_order_shifts_ignore_basis_choice() {
    let s = zipper_setup(3, 1.0, 0.5).unwrap();
    let part = row_partition(&s.lattice, &s.open).unwrap();
    let (spec, _, _) = solve_ground_multiplet(&s.open, Some(&part), &SolveOptions::default(), 1e-9).unwrap();
    let p = project_zip(&spec, &s.zip, 1e-9, None).unwrap();
    let base = first_order_splitting(&p).eigenvalues;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let u = random_unitary(p.dim(), &mut rng);
        let basis: Vec<Vec<Complex64>> = (0..p.dim())
            .map(|j| {
                let mut v = vec![c(0.0, 0.0); p.basis[0].len()];
                for (i, b) in p.basis.iter().enumerate() {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += u[(i, j)] * y;
                    }
                }
                v
            })
            .collect();
        let matrix = gaugelike::perturbation::projected_matrix(&basis, &s.zip).unwrap();
        let q = ProjectedOperator { members: p.members.clone(), basis, matrix, warnings: vec![] };
        let e = first_order_splitting(&q).eigenvalues;
        assert!(max_abs_diff(&e, &base) < 1e-10);
    }
}

#[test]
fn correlator_and_entropy_on_small_states() {
    let n = 2;
    let s = 1.0 / 2f64.sqrt();
    // (|01> − |10>)/√2
    let singlet = vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)];
    let z0 = PauliString::single(0, Axis::Z, n).unwrap();
    let z1 = PauliString::single(1, Axis::Z, n).unwrap();
    assert!((connected_correlator(&singlet, &z0, &z1).unwrap() + 1.0).abs() < 1e-12);
    let rho = reduced_density(&[(1.0, singlet)], n, &[0]).unwrap();
    assert!((von_neumann_entropy(&rho).unwrap() - 1.0).abs() < 1e-12);
    // |0> ⊗ |+>: site 0 is bit 0
    let product = vec![c(s, 0.0), c(0.0, 0.0), c(s, 0.0), c(0.0, 0.0)];
    for region in [vec![0], vec![1], vec![0, 1]] {
        let rho = reduced_density(&[(1.0, product.clone())], n, &region).unwrap();
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-12);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
    }
}
