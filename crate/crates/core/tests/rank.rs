use hyperbm::product::{bm_product, delta_t, identity_pair, kronecker_delta};
use hyperbm::random::{random_hypermatrix, random_nonzero_hypermatrix, random_nonzero_matrix, RandomScalar};
use hyperbm::rank::*;
use hyperbm::{Complex, ComplexField, Fp, Hypermatrix, Matrix, PrimeField, Rational, RationalField, Ring, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn cx() -> ComplexField {
    ComplexField::new(1e-9).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn min_side_certificates() {
    let d = RationalField;
    let mut r = rng(1);
    for (shape, want) in [([3, 4, 2], 2), ([2, 4, 3], 2), ([4, 3, 3], 3), ([1, 5, 4], 1), ([3, 1, 2], 1)] {
        let a = random_hypermatrix::<Rational, _>(shape, &d, &mut r);
        let cert = rank_upper_min(&a).unwrap();
        assert_eq!(cert.r(), want, "{shape:?}");
        assert_eq!(cert.kind, CertificateKind::UpperBound);
        assert_eq!(cert.residual, None);
        assert_eq!(cert.triple.reconstruct().unwrap(), a);
        cert.verify(&a).unwrap();
    }
}

#[test]
fn delta_sum_certificates() {
    let d = RationalField;
    let cert = delta_sum_certificate::<Rational>(3, 2, &d).unwrap();
    assert_eq!(cert.r(), 1);
    let rec = cert.triple.reconstruct().unwrap();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let one = i == j && j == k && i < 2;
                assert_eq!(rec.get(i, j, k), &q(one as i64), "({i},{j},{k})");
            }
        }
    }
    assert_eq!(delta_sum_certificate::<Rational>(3, 3, &d).unwrap().triple.reconstruct().unwrap(), kronecker_delta(3, &d));
    assert_eq!(delta_sum_certificate::<Rational>(3, 1, &d).unwrap().triple.reconstruct().unwrap(), delta_t(3, 0, &d).unwrap());
}

#[test]
fn empty_support_reconstructs_zero() {
    let d = RationalField;
    let mut r = rng(2);
    let x = random_hypermatrix::<Rational, _>([2, 2, 3], &d, &mut r);
    let y = random_hypermatrix::<Rational, _>([2, 3, 2], &d, &mut r);
    let z = random_hypermatrix::<Rational, _>([2, 3, 3], &d, &mut r);
    let t = DecompositionTriple::new(x, y, z, vec![]).unwrap();
    assert!(t.reconstruct().unwrap().is_zero());
    assert_eq!(t.r(), 0);
}

#[test]
fn support_must_be_increasing_and_in_range() {
    let d = RationalField;
    let x = Hypermatrix::<Rational>::zeros([1, 2, 1], &d);
    let y = Hypermatrix::zeros([1, 1, 2], &d);
    let z = Hypermatrix::zeros([2, 1, 1], &d);
    assert!(DecompositionTriple::new(x.clone(), y.clone(), z.clone(), vec![1, 0]).is_err());
    assert!(DecompositionTriple::new(x, y, z, vec![2]).is_err());
}

#[test]
fn duplicate_row_matrix_reduction() {
    let d = RationalField;
    let mut r = rng(3);
    let x = Matrix::from_fn(3, 3, &d, |_, _| Rational::sample(&d, &mut r));
    let y0: Vec<Rational> = (0..4).map(|_| Rational::sample(&d, &mut r)).collect();
    let y1: Vec<Rational> = (0..4).map(|_| Rational::sample(&d, &mut r)).collect();
    // Row 2 is a copy of row 0.
    let y = Matrix::from_fn(3, 4, &d, |i, j| if i == 1 { y1[j].clone() } else { y0[j].clone() });
    let (x2, y2) = matrix_slice_reduce(&x, &y, 2, &[q(1), q(0)]).unwrap();
    assert_eq!((x2.cols(), y2.rows()), (2, 2));
    assert_eq!(x2.matmul(&y2).unwrap(), x.matmul(&y).unwrap());
}

#[test]
fn zero_row_matrix_reduction() {
    let d = RationalField;
    let mut r = rng(4);
    let x = Matrix::from_fn(2, 3, &d, |_, _| Rational::sample(&d, &mut r));
    let y = Matrix::from_fn(3, 2, &d, |i, _| if i == 1 { q(0) } else { Rational::sample(&d, &mut r) });
    let (x2, y2) = matrix_slice_reduce(&x, &y, 1, &[q(0), q(0)]).unwrap();
    assert_eq!(x2.matmul(&y2).unwrap(), x.matmul(&y).unwrap());
}

#[test]
fn nullspace_matrix_reduction() {
    let d = RationalField;
    let mut r = rng(5);
    for _ in 0..10 {
        let x = Matrix::from_fn(3, 3, &d, |_, _| Rational::sample(&d, &mut r));
        let (a, b) = (Rational::sample(&d, &mut r), Rational::sample(&d, &mut r));
        let base = Matrix::from_fn(2, 4, &d, |_, _| Rational::sample(&d, &mut r));
        let y = Matrix::from_fn(3, 4, &d, |i, j| if i < 2 { base.get(i, j).clone() } else { &a * base.get(0, j) + &b * base.get(1, j) });
        // The nullspace of Yᵀ exposes the dependency; take the vector with last coordinate 1.
        let ns = y.transpose().nullspace();
        let w = ns.iter().find(|w| !Ring::is_zero(&w[2], &d)).expect("dependent rows");
        let scale = -w[2].clone();
        let u: Vec<Rational> = w[..2].iter().map(|c| c / &scale).collect();
        let (x2, y2) = matrix_slice_reduce(&x, &y, 2, &u).unwrap();
        assert_eq!(x2.matmul(&y2).unwrap(), x.matmul(&y).unwrap());
    }
}

#[test]
fn wrong_combination_is_a_hypothesis_error() {
    let d = RationalField;
    let x = Matrix::identity(2, &d);
    let y = Matrix::from_fn(2, 2, &d, |i, j| q((i * 2 + j) as i64 + 1));
    assert!(matches!(matrix_slice_reduce(&x, &y, 1, &[q(1)]), Err(hyperbm::Error::Hypothesis(_))));
}

#[test]
fn vanishing_term_reduces_trivially() {
    let d = RationalField;
    let mut r = rng(6);
    let x = random_hypermatrix::<Rational, _>([2, 3, 2], &d, &mut r);
    let z = random_hypermatrix::<Rational, _>([3, 2, 2], &d, &mut r);
    let y = Hypermatrix::from_fn([2, 2, 3], &d, |_, _, t| if t == 1 { q(0) } else { Rational::sample(&d, &mut r) });
    let t = DecompositionTriple::full(x, y, z).unwrap();
    let data = SliceRewriteData { tau: 1, u: vec![vec![q(0); 2]; 2], v: vec![vec![q(0); 2]; 2] };
    check_reduction_hypothesis(&t, &data).unwrap();
    let red = hyper_slice_reduce(&t, &data).unwrap();
    assert_eq!(red.ell(), 2);
    assert_eq!(red.reconstruct().unwrap(), t.reconstruct().unwrap());
}

#[test]
fn broken_hypothesis_is_rejected() {
    let d = RationalField;
    let mut r = rng(7);
    let x = random_nonzero_hypermatrix::<Rational, _>([2, 2, 2], &d, &mut r);
    let t = DecompositionTriple::full(x.clone(), x.clone(), x).unwrap();
    let data = SliceRewriteData { tau: 1, u: vec![vec![q(0); 2]], v: vec![vec![q(0); 2]] };
    assert!(matches!(hyper_slice_reduce(&t, &data), Err(hyperbm::Error::Hypothesis(_))));
}

#[test]
fn depth_slice_witness_reduces_identity_triple() {
    let d = cx();
    let mut r = rng(8);
    for seed in 0..3 {
        let b = random_nonzero_hypermatrix::<Complex, _>([3, 3, 3], &d, &mut r);
        let cfg = SolverConfig { seed, ..SolverConfig::default() };
        let (data, res) = depth_slice_witness(&b, 2, &cfg).unwrap().expect("generic n=3 witness");
        assert!(res < 1e-8);
        let (j0, j1) = identity_pair(3, 3, 3, &d);
        let t = DecompositionTriple::full(j0, b.clone(), j1).unwrap();
        let red = hyper_slice_reduce(&t, &data).unwrap();
        assert_eq!(red.ell(), 2);
        assert!(red.reconstruct().unwrap().distance(&b) < 1e-8);
    }
}

#[test]
fn depth_slice_witness_fails_for_nonzero_hyperdet() {
    let d = cx();
    let mut r = rng(9);
    let b = random_nonzero_hypermatrix::<Complex, _>([2, 2, 2], &d, &mut r);
    assert!(hyperdet_2x2x2(&b).unwrap().norm() > 1e-3);
    let cfg = SolverConfig { restarts: 10, ..SolverConfig::default() };
    assert!(depth_slice_witness(&b, 1, &cfg).unwrap().is_none());
}

#[test]
fn depth_slice_witness_on_twin_slices() {
    let d = cx();
    let mut r = rng(10);
    let s0 = random_nonzero_matrix::<Complex, _>(3, 3, &d, &mut r);
    let s1 = random_nonzero_matrix::<Complex, _>(3, 3, &d, &mut r);
    let b = Hypermatrix::from_depth_slices(&[s0.clone(), s1, s0]).unwrap();
    let (_, res) = depth_slice_witness(&b, 2, &SolverConfig::default()).unwrap().expect("twin slice witness");
    assert!(res < 1e-9);
}

#[test]
fn depth_slice_witness_needs_nonzero_entries() {
    let d = cx();
    let b = Hypermatrix::<Complex>::ones([2, 2, 2], &d).with_entry([0, 1, 0], Complex::new(0.0, 0.0)).unwrap();
    assert!(matches!(depth_slice_witness(&b, 1, &SolverConfig::default()), Err(hyperbm::Error::Precondition(_))));
}

#[test]
fn hyperdet_examples() {
    let d = RationalField;
    assert_eq!(hyperdet_2x2x2(&Hypermatrix::<Rational>::ones([2, 2, 2], &d)).unwrap(), q(0));
    assert_eq!(hyperdet_2x2x2(&kronecker_delta::<Rational>(2, &d)).unwrap(), q(0));
    let b = Hypermatrix::<Rational>::ones([2, 2, 2], &d).with_entry([0, 0, 1], q(2)).unwrap();
    assert_eq!(hyperdet_2x2x2(&b).unwrap(), q(1));
    assert!(hyperdet_2x2x2(&Hypermatrix::<Rational>::ones([2, 2, 3], &d)).is_err());
}

#[test]
fn generic_bound_values() {
    assert_eq!(generic_rank_bound(2).unwrap(), 2);
    assert_eq!(generic_rank_bound(3).unwrap(), 2);
    assert_eq!(generic_rank_bound(5).unwrap(), 4);
}

fn gf2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

#[test]
fn exhaustive_rank_examples() {
    let f = gf2();
    let delta = kronecker_delta::<Fp>(2, &f);
    let cert = bm_rank_exhaustive(&delta, 10_000_000).unwrap();
    assert_eq!(cert.r(), 1);
    assert!(matches!(cert.kind, CertificateKind::ExactRank { q: 2, .. }));
    cert.verify(&delta).unwrap();
    assert_eq!(bm_rank_exhaustive(&Hypermatrix::zeros([2, 2, 2], &f), 10_000_000).unwrap().r(), 0);
    let two = delta_t::<Fp>(3, 0, &f).unwrap().add(&delta_t(3, 1, &f).unwrap()).unwrap();
    assert_eq!(bm_rank_exhaustive(&two, 10_000_000).unwrap().r(), 1);
    assert_eq!(cp_rank_exhaustive(&two, 10_000_000).unwrap().r(), 2);
}

#[test]
fn exhaustive_rank_is_bounded_by_min_side_and_cp_rank() {
    let f = gf2();
    let mut r = rng(11);
    for _ in 0..12 {
        let shape = [r.random_range(1..=2), r.random_range(1..=2), r.random_range(1..=2)];
        let a = random_hypermatrix::<Fp, _>(shape, &f, &mut r);
        let bm = bm_rank_exhaustive(&a, 10_000_000).unwrap();
        let cp = cp_rank_exhaustive(&a, 10_000_000).unwrap();
        bm.verify(&a).unwrap();
        cp.verify(&a).unwrap();
        assert!(bm.r() <= shape.into_iter().min().unwrap());
        assert!(bm.r() <= cp.r());
    }
}

#[test]
fn exhaustive_rank_over_budget() {
    let f = gf2();
    let a = delta_t::<Fp>(3, 0, &f).unwrap().add(&delta_t(3, 1, &f).unwrap()).unwrap();
    assert!(matches!(bm_rank_exhaustive(&a, 10), Err(hyperbm::Error::Budget { .. })));
}

#[test]
fn pipeline_on_n2() {
    let d = cx();
    let mut r = rng(12);
    let generic = random_nonzero_hypermatrix::<Complex, _>([2, 2, 2], &d, &mut r);
    let rep = generic_rank_pipeline(&generic, &SolverConfig { restarts: 10, ..SolverConfig::default() }, None).unwrap();
    assert_eq!(rep.certificate.r(), 2);
    rep.certificate.verify(&generic).unwrap();

    let b0 = random_nonzero_matrix::<Complex, _>(2, 2, &d, &mut r);
    let u: Vec<Complex> = (0..2).map(|_| Complex::sample_nonzero(&d, &mut r)).collect();
    let v: Vec<Complex> = (0..2).map(|_| Complex::sample_nonzero(&d, &mut r)).collect();
    let special = Hypermatrix::from_depth_slices(&[b0.clone(), b0.scale_rows_cols(&u, &v)]).unwrap();
    let rep = generic_rank_pipeline(&special, &SolverConfig::default(), None).unwrap();
    assert_eq!(rep.certificate.r(), 1);
    assert!(rep.certificate.residual.unwrap() < 1e-8);
    rep.certificate.verify(&special).unwrap();
}

#[test]
fn pipeline_meets_generic_bound_n4() {
    let d = cx();
    let mut r = rng(13);
    let mut ok = 0;
    for seed in 0..4 {
        let b = random_nonzero_hypermatrix::<Complex, _>([4, 4, 4], &d, &mut r);
        let rep = generic_rank_pipeline(&b, &SolverConfig { seed, ..SolverConfig::default() }, None).unwrap();
        rep.certificate.verify(&b).unwrap();
        if rep.certificate.r() <= generic_rank_bound(4).unwrap() {
            ok += 1;
        }
    }
    assert!(ok >= 3, "{ok}/4 instances reached the bound");
}

#[test]
fn transpose_of_triple_matches_product_law() {
    let d = RationalField;
    let mut r = rng(14);
    let x = random_hypermatrix::<Rational, _>([2, 3, 4], &d, &mut r);
    let y = random_hypermatrix::<Rational, _>([2, 3, 3], &d, &mut r);
    let z = random_hypermatrix::<Rational, _>([3, 3, 4], &d, &mut r);
    let t = DecompositionTriple::full(x.clone(), y.clone(), z.clone()).unwrap();
    assert_eq!(t.transpose().reconstruct().unwrap(), bm_product(&x, &y, &z).unwrap().transpose());
}
