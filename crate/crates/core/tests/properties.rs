use num::complex::Complex64;
use num::rational::BigRational;
use num::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use randnorm::cumulants::catalog_samples;
use randnorm::matrix::Matrix;
use randnorm::norm::{
    general_norm_pow, hermitian_norm_pow, hermitian_norm_pow_exact, norm, series_norm_pow, series_norm_pow_exact,
};
use randnorm::random::{random_unitary, robin_hood};
use randnorm::scalar::{rat, rel_diff};
use randnorm::sympoly::{chs, hunter_poly};
use randnorm::{ComplexMatrix, DistributionSpec};

fn family(i: usize) -> DistributionSpec {
    catalog_samples().swap_remove(i)
}

fn mgf_family(i: usize) -> DistributionSpec {
    catalog_samples().into_iter().filter(DistributionSpec::has_mgf).nth(i).unwrap()
}

fn complex_matrix(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(move |v| {
            Matrix::from_fn(n, |i, j| Complex64::new(v[i * n + j].0, v[i * n + j].1))
        })
    })
}

fn hermitian_matrix(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_matrix(max_n).prop_map(|z| {
        let h = &z + &z.adjoint();
        h.scale(&Complex64::new(0.5, 0.0))
    })
}

fn rational_symmetric(max_n: usize) -> impl Strategy<Value = Matrix<BigRational>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((-9i64..=9, 1i64..=5), n * n)
            .prop_map(move |v| Matrix::from_fn(n, |i, j| rat(v[i * n + j].0, v[i * n + j].1) + rat(v[j * n + i].0, v[j * n + i].1)))
    })
}

fn nonzero(z: &ComplexMatrix) -> bool {
    z.max_abs() > 1e-3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_partition_equals_series(a in rational_symmetric(4), f in 0usize..9, k in 1usize..=4) {
        let s = mgf_family(f);
        let d = 2 * k;
        prop_assert_eq!(hermitian_norm_pow_exact(&a, &s, d).unwrap(), series_norm_pow_exact(&a, &s, d).unwrap());
    }

    #[test]
    fn float_paths_agree(a in hermitian_matrix(6), f in 0usize..9, k in 1usize..=4) {
        let s = mgf_family(f);
        let d = 2 * k;
        let p = hermitian_norm_pow(&a, &s, d).unwrap();
        let q = series_norm_pow(&a, &s, d).unwrap();
        prop_assert!(rel_diff(p, q) <= 1e-11, "{} vs {}", p, q);
    }

    #[test]
    fn general_restricts_to_hermitian(a in hermitian_matrix(4), f in 0usize..10, k in 1usize..=3) {
        let s = family(f);
        let d = 2 * k;
        let p = hermitian_norm_pow(&a, &s, d).unwrap();
        let g = general_norm_pow(&a, &s, d).unwrap();
        prop_assert!(rel_diff(p, g) <= 1e-10, "{} vs {}", p, g);
    }

    #[test]
    fn unitary_invariance(z in complex_matrix(4), seed in any::<u64>(), f in 0usize..10, k in 1usize..=2) {
        let s = family(f);
        let d = 2 * k;
        let u = random_unitary(&mut ChaCha8Rng::seed_from_u64(seed), z.n());
        let w = &(&u * &z) * &u.adjoint();
        prop_assert!(rel_diff(norm(&z, &s, d).unwrap(), norm(&w, &s, d).unwrap()) <= 1e-9);
    }

    #[test]
    fn homogeneity(z in complex_matrix(4), re in -3.0f64..3.0, im in -3.0f64..3.0, f in 0usize..10, k in 1usize..=2) {
        let s = family(f);
        let d = 2 * k;
        let c = Complex64::new(re, im);
        let lhs = norm(&z.scale(&c), &s, d).unwrap();
        prop_assert!(rel_diff(lhs, c.norm() * norm(&z, &s, d).unwrap()) <= 1e-12);
    }

    #[test]
    fn real_homogeneity_on_hermitian(a in hermitian_matrix(4), c in -3.0f64..3.0, f in 0usize..10, k in 1usize..=2) {
        let s = family(f);
        let d = 2 * k;
        let lhs = norm(&a.scale(&Complex64::new(c, 0.0)), &s, d).unwrap();
        prop_assert!(rel_diff(lhs, c.abs() * norm(&a, &s, d).unwrap()) <= 1e-12);
    }

    #[test]
    fn triangle_inequality(a in complex_matrix(4), b in complex_matrix(4), f in 0usize..10, k in 1usize..=2) {
        prop_assume!(a.n() == b.n());
        let s = family(f);
        let d = 2 * k;
        let (na, nb) = (norm(&a, &s, d).unwrap(), norm(&b, &s, d).unwrap());
        prop_assert!(norm(&(&a + &b), &s, d).unwrap() <= na + nb + 1e-9 * (na + nb));
    }

    #[test]
    fn positive_definite(z in complex_matrix(4), f in 0usize..10, k in 1usize..=2) {
        prop_assume!(nonzero(&z));
        prop_assert!(general_norm_pow(&z, &family(f), 2 * k).unwrap() > 0.0);
    }

    #[test]
    fn schur_convex(y in prop::collection::vec(-2.0f64..2.0, 2..=5), seed in any::<u64>(), f in 0usize..10, k in 1usize..=2) {
        let s = family(f);
        let d = 2 * k;
        let x = robin_hood(&mut ChaCha8Rng::seed_from_u64(seed), &y, 4);
        let nx = norm(&ComplexMatrix::real_diag(&x), &s, d).unwrap();
        let ny = norm(&ComplexMatrix::real_diag(&y), &s, d).unwrap();
        prop_assert!(nx <= ny + 1e-12 * ny.max(1.0));
    }

    #[test]
    fn hunter_and_chs_positive(v in prop::collection::vec((-9i64..=9, 1i64..=6), 1..=5), k in 1usize..=3, alpha in 1usize..=4) {
        let x: Vec<BigRational> = v.iter().map(|&(p, q)| rat(p, q)).collect();
        prop_assume!(x.iter().any(|t| !num::Zero::is_zero(t)));
        prop_assert!(hunter_poly(2 * k, alpha, &x).is_positive());
        prop_assert!(chs(2 * k, &x).is_positive());
    }
}
