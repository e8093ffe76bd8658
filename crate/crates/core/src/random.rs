//! Random test inputs: Hermitian, general, and unitary matrices, and
//! majorization chains.

use num::complex::Complex64;
use num::rational::BigRational;
use rand::Rng;

use crate::matrix::{ComplexMatrix, Matrix};
use crate::scalar::rat;

fn unit_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Entries with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, unit_complex(rng));
        }
    }
    m
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, Complex64::new(rng.random_range(-1.0..1.0), 0.0));
        for j in i + 1..n {
            let z = unit_complex(rng);
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}

/// Product of `n` Householder reflections `I - 2 v v* / (v* v)`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(n);
    for _ in 0..n {
        let v: Vec<Complex64> = (0..n).map(|_| unit_complex(rng)).collect();
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm2 == 0.0 {
            continue;
        }
        let h = Matrix::from_fn(n, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            Complex64::new(delta, 0.0) - v[i] * v[j].conj() * (2.0 / norm2)
        });
        u = &u * &h;
    }
    u
}

pub fn random_real_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Rationals `p/q` with `|p| <= 9`, `1 <= q <= 6`.
pub fn random_rational_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| rat(rng.random_range(-9..=9), rng.random_range(1..=6)))
        .collect()
}

/// Applies `steps` Robin Hood transfers to `y`: move a fraction of the gap
/// from a larger entry to a smaller one. The result is majorized by `y`.
pub fn robin_hood<R: Rng + ?Sized>(rng: &mut R, y: &[f64], steps: usize) -> Vec<f64> {
    let mut x = y.to_vec();
    let n = x.len();
    if n < 2 {
        return x;
    }
    for _ in 0..steps {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let (hi, lo) = if x[i] >= x[j] { (i, j) } else { (j, i) };
        let t = rng.random_range(0.0..=1.0) * (x[hi] - x[lo]);
        x[hi] -= t;
        x[lo] += t;
    }
    x
}
