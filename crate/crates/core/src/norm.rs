//! Evaluation of `|||A|||_{X,d}^d` along independent routes.
//!
//! Floating evaluations divide the input by its largest entry magnitude,
//! evaluate, and rescale by `s^d`, which keeps the power sums in range.

use std::collections::HashMap;
use std::f64::consts::PI;

use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Zero};

use crate::cumulants::{kappa_product, CumulantVector, DistributionSpec};
use crate::error::{Error, Result};
use crate::matrix::{hermitian_power_sums, trace_powers, ComplexMatrix, Matrix};
use crate::partitions::{enumerate_partitions, y_of, Partition};
use crate::scalar::{binomial, factorial, rational_to_f64, Field, Ring};
use crate::series::TruncatedSeries;
use crate::words::{placements, segment_words, Letter, TraceWord};

fn check_even(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: d });
    }
    if d % 2 == 1 {
        return Err(Error::OddDegree(d));
    }
    Ok(())
}

fn check_finite(a: &ComplexMatrix) -> Result<()> {
    if a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("matrix has non-finite entries".into()))
    }
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    check_finite(a)?;
    if a.is_hermitian(a.default_hermitian_tol()) {
        Ok(())
    } else {
        Err(Error::NotHermitian(a.hermitian_defect()))
    }
}

fn float_cumulants(spec: &DistributionSpec, d: usize) -> Result<CumulantVector<f64>> {
    spec.check_moments_exist(d)?;
    Ok(spec.cumulants(d)?.to_f64())
}

fn inv_y<T: Ring>(p: &Partition) -> T {
    T::from_rational(&BigRational::new(One::one(), y_of(p).into()))
}

/// `B_ell(x_1..x_ell) = ell! sum_{pi |- ell} x_pi / y_pi`.
pub fn bell_value<T: Field>(ell: usize, x: &[T]) -> T {
    assert!(x.len() >= ell, "bell_value needs {ell} arguments");
    if ell == 0 {
        return T::one();
    }
    let xs = CumulantVector::new(x[..ell].to_vec());
    let sum = enumerate_partitions(ell)
        .iter()
        .fold(T::zero(), |acc, p| acc + kappa_product(p, &xs) * inv_y::<T>(p));
    sum * T::from_rational(&BigRational::from_integer(factorial(ell)))
}

/// `sum_{pi |- d} kappa_pi p_pi / y_pi`, where `power_sums[k-1] = tr A^k`.
pub fn norm_pow_from_power_sums<T: Ring>(
    kappas: &CumulantVector<T>,
    power_sums: &[T],
    d: usize,
) -> T {
    let scaled = CumulantVector::new(
        (1..=d)
            .map(|k| kappas.kappa(k).clone() * power_sums[k - 1].clone())
            .collect(),
    );
    enumerate_partitions(d)
        .iter()
        .fold(T::zero(), |acc, p| acc + kappa_product(p, &scaled) * inv_y::<T>(p))
}

/// `[t^d] exp(sum_j kappa_j tr(A^j) t^j / j!)`.
pub fn series_from_power_sums<T: Field>(
    kappas: &CumulantVector<T>,
    power_sums: &[T],
    d: usize,
) -> T {
    let mut coeffs = vec![T::zero(); d + 1];
    for j in 1..=d {
        let inv_fact = T::from_rational(&BigRational::new(One::one(), factorial(j)));
        coeffs[j] = kappas.kappa(j).clone() * power_sums[j - 1].clone() * inv_fact;
    }
    TruncatedSeries::from_coeffs(coeffs, d).exp().coeff(d)
}

/// Partition-sum route for Hermitian `A`.
pub fn hermitian_norm_pow(a: &ComplexMatrix, spec: &DistributionSpec, d: usize) -> Result<f64> {
    check_even(d)?;
    check_hermitian(a)?;
    let kappas = float_cumulants(spec, d)?;
    let s = a.max_abs();
    if s == 0.0 {
        return Ok(0.0);
    }
    let p = hermitian_power_sums(&a.scale(&Complex64::new(1.0 / s, 0.0)), d)?;
    Ok(norm_pow_from_power_sums(&kappas, &p, d) * s.powi(d as i32))
}

/// Partition-sum route in exact arithmetic for a rational symmetric matrix.
pub fn hermitian_norm_pow_exact(
    a: &Matrix<BigRational>,
    spec: &DistributionSpec,
    d: usize,
) -> Result<BigRational> {
    check_even(d)?;
    if !a.is_symmetric() {
        return Err(Error::NotHermitian(a.to_complex().hermitian_defect()));
    }
    spec.check_moments_exist(d)?;
    let kappas = spec.cumulants(d)?;
    Ok(norm_pow_from_power_sums(&kappas, &trace_powers(a, d), d))
}

fn require_mgf(spec: &DistributionSpec) -> Result<()> {
    if spec.has_mgf() {
        Ok(())
    } else {
        Err(Error::NoMgf(spec.name()))
    }
}

/// Series-extraction route for Hermitian `A`.
pub fn series_norm_pow(a: &ComplexMatrix, spec: &DistributionSpec, d: usize) -> Result<f64> {
    check_even(d)?;
    require_mgf(spec)?;
    check_hermitian(a)?;
    let kappas = float_cumulants(spec, d)?;
    let s = a.max_abs();
    if s == 0.0 {
        return Ok(0.0);
    }
    let p = hermitian_power_sums(&a.scale(&Complex64::new(1.0 / s, 0.0)), d)?;
    Ok(series_from_power_sums(&kappas, &p, d) * s.powi(d as i32))
}

/// Series-extraction route in exact arithmetic.
pub fn series_norm_pow_exact(
    a: &Matrix<BigRational>,
    spec: &DistributionSpec,
    d: usize,
) -> Result<BigRational> {
    check_even(d)?;
    require_mgf(spec)?;
    if !a.is_symmetric() {
        return Err(Error::NotHermitian(a.to_complex().hermitian_defect()));
    }
    let kappas = spec.cumulants(d)?;
    Ok(series_from_power_sums(&kappas, &trace_powers(a, d), d))
}

/// `[t^d] prod_i M(lambda_i t)` with `M` the truncated moment series.
/// Works for any family with `d` moments, pareto included.
pub fn mgf_product_norm_pow<T: Field>(lambdas: &[T], moments: &[T], d: usize) -> T {
    let mut m = vec![T::one()];
    for k in 1..=d {
        let inv_fact = T::from_rational(&BigRational::new(One::one(), factorial(k)));
        m.push(moments[k - 1].clone() * inv_fact);
    }
    let m = TruncatedSeries::from_coeffs(m, d);
    lambdas
        .iter()
        .fold(TruncatedSeries::one(d), |acc, l| &acc * &m.dilate(l))
        .coeff(d)
}

/// `|||diag(lambda)|||^d` from the multinomial expansion
/// `d! |||A|||^d = sum_{k_1+..+k_n=d} C(d; k) prod_i mu_{k_i} lambda_i^{k_i}`,
/// which needs only the moments and so covers pareto.
pub fn multinomial_norm_pow(
    lambdas: &[BigRational],
    spec: &DistributionSpec,
    d: usize,
) -> Result<BigRational> {
    spec.check_moments_exist(d)?;
    let mut mu = vec![BigRational::one()];
    mu.extend(spec.moments(d)?);
    let fact: Vec<BigRational> = (0..=d).map(|k| BigRational::from_integer(factorial(k))).collect();

    // depth-first over compositions, carrying prod mu_k lambda^k / k!
    fn walk(
        i: usize,
        left: usize,
        acc: BigRational,
        lambdas: &[BigRational],
        mu: &[BigRational],
        fact: &[BigRational],
        total: &mut BigRational,
    ) {
        if i + 1 == lambdas.len() {
            *total += acc * &mu[left] * lambdas[i].pow(left as i32) / &fact[left];
            return;
        }
        for k in 0..=left {
            let term = &acc * &mu[k] * lambdas[i].pow(k as i32) / &fact[k];
            walk(i + 1, left - k, term, lambdas, mu, fact, total);
        }
    }

    if lambdas.is_empty() {
        return Ok(if d == 0 { BigRational::one() } else { BigRational::zero() });
    }
    let mut total = BigRational::zero();
    walk(0, d, BigRational::one(), lambdas, &mu, &fact, &mut total);
    Ok(total)
}

/// `|||A|||^d` for the normal family from the closed form in `tr A` and the
/// Frobenius norm. Independent of the cumulant machinery.
pub fn normal_norm_pow(a: &ComplexMatrix, mu: f64, sigma: f64, d: usize) -> Result<f64> {
    check_even(d)?;
    check_hermitian(a)?;
    let tr = a.trace().re;
    let fro = a.frobenius();
    let h = d / 2;
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    Ok((0..=h)
        .map(|k| {
            (mu * tr).powi(2 * k as i32) / fact(2 * k) * (sigma * fro).powi((d - 2 * k) as i32)
                / (2f64.powi((h - k) as i32) * fact(h - k))
        })
        .sum())
}

/// Memoized traces of words in `Z` and `Z*`, keyed by canonical rotation.
pub struct WordTraces {
    z: ComplexMatrix,
    zs: ComplexMatrix,
    cache: HashMap<TraceWord, Complex64>,
}

impl WordTraces {
    pub fn new(z: &ComplexMatrix) -> Self {
        WordTraces {
            z: z.clone(),
            zs: z.adjoint(),
            cache: HashMap::new(),
        }
    }

    pub fn trace(&mut self, w: &TraceWord) -> Complex64 {
        let key = w.canonical();
        if let Some(v) = self.cache.get(&key) {
            return *v;
        }
        let mut m = ComplexMatrix::identity(self.z.n());
        for l in key.letters() {
            m = &m * match l {
                Letter::Z => &self.z,
                Letter::Adj => &self.zs,
            };
        }
        let v = m.trace();
        self.cache.insert(key, v);
        v
    }
}

fn t_pi_complex(cache: &mut WordTraces, p: &Partition) -> Complex64 {
    let d = p.degree();
    let mut sum = Complex64::zero();
    let mut count = 0u64;
    for mask in placements(d) {
        let prod = segment_words(p, mask)
            .iter()
            .fold(Complex64::one(), |acc, w| acc * cache.trace(w));
        sum += prod;
        count += 1;
    }
    sum / count as f64
}

fn realize(v: Complex64, scale: f64) -> Result<f64> {
    if v.im.abs() > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Degenerate(format!(
            "trace polynomial has imaginary residue {:e}",
            v.im
        )));
    }
    Ok(v.re)
}

/// `T_pi(Z)`: the average over all `C(d, d/2)` adjoint placements of the
/// product of traces of the segments cut by `pi`.
pub fn t_pi(z: &ComplexMatrix, p: &Partition) -> Result<f64> {
    check_even(p.degree())?;
    check_finite(z)?;
    let mut cache = WordTraces::new(z);
    let scale = ((z.n() as f64).sqrt() * z.frobenius()).powi(p.degree() as i32);
    realize(t_pi_complex(&mut cache, p), scale)
}

/// Trace-word route: `sum_{pi |- d} kappa_pi T_pi(Z) / y_pi` for any square
/// `Z`.
pub fn general_norm_pow(z: &ComplexMatrix, spec: &DistributionSpec, d: usize) -> Result<f64> {
    check_even(d)?;
    check_finite(z)?;
    let kappas = float_cumulants(spec, d)?;
    let s = z.max_abs();
    if s == 0.0 {
        return Ok(0.0);
    }
    let zn = z.scale(&Complex64::new(1.0 / s, 0.0));
    let mut cache = WordTraces::new(&zn);
    let mut total = Complex64::zero();
    let mut scale = 0.0;
    let unit = ((zn.n() as f64).sqrt() * zn.frobenius()).powi(d as i32);
    for p in enumerate_partitions(d) {
        let w = kappa_product(&p, &kappas) * inv_y::<f64>(&p);
        if w == 0.0 {
            continue;
        }
        total += t_pi_complex(&mut cache, &p) * w;
        scale += w.abs() * unit;
    }
    Ok(realize(total, scale)? * s.powi(d as i32))
}

/// `|||Z|||_{X,d}`. Hermitian input goes through the partition sum, anything
/// else through the trace-word sum.
pub fn norm(z: &ComplexMatrix, spec: &DistributionSpec, d: usize) -> Result<f64> {
    check_finite(z)?;
    let v = if z.is_hermitian(z.default_hermitian_tol()) {
        hermitian_norm_pow(z, spec, d)?
    } else {
        general_norm_pow(z, spec, d)?
    };
    Ok(v.max(0.0).powf(1.0 / d as f64))
}

/// Averages `|||e^{it} Z + e^{-it} Z*|||^d` over `points` equally spaced
/// angles and divides by `C(d, d/2)`. The trapezoid rule is exact here once
/// `points > d`. Returns `(quadrature, trace-word value)`.
pub fn circle_extension_check(
    z: &ComplexMatrix,
    spec: &DistributionSpec,
    d: usize,
    points: usize,
) -> Result<(f64, f64)> {
    check_even(d)?;
    if points < d + 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least {} quadrature points for degree {d}, got {points}",
            d + 1
        )));
    }
    let zs = z.adjoint();
    let mut sum = 0.0;
    for k in 0..points {
        let t = 2.0 * PI * k as f64 / points as f64;
        let e = Complex64::from_polar(1.0, t);
        let h = &z.scale(&e) + &zs.scale(&e.conj());
        sum += hermitian_norm_pow(&h, spec, d)?;
    }
    let c = rational_to_f64(&BigRational::from_integer(binomial(d, d / 2)));
    let quad = sum / (points as f64 * c);
    Ok((quad, general_norm_pow(z, spec, d)?))
}
