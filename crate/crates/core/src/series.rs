//! Power series truncated after a fixed degree.

use std::ops::{Add, Mul, Sub};

use crate::scalar::{Field, Ring};

/// Coefficients `c_0..=c_d` of `t^0..=t^d`; everything above `t^d` is
/// discarded by every operation.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> TruncatedSeries<T> {
    pub fn zero(degree: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![T::zero(); degree + 1],
        }
    }

    pub fn one(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = T::one();
        s
    }

    /// Pads or truncates `coeffs` to exactly `degree + 1` entries.
    pub fn from_coeffs(mut coeffs: Vec<T>, degree: usize) -> Self {
        coeffs.resize(degree + 1, T::zero());
        TruncatedSeries { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `[t^k]` of the series; zero beyond the truncation degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Substitutes `t -> c t`.
    pub fn dilate(&self, c: &T) -> Self {
        let mut power = T::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            coeffs.push(x.clone() * power.clone());
            power = power * c.clone();
        }
        TruncatedSeries { coeffs }
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one(self.degree());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    fn check_degree(&self, other: &Self) {
        assert_eq!(
            self.degree(),
            other.degree(),
            "series of different truncation degree"
        );
    }
}

impl<T: Field> TruncatedSeries<T> {
    /// `exp(f)` for a series with zero constant term, via `k g_k =
    /// sum_{j=1}^k j f_j g_{k-j}`.
    ///
    /// Panics if the constant term is nonzero: its exponential is not in `T`.
    pub fn exp(&self) -> Self {
        assert!(
            self.coeffs[0] == T::zero(),
            "exp of a series with nonzero constant term"
        );
        let d = self.degree();
        let mut g = vec![T::zero(); d + 1];
        g[0] = T::one();
        for k in 1..=d {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + T::from_i64(j as i64) * self.coeffs[j].clone() * g[k - j].clone();
            }
            g[k] = acc / T::from_i64(k as i64);
        }
        TruncatedSeries { coeffs: g }
    }

    /// `log(f)` for a series with constant term one, via `k l_k = k f_k -
    /// sum_{j=1}^{k-1} j l_j f_{k-j}`.
    pub fn log(&self) -> Self {
        assert!(
            self.coeffs[0] == T::one(),
            "log of a series with constant term other than 1"
        );
        let d = self.degree();
        let mut l = vec![T::zero(); d + 1];
        for k in 1..=d {
            let mut acc = T::from_i64(k as i64) * self.coeffs[k].clone();
            for j in 1..k {
                acc = acc - T::from_i64(j as i64) * l[j].clone() * self.coeffs[k - j].clone();
            }
            l[k] = acc / T::from_i64(k as i64);
        }
        TruncatedSeries { coeffs: l }
    }
}

impl<T: Ring> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn add(self, rhs: Self) -> TruncatedSeries<T> {
        self.check_degree(rhs);
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Ring> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn sub(self, rhs: Self) -> TruncatedSeries<T> {
        self.check_degree(rhs);
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Ring> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    fn mul(self, rhs: Self) -> TruncatedSeries<T> {
        self.check_degree(rhs);
        let d = self.degree();
        let mut out = vec![T::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == T::zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=d - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { coeffs: out }
    }
}
