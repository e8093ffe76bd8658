//! Dense square matrices, the matrix file format, Hermitian eigenvalues, and
//! majorization.

use std::ops::{Add, Mul, Sub};

use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, rational_to_f64};

/// Row-major `n x n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    entries: Vec<T>,
}

pub type ComplexMatrix = Matrix<Complex64>;

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        Ok(Matrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Matrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            entries: vec![T::zero(); n * n],
        }
    }

    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        Matrix::from_fn(n, |i, j| if i == j { values[i].clone() } else { T::zero() })
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T: Clone + Zero + Mul<Output = T>> Matrix<T> {
    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }
}

impl<'a, T: Clone + Zero + Mul<Output = T>> Mul for &'a Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in product");
        let n = self.n;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = out[i * n + j].clone() + a.clone() * rhs.entries[k * n + j].clone();
                }
            }
        }
        Matrix { n, entries: out }
    }
}

impl<'a, T: Clone + Add<Output = T>> Add for &'a Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sum");
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<'a, T: Clone + Sub<Output = T>> Sub for &'a Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in difference");
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

/// `(tr A, tr A^2, .., tr A^d)` by repeated multiplication.
pub fn trace_powers<T: Clone + Zero + Mul<Output = T>>(a: &Matrix<T>, d: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(d);
    let mut power = a.clone();
    for k in 1..=d {
        out.push(power.trace());
        if k < d {
            power = &power * a;
        }
    }
    out
}

impl ComplexMatrix {
    pub fn from_real(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        Ok(m.map(|&x| Complex64::new(x, 0.0)))
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Matrix::diag(&v)
    }

    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entrywise `|Z - Z*|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// `1e-12 (1 + max |entry|)`.
    pub fn default_hermitian_tol(&self) -> f64 {
        1e-12 * (1.0 + self.max_abs())
    }

    /// Parses `{"n": int, "re": [[..]], "im": [[..]]}`. Entries may be JSON
    /// numbers or strings holding fractions `p/q`. `im` may be omitted for a
    /// real matrix.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let (re, im) = parse_matrix_file(s)?;
        let n = re.len();
        Ok(Matrix::from_fn(n, |i, j| {
            Complex64::new(rational_to_f64(&re[i][j]), rational_to_f64(&im[i][j]))
        }))
    }

    pub fn to_json(&self) -> Value {
        let part = |f: fn(&Complex64) -> f64| -> Value {
            (0..self.n)
                .map(|i| (0..self.n).map(|j| f(self.get(i, j))).collect::<Vec<f64>>())
                .collect::<Vec<_>>()
                .into()
        };
        serde_json::json!({"n": self.n, "re": part(|z| z.re), "im": part(|z| z.im)})
    }
}

impl Matrix<BigRational> {
    /// The exact real matrix of a matrix file; fails if any imaginary part is
    /// nonzero.
    pub fn from_json_str_exact(s: &str) -> Result<Self> {
        let (re, im) = parse_matrix_file(s)?;
        if im.iter().flatten().any(|x| !x.is_zero()) {
            return Err(Error::Parse("exact mode requires a real matrix".into()));
        }
        Matrix::from_rows(re)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        self.map(|x| Complex64::new(rational_to_f64(x), 0.0))
    }
}

type Rows = Vec<Vec<BigRational>>;

fn parse_matrix_file(s: &str) -> Result<(Rows, Rows)> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("matrix JSON needs a nonnegative integer 'n'".into()))? as usize;
    let grid = |key: &str, required: bool| -> Result<Rows> {
        let Some(rows) = v.get(key) else {
            if required {
                return Err(Error::Parse(format!("matrix JSON is missing '{key}'")));
            }
            return Ok(vec![vec![BigRational::zero(); n]; n]);
        };
        let rows = rows
            .as_array()
            .ok_or_else(|| Error::Parse(format!("'{key}' must be an array of rows")))?;
        if rows.len() != n {
            return Err(Error::Parse(format!("'{key}' has {} rows, expected {n}", rows.len())));
        }
        rows.iter()
            .map(|row| {
                let row = row
                    .as_array()
                    .ok_or_else(|| Error::Parse(format!("'{key}' rows must be arrays")))?;
                if row.len() != n {
                    return Err(Error::Parse(format!(
                        "'{key}' row has {} entries, expected {n} (matrix must be square)",
                        row.len()
                    )));
                }
                row.iter().map(parse_entry).collect()
            })
            .collect()
    };
    Ok((grid("re", true)?, grid("im", false)?))
}

fn parse_entry(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(x) => parse_rational(&x.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("matrix entry {other} is not a number"))),
    }
}

/// Hermitian power sums `tr A^k` with the imaginary rounding residue
/// dropped. Fails if a residue exceeds `1e-10` of the trace scale.
pub fn hermitian_power_sums(a: &ComplexMatrix, d: usize) -> Result<Vec<f64>> {
    let traces = trace_powers(a, d);
    let scale = a.frobenius().max(1.0);
    let mut out = Vec::with_capacity(d);
    for (k, t) in traces.iter().enumerate() {
        let bound = 1e-10 * scale.powi(k as i32 + 1) * (a.n() as f64).max(1.0);
        if t.im.abs() > bound {
            return Err(Error::NotHermitian(a.hermitian_defect()));
        }
        out.push(t.re);
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, nonincreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueVector(Vec<f64>);

impl EigenvalueVector {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        EigenvalueVector(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Cyclic Jacobi iteration for Hermitian matrices. Each rotation first
/// rotates the phase of `a_pq` to make it real, then applies a real Givens
/// rotation that annihilates it. Stops when the off-diagonal Frobenius mass
/// drops below `1e-12 ||A||_F`.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<EigenvalueVector> {
    if !a.is_hermitian(a.default_hermitian_tol()) {
        return Err(Error::NotHermitian(a.hermitian_defect()));
    }
    let n = a.n();
    let mut m: Vec<Complex64> = a.entries().to_vec();
    let fro = a.frobenius();
    let target = 1e-12 * fro;
    let off = |m: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    for _sweep in 0..100 {
        if off(&m) <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                let r = apq.norm();
                if r == 0.0 || r <= 1e-300 {
                    continue;
                }
                let u = apq / r;
                let app = m[p * n + p].re;
                let aqq = m[q * n + q].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ubar = u.conj();
                // columns: A <- A J
                for i in 0..n {
                    let xp = m[i * n + p];
                    let xq = m[i * n + q];
                    m[i * n + p] = xp * c - xq * ubar * s;
                    m[i * n + q] = xp * s + xq * ubar * c;
                }
                // rows: A <- J* A
                for j in 0..n {
                    let xp = m[p * n + j];
                    let xq = m[q * n + j];
                    m[p * n + j] = xp * c - xq * u * s;
                    m[q * n + j] = xp * s + xq * u * c;
                }
                m[p * n + q] = Complex64::zero();
                m[q * n + p] = Complex64::zero();
            }
        }
    }
    Ok(EigenvalueVector::new((0..n).map(|i| m[i * n + i].re).collect()))
}

/// `x` is majorized by `y` (`x ≺ y`): equal totals, and every partial sum of
/// the nonincreasing rearrangement of `x` is at most that of `y`.
/// Comparisons allow `1e-12 (1 + max |entry|)` slack.
pub fn is_majorized(x: &[f64], y: &[f64]) -> Result<bool> {
    check_lengths(x.len(), y.len())?;
    let scale = x.iter().chain(y).fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * (1.0 + scale) * (x.len().max(1) as f64);
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (xs, ys) = (sorted(x), sorted(y));
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        if sx > sy + tol {
            return Ok(false);
        }
    }
    Ok((sx - sy).abs() <= tol)
}

/// Exact variant of [`is_majorized`].
pub fn is_majorized_exact(x: &[BigRational], y: &[BigRational]) -> Result<bool> {
    check_lengths(x.len(), y.len())?;
    let sorted = |v: &[BigRational]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.cmp(a));
        v
    };
    let (xs, ys) = (sorted(x), sorted(y));
    let (mut sx, mut sy) = (BigRational::zero(), BigRational::zero());
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        if sx > sy {
            return Ok(false);
        }
    }
    Ok(sx == sy)
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("vectors of length {a} and {b}")));
    }
    Ok(())
}
