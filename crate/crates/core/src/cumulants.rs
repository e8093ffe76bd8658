//! The distribution catalog: parameters, moments, cumulants, and the
//! moment/cumulant recursion.
//!
//! Parameters are held as exact rationals (decimal literals such as `0.3`
//! are exact), so every family whose moments are rational functions of its
//! parameters yields exact cumulants. Floating values are derived from those.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::scalar::{binomial, factorial, int, parse_rational, rational_to_f64, Ring};
use crate::symbolic::ParamPoly;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Shape `alpha`, scale `beta`; density `t^{alpha-1} e^{-t/beta}` on `t > 0`.
    Gamma { alpha: BigRational, beta: BigRational },
    /// Gamma with `alpha = 1`.
    Exponential { beta: BigRational },
    Normal { mu: BigRational, sigma: BigRational },
    Uniform { a: BigRational, b: BigRational },
    /// Density `e^{-|x-mu|/beta} / (2 beta)`.
    Laplace { mu: BigRational, beta: BigRational },
    /// `P(X = 1) = q`, `P(X = 0) = 1 - q`.
    Bernoulli { q: BigRational },
    /// `(atom, probability)` pairs.
    FiniteDiscrete { atoms: Vec<(BigRational, BigRational)> },
    Rademacher,
    Poisson { alpha: BigRational },
    /// Density `alpha / x^{alpha+1}` on `x >= 1`; no moment generating function.
    Pareto { alpha: BigRational },
}

/// A validated member of the distribution catalog.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionSpec {
    family: Family,
}

/// Cumulants `kappa_1..=kappa_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulantVector<T> {
    kappas: Vec<T>,
}

impl<T: Clone> CumulantVector<T> {
    pub fn new(kappas: Vec<T>) -> Self {
        CumulantVector { kappas }
    }

    pub fn degree(&self) -> usize {
        self.kappas.len()
    }

    /// `kappa_r` for `1 <= r <= degree`.
    pub fn kappa(&self, r: usize) -> &T {
        &self.kappas[r - 1]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.kappas
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> CumulantVector<U> {
        CumulantVector {
            kappas: self.kappas.iter().map(f).collect(),
        }
    }
}

impl CumulantVector<BigRational> {
    pub fn to_f64(&self) -> CumulantVector<f64> {
        self.map(rational_to_f64)
    }
}

/// Moments `mu_1..=mu_d` (with `mu_0 = 1` implicit) to cumulants, by
/// `mu_r = sum_{l=0}^{r-1} C(r-1, l) mu_l kappa_{r-l}`.
pub fn moments_to_cumulants<T: Ring>(mu: &[T]) -> CumulantVector<T> {
    let moment = |l: usize| if l == 0 { T::one() } else { mu[l - 1].clone() };
    let mut kappas: Vec<T> = Vec::with_capacity(mu.len());
    for r in 1..=mu.len() {
        let mut k = mu[r - 1].clone();
        for l in 1..r {
            let c = T::from_rational(&BigRational::from_integer(binomial(r - 1, l)));
            k = k - c * moment(l) * kappas[r - l - 1].clone();
        }
        kappas.push(k);
    }
    CumulantVector { kappas }
}

/// Inverse of [`moments_to_cumulants`].
pub fn cumulants_to_moments<T: Ring>(k: &CumulantVector<T>) -> Vec<T> {
    let mut mu: Vec<T> = Vec::with_capacity(k.degree());
    for r in 1..=k.degree() {
        let mut m = T::zero();
        for l in 0..r {
            let c = T::from_rational(&BigRational::from_integer(binomial(r - 1, l)));
            let ml = if l == 0 { T::one() } else { mu[l - 1].clone() };
            m = m + c * ml * k.kappa(r - l).clone();
        }
        mu.push(m);
    }
    mu
}

/// `kappa_pi = prod_j kappa_{pi_j}`.
pub fn kappa_product<T: Ring>(p: &Partition, k: &CumulantVector<T>) -> T {
    assert!(
        p.largest() <= k.degree(),
        "partition {p} needs cumulants up to order {}, have {}",
        p.largest(),
        k.degree()
    );
    p.parts()
        .iter()
        .fold(T::one(), |acc, &i| acc * k.kappa(i).clone())
}

/// Bernoulli numbers `B_0..=B_m` with `B_1 = -1/2`, from
/// `sum_{k=0}^{j} C(j+1, k) B_k = 0`.
pub fn bernoulli_numbers(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for j in 1..=m {
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial(j + 1, k)) * bk;
        }
        b.push(-acc / BigRational::from_integer(binomial(j + 1, j)));
    }
    b
}

/// Stirling numbers of the second kind `S(k, j)` for `0 <= j <= k`.
fn stirling2(k: usize) -> Vec<BigRational> {
    let mut row = vec![BigRational::one()];
    for n in 1..=k {
        let mut next = vec![BigRational::zero(); n + 1];
        for j in 1..=n {
            let prev = row.get(j).cloned().unwrap_or_else(BigRational::zero);
            next[j] = int(j as i64) * prev + row[j - 1].clone();
        }
        row = next;
    }
    row
}

fn frac(n: num::BigInt) -> BigRational {
    BigRational::from_integer(n)
}

impl DistributionSpec {
    /// Validates parameter ranges and nondegeneracy.
    pub fn new(family: Family) -> Result<Self> {
        let positive = |name: &str, v: &BigRational| {
            if v.is_positive() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")))
            }
        };
        match &family {
            Family::Gamma { alpha, beta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)?;
            }
            Family::Exponential { beta } => positive("beta", beta)?,
            Family::Normal { sigma, .. } => positive("sigma", sigma)?,
            Family::Uniform { a, b } => {
                if a >= b {
                    return Err(Error::InvalidParameter(format!(
                        "uniform needs a < b, got a = {a}, b = {b}"
                    )));
                }
            }
            Family::Laplace { beta, .. } => positive("beta", beta)?,
            Family::Bernoulli { q } => {
                if !(q.is_positive() && *q < BigRational::one()) {
                    return Err(Error::InvalidParameter(format!("bernoulli needs 0 < q < 1, got {q}")));
                }
            }
            Family::FiniteDiscrete { atoms } => {
                let mut total = BigRational::zero();
                for (_, p) in atoms {
                    positive("probability", p)?;
                    total += p;
                }
                if !total.is_one() {
                    return Err(Error::InvalidParameter(format!(
                        "finite_discrete probabilities sum to {total}, not 1"
                    )));
                }
                let first = atoms.first().map(|(a, _)| a);
                if atoms.iter().all(|(a, _)| Some(a) == first) {
                    return Err(Error::Degenerate(
                        "finite_discrete needs at least two distinct atoms".into(),
                    ));
                }
            }
            Family::Rademacher => {}
            Family::Poisson { alpha } => positive("alpha", alpha)?,
            Family::Pareto { alpha } => positive("alpha", alpha)?,
        }
        Ok(DistributionSpec { family })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            Family::Gamma { .. } => "gamma",
            Family::Exponential { .. } => "exponential",
            Family::Normal { .. } => "normal",
            Family::Uniform { .. } => "uniform",
            Family::Laplace { .. } => "laplace",
            Family::Bernoulli { .. } => "bernoulli",
            Family::FiniteDiscrete { .. } => "finite_discrete",
            Family::Rademacher => "rademacher",
            Family::Poisson { .. } => "poisson",
            Family::Pareto { .. } => "pareto",
        }
    }

    pub fn has_mgf(&self) -> bool {
        !matches!(self.family, Family::Pareto { .. })
    }

    /// Fails when moments up to order `d` do not exist (pareto with
    /// `d >= alpha`).
    pub fn check_moments_exist(&self, d: usize) -> Result<()> {
        if let Family::Pareto { alpha } = &self.family {
            if int(d as i64) >= *alpha {
                return Err(Error::MomentExistence {
                    order: d,
                    alpha: alpha.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Exact moments `mu_1..=mu_d`.
    pub fn moments(&self, d: usize) -> Result<Vec<BigRational>> {
        self.moments_in(d, &|_, v| v.clone())
    }

    /// Exact cumulants `kappa_1..=kappa_d`: closed forms where the family has
    /// one, otherwise the moment recursion.
    pub fn cumulants(&self, d: usize) -> Result<CumulantVector<BigRational>> {
        let k = self.cumulants_in(d, &|_, v| v.clone())?;
        if d >= 2 && !k.kappa(2).is_positive() {
            return Err(Error::Degenerate(format!("variance {} is not positive", k.kappa(2))));
        }
        Ok(k)
    }

    /// Cumulants with every named parameter kept as a symbol. Pareto moments
    /// are not polynomial in `alpha`, so pareto stays numeric.
    pub fn symbolic_cumulants(&self, d: usize) -> Result<CumulantVector<ParamPoly>> {
        self.cumulants_in(d, &|name, _| ParamPoly::symbol(name))
    }

    /// Moments evaluated in an arbitrary ring; `param` maps a parameter
    /// `(name, value)` to its ring image.
    pub fn moments_in<R: Ring>(
        &self,
        d: usize,
        param: &dyn Fn(&str, &BigRational) -> R,
    ) -> Result<Vec<R>> {
        self.check_moments_exist(d)?;
        let c = |n: num::BigInt| R::from_rational(&frac(n));
        let mut out = Vec::with_capacity(d);
        match &self.family {
            Family::Gamma { alpha, beta } => {
                let (a, b) = (param("alpha", alpha), param("beta", beta));
                let mut rising = R::one();
                for k in 1..=d {
                    rising = rising * (a.clone() + R::from_i64(k as i64 - 1));
                    out.push(rising.clone() * b.pow(k));
                }
            }
            Family::Exponential { beta } => {
                let b = param("beta", beta);
                for k in 1..=d {
                    out.push(c(factorial(k)) * b.pow(k));
                }
            }
            Family::Normal { mu, sigma } => {
                let (m, s) = (param("mu", mu), param("sigma", sigma));
                for k in 1..=d {
                    let mut acc = R::zero();
                    for j in 0..=k / 2 {
                        // (2j-1)!! = (2j)! / (2^j j!)
                        let dfact = factorial(2 * j) / (num::pow(num::BigInt::from(2), j) * factorial(j));
                        acc = acc + c(binomial(k, 2 * j) * dfact) * m.pow(k - 2 * j) * s.pow(2 * j);
                    }
                    out.push(acc);
                }
            }
            Family::Uniform { a, b } => {
                let (a, b) = (param("a", a), param("b", b));
                for k in 1..=d {
                    let mut h = R::zero();
                    for j in 0..=k {
                        h = h + a.pow(j) * b.pow(k - j);
                    }
                    out.push(h * R::from_rational(&crate::scalar::rat(1, k as i64 + 1)));
                }
            }
            Family::Laplace { mu, beta } => {
                let (m, b) = (param("mu", mu), param("beta", beta));
                for k in 1..=d {
                    let mut acc = R::zero();
                    for j in (0..=k).step_by(2) {
                        acc = acc + c(binomial(k, j) * factorial(j)) * m.pow(k - j) * b.pow(j);
                    }
                    out.push(acc);
                }
            }
            Family::Bernoulli { q } => {
                let q = param("q", q);
                out.resize(d, q);
            }
            Family::FiniteDiscrete { atoms } => {
                let atoms: Vec<(R, R)> = atoms
                    .iter()
                    .enumerate()
                    .map(|(i, (a, p))| {
                        (param(&format!("a{}", i + 1), a), param(&format!("q{}", i + 1), p))
                    })
                    .collect();
                for k in 1..=d {
                    let mut acc = R::zero();
                    for (a, p) in &atoms {
                        acc = acc + a.pow(k) * p.clone();
                    }
                    out.push(acc);
                }
            }
            Family::Rademacher => {
                for k in 1..=d {
                    out.push(if k % 2 == 0 { R::one() } else { R::zero() });
                }
            }
            Family::Poisson { alpha } => {
                let a = param("alpha", alpha);
                for k in 1..=d {
                    let s = stirling2(k);
                    let mut acc = R::zero();
                    for (j, sj) in s.iter().enumerate().skip(1) {
                        acc = acc + R::from_rational(sj) * a.pow(j);
                    }
                    out.push(acc);
                }
            }
            Family::Pareto { alpha } => {
                for k in 1..=d {
                    out.push(R::from_rational(&(alpha.clone() / (alpha.clone() - int(k as i64)))));
                }
            }
        }
        Ok(out)
    }

    pub fn cumulants_in<R: Ring>(
        &self,
        d: usize,
        param: &dyn Fn(&str, &BigRational) -> R,
    ) -> Result<CumulantVector<R>> {
        self.check_moments_exist(d)?;
        let c = |n: num::BigInt| R::from_rational(&frac(n));
        let kappas: Vec<R> = match &self.family {
            Family::Gamma { alpha, beta } => {
                let (a, b) = (param("alpha", alpha), param("beta", beta));
                (1..=d).map(|r| c(factorial(r - 1)) * a.clone() * b.pow(r)).collect()
            }
            Family::Exponential { beta } => {
                let b = param("beta", beta);
                (1..=d).map(|r| c(factorial(r - 1)) * b.pow(r)).collect()
            }
            Family::Normal { mu, sigma } => {
                let (m, s) = (param("mu", mu), param("sigma", sigma));
                (1..=d)
                    .map(|r| match r {
                        1 => m.clone(),
                        2 => s.pow(2),
                        _ => R::zero(),
                    })
                    .collect()
            }
            Family::Uniform { a, b } => {
                let (a, b) = (param("a", a), param("b", b));
                let bern = bernoulli_numbers(d);
                let width = b.clone() - a.clone();
                (1..=d)
                    .map(|r| {
                        if r == 1 {
                            (a.clone() + b.clone()) * R::from_rational(&crate::scalar::rat(1, 2))
                        } else if r % 2 == 0 {
                            R::from_rational(&(bern[r].clone() / int(r as i64))) * width.pow(r)
                        } else {
                            R::zero()
                        }
                    })
                    .collect()
            }
            Family::Laplace { mu, beta } => {
                let (m, b) = (param("mu", mu), param("beta", beta));
                (1..=d)
                    .map(|r| {
                        if r == 1 {
                            m.clone()
                        } else if r % 2 == 0 {
                            c(factorial(r - 1) * 2) * b.pow(r)
                        } else {
                            R::zero()
                        }
                    })
                    .collect()
            }
            Family::Poisson { alpha } => {
                let a = param("alpha", alpha);
                vec![a; d]
            }
            Family::Bernoulli { .. }
            | Family::FiniteDiscrete { .. }
            | Family::Rademacher
            | Family::Pareto { .. } => {
                return Ok(moments_to_cumulants(&self.moments_in(d, param)?));
            }
        };
        Ok(CumulantVector { kappas })
    }

    /// Parameters as floats, for sampling.
    pub fn param_f64(&self) -> BTreeMap<&'static str, f64> {
        let mut m = BTreeMap::new();
        let f = rational_to_f64;
        match &self.family {
            Family::Gamma { alpha, beta } => {
                m.insert("alpha", f(alpha));
                m.insert("beta", f(beta));
            }
            Family::Exponential { beta } => {
                m.insert("beta", f(beta));
            }
            Family::Normal { mu, sigma } => {
                m.insert("mu", f(mu));
                m.insert("sigma", f(sigma));
            }
            Family::Uniform { a, b } => {
                m.insert("a", f(a));
                m.insert("b", f(b));
            }
            Family::Laplace { mu, beta } => {
                m.insert("mu", f(mu));
                m.insert("beta", f(beta));
            }
            Family::Bernoulli { q } => {
                m.insert("q", f(q));
            }
            Family::Poisson { alpha } | Family::Pareto { alpha } => {
                m.insert("alpha", f(alpha));
            }
            Family::FiniteDiscrete { .. } | Family::Rademacher => {}
        }
        m
    }

    /// The catalog with one line of parameter constraints per family.
    pub fn catalog_help() -> &'static str {
        "gamma:alpha=A,beta=B          alpha > 0, beta > 0 (shape, scale)\n\
         exponential[:beta=B]          beta > 0, default 1\n\
         normal[:mu=M,sigma=S]         sigma > 0, defaults mu = 0, sigma = 1\n\
         uniform:a=A,b=B               a < b\n\
         laplace[:mu=M,beta=B]         beta > 0, defaults mu = 0, beta = 1\n\
         bernoulli:q=Q                 0 < q < 1\n\
         finite_discrete:atom=V@P,...  P > 0 summing to 1, at least two distinct V\n\
         rademacher                    +1 or -1 with probability 1/2\n\
         poisson:alpha=A               alpha > 0\n\
         pareto:alpha=A                alpha > 0; degree d requires d < alpha\n\
         Values accept integers, decimals, and fractions p/q."
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Parses `family:key=value,key=value`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params: BTreeMap<String, BigRational> = BTreeMap::new();
        let mut atoms = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{item}'")))?;
            let key = key.trim();
            if key == "atom" {
                let (v, p) = value
                    .split_once('@')
                    .ok_or_else(|| Error::Parse(format!("expected atom=value@probability, got '{item}'")))?;
                atoms.push((parse_rational(v)?, parse_rational(p)?));
                continue;
            }
            if params.insert(key.to_string(), parse_rational(value)?).is_some() {
                return Err(Error::Parse(format!("duplicate parameter '{key}'")));
            }
        }
        let mut take = |key: &str, default: Option<BigRational>| -> Result<BigRational> {
            params
                .remove(key)
                .or(default)
                .ok_or_else(|| Error::Parse(format!("{name} requires parameter '{key}'")))
        };
        let family = match name.to_ascii_lowercase().as_str() {
            "gamma" => Family::Gamma {
                alpha: take("alpha", None)?,
                beta: take("beta", None)?,
            },
            "exponential" => Family::Exponential {
                beta: take("beta", Some(int(1)))?,
            },
            "normal" => Family::Normal {
                mu: take("mu", Some(int(0)))?,
                sigma: take("sigma", Some(int(1)))?,
            },
            "uniform" => Family::Uniform {
                a: take("a", None)?,
                b: take("b", None)?,
            },
            "laplace" => Family::Laplace {
                mu: take("mu", Some(int(0)))?,
                beta: take("beta", Some(int(1)))?,
            },
            "bernoulli" => Family::Bernoulli { q: take("q", None)? },
            "finite_discrete" => {
                if atoms.is_empty() {
                    return Err(Error::Parse("finite_discrete requires atom=value@probability entries".into()));
                }
                Family::FiniteDiscrete {
                    atoms: std::mem::take(&mut atoms),
                }
            }
            "rademacher" => Family::Rademacher,
            "poisson" => Family::Poisson {
                alpha: take("alpha", None)?,
            },
            "pareto" => Family::Pareto {
                alpha: take("alpha", None)?,
            },
            other => return Err(Error::Parse(format!("unknown distribution family '{other}'"))),
        };
        if let Some(extra) = params.keys().next() {
            return Err(Error::Parse(format!("unknown parameter '{extra}' for {name}")));
        }
        if !atoms.is_empty() {
            return Err(Error::Parse(format!("atom entries are only valid for finite_discrete")));
        }
        DistributionSpec::new(family)
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Gamma { alpha, beta } => write!(f, "gamma:alpha={alpha},beta={beta}"),
            Family::Exponential { beta } => write!(f, "exponential:beta={beta}"),
            Family::Normal { mu, sigma } => write!(f, "normal:mu={mu},sigma={sigma}"),
            Family::Uniform { a, b } => write!(f, "uniform:a={a},b={b}"),
            Family::Laplace { mu, beta } => write!(f, "laplace:mu={mu},beta={beta}"),
            Family::Bernoulli { q } => write!(f, "bernoulli:q={q}"),
            Family::FiniteDiscrete { atoms } => {
                write!(f, "finite_discrete:")?;
                for (i, (a, p)) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "atom={a}@{p}")?;
                }
                Ok(())
            }
            Family::Rademacher => write!(f, "rademacher"),
            Family::Poisson { alpha } => write!(f, "poisson:alpha={alpha}"),
            Family::Pareto { alpha } => write!(f, "pareto:alpha={alpha}"),
        }
    }
}

/// One representative of every family, used by the property suites. Pareto
/// gets `alpha = 9` so that degrees up to 8 are admissible.
pub fn catalog_samples() -> Vec<DistributionSpec> {
    [
        "gamma:alpha=3/2,beta=2",
        "exponential",
        "normal:mu=1/2,sigma=1",
        "uniform:a=-1,b=2",
        "laplace:mu=1/2,beta=1",
        "bernoulli:q=1/3",
        "finite_discrete:atom=-1@1/4,atom=0@1/4,atom=2@1/2",
        "rademacher",
        "poisson:alpha=2",
        "pareto:alpha=9",
    ]
    .iter()
    .map(|s| s.parse().expect("catalog entry parses"))
    .collect()
}
