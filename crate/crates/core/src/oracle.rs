//! Monte Carlo estimation of `E|<X, lambda>|^d / d!` and the Khintchine
//! comparison with the Frobenius norm.
//!
//! Sampling is split into fixed chunks of `CHUNK` draws. Chunk `c` uses the
//! ChaCha8 stream `c` keyed by the seed, so the draws do not depend on how
//! chunks are scheduled across threads. Per-chunk statistics are merged by a
//! pairwise tree in chunk order, which makes estimates bit-identical for a
//! given seed and sample count on any number of threads.

use num::rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::cumulants::{DistributionSpec, Family};
use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigenvalues, ComplexMatrix};
use crate::norm::{general_norm_pow, hermitian_norm_pow};
use crate::scalar::rational_to_f64;

/// Draws per independent stream.
pub const CHUNK: usize = 1 << 14;

/// Smallest accepted sample count.
pub const MIN_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// The `d`-th root of an estimate of a `d`-th power, with the standard
    /// error propagated to first order.
    pub fn root(&self, d: usize) -> McEstimate {
        let inv = 1.0 / d as f64;
        let value = self.value.powf(inv);
        let stderr = if self.value > 0.0 {
            inv * value / self.value * self.stderr
        } else {
            0.0
        };
        McEstimate { value, stderr, ..*self }
    }
}

/// Prepared sampler for one catalog member.
#[derive(Clone, Debug)]
pub struct Sampler {
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    Gamma(Gamma<f64>),
    Normal(Normal<f64>),
    Uniform { a: f64, b: f64 },
    Laplace { mu: f64, beta: f64 },
    Bernoulli(f64),
    Discrete { cumulative: Vec<f64>, atoms: Vec<f64> },
    Rademacher,
    Poisson(Poisson<f64>),
    Pareto(f64),
}

impl Sampler {
    pub fn new(spec: &DistributionSpec) -> Result<Self> {
        let f = rational_to_f64;
        let bad = |e: &dyn std::fmt::Display| Error::InvalidParameter(e.to_string());
        let kind = match spec.family() {
            Family::Gamma { alpha, beta } => Kind::Gamma(Gamma::new(f(alpha), f(beta)).map_err(|e| bad(&e))?),
            Family::Exponential { beta } => Kind::Gamma(Gamma::new(1.0, f(beta)).map_err(|e| bad(&e))?),
            Family::Normal { mu, sigma } => Kind::Normal(Normal::new(f(mu), f(sigma)).map_err(|e| bad(&e))?),
            Family::Uniform { a, b } => Kind::Uniform { a: f(a), b: f(b) },
            Family::Laplace { mu, beta } => Kind::Laplace {
                mu: f(mu),
                beta: f(beta),
            },
            Family::Bernoulli { q } => Kind::Bernoulli(f(q)),
            Family::FiniteDiscrete { atoms } => {
                let mut acc = BigRational::from_integer(0.into());
                let mut cumulative = Vec::with_capacity(atoms.len());
                for (_, p) in atoms {
                    acc += p;
                    cumulative.push(f(&acc));
                }
                Kind::Discrete {
                    cumulative,
                    atoms: atoms.iter().map(|(v, _)| f(v)).collect(),
                }
            }
            Family::Rademacher => Kind::Rademacher,
            Family::Poisson { alpha } => Kind::Poisson(Poisson::new(f(alpha)).map_err(|e| bad(&e))?),
            Family::Pareto { alpha } => Kind::Pareto(f(alpha)),
        };
        Ok(Sampler { kind })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            Kind::Gamma(g) => g.sample(rng),
            Kind::Normal(n) => n.sample(rng),
            Kind::Uniform { a, b } => a + (b - a) * rng.random::<f64>(),
            Kind::Laplace { mu, beta } => loop {
                // inversion on (-1/2, 1/2)
                let u = rng.random::<f64>() - 0.5;
                if u != -0.5 {
                    break mu - beta * u.signum() * (1.0 - 2.0 * u.abs()).ln();
                }
            },
            Kind::Bernoulli(q) => {
                if rng.random::<f64>() < *q {
                    1.0
                } else {
                    0.0
                }
            }
            Kind::Discrete { cumulative, atoms } => {
                let u = rng.random::<f64>();
                let i = cumulative.partition_point(|&c| c <= u).min(atoms.len() - 1);
                atoms[i]
            }
            Kind::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Kind::Poisson(p) => p.sample(rng),
            // inversion: U in (0, 1]
            Kind::Pareto(alpha) => (1.0 - rng.random::<f64>()).powf(-1.0 / alpha),
        }
    }
}

/// One draw from `spec`. Builds a [`Sampler`] each call; use the sampler
/// directly for bulk draws.
pub fn sample<R: Rng + ?Sized>(spec: &DistributionSpec, rng: &mut R) -> Result<f64> {
    Ok(Sampler::new(spec)?.sample(rng))
}

/// Running count, mean, and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.n;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0.0 {
            return b;
        }
        if b.n == 0.0 {
            return a;
        }
        let n = a.n + b.n;
        let delta = b.mean - a.mean;
        Moments {
            n,
            mean: a.mean + delta * b.n / n,
            m2: a.m2 + b.m2 + delta * delta * a.n * b.n / n,
        }
    }
}

fn tree_reduce(mut v: Vec<Moments>) -> Moments {
    while v.len() > 1 {
        v = v
            .chunks(2)
            .map(|c| if c.len() == 2 { Moments::merge(c[0], c[1]) } else { c[0] })
            .collect();
    }
    v.pop().unwrap_or_default()
}

/// Estimates `E|sum_i lambda_i X_i|^d / d!`. Odd `d` is allowed.
pub fn mc_norm_pow(
    lambdas: &[f64],
    spec: &DistributionSpec,
    d: usize,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: d });
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    spec.check_moments_exist(d)?;
    if lambdas.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidParameter("eigenvalues must be finite".into()));
    }
    if lambdas.iter().all(|&l| l == 0.0) {
        return Ok(McEstimate {
            value: 0.0,
            stderr: 0.0,
            samples,
            seed,
        });
    }
    let sampler = Sampler::new(spec)?;
    let d_fact: f64 = (1..=d).map(|i| i as f64).product();
    let chunks = samples.div_ceil(CHUNK);
    let stats: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut m = Moments::default();
            for _ in 0..count {
                let s: f64 = lambdas.iter().map(|&l| l * sampler.sample(&mut rng)).sum();
                m.push(s.abs().powi(d as i32) / d_fact);
            }
            m
        })
        .collect();
    let m = tree_reduce(stats);
    let var = if m.n > 1.0 { m.m2 / (m.n - 1.0) } else { 0.0 };
    Ok(McEstimate {
        value: m.mean,
        stderr: (var / m.n).sqrt(),
        samples,
        seed,
    })
}

/// Estimates `|||A|||_{X,d}` for Hermitian `A` from its eigenvalues, with the
/// standard error carried through the `d`-th root to first order.
pub fn mc_norm(
    a: &ComplexMatrix,
    spec: &DistributionSpec,
    d: usize,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if !a.is_finite() {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    let lambdas = hermitian_eigenvalues(a)?;
    Ok(mc_norm_pow(lambdas.as_slice(), spec, d, samples, seed)?.root(d))
}

/// `a_p` for Rademacher vectors: `1` at `p = 2`, otherwise
/// `sqrt(2) pi^{-1/(2p)} Gamma((p+1)/2)^{1/p}`.
pub fn khintchine_constant(p: usize) -> Result<f64> {
    if p < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: p });
    }
    if p % 2 == 1 {
        return Err(Error::OddDegree(p));
    }
    if p == 2 {
        return Ok(1.0);
    }
    // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!) with k = p/2
    let k = p / 2;
    let fact = |m: usize| (1..=m).map(|i| i as f64).product::<f64>();
    let gamma_half = fact(2 * k) * std::f64::consts::PI.sqrt() / (4f64.powi(k as i32) * fact(k));
    let pf = p as f64;
    Ok(2f64.sqrt() * std::f64::consts::PI.powf(-1.0 / (2.0 * pf)) * gamma_half.powf(1.0 / pf))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KhintchineBounds {
    pub p: usize,
    /// `||A||_F`
    pub lower: f64,
    /// `Gamma(p+1)^{1/p} |||A|||_{X,p}` with `X` Rademacher.
    pub middle: f64,
    /// `a_p ||A||_F`
    pub upper: f64,
}

impl KhintchineBounds {
    /// `lower <= middle <= upper` up to `1e-9` of the upper bound.
    pub fn holds(&self) -> bool {
        let tol = 1e-9 * self.upper.max(f64::MIN_POSITIVE);
        self.lower <= self.middle + tol && self.middle <= self.upper + tol
    }
}

/// The Khintchine sandwich for Rademacher `X`. Hermitian input uses the
/// partition sum, anything else the trace-word sum.
pub fn khintchine_check(a: &ComplexMatrix, p: usize) -> Result<KhintchineBounds> {
    let ap = khintchine_constant(p)?;
    let spec: DistributionSpec = "rademacher".parse()?;
    let pow = if a.is_finite() && a.is_hermitian(a.default_hermitian_tol()) {
        hermitian_norm_pow(a, &spec, p)?
    } else {
        general_norm_pow(a, &spec, p)?
    };
    let p_fact: f64 = (1..=p).map(|i| i as f64).product();
    let fro = a.frobenius();
    Ok(KhintchineBounds {
        p,
        lower: fro,
        middle: (p_fact * pow).max(0.0).powf(1.0 / p as f64),
        upper: ap * fro,
    })
}
