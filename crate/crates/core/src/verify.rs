//! Randomized property suites over the whole catalog, shared by the CLI
//! `verify` command.

use std::fmt;
use std::str::FromStr;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cumulants::{catalog_samples, DistributionSpec};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Matrix};
use crate::norm::{
    circle_extension_check, general_norm_pow, hermitian_norm_pow, hermitian_norm_pow_exact, norm,
    series_norm_pow, series_norm_pow_exact,
};
use crate::oracle::khintchine_check;
use crate::random::{random_complex, random_hermitian, random_rational_vector, random_real_vector, robin_hood};
use crate::scalar::rel_diff;
use crate::sympoly::{hunter_poly, hunter_poly_recursive};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Schur,
    Paths,
    Hunter,
    Khintchine,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Axioms, Suite::Schur, Suite::Paths, Suite::Hunter, Suite::Khintchine];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Schur => "schur",
            Suite::Paths => "paths",
            Suite::Hunter => "hunter",
            Suite::Khintchine => "khintchine",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn result<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{}: {e}", what()));
                None
            }
        }
    }
}

/// Runs `suite` with `trials` random cases per family and degree.
pub fn run(suite: Suite, seed: u64, trials: usize) -> SuiteReport {
    let mut tally = Tally::new();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match s {
            Suite::Axioms => axioms(&mut rng, trials, &mut tally),
            Suite::Schur => schur(&mut rng, trials, &mut tally),
            Suite::Paths => paths(&mut rng, trials, &mut tally),
            Suite::Hunter => hunter(&mut rng, trials, &mut tally),
            Suite::Khintchine => khintchine(&mut rng, trials, &mut tally),
            Suite::All => unreachable!(),
        }
    }
    SuiteReport {
        suite: suite.name().into(),
        trials,
        checks: tally.checks,
        failures: tally.failures,
    }
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))
}

fn axioms(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for spec in catalog_samples() {
        for d in [2, 4] {
            for i in 0..trials {
                let n = rng.random_range(1..=4);
                let hermitian = i % 2 == 0;
                let (a, b) = if hermitian {
                    (random_hermitian(rng, n), random_hermitian(rng, n))
                } else {
                    (random_complex(rng, n), random_complex(rng, n))
                };
                let c = if hermitian {
                    Complex64::new(rng.random_range(-3.0..3.0), 0.0)
                } else {
                    random_scalar(rng)
                };
                let tag = || format!("{spec} d={d} n={n} case {i}");
                let (Some(na), Some(nb), Some(nab), Some(nca)) = (
                    t.result(norm(&a, &spec, d), tag),
                    t.result(norm(&b, &spec, d), tag),
                    t.result(norm(&(&a + &b), &spec, d), tag),
                    t.result(norm(&a.scale(&c), &spec, d), tag),
                ) else {
                    continue;
                };
                t.check(nab <= na + nb + 1e-9 * (na + nb), || format!("{}: triangle {nab} > {na} + {nb}", tag()));
                t.check(rel_diff(nca, c.norm() * na) <= 1e-12, || {
                    format!("{}: homogeneity {nca} vs {}", tag(), c.norm() * na)
                });
                t.check(na > 0.0, || format!("{}: norm {na} not positive", tag()));
            }
        }
    }
}

fn schur(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for spec in catalog_samples() {
        for d in [2, 4] {
            for i in 0..trials {
                let n = rng.random_range(2..=5);
                let y = random_real_vector(rng, n);
                let steps = rng.random_range(1..=6);
                let x = robin_hood(rng, &y, steps);
                let tag = || format!("{spec} d={d} case {i}");
                let (Some(nx), Some(ny)) = (
                    t.result(norm(&ComplexMatrix::real_diag(&x), &spec, d), tag),
                    t.result(norm(&ComplexMatrix::real_diag(&y), &spec, d), tag),
                ) else {
                    continue;
                };
                t.check(nx <= ny + 1e-12 * ny.max(1.0), || format!("{}: {nx} > {ny} for {x:?} < {y:?}", tag()));
            }
        }
    }
}

fn paths(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for spec in catalog_samples().into_iter().filter(DistributionSpec::has_mgf) {
        for d in [2, 4, 6] {
            for i in 0..trials {
                let n = rng.random_range(1..=5);
                let a = random_hermitian(rng, n);
                let tag = || format!("{spec} d={d} n={n} case {i}");
                let (Some(h), Some(s), Some(g)) = (
                    t.result(hermitian_norm_pow(&a, &spec, d), tag),
                    t.result(series_norm_pow(&a, &spec, d), tag),
                    t.result(general_norm_pow(&a, &spec, d), tag),
                ) else {
                    continue;
                };
                t.check(rel_diff(h, s) <= 1e-10, || format!("{}: partition {h} vs series {s}", tag()));
                t.check(rel_diff(h, g) <= 1e-10, || format!("{}: partition {h} vs words {g}", tag()));

                let cells = random_rational_vector(rng, n * n);
                let q = Matrix::from_fn(n, |i, j| &cells[i * n + j] + &cells[j * n + i]);
                if let (Some(x), Some(y)) = (
                    t.result(hermitian_norm_pow_exact(&q, &spec, d), tag),
                    t.result(series_norm_pow_exact(&q, &spec, d), tag),
                ) {
                    t.check(x == y, || format!("{}: exact partition {x} vs series {y}", tag()));
                }

                if d <= 4 {
                    let z = random_complex(rng, n);
                    if let Some((quad, alg)) = t.result(circle_extension_check(&z, &spec, d, d + 3), tag) {
                        t.check(rel_diff(quad, alg) <= 1e-9, || format!("{}: circle {quad} vs words {alg}", tag()));
                    }
                }
            }
        }
    }
}

fn hunter(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for d in [2, 4, 6] {
        for alpha in 1..=4 {
            for i in 0..trials {
                let n = rng.random_range(1..=5);
                let x = random_rational_vector(rng, n);
                if x.iter().all(num::Zero::is_zero) {
                    continue;
                }
                let h = hunter_poly(d, alpha, &x);
                let r = hunter_poly_recursive(d, alpha, &x);
                t.check(num::Signed::is_positive(&h), || format!("H_{{{d},{alpha}}} case {i}: {h} at {x:?}"));
                t.check(h == r, || format!("H_{{{d},{alpha}}} case {i}: recursion {r} vs {h}"));
            }
        }
    }
}

fn khintchine(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for p in [2, 4, 6] {
        for i in 0..trials {
            let n = rng.random_range(1..=4);
            let a = if i % 2 == 0 {
                random_hermitian(rng, n)
            } else {
                random_complex(rng, n)
            };
            let tag = || format!("p={p} n={n} case {i}");
            let Some(b) = t.result(khintchine_check(&a, p), tag) else {
                continue;
            };
            t.check(b.holds(), || format!("{}: {b:?}", tag()));
            if p == 2 {
                t.check(rel_diff(b.lower, b.middle) <= 1e-12, || format!("{}: p=2 not tight {b:?}", tag()));
            }
        }
    }
}
