//! Polynomials with rational coefficients in named parameters, used as
//! coefficients when distribution parameters are kept symbolic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::scalar::Ring;

/// Sorted `(symbol, exponent)` pairs; the empty monomial is `1`.
pub type Monomial = Vec<(String, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl ParamPoly {
    pub fn symbol(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(name.to_string(), 1)], BigRational::one());
        ParamPoly { terms }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        ParamPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The value when every symbol is a known rational; `None` if a symbol
    /// is missing from `values`.
    pub fn evaluate(&self, values: &BTreeMap<String, BigRational>) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (mono, c) in &self.terms {
            let mut v = c.clone();
            for (s, e) in mono {
                v *= num::pow(values.get(s)?.clone(), *e as usize);
            }
            acc += v;
        }
        Some(acc)
    }

    fn insert(&mut self, mono: Monomial, c: BigRational) {
        let slot = self.terms.entry(mono).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m: BTreeMap<String, u32> = a.iter().cloned().collect();
    for (s, e) in b {
        *m.entry(s.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

pub fn format_monomial(m: &Monomial) -> String {
    m.iter()
        .map(|(s, e)| if *e == 1 { s.clone() } else { format!("{s}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(mut self, rhs: ParamPoly) -> ParamPoly {
        for (m, c) in rhs.terms {
            self.insert(m, c);
        }
        self
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: ParamPoly) -> ParamPoly {
        self + (-rhs)
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Zero for ParamPoly {
    fn zero() -> Self {
        ParamPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for ParamPoly {
    fn one() -> Self {
        ParamPoly::constant(BigRational::one())
    }
}

impl Ring for ParamPoly {
    fn from_rational(r: &BigRational) -> Self {
        ParamPoly::constant(r.clone())
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let abs = c.abs();
            match (abs.is_one(), m.is_empty()) {
                (_, true) => write!(f, "{abs}")?,
                (true, false) => write!(f, "{}", format_monomial(m))?,
                (false, false) => write!(f, "{abs}*{}", format_monomial(m))?,
            }
        }
        Ok(())
    }
}
