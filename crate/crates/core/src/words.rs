//! Trace words in `Z` and `Z*`, and trace polynomials with collected
//! coefficients.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cumulants::{kappa_product, CumulantVector};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, y_of, Partition};
use crate::scalar::{binomial, Ring};
use crate::symbolic::{format_monomial, Monomial, ParamPoly};

/// `Z` sorts before `Z*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Z,
    Adj,
}

/// A word in `Z` and `Z*` standing for `tr(w(Z))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceWord {
    letters: Vec<Letter>,
}

impl TraceWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        TraceWord { letters }
    }

    /// Parses the compact spelling used in JSON output: `Z` and `s` (for `Z*`).
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'Z' => Ok(Letter::Z),
                's' => Ok(Letter::Adj),
                other => Err(Error::Parse(format!("unexpected letter '{other}' in trace word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(TraceWord::new)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn adjoint_count(&self) -> usize {
        self.letters.iter().filter(|&&l| l == Letter::Adj).count()
    }

    /// The lexicographically least cyclic rotation; `tr` is invariant under
    /// rotation, so rotations collapse to this representative.
    pub fn canonical(&self) -> TraceWord {
        let n = self.letters.len();
        let best = (0..n.max(1))
            .map(|r| {
                let mut w = self.letters.clone();
                w.rotate_left(r % n.max(1));
                w
            })
            .min()
            .unwrap_or_default();
        TraceWord { letters: best }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// `Z`/`s` spelling.
    pub fn compact(&self) -> String {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Z => 'Z',
                Letter::Adj => 's',
            })
            .collect()
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::Z => "Z",
                Letter::Adj => "Z*",
            })?;
        }
        Ok(())
    }
}

/// Bit masks over `d` positions with exactly `d/2` bits set; bit `i` marks an
/// adjoint at position `i`. There are `C(d, d/2)` of them.
pub fn placements(d: usize) -> impl Iterator<Item = u64> {
    assert!(d < 64, "degree {d} too large for placement masks");
    let half = (d / 2) as u32;
    (0u64..(1u64 << d)).filter(move |m| m.count_ones() == half)
}

/// Splits the placement `mask` into one word per part of `p`.
pub fn segment_words(p: &Partition, mask: u64) -> Vec<TraceWord> {
    let mut pos = 0;
    p.parts()
        .iter()
        .map(|&len| {
            let letters = (pos..pos + len)
                .map(|i| if mask >> i & 1 == 1 { Letter::Adj } else { Letter::Z })
                .collect();
            pos += len;
            TraceWord::new(letters)
        })
        .collect()
}

/// Coefficients that can be printed as a sum of rational multiples of
/// parameter monomials.
pub trait Coefficient: Ring {
    fn monomials(&self) -> Vec<(BigRational, Monomial)>;
}

impl Coefficient for BigRational {
    fn monomials(&self) -> Vec<(BigRational, Monomial)> {
        if self.is_zero() {
            Vec::new()
        } else {
            vec![(self.clone(), Vec::new())]
        }
    }
}

impl Coefficient for ParamPoly {
    fn monomials(&self) -> Vec<(BigRational, Monomial)> {
        self.terms().map(|(m, c)| (c.clone(), m.clone())).collect()
    }
}

/// Linear combination of products of traces. Keys are sorted multisets of
/// canonical words; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePolynomial<C> {
    terms: BTreeMap<Vec<TraceWord>, C>,
    degree: usize,
    hermitian: bool,
}

impl<C: Ring> TracePolynomial<C> {
    pub fn new(degree: usize, hermitian: bool) -> Self {
        TracePolynomial {
            terms: BTreeMap::new(),
            degree,
            hermitian,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// True when the words are powers of a single Hermitian letter `A`.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[TraceWord], &C)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, factors: &[TraceWord]) -> Option<&C> {
        let mut key: Vec<TraceWord> = factors.iter().map(TraceWord::canonical).collect();
        key.sort();
        self.terms.get(&key)
    }

    /// Adds `c * prod tr(w)`, canonicalizing and sorting the factors.
    pub fn add_term(&mut self, factors: &[TraceWord], c: C) {
        let mut key: Vec<TraceWord> = factors.iter().map(TraceWord::canonical).collect();
        key.sort();
        let slot = self.terms.entry(key.clone()).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Checks the structural invariants: canonical sorted keys, letter count
    /// `d`, `d/2` adjoints in general mode, no stored zeros.
    pub fn check_invariants(&self) -> bool {
        self.terms.iter().all(|(key, c)| {
            let letters: usize = key.iter().map(TraceWord::len).sum();
            let adj: usize = key.iter().map(TraceWord::adjoint_count).sum();
            let adj_ok = if self.hermitian { adj == 0 } else { 2 * adj == self.degree };
            !c.is_zero()
                && letters == self.degree
                && adj_ok
                && key.iter().all(TraceWord::is_canonical)
                && key.windows(2).all(|w| w[0] <= w[1])
        })
    }
}

impl<C: Coefficient> TracePolynomial<C> {
    fn factor_text(&self, w: &TraceWord) -> String {
        if self.hermitian {
            match w.len() {
                1 => "tr(A)".into(),
                k => format!("tr(A^{k})"),
            }
        } else {
            format!("tr({w})")
        }
    }

    /// One line per term: signed exact fraction, parameter monomial if any,
    /// then the trace factors with repeated factors as powers.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (key, c) in &self.terms {
            let mut grouped: Vec<(String, usize)> = Vec::new();
            for w in key {
                let t = self.factor_text(w);
                match grouped.last_mut() {
                    Some((prev, k)) if *prev == t => *k += 1,
                    _ => grouped.push((t, 1)),
                }
            }
            let factors: Vec<String> = grouped
                .into_iter()
                .map(|(t, k)| if k == 1 { t } else { format!("{t}^{k}") })
                .collect();
            for (r, mono) in c.monomials() {
                let sign = if r.is_negative() { '-' } else { '+' };
                let _ = write!(out, "{sign}{}", r.abs());
                if !mono.is_empty() {
                    let _ = write!(out, "*{}", format_monomial(&mono));
                }
                let _ = writeln!(out, " {}", factors.join(" "));
            }
        }
        out
    }

    /// `{"degree": d, "mode": .., "terms": [{"coeff": [p, q], "params": {..},
    /// "factors": ["ZsZ", ..]}]}`; `params` is present only for symbolic
    /// coefficients. Numerators and denominators are JSON integers when they
    /// fit in 64 bits and decimal strings otherwise.
    pub fn to_json(&self) -> Value {
        let mut terms = Vec::new();
        for (key, c) in &self.terms {
            let factors: Vec<String> = key.iter().map(TraceWord::compact).collect();
            for (r, mono) in c.monomials() {
                let mut t = json!({
                    "coeff": [big_json(r.numer()), big_json(r.denom())],
                    "factors": factors,
                });
                if !mono.is_empty() {
                    let params: serde_json::Map<String, Value> =
                        mono.iter().map(|(s, e)| (s.clone(), json!(e))).collect();
                    t["params"] = Value::Object(params);
                }
                terms.push(t);
            }
        }
        json!({
            "degree": self.degree,
            "mode": if self.hermitian { "hermitian" } else { "general" },
            "terms": terms,
        })
    }
}

fn big_json(v: &num::BigInt) -> Value {
    use num::ToPrimitive;
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

/// The trace-polynomial form of `|||Z|||^d`.
///
/// General mode sums `kappa_pi / (y_pi C(d, d/2))` over every partition and
/// every placement of `d/2` adjoints among the `d` letters, collecting the
/// resulting words under cyclic rotation. Conjugate pairs such as
/// `tr(Z*Z*Z)` and `tr(ZZZ*)` stay separate. Hermitian mode is the partition
/// sum `kappa_pi / y_pi prod_j tr(A^{pi_j})`.
pub fn symbolic_formula<C: Ring>(
    kappas: &CumulantVector<C>,
    d: usize,
    hermitian_mode: bool,
) -> Result<TracePolynomial<C>> {
    if d % 2 == 1 {
        return Err(Error::OddDegree(d));
    }
    if kappas.degree() < d {
        return Err(Error::Dimension(format!(
            "need {d} cumulants, have {}",
            kappas.degree()
        )));
    }
    let mut poly = TracePolynomial::new(d, hermitian_mode);
    let placements_all: Vec<u64> = if hermitian_mode { Vec::new() } else { placements(d).collect() };
    let per_placement = BigRational::new(One::one(), binomial(d, d / 2));
    for p in enumerate_partitions(d) {
        let weight = kappa_product(&p, kappas)
            * C::from_rational(&BigRational::new(One::one(), y_of(&p).into()));
        if weight.is_zero() {
            continue;
        }
        if hermitian_mode {
            let factors: Vec<TraceWord> = p
                .parts()
                .iter()
                .map(|&k| TraceWord::new(vec![Letter::Z; k]))
                .collect();
            poly.add_term(&factors, weight);
        } else {
            let c = weight * C::from_rational(&per_placement);
            for &mask in &placements_all {
                poly.add_term(&segment_words(&p, mask), c.clone());
            }
        }
    }
    Ok(poly)
}
