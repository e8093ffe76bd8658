//! Complete homogeneous, power-sum and monomial symmetric polynomials, and
//! the generalized Hunter polynomials `H_{d,alpha}`.

use num::rational::BigRational;

use crate::partitions::{enumerate_partitions, hunter_coefficient, z_of, Partition};
use crate::scalar::{factorial, Field, Ring};

/// `h_0(x), .., h_d(x)` by the prefix recurrence
/// `h_k(x_1..x_m) = h_k(x_1..x_{m-1}) + x_m h_{k-1}(x_1..x_m)`.
pub fn chs_all<T: Ring>(d: usize, x: &[T]) -> Vec<T> {
    let mut h = vec![T::zero(); d + 1];
    h[0] = T::one();
    for xi in x {
        for k in 1..=d {
            h[k] = h[k].clone() + xi.clone() * h[k - 1].clone();
        }
    }
    h
}

/// The complete homogeneous symmetric polynomial `h_d(x)`.
pub fn chs<T: Ring>(d: usize, x: &[T]) -> T {
    chs_all(d, x).pop().expect("d + 1 entries")
}

/// `p_pi(x) = prod_j sum_i x_i^{pi_j}`.
pub fn power_sum_product<T: Ring>(p: &Partition, x: &[T]) -> T {
    p.parts().iter().fold(T::one(), |acc, &k| {
        acc * x.iter().fold(T::zero(), |s, xi| s + xi.pow(k))
    })
}

/// The monomial symmetric polynomial `m_pi(x)`: the sum of `x^a` over all
/// distinct rearrangements `a` of the parts of `pi` (padded with zeros) as an
/// exponent vector. Zero when `pi` has more parts than there are variables.
pub fn monomial_sym<T: Ring>(p: &Partition, x: &[T]) -> T {
    let n = x.len();
    if p.len() > n {
        return T::zero();
    }
    let mut exps: Vec<usize> = p.parts().to_vec();
    exps.resize(n, 0);
    exps.sort_unstable();
    let mut total = T::zero();
    loop {
        total = total
            + exps
                .iter()
                .zip(x)
                .fold(T::one(), |acc, (&e, xi)| acc * xi.pow(e));
        if !next_permutation(&mut exps) {
            break;
        }
    }
    total
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = a.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = a.iter().rposition(|&v| v > a[i]).expect("pivot has a successor");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// `(h_d(x), sum_{pi |- d} p_pi(x) / z_pi)`.
pub fn chs_powersum_identity_check<T: Field>(d: usize, x: &[T]) -> (T, T) {
    let via_power_sums = enumerate_partitions(d)
        .iter()
        .fold(T::zero(), |acc, p| {
            let z = T::from_rational(&BigRational::from_integer(z_of(p).into()));
            acc + power_sum_product(p, x) / z
        });
    (chs(d, x), via_power_sums)
}

/// `c_pi` terms of `H_{d,alpha}`, ordered lexicographically by the parts
/// read in increasing order, so `(1,1,2)` precedes `(1,3)` and `(2,2)`.
pub fn hunter_terms(d: usize, alpha: usize) -> Vec<(Partition, BigRational)> {
    let mut terms: Vec<(Partition, BigRational)> = enumerate_partitions(d)
        .into_iter()
        .filter(|p| p.len() <= alpha)
        .map(|p| {
            let c = BigRational::from_integer(hunter_coefficient(&p, alpha).into());
            (p, c)
        })
        .collect();
    terms.sort_by(|a, b| {
        let asc = |p: &Partition| p.parts().iter().rev().copied().collect::<Vec<_>>();
        asc(&a.0).cmp(&asc(&b.0))
    });
    terms
}

/// Renders `H_{d,alpha}` in the `h_k` basis, e.g. `3 h1^2 h2 + 6 h1 h3 + ..`.
pub fn format_hunter(d: usize, alpha: usize) -> String {
    hunter_terms(d, alpha)
        .iter()
        .map(|(p, c)| {
            let mut factors: Vec<String> = Vec::new();
            let mult = p.multiplicities();
            for (part, m) in &mult {
                factors.push(if *m == 1 {
                    format!("h{part}")
                } else {
                    format!("h{part}^{m}")
                });
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            format!("{c} {}", factors.join(" "))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// `H_{d,alpha}(x) = sum_{pi |- d, |pi| <= alpha} c_pi h_pi(x)`, positive
/// definite for even `d`. `H_{d,1} = h_d`.
pub fn hunter_poly<T: Ring>(d: usize, alpha: usize, x: &[T]) -> T {
    let h = chs_all(d, x);
    hunter_terms(d, alpha)
        .iter()
        .fold(T::zero(), |acc, (p, c)| {
            let hp = p.parts().iter().fold(T::one(), |a, &k| a * h[k].clone());
            acc + T::from_rational(c) * hp
        })
}

/// `H_{d,alpha}` through `H_{d,alpha} = sum_{i=0}^d h_i H_{d-i,alpha-1}` with
/// `H_{l,1} = h_l`.
pub fn hunter_poly_recursive<T: Ring>(d: usize, alpha: usize, x: &[T]) -> T {
    let h = chs_all(d, x);
    // H_{l,0} = [l = 0]
    let mut prev: Vec<T> = (0..=d).map(|l| if l == 0 { T::one() } else { T::zero() }).collect();
    for _ in 0..alpha {
        let next: Vec<T> = (0..=d)
            .map(|l| (0..=l).fold(T::zero(), |acc, i| acc + h[i].clone() * prev[l - i].clone()))
            .collect();
        prev = next;
    }
    prev[d].clone()
}

/// The Bernoulli(q) norm power in the monomial basis:
/// `sum_{pi |- d} q^{|pi|} / (prod_j pi_j!) m_pi(lambda)`.
pub fn bernoulli_norm_hermitian<T: Field>(lambdas: &[T], q: &T, d: usize) -> T {
    enumerate_partitions(d).iter().fold(T::zero(), |acc, p| {
        let denom = p
            .parts()
            .iter()
            .fold(num::BigInt::from(1), |a, &k| a * factorial(k));
        let coeff = q.pow(p.len()) / T::from_rational(&BigRational::from_integer(denom));
        acc + coeff * monomial_sym(p, lambdas)
    })
}
