//! Acceptance gate: one check per criterion, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the summary lines always print.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use randnorm::cumulants::catalog_samples;
use randnorm::matrix::Matrix;
use randnorm::norm::{
    circle_extension_check, general_norm_pow, hermitian_norm_pow, hermitian_norm_pow_exact,
    mgf_product_norm_pow, multinomial_norm_pow, norm, series_norm_pow,
};
use randnorm::oracle::{khintchine_check, mc_norm_pow};
use randnorm::random::{random_complex, random_hermitian, random_rational_vector, random_real_vector, robin_hood};
use randnorm::scalar::{parse_rational, rational_to_f64, rel_diff};
use randnorm::sympoly::{chs, format_hunter, hunter_poly, hunter_poly_recursive};
use randnorm::{ComplexMatrix, DistributionSpec};

type Check = Result<String, String>;

fn spec(s: &str) -> DistributionSpec {
    s.parse().expect("catalog string parses")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn randnorm(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_randnorm"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("randnorm {args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

/// Parses `+p/q[*params] tr(..) ..` lines into `(coefficient, params, factors)`
/// with repeated factors expanded.
fn parse_terms(text: &str) -> BTreeSet<(String, String, Vec<String>)> {
    text.lines()
        .map(|line| {
            let mut it = line.split(' ');
            let head = it.next().unwrap_or("");
            let (coeff, params) = head.split_once('*').unwrap_or((head, ""));
            let coeff = parse_rational(coeff.trim_start_matches('+')).expect("coefficient").to_string();
            let mut factors = Vec::new();
            for f in it {
                match f.rsplit_once(")^") {
                    Some((base, k)) => {
                        for _ in 0..k.parse::<usize>().expect("power") {
                            factors.push(format!("{base})"));
                        }
                    }
                    None => factors.push(f.to_string()),
                }
            }
            factors.sort();
            (coeff, params.to_string(), factors)
        })
        .collect()
}

fn expected(rows: &[(&str, &str, &[&str])]) -> BTreeSet<(String, String, Vec<String>)> {
    rows.iter()
        .map(|(c, p, f)| {
            let mut f: Vec<String> = f.iter().map(|s| s.to_string()).collect();
            f.sort();
            (parse_rational(c).unwrap().to_string(), p.to_string(), f)
        })
        .collect()
}

fn fixture(args: &[&str], want: &[(&str, &str, &[&str])]) -> Result<(), String> {
    let start = Instant::now();
    let got = parse_terms(&randnorm(args)?);
    within(Duration::from_secs(1), start)?;
    let want = expected(want);
    ensure(got == want, || format!("{args:?}: got {got:?}, want {want:?}"))
}

// Reference displays, with words spelled in Z and Z* and
// each factor normalized to its least cyclic rotation.
fn criterion_1() -> Check {
    fixture(
        &["formula", "--generic", "-d", "2"],
        &[("1/2", "k2", &["tr(ZZ*)"]), ("1/2", "k1^2", &["tr(Z)", "tr(Z*)"])],
    )?;
    let gamma4: &[(&str, &str, &[&str])] = &[
        ("1/24", "", &["tr(Z)", "tr(Z)", "tr(Z*)", "tr(Z*)"]),
        ("1/24", "", &["tr(Z*)", "tr(Z*)", "tr(ZZ)"]),
        ("4/24", "", &["tr(Z)", "tr(Z*)", "tr(ZZ*)"]),
        ("2/24", "", &["tr(ZZ*)", "tr(ZZ*)"]),
        ("1/24", "", &["tr(Z)", "tr(Z)", "tr(Z*Z*)"]),
        ("1/24", "", &["tr(ZZ)", "tr(Z*Z*)"]),
        ("4/24", "", &["tr(Z*)", "tr(ZZZ*)"]),
        ("4/24", "", &["tr(Z)", "tr(ZZ*Z*)"]),
        ("2/24", "", &["tr(ZZ*ZZ*)"]),
        ("4/24", "", &["tr(ZZZ*Z*)"]),
    ];
    fixture(&["formula", "--dist", "exponential", "-d", "4"], gamma4)?;
    fixture(&["formula", "--dist", "gamma:alpha=1,beta=1", "-d", "4"], gamma4)?;
    fixture(
        &["formula", "--generic", "-d", "4"],
        &[
            ("3/72", "k1^4", &["tr(Z*)", "tr(Z*)", "tr(Z)", "tr(Z)"]),
            ("3/72", "k1^2*k2", &["tr(Z*)", "tr(Z*)", "tr(ZZ)"]),
            ("3/72", "k1^2*k2", &["tr(Z*Z*)", "tr(Z)", "tr(Z)"]),
            ("12/72", "k1^2*k2", &["tr(Z*)", "tr(ZZ*)", "tr(Z)"]),
            ("6/72", "k1*k3", &["tr(ZZ*Z*)", "tr(Z)"]),
            ("6/72", "k1*k3", &["tr(Z*)", "tr(ZZZ*)"]),
            ("6/72", "k2^2", &["tr(ZZ*)", "tr(ZZ*)"]),
            ("3/72", "k2^2", &["tr(ZZ)", "tr(Z*Z*)"]),
            ("2/72", "k4", &["tr(ZZZ*Z*)"]),
            ("1/72", "k4", &["tr(ZZ*ZZ*)"]),
        ],
    )?;
    fixture(
        &["formula", "--dist", "uniform:a=-1,b=1", "-d", "4"],
        &[
            ("10/1080", "", &["tr(ZZ*)", "tr(ZZ*)"]),
            ("5/1080", "", &["tr(ZZ)", "tr(Z*Z*)"]),
            ("-4/1080", "", &["tr(ZZZ*Z*)"]),
            ("-2/1080", "", &["tr(ZZ*ZZ*)"]),
        ],
    )?;
    fixture(
        &["formula", "--dist", "uniform:a=-1,b=1", "-d", "6", "--mode", "hermitian"],
        &[
            ("35/45360", "", &["tr(A^2)", "tr(A^2)", "tr(A^2)"]),
            ("-42/45360", "", &["tr(A^4)", "tr(A^2)"]),
            ("16/45360", "", &["tr(A^6)"]),
        ],
    )?;
    fixture(
        &["formula", "--dist", "poisson:alpha=1", "-d", "4", "--mode", "hermitian", "--symbolic"],
        &[
            ("1/24", "alpha^4", &["tr(A)", "tr(A)", "tr(A)", "tr(A)"]),
            ("6/24", "alpha^3", &["tr(A)", "tr(A)", "tr(A^2)"]),
            ("4/24", "alpha^2", &["tr(A)", "tr(A^3)"]),
            ("3/24", "alpha^2", &["tr(A^2)", "tr(A^2)"]),
            ("1/24", "alpha", &["tr(A^4)"]),
        ],
    )?;
    fixture(
        &["formula", "--dist", "poisson:alpha=1", "-d", "4", "--mode", "hermitian"],
        &[
            ("1/24", "", &["tr(A)", "tr(A)", "tr(A)", "tr(A)"]),
            ("6/24", "", &["tr(A)", "tr(A)", "tr(A^2)"]),
            ("4/24", "", &["tr(A)", "tr(A^3)"]),
            ("3/24", "", &["tr(A^2)", "tr(A^2)"]),
            ("1/24", "", &["tr(A^4)"]),
        ],
    )?;
    let start = Instant::now();
    let h = randnorm(&["hunter", "-d", "4", "--alpha", "3"])?;
    within(Duration::from_secs(1), start)?;
    let want = "H_{4,3} = 3 h1^2 h2 + 6 h1 h3 + 3 h2^2 + 3 h4";
    ensure(h.trim() == want && format_hunter(4, 3) == want["H_{4,3} = ".len()..], || format!("hunter printed {h:?}"))?;
    Ok("general d=2, generic d=4 and kappa_i=(i-1)!, uniform d=4 and d=6, poisson d=4, H_{4,3}".into())
}

/// `h_d` by enumerating nondecreasing index tuples.
fn chs_brute(d: usize, x: &[BigRational]) -> BigRational {
    fn go(d: usize, from: usize, x: &[BigRational], acc: BigRational, total: &mut BigRational) {
        if d == 0 {
            *total += acc;
            return;
        }
        for i in from..x.len() {
            go(d - 1, i, x, &acc * &x[i], total);
        }
    }
    let mut total = BigRational::zero();
    go(d, 0, x, BigRational::one(), &mut total);
    total
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let exp = spec("exponential");
    for case in 0..100 {
        let n = rng.random_range(1..=5);
        let lambdas = random_rational_vector(&mut rng, n);
        let a = Matrix::diag(&lambdas);
        for d in [2, 4, 6] {
            let v = hermitian_norm_pow_exact(&a, &exp, d).map_err(|e| e.to_string())?;
            let h = chs(d, &lambdas);
            ensure(v == h && h == chs_brute(d, &lambdas), || {
                format!("case {case} d={d}: norm {v} vs h_d {h} at {lambdas:?}")
            })?;
        }
    }
    within(Duration::from_secs(5), start)?;
    Ok("100 rational diagonals x d in {2,4,6}, exact".into())
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0f64;
    for s in catalog_samples().into_iter().filter(DistributionSpec::has_mgf) {
        for d in [2, 4, 6] {
            for case in 0..50 {
                let n = rng.random_range(1..=5);
                let a = random_hermitian(&mut rng, n);
                let p = hermitian_norm_pow(&a, &s, d).map_err(|e| e.to_string())?;
                let q = series_norm_pow(&a, &s, d).map_err(|e| e.to_string())?;
                let w = general_norm_pow(&a, &s, d).map_err(|e| e.to_string())?;
                let e = rel_diff(p, q).max(rel_diff(p, w));
                worst = worst.max(e);
                ensure(e <= 1e-10, || format!("{s} d={d} case {case}: partition {p}, series {q}, words {w}"))?;
            }
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("worst relative gap {worst:.1e}"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checks = 0usize;
    for s in catalog_samples() {
        for d in [2, 4] {
            for hermitian in [true, false] {
                for case in 0..1000 {
                    let n = rng.random_range(1..=4);
                    let (a, b, c) = if hermitian {
                        let c = Complex64::new(rng.random_range(-3.0..3.0), 0.0);
                        (random_hermitian(&mut rng, n), random_hermitian(&mut rng, n), c)
                    } else {
                        let c = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
                        (random_complex(&mut rng, n), random_complex(&mut rng, n), c)
                    };
                    let f = |m: &ComplexMatrix| norm(m, &s, d).map_err(|e| format!("{s} d={d}: {e}"));
                    let (na, nb, nab, nca) = (f(&a)?, f(&b)?, f(&(&a + &b))?, f(&a.scale(&c))?);
                    let tag = || format!("{s} d={d} hermitian={hermitian} case {case}");
                    ensure(nab <= na + nb + 1e-9 * (na + nb), || format!("{}: triangle {nab} > {na} + {nb}", tag()))?;
                    ensure(rel_diff(nca, c.norm() * na) <= 1e-12, || {
                        format!("{}: |c| norm {} vs {nca}", tag(), c.norm() * na)
                    })?;
                    let pow = if hermitian {
                        hermitian_norm_pow(&a, &s, d)
                    } else {
                        general_norm_pow(&a, &s, d)
                    }
                    .map_err(|e| e.to_string())?;
                    ensure(pow > 0.0, || format!("{}: norm^d = {pow}", tag()))?;
                    checks += 3;
                }
            }
        }
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{checks} checks, 10 families"))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for s in catalog_samples() {
        for d in [2, 4] {
            for case in 0..500 {
                let n = rng.random_range(2..=5);
                let y = random_real_vector(&mut rng, n);
                let steps = rng.random_range(1..=6);
                let x = robin_hood(&mut rng, &y, steps);
                let nx = norm(&ComplexMatrix::real_diag(&x), &s, d).map_err(|e| e.to_string())?;
                let ny = norm(&ComplexMatrix::real_diag(&y), &s, d).map_err(|e| e.to_string())?;
                ensure(nx <= ny + 1e-12 * ny.max(1.0), || {
                    format!("{s} d={d} case {case}: norm(diag {x:?}) = {nx} > norm(diag {y:?}) = {ny}")
                })?;
            }
        }
    }
    Ok("500 pairs x 10 families x d in {2,4}".into())
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut summary = Vec::new();
    for s in catalog_samples() {
        let mut misses = 0;
        for case in 0..20 {
            let d = if case % 2 == 0 { 2 } else { 4 };
            let n = rng.random_range(1..=4);
            let lambdas = random_real_vector(&mut rng, n);
            let exact = hermitian_norm_pow(&ComplexMatrix::real_diag(&lambdas), &s, d).map_err(|e| e.to_string())?;
            let est = mc_norm_pow(&lambdas, &s, d, 1_000_000, 600 + case).map_err(|e| e.to_string())?;
            // a single Rademacher coordinate gives a constant sample and a zero
            // stderr, so allow for rounding in the last bits
            if (est.value - exact).abs() > 4.0 * est.stderr + 1e-12 * exact.abs() {
                misses += 1;
            }
        }
        ensure(misses <= 1, || format!("{s}: {misses} of 20 cases beyond 4 stderr"))?;
        summary.push(format!("{}:{}", s.name(), 20 - misses));
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("within 4 stderr: {}", summary.join(" ")))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0f64;
    for s in catalog_samples() {
        for d in [2, 4] {
            for case in 0..50 {
                let n = rng.random_range(1..=4);
                let z = random_complex(&mut rng, n);
                let (quad, alg) = circle_extension_check(&z, &s, d, d + 1).map_err(|e| e.to_string())?;
                worst = worst.max(rel_diff(quad, alg));
                ensure(rel_diff(quad, alg) <= 1e-9, || format!("{s} d={d} case {case}: circle {quad} vs words {alg}"))?;
            }
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("worst relative gap {worst:.1e}"))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for d in [2, 4, 6] {
        for alpha in 1..=4 {
            let mut done = 0;
            while done < 1000 {
                let n = rng.random_range(1..=5);
                let x = random_rational_vector(&mut rng, n);
                if x.iter().all(Zero::is_zero) {
                    continue;
                }
                let h = hunter_poly(d, alpha, &x);
                ensure(h.is_positive(), || format!("H_{{{d},{alpha}}}({x:?}) = {h}"))?;
                let r = hunter_poly_recursive(d, alpha, &x);
                ensure(h == r, || format!("H_{{{d},{alpha}}}({x:?}): {h} vs recursion {r}"))?;
                if alpha == 1 {
                    ensure(h == chs_brute(d, &x), || format!("H_{{{d},1}} differs from h_{d}"))?;
                }
                if alpha == 2 {
                    let pair = (0..=d).fold(BigRational::zero(), |acc, i| acc + chs_brute(i, &x) * chs_brute(d - i, &x));
                    ensure(h == pair, || format!("H_{{{d},2}} differs from sum h_i h_(d-i)"))?;
                }
                done += 1;
            }
        }
    }
    Ok("1000 nonzero rational x per (d, alpha), recursion exact".into())
}

/// The Hermitian sandwich must hold. The same sandwich is expected for general
/// `Z`, but its lower bound is false there (see README), so a failure of
/// exactly that kind is reported as unattainable.
fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut tightest = f64::INFINITY;
    let mut general_lower = Vec::new();
    for p in [2usize, 4, 6] {
        // a_p^p is the p-th moment of a standard normal, (p-1)!!
        let double_fact: f64 = (1..p).step_by(2).map(|k| k as f64).product();
        let ap = if p == 2 { 1.0 } else { double_fact.powf(1.0 / p as f64) };
        for hermitian in [true, false] {
            for case in 0..200 {
                let n = rng.random_range(1..=4);
                let a = if hermitian {
                    random_hermitian(&mut rng, n)
                } else {
                    random_complex(&mut rng, n)
                };
                let b = khintchine_check(&a, p).map_err(|e| e.to_string())?;
                let tag = || format!("p={p} hermitian={hermitian} case {case}: {b:?}");
                ensure(rel_diff(b.upper, ap * a.frobenius()) <= 1e-12, || format!("{}: a_p", tag()))?;
                ensure(b.middle <= b.upper * (1.0 + 1e-9), || format!("{}: upper bound", tag()))?;
                if p == 2 {
                    ensure(rel_diff(b.lower, b.middle) <= 1e-12, tag)?;
                    continue;
                }
                if b.holds() {
                    tightest = tightest.min((b.middle - b.lower) / b.lower);
                } else if hermitian {
                    return Err(format!("{}: lower bound", tag()));
                } else {
                    general_lower.push((p, b.middle / b.lower));
                }
            }
        }
    }
    // exact witness: Z = [[-1+i, -2], [0, -1]] has ||Z||_F^4 = 49 while
    // 4! |||Z|||^4 = |tr Z^2|^2 + 2||Z||_F^4 - 4/3 ||Z^2||_F^2 - 2/3 ||Z*Z||_F^2 = 119/3
    let z = ComplexMatrix::from_rows(vec![
        vec![Complex64::new(-1.0, 1.0), Complex64::new(-2.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
    ])
    .map_err(|e| e.to_string())?;
    let w = khintchine_check(&z, 4).map_err(|e| e.to_string())?;
    ensure(rel_diff(w.middle.powi(4), 119.0 / 3.0) <= 1e-12, || format!("witness gave {w:?}"))?;
    if general_lower.is_empty() {
        return Ok(format!("p in {{2,4,6}}, 400 matrices each; smallest slack {tightest:.1e}"));
    }
    let worst = general_lower.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    Err(format!(
        "UNATTAINABLE: Hermitian sandwich and all upper bounds hold, but the lower bound fails for \
         {} of 400 general matrices at p in {{4,6}} (middle/lower as low as {worst:.4}); witness \
         Z = [[-1+i,-2],[0,-1]], p = 4: middle {:.6} < lower {:.6}",
        general_lower.len(),
        w.middle,
        w.lower
    ))
}

fn criterion_10() -> Check {
    let lambdas = [BigRational::one(), BigRational::from_integer(2.into())];
    let d = 4usize;
    let d_fact = BigRational::from_integer(24.into());
    let tr_d = BigRational::from_integer(81.into());
    let pareto = |alpha: &str| spec(&format!("pareto:alpha={alpha}"));

    let mut gaps = Vec::new();
    for alpha in ["100", "1000", "10000"] {
        let s = pareto(alpha);
        let v = multinomial_norm_pow(&lambdas, &s, d).map_err(|e| e.to_string())?;
        let mu = s.moments(d).map_err(|e| e.to_string())?;
        ensure(v == mgf_product_norm_pow(&lambdas, &mu, d), || "multinomial and series disagree".into())?;
        gaps.push((&d_fact * v - &tr_d).abs());
    }
    ensure(gaps.windows(2).all(|w| w[1] < w[0]), || {
        format!("gaps {:?} not shrinking", gaps.iter().map(rational_to_f64).collect::<Vec<_>>())
    })?;

    let alpha = parse_rational("4.001").unwrap();
    let v = multinomial_norm_pow(&lambdas, &pareto("4.001"), d).map_err(|e| e.to_string())?;
    let scaled = (alpha - BigRational::from_integer(4.into())) * &d_fact * v;
    let target = 4.0 * (1.0 + 16.0);
    let err = (rational_to_f64(&scaled) - target).abs() / target;
    ensure(err <= 0.01, || format!("(alpha-d) d! norm^d = {} vs {target}", rational_to_f64(&scaled)))?;
    Ok(format!(
        "|d! N - (tr A)^d| = {:.3e}, {:.3e}, {:.3e}; alpha = d + 1e-3 off by {:.2}%",
        gaps[0].to_f64().unwrap_or(f64::NAN),
        gaps[1].to_f64().unwrap_or(f64::NAN),
        gaps[2].to_f64().unwrap_or(f64::NAN),
        100.0 * err
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("formula fixtures, exact", criterion_1),
        ("exponential norm equals h_d", criterion_2),
        ("partition, series and word paths agree", criterion_3),
        ("norm axioms", criterion_4),
        ("Schur convexity", criterion_5),
        ("Monte Carlo agreement", criterion_6),
        ("circle-average extension", criterion_7),
        ("Hunter positivity and recursion", criterion_8),
        ("Khintchine bounds", criterion_9),
        ("Pareto limits", criterion_10),
    ];
    let mut failed = 0;
    let mut unattainable = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}; {t:.2?})", i + 1),
            Err(why) => {
                if why.starts_with("UNATTAINABLE") {
                    unattainable += 1;
                } else {
                    failed += 1;
                }
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed, {failed} failed, {unattainable} failed as documented unattainable",
        criteria.len() - failed - unattainable,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
