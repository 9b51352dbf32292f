//! Brute-force and interval checks of the arithmetic facts the search relies
//! on. Every check returns a [`VerifyReport`]; it passes iff no
//! counterexample was found.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::ball::{cexp, pi, root_of_unity, Ball, CBall};
use crate::bounds::u_interval;
use crate::cm::{self, Disc};
use crate::interval::{rational_below, Interval};
use crate::poly::{cyclotomic, discriminant, gcd_uni, UniPoly};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("unknown check {0:?}; expected one of {1}")]
    UnknownCheck(String, String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub range: String,
    pub passed: bool,
    pub counterexamples: Vec<String>,
    /// Smallest observed margin where meaningful (log scale for ratios).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_margin: Option<f64>,
    pub elapsed_ms: f64,
}

const MAX_LISTED: usize = 20;

fn report(check: &str, range: String, mut cex: Vec<String>, margin: Option<f64>, t: Instant) -> VerifyReport {
    let passed = cex.is_empty();
    cex.truncate(MAX_LISTED);
    VerifyReport {
        check: check.to_string(),
        range,
        passed,
        counterexamples: cex,
        min_margin: margin,
        elapsed_ms: t.elapsed().as_secs_f64() * 1e3,
    }
}

/// Names accepted by [`run_check`].
pub const CHECKS: &[&str] =
    &["unit-squares", "n-bound", "primorial", "j-bound", "liouville", "e-field", "field-intersection"];

/// Dispatches a check by name with optional range/trial arguments.
pub fn run_check(name: &str, max_n: Option<u64>, trials: Option<u64>) -> Result<VerifyReport, VerifyError> {
    match name {
        "unit-squares" => check_lemma_unit_squares(max_n.unwrap_or(10_000)),
        "n-bound" => check_prop_n_bound(max_n.unwrap_or(1_000_000)),
        "primorial" => Ok(check_primorial_cases()),
        "j-bound" => Ok(check_j_estimate(trials.unwrap_or(100))),
        "liouville" => Ok(check_liouville_bound(trials.unwrap_or(1000))),
        "e-field" => check_e_field(max_n.unwrap_or(10_000)),
        "field-intersection" => Ok(check_field_intersection()),
        other => Err(VerifyError::UnknownCheck(other.to_string(), CHECKS.join(", "))),
    }
}

/// `|(Z/NZ)^x / squares| = 2^(omega(N) - c1(N))` by enumeration.
pub fn check_lemma_unit_squares(max_n: u64) -> Result<VerifyReport, VerifyError> {
    if max_n == 0 || max_n > 1_000_000 {
        return Err(VerifyError::OutOfRange(format!("max_n = {max_n} not in 1..=1000000")));
    }
    let t = Instant::now();
    let cex: Vec<String> = (1..=max_n)
        .into_par_iter()
        .filter_map(|n| {
            let brute = arith::unit_square_class_order(n);
            let e = arith::omega(n) as i64 - arith::c1(n) as i64;
            (brute != 1u64 << e).then(|| format!("N={n}: enumerated {brute}, formula 2^{e}"))
        })
        .collect();
    Ok(report("unit-squares", format!("1..={max_n}"), cex, None, t))
}

/// `n < u(max(8, phi(n) / 2^omega(n)))` for all `n <= max_n`, plus `u(8) > 2345`.
pub fn check_prop_n_bound(max_n: u64) -> Result<VerifyReport, VerifyError> {
    if max_n == 0 || max_n > 10_000_000 {
        return Err(VerifyError::OutOfRange(format!("max_n = {max_n} not in 1..=10000000")));
    }
    let t = Instant::now();
    let mut cex = Vec::new();
    let u8v = u_interval(Interval::point(8.0));
    if !(u8v.lo > 2345.0) {
        cex.push(format!("u(8) enclosure [{}, {}] not above 2345", u8v.lo, u8v.hi));
    }
    let (phi, omega) = arith::phi_omega_table(max_n as usize);
    let mut margin = f64::INFINITY;
    for n in 1..=max_n {
        let p = phi[n as usize];
        let w = omega[n as usize];
        // a_n = max(8, p / 2^w), exact comparison before the interval
        let a = if (p as u128) <= 8u128 << w {
            Interval::point(8.0)
        } else {
            Interval::from_ratio(&BigInt::from(p), &(BigInt::one() << w))
        };
        let u = u_interval(a);
        if !(u.lo > n as f64) {
            cex.push(format!("n={n}: u(a_n) enclosure [{}, {}]", u.lo, u.hi));
        } else {
            margin = margin.min((u.lo / n as f64).ln());
        }
    }
    Ok(report("n-bound", format!("1..={max_n}"), cex, Some(margin), t))
}

/// The primorial inequalities for `s = 6..=12`, `A_s < (e/2)^s`, and
/// `prod_{i<=6} (P_i - 1)/2 = 90 > e^e`.
pub fn check_primorial_cases() -> VerifyReport {
    let t = Instant::now();
    let mut cex = Vec::new();
    let primes = arith::first_primes(12);
    let mut margin = f64::INFINITY;
    for s in 6..=12usize {
        let ps = &primes[..s];
        let m: BigInt = ps.iter().map(|&p| BigInt::from(p)).product();
        let a: BigRational = ps.iter().map(|&p| BigRational::new(BigInt::from(p), BigInt::from(p - 1))).product();
        let two_s = BigRational::from_integer(BigInt::one() << s);
        // (1/2) log(2^s A_s) < c_s / log c_s, c_s = log(M_s / (2^s A_s))
        let lhs = Interval::from_rational(&(&two_s * &a)).ln().mul(Interval::point(0.5));
        let c = Interval::from_rational(&(BigRational::from_integer(m) / (&two_s * &a))).ln();
        let rhs = c.div(c.ln());
        if !lhs.certainly_lt(rhs) {
            cex.push(format!("s={s}: lhs [{}, {}] vs rhs [{}, {}]", lhs.lo, lhs.hi, rhs.lo, rhs.hi));
        } else {
            margin = margin.min(rhs.lo - lhs.hi);
        }
        let e_half_pow = Interval::e().div(Interval::point(2.0)).ln().mul(Interval::from_u64(s as u64)).exp();
        if !rational_below(&a, e_half_pow) {
            cex.push(format!("s={s}: A_s not below (e/2)^s"));
        }
    }
    let prod: BigRational =
        primes[..6].iter().map(|&p| BigRational::new(BigInt::from(p - 1), BigInt::from(2))).product();
    if prod != BigRational::from_integer(90.into()) {
        cex.push(format!("prod (P_i - 1)/2 = {prod}, expected 90"));
    }
    let ee = Interval::e().exp();
    if !ee.certainly_lt(Interval::point(90.0)) {
        cex.push("e^e not certainly below 90".to_string());
    }
    if !Interval::point(8.0).certainly_lt(ee) {
        cex.push("e^e not certainly above 8".to_string());
    }
    report("primorial", "s=6..=12".to_string(), cex, Some(margin), t)
}

/// Lower imaginary part for the `j` estimate: `log(6912) / (2 pi)`.
pub fn j_bound_min_im() -> f64 {
    6912f64.ln() / (2.0 * std::f64::consts::PI)
}

/// Enclosure of `|j(tau) e^(2 pi i tau)|` as `(lower, upper)`.
pub fn j_ratio(tau: &CBall, prec: u32) -> Result<(f64, f64), cm::CmError> {
    let j = cm::j_eval(tau, prec)?;
    let two_pi_i = CBall::new(Ball::zero(prec), pi(prec).mul_i64(2));
    let q = cexp(&two_pi_i.mul(tau), prec);
    let r = j.mul(&q);
    Ok((r.abs_lower().to_f64_down(), r.abs_upper().to_f64_up()))
}

/// `1/2 <= |j(tau) q| <= 2` for random `tau` above the threshold, plus
/// fixed sample points.
pub fn check_j_estimate(samples: u64) -> VerifyReport {
    let t = Instant::now();
    let prec = 128;
    let y0 = j_bound_min_im();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6912);
    let mut taus: Vec<(f64, f64)> = vec![(0.0, 1.5), (0.3, 2.0), (0.0, 10.0), (0.5, y0 + 1e-9)];
    for _ in 0..samples {
        let x = rng.gen_range(-0.5..=0.5);
        let y = rng.gen_range(y0..=10.0);
        taus.push((x, if y <= y0 { y0 + 1e-12 } else { y }));
    }
    let results: Vec<(String, Option<f64>)> = taus
        .par_iter()
        .map(|&(x, y)| {
            let tau = CBall::new(Ball::from_f64(x, prec), Ball::from_f64(y, prec));
            match j_ratio(&tau, prec) {
                Ok((lo, hi)) if lo >= 0.5 && hi <= 2.0 => {
                    let m = (lo / 0.5).ln().min((2.0 / hi).ln());
                    if y == 10.0 && !(lo > 1.0 - 1e-6 && hi < 1.0 + 1e-6) {
                        (format!("tau={x}+{y}i: [{lo}, {hi}] not within 1e-6 of 1"), None)
                    } else {
                        (String::new(), Some(m))
                    }
                }
                Ok((lo, hi)) => (format!("tau={x}+{y}i: ratio in [{lo}, {hi}]"), None),
                Err(e) => (format!("tau={x}+{y}i: {e}"), None),
            }
        })
        .collect();
    let margin = results.iter().filter_map(|r| r.1).fold(f64::INFINITY, f64::min);
    let cex = results.into_iter().filter(|r| r.1.is_none()).map(|r| r.0).collect();
    report("j-bound", format!("{} points, Im tau in ({y0:.6}, 10]", taus.len()), cex, Some(margin), t)
}

/// `(d + 1)^(1 - N) (N + 1)^(-d/2) H^(1 - N)`, squared, as an exact rational.
pub fn liouville_bound_sq(d: u32, n: u64, h: u64) -> BigRational {
    let e = (n - 1) as u32;
    let den = BigInt::from(d + 1).pow(2 * e) * BigInt::from(n + 1).pow(d) * BigInt::from(h).pow(2 * e);
    BigRational::new(BigInt::one(), den)
}

/// `|g(zeta_N^k)|^2` as a certified real ball.
pub fn abs_sq_at_root_of_unity(g: &UniPoly, n: u64, k: u64, prec: u32) -> Ball {
    let z = root_of_unity(k as i64, n, prec);
    let mut acc = CBall::zero(prec);
    for c in g.coeffs().iter().rev() {
        acc = acc.mul(&z).add(&CBall::from_rational(c, prec));
    }
    acc.norm_sqr()
}

/// Lower bound for `|g(lambda)|` at primitive roots of unity not killing `g`.
pub fn check_liouville_bound(trials: u64) -> VerifyReport {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1105);
    let mut cases: Vec<(Vec<i64>, u64, u64)> = vec![(vec![-1, 1], 3, 1), (vec![1], 7, 1), (vec![1, 2], 4, 1)];
    while (cases.len() as u64) < trials + 3 {
        let deg = rng.gen_range(0..=6usize);
        let hmax = rng.gen_range(1..=50i64);
        let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-hmax..=hmax)).collect();
        if c[deg] == 0 {
            c[deg] = hmax;
        }
        let n = rng.gen_range(1..=20u64);
        let units = arith::units_mod(n);
        let k = units[rng.gen_range(0..units.len())];
        cases.push((c, n, k));
    }
    let results: Vec<(Option<String>, Option<f64>)> = cases
        .par_iter()
        .map(|(c, n, k)| {
            let g = UniPoly::from_i64s(c);
            let phi = cyclotomic(*n).to_rational();
            if g.is_zero() || !gcd_uni(&g, &phi).map(|d| d.is_constant()).unwrap_or(false) {
                return (None, None);
            }
            let d = g.deg() as u32;
            let h = c.iter().map(|v| v.unsigned_abs()).max().unwrap();
            let bound = liouville_bound_sq(d, *n, h);
            if d == 0 {
                // exact: |c|^2 against the bound
                let v = g.coeff(0) * g.coeff(0);
                return if v >= bound {
                    (None, Some(0.0))
                } else {
                    (Some(format!("g={g}: |g|^2 = {v} below bound")), None)
                };
            }
            let mut prec = 128;
            loop {
                let v = abs_sq_at_root_of_unity(&g, *n, *k, prec);
                if v.lower_rational() >= bound {
                    let lv = v.to_f64().ln();
                    let lb = bound.numer().to_f64().unwrap_or(1.0).ln() - crate::poly::ln_bigint(bound.denom());
                    return (None, Some(0.5 * (lv - lb)));
                }
                if v.upper_rational() < bound || prec > 4096 {
                    return (Some(format!("g={g} N={n} k={k}: |g|^2 ~ {} below bound", v.to_f64())), None);
                }
                prec *= 2;
            }
        })
        .collect();
    let margin = results.iter().filter_map(|r| r.1).fold(f64::INFINITY, f64::min);
    let cex: Vec<String> = results.into_iter().filter_map(|r| r.0).collect();
    report("liouville", format!("{} trials, deg <= 6, H <= 50, N <= 20", trials), cex, Some(margin), t)
}

/// Squarefree generators of the multiquadratic field `E` attached to `N`,
/// ordered by absolute value.
pub fn e_field_generators(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let f = arith::factorize(n);
    let mut out: Vec<i64> =
        f.primes().filter(|&p| p != 2).map(|p| if p % 4 == 1 { p as i64 } else { -(p as i64) }).collect();
    let k = f.exponent_of(2);
    if k >= 2 {
        out.push(-1);
    }
    if k >= 3 {
        out.push(2);
    }
    out.sort_unstable_by_key(|v| (v.abs(), *v));
    debug_assert_eq!(out.len() as i64, arith::omega(n) as i64 - arith::c1(n) as i64);
    out
}

/// `|e_field_generators(N)| = omega(N) - c1(N)` and squarefreeness.
pub fn check_e_field(max_n: u64) -> Result<VerifyReport, VerifyError> {
    if max_n == 0 || max_n > 1_000_000 {
        return Err(VerifyError::OutOfRange(format!("max_n = {max_n} not in 1..=1000000")));
    }
    let t = Instant::now();
    let cex: Vec<String> = (1..=max_n)
        .into_par_iter()
        .filter_map(|n| {
            let g = e_field_generators(n);
            let want = arith::omega(n) as i64 - arith::c1(n) as i64;
            let squarefree = g.iter().all(|&v| arith::factorize(v.unsigned_abs()).pairs().iter().all(|&(_, e)| e == 1));
            (g.len() as i64 != want || !squarefree).then(|| format!("N={n}: {g:?}, expected {want} generators"))
        })
        .collect();
    Ok(report("e-field", format!("1..={max_n}"), cex, None, t))
}

/// Squarefree part of a nonzero integer, with sign.
pub fn squarefree_part(v: &BigInt) -> BigInt {
    let mut rest = v.abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    // trial division up to the cube root, then a square test on the cofactor
    while &p * &p * &p <= rest {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += 1;
    }
    let r = rest.sqrt();
    if &r * &r != rest {
        out *= rest;
    }
    if v.is_negative() {
        -out
    } else {
        out
    }
}

/// `disc(H_-15) = 5 * square`, so `Q(j(O_-15)) = Q(sqrt 5)`, the equality
/// case `2^(omega - c1 - c2) = 2` at `N = 5`.
pub fn check_field_intersection() -> VerifyReport {
    let t = Instant::now();
    let mut cex = Vec::new();
    match cm::class_poly(Disc::new(-15).expect("valid")) {
        Ok(h) => {
            let d = discriminant(&h.coeffs.to_rational());
            if !d.is_integer() {
                cex.push(format!("discriminant {d} not integral"));
            } else {
                let d: BigInt = d.to_integer();
                let q: BigInt = &d / 5;
                let r = q.sqrt();
                if !(&d % BigInt::from(5)).is_zero() || &r * &r != q || q.is_negative() {
                    cex.push(format!("discriminant {d} is not 5 times a square"));
                }
                if squarefree_part(&d) != BigInt::from(5) {
                    cex.push(format!("squarefree part of {d} is not 5"));
                }
            }
            let bound = arith::square_class_exponent(5) as i64 - arith::c2(5) as i64;
            if bound != 1 {
                cex.push(format!("2^(omega - c1 - c2) at N = 5 is 2^{bound}, expected 2"));
            }
        }
        Err(e) => cex.push(e.to_string()),
    }
    report("field-intersection", "D=-15, N=5".to_string(), cex, None, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_squares_small() {
        let r = check_lemma_unit_squares(200).unwrap();
        assert!(r.passed, "{:?}", r.counterexamples);
        assert_eq!(arith::unit_square_class_order(8), 4);
        assert_eq!(arith::unit_square_class_order(1), 1);
    }

    #[test]
    fn n_bound_small() {
        let r = check_prop_n_bound(30_030).unwrap();
        assert!(r.passed, "{:?}", r.counterexamples);
        assert!(r.min_margin.unwrap() > 0.0);
    }

    #[test]
    fn primorial_passes() {
        let r = check_primorial_cases();
        assert!(r.passed, "{:?}", r.counterexamples);
    }

    #[test]
    fn j_ratio_examples() {
        for (x, y) in [(0.0, 1.5), (0.3, 2.0)] {
            let tau = CBall::new(Ball::from_f64(x, 128), Ball::from_f64(y, 128));
            let (lo, hi) = j_ratio(&tau, 128).unwrap();
            assert!(lo >= 0.5 && hi <= 2.0, "{lo} {hi}");
        }
        let tau = CBall::new(Ball::zero(128), Ball::from_f64(10.0, 128));
        let (lo, hi) = j_ratio(&tau, 128).unwrap();
        assert!(lo > 1.0 - 1e-6 && hi < 1.0 + 1e-6);
        assert!(check_j_estimate(5).passed);
    }

    #[test]
    fn liouville_examples() {
        // |zeta_3 - 1|^2 = 3
        let v = abs_sq_at_root_of_unity(&UniPoly::from_i64s(&[-1, 1]), 3, 1, 128);
        assert!(v.contains_rational(&BigRational::from_integer(3.into())));
        assert!(v.lower_rational() >= liouville_bound_sq(1, 3, 1));
        // |2i + 1|^2 = 5
        let v = abs_sq_at_root_of_unity(&UniPoly::from_i64s(&[1, 2]), 4, 1, 128);
        assert!(v.contains_rational(&BigRational::from_integer(5.into())));
        // constant 1 meets the bound with equality only when H = 1 and d = 0
        assert_eq!(liouville_bound_sq(0, 5, 1), BigRational::one());
        let r = check_liouville_bound(50);
        assert!(r.passed, "{:?}", r.counterexamples);
    }

    #[test]
    fn e_field_examples() {
        assert_eq!(e_field_generators(5), vec![5]);
        assert_eq!(e_field_generators(8), vec![-1, 2]);
        assert_eq!(e_field_generators(12), vec![-1, -3]);
        assert_eq!(e_field_generators(1), Vec::<i64>::new());
        assert!(check_e_field(2000).unwrap().passed);
    }

    #[test]
    fn field_intersection_instance() {
        let r = check_field_intersection();
        assert!(r.passed, "{:?}", r.counterexamples);
        assert_eq!(squarefree_part(&BigInt::from(36975700125u64)), BigInt::from(5));
    }

    #[test]
    fn unknown_check_is_error() {
        assert!(matches!(run_check("nope", None, None), Err(VerifyError::UnknownCheck(..))));
    }
}
