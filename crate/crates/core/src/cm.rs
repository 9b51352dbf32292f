//! Complex multiplication: discriminants, reduced binary quadratic forms,
//! the modular j-function and Hilbert class polynomials.

use std::collections::HashMap;
use std::f64::consts::{LN_2, LOG2_E, PI};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ball::{self, Ball, CBall, Mag};
use crate::poly::IntPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CmError {
    #[error("invalid discriminant {0}: it must be negative and congruent to 0 or 1 mod 4")]
    InvalidDisc(i64),
    #[error("discriminant {0} is outside the supported range |D| <= 10^10")]
    DiscTooLarge(i64),
    #[error("Im(tau) is below sqrt(3)/2; reduce tau to the fundamental domain first")]
    TauTooLow,
    #[error(
        "class polynomial for discriminant {disc} not certified; margins {margins:?} at precisions {precisions:?}"
    )]
    CertificationFailed { disc: i64, margins: Vec<f64>, precisions: Vec<u32> },
}

/// Largest supported `|D|` for class polynomials.
pub const MAX_CLASS_POLY_DISC: u64 = 10_000_000_000;

/// A negative discriminant `D = 0, 1 (mod 4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Disc(i64);

impl Disc {
    pub fn new(value: i64) -> Result<Disc, CmError> {
        if value < 0 && matches!(value.rem_euclid(4), 0 | 1) {
            Ok(Disc(value))
        } else {
            Err(CmError::InvalidDisc(value))
        }
    }

    pub fn value(&self) -> i64 {
        self.0
    }

    pub fn abs(&self) -> u64 {
        self.0.unsigned_abs()
    }

    /// The principal form `(1, b, c)` with `b` in `{0, 1}`.
    pub fn principal_form(&self) -> QuadForm {
        let b = self.0.rem_euclid(2);
        QuadForm { a: 1, b, c: (b * b - self.0) / 4 }
    }
}

/// A positive definite binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        self.a > 0
            && self.b.abs() <= self.a
            && self.a <= self.c
            && (self.b >= 0 || (self.b.abs() != self.a && self.a != self.c))
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// The root `(-b + sqrt(D)) / (2a)` in the upper half plane.
    pub fn tau(&self, prec: u32) -> CBall {
        let wp = prec + 8;
        let d = self.disc().unsigned_abs();
        let re = Ball::from_i64(-self.b, wp).div_i64(2 * self.a);
        let im = Ball::sqrt_u64(d, wp).div_i64(2 * self.a);
        CBall::new(re, im).with_prec(prec)
    }

    pub fn tau_f64(&self) -> Complex64 {
        let d = self.disc().unsigned_abs() as f64;
        Complex64::new(-self.b as f64, d.sqrt()) / (2.0 * self.a as f64)
    }
}

/// Primitive reduced forms of discriminant `disc`, sorted by `(a, b)`.
pub fn reduced_forms(disc: Disc) -> Vec<QuadForm> {
    let d = disc.value();
    let amax = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for a in 1..=amax {
        for b in (-a + 1)..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm { a, b, c: num / (4 * a) };
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
    }
    out
}

pub fn class_number(disc: Disc) -> usize {
    reduced_forms(disc).len()
}

static J_SERIES: Mutex<Vec<BigInt>> = Mutex::new(Vec::new());

fn series_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn compute_j_series(len: usize) -> Vec<BigInt> {
    // E4 = 1 + 240 sum sigma_3(n) q^n
    let mut sigma3 = vec![0u128; len];
    for d in 1..len {
        let d3 = (d as u128).pow(3);
        let mut m = d;
        while m < len {
            sigma3[m] += d3;
            m += d;
        }
    }
    let mut e4: Vec<BigInt> = sigma3.iter().map(|&s| BigInt::from(240u128 * s)).collect();
    e4[0] = BigInt::from(1);
    // prod (1 - q^n) from the pentagonal number theorem
    let mut eta = vec![0i64; len];
    eta[0] = 1;
    for m in 1i64.. {
        let g1 = (m * (3 * m - 1) / 2) as usize;
        if g1 >= len {
            break;
        }
        let s = if m % 2 == 0 { 1 } else { -1 };
        eta[g1] += s;
        let g2 = (m * (3 * m + 1) / 2) as usize;
        if g2 < len {
            eta[g2] += s;
        }
    }
    // 24th power by the power recurrence b_k = (1/k) sum ((alpha+1) i - k) a_i b_{k-i}
    let nz: Vec<(usize, i64)> = eta.iter().enumerate().skip(1).filter(|(_, &v)| v != 0).map(|(i, &v)| (i, v)).collect();
    let mut p24 = vec![BigInt::zero(); len];
    p24[0] = BigInt::from(1);
    for k in 1..len {
        let mut acc = BigInt::zero();
        for &(i, a) in &nz {
            if i > k {
                break;
            }
            let w = 25 * i as i64 - k as i64;
            acc += &p24[k - i] * (w * a);
        }
        p24[k] = acc / BigInt::from(k);
    }
    let e4sq = series_mul(&e4, &e4, len);
    let e4cube = series_mul(&e4sq, &e4, len);
    // q j = E4^3 / prod (1 - q^n)^24
    let mut out = vec![BigInt::zero(); len];
    for k in 0..len {
        let mut v = e4cube[k].clone();
        for i in 1..=k {
            if !p24[i].is_zero() {
                v -= &p24[i] * &out[k - i];
            }
        }
        out[k] = v;
    }
    out
}

/// The first `num_terms` coefficients of `q j(q) = 1 + 744 q + 196884 q^2 + ...`.
pub fn j_series(num_terms: usize) -> Vec<BigInt> {
    let mut cache = J_SERIES.lock().unwrap();
    if cache.len() < num_terms {
        let len = num_terms.max(2 * cache.len()).max(64);
        *cache = compute_j_series(len);
    }
    cache[..num_terms].to_vec()
}

fn j_series_f64(num_terms: usize) -> Vec<f64> {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    let c = CACHE.get_or_init(|| j_series(80).iter().map(|v| v.to_f64().unwrap()).collect());
    c[..num_terms.min(c.len())].to_vec()
}

/// Minimal imaginary part accepted by [`j_eval`].
const MIN_IM_TAU: f64 = 0.8660;

/// Certified enclosure of `j(tau)` for `Im tau >= sqrt(3)/2`.
pub fn j_eval(tau: &CBall, prec: u32) -> Result<CBall, CmError> {
    let prec = prec.max(64);
    let y_lo = tau.im.lower_rational().to_f64().unwrap_or(0.0);
    let y_lo = y_lo - 1e-12 * y_lo.abs();
    if !(y_lo >= MIN_IM_TAU) {
        return Err(CmError::TauTooLow);
    }
    let two_pi_y = 2.0 * PI * y_lo;
    // absolute target relative to |j| ~ e^(2 pi y)
    let target = two_pi_y * LOG2_E - prec as f64 - 8.0;
    let mut t = 1usize;
    let tail_log2 = loop {
        let n = (t + 1) as f64;
        let ratio_ok = 2.0 * PI / n.sqrt() - two_pi_y <= -LN_2;
        let term_log2 = (4.0 * PI * n.sqrt() - two_pi_y * n) * LOG2_E;
        if ratio_ok && term_log2 + 1.0 <= target {
            break term_log2 + 1.0;
        }
        t += 1;
    };
    // slack for the f64 evaluation of the bound itself
    let tail = Mag::pow2(tail_log2.ceil() as i64 + 2);
    let coeffs = j_series(t + 2);
    let wp = prec + 32;
    let tw = tau.with_prec(wp);
    let two_pi = ball::pi(wp).mul_2exp(1);
    let arg = CBall::new(tw.im.mul(&two_pi).neg(), tw.re.mul(&two_pi));
    let q = ball::cexp(&arg, wp);
    let qinv = ball::cexp(&arg.neg(), wp);
    let mut s = CBall::from_bigint(&coeffs[t + 1], wp);
    for n in (0..t).rev() {
        s = s.mul(&q).add(&CBall::from_bigint(&coeffs[n + 1], wp));
    }
    Ok(qinv.add(&s).add_error(tail).with_prec(prec))
}

/// `sum_k (-1)^k q^(k(3k-1)/2)`, i.e. `prod (1 - q^n)`, with a tail bound.
fn pentagonal_sum(q: &CBall, wp: u32) -> CBall {
    let lq = q.abs_upper().log2_approx() + 1e-9;
    debug_assert!(lq < -1.0);
    let q2 = q.sqr();
    let mut sum = CBall::one(wp);
    let mut p = CBall::one(wp);
    let mut qk = CBall::one(wp);
    let mut qodd = q.clone();
    let mut k: i64 = 1;
    loop {
        // exponents k(3k-1)/2 and k(3k+1)/2
        if k > 1 {
            qodd = qodd.mul(&q2);
        }
        qk = qk.mul(q);
        let a = p.mul(&qodd);
        let b = a.mul(&qk);
        if k % 2 == 1 {
            sum = sum.sub(&a).sub(&b);
        } else {
            sum = sum.add(&a).add(&b);
        }
        p = b;
        let next = ((k + 1) * (3 * k + 2) / 2) as f64;
        // both remaining sequences are dominated by sum_{n >= next} |q|^n
        let tail_log2 = next * lq + 2.0;
        if tail_log2 < -(wp as f64) - 8.0 {
            return sum.add_error(Mag::pow2(tail_log2.ceil() as i64 + 1));
        }
        k += 1;
    }
}

/// Certified enclosure of `j(tau)` through the Weber function
/// `f1(tau)^24 = (eta(tau/2) / eta(tau))^24`, using `j = (f1^24 + 16)^3 / f1^24`.
/// Agrees with [`j_eval`] but needs only `O(sqrt(prec))` multiplications.
pub fn j_eval_fast(tau: &CBall, prec: u32) -> Result<CBall, CmError> {
    let prec = prec.max(64);
    let y_lo = tau.im.lower_rational().to_f64().unwrap_or(0.0);
    let y_lo = y_lo - 1e-12 * y_lo.abs();
    if !(y_lo >= MIN_IM_TAU) {
        return Err(CmError::TauTooLow);
    }
    let wp = prec + 48;
    let tw = tau.with_prec(wp);
    let pi = ball::pi(wp);
    let qh = ball::cexp(&CBall::new(tw.im.mul(&pi).neg(), tw.re.mul(&pi)), wp);
    let q = qh.sqr();
    let ratio = pentagonal_sum(&qh, wp).div(&pentagonal_sum(&q, wp));
    let x = ratio.pow(24).div(&qh);
    let j = x.add(&CBall::from_i64(16, wp)).pow(3).div(&x);
    Ok(j.with_prec(prec))
}

/// Certified enclosure of the real number `j` at the principal form of `disc`.
pub fn principal_j(disc: Disc, prec: u32) -> Ball {
    let tau = disc.principal_form().tau(prec + 16);
    j_eval_fast(&tau, prec).expect("principal tau lies in the fundamental domain").re
}

/// An exact Hilbert class polynomial with its certification data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassPoly {
    pub disc: Disc,
    pub h: usize,
    /// Integer coefficients, lowest degree first.
    #[serde(skip)]
    pub coeffs: IntPoly,
    /// Upper bound on the distance from any coefficient ball to its integer.
    pub cert_margin: f64,
    /// Working precision (bits) of the successful attempt.
    pub precision: u32,
}

impl ClassPoly {
    /// Coefficients from the leading one down.
    pub fn coeffs_desc(&self) -> Vec<BigInt> {
        self.coeffs.coeffs().iter().rev().cloned().collect()
    }
}

/// Starting precision for the class polynomial of `disc`.
pub fn class_poly_start_precision(disc: Disc) -> u32 {
    let forms = reduced_forms(disc);
    let s: f64 = forms.iter().map(|f| 1.0 / f.a as f64).sum();
    let bits = (PI * (disc.abs() as f64).sqrt() * s / LN_2).ceil();
    bits as u32 + 32 * forms.len() as u32 + 64
}

/// Real factors of `H_D`: `X - j` for forms with real `j`, and
/// `X^2 - 2 Re(j) X + |j|^2` for each pair `(a, +-b, c)`.
fn real_factors(forms: &[QuadForm], prec: u32) -> Result<Vec<Vec<Ball>>, CmError> {
    let lead: Vec<QuadForm> = forms.iter().filter(|f| f.b >= 0).copied().collect();
    lead.par_iter()
        .map(|f| {
            let j = j_eval_fast(&f.tau(prec + 16), prec)?;
            let ambiguous = f.b == 0 || f.b == f.a || f.a == f.c;
            Ok(if ambiguous {
                // j is real; the imaginary part only carries rounding noise
                vec![j.re.neg().add_rad(j.im.abs_upper()), Ball::one(prec)]
            } else {
                vec![j.norm_sqr(), j.re.mul_2exp(1).neg(), Ball::one(prec)]
            })
        })
        .collect()
}

fn expand_class_poly(forms: &[QuadForm], prec: u32) -> Result<(Vec<Ball>, Mag), CmError> {
    let factors = real_factors(forms, prec)?;
    let mut poly = vec![Ball::one(prec)];
    for fac in &factors {
        let mut next = vec![Ball::zero(prec); poly.len() + fac.len() - 1];
        for (i, c) in poly.iter().enumerate() {
            for (k, g) in fac.iter().enumerate() {
                next[i + k] = next[i + k].add(&c.mul(g));
            }
        }
        poly = next;
    }
    let mut margin = Mag::ZERO;
    for c in &poly {
        margin = margin.max(c.nearest_integer().1);
    }
    Ok((poly, margin))
}

/// Builds `H_D` starting at `start` bits, doubling up to `max` bits.
pub fn class_poly_with_precision(disc: Disc, start: u32, max: u32) -> Result<ClassPoly, CmError> {
    if disc.abs() > MAX_CLASS_POLY_DISC {
        return Err(CmError::DiscTooLarge(disc.value()));
    }
    let forms = reduced_forms(disc);
    let half = Mag::pow2(-1);
    let mut prec = start.min(max);
    let (mut margins, mut precisions) = (Vec::new(), Vec::new());
    loop {
        let (poly, margin) = expand_class_poly(&forms, prec)?;
        if margin < half {
            let coeffs = IntPoly::new(poly.iter().map(|c| c.nearest_integer().0).collect());
            return Ok(ClassPoly { disc, h: forms.len(), coeffs, cert_margin: margin.to_f64_up(), precision: prec });
        }
        margins.push(margin.to_f64_up());
        precisions.push(prec);
        if prec >= max {
            return Err(CmError::CertificationFailed { disc: disc.value(), margins, precisions });
        }
        prec = (prec * 2).min(max);
    }
}

type ClassPolyCache = Mutex<HashMap<i64, Arc<ClassPoly>>>;

fn class_poly_cache() -> &'static ClassPolyCache {
    static CACHE: OnceLock<ClassPolyCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The Hilbert class polynomial `H_D`, memoized per discriminant.
pub fn class_poly(disc: Disc) -> Result<Arc<ClassPoly>, CmError> {
    if let Some(p) = class_poly_cache().lock().unwrap().get(&disc.value()) {
        return Ok(p.clone());
    }
    let start = class_poly_start_precision(disc);
    let mut max = start.saturating_mul(8);
    if let Some(cap) = crate::precision_cap() {
        max = max.min(cap);
    }
    let p = Arc::new(class_poly_with_precision(disc, start, max)?);
    class_poly_cache().lock().unwrap().insert(disc.value(), p.clone());
    Ok(p)
}

fn ln_abs_ball(x: &Ball) -> Option<f64> {
    let (m, e) = x.to_f64_exp();
    (m != 0.0).then(|| m.abs().ln() + e as f64 * LN_2)
}

/// Solves `log|j(tau)| = l` along the principal family for `Im tau`.
fn principal_y_from_log(l: f64, odd: bool) -> f64 {
    let c = j_series_f64(10);
    let mut y = l / (2.0 * PI);
    for _ in 0..6 {
        let q = (-2.0 * PI * y).exp() * if odd { -1.0 } else { 1.0 };
        let mut corr = 0.0;
        let mut qp = q;
        for ck in c.iter().skip(1) {
            corr += ck * qp;
            qp *= q;
        }
        y = (l - (1.0 + corr).abs().ln()) / (2.0 * PI);
    }
    y
}

const SMALL_PRINCIPAL_LIMIT: u64 = 60;

/// Discriminants `D` with `|D| <= cap` whose principal `j` may lie in the real
/// ball `x`. Candidates still need certification by the caller. Returns
/// `None` when `x` is too wide to localize.
pub fn principal_candidates(x: &Ball, cap: u64) -> Option<Vec<Disc>> {
    let rad_log2 = x.rad().log2_approx();
    let mid_ln = ln_abs_ball(x);
    let small_ln = 30.0 * LN_2;
    let upper_ln = match mid_ln {
        Some(l) => l.max(rad_log2 * LN_2) + LN_2,
        None => rad_log2 * LN_2 + LN_2,
    };
    if upper_ln <= small_ln {
        return Some(
            (3..=SMALL_PRINCIPAL_LIMIT.min(cap))
                .filter(|d| d % 4 == 0 || d % 4 == 3)
                .map(|d| Disc(-(d as i64)))
                .collect(),
        );
    }
    let l = mid_ln?;
    let rel = ((rad_log2 * LN_2) - l).exp();
    if rel > 1e-6 {
        return None;
    }
    let (m, _) = x.to_f64_exp();
    let odd = m < 0.0;
    let lo = principal_y_from_log(l - 2.0 * rel - 1e-12 * l, odd);
    let hi = principal_y_from_log(l + 2.0 * rel + 1e-12 * l, odd);
    let d_lo = ((4.0 * lo * lo).floor() as i64 - 2).max(3) as u64;
    let d_hi = ((4.0 * hi * hi).ceil() as i64 + 2) as u64;
    if d_hi.saturating_sub(d_lo) > 4000 {
        return None;
    }
    let want = if odd { 3 } else { 0 };
    Some((d_lo..=d_hi.min(cap)).filter(|d| d % 4 == want).map(|d| Disc(-(d as i64))).collect())
}

fn j_f64_with_derivative(tau: Complex64) -> (Complex64, Complex64) {
    let c = j_series_f64(60);
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let q = (two_pi_i * tau).exp();
    // j = 1/q + sum c_{n} q^n, dj/dq = -1/q^2 + sum n c_n q^(n-1)
    let mut s = Complex64::new(0.0, 0.0);
    let mut ds = Complex64::new(0.0, 0.0);
    for n in (0..c.len() - 1).rev() {
        ds = ds * q + s;
        s = s * q + c[n + 1];
    }
    let j = 1.0 / q + s;
    let djdq = -1.0 / (q * q) + ds;
    (j, djdq * two_pi_i * q)
}

fn reduce_tau_f64(mut tau: Complex64) -> Complex64 {
    for _ in 0..200 {
        tau.re -= tau.re.round();
        if tau.norm_sqr() < 1.0 - 1e-14 {
            tau = -1.0 / tau;
        } else {
            break;
        }
    }
    tau
}

fn invert_j_f64(alpha: &CBall) -> Option<Complex64> {
    let (mr, er) = alpha.re.to_f64_exp();
    let (mi, ei) = alpha.im.to_f64_exp();
    let e = match (mr == 0.0, mi == 0.0) {
        (true, true) => 0,
        (true, false) => ei,
        (false, true) => er,
        _ => er.max(ei),
    };
    let re = mr * 2f64.powi((er - e).max(-1100) as i32);
    let im = mi * 2f64.powi((ei - e).max(-1100) as i32);
    let ln_abs = if re == 0.0 && im == 0.0 { f64::NEG_INFINITY } else { re.hypot(im).ln() + e as f64 * LN_2 };
    let arg = im.atan2(re);
    if ln_abs > 400.0 {
        // 1/q dominates: tau = (-arg + i log|alpha|) / (2 pi)
        return Some(reduce_tau_f64(Complex64::new(-arg, ln_abs) / (2.0 * PI)));
    }
    let target = Complex64::new(alpha.re.to_f64(), alpha.im.to_f64());
    let mut tau = if ln_abs > 6912f64.ln() {
        Complex64::new(-arg, ln_abs) / (2.0 * PI)
    } else {
        let mut best = (f64::INFINITY, Complex64::new(0.0, 1.0));
        for ix in 0..=40 {
            for iy in 0..=60 {
                let t = Complex64::new(-0.5 + ix as f64 / 40.0, 0.866 + iy as f64 * 0.03);
                if t.norm_sqr() < 1.0 {
                    continue;
                }
                let d = (j_f64_with_derivative(t).0 - target).norm();
                if d < best.0 {
                    best = (d, t);
                }
            }
        }
        best.1
    };
    for _ in 0..100 {
        tau = reduce_tau_f64(tau);
        let (j, dj) = j_f64_with_derivative(tau);
        if dj.norm() == 0.0 || !dj.norm().is_finite() {
            break;
        }
        let step = (j - target) / dj;
        tau -= step;
        if step.norm() < 1e-15 * (1.0 + tau.norm()) {
            break;
        }
    }
    let tau = reduce_tau_f64(tau);
    (tau.im.is_finite() && tau.im > 0.8).then_some(tau)
}

fn normalize_form(mut f: QuadForm) -> QuadForm {
    if f.b == -f.a {
        f.b = f.a;
    }
    if f.a == f.c && f.b < 0 {
        f.b = -f.b;
    }
    f
}

/// Recognizes `alpha` as a singular modulus `j(tau_f)` for a primitive reduced
/// form `f` with `|disc f| <= delta_cap`. The answer is only a ball-overlap
/// candidate; exact confirmation is the caller's job.
pub fn recognize_cm(alpha: &CBall, delta_cap: u64) -> Option<(Disc, QuadForm)> {
    let prec = alpha.prec().max(64);
    if alpha.im.contains_zero() {
        if let Some(cands) = principal_candidates(&alpha.re, delta_cap) {
            for d in cands {
                if principal_j(d, prec).overlaps(&alpha.re) {
                    return Some((d, d.principal_form()));
                }
            }
        }
    }
    let tau = invert_j_f64(alpha)?;
    let (x, y) = (tau.re, tau.im);
    let amax = ((delta_cap as f64 / 3.0).sqrt().floor() as i64).max(1);
    for a in 1..=amax {
        let af = a as f64;
        let bf = -2.0 * af * x;
        let cf = af * (x * x + y * y);
        let (b, c) = (bf.round(), cf.round());
        if (bf - b).abs() > 1e-6 * af || (cf - c).abs() > 1e-6 * cf.max(1.0) {
            continue;
        }
        let f = normalize_form(QuadForm { a, b: b as i64, c: c as i64 });
        let d = f.disc();
        if d >= 0 || d.unsigned_abs() > delta_cap || !f.is_reduced() || !f.is_primitive() {
            continue;
        }
        let Ok(j) = j_eval(&f.tau(prec + 16), prec) else {
            continue;
        };
        if j.re.overlaps(&alpha.re) && j.im.overlaps(&alpha.im) {
            return Disc::new(d).ok().map(|disc| (disc, f));
        }
    }
    None
}
