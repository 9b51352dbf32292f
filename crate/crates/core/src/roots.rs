//! Certified complex root enclosures for polynomials with ball coefficients.
//!
//! Approximations come from Aberth iteration on midpoints; they are then
//! certified with the inclusion theorem: if `z_1..z_n` are distinct and
//! `W_i = p(z_i) / (a_n prod_{j != i} (z_i - z_j))`, every root of `p` lies in
//! the union of the discs `D(z_i, n |W_i|)`. Evaluating `p(z_i)` with ball
//! coefficients makes the statement hold for every polynomial in the balls.

use thiserror::Error;

use num_complex::Complex64;

use crate::ball::{Ball, CBall, Mag};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("leading coefficient ball contains zero")]
    LeadingCoefficientNotNonzero,
    #[error("polynomial of degree 0 has no roots to isolate")]
    Constant,
    #[error("root approximations coincide; cannot certify at {0} bits")]
    Degenerate(u32),
}

/// Closed disc `|z - center| <= radius` containing roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDisc {
    /// Exact point (radius-free ball).
    pub center: CBall,
    pub radius: Mag,
}

impl RootDisc {
    /// True if the disc meets the real axis.
    pub fn meets_real_axis(&self) -> bool {
        self.center.im.abs_lower() <= self.radius
    }

    /// A real ball covering the disc's intersection with the real axis.
    pub fn real_interval(&self) -> Ball {
        self.center.re.clone().add_rad(self.radius)
    }

    /// A complex ball covering the disc.
    pub fn as_cball(&self) -> CBall {
        self.center.add_error(self.radius)
    }

    /// Radius relative to the center's magnitude, as `log2`.
    pub fn log2_relative_radius(&self) -> f64 {
        let c = self.center.abs_upper();
        if c.is_zero() {
            return self.radius.log2_approx();
        }
        self.radius.log2_approx() - c.log2_approx()
    }
}

fn horner(coeffs: &[CBall], z: &CBall) -> CBall {
    let mut acc = CBall::zero(z.prec());
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

fn horner_with_derivative(coeffs: &[CBall], z: &CBall) -> (CBall, CBall) {
    let mut p = CBall::zero(z.prec());
    let mut dp = CBall::zero(z.prec());
    for c in coeffs.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

fn log2_abs(z: &CBall) -> Option<f64> {
    let m = z.abs_upper();
    (!m.is_zero()).then(|| m.log2_approx())
}

fn polar(log2_mag: f64, theta: f64, prec: u32) -> CBall {
    let e = log2_mag.floor();
    let f = 2f64.powf(log2_mag - e);
    CBall::new(Ball::from_f64_exp(f * theta.cos(), e as i64, prec), Ball::from_f64_exp(f * theta.sin(), e as i64, prec))
}

/// Initial approximations from the upper convex hull of `(i, log2 |c_i|)`.
pub fn newton_polygon_guesses(coeffs: &[CBall], prec: u32) -> Vec<CBall> {
    let n = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> =
        coeffs.iter().enumerate().filter_map(|(i, c)| log2_abs(&c.midpoint()).map(|l| (i, l))).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    let first = hull[0].0;
    let mut min_mag = f64::INFINITY;
    for w in hull.windows(2) {
        let ((i, li), (k, lk)) = (w[0], w[1]);
        let m = k - i;
        let lu = (li - lk) / m as f64;
        min_mag = min_mag.min(lu);
        for j in 0..m {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.37) / m as f64 + 0.61 * (i as f64 + 1.0);
            out.push(polar(lu, theta, prec));
        }
    }
    let lz = if min_mag.is_finite() { min_mag - 8.0 } else { 0.0 };
    for j in 0..first {
        let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.21) / first as f64;
        out.push(polar(lz, theta, prec));
    }
    out
}

/// Aberth iteration on midpoints; returns refined approximations.
pub fn aberth(coeffs: &[CBall], init: Vec<CBall>, prec: u32, max_iter: usize) -> Vec<CBall> {
    let mids: Vec<CBall> = coeffs.iter().map(|c| c.midpoint().with_prec(prec)).collect();
    let mut z: Vec<CBall> = init.into_iter().map(|v| v.midpoint().with_prec(prec)).collect();
    let n = z.len();
    let scale = z.iter().filter_map(log2_abs).fold(f64::NEG_INFINITY, f64::max);
    let tiny = if scale.is_finite() { scale - prec as f64 } else { -(prec as f64) };
    let mut last = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    for it in 0..max_iter {
        let mut converged = true;
        for i in 0..n {
            if settled[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(&mids, &z[i]);
            let p = p.midpoint();
            if p.re.contains_zero() && p.im.contains_zero() {
                continue;
            }
            let mut s = CBall::zero(prec);
            for j in 0..n {
                if j != i {
                    if let Some(inv) = CBall::one(prec).checked_div(&z[i].sub(&z[j]).midpoint()) {
                        s = s.add(&inv.midpoint());
                    }
                }
            }
            let Some(ratio) = p.checked_div(&dp.midpoint()) else {
                // stationary point: nudge
                z[i] = z[i].add(&polar(tiny + 20.0, 1.0 + it as f64, prec)).midpoint();
                converged = false;
                continue;
            };
            let den = CBall::one(prec).sub(&ratio.midpoint().mul(&s));
            let w = match ratio.midpoint().checked_div(&den.midpoint()) {
                Some(w) => w.midpoint(),
                None => ratio.midpoint(),
            };
            let lw = log2_abs(&w).unwrap_or(f64::NEG_INFINITY);
            let lz = log2_abs(&z[i]).unwrap_or(f64::NEG_INFINITY).max(tiny);
            z[i] = z[i].sub(&w).midpoint();
            // settle on full accuracy, or once corrections stop shrinking
            // past half precision (rounding noise)
            if lw <= lz - prec as f64 + 8.0 || (lw <= lz - prec as f64 / 2.0 && lw > last[i] - 4.0) {
                settled[i] = true;
            } else {
                converged = false;
            }
            last[i] = lw;
        }
        if converged {
            break;
        }
    }
    z
}

fn newton_polygon_f64(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let pts: Vec<(usize, f64)> =
        c.iter().enumerate().filter(|(_, v)| v.norm() > 0.0).map(|(i, v)| (i, v.norm().log2())).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    let mut min_mag = f64::INFINITY;
    for w in hull.windows(2) {
        let ((i, li), (k, lk)) = (w[0], w[1]);
        let m = k - i;
        let lu = (li - lk) / m as f64;
        min_mag = min_mag.min(lu);
        for j in 0..m {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.37) / m as f64 + 0.61 * (i as f64 + 1.0);
            out.push(Complex64::from_polar(lu.exp2(), theta));
        }
    }
    let first = hull[0].0;
    let lz = if min_mag.is_finite() { min_mag - 8.0 } else { 0.0 };
    for j in 0..first {
        let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.21) / first as f64;
        out.push(Complex64::from_polar(lz.exp2(), theta));
    }
    out
}

/// Complex division without the overflow of `|b|^2`.
fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    let m = b.re.abs().max(b.im.abs());
    if m == 0.0 || !m.is_finite() {
        return a / b;
    }
    let (a, b) = (a / m, b / m);
    a * b.conj() / b.norm_sqr()
}

/// Double-precision Aberth phase; `None` when the coefficients or roots do
/// not fit the f64 range.
fn aberth_f64(coeffs: &[CBall]) -> Option<Vec<Complex64>> {
    let exps: Vec<Option<f64>> = coeffs.iter().map(|c| log2_abs(&c.midpoint())).collect();
    let emax = exps.iter().flatten().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if !emax.is_finite() {
        return None;
    }
    let shift = emax.floor() as i64;
    let c: Vec<Complex64> = coeffs
        .iter()
        .map(|b| {
            let (re, im) = (b.re.midpoint().mul_2exp(-shift), b.im.midpoint().mul_2exp(-shift));
            Complex64::new(re.to_f64(), im.to_f64())
        })
        .collect();
    if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) || c.last()?.norm() < 1e-280 {
        return None;
    }
    let mut z = newton_polygon_f64(&c);
    if z.iter().any(|v| !v.norm().is_finite() || v.norm() > 1e150 || (v.norm() < 1e-150 && v.norm() > 0.0)) {
        return None;
    }
    let n = z.len();
    let mut settled = vec![false; n];
    for _ in 0..500 {
        let mut all = true;
        for i in 0..n {
            if settled[i] {
                continue;
            }
            let zi = z[i];
            let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for a in c.iter().rev() {
                dp = dp * zi + p;
                p = p * zi + a;
            }
            if p.norm() == 0.0 {
                settled[i] = true;
                continue;
            }
            let one = Complex64::new(1.0, 0.0);
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| cdiv(one, zi - z[j])).sum();
            let ratio = cdiv(p, dp);
            let mut w = cdiv(ratio, one - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                w = Complex64::new(1e-3 * (1.0 + zi.norm()), 1e-3 * (1.0 + zi.norm()));
            }
            z[i] = zi - w;
            if w.norm() <= 1e-14 * zi.norm().max(1e-300) {
                settled[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    z.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(z)
}

/// Inclusion discs for the roots of every polynomial inside the coefficient
/// balls, centered at the given approximations.
pub fn certify(coeffs: &[CBall], approx: &[CBall]) -> Result<Vec<RootDisc>, RootError> {
    let n = coeffs.len() - 1;
    let prec = coeffs.iter().map(|c| c.prec()).max().unwrap_or(64);
    let lead_lo = coeffs[n].abs_lower();
    if lead_lo.is_zero() {
        return Err(RootError::LeadingCoefficientNotNonzero);
    }
    let mut out = Vec::with_capacity(n);
    for (i, zi) in approx.iter().enumerate() {
        let zi = zi.midpoint();
        let p = horner(coeffs, &zi);
        let mut den = lead_lo;
        for (j, zj) in approx.iter().enumerate() {
            if j != i {
                let d = zi.sub(&zj.midpoint()).abs_lower();
                if d.is_zero() {
                    return Err(RootError::Degenerate(prec));
                }
                den = den.mul_down(&d);
            }
        }
        let w = p.abs_upper().div(&den);
        out.push(RootDisc { center: zi, radius: w.mul(&Mag::from_u64(n as u64)) });
    }
    Ok(out)
}

/// Certifies double-precision approximations without refinement; cheap and
/// sufficient when roots are well separated. Falls back to
/// [`isolate_roots`] outside the f64 range.
pub fn isolate_roots_quick(coeffs: &[CBall]) -> Result<Vec<RootDisc>, RootError> {
    if coeffs.len() < 2 {
        return Err(RootError::Constant);
    }
    if coeffs[coeffs.len() - 1].abs_lower().is_zero() {
        return Err(RootError::LeadingCoefficientNotNonzero);
    }
    let prec = coeffs.iter().map(|c| c.prec()).max().unwrap_or(64);
    match aberth_f64(coeffs) {
        Some(z) => {
            let z: Vec<CBall> =
                z.into_iter().map(|c| CBall::new(Ball::from_f64(c.re, prec), Ball::from_f64(c.im, prec))).collect();
            certify(coeffs, &z)
        }
        None => isolate_roots(coeffs, prec, None),
    }
}

/// Approximates and certifies all roots at `prec` bits. `init`, when given,
/// seeds the iteration (e.g. from a lower-precision run).
pub fn isolate_roots(coeffs: &[CBall], prec: u32, init: Option<&[CBall]>) -> Result<Vec<RootDisc>, RootError> {
    if coeffs.len() < 2 {
        return Err(RootError::Constant);
    }
    if coeffs[coeffs.len() - 1].abs_lower().is_zero() {
        return Err(RootError::LeadingCoefficientNotNonzero);
    }
    let approx = match init {
        Some(z) if z.len() == coeffs.len() - 1 => aberth(coeffs, z.to_vec(), prec, 60),
        _ => {
            let low = 64u32.min(prec);
            let z = match aberth_f64(coeffs) {
                Some(z) => {
                    z.into_iter().map(|c| CBall::new(Ball::from_f64(c.re, low), Ball::from_f64(c.im, low))).collect()
                }
                None => {
                    let g = newton_polygon_guesses(coeffs, low);
                    aberth(coeffs, g, low, 400)
                }
            };
            aberth(coeffs, z, prec, 80)
        }
    };
    certify(coeffs, &approx)
}
