//! Explicit bounds on the order of the root of unity and on the
//! discriminant of a special point, and the cap function `u`.

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::interval::Interval;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("u(a) requires a > e, got {0}")]
    ArgumentTooSmall(f64),
    #[error("invalid bound input: {0}")]
    InvalidInput(String),
}

/// Degree and height data of a curve `F` over a number field of degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundInput {
    pub d: u64,
    pub delta1: u64,
    pub delta2: u64,
    /// Logarithmic height of `F`.
    pub h_f: f64,
}

impl BoundInput {
    pub fn validate(&self) -> Result<(), BoundsError> {
        if self.d == 0 || self.delta1 == 0 || self.delta2 == 0 {
            return Err(BoundsError::InvalidInput("d, delta1 and delta2 must be positive".into()));
        }
        if !(self.h_f >= 0.0) || !self.h_f.is_finite() {
            return Err(BoundsError::InvalidInput("height must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// All explicit quantities for one input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    /// `max(8, d * delta2)`.
    pub a: f64,
    /// Every admissible order `N`, ascending.
    pub n_candidates: Vec<u64>,
    /// Upper bound on `N`, rounded upward.
    pub n_cap: f64,
    /// Upper bound on `|D|`, rounded upward.
    pub delta_cap: f64,
}

/// Enclosure of `u(a) = a^(1 + 2 / log log a)` for `a > e`.
pub fn u_interval(a: Interval) -> Interval {
    assert!(a.lo > std::f64::consts::E, "u needs a > e");
    let la = a.ln();
    let lla = la.ln();
    let e = Interval::point(1.0).add(Interval::point(2.0).div(lla));
    // the exponent decreases in a while the base increases; mul handles both ends
    la.mul(e).exp()
}

/// `u(a)` rounded upward.
pub fn u_func(a: f64) -> Result<f64, BoundsError> {
    if !(a > std::f64::consts::E) || !a.is_finite() {
        return Err(BoundsError::ArgumentTooSmall(a));
    }
    Ok(u_interval(Interval::point(a)).hi)
}

fn a_value(d: u64, delta2: u64) -> u64 {
    (d * delta2).max(8)
}

/// True if `phi(n) / 2^(omega - c1 - c2) <= bound`.
pub fn satisfies_order_filter(phi: u64, omega: u32, c1: i32, c2: i32, bound: u64) -> bool {
    let e = omega as i64 - c1 as i64 - c2 as i64;
    if e >= 0 {
        (phi as u128) <= (bound as u128) << e.min(100)
    } else {
        ((phi as u128) << (-e)) <= bound as u128
    }
}

/// Every `N` with `phi(N) / 2^(omega(N) - c1(N) - c2(N)) <= d * delta2`.
pub fn n_candidates(d: u64, delta2: u64) -> Vec<u64> {
    let a = a_value(d, delta2) as f64;
    let limit = u_func(a).expect("a >= 8").ceil() as u64;
    n_candidates_up_to(d * delta2, limit)
}

/// The order filter applied to `1..=limit`.
pub fn n_candidates_up_to(bound: u64, limit: u64) -> Vec<u64> {
    let (phi, omega) = arith::phi_omega_table(limit as usize);
    (1..=limit)
        .filter(|&n| satisfies_order_filter(phi[n as usize], omega[n as usize], arith::c1(n), arith::c2(n), bound))
        .collect()
}

/// The cap `a^(2 + 5/log log a) (d h + (d-1)(delta1 + delta2) log 2 + 1)^2`, rounded upward.
pub fn delta_cap(input: &BoundInput) -> Result<f64, BoundsError> {
    input.validate()?;
    let a = Interval::point(a_value(input.d, input.delta2) as f64);
    let la = a.ln();
    let e = Interval::point(2.0).add(Interval::point(5.0).div(la.ln()));
    let base = la.mul(e).exp();
    let d = Interval::from_u64(input.d);
    let lin = d
        .mul(Interval::point(input.h_f))
        .add(Interval::from_u64(input.d - 1).mul(Interval::from_u64(input.delta1 + input.delta2)).mul(Interval::ln2()))
        .add(Interval::point(1.0));
    Ok(base.mul(lin.sqr()).hi)
}

pub fn compute_bounds(input: &BoundInput) -> Result<BoundReport, BoundsError> {
    input.validate()?;
    let a = a_value(input.d, input.delta2) as f64;
    Ok(BoundReport {
        a,
        n_candidates: n_candidates(input.d, input.delta2),
        n_cap: u_func(a)?,
        delta_cap: delta_cap(input)?,
    })
}
