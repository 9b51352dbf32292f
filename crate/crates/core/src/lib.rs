//! Effective enumeration of special points on curves in `P^1 x G_m`.
//!
//! A special point is a pair `(j(tau), lambda)` with `tau` imaginary
//! quadratic and `lambda` a root of unity. The crate computes explicit bounds
//! on the order of `lambda` and the discriminant of `tau`, and enumerates all
//! special points on a plane curve `F(X, Y) = 0` with exact certificates.

// `!(a < b)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod ball;
pub mod bounds;
pub mod cm;
pub mod interval;
pub mod poly;
pub mod roots;
pub mod solver;
pub mod verify;

/// Environment variable holding an optional global precision cap in bits.
pub const PRECISION_CAP_ENV: &str = "SPECPOINT_PRECISION_CAP";

/// The precision cap from [`PRECISION_CAP_ENV`], if set to a positive integer.
pub fn precision_cap() -> Option<u32> {
    std::env::var(PRECISION_CAP_ENV).ok().and_then(|s| s.trim().parse::<u32>().ok()).filter(|&v| v >= 64)
}
