//! Arbitrary-precision ball arithmetic.
//!
//! A [`Ball`] is a dyadic midpoint `mid * 2^exp` together with a radius that
//! is an upper bound on the distance to the true value. Every operation
//! rounds the midpoint to the working precision and adds the rounding error
//! (and the propagated input radii) to the radius, so the true result always
//! lies in the output ball. [`Mag`] is the radius type: an unsigned
//! 32-bit-mantissa float whose operations round upward.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const MAG_BITS: u32 = 32;

/// Nonnegative upper bound `man * 2^exp`, with `man` zero or in `[2^31, 2^32)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };

    fn normalize_up(man: u128, exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - man.leading_zeros();
        if bits > MAG_BITS {
            let shift = bits - MAG_BITS;
            let mask = (1u128 << shift) - 1;
            let mut m = (man >> shift) as u64 + u64::from(man & mask != 0);
            let mut e = exp + shift as i64;
            if m == 1u64 << MAG_BITS {
                m >>= 1;
                e += 1;
            }
            Mag { man: m, exp: e }
        } else {
            let shift = MAG_BITS - bits;
            Mag { man: (man << shift) as u64, exp: exp - shift as i64 }
        }
    }

    fn normalize_down(man: u128, exp: i64) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - man.leading_zeros();
        if bits > MAG_BITS {
            let shift = bits - MAG_BITS;
            Mag { man: (man >> shift) as u64, exp: exp + shift as i64 }
        } else {
            let shift = MAG_BITS - bits;
            Mag { man: (man << shift) as u64, exp: exp - shift as i64 }
        }
    }

    /// Exactly `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag::normalize_up(1, e)
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::normalize_up(v as u128, 0)
    }

    /// Upper bound for `n * 2^exp`.
    pub fn from_biguint_up(n: &BigUint, exp: i64) -> Mag {
        let bits = n.bits();
        if bits <= 64 {
            return Mag::normalize_up(n.to_u64().unwrap() as u128, exp);
        }
        let shift = bits - 64;
        let top: BigUint = n >> shift;
        // +1 covers the discarded low bits
        Mag::normalize_up(top.to_u64().unwrap() as u128 + 1, exp + shift as i64)
    }

    /// Lower bound for `n * 2^exp`.
    pub fn from_biguint_down(n: &BigUint, exp: i64) -> Mag {
        let bits = n.bits();
        if bits <= 64 {
            return Mag::normalize_down(n.to_u64().unwrap() as u128, exp);
        }
        let shift = bits - 64;
        let top: BigUint = n >> shift;
        Mag::normalize_down(top.to_u64().unwrap() as u128, exp + shift as i64)
    }

    /// Upper bound for an `f64` (used only for estimates that must not undershoot).
    pub fn from_f64_up(v: f64) -> Mag {
        assert!(v.is_finite() && v >= 0.0);
        if v == 0.0 {
            return Mag::ZERO;
        }
        let (man, exp, _) = num_traits::Float::integer_decode(v);
        Mag::normalize_up(man as u128, exp as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub fn add(&self, other: &Mag) -> Mag {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let d = (hi.exp - lo.exp) as u64;
        let lo_shifted: u128 = if d >= 64 {
            1
        } else {
            let m = lo.man as u128;
            (m >> d) + u128::from(m & ((1u128 << d) - 1) != 0)
        };
        Mag::normalize_up(hi.man as u128 + lo_shifted, hi.exp)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalize_up(self.man as u128 * other.man as u128, self.exp + other.exp)
    }

    /// Lower bound for the product.
    pub fn mul_down(&self, other: &Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalize_down(self.man as u128 * other.man as u128, self.exp + other.exp)
    }

    /// Upper bound for `self / other`; `other` must be nonzero.
    pub fn div(&self, other: &Mag) -> Mag {
        assert!(!other.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let num = (self.man as u128) << 64;
        let q = num / other.man as u128 + 1;
        Mag::normalize_up(q, self.exp - other.exp - 64)
    }

    pub fn mul_2exp(&self, k: i64) -> Mag {
        if self.is_zero() {
            *self
        } else {
            Mag { man: self.man, exp: self.exp + k }
        }
    }

    /// Smallest `e` with `self <= 2^e`; `None` for zero.
    pub fn log2_ceil(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let e = self.exp + MAG_BITS as i64;
        if self.man == 1u64 << (MAG_BITS - 1) {
            Some(e - 1)
        } else {
            Some(e)
        }
    }

    /// Approximate base-2 logarithm (exact up to f64 rounding of the mantissa).
    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        (self.man as f64).log2() + self.exp as f64
    }

    /// Conversion to `f64`, rounded up; overflows to infinity.
    pub fn to_f64_up(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.exp < -1000 {
            return f64::MIN_POSITIVE;
        }
        self.man as f64 * 2f64.powi(self.exp.min(1100) as i32)
    }

    /// Conversion to `f64`, rounded down.
    pub fn to_f64_down(&self) -> f64 {
        if self.is_zero() || self.exp < -1000 {
            return 0.0;
        }
        self.man as f64 * 2f64.powi(self.exp.min(1100) as i32) * (1.0 - f64::EPSILON)
    }

    /// The bound as an integer count of units `2^unit_exp`, rounded up.
    pub fn to_units_up(&self, unit_exp: i64) -> BigUint {
        if self.is_zero() {
            return BigUint::zero();
        }
        let d = self.exp - unit_exp;
        if d >= 0 {
            BigUint::from(self.man) << d as u64
        } else {
            let d = (-d) as u64;
            if d >= 64 {
                BigUint::one()
            } else {
                let m = self.man;
                BigUint::from((m >> d) + u64::from(m & ((1u64 << d) - 1) != 0))
            }
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.exp.cmp(&other.exp).then_with(|| self.man.cmp(&other.man)),
        }
    }
}

fn shr_round(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let (sign, mag) = (m.sign(), m.magnitude());
    let half = BigUint::one() << (s - 1);
    let r: BigUint = (mag + half) >> s;
    BigInt::from_biguint(if r.is_zero() { Sign::NoSign } else { sign }, r)
}

/// Rounds `mid * 2^exp` to at most `prec` bits; returns the new midpoint,
/// exponent and the rounding error bound.
fn round_mid(mid: BigInt, exp: i64, prec: u32) -> (BigInt, i64, Mag) {
    let bits = mid.bits();
    if bits <= prec as u64 {
        return (mid, exp, Mag::ZERO);
    }
    let s = bits - prec as u64;
    let r = shr_round(&mid, s);
    let e = exp + s as i64;
    // round-to-nearest error is at most half a unit at the new exponent
    (r, e, Mag::pow2(e - 1))
}

/// A real ball `[mid * 2^exp - rad, mid * 2^exp + rad]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    mid: BigInt,
    exp: i64,
    rad: Mag,
    prec: u32,
}

impl Ball {
    fn new(mid: BigInt, exp: i64, rad: Mag, prec: u32) -> Ball {
        let (mid, exp, err) = round_mid(mid, exp, prec);
        Ball { mid, exp, rad: rad.add(&err), prec }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball { mid: BigInt::zero(), exp: 0, rad: Mag::ZERO, prec }
    }

    pub fn one(prec: u32) -> Ball {
        Ball::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Ball {
        Ball::new(BigInt::from(v), 0, Mag::ZERO, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Ball {
        Ball::new(v.clone(), 0, Mag::ZERO, prec)
    }

    /// The exact dyadic number `mid * 2^exp`, rounded to `prec` bits.
    pub fn from_dyadic(mid: BigInt, exp: i64, prec: u32) -> Ball {
        Ball::new(mid, exp, Mag::ZERO, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Ball {
        let num = Ball::from_bigint(q.numer(), prec + 8);
        let den = Ball::from_bigint(q.denom(), prec + 8);
        num.div(&den).with_prec(prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Ball {
        assert!(v.is_finite());
        let (man, exp, sign) = num_traits::Float::integer_decode(v);
        Ball::new(BigInt::from(man) * BigInt::from(sign), exp as i64, Mag::ZERO, prec)
    }

    /// `m * 2^e` for an `f64` mantissa and a wide exponent.
    pub fn from_f64_exp(m: f64, e: i64, prec: u32) -> Ball {
        Ball::from_f64(m, prec).mul_2exp(e)
    }

    /// Ball containing every real number within `rad` of `self`'s midpoint.
    pub fn with_rad(mut self, rad: Mag) -> Ball {
        self.rad = rad;
        self
    }

    pub fn add_rad(mut self, extra: Mag) -> Ball {
        self.rad = self.rad.add(&extra);
        self
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    /// The midpoint as an exact ball of radius zero.
    pub fn midpoint(&self) -> Ball {
        Ball { mid: self.mid.clone(), exp: self.exp, rad: Mag::ZERO, prec: self.prec }
    }

    pub fn mid_rational(&self) -> BigRational {
        dyadic_rational(&self.mid, self.exp)
    }

    pub fn lower_rational(&self) -> BigRational {
        self.mid_rational() - mag_rational(&self.rad)
    }

    pub fn upper_rational(&self) -> BigRational {
        self.mid_rational() + mag_rational(&self.rad)
    }

    pub fn with_prec(&self, prec: u32) -> Ball {
        Ball::new(self.mid.clone(), self.exp, self.rad, prec)
    }

    fn top(&self) -> i64 {
        if self.mid.is_zero() {
            i64::MIN / 4
        } else {
            self.exp + self.mid.bits() as i64
        }
    }

    /// Upper bound on `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_biguint_up(self.mid.magnitude(), self.exp).add(&self.rad)
    }

    /// Lower bound on `|x|` over the ball (zero if the ball contains zero).
    pub fn abs_lower(&self) -> Mag {
        if self.mid.is_zero() {
            return Mag::ZERO;
        }
        let r = self.rad.to_units_up(self.exp);
        let m = self.mid.magnitude();
        if &r >= m {
            Mag::ZERO
        } else {
            Mag::from_biguint_down(&(m - r), self.exp)
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    /// True if every point of the ball is > 0.
    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && !self.contains_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && !self.contains_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn certainly_lt(&self, other: &Ball) -> bool {
        other.sub(self).is_positive()
    }

    pub fn certainly_gt(&self, other: &Ball) -> bool {
        self.sub(other).is_positive()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.sub(other).contains_zero()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let d = self.mid_rational() - q;
        d.abs() <= mag_rational(&self.rad)
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: -&self.mid, exp: self.exp, rad: self.rad, prec: self.prec }
    }

    pub fn abs(&self) -> Ball {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_2exp(&self, k: i64) -> Ball {
        Ball {
            mid: self.mid.clone(),
            exp: if self.mid.is_zero() { 0 } else { self.exp + k },
            rad: self.rad.mul_2exp(k),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        if self.mid.is_zero() {
            return Ball::new(other.mid.clone(), other.exp, other.rad.add(&self.rad), prec);
        }
        if other.mid.is_zero() {
            return Ball::new(self.mid.clone(), self.exp, self.rad.add(&other.rad), prec);
        }
        let floor = self.top().max(other.top()) - prec as i64 - 4;
        let e = self.exp.min(other.exp).max(floor);
        let (a, ea) = align_to(&self.mid, self.exp, e);
        let (b, eb) = align_to(&other.mid, other.exp, e);
        let rad = self.rad.add(&other.rad).add(&ea).add(&eb);
        Ball::new(a + b, e, rad, prec)
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let mut rad = Mag::ZERO;
        if !other.rad.is_zero() {
            rad = rad.add(&Mag::from_biguint_up(self.mid.magnitude(), self.exp).mul(&other.rad));
        }
        if !self.rad.is_zero() {
            rad = rad.add(&Mag::from_biguint_up(other.mid.magnitude(), other.exp).mul(&self.rad));
            rad = rad.add(&self.rad.mul(&other.rad));
        }
        Ball::new(&self.mid * &other.mid, self.exp + other.exp, rad, prec)
    }

    pub fn sqr(&self) -> Ball {
        self.mul(self)
    }

    pub fn mul_int(&self, k: &BigInt) -> Ball {
        let rad = self.rad.mul(&Mag::from_biguint_up(k.magnitude(), 0));
        Ball::new(&self.mid * k, self.exp, rad, self.prec)
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul_int(&BigInt::from(k))
    }

    /// Division; returns `None` when the divisor ball contains zero.
    pub fn checked_div(&self, other: &Ball) -> Option<Ball> {
        let lower = other.abs_lower();
        if lower.is_zero() {
            return None;
        }
        let prec = self.prec.max(other.prec);
        let (q, qexp) = if self.mid.is_zero() {
            (BigInt::zero(), 0)
        } else {
            let s = (prec as i64 + other.mid.bits() as i64 - self.mid.bits() as i64 + 4).max(0);
            let num: BigInt = &self.mid << s as u64;
            (num / &other.mid, self.exp - other.exp - s)
        };
        // truncation error is below one unit in the last place
        let mut rad = if q.is_zero() && self.mid.is_zero() { Mag::ZERO } else { Mag::pow2(qexp) };
        let num = Mag::from_biguint_up(self.mid.magnitude(), self.exp)
            .mul(&other.rad)
            .add(&Mag::from_biguint_up(other.mid.magnitude(), other.exp).mul(&self.rad));
        if !num.is_zero() {
            rad = rad.add(&num.div(&lower.mul(&lower)));
        }
        Some(Ball::new(q, qexp, rad, prec))
    }

    pub fn div(&self, other: &Ball) -> Ball {
        self.checked_div(other).expect("ball division by a ball containing zero")
    }

    /// Division by a nonzero integer.
    pub fn div_i64(&self, k: i64) -> Ball {
        assert!(k != 0);
        self.div(&Ball::from_i64(k, self.prec))
    }

    /// Square root of a nonnegative integer.
    pub fn sqrt_u64(n: u64, prec: u32) -> Ball {
        let k = prec as u64 + 2;
        let scaled = BigUint::from(n) << (2 * k);
        let s = scaled.sqrt();
        // floor(sqrt) is within one unit below the true value
        let mid = BigInt::from(s) * 2 + 1;
        Ball::new(mid, -(k as i64) - 1, Mag::pow2(-(k as i64) - 1), prec)
    }

    /// Approximate value as `f64` (midpoint); may overflow to infinity.
    pub fn to_f64(&self) -> f64 {
        let (m, e) = self.to_f64_exp();
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// Midpoint as `m * 2^e` with `|m|` in `[0.5, 1)` (or zero).
    pub fn to_f64_exp(&self) -> (f64, i64) {
        if self.mid.is_zero() {
            return (0.0, 0);
        }
        let bits = self.mid.bits();
        let shift = bits.saturating_sub(60);
        let top = shr_round(&self.mid, shift).to_f64().unwrap();
        let e = self.exp + shift as i64;
        let l = bits as i64 - shift as i64;
        (top / 2f64.powi(l as i32), e + l)
    }

    /// Upper bound on `log2 |x|` over the ball; `-inf` only for the exact zero.
    pub fn log2_upper(&self) -> f64 {
        let m = self.abs_upper();
        if m.is_zero() {
            f64::NEG_INFINITY
        } else {
            m.log2_approx() + 1e-9
        }
    }

    /// Nearest integer to the midpoint and a rigorous upper bound on the
    /// distance from any point of the ball to that integer.
    pub fn nearest_integer(&self) -> (BigInt, Mag) {
        let r = self.mid_rational().round();
        let n = r.to_integer();
        let d = (self.mid_rational() - BigRational::from_integer(n.clone())).abs();
        let dist = rational_mag_up(&d);
        (n, dist.add(&self.rad))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} +/- {:.3e}", self.to_f64(), self.rad.to_f64_up())
    }
}

fn dyadic_rational(mid: &BigInt, exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_integer(mid << exp as u64)
    } else {
        BigRational::new(mid.clone(), BigInt::one() << (-exp) as u64)
    }
}

pub fn mag_rational(m: &Mag) -> BigRational {
    dyadic_rational(&BigInt::from(m.man), m.exp)
}

fn rational_mag_up(q: &BigRational) -> Mag {
    if q.is_zero() {
        return Mag::ZERO;
    }
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    let shift = 64i64 + den.bits() as i64 - num.bits() as i64;
    let scaled: BigUint =
        if shift >= 0 { (num << shift as u64) / den + 1u32 } else { (num >> (-shift) as u64) / den + 1u32 };
    Mag::from_biguint_up(&scaled, -shift)
}

/// Rewrites `mid * 2^exp` at exponent `e`; rounding when `e > exp`.
fn align_to(mid: &BigInt, exp: i64, e: i64) -> (BigInt, Mag) {
    if exp >= e {
        return (mid << (exp - e) as u64, Mag::ZERO);
    }
    let s = (e - exp) as u64;
    if s > mid.bits() + 1 {
        // the whole value is absorbed into the radius
        return (BigInt::zero(), Mag::from_biguint_up(mid.magnitude(), exp));
    }
    (shr_round(mid, s), Mag::pow2(e - 1))
}

/// A complex ball: independent real and imaginary balls.
#[derive(Clone, Debug, PartialEq)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> CBall {
        CBall { re, im }
    }

    pub fn from_real(re: Ball) -> CBall {
        let prec = re.prec();
        CBall { re, im: Ball::zero(prec) }
    }

    pub fn zero(prec: u32) -> CBall {
        CBall::from_real(Ball::zero(prec))
    }

    pub fn one(prec: u32) -> CBall {
        CBall::from_real(Ball::one(prec))
    }

    pub fn i(prec: u32) -> CBall {
        CBall::new(Ball::zero(prec), Ball::one(prec))
    }

    pub fn from_i64(v: i64, prec: u32) -> CBall {
        CBall::from_real(Ball::from_i64(v, prec))
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> CBall {
        CBall::from_real(Ball::from_bigint(v, prec))
    }

    pub fn from_rational(v: &BigRational, prec: u32) -> CBall {
        CBall::from_real(Ball::from_rational(v, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> CBall {
        CBall::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn midpoint(&self) -> CBall {
        CBall::new(self.re.midpoint(), self.im.midpoint())
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> CBall {
        CBall::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> CBall {
        CBall::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        if o.im.is_exact() && o.im.mid.is_zero() {
            return self.mul_real(&o.re);
        }
        if self.im.is_exact() && self.im.mid.is_zero() {
            return o.mul_real(&self.re);
        }
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        CBall::new(re, im)
    }

    pub fn sqr(&self) -> CBall {
        let re = self.re.sqr().sub(&self.im.sqr());
        let im = self.re.mul(&self.im).mul_2exp(1);
        CBall::new(re, im)
    }

    pub fn mul_real(&self, r: &Ball) -> CBall {
        CBall::new(self.re.mul(r), self.im.mul(r))
    }

    pub fn mul_int(&self, k: &BigInt) -> CBall {
        CBall::new(self.re.mul_int(k), self.im.mul_int(k))
    }

    pub fn mul_2exp(&self, k: i64) -> CBall {
        CBall::new(self.re.mul_2exp(k), self.im.mul_2exp(k))
    }

    pub fn div_i64(&self, k: i64) -> CBall {
        CBall::new(self.re.div_i64(k), self.im.div_i64(k))
    }

    pub fn norm_sqr(&self) -> Ball {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn checked_div(&self, o: &CBall) -> Option<CBall> {
        let den = o.norm_sqr();
        let num = self.mul(&o.conj());
        Some(CBall::new(num.re.checked_div(&den)?, num.im.checked_div(&den)?))
    }

    pub fn div(&self, o: &CBall) -> CBall {
        self.checked_div(o).expect("complex ball division by a ball containing zero")
    }

    pub fn pow(&self, mut k: u64) -> CBall {
        let mut base = self.clone();
        let mut acc = CBall::one(self.prec());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Upper bound on `|z|` over the ball (via `|re| + |im|`).
    pub fn abs_upper(&self) -> Mag {
        self.re.abs_upper().add(&self.im.abs_upper())
    }

    /// Lower bound on `|z|` over the ball.
    pub fn abs_lower(&self) -> Mag {
        self.re.abs_lower().max(self.im.abs_lower())
    }

    /// Widens both components by `r`, so the ball covers the disc of radius `r`.
    pub fn add_error(&self, r: Mag) -> CBall {
        CBall::new(self.re.clone().add_rad(r), self.im.clone().add_rad(r))
    }

    /// Largest component radius.
    pub fn rad(&self) -> Mag {
        self.re.rad().max(self.im.rad())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + i({})", self.re, self.im)
    }
}

fn atan_inv_fixed(k: u64, w: u64) -> (BigInt, u64) {
    // sum_{n>=0} (-1)^n / ((2n+1) k^(2n+1)) scaled by 2^w, floors throughout
    let k2 = BigInt::from(k * k);
    let mut power = (BigInt::one() << w) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * n + 1);
        if n.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        n += 1;
    }
    // each term is off by at most 3 units, and the tail is below one unit
    (sum, 3 * n + 3)
}

static PI_CACHE: Mutex<BTreeMap<u32, Ball>> = Mutex::new(BTreeMap::new());

/// Enclosure of pi at `prec` bits.
///
/// Each precision is served from a fixed power-of-two tier, so results do
/// not depend on earlier calls.
pub fn pi(prec: u32) -> Ball {
    let tier = prec.max(64).next_power_of_two();
    if let Some(cached) = PI_CACHE.lock().unwrap().get(&tier) {
        return cached.with_prec(prec);
    }
    let w = tier as u64 + 32;
    let (a, ea) = atan_inv_fixed(5, w);
    let (b, eb) = atan_inv_fixed(239, w);
    let mid = a * 16 - b * 4;
    let err = 16 * ea + 4 * eb;
    let ball = Ball::new(mid, -(w as i64), Mag::from_u64(err).mul_2exp(-(w as i64)), tier);
    PI_CACHE.lock().unwrap().insert(tier, ball.clone());
    ball.with_prec(prec)
}

/// Complex exponential by argument halving, Taylor series and repeated squaring.
pub fn cexp(z: &CBall, prec: u32) -> CBall {
    let mag = z.abs_upper();
    // halve until |w| <= 2^-r, balancing series length against squarings
    let r = ((prec as f64).sqrt().ceil() as i64).max(10);
    let s = match mag.log2_ceil() {
        None => return CBall::one(prec),
        Some(l) => (l + r).max(0),
    };
    let wp = prec + s as u32 + 24;
    let w = z.with_prec(wp).mul_2exp(-s);
    let lw = w.abs_upper().log2_ceil().unwrap_or(-r).min(-1);
    // tail of sum_{n>K} |w|^n/n! is at most 2 |w|^(K+1)
    let terms = (wp as i64 / (-lw)) + 2;
    let mut sum = CBall::one(wp);
    let mut term = CBall::one(wp);
    for n in 1..=terms {
        term = term.mul(&w).div_i64(n);
        sum = sum.add(&term);
    }
    let tail = Mag::pow2(lw * (terms + 1) + 1);
    let mut acc = sum.add_error(tail);
    for _ in 0..s {
        acc = acc.sqr();
    }
    acc.with_prec(prec)
}

/// `exp(2 pi i k / n)`.
pub fn root_of_unity(k: i64, n: u64, prec: u32) -> CBall {
    let wp = prec + 16;
    let k = k.rem_euclid(n as i64);
    let angle = pi(wp).mul_i64(2 * k).div_i64(n as i64);
    cexp(&CBall::new(Ball::zero(wp), angle), wp).with_prec(prec)
}

/// Rational numbers in lowest terms as a reduced dyadic check.
pub fn is_dyadic(q: &BigRational) -> bool {
    let d = q.denom();
    d.is_one() || (d & (d - BigInt::one())).is_zero()
}

/// Greatest common divisor helper for ball-adjacent integer code.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn mag_rounds_up() {
        let a = Mag::from_u64(3);
        let b = Mag::from_u64(5);
        assert!(mag_rational(&a.add(&b)) >= q(8, 1));
        assert!(mag_rational(&a.mul(&b)) >= q(15, 1));
        assert!(mag_rational(&a.div(&b)) >= q(3, 5));
        let big = BigUint::from(u128::MAX) * 7u32;
        let up = Mag::from_biguint_up(&big, -3);
        let down = Mag::from_biguint_down(&big, -3);
        let exact = BigRational::new(BigInt::from(big), BigInt::from(8));
        assert!(mag_rational(&up) >= exact);
        assert!(mag_rational(&down) <= exact);
    }

    #[test]
    fn pi_encloses_known_digits() {
        let p = pi(200);
        // 3.14159265358979323846264338327950288419716939937510...
        let lo = BigRational::new(
            "314159265358979323846264338327950288419716939937510".parse().unwrap(),
            BigInt::from(10).pow(50),
        );
        let hi = &lo + BigRational::new(BigInt::one(), BigInt::from(10).pow(50));
        assert!(p.lower_rational() >= lo - BigRational::new(BigInt::one(), BigInt::from(10).pow(55)));
        assert!(p.upper_rational() <= hi);
        assert!(p.rad().log2_approx() < -190.0);
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let p = pi(256);
        let z = cexp(&CBall::new(Ball::zero(256), p), 256);
        assert!(z.re.contains_rational(&q(-1, 1)));
        assert!(z.im.contains_zero());
        assert!(z.rad().log2_approx() < -230.0);
    }

    #[test]
    fn roots_of_unity_multiply_to_one() {
        for n in [3u64, 5, 8, 12] {
            let z = root_of_unity(1, n, 128);
            let p = z.pow(n);
            assert!(p.re.contains_rational(&q(1, 1)), "n = {n}");
            assert!(p.im.contains_zero());
        }
    }

    #[test]
    fn sqrt_encloses() {
        let s = Ball::sqrt_u64(2, 100);
        let sq = s.sqr();
        assert!(sq.contains_rational(&q(2, 1)));
        let s = Ball::sqrt_u64(49, 64);
        assert!(s.contains_rational(&q(7, 1)));
    }

    #[test]
    fn large_exponential() {
        // e^(100) = 2.6881171418161354484e43
        let e = cexp(&CBall::from_i64(100, 128), 128);
        let lo = q(26881171418161354, 1) * BigRational::from_integer(BigInt::from(10).pow(27));
        let hi = q(26881171418161355, 1) * BigRational::from_integer(BigInt::from(10).pow(27));
        assert!(e.re.upper_rational() > lo);
        assert!(e.re.lower_rational() < hi);
        assert!(e.re.rad().log2_approx() < 145.0 - 110.0);
    }

    #[test]
    fn nearest_integer_margin() {
        let b = Ball::from_rational(&q(1001, 1000), 64);
        let (n, m) = b.nearest_integer();
        assert_eq!(n, BigInt::one());
        assert!(mag_rational(&m) >= q(1, 1000));
        assert!(m.to_f64_up() < 0.0011);
    }

    fn small_q() -> impl Strategy<Value = BigRational> {
        (-1_000_000i64..1_000_000, 1i64..10_000).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn ops_contain_exact_results(a in small_q(), b in small_q(), prec in 8u32..80) {
            let ba = Ball::from_rational(&a, prec);
            let bb = Ball::from_rational(&b, prec);
            prop_assert!(ba.add(&bb).contains_rational(&(&a + &b)));
            prop_assert!(ba.sub(&bb).contains_rational(&(&a - &b)));
            prop_assert!(ba.mul(&bb).contains_rational(&(&a * &b)));
            if !b.is_zero() {
                if let Some(d) = ba.checked_div(&bb) {
                    prop_assert!(d.contains_rational(&(&a / &b)));
                }
            }
        }

        #[test]
        fn chained_ops_contain_exact(xs in proptest::collection::vec(small_q(), 1..12)) {
            let prec = 24;
            let mut exact = BigRational::one();
            let mut ball = Ball::one(prec);
            for (i, x) in xs.iter().enumerate() {
                let bx = Ball::from_rational(x, prec);
                if i % 2 == 0 {
                    exact = exact * x + BigRational::one();
                    ball = ball.mul(&bx).add(&Ball::one(prec));
                } else {
                    exact -= x;
                    ball = ball.sub(&bx);
                }
            }
            prop_assert!(ball.contains_rational(&exact));
        }

        #[test]
        fn complex_mul_contains_exact(a in small_q(), b in small_q(), c in small_q(), d in small_q()) {
            let x = CBall::new(Ball::from_rational(&a, 30), Ball::from_rational(&b, 30));
            let y = CBall::new(Ball::from_rational(&c, 30), Ball::from_rational(&d, 30));
            let p = x.mul(&y);
            prop_assert!(p.re.contains_rational(&(&a * &c - &b * &d)));
            prop_assert!(p.im.contains_rational(&(&a * &d + &b * &c)));
        }
    }
}
