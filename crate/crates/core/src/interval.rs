//! Outward-rounded `f64` interval arithmetic.
//!
//! Basic operations widen each endpoint by one ulp; `ln` and `exp` widen by
//! two ulps to cover the library's last-bit error.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_down())
}

fn up(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_up())
}

#[allow(clippy::should_implement_trait)]
impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// The exact point `x`.
    pub fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    /// Enclosure of an integer that may not be representable.
    pub fn from_u64(n: u64) -> Interval {
        let x = n as f64;
        if x as u64 == n && x < 2f64.powi(63) {
            Interval::point(x)
        } else {
            Interval::new(down(x, 1), up(x, 1))
        }
    }

    /// Enclosure of a rational number.
    pub fn from_rational(q: &BigRational) -> Interval {
        let x = q.to_f64().expect("rational out of f64 range");
        let (mut lo, mut hi) = (down(x, 1), up(x, 1));
        while BigRational::from_float(lo).is_some_and(|l| &l > q) {
            lo = lo.next_down();
        }
        while BigRational::from_float(hi).is_some_and(|h| &h < q) {
            hi = hi.next_up();
        }
        Interval::new(lo, hi)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Interval {
        Interval::from_rational(&BigRational::new(num.clone(), den.clone()))
    }

    /// Enclosure of `e`.
    pub fn e() -> Interval {
        Interval::point(1.0).exp()
    }

    pub fn ln2() -> Interval {
        Interval::new(down(std::f64::consts::LN_2, 1), up(std::f64::consts::LN_2, 1))
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval::new(down(self.lo + o.lo, 1), up(self.hi + o.hi, 1))
    }

    pub fn sub(self, o: Interval) -> Interval {
        Interval::new(down(self.lo - o.hi, 1), up(self.hi - o.lo, 1))
    }

    pub fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo, 1), up(hi, 1))
    }

    /// Division by an interval not containing zero.
    pub fn div(self, o: Interval) -> Interval {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by interval containing 0");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo, 1), up(hi, 1))
    }

    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Interval::new(down(self.lo * self.lo, 1), up(self.hi * self.hi, 1))
        } else if self.hi <= 0.0 {
            Interval::new(down(self.hi * self.hi, 1), up(self.lo * self.lo, 1))
        } else {
            let m = self.lo.abs().max(self.hi.abs());
            Interval::new(0.0, up(m * m, 1))
        }
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(self) -> Interval {
        assert!(self.lo > 0.0, "ln of nonpositive interval");
        Interval::new(down(self.lo.ln(), 2), up(self.hi.ln(), 2))
    }

    pub fn exp(self) -> Interval {
        Interval::new(down(self.lo.exp(), 2).max(0.0), up(self.hi.exp(), 2))
    }

    /// `self^e` for a positive base.
    pub fn pow(self, e: Interval) -> Interval {
        self.ln().mul(e).exp()
    }

    pub fn max(self, o: Interval) -> Interval {
        Interval::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    pub fn certainly_lt(self, o: Interval) -> bool {
        self.hi < o.lo
    }

    pub fn certainly_gt(self, o: Interval) -> bool {
        self.lo > o.hi
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_positive(self) -> bool {
        self.lo > 0.0
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            Interval::new(-self.hi, -self.lo)
        } else {
            Interval::new(0.0, self.lo.abs().max(self.hi))
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

/// True if the rational `q` lies strictly below every point of `i`.
pub fn rational_below(q: &BigRational, i: Interval) -> bool {
    match BigRational::from_float(i.lo) {
        Some(lo) => q < &lo,
        None => i.lo == f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constants_enclose() {
        let e = Interval::e();
        assert!(e.contains(std::f64::consts::E));
        assert!(e.width() < 1e-14);
        assert!(Interval::ln2().contains(std::f64::consts::LN_2));
    }

    proptest! {
        #[test]
        fn exact_ops_enclosed(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let (ia, ib) = (Interval::point(a), Interval::point(b));
            let (qa, qb) = (BigRational::from_float(a).unwrap(), BigRational::from_float(b).unwrap());
            let contains = |i: Interval, q: BigRational| {
                BigRational::from_float(i.lo).unwrap() <= q && q <= BigRational::from_float(i.hi).unwrap()
            };
            prop_assert!(contains(ia.add(ib), &qa + &qb));
            prop_assert!(contains(ia.sub(ib), &qa - &qb));
            prop_assert!(contains(ia.mul(ib), &qa * &qb));
            if b != 0.0 {
                prop_assert!(contains(ia.div(ib), &qa / &qb));
            }
        }

        #[test]
        fn ln_exp_roundtrip(x in 1e-3f64..1e3) {
            let i = Interval::point(x).ln().exp();
            prop_assert!(i.contains(x));
        }
    }
}
