//! Exact polynomial algebra over the rationals.
//!
//! [`Poly`] is a dense univariate polynomial over any exact [`Coeff`] ring,
//! so `Poly<Poly<BigRational>>` models `Q[X][Y]` and resultants can be taken
//! over polynomial coefficient rings. [`BivarPoly`] is the sparse user-facing
//! bivariate type.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("both arguments are zero")]
    BothZero,
    #[error("minimal polynomial must be monic with integer coefficients")]
    NotMonic,
    #[error("minimal polynomial must have degree at least 1")]
    BadDegree,
    #[error("minimal polynomial is reducible: {0}")]
    Reducible(String),
    #[error("could not certify irreducibility of {0}; pass the trusted flag to accept it")]
    IrreducibilityUnknown(String),
    #[error("polynomial must be monic with integer coefficients")]
    MonicRequired,
    #[error("embedding index {index} out of range for degree {degree}")]
    BadEmbedding { index: usize, degree: usize },
}

/// An exact commutative ring with (partial) exact division.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_add(&self, o: &Self) -> Self;
    fn c_sub(&self, o: &Self) -> Self;
    fn c_mul(&self, o: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_from_i64(v: i64) -> Self;
    /// `self / o` when the division is exact, else `None`.
    fn c_exact_div(&self, o: &Self) -> Option<Self>;

    fn c_pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::c_one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.c_mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.c_mul(&base);
            }
        }
        acc
    }
}

impl Coeff for BigRational {
    fn c_zero() -> Self {
        BigRational::zero()
    }
    fn c_one() -> Self {
        BigRational::one()
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn c_exact_div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            None
        } else {
            Some(self / o)
        }
    }
}

impl Coeff for BigInt {
    fn c_zero() -> Self {
        BigInt::zero()
    }
    fn c_one() -> Self {
        BigInt::one()
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn c_exact_div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(o);
        r.is_zero().then_some(q)
    }
}

/// Dense univariate polynomial, coefficients stored low degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

/// Univariate polynomial over Q.
pub type UniPoly = Poly<BigRational>;
/// Univariate polynomial over Z.
pub type IntPoly = Poly<BigInt>;

impl<C: Coeff> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.c_is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(C::c_one())
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![C::c_zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn x() -> Self {
        Poly::monomial(C::c_one(), 1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::c_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::c_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).c_add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).c_sub(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.c_neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::c_zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.c_is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.c_is_zero() {
                    out[i + j] = out[i + j].c_add(&a.c_mul(b));
                }
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.c_mul(c)).collect())
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![C::c_zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::c_zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.c_mul(x).c_add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.c_mul(&C::c_from_i64(i as i64))).collect())
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) a = q b + r`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-remainder by zero");
        let lb = b.lc();
        let mut r = self.clone();
        let Some(da) = r.degree() else {
            return r;
        };
        if da < db {
            return r;
        }
        let mut steps = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lc();
            let t = b.scale(&lr).shift(dr - db);
            r = r.scale(&lb).sub(&t);
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&lb.c_pow(steps as u64));
        }
        r
    }

    /// Exact quotient `self / b`; `None` unless `b` divides `self` exactly.
    pub fn exact_div(&self, b: &Self) -> Option<Self> {
        let db = b.degree()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let lb = b.lc();
        let mut r = self.clone();
        let da = r.deg();
        if da < db {
            return None;
        }
        let mut q = vec![C::c_zero(); da - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let c = r.lc().c_exact_div(&lb)?;
            r = r.sub(&b.scale(&c).shift(dr - db));
            q[dr - db] = c;
        }
        Some(Poly::new(q))
    }

    /// Maps coefficients into another ring.
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<C: Coeff> Coeff for Poly<C> {
    fn c_zero() -> Self {
        Poly::zero()
    }
    fn c_one() -> Self {
        Poly::one()
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn c_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn c_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn c_neg(&self) -> Self {
        self.neg()
    }
    fn c_from_i64(v: i64) -> Self {
        Poly::constant(C::c_from_i64(v))
    }
    fn c_exact_div(&self, o: &Self) -> Option<Self> {
        self.exact_div(o)
    }
}

/// Resultant of `a` and `b` (Sylvester determinant with `a`'s rows first),
/// by the subresultant pseudo-remainder sequence.
pub fn resultant<C: Coeff>(a: &Poly<C>, b: &Poly<C>) -> C {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return C::c_zero();
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut neg = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            neg = true;
        }
    }
    if b.deg() == 0 {
        let r = b.lc().c_pow(a.deg() as u64);
        return if neg { r.c_neg() } else { r };
    }
    let mut g = C::c_one();
    let mut h = C::c_one();
    loop {
        let (dega, degb) = (a.deg(), b.deg());
        let delta = dega - degb;
        if dega % 2 == 1 && degb % 2 == 1 {
            neg = !neg;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let div = g.c_mul(&h.c_pow(delta as u64));
        b = Poly::new(r.coeffs.iter().map(|c| c.c_exact_div(&div).expect("subresultant division is exact")).collect());
        g = a.lc();
        h = if delta == 0 {
            h
        } else {
            g.c_pow(delta as u64).c_exact_div(&h.c_pow(delta as u64 - 1)).expect("subresultant division is exact")
        };
        match b.degree() {
            None => return C::c_zero(),
            Some(0) => break,
            Some(_) => {}
        }
    }
    let da = a.deg() as u64;
    let res = if da == 0 {
        C::c_one()
    } else {
        b.lc().c_pow(da).c_exact_div(&h.c_pow(da - 1)).expect("subresultant division is exact")
    };
    if neg {
        res.c_neg()
    } else {
        res
    }
}

fn q_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

impl UniPoly {
    pub fn from_i64s(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| q_int(v)).collect())
    }

    pub fn from_int_poly(p: &IntPoly) -> Self {
        p.map(|c| BigRational::from_integer(c.clone()))
    }

    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        let db = b.degree().expect("division by zero polynomial");
        let lb = b.lc();
        let mut r = self.clone();
        let mut q = vec![BigRational::zero(); self.deg().saturating_sub(db) + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let c = r.lc() / &lb;
            r = r.sub(&b.scale(&c).shift(dr - db));
            q[dr - db] = c;
        }
        (Poly::new(q), r)
    }

    pub fn rem(&self, b: &Self) -> Self {
        self.div_rem(b).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc();
        self.scale(&(BigRational::one() / l))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Primitive integer polynomial with positive leading coefficient
    /// proportional to `self`.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return Poly::zero();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let mut p: Vec<BigInt> = ints.into_iter().map(|c| c / &g).collect();
        if p.last().is_some_and(|c| c.is_negative()) {
            p.iter_mut().for_each(|c| *c = -&*c);
        }
        Poly::new(p)
    }

    /// Integer coefficients of an integral polynomial.
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        self.is_integral().then(|| self.map(|c| c.to_integer()))
    }

    pub fn height(&self) -> Result<Height, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(Height::of_ints(self.primitive_part().coeffs()))
    }

    /// Formats with the given variable name, highest degree first.
    pub fn display_var(&self, var: &str) -> String {
        let terms: Vec<(BigRational, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.clone(), monomial_str(&[(var, i as u32)])))
            .collect();
        format_terms(&terms)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("X"))
    }
}

impl IntPoly {
    pub fn from_i64s(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn to_rational(&self) -> UniPoly {
        UniPoly::from_int_poly(self)
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }
}

/// Monic gcd over Q.
pub fn gcd_uni(p: &UniPoly, q: &UniPoly) -> Result<UniPoly, PolyError> {
    if p.is_zero() && q.is_zero() {
        return Err(PolyError::BothZero);
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r.monic();
    }
    Ok(a.monic())
}

/// Discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &UniPoly) -> BigRational {
    let n = f.deg();
    let r = resultant(f, &f.derivative()) / f.lc();
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// Multiplicative height data of a polynomial over Q.
#[derive(Clone, Debug, PartialEq)]
pub struct Height {
    /// Largest absolute coefficient of the primitive integer polynomial.
    pub big_h: BigInt,
    /// `log(big_h)`.
    pub h: f64,
}

impl Height {
    fn of_ints(c: &[BigInt]) -> Height {
        let big_h = c.iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero);
        let h = ln_bigint(&big_h);
        Height { big_h, h }
    }
}

/// Natural logarithm of a positive integer (double precision).
pub fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1);
    if n == 1 {
        return IntPoly::from_i64s(&[-1, 1]);
    }
    let f = arith::factorize(n);
    let rad: u64 = f.primes().product();
    let stretch = (n / rad) as usize;
    let primes: Vec<u64> = f.primes().collect();
    let deg = arith::phi(rad) as usize;
    // prod_{d | rad} (1 - Y^d)^{mu(rad/d)} as a power series truncated at deg
    let mut s = vec![0i128; deg + 1];
    s[0] = 1;
    let r = primes.len();
    let mut pos = Vec::new();
    let mut negs = Vec::new();
    for mask in 0u32..(1 << r) {
        let d: u64 = (0..r).filter(|i| mask & (1 << i) == 0).map(|i| primes[i]).product();
        if mask.count_ones() % 2 == 0 {
            pos.push(d as usize);
        } else {
            negs.push(d as usize);
        }
    }
    for d in pos {
        for i in (d..=deg).rev() {
            s[i] -= s[i - d];
        }
    }
    for d in negs {
        for i in d..=deg {
            s[i] += s[i - d];
        }
    }
    let mut out = vec![BigInt::zero(); deg * stretch + 1];
    for (i, c) in s.into_iter().enumerate() {
        out[i * stretch] = BigInt::from(c);
    }
    Poly::new(out)
}

/// Sparse bivariate polynomial over Q, keyed by `(deg_x, deg_y)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        BivarPoly::term(c, 0, 0)
    }

    pub fn from_i64(c: i64) -> Self {
        BivarPoly::constant(q_int(c))
    }

    pub fn term(c: BigRational, i: u32, j: u32) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(c, i, j);
        p
    }

    pub fn x() -> Self {
        BivarPoly::term(BigRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        BivarPoly::term(BigRational::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), BigRational)>>(it: I) -> Self {
        let mut p = BivarPoly::zero();
        for ((i, j), c) in it {
            p.add_term(c, i, j);
        }
        p
    }

    pub fn add_term(&mut self, c: BigRational, i: u32, j: u32) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigRational> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (&(i, j), c) in &o.terms {
            p.add_term(c.clone(), i, j);
        }
        p
    }

    pub fn neg(&self) -> Self {
        BivarPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = BivarPoly::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &o.terms {
                p.add_term(a * b, i1 + i2, j1 + j2);
            }
        }
        p
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        BivarPoly::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BivarPoly::from_i64(1);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// As a polynomial in Y whose coefficients are polynomials in X.
    pub fn as_poly_in_y(&self) -> Poly<UniPoly> {
        let mut rows: Vec<Vec<BigRational>> = vec![Vec::new(); self.deg_y() as usize + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, BigRational::zero());
            }
            row[i as usize] = c.clone();
        }
        if self.is_zero() {
            return Poly::zero();
        }
        Poly::new(rows.into_iter().map(Poly::new).collect())
    }

    /// As a polynomial in X whose coefficients are polynomials in Y.
    pub fn as_poly_in_x(&self) -> Poly<UniPoly> {
        self.swap_xy().as_poly_in_y()
    }

    pub fn from_poly_in_y(p: &Poly<UniPoly>) -> Self {
        let mut out = BivarPoly::zero();
        for (j, cx) in p.coeffs().iter().enumerate() {
            for (i, c) in cx.coeffs().iter().enumerate() {
                out.add_term(c.clone(), i as u32, j as u32);
            }
        }
        out
    }

    pub fn from_poly_in_x(p: &Poly<UniPoly>) -> Self {
        BivarPoly::from_poly_in_y(p).swap_xy()
    }

    pub fn swap_xy(&self) -> Self {
        BivarPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    /// Embeds a univariate polynomial in X.
    pub fn from_uni_x(p: &UniPoly) -> Self {
        BivarPoly::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| ((i as u32, 0), c.clone())))
    }

    /// Embeds a univariate polynomial in Y.
    pub fn from_uni_y(p: &UniPoly) -> Self {
        BivarPoly::from_uni_x(p).swap_xy()
    }

    /// Monic gcd over Q[X] of the coefficients of F viewed in Q[X][Y].
    pub fn content_in_x(&self) -> Result<UniPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        content(&self.as_poly_in_y())
    }

    /// Monic gcd over Q[Y] of the coefficients of F viewed in Q[Y][X].
    pub fn content_in_y(&self) -> Result<UniPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        content(&self.as_poly_in_x())
    }

    /// The primitive integer polynomial proportional to `self` with positive
    /// leading term (largest key).
    pub fn primitive_integral(&self) -> Result<BivarPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<((u32, u32), BigInt)> =
            self.terms.iter().map(|(k, c)| (*k, (c * BigRational::from_integer(den.clone())).to_integer())).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
        if ints.last().is_some_and(|(_, c)| c.is_negative()) {
            g = -g;
        }
        Ok(BivarPoly::from_terms(ints.into_iter().map(|(k, c)| (k, BigRational::from_integer(c / &g)))))
    }

    pub fn height_q(&self) -> Result<Height, PolyError> {
        let prim = self.primitive_integral()?;
        let ints: Vec<BigInt> = prim.terms.values().map(|c| c.to_integer()).collect();
        Ok(Height::of_ints(&ints))
    }
}

fn content(p: &Poly<UniPoly>) -> Result<UniPoly, PolyError> {
    let mut g = UniPoly::zero();
    for c in p.coeffs() {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.monic() } else { gcd_uni(&g, c)? };
        if g.is_constant() {
            break;
        }
    }
    Ok(g)
}

fn monomial_str(vars: &[(&str, u32)]) -> String {
    vars.iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn coeff_str(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

fn format_terms(terms: &[(BigRational, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (c, mono)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            s.push_str(&coeff_str(&a));
        } else if a.is_one() {
            s.push_str(mono);
        } else {
            s.push_str(&coeff_str(&a));
            s.push('*');
            s.push_str(mono);
        }
    }
    s
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(BigRational, String)> =
            self.terms.iter().rev().map(|(&(i, j), c)| (c.clone(), monomial_str(&[("X", i), ("Y", j)]))).collect();
        f.write_str(&format_terms(&terms))
    }
}

/// `Res_Y(F, B)` as a polynomial in X, with F's Sylvester rows first.
pub fn resultant_y(f: &BivarPoly, b: &UniPoly) -> Result<UniPoly, PolyError> {
    if f.is_zero() && b.is_zero() {
        return Err(PolyError::BothZero);
    }
    let a = f.as_poly_in_y();
    let bb: Poly<UniPoly> = b.map(|c| UniPoly::constant(c.clone()));
    Ok(resultant(&a, &bb))
}

/// `Res_X(F, B)` as a polynomial in Y, with F's Sylvester rows first.
pub fn resultant_x(f: &BivarPoly, b: &UniPoly) -> Result<UniPoly, PolyError> {
    resultant_y(&f.swap_xy(), b)
}

/// Exact test `Phi_N | Res_X(F, H)` for monic integral `H`, without forming
/// the resultant.
///
/// Write `S = Res_X(F, H)` and `T = S mod Phi_N`. For primes `p = 1 mod N`,
/// `T = 0 mod p` iff `F(X, r)` and `H` share a factor mod `p` for every
/// primitive `N`-th root `r`. Enough primes to exceed a bound on `|T|`
/// decide `T = 0`.
pub fn cyclotomic_divides_resultant_x(f: &BivarPoly, h: &IntPoly, n: u64) -> Result<bool, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !h.is_monic() {
        return Err(PolyError::MonicRequired);
    }
    assert!(n >= 1, "cyclotomic order must be positive");
    let f = f.primitive_integral()?;
    let need = resultant_mod_cyclotomic_bits(&f, h, n);
    let terms: Vec<(u32, u32, BigInt)> = f.terms().iter().map(|(&(i, j), c)| (i, j, c.to_integer())).collect();
    let exps: Vec<u64> = (1..=n).filter(|&e| e.gcd(&n) == 1).collect();
    let qs: Vec<u64> = arith::factorize(n).primes().collect();
    let mut covered = 0u64;
    let mut t = (1u64 << 30) / n + 1;
    while covered < need {
        let p = t * n + 1;
        t += 1;
        if p >= 1 << 32 {
            // out of word-sized primes: decide from the resultant itself
            let s = resultant_x(&f, &h.to_rational())?;
            return Ok(cyclotomic(n).to_rational().divides(&s));
        }
        if !arith::is_prime(p) {
            continue;
        }
        let r = primitive_root_of_order(p, n, &qs);
        let hp: Vec<u64> = h.coeffs().iter().map(|c| bigint_mod(c, p)).collect();
        let dx = f.deg_x() as usize;
        let coeffs: Vec<(usize, usize, u64)> =
            terms.iter().map(|(i, j, c)| (*i as usize, *j as usize, bigint_mod(c, p))).collect();
        for &e in &exps {
            let z = modp::pow_mod(r, e, p);
            let mut zp = vec![1u64];
            for _ in 0..f.deg_y() {
                let last = *zp.last().unwrap();
                zp.push(last * z % p);
            }
            let mut a = vec![0u64; dx + 1];
            for &(i, j, c) in &coeffs {
                a[i] = (a[i] + c * zp[j]) % p;
            }
            if a.iter().any(|&c| c != 0) && !modp::share_factor(&a, &hp, p) {
                return Ok(false);
            }
        }
        covered += 30;
    }
    Ok(true)
}

fn bigint_mod(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced residue")
}

fn primitive_root_of_order(p: u64, n: u64, qs: &[u64]) -> u64 {
    (2..p)
        .map(|g| modp::pow_mod(g, (p - 1) / n, p))
        .find(|&r| qs.iter().all(|&q| modp::pow_mod(r, n / q, p) != 1))
        .expect("p = 1 mod n has elements of order n")
}

/// Bits bounding the coefficients of `Res_X(F, H) mod Phi_N`.
///
/// `Res_X(F, H) = +- prod F(alpha, Y)`, whose 1-norm is at most
/// `|F|_1^deg H * M(H)^deg_x F`, with `M(H) <= |H|_2`. Reducing `Y^m`
/// modulo `Phi_N` multiplies by at most `max_m |Y^m mod Phi_N|_inf`.
fn resultant_mod_cyclotomic_bits(f: &BivarPoly, h: &IntPoly, n: u64) -> u64 {
    let l1: BigInt = f.terms().values().map(|c| c.to_integer().abs()).sum();
    let l2sq: BigInt = h.coeffs().iter().map(|c| c * c).sum();
    let deg_s = h.deg() as u64 * f.deg_y() as u64;
    let reduce = cyclotomic_reduction_norm(n, deg_s);
    h.deg() as u64 * l1.bits() + f.deg_x() as u64 * (l2sq.bits() / 2 + 1) + reduce.bits() + 2
}

/// `max |Y^m mod Phi_N|_inf` over `0 <= m <= min(N - 1, top)`.
fn cyclotomic_reduction_norm(n: u64, top: u64) -> BigInt {
    let phi = cyclotomic(n);
    let d = phi.deg();
    let pc = phi.coeffs();
    let mut v = vec![BigInt::zero(); d];
    if d == 0 {
        return BigInt::one();
    }
    v[0] = BigInt::one();
    let mut best = BigInt::one();
    for _ in 1..=top.min(n - 1) {
        let carry = v.pop().unwrap_or_default();
        v.insert(0, BigInt::zero());
        if !carry.is_zero() {
            for (i, c) in v.iter_mut().enumerate() {
                *c -= &carry * &pc[i];
            }
        }
        if let Some(m) = v.iter().map(|c| c.abs()).max() {
            best = best.max(m);
        }
    }
    best
}

/// Polynomial in X, Y, T over Q, keyed by `(deg_x, deg_y, deg_t)`; the
/// coefficients of a curve over a number field `Q[T]/(m)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FieldPoly {
    terms: BTreeMap<(u32, u32, u32), BigRational>,
}

impl FieldPoly {
    pub fn zero() -> Self {
        FieldPoly::default()
    }

    pub fn term(c: BigRational, i: u32, j: u32, k: u32) -> Self {
        let mut p = FieldPoly::zero();
        p.add_term(c, i, j, k);
        p
    }

    pub fn from_bivar(f: &BivarPoly) -> Self {
        let mut p = FieldPoly::zero();
        for (&(i, j), c) in f.terms() {
            p.add_term(c.clone(), i, j, 0);
        }
        p
    }

    pub fn add_term(&mut self, c: BigRational, i: u32, j: u32, k: u32) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j, k)).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j, k));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32, u32), BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (&(i, j, k), c) in &o.terms {
            p.add_term(c.clone(), i, j, k);
        }
        p
    }

    pub fn neg(&self) -> Self {
        FieldPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = FieldPoly::zero();
        for (&(i1, j1, k1), a) in &self.terms {
            for (&(i2, j2, k2), b) in &o.terms {
                p.add_term(a * b, i1 + i2, j1 + j2, k1 + k2);
            }
        }
        p
    }

    pub fn max_t_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.2).max().unwrap_or(0)
    }

    /// Drops T, if it does not occur.
    pub fn to_bivar(&self) -> Option<BivarPoly> {
        if self.max_t_degree() > 0 {
            return None;
        }
        Some(BivarPoly::from_terms(self.terms.iter().map(|(&(i, j, _), c)| ((i, j), c.clone()))))
    }

    fn as_poly_in_t(&self) -> Poly<Poly<UniPoly>> {
        let mut by_t: BTreeMap<u32, BivarPoly> = BTreeMap::new();
        for (&(i, j, k), c) in &self.terms {
            by_t.entry(k).or_default().add_term(c.clone(), i, j);
        }
        let n = self.max_t_degree() as usize + 1;
        let mut v = vec![Poly::zero(); n];
        for (k, b) in by_t {
            v[k as usize] = b.as_poly_in_y();
        }
        Poly::new(v)
    }
}

/// Irreducibility verdict for an integer polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Certified,
    Reducible,
    Unknown,
}

/// A number field `Q[T]/(m)` with a chosen complex embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberFieldSpec {
    min_poly: IntPoly,
    embedding_index: usize,
    trusted: bool,
}

impl NumberFieldSpec {
    /// Validates `min_poly`; irreducibility is certified unless `trusted`.
    pub fn new(min_poly: IntPoly, embedding_index: usize, trusted: bool) -> Result<Self, PolyError> {
        let d = min_poly.degree().ok_or(PolyError::BadDegree)?;
        if d == 0 {
            return Err(PolyError::BadDegree);
        }
        if !min_poly.is_monic() {
            return Err(PolyError::NotMonic);
        }
        if embedding_index >= d {
            return Err(PolyError::BadEmbedding { index: embedding_index, degree: d });
        }
        if !trusted {
            let shown = min_poly.to_rational().display_var("T");
            match irreducibility(&min_poly) {
                Irreducibility::Certified => {}
                Irreducibility::Reducible => return Err(PolyError::Reducible(shown)),
                Irreducibility::Unknown => return Err(PolyError::IrreducibilityUnknown(shown)),
            }
        }
        Ok(NumberFieldSpec { min_poly, embedding_index, trusted })
    }

    /// The field Q itself, presented as `Q[T]/(T)`.
    pub fn rationals() -> Self {
        NumberFieldSpec { min_poly: IntPoly::from_i64s(&[0, 1]), embedding_index: 0, trusted: false }
    }

    pub fn degree(&self) -> usize {
        self.min_poly.deg()
    }

    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    pub fn embedding_index(&self) -> usize {
        self.embedding_index
    }

    pub fn is_trusted(&self) -> bool {
        self.trusted
    }
}

/// The norm `Res_T(m(T), F(X, Y, T))`, i.e. the product of all conjugates of F.
pub fn norm_form(f: &FieldPoly, k: &NumberFieldSpec) -> Result<BivarPoly, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !k.min_poly.is_monic() {
        return Err(PolyError::NotMonic);
    }
    let m: Poly<Poly<UniPoly>> =
        k.min_poly.map(|c| Poly::constant(UniPoly::constant(BigRational::from_integer(c.clone()))));
    let ft = f.as_poly_in_t();
    // reduce modulo the monic m first so deg_T F < d
    let reduced = if ft.deg() >= m.deg() { ft.pseudo_rem(&m) } else { ft };
    if reduced.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let r = resultant(&m, &reduced);
    Ok(BivarPoly::from_poly_in_y(&r))
}

const SMALL_PRIMES_FOR_DDF: usize = 40;

/// Irreducibility of a monic integer polynomial by rational-root exclusion
/// and factor-degree patterns modulo several primes.
pub fn irreducibility(f: &IntPoly) -> Irreducibility {
    let Some(d) = f.degree() else {
        return Irreducibility::Reducible;
    };
    if d <= 1 {
        return if d == 1 { Irreducibility::Certified } else { Irreducibility::Reducible };
    }
    if f.coeff(0).is_zero() {
        return Irreducibility::Reducible;
    }
    let rr = has_integer_root(f);
    if rr == Some(true) {
        return Irreducibility::Reducible;
    }
    if d <= 3 && rr == Some(false) {
        return Irreducibility::Certified;
    }
    // subset sums of factor degrees that survive every prime
    let full: u128 = if d >= 127 { u128::MAX } else { (1u128 << (d + 1)) - 1 };
    let mut possible = full;
    let mut used = 0;
    for p in arith::first_primes(200).into_iter().skip(1) {
        if used >= SMALL_PRIMES_FOR_DDF || d >= 127 {
            break;
        }
        let fp: Vec<u64> = f.coeffs().iter().map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap()).collect();
        let Some(degs) = modp::factor_degrees(&fp, p) else {
            continue;
        };
        used += 1;
        let mut sums: u128 = 1;
        for g in degs {
            sums |= sums << g;
        }
        possible &= sums;
        if possible == (1u128 | (1u128 << d)) {
            return Irreducibility::Certified;
        }
    }
    Irreducibility::Unknown
}

fn has_integer_root(f: &IntPoly) -> Option<bool> {
    let c0 = f.coeff(0).abs().to_u64()?;
    let fac = arith::factorize(c0);
    let mut divs = vec![1u64];
    for &(p, e) in fac.pairs() {
        let cur = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(cur.iter().map(|d| d * pk));
        }
    }
    let fq = f.to_rational();
    for dv in divs {
        for s in [1i64, -1] {
            let r = BigRational::from_integer(BigInt::from(dv) * s);
            if fq.eval(&r).is_zero() {
                return Some(true);
            }
        }
    }
    Some(false)
}

mod modp {
    //! Dense polynomials over a small prime field.

    fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    fn inv(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let il = inv(b[db], p);
        let mut q = vec![0u64; r.len() - db];
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let c = r[dr] * il % p;
            q[dr - db] = c;
            for i in 0..=db {
                r[dr - db + i] = (r[dr - db + i] + p - c * b[i] % p) % p;
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        divrem(&mul(a, b, p), m, p).1
    }

    fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = divrem(base, m, p).1;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(&r, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = divrem(&a, &b, p).1;
            a = b;
            b = r;
        }
        if let Some(&l) = a.last() {
            let il = inv(l, p);
            a.iter_mut().for_each(|c| *c = *c * il % p);
        }
        a
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    /// Whether `a` and `b` have a common factor of positive degree mod `p`.
    pub fn share_factor(a: &[u64], b: &[u64], p: u64) -> bool {
        gcd(a, b, p).len() > 1
    }

    /// Degrees of the irreducible factors of a monic `f` modulo `p`, or
    /// `None` when `f` is not squarefree (or drops degree) modulo `p`.
    pub fn factor_degrees(f: &[u64], p: u64) -> Option<Vec<usize>> {
        let f = trim(f.to_vec());
        if f.len() < 2 || f.last() != Some(&1) {
            return None;
        }
        let df: Vec<u64> = trim(f.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % p) % p).collect());
        if gcd(&f, &df, p).len() != 1 {
            return None;
        }
        let mut degs = Vec::new();
        let mut g = f;
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let mut i = 1usize;
        while g.len() > 2 * i {
            h = powmod(&h, p, &g, p);
            let common = gcd(&g, &sub(&h, &x, p), p);
            let dc = common.len() - 1;
            if dc > 0 {
                degs.extend(std::iter::repeat_n(i, dc / i));
                g = divrem(&g, &common, p).0;
                h = divrem(&h, &g, p).1;
            }
            i += 1;
        }
        if g.len() > 1 {
            degs.push(g.len() - 1);
        }
        Some(degs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        q_int(n)
    }

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    fn bv(terms: &[((u32, u32), i64)]) -> BivarPoly {
        BivarPoly::from_terms(terms.iter().map(|&(k, c)| (k, q(c))))
    }

    /// Sylvester-determinant oracle by fraction-free Gaussian elimination.
    fn sylvester_det(a: &UniPoly, b: &UniPoly) -> BigRational {
        let (m, n) = (a.deg(), b.deg());
        let size = m + n;
        let mut mat = vec![vec![BigRational::zero(); size]; size];
        for r in 0..n {
            for i in 0..=m {
                mat[r][r + i] = a.coeff(m - i);
            }
        }
        for r in 0..m {
            for i in 0..=n {
                mat[n + r][r + i] = b.coeff(n - i);
            }
        }
        let mut det = BigRational::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            let p = mat[col][col].clone();
            det *= &p;
            for r in col + 1..size {
                let f = &mat[r][col] / &p;
                if f.is_zero() {
                    continue;
                }
                for c in col..size {
                    let v = &mat[col][c] * &f;
                    mat[r][c] -= v;
                }
            }
        }
        det
    }

    #[test]
    fn content_examples() {
        let f = bv(&[((1, 1), 1), ((1, 0), -1), ((0, 1), -1), ((0, 0), 1)]);
        assert_eq!(f.content_in_x().unwrap(), up(&[-1, 1]));
        assert_eq!(f.content_in_y().unwrap(), up(&[-1, 1]));
        let f = bv(&[((1, 1), 1), ((0, 0), -1)]);
        assert_eq!(f.content_in_x().unwrap(), up(&[1]));
        let f = bv(&[((2, 0), 1), ((1, 2), 1)]);
        assert_eq!(f.content_in_x().unwrap(), up(&[0, 1]));
        assert_eq!(BivarPoly::zero().content_in_x(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn resultant_examples() {
        let f = bv(&[((0, 1), 1), ((1, 0), -1)]);
        assert_eq!(resultant_y(&f, &up(&[1, 0, 1])).unwrap(), up(&[1, 0, 1]));
        let f = bv(&[((1, 0), 1), ((0, 2), 1), ((0, 0), -1727)]);
        let r = resultant_y(&f, &up(&[1, 0, 1])).unwrap();
        // expand (X - 1728)^2 independently
        assert_eq!(r, up(&[-1728, 1]).mul(&up(&[-1728, 1])));
        // det [[X, -1], [1, -1]] = 1 - X, i.e. X - 1 up to sign
        let f = bv(&[((1, 1), 1), ((0, 0), -1)]);
        assert_eq!(resultant_y(&f, &up(&[-1, 1])).unwrap(), up(&[1, -1]));
        assert_eq!(resultant_y(&BivarPoly::zero(), &UniPoly::zero()), Err(PolyError::BothZero));
    }

    #[test]
    fn resultant_matches_sylvester_oracle() {
        let cases = [
            (vec![1, 2, 3], vec![4, 5]),
            (vec![-1, 0, 0, 1], vec![2, 1, 1]),
            (vec![3, 0, 1, 0, 2], vec![1, -1, 0, 5]),
            (vec![1, 1], vec![1, 1, 1, 1]),
            (vec![2, -3, 1], vec![-1, 1]),
            (vec![0, 1, 2, 3, 4, 5], vec![7, 0, 0, 1, 1, 1]),
        ];
        for (a, b) in cases {
            let (pa, pb) = (up(&a), up(&b));
            assert_eq!(resultant(&pa, &pb), sylvester_det(&pa, &pb), "{a:?} {b:?}");
            assert_eq!(resultant(&pb, &pa), sylvester_det(&pb, &pa), "{b:?} {a:?}");
        }
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_uni(&up(&[-1, 0, 1]), &up(&[-1, 1])).unwrap(), up(&[-1, 1]));
        let l = up(&[-1728, 1]);
        assert_eq!(gcd_uni(&l.mul(&l), &l).unwrap(), l);
        let c8 = cyclotomic(8).to_rational();
        let c4 = cyclotomic(4).to_rational();
        assert_eq!(gcd_uni(&c8, &c4).unwrap(), up(&[1]));
        assert_eq!(gcd_uni(&UniPoly::zero(), &UniPoly::zero()), Err(PolyError::BothZero));
    }

    /// Oracle: (Y^N - 1) divided by all Phi_d for proper divisors d.
    fn cyclo_oracle(n: u64, memo: &mut BTreeMap<u64, UniPoly>) -> UniPoly {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        let mut p = UniPoly::monomial(q(1), n as usize).sub(&up(&[1]));
        for d in 1..n {
            if n.is_multiple_of(d) {
                p = p.exact_div(&cyclo_oracle(d, memo)).unwrap();
            }
        }
        memo.insert(n, p.clone());
        p
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic(8), IntPoly::from_i64s(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64s(&[1, 0, -1, 0, 1]));
        let mut memo = BTreeMap::new();
        for n in 1..=60 {
            assert_eq!(cyclotomic(n).to_rational(), cyclo_oracle(n, &mut memo), "N = {n}");
        }
    }

    #[test]
    fn cyclotomic_product_identity() {
        for n in 1..=200u64 {
            let mut prod = UniPoly::one();
            for d in 1..=n {
                if n % d == 0 {
                    prod = prod.mul(&cyclotomic(d).to_rational());
                }
            }
            let target = UniPoly::monomial(q(1), n as usize).sub(&up(&[1]));
            assert_eq!(prod, target, "N = {n}");
            assert!(cyclotomic(n).to_rational().divides(&target));
            assert_eq!(cyclotomic(n).deg() as u64, arith::phi(n));
        }
    }

    #[test]
    fn cyclotomic_large_is_consistent() {
        // 3*5*7*11 gives a non-flat cyclotomic polynomial
        let n = 1155u64;
        let p = cyclotomic(n);
        assert_eq!(p.deg() as u64, arith::phi(n));
        let max = p.coeffs().iter().map(|c| c.abs()).max().unwrap();
        assert!(max > BigInt::one());
        let target = UniPoly::monomial(q(1), n as usize).sub(&up(&[1]));
        assert!(p.to_rational().divides(&target));
    }

    #[test]
    fn height_examples() {
        let f = bv(&[((1, 0), 2), ((0, 1), 4)]);
        let h = f.height_q().unwrap();
        assert_eq!(h.big_h, BigInt::from(2));
        assert!((h.h - 2f64.ln()).abs() < 1e-12);
        let f = bv(&[((2, 1), 3), ((0, 0), -5)]);
        assert_eq!(f.height_q().unwrap().big_h, BigInt::from(5));
        let f = bv(&[((1, 0), 1), ((0, 2), 1), ((0, 0), -1727)]);
        let h = f.height_q().unwrap();
        assert_eq!(h.big_h, BigInt::from(1727));
        assert!((h.h - 7.4542).abs() < 1e-4);
        let half = BivarPoly::from_terms([((1, 0), BigRational::new(1.into(), 2.into())), ((0, 1), q(3))]);
        assert_eq!(half.height_q().unwrap().big_h, BigInt::from(6));
        assert_eq!(BivarPoly::zero().height_q(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn norm_form_examples() {
        let k = NumberFieldSpec::rationals();
        let f = bv(&[((1, 1), 1), ((0, 0), -1)]);
        assert_eq!(norm_form(&FieldPoly::from_bivar(&f), &k).unwrap(), f);

        let sqrt2 = NumberFieldSpec::new(IntPoly::from_i64s(&[-2, 0, 1]), 0, false).unwrap();
        let mut f = FieldPoly::term(q(1), 1, 0, 0);
        f.add_term(q(1), 0, 1, 1);
        assert_eq!(norm_form(&f, &sqrt2).unwrap(), bv(&[((2, 0), 1), ((0, 2), -2)]));

        let gi = NumberFieldSpec::new(IntPoly::from_i64s(&[1, 0, 1]), 0, false).unwrap();
        let mut f = FieldPoly::term(q(1), 1, 0, 0);
        f.add_term(q(1), 0, 0, 1);
        assert_eq!(norm_form(&f, &gi).unwrap(), bv(&[((2, 0), 1), ((0, 0), 1)]));

        // T^2 in the input reduces to -1 before the norm is taken
        let mut f = FieldPoly::term(q(1), 1, 0, 0);
        f.add_term(q(1), 0, 0, 2);
        assert_eq!(norm_form(&f, &gi).unwrap(), bv(&[((1, 0), 1), ((0, 0), -1)]).pow(2));
        assert_eq!(norm_form(&FieldPoly::zero(), &gi), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn number_field_validation() {
        assert_eq!(
            NumberFieldSpec::new(IntPoly::from_i64s(&[-1, 0, 1]), 0, false),
            Err(PolyError::Reducible("T^2 - 1".into()))
        );
        assert_eq!(NumberFieldSpec::new(IntPoly::from_i64s(&[1, 0, 2]), 0, false), Err(PolyError::NotMonic));
        assert!(NumberFieldSpec::new(IntPoly::from_i64s(&[-2, 0, 0, 1]), 2, false).is_ok());
        assert!(NumberFieldSpec::new(IntPoly::from_i64s(&[-1, -1, 0, 0, 0, 1]), 0, false).is_ok());
        // T^4 + 1 splits modulo every prime, so only the trusted path accepts it
        assert!(matches!(
            NumberFieldSpec::new(IntPoly::from_i64s(&[1, 0, 0, 0, 1]), 0, false),
            Err(PolyError::IrreducibilityUnknown(_))
        ));
        assert!(NumberFieldSpec::new(IntPoly::from_i64s(&[1, 0, 0, 0, 1]), 0, true).is_ok());
        // (T^2 + 1)(T^2 + 2) has no rational root but is caught by degree patterns or left unknown
        let v = irreducibility(&IntPoly::from_i64s(&[2, 0, 3, 0, 1]));
        assert_ne!(v, Irreducibility::Certified);
    }

    #[test]
    fn discriminant_of_quadratic() {
        assert_eq!(discriminant(&up(&[3, 5, 1])), q(13));
        assert_eq!(discriminant(&up(&[1, 0, 1])), q(-4));
        // cubic x^3 + p x + q: -4p^3 - 27q^2
        assert_eq!(discriminant(&up(&[2, -3, 0, 1])), q(-4 * -27 - 27 * 4));
    }

    #[test]
    fn display_roundtrip_shape() {
        let f = bv(&[((1, 1), 1), ((0, 0), -1)]);
        assert_eq!(f.to_string(), "X*Y - 1");
        let f = BivarPoly::from_terms([((1, 0), q(1)), ((0, 1), BigRational::new(1.into(), 2.into()))]);
        assert_eq!(f.to_string(), "X + (1/2)*Y");
        assert_eq!(bv(&[((0, 2), -3)]).to_string(), "-3*Y^2");
        assert_eq!(BivarPoly::zero().to_string(), "0");
    }

    fn small_bivar() -> impl Strategy<Value = BivarPoly> {
        proptest::collection::vec(((0u32..=4, 0u32..=4), -9i64..=9), 1..8).prop_map(|t| bv(&t))
    }

    fn small_uni() -> impl Strategy<Value = UniPoly> {
        proptest::collection::vec(-9i64..=9, 1..6).prop_map(|c| up(&c))
    }

    #[test]
    fn cyclotomic_resultant_examples() {
        let h = IntPoly::from_i64s(&[-1728, 1]);
        // X - 1728 + Phi_4(Y): every primitive 4th root pairs with 1728
        let f = bv(&[((1, 0), 1), ((0, 0), -1727), ((0, 2), 1)]);
        assert!(cyclotomic_divides_resultant_x(&f, &h, 4).unwrap());
        assert!(!cyclotomic_divides_resultant_x(&f, &h, 3).unwrap());
        assert_eq!(
            cyclotomic_divides_resultant_x(&f, &IntPoly::from_i64s(&[-1728, 2]), 4),
            Err(PolyError::MonicRequired)
        );
    }

    fn divisibility_oracle(f: &BivarPoly, h: &IntPoly, n: u64) -> bool {
        let s = resultant_x(f, &h.to_rational()).unwrap();
        cyclotomic(n).to_rational().divides(&s)
    }

    proptest! {
        #[test]
        fn cyclotomic_resultant_matches_oracle(
            c in small_bivar(),
            e in small_bivar(),
            noise in small_bivar(),
            hk in 0usize..3,
            n in 1u64..=12,
            add_noise in any::<bool>(),
        ) {
            let hs = [vec![0i64, 1], vec![-1728, 1], vec![-121287375, 191025, 1]];
            let h = IntPoly::from_i64s(&hs[hk]);
            let hx = BivarPoly::from_uni_x(&h.to_rational());
            let py = BivarPoly::from_uni_y(&cyclotomic(n).to_rational());
            let mut f = hx.mul(&c).add(&py.mul(&e));
            if add_noise {
                f = f.add(&noise);
            }
            prop_assume!(!f.is_zero());
            prop_assert_eq!(
                cyclotomic_divides_resultant_x(&f, &h, n).unwrap(),
                divisibility_oracle(&f, &h, n)
            );
        }

        #[test]
        fn gcd_divides_both(a in small_uni(), b in small_uni(), c in small_uni()) {
            let pa = a.mul(&c);
            let pb = b.mul(&c);
            prop_assume!(!pa.is_zero() || !pb.is_zero());
            let g = gcd_uni(&pa, &pb).unwrap();
            prop_assert!(pa.rem(&g).is_zero());
            prop_assert!(pb.rem(&g).is_zero());
            if !c.is_zero() {
                prop_assert!(g.rem(&c.monic()).is_zero());
            }
        }

        #[test]
        fn resultant_vanishes_at_common_root(a in small_uni(), b in small_uni(), r in -5i64..=5) {
            let lin = up(&[-r, 1]);
            let pa = a.mul(&lin);
            let pb = b.mul(&lin);
            prop_assume!(!pa.is_zero() && !pb.is_zero());
            prop_assert!(resultant(&pa, &pb).is_zero());
        }

        #[test]
        fn resultant_y_specializes(f in small_bivar(), n in 1u64..=12, x0 in -20i64..=20) {
            // Res_Y(F, Phi_N)(x0) = Res(F(x0, Y), Phi_N) when deg_Y does not drop
            let phi = cyclotomic(n).to_rational();
            let r = resultant_y(&f, &phi).unwrap();
            let fy = f.as_poly_in_y();
            let spec: UniPoly = fy.map(|c| c.eval(&q(x0)));
            prop_assume!(spec.deg() == fy.deg());
            prop_assert_eq!(r.eval(&q(x0)), resultant(&spec, &phi));
        }

        #[test]
        fn resultant_against_oracle(a in small_uni(), b in small_uni()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!(resultant(&a, &b), sylvester_det(&a, &b));
        }

        #[test]
        fn display_is_stable(f in small_bivar()) {
            let s = f.to_string();
            prop_assert!(!s.contains("+ -"));
            prop_assert_eq!(s.is_empty(), false);
        }
    }
}
