//! Search for special points `(j(tau), lambda)` on a curve `F = 0`.
//!
//! For every admissible order `N` and every coset of `<squares, -1>` in
//! `(Z/NZ)^x`, the roots of `F'(X, zeta_N^k)` are enclosed in certified discs.
//! Discs meeting the real axis are compared with principal singular moduli,
//! which are real. A match for discriminant `D` is confirmed exactly by
//! `Phi_N | Res_X(F', H_D)`.
//!
//! Galois conjugation moves any special point to one whose first coordinate
//! is the principal modulus of its discriminant, and the stabilizer of that
//! modulus acts on `lambda` through a subgroup containing the squares and -1.
//! Scanning one exponent per coset therefore misses nothing.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith;
use crate::ball::{root_of_unity, Ball, CBall, Mag};
use crate::bounds::{self, BoundInput, BoundsError};
use crate::cm::{self, CmError, Disc};
use crate::poly::{
    cyclotomic, cyclotomic_divides_resultant_x, norm_form, BivarPoly, FieldPoly, Height, NumberFieldSpec, PolyError,
    UniPoly,
};
use crate::roots::{isolate_roots, isolate_roots_quick, RootDisc, RootError};

/// Largest `|D|` whose class polynomial is attempted without an explicit cap.
pub const FEASIBLE_DISC: u64 = 1_000_000;
/// Precision doublings before a root is reported undecided.
pub const MAX_ROUNDS: u32 = 6;
/// A residual enclosure counts as vanishing below this magnitude.
pub const VANISH_RADIUS: f64 = 1e-20;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("the zero polynomial does not define a curve")]
    ZeroPolynomial,
    #[error("constant polynomial {0} does not define a curve")]
    Constant(String),
    #[error("curve contains vertical lines: nonconstant divisor {0} in Q[X]")]
    DivisorInX(String),
    #[error("curve contains horizontal lines: nonconstant divisor {0} in Q[Y]")]
    DivisorInY(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(
        "certified discriminant cap {cap:.6e} is beyond exact recognition (candidate D = {disc}); \
         pass an explicit discriminant cap"
    )]
    InfeasibleDeltaCap { cap: f64, disc: i64 },
    #[error("internal: F'(X, zeta_{0}) vanishes identically")]
    VanishingSpecialization(u64),
}

impl SolverError {
    /// True for inputs that are mathematically not admissible curves.
    pub fn is_rejection(&self) -> bool {
        matches!(
            self,
            SolverError::ZeroPolynomial
                | SolverError::Constant(_)
                | SolverError::DivisorInX(_)
                | SolverError::DivisorInY(_)
        )
    }
}

/// A curve over `Q` or over a number field, with optional search limits.
#[derive(Clone, Debug)]
pub struct CurveInput {
    pub poly: FieldPoly,
    pub field: NumberFieldSpec,
    pub delta_cap_override: Option<u64>,
    pub n_max_override: Option<u64>,
}

impl CurveInput {
    pub fn over_q(f: &BivarPoly) -> CurveInput {
        CurveInput {
            poly: FieldPoly::from_bivar(f),
            field: NumberFieldSpec::rationals(),
            delta_cap_override: None,
            n_max_override: None,
        }
    }

    pub fn over_field(f: FieldPoly, field: NumberFieldSpec) -> CurveInput {
        CurveInput { poly: f, field, delta_cap_override: None, n_max_override: None }
    }

    pub fn with_delta_cap(mut self, cap: u64) -> CurveInput {
        self.delta_cap_override = Some(cap);
        self
    }

    pub fn with_n_max(mut self, n: u64) -> CurveInput {
        self.n_max_override = Some(n);
        self
    }
}

/// The curve over `Q` the search runs on.
#[derive(Clone, Debug)]
pub struct ReducedCurve {
    /// Primitive integral `F'`.
    pub poly: BivarPoly,
    pub d: usize,
    pub delta1: u32,
    pub delta2: u32,
    pub height: Height,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairVerdict {
    Vanishes,
    Excluded,
    Undecided,
}

impl PairVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairVerdict::Vanishes => "vanishes",
            PairVerdict::Excluded => "excluded",
            PairVerdict::Undecided => "undecided",
        }
    }
}

/// Evidence for one `(alpha, zeta_N^k)`.
#[derive(Clone, Debug)]
pub struct PairReport {
    pub alpha: CBall,
    pub lambda_exponent: u64,
    /// Enclosure of `F'(alpha, zeta_N^k)`.
    pub residual: CBall,
    pub verdict: PairVerdict,
}

#[derive(Clone, Debug)]
pub struct SpecialPointReport {
    pub n: u64,
    pub disc: Disc,
    /// Monic factor of both `R_N` and `H_D`; always `H_D` itself since `H_D`
    /// is irreducible.
    pub factor: UniPoly,
    /// Vanishing and undecided pairs, sorted by exponent then root.
    pub pairs: Vec<PairReport>,
    pub exact: bool,
}

/// A real-axis root disc that could not be resolved at the precision cap.
#[derive(Clone, Debug, PartialEq)]
pub struct UndecidedRoot {
    pub n: u64,
    pub k: u64,
    pub center: (f64, f64),
    pub radius: f64,
    pub precision: u32,
}

#[derive(Clone, Debug)]
pub struct SearchBounds {
    pub a: f64,
    /// Certified cap from the degree and height of `F'`.
    pub delta_cap: f64,
    /// Cap actually used: the override when given.
    pub delta_cap_used: f64,
    pub n_cap: f64,
    pub n_candidates: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub curve: ReducedCurve,
    pub bounds: SearchBounds,
    pub reports: Vec<SpecialPointReport>,
    pub undecided: Vec<UndecidedRoot>,
}

impl Solution {
    pub fn undecided_count(&self) -> usize {
        self.undecided.len()
            + self.reports.iter().flat_map(|r| &r.pairs).filter(|p| p.verdict == PairVerdict::Undecided).count()
    }

    /// Hits violating the order filter, the candidate list or the cap.
    pub fn bound_chain_violations(&self) -> Vec<(u64, i64)> {
        let d2 = self.curve.delta2 as u64;
        self.reports
            .iter()
            .filter(|r| {
                let n = r.n;
                let filter =
                    bounds::satisfies_order_filter(arith::phi(n), arith::omega(n), arith::c1(n), arith::c2(n), d2);
                !(filter && self.bounds.n_candidates.contains(&n) && (r.disc.abs() as f64) <= self.bounds.delta_cap)
            })
            .map(|r| (r.n, r.disc.value()))
            .collect()
    }
}

/// Accepts `F` iff it has positive degree in both variables and no
/// nonconstant divisor in `Q[X]` or `Q[Y]`.
pub fn validate_curve(f: &BivarPoly) -> Result<(), SolverError> {
    if f.is_zero() {
        return Err(SolverError::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(SolverError::Constant(f.to_string()));
    }
    let cx = f.content_in_x()?;
    if !cx.is_constant() {
        return Err(SolverError::DivisorInX(cx.display_var("X")));
    }
    let cy = f.content_in_y()?;
    if !cy.is_constant() {
        return Err(SolverError::DivisorInY(cy.display_var("Y")));
    }
    Ok(())
}

/// The norm `F'` over `Q`, validated and made primitive integral.
pub fn reduce_to_q(input: &CurveInput) -> Result<ReducedCurve, SolverError> {
    if input.poly.is_zero() {
        return Err(SolverError::ZeroPolynomial);
    }
    let f = if input.field.degree() == 1 {
        match input.poly.to_bivar() {
            Some(b) => b,
            None => norm_form(&input.poly, &input.field)?,
        }
    } else {
        norm_form(&input.poly, &input.field)?
    };
    validate_curve(&f)?;
    let poly = f.primitive_integral()?;
    let height = poly.height_q()?;
    Ok(ReducedCurve { delta1: poly.deg_x(), delta2: poly.deg_y(), d: input.field.degree(), height, poly })
}

fn start_precision(height: &Height) -> u32 {
    let bits = height.big_h.bits().max(1) as f64;
    let steps = (1.0 + bits).log2().ceil() as u32;
    (64 * steps).max(128)
}

fn max_precision(p0: u32) -> u32 {
    let full = p0 << MAX_ROUNDS;
    match crate::precision_cap() {
        Some(cap) => full.min(cap.max(p0)),
        None => full,
    }
}

fn ball_from_int(c: &BigRational, prec: u32) -> CBall {
    if c.is_integer() {
        CBall::from_bigint(c.numer(), prec)
    } else {
        CBall::from_rational(c, prec)
    }
}

/// Remainder of an integral `g` modulo a monic integer polynomial.
fn rem_monic(g: &UniPoly, m: &[BigInt]) -> UniPoly {
    let mut r: Vec<BigInt> = g.coeffs().iter().map(|c| c.to_integer()).collect();
    let d = m.len() - 1;
    while r.len() > d {
        let top = r.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let off = r.len() - d;
        for (i, c) in m[..d].iter().enumerate() {
            r[off + i] -= &top * c;
        }
    }
    UniPoly::new(r.into_iter().map(BigRational::from_integer).collect())
}

/// `F(x, y)` in ball arithmetic.
pub fn eval_bivar(f: &BivarPoly, x: &CBall, y: &CBall) -> CBall {
    let prec = x.prec().max(y.prec());
    let mut xp = vec![CBall::one(prec)];
    for _ in 0..f.deg_x() {
        let next = xp.last().unwrap().mul(x);
        xp.push(next);
    }
    let mut yp = vec![CBall::one(prec)];
    for _ in 0..f.deg_y() {
        let next = yp.last().unwrap().mul(y);
        yp.push(next);
    }
    let mut acc = CBall::zero(prec);
    for (&(i, j), c) in f.terms() {
        let t = xp[i as usize].mul(&yp[j as usize]);
        acc = acc.add(&t.mul(&ball_from_int(c, prec)));
    }
    acc
}

struct Search<'a> {
    curve: &'a ReducedCurve,
    /// Coefficients of `F'` as a polynomial in X, each a polynomial in Y.
    gx: Vec<UniPoly>,
    cap: f64,
    cap_is_override: bool,
    p0: u32,
    pmax: u32,
    hit_cache: Mutex<HashMap<(i64, u64), bool>>,
    j_cache: Mutex<HashMap<(i64, u32), Ball>>,
}

#[derive(Default)]
struct OrderScan {
    hits: BTreeSet<i64>,
    undecided: Vec<UndecidedRoot>,
}

impl<'a> Search<'a> {
    fn specialize(&self, red: &[UniPoly], n: u64, k: u64, prec: u32, table: &mut PowerTable) -> Vec<CBall> {
        let dmax = red.iter().map(|g| g.coeffs().len()).max().unwrap_or(0);
        let all = table.get(n, prec);
        let powers: Vec<&CBall> = (0..dmax as u64).map(|e| &all[((k * e) % n) as usize]).collect();
        red.iter()
            .map(|g| {
                g.coeffs()
                    .iter()
                    .zip(&powers)
                    .filter(|(c, _)| !c.is_zero())
                    .fold(CBall::zero(prec), |acc, (c, z)| acc.add(&z.mul(&ball_from_int(c, prec))))
            })
            .collect()
    }

    fn scan_order(&self, n: u64) -> Result<OrderScan, SolverError> {
        let phi_n = cyclotomic(n);
        let red: Vec<UniPoly> = self.gx.iter().map(|g| rem_monic(g, phi_n.coeffs())).collect();
        let Some(deg) = red.iter().rposition(|g| !g.is_zero()) else {
            return Err(SolverError::VanishingSpecialization(n));
        };
        let mut out = OrderScan::default();
        if deg == 0 {
            return Ok(out);
        }
        let red = &red[..=deg];
        let mut table = PowerTable::default();
        for k in arith::square_sign_coset_reps(n) {
            self.scan_coset(red, n, k, &mut out, &mut table)?;
        }
        Ok(out)
    }

    fn scan_coset(
        &self,
        red: &[UniPoly],
        n: u64,
        k: u64,
        out: &mut OrderScan,
        table: &mut PowerTable,
    ) -> Result<(), SolverError> {
        let mut prec = self.p0;
        let mut seed: Option<Vec<CBall>> = None;
        let mut round = 0;
        let mut quick = true;
        loop {
            let coeffs = self.specialize(red, n, k, prec, table);
            let ready = !coeffs[red.len() - 1].abs_lower().is_zero();
            let found =
                if quick { isolate_roots_quick(&coeffs) } else { isolate_roots(&coeffs, prec, seed.as_deref()) };
            let discs = if ready {
                match found {
                    Ok(d) => Some(d),
                    Err(RootError::Degenerate(_)) => None,
                    Err(e) => unreachable!("root isolation: {e}"),
                }
            } else {
                None
            };
            let mut pending: Vec<RootDisc> = Vec::new();
            if let Some(discs) = &discs {
                for disc in discs.iter().filter(|d| d.meets_real_axis()) {
                    if !self.match_disc(disc, n, prec, &mut out.hits)? {
                        pending.push(disc.clone());
                    }
                }
                if pending.is_empty() {
                    return Ok(());
                }
            }
            if round >= MAX_ROUNDS || prec.saturating_mul(2) > self.pmax {
                if pending.is_empty() {
                    // leading coefficient or approximations never separated
                    pending.push(RootDisc { center: CBall::zero(prec), radius: Mag::from_f64_up(f64::MAX) });
                }
                for d in pending {
                    let (re, im) = d.center.to_f64_pair();
                    out.undecided.push(UndecidedRoot {
                        n,
                        k,
                        center: (re, im),
                        radius: d.radius.to_f64_up(),
                        precision: prec,
                    });
                }
                return Ok(());
            }
            seed = discs.map(|ds| ds.into_iter().map(|d| d.center).collect());
            if quick && ready {
                // refine at the same precision before doubling
                quick = false;
                continue;
            }
            quick = false;
            prec *= 2;
            round += 1;
        }
    }

    /// Resolves a real-axis disc; `false` means more precision is needed.
    fn match_disc(&self, disc: &RootDisc, n: u64, prec: u32, hits: &mut BTreeSet<i64>) -> Result<bool, SolverError> {
        let x = disc.real_interval();
        let cap = self.cap.min(4e18) as u64;
        let Some(cands) = cm::principal_candidates(&x, cap) else {
            return Ok(false);
        };
        for d in cands {
            if d.abs() as f64 > self.cap {
                continue;
            }
            let pj = self.principal_j(d, prec);
            if !pj.overlaps(&x) {
                continue;
            }
            if CBall::from_real(pj).sub(&disc.center).abs_lower() > disc.radius {
                continue;
            }
            if !self.cap_is_override && d.abs() > FEASIBLE_DISC {
                return Err(SolverError::InfeasibleDeltaCap { cap: self.cap, disc: d.value() });
            }
            if self.order_divides(d, n)? {
                hits.insert(d.value());
            }
        }
        Ok(true)
    }

    fn principal_j(&self, d: Disc, prec: u32) -> Ball {
        if let Some(v) = self.j_cache.lock().unwrap().get(&(d.value(), prec)) {
            return v.clone();
        }
        let v = cm::principal_j(d, prec);
        self.j_cache.lock().unwrap().insert((d.value(), prec), v.clone());
        v
    }

    /// Exact test `Phi_N | Res_X(F', H_D)`.
    fn order_divides(&self, d: Disc, n: u64) -> Result<bool, SolverError> {
        if let Some(&v) = self.hit_cache.lock().unwrap().get(&(d.value(), n)) {
            return Ok(v);
        }
        let h = cm::class_poly(d)?;
        let v = cyclotomic_divides_resultant_x(&self.curve.poly, &h.coeffs, n)?;
        self.hit_cache.lock().unwrap().insert((d.value(), n), v);
        Ok(v)
    }
}

/// Powers of `zeta_N` at one precision.
#[derive(Default)]
struct PowerTable {
    key: (u64, u32),
    powers: Vec<CBall>,
}

impl PowerTable {
    fn get(&mut self, n: u64, prec: u32) -> &[CBall] {
        if self.key != (n, prec) || self.powers.is_empty() {
            let z = root_of_unity(1, n, prec + 32);
            let mut p = CBall::one(prec + 32);
            let mut out = Vec::with_capacity(n as usize);
            for e in 0..n {
                // recompute directly every 16 steps to bound error growth
                if e % 16 == 0 {
                    p = root_of_unity(e as i64, n, prec + 32);
                }
                out.push(p.with_prec(prec));
                p = p.mul(&z);
            }
            self.key = (n, prec);
            self.powers = out;
        }
        &self.powers
    }
}

/// Computes the bounds for `F'` and runs the full search.
pub fn special_points(input: &CurveInput) -> Result<Solution, SolverError> {
    let curve = reduce_to_q(input)?;
    let bi = BoundInput { d: 1, delta1: curve.delta1 as u64, delta2: curve.delta2 as u64, h_f: curve.height.h };
    let report = bounds::compute_bounds(&bi)?;
    let mut n_candidates = report.n_candidates.clone();
    if let Some(m) = input.n_max_override {
        n_candidates.retain(|&n| n <= m);
    }
    let (cap, cap_is_override) = match input.delta_cap_override {
        Some(c) => (c as f64, true),
        None => (report.delta_cap, false),
    };
    let p0 = start_precision(&curve.height);
    let search = Search {
        curve: &curve,
        gx: curve.poly.as_poly_in_x().into_coeffs(),
        cap,
        cap_is_override,
        p0,
        pmax: max_precision(p0),
        hit_cache: Mutex::new(HashMap::new()),
        j_cache: Mutex::new(HashMap::new()),
    };
    let scans: Vec<OrderScan> = n_candidates.par_iter().map(|&n| search.scan_order(n)).collect::<Result<_, _>>()?;
    let mut hits: Vec<(u64, i64)> = Vec::new();
    let mut undecided = Vec::new();
    for (n, s) in n_candidates.iter().zip(scans) {
        hits.extend(s.hits.iter().map(|&d| (*n, d)));
        undecided.extend(s.undecided);
    }
    let mut reports: Vec<SpecialPointReport> = hits
        .par_iter()
        .map(|&(n, d)| {
            let disc = Disc::new(d)?;
            let factor = cm::class_poly(disc)?.coeffs.to_rational();
            let pairs = classify_pairs(&curve.poly, &factor, n, p0, max_precision(p0))
                .into_iter()
                .filter(|p| p.verdict != PairVerdict::Excluded)
                .collect();
            Ok(SpecialPointReport { n, disc, factor, pairs, exact: true })
        })
        .collect::<Result<_, SolverError>>()?;
    reports.sort_by(|a, b| {
        (a.n, a.disc.abs()).cmp(&(b.n, b.disc.abs())).then_with(|| a.factor.coeffs().cmp(b.factor.coeffs()))
    });
    Ok(Solution {
        bounds: SearchBounds {
            a: report.a,
            delta_cap: report.delta_cap,
            delta_cap_used: cap,
            n_cap: report.n_cap,
            n_candidates,
        },
        curve,
        reports,
        undecided,
    })
}

fn log2_root_bound(f: &UniPoly) -> f64 {
    let n = f.deg();
    let lc = f.lc();
    (1..=n)
        .filter_map(|i| {
            let c = f.coeff(n - i) / &lc;
            (!c.is_zero()).then(|| {
                let v = c.abs();
                (crate::poly::ln_bigint(v.numer()) - crate::poly::ln_bigint(v.denom()))
                    / std::f64::consts::LN_2
                    / i as f64
            })
        })
        .fold(0.0, f64::max)
        + 1.0
}

fn discs_separated(d: &[RootDisc]) -> bool {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let gap = d[i].center.sub(&d[j].center).abs_lower();
            if gap <= d[i].radius.add(&d[j].radius) {
                return false;
            }
        }
    }
    true
}

/// Verdicts for every root of `factor` against every `zeta_N^k`, `k` coprime
/// to `N`, escalating precision from `p_start` up to `p_max`.
pub fn classify_pairs(f: &BivarPoly, factor: &UniPoly, n: u64, p_start: u32, p_max: u32) -> Vec<PairReport> {
    let ks: Vec<u64> = if n == 1 { vec![0] } else { arith::units_mod(n) };
    classify_pairs_for(f, factor, n, &ks, p_start, p_max)
}

/// The verdict set for one exponent `k`.
pub fn certify_pair(f: &BivarPoly, alpha_factor: &UniPoly, n: u64, k: u64) -> Vec<PairReport> {
    let h = f.height_q().map(|h| start_precision(&h)).unwrap_or(128);
    classify_pairs_for(f, alpha_factor, n, &[k % n.max(1)], h, max_precision(h))
}

fn classify_pairs_for(
    f: &BivarPoly,
    factor: &UniPoly,
    n: u64,
    ks: &[u64],
    p_start: u32,
    p_max: u32,
) -> Vec<PairReport> {
    let extra = (f.deg_x() as f64 * log2_root_bound(factor).max(0.0)).ceil() as u32 + 64;
    let mut prec = p_start.saturating_add(extra).min(p_max.max(p_start));
    let coeffs_of = |p: u32| -> Vec<CBall> { factor.coeffs().iter().map(|c| CBall::from_rational(c, p)).collect() };
    let mut seed: Option<Vec<CBall>> = None;
    let mut verdicts: HashMap<(usize, u64), PairReport> = HashMap::new();
    let deg = factor.deg();
    loop {
        let last = prec >= p_max;
        let roots = isolate_roots(&coeffs_of(prec), prec, seed.as_deref()).ok().filter(|d| discs_separated(d));
        if let Some(roots) = &roots {
            for (i, r) in roots.iter().enumerate() {
                let alpha = r.as_cball();
                for &k in ks {
                    if matches!(verdicts.get(&(i, k)), Some(p) if p.verdict != PairVerdict::Undecided) {
                        continue;
                    }
                    let lambda = root_of_unity(k as i64, n, prec);
                    let residual = eval_bivar(f, &alpha, &lambda);
                    let verdict = if !residual.contains_zero() {
                        PairVerdict::Excluded
                    } else if residual.abs_upper().to_f64_up() < VANISH_RADIUS && prec >= 2 * p_start.min(prec) {
                        PairVerdict::Vanishes
                    } else {
                        PairVerdict::Undecided
                    };
                    verdicts.insert((i, k), PairReport { alpha: alpha.clone(), lambda_exponent: k, residual, verdict });
                }
            }
        }
        let done = roots.is_some()
            && verdicts.len() == deg * ks.len()
            && verdicts.values().all(|p| p.verdict != PairVerdict::Undecided);
        if done || last {
            break;
        }
        seed = roots.map(|ds| ds.into_iter().map(|d| d.center).collect());
        prec = (prec * 2).min(p_max);
    }
    let mut out: Vec<PairReport> = verdicts.into_values().collect();
    out.sort_by(|a, b| {
        let (ar, ai) = a.alpha.to_f64_pair();
        let (br, bi) = b.alpha.to_f64_pair();
        a.lambda_exponent.cmp(&b.lambda_exponent).then(ar.total_cmp(&br)).then(ai.total_cmp(&bi))
    });
    out
}

/// Real ball around a rational, exposed for report rendering.
pub fn rational_ball(q: &BigRational, prec: u32) -> Ball {
    Ball::from_rational(q, prec)
}

/// Integer coefficients of a monic integral factor, leading first.
pub fn factor_coeffs_desc(f: &UniPoly) -> Vec<BigInt> {
    f.coeffs().iter().rev().map(|c| c.to_integer()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(terms: &[(i64, u32, u32)]) -> BivarPoly {
        BivarPoly::from_terms(terms.iter().map(|&(c, i, j)| ((i, j), BigRational::from_integer(c.into()))))
    }

    #[test]
    fn validation_examples() {
        assert!(validate_curve(&bv(&[(1, 1, 1), (-1, 0, 0)])).is_ok());
        let line = bv(&[(1, 1, 1), (-1, 1, 0), (-1, 0, 1), (1, 0, 0)]);
        match validate_curve(&line) {
            Err(SolverError::DivisorInX(s)) => assert_eq!(s, "X - 1"),
            other => panic!("{other:?}"),
        }
        match validate_curve(&bv(&[(1, 2, 0)])) {
            Err(SolverError::DivisorInX(s)) => assert_eq!(s, "X^2"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(validate_curve(&BivarPoly::zero()), Err(SolverError::ZeroPolynomial)));
        assert!(matches!(validate_curve(&bv(&[(5, 0, 0)])), Err(SolverError::Constant(_))));
    }

    #[test]
    fn reduce_over_sqrt2() {
        let mut f = FieldPoly::term(BigRational::from_integer(1.into()), 1, 0, 0);
        f.add_term(BigRational::from_integer(1.into()), 0, 1, 1);
        let k = NumberFieldSpec::new(crate::poly::IntPoly::from_i64s(&[-2, 0, 1]), 0, false).unwrap();
        let r = reduce_to_q(&CurveInput::over_field(f, k)).unwrap();
        assert_eq!(r.poly, bv(&[(1, 2, 0), (-2, 0, 2)]));
        assert_eq!(r.d, 2);
        assert!((r.height.h - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn certify_pair_examples() {
        let f = bv(&[(1, 1, 0), (1, 0, 2), (-1727, 0, 0)]);
        let a = UniPoly::from_i64s(&[-1728, 1]);
        for (n, k, want) in
            [(4, 1, PairVerdict::Vanishes), (4, 3, PairVerdict::Vanishes), (3, 1, PairVerdict::Excluded)]
        {
            let v = certify_pair(&f, &a, n, k);
            assert_eq!(v.len(), 1);
            assert_eq!(v[0].verdict, want, "N={n} k={k}");
        }
    }

    #[test]
    fn finds_1728_point() {
        let f = bv(&[(1, 1, 0), (1, 0, 2), (-1727, 0, 0)]);
        let sol = special_points(&CurveInput::over_q(&f)).unwrap();
        assert_eq!(sol.reports.len(), 1);
        let r = &sol.reports[0];
        assert_eq!((r.n, r.disc.value()), (4, -4));
        assert_eq!(r.factor, UniPoly::from_i64s(&[-1728, 1]));
        let ks: Vec<u64> = r.pairs.iter().map(|p| p.lambda_exponent).collect();
        assert_eq!(ks, vec![1, 3]);
        assert!(r.pairs.iter().all(|p| p.verdict == PairVerdict::Vanishes));
        assert_eq!(sol.undecided_count(), 0);
        assert!(sol.bound_chain_violations().is_empty());
    }

    #[test]
    fn hyperbola_has_no_special_points() {
        let f = bv(&[(1, 1, 1), (-1, 0, 0)]);
        let sol = special_points(&CurveInput::over_q(&f).with_delta_cap(100_000)).unwrap();
        assert!(sol.reports.is_empty());
        assert_eq!(sol.undecided_count(), 0);
    }
}
