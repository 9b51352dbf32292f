//! Elementary arithmetic functions on positive integers.
//!
//! Factorization is deterministic for every `u64`: trial division by small
//! primes, a Miller-Rabin test with a witness set that is exact below 2^64,
//! and Pollard's rho (Brent variant) for the remaining composite cofactors.

use num_integer::Integer;

/// Prime factorization as `(prime, exponent)` pairs, ascending by prime.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.0.iter().find(|&&(q, _)| q == p).map(|&(_, e)| e).unwrap_or(0)
    }

    /// Multiplies the prime powers back together.
    pub fn value(&self) -> u128 {
        self.0.iter().fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

const SMALL_PRIMES: [u64; 25] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // These witnesses are sufficient for all n < 3.3 * 10^24.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut ys = 2u64;
        let mut r = 1u64;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Exact prime factorization; `factorize(1)` is empty.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut rest = n;
    let mut primes = Vec::new();
    for &p in &SMALL_PRIMES {
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    let mut f = 101u64;
    while rest > 1 && f < 1000 && f * f <= rest {
        while rest.is_multiple_of(f) {
            primes.push(f);
            rest /= f;
        }
        f += 2;
    }
    split_into(rest, &mut primes);
    primes.sort_unstable();
    let mut pairs: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match pairs.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => pairs.push((p, 1)),
        }
    }
    Factorization(pairs)
}

/// Euler's totient.
pub fn phi(n: u64) -> u64 {
    factorize(n).pairs().iter().fold(1u64, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> u32 {
    factorize(n).pairs().len() as u32
}

/// 2-adic valuation.
pub fn v2(n: u64) -> u32 {
    n.trailing_zeros()
}

/// The 2-adic correction: writing `n = 2^k (2m+1)`, this is 0 for k in {0, 2},
/// 1 for k = 1 and -1 for k >= 3.
pub fn c1(n: u64) -> i32 {
    assert!(n >= 1);
    match v2(n) {
        0 | 2 => 0,
        1 => 1,
        _ => -1,
    }
}

/// 1 iff 4 divides `n` or some prime p = 3 (mod 4) divides `n`.
pub fn c2(n: u64) -> i32 {
    assert!(n >= 1);
    if n.is_multiple_of(4) || factorize(n).primes().any(|p| p % 4 == 3) {
        1
    } else {
        0
    }
}

/// The exponent `omega(n) - c1(n) - c2(n)`; always nonnegative.
pub fn square_class_exponent(n: u64) -> u32 {
    (omega(n) as i32 - c1(n) - c2(n)) as u32
}

/// Order of `(Z/NZ)^x / ((Z/NZ)^x)^2`, computed by enumerating residues.
///
/// This deliberately does not use [`c1`] or [`omega`].
pub fn unit_square_class_order(n: u64) -> u64 {
    assert!((1..=1_000_000).contains(&n), "enumeration limited to N <= 10^6");
    if n == 1 {
        return 1;
    }
    let mut is_square = vec![false; n as usize];
    let mut units = 0u64;
    let mut squares = 0u64;
    for x in 1..n {
        if x.gcd(&n) != 1 {
            continue;
        }
        units += 1;
        let s = (x * x % n) as usize;
        if !is_square[s] {
            is_square[s] = true;
            squares += 1;
        }
    }
    units / squares
}

/// Totient and distinct-prime-count tables for `0..=limit` via a linear sieve.
pub fn phi_omega_table(limit: usize) -> (Vec<u64>, Vec<u32>) {
    let mut phi = vec![0u64; limit + 1];
    let mut omega = vec![0u32; limit + 1];
    let mut least = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    if limit >= 1 {
        phi[1] = 1;
    }
    for i in 2..=limit {
        if least[i] == 0 {
            least[i] = i as u32;
            primes.push(i as u32);
            phi[i] = i as u64 - 1;
            omega[i] = 1;
        }
        for &p in &primes {
            let ip = i * p as usize;
            if p > least[i] || ip > limit {
                break;
            }
            least[ip] = p;
            if p == least[i] {
                phi[ip] = phi[i] * p as u64;
                omega[ip] = omega[i];
            } else {
                phi[ip] = phi[i] * (p as u64 - 1);
                omega[ip] = omega[i] + 1;
            }
        }
    }
    (phi, omega)
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Residues in `1..n` coprime to `n`.
pub fn units_mod(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|x| x.gcd(&n) == 1).collect()
}

/// Representatives of the cosets of the subgroup generated by the squares and
/// -1 inside `(Z/NZ)^x`. There are exactly `2^(omega - c1 - c2)` of them.
pub fn square_sign_coset_reps(n: u64) -> Vec<u64> {
    let units = units_mod(n);
    if n <= 2 {
        return units;
    }
    let mut subgroup = vec![false; n as usize];
    for &x in &units {
        let s = x * x % n;
        subgroup[s as usize] = true;
        subgroup[((n - s) % n) as usize] = true;
    }
    let members: Vec<u64> = (0..n).filter(|&x| subgroup[x as usize]).collect();
    let mut covered = vec![false; n as usize];
    let mut reps = Vec::new();
    for &x in &units {
        if covered[x as usize] {
            continue;
        }
        reps.push(x);
        for &h in &members {
            covered[(x * h % n) as usize] = true;
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).is_empty());
        assert_eq!(factorize(12).pairs(), &[(2, 2), (3, 1)]);
        let expect = trial_division(30030);
        assert_eq!(factorize(30030).pairs(), expect.as_slice());
        assert_eq!(expect, vec![(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1)]);
    }

    #[test]
    fn factorize_round_trips_below_1e5() {
        for n in 1..=100_000u64 {
            let f = factorize(n);
            assert_eq!(f.value(), n as u128);
            assert!(f.primes().all(is_prime));
            assert!(f.pairs().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn large_semiprimes() {
        let p = 4_294_967_291u64;
        let q = 4_294_967_279u64;
        assert_eq!(factorize(p * q).pairs(), &[(q, 1), (p, 1)]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn phi_omega_examples() {
        assert_eq!((phi(8), omega(8)), (4, 1));
        assert_eq!((phi(1), omega(1)), (1, 0));
        // 1*2*4*6*10*12
        assert_eq!(phi(30030), 5760);
        assert_eq!(omega(30030), 6);
    }

    #[test]
    fn c1_c2_examples() {
        assert_eq!(c1(1), 0);
        assert_eq!(c1(4), 0);
        assert_eq!(c1(2), 1);
        assert_eq!(c1(8), -1);
        assert_eq!(c1(48), -1);
        assert_eq!(c2(4), 1);
        assert_eq!(c2(5), 0);
        assert_eq!(c2(1), 0);
        assert_eq!(c2(15), 1);
    }

    #[test]
    fn unit_square_examples() {
        assert_eq!(unit_square_class_order(1), 1);
        assert_eq!(unit_square_class_order(8), 4);
        assert_eq!(unit_square_class_order(12), 4);
    }

    #[test]
    fn unit_squares_match_closed_form() {
        for n in 1..=10_000u64 {
            let e = omega(n) as i32 - c1(n);
            assert_eq!(unit_square_class_order(n), 1u64 << e, "N = {n}");
        }
    }

    #[test]
    fn c1_plus_c2_range() {
        for n in 1..=20_000u64 {
            assert!((0..=2).contains(&(c1(n) + c2(n))));
        }
    }

    #[test]
    fn sieve_agrees_with_factorization() {
        let (ph, om) = phi_omega_table(5000);
        for n in 1..=5000u64 {
            assert_eq!(ph[n as usize], phi(n));
            assert_eq!(om[n as usize], omega(n));
        }
    }

    #[test]
    fn coset_reps_count() {
        for n in 1..=600u64 {
            let reps = square_sign_coset_reps(n);
            assert_eq!(reps.len(), 1usize << square_class_exponent(n), "N = {n}");
        }
    }

    proptest! {
        #[test]
        fn phi_multiplicative_omega_additive(a in 1u64..50_000, b in 1u64..50_000) {
            prop_assume!(a.gcd(&b) == 1);
            prop_assert_eq!(phi(a * b), phi(a) * phi(b));
            prop_assert_eq!(omega(a * b), omega(a) + omega(b));
        }

        #[test]
        fn factorize_random_u64(n in 1u64..) {
            let f = factorize(n);
            prop_assert_eq!(f.value(), n as u128);
            prop_assert!(f.primes().all(is_prime));
        }
    }
}
