//! Exact integer arithmetic: factorization, sigma-parts, primitive prime
//! divisors, and the standard classical-group order formulas used as
//! bookkeeping oracles elsewhere in the crate.
//!
//! Everything here works on `u64` (orders on `u128`). Inputs in this crate
//! never exceed 64 bits, so there is no big-integer path.

use std::collections::BTreeSet;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// gcd of a whole slice; 0 for an empty slice.
pub fn gcd_all(values: &[u64]) -> u64 {
    values.iter().fold(0, |acc, &v| gcd(acc, v))
}

pub fn pow_u64(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp).expect("pow_u64 overflow")
}

pub fn pow_u128(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).expect("pow_u128 overflow")
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus > 0);
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut result = 1u128;
    let mut b = (base as u128) % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Deterministic Miller-Rabin for `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for all n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle variant with a deterministic parameter sweep.
    debug_assert!(n > 1 && !is_prime(n) && n % 2 != 0);
    for c in 1..64u64 {
        let f = |x: u64| (mod_mul(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("pollard rho failed for {n}");
}

/// Prime factorization of `n >= 1` as a sorted multiset; empty for `n = 1`.
pub fn factorize_int(n: u64) -> Vec<u64> {
    assert!(n >= 1, "factorize_int requires n >= 1");
    let mut out = Vec::new();
    let mut stack = vec![n];
    while let Some(mut m) = stack.pop() {
        if m == 1 {
            continue;
        }
        for p in [2u64, 3, 5, 7, 11, 13] {
            while m % p == 0 {
                out.push(p);
                m /= p;
            }
        }
        if m == 1 {
            continue;
        }
        // trial division up to 2^20, Pollard rho beyond
        let mut d = 17u64;
        while d < (1 << 20) && d * d <= m {
            while m % d == 0 {
                out.push(d);
                m /= d;
            }
            d += 2;
        }
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            out.push(m);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    out.sort_unstable();
    out
}

/// Factorization of `n` as (prime, exponent) pairs in increasing prime order.
pub fn factor_map(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in factorize_int(n) {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// A sorted, duplicate-free set of primes: the sigma of sigma-parts, and
/// pi(n) when built from an integer.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrimeSet(BTreeSet<u64>);

impl PrimeSet {
    pub fn new<I: IntoIterator<Item = u64>>(primes: I) -> Self {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        assert!(set.iter().all(|&p| is_prime(p)), "PrimeSet members must be prime");
        PrimeSet(set)
    }

    pub fn empty() -> Self {
        PrimeSet(BTreeSet::new())
    }

    /// pi(n): the set of prime divisors of n.
    pub fn of(n: u64) -> Self {
        let mut set = BTreeSet::new();
        for p in factorize_int(n) {
            set.insert(p);
        }
        PrimeSet(set)
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.contains(&p)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset_of(&self, other: &PrimeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersect(&self, other: &PrimeSet) -> PrimeSet {
        PrimeSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn minus(&self, other: &PrimeSet) -> PrimeSet {
        PrimeSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn without(&self, p: u64) -> PrimeSet {
        let mut set = self.0.clone();
        set.remove(&p);
        PrimeSet(set)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

/// n split as n_sigma * n_{sigma'}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaDecomposition {
    pub n: u64,
    pub sigma_part: u64,
    pub sigma_prime_part: u64,
}

/// Largest divisor of `n` whose prime divisors all lie in `sigma`, paired
/// with the complementary part.
pub fn sigma_decompose(n: u64, sigma: &PrimeSet) -> SigmaDecomposition {
    assert!(n >= 1);
    let mut sigma_part = 1u64;
    let mut rest = n;
    for p in sigma.iter() {
        while rest % p == 0 {
            sigma_part *= p;
            rest /= p;
        }
    }
    SigmaDecomposition { n, sigma_part, sigma_prime_part: rest }
}

pub fn sigma_part(n: u64, sigma: &PrimeSet) -> u64 {
    sigma_decompose(n, sigma).sigma_part
}

pub fn sigma_prime_part(n: u64, sigma: &PrimeSet) -> u64 {
    sigma_decompose(n, sigma).sigma_prime_part
}

/// r-part of n for a single prime r.
pub fn prime_part(n: u64, r: u64) -> u64 {
    let mut part = 1;
    let mut rest = n;
    while rest % r == 0 {
        part *= r;
        rest /= r;
    }
    part
}

/// Multiplicative order of `a` modulo the prime `r`.
pub fn multiplicative_order_mod_prime(a: u64, r: u64) -> u64 {
    debug_assert!(is_prime(r) && a % r != 0);
    let mut ord = r - 1;
    for (p, _) in factor_map(r - 1) {
        while ord % p == 0 && mod_pow(a, ord / p, r) == 1 {
            ord /= p;
        }
    }
    ord
}

/// Smallest prime dividing `a^n - 1` but no `a^k - 1` with `k < n`, or
/// `None` at the Zsigmondy exceptions. The convention of viewing 7
/// as a primitive prime divisor of `2^6 - 1` is opted into with
/// `seven_for_2_6`; it is never applied silently.
pub fn primitive_prime_divisor(a: u64, n: u32, seven_for_2_6: bool) -> Option<u64> {
    assert!(a >= 2 && n >= 1);
    if seven_for_2_6 && a == 2 && n == 6 {
        return Some(7);
    }
    let value = pow_u128(a as u128, n) - 1;
    assert!(value <= u64::MAX as u128, "a^n - 1 exceeds 64 bits");
    let mut primes: Vec<u64> = factor_map(value as u64).into_iter().map(|(p, _)| p).collect();
    primes.sort_unstable();
    primes
        .into_iter()
        .find(|&r| r != a && multiplicative_order_mod_prime(a, r) == n as u64)
}

/// |Sp_{2m}(q)| = q^{m^2} * prod_{i=1}^{m} (q^{2i} - 1).
pub fn sp_order(m: u32, q: u64) -> u128 {
    let q = q as u128;
    let mut order = pow_u128(q, m * m);
    for i in 1..=m {
        order = order.checked_mul(pow_u128(q, 2 * i) - 1).expect("sp_order overflow");
    }
    order
}

/// |Omega^-_{2m}(q)| = q^{m(m-1)} (q^m + 1) prod_{i=1}^{m-1} (q^{2i} - 1) / gcd(2, q-1).
pub fn omega_minus_order(m: u32, q: u64) -> u128 {
    let qq = q as u128;
    let mut order = pow_u128(qq, m * (m - 1)).checked_mul(pow_u128(qq, m) + 1).unwrap();
    for i in 1..m {
        order = order.checked_mul(pow_u128(qq, 2 * i) - 1).expect("omega_minus_order overflow");
    }
    order / gcd(2, q - 1) as u128
}

/// |SU_n(q)| = q^{n(n-1)/2} * prod_{i=2}^{n} (q^i - (-1)^i).
pub fn su_order(n: u32, q: u64) -> u128 {
    let q = q as u128;
    let mut order = pow_u128(q, n * (n - 1) / 2);
    for i in 2..=n {
        let factor = if i % 2 == 0 { pow_u128(q, i) - 1 } else { pow_u128(q, i) + 1 };
        order = order.checked_mul(factor).expect("su_order overflow");
    }
    order
}
