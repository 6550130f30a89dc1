//! Property tests for the number-theoretic lemmas and the sigma-part
//! machinery, with independent big-integer oracles.

use foulser::arith::{factor_map, gcd, prime_part, sigma_decompose, PrimeSet};
use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

/// r-adic valuation of n^l - 1, computed exactly modulo r^K for K safely
/// above the expected valuation.
fn valuation_of_pow_minus_one(n: u64, l: u64, r: u64) -> u32 {
    let expected_bound = val(l, r) + val(n - 1, r) + 2;
    let modulus = BigUint::from(r).pow(expected_bound);
    let t = (BigUint::from(n).modpow(&BigUint::from(l), &modulus) + &modulus
        - BigUint::from(1u32))
        % &modulus;
    if t == BigUint::from(0u32) {
        return expected_bound; // saturated; caller treats as >= bound
    }
    let mut t = t;
    let big_r = BigUint::from(r);
    let mut v = 0;
    while (&t % &big_r) == BigUint::from(0u32) {
        t /= &big_r;
        v += 1;
    }
    v
}

fn val(mut n: u64, r: u64) -> u32 {
    let mut v = 0;
    while n % r == 0 {
        n /= r;
        v += 1;
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// (n^l - 1)_r = l_r (n - 1)_r for odd primes r dividing n - 1.
    #[test]
    fn lifting_the_exponent_odd(seed in 2u64..1_000_000, l in 1u64..1_000_000) {
        let n = seed;
        for (r, _) in factor_map(n - 1) {
            if r == 2 {
                continue;
            }
            let lhs = valuation_of_pow_minus_one(n, l, r);
            let rhs = val(l, r) + val(n - 1, r);
            prop_assert_eq!(lhs, rhs, "n={} l={} r={}", n, l, r);
        }
    }

    /// (n^l - 1)_2 = l_2 (n - 1)_2 when 4 divides n - 1.
    #[test]
    fn lifting_the_exponent_two(k in 1u64..250_000, l in 1u64..1_000_000) {
        let n = 4 * k + 1;
        let lhs = valuation_of_pow_minus_one(n, l, 2);
        let rhs = val(l, 2) + val(n - 1, 2);
        prop_assert_eq!(lhs, rhs, "n={} l={}", n, l);
    }

    /// gcd(a^{n_1}-1, ..., a^{n_k}-1) = a^{gcd(n_1,...,n_k)}-1, against a
    /// big-integer oracle.
    #[test]
    fn gcd_of_power_minus_one(a in 2u64..1000, ns in prop::collection::vec(1u32..24, 1..=5)) {
        let big_a = BigUint::from(a);
        let mut acc: Option<BigUint> = None;
        let mut gcd_n = 0u64;
        for &n in &ns {
            let v = big_a.pow(n) - 1u32;
            acc = Some(match acc {
                None => v,
                Some(prev) => prev.gcd(&v),
            });
            gcd_n = gcd(gcd_n, n as u64);
        }
        let expected = big_a.pow(gcd_n as u32) - 1u32;
        prop_assert_eq!(acc.unwrap(), expected);
    }

    /// sigma-decomposition: multiplicativity, prime support, idempotence.
    #[test]
    fn sigma_decomposition_properties(n in 1u64..1_000_000, mask in 0u8..32) {
        let primes: Vec<u64> = [2u64, 3, 5, 7, 11]
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let sigma = PrimeSet::new(primes);
        let d = sigma_decompose(n, &sigma);
        prop_assert_eq!(d.sigma_part * d.sigma_prime_part, n);
        for p in sigma.iter() {
            prop_assert!(d.sigma_prime_part % p != 0);
            prop_assert_eq!(prime_part(n, p), prime_part(d.sigma_part, p));
        }
        let again = sigma_decompose(d.sigma_part, &sigma);
        prop_assert_eq!(again.sigma_part, d.sigma_part);
    }
}
