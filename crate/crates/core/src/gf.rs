//! Deterministic finite fields F_{p^f}.
//!
//! A field is built from `(p, f)` alone: the modulus is the
//! lexicographically least monic irreducible polynomial of degree `f` over
//! F_p (coefficients compared from the constant term upward) whose root is
//! primitive. The distinguished generator `omega` is the class of `x`
//! (for `f = 1`, the root of the degree-one modulus). Two constructions of
//! the same `(p, f)` are bit-identical.
//!
//! Elements are handles: the coefficient vector packed in base `p`, so the
//! zero element is `0` and the one element is `1`. Fields of at most 2^20
//! elements carry discrete-log tables and multiply through them; larger
//! fields (up to the 2^24 cap) fall back to coefficient arithmetic.

use crate::arith::{factor_map, is_prime, mod_pow, pow_u128};
use thiserror::Error;

/// Largest field that gets exp/log tables.
pub const TABLE_LIMIT: u64 = 1 << 20;
/// Hard size cap for field construction.
pub const SIZE_LIMIT: u64 = 1 << 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("field order {0}^{1} exceeds the 2^24 size limit")]
    SizeLimit(u64, u32),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree must be at least 1")]
    BadDegree,
    #[error("discrete log of zero")]
    ZeroLog,
    #[error("target degree {0} does not divide {1}")]
    DegreeMismatch(u32, u32),
    #[error("cannot parse field spec {0:?}, expected \"p^f\"")]
    BadSpec(String),
}

/// An element handle: base-p packed coefficient vector, `< p^f`.
pub type Elem = u64;

#[derive(Debug, Clone)]
pub struct Field {
    p: u64,
    f: u32,
    order: u64,
    /// monic modulus, constant term first, length f+1
    modulus: Vec<u64>,
    /// exp[k] = element omega^k, length order-1 (empty above TABLE_LIMIT)
    exp: Vec<u64>,
    /// log[elem] = k with omega^k = elem, log[0] unused
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}
impl Eq for Field {}

// --- dense polynomial helpers over F_p (constant term first) ---

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let f = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // reduce modulo the monic modulus
    for i in (f..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for k in 0..f {
            let idx = i - f + k;
            prod[idx] = (prod[idx] + (p - 1) * c % p * modulus[k]) % p;
        }
    }
    prod.truncate(f);
    prod.resize(f, 0);
    prod
}

fn poly_pow_mod(base: &[u64], mut e: u128, modulus: &[u64], p: u64) -> Vec<u64> {
    let f = modulus.len() - 1;
    let mut result = vec![0u64; f];
    result[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(&result, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    result
}

fn poly_is_one(a: &[u64]) -> bool {
    a.first() == Some(&1) && a[1..].iter().all(|&c| c == 0)
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    let deg = |v: &Vec<u64>| v.iter().rposition(|&c| c != 0);
    loop {
        match (deg(&a), deg(&b)) {
            (_, None) => return a,
            (None, _) => return b,
            (Some(da), Some(db)) if da < db => std::mem::swap(&mut a, &mut b),
            (Some(_), Some(db)) => {
                // a <- a mod b
                while let Some(da) = deg(&a) {
                    if da < db {
                        break;
                    }
                    let lead_b_inv = mod_pow(b[db], p - 2, p);
                    let c = a[da] * lead_b_inv % p;
                    let shift = da - db;
                    for k in 0..=db {
                        a[shift + k] = (a[shift + k] + (p - 1) * c % p * b[k]) % p;
                    }
                }
            }
        }
    }
}

fn is_irreducible(candidate: &[u64], p: u64, f: u32) -> bool {
    // x^{p^f} == x mod candidate, and gcd(x^{p^{f/l}} - x, candidate) = 1
    // for every prime l dividing f
    let x = {
        let mut v = vec![0u64; f as usize];
        if f == 1 {
            // degree-one moduli are always irreducible
            return true;
        }
        v[1] = 1;
        v
    };
    let xq = poly_pow_mod(&x, pow_u128(p as u128, f), candidate, p);
    if xq != x {
        return false;
    }
    for (l, _) in factor_map(f as u64) {
        let e = pow_u128(p as u128, f / l as u32);
        let mut xe = poly_pow_mod(&x, e, candidate, p);
        // xe - x
        xe[1] = (xe[1] + p - 1) % p;
        let g = poly_gcd(xe, candidate.to_vec(), p);
        let deg = g.iter().rposition(|&c| c != 0);
        if deg != Some(0) {
            return false;
        }
    }
    true
}

fn root_is_primitive(candidate: &[u64], p: u64, f: u32, order_facts: &[(u64, u32)]) -> bool {
    let root = if f == 1 {
        vec![(p - candidate[0]) % p]
    } else {
        let mut v = vec![0u64; f as usize];
        v[1] = 1;
        v
    };
    if f == 1 && root[0] == 0 {
        return false;
    }
    let n = pow_u128(p as u128, f) - 1;
    if n == 1 {
        return true;
    }
    for &(r, _) in order_facts {
        if poly_is_one(&poly_pow_mod(&root, n / r as u128, candidate, p)) {
            return false;
        }
    }
    true
}

impl Field {
    /// Build F_{p^f} with the deterministic modulus and generator.
    pub fn new(p: u64, f: u32) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if f == 0 {
            return Err(FieldError::BadDegree);
        }
        let order128 = pow_u128(p as u128, f);
        if order128 > SIZE_LIMIT as u128 {
            return Err(FieldError::SizeLimit(p, f));
        }
        let order = order128 as u64;
        let order_facts = factor_map(order - 1);

        // lexicographically least monic irreducible with primitive root;
        // the tuple (c_0, ..., c_{f-1}) is compared from the constant term
        // upward, so the odometer cycles the highest index fastest
        let mut modulus = None;
        let mut coeffs = vec![0u64; f as usize + 1];
        coeffs[f as usize] = 1;
        'search: loop {
            for i in (0..f as usize).rev() {
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                if i == 0 {
                    break 'search;
                }
            }
            if coeffs[0] == 0 {
                continue; // reducible: x divides
            }
            if is_irreducible(&coeffs, p, f) && root_is_primitive(&coeffs, p, f, &order_facts) {
                modulus = Some(coeffs.clone());
                break;
            }
        }
        let modulus = modulus.expect("primitive polynomial exists for every (p, f)");

        let mut field = Field { p, f, order, modulus, exp: Vec::new(), log: Vec::new() };
        if order <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(field)
    }

    /// Parse a "p^f" spec such as "3^4" or a bare prime "7".
    pub fn parse_spec(spec: &str) -> Result<Field, FieldError> {
        let bad = || FieldError::BadSpec(spec.to_string());
        let (p, f) = match spec.split_once('^') {
            Some((ps, fs)) => {
                (ps.trim().parse().map_err(|_| bad())?, fs.trim().parse().map_err(|_| bad())?)
            }
            None => (spec.trim().parse().map_err(|_| bad())?, 1),
        };
        Field::new(p, f)
    }

    fn build_tables(&mut self) {
        let n = (self.order - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![0u32; self.order as usize];
        let omega = self.omega();
        let mut cur = 1u64;
        for k in 0..n {
            exp.push(cur);
            log[cur as usize] = k as u32;
            cur = self.mul_coeffwise(cur, omega);
        }
        debug_assert_eq!(cur, 1, "omega does not have full order");
        self.exp = exp;
        self.log = log;
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Order of the multiplicative group.
    pub fn unit_order(&self) -> u64 {
        self.order - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// The distinguished multiplicative generator.
    pub fn omega(&self) -> Elem {
        if self.f == 1 {
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order
    }

    /// Nonzero elements in generator-power order (omega^0, omega^1, ...).
    pub fn units(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order - 1).map(move |k| self.omega_pow(k))
    }

    fn unpack(&self, x: Elem) -> Vec<u64> {
        let mut v = vec![0u64; self.f as usize];
        let mut rest = x;
        for c in v.iter_mut() {
            *c = rest % self.p;
            rest /= self.p;
        }
        v
    }

    fn pack(&self, v: &[u64]) -> Elem {
        let mut x = 0u64;
        for &c in v.iter().rev() {
            x = x * self.p + c;
        }
        x
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        let (va, vb) = (self.unpack(a), self.unpack(b));
        let sum: Vec<u64> = va.iter().zip(&vb).map(|(x, y)| (x + y) % self.p).collect();
        self.pack(&sum)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let va = self.unpack(a);
        let neg: Vec<u64> = va.iter().map(|&x| (self.p - x) % self.p).collect();
        self.pack(&neg)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    fn mul_coeffwise(&self, a: Elem, b: Elem) -> Elem {
        let prod = poly_mul_mod(&self.unpack(a), &self.unpack(b), &self.modulus, self.p);
        self.pack(&prod)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.exp.is_empty() {
            return self.mul_coeffwise(a, b);
        }
        let n = self.order - 1;
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n;
        self.exp[k as usize]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        if self.exp.is_empty() {
            return self.pow(a, self.order - 2);
        }
        let n = self.order - 1;
        let k = (n - self.log[a as usize] as u64) % n;
        self.exp[k as usize]
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        if !self.exp.is_empty() {
            let n = self.order - 1;
            let k = (self.log[a as usize] as u128 * e as u128 % n as u128) as u64;
            return self.exp[k as usize];
        }
        let mut result = 1;
        let mut b = a;
        let mut e = e % (self.order - 1);
        if e == 0 && a != 0 {
            return 1;
        }
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_coeffwise(result, b);
            }
            b = self.mul_coeffwise(b, b);
            e >>= 1;
        }
        result
    }

    /// omega^k for any integer exponent (reduced mod p^f - 1).
    pub fn omega_pow(&self, k: u64) -> Elem {
        if !self.exp.is_empty() {
            return self.exp[(k % (self.order - 1)) as usize];
        }
        self.pow(self.omega(), k % (self.order - 1))
    }

    /// Discrete log base omega; error on zero.
    pub fn dlog(&self, x: Elem) -> Result<u64, FieldError> {
        if x == 0 {
            return Err(FieldError::ZeroLog);
        }
        if !self.log.is_empty() {
            return Ok(self.log[x as usize] as u64);
        }
        // baby-step giant-step for the tableless sizes
        let n = self.order - 1;
        let m = (n as f64).sqrt().ceil() as u64;
        let mut baby = std::collections::HashMap::new();
        let mut cur = 1u64;
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = self.mul(cur, self.omega());
        }
        let giant = self.inv(self.pow(self.omega(), m));
        let mut gamma = x;
        for i in 0..=m {
            if let Some(&j) = baby.get(&gamma) {
                return Ok((i * m + j) % n);
            }
            gamma = self.mul(gamma, giant);
        }
        unreachable!("dlog: omega is a generator")
    }

    /// x^{p^t}.
    pub fn frobenius(&self, x: Elem, t: u32) -> Elem {
        if x == 0 {
            return 0;
        }
        let t = t % self.f;
        if t == 0 {
            return x;
        }
        let e = mod_pow(self.p, t as u64, self.order - 1);
        self.pow(x, e)
    }

    /// True when x lies in the subfield F_{p^d} (requires d | f).
    pub fn in_subfield(&self, x: Elem, d: u32) -> bool {
        debug_assert!(self.f % d == 0);
        self.frobenius(x, d % self.f) == x || x == 0
    }

    /// All elements of the subfield F_{p^d}, in increasing handle order.
    pub fn subfield_elements(&self, d: u32) -> Vec<Elem> {
        assert!(self.f % d == 0);
        let mut out: Vec<Elem> = if self.order <= (1 << 16) {
            self.elements().filter(|&x| self.in_subfield(x, d)).collect()
        } else {
            let step = (self.order - 1) / (pow_u128(self.p as u128, d) as u64 - 1);
            let mut v: Vec<Elem> = (0..(pow_u128(self.p as u128, d) as u64 - 1))
                .map(|k| self.omega_pow(k * step))
                .collect();
            v.push(0);
            v
        };
        out.sort_unstable();
        out
    }

    /// Generator of the subfield F_{p^d}: omega^{(p^f-1)/(p^d-1)}.
    pub fn subfield_generator(&self, d: u32) -> Elem {
        assert!(self.f % d == 0);
        let sub_order = pow_u128(self.p as u128, d) as u64;
        self.omega_pow((self.order - 1) / (sub_order - 1))
    }

    /// Relative trace from F_{p^f} down to F_{p^d}: sum of x^{p^{dt}}.
    pub fn rel_trace(&self, x: Elem, d: u32) -> Result<Elem, FieldError> {
        if d == 0 || self.f % d != 0 {
            return Err(FieldError::DegreeMismatch(d, self.f));
        }
        Ok(self.rel_trace_between(x, self.f, d))
    }

    /// Trace from the subfield F_{p^src} (which must contain x) to F_{p^dst}.
    pub fn rel_trace_between(&self, x: Elem, src: u32, dst: u32) -> Elem {
        debug_assert!(src % dst == 0 && self.f % src == 0);
        debug_assert!(self.in_subfield(x, src));
        let mut acc = 0u64;
        let mut term = x;
        for _ in 0..src / dst {
            acc = self.add(acc, term);
            term = self.frobenius(term, dst % self.f);
        }
        acc
    }

    /// Multiplicative embedding of another field's element into this one by
    /// exponent scaling: the subfield generator maps to
    /// omega^{(p^f-1)/(p^d-1)}. Zero maps to zero.
    pub fn embed_from(&self, small: &Field, x: Elem) -> Result<Elem, FieldError> {
        if small.p != self.p || self.f % small.f != 0 {
            return Err(FieldError::DegreeMismatch(small.f, self.f));
        }
        if x == 0 {
            return Ok(0);
        }
        let k = small.dlog(x)?;
        let step = (self.order - 1) / (small.order - 1);
        Ok(self.omega_pow(k * step))
    }

    /// "w^k" for units, "0" for zero, "1" for one.
    pub fn format_element(&self, x: Elem) -> String {
        if x == 0 {
            "0".to_string()
        } else if x == 1 {
            "1".to_string()
        } else {
            format!("w^{}", self.dlog(x).unwrap())
        }
    }

    /// Modulus rendered as a polynomial in x.
    pub fn format_modulus(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            };
            terms.push(t);
        }
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_modulus() {
        let k = Field::new(2, 2).unwrap();
        assert_eq!(k.modulus(), &[1, 1, 1]); // x^2 + x + 1
        assert_eq!(k.omega(), 2);
        assert_eq!(k.dlog(k.omega()).unwrap(), 1);
    }

    #[test]
    fn gf9_modulus_primitive() {
        let k = Field::new(3, 2).unwrap();
        assert_eq!(k.modulus(), &[2, 1, 1]); // x^2 + x + 2, the least primitive one
        let mut seen = std::collections::HashSet::new();
        let mut cur = k.one();
        for _ in 0..8 {
            seen.insert(cur);
            cur = k.mul(cur, k.omega());
        }
        assert_eq!(seen.len(), 8);
        assert_eq!(cur, k.one());
    }

    #[test]
    fn prime_field() {
        let k = Field::new(2, 1).unwrap();
        assert_eq!(k.omega(), 1);
        let k = Field::new(3, 1).unwrap();
        assert_eq!(k.omega(), 2);
        assert_eq!(k.mul(2, 2), 1);
    }

    #[test]
    fn construction_deterministic() {
        let a = Field::new(5, 3).unwrap();
        let b = Field::new(5, 3).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.exp, b.exp);
    }

    #[test]
    fn modulus_is_lex_least() {
        // the tuple (c_0, ..., c_{f-1}) is compared from the constant term
        // upward: x^4 + x^3 + 1 = (1,0,0,1) loses to no primitive
        // candidate, while x^4 + x + 1 = (1,1,0,0) would win a low-term
        // comparison
        let k = Field::new(2, 4).unwrap();
        assert_eq!(k.modulus(), &[1, 0, 0, 1, 1]);
        // exhaustive cross-check: nothing lex-smaller is primitive
        let winner = [1u64, 0, 0, 1];
        for bits in 0u64..16 {
            let c = [bits & 1, bits >> 1 & 1, bits >> 2 & 1, bits >> 3 & 1];
            if c >= winner {
                continue;
            }
            let candidate = [c[0], c[1], c[2], c[3], 1];
            let prim = is_irreducible(&candidate, 2, 4)
                && root_is_primitive(&candidate, 2, 4, &factor_map(15));
            assert!(!prim, "{candidate:?} would be lex-smaller");
        }
    }

    #[test]
    fn size_limit() {
        assert_eq!(Field::new(2, 25).unwrap_err(), FieldError::SizeLimit(2, 25));
        assert_eq!(Field::new(4, 2).unwrap_err(), FieldError::NotPrime(4));
    }

    #[test]
    fn dlog_examples() {
        let k = Field::new(3, 2).unwrap();
        assert_eq!(k.dlog(k.omega()).unwrap(), 1);
        assert_eq!(k.dlog(k.one()).unwrap(), 0);
        let x = k.mul(k.omega_pow(5), k.omega_pow(7));
        assert_eq!(k.dlog(x).unwrap(), 4); // 12 mod 8
        assert_eq!(k.dlog(k.zero()), Err(FieldError::ZeroLog));
    }

    #[test]
    fn trace_examples() {
        let k = Field::new(2, 2).unwrap();
        assert_eq!(k.rel_trace(k.omega(), 1).unwrap(), k.one()); // w + w^2 = 1

        let k = Field::new(2, 3).unwrap();
        assert_eq!(k.rel_trace(k.one(), 1).unwrap(), k.one()); // 3 * 1 in F_2

        // Tr_{81/9} is onto F_9 with fibers of size 9
        let k = Field::new(3, 4).unwrap();
        let mut counts = std::collections::HashMap::new();
        for x in k.elements() {
            let t = k.rel_trace(x, 2).unwrap();
            assert!(k.in_subfield(t, 2));
            *counts.entry(t).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 9);
        assert!(counts.values().all(|&c| c == 9));
    }

    #[test]
    fn trace_transitivity() {
        // Tr_{p^8/p^2} = Tr_{p^4/p^2} o Tr_{p^8/p^4} on all of F_{2^8}
        let k = Field::new(2, 8).unwrap();
        for x in k.elements() {
            let a = k.rel_trace(x, 2).unwrap();
            let mid = k.rel_trace(x, 4).unwrap();
            let b = k.rel_trace_between(mid, 4, 2);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn frobenius_dlog_compat() {
        let k = Field::new(5, 3).unwrap();
        for x in 1..k.order() {
            let lhs = k.dlog(k.frobenius(x, 1)).unwrap();
            let rhs = k.dlog(x).unwrap() * 5 % k.unit_order();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn field_arithmetic_laws() {
        let k = Field::new(7, 2).unwrap();
        for a in k.elements().step_by(3) {
            for b in k.elements().step_by(5) {
                assert_eq!(k.mul(a, b), k.mul(b, a));
                assert_eq!(k.add(a, k.neg(a)), 0);
                if b != 0 {
                    assert_eq!(k.mul(k.mul(a, b), k.inv(b)), a);
                }
            }
        }
    }

    #[test]
    fn tableless_field_agrees() {
        // same arithmetic with and without tables
        let k = Field::new(2, 21).unwrap(); // order 2^21 > TABLE_LIMIT
        assert!(k.exp.is_empty());
        let w = k.omega();
        let x = k.pow(w, 1234567);
        assert_eq!(k.dlog(x).unwrap(), 1234567 % k.unit_order());
        assert_eq!(k.mul(x, k.inv(x)), 1);
    }

    #[test]
    fn subfield_embedding() {
        let big = Field::new(3, 4).unwrap();
        let small = Field::new(3, 2).unwrap();
        let img = big.embed_from(&small, small.omega()).unwrap();
        assert_eq!(img, big.subfield_generator(2));
        // multiplicative: embed(x*y) = embed(x)*embed(y)
        for x in 1..small.order() {
            for y in 1..small.order() {
                let lhs = big.embed_from(&small, small.mul(x, y)).unwrap();
                let rhs =
                    big.mul(big.embed_from(&small, x).unwrap(), big.embed_from(&small, y).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
        // image lands in the subfield and orders are preserved
        for x in 1..small.order() {
            assert!(big.in_subfield(big.embed_from(&small, x).unwrap(), 2));
        }
    }

    #[test]
    fn parse_spec() {
        assert_eq!(Field::parse_spec("3^2").unwrap().order(), 9);
        assert_eq!(Field::parse_spec("7").unwrap().order(), 7);
        assert!(Field::parse_spec("nope").is_err());
    }

    #[test]
    fn format_element_roundtrip() {
        let k = Field::new(3, 2).unwrap();
        assert_eq!(k.format_element(0), "0");
        assert_eq!(k.format_element(1), "1");
        assert_eq!(k.format_element(k.omega_pow(5)), "w^5");
    }
}
