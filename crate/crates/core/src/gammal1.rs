//! The group GammaL_1(p^f) = `<a>:<phi>` with a^phi = a^p, its subgroups in
//! canonical Foulser form (l, j, k), and arithmetic deciders for
//! transitivity, transitivity on scalar classes, minimal transitivity, and
//! regularity. Every decider has a brute-force orbit oracle next to it.
//!
//! Elements are pairs (e, t) standing for a^e phi^t. The action on the
//! nonzero field elements is x -> (x * omega^e)^(p^t), composition is read
//! left to right, so act(compose(g, h), x) = act(h, act(g, x)).
//!
//! A triple (l, j, k) with l | p^f - 1, k | f, j in {1, ..., p^f - 1}
//! divisible by (p^f - 1)_{sigma'} (sigma = pi(l)) names the subgroup
//! H = <a^l><a^j phi^k>. The canonical representative takes j least; with
//! that normalization triples are in bijection with subgroups.

use crate::arith::{
    factor_map, gcd, mod_pow, pow_u64, sigma_part, sigma_prime_part, PrimeSet,
    SigmaDecomposition,
};
use crate::gf::{Elem, Field};
use serde::Serialize;
use std::collections::HashSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TripleError {
    #[error("l = {0} does not divide p^f - 1 = {1}")]
    BadEll(u64, u64),
    #[error("k = {0} does not divide f = {1}")]
    BadK(u32, u32),
    #[error("j = {0} out of range 1..={1}")]
    BadJ(u64, u64),
    #[error("j = {0} is not divisible by (p^f-1)_sigma' = {1}")]
    JNotDivisible(u64, u64),
    #[error("(p^k - 1) l does not divide (p^f - 1)_sigma j")]
    DivisibilityClause,
    #[error("class modulus {0} does not divide p^f - 1 = {1}")]
    BadClassModulus(u64, u64),
    #[error("cannot parse triple {0:?}, expected \"l:j:k\"")]
    BadSpec(String),
}

/// a^e phi^t with 0 <= e < p^f - 1 and 0 <= t < f.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaL1Element {
    pub e: u64,
    pub t: u32,
}

/// Canonical subgroup parameters (see module docs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FoulserTriple {
    pub ell: u64,
    pub j: u64,
    pub k: u32,
}

/// The quadruple (sigma, b, c, k) attached to a triple: sigma = pi(l),
/// b = a^{(p^f-1)_{sigma'} l}, c = a^j.
#[derive(Debug, Clone)]
pub struct FoulserQuadruple {
    pub sigma: PrimeSet,
    pub b: GammaL1Element,
    pub c: GammaL1Element,
    pub k: u32,
}

/// JSON catalog record for one subgroup.
#[derive(Debug, Clone, Serialize)]
pub struct TripleRecord {
    pub ell: u64,
    pub j: u64,
    pub k: u32,
    pub p: u64,
    pub f: u32,
    pub order: u64,
    pub transitive: bool,
    pub minimal: bool,
    pub regular: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupFilter {
    All,
    Transitive,
    Minimal,
    Regular,
}

#[derive(Debug, Clone)]
pub struct GammaL1 {
    field: Arc<Field>,
    /// p^f - 1
    n: u64,
    f: u32,
    p: u64,
    /// prime factorization of p^f - 1
    n_primes: Vec<u64>,
}

impl GammaL1 {
    pub fn new(field: Arc<Field>) -> Self {
        let n = field.unit_order();
        let f = field.degree();
        let p = field.p();
        let n_primes = factor_map(n).into_iter().map(|(r, _)| r).collect();
        GammaL1 { field, n, f, p, n_primes }
    }

    pub fn from_params(p: u64, f: u32) -> Self {
        GammaL1::new(Arc::new(Field::new(p, f).expect("field size")))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// p^f - 1, the order of the torus `<a>`.
    pub fn torus_order(&self) -> u64 {
        self.n
    }

    pub fn group_order_full(&self) -> u64 {
        self.n * self.f as u64
    }

    pub fn identity(&self) -> GammaL1Element {
        GammaL1Element { e: 0, t: 0 }
    }

    pub fn a(&self) -> GammaL1Element {
        self.elem(1, 0)
    }

    pub fn phi(&self) -> GammaL1Element {
        self.elem(0, 1)
    }

    pub fn elem(&self, e: u64, t: u32) -> GammaL1Element {
        GammaL1Element { e: e % self.n, t: t % self.f }
    }

    /// x -> (x * omega^e)^(p^t); fixes 0.
    pub fn act(&self, g: GammaL1Element, x: Elem) -> Elem {
        let y = self.field.mul(x, self.field.omega_pow(g.e));
        self.field.frobenius(y, g.t)
    }

    /// Action on exponents: u -> (u + e) p^t mod (p^f - 1).
    pub fn act_exp(&self, g: GammaL1Element, u: u64) -> u64 {
        let pt = mod_pow(self.p, g.t as u64, self.n);
        ((u + g.e) as u128 * pt as u128 % self.n as u128) as u64
    }

    /// Left-to-right composition: the result acts as g then h.
    pub fn compose(&self, g: GammaL1Element, h: GammaL1Element) -> GammaL1Element {
        // a^e1 phi^t1 a^e2 phi^t2 = a^{e1 + e2 p^{-t1}} phi^{t1+t2}
        let shift = mod_pow(self.p, ((self.f - g.t) % self.f) as u64, self.n);
        let e = (g.e as u128 + h.e as u128 * shift as u128) % self.n as u128;
        GammaL1Element { e: e as u64, t: (g.t + h.t) % self.f }
    }

    pub fn inverse(&self, g: GammaL1Element) -> GammaL1Element {
        // (a^e phi^t)^{-1} = a^{-e p^t} phi^{-t}
        let pt = mod_pow(self.p, g.t as u64, self.n);
        let e = (self.n - (g.e as u128 * pt as u128 % self.n as u128) as u64) % self.n;
        GammaL1Element { e, t: (self.f - g.t) % self.f }
    }

    /// g^i by the closed form: a^e phi^t to the i is
    /// a^{e (1 - p^{(f-t)i}) / (1 - p^{f-t})} phi^{ti}, the geometric series
    /// being summed mod p^f - 1.
    pub fn power(&self, g: GammaL1Element, i: u64) -> GammaL1Element {
        let base = mod_pow(self.p, ((self.f - g.t) % self.f) as u64, self.n);
        let series = geometric_series(base, i, self.n);
        let e = (g.e as u128 * series as u128 % self.n as u128) as u64;
        GammaL1Element { e, t: ((g.t as u64 * i) % self.f as u64) as u32 }
    }

    pub fn order_of(&self, g: GammaL1Element) -> u64 {
        let u = (self.f / gcd(g.t as u64, self.f as u64) as u32) as u64;
        let torus = self.power(g, u);
        debug_assert_eq!(torus.t, 0);
        u * (self.n / gcd(torus.e, self.n))
    }

    /// The a-part map psi(a^e phi^t) = a^e.
    pub fn psi(&self, g: GammaL1Element) -> u64 {
        g.e
    }

    // ----- Foulser triples -----

    /// Validate the triple invariants (membership of the named subgroup is
    /// then automatic).
    pub fn triple(&self, ell: u64, j: u64, k: u32) -> Result<FoulserTriple, TripleError> {
        if ell == 0 || self.n % ell != 0 {
            return Err(TripleError::BadEll(ell, self.n));
        }
        if k == 0 || self.f % k != 0 {
            return Err(TripleError::BadK(k, self.f));
        }
        if j == 0 || j > self.n {
            return Err(TripleError::BadJ(j, self.n));
        }
        let sigma = self.pi_of_divisor(ell);
        let m0 = sigma_prime_part(self.n, &sigma);
        if j % m0 != 0 {
            return Err(TripleError::JNotDivisible(j, m0));
        }
        let tk = pow_u64(self.p, k) - 1;
        let qs = self.n / m0; // (p^f - 1)_sigma
        if (qs as u128 * j as u128) % (tk as u128 * ell as u128) != 0 {
            return Err(TripleError::DivisibilityClause);
        }
        Ok(FoulserTriple { ell, j, k })
    }

    pub fn parse_triple(&self, spec: &str) -> Result<FoulserTriple, TripleError> {
        let bad = || TripleError::BadSpec(spec.to_string());
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let ell = parts[0].trim().parse().map_err(|_| bad())?;
        let j = parts[1].trim().parse().map_err(|_| bad())?;
        let k = parts[2].trim().parse().map_err(|_| bad())?;
        self.triple(ell, j, k)
    }

    pub fn format_triple(&self, t: &FoulserTriple) -> String {
        format!("{}:{}:{}@{}^{}", t.ell, t.j, t.k, self.p, self.f)
    }

    /// pi(d) for a divisor d of p^f - 1, read off the cached factorization.
    fn pi_of_divisor(&self, d: u64) -> PrimeSet {
        PrimeSet::new(self.n_primes.iter().copied().filter(|&r| d % r == 0))
    }

    /// Least positive multiple of (p^f-1)_{sigma'} congruent to j0 mod l.
    fn canonical_j(&self, ell: u64, j0: u64) -> u64 {
        let sigma = self.pi_of_divisor(ell);
        let m0 = sigma_prime_part(self.n, &sigma);
        // gcd(m0, l) = 1, so there is a unique w in 1..=l with m0 w = j0 (mod l)
        let mut w = 0u64;
        for cand in 1..=ell {
            if (m0 as u128 * cand as u128) % ell as u128 == (j0 % ell) as u128 {
                w = cand;
                break;
            }
        }
        debug_assert!(w != 0);
        m0 * w
    }

    /// Canonical triple of the subgroup generated by `gens`, computed by
    /// closing the generator set and extracting (l, j, k).
    pub fn subgroup_from_generators(&self, gens: &[GammaL1Element]) -> FoulserTriple {
        assert!(!gens.is_empty());
        let elems = self.closure(gens);
        self.triple_of_element_set(&elems)
    }

    /// Closure of a generator set under composition.
    pub fn closure(&self, gens: &[GammaL1Element]) -> Vec<GammaL1Element> {
        let mut seen: HashSet<GammaL1Element> = HashSet::new();
        let mut frontier = vec![self.identity()];
        seen.insert(self.identity());
        while let Some(g) = frontier.pop() {
            for &h in gens {
                let next = self.compose(g, h);
                if seen.insert(next) {
                    frontier.push(next);
                }
            }
        }
        let mut out: Vec<GammaL1Element> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    fn triple_of_element_set(&self, elems: &[GammaL1Element]) -> FoulserTriple {
        let mut ell = self.n;
        let mut k = self.f as u64;
        for g in elems {
            if g.t == 0 {
                ell = gcd(ell, g.e);
            }
            k = gcd(k, g.t as u64);
        }
        let k = k as u32;
        let j0 = elems
            .iter()
            .find(|g| g.t == k % self.f)
            .map(|g| g.e)
            .expect("phi^k fiber is nonempty");
        let j = self.canonical_j(ell, j0);
        let t = FoulserTriple { ell, j, k };
        debug_assert!(self.triple(ell, j, k).is_ok());
        t
    }

    /// Re-canonicalize a valid triple (same subgroup, least j).
    pub fn canonicalize(&self, t: &FoulserTriple) -> FoulserTriple {
        FoulserTriple { ell: t.ell, j: self.canonical_j(t.ell, t.j), k: t.k }
    }

    pub fn triple_to_quadruple(&self, t: &FoulserTriple) -> FoulserQuadruple {
        let sigma = self.pi_of_divisor(t.ell);
        let m0 = sigma_prime_part(self.n, &sigma);
        FoulserQuadruple {
            sigma,
            b: self.elem((m0 as u128 * t.ell as u128 % self.n as u128) as u64, 0),
            c: self.elem(t.j % self.n, 0),
            k: t.k,
        }
    }

    /// |H| = (p^f - 1) f / (l k).
    pub fn group_order(&self, t: &FoulserTriple) -> u64 {
        self.n / t.ell * (self.f / t.k) as u64
    }

    /// All elements of H = <a^l><a^j phi^k> as the coset union over
    /// (a^j phi^k)^i, i = 0..f/k - 1.
    pub fn elements(&self, t: &FoulserTriple) -> Vec<GammaL1Element> {
        let mut out = Vec::with_capacity(self.group_order(t) as usize);
        let gen = self.elem(t.j, t.k);
        let mut base = self.identity();
        for _ in 0..self.f / t.k {
            let mut e = base.e;
            loop {
                out.push(GammaL1Element { e, t: base.t });
                e = (e + t.ell) % self.n;
                if e == base.e {
                    break;
                }
            }
            base = self.compose(base, gen);
        }
        out.sort_unstable();
        out
    }

    /// Arithmetic membership test, no enumeration.
    pub fn triple_contains(&self, t: &FoulserTriple, g: GammaL1Element) -> bool {
        if g.t % t.k != 0 {
            return false;
        }
        let i = (g.t / t.k) as u64;
        let fiber = self.power(self.elem(t.j, t.k), i);
        debug_assert_eq!(fiber.t, g.t);
        (g.e + self.n - fiber.e) % self.n % t.ell == 0
    }

    /// H1 <= H2, decided arithmetically.
    pub fn is_subgroup_of(&self, t1: &FoulserTriple, t2: &FoulserTriple) -> bool {
        t1.ell % t2.ell == 0
            && t1.k % t2.k == 0
            && self.triple_contains(t2, self.elem(t1.j, t1.k))
    }

    // ----- transitivity deciders -----

    /// H transitive on the nonzero field elements, decided arithmetically:
    /// pi(l) is contained in pi(f) and pi(p^k - 1) and avoids pi(j), and if
    /// l is even with p^k = 3 mod 4 then l = 2 mod 4.
    pub fn is_transitive(&self, t: &FoulserTriple) -> bool {
        self.class_conditions(t, t.ell)
    }

    /// H transitive on the orbits of <a^i> (i classes of size (p^f-1)/i).
    pub fn is_transitive_on_classes(
        &self,
        t: &FoulserTriple,
        i: u64,
    ) -> Result<bool, TripleError> {
        if i == 0 || self.n % i != 0 {
            return Err(TripleError::BadClassModulus(i, self.n));
        }
        Ok(self.class_conditions(t, gcd(t.ell, i)))
    }

    fn class_conditions(&self, t: &FoulserTriple, g: u64) -> bool {
        let tk = pow_u64(self.p, t.k) - 1;
        for &r in &self.n_primes {
            if g % r != 0 {
                continue;
            }
            if self.f as u64 % r != 0 || tk % r != 0 || t.j % r == 0 {
                return false;
            }
        }
        if g % 2 == 0 && mod_pow(self.p, t.k as u64, 4) == 3 && g % 4 != 2 {
            return false;
        }
        true
    }

    /// Minimal transitivity, decided by the two shape tests: a transitive
    /// H with quadruple (sigma, b, c, k) and t = p^k is minimally
    /// transitive iff f_{sigma'} divides k and H equals the shape subgroup
    /// `<a>_{sigma'}:<c phi^k>` (when 2 is not in sigma or t = 1 mod 4) or
    /// `<a>_{sigma'}:(<a^2>_2 <c phi^k>)` (when 2 is in sigma and
    /// t = 3 mod 4). Both shapes sit inside H, so equality is an order
    /// comparison, carried out on the torus intersection exponents.
    pub fn is_minimally_transitive(&self, t: &FoulserTriple) -> bool {
        if !self.is_transitive(t) {
            return false;
        }
        let sigma = self.pi_of_divisor(t.ell);
        if t.k as u64 % sigma_prime_part(self.f as u64, &sigma) != 0 {
            return false;
        }
        // exponent of (c phi^k)^{f/k} = c^{(p^f-1) p^k / (p^k - 1)}
        let pk = pow_u64(self.p, t.k);
        let torus_exp =
            (t.j as u128 * (self.n / (pk - 1)) as u128 % self.n as u128 * pk as u128
                % self.n as u128) as u64;
        // torus part of the shape subgroup: <a>_{sigma'} (<a^2>_2) <...>
        let mut g = gcd(sigma_part(self.n, &sigma), gcd(torus_exp, self.n));
        if sigma.contains(2) && pk % 4 == 3 {
            g = gcd(g, 2 * sigma_prime_part(self.n, &PrimeSet::new([2])));
        }
        t.ell == gcd(g, self.n)
    }

    /// Regularity: transitive with |H| = p^f - 1, i.e. l k = f.
    pub fn is_regular(&self, t: &FoulserTriple) -> bool {
        t.ell * t.k as u64 == self.f as u64 && self.is_transitive(t)
    }

    // ----- enumeration -----

    /// Every subgroup exactly once in canonical form, sorted by (l, k, j).
    pub fn enumerate_subgroups(
        &self,
        filter: SubgroupFilter,
        class_modulus: Option<u64>,
    ) -> Result<Vec<FoulserTriple>, TripleError> {
        assert!(self.field.order() <= 1 << 16, "enumeration capped at p^f <= 2^16");
        if let Some(i) = class_modulus {
            if i == 0 || self.n % i != 0 {
                return Err(TripleError::BadClassModulus(i, self.n));
            }
        }
        let mut out = Vec::new();
        for &ell in &divisors(self.n) {
            let sigma = self.pi_of_divisor(ell);
            let m0 = sigma_prime_part(self.n, &sigma);
            for k in divisors(self.f as u64) {
                let k = k as u32;
                let tk = pow_u64(self.p, k) - 1;
                for w in 1..=ell {
                    // j = m0 w sweeps each residue class mod l exactly once;
                    // keep it when (p^k - 1) l divides (p^f - 1) w
                    if (self.n as u128 * w as u128) % (tk as u128 * ell as u128) != 0 {
                        continue;
                    }
                    let t = FoulserTriple { ell, j: m0 * w, k };
                    debug_assert!(self.triple(t.ell, t.j, t.k).is_ok());
                    let keep = match filter {
                        SubgroupFilter::All => true,
                        SubgroupFilter::Transitive => match class_modulus {
                            None => self.is_transitive(&t),
                            Some(i) => self.is_transitive_on_classes(&t, i)?,
                        },
                        SubgroupFilter::Minimal => self.is_minimally_transitive(&t),
                        SubgroupFilter::Regular => self.is_regular(&t),
                    };
                    if keep {
                        out.push(t);
                    }
                }
            }
        }
        out.sort_unstable_by_key(|t| (t.ell, t.k, t.j));
        Ok(out)
    }

    pub fn record(&self, t: &FoulserTriple) -> TripleRecord {
        TripleRecord {
            ell: t.ell,
            j: t.j,
            k: t.k,
            p: self.p,
            f: self.f,
            order: self.group_order(t),
            transitive: self.is_transitive(t),
            minimal: self.is_minimally_transitive(t),
            regular: self.is_regular(t),
        }
    }

    // ----- orbit oracles -----

    /// Exact orbit partition of the nonzero field elements (as exponents of
    /// omega), or of the <a^i> classes when a class modulus is given.
    /// Orbits and their contents are sorted.
    pub fn orbit_oracle(
        &self,
        t: &FoulserTriple,
        class_modulus: Option<u64>,
    ) -> Result<Vec<Vec<u64>>, TripleError> {
        assert!(self.field.order() <= 1 << 16, "orbit oracle capped at p^f <= 2^16");
        let gens = vec![self.elem(t.ell % self.n, 0), self.elem(t.j, t.k)];
        let modulus = match class_modulus {
            None => self.n,
            Some(i) => {
                if i == 0 || self.n % i != 0 {
                    return Err(TripleError::BadClassModulus(i, self.n));
                }
                i
            }
        };
        Ok(self.orbits_mod(&gens, modulus))
    }

    /// Orbit partition of Z_modulus under u -> (u + e) p^t.
    pub fn orbits_mod(&self, gens: &[GammaL1Element], modulus: u64) -> Vec<Vec<u64>> {
        let shifts: Vec<(u64, u64)> =
            gens.iter().map(|g| (g.e % modulus, mod_pow(self.p, g.t as u64, modulus))).collect();
        let mut seen = vec![false; modulus as usize];
        let mut orbits = Vec::new();
        for start in 0..modulus {
            if seen[start as usize] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start as usize] = true;
            let mut head = 0;
            while head < orbit.len() {
                let u = orbit[head];
                head += 1;
                for &(e, pt) in &shifts {
                    let v = ((u + e) as u128 * pt as u128 % modulus as u128) as u64;
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        orbit.push(v);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    /// Alternative transitivity criterion: the a-parts of H cover
    /// the whole torus.
    pub fn psi_covers_torus(&self, t: &FoulserTriple) -> bool {
        let mut seen = vec![false; self.n as usize];
        for g in self.elements(t) {
            seen[g.e as usize] = true;
        }
        seen.into_iter().all(|b| b)
    }

    // ----- Sylow structure (used by the regular-subgroup checks) -----

    /// A Sylow r-subgroup of the subgroup given by its element list.
    pub fn sylow_subgroup(&self, elems: &[GammaL1Element], r: u64) -> Vec<GammaL1Element> {
        let order = elems.len() as u64;
        let mut target = 1u64;
        {
            let mut rest = order;
            while rest % r == 0 {
                target *= r;
                rest /= r;
            }
        }
        let mut current = vec![self.identity()];
        while (current.len() as u64) < target {
            let mut grown = false;
            for &g in elems {
                let o = self.order_of(g);
                if o == 1 || !is_power_of(o, r) || current.contains(&g) {
                    continue;
                }
                let mut gens = current.clone();
                gens.push(g);
                let c = self.closure(&gens);
                if is_power_of(c.len() as u64, r) && c.len() > current.len() {
                    current = c;
                    grown = true;
                    break;
                }
            }
            assert!(grown, "Sylow subgroup construction stalled");
        }
        current
    }

    pub fn is_cyclic(&self, elems: &[GammaL1Element]) -> bool {
        let n = elems.len() as u64;
        elems.iter().any(|&g| self.order_of(g) == n)
    }

    pub fn involution_count(&self, elems: &[GammaL1Element]) -> usize {
        elems.iter().filter(|&&g| self.order_of(g) == 2).count()
    }

    /// Cyclic or generalized quaternion: the structure every Sylow subgroup
    /// of a regular subgroup must have.
    pub fn sylow_is_cyclic_or_quaternion(&self, elems: &[GammaL1Element]) -> bool {
        if self.is_cyclic(elems) {
            return true;
        }
        elems.len() >= 8 && elems.len().is_power_of_two() && self.involution_count(elems) == 1
    }

    /// Decomposition of p^f - 1 with respect to pi(l).
    pub fn sigma_split(&self, ell: u64) -> SigmaDecomposition {
        crate::arith::sigma_decompose(self.n, &self.pi_of_divisor(ell))
    }
}

fn is_power_of(mut n: u64, r: u64) -> bool {
    while n % r == 0 {
        n /= r;
    }
    n == 1
}

/// Geometric series 1 + b + ... + b^{i-1} mod m, by doubling.
fn geometric_series(b: u64, i: u64, m: u64) -> u64 {
    if i == 0 {
        return 0;
    }
    let half = geometric_series(b, i / 2, m);
    let bh = mod_pow(b, i / 2, m);
    let mut s = (half as u128 + half as u128 * bh as u128) % m as u128;
    if i % 2 == 1 {
        let full = (bh as u128 * bh as u128) % m as u128;
        s = (s + full) % m as u128;
    }
    (s % m as u128) as u64
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor_map(n) {
        let prev = out.clone();
        let mut pe = 1;
        for _ in 0..e {
            pe *= p;
            out.extend(prev.iter().map(|d| d * pe));
        }
    }
    out.sort_unstable();
    out
}
