//! Linearized polynomials over F_{r^m} with r = q^s, the adjoint map, and
//! the Singer-irreducible modules M(i) that decompose the unipotent
//! radical, together with the index-set invariant d(I), module characters,
//! and the closed-form kernel count.
//!
//! A polynomial is the coefficient vector (a_0, ..., a_{m-1}) of
//! sum a_i X^{r^i}, reduced mod X^{r^m} - X. Evaluation is additive and
//! F_r-linear, and composition makes the permutation ones a group
//! isomorphic to GL_m(r).

use crate::arith::{factor_map, gcd, pow_u64, pow_u128};
use crate::gf::{Elem, Field};
use serde::Serialize;
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinError {
    #[error("q = {0} is not a prime power")]
    BadQ(u64),
    #[error("parameters (kind={0}, m={1}, q={2}) violate the space constraints")]
    BadParams(&'static str, u32, u64),
    #[error("module index {0} out of range 0..={1}")]
    IndexOutOfRange(u32, u32),
    #[error("index 0 only exists in the symplectic radical")]
    ZeroIndexNotPresent,
    #[error("index set must avoid 0 here")]
    ZeroInIndexSet,
    #[error("polynomial is not a permutation")]
    NonPermutation,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error(transparent)]
    Field(#[from] crate::gf::FieldError),
}

/// The three families of Table Form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    Unitary,
    OrthogonalPlus,
    Symplectic,
}

impl Kind {
    pub fn s(self) -> u32 {
        match self {
            Kind::Unitary => 2,
            Kind::OrthogonalPlus | Kind::Symplectic => 1,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Kind::Unitary => "su",
            Kind::OrthogonalPlus => "oplus",
            Kind::Symplectic => "sp",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        match s.to_ascii_lowercase().as_str() {
            "su" | "unitary" | "u" => Some(Kind::Unitary),
            "oplus" | "o+" | "omega+" | "orthogonal" => Some(Kind::OrthogonalPlus),
            "sp" | "symplectic" => Some(Kind::Symplectic),
            _ => None,
        }
    }
}

/// The (s, m, q) context every linearized-polynomial operation runs in.
/// Carries F_{r^m} = F_{p^{smf}} with q = p^f and r = q^s.
#[derive(Debug, Clone)]
pub struct LinCtx {
    pub s: u32,
    pub m: u32,
    pub q: u64,
    pub p: u64,
    pub f: u32,
    field: Arc<Field>,
}

impl LinCtx {
    pub fn new(s: u32, m: u32, q: u64) -> Result<LinCtx, LinError> {
        assert!(s == 1 || s == 2);
        let facts = factor_map(q);
        if facts.len() != 1 {
            return Err(LinError::BadQ(q));
        }
        let (p, f) = facts[0];
        let field = Arc::new(Field::new(p, s * m * f)?);
        Ok(LinCtx { s, m, q, p, f, field })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<Field> {
        Arc::clone(&self.field)
    }

    pub fn r(&self) -> u64 {
        pow_u64(self.q, self.s)
    }

    /// r^m = q^{sm}.
    pub fn rm(&self) -> u64 {
        self.field.order()
    }

    /// x^{q^i}, exponent taken mod sm.
    pub fn q_frob(&self, x: Elem, i: i64) -> Elem {
        let sm = (self.s * self.m) as i64;
        let i = i.rem_euclid(sm) as u32;
        self.field.frobenius(x, i * self.f)
    }

    /// x^{r^i}.
    pub fn r_frob(&self, x: Elem, i: u32) -> Elem {
        self.q_frob(x, (i * self.s) as i64)
    }

    pub fn zero_poly(&self) -> LinPoly {
        LinPoly { coeffs: vec![0; self.m as usize] }
    }

    pub fn identity_poly(&self) -> LinPoly {
        let mut h = self.zero_poly();
        h.coeffs[0] = 1;
        h
    }

    pub fn scalar_poly(&self, a: Elem) -> LinPoly {
        let mut h = self.zero_poly();
        h.coeffs[0] = a;
        h
    }

    pub fn monomial(&self, a: Elem, i: u32) -> LinPoly {
        let mut h = self.zero_poly();
        h.coeffs[(i % self.m) as usize] = a;
        h
    }

    pub fn eval(&self, h: &LinPoly, x: Elem) -> Elem {
        let mut acc = 0;
        let mut xr = x;
        for i in 0..self.m as usize {
            if h.coeffs[i] != 0 {
                acc = self.field.add(acc, self.field.mul(h.coeffs[i], xr));
            }
            xr = self.r_frob(xr, 1);
        }
        acc
    }

    pub fn add_poly(&self, a: &LinPoly, b: &LinPoly) -> LinPoly {
        let coeffs =
            a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.field.add(x, y)).collect();
        LinPoly { coeffs }
    }

    pub fn scale_poly(&self, c: Elem, a: &LinPoly) -> LinPoly {
        LinPoly { coeffs: a.coeffs.iter().map(|&x| self.field.mul(c, x)).collect() }
    }

    /// h1 after h2: (h1 o h2)(X) = h1(h2(X)) mod X^{r^m} - X.
    pub fn compose(&self, h1: &LinPoly, h2: &LinPoly) -> LinPoly {
        let m = self.m as usize;
        let mut coeffs = vec![0u64; m];
        for (i, &a) in h1.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in h2.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let k = (i + j) % m;
                let term = self.field.mul(a, self.r_frob(b, i as u32));
                coeffs[k] = self.field.add(coeffs[k], term);
            }
        }
        LinPoly { coeffs }
    }

    /// Coefficient-wise p-th power: the conjugate of h by the Frobenius.
    pub fn frobenius_twist(&self, h: &LinPoly, t: u32) -> LinPoly {
        LinPoly { coeffs: h.coeffs.iter().map(|&a| self.field.frobenius(a, t)).collect() }
    }

    /// The torus action on polynomials: (a.h)(X) = a^{q^{s-1}} h(aX).
    /// This is how the Singer generator conjugates the unipotent radical.
    pub fn torus_act(&self, a: Elem, h: &LinPoly) -> LinPoly {
        let scaled = self.compose(h, &self.scalar_poly(a));
        self.scale_poly(self.q_frob(a, self.s as i64 - 1), &scaled)
    }

    /// Exponent-form coefficient list, e.g. "[w^3, 0, 1]".
    pub fn format_poly(&self, h: &LinPoly) -> String {
        let parts: Vec<String> =
            h.coeffs.iter().map(|&c| self.field.format_element(c)).collect();
        format!("[{}]", parts.join(", "))
    }

    /// Permutation iff 0 is the only root.
    pub fn is_permutation(&self, h: &LinPoly) -> bool {
        if h.coeffs.iter().all(|&c| c == 0) {
            return false;
        }
        self.field.units().all(|x| self.eval(h, x) != 0)
    }

    /// Inverse under composition, by solving the Moore system on the power
    /// basis 1, w, ..., w^{m-1} of F_{r^m} over F_r.
    pub fn inverse(&self, h: &LinPoly) -> Result<LinPoly, LinError> {
        if !self.is_permutation(h) {
            return Err(LinError::NonPermutation);
        }
        let m = self.m as usize;
        let w = self.field.omega();
        // rows: sum_i b_i * (h(w^j))^{r^i} = w^j
        let mut mat = vec![vec![0u64; m + 1]; m];
        for (j, row) in mat.iter_mut().enumerate() {
            let img = self.eval(h, self.field.pow(w, j as u64));
            for (i, entry) in row.iter_mut().take(m).enumerate() {
                *entry = self.r_frob(img, i as u32);
            }
            row[m] = self.field.pow(w, j as u64);
        }
        let sol = solve_linear(&self.field, &mut mat).ok_or(LinError::NonPermutation)?;
        let inv = LinPoly { coeffs: sol };
        debug_assert_eq!(self.compose(h, &inv), self.identity_poly());
        Ok(inv)
    }

    /// The unique adjoint h^(s) with
    /// Tr_{r^m/r}(h(x) (h^(s)(y))^{q^{s-1}}) = Tr_{r^m/r}(x y^{q^{s-1}}),
    /// built from the inverse coefficients b_i as
    /// f_j = b_{m-j}^{r^{j-1} q} (indices mod m).
    pub fn adjoint(&self, h: &LinPoly) -> Result<LinPoly, LinError> {
        let inv = self.inverse(h)?;
        let m = self.m as usize;
        let mut coeffs = vec![0u64; m];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let b = inv.coeffs[(m - j) % m];
            // r^{j-1} q = q^{s(j-1)+1}
            let e = self.s as i64 * (j as i64 - 1) + 1;
            *c = self.q_frob(b, e);
        }
        Ok(LinPoly { coeffs })
    }

    /// Tr_{r^m/r}.
    pub fn trace_to_r(&self, x: Elem) -> Elem {
        self.field.rel_trace(x, self.s * self.f).unwrap()
    }

    /// Tr_{r^m/q}.
    pub fn trace_to_q(&self, x: Elem) -> Elem {
        self.field.rel_trace(x, self.f).unwrap()
    }

    /// Tr_{r^m/q^d}.
    pub fn trace_to_qd(&self, x: Elem, d: u64) -> Elem {
        self.field.rel_trace(x, d as u32 * self.f).unwrap()
    }

    // --- the modules M(i) ---

    /// Largest module index, floor((m+s-1)/2).
    pub fn max_index(&self) -> u32 {
        (self.m + self.s - 1) / 2
    }

    /// The trace-constrained half module index, present when m+s is odd.
    pub fn half_index(&self) -> Option<u32> {
        if (self.m + self.s) % 2 == 1 {
            Some((self.m + self.s - 1) / 2)
        } else {
            None
        }
    }

    /// dim_{F_q} M(i).
    pub fn module_dim(&self, i: u32) -> u32 {
        if Some(i) == self.half_index() {
            self.s * self.m / 2
        } else {
            self.s * self.m
        }
    }

    /// |M(i)|.
    pub fn module_size(&self, i: u32) -> u64 {
        pow_u64(self.q, self.module_dim(i))
    }

    fn check_index(&self, i: u32) -> Result<(), LinError> {
        if i > self.max_index() {
            return Err(LinError::IndexOutOfRange(i, self.max_index()));
        }
        Ok(())
    }

    /// The second monomial index paired with i in M(i) (middle modules).
    fn partner_index(&self, i: u32) -> u32 {
        (self.m - i + (self.s - 1)) % self.m
    }

    /// The element of M(i) with free coefficient `a`:
    /// aX for i = 0, the two-monomial shape for middle i, and
    /// aX^{r^{m/2} q^{s-1}} for the half module (a must satisfy the
    /// half-trace constraint there).
    pub fn module_component(&self, i: u32, a: Elem) -> Result<LinPoly, LinError> {
        self.check_index(i)?;
        let mut h = self.zero_poly();
        if i == 0 {
            h.coeffs[0] = a;
        } else if Some(i) == self.half_index() {
            debug_assert_eq!(self.field.add(a, self.q_frob(a, (self.s * self.m / 2) as i64)), 0);
            let idx = (self.s * self.m / 2 + self.s - 1) / self.s;
            h.coeffs[(idx % self.m) as usize] = a;
        } else {
            h.coeffs[i as usize] = a;
            let e = (self.s * (self.m - i)) as i64 + self.s as i64 - 1;
            let other = self.field.neg(self.q_frob(a, e));
            let idx = self.partner_index(i) as usize;
            h.coeffs[idx] = self.field.add(h.coeffs[idx], other);
        }
        Ok(h)
    }

    /// Free coefficients of M(i): the whole field, or the half-trace-zero
    /// line delta * F_{r^{m/2}} for the half module.
    pub fn module_coefficients(&self, i: u32) -> Vec<Elem> {
        if Some(i) != self.half_index() {
            return self.field.elements().collect();
        }
        let half_pdeg = self.f * self.s * self.m / 2;
        let delta = if self.p == 2 {
            1
        } else {
            // delta^{r^{m/2} - 1} = -1
            self.field.omega_pow((pow_u64(self.q, self.s * self.m / 2) + 1) / 2)
        };
        self.field
            .subfield_elements(half_pdeg)
            .into_iter()
            .map(|c| self.field.mul(delta, c))
            .collect()
    }

    /// F_q-basis of M(i).
    pub fn module_basis(&self, i: u32) -> Result<Vec<LinPoly>, LinError> {
        self.check_index(i)?;
        let mut out = Vec::new();
        if Some(i) == self.half_index() {
            let half_pdeg = self.f * self.s * self.m / 2;
            let gamma = self.field.subfield_generator(half_pdeg);
            let delta = self.module_coefficients(i).into_iter().find(|&c| c != 0).unwrap();
            let mut c = delta;
            for _ in 0..self.module_dim(i) {
                out.push(self.module_component(i, c)?);
                c = self.field.mul(c, gamma);
            }
        } else {
            let w = self.field.omega();
            let mut c = self.field.one();
            for _ in 0..self.module_dim(i) {
                out.push(self.module_component(i, c)?);
                c = self.field.mul(c, w);
            }
        }
        Ok(out)
    }

    pub fn module_member(&self, h: &LinPoly, i: u32) -> Result<bool, LinError> {
        self.check_index(i)?;
        if i == 0 {
            return Ok(h.coeffs[1..].iter().all(|&c| c == 0));
        }
        if Some(i) == self.half_index() {
            let idx = ((self.s * self.m / 2 + self.s - 1) / self.s % self.m) as usize;
            let a = h.coeffs[idx];
            let ok_support = h.coeffs.iter().enumerate().all(|(k, &c)| k == idx || c == 0);
            let ok_constraint =
                self.field.add(a, self.q_frob(a, (self.s * self.m / 2) as i64)) == 0;
            return Ok(ok_support && ok_constraint);
        }
        let a = h.coeffs[i as usize];
        let rebuilt = self.module_component(i, a)?;
        Ok(*h == rebuilt)
    }

    /// All of M(I) as explicit polynomials (product over components).
    pub fn module_set(&self, indices: &BTreeSet<u32>) -> Vec<LinPoly> {
        let mut out = vec![self.zero_poly()];
        for &i in indices {
            let mut next = Vec::with_capacity(out.len() * self.module_size(i) as usize);
            for c in self.module_coefficients(i) {
                let comp = self.module_component(i, c).unwrap();
                for h in &out {
                    next.push(self.add_poly(h, &comp));
                }
            }
            out = next;
        }
        out
    }

    /// d(I): the three-case gcd invariant; I = {} or {0} gives m by the
    /// empty-gcd-with-m-appended convention.
    pub fn d_invariant(&self, indices: &BTreeSet<u32>) -> u64 {
        let nonzero: Vec<u64> = indices.iter().filter(|&&i| i != 0).map(|&i| i as u64).collect();
        let m = self.m as u64;
        if self.s == 2 {
            let mut g = m;
            for i in nonzero {
                g = gcd(g, 2 * i - 1);
            }
            g
        } else if self.m % 2 == 0 && indices.contains(&(self.m / 2)) {
            nonzero.into_iter().fold(0, gcd)
        } else {
            nonzero.into_iter().fold(m, gcd)
        }
    }

    /// chi_i: the character of the multiplicative group afforded by M(i),
    /// valued in F_q.
    pub fn character(&self, i: u32, x: Elem) -> Result<Elem, LinError> {
        self.check_index(i)?;
        if x == 0 {
            return Err(LinError::ZeroArgument);
        }
        if i == 0 {
            let y = self.field.mul(self.q_frob(x, self.s as i64 - 1), x);
            return Ok(self.trace_to_q(y));
        }
        if Some(i) == self.half_index() {
            let y = self.field.mul(self.q_frob(x, (self.s * self.m / 2) as i64), x);
            let src = self.f * self.s * self.m / 2;
            debug_assert!(self.field.in_subfield(y, src));
            return Ok(self.field.rel_trace_between(y, src, self.f));
        }
        let y = self.field.mul(self.q_frob(x, (self.s * (i - 1) + 1) as i64), x);
        Ok(self.trace_to_q(y))
    }

    /// Number of h in M(I) with h(x) = 0, via the closed formula
    /// |M(I)| q^{d(I)} / r^m; requires x nonzero and 0 not in I.
    pub fn kernel_count(&self, indices: &BTreeSet<u32>, x: Elem) -> Result<u64, LinError> {
        if x == 0 {
            return Err(LinError::ZeroArgument);
        }
        if indices.contains(&0) {
            return Err(LinError::ZeroInIndexSet);
        }
        if indices.is_empty() {
            return Ok(1);
        }
        for &i in indices {
            self.check_index(i)?;
        }
        let size: u128 = indices.iter().map(|&i| self.module_size(i) as u128).product();
        let d = self.d_invariant(indices);
        let count = size * pow_u128(self.q as u128, d as u32) / self.rm() as u128;
        Ok(count as u64)
    }

    /// Multiplicative-orbit exponent of the index-d torus subgroup on the
    /// free coefficient of M(i).
    fn coefficient_exponent(&self, i: u32) -> u64 {
        if i == 0 {
            pow_u64(self.q, self.s - 1) + 1
        } else if Some(i) == self.half_index() {
            pow_u64(self.q, self.s - 1) * (1 + pow_u64(self.q, self.s * self.m / 2))
        } else {
            pow_u64(self.q, self.s * i) + pow_u64(self.q, self.s - 1)
        }
    }

    /// Is M(i) irreducible under the index-d subgroup N of the Singer
    /// torus: the N-orbit of any nonzero element spans M(i) over F_q.
    /// Decided via the subfield generated by omega^{dE_i}.
    pub fn is_irreducible_under(&self, i: u32, d: u64) -> Result<bool, LinError> {
        self.check_index(i)?;
        let n = self.rm() - 1;
        let exp = (d % n) as u128 * self.coefficient_exponent(i) as u128 % n as u128;
        let o = n / gcd(n, exp as u64);
        // degree of F_q[z] for z of multiplicative order o
        let mut u = 1;
        while (pow_u128(self.q as u128, u) - 1) % o as u128 != 0 {
            u += 1;
        }
        let target = if Some(i) == self.half_index() { self.s * self.m / 2 } else { self.s * self.m };
        Ok(u == target)
    }

    /// Membership in the exception list that Hypothesis-style statements
    /// exclude; irreducibility under every admissible d is only guaranteed
    /// off this list.
    pub fn exception_free(&self) -> bool {
        !matches!(
            (self.s, self.m, self.q),
            (2, 3, 2) | (1, 2, 8) | (1, 4, 3) | (1, 6, 2)
        )
    }

    /// gcd(smf, r^m - 1): every admissible subgroup index divides this.
    pub fn max_torus_index(&self) -> u64 {
        gcd((self.s * self.m * self.f) as u64, self.rm() - 1)
    }

    /// Deterministic pseudo-random permutation polynomial: coefficients are
    /// drawn from a splitmix-style stream seeded by `seed`, rejecting until
    /// the kernel is trivial.
    pub fn random_permutation(&self, seed: u64) -> LinPoly {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        loop {
            let coeffs: Vec<u64> = (0..self.m)
                .map(|_| {
                    state =
                        state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (state >> 11) % self.rm()
                })
                .collect();
            let h = LinPoly { coeffs };
            if self.is_permutation(&h) {
                return h;
            }
        }
    }
}

/// sum a_i X^{r^i} as its coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinPoly {
    pub coeffs: Vec<Elem>,
}

impl LinPoly {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Gaussian elimination over the field; `rows` is an augmented matrix
/// n x (n+1). Returns the solution vector.
fn solve_linear(field: &Field, rows: &mut [Vec<Elem>]) -> Option<Vec<Elem>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| rows[r][col] != 0)?;
        rows.swap(col, pivot);
        let inv = field.inv(rows[col][col]);
        for c in col..=n {
            rows[col][c] = field.mul(rows[col][c], inv);
        }
        for r in 0..n {
            if r != col && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in col..=n {
                    let sub = field.mul(factor, rows[col][c]);
                    rows[r][c] = field.sub(rows[r][c], sub);
                }
            }
        }
    }
    Some(rows.iter().map(|r| r[n]).collect())
}

/// Table Form parameters: the family, m, and q, with the constraints of
/// the isometry-group table enforced.
#[derive(Debug, Clone)]
pub struct SpaceParams {
    pub kind: Kind,
    ctx: LinCtx,
}

impl SpaceParams {
    pub fn new(kind: Kind, m: u32, q: u64) -> Result<SpaceParams, LinError> {
        let ok = match kind {
            Kind::Unitary => m >= 2 && (m, q) != (2, 2),
            Kind::OrthogonalPlus => m >= 4,
            Kind::Symplectic => q % 2 == 0 && m >= 2 && (m, q) != (2, 2),
        };
        if !ok {
            return Err(LinError::BadParams(kind.code(), m, q));
        }
        Ok(SpaceParams { kind, ctx: LinCtx::new(kind.s(), m, q)? })
    }

    pub fn ctx(&self) -> &LinCtx {
        &self.ctx
    }

    /// Smallest admissible module index: 0 only in the symplectic radical.
    pub fn min_index(&self) -> u32 {
        if self.kind == Kind::Symplectic {
            0
        } else {
            1
        }
    }

    /// Validate a module index set for this space.
    pub fn index_set<I: IntoIterator<Item = u32>>(
        &self,
        indices: I,
    ) -> Result<IndexSet, LinError> {
        let set: BTreeSet<u32> = indices.into_iter().collect();
        for &i in &set {
            if i > self.ctx.max_index() {
                return Err(LinError::IndexOutOfRange(i, self.ctx.max_index()));
            }
            if i == 0 && self.kind != Kind::Symplectic {
                return Err(LinError::ZeroIndexNotPresent);
            }
        }
        Ok(IndexSet { indices: set })
    }

    /// Every valid index set (including the empty one), in a fixed order.
    pub fn all_index_sets(&self) -> Vec<IndexSet> {
        let range: Vec<u32> = (self.min_index()..=self.ctx.max_index()).collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << range.len()) {
            let set: BTreeSet<u32> =
                range.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i).collect();
            out.push(IndexSet { indices: set });
        }
        out.sort_by(|a, b| (a.indices.len(), &a.indices).cmp(&(b.indices.len(), &b.indices)));
        out
    }

    pub fn d_invariant(&self, set: &IndexSet) -> u64 {
        self.ctx.d_invariant(&set.indices)
    }

    /// Module descriptor "M(i)@kind,m,q".
    pub fn describe_module(&self, i: u32) -> String {
        format!("M({i})@{},{},{}", self.kind.code(), self.ctx.m, self.ctx.q)
    }
}

impl std::ops::Deref for SpaceParams {
    type Target = LinCtx;
    fn deref(&self) -> &LinCtx {
        &self.ctx
    }
}

/// A validated subset of module indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndexSet {
    pub indices: BTreeSet<u32>,
}

impl IndexSet {
    pub fn contains(&self, i: u32) -> bool {
        self.indices.contains(&i)
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.indices.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.indices.iter().copied().collect()
    }
}

impl std::fmt::Display for IndexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
