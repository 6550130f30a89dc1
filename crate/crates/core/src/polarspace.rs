//! The polar spaces (V, kappa_eps) over V = F_{r^m} x F_{r^m} and the
//! point sets Lambda_eps that model the coset space `[G:B]`: norm-one
//! projective points for the unitary and plus-type orthogonal families,
//! elliptic-quadric labels kappa_{a,b} for the even-characteristic
//! symplectic family.
//!
//! Isometries come in three generator flavors: unipotent maps
//! (x, y) -> (x + h(y), y) with h in the radical range, Levi maps
//! (x, y) -> (h(x), h^(s)(y)) for permutation polynomials h, and the
//! semilinear p-power Frobenius acting coordinatewise. Words over these
//! compose left to right, matching the GammaL_1 conventions, so the Singer
//! torus and field automorphism embed as l_omega and phi.
//!
//! Actions on quadric labels follow kappa^g = (kappa o g^{-1}) twisted by
//! the Frobenius part; the unipotent label formula is
//! b -> b + h_0 + (h(sqrt(a)))^2.

use crate::gf::Elem;
use crate::linpoly::{IndexSet, Kind, LinError, LinPoly, SpaceParams};
use std::collections::HashMap;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("polynomial is outside the unipotent radical range")]
    NotInRadical,
    #[error("element is not F_r-linear, no matrix")]
    NotLinear,
    #[error("Dickson invariant needs even q")]
    OddCharacteristic,
    #[error("point does not lie on Lambda")]
    NotOnLambda,
    #[error("point set exceeds the desk-scale bound")]
    TooLarge,
}

/// A point of Lambda_eps: a canonical norm-one representative of a
/// projective point, or an elliptic-quadric label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolarPoint {
    Projective { x: Elem, y: Elem },
    Quadric { a: Elem, b: Elem },
}

/// Generators of the groups acting here, plus free words over them.
#[derive(Debug, Clone)]
pub enum IsometryElement {
    Unipotent(LinPoly),
    Levi { h: LinPoly, adj: LinPoly, inv: LinPoly, inv_adj: LinPoly },
    Semilinear(u32),
    Word(Vec<IsometryElement>),
}

#[derive(Debug)]
pub struct PolarSpace {
    pub params: SpaceParams,
    /// unitary: least-dlog lambda in F_{q^2} with lambda + lambda^q = 1
    pub lambda: Option<Elem>,
    /// symplectic: least-dlog mu in F_q with X^2 + X + mu irreducible
    pub mu: Option<Elem>,
    points: OnceLock<Vec<PolarPoint>>,
    point_index: OnceLock<HashMap<PolarPoint, u32>>,
    dual_basis: OnceLock<Vec<Elem>>,
}

impl PolarSpace {
    pub fn new(params: SpaceParams) -> Result<PolarSpace, SpaceError> {
        let k = params.ctx().field();
        let lambda = match params.kind {
            Kind::Unitary => {
                let f = params.f;
                (0..k.unit_order())
                    .map(|d| k.omega_pow(d))
                    .find(|&x| k.in_subfield(x, 2 * f) && k.add(x, params.q_frob(x, 1)) == k.one())
            }
            _ => None,
        };
        let mu = match params.kind {
            Kind::Symplectic => {
                let f = params.f;
                (0..k.unit_order())
                    .map(|d| k.omega_pow(d))
                    .find(|&x| k.in_subfield(x, f) && k.rel_trace_between(x, f, 1) == k.one())
            }
            _ => None,
        };
        Ok(PolarSpace {
            params,
            lambda,
            mu,
            points: OnceLock::new(),
            point_index: OnceLock::new(),
            dual_basis: OnceLock::new(),
        })
    }

    pub fn kind(&self) -> Kind {
        self.params.kind
    }

    fn k(&self) -> &crate::gf::Field {
        self.params.ctx().field()
    }

    /// nu(x, y) = Tr_{r^m/q}(x y^{q^{s-1}}).
    pub fn nu(&self, x: Elem, y: Elem) -> Elem {
        let p = &self.params;
        p.trace_to_q(self.k().mul(x, p.q_frob(y, p.s as i64 - 1)))
    }

    /// The defining form: Hermitian / quadratic / alternating value.
    /// Unary calls evaluate the quadratic form (orthogonal), the Hermitian
    /// norm (unitary), or kappa_0(v, v) = 0 (symplectic).
    pub fn form_value(&self, v: (Elem, Elem), w: Option<(Elem, Elem)>) -> Elem {
        let p = &self.params;
        let k = self.k();
        let (a, b) = v;
        match (self.kind(), w) {
            (Kind::Unitary, w) => {
                let (c, d) = w.unwrap_or(v);
                // Tr_{r^m/r}(a d^q + b^r c^q)
                let t1 = k.mul(a, p.q_frob(d, 1));
                let t2 = k.mul(p.q_frob(b, p.s as i64), p.q_frob(c, 1));
                p.trace_to_r(k.add(t1, t2))
            }
            (Kind::OrthogonalPlus, None) => p.trace_to_r(k.mul(a, b)),
            (Kind::OrthogonalPlus, Some((c, d))) => {
                // polar form of Q
                p.trace_to_r(k.add(k.mul(a, d), k.mul(b, c)))
            }
            (Kind::Symplectic, None) => 0,
            (Kind::Symplectic, Some((c, d))) => {
                p.trace_to_r(k.add(k.mul(a, d), k.mul(b, c)))
            }
        }
    }

    /// The quadric kappa_{a,b} evaluated at a vector:
    /// Tr_{q^m/q}(a x^2 + x y + b y^2).
    pub fn quadric_value(&self, label: (Elem, Elem), v: (Elem, Elem)) -> Elem {
        debug_assert_eq!(self.kind(), Kind::Symplectic);
        let k = self.k();
        let (a, b) = label;
        let (x, y) = v;
        let term = k.add(
            k.add(k.mul(a, k.mul(x, x)), k.mul(x, y)),
            k.mul(b, k.mul(y, y)),
        );
        self.params.trace_to_q(term)
    }

    /// Scalars c with nu(cv) = nu(v): c^{q^{s-1}+1} = 1.
    fn rescaling_group(&self) -> Vec<Elem> {
        let p = &self.params;
        let n = p.rm() - 1;
        let c = crate::arith::gcd(crate::arith::pow_u64(p.q, p.s - 1) + 1, n);
        (0..c).map(|v| self.k().omega_pow(v * (n / c))).collect()
    }

    /// The canonical representative of <(x, y)>: lexicographically least
    /// discrete-log pair among the nu = 1 representatives.
    pub fn canonical_projective(&self, x: Elem, y: Elem) -> PolarPoint {
        debug_assert_ne!(self.kind(), Kind::Symplectic);
        debug_assert!(x != 0 && y != 0);
        let k = self.k();
        let mut best: Option<((u64, u64), (Elem, Elem))> = None;
        for c in self.rescaling_group() {
            let (cx, cy) = (k.mul(c, x), k.mul(c, y));
            let key = (k.dlog(cx).unwrap(), k.dlog(cy).unwrap());
            if best.map_or(true, |(bk, _)| key < bk) {
                best = Some((key, (cx, cy)));
            }
        }
        let (_, (x, y)) = best.unwrap();
        PolarPoint::Projective { x, y }
    }

    /// Deterministic ordering key: the discrete-log pair.
    pub fn point_key(&self, pt: &PolarPoint) -> (u64, u64) {
        let k = self.k();
        match *pt {
            PolarPoint::Projective { x, y } => (k.dlog(x).unwrap(), k.dlog(y).unwrap()),
            PolarPoint::Quadric { a, b } => (k.dlog(a).unwrap(), k.dlog(b).unwrap()),
        }
    }

    /// The complete point set Lambda_eps, duplicate-free, sorted by
    /// canonical key. Built once and cached.
    pub fn lambda_points(&self) -> &[PolarPoint] {
        self.points.get_or_init(|| {
            assert!(self.params.rm() <= 1 << 13, "point enumeration is desk-scale only");
            let k = self.k();
            let mut pts = Vec::new();
            match self.kind() {
                Kind::Symplectic => {
                    for a in k.units() {
                        for b in k.units() {
                            let prod = k.mul(a, b);
                            if k.rel_trace(prod, 1).unwrap() == 1 {
                                pts.push(PolarPoint::Quadric { a, b });
                            }
                        }
                    }
                }
                _ => {
                    let mut seen = std::collections::HashSet::new();
                    for x in k.units() {
                        for y in k.units() {
                            if self.nu(x, y) == k.one() {
                                let pt = self.canonical_projective(x, y);
                                if seen.insert(pt) {
                                    pts.push(pt);
                                }
                            }
                        }
                    }
                }
            }
            pts.sort_by_key(|pt| self.point_key(pt));
            pts
        })
    }

    fn index_of(&self, pt: &PolarPoint) -> Option<u32> {
        let map = self.point_index.get_or_init(|| {
            self.lambda_points()
                .iter()
                .enumerate()
                .map(|(i, &p)| (p, i as u32))
                .collect()
        });
        map.get(pt).copied()
    }

    pub fn base_point(&self) -> PolarPoint {
        self.lambda_points()[0]
    }

    // ----- element constructors -----

    /// Is h in the radical range M-bar (direct sum of the admissible M(i))?
    pub fn in_radical_range(&self, h: &LinPoly) -> bool {
        let p = &self.params;
        let mut sum = p.zero_poly();
        for i in p.min_index()..=p.max_index() {
            let comp = if Some(i) == p.half_index() {
                let idx = ((p.s * p.m / 2 + p.s - 1) / p.s % p.m) as usize;
                let a = h.coeffs[idx];
                if p.ctx().field().add(a, p.q_frob(a, (p.s * p.m / 2) as i64)) != 0 {
                    return false;
                }
                p.module_component(i, a).unwrap()
            } else if i == 0 {
                p.module_component(0, h.coeffs[0]).unwrap()
            } else {
                p.module_component(i, h.coeffs[i as usize]).unwrap()
            };
            sum = p.add_poly(&sum, &comp);
        }
        sum == *h
    }

    pub fn unipotent(&self, h: LinPoly) -> Result<IsometryElement, SpaceError> {
        if !self.in_radical_range(&h) {
            return Err(SpaceError::NotInRadical);
        }
        Ok(IsometryElement::Unipotent(h))
    }

    pub fn levi(&self, h: LinPoly) -> Result<IsometryElement, SpaceError> {
        let p = &self.params;
        let adj = p.adjoint(&h)?;
        let inv = p.inverse(&h)?;
        let inv_adj = p.adjoint(&inv)?;
        Ok(IsometryElement::Levi { h, adj, inv, inv_adj })
    }

    /// rho_a(X) = a^{-q^{s-1}} X; l_a is the Levi element it induces.
    pub fn scalar_levi(&self, a: Elem) -> Result<IsometryElement, SpaceError> {
        assert_ne!(a, 0);
        let p = &self.params;
        let coeff = self.k().inv(p.q_frob(a, p.s as i64 - 1));
        self.levi(p.scalar_poly(coeff))
    }

    /// The Singer generator l_omega: (x, y) -> (omega^{-q^{s-1}} x, omega y).
    pub fn singer(&self) -> IsometryElement {
        self.scalar_levi(self.k().omega()).unwrap()
    }

    /// The semilinear p-power map phi^t acting coordinatewise.
    pub fn frobenius_map(&self, t: u32) -> IsometryElement {
        IsometryElement::Semilinear(t % self.k().degree())
    }

    /// The image of a^e phi^t in GammaL_1(q^{sm}) = `<l_omega>:<phi>`.
    pub fn from_gamma(&self, e: u64, t: u32) -> IsometryElement {
        IsometryElement::Word(vec![
            self.scalar_levi(self.k().omega_pow(e)).unwrap(),
            self.frobenius_map(t),
        ])
    }

    /// Generators of U(I) as a group: an F_p-basis of M(I).
    pub fn radical_generators(&self, set: &IndexSet) -> Vec<IsometryElement> {
        let p = &self.params;
        let k = self.k();
        let fq_gen = k.subfield_generator(p.f);
        let mut out = Vec::new();
        for i in set.iter() {
            for basis in p.module_basis(i).unwrap() {
                let mut c = k.one();
                for _ in 0..p.f {
                    out.push(IsometryElement::Unipotent(p.scale_poly(c, &basis)));
                    c = k.mul(c, fq_gen);
                }
            }
        }
        out
    }

    /// Generators for the subgroup S of GammaL_1(q^{sm}) named by a
    /// Foulser triple.
    pub fn subgroup_generators(&self, t: &crate::gammal1::FoulserTriple) -> Vec<IsometryElement> {
        vec![self.from_gamma(t.ell % (self.params.rm() - 1), 0), self.from_gamma(t.j, t.k)]
    }

    // ----- actions -----

    /// Total Frobenius part of a word, mod smf.
    pub fn frobenius_exponent(&self, g: &IsometryElement) -> u32 {
        match g {
            IsometryElement::Semilinear(t) => *t,
            IsometryElement::Word(ws) => {
                ws.iter().map(|w| self.frobenius_exponent(w)).sum::<u32>() % self.k().degree()
            }
            _ => 0,
        }
    }

    /// Vector action on V, composed left to right for words.
    pub fn apply_vec(&self, g: &IsometryElement, v: (Elem, Elem)) -> (Elem, Elem) {
        let p = &self.params;
        let k = self.k();
        match g {
            IsometryElement::Unipotent(h) => (k.add(v.0, p.eval(h, v.1)), v.1),
            IsometryElement::Levi { h, adj, .. } => (p.eval(h, v.0), p.eval(adj, v.1)),
            IsometryElement::Semilinear(t) => (k.frobenius(v.0, *t), k.frobenius(v.1, *t)),
            IsometryElement::Word(ws) => ws.iter().fold(v, |acc, w| self.apply_vec(w, acc)),
        }
    }

    pub fn invert(&self, g: &IsometryElement) -> IsometryElement {
        let p = &self.params;
        match g {
            IsometryElement::Unipotent(h) => {
                IsometryElement::Unipotent(p.scale_poly(self.k().neg(1), h))
            }
            IsometryElement::Levi { h, adj, inv, inv_adj } => IsometryElement::Levi {
                h: inv.clone(),
                adj: inv_adj.clone(),
                inv: h.clone(),
                inv_adj: adj.clone(),
            },
            IsometryElement::Semilinear(t) => {
                IsometryElement::Semilinear((self.k().degree() - t) % self.k().degree())
            }
            IsometryElement::Word(ws) => {
                IsometryElement::Word(ws.iter().rev().map(|w| self.invert(w)).collect())
            }
        }
    }

    /// Right action on Lambda_eps. Projective points move by the vector
    /// action and renormalize; quadric labels move by
    /// kappa^g(v) = (kappa(v^{g^{-1}}))^{p^t}.
    pub fn apply(&self, g: &IsometryElement, pt: &PolarPoint) -> PolarPoint {
        match (pt, self.kind()) {
            (PolarPoint::Projective { x, y }, _) => {
                let (nx, ny) = self.apply_vec(g, (*x, *y));
                debug_assert_eq!(self.nu(nx, ny), self.k().one());
                self.canonical_projective(nx, ny)
            }
            (PolarPoint::Quadric { a, b }, Kind::Symplectic) => {
                let out = self.apply_label(g, (*a, *b));
                debug_assert_eq!(
                    self.k().rel_trace(self.k().mul(out.0, out.1), 1).unwrap(),
                    1,
                    "label action must preserve Lambda_0"
                );
                PolarPoint::Quadric { a: out.0, b: out.1 }
            }
            _ => panic!("quadric point in a projective space"),
        }
    }

    fn apply_label(&self, g: &IsometryElement, label: (Elem, Elem)) -> (Elem, Elem) {
        let p = &self.params;
        let k = self.k();
        let (a, b) = label;
        match g {
            IsometryElement::Unipotent(h) => {
                // b + h_0 + (h(sqrt(a)))^2 where sqrt is x -> x^{q^m/2}
                let sqrt_a = k.frobenius(a, k.degree() - 1);
                let image = p.eval(h, sqrt_a);
                let nb = k.add(k.add(b, h.coeffs[0]), k.mul(image, image));
                (a, nb)
            }
            IsometryElement::Levi { inv, inv_adj, .. } => {
                (self.quadratic_pullback(inv, a), self.quadratic_pullback(inv_adj, b))
            }
            IsometryElement::Semilinear(t) => (k.frobenius(a, *t), k.frobenius(b, *t)),
            IsometryElement::Word(ws) => {
                ws.iter().fold(label, |acc, w| self.apply_label(w, acc))
            }
        }
    }

    /// a' with Tr(a' z^2) = Tr(a (w(z))^2) for all z, namely
    /// a' = sum_i w_i^{2 q^{m-i}} a^{q^{m-i}}.
    fn quadratic_pullback(&self, w: &LinPoly, a: Elem) -> Elem {
        let p = &self.params;
        let k = self.k();
        let mut acc = 0;
        for (i, &wi) in w.coeffs.iter().enumerate() {
            if wi == 0 {
                continue;
            }
            let e = (p.m as i64) - (i as i64);
            let wi_shift = p.q_frob(wi, e);
            let term = k.mul(k.mul(wi_shift, wi_shift), p.q_frob(a, e));
            acc = k.add(acc, term);
        }
        acc
    }

    /// Form preservation up to the Frobenius twist, checked on all basis
    /// pairs (enough, by (semi)bilinearity).
    pub fn preserves_form(&self, g: &IsometryElement) -> bool {
        let p = &self.params;
        let k = self.k();
        let t = self.frobenius_exponent(g);
        let basis: Vec<(Elem, Elem)> = (0..p.m)
            .map(|i| (k.pow(k.omega(), i as u64), 0))
            .chain((0..p.m).map(|i| (0, k.pow(k.omega(), i as u64))))
            .collect();
        // quadratic data (orthogonal) plus the (sesqui)bilinear data
        for &v in &basis {
            if self.kind() == Kind::OrthogonalPlus {
                let lhs = self.form_value(self.apply_vec(g, v), None);
                if lhs != k.frobenius(self.form_value(v, None), t) {
                    return false;
                }
            }
            for &w in &basis {
                let lhs = self.form_value(self.apply_vec(g, v), Some(self.apply_vec(g, w)));
                if lhs != k.frobenius(self.form_value(v, Some(w)), t) {
                    return false;
                }
            }
        }
        true
    }

    // ----- orbits -----

    /// Orbit of one point under a generator list.
    pub fn orbit_of(&self, gens: &[IsometryElement], start: &PolarPoint) -> Vec<PolarPoint> {
        let mut seen = std::collections::HashSet::new();
        let mut orbit = vec![*start];
        seen.insert(*start);
        let mut head = 0;
        while head < orbit.len() {
            let pt = orbit[head];
            head += 1;
            for g in gens {
                let next = self.apply(g, &pt);
                if seen.insert(next) {
                    orbit.push(next);
                }
            }
        }
        orbit
    }

    /// Exact orbit partition of Lambda_eps (or a subset), deterministic:
    /// orbits are listed by their least point in canonical order.
    pub fn orbits(
        &self,
        gens: &[IsometryElement],
        subset: Option<&[PolarPoint]>,
    ) -> Vec<Vec<PolarPoint>> {
        let all = self.lambda_points();
        let pts: Vec<PolarPoint> = match subset {
            Some(s) => s.to_vec(),
            None => all.to_vec(),
        };
        let mut remaining: std::collections::BTreeSet<u32> =
            pts.iter().filter_map(|p| self.index_of(p)).collect();
        let mut orbits = Vec::new();
        while let Some(&first) = remaining.iter().next() {
            let orbit = self.orbit_of(gens, &all[first as usize]);
            let mut idx: Vec<u32> = orbit
                .iter()
                .map(|p| self.index_of(p).expect("orbit leaves Lambda"))
                .collect();
            idx.sort_unstable();
            for i in &idx {
                remaining.remove(i);
            }
            orbits.push(idx.into_iter().map(|i| all[i as usize]).collect());
        }
        orbits
    }

    /// r^m / q^{d(I)} for 0 not in I, q^m / 2 for 0 in I.
    pub fn predicted_orbit_length(&self, set: &IndexSet) -> u64 {
        let p = &self.params;
        if set.contains(0) {
            crate::arith::pow_u64(p.q, p.m) / 2
        } else {
            p.rm() / crate::arith::pow_u64(p.q, p.d_invariant(set) as u32)
        }
    }

    // ----- linearization -----

    fn dual_basis(&self) -> &[Elem] {
        self.dual_basis.get_or_init(|| {
            let p = &self.params;
            let k = self.k();
            let m = p.m as usize;
            // invert the Gram matrix Tr_{r^m/r}(w^i w^j) over F_r
            let basis: Vec<Elem> = (0..m).map(|i| k.pow(k.omega(), i as u64)).collect();
            let mut duals = Vec::with_capacity(m);
            for i in 0..m {
                let mut rows: Vec<Vec<Elem>> = (0..m)
                    .map(|r| {
                        let mut row: Vec<Elem> = (0..m)
                            .map(|c| p.trace_to_r(k.mul(basis[r], basis[c])))
                            .collect();
                        row.push(if r == i { 1 } else { 0 });
                        row
                    })
                    .collect();
                let sol = gauss_solve(k, &mut rows).expect("trace form is nondegenerate");
                let dual = sol
                    .iter()
                    .zip(&basis)
                    .fold(0, |acc, (&c, &b)| k.add(acc, k.mul(c, b)));
                duals.push(dual);
            }
            duals
        })
    }

    /// F_r-coordinates of z on the power basis.
    fn coords(&self, z: Elem) -> Vec<Elem> {
        let p = &self.params;
        let k = self.k();
        self.dual_basis().iter().map(|&d| p.trace_to_r(k.mul(z, d))).collect()
    }

    /// The 2m x 2m matrix over F_r of an F_r-linear element, rows indexed
    /// by the images of the basis (e_0..e_{m-1}, f_0..f_{m-1}).
    pub fn matrix_of(&self, g: &IsometryElement) -> Result<Vec<Vec<Elem>>, SpaceError> {
        let p = &self.params;
        let k = self.k();
        if self.frobenius_exponent(g) % (p.s * p.f) != 0 {
            return Err(SpaceError::NotLinear);
        }
        let m = p.m as usize;
        let mut rows = Vec::with_capacity(2 * m);
        for i in 0..2 * m {
            let w = k.pow(k.omega(), (i % m) as u64);
            let v = if i < m { (w, 0) } else { (0, w) };
            let (ix, iy) = self.apply_vec(g, v);
            let mut row = self.coords(ix);
            row.extend(self.coords(iy));
            rows.push(row);
        }
        Ok(rows)
    }

    pub fn matrix_rank(&self, mat: &[Vec<Elem>]) -> u32 {
        let k = self.k();
        let mut m: Vec<Vec<Elem>> = mat.to_vec();
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut rank = 0;
        let mut row = 0;
        for col in 0..cols {
            if let Some(pr) = (row..rows).find(|&r| m[r][col] != 0) {
                m.swap(row, pr);
                let inv = k.inv(m[row][col]);
                for c in col..cols {
                    m[row][c] = k.mul(m[row][c], inv);
                }
                for r in 0..rows {
                    if r != row && m[r][col] != 0 {
                        let factor = m[r][col];
                        for c in col..cols {
                            let sub = k.mul(factor, m[row][c]);
                            m[r][c] = k.sub(m[r][c], sub);
                        }
                    }
                }
                row += 1;
                rank += 1;
            }
        }
        rank
    }

    /// rank(g - 1) mod 2 for even q: 0 on Omega, 1 off it.
    pub fn dickson_invariant(&self, g: &IsometryElement) -> Result<u8, SpaceError> {
        if self.params.p != 2 {
            return Err(SpaceError::OddCharacteristic);
        }
        let mut mat = self.matrix_of(g)?;
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = self.k().sub(row[i], 1);
        }
        Ok((self.matrix_rank(&mat) % 2) as u8)
    }

    /// Multiplicative order of a linear element, via its matrix.
    pub fn element_order(&self, g: &IsometryElement) -> Result<u64, SpaceError> {
        let mat = self.matrix_of(g)?;
        let k = self.k();
        let n = mat.len();
        let identity: Vec<Vec<Elem>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect())
            .collect();
        let mut acc = mat.clone();
        let mut order = 1u64;
        while acc != identity {
            let mut next = vec![vec![0; n]; n];
            for i in 0..n {
                for l in 0..n {
                    if acc[i][l] == 0 {
                        continue;
                    }
                    for j in 0..n {
                        next[i][j] = k.add(next[i][j], k.mul(acc[i][l], mat[l][j]));
                    }
                }
            }
            acc = next;
            order += 1;
            assert!(order <= self.params.rm() * 4, "runaway order computation");
        }
        Ok(order)
    }

    /// Serialized form "P(w^i,w^j)" / "Q(w^i,w^j)".
    pub fn format_point(&self, pt: &PolarPoint) -> String {
        let k = self.k();
        match pt {
            PolarPoint::Projective { x, y } => {
                format!("P({},{})", k.format_element(*x), k.format_element(*y))
            }
            PolarPoint::Quadric { a, b } => {
                format!("Q({},{})", k.format_element(*a), k.format_element(*b))
            }
        }
    }
}

/// Gaussian elimination over the big field (augmented n x (n+1)).
fn gauss_solve(field: &crate::gf::Field, rows: &mut [Vec<Elem>]) -> Option<Vec<Elem>> {
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
