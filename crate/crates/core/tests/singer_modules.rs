//! The module decomposition of the unipotent radical under the Singer
//! torus: every nonzero element generates, as an invariant subgroup, the
//! product of the components it touches — so the M(i) are exactly the
//! minimal invariant subgroups.

use foulser::linpoly::{Kind, LinPoly, SpaceParams};
use foulser::polarspace::{IsometryElement, PolarSpace};
use std::collections::{BTreeSet, HashSet};

fn spaces() -> Vec<PolarSpace> {
    [
        (Kind::Symplectic, 3, 2),
        (Kind::Symplectic, 2, 4),
        (Kind::OrthogonalPlus, 4, 2),
        (Kind::Unitary, 2, 3),
    ]
    .into_iter()
    .map(|(k, m, q)| PolarSpace::new(SpaceParams::new(k, m, q).unwrap()).unwrap())
    .collect()
}

/// Component support of a radical element.
fn support(space: &PolarSpace, h: &LinPoly) -> BTreeSet<u32> {
    let p = &space.params;
    let mut out = BTreeSet::new();
    for i in p.min_index()..=p.max_index() {
        let coeff = if Some(i) == p.half_index() {
            let idx = ((p.s * p.m / 2 + p.s - 1) / p.s % p.m) as usize;
            h.coeffs[idx]
        } else {
            h.coeffs[i as usize]
        };
        if coeff != 0 {
            out.insert(i);
        }
    }
    out
}

#[test]
fn torus_closure_of_any_element_is_its_component_product() {
    for space in spaces() {
        let p = &space.params;
        let k = p.ctx().field();
        let all: BTreeSet<u32> = (p.min_index()..=p.max_index()).collect();
        let radical = p.module_set(&all);
        for h in &radical {
            if h.is_zero() {
                continue;
            }
            // additive closure of the full torus orbit (an invariant
            // subgroup of R, since R is elementary abelian)
            let orbit: Vec<LinPoly> =
                k.units().map(|a| p.torus_act(a, h)).collect();
            let mut closure: HashSet<LinPoly> = HashSet::new();
            closure.insert(p.zero_poly());
            let mut frontier = vec![p.zero_poly()];
            while let Some(v) = frontier.pop() {
                for o in &orbit {
                    let next = p.add_poly(&v, o);
                    if closure.insert(next.clone()) {
                        frontier.push(next);
                    }
                }
            }
            let expected: usize =
                support(&space, h).iter().map(|&i| p.module_size(i) as usize).product();
            assert_eq!(
                closure.len(),
                expected,
                "closure of {} at {:?}",
                p.format_poly(h),
                space.kind()
            );
            // and it is exactly M(support)
            for g in p.module_set(&support(&space, h)) {
                assert!(closure.contains(&g));
            }
        }
    }
}

#[test]
fn torus_action_matches_singer_conjugation() {
    // conjugating u_h through l_omega acts like u_{omega.h} on every point
    for space in spaces() {
        let p = &space.params;
        let k = p.ctx().field();
        let all: BTreeSet<u32> = (p.min_index()..=p.max_index()).collect();
        let singer = space.singer();
        let singer_inv = space.invert(&singer);
        for h in p.module_set(&all).into_iter().take(12) {
            let conj = IsometryElement::Word(vec![
                singer.clone(),
                space.unipotent(h.clone()).unwrap(),
                singer_inv.clone(),
            ]);
            let direct = space.unipotent(p.torus_act(k.omega(), &h)).unwrap();
            for pt in space.lambda_points().iter().take(10) {
                assert_eq!(space.apply(&conj, pt), space.apply(&direct, pt));
            }
        }
    }
}

#[test]
fn isometry_preservation_exhaustive_on_pairs() {
    // full pointwise check of form preservation over all vector pairs at
    // the symplectic desk instances
    for (m, q) in [(3u32, 2u64), (2, 4)] {
        let space =
            PolarSpace::new(SpaceParams::new(Kind::Symplectic, m, q).unwrap()).unwrap();
        let p = &space.params;
        let k = p.ctx().field();
        let all = p.index_set(p.min_index()..=p.max_index()).unwrap();
        let mut gens = vec![space.singer()];
        gens.extend(space.radical_generators(&all).into_iter().take(2));
        for g in &gens {
            for x in k.elements() {
                for y in k.elements() {
                    let v = (x, y);
                    for w in [(k.one(), 0), (0, k.one()), (k.omega(), k.omega())] {
                        let lhs = space.form_value(space.apply_vec(g, v), Some(space.apply_vec(g, w)));
                        assert_eq!(lhs, space.form_value(v, Some(w)));
                    }
                }
            }
        }
    }
}
