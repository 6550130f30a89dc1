//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured counts (run with `--nocapture` to see them).

use foulser::arith::{self, gcd, omega_minus_order, sp_order};
use foulser::factorize::{ambient_t, exactness_check, verify_sweep, OvergroupSpec};
use foulser::gammal1::{divisors, GammaL1, SubgroupFilter};
use foulser::linpoly::{Kind, LinCtx, SpaceParams};
use foulser::polarspace::PolarSpace;
use std::time::Instant;

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn desk_instances() -> Vec<PolarSpace> {
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

/// Criterion 1: for every prime power p^f <= 512 and every subgroup of
/// GammaL_1(p^f), the arithmetic transitivity and class-transitivity
/// verdicts (every divisor i) agree with brute-force orbit computation.
#[test]
fn criterion_1_transitivity_decider_vs_oracle() {
    let start = Instant::now();
    let mut fields = 0u32;
    let mut subgroups = 0u64;
    let mut checks = 0u64;
    for p in 2u64..=512 {
        if !arith::is_prime(p) {
            continue;
        }
        let mut f = 1u32;
        while p.pow(f) <= 512 {
            let g = GammaL1::from_params(p, f);
            fields += 1;
            let n = g.torus_order();
            for t in g.enumerate_subgroups(SubgroupFilter::All, None).unwrap() {
                subgroups += 1;
                let decided = g.is_transitive(&t);
                let oracle = g.orbit_oracle(&t, None).unwrap().len() == 1;
                assert_eq!(decided, oracle, "points: p={p} f={f} {t:?}");
                checks += 1;
                for i in divisors(n) {
                    let decided = g.is_transitive_on_classes(&t, i).unwrap();
                    let oracle = g.orbit_oracle(&t, Some(i)).unwrap().len() == 1;
                    assert_eq!(decided, oracle, "classes: p={p} f={f} {t:?} i={i}");
                    checks += 1;
                }
            }
            f += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "criterion 1 exceeded 5 minutes: {elapsed:?}");
    println!(
        "criterion 1 (transitivity decider vs oracle, p^f <= 512): PASS \
         [{fields} fields, {subgroups} subgroups, {checks} agreements, {elapsed:?}]"
    );
}

/// Criterion 2: at p^f in {9, 49, 121} every regular subgroup has all its
/// Sylow subgroups cyclic or generalized quaternion, and a regular
/// subgroup with a generalized-quaternion Sylow 2-subgroup of order
/// (p^f - 1)_2 exists.
#[test]
fn criterion_2_regular_subgroup_structure() {
    let mut summary = Vec::new();
    for (p, f) in [(3u64, 2u32), (7, 2), (11, 2)] {
        let g = GammaL1::from_params(p, f);
        let n = g.torus_order();
        let two_part = arith::prime_part(n, 2);
        let regulars = g.enumerate_subgroups(SubgroupFilter::Regular, None).unwrap();
        assert!(!regulars.is_empty());
        let mut quaternion_witness = false;
        for t in &regulars {
            assert_eq!(g.group_order(t), n);
            let elems = g.elements(t);
            for (r, _) in arith::factor_map(n) {
                let sylow = g.sylow_subgroup(&elems, r);
                assert!(
                    g.sylow_is_cyclic_or_quaternion(&sylow),
                    "bad Sylow {r}-subgroup in {t:?} at {p}^{f}"
                );
                if r == 2
                    && sylow.len() as u64 == two_part
                    && !g.is_cyclic(&sylow)
                    && g.involution_count(&sylow) == 1
                {
                    quaternion_witness = true;
                }
            }
        }
        assert!(quaternion_witness, "no generalized-quaternion Sylow 2 at {p}^{f}");
        summary.push(format!("{}^{}:{} regular", p, f, regulars.len()));
    }
    println!(
        "criterion 2 (regular subgroups cyclic/quaternion at 9, 49, 121): PASS [{}]",
        summary.join(", ")
    );
}

/// Criterion 3: |Lambda| = 28 / 120 / 120 / 540 at the desk instances and
/// every U(I)-orbit has exactly the predicted length for every valid I.
#[test]
fn criterion_3_orbit_length_theorem() {
    let start = Instant::now();
    let expected = [28usize, 120, 120, 540];
    let mut lines = Vec::new();
    for (space, want) in desk_instances().iter().zip(expected) {
        assert_eq!(space.lambda_points().len(), want);
        let mut sets_checked = 0;
        for set in space.params.all_index_sets() {
            if set.is_empty() {
                continue;
            }
            let predicted = space.predicted_orbit_length(&set);
            let orbits = space.orbits(&space.radical_generators(&set), None);
            for orbit in &orbits {
                assert_eq!(
                    orbit.len() as u64,
                    predicted,
                    "{:?} m={} q={} I={set}",
                    space.kind(),
                    space.params.m,
                    space.params.q
                );
            }
            sets_checked += 1;
        }
        lines.push(format!("{}({} pts, {} index sets)", space.params.kind.code(), want, sets_checked));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "criterion 3 exceeded 2 minutes");
    println!("criterion 3 (orbit lengths r^m/q^d and q^m/2): PASS [{}; {elapsed:?}]", lines.join(", "));
}

/// Criterion 4: at the four desk instances, decide_hb agrees with the
/// orbit oracle for every valid I, every S <= G cap T, and every
/// admissible overgroup.
#[test]
fn criterion_4_factorization_theorem_equivalence() {
    let start = Instant::now();
    let mut total = 0usize;
    let mut lines = Vec::new();
    for space in desk_instances() {
        let specs = OvergroupSpec::enumerate(&space.params);
        let records = verify_sweep(&space, &specs).unwrap();
        assert!(!records.is_empty());
        for r in &records {
            assert!(
                r.agree,
                "theorem/oracle mismatch: {} (verdict={}, oracle={})",
                r.csv_row(),
                r.verdict,
                r.oracle
            );
        }
        lines.push(format!("{}:{} comparisons", space.params.kind.code(), records.len()));
        total += records.len();
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 4 (decide_hb = verify_by_orbits at 4 desk instances): PASS \
         [{total} comparisons; {}; {elapsed:?}]",
        lines.join(", ")
    );
}

/// Criterion 5: the exact factorization at (Sp, 3, 2, I = {0}, S = C_7)
/// with the stated stabilizer, and no exact factorization anywhere at
/// (Sp, 2, 4).
#[test]
fn criterion_5_exact_factorizations() {
    // (Sp, 3, 2): H = q^m : C_7 is exact against Omega_6^-(2)
    let space =
        PolarSpace::new(SpaceParams::new(Kind::Symplectic, 3, 2).unwrap()).unwrap();
    let t = ambient_t(&space.params);
    let c7 = t.triple(1, 7, 3).unwrap();
    let set = space.params.index_set([0]).unwrap();
    let report = exactness_check(&space, &set, &c7).unwrap();
    assert!(report.transitive);
    assert_eq!(report.stabilizer_order, 2);
    assert_eq!(report.stabilizer_omega_count, 0, "the involution has Dickson invariant 1");
    assert!(report.exact);
    assert_eq!(report.h_order, 56);
    assert_eq!(report.omega_minus_order, omega_minus_order(3, 2));
    assert_eq!(report.sp_order, sp_order(3, 2));
    assert_eq!(report.h_order * report.omega_minus_order, report.sp_order);

    // the nontrivial stabilizer element is a unipotent reflection
    let radical = space.params.module_set(&set.indices);
    let base = space.base_point();
    let mut dickson_ones = 0;
    for h in radical {
        if h.is_zero() {
            continue;
        }
        let u = space.unipotent(h).unwrap();
        if space.apply(&u, &base) == base {
            assert_eq!(space.dickson_invariant(&u).unwrap(), 1);
            dickson_ones += 1;
        }
    }
    assert_eq!(dickson_ones, 1);

    // (Sp, 2, 4): no (I, S) is exact, confirming the odd-m necessity
    let space =
        PolarSpace::new(SpaceParams::new(Kind::Symplectic, 2, 4).unwrap()).unwrap();
    let t = ambient_t(&space.params);
    let mut swept = 0;
    for set in space.params.all_index_sets() {
        for s in t.enumerate_subgroups(SubgroupFilter::All, None).unwrap() {
            let report = exactness_check(&space, &set, &s).unwrap();
            assert!(!report.exact, "unexpected exact factorization: I={set} S={s:?}");
            swept += 1;
        }
    }
    println!(
        "criterion 5 (exact factorization at (Sp,3,2); none at (Sp,2,4)): PASS \
         [56 * {} = {}; {swept} (I, S) pairs rejected at m = 2]",
        omega_minus_order(3, 2),
        sp_order(3, 2)
    );
}

/// Criterion 6: the adjoint trace identity for 1000 random permutation
/// polynomials per field at r^m <= 2^10, exhaustively over (x, y); the
/// vanishing identities and the kernel-count formula exhaustively at the
/// desk instances.
#[test]
fn criterion_6_adjoint_and_module_identities() {
    let start = Instant::now();
    let contexts = [
        (1u32, 3u32, 2u64),
        (1, 4, 2),
        (1, 5, 2),
        (2, 2, 2),
        (2, 3, 2),
        (1, 2, 8),
        (2, 2, 3),
        (1, 3, 4),
        (2, 5, 2),
    ];
    let mut pair_checks = 0u64;
    for (s, m, q) in contexts {
        let ctx = LinCtx::new(s, m, q).unwrap();
        let k = ctx.field();
        let nn = k.unit_order();
        let e = s as i64 - 1;
        // trace table indexed by discrete log
        let trl: Vec<u64> = (0..nn).map(|u| ctx.trace_to_r(k.omega_pow(u))).collect();
        let cc: Vec<u64> = (0..nn)
            .map(|v| k.dlog(ctx.q_frob(k.omega_pow(v), e)).unwrap())
            .collect();
        for trial in 0..1000u64 {
            let h = ctx.random_permutation(trial.wrapping_mul(2654435761).wrapping_add(s as u64));
            let adj = ctx.adjoint(&h).unwrap();
            // zero row and column are trivially equal (h(0) = 0)
            assert_eq!(ctx.eval(&h, 0), 0);
            assert_eq!(ctx.eval(&adj, 0), 0);
            let ca: Vec<u64> =
                (0..nn).map(|u| k.dlog(ctx.eval(&h, k.omega_pow(u))).unwrap()).collect();
            let cb: Vec<u64> = (0..nn)
                .map(|v| k.dlog(ctx.q_frob(ctx.eval(&adj, k.omega_pow(v)), e)).unwrap())
                .collect();
            for u in 0..nn {
                let cau = ca[u as usize];
                for v in 0..nn {
                    let lhs = trl[((cau + cb[v as usize]) % nn) as usize];
                    let rhs = trl[((u + cc[v as usize]) % nn) as usize];
                    assert_eq!(lhs, rhs, "(s,m,q)=({s},{m},{q}) trial={trial}");
                }
            }
            pair_checks += (nn * nn) as u64;
        }
    }

    // vanishing identities and kernel counts at the desk instances
    let mut identity_checks = 0u64;
    for space in desk_instances() {
        let ctx = space.params.ctx();
        let k = ctx.field();
        for set in space.params.all_index_sets() {
            if set.is_empty() || set.contains(0) {
                continue;
            }
            let d = space.params.d_invariant(&set);
            let polys = ctx.module_set(&set.indices);
            for h in &polys {
                for x in k.elements() {
                    // Tr_{r^m/q^d}(h(x) x^{q^{s-1}}) = 0
                    let val = ctx.trace_to_qd(
                        k.mul(ctx.eval(h, x), ctx.q_frob(x, ctx.s as i64 - 1)),
                        d,
                    );
                    assert_eq!(val, 0);
                    identity_checks += 1;
                    if space.kind() == Kind::Symplectic {
                        // Tr_{q^m/q^d}(x (h(sqrt(x)))^2) = 0
                        let sq = ctx.eval(h, k.frobenius(x, k.degree() - 1));
                        let val = ctx.trace_to_qd(k.mul(x, k.mul(sq, sq)), d);
                        assert_eq!(val, 0);
                        identity_checks += 1;
                    }
                }
            }
            // closed kernel count = exhaustive count for every nonzero x
            for x in k.units() {
                let formula = ctx.kernel_count(&set.indices, x).unwrap();
                let brute = polys.iter().filter(|h| ctx.eval(h, x) == 0).count() as u64;
                assert_eq!(formula, brute);
                identity_checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 6 (adjoint trace identity, vanishing identities, kernel counts): PASS \
         [{pair_checks} trace pairs, {identity_checks} module checks, {elapsed:?}]"
    );
}

/// Criterion 7: the characters chi_i are pairwise distinct functions, and
/// each M(i) is generated as a torus module by any single nonzero element.
#[test]
fn criterion_7_characters_and_singer_minimality() {
    let mut checks = 0u64;
    for space in desk_instances() {
        let ctx = space.params.ctx();
        let k = ctx.field();
        let indices: Vec<u32> = (space.params.min_index()..=ctx.max_index()).collect();
        // pairwise distinct characters
        for (ai, &i) in indices.iter().enumerate() {
            for &j in &indices[ai + 1..] {
                let differ = k
                    .units()
                    .any(|x| ctx.character(i, x).unwrap() != ctx.character(j, x).unwrap());
                assert!(differ, "chi_{i} = chi_{j} at {:?}", space.kind());
                checks += 1;
            }
        }
        // every nonzero element of M(i) generates it over the full torus
        let fq = k.subfield_elements(space.params.f);
        for &i in &indices {
            let size = ctx.module_size(i);
            for a0 in ctx.module_coefficients(i) {
                if a0 == 0 {
                    continue;
                }
                // orbit of the free coefficient under the torus action
                let orbit: Vec<u64> = {
                    let step = torus_coefficient_step(ctx, i);
                    let mut out = vec![a0];
                    let mut cur = k.mul(a0, step);
                    while cur != a0 {
                        out.push(cur);
                        cur = k.mul(cur, step);
                    }
                    out
                };
                // F_q-span closure
                let mut span = std::collections::HashSet::new();
                span.insert(0u64);
                let mut frontier = vec![0u64];
                while let Some(v) = frontier.pop() {
                    for &o in &orbit {
                        for &c in &fq {
                            let next = k.add(v, k.mul(c, o));
                            if span.insert(next) {
                                frontier.push(next);
                            }
                        }
                    }
                }
                assert_eq!(span.len() as u64, size, "M({i}) at {:?} from {a0}", space.kind());
                checks += 1;
            }
        }
    }
    println!("criterion 7 (character separation, Singer minimality): PASS [{checks} checks]");
}

/// The multiplicative step of the torus generator on M(i)'s free
/// coefficient: omega^{E_i}.
fn torus_coefficient_step(ctx: &LinCtx, i: u32) -> u64 {
    let q = ctx.q;
    let exp = if i == 0 {
        arith::pow_u64(q, ctx.s - 1) + 1
    } else if Some(i) == ctx.half_index() {
        arith::pow_u64(q, ctx.s - 1) * (1 + arith::pow_u64(q, ctx.s * ctx.m / 2))
    } else {
        arith::pow_u64(q, ctx.s * i) + arith::pow_u64(q, ctx.s - 1)
    };
    ctx.field().omega_pow(exp % (ctx.rm() - 1))
}

/// Criterion 8: the lifting-the-exponent lemma and the gcd-of-powers
/// lemma on 10^4 randomized cases each.
#[test]
fn criterion_8_number_theoretic_lemmas() {
    let mut state = 0x5eed_cafe_f00du64;
    // lifting the exponent: (n^l - 1)_r = l_r (n - 1)_r
    let mut lte_cases = 0u32;
    while lte_cases < 10_000 {
        let r_choices = [2u64, 3, 5, 7, 11, 13];
        let r = r_choices[(splitmix(&mut state) % 6) as usize];
        let u = splitmix(&mut state) % (1_000_000 / r) + 1;
        let n = if r == 2 { 4 * u + 1 } else { r * u + 1 };
        if n > 1_000_000 || n < 2 {
            continue;
        }
        let l = splitmix(&mut state) % 1_000_000 + 1;
        let expected = val(l, r) + val(n - 1, r);
        let modulus = r.pow(expected + 2);
        let t = (arith::mod_pow(n % modulus, l, modulus) + modulus - 1) % modulus;
        let got = if t == 0 { expected + 2 } else { val(t, r) };
        assert_eq!(got, expected, "LTE fails at n={n} l={l} r={r}");
        lte_cases += 1;
    }
    // gcd(a^{n_i} - 1) = a^{gcd(n_i)} - 1, exact in u128
    let mut gcd_cases = 0u32;
    while gcd_cases < 10_000 {
        let a = splitmix(&mut state) % 999 + 2;
        let count = splitmix(&mut state) % 5 + 1;
        let max_n = (127f64 / (a as f64).log2()).floor() as u64;
        let ns: Vec<u64> =
            (0..count).map(|_| splitmix(&mut state) % max_n.min(24).max(1) + 1).collect();
        let mut g128: u128 = 0;
        let mut gn = 0u64;
        for &n in &ns {
            let v = arith::pow_u128(a as u128, n as u32) - 1;
            g128 = gcd_u128(g128, v);
            gn = gcd(gn, n);
        }
        assert_eq!(g128, arith::pow_u128(a as u128, gn as u32) - 1, "a={a} ns={ns:?}");
        gcd_cases += 1;
    }
    println!(
        "criterion 8 (lifting-the-exponent and gcd-of-powers lemmas): PASS \
         [{lte_cases} + {gcd_cases} randomized cases]"
    );
}

fn val(mut n: u64, r: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % r == 0 {
        n /= r;
        v += 1;
    }
    v
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
