//! Cross-cutting invariants tying the decision procedures, the existence
//! corollary, and the orbit harness together at the desk instances.

use foulser::factorize::{
    ambient_t, decide_existence_for_g, decide_hb, exactness_check, necessary_d_condition,
    s_consistent_with, stabilizer_structure, verify_by_orbits, OvergroupSpec,
};
use foulser::gammal1::SubgroupFilter;
use foulser::linpoly::{Kind, SpaceParams};
use foulser::polarspace::PolarSpace;

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

#[test]
fn torus_normalizer_lies_in_omega_at_oplus_4_2() {
    // the whole of T = <l_omega>:<phi> has Dickson invariant 0 here, so
    // G cap T = T for every overgroup and the orthogonal S-filter is
    // genuinely vacuous at this instance
    let space =
        PolarSpace::new(SpaceParams::new(Kind::OrthogonalPlus, 4, 2).unwrap()).unwrap();
    assert_eq!(space.dickson_invariant(&space.singer()).unwrap(), 0);
    assert_eq!(space.dickson_invariant(&space.frobenius_map(1)).unwrap(), 0);
}

#[test]
fn necessary_condition_is_sound() {
    // whenever the oracle says G = HB, the d(I) necessary condition holds
    for space in spaces() {
        let t = ambient_t(&space.params);
        for set in space.params.all_index_sets() {
            for s in t.enumerate_subgroups(SubgroupFilter::All, None).unwrap() {
                if verify_by_orbits(&space, &set, &s).unwrap() {
                    let (ok, reason) = necessary_d_condition(&space.params, &set);
                    assert!(ok, "{reason} (I={set}, S={s:?})");
                }
            }
        }
    }
}

#[test]
fn existence_corollary_is_the_or_of_decisions() {
    for space in spaces() {
        let params = &space.params;
        let t = ambient_t(params);
        let subgroups = t.enumerate_subgroups(SubgroupFilter::All, None).unwrap();
        let index_sets = params.all_index_sets();
        for spec in OvergroupSpec::enumerate(params) {
            let existence = decide_existence_for_g(params, &spec).unwrap();
            let mut any = false;
            'outer: for set in &index_sets {
                for s in &subgroups {
                    if !s_consistent_with(params, &spec, s).unwrap() {
                        continue;
                    }
                    if decide_hb(params, set, s, &spec).unwrap().verdict {
                        any = true;
                        break 'outer;
                    }
                }
            }
            assert_eq!(
                existence,
                any,
                "existence mismatch for {} at {:?} m={} q={}",
                spec.describe(),
                params.kind,
                params.m,
                params.q
            );
        }
    }
}

#[test]
fn stabilizer_product_counts_cosets() {
    // |H| / |H cap B| = |Lambda| exactly when the decision is true
    for space in spaces() {
        let params = &space.params;
        let t = ambient_t(params);
        let lambda = space.lambda_points().len() as u64;
        let specs = OvergroupSpec::enumerate(params);
        for set in params.all_index_sets() {
            for s in t.enumerate_subgroups(SubgroupFilter::All, None).unwrap() {
                let Some(spec) = specs
                    .iter()
                    .find(|spec| s_consistent_with(params, spec, &s).unwrap())
                else {
                    continue;
                };
                let decision = decide_hb(params, &set, &s, spec).unwrap();
                let rep = stabilizer_structure(&space, &set, &s, &space.base_point()).unwrap();
                let h_order =
                    params.module_set(&set.indices).len() as u64 * t.group_order(&s);
                assert_eq!(
                    decision.verdict,
                    h_order == rep.order * lambda,
                    "coset count: I={set} S={s:?}"
                );
            }
        }
    }
}

#[test]
fn sp_3_4_beyond_the_standard_instances() {
    // an odd-m, q = 4 instance: the full-GammaSp clause fires, and the
    // exact factorization family continues
    let space = PolarSpace::new(SpaceParams::new(Kind::Symplectic, 3, 4).unwrap()).unwrap();
    assert_eq!(space.lambda_points().len(), 2016);
    let t = ambient_t(&space.params);
    let c63 = t.triple(1, 63, 6).unwrap();
    let set = space.params.index_set([0]).unwrap();
    let report = exactness_check(&space, &set, &c63).unwrap();
    assert!(report.exact);
    assert_eq!(report.h_order, 4032);
    assert_eq!(report.h_order * report.omega_minus_order, report.sp_order);

    let specs = OvergroupSpec::enumerate(&space.params);
    assert_eq!(specs.len(), 2); // Sp and GammaSp
    let records = foulser::verify_sweep(&space, &specs).unwrap();
    assert!(records.iter().all(|r| r.agree), "theorem/oracle mismatch at (Sp, 3, 4)");
    // the q = 4, full-GammaSp clause genuinely fires here
    assert!(records.iter().any(|r| r.branch == foulser::Branch::SpD1Q4 && r.verdict));
}

#[test]
#[ignore = "slow extended sweep; run with --ignored"]
fn su_2_4_full_sweep() {
    let space = PolarSpace::new(SpaceParams::new(Kind::Unitary, 2, 4).unwrap()).unwrap();
    assert_eq!(space.lambda_points().len(), 3264); // 4^3 (4^4 - 1) / 5
    let specs = OvergroupSpec::enumerate(&space.params);
    let records = foulser::verify_sweep(&space, &specs).unwrap();
    assert!(!records.is_empty());
    for r in &records {
        assert!(r.agree, "mismatch at {}", r.csv_row());
    }
}

#[test]
fn exact_factorizations_at_sp32_are_exactly_the_classified_shape() {
    let space = PolarSpace::new(SpaceParams::new(Kind::Symplectic, 3, 2).unwrap()).unwrap();
    let t = ambient_t(&space.params);
    let mut found = Vec::new();
    for set in space.params.all_index_sets() {
        for s in t.enumerate_subgroups(SubgroupFilter::All, None).unwrap() {
            let report = exactness_check(&space, &set, &s).unwrap();
            if report.exact {
                // the classified shape: I = {0} and S regular
                assert_eq!(set.to_vec(), vec![0]);
                assert!(t.is_regular(&s));
                assert_eq!(report.stabilizer_order, 2);
                found.push((set.clone(), s));
            }
        }
    }
    assert!(!found.is_empty(), "the classified exact factorization must appear");
}
