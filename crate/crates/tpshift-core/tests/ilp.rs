use proptest::prelude::*;
use tpshift_core::ilp::{solve_min, solve_min_limited, IlpInstance, LinExpr, Relation};
use tpshift_core::Error;

/// Optimum and lexicographically smallest optimal point by full enumeration.
fn exhaustive(inst: &IlpInstance) -> Option<(i64, Vec<i64>)> {
    let n = inst.variables.len();
    let mut x: Vec<i64> = inst.variables.iter().map(|v| v.lo).collect();
    let mut best: Option<(i64, Vec<i64>)> = None;
    loop {
        if inst.is_feasible(&x) {
            let val = inst.evaluate(&x, &inst.objective);
            if best.as_ref().is_none_or(|(b, _)| val < *b) {
                best = Some((val, x.clone()));
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if x[i] < inst.variables[i].hi {
                x[i] += 1;
                break;
            }
            x[i] = inst.variables[i].lo;
        }
    }
}

#[test]
fn single_lower_bound() {
    let mut ilp = IlpInstance::new();
    let x = ilp.add_var("x", 0, 10);
    ilp.add_constraint(vec![(x, 1)], Relation::Ge, 3);
    ilp.objective = vec![(x, 1)];
    assert_eq!(solve_min(&ilp).unwrap(), Some((3, vec![3])));
}

#[test]
fn forced_pair() {
    let mut ilp = IlpInstance::new();
    let x = ilp.add_var("x", 0, 5);
    let y = ilp.add_var("y", 0, 5);
    ilp.add_constraint(vec![(x, 1), (y, 1)], Relation::Ge, 7);
    ilp.add_constraint(vec![(x, 1)], Relation::Le, 2);
    ilp.objective = vec![(x, 1), (y, 1)];
    assert_eq!(solve_min(&ilp).unwrap(), Some((7, vec![2, 5])));
}

#[test]
fn ties_go_to_the_lexicographically_smallest_point() {
    let mut ilp = IlpInstance::new();
    let x = ilp.add_var("x", 0, 5);
    let y = ilp.add_var("y", 0, 5);
    ilp.add_constraint(vec![(x, 1), (y, 1)], Relation::Eq, 4);
    ilp.objective = vec![(x, 1), (y, 1)];
    assert_eq!(solve_min(&ilp).unwrap(), Some((4, vec![0, 4])));
}

#[test]
fn infeasible_is_none() {
    let mut ilp = IlpInstance::new();
    let x = ilp.add_var("x", 0, 3);
    ilp.add_constraint(vec![(x, 1)], Relation::Ge, 4);
    assert_eq!(solve_min(&ilp).unwrap(), None);
    let mut empty_domain = IlpInstance::new();
    empty_domain.add_var("y", 2, 1);
    assert_eq!(solve_min(&empty_domain).unwrap(), None);
}

#[test]
fn node_limit_is_reported() {
    let mut ilp = IlpInstance::new();
    let vars: Vec<usize> = (0..6).map(|i| ilp.add_var(format!("x{i}"), 0, 9)).collect();
    ilp.add_constraint(vars.iter().map(|&v| (v, 2)).collect(), Relation::Eq, 31);
    assert!(matches!(
        solve_min_limited(&ilp, 3),
        Err(Error::ResourceLimit { .. })
    ));
}

#[test]
fn max0_is_exact() {
    for shift in -6..=6 {
        let mut ilp = IlpInstance::new();
        let x = ilp.add_var("x", 0, 4);
        ilp.add_constraint(vec![(x, 1)], Relation::Eq, 2);
        let z = ilp.max0("z", &LinExpr::var(x).offset(shift));
        // maximize z to show it cannot exceed max(0, x + shift)
        let (lo, hi) = ilp.bounds(&z);
        let t = ilp.add_var("t", lo.min(0), hi.max(0));
        ilp.relate(&LinExpr::var(t), Relation::Eq, &z);
        ilp.objective = vec![(t, -1)];
        let (value, _) = solve_min(&ilp).unwrap().unwrap();
        assert_eq!(-value, (2 + shift).max(0), "shift {shift}");
        ilp.objective = vec![(t, 1)];
        let (value, _) = solve_min(&ilp).unwrap().unwrap();
        assert_eq!(value, (2 + shift).max(0), "shift {shift}");
    }
}

fn instance() -> impl Strategy<Value = IlpInstance> {
    (1usize..=5, 0i64..=8).prop_flat_map(|(n, hi)| {
        let bounds = proptest::collection::vec((0i64..=hi, 0i64..=hi), n);
        let row = (
            proptest::collection::vec(-3i64..=3, n),
            0usize..3,
            -10i64..=20,
        );
        let rows = proptest::collection::vec(row, 0..4);
        let objective = proptest::collection::vec(-2i64..=3, n);
        (bounds, rows, objective).prop_map(|(bounds, rows, objective)| {
            let mut ilp = IlpInstance::new();
            for (i, (a, b)) in bounds.into_iter().enumerate() {
                ilp.add_var(format!("x{i}"), a.min(b), a.max(b));
            }
            for (coefs, rel, rhs) in rows {
                let rel = [Relation::Le, Relation::Ge, Relation::Eq][rel];
                ilp.add_constraint(coefs.into_iter().enumerate().collect(), rel, rhs);
            }
            ilp.objective = objective.into_iter().enumerate().collect();
            ilp
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn agrees_with_enumeration(ilp in instance()) {
        let fast = solve_min(&ilp).unwrap();
        prop_assert_eq!(&fast, &exhaustive(&ilp));
        if let Some((_, x)) = fast {
            prop_assert!(ilp.is_feasible(&x));
        }
    }
}
