use symdesign::builders::trivial_symmetric;
use symdesign::compose::construct;
use symdesign::perms::{flag_transitive_direct, flag_conditions_report, Permutation};
use symdesign::symplectic::{group_gens, ingredients, on_composed, sminus, translation_gens, D2Labels};

fn report(n: usize, labels: D2Labels, gens: Vec<Permutation>) -> symdesign::perms::FlagReport {
    let input = ingredients(n, labels).unwrap();
    let c = construct(&input).unwrap();
    flag_conditions_report(&on_composed(n, &gens), &input, &c).unwrap()
}

#[test]
fn direct_flag_orbits() {
    assert!(flag_transitive_direct(&group_gens(2).unwrap(), &sminus(2).unwrap()).unwrap());
    assert!(flag_transitive_direct(&group_gens(3).unwrap(), &sminus(3).unwrap()).unwrap());
    assert!(!flag_transitive_direct(&translation_gens(2).unwrap(), &sminus(2).unwrap()).unwrap());
    let s5 = vec![
        Permutation::new(vec![1, 2, 3, 4, 0]).unwrap(),
        Permutation::transposition(5, 0, 1),
    ];
    assert!(flag_transitive_direct(&s5, &trivial_symmetric(5).unwrap()).unwrap());
    let bad = vec![Permutation::transposition(16, 0, 1)];
    assert!(flag_transitive_direct(&bad, &sminus(2).unwrap()).is_err());
}

#[test]
fn four_conditions_match_direct() {
    for n in [2, 3] {
        let r = report(n, D2Labels::Complemented, group_gens(n).unwrap());
        assert!(r.cond1 && r.cond2 && r.cond3 && r.cond4 && r.overall && r.direct, "{r:?}");
        let r = report(n, D2Labels::Complemented, translation_gens(n).unwrap());
        assert!(!r.overall && !r.direct, "{r:?}");
        assert_eq!(r.overall, r.direct);
        let r = report(n, D2Labels::Dual, group_gens(n).unwrap());
        assert_eq!(r.overall, r.direct, "{r:?}");
        assert!(!r.direct);
    }
}
