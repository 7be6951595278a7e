use proptest::prelude::*;

use entrench_core::audit::random_base;
use entrench_core::entrenchment::closure_table;
use entrench_core::formula::{parse, truth_mask};
use entrench_core::inference::{extensions, sceptical_extension};
use entrench_core::{closure_meet, EntrenchmentOracle, Formula, TruthMask, Vocabulary};

fn vocab3() -> Vocabulary {
    Vocabulary::new(&["p", "q", "r"]).unwrap()
}

fn formula(vars: usize) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::True), Just(Formula::False), (0..vars).prop_map(Formula::Var)];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

fn mask3() -> impl Strategy<Value = TruthMask> {
    (0u32..256).prop_map(TruthMask)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn render_then_parse_is_identity(f in formula(3)) {
        let v = vocab3();
        let text = f.render(&v);
        prop_assert_eq!(parse(&text, &v).unwrap(), f, "{}", text);
    }

    #[test]
    fn truth_mask_matches_evaluation(f in formula(3), g in formula(3)) {
        let v = vocab3();
        let alg = v.algebra();
        let (a, b) = (truth_mask(&f, &v), truth_mask(&g, &v));
        for val in 0..8u32 {
            prop_assert_eq!(a.0 >> val & 1 == 1, f.eval(val));
        }
        prop_assert_eq!(truth_mask(&Formula::not(f.clone()), &v), alg.not(a));
        prop_assert_eq!(truth_mask(&Formula::and(f.clone(), g.clone()), &v), a.meet(b));
        prop_assert_eq!(truth_mask(&Formula::or(f.clone(), g.clone()), &v), a.join(b));
        prop_assert_eq!(truth_mask(&Formula::implies(f, g), &v), alg.arrow(a, b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_deflationary_monotone_and_idempotent(seed in 0u64..10_000, k in 1usize..8, a in mask3(), b in mask3()) {
        let base = random_base(seed, &vocab3(), k);
        let (ca, cab) = (closure_meet(a, &base), closure_meet(a.meet(b), &base));
        prop_assert!(ca.entails(a));
        prop_assert!(cab.entails(ca));
        prop_assert_eq!(closure_meet(ca, &base), ca);
    }

    #[test]
    fn extensions_entail_antecedent(seed in 0u64..10_000, k in 1usize..8, a in mask3()) {
        let o = EntrenchmentOracle::closure(random_base(seed, &vocab3(), k));
        let ext = extensions(a, &o).unwrap();
        prop_assert!(ext.iter().all(|e| e.entails(a)));
        let sceptical = sceptical_extension(a, &o).unwrap();
        prop_assert!(sceptical.entails(a) || ext.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closure_agrees_with_saturated_table(seed in 0u64..10_000, k in 1usize..8) {
        let base = random_base(seed, &vocab3(), k);
        let table = closure_table(&base).unwrap();
        let o = EntrenchmentOracle::closure(base);
        for a in 0..256u32 {
            for b in 0..256u32 {
                prop_assert_eq!(o.leq(TruthMask(a), TruthMask(b)), table.leq(TruthMask(a), TruthMask(b)));
            }
        }
    }
}
