//! System P rules, Rational Monotonicity and its filter-level counterpart,
//! and the batteries for connected and weakly disjunctive orderings.

use crate::bridge::{connected_infer, InferenceService};
use crate::entrenchment::{structure_check, EntrenchmentOracle, StructuralProperty};
use crate::error::{Error, Result};
use crate::formula::TruthMask;
use crate::verdict::{scan, Mode, Verdict};

use super::{connectivity_mode, intersects, subset, FilterCache, AUDIT_MAX_VARS, WIDE_SCAN_MAX_VARS};

pub const SYSTEM_P_RULES: [&str; 8] = [
    "supraclassicality",
    "left_logical_equivalence",
    "right_weakening",
    "and",
    "cut",
    "cautious_monotonicity",
    "or",
    "weak_transitivity",
];

/// One verdict per rule, in [`SYSTEM_P_RULES`] order.
pub fn check_system_p(s: &dyn InferenceService, mode: Mode) -> Result<Vec<Verdict>> {
    let v = s.vocab();
    let q = |a, b| s.query(a, b);
    let abc = ["alpha", "beta", "gamma"];
    Ok(vec![
        scan("supraclassicality", ["alpha", "beta"], v, mode, AUDIT_MAX_VARS, |[a, b]| a.entails(b) && !q(a, b))?,
        // Queries are keyed by mask, so equivalent antecedents are identical
        // inputs; the scan still exercises the service on them.
        scan("left_logical_equivalence", abc, v, mode, AUDIT_MAX_VARS, |[a, b, c]| a == b && q(a, c) != q(b, c))?,
        scan("right_weakening", abc, v, mode, AUDIT_MAX_VARS, |[a, b, c]| q(a, b) && b.entails(c) && !q(a, c))?,
        scan("and", abc, v, mode, AUDIT_MAX_VARS, |[a, b, c]| q(a, b) && q(a, c) && !q(a, b.meet(c)))?,
        scan("cut", abc, v, mode, AUDIT_MAX_VARS, |[a, b, c]| q(a, b) && q(a.meet(b), c) && !q(a, c))?,
        scan("cautious_monotonicity", abc, v, mode, AUDIT_MAX_VARS, |[a, b, c]| {
            q(a, b) && q(a, c) && !q(a.meet(b), c)
        })?,
        scan("or", abc, v, mode, AUDIT_MAX_VARS, |[a, b, c]| q(a, c) && q(b, c) && !q(a.join(b), c))?,
        scan("weak_transitivity", abc, v, mode, AUDIT_MAX_VARS, |[a, b, c]| {
            q(a.join(b), a) && q(b.join(c), b) && !q(a.join(c), a)
        })?,
    ])
}

/// Rational Monotonicity on `s`, the filter-level condition on `o`, their
/// per-instance agreement, and the corrected maximal-base bridge lemma.
pub fn check_rational(s: &dyn InferenceService, o: &EntrenchmentOracle, mode: Mode) -> Result<Vec<Verdict>> {
    let v = s.vocab();
    let alg = v.algebra();
    let cache = FilterCache::new(o)?;
    let q = |a, b| s.query(a, b);
    let rm_violated = |[a, b, c]: [TruthMask; 3]| !q(a, alg.not(b)) && q(a, c) && !q(a.meet(b), c);
    let filter_violated = |[a, b, c]: [TruthMask; 3]| {
        let ab = a.meet(b);
        intersects(cache.maximal(a), cache.maximal(ab))
            && cache.maximal_join(a).entails(alg.arrow(a, c))
            && !cache.maximal_join(ab).entails(alg.arrow(ab, c))
    };
    let abc = ["alpha", "beta", "gamma"];
    Ok(vec![
        scan("rational_monotonicity", abc, v, mode, AUDIT_MAX_VARS, rm_violated)?,
        scan("rm_filter_condition", abc, v, mode, AUDIT_MAX_VARS, filter_violated)?,
        scan("rm_biconditional", abc, v, mode, AUDIT_MAX_VARS, |t| rm_violated(t) != filter_violated(t))?,
        scan("lemma1_6", ["alpha", "beta"], v, mode, WIDE_SCAN_MAX_VARS, |[a, b]| {
            !q(a, alg.not(b)) != intersects(cache.maximal(a), cache.maximal(a.meet(b)))
        })?,
    ])
}

/// Requires a connected ordering; refuses with [`Error::ConnectivityRequired`].
pub fn check_connected_laws(o: &EntrenchmentOracle, mode: Mode) -> Result<Vec<Verdict>> {
    if !structure_check(o, StructuralProperty::Connectivity, connectivity_mode(o, mode))?.pass {
        return Err(Error::ConnectivityRequired);
    }
    let v = o.vocab();
    let cache = FilterCache::new(o)?;
    let mut out = vec![
        scan("fmax_singleton_or_empty", ["alpha"], v, mode, WIDE_SCAN_MAX_VARS, |[a]| cache.maximal(a).len() > 1)?,
        scan("fmax_connected_inclusion", ["alpha", "beta"], v, mode, WIDE_SCAN_MAX_VARS, |[a, b]| {
            let ab = cache.maximal(a.meet(b));
            intersects(cache.maximal(a), ab) && !subset(ab, cache.maximal(a))
        })?,
        scan("connected_inference", ["alpha", "gamma"], v, mode, WIDE_SCAN_MAX_VARS, |[a, c]| {
            let engine = cache.infers(a, c);
            connected_infer(o, a, c).expect("width checked by the scan") != engine
        })?,
    ];
    let alg = v.algebra();
    let infers = |a: TruthMask, c: TruthMask| cache.infers(a, c);
    let rm = scan("rational_monotonicity", ["alpha", "beta", "gamma"], v, mode, AUDIT_MAX_VARS, |[a, b, c]| {
        !infers(a, alg.not(b)) && infers(a, c) && !infers(a.meet(b), c)
    })?;
    out.push(rm);
    Ok(out)
}

/// Requires weak disjunction; refuses with [`Error::WeakDisjunctionRequired`].
pub fn check_wd_laws(o: &EntrenchmentOracle, mode: Mode) -> Result<Vec<Verdict>> {
    if !structure_check(o, StructuralProperty::WeakDisjunction, mode)?.pass {
        return Err(Error::WeakDisjunctionRequired);
    }
    let v = o.vocab();
    let alg = v.algebra();
    let cache = FilterCache::new(o)?;
    Ok(vec![
        scan("wd_dichotomy", ["alpha", "beta"], v, mode, WIDE_SCAN_MAX_VARS, |[a, b]| {
            let (yes, no) = (alg.arrow(a, b), alg.arrow(a, alg.not(b)));
            cache.maximal(a).iter().any(|f| !f.entails(yes) && !f.entails(no))
        })?,
        scan("wd_inference_biconditional", ["alpha", "beta"], v, mode, WIDE_SCAN_MAX_VARS, |[a, b]| {
            let below = o.leq(alg.arrow(a, alg.not(b)), alg.not(a));
            below != cache.infers(a, b)
        })?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::{random_base, random_connected_table, Target};
    use crate::fixtures;
    use crate::formula::Vocabulary;

    #[test]
    fn system_p_holds_on_random_bases() {
        let v = Vocabulary::new(&["p", "q"]).unwrap();
        for seed in 0..5 {
            let t = Target::from_base(random_base(seed, &v, 3)).unwrap();
            for verdict in check_system_p(&*t.service, Mode::Exhaustive).unwrap() {
                assert!(verdict.pass, "{} failed for seed {seed}: {:?}", verdict.law, verdict.counterexamples);
                assert_eq!(verdict.violations, 0);
            }
        }
    }

    #[test]
    fn flipped_query_bit_breaks_a_rule() {
        let v = Vocabulary::new(&["p", "q"]).unwrap();
        let t = Target::from_base(random_base(3, &v, 2)).unwrap();
        let mut table = crate::bridge::tabulate(&*t.service).unwrap();
        // `true |~ true` is required by Supraclassicality.
        table.relation_mut().toggle(0xF, 0xF);
        let verdicts = check_system_p(&table, Mode::Exhaustive).unwrap();
        assert!(verdicts.iter().any(|v| !v.pass && !v.counterexamples.is_empty()));
    }

    #[test]
    fn rational_checks_agree_on_figure1() {
        let t = Target::from_base(fixtures::figure1_base()).unwrap();
        let out = check_rational(&*t.service, &t.oracle, Mode::Sampled { seed: 1, samples: 20_000 }).unwrap();
        assert_eq!(out[2].law, "rm_biconditional");
        assert!(out[2].pass, "{:?}", out[2].counterexamples);
        assert!(out[3].pass, "{:?}", out[3].counterexamples);
    }

    #[test]
    fn connected_laws_on_chain_and_random_tables() {
        let o = EntrenchmentOracle::closure(fixtures::chain1_base());
        for verdict in check_connected_laws(&o, Mode::Exhaustive).unwrap() {
            assert!(verdict.pass, "{}", verdict.law);
        }
        let v = Vocabulary::new(&["p", "q"]).unwrap();
        for seed in 0..5 {
            let o = random_connected_table(seed, &v).unwrap();
            for verdict in check_connected_laws(&o, Mode::Exhaustive).unwrap() {
                assert!(verdict.pass, "{} seed {seed}: {:?}", verdict.law, verdict.counterexamples);
            }
        }
    }

    #[test]
    fn guards_refuse() {
        let fig1 = EntrenchmentOracle::closure(fixtures::figure1_base());
        assert!(matches!(check_connected_laws(&fig1, Mode::Exhaustive), Err(Error::ConnectivityRequired)));
        let ex5 = fixtures::example5_oracle();
        assert!(matches!(check_wd_laws(&ex5, Mode::Exhaustive), Err(Error::WeakDisjunctionRequired)));
    }

    #[test]
    fn wd_laws_on_translated_engine() {
        let v = Vocabulary::new(&["p", "q"]).unwrap();
        for seed in 0..5 {
            let t = Target::from_base(random_base(seed, &v, 2)).unwrap();
            let o2 = crate::bridge::p_translate(t.service.clone());
            for verdict in check_wd_laws(&o2, Mode::Exhaustive).unwrap() {
                assert!(verdict.pass, "{} seed {seed}: {:?}", verdict.law, verdict.counterexamples);
            }
        }
    }
}
