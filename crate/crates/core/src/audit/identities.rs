//! Identity batteries: the filter lemmas, translation round trips, the
//! completeness pipeline, the empty-extension chain and oracle agreement.

use std::sync::Arc;

use crate::bridge::{gm_translate, n_translate, p_translate, InferenceService, MaxiconsistentInference};
use crate::entrenchment::{
    closure_table, saturate, structure_check, validate_axioms, EntrenchmentOracle, StructuralProperty,
};
use crate::error::Result;
use crate::formula::TruthMask;
use crate::inference::{empty_chain_check, extensions, sceptical_extension};
use crate::verdict::{scan, Mode, Verdict};

use super::{intersects, subset, FilterCache, Target, AUDIT_MAX_VARS, WIDE_SCAN_MAX_VARS};

fn union(a: &[TruthMask], b: &[TruthMask]) -> Vec<TruthMask> {
    let mut u: Vec<TruthMask> = a.iter().chain(b).copied().collect();
    u.sort();
    u.dedup();
    u
}

fn intersection(a: &[TruthMask], b: &[TruthMask]) -> Vec<TruthMask> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

fn difference(a: &[TruthMask], b: &[TruthMask]) -> Vec<TruthMask> {
    a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect()
}

/// Parts 1 to 5, the corrected part 6, the printed part 6 (informational),
/// the definitional cross-check for bases and the shape of extension sets.
pub fn check_lemma1(o: &EntrenchmentOracle, mode: Mode) -> Result<Vec<Verdict>> {
    let v = o.vocab();
    let alg = v.algebra();
    let c = FilterCache::new(o)?;
    let ab = ["alpha", "beta"];
    let cap = AUDIT_MAX_VARS;
    Ok(vec![
        scan("lemma1_1", ab, v, mode, cap, |[a, b]| a.entails(b) && !subset(&c.bases(a), &c.bases(b)))?,
        scan("lemma1_2", ab, v, mode, cap, |[a, b]| c.bases(a.join(b)) != union(&c.bases(a), &c.bases(b)))?,
        scan("lemma1_3", ab, v, mode, cap, |[a, b]| {
            let (ma, mb) = (c.maximal(a), c.maximal(b));
            let expected =
                union(&union(&intersection(ma, mb), &difference(ma, &c.bases(b))), &difference(mb, &c.bases(a)));
            c.maximal(a.join(b)) != expected.as_slice()
        })?,
        scan("lemma1_4", ab, v, mode, cap, |[a, b]| {
            !subset(&c.bases(a.meet(b)), &intersection(&c.bases(a), &c.bases(b)))
        })?,
        scan("lemma1_5", ab, v, mode, cap, |[a, b]| c.infers(a, b) && c.bases(a) != c.bases(a.meet(b)))?,
        scan("lemma1_6", ab, v, mode, cap, |[a, b]| {
            !c.infers(a, alg.not(b)) != intersects(c.maximal(a), c.maximal(a.meet(b)))
        })?,
        printed_form(&c, o, mode, cap)?,
        scan("bases_definition", ["alpha"], v, mode, cap, |[a]| {
            let na = alg.not(a);
            let by_definition: Vec<TruthMask> = o
                .stable_elements()
                .expect("computed by the cache")
                .iter()
                .copied()
                .filter(|&s| {
                    // every classical consequence of `s` is coherent with `a`
                    let free = alg.top().0 & !s.0;
                    let mut sub = free;
                    loop {
                        if o.leq(TruthMask(s.0 | sub), na) {
                            return false;
                        }
                        if sub == 0 {
                            return true;
                        }
                        sub = (sub - 1) & free;
                    }
                })
                .collect();
            by_definition != c.bases(a)
        })?,
        scan("extension_shape", ["alpha"], v, mode, cap, |[a]| {
            let ext = extensions(a, o).expect("computed by the cache");
            let sceptical = sceptical_extension(a, o).expect("computed by the cache");
            ext.iter().any(|e| !e.entails(a))
                || alg
                    .elements()
                    .expect("width checked by the scan")
                    .any(|x| ext.iter().all(|e| e.entails(x)) != sceptical.entails(x))
        })?,
    ])
}

fn printed_form(c: &FilterCache<'_>, o: &EntrenchmentOracle, mode: Mode, cap: usize) -> Result<Verdict> {
    Ok(scan("lemma1_6_printed", ["alpha", "beta"], o.vocab(), mode, cap, |[a, b]| {
        c.infers(a, b) != intersects(c.maximal(a), c.maximal(a.meet(b)))
    })?
    .informational())
}

/// The printed reading of part 6 on its own, up to three variables.
pub fn lemma1_printed(o: &EntrenchmentOracle, mode: Mode) -> Result<Verdict> {
    printed_form(&FilterCache::new(o)?, o, mode, WIDE_SCAN_MAX_VARS)
}

/// `P(N(<=)) = <=` on the ordering and `N(P(|~)) = |~` on the inference.
pub fn check_roundtrips(target: &Target, mode: Mode) -> Result<Vec<Verdict>> {
    let o = &target.oracle;
    let s = &target.service;
    let v = o.vocab();
    let back = p_translate(Arc::new(n_translate(o.clone())));
    back.prepare();
    let again = n_translate(Arc::new(p_translate(s.clone())));
    let ab = ["alpha", "beta"];
    Ok(vec![
        scan("p_of_n_roundtrip", ab, v, mode, AUDIT_MAX_VARS, |[a, b]| back.leq(a, b) != o.leq(a, b))?,
        scan("n_of_p_roundtrip", ab, v, mode, AUDIT_MAX_VARS, |[a, b]| again.query(a, b) != s.query(a, b))?,
    ])
}

/// The ordering `o' = P(s)`: axioms, weak disjunction, recovery of `s` by
/// the engine over `o'`, the weak-disjunction laws, and splitting whenever
/// `s` is rational. Agreement of the two reverse translations is reported
/// for the record.
pub fn check_theorem6(s: Arc<dyn InferenceService>, mode: Mode) -> Result<Vec<Verdict>> {
    let v = s.vocab().clone();
    let alg = v.algebra();
    let derived = Arc::new(p_translate(s.clone()));
    derived.prepare();
    let o = &*derived;
    let mut out: Vec<Verdict> = validate_axioms(o, mode)?
        .into_iter()
        .map(|x| {
            let law = format!("theorem6_{}", x.law);
            x.renamed(law)
        })
        .collect();
    let wd = structure_check(o, StructuralProperty::WeakDisjunction, mode)?;
    let wd_pass = wd.pass;
    out.push(wd.renamed("theorem6_weak_disjunction"));

    let engine = MaxiconsistentInference::new(derived.clone())?;
    out.push(scan("theorem6_inference_recovered", ["alpha", "beta"], &v, mode, AUDIT_MAX_VARS, |[a, b]| {
        engine.query(a, b) != s.query(a, b)
    })?);
    if wd_pass {
        out.extend(super::check_wd_laws(o, mode)?);
    }

    let rm = scan("rational_monotonicity", ["alpha", "beta", "gamma"], &v, mode, AUDIT_MAX_VARS, |[a, b, c]| {
        !s.query(a, alg.not(b)) && s.query(a, c) && !s.query(a.meet(b), c)
    })?;
    let mut split = Verdict::new("rational_implies_splitting", mode);
    if rm.pass {
        split.absorb(&structure_check(o, StructuralProperty::Splitting, mode)?, Some("source is rational"));
    }
    out.push(split);

    let gm = gm_translate(s.clone());
    gm.prepare();
    out.push(
        scan("gm_p_agreement", ["alpha", "beta"], &v, mode, AUDIT_MAX_VARS, |[a, b]| gm.leq(a, b) != o.leq(a, b))?
            .informational(),
    );
    Ok(out)
}

/// The empty-extension chain for every antecedent.
pub fn check_empty_chain(o: &EntrenchmentOracle, mode: Mode) -> Result<Verdict> {
    FilterCache::new(o)?;
    scan("empty_chain", ["alpha"], o.vocab(), mode, WIDE_SCAN_MAX_VARS, |[a]| {
        !empty_chain_check(a, o).expect("stable elements computed").pass
    })
}

/// The target ordering against an independently saturated table: the
/// closure of the generators when there are any, otherwise the saturation
/// of the target's own relation (equal iff it already is a partial
/// entrenchment).
pub fn check_oracle_equivalence(target: &Target, mode: Mode) -> Result<Verdict> {
    let o = &*target.oracle;
    let reference = match &target.base {
        Some(base) => closure_table(base)?,
        None => saturate(o.vocab().clone(), o.materialize()?.clone())?,
    };
    o.prepare();
    scan("oracle_equivalence", ["alpha", "beta"], o.vocab(), mode, WIDE_SCAN_MAX_VARS, |[a, b]| {
        o.leq(a, b) != reference.leq(a, b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::random_base;
    use crate::fixtures;
    use crate::formula::Vocabulary;

    #[test]
    fn printed_lemma_is_refuted_on_figure1() {
        let o = EntrenchmentOracle::closure(fixtures::figure1_base());
        let printed = lemma1_printed(&o, Mode::Exhaustive).unwrap();
        assert!(!printed.pass);
        assert!(printed.informational);
        assert!(printed.violations > 0);
        // the recorded witness: true does not infer b, yet the maximal bases
        // of true and of b overlap
        let c = FilterCache::new(&o).unwrap();
        assert!(!c.infers(TruthMask(0xFF), TruthMask(0xCC)));
        assert!(intersects(c.maximal(TruthMask(0xFF)), c.maximal(TruthMask(0xCC))));
    }

    #[test]
    fn lemma1_battery_on_random_bases() {
        let v = Vocabulary::new(&["p", "q"]).unwrap();
        for seed in 0..5 {
            let o = EntrenchmentOracle::closure(random_base(seed, &v, 1 + seed as usize % 4));
            for verdict in check_lemma1(&o, Mode::Exhaustive).unwrap() {
                if verdict.informational {
                    continue;
                }
                assert!(verdict.pass, "{} seed {seed}: {:?}", verdict.law, verdict.counterexamples);
            }
        }
    }

    #[test]
    fn roundtrips_and_theorem6_on_random_bases() {
        let v = Vocabulary::new(&["p", "q"]).unwrap();
        for seed in 0..5 {
            let t = Target::from_base(random_base(seed, &v, 2)).unwrap();
            for verdict in check_roundtrips(&t, Mode::Exhaustive).unwrap() {
                assert!(verdict.pass, "{} seed {seed}", verdict.law);
            }
            for verdict in check_theorem6(t.service.clone(), Mode::Exhaustive).unwrap() {
                assert!(
                    verdict.pass || verdict.informational,
                    "{} seed {seed}: {:?}",
                    verdict.law,
                    verdict.counterexamples
                );
            }
        }
    }

    #[test]
    fn empty_chain_and_oracle_equivalence_on_figure1() {
        let t = Target::from_base(fixtures::figure1_base()).unwrap();
        let chain = check_empty_chain(&t.oracle, Mode::Exhaustive).unwrap();
        assert!(chain.pass);
        assert_eq!(chain.instances_checked, 256);
        let eq = check_oracle_equivalence(&t, Mode::Exhaustive).unwrap();
        assert!(eq.pass);
        assert_eq!(eq.instances_checked, 65_536);
    }
}
