//! Maxiconsistent inference: coherent sentences, bases, maximal bases,
//! extension sets and the sceptical extension of an antecedent.
//!
//! Filters are represented by their minimum masks. A larger filter has a
//! stronger (bitwise smaller) minimum, so a maximal base is a minimal stable
//! mask that stays consistent with the antecedent.

use serde::Serialize;

use crate::entrenchment::EntrenchmentOracle;
use crate::error::Result;
use crate::formula::{truth_mask, Formula, TruthMask};
use crate::verdict::{Verdict, Witness};

/// `beta` is not below `!alpha`.
pub fn coherent(beta: TruthMask, alpha: TruthMask, o: &EntrenchmentOracle) -> bool {
    !o.leq(beta, o.vocab().algebra().not(alpha))
}

/// All filters of the ordering, as ascending stable nonzero minima.
pub fn filters(o: &EntrenchmentOracle) -> Result<Vec<TruthMask>> {
    Ok(o.stable_elements()?.to_vec())
}

/// Filters that avoid `!alpha`, ascending.
pub fn bases(alpha: TruthMask, o: &EntrenchmentOracle) -> Result<Vec<TruthMask>> {
    Ok(o.stable_elements()?.iter().copied().filter(|c| !c.meet(alpha).is_bottom()).collect())
}

/// Inclusion-maximal bases of `alpha`, ascending.
pub fn maximal_bases(alpha: TruthMask, o: &EntrenchmentOracle) -> Result<Vec<TruthMask>> {
    let mut candidates = bases(alpha, o)?;
    // Any non-maximal base sits above a maximal one with fewer models, so
    // checking each candidate against the maximal ones found so far suffices.
    candidates.sort_by_key(|c| (c.count_models(), c.0));
    let mut maximal: Vec<TruthMask> = Vec::new();
    for c in candidates {
        if !maximal.iter().any(|m| m.strictly_entails(c)) {
            maximal.push(c);
        }
    }
    maximal.sort();
    Ok(maximal)
}

/// Minima of the theories `Cn(F, alpha)` for maximal `F`, deduplicated.
pub fn extensions(alpha: TruthMask, o: &EntrenchmentOracle) -> Result<Vec<TruthMask>> {
    let mut ext: Vec<TruthMask> = maximal_bases(alpha, o)?.into_iter().map(|c| c.meet(alpha)).collect();
    ext.sort();
    ext.dedup();
    Ok(ext)
}

/// Minimum of the intersection of all extensions. An empty extension set
/// gives the whole language, encoded as the bottom mask.
pub fn sceptical_extension(alpha: TruthMask, o: &EntrenchmentOracle) -> Result<TruthMask> {
    Ok(extensions(alpha, o)?.into_iter().fold(TruthMask::BOTTOM, TruthMask::join))
}

/// `alpha |~ beta` on masks.
pub fn infers(alpha: TruthMask, beta: TruthMask, o: &EntrenchmentOracle) -> Result<bool> {
    Ok(sceptical_extension(alpha, o)?.entails(beta))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InferenceResult {
    pub antecedent: TruthMask,
    pub consequent: TruthMask,
    pub verdict: bool,
    pub maximal_bases: Vec<TruthMask>,
    pub extensions: Vec<TruthMask>,
    pub sceptical_min: TruthMask,
}

pub fn infer_masks(alpha: TruthMask, beta: TruthMask, o: &EntrenchmentOracle) -> Result<InferenceResult> {
    let maximal = maximal_bases(alpha, o)?;
    let mut ext: Vec<TruthMask> = maximal.iter().map(|c| c.meet(alpha)).collect();
    ext.sort();
    ext.dedup();
    let sceptical_min = ext.iter().copied().fold(TruthMask::BOTTOM, TruthMask::join);
    Ok(InferenceResult {
        antecedent: alpha,
        consequent: beta,
        verdict: sceptical_min.entails(beta),
        maximal_bases: maximal,
        extensions: ext,
        sceptical_min,
    })
}

/// Does `alpha` maxiconsistently infer `beta`, with witnesses.
pub fn infer(alpha: &Formula, beta: &Formula, o: &EntrenchmentOracle) -> Result<InferenceResult> {
    let v = o.vocab();
    infer_masks(truth_mask(alpha, v), truth_mask(beta, v), o)
}

/// No extensions, the sceptical extension is everything, `alpha |~ false`,
/// and `true <= !alpha` must agree.
pub fn empty_chain_check(alpha: TruthMask, o: &EntrenchmentOracle) -> Result<Verdict> {
    let mut verdict = Verdict::new("empty_chain", crate::verdict::Mode::Exhaustive);
    empty_chain_instance(alpha, o, &mut verdict)?;
    Ok(verdict)
}

pub(crate) fn empty_chain_instance(alpha: TruthMask, o: &EntrenchmentOracle, verdict: &mut Verdict) -> Result<()> {
    let alg = o.vocab().algebra();
    let ext = extensions(alpha, o)?;
    let sceptical = ext.iter().copied().fold(TruthMask::BOTTOM, TruthMask::join);
    let sides =
        [ext.is_empty(), sceptical.is_bottom(), sceptical.entails(alg.bottom()), o.leq(alg.top(), alg.not(alpha))];
    verdict.check(sides.iter().all(|&s| s == sides[0]), || {
        Witness::new(o.vocab(), &["alpha"], &[alpha]).with_note(format!(
            "e empty={}, E=L={}, alpha|~false={}, true<=!alpha={}",
            sides[0], sides[1], sides[2], sides[3]
        ))
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn fig1() -> EntrenchmentOracle {
        EntrenchmentOracle::closure(fixtures::figure1_base())
    }

    fn masks(v: &[u32]) -> Vec<TruthMask> {
        v.iter().copied().map(TruthMask).collect()
    }

    #[test]
    fn coherence_examples() {
        let o = fig1();
        let v = o.vocab().clone();
        let p = v.mask_of("p").unwrap();
        assert!(coherent(v.mask_of("f -> b").unwrap(), p, &o));
        assert!(!coherent(v.mask_of("f").unwrap(), p, &o));
        assert!(!coherent(TruthMask(0), p, &o));
    }

    #[test]
    fn filter_examples() {
        let o = fig1();
        let f = filters(&o).unwrap();
        for x in [0x40, 0x04, 0x01] {
            assert!(f.contains(&TruthMask(x)));
        }
        assert!(!f.contains(&TruthMask(0xFF)));

        let v = crate::formula::Vocabulary::new(&["p"]).unwrap();
        let incons = EntrenchmentOracle::closure(
            crate::entrenchment::GeneratorBase::new(v.clone(), vec![(Formula::True, Formula::False)]).unwrap(),
        );
        assert!(filters(&incons).unwrap().is_empty());
        let empty = EntrenchmentOracle::closure(crate::entrenchment::GeneratorBase::empty(v));
        assert_eq!(filters(&empty).unwrap(), masks(&[1, 2, 3]));
    }

    #[test]
    fn figure1_maximal_bases() {
        let o = fig1();
        assert_eq!(maximal_bases(TruthMask(0xAA), &o).unwrap(), masks(&[0x09, 0x0C, 0x18, 0x48]));
        assert_eq!(maximal_bases(TruthMask(0xFF), &o).unwrap(), masks(&[0x01, 0x04, 0x18, 0x40]));
        assert!(maximal_bases(TruthMask(0x00), &o).unwrap().is_empty());
    }

    #[test]
    fn figure1_extensions() {
        let o = fig1();
        assert_eq!(extensions(TruthMask(0xAA), &o).unwrap(), masks(&[0x08]));
        assert_eq!(extensions(TruthMask(0xFF), &o).unwrap(), masks(&[0x01, 0x04, 0x18, 0x40]));
        assert!(extensions(TruthMask(0x00), &o).unwrap().is_empty());
        assert_eq!(sceptical_extension(TruthMask(0xAA), &o).unwrap(), TruthMask(0x08));
        assert_eq!(sceptical_extension(TruthMask(0xFF), &o).unwrap(), TruthMask(0x5D));
        assert_eq!(sceptical_extension(TruthMask(0x00), &o).unwrap(), TruthMask(0x00));
    }

    #[test]
    fn figure1_queries() {
        let o = fig1();
        let v = o.vocab().clone();
        let q = |a: &str, b: &str| infer(&v.parse(a).unwrap(), &v.parse(b).unwrap(), &o).unwrap();
        assert!(q("p", "b").verdict);
        assert!(q("p", "!f").verdict);
        // (p & b & !f) | (!p & !b & f) spans a maximal base of `true`
        assert!(!q("true", "!p").verdict);
        assert!(q("true", "p -> b").verdict);
        assert!(!q("true", "b").verdict);
        for b in ["p", "!p", "false", "b & f"] {
            assert!(q("false", b).verdict);
        }
        let r = q("p", "b");
        assert_eq!(r.extensions, masks(&[0x08]));
        assert_eq!(r.maximal_bases.len(), 4);
    }

    #[test]
    fn empty_chain_examples() {
        let o = fig1();
        assert!(empty_chain_check(TruthMask(0x80), &o).unwrap().pass);
        assert!(empty_chain_check(TruthMask(0x00), &o).unwrap().pass);
        assert!(empty_chain_check(TruthMask(0xFF), &o).unwrap().pass);
        assert!(!extensions(TruthMask(0xFF), &o).unwrap().is_empty());
        assert!(extensions(TruthMask(0x80), &o).unwrap().is_empty());
    }

    /// Filters found by brute force over the saturated table: `Cn(c)` is a
    /// filter iff everything above a member of it is a member.
    fn brute_force_maximal_bases(alpha: TruthMask, table: &EntrenchmentOracle) -> Vec<TruthMask> {
        let alg = table.vocab().algebra();
        let rel = table.materialize().unwrap();
        let all: Vec<TruthMask> = alg.elements().unwrap().collect();
        let is_filter = |c: TruthMask| {
            !c.is_bottom()
                && all
                    .iter()
                    .filter(|x| c.entails(**x))
                    .all(|&x| rel.successors(x.index()).all(|y| c.entails(TruthMask(y as u32))))
        };
        let na = alg.not(alpha);
        let bases: Vec<TruthMask> = all
            .iter()
            .copied()
            .filter(|&c| is_filter(c) && all.iter().all(|&x| !c.entails(x) || !rel.contains(x, na)))
            .collect();
        bases.iter().copied().filter(|&c| !bases.iter().any(|&d| d.strictly_entails(c))).collect()
    }

    #[test]
    fn figure1_bases_match_brute_force() {
        let o = fig1();
        let table = crate::entrenchment::closure_table(&fixtures::figure1_base()).unwrap();
        for alpha in [0xFF, 0xAA, 0x55, 0xCC, 0xF0, 0x00, 0x88] {
            let a = TruthMask(alpha);
            assert_eq!(maximal_bases(a, &o).unwrap(), brute_force_maximal_bases(a, &table), "alpha {alpha:#x}");
        }
    }
}
