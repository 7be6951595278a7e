//! Translations between entrenchment relations and inference relations.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::entrenchment::{
    structure_check, EntrenchmentOracle, GeneratorBase, StructuralProperty, Translation, TABLE_MAX_VARS,
};
use crate::error::{Error, Result};
use crate::formula::{truth_mask, Formula, TruthMask, Vocabulary, DEFAULT_MAX_VARS};
use crate::inference::sceptical_extension;
use crate::relation::Relation;
use crate::verdict::{Mode, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Engine,
    DerivedN,
    ExternalTable,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Engine => "engine",
            Provenance::DerivedN => "derived-N",
            Provenance::ExternalTable => "external table",
        })
    }
}

/// A total, deterministic nonmonotonic consequence relation on masks.
pub trait InferenceService: Send + Sync {
    fn vocab(&self) -> &Vocabulary;
    fn query(&self, antecedent: TruthMask, consequent: TruthMask) -> bool;
    fn provenance(&self) -> Provenance;
}

impl fmt::Debug for dyn InferenceService {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InferenceService({}, {})", self.provenance(), self.vocab())
    }
}

/// Maxiconsistent inference over an oracle, memoized per antecedent.
pub struct MaxiconsistentInference {
    oracle: Arc<EntrenchmentOracle>,
    sceptical: Vec<OnceLock<TruthMask>>,
}

impl MaxiconsistentInference {
    pub fn new(oracle: Arc<EntrenchmentOracle>) -> Result<Self> {
        let alg = oracle.vocab().algebra();
        alg.require_vars(DEFAULT_MAX_VARS, "inference service")?;
        oracle.stable_elements()?;
        let sceptical = (0..alg.size()).map(|_| OnceLock::new()).collect();
        Ok(Self { oracle, sceptical })
    }

    pub fn oracle(&self) -> &Arc<EntrenchmentOracle> {
        &self.oracle
    }

    pub fn sceptical_min(&self, antecedent: TruthMask) -> TruthMask {
        *self.sceptical[antecedent.index()].get_or_init(|| {
            sceptical_extension(antecedent, &self.oracle).expect("stable elements computed at construction")
        })
    }
}

impl InferenceService for MaxiconsistentInference {
    fn vocab(&self) -> &Vocabulary {
        self.oracle.vocab()
    }

    fn query(&self, antecedent: TruthMask, consequent: TruthMask) -> bool {
        self.sceptical_min(antecedent).entails(consequent)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Engine
    }
}

/// Inference read off an entrenchment: `a |~ b` iff `!a | !b <= !a`.
pub struct NTranslated {
    oracle: Arc<EntrenchmentOracle>,
}

impl InferenceService for NTranslated {
    fn vocab(&self) -> &Vocabulary {
        self.oracle.vocab()
    }

    fn query(&self, a: TruthMask, b: TruthMask) -> bool {
        let alg = self.oracle.vocab().algebra();
        let na = alg.not(a);
        self.oracle.leq(na.join(alg.not(b)), na)
    }

    fn provenance(&self) -> Provenance {
        Provenance::DerivedN
    }
}

pub fn n_translate(o: Arc<EntrenchmentOracle>) -> NTranslated {
    NTranslated { oracle: o }
}

/// `a <= b` iff `!a | !b |~ !a`.
pub fn p_translate(s: Arc<dyn InferenceService>) -> EntrenchmentOracle {
    EntrenchmentOracle::derived(s, Translation::P)
}

/// `a <= b` iff `a & b` is valid or `!(a & b) |~ a`.
pub fn gm_translate(s: Arc<dyn InferenceService>) -> EntrenchmentOracle {
    EntrenchmentOracle::derived(s, Translation::GardenforsMakinson)
}

/// Explicit inference relation, e.g. loaded from a table file.
#[derive(Debug, Clone)]
pub struct InferenceTable {
    vocab: Vocabulary,
    relation: Relation,
}

impl InferenceTable {
    pub fn new(vocab: Vocabulary, relation: Relation) -> Result<Self> {
        let alg = vocab.algebra();
        alg.require_vars(TABLE_MAX_VARS, "inference table")?;
        if relation.size() as u64 != alg.size() {
            return Err(Error::VocabularyMismatch { expected: alg.size() as usize, found: relation.size() });
        }
        Ok(Self { vocab, relation })
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn relation_mut(&mut self) -> &mut Relation {
        &mut self.relation
    }
}

impl InferenceService for InferenceTable {
    fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    fn query(&self, a: TruthMask, b: TruthMask) -> bool {
        self.relation.contains(a, b)
    }

    fn provenance(&self) -> Provenance {
        Provenance::ExternalTable
    }
}

/// Every query answer of `s` as a table (n <= 3).
pub fn tabulate(s: &dyn InferenceService) -> Result<InferenceTable> {
    let alg = s.vocab().algebra();
    alg.require_vars(TABLE_MAX_VARS, "inference tabulation")?;
    let relation = Relation::from_fn(alg.size() as usize, |a, b| s.query(a, b));
    InferenceTable::new(s.vocab().clone(), relation)
}

/// Inference for a connected ordering: everything follows when
/// `true <= !alpha`; otherwise `gamma` follows iff it is entailed by
/// `alpha` together with the meet of everything strictly above `!alpha`.
pub fn connected_infer(o: &EntrenchmentOracle, alpha: TruthMask, gamma: TruthMask) -> Result<bool> {
    let alg = o.vocab().algebra();
    let na = alg.not(alpha);
    if o.leq(alg.top(), na) {
        return Ok(true);
    }
    let above = alg.elements()?.filter(|&x| o.strict(na, x)).fold(alg.top(), TruthMask::meet);
    Ok(above.meet(alpha).entails(gamma))
}

/// Finite set of conditionals `antecedent |~ consequent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalKB {
    pub vocab: Vocabulary,
    pub conditionals: Vec<(Formula, Formula)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionalOutcome {
    pub antecedent: String,
    pub consequent: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KbReport {
    pub conditionals: Vec<ConditionalOutcome>,
    pub inconsistent: bool,
    pub weak_disjunction: Verdict,
}

impl KbReport {
    pub fn all_hold(&self) -> bool {
        self.conditionals.iter().all(|c| c.holds)
    }
}

/// One generator `!a | !b <= !a` per conditional, then a report on which
/// conditionals the closure actually supports. Experimental: no claim is
/// made that the closure reproduces the intended inference relation.
pub fn compile_kb(kb: &ConditionalKB) -> Result<(GeneratorBase, KbReport)> {
    let pairs = kb
        .conditionals
        .iter()
        .map(|(a, b)| {
            let na = Formula::not(a.clone());
            (Formula::or(na.clone(), Formula::not(b.clone())), na)
        })
        .collect();
    let base = GeneratorBase::new(kb.vocab.clone(), pairs)?;
    let oracle = EntrenchmentOracle::closure(base.clone());
    let mut conditionals = Vec::with_capacity(kb.conditionals.len());
    for (a, b) in &kb.conditionals {
        let holds = crate::inference::infers(truth_mask(a, &kb.vocab), truth_mask(b, &kb.vocab), &oracle)?;
        conditionals.push(ConditionalOutcome {
            antecedent: a.render(&kb.vocab),
            consequent: b.render(&kb.vocab),
            holds,
        });
    }
    let mode = if kb.vocab.len() <= TABLE_MAX_VARS { Mode::Exhaustive } else { Mode::sampled(0) };
    let weak_disjunction = structure_check(&oracle, StructuralProperty::WeakDisjunction, mode)?;
    Ok((base, KbReport { conditionals, inconsistent: oracle.is_inconsistent(), weak_disjunction }))
}
