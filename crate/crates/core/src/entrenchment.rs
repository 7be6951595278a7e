//! Partial entrenchment relations: the least closure of a finite generator
//! base, explicit relation tables, and relations derived from an inference
//! service. Also the axiom validator and the structural property checks.
//!
//! The central fact used throughout: in a finite algebra every filter of a
//! partial entrenchment is principal, so the up-set of `a` is the classical
//! theory of a single mask `m*(a)`. For a generated relation `m*(a)` is the
//! greatest element below `a` at which no generator fires, found by the
//! meet-fixpoint in [`closure_meet`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;

use crate::bridge::InferenceService;
use crate::error::{Error, Result};
use crate::formula::{truth_mask, Formula, TruthMask, Vocabulary};
use crate::relation::Relation;
use crate::verdict::{scan, Mode, Verdict};

/// Widest vocabulary for explicit tables and full stability scans over them.
pub const TABLE_MAX_VARS: usize = 3;
/// Widest vocabulary for exhaustive triple scans.
pub const TRIPLE_SCAN_MAX_VARS: usize = 3;
/// Widest vocabulary for exhaustive pair scans.
pub const PAIR_SCAN_MAX_VARS: usize = 4;

/// Finite set of generating constraints `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorBase {
    vocab: Vocabulary,
    pairs: Vec<(Formula, Formula)>,
    masks: Vec<(TruthMask, TruthMask)>,
}

impl GeneratorBase {
    pub fn new(vocab: Vocabulary, pairs: Vec<(Formula, Formula)>) -> Result<Self> {
        for (l, r) in &pairs {
            let w = l.width().max(r.width());
            if w > vocab.len() {
                return Err(Error::VocabularyMismatch { expected: vocab.len(), found: w });
            }
        }
        let mut masks: Vec<_> = pairs.iter().map(|(l, r)| (truth_mask(l, &vocab), truth_mask(r, &vocab))).collect();
        masks.sort_unstable();
        masks.dedup();
        Ok(Self { vocab, pairs, masks })
    }

    /// Builds a base from mask pairs, rendering each side canonically.
    pub fn from_masks(vocab: Vocabulary, pairs: &[(TruthMask, TruthMask)]) -> Self {
        let formulas = pairs
            .iter()
            .map(|&(l, r)| (crate::formula::formula_of_mask(l, &vocab), crate::formula::formula_of_mask(r, &vocab)))
            .collect();
        Self::new(vocab, formulas).expect("canonical formulas are bound to the vocabulary")
    }

    pub fn empty(vocab: Vocabulary) -> Self {
        Self { vocab, pairs: Vec::new(), masks: Vec::new() }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    /// Pairs as written, duplicates included.
    pub fn pairs(&self) -> &[(Formula, Formula)] {
        &self.pairs
    }

    /// Semantically distinct pairs, ascending.
    pub fn mask_pairs(&self) -> &[(TruthMask, TruthMask)] {
        &self.masks
    }
}

/// `m*(seed)`: starting from `seed`, meet in the right-hand side of every
/// generator whose left-hand side is entailed but whose right-hand side is
/// not, until nothing fires. `leq(seed, x)` in the least partial
/// entrenchment containing the base holds iff `m*(seed)` entails `x`.
pub fn closure_meet(seed: TruthMask, base: &GeneratorBase) -> TruthMask {
    meet_fixpoint(seed, base.mask_pairs())
}

fn meet_fixpoint(seed: TruthMask, pairs: &[(TruthMask, TruthMask)]) -> TruthMask {
    let mut m = seed;
    loop {
        let mut fired = false;
        for &(l, r) in pairs {
            if m.entails(l) && !m.entails(r) {
                m = m.meet(r);
                fired = true;
            }
        }
        if !fired {
            return m;
        }
    }
}

/// How an inference service is turned back into an ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Translation {
    /// `a <= b` iff `!a | !b |~ !a`.
    P,
    /// `a <= b` iff `a & b` is a tautology or `!(a & b) |~ a`.
    GardenforsMakinson,
}

pub struct DerivedRelation {
    source: Arc<dyn InferenceService>,
    translation: Translation,
    memo: RwLock<HashMap<(u32, u32), bool>>,
}

impl DerivedRelation {
    pub fn source(&self) -> &Arc<dyn InferenceService> {
        &self.source
    }

    pub fn translation(&self) -> Translation {
        self.translation
    }

    fn leq(&self, vocab: &Vocabulary, a: TruthMask, b: TruthMask) -> bool {
        if let Some(&hit) = self.memo.read().expect("memo lock").get(&(a.0, b.0)) {
            return hit;
        }
        let alg = vocab.algebra();
        let value = match self.translation {
            Translation::P => {
                let na = alg.not(a);
                self.source.query(na.join(alg.not(b)), na)
            }
            Translation::GardenforsMakinson => {
                let both = a.meet(b);
                both == alg.top() || self.source.query(alg.not(both), a)
            }
        };
        self.memo.write().expect("memo lock").insert((a.0, b.0), value);
        value
    }
}

pub enum Backend {
    Closure(GeneratorBase),
    Table(Relation),
    Derived(DerivedRelation),
}

impl fmt::Debug for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Closure(b) => f.debug_tuple("Closure").field(&b.mask_pairs().len()).finish(),
            Backend::Table(r) => f.debug_tuple("Table").field(&r.size()).finish(),
            Backend::Derived(d) => f.debug_tuple("Derived").field(&d.translation).finish(),
        }
    }
}

/// Decides `leq` for one entrenchment relation.
#[derive(Debug)]
pub struct EntrenchmentOracle {
    vocab: Vocabulary,
    backend: Backend,
    stable: OnceLock<Vec<TruthMask>>,
    matrix: OnceLock<Relation>,
}

impl EntrenchmentOracle {
    fn with_backend(vocab: Vocabulary, backend: Backend) -> Self {
        Self { vocab, backend, stable: OnceLock::new(), matrix: OnceLock::new() }
    }

    /// Least partial entrenchment containing `base`.
    pub fn closure(base: GeneratorBase) -> Self {
        Self::with_backend(base.vocab().clone(), Backend::Closure(base))
    }

    /// Explicit relation; no axioms are assumed.
    pub fn table(vocab: Vocabulary, relation: Relation) -> Result<Self> {
        let alg = vocab.algebra();
        alg.require_vars(TABLE_MAX_VARS, "explicit relation table")?;
        if relation.size() as u64 != alg.size() {
            return Err(Error::VocabularyMismatch { expected: alg.size() as usize, found: relation.size() });
        }
        Ok(Self::with_backend(vocab, Backend::Table(relation)))
    }

    /// Relation read off an inference service through `translation`.
    pub fn derived(source: Arc<dyn InferenceService>, translation: Translation) -> Self {
        let vocab = source.vocab().clone();
        Self::with_backend(vocab, Backend::Derived(DerivedRelation { source, translation, memo: RwLock::default() }))
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn leq(&self, a: TruthMask, b: TruthMask) -> bool {
        if let Some(m) = self.matrix.get() {
            return m.contains(a, b);
        }
        self.backend_leq(a, b)
    }

    fn backend_leq(&self, a: TruthMask, b: TruthMask) -> bool {
        match &self.backend {
            Backend::Closure(base) => closure_meet(a, base).entails(b),
            Backend::Table(r) => r.contains(a, b),
            Backend::Derived(d) => d.leq(&self.vocab, a, b),
        }
    }

    pub fn strict(&self, a: TruthMask, b: TruthMask) -> bool {
        self.leq(a, b) && !self.leq(b, a)
    }

    /// `leq(top, bottom)`: everything is below everything.
    pub fn is_inconsistent(&self) -> bool {
        let alg = self.vocab.algebra();
        self.leq(alg.top(), alg.bottom())
    }

    /// Meet of the up-set of `a`, i.e. the minimum of the filter `{x : a <= x}`
    /// when the relation is a partial entrenchment.
    pub fn upset_meet(&self, a: TruthMask) -> Result<TruthMask> {
        match &self.backend {
            Backend::Closure(base) => Ok(closure_meet(a, base)),
            _ => {
                let alg = self.vocab.algebra();
                Ok(alg.elements()?.filter(|&x| self.leq(a, x)).fold(alg.top(), TruthMask::meet))
            }
        }
    }

    /// `c` is the canonical minimum of the filter `{x : c <= x}`: its up-set
    /// is exactly its classical theory.
    pub fn is_stable(&self, c: TruthMask) -> Result<bool> {
        match &self.backend {
            Backend::Closure(base) => Ok(closure_meet(c, base) == c),
            _ => {
                let alg = self.vocab.algebra();
                alg.require_vars(TABLE_MAX_VARS, "stability scan")?;
                Ok(alg.elements()?.all(|x| !self.leq(c, x) || c.entails(x)))
            }
        }
    }

    /// All nonzero stable masks, ascending. Cached.
    pub fn stable_elements(&self) -> Result<&[TruthMask]> {
        if let Some(s) = self.stable.get() {
            return Ok(s);
        }
        let alg = self.vocab.algebra();
        let stable: Vec<TruthMask> = match &self.backend {
            Backend::Closure(base) => {
                alg.require_vars(PAIR_SCAN_MAX_VARS, "stable-element scan")?;
                (1..alg.size() as u32).into_par_iter().map(TruthMask).filter(|&c| closure_meet(c, base) == c).collect()
            }
            _ => {
                alg.require_vars(TABLE_MAX_VARS, "stable-element scan")?;
                let matrix = self.materialize()?;
                (1..alg.size() as u32)
                    .into_par_iter()
                    .map(TruthMask)
                    .filter(|&c| matrix.successors(c.index()).all(|x| c.entails(TruthMask(x as u32))))
                    .collect()
            }
        };
        Ok(self.stable.get_or_init(|| stable))
    }

    /// Full relation as a bit matrix (n <= 3). Cached; `leq` uses it once built.
    pub fn materialize(&self) -> Result<&Relation> {
        if let Some(m) = self.matrix.get() {
            return Ok(m);
        }
        let alg = self.vocab.algebra();
        alg.require_vars(TABLE_MAX_VARS, "relation materialization")?;
        let size = alg.size() as usize;
        let relation = match &self.backend {
            Backend::Table(r) => r.clone(),
            Backend::Closure(base) => {
                let floors: Vec<TruthMask> = (0..size as u32).map(|a| closure_meet(TruthMask(a), base)).collect();
                Relation::from_fn(size, |a, b| floors[a.index()].entails(b))
            }
            Backend::Derived(_) => {
                let rows: Vec<Vec<bool>> = (0..size as u32)
                    .into_par_iter()
                    .map(|a| (0..size as u32).map(|b| self.backend_leq(TruthMask(a), TruthMask(b))).collect())
                    .collect();
                Relation::from_fn(size, |a, b| rows[a.index()][b.index()])
            }
        };
        Ok(self.matrix.get_or_init(|| relation))
    }

    /// Materializes when the width allows it, so scans use table lookups.
    pub(crate) fn prepare(&self) {
        if self.vocab.len() <= TABLE_MAX_VARS {
            let _ = self.materialize();
        }
    }
}

/// Least partial entrenchment containing `base`, by direct saturation of
/// the relation under Dominance, Transitivity and Conjunction. Independent
/// of [`closure_meet`].
pub fn closure_table(base: &GeneratorBase) -> Result<EntrenchmentOracle> {
    let vocab = base.vocab().clone();
    let alg = vocab.algebra();
    alg.require_vars(TABLE_MAX_VARS, "closure table")?;
    let mut r = Relation::empty(alg.size() as usize);
    for &(l, rhs) in base.mask_pairs() {
        r.set(l.index(), rhs.index());
    }
    saturate(vocab, r)
}

/// Least partial entrenchment containing `seed`: adds Dominance, then closes
/// under Transitivity and Conjunction until nothing changes.
pub fn saturate(vocab: Vocabulary, seed: Relation) -> Result<EntrenchmentOracle> {
    let alg = vocab.algebra();
    alg.require_vars(TABLE_MAX_VARS, "relation saturation")?;
    let size = alg.size() as usize;
    if seed.size() != size {
        return Err(Error::VocabularyMismatch { expected: size, found: seed.size() });
    }
    let mut r = seed;
    for a in 0..size {
        for b in 0..size {
            if TruthMask(a as u32).entails(TruthMask(b as u32)) {
                r.set(a, b);
            }
        }
    }
    loop {
        let mut changed = r.close_transitively();
        // Conjunction: every row is closed under pairwise meets; folding the
        // whole row gives the one meet not already implied by Dominance.
        for c in 0..size {
            let meet = r.successors(c).fold(alg.top().0, |acc, x| acc & x as u32);
            changed |= r.set(c, meet as usize);
        }
        if !changed {
            break;
        }
    }
    EntrenchmentOracle::table(vocab, r)
}

/// `a <= b` iff every subset `B` of `d` that entails `a` also entails `b`.
pub fn example5_oracle(d: &[Formula], vocab: &Vocabulary) -> Result<EntrenchmentOracle> {
    let alg = vocab.algebra();
    alg.require_vars(TABLE_MAX_VARS, "subset-order table")?;
    if d.len() > 16 {
        return Err(Error::InvalidVocabulary("at most 16 formulas in a subset order".into()));
    }
    let masks: Vec<TruthMask> = d.iter().map(|f| truth_mask(f, vocab)).collect();
    let subsets: Vec<TruthMask> = (0..1u32 << masks.len())
        .map(|s| masks.iter().enumerate().filter(|(i, _)| s >> i & 1 == 1).fold(alg.top(), |acc, (_, &m)| acc.meet(m)))
        .collect();
    let relation =
        Relation::from_fn(alg.size() as usize, |a, b| subsets.iter().all(|&s| !s.entails(a) || s.entails(b)));
    EntrenchmentOracle::table(vocab.clone(), relation)
}

/// Dominance, Transitivity and Conjunction, one verdict each.
pub fn validate_axioms(o: &EntrenchmentOracle, mode: Mode) -> Result<Vec<Verdict>> {
    o.prepare();
    let vocab = o.vocab();
    Ok(vec![
        scan("dominance", ["a", "b"], vocab, mode, PAIR_SCAN_MAX_VARS, |[a, b]| a.entails(b) && !o.leq(a, b))?,
        scan("transitivity", ["a", "b", "c"], vocab, mode, TRIPLE_SCAN_MAX_VARS, |[a, b, c]| {
            o.leq(a, b) && o.leq(b, c) && !o.leq(a, c)
        })?,
        scan("conjunction", ["c", "a", "b"], vocab, mode, TRIPLE_SCAN_MAX_VARS, |[c, a, b]| {
            o.leq(c, a) && o.leq(c, b) && !o.leq(c, a.meet(b))
        })?,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructuralProperty {
    Connectivity,
    WeakDisjunction,
    Splitting,
}

impl StructuralProperty {
    pub fn id(self) -> &'static str {
        match self {
            StructuralProperty::Connectivity => "connectivity",
            StructuralProperty::WeakDisjunction => "weak_disjunction",
            StructuralProperty::Splitting => "splitting",
        }
    }
}

/// `a -> b <= !a` and `a -> c <= !a` but not `a -> (b | c) <= !a`.
pub fn weak_disjunction_violated(o: &EntrenchmentOracle, a: TruthMask, b: TruthMask, c: TruthMask) -> bool {
    let alg = o.vocab().algebra();
    let na = alg.not(a);
    o.leq(alg.arrow(a, b), na) && o.leq(alg.arrow(a, c), na) && !o.leq(alg.arrow(a, b.join(c)), na)
}

/// `a | !b </= a` and `a | c <= a` but not `a | b | c <= a | b`.
pub fn splitting_violated(o: &EntrenchmentOracle, a: TruthMask, b: TruthMask, c: TruthMask) -> bool {
    let alg = o.vocab().algebra();
    !o.leq(a.join(alg.not(b)), a) && o.leq(a.join(c), a) && !o.leq(a.join(b).join(c), a.join(b))
}

pub fn structure_check(o: &EntrenchmentOracle, property: StructuralProperty, mode: Mode) -> Result<Verdict> {
    o.prepare();
    let vocab = o.vocab();
    let law = property.id();
    match property {
        StructuralProperty::Connectivity => {
            scan(law, ["a", "b"], vocab, mode, PAIR_SCAN_MAX_VARS, |[a, b]| !o.leq(a, b) && !o.leq(b, a))
        }
        StructuralProperty::WeakDisjunction => {
            scan(law, ["alpha", "beta", "gamma"], vocab, mode, TRIPLE_SCAN_MAX_VARS, |[a, b, c]| {
                weak_disjunction_violated(o, a, b, c)
            })
        }
        StructuralProperty::Splitting => {
            scan(law, ["alpha", "beta", "gamma"], vocab, mode, TRIPLE_SCAN_MAX_VARS, |[a, b, c]| {
                splitting_violated(o, a, b, c)
            })
        }
    }
}
