//! Mechanical verification of the law batteries over fixtures and seeded
//! random instances. Every check is pointwise over algebra elements.

mod identities;
mod laws;
mod random;

use std::sync::{Arc, OnceLock};

use crate::bridge::{InferenceService, MaxiconsistentInference};
use crate::entrenchment::{structure_check, validate_axioms, EntrenchmentOracle, GeneratorBase, StructuralProperty};
use crate::error::{Error, Result};
use crate::formula::TruthMask;
use crate::inference::maximal_bases;
use crate::verdict::{Mode, Verdict};

pub use identities::{
    check_empty_chain, check_lemma1, check_oracle_equivalence, check_roundtrips, check_theorem6, lemma1_printed,
};
pub use laws::{check_connected_laws, check_rational, check_system_p, check_wd_laws, SYSTEM_P_RULES};
pub use random::{random_base, random_connected_table};

/// Exhaustive cap for scans over inference services and filter families.
pub const AUDIT_MAX_VARS: usize = 2;
/// Exhaustive cap for one- and two-coordinate scans over cached data.
pub const WIDE_SCAN_MAX_VARS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Axioms,
    Connectivity,
    Wd,
    Splitting,
    Sysp,
    Rm,
    Lemma1,
    Roundtrips,
    Theorem6,
    Connected,
    EmptyChain,
    OracleEq,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Axioms,
        Suite::Connectivity,
        Suite::Wd,
        Suite::Splitting,
        Suite::Sysp,
        Suite::Rm,
        Suite::Lemma1,
        Suite::Roundtrips,
        Suite::Theorem6,
        Suite::Connected,
        Suite::EmptyChain,
        Suite::OracleEq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Connectivity => "connectivity",
            Suite::Wd => "wd",
            Suite::Splitting => "splitting",
            Suite::Sysp => "sysp",
            Suite::Rm => "rm",
            Suite::Lemma1 => "lemma1",
            Suite::Roundtrips => "roundtrips",
            Suite::Theorem6 => "theorem6",
            Suite::Connected => "connected",
            Suite::EmptyChain => "empty_chain",
            Suite::OracleEq => "oracle_eq",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite `{s}` (expected one of {})", names.join(", "))
        })
    }
}

/// What a suite runs against: an ordering, the inference it induces (or an
/// external inference table), and the generator base when there is one.
#[derive(Clone)]
pub struct Target {
    pub oracle: Arc<EntrenchmentOracle>,
    pub service: Arc<dyn InferenceService>,
    pub base: Option<GeneratorBase>,
}

impl Target {
    /// Ordering given directly; inference is the engine over it.
    pub fn from_oracle(oracle: EntrenchmentOracle) -> Result<Self> {
        let base = match oracle.backend() {
            crate::entrenchment::Backend::Closure(b) => Some(b.clone()),
            _ => None,
        };
        let oracle = Arc::new(oracle);
        let service = Arc::new(MaxiconsistentInference::new(oracle.clone())?);
        Ok(Self { oracle, service, base })
    }

    pub fn from_base(base: GeneratorBase) -> Result<Self> {
        Self::from_oracle(EntrenchmentOracle::closure(base))
    }

    /// Inference given directly; the ordering is its P-translation.
    pub fn from_service(service: Arc<dyn InferenceService>) -> Self {
        let oracle = Arc::new(crate::bridge::p_translate(service.clone()));
        Self { oracle, service, base: None }
    }
}

/// Outcome of one suite: verdicts, or a refusal when a precondition fails.
#[derive(Debug, Clone)]
pub enum SuiteOutcome {
    Verdicts(Vec<Verdict>),
    Refused { reason: String, guard: Verdict },
}

impl SuiteOutcome {
    /// Every non-informational verdict passed. Refusals are not passes.
    pub fn passed(&self) -> bool {
        match self {
            SuiteOutcome::Verdicts(v) => v.iter().all(|v| v.pass || v.informational),
            SuiteOutcome::Refused { .. } => false,
        }
    }

    pub fn is_refusal(&self) -> bool {
        matches!(self, SuiteOutcome::Refused { .. })
    }
}

fn guarded(r: Result<Vec<Verdict>>, guard: impl FnOnce() -> Result<Verdict>) -> Result<SuiteOutcome> {
    match r {
        Ok(v) => Ok(SuiteOutcome::Verdicts(v)),
        Err(e @ (Error::ConnectivityRequired | Error::WeakDisjunctionRequired)) => {
            Ok(SuiteOutcome::Refused { reason: e.to_string(), guard: guard()? })
        }
        Err(e) => Err(e),
    }
}

pub fn run_suite(suite: Suite, target: &Target, mode: Mode) -> Result<SuiteOutcome> {
    let o = &*target.oracle;
    let s = &*target.service;
    let verdicts = match suite {
        Suite::Axioms => validate_axioms(o, mode)?,
        Suite::Connectivity => vec![structure_check(o, StructuralProperty::Connectivity, mode)?],
        Suite::Wd => {
            let wd = structure_check(o, StructuralProperty::WeakDisjunction, mode)?;
            if wd.pass {
                let mut out = vec![wd];
                out.extend(check_wd_laws(o, mode)?);
                out
            } else {
                vec![wd]
            }
        }
        Suite::Splitting => vec![structure_check(o, StructuralProperty::Splitting, mode)?],
        Suite::Sysp => check_system_p(s, mode)?,
        Suite::Rm => check_rational(s, o, mode)?,
        Suite::Lemma1 => check_lemma1(o, mode)?,
        Suite::Roundtrips => check_roundtrips(target, mode)?,
        Suite::Theorem6 => check_theorem6(target.service.clone(), mode)?,
        Suite::Connected => {
            return guarded(check_connected_laws(o, mode), || {
                structure_check(o, StructuralProperty::Connectivity, connectivity_mode(o, mode))
            })
        }
        Suite::EmptyChain => vec![check_empty_chain(o, mode)?],
        Suite::OracleEq => vec![check_oracle_equivalence(target, mode)?],
    };
    Ok(SuiteOutcome::Verdicts(verdicts))
}

/// Connectivity is a pair scan, cheap enough to run exhaustively up to four
/// variables whatever mode the caller asked for.
fn connectivity_mode(o: &EntrenchmentOracle, mode: Mode) -> Mode {
    if o.vocab().len() <= crate::entrenchment::TABLE_MAX_VARS {
        Mode::Exhaustive
    } else {
        mode
    }
}

/// Lazily computed maximal bases per antecedent.
pub(crate) struct FilterCache<'o> {
    oracle: &'o EntrenchmentOracle,
    stable: &'o [TruthMask],
    maximal: Vec<OnceLock<Vec<TruthMask>>>,
}

impl<'o> FilterCache<'o> {
    pub(crate) fn new(oracle: &'o EntrenchmentOracle) -> Result<Self> {
        oracle.prepare();
        let stable = oracle.stable_elements()?;
        let maximal = (0..oracle.vocab().algebra().size()).map(|_| OnceLock::new()).collect();
        Ok(Self { oracle, stable, maximal })
    }

    /// Bases of `alpha`, ascending.
    pub(crate) fn bases(&self, alpha: TruthMask) -> Vec<TruthMask> {
        self.stable.iter().copied().filter(|c| !c.meet(alpha).is_bottom()).collect()
    }

    pub(crate) fn maximal(&self, alpha: TruthMask) -> &[TruthMask] {
        self.maximal[alpha.index()]
            .get_or_init(|| maximal_bases(alpha, self.oracle).expect("stable elements computed at construction"))
    }

    /// Engine inference read off the cached maximal bases.
    pub(crate) fn infers(&self, alpha: TruthMask, beta: TruthMask) -> bool {
        self.maximal_join(alpha).meet(alpha).entails(beta)
    }

    /// Minimum of the intersection of the maximal bases of `alpha`; bottom
    /// when there are none.
    pub(crate) fn maximal_join(&self, alpha: TruthMask) -> TruthMask {
        self.maximal(alpha).iter().copied().fold(TruthMask::BOTTOM, TruthMask::join)
    }
}

pub(crate) fn intersects(a: &[TruthMask], b: &[TruthMask]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

pub(crate) fn subset(a: &[TruthMask], b: &[TruthMask]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn connected_suite_refuses_figure1() {
        let t = Target::from_base(fixtures::figure1_base()).unwrap();
        let out = run_suite(Suite::Connected, &t, Mode::Exhaustive).unwrap();
        assert!(out.is_refusal());
        assert!(!out.passed());
    }

    #[test]
    fn wd_suite_fails_on_example5() {
        let t = Target::from_oracle(fixtures::example5_oracle()).unwrap();
        match run_suite(Suite::Wd, &t, Mode::Exhaustive).unwrap() {
            SuiteOutcome::Verdicts(v) => {
                assert_eq!(v.len(), 1);
                assert!(!v[0].pass && !v[0].counterexamples.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sorted_set_helpers() {
        let m = |v: &[u32]| v.iter().copied().map(TruthMask).collect::<Vec<_>>();
        assert!(intersects(&m(&[1, 4, 9]), &m(&[2, 9])));
        assert!(!intersects(&m(&[1, 4]), &m(&[2, 9])));
        assert!(subset(&m(&[4]), &m(&[1, 4])));
        assert!(!subset(&m(&[3]), &m(&[1, 4])));
    }
}
