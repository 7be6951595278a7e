//! Law verdicts with witness reporting, and the deterministic tuple scanner
//! every checker is built on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::formula::{describe_mask, TruthMask, Vocabulary, DEFAULT_MAX_VARS};

/// Stored counterexamples per verdict; the total count is always reported.
pub const MAX_COUNTEREXAMPLES: usize = 10;

/// Default sample count for sampled scans.
pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, samples: u64 },
}

impl Mode {
    pub fn sampled(seed: u64) -> Self {
        Mode::Sampled { seed, samples: DEFAULT_SAMPLES }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exhaustive => write!(f, "exhaustive"),
            Mode::Sampled { seed, samples } => write!(f, "sampled(seed={seed}, samples={samples})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub roles: Vec<String>,
    pub masks: Vec<TruthMask>,
    pub formulas: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Witness {
    pub fn new(vocab: &Vocabulary, roles: &[&str], masks: &[TruthMask]) -> Self {
        Self {
            roles: roles.iter().map(|r| r.to_string()).collect(),
            masks: masks.to_vec(),
            formulas: masks.iter().map(|&m| describe_mask(m, vocab)).collect(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub law: String,
    pub pass: bool,
    pub instances_checked: u64,
    pub violations: u64,
    pub counterexamples: Vec<Witness>,
    pub mode: Mode,
    /// Reported for the record only; does not count toward a suite's status.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
}

impl Verdict {
    pub fn new(law: impl Into<String>, mode: Mode) -> Self {
        Self {
            law: law.into(),
            pass: true,
            instances_checked: 0,
            violations: 0,
            counterexamples: Vec::new(),
            mode,
            informational: false,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn renamed(mut self, law: impl Into<String>) -> Self {
        self.law = law.into();
        self
    }

    /// Records one checked instance.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.instances_checked += 1;
        if !ok {
            self.pass = false;
            self.violations += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(witness());
            }
        }
    }

    pub fn fail(&mut self, witness: Witness) {
        self.pass = false;
        self.violations += 1;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(witness);
        }
    }

    /// Folds another verdict for the same law into this one, keeping the
    /// counterexample order of the arguments.
    pub fn absorb(&mut self, other: &Verdict, note: Option<&str>) {
        self.instances_checked += other.instances_checked;
        for w in &other.counterexamples {
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                let mut w = w.clone();
                if let Some(note) = note {
                    w.note = Some(match w.note {
                        Some(n) => format!("{note}; {n}"),
                        None => note.to_string(),
                    });
                }
                self.counterexamples.push(w);
            }
        }
        self.violations += other.violations;
        self.pass &= other.pass;
    }
}

/// Checks `violated` on every `K`-tuple of algebra elements (or on seeded
/// uniform samples). Tuples are visited in ascending lexicographic order and
/// counterexamples are merged in that order regardless of parallelism.
pub fn scan<const K: usize>(
    law: &str,
    roles: [&str; K],
    vocab: &Vocabulary,
    mode: Mode,
    exhaustive_cap: usize,
    violated: impl Fn([TruthMask; K]) -> bool + Sync,
) -> Result<Verdict> {
    let alg = vocab.algebra();
    let size = alg.size();
    let mut verdict = Verdict::new(law, mode);
    let witness = |t: [TruthMask; K]| Witness::new(vocab, &roles, &t);
    match mode {
        Mode::Exhaustive => {
            alg.require_vars(exhaustive_cap.min(DEFAULT_MAX_VARS), &format!("exhaustive `{law}` scan"))?;
            let chunks: Vec<Verdict> = (0..size as u32)
                .into_par_iter()
                .map(|first| {
                    let mut local = Verdict::new(law, mode);
                    let mut t = [TruthMask(first); K];
                    for slot in t.iter_mut().skip(1) {
                        *slot = TruthMask(0);
                    }
                    loop {
                        local.check(!violated(t), || witness(t));
                        // odometer over coordinates 1..K, last fastest
                        let mut i = K;
                        loop {
                            if i <= 1 {
                                return local;
                            }
                            i -= 1;
                            if (t[i].0 as u64) + 1 < size {
                                t[i].0 += 1;
                                break;
                            }
                            t[i].0 = 0;
                        }
                    }
                })
                .collect();
            for c in &chunks {
                verdict.absorb(c, None);
            }
        }
        Mode::Sampled { seed, samples } => {
            alg.require_vars(DEFAULT_MAX_VARS, &format!("sampled `{law}` scan"))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tuples: Vec<[TruthMask; K]> =
                (0..samples).map(|_| std::array::from_fn(|_| TruthMask(rng.gen_range(0..size) as u32))).collect();
            let flags: Vec<bool> = tuples.par_iter().map(|&t| violated(t)).collect();
            for (t, bad) in tuples.into_iter().zip(flags) {
                verdict.check(!bad, || witness(t));
            }
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_scan_visits_every_tuple_in_order() {
        let v = Vocabulary::new(&["p"]).unwrap();
        let verdict = scan("x", ["a", "b"], &v, Mode::Exhaustive, 2, |[a, b]| a.0 > b.0).unwrap();
        assert_eq!(verdict.instances_checked, 16);
        assert_eq!(verdict.violations, 6);
        assert!(!verdict.pass);
        let first: Vec<_> = verdict.counterexamples.iter().map(|w| (w.masks[0].0, w.masks[1].0)).collect();
        assert_eq!(first, vec![(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]);
    }

    #[test]
    fn sampled_scan_is_reproducible() {
        let v = Vocabulary::new(&["p", "q"]).unwrap();
        let mode = Mode::Sampled { seed: 7, samples: 500 };
        let a = scan("x", ["a"], &v, mode, 2, |[a]| a.0 % 3 == 0).unwrap();
        let b = scan("x", ["a"], &v, mode, 2, |[a]| a.0 % 3 == 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.instances_checked, 500);
        assert!(a.counterexamples.len() <= MAX_COUNTEREXAMPLES);
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        let v = Vocabulary::new(&["a", "b", "c"]).unwrap();
        assert!(scan("x", ["a", "b", "c"], &v, Mode::Exhaustive, 2, |_| false).is_err());
    }
}
