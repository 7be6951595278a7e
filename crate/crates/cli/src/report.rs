//! Machine-readable reports. Masks are hex strings padded to the width of
//! the vocabulary; every report names its vocabulary.

use serde::Serialize;
use serde_json::Value;

use entrench_core::verdict::Witness;
use entrench_core::{Mode, TruthMask, Verdict, Vocabulary};

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub vocab: Vec<String>,
    pub result: Value,
    pub witnesses: Vec<WitnessEntry>,
    pub counterexamples: Vec<CounterexampleEntry>,
    pub mode: Mode,
    pub timing_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessEntry {
    pub role: String,
    pub mask: String,
    pub formula: String,
}

impl WitnessEntry {
    pub fn new(vocab: &Vocabulary, role: &str, m: TruthMask) -> Self {
        Self { role: role.to_string(), mask: hex(vocab, m), formula: entrench_core::formula::describe_mask(m, vocab) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleEntry {
    pub law: String,
    pub roles: Vec<String>,
    pub masks: Vec<String>,
    pub formulas: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CounterexampleEntry {
    pub fn new(vocab: &Vocabulary, law: &str, w: &Witness) -> Self {
        Self {
            law: law.to_string(),
            roles: w.roles.clone(),
            masks: w.masks.iter().map(|&m| hex(vocab, m)).collect(),
            formulas: w.formulas.clone(),
            note: w.note.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerdictEntry {
    pub law: String,
    pub pass: bool,
    pub instances_checked: u64,
    pub violations: u64,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    pub counterexamples: Vec<CounterexampleEntry>,
}

impl VerdictEntry {
    pub fn new(vocab: &Vocabulary, v: &Verdict) -> Self {
        Self {
            law: v.law.clone(),
            pass: v.pass,
            instances_checked: v.instances_checked,
            violations: v.violations,
            informational: v.informational,
            counterexamples: v.counterexamples.iter().map(|w| CounterexampleEntry::new(vocab, &v.law, w)).collect(),
        }
    }
}

pub fn hex(vocab: &Vocabulary, m: TruthMask) -> String {
    vocab.algebra().hex(m)
}

pub fn masks(vocab: &Vocabulary, ms: &[TruthMask]) -> Vec<String> {
    ms.iter().map(|&m| hex(vocab, m)).collect()
}

/// `0x40 (!p & b & f)`.
pub fn labelled(vocab: &Vocabulary, m: TruthMask) -> String {
    format!("{} ({})", hex(vocab, m), entrench_core::formula::describe_mask(m, vocab))
}

pub fn verdict_lines(vocab: &Vocabulary, v: &Verdict, indent: &str, out: &mut String) {
    let status = match (v.pass, v.informational) {
        (true, _) => "pass",
        (false, true) => "fail (informational)",
        (false, false) => "FAIL",
    };
    out.push_str(&format!(
        "{indent}{}: {status} ({} instances, {} violations)\n",
        v.law, v.instances_checked, v.violations
    ));
    for w in &v.counterexamples {
        let parts: Vec<String> =
            w.roles.iter().zip(&w.masks).map(|(r, &m)| format!("{r}={}", labelled(vocab, m))).collect();
        out.push_str(&format!("{indent}  counterexample: {}", parts.join(", ")));
        if let Some(note) = &w.note {
            out.push_str(&format!("; {note}"));
        }
        out.push('\n');
    }
}
