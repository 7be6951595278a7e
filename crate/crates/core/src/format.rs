//! Text formats for entrenchment bases, subset orders, explicit tables and
//! conditional knowledge bases.
//!
//! Every document starts with `vars: <name> ...`; `#` starts a comment. An
//! optional `kind:` line selects the body; without one, a body containing
//! `|~` is a conditional knowledge base and anything else is a generator
//! base.
//!
//! ```text
//! kind: generators     <formula> <= <formula>     (one generator per line)
//! kind: conditionals   <formula> |~ <formula>
//! kind: subsets        <formula>                  (a <= b iff every subset entailing a entails b)
//! kind: relation       <lhs mask>: <row bitset>   (explicit a <= b table)
//! kind: inference      <lhs mask>: <row bitset>   (explicit a |~ b table)
//! ```
//!
//! Table rows are hex: bit `k` of the row is set iff the left-hand mask is
//! related to mask `k`. Missing rows are empty.

use crate::bridge::{ConditionalKB, InferenceTable};
use crate::entrenchment::{example5_oracle, EntrenchmentOracle, GeneratorBase, TABLE_MAX_VARS};
use crate::error::{Error, Result};
use crate::formula::{parse, Formula, Vocabulary};
use crate::relation::Relation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    Generators,
    Conditionals,
    Subsets,
    Relation,
    Inference,
}

impl DocumentKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DocumentKind::Generators => "generators",
            DocumentKind::Conditionals => "conditionals",
            DocumentKind::Subsets => "subsets",
            DocumentKind::Relation => "relation",
            DocumentKind::Inference => "inference",
        }
    }

    fn from_keyword(s: &str) -> Option<Self> {
        [
            DocumentKind::Generators,
            DocumentKind::Conditionals,
            DocumentKind::Subsets,
            DocumentKind::Relation,
            DocumentKind::Inference,
        ]
        .into_iter()
        .find(|k| k.keyword() == s)
    }
}

#[derive(Debug)]
pub enum Document {
    Generators(GeneratorBase),
    Conditionals(ConditionalKB),
    Subsets { vocab: Vocabulary, formulas: Vec<Formula> },
    Relation(EntrenchmentOracle),
    Inference(InferenceTable),
}

impl Document {
    pub fn vocab(&self) -> &Vocabulary {
        match self {
            Document::Generators(b) => b.vocab(),
            Document::Conditionals(kb) => &kb.vocab,
            Document::Subsets { vocab, .. } => vocab,
            Document::Relation(o) => o.vocab(),
            Document::Inference(t) => crate::bridge::InferenceService::vocab(t),
        }
    }

    pub fn kind(&self) -> DocumentKind {
        match self {
            Document::Generators(_) => DocumentKind::Generators,
            Document::Conditionals(_) => DocumentKind::Conditionals,
            Document::Subsets { .. } => DocumentKind::Subsets,
            Document::Relation(_) => DocumentKind::Relation,
            Document::Inference(_) => DocumentKind::Inference,
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn located(line: usize, e: Error) -> Error {
    match e {
        Error::Format { .. } => e,
        other => Error::Format { line, message: other.to_string() },
    }
}

fn split_pair<'a>(line: usize, text: &'a str, separators: &[&str]) -> Result<(&'a str, &'a str)> {
    for sep in separators {
        if let Some((l, r)) = text.split_once(sep) {
            return Ok((l.trim(), r.trim()));
        }
    }
    Err(Error::Format { line, message: format!("expected `<formula> {} <formula>`", separators[0]) })
}

/// Parses any supported document. `extended_cap` admits five variables.
pub fn parse_document(text: &str, extended_cap: bool) -> Result<Document> {
    let mut lines = content_lines(text).peekable();
    let (header_line, header) = lines.next().ok_or(Error::Format { line: 1, message: "empty document".into() })?;
    let names = header
        .strip_prefix("vars:")
        .ok_or(Error::Format { line: header_line, message: "expected `vars: <name> ...`".into() })?;
    let names: Vec<&str> = names.split_whitespace().collect();
    let vocab = if extended_cap { Vocabulary::with_extended_cap(&names) } else { Vocabulary::new(&names) }
        .map_err(|e| located(header_line, e))?;

    let mut kind = None;
    if let Some(&(line, text)) = lines.peek() {
        if let Some(k) = text.strip_prefix("kind:") {
            kind = Some(
                DocumentKind::from_keyword(k.trim())
                    .ok_or(Error::Format { line, message: format!("unknown document kind `{}`", k.trim()) })?,
            );
            lines.next();
        }
    }
    let body: Vec<(usize, &str)> = lines.collect();
    let kind = kind.unwrap_or_else(|| {
        if body.iter().any(|(_, l)| l.contains("|~")) {
            DocumentKind::Conditionals
        } else {
            DocumentKind::Generators
        }
    });
    let formula = |line: usize, s: &str| parse(s, &vocab).map_err(|e| located(line, e));

    match kind {
        DocumentKind::Generators => {
            let mut pairs = Vec::with_capacity(body.len());
            for &(line, text) in &body {
                let (l, r) = split_pair(line, text, &["<=", "≤"])?;
                pairs.push((formula(line, l)?, formula(line, r)?));
            }
            Ok(Document::Generators(GeneratorBase::new(vocab.clone(), pairs)?))
        }
        DocumentKind::Conditionals => {
            let mut conditionals = Vec::with_capacity(body.len());
            for &(line, text) in &body {
                let (l, r) = split_pair(line, text, &["|~"])?;
                conditionals.push((formula(line, l)?, formula(line, r)?));
            }
            Ok(Document::Conditionals(ConditionalKB { vocab: vocab.clone(), conditionals }))
        }
        DocumentKind::Subsets => {
            let formulas = body.iter().map(|&(line, text)| formula(line, text)).collect::<Result<Vec<_>>>()?;
            Ok(Document::Subsets { vocab, formulas })
        }
        DocumentKind::Relation | DocumentKind::Inference => {
            let alg = vocab.algebra();
            alg.require_vars(TABLE_MAX_VARS, "table documents").map_err(|e| located(header_line, e))?;
            let size = alg.size() as usize;
            let mut relation = Relation::empty(size);
            for &(line, text) in &body {
                let bad = |message: String| Error::Format { line, message };
                let (lhs, row) = text.split_once(':').ok_or_else(|| bad("expected `<mask>: <row>`".into()))?;
                let lhs = u32::from_str_radix(lhs.trim().trim_start_matches("0x"), 16)
                    .map_err(|_| bad(format!("bad mask `{}`", lhs.trim())))?;
                if lhs as usize >= size {
                    return Err(bad(format!("mask 0x{lhs:X} outside the algebra")));
                }
                if !relation.set_row_hex(lhs as usize, row.trim()) {
                    return Err(bad(format!("bad row `{}`", row.trim())));
                }
            }
            if kind == DocumentKind::Relation {
                Ok(Document::Relation(EntrenchmentOracle::table(vocab, relation)?))
            } else {
                Ok(Document::Inference(InferenceTable::new(vocab, relation)?))
            }
        }
    }
}

/// Oracle for an ordering document; `None` for inference tables and
/// knowledge bases, which need a translation first.
pub fn oracle_of(doc: Document) -> Result<std::result::Result<EntrenchmentOracle, Document>> {
    Ok(match doc {
        Document::Generators(base) => Ok(EntrenchmentOracle::closure(base)),
        Document::Subsets { vocab, formulas } => Ok(example5_oracle(&formulas, &vocab)?),
        Document::Relation(o) => Ok(o),
        other => Err(other),
    })
}

pub fn render_generators(base: &GeneratorBase) -> String {
    let v = base.vocab();
    let mut out = format!("vars: {v}\n");
    for (l, r) in base.pairs() {
        out.push_str(&format!("{} <= {}\n", l.render(v), r.render(v)));
    }
    out
}

/// Table document for a relation; only nonempty rows are written.
pub fn render_table(vocab: &Vocabulary, relation: &Relation, kind: DocumentKind) -> String {
    let alg = vocab.algebra();
    let mut out = format!("vars: {vocab}\nkind: {}\n", kind.keyword());
    for a in 0..relation.size() {
        if relation.successors(a).next().is_some() {
            out.push_str(&format!("{}: {}\n", alg.hex(crate::formula::TruthMask(a as u32)), relation.row_hex(a)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::TruthMask;

    #[test]
    fn figure1_document() {
        let doc = parse_document(crate::fixtures::FIGURE1, false).unwrap();
        let Document::Generators(base) = doc else { panic!("wrong kind") };
        assert_eq!(base.pairs().len(), 5);
        assert_eq!(base.vocab().names(), ["p", "b", "f"]);
    }

    #[test]
    fn kb_detection_and_errors() {
        let doc = parse_document("vars: p b\np |~ b\n", false).unwrap();
        assert_eq!(doc.kind(), DocumentKind::Conditionals);
        assert!(matches!(parse_document("p <= q", false), Err(Error::Format { line: 1, .. })));
        match parse_document("vars: p\n# c\nx <= p\n", false) {
            Err(Error::Format { line: 3, message }) => assert!(message.contains("unknown variable `x`")),
            other => panic!("{other:?}"),
        }
        assert!(parse_document("vars: p\nkind: nonsense\n", false).is_err());
        assert!(parse_document("vars: a b c d e\n", false).is_err());
        assert!(parse_document("vars: a b c d e\n", true).is_ok());
    }

    #[test]
    fn tables_round_trip() {
        let v = Vocabulary::new(&["p", "q"]).unwrap();
        let r = Relation::from_fn(16, |a, b| a.entails(b) || b.0 == 3);
        let text = render_table(&v, &r, DocumentKind::Relation);
        let Document::Relation(o) = parse_document(&text, false).unwrap() else { panic!() };
        assert_eq!(o.materialize().unwrap(), &r);
        assert!(o.leq(TruthMask(0xF), TruthMask(3)));
        assert!(parse_document("vars: p\nkind: relation\n0x9: 0x1\n", false).is_err());
        assert!(parse_document("vars: p\nkind: relation\n0x1: 0x10\n", false).is_err());
    }

    #[test]
    fn generators_render_back() {
        let Document::Generators(base) = parse_document(crate::fixtures::FIGURE1, false).unwrap() else { panic!() };
        let again = parse_document(&render_generators(&base), false).unwrap();
        let Document::Generators(again) = again else { panic!() };
        assert_eq!(again, base);
    }
}
