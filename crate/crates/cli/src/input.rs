use std::path::Path;
use std::sync::Arc;

use entrench_core::audit::Target;
use entrench_core::bridge::InferenceService;
use entrench_core::fixtures;
use entrench_core::format::{oracle_of, parse_document, Document};
use entrench_core::{EntrenchmentOracle, Error, Result};

/// Shipped fixtures addressable by id instead of a path.
const FIXTURE_IDS: [(&str, &str); 3] =
    [("figure1", fixtures::FIGURE1), ("example5", fixtures::EXAMPLE5), ("chain1", fixtures::CHAIN1)];

pub fn read_input(spec: &str) -> std::result::Result<String, String> {
    let path = Path::new(spec);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| format!("cannot read {spec}: {e}"));
    }
    FIXTURE_IDS
        .iter()
        .find(|(id, _)| *id == spec)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| format!("no such file or fixture id: {spec}"))
}

pub fn load(spec: &str, allow_five: bool) -> std::result::Result<Document, String> {
    let text = read_input(spec)?;
    parse_document(&text, allow_five).map_err(|e| e.to_string())
}

/// Ordering for any document that describes one; inference tables are read
/// through the P-translation.
pub fn oracle(doc: Document) -> Result<EntrenchmentOracle> {
    match oracle_of(doc)? {
        Ok(o) => Ok(o),
        Err(Document::Inference(t)) => Ok(entrench_core::bridge::p_translate(Arc::new(t))),
        Err(other) => Err(Error::Format {
            line: 1,
            message: format!("a `{}` document does not define an ordering", other.kind().keyword()),
        }),
    }
}

pub fn target(doc: Document) -> Result<Target> {
    match doc {
        Document::Generators(base) => Target::from_base(base),
        Document::Inference(t) => Ok(Target::from_service(Arc::new(t) as Arc<dyn InferenceService>)),
        other => Target::from_oracle(oracle(other)?),
    }
}
