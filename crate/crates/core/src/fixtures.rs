//! Shipped fixtures, embedded so tests and the CLI agree on their content.

use crate::entrenchment::{EntrenchmentOracle, GeneratorBase};
use crate::format::{parse_document, Document};

pub const FIGURE1: &str = include_str!("../../../fixtures/figure1.ent");
pub const EXAMPLE5: &str = include_str!("../../../fixtures/example5");
pub const CHAIN1: &str = include_str!("../../../fixtures/chain1.ent");

fn base(text: &str) -> GeneratorBase {
    match parse_document(text, false).expect("shipped fixture parses") {
        Document::Generators(b) => b,
        other => panic!("fixture is not a generator base: {:?}", other.kind()),
    }
}

/// Birds, flying and penguins over `(p, b, f)`.
pub fn figure1_base() -> GeneratorBase {
    base(FIGURE1)
}

/// `{false, !p} < p < true` over `(p)`.
pub fn chain1_base() -> GeneratorBase {
    base(CHAIN1)
}

/// Subset order over `D = {phi, phi | psi | chi}`.
pub fn example5_oracle() -> EntrenchmentOracle {
    let doc = parse_document(EXAMPLE5, false).expect("shipped fixture parses");
    crate::format::oracle_of(doc).expect("subset order builds").expect("subset order is an ordering")
}
