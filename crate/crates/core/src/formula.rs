//! Propositional syntax over a small fixed vocabulary, and its exact
//! semantics as truth-table bitmasks.
//!
//! Bit-order convention: valuation index `v` assigns variable `j` the value
//! of bit `j` of `v`, and bit `v` of a [`TruthMask`] is set iff the formula
//! holds under that valuation. With vocabulary `(p, b, f)` this makes
//! `p = 0xAA`, `b = 0xCC` and `f = 0xF0`.
//!
//! Grammar (loosest binding first):
//!
//! ```text
//! implication := disjunction ( ("->" | "→") implication )?
//! disjunction := conjunction ( ("|" | "∨") conjunction )*
//! conjunction := unary ( ("&" | "∧") unary )*
//! unary       := ("!" | "~" | "¬") unary | atom
//! atom        := "true" | "⊤" | "false" | "⊥" | identifier | "(" implication ")"
//! ```
//!
//! `&` and `|` associate to the left, `->` to the right. Identifiers match
//! `[a-z_][a-z0-9_]*`. Rendering always emits the ASCII spellings with the
//! fewest parentheses that parse back to the same tree.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on the number of variables.
pub const DEFAULT_MAX_VARS: usize = 4;
/// Hard cap, reachable only through [`Vocabulary::with_extended_cap`].
pub const EXTENDED_MAX_VARS: usize = 5;

/// Ordered set of distinct propositional variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Vocabulary {
    names: Vec<String>,
}

impl Vocabulary {
    /// Builds a vocabulary of at most [`DEFAULT_MAX_VARS`] variables.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::build(names, DEFAULT_MAX_VARS)
    }

    /// Same as [`Vocabulary::new`] but admits up to five variables. Full
    /// algebra scans are refused at that width.
    pub fn with_extended_cap<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::build(names, EXTENDED_MAX_VARS)
    }

    fn build<S: AsRef<str>>(names: &[S], cap: usize) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidVocabulary("at least one variable is required".into()));
        }
        if names.len() > cap {
            return Err(Error::VocabularyTooLarge { n: names.len(), cap, what: "vocabulary".into() });
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            if !is_identifier(name) || is_keyword(name) {
                return Err(Error::InvalidVocabulary(format!("`{name}` is not a valid variable name")));
            }
            if out.iter().any(|n| n == name) {
                return Err(Error::InvalidVocabulary(format!("duplicate variable `{name}`")));
            }
            out.push(name.to_string());
        }
        Ok(Self { names: out })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn algebra(&self) -> Algebra {
        Algebra { vars: self.names.len() }
    }

    /// Parses `text` against this vocabulary.
    pub fn parse(&self, text: &str) -> Result<Formula> {
        parse(text, self)
    }

    /// Truth mask of a formula given as text.
    pub fn mask_of(&self, text: &str) -> Result<TruthMask> {
        Ok(truth_mask(&self.parse(text)?, self))
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "true" | "false")
}

/// Semantic identity of a sentence: the set of valuations satisfying it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct TruthMask(pub u32);

impl TruthMask {
    pub const BOTTOM: TruthMask = TruthMask(0);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn meet(self, other: TruthMask) -> TruthMask {
        TruthMask(self.0 & other.0)
    }

    pub fn join(self, other: TruthMask) -> TruthMask {
        TruthMask(self.0 | other.0)
    }

    /// Every model of `self` is a model of `other`.
    pub fn entails(self, other: TruthMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Entails `other` and differs from it.
    pub fn strictly_entails(self, other: TruthMask) -> bool {
        self != other && self.entails(other)
    }

    pub fn is_bottom(self) -> bool {
        self.0 == 0
    }

    pub fn count_models(self) -> u32 {
        self.0.count_ones()
    }

    /// Index into the enumeration of the algebra.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Every model of `a` is a model of `b`.
pub fn entails(a: TruthMask, b: TruthMask) -> bool {
    a.entails(b)
}

/// The Lindenbaum algebra of an `n`-variable vocabulary, as truth masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Algebra {
    vars: usize,
}

impl Algebra {
    pub fn new(vars: usize) -> Self {
        assert!((1..=EXTENDED_MAX_VARS).contains(&vars), "unsupported width {vars}");
        Self { vars }
    }

    pub fn vars(self) -> usize {
        self.vars
    }

    /// Number of valuations, `2^n`.
    pub fn valuations(self) -> u32 {
        1 << self.vars
    }

    /// Number of algebra elements, `2^(2^n)`.
    pub fn size(self) -> u64 {
        1u64 << self.valuations()
    }

    pub fn top(self) -> TruthMask {
        TruthMask(if self.vars == 5 { u32::MAX } else { (1u32 << self.valuations()) - 1 })
    }

    pub fn bottom(self) -> TruthMask {
        TruthMask::BOTTOM
    }

    pub fn not(self, a: TruthMask) -> TruthMask {
        TruthMask(!a.0 & self.top().0)
    }

    pub fn meet(self, a: TruthMask, b: TruthMask) -> TruthMask {
        a.meet(b)
    }

    pub fn join(self, a: TruthMask, b: TruthMask) -> TruthMask {
        a.join(b)
    }

    pub fn arrow(self, a: TruthMask, b: TruthMask) -> TruthMask {
        self.not(a).join(b)
    }

    /// Mask of the `j`-th variable.
    pub fn var(self, j: usize) -> TruthMask {
        let mut bits = 0u32;
        for v in 0..self.valuations() {
            if v >> j & 1 == 1 {
                bits |= 1 << v;
            }
        }
        TruthMask(bits)
    }

    /// Fails unless a full scan of the algebra is allowed at this width.
    pub fn require_vars(self, cap: usize, what: &str) -> Result<()> {
        if self.vars > cap {
            Err(Error::VocabularyTooLarge { n: self.vars, cap, what: what.to_string() })
        } else {
            Ok(())
        }
    }

    /// All `2^(2^n)` masks in ascending numeric order.
    pub fn elements(self) -> Result<impl Iterator<Item = TruthMask> + Clone> {
        self.require_vars(DEFAULT_MAX_VARS, "algebra enumeration")?;
        Ok((0..self.size() as u32).map(TruthMask))
    }

    /// Hex rendering padded to the mask width.
    pub fn hex(self, m: TruthMask) -> String {
        let digits = (self.valuations() as usize).div_ceil(4);
        format!("0x{:0width$X}", m.0, width = digits)
    }
}

/// All masks of the vocabulary's algebra in ascending order.
pub fn enumerate_algebra(vocab: &Vocabulary) -> Result<Vec<TruthMask>> {
    Ok(vocab.algebra().elements()?.collect())
}

/// Propositional formula. Variables are indices into the bound vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Var(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Largest variable index plus one, or zero for closed formulas.
    pub fn width(&self) -> usize {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Var(i) => i + 1,
            Formula::Not(a) => a.width(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.width().max(b.width()),
        }
    }

    /// Recursive evaluation under a single valuation index.
    pub fn eval(&self, valuation: u32) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Var(i) => valuation >> i & 1 == 1,
            Formula::Not(a) => !a.eval(valuation),
            Formula::And(a, b) => a.eval(valuation) && b.eval(valuation),
            Formula::Or(a, b) => a.eval(valuation) || b.eval(valuation),
            Formula::Implies(a, b) => !a.eval(valuation) || b.eval(valuation),
        }
    }

    /// Canonical ASCII rendering with minimal parentheses.
    pub fn render(&self, vocab: &Vocabulary) -> String {
        let mut out = String::new();
        self.render_into(vocab, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            _ => 5,
        }
    }

    fn render_into(&self, vocab: &Vocabulary, out: &mut String) {
        let child = |f: &Formula, parens: bool, out: &mut String| {
            if parens {
                out.push('(');
                f.render_into(vocab, out);
                out.push(')');
            } else {
                f.render_into(vocab, out);
            }
        };
        let p = self.precedence();
        match self {
            Formula::True => out.push_str("true"),
            Formula::False => out.push_str("false"),
            Formula::Var(i) => out.push_str(vocab.name(*i)),
            Formula::Not(a) => {
                out.push('!');
                child(a, a.precedence() < p, out);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let op = if matches!(self, Formula::And(..)) { " & " } else { " | " };
                child(a, a.precedence() < p, out);
                out.push_str(op);
                child(b, b.precedence() <= p, out);
            }
            Formula::Implies(a, b) => {
                child(a, a.precedence() <= p, out);
                out.push_str(" -> ");
                child(b, b.precedence() < p, out);
            }
        }
    }
}

/// Bit `v` is set iff `f` holds under valuation `v`.
pub fn truth_mask(f: &Formula, vocab: &Vocabulary) -> TruthMask {
    let alg = vocab.algebra();
    match f {
        Formula::True => alg.top(),
        Formula::False => alg.bottom(),
        Formula::Var(i) => alg.var(*i),
        Formula::Not(a) => alg.not(truth_mask(a, vocab)),
        Formula::And(a, b) => truth_mask(a, vocab).meet(truth_mask(b, vocab)),
        Formula::Or(a, b) => truth_mask(a, vocab).join(truth_mask(b, vocab)),
        Formula::Implies(a, b) => alg.arrow(truth_mask(a, vocab), truth_mask(b, vocab)),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    True,
    False,
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::True => "`true`".into(),
            Token::False => "`false`".into(),
            Token::Ident(s) => format!("`{s}`"),
            Token::Not => "`!`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Implies => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let token = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '!' | '~' | '¬' => Token::Not,
            '&' | '∧' => Token::And,
            '|' | '∨' => Token::Or,
            '→' => Token::Implies,
            '⊤' => Token::True,
            '⊥' => Token::False,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => Token::Implies,
                    other => {
                        return Err(Error::Syntax {
                            position: pos + 1,
                            expected: vec!["`>`".into()],
                            found: other.map_or("end of input".into(), |(_, c)| format!("`{c}`")),
                        })
                    }
                }
            }
            c if c.is_ascii_lowercase() || c == '_' => {
                let mut ident = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                        ident.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let token = match ident.as_str() {
                    "true" => Token::True,
                    "false" => Token::False,
                    _ => Token::Ident(ident),
                };
                tokens.push((pos, token));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    position: pos,
                    expected: vec!["a formula".into()],
                    found: format!("`{other}`"),
                })
            }
        };
        chars.next();
        tokens.push((pos, token));
    }
    tokens.push((text.len(), Token::End));
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    at: usize,
    vocab: &'a Vocabulary,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].1
    }

    fn bump(&mut self) -> (usize, Token) {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let (position, token) = &self.tokens[self.at];
        Error::Syntax {
            position: *position,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: token.describe(),
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Token::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Token::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Token::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Token::Not {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Token::True => {
                self.bump();
                Ok(Formula::True)
            }
            Token::False => {
                self.bump();
                Ok(Formula::False)
            }
            Token::Ident(name) => {
                self.bump();
                self.vocab.index_of(&name).map(Formula::Var).ok_or(Error::UnknownVariable(name))
            }
            Token::LParen => {
                self.bump();
                let inner = self.implication()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["`)`", "an operator"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(&["a variable", "`true`", "`false`", "`!`", "`(`"])),
        }
    }
}

/// Parses `text` into a formula over `vocab`.
pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Formula> {
    let mut parser = Parser { tokens: tokenize(text)?, at: 0, vocab };
    let f = parser.implication()?;
    if *parser.peek() != Token::End {
        return Err(parser.error(&["an operator", "end of input"]));
    }
    Ok(f)
}

/// A deterministic, reasonably short formula denoting `m`: a disjunction of
/// prime implicants chosen greedily (essential primes first), literals in
/// vocabulary order.
pub fn formula_of_mask(m: TruthMask, vocab: &Vocabulary) -> Formula {
    let alg = vocab.algebra();
    if m.is_bottom() {
        return Formula::False;
    }
    if m == alg.top() {
        return Formula::True;
    }
    let n = alg.vars();
    // A cube is (care, value): variables in `care` are fixed to `value`.
    let cube_mask = |care: u32, value: u32| -> u32 {
        let mut bits = 0u32;
        for v in 0..alg.valuations() {
            if v & care == value {
                bits |= 1 << v;
            }
        }
        bits
    };
    let mut implicants: Vec<(u32, u32, u32)> = Vec::new();
    for care in 0..(1u32 << n) {
        let mut value = care;
        loop {
            let bits = cube_mask(care, value);
            if bits & !m.0 == 0 {
                implicants.push((care, value, bits));
            }
            if value == 0 {
                break;
            }
            value = (value - 1) & care;
        }
    }
    let primes: Vec<(u32, u32, u32)> = implicants
        .iter()
        .copied()
        .filter(|&(_, _, bits)| !implicants.iter().any(|&(_, _, other)| other != bits && bits & !other == 0))
        .collect();

    let mut chosen: Vec<(u32, u32, u32)> = Vec::new();
    let mut uncovered = m.0;
    for v in 0..alg.valuations() {
        if uncovered >> v & 1 == 0 {
            continue;
        }
        let covering: Vec<_> = primes.iter().filter(|p| p.2 >> v & 1 == 1).collect();
        if covering.len() == 1 {
            chosen.push(*covering[0]);
            uncovered &= !covering[0].2;
        }
    }
    while uncovered != 0 {
        let best = primes
            .iter()
            .copied()
            .max_by_key(|p| ((p.2 & uncovered).count_ones(), std::cmp::Reverse((p.0.count_ones(), p.0, p.1))))
            .expect("primes cover the mask");
        chosen.push(best);
        uncovered &= !best.2;
    }
    chosen.sort_by_key(|&(care, value, _)| (care.count_ones(), literal_order_key(care, value, n)));
    chosen.dedup();

    let term = |care: u32, value: u32| -> Formula {
        (0..n)
            .filter(|j| care >> j & 1 == 1)
            .map(|j| if value >> j & 1 == 1 { Formula::Var(j) } else { Formula::not(Formula::Var(j)) })
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    };
    chosen.into_iter().map(|(care, value, _)| term(care, value)).reduce(Formula::or).unwrap_or(Formula::False)
}

fn literal_order_key(care: u32, value: u32, n: usize) -> Vec<u8> {
    (0..n)
        .map(|j| match (care >> j & 1, value >> j & 1) {
            (1, 1) => 0,
            (1, _) => 1,
            _ => 2,
        })
        .collect()
}

/// Rendered canonical formula of a mask.
pub fn describe_mask(m: TruthMask, vocab: &Vocabulary) -> String {
    formula_of_mask(m, vocab).render(vocab)
}
