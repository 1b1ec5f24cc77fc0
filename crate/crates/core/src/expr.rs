//! Knot expressions: formal connected sums of signed torus knots and named
//! knots.
//!
//! Simplification is purely syntactic. `K # -K` merges to the empty sum only
//! because the two terms share a base, never because the sum is slice.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::ParseError;

/// Largest accepted |coefficient| and torus index.
pub const MAX_COEFF: u64 = 1_000_000;
pub const MAX_INDEX: u64 = 1_000_000;

/// Name reserved for the unknot.
pub const UNKNOT_NAME: &str = "U";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusKnot {
    p: u64,
    q: u64,
}

impl TorusKnot {
    pub fn new(p: u64, q: u64) -> Result<Self, ParseError> {
        if p < 1 || q < 1 {
            return Err(ParseError::IndexTooSmall { p, q });
        }
        for v in [p, q] {
            if v > MAX_INDEX {
                return Err(ParseError::OutOfRange { value: v, bound: MAX_INDEX });
            }
        }
        let gcd = p.gcd(&q);
        if gcd != 1 {
            return Err(ParseError::NotCoprime { p, q, gcd });
        }
        Ok(TorusKnot { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `T(p,q) = T(q,p)`; the normalized form has `p <= q`.
    pub fn normalized(self) -> Self {
        if self.p <= self.q {
            self
        } else {
            TorusKnot { p: self.q, q: self.p }
        }
    }

    pub fn is_unknot(&self) -> bool {
        self.p == 1 || self.q == 1
    }
}

impl fmt::Display for TorusKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{})", self.p, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NamedKnot(String);

impl NamedKnot {
    pub fn new(name: impl Into<String>) -> Self {
        NamedKnot(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_unknot(&self) -> bool {
        self.0 == UNKNOT_NAME
    }
}

/// Torus knots sort before named knots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    Torus(TorusKnot),
    Named(NamedKnot),
}

impl Base {
    pub fn is_unknot(&self) -> bool {
        match self {
            Base::Torus(t) => t.is_unknot(),
            Base::Named(n) => n.is_unknot(),
        }
    }

    fn normalized(&self) -> Base {
        match self {
            Base::Torus(t) => Base::Torus(t.normalized()),
            Base::Named(n) => Base::Named(n.clone()),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Torus(t) => t.fmt(f),
            Base::Named(n) => f.write_str(n.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: i64,
    pub base: Base,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct KnotExpr {
    terms: Vec<Term>,
}

impl KnotExpr {
    pub fn unknot() -> Self {
        KnotExpr::default()
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        KnotExpr { terms }
    }

    pub fn torus(coeff: i64, p: u64, q: u64) -> Result<Self, ParseError> {
        Ok(KnotExpr {
            terms: vec![Term { coeff, base: Base::Torus(TorusKnot::new(p, q)?) }],
        })
    }

    pub fn named(coeff: i64, name: &str) -> Self {
        KnotExpr {
            terms: vec![Term { coeff, base: Base::Named(NamedKnot::new(name)) }],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Formal connected sum (concatenation of terms).
    pub fn sum(&self, other: &KnotExpr) -> KnotExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        KnotExpr { terms }
    }

    /// Canonical form: bases normalized, equal bases merged, zero
    /// coefficients and unknot bases dropped, terms ordered by base.
    pub fn normalize(&self) -> KnotExpr {
        let mut merged: Vec<Term> = Vec::new();
        let mut bases: Vec<(Base, i64)> = self
            .terms
            .iter()
            .filter(|t| !t.base.is_unknot())
            .map(|t| (t.base.normalized(), t.coeff))
            .collect();
        bases.sort_by(|a, b| a.0.cmp(&b.0));
        for (base, coeff) in bases {
            match merged.last_mut() {
                Some(last) if last.base == base => last.coeff += coeff,
                _ => merged.push(Term { coeff, base }),
            }
        }
        merged.retain(|t| t.coeff != 0);
        KnotExpr { terms: merged }
    }

    /// Mirror image: every coefficient negated.
    pub fn mirror(&self) -> KnotExpr {
        KnotExpr {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: -t.coeff, base: t.base.clone() })
                .collect(),
        }
    }

    /// Deterministic rendering; `"U"` for the empty sum.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return UNKNOT_NAME.to_string();
        }
        self.terms
            .iter()
            .map(|t| match t.coeff {
                1 => t.base.to_string(),
                -1 => format!("-{}", t.base),
                c => format!("{c}*{}", t.base),
            })
            .collect::<Vec<_>>()
            .join(" # ")
    }

    pub fn named_bases(&self) -> impl Iterator<Item = &NamedKnot> {
        self.terms.iter().filter_map(|t| match &t.base {
            Base::Named(n) => Some(n),
            Base::Torus(_) => None,
        })
    }
}

impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses without checking names against any registry.
impl FromStr for KnotExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s, &|_| true)
    }
}

/// Parses `text`; `known` decides which names resolve. The unknot name
/// `U` always resolves.
pub fn parse(text: &str, known: &dyn Fn(&str) -> bool) -> Result<KnotExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let mut terms = vec![p.term(known)?];
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'#') => {
                p.pos += 1;
                terms.push(p.term(known)?);
            }
            Some(c) => return Err(p.err(format!("expected `#` or end of input, found `{}`", c as char))),
        }
    }
    Ok(KnotExpr { terms })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse::<u64>().map_err(|_| ParseError::Syntax {
            pos: start,
            msg: format!("integer `{digits}` is too large"),
        })
    }

    /// Word of `[A-Za-z0-9_]`; names may start with a digit (`4_1`).
    fn word(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii word")
    }

    fn term(&mut self, known: &dyn Fn(&str) -> bool) -> Result<Term, ParseError> {
        self.skip_ws();
        let mut sign = 1i64;
        match self.peek() {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        self.skip_ws();

        // A leading run of digits is a multiplier only when `*` follows it.
        let mut coeff = 1u64;
        let save = self.pos;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n = self.integer()?;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                if n == 0 {
                    return Err(ParseError::Syntax { pos: save, msg: "coefficient must be nonzero".into() });
                }
                if n > MAX_COEFF {
                    return Err(ParseError::OutOfRange { value: n, bound: MAX_COEFF });
                }
                coeff = n;
            } else {
                self.pos = save;
            }
        }

        self.skip_ws();
        let word = self.word().to_string();
        if word.is_empty() {
            return Err(self.err("expected `T(p,q)` or a knot name"));
        }
        self.skip_ws();
        let base = if word == "T" && self.peek() == Some(b'(') {
            self.pos += 1;
            let p = self.integer()?;
            self.expect(b',')?;
            let q = self.integer()?;
            self.expect(b')')?;
            Base::Torus(TorusKnot::new(p, q)?)
        } else {
            if word != UNKNOT_NAME && !known(&word) {
                return Err(ParseError::UnknownName(word));
            }
            Base::Named(NamedKnot::new(word))
        };
        Ok(Term { coeff: sign * coeff as i64, base })
    }
}
