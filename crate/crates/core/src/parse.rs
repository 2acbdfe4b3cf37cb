//! Text expressions for algebra elements.
//!
//! The grammar, whitespace-insensitive:
//!
//! ```text
//! element := ['-'] term (('+'|'-') term)*
//! term    := atom+                    (optional '*' between atoms)
//! atom    := scalar | phase | '(' element ')' | factor
//! factor  := gen ['*'] ['^' int]     (the '*' right after a generator is
//!                                     the adjoint; elsewhere it separates)
//! gen     := 's' index | 'u' index   ('u' only for indices above l)
//! scalar  := int ['/' int] ['i']     (with an optional '+'/'-' imaginary
//!                                     half: `1/2+1/3i`)
//! phase   := 'w[' i ',' j ']' ['^' int] | 'z[' i ',' j ']' ['^' int]
//!            | 'e[' p '/' q ']'      (the plain torsion phase e^{2πi·p/q})
//! ```
//!
//! Parsing normalizes as it multiplies, so the result is an [`Element`]
//! in canonical form; conversely every `Display` form produced by this
//! crate parses back to the same element. Negative generator powers are
//! only meaningful for unitary indices — `s1^-1` with `l ≥ 1` is the
//! dedicated [`ParseError::UnitaryOnly`] error, as is the `u` alias on an
//! isometry index.

use crate::algebra::{mul, normalize, Element, Letter, Signature, Word};
use crate::phase::{Phase, PhasePolynomial};
use crate::scalar::GaussianRational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("generator index {index} out of range 1..={n} at byte {offset}")]
    IndexOutOfRange { index: usize, n: usize, offset: usize },
    #[error("index {index} is an isometry (l = {l}); inverses and the u-form need a unitary index at byte {offset}")]
    UnitaryOnly { index: usize, l: usize, offset: usize },
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::SyntaxError {
        offset,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum TokKind {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Int(BigInt),
    Rational(BigInt, BigInt),
    Imag,
    Gen { unitary_alias: bool, index: usize },
    PhaseW { i: usize, j: usize },
    PhaseZ { i: usize, j: usize },
    Torsion { turns: BigRational },
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokKind,
    offset: usize,
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        BigInt::parse_bytes(&self.bytes[start..self.pos], 10)
    }

    fn expect_byte(&mut self, b: u8) -> Result<(), ParseError> {
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.pos, format!("expected '{}'", b as char)))
        }
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let offset = self.pos;
        let value = self
            .digits()
            .ok_or_else(|| syntax(offset, "expected an index"))?;
        usize::try_from(&value).map_err(|_| syntax(offset, "index too large"))
    }

    /// `[i,j]` after a w/z marker.
    fn pair(&mut self) -> Result<(usize, usize), ParseError> {
        self.expect_byte(b'[')?;
        let i = self.index()?;
        self.expect_byte(b',')?;
        let j = self.index()?;
        self.expect_byte(b']')?;
        Ok((i, j))
    }

    fn tokenize(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            if self.pos >= self.bytes.len() {
                return Ok(out);
            }
            let offset = self.pos;
            let kind = match self.bytes[self.pos] {
                b'+' => {
                    self.pos += 1;
                    TokKind::Plus
                }
                b'-' => {
                    self.pos += 1;
                    TokKind::Minus
                }
                b'*' => {
                    self.pos += 1;
                    TokKind::Star
                }
                b'^' => {
                    self.pos += 1;
                    TokKind::Caret
                }
                b'(' => {
                    self.pos += 1;
                    TokKind::LParen
                }
                b')' => {
                    self.pos += 1;
                    TokKind::RParen
                }
                b'0'..=b'9' => TokKind::Int(self.digits().expect("digit checked")),
                b'/' => return Err(syntax(offset, "'/' outside a rational literal")),
                b'i' => {
                    self.pos += 1;
                    TokKind::Imag
                }
                b's' | b'u' => {
                    let alias = self.bytes[self.pos] == b'u';
                    self.pos += 1;
                    let index = self.index()?;
                    TokKind::Gen {
                        unitary_alias: alias,
                        index,
                    }
                }
                b'w' => {
                    self.pos += 1;
                    let (i, j) = self.pair()?;
                    TokKind::PhaseW { i, j }
                }
                b'z' => {
                    self.pos += 1;
                    let (i, j) = self.pair()?;
                    TokKind::PhaseZ { i, j }
                }
                b'e' => {
                    self.pos += 1;
                    self.expect_byte(b'[')?;
                    let neg = if self.pos < self.bytes.len() && self.bytes[self.pos] == b'-' {
                        self.pos += 1;
                        true
                    } else {
                        false
                    };
                    let p_off = self.pos;
                    let p = self
                        .digits()
                        .ok_or_else(|| syntax(p_off, "expected a numerator"))?;
                    let q = if self.pos < self.bytes.len() && self.bytes[self.pos] == b'/' {
                        self.pos += 1;
                        let q_off = self.pos;
                        let q = self
                            .digits()
                            .ok_or_else(|| syntax(q_off, "expected a denominator"))?;
                        if q.is_zero() {
                            return Err(syntax(q_off, "zero denominator"));
                        }
                        q
                    } else {
                        BigInt::one()
                    };
                    self.expect_byte(b']')?;
                    let mut turns = BigRational::new(p, q);
                    if neg {
                        turns = -turns;
                    }
                    TokKind::Torsion { turns }
                }
                other => {
                    return Err(syntax(
                        offset,
                        format!("unexpected character '{}'", other as char),
                    ))
                }
            };
            // Rational slashes are folded here so the parser sees whole
            // numbers: `3/4` becomes Int(3), marker, Int(4) is awkward —
            // instead attach the denominator directly.
            out.push(Token { kind, offset });
            if let Some(Token {
                kind: TokKind::Int(_),
                ..
            }) = out.last()
            {
                if self.pos < self.bytes.len() && self.bytes[self.pos] == b'/' {
                    let slash_pos = self.pos;
                    self.pos += 1;
                    let den = self
                        .digits()
                        .ok_or_else(|| syntax(self.pos, "expected a denominator"))?;
                    if den.is_zero() {
                        return Err(syntax(slash_pos + 1, "zero denominator"));
                    }
                    let last = out.pop().expect("just pushed");
                    if let TokKind::Int(num) = last.kind {
                        out.push(Token {
                            kind: TokKind::Rational(num, den),
                            offset: last.offset,
                        });
                    }
                }
            }
        }
    }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    sig: &'a Signature,
    end_offset: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.offset).unwrap_or(self.end_offset)
    }

    /// Optional `^ int`; returns 1 when absent.
    fn exponent(&mut self) -> Result<i64, ParseError> {
        if !matches!(self.peek().map(|t| &t.kind), Some(TokKind::Caret)) {
            return Ok(1);
        }
        self.next();
        let neg = if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Minus)) {
            self.next();
            true
        } else {
            false
        };
        let off = self.here();
        match self.next() {
            Some(Token {
                kind: TokKind::Int(v),
                ..
            }) => {
                let v = i64::try_from(&v).map_err(|_| syntax(off, "exponent too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(syntax(off, "expected an integer exponent")),
        }
    }

    fn check_pair(&self, i: usize, j: usize, offset: usize) -> Result<(), ParseError> {
        let n = self.sig.n();
        for idx in [i, j] {
            if idx < 1 || idx > n {
                return Err(ParseError::IndexOutOfRange { index: idx, n, offset });
            }
        }
        if i == j {
            return Err(syntax(offset, "phase indices must differ"));
        }
        Ok(())
    }

    /// A scalar literal: `int ['/' int] ['i']` with an optional signed
    /// imaginary half (`1/2+1/3i`). The second half is absorbed only when
    /// it ends in `i`, so sums of scalars with elements stay unambiguous.
    fn scalar(&mut self, first: TokKind) -> Result<GaussianRational, ParseError> {
        let lead = self.scalar_part(first)?;
        let mut value = lead;
        if value.im.is_zero() {
            if let Some(sign) = self.peek_scalar_tail() {
                self.next(); // the sign
                let off = self.here();
                let tok = self.next().expect("peeked");
                let part = self.scalar_part(tok.kind)?;
                if part.im.is_zero() {
                    return Err(syntax(off, "expected an imaginary part"));
                }
                let part = if sign < 0 {
                    GaussianRational::new(-part.re, -part.im)
                } else {
                    part
                };
                value = GaussianRational::new(value.re + part.re, value.im + part.im);
            }
        }
        Ok(value)
    }

    /// Looks ahead for `('+'|'-') rational 'i' '*'`. The trailing `*`
    /// restricts absorption to coefficient position; elsewhere the sign
    /// starts a new summand (and for pure scalars the value is the same).
    fn peek_scalar_tail(&self) -> Option<i32> {
        let sign = match self.tokens.get(self.pos).map(|t| &t.kind) {
            Some(TokKind::Plus) => 1,
            Some(TokKind::Minus) => -1,
            _ => return None,
        };
        let mut look = self.pos + 1;
        if matches!(
            self.tokens.get(look).map(|t| &t.kind),
            Some(TokKind::Int(_) | TokKind::Rational(..))
        ) {
            look += 1;
        }
        if !matches!(self.tokens.get(look).map(|t| &t.kind), Some(TokKind::Imag)) {
            return None;
        }
        match self.tokens.get(look + 1).map(|t| &t.kind) {
            Some(TokKind::Star) => Some(sign),
            _ => None,
        }
    }

    fn scalar_part(&mut self, first: TokKind) -> Result<GaussianRational, ParseError> {
        let ratio = match first {
            TokKind::Int(v) => BigRational::from_integer(v),
            TokKind::Rational(num, den) => BigRational::new(num, den),
            TokKind::Imag => return Ok(GaussianRational::i()),
            _ => unreachable!("scalar_part called on a non-numeric token"),
        };
        if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Imag)) {
            self.next();
            Ok(GaussianRational::new(BigRational::zero(), ratio))
        } else {
            Ok(GaussianRational::from_rational(ratio))
        }
    }

    fn atom(&mut self) -> Result<Element, ParseError> {
        let tok = self
            .next()
            .ok_or_else(|| syntax(self.end_offset, "expected an expression"))?;
        match tok.kind {
            TokKind::Int(_) | TokKind::Rational(..) | TokKind::Imag => {
                let c = self.scalar(tok.kind)?;
                Ok(Element::scalar(self.sig, c))
            }
            TokKind::PhaseW { i, j } => {
                self.check_pair(i, j, tok.offset)?;
                let k = self.exponent()?;
                Ok(Element::term(
                    crate::algebra::NormalMonomial::identity(self.sig),
                    PhasePolynomial::phase(&self.sig.angles().w_power(i, j, k)),
                ))
            }
            TokKind::PhaseZ { i, j } => {
                self.check_pair(i, j, tok.offset)?;
                let k = self.exponent()?;
                Ok(Element::term(
                    crate::algebra::NormalMonomial::identity(self.sig),
                    PhasePolynomial::phase(&self.sig.angles().z_power(i, j, k)),
                ))
            }
            TokKind::Torsion { turns } => Ok(Element::term(
                crate::algebra::NormalMonomial::identity(self.sig),
                PhasePolynomial::phase(&Phase::torsion(&turns)),
            )),
            TokKind::LParen => {
                let inner = self.element()?;
                match self.next() {
                    Some(Token {
                        kind: TokKind::RParen,
                        ..
                    }) => Ok(inner),
                    other => Err(syntax(
                        other.map(|t| t.offset).unwrap_or(self.end_offset),
                        "expected ')'",
                    )),
                }
            }
            TokKind::Gen {
                unitary_alias,
                index,
            } => {
                let n = self.sig.n();
                if index < 1 || index > n {
                    return Err(ParseError::IndexOutOfRange {
                        index,
                        n,
                        offset: tok.offset,
                    });
                }
                if unitary_alias && self.sig.is_isometry(index) {
                    return Err(ParseError::UnitaryOnly {
                        index,
                        l: self.sig.l(),
                        offset: tok.offset,
                    });
                }
                let mut star = false;
                if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Star)) {
                    // Only an adjoint when directly attached; a separator
                    // star is re-consumed by the term loop otherwise.
                    star = true;
                    self.next();
                }
                let exp_offset = self.here();
                let exp = self.exponent()?;
                if exp < 0 && self.sig.is_isometry(index) {
                    return Err(ParseError::UnitaryOnly {
                        index,
                        l: self.sig.l(),
                        offset: exp_offset,
                    });
                }
                let letter = Letter {
                    index,
                    star: star != (exp < 0),
                };
                let word = Word::new(vec![letter; exp.unsigned_abs() as usize]);
                let (phase, m) = normalize(self.sig, &word);
                Ok(Element::term(m, PhasePolynomial::phase(&phase)))
            }
            TokKind::Star => Err(syntax(tok.offset, "'*' needs a left factor")),
            TokKind::Caret => Err(syntax(tok.offset, "'^' needs a generator or phase")),
            TokKind::Plus | TokKind::Minus | TokKind::RParen => {
                Err(syntax(tok.offset, "expected a factor"))
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek().map(|t| &t.kind),
            Some(
                TokKind::Int(_)
                    | TokKind::Rational(..)
                    | TokKind::Imag
                    | TokKind::Gen { .. }
                    | TokKind::PhaseW { .. }
                    | TokKind::PhaseZ { .. }
                    | TokKind::Torsion { .. }
                    | TokKind::LParen
            )
        )
    }

    fn term(&mut self) -> Result<Element, ParseError> {
        let mut acc = self.atom()?;
        loop {
            if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Star)) {
                let star_off = self.here();
                self.next();
                if !self.starts_atom() {
                    return Err(syntax(star_off, "'*' needs a right factor"));
                }
                acc = mul(self.sig, &acc, &self.atom()?);
            } else if self.starts_atom() {
                acc = mul(self.sig, &acc, &self.atom()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn element(&mut self) -> Result<Element, ParseError> {
        let mut negate_first = false;
        if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Minus)) {
            self.next();
            negate_first = true;
        }
        let first = self.term()?;
        let mut acc = if negate_first { first.neg() } else { first };
        loop {
            let subtract = match self.peek().map(|t| &t.kind) {
                Some(TokKind::Plus) => false,
                Some(TokKind::Minus) => true,
                _ => return Ok(acc),
            };
            self.next();
            // Tolerate a sign on the summand itself ("+ -2*u1").
            let negated = if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Minus)) {
                self.next();
                true
            } else {
                false
            };
            let t = self.term()?;
            if subtract != negated {
                acc = acc.sub(&t);
            } else {
                acc = acc.add(&t);
            }
        }
    }
}

/// Parses an expression into a canonical-form element over `sig`.
pub fn parse_expression(text: &str, sig: &Signature) -> Result<Element, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        sig,
        end_offset: text.len(),
    };
    let element = parser.element()?;
    if let Some(tok) = parser.peek() {
        return Err(syntax(tok.offset, "unexpected trailing input"));
    }
    Ok(element)
}

/// Parses a plain product of generator letters (no sums, no scalars):
/// the input format of word-level normalization.
pub fn parse_word(text: &str, sig: &Signature) -> Result<Word, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        sig,
        end_offset: text.len(),
    };
    let mut letters = Vec::new();
    while let Some(tok) = parser.next() {
        match tok.kind {
            TokKind::Gen {
                unitary_alias,
                index,
            } => {
                let n = sig.n();
                if index < 1 || index > n {
                    return Err(ParseError::IndexOutOfRange {
                        index,
                        n,
                        offset: tok.offset,
                    });
                }
                if unitary_alias && sig.is_isometry(index) {
                    return Err(ParseError::UnitaryOnly {
                        index,
                        l: sig.l(),
                        offset: tok.offset,
                    });
                }
                let mut star = false;
                if matches!(parser.peek().map(|t| &t.kind), Some(TokKind::Star)) {
                    star = true;
                    parser.next();
                }
                let exp_offset = parser.here();
                let exp = parser.exponent()?;
                if exp < 0 && sig.is_isometry(index) {
                    return Err(ParseError::UnitaryOnly {
                        index,
                        l: sig.l(),
                        offset: exp_offset,
                    });
                }
                let letter = Letter {
                    index,
                    star: star != (exp < 0),
                };
                letters.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
            }
            _ => {
                return Err(syntax(
                    tok.offset,
                    "words are plain products of generator letters",
                ))
            }
        }
    }
    Ok(Word::new(letters))
}
