//! Exact multivariate Laurent polynomials over Q: storage, parsing and
//! canonical formatting.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Integer exponent vector of a monomial. Ordered graded-lexicographically
/// (total degree first, then lexicographic).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(d: usize) -> Self {
        ExponentVector(vec![0; d])
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> i128 {
        self.0.iter().map(|&e| i128::from(e)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }
}

impl Deref for ExponentVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent overflow at position {pos}")]
    ExponentOverflow { pos: usize },
    #[error("invalid variable list: {0}")]
    InvalidVariables(String),
    #[error("variable `{0}` carries a negative exponent and cannot be set to zero")]
    NegativeExponentInZeroedVariable(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Exact Laurent polynomial with rational coefficients. No zero coefficients
/// are stored; terms iterate in ascending graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    variables: Vec<String>,
    terms: BTreeMap<ExponentVector, BigRational>,
}

/// Result of setting a subset of variables to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Restriction {
    Polynomial(LaurentPoly),
    ConstantZero,
    ConstantValue(BigRational),
}

impl LaurentPoly {
    pub fn zero(variables: Vec<String>) -> Result<Self, LaurentError> {
        validate_variables(&variables)?;
        Ok(LaurentPoly {
            variables,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_terms<I>(variables: Vec<String>, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (ExponentVector, BigRational)>,
    {
        let mut p = LaurentPoly::zero(variables)?;
        for (e, c) in terms {
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    pub fn parse(text: &str, variables: &[&str]) -> Result<Self, LaurentError> {
        let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        parse_laurent(text, &vars)
    }

    fn add_term(&mut self, e: ExponentVector, c: BigRational) -> Result<(), LaurentError> {
        if e.dimension() != self.dimension() {
            return Err(LaurentError::DimensionMismatch {
                expected: self.dimension(),
                found: e.dimension(),
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Option<&BigRational> {
        self.terms.get(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(ExponentVector::is_zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    /// Exponents carrying a nonzero coefficient.
    pub fn support(&self) -> BTreeSet<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter_terms<F>(&self, mut keep: F) -> LaurentPoly
    where
        F: FnMut(&ExponentVector) -> bool,
    {
        LaurentPoly {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies the monomial substitution `x^α ↦ y^{α·m}` (`m` is `d x d'`),
    /// renaming the variables to `names`.
    pub fn transform_exponents(
        &self,
        m: &[Vec<i64>],
        names: Vec<String>,
    ) -> Result<Self, LaurentError> {
        let mut out = LaurentPoly::zero(names)?;
        for (e, c) in &self.terms {
            let image = crate::lattice::vec_mat(e, m);
            out.add_term(ExponentVector(image), c.clone())?;
        }
        Ok(out)
    }

    /// Index of a variable by name.
    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Substitutes 0 for the variables at `zeroed` (indices) and drops them.
    pub fn stratum_restriction(
        &self,
        zeroed: &BTreeSet<usize>,
    ) -> Result<Restriction, LaurentError> {
        for &i in zeroed {
            if i >= self.dimension() {
                return Err(LaurentError::InvalidVariables(format!(
                    "index {i} out of range"
                )));
            }
            if self.terms.keys().any(|e| e[i] < 0) {
                return Err(LaurentError::NegativeExponentInZeroedVariable(
                    self.variables[i].clone(),
                ));
            }
        }
        let kept: Vec<usize> = (0..self.dimension())
            .filter(|i| !zeroed.contains(i))
            .collect();
        let names: Vec<String> = kept.iter().map(|&i| self.variables[i].clone()).collect();
        let surviving = self
            .terms
            .iter()
            .filter(|(e, _)| zeroed.iter().all(|&i| e[i] == 0))
            .map(|(e, c)| {
                (
                    ExponentVector(kept.iter().map(|&i| e[i]).collect()),
                    c.clone(),
                )
            });
        let terms: BTreeMap<ExponentVector, BigRational> = surviving.collect();
        if terms.keys().all(ExponentVector::is_zero) {
            return Ok(match terms.into_values().next() {
                None => Restriction::ConstantZero,
                Some(c) => Restriction::ConstantValue(c),
            });
        }
        if names.is_empty() {
            unreachable!("non-constant restriction always keeps a variable");
        }
        Ok(Restriction::Polynomial(LaurentPoly {
            variables: names,
            terms,
        }))
    }
}

fn validate_variables(vars: &[String]) -> Result<(), LaurentError> {
    let mut seen = BTreeSet::new();
    for v in vars {
        let mut chars = v.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(LaurentError::InvalidVariables(format!(
                "`{v}` is not an identifier"
            )));
        }
        if !seen.insert(v.as_str()) {
            return Err(LaurentError::InvalidVariables(format!(
                "`{v}` listed twice"
            )));
        }
    }
    Ok(())
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], e: &ExponentVector) -> fmt::Result {
    let mut first = true;
    for (name, &k) in vars.iter().zip(e.iter()) {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    /// Highest graded-lex term first, e.g. `3*x^2 - 1/2*x + y^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if e.is_zero() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, &self.variables, e)?;
            }
        }
        Ok(())
    }
}

/// Parses `text` over the ordered variable list `variables`.
///
/// Grammar: `expr := term (('+'|'-') term)*`, `term := [coeff '*'?] factor ('*' factor)*`,
/// `factor := var ('^' int)?`, `coeff := int | int '/' int`. Whitespace is
/// ignored; exponents may be written `x^-1` or `x^(-1)`.
pub fn parse_laurent(text: &str, variables: &[String]) -> Result<LaurentPoly, LaurentError> {
    validate_variables(variables)?;
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        vars: variables,
        end: text.len(),
    };
    let poly = parser.expr()?;
    if let Some((tok, at)) = parser.peek() {
        return Err(LaurentError::Syntax {
            pos: at,
            message: format!("unexpected {tok}"),
        });
    }
    Ok(poly)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(n) => write!(f, "number `{n}`"),
            Token::Ident(s) => write!(f, "identifier `{s}`"),
            Token::Plus => write!(f, "`+`"),
            Token::Minus => write!(f, "`-`"),
            Token::Star => write!(f, "`*`"),
            Token::Slash => write!(f, "`/`"),
            Token::Caret => write!(f, "`^`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, LaurentError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Token::Int(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(LaurentError::Syntax {
                    pos: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    vars: &'a [String],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<(&Token, usize)> {
        self.tokens.get(self.pos).map(|(t, p)| (t, *p))
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |(_, p)| p)
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if matches!(self.peek(), Some((t, _)) if t == tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, message: &str) -> Result<T, LaurentError> {
        Err(LaurentError::Syntax {
            pos: self.here(),
            message: message.to_string(),
        })
    }

    fn expr(&mut self) -> Result<LaurentPoly, LaurentError> {
        let mut poly = LaurentPoly::zero(self.vars.to_vec())?;
        let mut first = true;
        loop {
            let mut negative = false;
            let mut saw_sign = false;
            loop {
                if self.eat(&Token::Plus) {
                    saw_sign = true;
                } else if self.eat(&Token::Minus) {
                    negative = !negative;
                    saw_sign = true;
                } else {
                    break;
                }
            }
            if !first && !saw_sign {
                break;
            }
            if self.peek().is_none() {
                return self.syntax("expected a term");
            }
            let (e, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            poly.add_term(e, c)?;
            first = false;
            if self.peek().is_none() {
                break;
            }
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(ExponentVector, BigRational), LaurentError> {
        let d = self.vars.len();
        let mut exps = vec![0i64; d];
        let mut coeff = BigRational::one();
        let mut expect_factor = true;
        if let Some((Token::Int(_), _)) = self.peek() {
            coeff = self.coefficient()?;
            // `3*x`, `3x` and a bare constant are all accepted
            expect_factor = self.eat(&Token::Star);
            if !expect_factor && matches!(self.peek(), Some((Token::Ident(_), _))) {
                expect_factor = true;
            }
            if !expect_factor {
                return Ok((ExponentVector(exps), coeff));
            }
        }
        loop {
            if expect_factor {
                self.factor(&mut exps)?;
            }
            if self.eat(&Token::Star) {
                expect_factor = true;
                continue;
            }
            break;
        }
        Ok((ExponentVector(exps), coeff))
    }

    fn coefficient(&mut self) -> Result<BigRational, LaurentError> {
        let num = match self.tokens.get(self.pos) {
            Some((Token::Int(n), _)) => n.clone(),
            _ => return self.syntax("expected an integer"),
        };
        self.pos += 1;
        if self.eat(&Token::Slash) {
            let at = self.here();
            let den = match self.tokens.get(self.pos) {
                Some((Token::Int(n), _)) => n.clone(),
                _ => return self.syntax("expected a denominator"),
            };
            self.pos += 1;
            if den.is_zero() {
                return Err(LaurentError::Syntax {
                    pos: at,
                    message: "zero denominator".into(),
                });
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn factor(&mut self, exps: &mut [i64]) -> Result<(), LaurentError> {
        let at = self.here();
        let name = match self.tokens.get(self.pos) {
            Some((Token::Ident(s), _)) => s.clone(),
            Some((Token::Int(_), _)) => {
                return self.syntax("coefficient must precede the variables of a term")
            }
            _ => return self.syntax("expected a variable"),
        };
        self.pos += 1;
        let idx = self
            .vars
            .iter()
            .position(|v| *v == name)
            .ok_or(LaurentError::UnknownVariable { name, pos: at })?;
        let mut k: i64 = 1;
        if self.eat(&Token::Caret) {
            k = self.exponent()?;
        }
        exps[idx] = exps[idx]
            .checked_add(k)
            .ok_or(LaurentError::ExponentOverflow { pos: at })?;
        Ok(())
    }

    fn exponent(&mut self) -> Result<i64, LaurentError> {
        let paren = self.eat(&Token::LParen);
        let mut negative = false;
        if self.eat(&Token::Minus) {
            negative = true;
        } else {
            self.eat(&Token::Plus);
        }
        let at = self.here();
        let n = match self.tokens.get(self.pos) {
            Some((Token::Int(n), _)) => n.clone(),
            _ => return self.syntax("expected an integer exponent"),
        };
        self.pos += 1;
        if paren && !self.eat(&Token::RParen) {
            return self.syntax("expected `)`");
        }
        let n = if negative { -n } else { n };
        i64::try_from(n).map_err(|_| LaurentError::ExponentOverflow { pos: at })
    }
}
