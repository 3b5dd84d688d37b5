//! Elements of `Z[Q]` written in a variable `t` with rational exponents, and
//! the Hodge spectrum realization of class expressions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::motivic::{Cell, ClassExpr, Generator};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("expression contains {0} opaque term(s)")]
    Opaque(usize),
    #[error("spectrum is partial")]
    Partial,
    #[error("cannot parse spectrum at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

/// `Σ m_α t^α` with `α ∈ Q` in lowest terms and nonzero `m_α`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct SpectrumPoly {
    terms: BTreeMap<Rational64, i64>,
}

impl SpectrumPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational64::zero(), 1)
    }

    pub fn monomial(exponent: Rational64, mult: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(exponent, mult);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Rational64, i64)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, m) in terms {
            out.add_term(e, m);
        }
        out
    }

    pub fn add_term(&mut self, exponent: Rational64, mult: i64) {
        if mult == 0 {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.terms.remove(&exponent);
        }
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational64, i64)> + '_ {
        self.terms.iter().map(|(&e, &m)| (e, m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, m) in other.terms() {
            out.add_term(e, m);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, m)| (e, m * k)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, m1) in self.terms() {
            for (e2, m2) in other.terms() {
                out.add_term(e1 + e2, m1 * m2);
            }
        }
        out
    }

    /// Multiplication by `t^shift`.
    pub fn shift(&self, shift: Rational64) -> Self {
        Self::from_terms(self.terms().map(|(e, m)| (e + shift, m)))
    }

    /// Value at `t = 1`.
    pub fn mass(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for SpectrumPoly {
    /// `c*t^(p/q)` terms in ascending exponent order, e.g. `-5*t^(0) + 2*t^(1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, m)) in self.terms().enumerate() {
            if i == 0 {
                write!(f, "{m}*t^({e})")?;
            } else if m < 0 {
                write!(f, " - {}*t^({e})", -m)?;
            } else {
                write!(f, " + {m}*t^({e})")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SpectrumPoly {
    type Err = SpectrumError;

    /// Inverse of the `Display` rendering; whitespace is optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |pos: usize, message: &str| SpectrumError::Syntax {
            pos,
            message: message.to_string(),
        };
        let compact: Vec<(usize, char)> = s
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let text: String = compact.iter().map(|&(_, c)| c).collect();
        let at = |i: usize| compact.get(i).map_or(s.len(), |&(p, _)| p);
        if text == "0" {
            return Ok(Self::zero());
        }
        let bytes = text.as_bytes();
        let mut out = Self::zero();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(err(at(i), "expected '+' or '-'"));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mult: i64 = text[start..i]
                .parse()
                .map_err(|_| err(at(start), "expected multiplicity"))?;
            let rest = &text[i..];
            if !rest.starts_with("*t^(") {
                return Err(err(at(i), "expected '*t^('"));
            }
            i += 4;
            let close = text[i..]
                .find(')')
                .ok_or_else(|| err(at(i), "unclosed exponent"))?
                + i;
            let exponent: Rational64 = text[i..close]
                .parse()
                .map_err(|_| err(at(i), "bad exponent"))?;
            out.add_term(exponent, sign * mult);
            i = close + 1;
        }
        Ok(out)
    }
}

/// `Sp` of one cell: `(Σ_{j<e} t^{j/e}) (t - 1)^r t^k`.
pub fn sp_of_cell(cell: &Cell) -> SpectrumPoly {
    let e = cell.orbit as i64;
    let orbit = SpectrumPoly::from_terms((0..e).map(|j| (Rational64::new(j, e), 1)));
    let mut torus = SpectrumPoly::one();
    let t_minus_one = SpectrumPoly::from_terms([(Rational64::one(), 1), (Rational64::zero(), -1)]);
    for _ in 0..cell.torus {
        torus = torus.mul(&t_minus_one);
    }
    orbit
        .mul(&torus)
        .shift(Rational64::from_integer(cell.lefschetz as i64))
}

/// Spectrum of a class expression. Opaque terms cannot be realized; they
/// are returned as the remainder and the result is marked partial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumValue {
    pub value: SpectrumPoly,
    pub remainder: ClassExpr,
}

impl SpectrumValue {
    pub fn is_partial(&self) -> bool {
        !self.remainder.is_zero()
    }

    pub fn mass(&self) -> Result<i64, SpectrumError> {
        if self.is_partial() {
            Err(SpectrumError::Partial)
        } else {
            Ok(self.value.mass())
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        SpectrumValue {
            value: self.value.add(&other.value),
            remainder: self.remainder.add(&other.remainder),
        }
    }
}

pub fn sp_of_class(x: &ClassExpr) -> SpectrumValue {
    let mut value = SpectrumPoly::zero();
    let mut remainder = ClassExpr::zero();
    for (g, c) in x.terms() {
        match g {
            Generator::Cell(cell) => value = value.add(&sp_of_cell(cell).scale(c)),
            Generator::Opaque(_) => remainder.add_term(g.clone(), c),
        }
    }
    SpectrumValue { value, remainder }
}

/// The compactly supported Euler characteristic of the class.
pub fn euler_specialization(x: &ClassExpr) -> Result<i64, SpectrumError> {
    let mut total = 0;
    let mut opaque = 0;
    for (g, c) in x.terms() {
        match g {
            Generator::Cell(cell) if cell.torus == 0 => total += c * cell.orbit as i64,
            Generator::Cell(_) => {}
            Generator::Opaque(_) => opaque += 1,
        }
    }
    if opaque > 0 {
        Err(SpectrumError::Opaque(opaque))
    } else {
        Ok(total)
    }
}

/// Whether every exponent's denominator divides one of `orders`.
pub fn denominators_divide(s: &SpectrumPoly, orders: &[u64]) -> bool {
    s.terms()
        .all(|(e, _)| orders.iter().any(|&o| (o as i64) % e.denom().abs() == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn generator_rules() {
        assert_eq!(
            sp_of_cell(&Cell::orbit(2)),
            SpectrumPoly::from_terms([(r(0, 1), 1), (r(1, 2), 1)])
        );
        assert_eq!(
            sp_of_cell(&Cell::torus(1)),
            SpectrumPoly::from_terms([(r(1, 1), 1), (r(0, 1), -1)])
        );
        assert_eq!(
            sp_of_cell(&Cell::torus(2)),
            SpectrumPoly::from_terms([(r(2, 1), 1), (r(1, 1), -2), (r(0, 1), 1)])
        );
        assert_eq!(
            sp_of_cell(&Cell::new(1, 0, 3)),
            SpectrumPoly::monomial(r(3, 1), 1)
        );
    }

    #[test]
    fn mirror_spectrum() {
        let x = ClassExpr::from_terms([
            (Generator::Cell(Cell::torus(1)), 2),
            (Generator::Cell(Cell::POINT), -3),
        ]);
        let sp = sp_of_class(&x);
        assert!(!sp.is_partial());
        assert_eq!(
            sp.value,
            SpectrumPoly::from_terms([(r(1, 1), 2), (r(0, 1), -5)])
        );
        assert_eq!(sp.mass().unwrap(), -3);
        assert_eq!(euler_specialization(&x).unwrap(), -3);
        assert_eq!(sp.value.to_string(), "-5*t^(0) + 2*t^(1)");
    }

    #[test]
    fn text_round_trip() {
        let s = SpectrumPoly::from_terms([(r(0, 1), 1), (r(1, 2), -3), (r(7, 3), 2)]);
        let text = s.to_string();
        assert_eq!(text, "1*t^(0) - 3*t^(1/2) + 2*t^(7/3)");
        assert_eq!(text.parse::<SpectrumPoly>().unwrap(), s);
        assert_eq!("0".parse::<SpectrumPoly>().unwrap(), SpectrumPoly::zero());
        assert!("2*t^1".parse::<SpectrumPoly>().is_err());
    }

    #[test]
    fn masses() {
        assert_eq!(
            SpectrumPoly::from_terms([(r(0, 1), 1), (r(1, 2), 1)]).mass(),
            2
        );
        assert_eq!(SpectrumPoly::monomial(r(0, 1), 2).mass(), 2);
    }
}
