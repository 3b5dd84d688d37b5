//! Dense univariate polynomials over Q, and the few bivariate helpers the
//! exact non-degeneracy test needs.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients from the constant term up; never has a zero leading entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `u`.
    pub fn variable() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has degree `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * b;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact division; panics if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (quot, rem) = self.div_rem(divisor);
        assert!(rem.is_zero(), "inexact polynomial division");
        quot
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        self.exact_div(&self.gcd(&self.derivative())).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Removes every factor `u`.
    pub fn strip_variable(&self) -> Self {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        Self::new(self.coeffs[k..].to_vec())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Lagrange interpolation through `(xs[i], ys[i])` with distinct `xs`.
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Self {
        let mut out = Self::zero();
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Self::one();
            let mut denom = BigRational::one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Self::new(vec![-xj.clone(), BigRational::one()]));
                    denom *= xi - xj;
                }
            }
            out = out.add(&basis.scale(&(yi / denom)));
        }
        out
    }

    /// Formats with variable name `var`, highest power first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}*{mono}"));
            }
        }
        s
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("u"))
    }
}

/// Determinant over Q by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] / &pivot;
            for j in col..n {
                let delta = &factor * &m[col][j];
                m[i][j] -= delta;
            }
        }
    }
    det
}

/// Resultant of `a` and `b` given with formal degrees `deg_a`, `deg_b`
/// (leading entries may vanish).
pub fn sylvester_resultant(
    a: &[BigRational],
    deg_a: usize,
    b: &[BigRational],
    deg_b: usize,
) -> BigRational {
    let n = deg_a + deg_b;
    if n == 0 {
        return BigRational::one();
    }
    let at = |p: &[BigRational], i: usize| p.get(i).cloned().unwrap_or_else(BigRational::zero);
    let mut rows = Vec::with_capacity(n);
    for shift in 0..deg_b {
        let mut row = vec![BigRational::zero(); n];
        for k in 0..=deg_a {
            row[shift + k] = at(a, deg_a - k);
        }
        rows.push(row);
    }
    for shift in 0..deg_a {
        let mut row = vec![BigRational::zero(); n];
        for k in 0..=deg_b {
            row[shift + k] = at(b, deg_b - k);
        }
        rows.push(row);
    }
    determinant(rows)
}

/// Bivariate polynomial as a polynomial in `y` with coefficients in Q[x].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    /// `coeffs[j]` multiplies `y^j`.
    pub coeffs: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<UniPoly>) -> Self {
        while coeffs.last().is_some_and(UniPoly::is_zero) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    /// From `(i, j, c)` meaning `c x^i y^j`, exponents nonnegative.
    pub fn from_terms(terms: &[(usize, usize, BigRational)]) -> Self {
        let dy = terms.iter().map(|t| t.1).max().map_or(0, |m| m + 1);
        let mut rows: Vec<Vec<BigRational>> = vec![Vec::new(); dy];
        for (i, j, c) in terms {
            let row = &mut rows[*j];
            if row.len() <= *i {
                row.resize(*i + 1, BigRational::zero());
            }
            row[*i] += c;
        }
        Self::new(rows.into_iter().map(UniPoly::new).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree_y(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn degree_x(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(UniPoly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Specializes `x` to a rational value.
    pub fn eval_x(&self, x: &BigRational) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| c.eval(x)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = UniPoly::zero();
        Self::new(
            (0..n)
                .map(|j| {
                    self.coeffs
                        .get(j)
                        .unwrap_or(&zero)
                        .add(other.coeffs.get(j).unwrap_or(&zero))
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// `x ∂/∂x`.
    pub fn euler_x(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|p| {
                    UniPoly::new(
                        p.coeffs()
                            .iter()
                            .enumerate()
                            .map(|(i, c)| c * q(i as i64))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// `y ∂/∂y`.
    pub fn euler_y(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, p)| p.scale(&q(j as i64)))
                .collect(),
        )
    }

    /// Swaps the roles of `x` and `y`.
    pub fn transpose(&self) -> Self {
        let mut terms = Vec::new();
        for (j, p) in self.coeffs.iter().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.push((j, i, c.clone()));
                }
            }
        }
        Self::from_terms(&terms)
    }
}

/// `Res_y(a, b)` as a polynomial in `x`, by evaluation and interpolation.
pub fn resultant_y(a: &BiPoly, b: &BiPoly) -> UniPoly {
    let (ma, mb) = (a.degree_y(), b.degree_y());
    let bound = ma * b.degree_x() + mb * a.degree_x();
    let xs: Vec<BigRational> = (0..=bound as i64).map(q).collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x| sylvester_resultant(&a.eval_x(x), ma, &b.eval_x(x), mb))
        .collect();
    UniPoly::interpolate(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_squarefree() {
        let p = UniPoly::from_ints(&[1, 2, 1]);
        assert_eq!(p.gcd(&p.derivative()), UniPoly::from_ints(&[1, 1]));
        assert!(!p.is_squarefree());
        assert_eq!(p.squarefree_part(), UniPoly::from_ints(&[1, 1]));
        assert!(UniPoly::from_ints(&[1, 0, 1]).is_squarefree());
        assert_eq!(
            UniPoly::from_ints(&[0, 0, 3, 3]).strip_variable(),
            UniPoly::from_ints(&[3, 3])
        );
    }

    #[test]
    fn division_round_trip() {
        let a = UniPoly::from_ints(&[3, -1, 4, 1, -5]);
        let b = UniPoly::from_ints(&[2, 0, 7]);
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(quot.mul(&b).add(&rem), a);
        assert!(rem.degree() < b.degree());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = UniPoly::from_ints(&[5, 0, -2, 1]);
        let xs: Vec<BigRational> = (0..4).map(q).collect();
        let ys: Vec<BigRational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn resultant_detects_common_roots() {
        // Res_u(u - 1, u - c) = 1 - c up to sign
        let a = [q(-1), q(1)];
        assert_eq!(sylvester_resultant(&a, 1, &[q(-1), q(1)], 1), q(0));
        assert_ne!(sylvester_resultant(&a, 1, &[q(-2), q(1)], 1), q(0));
        // Res_y(y - x, y + x - 2) vanishes exactly at x = 1
        let a = BiPoly::from_terms(&[(0, 1, q(1)), (1, 0, q(-1))]);
        let b = BiPoly::from_terms(&[(0, 1, q(1)), (1, 0, q(1)), (0, 0, q(-2))]);
        let r = resultant_y(&a, &b).monic();
        assert_eq!(r, UniPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(UniPoly::from_ints(&[1, 2, 1]).to_string(), "u^2 + 2*u + 1");
        assert_eq!(
            UniPoly::from_ints(&[-1, 0, -3]).display_in("y"),
            "-3*y^2 - 1"
        );
    }
}
