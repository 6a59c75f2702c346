use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Integer Laurent polynomial in `A`. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, exp);
        p
    }

    /// Loop value `-A^2 - A^-2`.
    pub fn delta() -> Self {
        Self::from_pairs([(-2, -1), (2, -1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i32) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs, exponents ascending.
    pub fn pairs(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Multiply by `A^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPolynomial { terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    pub fn scale(&self, s: i64) -> Self {
        if s == 0 {
            return Self::zero();
        }
        LaurentPolynomial { terms: self.terms.iter().map(|(&e, &c)| (e, c * s)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        for (&e, &c) in &other.terms {
            self.add_term(c, e);
        }
    }

    /// Representative of `self` modulo multiplication by powers of `-A^3`:
    /// the unique associate whose lowest exponent lies in `0..3` and whose
    /// lowest coefficient sign is fixed by the parity of the shift.
    /// Unoriented link diagrams of the same link have brackets in the same class.
    pub fn normalize_kink_class(&self) -> Self {
        let Some(lo) = self.min_exp() else {
            return Self::zero();
        };
        let j = lo.div_euclid(3);
        let shifted = self.shift(-3 * j);
        if j.rem_euclid(2) == 1 {
            -shifted
        } else {
            shifted
        }
    }

    /// Render as sparse `exp:coeff` pairs, exponents ascending.
    pub fn to_pairs_string(&self) -> String {
        let parts: Vec<String> = self.pairs().map(|(e, c)| format!("{e}:{c}")).collect();
        parts.join(" ")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&e, &c)) in self.terms.iter().rev().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(sign)?;
            if i > 0 {
                f.write_str(" ")?;
            }
            let a = c.unsigned_abs();
            match (a, e) {
                (_, 0) => write!(f, "{a}")?,
                (1, 1) => f.write_str("A")?,
                (1, _) => write!(f, "A^{e}")?,
                (_, 1) => write!(f, "{a}A")?,
                _ => write!(f, "{a}A^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs.clone())
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(-1)
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let d = LaurentPolynomial::delta();
        let d2 = &d * &d;
        assert_eq!(d2, LaurentPolynomial::from_pairs([(-4, 1), (0, 2), (4, 1)]));
        assert!((&d - &d).is_zero());
        assert_eq!(LaurentPolynomial::monomial(3, 2).coeff(2), 3);
        assert_eq!(d.to_pairs_string(), "-2:-1 2:-1");
        assert_eq!(d.to_string(), "-A^2 - A^-2");
    }

    #[test]
    fn kink_class() {
        let p = LaurentPolynomial::from_pairs([(-7, 1), (-3, -1), (5, -1)]);
        let kinked = &p * &LaurentPolynomial::monomial(-1, 3);
        assert_eq!(p.normalize_kink_class(), kinked.normalize_kink_class());
        assert_ne!(p.normalize_kink_class(), p.shift(1).normalize_kink_class());
        assert_eq!(LaurentPolynomial::monomial(-1, 3).normalize_kink_class(), LaurentPolynomial::one());
    }
}
