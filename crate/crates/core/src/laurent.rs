//! Integer Laurent polynomials in one variable `t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: i64, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(c, e);
        p
    }

    /// From dense coefficients, lowest exponent first.
    pub fn from_coeffs(low: i64, coeffs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(c, low + i as i64);
        }
        p
    }

    /// `t^k - 1`.
    pub fn t_pow_minus_one(k: i64) -> Self {
        let mut p = Self::monomial(1, k);
        p.add_term(-1, 0);
        p
    }

    pub fn add_term(&mut self, c: i64, e: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Dense coefficients from the lowest exponent up.
    pub fn dense(&self) -> Vec<i64> {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo..=hi).map(|e| self.coeff(e)).collect(),
            _ => Vec::new(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPolynomial { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    /// Representative of the class up to `±t^k`: lowest exponent 0, positive
    /// leading coefficient.
    pub fn normalized(&self) -> Self {
        let Some(lo) = self.min_exp() else { return Self::zero() };
        let mut p = self.shift(-lo);
        if p.coeffs.values().next_back().copied().unwrap_or(0) < 0 {
            p = -p;
        }
        p
    }

    /// Exact division; `None` if `divisor` is zero or does not divide.
    pub fn div_exact(&self, divisor: &LaurentPolynomial) -> Option<LaurentPolynomial> {
        let (dlo, dhi) = (divisor.min_exp()?, divisor.max_exp()?);
        let lead = divisor.coeff(dhi);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(hi) = rem.max_exp() {
            let lo = rem.min_exp().unwrap();
            if hi - lo < dhi - dlo {
                return None;
            }
            let c = rem.coeff(hi);
            if c % lead != 0 {
                return None;
            }
            let term = Self::monomial(c / lead, hi - dhi);
            rem = &rem - &(&term * divisor);
            quot = &quot + &term;
        }
        Some(quot)
    }

    pub fn eval(&self, t: i64) -> Option<i128> {
        let mut acc: i128 = 0;
        for (e, c) in self.terms() {
            if e < 0 && t.abs() != 1 {
                return None;
            }
            let tp = (t as i128).checked_pow(e.unsigned_abs() as u32)?;
            acc = acc.checked_add((c as i128).checked_mul(tp)?)?;
        }
        Some(acc)
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut p = self.clone();
        for (e, c) in rhs.terms() {
            p.add_term(c, e);
        }
        p
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut p = self.clone();
        for (e, c) in rhs.terms() {
            p.add_term(-c, e);
        }
        p
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                p.add_term(c1 * c2, e1 + e2);
            }
        }
        p
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if i == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (*e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => f.write_str("t")?,
                (1, m) => write!(f, "{m}t")?,
                (e, 1) => write!(f, "t^{e}")?,
                (e, m) => write!(f, "{m}t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let p = LaurentPolynomial::from_coeffs(0, &[1, -1, 1]);
        assert_eq!(p.to_string(), "t^2 - t + 1");
        let q = &p * &LaurentPolynomial::from_coeffs(0, &[1, 1]);
        assert_eq!(q, LaurentPolynomial::from_coeffs(0, &[1, 0, 0, 1]));
        assert_eq!(q.div_exact(&LaurentPolynomial::from_coeffs(0, &[1, 1])), Some(p.clone()));
        assert_eq!(q.div_exact(&LaurentPolynomial::from_coeffs(0, &[1, 2])), None);
    }

    #[test]
    fn normalization_up_to_units() {
        let p = LaurentPolynomial::from_coeffs(-3, &[-1, 1, -1]);
        assert_eq!(p.normalized(), LaurentPolynomial::from_coeffs(0, &[1, -1, 1]));
        assert_eq!(p.eval(1), Some(-1));
    }
}
