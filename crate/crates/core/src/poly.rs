//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients. Variables are dense indices (place ids of a net).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("evaluation point has no value for variable {0}")]
    MissingVar(usize),
}

/// A product of variables with positive exponents, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Self(vec![(v, 1)])
    }

    /// Builds a monomial from `(variable, exponent)` pairs; zero exponents are
    /// dropped and repeated variables multiply.
    pub fn from_powers(powers: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut m: BTreeMap<usize, u32> = BTreeMap::new();
        for (v, e) in powers {
            if e > 0 {
                *m.entry(v).or_insert(0) += e;
            }
        }
        Self(m.into_iter().collect())
    }

    pub fn powers(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_powers(self.0.iter().chain(other.0.iter()).copied())
    }
}

/// A polynomial as a map from monomials to nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: usize) -> Self {
        Self::term(1, Monomial::var(v))
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BigInt, Monomial)>) -> Self {
        let mut p = Self::zero();
        for (c, m) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// The value if the polynomial has no variables.
    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().filter(|(w, _)| *w == v).map(|(_, e)| *e))
            .max()
            .unwrap_or(0)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Value at `point`, where `point[v]` is the value of variable `v`.
    pub fn eval(&self, point: &[i64]) -> Result<BigInt, PolyError> {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                let x = *point.get(v).ok_or(PolyError::MissingVar(v))?;
                t *= BigInt::from(x).pow(e);
            }
            total += t;
        }
        Ok(total)
    }

    /// The polynomial `x ↦ f(x + c)`; variables beyond `c.len()` are not moved.
    pub fn translate(&self, c: &[i64]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, coef) in &self.terms {
            let mut prod = MultiPoly::constant(coef.clone());
            for &(v, e) in &m.0 {
                let shift = c.get(v).copied().unwrap_or(0);
                let factor = &MultiPoly::var(v) + &MultiPoly::constant(shift);
                prod = &prod * &factor.pow(e);
            }
            out = &out + &prod;
        }
        out
    }

    /// `g(x) = f(x + c) − f(x)`; zero exactly when `f` is constant along `c`.
    pub fn shift_difference(&self, c: &[i64]) -> MultiPoly {
        &self.translate(c) - self
    }

    /// Renders the polynomial with the given variable names.
    pub fn format_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .map(|&(v, e)| if e == 1 { name(v) } else { format!("{}^{e}", name(v)) })
                .collect();
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&vars.join("*"));
            } else {
                out.push_str(&format!("{abs}*{}", vars.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&|v| format!("x{v}")))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: usize) -> MultiPoly {
        MultiPoly::var(v)
    }

    fn c(k: i64) -> MultiPoly {
        MultiPoly::constant(k)
    }

    #[test]
    fn product_of_linear_factors() {
        // (1 - x2)(1 - x4) = 1 - x2 - x4 + x2 x4
        let f = &(&c(1) - &p(2)) * &(&c(1) - &p(4));
        assert_eq!(f.terms().count(), 4);
        let at = |v: [i64; 6]| f.eval(&v).unwrap();
        assert_eq!(at([0, 1, 0, 1, 0, 0]), BigInt::from(1));
        assert_eq!(at([1, 0, 1, 1, 0, 0]), BigInt::from(0));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let f = &(&p(0) + &p(1)) - &p(1);
        assert_eq!(f, p(0));
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn translate_expands_powers() {
        // (x0 + 2)^2 = x0^2 + 4 x0 + 4
        let f = p(0).pow(2).translate(&[2]);
        assert_eq!(f.eval(&[0]).unwrap(), BigInt::from(4));
        assert_eq!(f.eval(&[3]).unwrap(), BigInt::from(25));
        assert_eq!(f.degree_in(0), 2);
    }

    #[test]
    fn missing_variable_is_reported() {
        assert_eq!(p(4).eval(&[1, 2]), Err(PolyError::MissingVar(4)));
        assert_eq!(MultiPoly::zero().eval(&[]).unwrap(), BigInt::zero());
    }

    #[test]
    fn constant_value_only_for_constants() {
        assert_eq!(c(7).constant_value(), Some(BigInt::from(7)));
        assert_eq!(MultiPoly::zero().constant_value(), Some(BigInt::zero()));
        assert_eq!((&p(0) + &c(1)).constant_value(), None);
    }

    #[test]
    fn formatting() {
        let f = &(&p(0) * &p(1)) - &c(1);
        assert_eq!(f.to_string(), "x0*x1 - 1");
        assert_eq!((-&p(2)).to_string(), "-x2");
    }
}
