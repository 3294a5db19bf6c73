//! Sparse polynomials with exact rational coefficients in `x1, ..., xN`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_traits::{One, Signed, Zero};

use crate::arith::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn monomial(exponents: Vec<u32>, coefficient: Rational) -> Self {
        let mut p = Polynomial::zero(exponents.len());
        p.add_term(exponents, coefficient);
        p
    }

    /// The variable `x_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Polynomial::monomial(exps, Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(nvars: usize, terms: I) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (exps, c) in terms {
            p.add_term(exps, c);
        }
        p
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, coefficient: Rational) {
        assert_eq!(exponents.len(), self.nvars, "exponent vector length");
        if coefficient.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponents).or_insert_with(Rational::zero);
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Option<&Rational> {
        self.terms.get(exponents)
    }

    pub fn contains(&self, exponents: &[u32]) -> bool {
        self.terms.contains_key(exponents)
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter<F: Fn(&[u32]) -> bool>(&self, keep: F) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Smallest total degree of a term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Terms of total degree at most `deg`.
    pub fn truncate(&self, deg: u32) -> Polynomial {
        self.filter(|e| e.iter().sum::<u32>() <= deg)
    }

    /// Replaces `x_{var+1}` by `value`.
    pub fn substitute(&self, var: usize, value: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[var];
            rest[var] = 0;
            let mut term = Polynomial::monomial(rest, c.clone());
            for _ in 0..k {
                term = &term * value;
            }
            out = &out + &term;
        }
        out
    }

    /// Part of total degree exactly `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Polynomial {
        self.filter(|e| e.iter().sum::<u32>() == deg)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

pub fn format_monomial(exponents: &[u32]) -> String {
    let parts: Vec<String> = exponents
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            if is_const {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", format_monomial(e))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), format_monomial(e))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn arithmetic() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let s = &x + &y;
        let sq = &s * &s;
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coefficient(&[1, 1]), Some(&int(2)));
        let zero = &s + &(-&s);
        assert!(zero.is_zero());
        assert_eq!(sq.order(), Some(2));
    }

    #[test]
    fn display() {
        let p = Polynomial::from_terms(
            3,
            vec![(vec![2, 0, 0], int(1)), (vec![0, 1, 3], rat(-3, 2)), (vec![0, 0, 0], int(5))],
        );
        assert_eq!(p.to_string(), "x1^2 - 3/2*x2*x3^3 + 5");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
    }
}
