//! Polynomials in the commuting Euler operators `theta_j = x_j D_j`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::operator::DiffOperator;
use crate::combinatorics::MultiIndex;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaPolynomial {
    n_vars: usize,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl ThetaPolynomial {
    pub fn zero(n_vars: usize) -> Self {
        ThetaPolynomial {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(MultiIndex::zero(n_vars), c);
        p
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, BigRational::one())
    }

    /// `sum_j weights_j theta_j + constant`.
    pub fn linear(weights: &[BigRational], constant: BigRational) -> Self {
        let n = weights.len();
        let mut p = Self::constant(n, constant);
        for (j, w) in weights.iter().enumerate() {
            p.add_term(MultiIndex::unit(n, j), w.clone());
        }
        p
    }

    fn add_term(&mut self, e: MultiIndex, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(e.clone())
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (e, a) in &self.terms {
            for (f, b) in &other.terms {
                out.add_term(e.add(f), a * b);
            }
        }
        out
    }

    pub fn product<'a, I: IntoIterator<Item = &'a ThetaPolynomial>>(
        n_vars: usize,
        factors: I,
    ) -> Self {
        factors
            .into_iter()
            .fold(Self::one(n_vars), |acc, f| acc.mul(f))
    }

    /// Value at `theta = s`, i.e. the eigenvalue on the monomial `x^s`.
    pub fn eval(&self, s: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.0.iter().zip(s).fold(c.clone(), |acc, (&k, v)| {
                    acc * num_traits::pow(v.clone(), k as usize)
                })
            })
            .sum()
    }

    /// Expansion into canonical `x^a D^b` form by repeated composition.
    pub fn to_operator(&self) -> Result<DiffOperator> {
        let n = self.n_vars;
        let mut powers: Vec<Vec<DiffOperator>> =
            (0..n).map(|_| vec![DiffOperator::identity(n)]).collect();
        let mut out = DiffOperator::zero(n);
        for (e, c) in &self.terms {
            let mut term = DiffOperator::identity(n);
            for (j, &k) in e.0.iter().enumerate() {
                while powers[j].len() <= k as usize {
                    let next = powers[j]
                        .last()
                        .unwrap()
                        .compose(&DiffOperator::theta(n, j))?;
                    powers[j].push(next);
                }
                term = term.compose(&powers[j][k as usize])?;
            }
            out = out.add(&term.scale(c))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn falling_factorial_is_x_power_times_derivative() {
        // prod_{k<m} (theta - k) = x^m D^m
        for m in 1..=6u32 {
            let factors: Vec<ThetaPolynomial> = (0..m)
                .map(|k| ThetaPolynomial::linear(&[rat(1)], rat(-(k as i64))))
                .collect();
            let op = ThetaPolynomial::product(1, &factors).to_operator().unwrap();
            let expect = DiffOperator::x_power(1, 0, m)
                .compose(&DiffOperator::d_power(1, 0, m))
                .unwrap();
            assert_eq!(op, expect, "m = {m}");
        }
    }

    #[test]
    fn eigenvalues() {
        let p = ThetaPolynomial::linear(&[rat(2), rat(1)], rat(1))
            .mul(&ThetaPolynomial::linear(&[rat(1), rat(0)], rat(-1)));
        assert_eq!(p.eval(&[rat(3), rat(2)]), rat(9 * 2));
        assert_eq!(p.degree(), 2);
    }
}
