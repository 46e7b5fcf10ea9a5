//! The Mellin operators, their `x^m`-multiples, the Horn operators and the
//! lattice data of the associated A-hypergeometric system.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::operator::DiffOperator;
use super::theta::ThetaPolynomial;
use crate::combinatorics::{ExponentProfile, MultiIndex};
use crate::error::Result;
use crate::linalg::integer_determinant;
use crate::series::solutions::derivative_constant;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn frac(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn weights(ws: &[u32], scale: &BigRational) -> Vec<BigRational> {
    ws.iter().map(|&w| q(w as i64) * scale).collect()
}

/// `P_j(theta) = prod_{k<m_j}(<M,theta> + mk + 1) prod_{k<m'_j}(<M',theta> + mk - 1)`.
pub fn mellin_theta_part(profile: &ExponentProfile, j: usize) -> ThetaPolynomial {
    let m = profile.m() as i64;
    let n = profile.n();
    let one = BigRational::one();
    let mw = weights(profile.exponents(), &one);
    let cw = weights(profile.complements(), &one);
    let mut factors = Vec::new();
    for k in 0..profile.exponents()[j] as i64 {
        factors.push(ThetaPolynomial::linear(&mw, q(m * k + 1)));
    }
    for k in 0..profile.complements()[j] as i64 {
        factors.push(ThetaPolynomial::linear(&cw, q(m * k - 1)));
    }
    ThetaPolynomial::product(n, &factors)
}

/// The `n` Mellin operators `P_j(theta) - (-1)^{m_j} m^m D_j^m`.
pub fn mellin_system(profile: &ExponentProfile) -> Result<Vec<DiffOperator>> {
    let n = profile.n();
    (0..n)
        .map(|j| {
            let p = mellin_theta_part(profile, j).to_operator()?;
            let c = BigRational::from_integer(derivative_constant(profile, j));
            p.sub(&DiffOperator::d_power(n, j, profile.m()).scale(&c))
        })
        .collect()
}

/// `G_j = x_j^m P_j(theta) - (-1)^{m_j} m^m x_j^m D_j^m`.
pub fn gj_operators(profile: &ExponentProfile) -> Result<Vec<DiffOperator>> {
    let n = profile.n();
    let m = profile.m();
    (0..n)
        .map(|j| {
            let xm = DiffOperator::x_power(n, j, m);
            let p = xm.compose(&mellin_theta_part(profile, j).to_operator()?)?;
            let c = BigRational::from_integer(derivative_constant(profile, j));
            let d = xm.compose(&DiffOperator::d_power(n, j, m))?.scale(&c);
            p.sub(&d)
        })
        .collect()
}

/// Horn operators: `H_j` in the torus-invariant variables `w` and `H'_j`
/// after the substitution `w_j = (-1)^{m'_j} x_j^m`.
#[derive(Debug, Clone)]
pub struct HornSystem {
    pub w_operators: Vec<DiffOperator>,
    pub x_operators: Vec<DiffOperator>,
}

/// The second product of the Horn operator, with `theta` rescaled by `s`:
/// `prod_{k<m_j}(-s<M,theta> - 1/m - k) prod_{k<m'_j}(-s<M',theta> + 1/m - k)`.
fn horn_tail(profile: &ExponentProfile, j: usize, s: &BigRational) -> ThetaPolynomial {
    let m = profile.m() as i64;
    let neg = -s.clone();
    let mw = weights(profile.exponents(), &neg);
    let cw = weights(profile.complements(), &neg);
    let mut factors = Vec::new();
    for k in 0..profile.exponents()[j] as i64 {
        factors.push(ThetaPolynomial::linear(&mw, frac(-1, m) - q(k)));
    }
    for k in 0..profile.complements()[j] as i64 {
        factors.push(ThetaPolynomial::linear(&cw, frac(1, m) - q(k)));
    }
    ThetaPolynomial::product(profile.n(), &factors)
}

pub fn horn_system(profile: &ExponentProfile) -> Result<HornSystem> {
    let n = profile.n();
    let m = profile.m();
    let mut w_ops = Vec::new();
    let mut x_ops = Vec::new();
    for j in 0..n {
        let mut unit = vec![BigRational::zero(); n];
        unit[j] = q(m as i64);
        let head_w: Vec<ThetaPolynomial> = (0..m as i64)
            .map(|k| ThetaPolynomial::linear(&unit, q(-k)))
            .collect();
        let head_w = ThetaPolynomial::product(n, &head_w).to_operator()?;
        let tail_w = horn_tail(profile, j, &BigRational::one()).to_operator()?;
        w_ops.push(head_w.sub(&DiffOperator::x_power(n, j, 1).compose(&tail_w)?)?);

        unit[j] = BigRational::one();
        let head_x: Vec<ThetaPolynomial> = (0..m as i64)
            .map(|k| ThetaPolynomial::linear(&unit, q(-k)))
            .collect();
        let head_x = ThetaPolynomial::product(n, &head_x).to_operator()?;
        let tail_x = horn_tail(profile, j, &frac(1, m as i64)).to_operator()?;
        let sign = if profile.complements()[j] % 2 == 0 {
            q(1)
        } else {
            q(-1)
        };
        let shifted = DiffOperator::x_power(n, j, m)
            .compose(&tail_x)?
            .scale(&sign);
        x_ops.push(head_x.sub(&shifted)?);
    }
    Ok(HornSystem {
        w_operators: w_ops,
        x_operators: x_ops,
    })
}

/// Outcome of comparing `(-1)^{m+1} m^m H'_j` with `x_j^m ∘ M_j`.
#[derive(Debug, Clone, Serialize)]
pub struct HornComparison {
    pub j: usize,
    /// The two operators agree exactly.
    pub exact: bool,
    /// `lambda` with `(-1)^{m+1} m^m H'_j = lambda * x_j^m ∘ M_j`, when one exists.
    pub ratio: Option<String>,
}

/// Checks the Horn-to-Mellin translation for every `j`.
pub fn horn_mellin_comparison(profile: &ExponentProfile) -> Result<Vec<HornComparison>> {
    let n = profile.n();
    let m = profile.m();
    let horn = horn_system(profile)?;
    let mellin = mellin_system(profile)?;
    let mut power = BigInt::from(m).pow(m);
    if m % 2 == 0 {
        power = -power;
    }
    let factor = BigRational::from_integer(power);
    (0..n)
        .map(|j| {
            let lhs = horn.x_operators[j].scale(&factor);
            let rhs = DiffOperator::x_power(n, j, m).compose(&mellin[j])?;
            let ratio = lhs.rational_multiple_of(&rhs);
            Ok(HornComparison {
                j,
                exact: lhs == rhs,
                ratio: ratio.map(|r| crate::series::ring::fraction_string(&r)),
            })
        })
        .collect()
}

/// Data of the A-hypergeometric system in the coefficients `a_0, ..., a_{n+1}`.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeData {
    /// Rows `(1, ..., 1)` and `(m, m_1, ..., m_n, 0)`.
    pub a: Vec<Vec<i64>>,
    /// `A` with the second row divided by `d`.
    pub a_prime: Vec<Vec<String>>,
    /// Columns `(-m_j, m e_j, -m'_j)`, an `(n+2) x n` integer matrix.
    pub b: Vec<Vec<i64>>,
    /// `(-1/m, 0, ..., 0, 1/m)`.
    pub c: Vec<String>,
    pub beta: Vec<i64>,
    pub beta_prime: Vec<String>,
}

pub fn lattice_matrices(profile: &ExponentProfile) -> LatticeData {
    let n = profile.n();
    let m = profile.m() as i64;
    let d = profile.d() as i64;
    let mut second = vec![m];
    second.extend(profile.exponents().iter().map(|&e| e as i64));
    second.push(0);
    let a = vec![vec![1; n + 2], second.clone()];
    let fs = |x: BigRational| crate::series::ring::fraction_string(&x);
    let a_prime = vec![
        vec!["1".to_string(); n + 2],
        second.iter().map(|&v| fs(frac(v, d))).collect(),
    ];
    let mut b = vec![vec![0i64; n]; n + 2];
    for j in 0..n {
        b[0][j] = -(profile.exponents()[j] as i64);
        b[j + 1][j] = m;
        b[n + 1][j] = -(profile.complements()[j] as i64);
    }
    let mut c = vec![fs(frac(-1, m))];
    c.extend((0..n).map(|_| "0".to_string()));
    c.push(fs(frac(1, m)));
    LatticeData {
        a,
        a_prime,
        b,
        c,
        beta: vec![0, -1],
        beta_prime: vec!["0".into(), fs(frac(-1, d))],
    }
}

impl LatticeData {
    /// Every column of `B` lies in the kernel of `A`.
    pub fn columns_in_kernel(&self) -> bool {
        let cols = self.b[0].len();
        (0..cols).all(|j| {
            self.a.iter().all(|row| {
                row.iter()
                    .zip(&self.b)
                    .map(|(x, brow)| x * brow[j])
                    .sum::<i64>()
                    == 0
            })
        })
    }

    /// gcd of the maximal (`n x n`) minors of `B`.
    pub fn maximal_minor_gcd(&self) -> u64 {
        let rows = self.b.len();
        let n = self.b[0].len();
        let mut g = 0i128;
        let mut chosen = Vec::with_capacity(n);
        fn walk(
            rows: usize,
            n: usize,
            start: usize,
            chosen: &mut Vec<usize>,
            b: &[Vec<i64>],
            g: &mut i128,
        ) {
            if chosen.len() == n {
                let minor: Vec<Vec<i64>> = chosen.iter().map(|&r| b[r].clone()).collect();
                *g = g.gcd(&integer_determinant(&minor));
                return;
            }
            for r in start..rows {
                chosen.push(r);
                walk(rows, n, r + 1, chosen, b, g);
                chosen.pop();
            }
        }
        walk(rows, n, 0, &mut chosen, &self.b, &mut g);
        g as u64
    }

    /// Normalized volume of the (one-dimensional) configuration `A'`: the
    /// length of the segment `[0, m/d]`.
    pub fn normalized_volume(&self) -> u64 {
        let row = &self.a[1];
        let g = row.iter().fold(0i64, |acc, &v| acc.gcd(&v));
        let span = row.iter().max().unwrap() - row.iter().min().unwrap();
        (span / g) as u64
    }

    /// Euler operators `sum a_j D_j` and `m a_0 D_0 + sum m_j a_j D_j + 1`
    /// in the `n + 2` coefficient variables.
    pub fn euler_operators(&self) -> Vec<DiffOperator> {
        let k = self.a[0].len();
        let mut ops = Vec::new();
        for (row, shift) in self.a.iter().zip(&self.beta) {
            let mut op = DiffOperator::constant(k, -q(*shift));
            for (j, &w) in row.iter().enumerate() {
                op = op
                    .add(&DiffOperator::theta(k, j).scale(&q(w)))
                    .expect("same variable count");
            }
            ops.push(op);
        }
        ops
    }

    /// Toric operators `D^{u+} - D^{u-}` for the columns `u` of `B`.
    pub fn toric_operators(&self) -> Vec<DiffOperator> {
        let k = self.b.len();
        (0..self.b[0].len())
            .map(|j| {
                let pos: Vec<u32> = self.b.iter().map(|r| r[j].max(0) as u32).collect();
                let neg: Vec<u32> = self.b.iter().map(|r| (-r[j]).max(0) as u32).collect();
                let zero = MultiIndex::zero(k);
                DiffOperator::monomial(zero.clone(), MultiIndex(pos), BigRational::one())
                    .sub(&DiffOperator::monomial(
                        zero,
                        MultiIndex(neg),
                        BigRational::one(),
                    ))
                    .expect("same variable count")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::make_profile;
    use crate::poly::{rat, UniPoly};
    use crate::series::solutions::{convenient_basis, principal_series};
    use crate::series::TruncatedSeries;

    #[test]
    fn quadratic_mellin_operator() {
        let p = make_profile(2, &[1]).unwrap();
        let m = &mellin_system(&p).unwrap()[0];
        let expect = DiffOperator::univariate(&[
            (UniPoly::from_integers(&[4, 0, 1]), 2),
            (UniPoly::from_integers(&[0, 1]), 1),
            (UniPoly::from_integers(&[-1]), 0),
        ]);
        assert_eq!(m, &expect);
        let x = TruncatedSeries::variable(crate::series::Rationals, 1, 8, 0);
        assert!(m.apply(&x).unwrap().is_zero());
        let g = &gj_operators(&p).unwrap()[0];
        assert_eq!(g, &DiffOperator::x_power(1, 0, 2).compose(&expect).unwrap());
    }

    #[test]
    fn mellin_321_matches_theta_form() {
        // 27 theta1(theta1-1)(theta1-2) - x1^3 (2t1+t2+1)(2t1+t2+4)(t1+2t2-1) = x1^3 * M_1
        let p = make_profile(3, &[2, 1]).unwrap();
        let g = &gj_operators(&p).unwrap()[0];
        let t = |a: i64, b: i64, c: i64| ThetaPolynomial::linear(&[rat(a), rat(b)], rat(c));
        let head = ThetaPolynomial::product(2, &[t(1, 0, 0), t(1, 0, -1), t(1, 0, -2)])
            .to_operator()
            .unwrap();
        let tail = ThetaPolynomial::product(2, &[t(2, 1, 1), t(2, 1, 4), t(1, 2, -1)])
            .to_operator()
            .unwrap();
        let display = head
            .scale(&rat(27))
            .sub(&DiffOperator::x_power(2, 0, 3).compose(&tail).unwrap())
            .unwrap();
        assert_eq!(display.rational_multiple_of(g), Some(rat(-1)));
    }

    #[test]
    fn annihilates_basis_and_principal_series() {
        for (m, e) in [(3u32, vec![2u32, 1]), (3, vec![1]), (4, vec![2])] {
            let p = make_profile(m, &e).unwrap();
            let ops = mellin_system(&p).unwrap();
            for s in convenient_basis(&p, 10)
                .unwrap()
                .iter()
                .chain([&principal_series(&p, 10)])
            {
                for op in &ops {
                    assert!(op.apply(s).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn horn_leading_part() {
        let p = make_profile(3, &[2, 1]).unwrap();
        let h = horn_system(&p).unwrap();
        let t = |a: i64, c: i64| ThetaPolynomial::linear(&[rat(a), rat(0)], rat(c));
        let head = ThetaPolynomial::product(2, &[t(3, 0), t(3, -1), t(3, -2)])
            .to_operator()
            .unwrap();
        let w_only: DiffOperator = DiffOperator::from_terms(
            2,
            h.w_operators[0]
                .terms()
                .filter(|((a, b), _)| a == b)
                .map(|(k, v)| (k.clone(), v.clone())),
        );
        assert_eq!(w_only, head);
    }

    #[test]
    fn lattice_data() {
        let p = make_profile(3, &[2, 1]).unwrap();
        let l = lattice_matrices(&p);
        assert_eq!(l.a, vec![vec![1, 1, 1, 1], vec![3, 2, 1, 0]]);
        assert!(l.columns_in_kernel());
        assert_eq!(l.maximal_minor_gcd(), 3);
        assert_eq!(l.normalized_volume(), 3);
        let q = make_profile(6, &[4, 2]).unwrap();
        let l = lattice_matrices(&q);
        assert_eq!(l.a_prime[1], vec!["3", "2", "1", "0"]);
        assert_eq!(l.maximal_minor_gcd() * l.normalized_volume(), 36);
        assert_eq!(l.euler_operators().len(), 2);
        assert_eq!(l.toric_operators().len(), 2);
    }
}
