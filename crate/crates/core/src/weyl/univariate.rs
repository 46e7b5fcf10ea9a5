//! The ordinary Mellin operator `M(m, m_1)`, its leading coefficient, the
//! trinomial discriminant and the factorization identities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::operator::DiffOperator;
use super::system::mellin_system;
use super::theta::ThetaPolynomial;
use crate::combinatorics::{make_profile, MultiIndex};
use crate::error::{Error, Result};
use crate::poly::UniPoly;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn int_pow(b: i64, e: u32) -> BigInt {
    BigInt::from(b).pow(e)
}

/// `M(m, m_1)` for the trinomial `y^m + x y^{m_1} - 1`.
pub fn mellin_operator_1d(m: u32, m1: u32) -> Result<DiffOperator> {
    let p = make_profile(m, &[m1])?;
    Ok(mellin_system(&p)?.remove(0))
}

/// `b^b (a-b)^{a-b} x^a - (-1)^b a^a` with `a = m/d`, `b = m_1/d`.
pub fn discriminant_poly(m: u32, m1: u32) -> Result<UniPoly> {
    if m1 == 0 || m1 >= m {
        return Err(Error::InvalidProfile(format!(
            "need m > m1 >= 1, got m = {m}, m1 = {m1}"
        )));
    }
    let d = m.gcd(&m1);
    let (a, b) = (m / d, m1 / d);
    let lead = int_pow(b as i64, b) * int_pow((a - b) as i64, a - b);
    let mut constant = int_pow(a as i64, a);
    if b % 2 == 0 {
        constant = -constant;
    }
    let mut coeffs = vec![BigRational::zero(); a as usize + 1];
    coeffs[0] = BigRational::from_integer(constant);
    coeffs[a as usize] = BigRational::from_integer(lead);
    Ok(UniPoly::new(coeffs))
}

/// The coefficient of the highest derivative of a univariate operator.
pub fn leading_coefficient(op: &DiffOperator) -> Result<UniPoly> {
    if op.is_zero() {
        return Err(Error::ZeroOperator);
    }
    op.univariate_coefficient(op.order())
}

/// `multiplier ∘ target == left ∘ right` in canonical form.
pub fn factorization_check(
    left: &DiffOperator,
    right: &DiffOperator,
    target: &DiffOperator,
    multiplier: Option<&DiffOperator>,
) -> Result<bool> {
    let lhs = match multiplier {
        Some(mu) => mu.compose(target)?,
        None => target.clone(),
    };
    Ok(lhs == left.compose(right)?)
}

/// Exact right division of a univariate operator `a = quotient ∘ divisor + remainder`
/// with `ord(remainder) < ord(divisor)`. Needs a monomial leading coefficient
/// in the divisor; returns `None` when a quotient coefficient would not be a
/// polynomial.
pub fn right_divide(
    a: &DiffOperator,
    divisor: &DiffOperator,
) -> Result<Option<(DiffOperator, DiffOperator)>> {
    if a.n_vars() != 1 || divisor.n_vars() != 1 {
        return Err(Error::NotUnivariate(a.n_vars().max(divisor.n_vars())));
    }
    let k = divisor.order();
    let lead = leading_coefficient(divisor)?;
    let e = lead.degree().unwrap_or(0);
    if lead.coeffs()[..e].iter().any(|c| !c.is_zero()) {
        return Err(Error::Invalid(
            "divisor must have a monomial leading coefficient".into(),
        ));
    }
    let lc = lead.coeffs()[e].clone();
    let mut rest = a.clone();
    let mut quotient = DiffOperator::zero(1);
    while !rest.is_zero() && rest.order() >= k {
        let r = rest.order();
        let top = rest.univariate_coefficient(r)?;
        let mut step = DiffOperator::zero(1);
        for (i, c) in top.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i < e {
                return Ok(None);
            }
            let term = DiffOperator::monomial(
                MultiIndex(vec![(i - e) as u32]),
                MultiIndex(vec![r - k]),
                c / &lc,
            );
            step = step.add(&term)?;
        }
        rest = rest.sub(&step.compose(divisor)?)?;
        quotient = quotient.add(&step)?;
    }
    Ok(Some((quotient, rest)))
}

/// The case `m_1 = m - 1`: `M(m, m-1)` has the right factor `theta - 1`.
#[derive(Debug, Clone)]
pub struct ThetaFactorization {
    pub m: u32,
    /// `x^m prod_{k=0}^{m-2}((m-1)theta + mk + 1) + (-m)^m theta prod_{k=2}^{m-1}(theta - k)`.
    pub displayed_left: DiffOperator,
    pub right: DiffOperator,
    /// Whether `x^m ∘ M(m, m-1) = displayed_left ∘ (theta - 1)`.
    pub displayed_identity_holds: bool,
    /// Least `e` with `x^e ∘ M(m, m-1)` exactly right-divisible by `theta - 1`.
    pub exponent: u32,
    /// The left factor for the least exponent.
    pub left: DiffOperator,
}

pub fn theta_right_factor(m: u32) -> Result<ThetaFactorization> {
    if m < 2 {
        return Err(Error::InvalidProfile(format!("need m >= 2, got {m}")));
    }
    let target = mellin_operator_1d(m, m - 1)?;
    let theta = |a: i64, c: i64| ThetaPolynomial::linear(&[q(a)], q(c));
    let right = theta(1, -1).to_operator()?;

    let first: Vec<_> = (0..m as i64 - 1)
        .map(|k| theta(m as i64 - 1, m as i64 * k + 1))
        .collect();
    let second: Vec<_> = std::iter::once(theta(1, 0))
        .chain((2..m as i64).map(|k| theta(1, -k)))
        .collect();
    let mut scale = int_pow(m as i64, m);
    if m % 2 == 1 {
        scale = -scale;
    }
    let displayed_left = DiffOperator::x_power(1, 0, m)
        .compose(&ThetaPolynomial::product(1, &first).to_operator()?)?
        .add(
            &ThetaPolynomial::product(1, &second)
                .to_operator()?
                .scale(&BigRational::from_integer(scale)),
        )?;
    let displayed_identity_holds = factorization_check(
        &displayed_left,
        &right,
        &target,
        Some(&DiffOperator::x_power(1, 0, m)),
    )?;

    for e in 0..=m {
        let lifted = DiffOperator::x_power(1, 0, e).compose(&target)?;
        if let Some((left, rem)) = right_divide(&lifted, &right)? {
            if rem.is_zero() {
                debug_assert!(factorization_check(
                    &left,
                    &right,
                    &target,
                    Some(&DiffOperator::x_power(1, 0, e))
                )?);
                return Ok(ThetaFactorization {
                    m,
                    displayed_left,
                    right,
                    displayed_identity_holds,
                    exponent: e,
                    left,
                });
            }
        }
    }
    Err(Error::FactorizationFailed(format!(
        "no x^e with e <= {m} makes M({m},{}) right-divisible by theta - 1",
        m - 1
    )))
}

/// The case `m_1 = 1`: `M(m, 1) = D ∘ (x prod_{k=0}^{m-2}((m-1)theta + mk - 1) + m^m D^{m-1})`.
pub fn derivative_left_factor(m: u32) -> Result<(DiffOperator, DiffOperator)> {
    if m < 2 {
        return Err(Error::InvalidProfile(format!("need m >= 2, got {m}")));
    }
    let factors: Vec<_> = (0..m as i64 - 1)
        .map(|k| ThetaPolynomial::linear(&[q(m as i64 - 1)], q(m as i64 * k - 1)))
        .collect();
    let right = DiffOperator::x_power(1, 0, 1)
        .compose(&ThetaPolynomial::product(1, &factors).to_operator()?)?
        .add(
            &DiffOperator::d_power(1, 0, m - 1)
                .scale(&BigRational::from_integer(int_pow(m as i64, m))),
        )?;
    let left = DiffOperator::d_power(1, 0, 1);
    if !factorization_check(&left, &right, &mellin_operator_1d(m, 1)?, None)? {
        return Err(Error::FactorizationFailed(format!(
            "D ∘ M_alg differs from M({m},1)"
        )));
    }
    Ok((left, right))
}

/// Operator `sum_k p_k(x) D^k` from integer coefficient lists, highest
/// derivative first: `parts[i]` is the coefficient of `D^{len-1-i}`.
pub fn operator_from_integers(parts: &[&[i64]]) -> DiffOperator {
    let top = parts.len() as u32 - 1;
    let list: Vec<(UniPoly, u32)> = parts
        .iter()
        .enumerate()
        .map(|(i, c)| (UniPoly::from_integers(c), top - i as u32))
        .collect();
    DiffOperator::univariate(&list)
}

/// One of the factorizations displayed for a specific trinomial.
#[derive(Debug, Clone)]
pub struct NamedFactorization {
    pub name: &'static str,
    pub m: u32,
    pub m1: u32,
    /// The printed ODE.
    pub target: DiffOperator,
    pub left: DiffOperator,
    pub right: DiffOperator,
    pub multiplier: Option<DiffOperator>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    pub name: &'static str,
    pub m: u32,
    pub m1: u32,
    /// `multiplier ∘ target = left ∘ right`.
    pub identity_holds: bool,
    /// `target` is a rational multiple of `M(m, m_1)`; the multiple.
    pub scale_to_mellin: Option<String>,
}

/// The four printed factorizations, coefficient lists transcribed from the
/// displays (little-endian in `x`).
pub fn named_factorizations() -> Vec<NamedFactorization> {
    vec![
        NamedFactorization {
            name: "y^3 + x y^2 - 1",
            m: 3,
            m1: 2,
            target: operator_from_integers(&[&[-27, 0, 0, 4], &[0, 0, 18], &[0, 4], &[-4]]),
            left: operator_from_integers(&[&[0, -27, 0, 0, 4], &[27, 0, 0, 14], &[0, 0, 4]]),
            right: operator_from_integers(&[&[0, 1], &[-1]]),
            multiplier: Some(DiffOperator::x_power(1, 0, 2)),
        },
        NamedFactorization {
            name: "y^3 + x y - 1",
            m: 3,
            m1: 1,
            target: operator_from_integers(&[&[27, 0, 0, 4], &[0, 0, 18], &[0, 10], &[-2]]),
            left: DiffOperator::d_power(1, 0, 1),
            right: operator_from_integers(&[&[27, 0, 0, 4], &[0, 0, 6], &[0, -2]]),
            multiplier: None,
        },
        NamedFactorization {
            name: "y^4 + x y^2 - 1",
            m: 4,
            m1: 2,
            target: operator_from_integers(&[
                &[-256, 0, 0, 0, 16],
                &[0, 0, 0, 160],
                &[0, 0, 360],
                &[0, 120],
                &[-15],
            ]),
            left: operator_from_integers(&[&[-16, 0, 4], &[0, 20], &[15]]),
            right: operator_from_integers(&[&[16, 0, 4], &[0, 4], &[-1]]),
            multiplier: None,
        },
        NamedFactorization {
            name: "y^6 + x y^2 - 1",
            m: 6,
            m1: 2,
            target: operator_from_integers(&[
                &[-46656, 0, 0, 0, 0, 0, 1024],
                &[0, 0, 0, 0, 0, 27648],
                &[0, 0, 0, 0, 242816],
                &[0, 0, 0, 818944],
                &[0, 0, 955780],
                &[0, 236180],
                &[-6545],
            ]),
            left: operator_from_integers(&[&[-216, 0, 0, 32], &[0, 0, 432], &[0, 1526], &[1309]]),
            right: operator_from_integers(&[&[216, 0, 0, 32], &[0, 0, 144], &[0, 86], &[-5]]),
            multiplier: None,
        },
    ]
}

impl NamedFactorization {
    pub fn check(&self) -> Result<FactorizationReport> {
        let identity_holds = factorization_check(
            &self.left,
            &self.right,
            &self.target,
            self.multiplier.as_ref(),
        )?;
        let mellin = mellin_operator_1d(self.m, self.m1)?;
        let scale = self
            .target
            .rational_multiple_of(&mellin)
            .map(|s| crate::series::ring::fraction_string(&s));
        Ok(FactorizationReport {
            name: self.name,
            m: self.m,
            m1: self.m1,
            identity_holds,
            scale_to_mellin: scale,
        })
    }
}

/// Whether a polynomial is a nonzero rational multiple of another.
pub fn proportional(p: &UniPoly, r: &UniPoly) -> bool {
    p.rational_multiple_of(r).is_some_and(|c| !c.is_zero())
}

/// Sign-normalised copy: leading coefficient positive.
pub fn positive_leading(p: &UniPoly) -> UniPoly {
    match p.leading() {
        Some(c) if c.is_negative() => p.scale(&-BigRational::one()),
        _ => p.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::series::{Rationals, TruncatedSeries};

    #[test]
    fn named_operators_are_mellin_operators() {
        for f in named_factorizations() {
            let r = f.check().unwrap();
            assert!(r.identity_holds, "{}", f.name);
            assert!(r.scale_to_mellin.is_some(), "{}", f.name);
        }
    }

    #[test]
    fn cubic_scales() {
        assert_eq!(
            mellin_operator_1d(3, 2).unwrap(),
            operator_from_integers(&[&[-27, 0, 0, 4], &[0, 0, 18], &[0, 4], &[-4]])
        );
        assert_eq!(
            leading_coefficient(&mellin_operator_1d(3, 1).unwrap()).unwrap(),
            UniPoly::from_integers(&[27, 0, 0, 4])
        );
    }

    #[test]
    fn discriminants() {
        assert_eq!(
            discriminant_poly(3, 2).unwrap(),
            UniPoly::from_integers(&[-27, 0, 0, 4])
        );
        assert_eq!(
            discriminant_poly(3, 1).unwrap(),
            UniPoly::from_integers(&[27, 0, 0, 4])
        );
        assert_eq!(
            discriminant_poly(2, 1).unwrap(),
            UniPoly::from_integers(&[4, 0, 1])
        );
        let lc = leading_coefficient(&mellin_operator_1d(6, 2).unwrap()).unwrap();
        assert!(proportional(
            &lc,
            &UniPoly::from_integers(&[-46656, 0, 0, 0, 0, 0, 1024])
        ));
        assert!(!proportional(&lc, &discriminant_poly(6, 2).unwrap()));
    }

    #[test]
    fn derivative_left_factor_for_small_degrees() {
        for m in 2..=6 {
            derivative_left_factor(m).unwrap();
        }
        let (_, right) = derivative_left_factor(3).unwrap();
        assert_eq!(
            right,
            operator_from_integers(&[&[27, 0, 0, 4], &[0, 0, 6], &[0, -2]])
        );
        // m = 2: x(theta - 1) + 4 D
        let (_, right) = derivative_left_factor(2).unwrap();
        assert_eq!(right, operator_from_integers(&[&[4, 0, 1], &[0, -1]]));
    }

    #[test]
    fn theta_right_factor_for_small_degrees() {
        for m in 2..=5 {
            let p = theta_right_factor(m).unwrap();
            assert_eq!(p.exponent, m - 1, "m = {m}");
            assert!(p.displayed_identity_holds, "m = {m}");
            let x = TruncatedSeries::variable(Rationals, 1, 6, 0);
            assert!(p.right.apply(&x).unwrap().is_zero());
        }
        let p = theta_right_factor(3).unwrap();
        assert_eq!(
            p.left,
            operator_from_integers(&[&[0, -27, 0, 0, 4], &[27, 0, 0, 14], &[0, 0, 4]])
        );
    }

    #[test]
    fn weyl_identity_theta_plus_one() {
        let lhs = DiffOperator::theta(1, 0)
            .add(&DiffOperator::constant(1, rat(1)))
            .unwrap();
        assert_eq!(
            lhs,
            DiffOperator::d_power(1, 0, 1)
                .compose(&DiffOperator::x_power(1, 0, 1))
                .unwrap()
        );
    }

    #[test]
    fn right_division_remainder() {
        let a = operator_from_integers(&[&[0, 1], &[1]]); // x D + 1
        let d = DiffOperator::d_power(1, 0, 1);
        let (quot, rem) = right_divide(&a, &d).unwrap().unwrap();
        assert_eq!(quot, DiffOperator::x_power(1, 0, 1));
        assert_eq!(rem, DiffOperator::identity(1));
    }
}
