//! Power-series solutions at the origin: the principal root, the convenient
//! basis built from the coefficient recurrence, and root-of-unity rotations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ring::{Cyclotomic, IntoCyclotomic, Rationals, Ring};
use super::truncated::{simplex, TruncatedSeries};
use crate::combinatorics::{index_box, ExponentProfile, MultiIndex};
use crate::error::{Error, Result};

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Coefficient of `x^nu` in the principal root (the branch equal to 1 at the origin).
pub fn principal_coefficient(profile: &ExponentProfile, nu: &MultiIndex) -> BigRational {
    let deg = nu.degree();
    let m = BigInt::from(profile.m());
    let weight = BigInt::from(nu.dot(profile.exponents())) + 1;
    let mut numer = if deg % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    for mu in 1..deg {
        numer *= &weight - &m * mu;
    }
    let denom = m.pow(deg) * nu.0.iter().map(|&k| factorial(k)).product::<BigInt>();
    BigRational::new(numer, denom)
}

/// The principal root as an exact series.
pub fn principal_series(profile: &ExponentProfile, order: u32) -> TruncatedSeries<Rationals> {
    let n = profile.n();
    TruncatedSeries::from_terms(
        Rationals,
        n,
        order,
        simplex(n, order).into_iter().map(|nu| {
            let c = principal_coefficient(profile, &nu);
            (nu, c)
        }),
    )
}

/// `P_j(s)`: the theta-polynomial of the `j`-th Mellin operator at an integer point.
pub fn theta_polynomial_value(profile: &ExponentProfile, j: usize, s: &MultiIndex) -> BigInt {
    let m = i64::from(profile.m());
    let weight = s.dot(profile.exponents()) as i64;
    let coweight = s.dot(profile.complements()) as i64;
    let mut v = BigInt::one();
    for k in 0..i64::from(profile.exponents()[j]) {
        v *= weight + m * k + 1;
    }
    for k in 0..i64::from(profile.complements()[j]) {
        v *= coweight + m * k - 1;
    }
    v
}

/// `(-1)^{m_j} m^m`, the constant in front of the pure derivative.
pub fn derivative_constant(profile: &ExponentProfile, j: usize) -> BigInt {
    let c = BigInt::from(profile.m()).pow(profile.m());
    if profile.exponents()[j] % 2 == 0 {
        c
    } else {
        -c
    }
}

/// The convenient-basis solution `f_I = x^I (1 + series in x_1^m, ..., x_n^m)`,
/// normalized to coefficient 1 at `x^I`.
///
/// Coefficients follow `phi(t) P_j(t) = c_j phi(t + m e_j) prod_k (t_j + m - k)`,
/// walking each exponent back along the first coordinate that allows it.
pub fn convenient_basis_series(
    profile: &ExponentProfile,
    start: &MultiIndex,
    order: u32,
) -> Result<TruncatedSeries<Rationals>> {
    profile.check_in_box(start)?;
    if order < start.degree() {
        return Err(Error::InsufficientOrder {
            have: order,
            need: start.degree(),
        });
    }
    let n = profile.n();
    let m = profile.m();
    let constants: Vec<BigInt> = (0..n).map(|j| derivative_constant(profile, j)).collect();

    // offsets p with |start + m p| <= order, in graded order so predecessors come first
    let budget = (order - start.degree()) / m;
    let mut coeffs: std::collections::BTreeMap<MultiIndex, BigRational> = Default::default();
    let mut terms = Vec::new();
    for p in simplex(n, budget) {
        let t = MultiIndex(p.0.iter().zip(&start.0).map(|(a, i)| m * a + i).collect());
        let value = if p.degree() == 0 {
            BigRational::one()
        } else {
            let j = p.0.iter().position(|&a| a > 0).unwrap();
            let mut prev = t.clone();
            prev.0[j] -= m;
            let phi_prev = &coeffs[&prev];
            if phi_prev.is_zero() {
                BigRational::zero()
            } else {
                let tj = i64::from(t.0[j]);
                let falling: BigInt = (0..i64::from(m)).map(|k| BigInt::from(tj - k)).product();
                let numer = theta_polynomial_value(profile, j, &prev);
                phi_prev * BigRational::new(numer, &constants[j] * falling)
            }
        };
        coeffs.insert(t.clone(), value.clone());
        terms.push((t, value));
    }
    Ok(TruncatedSeries::from_terms(Rationals, n, order, terms))
}

/// All `m^n` convenient-basis series, in the order of [`index_box`].
pub fn convenient_basis(
    profile: &ExponentProfile,
    order: u32,
) -> Result<Vec<TruncatedSeries<Rationals>>> {
    index_box(profile)
        .iter()
        .map(|i| convenient_basis_series(profile, i, order))
        .collect()
}

/// `y(eps^{i_1} x_1, ..., eps^{i_n} x_n)`: the coefficient at `s` is multiplied
/// by `eps^{<I, s>}`.
pub fn rotate<R: IntoCyclotomic>(
    series: &TruncatedSeries<R>,
    m: u32,
    shift: &MultiIndex,
) -> Result<TruncatedSeries<Cyclotomic>> {
    if shift.len() != series.n_vars() {
        return Err(Error::VariableMismatch(series.n_vars(), shift.len()));
    }
    let target = Cyclotomic::new(m);
    let source = series.ring().clone();
    Ok(series.map_ring(target, |s, c| {
        let e = source.to_cyclotomic(c, &target);
        target.shift(&e, s.dot(shift.entries()))
    }))
}

/// `eps^j y_pr(eps^{j m_1} x_1, ..., eps^{j m_n} x_n)`, the `j`-th root of the
/// original equation.
pub fn scaled_root_series(
    profile: &ExponentProfile,
    j: u32,
    order: u32,
) -> Result<TruncatedSeries<Cyclotomic>> {
    let m = profile.m();
    let shift = MultiIndex(profile.exponents().iter().map(|&e| (j * e) % m).collect());
    let rotated = rotate(&principal_series(profile, order), m, &shift)?;
    let ring = Cyclotomic::new(m);
    Ok(rotated.map_ring(ring, |_, c| ring.shift(c, u64::from(j))))
}

/// Terms whose exponent is congruent to `class` modulo `m` in every coordinate.
pub fn subseries<R: Ring>(
    series: &TruncatedSeries<R>,
    m: u32,
    class: &MultiIndex,
) -> TruncatedSeries<R> {
    series.filter(|s| s.0.iter().zip(&class.0).all(|(a, i)| a % m == *i))
}

/// Whether every `x^I`, `I` in the box, has a nonzero coefficient.
pub fn is_generating<R: Ring>(
    series: &TruncatedSeries<R>,
    profile: &ExponentProfile,
) -> Result<bool> {
    let need = profile.n() as u32 * (profile.m() - 1);
    if series.order() < need {
        return Err(Error::InsufficientOrder {
            have: series.order(),
            need,
        });
    }
    Ok(index_box(profile).iter().all(|i| series.has_term(i)))
}

/// `p(y) = y^m + sum_j c_j x_j y^{m_j} - 1` evaluated on a cyclotomic series,
/// where `c_j = eps^{twist_j}`.
pub fn substitute_into_equation(
    profile: &ExponentProfile,
    twist: &MultiIndex,
    y: &TruncatedSeries<Cyclotomic>,
) -> Result<TruncatedSeries<Cyclotomic>> {
    let ring = *y.ring();
    let (n, order) = (y.n_vars(), y.order());
    let mut total = y.pow(profile.m());
    for (j, &e) in profile.exponents().iter().enumerate() {
        let coeff = ring.root_power(u64::from(twist.0[j]));
        let xj = TruncatedSeries::monomial(ring, order, MultiIndex::unit(n, j), coeff);
        total = total.add(&xj.mul(&y.pow(e))?)?;
    }
    total.sub(&TruncatedSeries::one(ring, n, order))
}
