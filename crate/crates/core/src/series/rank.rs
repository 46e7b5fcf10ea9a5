//! Linear independence of families of truncated series.

use std::collections::BTreeSet;

use num_complex::Complex64;

use super::ring::{ComplexFloat, Cyclotomic, CyclotomicField, Rationals, Ring};
use super::truncated::TruncatedSeries;
use crate::combinatorics::MultiIndex;
use crate::error::{Error, Result};
use crate::linalg::{exact_rank, numeric_rank};

/// Relative pivot tolerance for numerical ranks.
pub const RANK_PIVOT_TOLERANCE: f64 = 1e-10;

/// Rings whose series families have a computable rank.
pub trait RankRing: Ring {
    fn family_rank(&self, rows: &[Vec<Self::Elem>]) -> Result<usize>;
}

impl RankRing for Rationals {
    fn family_rank(&self, rows: &[Vec<Self::Elem>]) -> Result<usize> {
        Ok(exact_rank(self, rows))
    }
}

impl RankRing for ComplexFloat {
    fn family_rank(&self, rows: &[Vec<Complex64>]) -> Result<usize> {
        Ok(numeric_rank(rows, RANK_PIVOT_TOLERANCE))
    }
}

impl RankRing for Cyclotomic {
    /// Rank over `C` through the embedding `eps -> exp(2 pi i / m)`, computed
    /// numerically and confirmed exactly in `Q(eps)`; a disagreement is an error.
    fn family_rank(&self, rows: &[Vec<Self::Elem>]) -> Result<usize> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|c| self.to_complex(c)).collect())
            .collect();
        let numeric = numeric_rank(&complex, RANK_PIVOT_TOLERANCE);
        let field = CyclotomicField::new(self.modulus());
        let reduced: Vec<Vec<_>> = rows
            .iter()
            .map(|r| r.iter().map(|c| field.from_group_ring(c)).collect())
            .collect();
        let exact = exact_rank(&field, &reduced);
        if exact != numeric {
            return Err(Error::Invalid(format!(
                "numerical rank {numeric} disagrees with exact rank {exact}"
            )));
        }
        Ok(exact)
    }
}

/// Coefficient matrix of a family over the union of their supports, all
/// truncated to the smallest order in the family.
pub fn coefficient_matrix<R: Ring>(family: &[TruncatedSeries<R>]) -> Result<Vec<Vec<R::Elem>>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    for s in family {
        if s.n_vars() != first.n_vars() {
            return Err(Error::VariableMismatch(first.n_vars(), s.n_vars()));
        }
        if s.ring() != first.ring() {
            return Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                first.ring(),
                s.ring()
            )));
        }
    }
    let order = family.iter().map(TruncatedSeries::order).min().unwrap();
    let support: BTreeSet<MultiIndex> = family
        .iter()
        .flat_map(|s| s.terms().map(|(k, _)| k.clone()))
        .filter(|k| k.degree() <= order)
        .collect();
    Ok(family
        .iter()
        .map(|s| support.iter().map(|k| s.coefficient(k)).collect())
        .collect())
}

/// Dimension of the span of `family`.
pub fn independence_rank<R: RankRing>(family: &[TruncatedSeries<R>]) -> Result<usize> {
    let rows = coefficient_matrix(family)?;
    match family.first() {
        Some(s) => s.ring().family_rank(&rows),
        None => Ok(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{index_box, make_profile};
    use crate::series::solutions::{convenient_basis_series, rotate};

    #[test]
    fn quadratic_basis_rank() {
        let p = make_profile(2, &[1]).unwrap();
        let a = convenient_basis_series(&p, &MultiIndex(vec![0]), 8).unwrap();
        let b = convenient_basis_series(&p, &MultiIndex(vec![1]), 8).unwrap();
        assert_eq!(independence_rank(&[a.clone(), b]).unwrap(), 2);
        assert_eq!(independence_rank(&[a.clone(), a]).unwrap(), 1);
    }

    #[test]
    fn rotated_monomials_vandermonde() {
        // the character table (eps^{<I,J>}) has full rank
        for m in 2..=4u32 {
            for n in 1..=2usize {
                let exps: Vec<u32> = (1..=n as u32).rev().collect();
                if exps[0] >= m {
                    continue;
                }
                let p = make_profile(m, &exps).unwrap();
                let generic = TruncatedSeries::from_terms(
                    Rationals,
                    n,
                    n as u32 * (m - 1),
                    index_box(&p)
                        .into_iter()
                        .map(|i| (i, num_rational::BigRational::from_integer(1.into()))),
                );
                let fam: Vec<_> = index_box(&p)
                    .iter()
                    .map(|i| rotate(&generic, m, i).unwrap())
                    .collect();
                assert_eq!(
                    independence_rank(&fam).unwrap(),
                    (m as usize).pow(n as u32),
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = TruncatedSeries::one(Rationals, 1, 3);
        let b = TruncatedSeries::one(Rationals, 2, 3);
        assert!(independence_rank(&[a, b]).is_err());
    }
}
