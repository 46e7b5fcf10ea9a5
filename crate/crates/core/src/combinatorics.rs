//! Exponent bookkeeping for `y^m + x_1 y^{m_1} + ... + x_n y^{m_n} - 1 = 0`.
//!
//! Everything in here is exact integer arithmetic: the index box `B`, the
//! split of `B` into the exponents that occur in the principal series and
//! the ones that do not, dimension formulas for the algebraic and
//! logarithmic parts of the solution space, and the coset representatives
//! that label the twisted equations.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multi-index `(i_1, ..., i_n)` of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit vector `e_j`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|I|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Scalar product with an integer weight vector.
    pub fn dot(&self, weights: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&a, &b)| u64::from(a) * u64::from(b))
            .sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self - other`, `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise reduction modulo `m`.
    pub fn rem(&self, m: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a % m).collect())
    }

    pub fn is_in_box(&self, m: u32) -> bool {
        self.0.iter().all(|&a| a < m)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// The exponent data `(m; m_1, ..., m_n)` of the reduced equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentProfile {
    m: u32,
    exponents: Vec<u32>,
    d: u32,
    complements: Vec<u32>,
}

/// Validates and builds a profile.
pub fn make_profile(m: u32, exponents: &[u32]) -> Result<ExponentProfile> {
    if exponents.is_empty() {
        return Err(Error::InvalidProfile(
            "at least one exponent m_1 is required".into(),
        ));
    }
    if exponents[0] >= m {
        return Err(Error::InvalidProfile(format!(
            "need m > m_1, got m = {m}, m_1 = {}",
            exponents[0]
        )));
    }
    if exponents.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidProfile(format!(
            "exponents must be strictly decreasing, got {exponents:?}"
        )));
    }
    if *exponents.last().unwrap() == 0 {
        return Err(Error::InvalidProfile("exponents must be positive".into()));
    }
    let d = exponents.iter().fold(m, |g, &e| g.gcd(&e));
    Ok(ExponentProfile {
        m,
        exponents: exponents.to_vec(),
        d,
        complements: exponents.iter().map(|&e| m - e).collect(),
    })
}

impl ExponentProfile {
    pub fn new(m: u32, exponents: &[u32]) -> Result<Self> {
        make_profile(m, exponents)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `(m_1, ..., m_n)`.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// `(m - m_1, ..., m - m_n)`.
    pub fn complements(&self) -> &[u32] {
        &self.complements
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// `gcd(m, m_1, ..., m_n)`.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Whether `m_1 = m - 1`, which changes the dimension formulas by one.
    pub fn top_exponent_adjacent(&self) -> bool {
        self.exponents[0] + 1 == self.m
    }

    /// `m^n`, the holonomic rank.
    pub fn rank(&self) -> u64 {
        u64::from(self.m).pow(self.n() as u32)
    }

    pub fn check_in_box(&self, index: &MultiIndex) -> Result<()> {
        if index.len() != self.n() || !index.is_in_box(self.m) {
            return Err(Error::IndexOutOfBox {
                index: index.0.clone(),
                m: self.m,
                n: self.n(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for ExponentProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.m)?;
        for (k, e) in self.exponents.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices in `{0, ..., m-1}^n`, lexicographically ordered.
pub fn index_box(profile: &ExponentProfile) -> Vec<MultiIndex> {
    cube(profile.m(), profile.n())
}

pub(crate) fn cube(m: u32, n: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity((m as usize).pow(n as u32));
    let mut cur = vec![0u32; n];
    loop {
        out.push(MultiIndex(cur.clone()));
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < m {
                break;
            }
            cur[pos] = 0;
        }
    }
}

/// Whether the principal-series coefficient at `nu` vanishes: some
/// `1 <= mu <= |nu| - 1` has `<M, nu> - m mu + 1 = 0`.
pub fn principal_coefficient_vanishes(profile: &ExponentProfile, nu: &MultiIndex) -> bool {
    let weight = nu.dot(profile.exponents()) + 1;
    let m = u64::from(profile.m());
    let top = u64::from(nu.degree());
    (1..top).any(|mu| weight == m * mu)
}

/// `B'`: the exponents in the box that carry a nonzero principal-series coefficient.
pub fn algebraic_index_set(profile: &ExponentProfile) -> Vec<MultiIndex> {
    index_box(profile)
        .into_iter()
        .filter(|nu| !principal_coefficient_vanishes(profile, nu))
        .collect()
}

/// `B'' = B \ B'`.
pub fn missing_index_set(profile: &ExponentProfile) -> Vec<MultiIndex> {
    index_box(profile)
        .into_iter()
        .filter(|nu| principal_coefficient_vanishes(profile, nu))
        .collect()
}

/// `B''` through the congruence `<M, nu> = -1 (mod m)`, dropping `nu = e_1`
/// when `m_1 = m - 1` (there the only solution `mu` equals `|nu|`).
pub fn missing_index_set_modular(profile: &ExponentProfile) -> Vec<MultiIndex> {
    let m = u64::from(profile.m());
    let e1 = MultiIndex::unit(profile.n(), 0);
    index_box(profile)
        .into_iter()
        .filter(|nu| (nu.dot(profile.exponents()) + 1) % m == 0)
        .filter(|nu| !(profile.top_exponent_adjacent() && *nu == e1))
        .collect()
}

/// Dimensions of the solution space and its algebraic/logarithmic parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub rank: u64,
    pub dim_y: u64,
    pub dim_r: u64,
    pub dim_s: u64,
    pub card_bprime: u64,
}

/// Formula values for `dim Y`, `dim R` and `dim S`; `card_bprime` is counted directly.
///
/// For `d > 1` every solution is algebraic, so `dim Y = m^n` and `R = S = 0`.
pub fn dims(profile: &ExponentProfile) -> DimensionReport {
    let rank = profile.rank();
    let card_bprime = algebraic_index_set(profile).len() as u64;
    if profile.d() > 1 {
        return DimensionReport {
            rank,
            dim_y: rank,
            dim_r: 0,
            dim_s: 0,
            card_bprime,
        };
    }
    let per_residue = rank / u64::from(profile.m());
    let (dim_y, dim_r) = if profile.top_exponent_adjacent() {
        (rank - per_residue + 1, per_residue - 1)
    } else {
        (rank - per_residue, per_residue)
    };
    DimensionReport {
        rank,
        dim_y,
        dim_r,
        dim_s: dim_r,
        card_bprime,
    }
}

/// A basis of the relation space `R`, in coordinates indexed by the coset
/// representatives of [`coset_representatives`].
///
/// Relies on every representative having first entry 0, which the
/// lexicographic choice guarantees when `m_1 = m - 1`: all twisted root sums
/// are then the same multiple of `x_1`.
pub fn relation_basis(profile: &ExponentProfile) -> Result<Vec<Vec<BigRational>>> {
    if profile.d() != 1 {
        return Err(Error::RequiresCoprime(profile.d()));
    }
    let size = (profile.rank() / u64::from(profile.m())) as usize;
    let unit = |k: usize| {
        let mut v = vec![BigRational::zero(); size];
        v[k] = BigRational::one();
        v
    };
    if profile.top_exponent_adjacent() {
        Ok((1..size)
            .map(|k| {
                let mut v = unit(0);
                v[k] = -BigRational::one();
                v
            })
            .collect())
    } else {
        Ok((0..size).map(unit).collect())
    }
}

/// The cyclic subgroup `{ j (m_1, ..., m_n) mod m }` of `(Z/m)^n`.
pub fn scaling_subgroup(profile: &ExponentProfile) -> Vec<MultiIndex> {
    let m = profile.m();
    let order = m / profile.d();
    (0..order)
        .map(|j| MultiIndex(profile.exponents().iter().map(|&e| (j * e) % m).collect()))
        .collect()
}

/// Lexicographically smallest element of each coset of [`scaling_subgroup`],
/// listed in lexicographic order (so the zero index comes first).
pub fn coset_representatives(profile: &ExponentProfile) -> Vec<MultiIndex> {
    let m = profile.m();
    let subgroup = scaling_subgroup(profile);
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for idx in index_box(profile) {
        if seen.contains(&idx) {
            continue;
        }
        for h in &subgroup {
            seen.insert(idx.add(h).rem(m));
        }
        reps.push(idx);
    }
    reps
}

/// The coset of `index` under [`scaling_subgroup`].
pub fn coset_of(profile: &ExponentProfile, index: &MultiIndex) -> Vec<MultiIndex> {
    scaling_subgroup(profile)
        .iter()
        .map(|h| index.add(h).rem(profile.m()))
        .collect()
}

/// `#{ nu in B : <M, nu> = r (mod m) }`.
pub fn modular_count(profile: &ExponentProfile, residue: u32) -> u64 {
    let m = u64::from(profile.m());
    let r = u64::from(residue) % m;
    index_box(profile)
        .iter()
        .filter(|nu| nu.dot(profile.exponents()) % m == r)
        .count() as u64
}

/// Whether some `i, j in {0, ..., m-2}` make `(mi - 1)/(m(m-1)) + j/m` an integer.
///
/// Equivalent to `m(m-1) | mi - 1 + j(m-1)`.
pub fn beukers_heckman_reducible(m: u32) -> bool {
    let m = BigInt::from(m);
    let one = BigInt::one();
    let modulus = &m * (&m - &one);
    let top = &m - 2u32;
    let mut i = BigInt::zero();
    while i <= top {
        let mut j = BigInt::zero();
        while j <= top {
            let num = &m * &i - &one + &j * (&m - &one);
            if num.mod_floor(&modulus).is_zero() {
                return true;
            }
            j += 1u32;
        }
        i += 1u32;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: u32, e: &[u32]) -> ExponentProfile {
        make_profile(m, e).unwrap()
    }

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    #[test]
    fn profile_validation() {
        let a = p(3, &[2, 1]);
        assert_eq!((a.n(), a.d(), a.complements()), (2, 1, &[1, 2][..]));
        let b = p(6, &[4, 2]);
        assert_eq!((b.d(), b.complements()), (2, &[2, 4][..]));
        assert!(make_profile(3, &[3, 1]).is_err());
        assert!(make_profile(3, &[]).is_err());
        assert!(make_profile(5, &[2, 3]).is_err());
        assert!(make_profile(5, &[2, 2]).is_err());
        assert!(make_profile(5, &[2, 0]).is_err());
    }

    #[test]
    fn box_enumeration() {
        assert_eq!(index_box(&p(2, &[1])), vec![idx(&[0]), idx(&[1])]);
        let b = index_box(&p(3, &[2, 1]));
        assert_eq!(b.len(), 9);
        assert_eq!(b.first(), Some(&idx(&[0, 0])));
        assert_eq!(b.last(), Some(&idx(&[2, 2])));
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(index_box(&p(6, &[4, 2])).len(), 36);
    }

    #[test]
    fn algebraic_indices() {
        let cubic = p(3, &[2, 1]);
        assert_eq!(missing_index_set(&cubic), vec![idx(&[0, 2]), idx(&[2, 1])]);
        assert_eq!(algebraic_index_set(&cubic).len(), 7);
        assert_eq!(algebraic_index_set(&p(2, &[1])), vec![idx(&[0]), idx(&[1])]);
        assert_eq!(algebraic_index_set(&p(3, &[1])), vec![idx(&[0]), idx(&[1])]);
    }

    #[test]
    fn dimension_reports() {
        let r = dims(&p(3, &[2, 1]));
        assert_eq!(
            (r.rank, r.dim_y, r.dim_r, r.dim_s, r.card_bprime),
            (9, 7, 2, 2, 7)
        );
        let r = dims(&p(3, &[1]));
        assert_eq!((r.rank, r.dim_y, r.dim_r, r.dim_s), (3, 2, 1, 1));
        let r = dims(&p(6, &[4, 2]));
        assert_eq!((r.rank, r.dim_y, r.dim_r, r.card_bprime), (36, 36, 0, 36));
        let r = dims(&p(2, &[1]));
        assert_eq!((r.rank, r.dim_y, r.dim_r), (2, 2, 0));
    }

    #[test]
    fn relation_bases() {
        let q = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(
            relation_basis(&p(3, &[2, 1])).unwrap(),
            vec![vec![q(1), q(-1), q(0)], vec![q(1), q(0), q(-1)]]
        );
        assert_eq!(relation_basis(&p(3, &[1])).unwrap(), vec![vec![q(1)]]);
        assert!(relation_basis(&p(2, &[1])).unwrap().is_empty());
        assert_eq!(relation_basis(&p(4, &[2])), Err(Error::RequiresCoprime(2)));
    }

    #[test]
    fn cosets() {
        assert_eq!(
            coset_representatives(&p(3, &[2, 1])),
            vec![idx(&[0, 0]), idx(&[0, 1]), idx(&[0, 2])]
        );
        assert_eq!(
            coset_representatives(&p(6, &[2])),
            vec![idx(&[0]), idx(&[1])]
        );
        assert_eq!(coset_representatives(&p(2, &[1])), vec![idx(&[0])]);
    }

    #[test]
    fn modular_counts() {
        assert_eq!(modular_count(&p(3, &[2, 1]), 2), 3);
        assert_eq!(modular_count(&p(3, &[1]), 0), 1);
        assert_eq!(modular_count(&p(2, &[1]), 1), 1);
    }

    #[test]
    fn beukers_heckman_small() {
        assert!(!beukers_heckman_reducible(2));
        assert!(!beukers_heckman_reducible(3));
        assert!(!beukers_heckman_reducible(7));
    }

    #[test]
    fn modular_and_direct_missing_sets_agree() {
        for m in 2..=6 {
            for profile in all_profiles(m, 3) {
                assert_eq!(
                    missing_index_set(&profile),
                    missing_index_set_modular(&profile),
                    "{profile}"
                );
            }
        }
    }

    pub(crate) fn all_profiles(m: u32, max_n: usize) -> Vec<ExponentProfile> {
        // every strictly decreasing subset of {1, ..., m-1} of size <= max_n
        let mut out = Vec::new();
        for mask in 1u32..(1 << (m - 1)) {
            let mut e: Vec<u32> = (1..m).filter(|k| mask & (1 << (k - 1)) != 0).collect();
            if e.len() > max_n {
                continue;
            }
            e.reverse();
            out.push(make_profile(m, &e).unwrap());
        }
        out
    }
}
