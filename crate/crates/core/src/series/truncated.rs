//! Sparse multivariate power series truncated at a total degree.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::ring::{Ring, COMPLEX_PRUNE_RELATIVE};
use crate::combinatorics::MultiIndex;
use crate::error::{Error, Result};

/// `sum_s c_s x^s` with every `|s| <= order` known exactly (up to the ring's
/// arithmetic) and nothing known beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<R: Ring> {
    ring: R,
    n_vars: usize,
    order: u32,
    terms: BTreeMap<MultiIndex, R::Elem>,
}

/// All exponents in `N^n` of total degree at most `order`, graded then lexicographic.
pub fn simplex(n: usize, order: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for deg in 0..=order {
        let mut cur = vec![0u32; n];
        fill(&mut cur, 0, deg, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    if cur.is_empty() {
        return;
    }
    for k in (0..=remaining).rev() {
        cur[pos] = k;
        fill(cur, pos + 1, remaining - k, out);
    }
    cur[pos] = 0;
}

impl<R: Ring> TruncatedSeries<R> {
    pub fn zero(ring: R, n_vars: usize, order: u32) -> Self {
        TruncatedSeries {
            ring,
            n_vars,
            order,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a series from `(exponent, coefficient)` pairs, summing repeats
    /// and dropping anything above `order`.
    pub fn from_terms<I>(ring: R, n_vars: usize, order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, R::Elem)>,
    {
        let mut map: BTreeMap<MultiIndex, R::Elem> = BTreeMap::new();
        for (s, c) in terms {
            assert_eq!(
                s.len(),
                n_vars,
                "exponent length differs from variable count"
            );
            if s.degree() > order {
                continue;
            }
            match map.get_mut(&s) {
                Some(v) => *v = ring.add(v, &c),
                None => {
                    map.insert(s, c);
                }
            }
        }
        let mut out = TruncatedSeries {
            ring,
            n_vars,
            order,
            terms: map,
        };
        out.normalize();
        out
    }

    pub fn constant(ring: R, n_vars: usize, order: u32, c: R::Elem) -> Self {
        Self::from_terms(ring, n_vars, order, [(MultiIndex::zero(n_vars), c)])
    }

    pub fn one(ring: R, n_vars: usize, order: u32) -> Self {
        let one = ring.one();
        Self::constant(ring, n_vars, order, one)
    }

    /// `c x^s`.
    pub fn monomial(ring: R, order: u32, exponent: MultiIndex, c: R::Elem) -> Self {
        let n = exponent.len();
        Self::from_terms(ring, n, order, [(exponent, c)])
    }

    /// The coordinate function `x_j`.
    pub fn variable(ring: R, n_vars: usize, order: u32, j: usize) -> Self {
        let one = ring.one();
        Self::from_terms(ring, n_vars, order, [(MultiIndex::unit(n_vars, j), one)])
    }

    fn normalize(&mut self) {
        let ring = &self.ring;
        if ring.is_exact() {
            self.terms.retain(|_, c| !ring.is_zero(c));
        } else {
            let top = self
                .terms
                .values()
                .map(|c| ring.norm(c))
                .fold(1.0f64, f64::max);
            let floor = COMPLEX_PRUNE_RELATIVE * top;
            self.terms.retain(|_, c| ring.norm(c) >= floor);
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &R::Elem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &MultiIndex) -> R::Elem {
        self.terms
            .get(s)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn has_term(&self, s: &MultiIndex) -> bool {
        self.terms.contains_key(s)
    }

    /// Largest coefficient magnitude in the complex embedding.
    pub fn max_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| self.ring.norm(c))
            .fold(0.0, f64::max)
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self::from_terms(
            self.ring.clone(),
            self.n_vars,
            order,
            self.terms.iter().map(|(s, c)| (s.clone(), c.clone())),
        )
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&MultiIndex) -> bool) -> Self {
        TruncatedSeries {
            ring: self.ring.clone(),
            n_vars: self.n_vars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| keep(s))
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient, landing in `target`.
    pub fn map_ring<T: Ring>(
        &self,
        target: T,
        mut f: impl FnMut(&MultiIndex, &R::Elem) -> T::Elem,
    ) -> TruncatedSeries<T> {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(s, c)| (s.clone(), f(s, c)))
            .collect();
        TruncatedSeries::from_terms(target, self.n_vars, self.order, terms)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::VariableMismatch(self.n_vars, other.n_vars));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let order = self.order.min(other.order);
        let terms = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(s, c)| (s.clone(), c.clone()));
        Ok(Self::from_terms(
            self.ring.clone(),
            self.n_vars,
            order,
            terms,
        ))
    }

    pub fn neg(&self) -> Self {
        let ring = self.ring.clone();
        self.map_ring(ring.clone(), |_, c| ring.neg(c))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let ring = self.ring.clone();
        self.map_ring(ring.clone(), |_, a| ring.mul(a, c))
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        let ring = self.ring.clone();
        self.map_ring(ring.clone(), |_, a| ring.scale(a, q))
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let order = self.order.min(other.order);
        let mut terms = Vec::new();
        for (s, a) in &self.terms {
            let ds = s.degree();
            if ds > order {
                continue;
            }
            for (t, b) in &other.terms {
                if ds + t.degree() <= order {
                    terms.push((s.add(t), self.ring.mul(a, b)));
                }
            }
        }
        Ok(Self::from_terms(
            self.ring.clone(),
            self.n_vars,
            order,
            terms,
        ))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.n_vars, self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    pub fn constant_term(&self) -> R::Elem {
        self.coefficient(&MultiIndex::zero(self.n_vars))
    }

    /// Multiplicative inverse, via `1/(c(1+g)) = c^{-1} sum_k (-g)^k`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = self.ring.inv(&c0).ok_or(Error::NonInvertibleConstant)?;
        let one = Self::one(self.ring.clone(), self.n_vars, self.order);
        let g = self.scale(&c0_inv).sub(&one)?;
        let mut h = one.clone();
        for _ in 0..self.order {
            h = one.sub(&g.mul(&h)?)?;
        }
        Ok(h.scale(&c0_inv))
    }

    /// Splits `log f = log c + log(f / c)` with `c` the constant term; returns
    /// `(c, log(f / c))`. The caller carries `log c` when the ring cannot.
    pub fn log_split(&self) -> Result<(R::Elem, Self)> {
        let c0 = self.constant_term();
        let c0_inv = self.ring.inv(&c0).ok_or(Error::NonInvertibleConstant)?;
        let one = Self::one(self.ring.clone(), self.n_vars, self.order);
        let g = self.scale(&c0_inv).sub(&one)?;
        Ok((c0, log1p_series(&g)?))
    }

    /// Logarithm including `log c_0`; fails when the ring cannot represent it.
    pub fn log(&self) -> Result<Self> {
        let (c0, rest) = self.log_split()?;
        let lc = self
            .ring
            .ln(&c0)
            .ok_or_else(|| Error::UnrepresentableLog(format!("{c0:?}")))?;
        let c = Self::constant(self.ring.clone(), self.n_vars, self.order, lc);
        rest.add(&c)
    }

    /// `d/dx_j`; the result is known to one degree less.
    pub fn derivative(&self, j: usize) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::InsufficientOrder { have: 0, need: 1 });
        }
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(s, _)| s.0[j] > 0)
            .map(|(s, c)| {
                let mut t = s.clone();
                t.0[j] -= 1;
                let k = BigRational::from_integer(s.0[j].into());
                (t, self.ring.scale(c, &k))
            })
            .collect();
        Ok(Self::from_terms(
            self.ring.clone(),
            self.n_vars,
            self.order - 1,
            terms,
        ))
    }

    /// Sum of the stored terms at `point`; everything above `order` is ignored.
    pub fn evaluate(&self, point: &[R::Elem]) -> Result<R::Elem> {
        if point.len() != self.n_vars {
            return Err(Error::VariableMismatch(self.n_vars, point.len()));
        }
        let ring = &self.ring;
        let mut total = ring.zero();
        for (s, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&s.0) {
                for _ in 0..e {
                    term = ring.mul(&term, x);
                }
            }
            total = ring.add(&total, &term);
        }
        Ok(total)
    }

    /// Canonical JSON: `{n_vars, order, ring, terms: [{exponent, coeff}]}` in
    /// lexicographic exponent order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(s, c)| json!({ "exponent": s.0, "coeff": self.ring.to_json(c) }))
            .collect();
        json!({
            "n_vars": self.n_vars,
            "order": self.order,
            "ring": self.ring.tag(),
            "terms": terms,
        })
    }
}

/// `log(1 + g)` for `g` without constant term.
fn log1p_series<R: Ring>(g: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
    let ring = g.ring().clone();
    let (n, order) = (g.n_vars(), g.order());
    let mut acc = TruncatedSeries::zero(ring.clone(), n, order);
    let mut power = TruncatedSeries::one(ring, n, order);
    for k in 1..=order {
        power = power.mul(g)?;
        if power.is_zero() {
            break;
        }
        let sign: i64 = if k % 2 == 1 { 1 } else { -1 };
        acc =
            acc.add(&power.scale_rational(&BigRational::new(sign.into(), i64::from(k).into())))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::series::ring::Rationals;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn uni(order: u32, coeffs: &[BigRational]) -> TruncatedSeries<Rationals> {
        TruncatedSeries::from_terms(
            Rationals,
            1,
            order,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (MultiIndex(vec![k as u32]), c.clone())),
        )
    }

    #[test]
    fn mercator() {
        let f = uni(3, &[rat(1), rat(1)]);
        assert_eq!(
            f.log().unwrap(),
            uni(3, &[rat(0), rat(1), q(-1, 2), q(1, 3)])
        );
    }

    #[test]
    fn derivative_and_product() {
        let x2 = uni(4, &[rat(0), rat(0), rat(1)]);
        let d = x2.derivative(0).unwrap();
        assert_eq!(d, uni(3, &[rat(0), rat(2)]));
        let a = uni(2, &[rat(1), q(-1, 2)]);
        let b = uni(2, &[rat(1), q(1, 2)]);
        assert_eq!(a.mul(&b).unwrap(), uni(2, &[rat(1), rat(0), q(-1, 4)]));
    }

    #[test]
    fn inverse_round_trip() {
        let f = uni(6, &[rat(2), rat(1), rat(3)]);
        let prod = f.mul(&f.inverse().unwrap()).unwrap();
        assert_eq!(prod, TruncatedSeries::one(Rationals, 1, 6));
    }

    #[test]
    fn log_requires_unit_constant() {
        let f = uni(3, &[rat(0), rat(1)]);
        assert_eq!(f.log_split().unwrap_err(), Error::NonInvertibleConstant);
        let g = uni(3, &[rat(2), rat(1)]);
        assert!(matches!(g.log(), Err(Error::UnrepresentableLog(_))));
        let (c0, rest) = g.log_split().unwrap();
        assert_eq!(c0, rat(2));
        assert_eq!(rest.coefficient(&MultiIndex(vec![1])), q(1, 2));
    }

    #[test]
    fn truncation_is_respected() {
        let f = uni(2, &[rat(1), rat(1), rat(1), rat(1)]);
        assert_eq!(f.len(), 3);
        assert!(f.terms().all(|(s, _)| s.degree() <= 2));
        assert_eq!(simplex(2, 2).len(), 6);
        assert_eq!(simplex(3, 12).len(), 455);
    }
}
