//! Elements of the Weyl algebra in canonical form `sum c_{a,b} x^a D^b`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::combinatorics::MultiIndex;
use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::series::ring::{fraction_string, Ring};
use crate::series::TruncatedSeries;

/// A linear differential operator with rational polynomial coefficients,
/// every `x` to the left of every `D`. Two operators are equal iff their term
/// maps are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    n_vars: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), BigRational>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i))
}

impl DiffOperator {
    pub fn zero(n_vars: usize) -> Self {
        DiffOperator {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(n_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = ((MultiIndex, MultiIndex), BigRational)>,
    {
        let mut out = Self::zero(n_vars);
        for ((a, b), c) in terms {
            assert!(
                a.len() == n_vars && b.len() == n_vars,
                "exponent length differs from variable count"
            );
            out.add_term(a, b, c);
        }
        out
    }

    fn add_term(&mut self, a: MultiIndex, b: MultiIndex, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// `c x^a D^b`.
    pub fn monomial(a: MultiIndex, b: MultiIndex, c: BigRational) -> Self {
        let n = a.len();
        Self::from_terms(n, [((a, b), c)])
    }

    pub fn constant(n_vars: usize, c: BigRational) -> Self {
        Self::monomial(MultiIndex::zero(n_vars), MultiIndex::zero(n_vars), c)
    }

    pub fn identity(n_vars: usize) -> Self {
        Self::constant(n_vars, BigRational::one())
    }

    /// Multiplication by `x_j^k`.
    pub fn x_power(n_vars: usize, j: usize, k: u32) -> Self {
        let mut a = MultiIndex::zero(n_vars);
        a.0[j] = k;
        Self::monomial(a, MultiIndex::zero(n_vars), BigRational::one())
    }

    /// `D_j^k`.
    pub fn d_power(n_vars: usize, j: usize, k: u32) -> Self {
        let mut b = MultiIndex::zero(n_vars);
        b.0[j] = k;
        Self::monomial(MultiIndex::zero(n_vars), b, BigRational::one())
    }

    /// The Euler operator `theta_j = x_j D_j`.
    pub fn theta(n_vars: usize, j: usize) -> Self {
        let e = MultiIndex::unit(n_vars, j);
        Self::monomial(e.clone(), e, BigRational::one())
    }

    /// Univariate operator from `(coefficient polynomial, derivative order)` pairs.
    pub fn univariate(parts: &[(UniPoly, u32)]) -> Self {
        let mut out = Self::zero(1);
        for (p, k) in parts {
            for (e, c) in p.coeffs().iter().enumerate() {
                out.add_term(MultiIndex(vec![e as u32]), MultiIndex(vec![*k]), c.clone());
            }
        }
        out
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: &MultiIndex, b: &MultiIndex) -> BigRational {
        self.terms
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Largest total derivative order `|b|`.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .map(|(_, b)| b.degree())
            .max()
            .unwrap_or(0)
    }

    /// Largest `|b| - |a|` over the terms, floored at 0: how many degrees an
    /// application can cost.
    pub fn degree_drop(&self) -> u32 {
        self.terms
            .keys()
            .map(|(a, b)| b.degree().saturating_sub(a.degree()))
            .max()
            .unwrap_or(0)
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::VariableMismatch(self.n_vars, other.n_vars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars);
        }
        DiffOperator {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// `self ∘ other`, normal-ordered with `D_j^b x_j^c = sum_k C(b,k) c!/(c-k)! x_j^{c-k} D_j^{b-k}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let n = self.n_vars;
        let mut out = Self::zero(n);
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &other.terms {
                // per-variable expansions of D_j^{b_j} x_j^{c_j}
                let mut partial: Vec<(Vec<u32>, Vec<u32>, BigInt)> =
                    vec![(Vec::new(), Vec::new(), BigInt::one())];
                for j in 0..n {
                    let (bj, cj) = (b.0[j], c.0[j]);
                    let mut next = Vec::new();
                    for (xs, ds, w) in &partial {
                        for k in 0..=bj.min(cj) {
                            let mut xs2 = xs.clone();
                            let mut ds2 = ds.clone();
                            xs2.push(a.0[j] + cj - k);
                            ds2.push(bj - k + d.0[j]);
                            next.push((xs2, ds2, w * binomial(bj, k) * falling(cj, k)));
                        }
                    }
                    partial = next;
                }
                let base = c1 * c2;
                for (xs, ds, w) in partial {
                    out.add_term(
                        MultiIndex(xs),
                        MultiIndex(ds),
                        &base * BigRational::from_integer(w),
                    );
                }
            }
        }
        Ok(out)
    }

    /// Composition of a chain of operators, left to right.
    pub fn compose_all(ops: &[DiffOperator]) -> Result<Self> {
        let mut iter = ops.iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Invalid("empty composition".into()))?
            .clone();
        iter.try_fold(first, |acc, op| acc.compose(op))
    }

    /// `self = lambda * other` for some nonzero rational `lambda`; returns it.
    pub fn rational_multiple_of(&self, other: &Self) -> Option<BigRational> {
        if self.n_vars != other.n_vars || self.terms.len() != other.terms.len() || other.is_zero() {
            return None;
        }
        let (key, c) = other.terms.iter().next().unwrap();
        let lambda = self.terms.get(key)? / c;
        (other.scale(&lambda) == *self).then_some(lambda)
    }

    pub fn equals_up_to_rational_scale(&self, other: &Self) -> bool {
        self.rational_multiple_of(other).is_some()
    }

    /// The positive rational multiple with coprime integer coefficients whose
    /// leading term (highest derivative, then highest power of `x`) is
    /// positive; returns the multiplier too.
    pub fn primitive(&self) -> (BigRational, Self) {
        let Some(lead) = self
            .terms
            .iter()
            .max_by(|((a1, b1), _), ((a2, b2), _)| {
                (b1.degree(), b1, a1.degree(), a1).cmp(&(b2.degree(), b2, a2.degree(), a2))
            })
            .map(|(_, c)| c)
        else {
            return (BigRational::one(), self.clone());
        };
        let denominators = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numerators = self.terms.values().fold(BigInt::zero(), |acc, c| {
            acc.gcd(&(c.numer() * (&denominators / c.denom())))
        });
        let mut lambda = BigRational::new(denominators, numerators);
        if lead.is_negative() {
            lambda = -lambda;
        }
        (lambda.clone(), self.scale(&lambda))
    }

    /// Exact left division by `x^e`: every term must carry the factor.
    pub fn left_divide_by_monomial(&self, e: &MultiIndex) -> Result<Self> {
        let mut out = Self::zero(self.n_vars);
        for ((a, b), c) in &self.terms {
            let reduced = a.checked_sub(e).ok_or_else(|| Error::NotDivisible {
                exponent: e.0.clone(),
            })?;
            out.add_term(reduced, b.clone(), c.clone());
        }
        Ok(out)
    }

    /// Coefficient polynomial of `D^k` for a univariate operator.
    pub fn univariate_coefficient(&self, k: u32) -> Result<UniPoly> {
        if self.n_vars != 1 {
            return Err(Error::NotUnivariate(self.n_vars));
        }
        let top = self
            .terms
            .keys()
            .filter(|(_, b)| b.0[0] == k)
            .map(|(a, _)| a.0[0] as usize)
            .max();
        let Some(top) = top else {
            return Ok(UniPoly::zero());
        };
        let mut coeffs = vec![BigRational::zero(); top + 1];
        for ((a, b), c) in &self.terms {
            if b.0[0] == k {
                coeffs[a.0[0] as usize] = c.clone();
            }
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Applies the operator to a series. The result is reliable up to
    /// `order - degree_drop()`.
    pub fn apply<R: Ring>(&self, series: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
        if series.n_vars() != self.n_vars {
            return Err(Error::VariableMismatch(self.n_vars, series.n_vars()));
        }
        let drop = self.degree_drop();
        let order = series
            .order()
            .checked_sub(drop)
            .ok_or(Error::InsufficientOrder {
                have: series.order(),
                need: drop,
            })?;
        let ring = series.ring();
        let mut out = Vec::new();
        for ((a, b), c) in &self.terms {
            for (s, v) in series.terms() {
                let Some(rest) = s.checked_sub(b) else {
                    continue;
                };
                let target = rest.add(a);
                if target.degree() > order {
                    continue;
                }
                let w: BigInt =
                    s.0.iter()
                        .zip(&b.0)
                        .map(|(&sj, &bj)| falling(sj, bj))
                        .product();
                out.push((target, ring.scale(v, &(c * BigRational::from_integer(w)))));
            }
        }
        Ok(TruncatedSeries::from_terms(
            ring.clone(),
            self.n_vars,
            order,
            out,
        ))
    }

    /// `[{a, b, coeff}]` in canonical term order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((a, b), c)| json!({ "a": a.0, "b": b.0, "coeff": fraction_string(c) }))
                .collect(),
        )
    }

    fn var_name(&self, j: usize, letter: &str) -> String {
        if self.n_vars == 1 {
            letter.to_string()
        } else {
            format!("{letter}{}", j + 1)
        }
    }

    fn monomial_text(&self, e: &MultiIndex, letter: &str) -> String {
        e.0.iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| {
                let v = self.var_name(j, letter);
                if k == 1 {
                    v
                } else {
                    format!("{v}^{k}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Grouped rendering with custom variable letters, e.g. `w`/`Dw` for the
    /// Horn operators.
    pub fn render_in(&self, x: &str, d: &str) -> String {
        Grouped { op: self, x, d }.to_string()
    }

    /// Flat canonical rendering, one signed term per `x^a D^b`.
    pub fn render_terms(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, ((a, b), c)) in self.terms.iter().enumerate() {
            let mut body: Vec<String> = Vec::new();
            let abs = c.abs();
            let xa = self.monomial_text(a, "x");
            let db = self.monomial_text(b, "D");
            if !abs.is_one() || (xa.is_empty() && db.is_empty()) {
                body.push(fraction_string(&abs));
            }
            if !xa.is_empty() {
                body.push(xa);
            }
            if !db.is_empty() {
                body.push(db);
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&body.join(" "));
        }
        out
    }
}

/// Grouped rendering: coefficients of each `D^b`, highest derivative first,
/// e.g. `(x^2 + 4) D^2 + x D - 1`.
impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Grouped {
            op: self,
            x: "x",
            d: "D",
        }
        .fmt(f)
    }
}

struct Grouped<'a> {
    op: &'a DiffOperator,
    x: &'a str,
    d: &'a str,
}

impl fmt::Display for Grouped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, xl, dl) = (self.op, self.x, self.d);
        if op.is_zero() {
            return write!(f, "0");
        }
        let mut groups: BTreeMap<MultiIndex, Vec<(MultiIndex, BigRational)>> = BTreeMap::new();
        for ((a, b), c) in &op.terms {
            groups
                .entry(b.clone())
                .or_default()
                .push((a.clone(), c.clone()));
        }
        let mut keys: Vec<MultiIndex> = groups.keys().cloned().collect();
        keys.sort_by(|p, q| q.degree().cmp(&p.degree()).then(q.cmp(p)));
        let mut first = true;
        for b in keys {
            let mut coeffs = groups.remove(&b).unwrap();
            coeffs.sort_by(|(p, _), (q, _)| q.degree().cmp(&p.degree()).then(q.cmp(p)));
            let db = op.monomial_text(&b, dl);
            let render_poly = |items: &[(MultiIndex, BigRational)], lead_sign: bool| -> String {
                let mut s = String::new();
                for (k, (a, c)) in items.iter().enumerate() {
                    let xa = op.monomial_text(a, xl);
                    let abs = c.abs();
                    let body = match (xa.is_empty(), abs.is_one()) {
                        (true, _) => fraction_string(&abs),
                        (false, true) => xa,
                        (false, false) => format!("{} {xa}", fraction_string(&abs)),
                    };
                    if k == 0 {
                        if c.is_negative() && lead_sign {
                            s.push('-');
                        }
                    } else {
                        s.push_str(if c.is_negative() { " - " } else { " + " });
                    }
                    s.push_str(&body);
                }
                s
            };
            if coeffs.len() == 1 {
                let (a, c) = &coeffs[0];
                if !first {
                    write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
                } else if c.is_negative() {
                    write!(f, "-")?;
                }
                let xa = op.monomial_text(a, xl);
                let abs = c.abs();
                let mut parts = Vec::new();
                if !abs.is_one() || (xa.is_empty() && db.is_empty()) {
                    parts.push(fraction_string(&abs));
                }
                if !xa.is_empty() {
                    parts.push(xa);
                }
                if !db.is_empty() {
                    parts.push(db.clone());
                }
                write!(f, "{}", parts.join(" "))?;
            } else {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "({})", render_poly(&coeffs, true))?;
                if !db.is_empty() {
                    write!(f, " {db}")?;
                }
            }
            first = false;
        }
        Ok(())
    }
}
