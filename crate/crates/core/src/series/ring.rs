//! Coefficient rings for truncated series.
//!
//! A ring value carries whatever context its elements need (the modulus of
//! the cyclotomic group ring, for instance), so elements themselves stay
//! plain data.

use std::f64::consts::PI;
use std::fmt::Debug;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::linalg;
use crate::poly::{cyclotomic_polynomial, UniPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingTag {
    ExactRational,
    CyclotomicGroupRing,
    CyclotomicField,
    ComplexFloat,
}

pub trait Ring: Clone + Debug + PartialEq {
    type Elem: Clone + Debug + PartialEq;

    fn tag(&self) -> RingTag;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_rational(&self, q: &BigRational) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse, `None` for non-units.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Image under the embedding into `C` (`epsilon -> exp(2 pi i / m)`).
    fn to_complex(&self, a: &Self::Elem) -> Complex64;
    /// Whether zero tests are exact.
    fn is_exact(&self) -> bool;
    /// Principal logarithm, when the ring can represent it.
    fn ln(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn to_json(&self, a: &Self::Elem) -> Value;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn norm(&self, a: &Self::Elem) -> f64 {
        self.to_complex(a).norm()
    }

    fn scale(&self, a: &Self::Elem, q: &BigRational) -> Self::Elem {
        self.mul(a, &self.from_rational(q))
    }
}

/// Exact arbitrary-precision fractions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> RingTag {
        RingTag::ExactRational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_rational(&self, q: &BigRational) -> BigRational {
        q.clone()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn to_complex(&self, a: &BigRational) -> Complex64 {
        Complex64::new(a.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn ln(&self, a: &BigRational) -> Option<BigRational> {
        a.is_one().then(BigRational::zero)
    }
    fn to_json(&self, a: &BigRational) -> Value {
        Value::String(fraction_string(a))
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn fraction_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The group ring `Q[Z/m]`: `sum_k q_k eps^k` with `eps^m = 1` and no further
/// reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cyclotomic {
    m: u32,
}

/// Coordinates `(q_0, ..., q_{m-1})` of `sum_k q_k eps^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycElem(pub Vec<BigRational>);

impl Cyclotomic {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1, "group ring needs m >= 1");
        Cyclotomic { m }
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    /// `eps^k`.
    pub fn root_power(&self, k: u64) -> CycElem {
        let mut v = vec![BigRational::zero(); self.m as usize];
        v[(k % u64::from(self.m)) as usize] = BigRational::one();
        CycElem(v)
    }

    /// `a * eps^k`, a cyclic shift of coordinates.
    pub fn shift(&self, a: &CycElem, k: u64) -> CycElem {
        let m = self.m as usize;
        let k = (k % m as u64) as usize;
        let mut v = vec![BigRational::zero(); m];
        for (i, q) in a.0.iter().enumerate() {
            v[(i + k) % m] = q.clone();
        }
        CycElem(v)
    }
}

impl Ring for Cyclotomic {
    type Elem = CycElem;

    fn tag(&self) -> RingTag {
        RingTag::CyclotomicGroupRing
    }
    fn zero(&self) -> CycElem {
        CycElem(vec![BigRational::zero(); self.m as usize])
    }
    fn one(&self) -> CycElem {
        self.root_power(0)
    }
    fn add(&self, a: &CycElem, b: &CycElem) -> CycElem {
        CycElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    fn neg(&self, a: &CycElem) -> CycElem {
        CycElem(a.0.iter().map(|x| -x).collect())
    }
    fn mul(&self, a: &CycElem, b: &CycElem) -> CycElem {
        let m = self.m as usize;
        let mut v = vec![BigRational::zero(); m];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    v[(i + j) % m] += x * y;
                }
            }
        }
        CycElem(v)
    }
    fn from_rational(&self, q: &BigRational) -> CycElem {
        let mut v = self.zero();
        v.0[0] = q.clone();
        v
    }
    fn scale(&self, a: &CycElem, q: &BigRational) -> CycElem {
        CycElem(a.0.iter().map(|x| x * q).collect())
    }
    fn is_zero(&self, a: &CycElem) -> bool {
        a.0.iter().all(Zero::is_zero)
    }
    /// Solves the circulant system `a * b = 1` exactly.
    fn inv(&self, a: &CycElem) -> Option<CycElem> {
        let m = self.m as usize;
        // column j of the multiplication-by-a matrix is a shifted by j
        let matrix: Vec<Vec<BigRational>> = (0..m)
            .map(|i| (0..m).map(|j| a.0[(i + m - j) % m].clone()).collect())
            .collect();
        let mut rhs = vec![BigRational::zero(); m];
        rhs[0] = BigRational::one();
        linalg::solve_rational(&matrix, &rhs).map(CycElem)
    }
    fn to_complex(&self, a: &CycElem) -> Complex64 {
        let m = f64::from(self.m);
        a.0.iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(k, q)| {
                Complex64::from_polar(q.to_f64().unwrap_or(f64::NAN), 2.0 * PI * k as f64 / m)
            })
            .sum()
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn ln(&self, a: &CycElem) -> Option<CycElem> {
        (*a == self.one()).then(|| self.zero())
    }
    fn to_json(&self, a: &CycElem) -> Value {
        Value::Array(
            a.0.iter()
                .map(|q| Value::String(fraction_string(q)))
                .collect(),
        )
    }
}

/// The number field `Q(eps) = Q[t] / Phi_m(t)`, used for exact ranks of
/// cyclotomic data (the group ring has zero divisors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicField {
    m: u32,
    modulus: UniPoly,
}

impl CyclotomicField {
    pub fn new(m: u32) -> Self {
        CyclotomicField {
            m,
            modulus: cyclotomic_polynomial(m),
        }
    }

    pub fn reduce(&self, p: &UniPoly) -> UniPoly {
        p.div_rem(&self.modulus).1
    }

    /// Image of a group-ring element.
    pub fn from_group_ring(&self, a: &CycElem) -> UniPoly {
        self.reduce(&UniPoly::new(a.0.clone()))
    }
}

impl Ring for CyclotomicField {
    type Elem = UniPoly;

    fn tag(&self) -> RingTag {
        RingTag::CyclotomicField
    }
    fn zero(&self) -> UniPoly {
        UniPoly::zero()
    }
    fn one(&self) -> UniPoly {
        UniPoly::one()
    }
    fn add(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.add(b)
    }
    fn neg(&self, a: &UniPoly) -> UniPoly {
        a.scale(&-BigRational::one())
    }
    fn sub(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.sub(b)
    }
    fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        self.reduce(&a.mul(b))
    }
    fn from_rational(&self, q: &BigRational) -> UniPoly {
        UniPoly::constant(q.clone())
    }
    fn scale(&self, a: &UniPoly, q: &BigRational) -> UniPoly {
        a.scale(q)
    }
    fn is_zero(&self, a: &UniPoly) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &UniPoly) -> Option<UniPoly> {
        if a.is_zero() {
            return None;
        }
        let (g, s) = a.gcd_ext(&self.modulus);
        (g == UniPoly::one()).then(|| self.reduce(&s))
    }
    fn to_complex(&self, a: &UniPoly) -> Complex64 {
        let m = f64::from(self.m);
        a.coeffs()
            .iter()
            .enumerate()
            .map(|(k, q)| {
                Complex64::from_polar(q.to_f64().unwrap_or(f64::NAN), 2.0 * PI * k as f64 / m)
            })
            .sum()
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn ln(&self, a: &UniPoly) -> Option<UniPoly> {
        (*a == UniPoly::one()).then(UniPoly::zero)
    }
    fn to_json(&self, a: &UniPoly) -> Value {
        Value::Array(
            a.coeffs()
                .iter()
                .map(|q| Value::String(fraction_string(q)))
                .collect(),
        )
    }
}

/// Double-precision complex numbers. Zero tests are exact; series built over
/// this ring prune relatively small terms instead (see
/// [`COMPLEX_PRUNE_RELATIVE`]).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexFloat;

/// Terms with magnitude below this fraction of `max(1, largest magnitude)` are dropped.
pub const COMPLEX_PRUNE_RELATIVE: f64 = 1e-12;

impl Ring for ComplexFloat {
    type Elem = Complex64;

    fn tag(&self) -> RingTag {
        RingTag::ComplexFloat
    }
    fn zero(&self) -> Complex64 {
        Complex64::zero()
    }
    fn one(&self) -> Complex64 {
        Complex64::one()
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn from_rational(&self, q: &BigRational) -> Complex64 {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Complex64) -> Option<Complex64> {
        (!a.is_zero()).then(|| a.inv())
    }
    fn to_complex(&self, a: &Complex64) -> Complex64 {
        *a
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn ln(&self, a: &Complex64) -> Option<Complex64> {
        (!a.is_zero()).then(|| a.ln())
    }
    fn to_json(&self, a: &Complex64) -> Value {
        json!([a.re, a.im])
    }
}

/// Rings whose elements embed into the group ring `Q[Z/m]`.
pub trait IntoCyclotomic: Ring {
    fn to_cyclotomic(&self, a: &Self::Elem, target: &Cyclotomic) -> CycElem;
}

impl IntoCyclotomic for Rationals {
    fn to_cyclotomic(&self, a: &BigRational, target: &Cyclotomic) -> CycElem {
        target.from_rational(a)
    }
}

impl IntoCyclotomic for Cyclotomic {
    fn to_cyclotomic(&self, a: &CycElem, target: &Cyclotomic) -> CycElem {
        assert_eq!(self.m, target.m, "group rings of different order");
        a.clone()
    }
}
