//! Algebraic and logarithmic solutions assembled from the root jets.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::branches::{lift_jets, EquationInstance, PointJet, JET_TOLERANCE};
use crate::combinatorics::{coset_representatives, make_profile, ExponentProfile, MultiIndex};
use crate::error::{Error, Result};
use crate::series::{independence_rank, simplex, ComplexFloat, Ring, TruncatedSeries};
use crate::weyl::mellin_system;

/// Relative annihilation tolerance for floating-point solutions.
pub const ANNIHILATION_TOLERANCE: f64 = 1e-8;

/// Jets of every equation `(I^(k))`, `I^(k)` running over the coset
/// representatives, in that order.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub profile: ExponentProfile,
    pub order: u32,
    pub equations: Vec<(MultiIndex, Vec<PointJet>)>,
}

impl RootSystem {
    pub fn at_origin(profile: &ExponentProfile, order: u32) -> Result<Self> {
        let equations = coset_representatives(profile)
            .into_iter()
            .map(|twist| {
                let inst = EquationInstance::at_origin(profile, twist.clone())?;
                Ok((twist, lift_jets(&inst, order)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RootSystem {
            profile: profile.clone(),
            order,
            equations,
        })
    }

    /// Every jet of every equation: a spanning family of `Y`.
    pub fn all_jets(&self) -> Vec<TruncatedSeries<ComplexFloat>> {
        self.equations
            .iter()
            .flat_map(|(_, jets)| jets.iter().map(|j| j.coefficients.clone()))
            .collect()
    }

    /// `sum_k c_k (y^(k)_1 + ... + y^(k)_m)`.
    pub fn relation_series(&self, c: &[BigRational]) -> Result<TruncatedSeries<ComplexFloat>> {
        if c.len() != self.equations.len() {
            return Err(Error::LengthMismatch {
                expected: self.equations.len(),
                got: c.len(),
            });
        }
        let mut total = TruncatedSeries::zero(ComplexFloat, self.profile.n(), self.order);
        for (ck, (_, jets)) in c.iter().zip(&self.equations) {
            for jet in jets {
                total = total.add(&jet.coefficients.scale_rational(ck))?;
            }
        }
        Ok(total)
    }

    pub fn relation_residual(&self, c: &[BigRational]) -> Result<f64> {
        Ok(self.relation_series(c)?.max_norm())
    }

    /// `chi_c = sum_k c_k sum_b y_b (log(y_b / zeta^b) + 2 pi i b / m)`.
    pub fn log_solution(&self, c: &[BigRational]) -> Result<LogSolution> {
        if self.profile.d() > 1 {
            return Err(Error::RequiresCoprime(self.profile.d()));
        }
        let residual = self.relation_residual(c)?;
        if residual >= JET_TOLERANCE {
            return Err(Error::NotARelation(residual));
        }
        let m = self.profile.m();
        let (n, order) = (self.profile.n(), self.order);
        let mut chi = TruncatedSeries::zero(ComplexFloat, n, order);
        let mut offsets = Vec::new();
        for (k, (ck, (twist, jets))) in c.iter().zip(&self.equations).enumerate() {
            if ck.is_zero() {
                continue;
            }
            for jet in jets {
                let (_, log_unit) = jet.coefficients.log_split()?;
                let turn = 2.0 * PI * f64::from(jet.branch_id) / f64::from(m);
                let log = log_unit.add(&TruncatedSeries::constant(
                    ComplexFloat,
                    n,
                    order,
                    Complex64::new(0.0, turn),
                ))?;
                chi = chi.add(&jet.coefficients.mul(&log)?.scale_rational(ck))?;
                offsets.push(LogOffset {
                    coset: k,
                    twist: twist.clone(),
                    branch: jet.branch_id,
                    turn: format!("{}/{m}", jet.branch_id),
                    weight: crate::series::ring::fraction_string(ck),
                });
            }
        }
        Ok(LogSolution {
            c: c.to_vec(),
            chi,
            constant_offsets: offsets,
        })
    }
}

/// Record of the constant `log zeta^b = 2 pi i b / m` used for one branch.
#[derive(Debug, Clone, Serialize)]
pub struct LogOffset {
    pub coset: usize,
    pub twist: MultiIndex,
    pub branch: u32,
    /// `b/m`; the logarithm adds `2 pi i` times this.
    pub turn: String,
    pub weight: String,
}

#[derive(Debug, Clone)]
pub struct LogSolution {
    pub c: Vec<BigRational>,
    pub chi: TruncatedSeries<ComplexFloat>,
    pub constant_offsets: Vec<LogOffset>,
}

impl LogSolution {
    pub fn to_json(&self) -> Value {
        json!({
            "c": self.c.iter().map(crate::series::ring::fraction_string).collect::<Vec<_>>(),
            "chi": self.chi.to_json(),
            "constant_offsets": self.constant_offsets,
        })
    }
}

/// `max |sum_k c_k sum_b y^(k)_b|` for jets of the given order. Requires `d = 1`.
pub fn relation_check(profile: &ExponentProfile, c: &[BigRational], order: u32) -> Result<f64> {
    if profile.d() > 1 {
        return Err(Error::RequiresCoprime(profile.d()));
    }
    let expected = coset_representatives(profile).len();
    if c.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: c.len(),
        });
    }
    RootSystem::at_origin(profile, order)?.relation_residual(c)
}

pub fn log_solution(
    profile: &ExponentProfile,
    c: &[BigRational],
    order: u32,
) -> Result<LogSolution> {
    if profile.d() > 1 {
        return Err(Error::RequiresCoprime(profile.d()));
    }
    RootSystem::at_origin(profile, order)?.log_solution(c)
}

/// Largest coefficient of `M_j(series)` over all `j`, at reliable order,
/// divided by the largest coefficient of the input.
pub fn mellin_residual<R: Ring>(
    profile: &ExponentProfile,
    series: &TruncatedSeries<R>,
) -> Result<f64> {
    let m = profile.m();
    if series.order() < m + 2 {
        return Err(Error::InsufficientOrder {
            have: series.order(),
            need: m + 2,
        });
    }
    let scale = series.max_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut worst = 0.0f64;
    for op in mellin_system(profile)? {
        worst = worst.max(op.apply(series)?.max_norm());
    }
    Ok(worst / scale)
}

/// A dense polynomial of total degree `order` with coefficients uniform in
/// `[-1, 1]`: a negative control for annihilation.
pub fn random_polynomial_series(
    n_vars: usize,
    order: u32,
    seed: u64,
) -> TruncatedSeries<ComplexFloat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<_> = simplex(n_vars, order)
        .into_iter()
        .map(|s| (s, Complex64::new(rng.gen_range(-1.0..1.0), 0.0)))
        .collect();
    TruncatedSeries::from_terms(ComplexFloat, n_vars, order, terms)
}

#[derive(Debug, Clone, Serialize)]
pub struct SubspaceBlock {
    /// The block solves `y^m + eps^k x y^{m_1} - 1 = 0`.
    pub k: u32,
    pub branches: Vec<u32>,
    pub rank: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantSubspaceReport {
    pub m: u32,
    pub m1: u32,
    pub d: u32,
    pub order: u32,
    pub blocks: Vec<SubspaceBlock>,
    pub joint_rank: usize,
    /// Rank of all `m` roots of the untwisted equation.
    pub original_roots_rank: usize,
    pub passed: bool,
}

/// The `d` blocks `{eps^j y_pr(eps^{j m_1 + k} x) : j < m/d}`, realised as
/// branches `0..m/d` of `y^m + eps^k x y^{m_1} - 1`.
pub fn invariant_subspace_witness(m: u32, m1: u32, order: u32) -> Result<InvariantSubspaceReport> {
    let profile = make_profile(m, &[m1])?;
    let d = profile.d();
    let block_size = m / d;
    let mut blocks = Vec::new();
    let mut union = Vec::new();
    let mut original_roots_rank = 0;
    for k in 0..d {
        let inst = EquationInstance::at_origin(&profile, MultiIndex(vec![k]))?;
        let jets = lift_jets(&inst, order)?;
        if k == 0 {
            let all: Vec<_> = jets.iter().map(|j| j.coefficients.clone()).collect();
            original_roots_rank = independence_rank(&all)?;
        }
        let chosen: Vec<_> = jets[..block_size as usize]
            .iter()
            .map(|j| j.coefficients.clone())
            .collect();
        let mut max_residual = 0.0f64;
        for s in &chosen {
            max_residual = max_residual.max(mellin_residual(&profile, s)?);
        }
        blocks.push(SubspaceBlock {
            k,
            branches: (0..block_size).collect(),
            rank: independence_rank(&chosen)?,
            max_residual,
        });
        union.extend(chosen);
    }
    let joint_rank = independence_rank(&union)?;
    let passed = joint_rank == m as usize
        && original_roots_rank == block_size as usize
        && blocks
            .iter()
            .all(|b| b.rank == block_size as usize && b.max_residual < ANNIHILATION_TOLERANCE);
    Ok(InvariantSubspaceReport {
        m,
        m1,
        d,
        order,
        blocks,
        joint_rank,
        original_roots_rank,
        passed,
    })
}

/// Float view of an exact relation vector, for reports.
pub fn relation_to_f64(c: &[BigRational]) -> Vec<f64> {
    c.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
}
