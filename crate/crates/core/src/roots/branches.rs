//! Root branches of the twisted equations `y^m + sum_j eps^{i_j} x_j y^{m_j} - 1 = 0`:
//! numerical roots at a point and Taylor jets at the origin.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::combinatorics::{ExponentProfile, MultiIndex};
use crate::error::{Error, Result};
use crate::series::{ComplexFloat, TruncatedSeries};

pub const ROOT_MAX_ITERATIONS: usize = 200;
pub const ROOT_STEP_TOLERANCE: f64 = 1e-14;
pub const ROOT_RESIDUAL_TOLERANCE: f64 = 1e-12;
pub const ROOT_SEPARATION: f64 = 1e-8;
/// Substitution residual allowed for a lifted jet.
pub const JET_TOLERANCE: f64 = 1e-10;

/// `exp(2 pi i k / m)`.
pub fn unit_root(m: u32, k: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % u64::from(m)) as f64 / f64::from(m))
}

/// One twisted equation together with a point of evaluation.
#[derive(Debug, Clone)]
pub struct EquationInstance {
    pub profile: ExponentProfile,
    pub twist: MultiIndex,
    pub base_point: Vec<Complex64>,
}

impl EquationInstance {
    pub fn new(
        profile: &ExponentProfile,
        twist: MultiIndex,
        base_point: Vec<Complex64>,
    ) -> Result<Self> {
        let n = profile.n();
        if twist.len() != n {
            return Err(Error::VariableMismatch(n, twist.len()));
        }
        if base_point.len() != n {
            return Err(Error::VariableMismatch(n, base_point.len()));
        }
        Ok(EquationInstance {
            profile: profile.clone(),
            twist: twist.rem(profile.m()),
            base_point,
        })
    }

    pub fn at_origin(profile: &ExponentProfile, twist: MultiIndex) -> Result<Self> {
        Self::new(profile, twist, vec![Complex64::new(0.0, 0.0); profile.n()])
    }

    /// `eps^{i_j}`.
    pub fn twist_coefficient(&self, j: usize) -> Complex64 {
        unit_root(self.profile.m(), u64::from(self.twist.0[j]))
    }

    /// Dense coefficients of the polynomial in `y` at the base point, constant first.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let m = self.profile.m() as usize;
        let mut c = vec![Complex64::new(0.0, 0.0); m + 1];
        c[m] = Complex64::new(1.0, 0.0);
        c[0] = Complex64::new(-1.0, 0.0);
        for (j, &e) in self.profile.exponents().iter().enumerate() {
            c[e as usize] += self.twist_coefficient(j) * self.base_point[j];
        }
        c
    }

    fn is_origin(&self) -> bool {
        self.base_point
            .iter()
            .all(|z| *z == Complex64::new(0.0, 0.0))
    }
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn principal_angle(z: Complex64) -> f64 {
    let a = z.arg();
    if a < -1e-12 {
        a + 2.0 * PI
    } else {
        a.max(0.0)
    }
}

/// All `m` roots at the base point by simultaneous (Aberth) iteration, sorted
/// by argument in `[0, 2 pi)`.
pub fn roots_at_point(instance: &EquationInstance, seed: u64) -> Result<Vec<Complex64>> {
    let c = instance.coefficients();
    let m = c.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let jitter: f64 = rng.gen_range(-0.1..0.1);
            Complex64::from_polar(1.1, 2.0 * PI * (k as f64 + jitter) / m as f64 + 0.25)
        })
        .collect();
    let mut converged = false;
    for _ in 0..ROOT_MAX_ITERATIONS {
        let mut biggest = 0.0f64;
        for k in 0..m {
            let (p, dp) = horner(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..m)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[k] -= step;
            biggest = biggest.max(step.norm() / (1.0 + z[k].norm()));
        }
        if biggest < ROOT_STEP_TOLERANCE {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(ROOT_MAX_ITERATIONS));
    }
    for &y in &z {
        let (p, _) = horner(&c, y);
        if p.norm() >= ROOT_RESIDUAL_TOLERANCE * (1.0 + y.norm().powi(m as i32)) {
            return Err(Error::NoConvergence(ROOT_MAX_ITERATIONS));
        }
    }
    // inclusion radii m * (rounding bound of p) / |p'|; overlapping discs
    // cannot certify distinct roots
    let radii: Vec<f64> = z
        .iter()
        .map(|&y| {
            let (_, dp) = horner(&c, y);
            let bound: f64 = c
                .iter()
                .enumerate()
                .map(|(i, a)| a.norm() * y.norm().powi(i as i32))
                .sum();
            m as f64 * 4.0 * f64::EPSILON * bound / dp.norm()
        })
        .collect();
    for i in 0..m {
        for j in i + 1..m {
            let gap = (z[i] - z[j]).norm();
            if gap < ROOT_SEPARATION || gap <= radii[i] + radii[j] {
                return Err(Error::DegenerateRoots(gap));
            }
        }
    }
    z.sort_by(|a, b| principal_angle(*a).total_cmp(&principal_angle(*b)));
    Ok(z)
}

/// Taylor expansion of one root branch at the origin.
#[derive(Debug, Clone)]
pub struct PointJet {
    /// `b` with constant term `zeta^b`.
    pub branch_id: u32,
    pub order: u32,
    pub coefficients: TruncatedSeries<ComplexFloat>,
}

impl PointJet {
    pub fn to_json(&self) -> Value {
        json!({ "branch_id": self.branch_id, "order": self.order, "coefficients": self.coefficients.to_json() })
    }
}

/// `p(y)` and `p'(y)` for the twisted equation, as series.
fn substitute(
    instance: &EquationInstance,
    y: &TruncatedSeries<ComplexFloat>,
) -> Result<(TruncatedSeries<ComplexFloat>, TruncatedSeries<ComplexFloat>)> {
    let (n, order) = (y.n_vars(), y.order());
    let m = instance.profile.m();
    let ring = ComplexFloat;
    let mut value = y.pow(m).sub(&TruncatedSeries::one(ring, n, order))?;
    let mut slope = y.pow(m - 1).scale(&Complex64::new(f64::from(m), 0.0));
    for (j, &e) in instance.profile.exponents().iter().enumerate() {
        let a = TruncatedSeries::monomial(
            ring,
            order,
            MultiIndex::unit(n, j),
            instance.twist_coefficient(j),
        );
        value = value.add(&a.mul(&y.pow(e))?)?;
        let da = a.scale(&Complex64::new(f64::from(e), 0.0));
        slope = slope.add(&da.mul(&y.pow(e - 1))?)?;
    }
    Ok((value, slope))
}

/// Substitution residual `max |p(jet)|` at jet order.
pub fn jet_residual(
    instance: &EquationInstance,
    jet: &TruncatedSeries<ComplexFloat>,
) -> Result<f64> {
    Ok(substitute(instance, jet)?.0.max_norm())
}

/// Lifts the root `zeta^b` at the origin to order `order` by Newton's
/// iteration; the correct order doubles (plus one) per step.
pub fn lift_branch(instance: &EquationInstance, branch: u32, order: u32) -> Result<PointJet> {
    if !instance.is_origin() {
        return Err(Error::Invalid("jets are lifted at the origin only".into()));
    }
    let m = instance.profile.m();
    let n = instance.profile.n();
    let ring = ComplexFloat;
    let mut y = TruncatedSeries::constant(ring, n, order, unit_root(m, u64::from(branch)));
    let mut correct = 0u32;
    while correct < order {
        let (value, slope) = substitute(instance, &y)?;
        let slope_inv = slope.inverse()?;
        y = y.sub(&value.mul(&slope_inv)?)?;
        correct = 2 * correct + 1;
    }
    let residual = jet_residual(instance, &y)?;
    if residual >= JET_TOLERANCE {
        return Err(Error::NoConvergence(order as usize));
    }
    Ok(PointJet {
        branch_id: branch,
        order,
        coefficients: y,
    })
}

/// The `m` jets at the origin, branch `b` starting at `zeta^b`.
pub fn lift_jets(instance: &EquationInstance, order: u32) -> Result<Vec<PointJet>> {
    if order < 1 {
        return Err(Error::InsufficientOrder {
            have: order,
            need: 1,
        });
    }
    (0..instance.profile.m())
        .map(|b| lift_branch(instance, b, order))
        .collect()
}

/// Deviation of each jet of the original equation from `eps^j rotate(y_pr, jM)`.
#[derive(Debug, Clone, Serialize)]
pub struct ScaledRootReport {
    pub order: u32,
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub passed: bool,
}

pub fn scaled_root_identity_check(
    profile: &ExponentProfile,
    order: u32,
) -> Result<ScaledRootReport> {
    let instance = EquationInstance::at_origin(profile, MultiIndex::zero(profile.n()))?;
    let jets = lift_jets(&instance, order)?;
    let mut deviations = Vec::new();
    for jet in &jets {
        let exact = crate::series::scaled_root_series(profile, jet.branch_id, order)?;
        let ring = *exact.ring();
        let embedded = exact.map_ring(ComplexFloat, |_, c| {
            crate::series::Ring::to_complex(&ring, c)
        });
        deviations.push(embedded.sub(&jet.coefficients)?.max_norm());
    }
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    Ok(ScaledRootReport {
        order,
        deviations,
        max_deviation,
        passed: max_deviation < JET_TOLERANCE,
    })
}
