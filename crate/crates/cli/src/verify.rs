use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use mellin_core::combinatorics::{dims, index_box, relation_basis};
use mellin_core::roots::{
    invariant_subspace_witness, jet_residual, mellin_residual, roots_at_point,
    scaled_root_identity_check, EquationInstance, RootSystem, JET_TOLERANCE,
};
use mellin_core::series::ring::fraction_string;
use mellin_core::series::{
    convenient_basis, independence_rank, principal_series, rotate, RANK_PIVOT_TOLERANCE,
};
use mellin_core::weyl::{
    derivative_left_factor, discriminant_poly, leading_coefficient, mellin_operator_1d,
    mellin_system, named_factorizations, theta_right_factor,
};
use mellin_core::{ExponentProfile, MultiIndex};

use crate::render::{complex, equation, index, profile_json, small};
use crate::{Failure, Outcome, RunConfig};

/// Radius of the disc the sample point for the root finder is drawn from.
const SAMPLE_RADIUS: f64 = 0.5;

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
    data: Value,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String, data: Value) -> Self {
        Check {
            name,
            passed,
            detail,
            data,
        }
    }
}

fn basis_annihilation(cfg: &RunConfig) -> Result<Check, Failure> {
    let p = &cfg.profile;
    let ops = mellin_system(p)?;
    let basis = convenient_basis(p, cfg.order)?;
    let mut nonzero = Vec::new();
    for (i, f) in index_box(p).iter().zip(&basis) {
        for op in &ops {
            if !op.apply(f)?.is_zero() {
                nonzero.push(index(i));
                break;
            }
        }
    }
    let detail = format!(
        "{} series f_I, every M_j f_I exactly zero at reliable order",
        basis.len()
    );
    let detail = if nonzero.is_empty() {
        detail
    } else {
        format!("not annihilated: {}", nonzero.join(" "))
    };
    Ok(Check::new(
        "basis annihilation",
        nonzero.is_empty(),
        detail,
        json!({ "series": basis.len(), "failures": nonzero }),
    ))
}

fn rotation_rank(cfg: &RunConfig) -> Result<Check, Failure> {
    let p = &cfg.profile;
    let order = cfg.order.max(p.n() as u32 * (p.m() - 1));
    let y = principal_series(p, order);
    let family = index_box(p)
        .iter()
        .map(|i| rotate(&y, p.m(), i))
        .collect::<Result<Vec<_>, _>>()?;
    let rank = independence_rank(&family)?;
    let want = dims(p).dim_y as usize;
    Ok(Check::new(
        "rotation rank",
        rank == want,
        format!(
            "{} rotations of the principal series span rank {rank} (dim Y = {want})",
            family.len()
        ),
        json!({ "order": order, "rank": rank, "dim_y": want }),
    ))
}

fn scaled_roots(cfg: &RunConfig) -> Result<Check, Failure> {
    let report = scaled_root_identity_check(&cfg.profile, cfg.order)?;
    Ok(Check::new(
        "scaled roots",
        report.passed,
        format!(
            "jets of the original equation match eps^j y_pr(eps^(jM) x): max deviation {}",
            small(report.max_deviation)
        ),
        json!({ "max_deviation": report.max_deviation, "deviations": report.deviations }),
    ))
}

/// Jets of every twisted equation: substitution, annihilation, `Y` rank and,
/// for `d = 1`, relations and logarithmic solutions.
fn root_checks(cfg: &RunConfig) -> Result<Vec<Check>, Failure> {
    let p = &cfg.profile;
    let d = dims(p);
    let system = RootSystem::at_origin(p, cfg.order)?;
    let mut checks = Vec::new();

    let mut substitution = 0.0f64;
    let mut annihilation = 0.0f64;
    for (twist, jets) in &system.equations {
        let inst = EquationInstance::at_origin(p, twist.clone())?;
        for jet in jets {
            substitution = substitution.max(jet_residual(&inst, &jet.coefficients)?);
            annihilation = annihilation.max(mellin_residual(p, &jet.coefficients)?);
        }
    }
    let twists: Vec<&MultiIndex> = system.equations.iter().map(|(t, _)| t).collect();
    checks.push(Check::new(
        "root jets",
        substitution < JET_TOLERANCE && annihilation < cfg.tol_annihilation,
        format!(
            "{} equations x {} branches: substitution residual {}, Mellin residual {}",
            twists.len(),
            p.m(),
            small(substitution),
            small(annihilation)
        ),
        json!({ "twists": twists, "substitution_residual": substitution, "mellin_residual": annihilation }),
    ));

    let mut family = system.all_jets();
    let y_rank = independence_rank(&family)?;
    checks.push(Check::new(
        "algebraic rank",
        y_rank as u64 == d.dim_y,
        format!(
            "jets of all twisted equations span rank {y_rank} (dim Y = {})",
            d.dim_y
        ),
        json!({ "rank": y_rank, "dim_y": d.dim_y }),
    ));

    if p.d() > 1 {
        return Ok(checks);
    }

    let relations = relation_basis(p)?;
    let mut relation_residuals = Vec::new();
    let mut chi_residuals = Vec::new();
    for c in &relations {
        relation_residuals.push(system.relation_residual(c)?);
        let chi = system.log_solution(c)?;
        chi_residuals.push(mellin_residual(p, &chi.chi)?);
        family.push(chi.chi);
    }
    let worst_relation = relation_residuals.iter().copied().fold(0.0, f64::max);
    let worst_chi = chi_residuals.iter().copied().fold(0.0, f64::max);
    let vectors: Vec<Vec<String>> = relations
        .iter()
        .map(|c| c.iter().map(fraction_string).collect())
        .collect();
    checks.push(Check::new(
        "relations",
        relations.len() as u64 == d.dim_r && worst_relation < JET_TOLERANCE,
        format!(
            "{} relation vectors (dim R = {}), max residual {}",
            relations.len(),
            d.dim_r,
            small(worst_relation)
        ),
        json!({ "vectors": vectors, "residuals": relation_residuals }),
    ));
    checks.push(Check::new(
        "log solutions",
        worst_chi < cfg.tol_annihilation,
        format!(
            "{} chi solutions, max Mellin residual {}",
            chi_residuals.len(),
            small(worst_chi)
        ),
        json!({ "residuals": chi_residuals }),
    ));
    let total = independence_rank(&family)?;
    checks.push(Check::new(
        "direct sum",
        total as u64 == d.rank,
        format!("Y plus chi solutions span rank {total} (rank {})", d.rank),
        json!({ "rank": total, "expected": d.rank }),
    ));
    Ok(checks)
}

fn sample_point(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = SAMPLE_RADIUS * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
        })
        .collect()
}

/// Roots at a seeded point off the origin against Vieta's formulas.
fn sample_roots(cfg: &RunConfig) -> Result<Check, Failure> {
    let p = &cfg.profile;
    let point = sample_point(p.n(), cfg.seed);
    let inst = EquationInstance::new(p, MultiIndex::zero(p.n()), point.clone())?;
    let coeffs = inst.coefficients();
    let m = p.m() as usize;
    let data_point: Vec<String> = point.iter().map(complex).collect();
    let roots = match roots_at_point(&inst, cfg.seed) {
        Ok(r) => r,
        Err(e) => {
            return Ok(Check::new(
                "sample roots",
                false,
                e.to_string(),
                json!({ "point": data_point }),
            ));
        }
    };
    let sum: Complex64 = roots.iter().sum();
    let product: Complex64 = roots.iter().product();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let deviation = (sum + coeffs[m - 1])
        .norm()
        .max((product - coeffs[0] * sign).norm());
    Ok(Check::new(
        "sample roots",
        deviation < JET_TOLERANCE,
        format!(
            "{m} roots at a seeded point, Vieta deviation {}",
            small(deviation)
        ),
        json!({ "point": data_point, "roots": roots.iter().map(complex).collect::<Vec<_>>(), "vieta_deviation": deviation }),
    ))
}

fn univariate_checks(cfg: &RunConfig) -> Result<Vec<Check>, Failure> {
    let p: &ExponentProfile = &cfg.profile;
    let (m, m1) = (p.m(), p.exponents()[0]);
    let mut checks = Vec::new();

    let lc = leading_coefficient(&mellin_operator_1d(m, m1)?)?;
    let disc = discriminant_poly(m, m1)?;
    let coincide = lc.rational_multiple_of(&disc).is_some();
    // only coprime pairs are claimed to coincide
    checks.push(Check::new(
        "discriminant",
        coincide || p.d() > 1,
        format!(
            "leading coefficient {lc} {} discriminant {disc}",
            if coincide { "is proportional to" } else { "differs from" }
        ),
        json!({ "leading_coefficient": lc.to_string(), "discriminant": disc.to_string(), "proportional": coincide }),
    ));

    if m1 == m - 1 {
        let f = theta_right_factor(m)?;
        checks.push(Check::new(
            "theta-1 right factor",
            f.displayed_identity_holds,
            format!(
                "x^{m} M = L (theta - 1) {}; least power of x admitting the factor: {}",
                if f.displayed_identity_holds { "holds" } else { "fails" },
                f.exponent
            ),
            json!({ "identity_holds": f.displayed_identity_holds, "exponent": f.exponent, "left": f.left.to_string() }),
        ));
    }
    if m1 == 1 {
        let outcome = derivative_left_factor(m);
        let (passed, detail, data) = match &outcome {
            Ok((left, right)) => (
                true,
                format!("M = {left} ({right})"),
                json!({ "left": left.to_string(), "right": right.to_string() }),
            ),
            Err(e) => (false, e.to_string(), Value::Null),
        };
        checks.push(Check::new("derivative left factor", passed, detail, data));
    }
    for f in named_factorizations()
        .into_iter()
        .filter(|f| f.m == m && f.m1 == m1)
    {
        let report = f.check()?;
        checks.push(Check::new(
            "named factorization",
            report.identity_holds,
            format!("{}: {}", f.name, if report.identity_holds { "left * right reproduces the operator" } else { "identity fails" }),
            json!({ "name": f.name, "left": f.left.to_string(), "right": f.right.to_string(), "scale_to_mellin": report.scale_to_mellin }),
        ));
    }
    if p.d() > 1 {
        let r = invariant_subspace_witness(m, m1, cfg.order)?;
        let ranks: Vec<usize> = r.blocks.iter().map(|b| b.rank).collect();
        let block = (m / p.d()) as usize;
        let residual = r.blocks.iter().map(|b| b.max_residual).fold(0.0, f64::max);
        // same structure as the library's verdict, but against the configured tolerance
        let passed = r.joint_rank == m as usize
            && r.original_roots_rank == block
            && ranks.iter().all(|&k| k == block)
            && residual < cfg.tol_annihilation;
        checks.push(Check::new(
            "invariant subspaces",
            passed,
            format!(
                "{} blocks of ranks {}, joint rank {}, roots of the original equation span {}, Mellin residual {}",
                r.blocks.len(),
                ranks.iter().map(usize::to_string).collect::<Vec<_>>().join("+"),
                r.joint_rank,
                r.original_roots_rank,
                small(residual)
            ),
            serde_json::to_value(&r).expect("report serializes"),
        ));
    }
    Ok(checks)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let p = &cfg.profile;
    let mut checks = vec![
        basis_annihilation(cfg)?,
        rotation_rank(cfg)?,
        scaled_roots(cfg)?,
    ];
    checks.extend(root_checks(cfg)?);
    checks.push(sample_roots(cfg)?);
    if p.n() == 1 {
        checks.extend(univariate_checks(cfg)?);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let passed = failed == 0;

    let text = if cfg.json {
        let doc = json!({
            "command": "verify",
            "profile": profile_json(p),
            "twist": MultiIndex::zero(p.n()),
            "order": cfg.order,
            "seed": cfg.seed,
            "tolerances": {
                "substitution": JET_TOLERANCE,
                "annihilation": cfg.tol_annihilation,
                "rank_pivot": RANK_PIVOT_TOLERANCE,
            },
            "checks": checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
                "data": c.data,
            })).collect::<Vec<_>>(),
            "passed": passed,
        });
        format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("json values serialize")
        )
    } else {
        let mut s = format!(
            "verify {p}: {}, order {}, seed {}\n",
            equation(p),
            cfg.order,
            cfg.seed
        );
        s.push_str(&format!(
            "tolerances: substitution {JET_TOLERANCE:e}, annihilation {:e}, rank pivot {RANK_PIVOT_TOLERANCE:e}\n",
            cfg.tol_annihilation
        ));
        let d = dims(p);
        s.push_str(&format!(
            "dims: rank {}, dim Y {}, dim R {}, dim S {}\n",
            d.rank, d.dim_y, d.dim_r, d.dim_s
        ));
        for c in &checks {
            s.push_str(&format!(
                "[{}] {}: {}\n",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        s.push_str(&format!(
            "{} checks, {} failed: {}\n",
            checks.len(),
            failed,
            if passed { "PASS" } else { "FAIL" }
        ));
        s
    };
    Ok(Outcome { text, passed })
}
