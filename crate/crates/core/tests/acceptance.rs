//! Acceptance suite: thirteen checks, one line each. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;

use mellin_core::combinatorics::{
    beukers_heckman_reducible, coset_representatives, dims, index_box, missing_index_set,
    modular_count, relation_basis,
};
use mellin_core::roots::{
    invariant_subspace_witness, mellin_residual, random_polynomial_series, relation_check,
    scaled_root_identity_check, RootSystem, ANNIHILATION_TOLERANCE,
};
use mellin_core::series::{
    convenient_basis, independence_rank, principal_coefficient, principal_series, rotate,
};
use mellin_core::weyl::univariate::operator_from_integers;
use mellin_core::weyl::{
    derivative_left_factor, discriminant_poly, horn_mellin_comparison, leading_coefficient,
    mellin_operator_1d, mellin_system, named_factorizations, theta_right_factor,
};
use mellin_core::{make_profile, ExponentProfile, MultiIndex, Result};

fn suite() -> Vec<ExponentProfile> {
    [
        (2, vec![1]),
        (3, vec![1]),
        (3, vec![2]),
        (4, vec![2]),
        (6, vec![2]),
        (6, vec![3]),
        (3, vec![2, 1]),
        (6, vec![4, 2]),
    ]
    .into_iter()
    .map(|(m, e)| make_profile(m, &e).unwrap())
    .collect()
}

/// Every profile `(m; m_1 > ... > m_n > 0)` with `n <= max_n`.
fn profiles_up_to(m: u32, max_n: usize) -> Vec<ExponentProfile> {
    fn extend(m: u32, max_n: usize, prefix: &mut Vec<u32>, out: &mut Vec<ExponentProfile>) {
        if !prefix.is_empty() {
            out.push(make_profile(m, prefix).unwrap());
        }
        if prefix.len() == max_n {
            return;
        }
        let top = prefix.last().copied().unwrap_or(m);
        for e in (1..top).rev() {
            prefix.push(e);
            extend(m, max_n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(m, max_n, &mut Vec::new(), &mut out);
    out
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

type Outcome = Result<(bool, String)>;

/// Complex series drop terms under the pruning floor, so a zero reads as "below it".
fn small(x: f64) -> String {
    if x == 0.0 {
        format!("<{:.0e}", mellin_core::series::ring::COMPLEX_PRUNE_RELATIVE)
    } else {
        format!("{x:.1e}")
    }
}

fn rank_realization() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for p in suite() {
        let ops = mellin_system(&p)?;
        let basis = convenient_basis(&p, 12)?;
        let mut initial: Vec<MultiIndex> = Vec::new();
        for (s, i) in basis.iter().zip(index_box(&p)) {
            for op in &ops {
                ok &= op.apply(s)?.is_zero();
            }
            let lowest = s
                .terms()
                .map(|(k, _)| k.clone())
                .min_by_key(|k| (k.degree(), k.clone()));
            ok &= lowest.as_ref() == Some(&i);
            initial.extend(lowest);
        }
        initial.sort();
        initial.dedup();
        ok &= initial.len() as u64 == p.rank();
        notes.push(format!("{p}: {}", initial.len()));
    }
    Ok((ok, notes.join(", ")))
}

fn dimension_table() -> Outcome {
    let p = make_profile(3, &[2, 1])?;
    let r = dims(&p);
    let mut ok = (r.rank, r.dim_y, r.dim_r, r.dim_s) == (9, 7, 2, 2);
    ok &= missing_index_set(&p) == vec![MultiIndex(vec![0, 2]), MultiIndex(vec![2, 1])];
    let r31 = dims(&make_profile(3, &[1])?);
    ok &= (r31.rank, r31.dim_y, r31.dim_r, r31.dim_s) == (3, 2, 1, 1);
    let mut checked = 0;
    for m in 2..=6 {
        for prof in profiles_up_to(m, 3) {
            if prof.d() != 1 {
                continue;
            }
            let brute = index_box(&prof)
                .iter()
                .filter(|nu| !principal_coefficient(&prof, nu).is_zero())
                .count() as u64;
            ok &= brute == dims(&prof).dim_y;
            checked += 1;
        }
    }
    Ok((
        ok,
        format!(
            "(3,[2,1]) -> {:?}; card B' matches for {checked} coprime profiles",
            (r.rank, r.dim_y, r.dim_r, r.dim_s)
        ),
    ))
}

fn modular_counting() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    for m in 2..=7 {
        for p in profiles_up_to(m, 3) {
            if p.d() != 1 {
                continue;
            }
            let want = u64::from(m).pow(p.n() as u32 - 1);
            ok &= (0..m).all(|r| modular_count(&p, r) == want);
            checked += 1;
        }
    }
    Ok((ok, format!("{checked} coprime profiles, every residue")))
}

fn named_operators() -> Outcome {
    let mut shown = vec![(
        "(x^2+4)y''+xy'-y",
        2,
        1,
        operator_from_integers(&[&[4, 0, 1], &[0, 1], &[-1]]),
    )];
    for f in named_factorizations() {
        shown.push((f.name, f.m, f.m1, f.target.clone()));
    }
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, m, m1, op) in shown {
        let scale = op.rational_multiple_of(&mellin_operator_1d(m, m1)?);
        ok &= scale.is_some();
        notes.push(format!(
            "{name}: {}",
            scale.map_or("none".into(), |s| s.to_string())
        ));
    }
    Ok((ok, notes.join(", ")))
}

fn discriminant_coincidence() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    for m in 2..=7u32 {
        for m1 in 1..m {
            if num_integer::gcd(m, m1) != 1 {
                continue;
            }
            let lc = leading_coefficient(&mellin_operator_1d(m, m1)?)?;
            let disc = discriminant_poly(m, m1)?;
            ok &= lc.rational_multiple_of(&disc).is_some_and(|c| !c.is_zero());
            checked += 1;
        }
    }
    let lc62 = leading_coefficient(&mellin_operator_1d(6, 2)?)?;
    let note = if lc62
        .rational_multiple_of(&discriminant_poly(6, 2)?)
        .is_some()
    {
        "coincides"
    } else {
        "differs, as expected"
    };
    Ok((
        ok,
        format!(
            "{checked} coprime pairs; d = 2 control M(6,2) {note}: {lc62} vs {}",
            discriminant_poly(6, 2)?
        ),
    ))
}

fn factorizations() -> Outcome {
    let mut ok = true;
    for f in named_factorizations() {
        ok &= f.check()?.identity_holds;
    }
    for m in 2..=6 {
        ok &= derivative_left_factor(m).is_ok();
    }
    let mut exps = Vec::new();
    for m in 2..=5 {
        let p = theta_right_factor(m)?;
        ok &= p.exponent == m - 1;
        exps.push(format!(
            "m={m}: e={} (displayed x^{m} identity {})",
            p.exponent,
            if p.displayed_identity_holds {
                "holds"
            } else {
                "fails"
            }
        ));
    }
    Ok((
        ok,
        format!("4 displays, M(m,1) for m=2..6; {}", exps.join("; ")),
    ))
}

fn horn_identity() -> Outcome {
    let mut ok = true;
    let mut bad = Vec::new();
    for p in suite() {
        for c in horn_mellin_comparison(&p)? {
            ok &= c.exact;
            if !c.exact {
                bad.push(format!(
                    "{p} j={} ratio {}",
                    c.j + 1,
                    c.ratio.unwrap_or_else(|| "none".into())
                ));
            }
        }
    }
    let note = if bad.is_empty() {
        "all j, all profiles".to_string()
    } else {
        format!("sign mismatch: {}", bad.join("; "))
    };
    Ok((ok, note))
}

fn rotation_basis() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (m, e, want) in [
        (6u32, vec![4u32, 2], 36usize),
        (4, vec![2], 4),
        (3, vec![2, 1], 7),
    ] {
        let p = make_profile(m, &e)?;
        let order = p.n() as u32 * (m - 1);
        let y = principal_series(&p, order);
        let fam = index_box(&p)
            .iter()
            .map(|i| rotate(&y, m, i))
            .collect::<Result<Vec<_>>>()?;
        let rank = independence_rank(&fam)?;
        ok &= rank == want;
        notes.push(format!("{p}: {rank}"));
    }
    Ok((ok, notes.join(", ")))
}

fn scaled_roots() -> Outcome {
    let mut worst = 0.0f64;
    let mut ok = true;
    for p in suite() {
        let r = scaled_root_identity_check(&p, 8)?;
        ok &= r.passed;
        worst = worst.max(r.max_deviation);
    }
    Ok((ok, format!("max deviation {}", small(worst))))
}

fn log_solutions() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let cases: [(u32, Vec<u32>, Vec<Vec<BigRational>>); 2] = [
        (3, vec![1], vec![vec![q(1)]]),
        (
            3,
            vec![2, 1],
            vec![vec![q(1), q(-1), q(0)], vec![q(1), q(0), q(-1)]],
        ),
    ];
    for (m, e, cs) in cases {
        let p = make_profile(m, &e)?;
        let sys = RootSystem::at_origin(&p, 12)?;
        let mut family = sys.all_jets();
        let y_rank = independence_rank(&family)?;
        let mut worst = 0.0f64;
        for c in &cs {
            let chi = sys.log_solution(c)?;
            worst = worst.max(mellin_residual(&p, &chi.chi)?);
            family.push(chi.chi);
        }
        let total = independence_rank(&family)?;
        ok &= worst < ANNIHILATION_TOLERANCE && total as u64 == p.rank();
        notes.push(format!(
            "{p}: residual {}, rank Y {y_rank} -> {total}",
            small(worst)
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn invariant_subspaces() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (m, m1) in [(4u32, 2u32), (6, 2)] {
        let r = invariant_subspace_witness(m, m1, 12)?;
        ok &= r.passed;
        let ranks: Vec<_> = r.blocks.iter().map(|b| b.rank.to_string()).collect();
        let res = r.blocks.iter().map(|b| b.max_residual).fold(0.0, f64::max);
        notes.push(format!(
            "({m},[{m1}]) blocks {} joint {} residual {}",
            ranks.join("+"),
            r.joint_rank,
            small(res)
        ));
    }
    for k in [2u32, 3] {
        let r = invariant_subspace_witness(2 * k, k, 12)?;
        ok &= r.original_roots_rank == 2;
        notes.push(format!(
            "({},[{k}]) roots span {}",
            2 * k,
            r.original_roots_rank
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn beukers_heckman() -> Outcome {
    let reducible: Vec<u32> = (2..=50).filter(|&m| beukers_heckman_reducible(m)).collect();
    Ok((reducible.is_empty(), format!("reducible for {reducible:?}")))
}

fn negative_controls() -> Outcome {
    let p = make_profile(3, &[2, 1])?;
    let noise = mellin_residual(&p, &random_polynomial_series(2, 12, 0))?;
    let e1: Vec<BigRational> = (0..coset_representatives(&p).len())
        .map(|k| q(i64::from(k == 0)))
        .collect();
    let rel = relation_check(&p, &e1, 12)?;
    let basis_ok = relation_basis(&p)?
        .iter()
        .all(|c| relation_check(&p, c, 12).is_ok_and(|r| r < 1e-10));
    let ok = noise >= 0.1 && rel > 1e-3 && basis_ok;
    Ok((
        ok,
        format!("random series residual {noise:.2e}, relation residual of e1 {rel:.2e}"),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("rank realization", rank_realization),
        ("dimension table", dimension_table),
        ("modular counting", modular_counting),
        ("named operators", named_operators),
        ("discriminant coincidence", discriminant_coincidence),
        ("factorizations", factorizations),
        ("Horn to Mellin identity", horn_identity),
        ("rotation basis", rotation_basis),
        ("scaled-root identity", scaled_roots),
        ("logarithmic solutions", log_solutions),
        ("invariant subspaces", invariant_subspaces),
        ("Beukers-Heckman condition", beukers_heckman),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        println!(
            "[{}] {:>2}. {name} ({secs:.1}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            k + 1
        );
        failed += usize::from(!ok);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
