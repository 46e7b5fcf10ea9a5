use serde_json::{json, Value};

use mellin_core::series::ring::fraction_string;
use mellin_core::weyl::{
    discriminant_poly, gj_operators, horn_mellin_comparison, horn_system, lattice_matrices,
    leading_coefficient, mellin_system, DiffOperator,
};

use crate::render::{equation, profile_json, row};
use crate::{Failure, Outcome, RunConfig};

fn operator_json(op: &DiffOperator) -> Value {
    let (scale, primitive) = op.primitive();
    json!({
        "text": op.to_string(),
        "scaled": primitive.to_string(),
        "scale": fraction_string(&scale),
        "terms": op.to_json(),
    })
}

fn push_family(
    s: &mut String,
    title: &str,
    label: &str,
    ops: &[DiffOperator],
    render: impl Fn(&DiffOperator) -> String,
) {
    s.push_str(title);
    s.push('\n');
    for (j, op) in ops.iter().enumerate() {
        s.push_str(&format!("  {label}{} = {}\n", j + 1, render(op)));
    }
}

pub fn run(cfg: &RunConfig, check_horn: bool) -> Result<Outcome, Failure> {
    let p = &cfg.profile;
    let mellin = mellin_system(p)?;
    let shifted = gj_operators(p)?;
    let horn = horn_system(p)?;
    let lattice = lattice_matrices(p);
    let univariate = if p.n() == 1 {
        Some((
            leading_coefficient(&mellin[0])?,
            discriminant_poly(p.m(), p.exponents()[0])?,
        ))
    } else {
        None
    };
    let comparisons = if check_horn {
        Some(horn_mellin_comparison(p)?)
    } else {
        None
    };
    let passed = comparisons
        .as_ref()
        .map_or(true, |cs| cs.iter().all(|c| c.exact));

    let text = if cfg.json {
        let mut doc = json!({
            "command": "operators",
            "profile": profile_json(p),
            "mellin": mellin.iter().map(operator_json).collect::<Vec<_>>(),
            "g": shifted.iter().map(operator_json).collect::<Vec<_>>(),
            "horn_w": horn.w_operators.iter().map(operator_json).collect::<Vec<_>>(),
            "horn_x": horn.x_operators.iter().map(operator_json).collect::<Vec<_>>(),
            "lattice": {
                "a": lattice.a,
                "a_prime": lattice.a_prime,
                "b": lattice.b,
                "c": lattice.c,
                "beta": lattice.beta,
                "beta_prime": lattice.beta_prime,
                "columns_in_kernel": lattice.columns_in_kernel(),
                "maximal_minor_gcd": lattice.maximal_minor_gcd(),
                "normalized_volume": lattice.normalized_volume(),
            },
        });
        if let Some((lc, disc)) = &univariate {
            doc["leading_coefficient"] = json!(lc.to_string());
            doc["discriminant"] = json!(disc.to_string());
        }
        if let Some(cs) = &comparisons {
            doc["horn_check"] = json!({
                "passed": passed,
                "comparisons": cs.iter().map(|c| json!({ "j": c.j + 1, "exact": c.exact, "ratio": c.ratio })).collect::<Vec<_>>(),
            });
        }
        format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("json values serialize")
        )
    } else {
        let mut s = format!("equation: {}\n", equation(p));
        push_family(&mut s, "Mellin operators", "M", &mellin, |op| {
            op.to_string()
        });
        push_family(
            &mut s,
            "Mellin operators, primitive integer form",
            "M",
            &mellin,
            |op| op.primitive().1.to_string(),
        );
        push_family(
            &mut s,
            "shifted operators G_j = x_j^m M_j",
            "G",
            &shifted,
            |op| op.to_string(),
        );
        push_family(
            &mut s,
            "Horn operators in w",
            "H",
            &horn.w_operators,
            |op| op.render_in("w", "Dw"),
        );
        push_family(
            &mut s,
            "Horn operators in x",
            "H'",
            &horn.x_operators,
            |op| op.to_string(),
        );
        if let Some((lc, disc)) = &univariate {
            s.push_str(&format!("leading coefficient: {lc}\n"));
            s.push_str(&format!("discriminant: {disc}\n"));
        }
        s.push_str("lattice data\n");
        s.push_str("  A:\n");
        for r in &lattice.a {
            s.push_str(&format!("    {}\n", row(r)));
        }
        s.push_str("  A':\n");
        for r in &lattice.a_prime {
            s.push_str(&format!("    {}\n", row(r)));
        }
        s.push_str("  B:\n");
        for r in &lattice.b {
            s.push_str(&format!("    {}\n", row(r)));
        }
        s.push_str(&format!("  c: {}\n", row(&lattice.c)));
        s.push_str(&format!(
            "  beta: {}, beta': {}\n",
            row(&lattice.beta),
            row(&lattice.beta_prime)
        ));
        s.push_str(&format!(
            "  columns of B in ker A: {}; gcd of maximal minors: {}; normalized volume: {}\n",
            if lattice.columns_in_kernel() {
                "yes"
            } else {
                "no"
            },
            lattice.maximal_minor_gcd(),
            lattice.normalized_volume()
        ));
        if let Some(cs) = &comparisons {
            s.push_str("Horn check: (-1)^(m+1) m^m H'_j against x_j^m M_j\n");
            for c in cs {
                let verdict = if c.exact {
                    "OK".to_string()
                } else {
                    format!("MISMATCH (ratio {})", c.ratio.as_deref().unwrap_or("none"))
                };
                s.push_str(&format!("  j={}: {verdict}\n", c.j + 1));
            }
            s.push_str(if passed {
                "Horn check: OK\n"
            } else {
                "Horn check: FAILED\n"
            });
        }
        s
    };
    Ok(Outcome { text, passed })
}
