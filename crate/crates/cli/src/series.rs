use serde_json::{json, Value};

use mellin_core::roots::RootSystem;
use mellin_core::series::{
    convenient_basis_series, is_generating, principal_series, Rationals, TruncatedSeries,
};
use mellin_core::MultiIndex;

use crate::render::{complex_series, equation, index, profile_json, rational_series};
use crate::{Failure, Outcome, RunConfig};

pub enum Which {
    Principal,
    Basis(MultiIndex),
    Roots,
}

fn exact(
    cfg: &RunConfig,
    which: &Which,
    order: u32,
) -> Result<TruncatedSeries<Rationals>, Failure> {
    Ok(match which {
        Which::Principal => principal_series(&cfg.profile, order),
        Which::Basis(i) => convenient_basis_series(&cfg.profile, i, order)?,
        Which::Roots => unreachable!("root jets are not exact"),
    })
}

pub fn run(cfg: &RunConfig, which: Which, generating_check: bool) -> Result<Outcome, Failure> {
    let p = &cfg.profile;
    if let Which::Basis(i) = &which {
        p.check_in_box(i)?;
    }
    let json_out = |doc: Value| {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("json values serialize")
        )
    };

    if let Which::Roots = which {
        let system = RootSystem::at_origin(p, cfg.order)?;
        let text = if cfg.json {
            let equations: Vec<Value> = system
                .equations
                .iter()
                .map(|(twist, jets)| json!({ "twist": twist, "jets": jets.iter().map(|j| j.to_json()).collect::<Vec<_>>() }))
                .collect();
            json_out(json!({
                "command": "series",
                "kind": "roots",
                "profile": profile_json(p),
                "order": cfg.order,
                "equations": equations,
            }))
        } else {
            let mut s = format!(
                "root jets of {} and its twists, order {}\n",
                equation(p),
                cfg.order
            );
            for (twist, jets) in &system.equations {
                for jet in jets {
                    s.push_str(&format!(
                        "twist {} branch {}\n",
                        index(twist),
                        jet.branch_id
                    ));
                    s.push_str(&complex_series(&jet.coefficients));
                }
            }
            s
        };
        return Ok(Outcome { text, passed: true });
    }

    let series = exact(cfg, &which, cfg.order)?;
    // the check needs every residue class up to degree n(m-1)
    let generating = if generating_check {
        let need = p.n() as u32 * (p.m() - 1);
        let probe = if cfg.order >= need {
            series.clone()
        } else {
            exact(cfg, &which, need)?
        };
        Some(is_generating(&probe, p)?)
    } else {
        None
    };
    let (kind, label) = match &which {
        Which::Principal => ("principal".to_string(), "principal series".to_string()),
        Which::Basis(i) => (
            "basis".to_string(),
            format!("convenient basis series f_{}", index(i)),
        ),
        Which::Roots => unreachable!(),
    };

    let text = if cfg.json {
        let mut doc = json!({
            "command": "series",
            "kind": kind,
            "profile": profile_json(p),
            "order": cfg.order,
            "series": series.to_json(),
        });
        if let Which::Basis(i) = &which {
            doc["index"] = json!(i);
        }
        if let Some(g) = generating {
            doc["generating"] = json!(g);
        }
        json_out(doc)
    } else {
        let mut s = format!("{label} of {}, order {}\n", equation(p), cfg.order);
        s.push_str(&rational_series(&series));
        if let Some(g) = generating {
            s.push_str(if g {
                "GENERATING\n"
            } else {
                "NOT GENERATING\n"
            });
        }
        s
    };
    Ok(Outcome { text, passed: true })
}
