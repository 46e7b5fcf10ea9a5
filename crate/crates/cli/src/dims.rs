use serde_json::json;

use mellin_core::combinatorics::{
    algebraic_index_set, coset_representatives, dims, missing_index_set, relation_basis,
};
use mellin_core::series::ring::fraction_string;

use crate::render::{equation, index_list, profile_json, row};
use crate::{Failure, Outcome, RunConfig};

pub fn run(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let p = &cfg.profile;
    let report = dims(p);
    let bprime = algebraic_index_set(p);
    let missing = missing_index_set(p);
    let gamma = coset_representatives(p);
    let relations: Vec<Vec<String>> = if p.d() == 1 {
        relation_basis(p)?
            .iter()
            .map(|c| c.iter().map(fraction_string).collect())
            .collect()
    } else {
        Vec::new()
    };

    let text = if cfg.json {
        let doc = json!({
            "command": "dims",
            "profile": profile_json(p),
            "rank": report.rank,
            "dim_y": report.dim_y,
            "dim_r": report.dim_r,
            "dim_s": report.dim_s,
            "card_bprime": report.card_bprime,
            "bprime": bprime,
            "missing": missing,
            "coset_representatives": gamma,
            "relation_basis": relations,
        });
        format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("json values serialize")
        )
    } else {
        let mut s = format!("equation: {}\n", equation(p));
        s.push_str(&format!("profile: {p}, d = {}\n", p.d()));
        s.push_str(&format!("rank: {}\n", report.rank));
        s.push_str(&format!("dim Y: {}\n", report.dim_y));
        s.push_str(&format!("dim R: {}\n", report.dim_r));
        s.push_str(&format!("dim S: {}\n", report.dim_s));
        s.push_str(&format!("|B'|: {}\n", report.card_bprime));
        s.push_str(&format!("B': {}\n", index_list(&bprime)));
        s.push_str(&format!("missing (B''): {}\n", index_list(&missing)));
        s.push_str(&format!("coset representatives: {}\n", index_list(&gamma)));
        if p.d() == 1 {
            s.push_str("relation basis:\n");
            if relations.is_empty() {
                s.push_str("  none\n");
            }
            for c in &relations {
                s.push_str(&format!("  {}\n", row(c)));
            }
        } else {
            s.push_str("relation basis: none (d > 1, every solution is algebraic)\n");
        }
        s
    };
    Ok(Outcome { text, passed: true })
}
