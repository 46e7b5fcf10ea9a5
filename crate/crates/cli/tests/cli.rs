use std::process::{Command, Output};

use serde_json::Value;

fn mellin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mellin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Runs the command, insists on exit code 0 and returns stdout.
fn ok(args: &[&str]) -> String {
    let out = mellin(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "mellin {args:?} failed:\n{}\n{}",
        stdout(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    serde_json::from_str(&ok(&full)).expect("valid json")
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}"))
}

#[test]
fn dims_of_the_two_variable_cubic() {
    let text = ok(&["dims", "3", "2", "1"]);
    assert!(text.contains("rank: 9\n"));
    assert!(text.contains("dim Y: 7\n"));
    assert!(text.contains("dim R: 2\n"));
    assert!(text.contains("missing (B''): (0,2) (2,1)\n"));
    assert!(text.contains("coset representatives: (0,0) (0,1) (0,2)\n"));

    let doc = json(&["dims", "3", "2", "1"]);
    assert_eq!(doc["dim_s"], 2);
    assert_eq!(doc["missing"], serde_json::json!([[0, 2], [2, 1]]));
    assert_eq!(doc["relation_basis"].as_array().unwrap().len(), 2);
}

#[test]
fn dims_of_generating_and_quadratic_profiles() {
    let doc = json(&["dims", "6", "4", "2"]);
    assert_eq!(
        (doc["rank"].as_u64(), doc["dim_y"].as_u64()),
        (Some(36), Some(36))
    );
    assert_eq!(doc["profile"]["d"], 2);
    let doc = json(&["dims", "2", "1"]);
    assert_eq!(
        (doc["rank"].as_u64(), doc["dim_y"].as_u64()),
        (Some(2), Some(2))
    );
}

#[test]
fn quadratic_operator_in_scaled_form() {
    let text = ok(&["operators", "2", "1"]);
    assert!(text.contains("M1 = (x^2 + 4) D^2 + x D - 1\n"), "{text}");
    assert!(text.contains("discriminant: x^2 + 4\n"));
}

#[test]
fn cubic_operator_matches_the_displayed_equation() {
    let text = ok(&["operators", "3", "1"]);
    assert!(
        text.contains("M1 = (4 x^3 + 27) D^3 + 18 x^2 D^2 + 10 x D - 2\n"),
        "{text}"
    );
    let doc = json(&["operators", "3", "1"]);
    assert_eq!(doc["lattice"]["normalized_volume"], 3);
    assert_eq!(doc["mellin"][0]["scale"], "1");
}

#[test]
fn horn_check_passes_when_complement_is_even() {
    let text = ok(&["operators", "3", "1", "--check-horn"]);
    assert!(text.ends_with("Horn check: OK\n"));
}

#[test]
fn horn_check_reports_the_sign_for_odd_complement() {
    // m'_1 = 1 for (3; 2,1): the two sides differ by -1 for j = 1
    let out = mellin(&["operators", "3", "2", "1", "--check-horn"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("j=1: MISMATCH (ratio -1)"), "{text}");
    assert!(text.contains("j=2: OK"));
}

#[test]
fn principal_series_coefficients() {
    let doc = json(&["series", "3", "2", "1", "--principal", "--order", "6"]);
    let terms = doc["series"]["terms"].as_array().unwrap();
    let coeff = |e: [u32; 2]| {
        terms
            .iter()
            .find(|t| t["exponent"] == serde_json::json!(e))
            .map(|t| t["coeff"].as_str().unwrap().to_string())
    };
    assert_eq!(coeff([0, 0]).as_deref(), Some("1"));
    assert_eq!(coeff([1, 0]).as_deref(), Some("-1/3"));
    assert_eq!(doc["series"]["order"], 6);
}

#[test]
fn quadratic_basis_series_is_half_the_square_root() {
    // sqrt(x^2 + 4) / 2 = 1 + x^2/8 - x^4/128 + x^6/1024 - 5 x^8/32768
    let text = ok(&["series", "2", "1", "--basis", "0", "--order", "8"]);
    let lines: Vec<&str> = text.lines().skip(1).collect();
    let want = [
        ("(0)", "1"),
        ("(2)", "1/8"),
        ("(4)", "-1/128"),
        ("(6)", "1/1024"),
        ("(8)", "-5/32768"),
    ];
    assert_eq!(lines.len(), want.len(), "{text}");
    for (line, (e, c)) in lines.iter().zip(want) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(parts, [e, c]);
    }
}

#[test]
fn generating_check() {
    assert!(
        ok(&["series", "6", "4", "2", "--principal", "--generating-check"])
            .ends_with("\nGENERATING\n")
    );
    assert!(ok(&["series", "3", "2", "1", "--generating-check"]).ends_with("\nNOT GENERATING\n"));
    let doc = json(&[
        "series",
        "6",
        "4",
        "2",
        "--generating-check",
        "--order",
        "4",
    ]);
    assert_eq!(doc["generating"], true);
}

#[test]
fn root_jets_cover_every_twisted_equation() {
    let doc = json(&["series", "3", "2", "1", "--roots", "--order", "6"]);
    let eqs = doc["equations"].as_array().unwrap();
    assert_eq!(eqs.len(), 3);
    for e in eqs {
        assert_eq!(e["jets"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn verify_cubic_with_derivative_factor() {
    let text = ok(&["verify", "3", "1"]);
    assert!(
        text.contains("[ok] derivative left factor: M = D ("),
        "{text}"
    );
    assert!(text.ends_with("0 failed: PASS\n"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn verify_quartic_block_split() {
    let doc = json(&["verify", "4", "2"]);
    assert_eq!(doc["passed"], true);
    let blocks = &check(&doc, "invariant subspaces")["data"]["blocks"];
    let ranks: Vec<u64> = blocks
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["rank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, [2, 2]);
}

#[test]
fn verify_two_variable_cubic() {
    let doc = json(&["verify", "3", "2", "1", "--order", "12"]);
    assert_eq!(doc["passed"], true);
    assert_eq!(check(&doc, "algebraic rank")["data"]["rank"], 7);
    assert_eq!(
        check(&doc, "log solutions")["data"]["residuals"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
    assert_eq!(check(&doc, "direct sum")["data"]["rank"], 9);
    assert_eq!(doc["tolerances"]["annihilation"], 1e-8);
}

#[test]
fn tolerance_flag_reaches_the_checks() {
    // far below double-precision noise: the numerical checks must fail
    let out = mellin(&["verify", "3", "2", "1", "--tol-annihilation", "1e-30"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("[FAIL] log solutions"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["verify", "3", "2", "1", "--json"][..],
        &["series", "3", "1", "--roots"][..],
        &["operators", "3", "2", "1"][..],
    ] {
        assert_eq!(mellin(args).stdout, mellin(args).stdout, "{args:?}");
    }
}

#[test]
fn seed_moves_the_sample_point_only() {
    let a = json(&["verify", "3", "1", "--seed", "0"]);
    let b = json(&["verify", "3", "1", "--seed", "7"]);
    assert_eq!(
        (a["passed"].as_bool(), b["passed"].as_bool()),
        (Some(true), Some(true))
    );
    assert_ne!(
        check(&a, "sample roots")["data"]["point"],
        check(&b, "sample roots")["data"]["point"]
    );
    assert_eq!(check(&a, "direct sum"), check(&b, "direct sum"));
}

#[test]
fn json_round_trips() {
    for args in [
        &["dims", "3", "2", "1"][..],
        &["operators", "2", "1"][..],
        &["verify", "2", "1"][..],
    ] {
        let mut full = args.to_vec();
        full.push("--json");
        let text = ok(&full);
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(
            format!("{}\n", serde_json::to_string_pretty(&value).unwrap()),
            text
        );
        assert!(value["command"].is_string() && value["profile"]["m"].is_u64());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(mellin(&["dims", "3", "3"]).status.code(), Some(1));
    assert_eq!(mellin(&["dims", "3", "1", "2"]).status.code(), Some(1));
    assert_eq!(mellin(&["dims", "3"]).status.code(), Some(1));
    assert_eq!(mellin(&["frobnicate", "3", "1"]).status.code(), Some(1));
    assert_eq!(
        mellin(&["series", "2", "1", "--basis", "2"]).status.code(),
        Some(1)
    );
    assert_eq!(
        mellin(&["series", "2", "1", "--basis", "x"]).status.code(),
        Some(1)
    );
    assert_eq!(
        mellin(&["series", "2", "1", "--roots", "--principal"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        mellin(&["verify", "3", "1", "--order", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(mellin(&["--help"]).status.code(), Some(0));
    assert_eq!(mellin(&["--version"]).status.code(), Some(0));
    let err = mellin(&["dims", "3", "0"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("invalid exponent profile"));
}
