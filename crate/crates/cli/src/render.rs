//! Text helpers shared by the subcommands. Everything here is a pure function
//! of its input, so output is byte-stable across runs.

use std::fmt::Display;

use num_complex::Complex64;
use serde_json::{json, Value};

use mellin_core::series::ring::fraction_string;
use mellin_core::series::{ComplexFloat, Rationals, TruncatedSeries};
use mellin_core::{ExponentProfile, MultiIndex};

use crate::Failure;

/// Values below this print as `<1e-12`; they sit under the pruning floor of
/// floating-point series.
const PRINT_FLOOR: f64 = 1e-12;

pub fn equation(profile: &ExponentProfile) -> String {
    let n = profile.n();
    let mut s = format!("y^{}", profile.m());
    for (j, &e) in profile.exponents().iter().enumerate() {
        let x = if n == 1 {
            "x".to_string()
        } else {
            format!("x{}", j + 1)
        };
        let y = if e == 1 {
            "y".to_string()
        } else {
            format!("y^{e}")
        };
        s.push_str(&format!(" + {x} {y}"));
    }
    s.push_str(" - 1");
    s
}

pub fn profile_json(profile: &ExponentProfile) -> Value {
    json!({
        "m": profile.m(),
        "exponents": profile.exponents(),
        "d": profile.d(),
        "equation": equation(profile),
    })
}

pub fn index(i: &MultiIndex) -> String {
    let parts: Vec<String> = i.entries().iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn index_list(items: &[MultiIndex]) -> String {
    if items.is_empty() {
        return "none".into();
    }
    items.iter().map(index).collect::<Vec<_>>().join(" ")
}

/// Parses `--basis 2,0,1`.
pub fn parse_index(text: &str) -> Result<MultiIndex, Failure> {
    text.split(',')
        .map(|part| {
            part.trim().parse::<u32>().map_err(|_| {
                Failure::Usage(format!(
                    "--basis expects comma-separated non-negative integers, got {text:?}"
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(MultiIndex)
}

pub fn small(x: f64) -> String {
    if x < PRINT_FLOOR {
        format!("<{PRINT_FLOOR:e}")
    } else {
        format!("{x:.3e}")
    }
}

pub fn complex(z: &Complex64) -> String {
    // adding 0.0 turns -0.0 into 0.0
    format!("{:.12e} {:+.12e}i", z.re + 0.0, z.im + 0.0)
}

pub fn row<T: Display>(items: &[T]) -> String {
    format!(
        "[{}]",
        items
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

/// Terms in graded order: total degree first, then `x1` before `x2`.
fn graded<'a, E>(
    terms: impl Iterator<Item = (&'a MultiIndex, &'a E)>,
) -> Vec<(&'a MultiIndex, &'a E)>
where
    E: 'a,
{
    let mut out: Vec<_> = terms.collect();
    out.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then(b.cmp(a)));
    out
}

pub fn rational_series(series: &TruncatedSeries<Rationals>) -> String {
    let mut s = String::new();
    for (e, c) in graded(series.terms()) {
        s.push_str(&format!("  {:<12} {}\n", index(e), fraction_string(c)));
    }
    s
}

pub fn complex_series(series: &TruncatedSeries<ComplexFloat>) -> String {
    let mut s = String::new();
    for (e, c) in graded(series.terms()) {
        s.push_str(&format!("  {:<12} {}\n", index(e), complex(c)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use mellin_core::make_profile;

    #[test]
    fn equation_text() {
        assert_eq!(
            equation(&make_profile(3, &[2, 1]).unwrap()),
            "y^3 + x1 y^2 + x2 y - 1"
        );
        assert_eq!(equation(&make_profile(2, &[1]).unwrap()), "y^2 + x y - 1");
    }

    #[test]
    fn index_parsing() {
        assert_eq!(parse_index("1, 0").unwrap(), MultiIndex(vec![1, 0]));
        assert!(parse_index("1,-2").is_err());
        assert!(parse_index("").is_err());
    }

    #[test]
    fn floor_and_signed_zero() {
        assert_eq!(small(0.0), "<1e-12");
        assert_eq!(small(2.5e-9), "2.500e-9");
        assert_eq!(
            complex(&Complex64::new(-0.0, -0.0)),
            "0.000000000000e0 +0.000000000000e0i"
        );
    }
}
