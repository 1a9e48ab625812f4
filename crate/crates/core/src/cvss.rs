//! CVSS v3.x base score extraction.
//!
//! Advisory sources carry either a numeric base score or a vector string like
//! `CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H`. Only the base metric group
//! is evaluated; temporal and environmental metrics are ignored.

use std::collections::HashMap;

/// Parse a severity score field: a plain number or a CVSS v3.x vector.
pub fn base_score(score: &str) -> Option<f64> {
    if let Ok(v) = score.trim().parse::<f64>() {
        if (0.0..=10.0).contains(&v) {
            return Some(v);
        }
        return None;
    }
    base_score_from_vector(score)
}

pub fn base_score_from_vector(vector: &str) -> Option<f64> {
    let vector = vector.trim();
    if !vector.starts_with("CVSS:3") {
        return None;
    }
    let metrics: HashMap<&str, &str> = vector
        .split('/')
        .skip(1)
        .filter_map(|part| part.split_once(':'))
        .collect();

    let scope_changed = match *metrics.get("S")? {
        "C" => true,
        "U" => false,
        _ => return None,
    };
    let av = match *metrics.get("AV")? {
        "N" => 0.85,
        "A" => 0.62,
        "L" => 0.55,
        "P" => 0.2,
        _ => return None,
    };
    let ac = match *metrics.get("AC")? {
        "L" => 0.77,
        "H" => 0.44,
        _ => return None,
    };
    let pr = match (*metrics.get("PR")?, scope_changed) {
        ("N", _) => 0.85,
        ("L", false) => 0.62,
        ("L", true) => 0.68,
        ("H", false) => 0.27,
        ("H", true) => 0.5,
        _ => return None,
    };
    let ui = match *metrics.get("UI")? {
        "N" => 0.85,
        "R" => 0.62,
        _ => return None,
    };
    let cia = |key: &str| -> Option<f64> {
        match *metrics.get(key)? {
            "H" => Some(0.56),
            "L" => Some(0.22),
            "N" => Some(0.0),
            _ => None,
        }
    };
    let (c, i, a) = (cia("C")?, cia("I")?, cia("A")?);

    let iss = 1.0 - (1.0 - c) * (1.0 - i) * (1.0 - a);
    let impact = if scope_changed {
        7.52 * (iss - 0.029) - 3.25 * (iss - 0.02).powi(15)
    } else {
        6.42 * iss
    };
    let exploitability = 8.22 * av * ac * pr * ui;

    if impact <= 0.0 {
        return Some(0.0);
    }
    let raw = if scope_changed {
        (1.08 * (impact + exploitability)).min(10.0)
    } else {
        (impact + exploitability).min(10.0)
    };
    Some(round_up(raw))
}

// CVSS v3.1 Appendix A "Roundup" to one decimal.
fn round_up(x: f64) -> f64 {
    let int_input = (x * 100_000.0).round() as i64;
    if int_input % 10_000 == 0 {
        int_input as f64 / 100_000.0
    } else {
        ((int_input / 10_000) as f64 + 1.0) / 10.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference vectors cross-checked against the published v3.1 calculator
    #[test]
    fn critical_rce_vector_scores_9_8() {
        let s = base_score_from_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H").unwrap();
        assert_eq!(s, 9.8);
    }

    #[test]
    fn scope_changed_vector_scores_10() {
        let s = base_score_from_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:C/C:H/I:H/A:H").unwrap();
        assert_eq!(s, 10.0);
    }

    #[test]
    fn no_impact_scores_zero() {
        let s = base_score_from_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N").unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn medium_vector() {
        // local, low privileges, user interaction, high confidentiality only
        let s = base_score_from_vector("CVSS:3.1/AV:L/AC:L/PR:L/UI:N/S:U/C:H/I:N/A:N").unwrap();
        assert_eq!(s, 5.5);
    }

    #[test]
    fn numeric_score_passthrough() {
        assert_eq!(base_score("7.5"), Some(7.5));
        assert_eq!(base_score("11"), None);
    }

    #[test]
    fn garbage_vector_rejected() {
        assert_eq!(base_score_from_vector("CVSS:3.1/AV:Z"), None);
        assert_eq!(base_score_from_vector("CVSS:2.0/AV:N"), None);
    }
}
