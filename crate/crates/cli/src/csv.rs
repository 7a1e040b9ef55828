//! CSV rendering with fixed 9-significant-digit numbers.

use eraserlab_core::ScenarioTrace;

/// Magnitudes below this print as `0`, hiding rounding residue.
pub const ZERO_CUTOFF: f64 = 1e-12;

/// Formats `x` like C's `%.9g`, except that values within [`ZERO_CUTOFF`]
/// of zero print as `0`.
pub fn format_number(x: f64) -> String {
    if x.abs() < ZERO_CUTOFF {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        return format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (8 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Quotes a field when it contains a comma, quote or line break.
pub fn escape_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// `step,label,e_pf,e_f,e_a`, plus an `e_p` column when any step carries one.
pub fn trace_csv(trace: &ScenarioTrace) -> String {
    let with_ep = trace.steps.iter().any(|s| s.e_p.is_some());
    let mut out = String::from("step,label,e_pf,e_f,e_a");
    if with_ep {
        out.push_str(",e_p");
    }
    out.push('\n');
    for (i, step) in trace.steps.iter().enumerate() {
        out.push_str(&format!(
            "{i},{},{},{},{}",
            escape_field(&step.label),
            optional(step.e_pf),
            optional(step.e_f),
            optional(step.e_a)
        ));
        if with_ep {
            out.push(',');
            out.push_str(&optional(step.e_p));
        }
        out.push('\n');
    }
    out
}

/// Rows of equal-length numeric columns under `header`.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().copied().map(format_number).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.5, "0.5"),
            (1.0, "1"),
            (0.811_278_124_459_132_9, "0.811278124"),
            (0.999_999_999_7, "1"),
            (123_456_789.0, "123456789"),
            (1_234_567_890.0, "1.23456789e+09"),
            (0.000_123_456_789_12, "0.000123456789"),
            (0.000_012_345_678_912, "1.23456789e-05"),
            (-2.5, "-2.5"),
            (1e-13, "0"),
            (-1e-13, "0"),
            (3.0e-9, "3e-09"),
        ];
        for (x, want) in cases {
            assert_eq!(format_number(x), want, "{x}");
        }
    }

    #[test]
    fn escapes_fields() {
        assert_eq!(escape_field("cnot 0 2"), "cnot 0 2");
        assert_eq!(escape_field("a,b"), "\"a,b\"");
        assert_eq!(escape_field("say \"hi\", ok"), "\"say \"\"hi\"\", ok\"");
    }

    #[test]
    fn table() {
        let csv = table_csv(&["x", "y"], &[vec![0.0, 1.0], vec![0.25, 1e-20]]);
        assert_eq!(csv, "x,y\n0,1\n0.25,0\n");
    }
}
