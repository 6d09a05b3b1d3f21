//! Report rendering and file output.
//!
//! Three formats share one data flow: every subcommand assembles its full
//! result first, then exactly one of these renderers turns it into text,
//! and [`write_report`] emits that text once — to stdout, or atomically
//! (temp file + rename) when `--out` is given. Nothing is streamed, so an
//! interrupted run never leaves a half-written report behind.

use std::io::Write;
use std::path::Path;

/// Formats `x` to 6 significant digits, plain notation where readable and
/// scientific otherwise — printf's `%.6g`, which Rust's formatter lacks.
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        return trim_exp(format!("{x:.5e}"));
    };
    trim_fraction(s)
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

fn trim_exp(s: String) -> String {
    // "2.50000e-13" → "2.5e-13"
    match s.split_once('e') {
        Some((mantissa, exp)) => format!("{}e{exp}", trim_fraction(mantissa.to_string())),
        None => s,
    }
}

/// One row of the sweep-oriented CSV schema.
pub struct CsvRow {
    pub name: String,
    pub index: i64,
    pub lhs: f64,
    pub rhs: f64,
    /// Slack of the row's inequality; nonnegative when it holds.
    pub gap: f64,
    pub bound: f64,
}

impl CsvRow {
    pub fn new(name: impl Into<String>, index: i64, lhs: f64, rhs: f64, gap: f64, bound: f64) -> Self {
        CsvRow {
            name: name.into(),
            index,
            lhs,
            rhs,
            gap,
            bound,
        }
    }
}

/// Renders rows under the fixed header `name,index,lhs,rhs,gap,bound`.
/// Floats keep full precision (17 significant digits) so the CSV is as
/// trustworthy as the JSON output.
pub fn render_csv(rows: &[CsvRow]) -> String {
    let mut s = String::from("name,index,lhs,rhs,gap,bound\n");
    for r in rows {
        debug_assert!(!r.name.contains(','), "CSV row names must not contain commas");
        s.push_str(&format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.name, r.index, r.lhs, r.rhs, r.gap, r.bound
        ));
    }
    s
}

/// Renders a JSON payload in the canonical form (sorted keys, full-precision
/// floats) whose parse/re-serialize cycle is byte-identical.
pub fn render_json(value: &serde_json::Value) -> String {
    let mut s = weissler_core::json::to_canonical_string(value);
    s.push('\n');
    s
}

/// Writes the rendered report: to stdout when `out` is `None`, otherwise to
/// a sibling temp file renamed over `out` so readers never observe a
/// partial file.
pub fn write_report(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
        Some(path) => {
            let file_name = path
                .file_name()
                .and_then(|s| s.to_str())
                .unwrap_or("report");
            let tmp = path.with_file_name(format!(".{file_name}.tmp"));
            std::fs::write(&tmp, text)?;
            std::fs::rename(&tmp, path)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_g6(0.20833333333), "0.208333");
        assert_eq!(fmt_g6(1.0), "1");
        assert_eq!(fmt_g6(0.5), "0.5");
        assert_eq!(fmt_g6(2.25), "2.25");
        assert_eq!(fmt_g6(0.10625), "0.10625");
        assert_eq!(fmt_g6(-0.066276803), "-0.0662768");
        assert_eq!(fmt_g6(123456.7), "123457" /* rounds, stays plain */);
        assert_eq!(fmt_g6(2.5e-13), "2.5e-13");
        assert_eq!(fmt_g6(0.0), "0");
    }

    #[test]
    fn csv_has_fixed_header_and_full_precision() {
        let rows = vec![CsvRow::new("weak_condition", 1, 1.0 / 6.0, 0.0, 1.0 / 6.0, 1e-15)];
        let text = render_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("name,index,lhs,rhs,gap,bound"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("weak_condition,1,"));
        let lhs: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(lhs, 1.0 / 6.0, "full precision survives the round trip");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = std::env::temp_dir().join(format!("weissler-lab-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("report.csv");
        write_report("first\n", Some(&path)).unwrap();
        write_report("second\n", Some(&path)).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second\n");
        assert!(
            !dir.join(".report.csv.tmp").exists(),
            "temp file must not survive"
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
