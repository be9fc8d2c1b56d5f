//! Post-run validator: re-reads an emitted CSV and spot-checks every row
//! against the measure bounds (nonnegativity, the N-bit ceiling, and the
//! ordering PhiG <= min(IF, I)).

use crate::config::ConfigError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum FileKind {
    Sweep,
    Measure,
    Learn,
    Capacity,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub rows_checked: usize,
    pub skipped_na_rows: usize,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn header_value(line: &str, key: &str) -> Option<String> {
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix(&format!("{key}=")).map(str::to_owned))
}

/// Validate the text of a CSV produced by this tool.
pub fn validate_csv_text(text: &str) -> Result<ValidationReport, ConfigError> {
    let mut kind: Option<FileKind> = None;
    let mut nodes: Option<usize> = None;
    let mut columns: Vec<String> = Vec::new();
    let mut report = ValidationReport {
        rows_checked: 0,
        skipped_na_rows: 0,
        violations: Vec::new(),
    };
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(cmd) = header_value(rest, "command") {
                kind = Some(match cmd.as_str() {
                    "sweep-beta" => FileKind::Sweep,
                    "measure" => FileKind::Measure,
                    "hopfield-learn" => FileKind::Learn,
                    "hopfield-capacity" => FileKind::Capacity,
                    other => {
                        return Err(ConfigError(format!("unknown command header {other:?}")))
                    }
                });
                if rest.contains("summary") {
                    return Err(ConfigError(
                        "summary files carry derived statistics; validate the row file".into(),
                    ));
                }
            }
            if let Some(n) = header_value(rest, "nodes") {
                nodes = n.parse().ok();
            }
            continue;
        }
        if columns.is_empty() {
            columns = line.split(',').map(str::to_owned).collect();
            continue;
        }
        let kind = kind
            .clone()
            .ok_or_else(|| ConfigError("missing `# command=` header".into()))?;
        let n_bits = nodes.ok_or_else(|| ConfigError("missing `nodes=` header".into()))? as f64;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns.len() {
            report.violations.push(format!(
                "line {}: {} cells, header names {}",
                line_no + 1,
                cells.len(),
                columns.len()
            ));
            continue;
        }
        if cells.contains(&"NA") {
            report.skipped_na_rows += 1;
            continue;
        }
        let value = |name: &str| -> Option<f64> {
            let idx = columns.iter().position(|c| c == name)?;
            cells[idx].parse().ok()
        };
        let mut fail = |msg: String| {
            report.violations.push(format!("line {}: {msg}", line_no + 1));
        };
        match kind {
            FileKind::Sweep | FileKind::Measure => {
                let (mi, si, flow, phi, i) = match (
                    value("MI_bits"),
                    value("SI_bits"),
                    value("IF_bits"),
                    value("PhiG_bits"),
                    value("I_bits"),
                ) {
                    (Some(a), Some(b), Some(c), Some(d), Some(e)) => (a, b, c, d, e),
                    _ => {
                        fail("unparseable measure cells".into());
                        continue;
                    }
                };
                if mi < -1e-9 || flow < -1e-9 || i < -1e-9 || phi < -1e-9 {
                    fail(format!("negative measure: MI={mi} IF={flow} I={i} PhiG={phi}"));
                }
                if mi > n_bits + 1e-6 || flow > n_bits + 1e-6 || i > n_bits + 1e-6 {
                    fail(format!("measure above {n_bits} bits"));
                }
                if phi > i + 1e-6 {
                    fail(format!("PhiG={phi} exceeds I={i}"));
                }
                if phi > flow + 1e-6 {
                    fail(format!("PhiG={phi} exceeds IF={flow}"));
                }
                if si.abs() > 2.0 * n_bits {
                    fail(format!("SI={si} out of range"));
                }
            }
            FileKind::Learn => match value("IF_bits") {
                Some(flow) if flow >= -1e-9 && flow <= n_bits + 1e-6 => {}
                Some(flow) => fail(format!("IF={flow} outside [0, {n_bits}]")),
                None => fail("unparseable IF cell".into()),
            },
            FileKind::Capacity => match value("capacity_bits") {
                Some(cap) if cap >= -1e-9 && cap <= n_bits + 1e-9 => {}
                Some(cap) => fail(format!("capacity={cap} outside [0, {n_bits}]")),
                None => fail("unparseable capacity cell".into()),
            },
        }
        report.rows_checked += 1;
    }
    if kind.is_none() {
        return Err(ConfigError("not a complexity-lab CSV".into()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "\
# command=sweep-beta
# nodes=3 trials=1 seed=1
trial,beta,MI_bits,SI_bits,IF_bits,PhiG_bits,I_bits
0,0,0,0,0,0,0
0,0.5,0.2,-0.1,0.5,0.3,0.6
";

    #[test]
    fn clean_file_passes() {
        let r = validate_csv_text(GOOD).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.rows_checked, 2);
    }

    #[test]
    fn postulate_violation_is_reported() {
        let bad = GOOD.replace("0,0.5,0.2,-0.1,0.5,0.3,0.6", "0,0.5,0.2,-0.1,0.9,0.7,0.6");
        let r = validate_csv_text(&bad).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert!(r.violations[0].contains("exceeds I"));
    }

    #[test]
    fn na_rows_are_skipped_not_failed() {
        let with_na = format!("{GOOD}1,0.5,NA,NA,NA,NA,NA\n");
        let r = validate_csv_text(&with_na).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.skipped_na_rows, 1);
    }

    #[test]
    fn foreign_files_are_rejected() {
        assert!(validate_csv_text("a,b,c\n1,2,3\n").is_err());
    }

    #[test]
    fn capacity_bound_checked() {
        let capacity = "\
# command=hopfield-capacity
# nodes=9 trials=1 seed=1
trial,T,capacity_bits
0,1,9.5
";
        let r = validate_csv_text(capacity).unwrap();
        assert_eq!(r.violations.len(), 1);
    }
}
