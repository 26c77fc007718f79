//! Plain CSV tables with a one-line provenance comment.
//!
//! ```text
//! # vmf-fading v1 command=lcr kappa=10 ... seed=0
//! level_db,rho,lcr_hz
//! -3.0000000000000000e1,3.1622776601683794e-2,...
//! ```

use std::path::Path;

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "vmf-fading v1";

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Text after `# vmf-fading v1 `.
    pub echo: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// 17 significant digits; infinities as `inf`/`-inf`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

impl Table {
    pub fn new(echo: String, columns: &[&str]) -> Self {
        Self {
            echo,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn render(&self) -> String {
        let mut out = format!("# {SCHEMA} {}\n", self.echo).into_bytes();
        {
            let mut w = ::csv::WriterBuilder::new()
                .terminator(::csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            w.write_record(&self.columns).expect("in-memory write");
            for row in &self.rows {
                w.write_record(row.iter().map(|x| format_number(*x)))
                    .expect("in-memory write");
            }
            w.flush().expect("in-memory write");
        }
        String::from_utf8(out).expect("ASCII output")
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let bad = |line: u64, msg: &str| CliError::Validation(format!("csv line {line}: {msg}"));
        let first = text.lines().next().ok_or_else(|| bad(1, "empty file"))?;
        let echo = first
            .strip_prefix("# ")
            .and_then(|s| s.strip_prefix(SCHEMA))
            .ok_or_else(|| bad(1, "missing schema header"))?
            .trim_start()
            .to_string();
        let body = &text[first.len()..].trim_start_matches('\n');
        let mut r = ::csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let columns: Vec<String> = r
            .headers()
            .map_err(|e| bad(2, &e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if columns.iter().all(|c| c.is_empty()) {
            return Err(bad(2, "missing column names"));
        }
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let line = i as u64 + 3;
            let rec = rec.map_err(|e| bad(line, &e.to_string()))?;
            let row = rec
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(line, &e.to_string()))?;
            rows.push(row);
        }
        Ok(Self {
            echo,
            columns,
            rows,
        })
    }

    pub fn write_to(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.render())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for x in [0.0, -1.5, 1.0 / 3.0, 6.02e23, 5e-324, f64::MAX] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn render_and_parse() {
        let mut t = Table::new("command=test seed=3".into(), &["a", "b"]);
        t.push(vec![1.0, f64::INFINITY]);
        t.push(vec![-0.25, 1e-300]);
        let text = t.render();
        assert!(text.starts_with("# vmf-fading v1 command=test seed=3\na,b\n"));
        assert!(!text.contains('\r'));
        assert_eq!(Table::parse(&text).unwrap(), t);
        assert_eq!(t.column("b").unwrap()[1], 1e-300);
        assert!(t.column("c").is_none());
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(Table::parse("").is_err());
        assert!(Table::parse("a,b\n1,2\n").is_err());
        assert!(Table::parse("# vmf-fading v1 x\na,b\n1\n").is_err());
        assert!(Table::parse("# vmf-fading v1 x\na,b\n1,zz\n").is_err());
    }
}
