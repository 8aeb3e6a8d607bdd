//! Plain-text data tables with `#`-prefixed metadata headers.
//!
//! One table per figure panel, whitespace-delimited, column names matching
//! the plotted quantities. The metadata block echoes the fully resolved
//! configuration so any table can be regenerated from its own header.

use crate::error::Result;
use std::fmt::Display;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct Table {
    title: String,
    meta: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, columns: &[&str]) -> Self {
        Self {
            title: title.to_string(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Display) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width mismatch");
        self.rows.push(cells);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# table: {}\n", self.title));
        for (k, v) in &self.meta {
            s.push_str(&format!("# {k} = {v}\n"));
        }
        s.push_str(&self.columns.join(" "));
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Write `<title>.dat` under `dir`, or print to stdout when `dir` is
    /// `None`. Returns the path written, if any.
    pub fn emit(&self, dir: Option<&Path>) -> Result<Option<PathBuf>> {
        match dir {
            Some(d) => {
                std::fs::create_dir_all(d)?;
                let path = d.join(format!("{}.dat", self.title));
                std::fs::write(&path, self.render())?;
                println!("wrote {}", path.display());
                Ok(Some(path))
            }
            None => {
                println!("{}", self.render());
                Ok(None)
            }
        }
    }
}

/// Standard numeric cell: six decimals, enough to read every studied
/// quantity back without drowning the tables in digits.
pub fn num(x: f64) -> String {
    format!("{x:.6}")
}

pub fn int(x: impl Display) -> String {
    x.to_string()
}

/// Sorted copy of `xs` paired with empirical CDF levels (k+1)/n.
pub fn empirical_cdf(xs: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    sorted
        .into_iter()
        .enumerate()
        .map(|(k, x)| (x, (k + 1) as f64 / n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_meta_header_then_columns_then_rows() {
        let mut t = Table::new("demo", &["x", "y"]);
        t.meta("psi", num(0.25));
        t.meta("seed", 7);
        t.row(vec![num(1.0), num(2.5)]);
        t.row(vec![num(2.0), num(0.1)]);
        let text = t.render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# table: demo");
        assert_eq!(lines[1], "# psi = 0.250000");
        assert_eq!(lines[2], "# seed = 7");
        assert_eq!(lines[3], "x y");
        assert_eq!(lines[4], "1.000000 2.500000");
        assert_eq!(lines.len(), 6);
    }

    #[test]
    #[should_panic(expected = "row width mismatch")]
    fn rejects_ragged_rows() {
        let mut t = Table::new("demo", &["x", "y"]);
        t.row(vec![num(1.0)]);
    }

    #[test]
    fn emits_to_directory() {
        let dir = std::env::temp_dir().join("goma_table_test");
        let _ = std::fs::remove_dir_all(&dir);
        let mut t = Table::new("panel", &["v"]);
        t.row(vec![num(3.0)]);
        let path = t.emit(Some(&dir)).unwrap().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# table: panel\n"));
        assert!(text.ends_with("3.000000\n"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn cdf_levels_are_uniform() {
        let pairs = empirical_cdf(&[3.0, 1.0, 2.0, 2.0]);
        let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        assert_eq!(values, vec![1.0, 2.0, 2.0, 3.0]);
        assert_eq!(pairs[0].1, 0.25);
        assert_eq!(pairs[3].1, 1.0);
    }
}
