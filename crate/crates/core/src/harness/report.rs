use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interval::Method;

const HEADER: [&str; 8] = [
    "scenario",
    "method",
    "horizon",
    "level",
    "coverage",
    "rel_width",
    "n_trials",
    "n_skips",
];

/// One (scenario, method, horizon, level) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow {
    pub scenario: String,
    pub method: Method,
    pub horizon: usize,
    pub level: f64,
    /// Share of evaluated trials whose interval held the target; `None` when
    /// every trial was skipped.
    pub coverage: Option<f64>,
    /// `None` when undefined (zero target range or no evaluated trials).
    pub rel_width: Option<f64>,
    /// Trials evaluated.
    pub n_trials: usize,
    /// Trials in which the method failed.
    pub n_skips: usize,
    /// Raw median width; not part of the CSV schema.
    pub median_width: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoverageReport {
    pub rows: Vec<CoverageRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "text" | "table" => Ok(ReportFormat::Text),
            _ => Err(Error::invalid(format!("unknown report format `{s}`"))),
        }
    }
}

fn opt4(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_default()
}

fn parse_opt(cell: &str, row: usize, name: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse().map(Some).map_err(|_| Error::Parse {
        row,
        msg: format!("bad {name} `{cell}`"),
    })
}

fn parse_cell<T: FromStr>(cell: &str, row: usize, name: &str) -> Result<T> {
    cell.parse().map_err(|_| Error::Parse {
        row,
        msg: format!("bad {name} `{cell}`"),
    })
}

impl CoverageReport {
    pub fn get(&self, scenario: &str, method: Method, horizon: usize, level: f64) -> Option<&CoverageRow> {
        self.rows.iter().find(|r| {
            r.scenario == scenario && r.method == method && r.horizon == horizon && r.level == level
        })
    }

    fn check_nonempty(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::invalid("report has no rows"));
        }
        Ok(())
    }

    /// CSV with header `scenario,method,horizon,level,coverage,rel_width,n_trials,n_skips`;
    /// coverage and relative width at 4 decimals, undefined values empty.
    pub fn to_csv(&self) -> Result<String> {
        self.check_nonempty()?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::numerical(format!("csv encoding: {e}"));
        w.write_record(HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.scenario.clone(),
                r.method.to_string(),
                r.horizon.to_string(),
                r.level.to_string(),
                opt4(r.coverage),
                opt4(r.rel_width),
                r.n_trials.to_string(),
                r.n_skips.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::numerical(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse { row: 1, msg: e.to_string() })?;
        if headers.iter().ne(HEADER) {
            return Err(Error::Parse {
                row: 1,
                msg: format!("expected header {}", HEADER.join(",")),
            });
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse {
                row: e.position().map_or(0, |p| p.line() as usize),
                msg: e.to_string(),
            })?;
            let row = record.position().map_or(0, |p| p.line() as usize);
            let method = record[1]
                .parse()
                .map_err(|e: Error| Error::Parse { row, msg: e.to_string() })?;
            rows.push(CoverageRow {
                scenario: record[0].to_string(),
                method,
                horizon: parse_cell(&record[2], row, "horizon")?,
                level: parse_cell(&record[3], row, "level")?,
                coverage: parse_opt(&record[4], row, "coverage")?,
                rel_width: parse_opt(&record[5], row, "rel_width")?,
                n_trials: parse_cell(&record[6], row, "n_trials")?,
                n_skips: parse_cell(&record[7], row, "n_skips")?,
                median_width: None,
            });
        }
        Ok(CoverageReport { rows })
    }

    /// One block per (scenario, level): methods down, horizons across, each
    /// cell `coverage% (relative width)`.
    pub fn to_text(&self) -> Result<String> {
        self.check_nonempty()?;
        let mut out = String::new();
        let mut blocks: Vec<(&str, f64)> = Vec::new();
        for r in &self.rows {
            if !blocks.iter().any(|&(s, l)| s == r.scenario && l == r.level) {
                blocks.push((&r.scenario, r.level));
            }
        }
        for (scenario, level) in blocks {
            let cells: Vec<&CoverageRow> = self
                .rows
                .iter()
                .filter(|r| r.scenario == scenario && r.level == level)
                .collect();
            let horizons: BTreeSet<usize> = cells.iter().map(|r| r.horizon).collect();
            let mut methods: Vec<Method> = Vec::new();
            for r in &cells {
                if !methods.contains(&r.method) {
                    methods.push(r.method);
                }
            }
            let _ = writeln!(out, "{scenario}, level {:.0}%", level * 100.0);
            let _ = write!(out, "{:<14}", "method");
            for h in &horizons {
                let _ = write!(out, "{:>16}", format!("m={h}"));
            }
            out.push('\n');
            for method in methods {
                let _ = write!(out, "{:<14}", method.name());
                for &h in &horizons {
                    let cell = cells
                        .iter()
                        .find(|r| r.method == method && r.horizon == h)
                        .map(|r| {
                            let cov = r.coverage.map_or("-".into(), |c| format!("{:.2}", c * 100.0));
                            let w = r.rel_width.map_or("-".into(), |w| format!("{w:.2}"));
                            format!("{cov} ({w})")
                        })
                        .unwrap_or_default();
                    let _ = write!(out, "{cell:>16}");
                }
                out.push('\n');
            }
            let skips: usize = cells.iter().map(|r| r.n_skips).sum();
            if skips > 0 {
                let _ = writeln!(out, "skipped method-trials: {skips}");
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Text => self.to_text(),
        }
    }

    /// Writes the rendered report to `path`.
    pub fn write(&self, path: &Path, format: ReportFormat) -> Result<()> {
        let text = self.render(format)?;
        std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(method: Method, horizon: usize, level: f64) -> CoverageRow {
        CoverageRow {
            scenario: "short-light".into(),
            method,
            horizon,
            level,
            coverage: Some(0.780_649),
            rel_width: Some(0.912_345),
            n_trials: 2000,
            n_skips: 0,
            median_width: Some(1.5),
        }
    }

    #[test]
    fn empty_report_is_an_error() {
        let r = CoverageReport::default();
        assert!(r.to_csv().is_err());
        assert!(r.to_text().is_err());
    }

    #[test]
    fn one_cell_is_header_plus_row() {
        let r = CoverageReport {
            rows: vec![row(Method::KernelBoot, 130, 0.9)],
        };
        let csv = r.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], HEADER.join(","));
        assert_eq!(lines[1], "short-light,kernel-boot,130,0.9,0.7806,0.9123,2000,0");
    }

    #[test]
    fn csv_round_trip() {
        let mut r = CoverageReport {
            rows: vec![row(Method::KernelBoot, 130, 0.9), row(Method::Naive, 20, 0.67)],
        };
        r.rows[1].rel_width = None;
        r.rows[1].n_skips = 4;
        let csv = r.to_csv().unwrap();
        let parsed = CoverageReport::from_csv(&csv).unwrap();
        assert_eq!(parsed.to_csv().unwrap(), csv);
        assert_eq!(parsed.rows[1].rel_width, None);
        assert_eq!(CoverageReport::from_csv(&parsed.to_csv().unwrap()).unwrap(), parsed);
    }

    #[test]
    fn parse_errors_carry_row() {
        let bad = format!("{}\nx,naive,20,0.9,abc,,10,0\n", HEADER.join(","));
        assert!(matches!(
            CoverageReport::from_csv(&bad),
            Err(Error::Parse { row: 2, .. })
        ));
        assert!(CoverageReport::from_csv("a,b\n").is_err());
    }

    #[test]
    fn text_table_layout() {
        let r = CoverageReport {
            rows: vec![row(Method::KernelBoot, 20, 0.9), row(Method::KernelBoot, 130, 0.9)],
        };
        let text = r.to_text().unwrap();
        assert!(text.starts_with("short-light, level 90%"));
        assert!(text.contains("m=20") && text.contains("m=130"));
        assert!(text.contains("78.06 (0.91)"));
    }

    #[test]
    fn write_reports_path_on_failure() {
        let r = CoverageReport {
            rows: vec![row(Method::Naive, 1, 0.9)],
        };
        match r.write(Path::new("/nonexistent/dir/out.csv"), ReportFormat::Csv) {
            Err(Error::Io { path, .. }) => assert!(path.ends_with("out.csv")),
            other => panic!("{other:?}"),
        }
    }
}
