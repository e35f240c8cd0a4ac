use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::interval::Method;
use crate::rng::{derive_seed, stream_rng};
use crate::series::{mean, Series};

use super::{check_levels, map_jobs, method_stream, tally, CoverageReport, Evaluator, MethodSettings, TrialHorizon};

#[derive(Debug, Clone, PartialEq)]
pub struct PoosConfig {
    pub csv_path: PathBuf,
    pub column: String,
    /// Rolling window length.
    pub t: usize,
    pub horizons: Vec<usize>,
    pub levels: Vec<f64>,
    /// Distance between window origins; `None` uses the horizon, so the
    /// evaluated targets never overlap.
    pub stride: Option<usize>,
    pub methods: Vec<Method>,
    pub base_seed: u64,
    pub settings: MethodSettings,
}

impl Default for PoosConfig {
    fn default() -> Self {
        PoosConfig {
            csv_path: PathBuf::new(),
            column: String::new(),
            t: 260,
            horizons: vec![20],
            levels: vec![0.90, 0.67],
            stride: None,
            methods: Method::ZXW.to_vec(),
            base_seed: 1,
            settings: MethodSettings::default(),
        }
    }
}

/// Reads one numeric column of a headed, comma-separated file. Blank and
/// non-numeric cells (including `NA`) are rejected with their line number.
pub fn load_csv_column(path: &Path, column: &str) -> Result<Series> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::open(path).map_err(io_err)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let headers = reader.headers().map_err(|e| csv_error(e, path))?.clone();
    let idx = headers
        .iter()
        .position(|h| h.trim() == column)
        .ok_or_else(|| Error::invalid(format!("column `{column}` not found in {}", path.display())))?;
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(e, path))?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let cell = record.get(idx).unwrap_or("").trim();
        let v: f64 = cell.parse().map_err(|_| Error::Parse {
            row,
            msg: format!("`{cell}` in column `{column}` is not a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                row,
                msg: format!("non-finite value `{cell}`"),
            });
        }
        values.push(v);
    }
    Series::new(values)
}

fn csv_error(e: csv::Error, path: &Path) -> Error {
    let row = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        kind => Error::Parse {
            row,
            msg: format!("{kind:?}"),
        },
    }
}

/// Rolling-origin evaluation of the column named in `cfg`.
pub fn run_poos(cfg: &PoosConfig) -> Result<CoverageReport> {
    let s = load_csv_column(&cfg.csv_path, &cfg.column)?;
    run_poos_series(&s, &format!("poos:{}", cfg.column), cfg)
}

/// Rolling-origin evaluation on an in-memory series: for horizon `m`, window
/// `k` covers `s[k*stride .. k*stride + t]` and its target is the mean of
/// the following `m` values.
pub fn run_poos_series(s: &Series, label: &str, cfg: &PoosConfig) -> Result<CoverageReport> {
    if cfg.t == 0 || cfg.horizons.is_empty() || cfg.methods.is_empty() {
        return Err(Error::invalid("window, horizons and methods must be non-empty"));
    }
    check_levels(&cfg.levels)?;
    cfg.settings.validate()?;
    let mut jobs = Vec::new();
    for (h, &m) in cfg.horizons.iter().enumerate() {
        let stride = cfg.stride.unwrap_or(m);
        if m == 0 || stride == 0 {
            return Err(Error::invalid("horizon and stride must be >= 1"));
        }
        if s.len() < cfg.t + m {
            return Err(Error::invalid(format!(
                "{} observations cannot hold a window of {} plus horizon {m}",
                s.len(),
                cfg.t
            )));
        }
        let n = (s.len() - cfg.t - m) / stride + 1;
        jobs.extend((0..n).map(|k| (h, k, k * stride)));
    }
    log::info!("poos: {} windows", jobs.len());

    let results: Vec<(usize, TrialHorizon)> = map_jobs(jobs.len(), |j| {
        let (h, k, start) = jobs[j];
        let m = cfg.horizons[h];
        let window = Series::with_origin(
            s[start..start + cfg.t].to_vec(),
            s.origin_index() + start as i64,
        )
        .expect("finite slice of a valid series");
        let eval = Evaluator::new(&window, &cfg.settings);
        let seed = derive_seed(cfg.base_seed, k as u64);
        let outcomes = cfg
            .methods
            .iter()
            .map(|&method| {
                let mut rng = stream_rng(seed, method_stream(h, method));
                eval.intervals(method, m, &cfg.levels, &mut rng)
                    .map_err(|e| e.to_string())
            })
            .collect();
        let end = start + cfg.t;
        (
            h,
            TrialHorizon {
                target: mean(&s[end..end + m]),
                outcomes,
            },
        )
    });

    let mut rows = Vec::new();
    for (h, &m) in cfg.horizons.iter().enumerate() {
        let per_h: Vec<&TrialHorizon> = results
            .iter()
            .filter(|(hh, _)| *hh == h)
            .map(|(_, t)| t)
            .collect();
        rows.extend(tally(label, &cfg.methods, &cfg.levels, m, &per_h)?);
    }
    Ok(CoverageReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_named_column() {
        let f = write_csv("date,y\n2020-01-01,1.5\n2020-01-02,-2\n2020-01-03,3e-1\n");
        let s = load_csv_column(f.path(), "y").unwrap();
        assert_eq!(s.values(), &[1.5, -2.0, 0.3]);
    }

    #[test]
    fn rejects_bad_cells_with_row() {
        let f = write_csv("y\n1\nNA\n3\n");
        match load_csv_column(f.path(), "y") {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 3),
            other => panic!("{other:?}"),
        }
        let f = write_csv("x,y\n1,2\n3,\n");
        assert!(matches!(load_csv_column(f.path(), "y"), Err(Error::Parse { row: 3, .. })));
        let f = write_csv("x\n1\n");
        assert!(matches!(load_csv_column(f.path(), "y"), Err(Error::InvalidInput(_))));
        assert!(matches!(
            load_csv_column(Path::new("/nonexistent/file.csv"), "y"),
            Err(Error::Io { .. })
        ));
    }

    fn noise(n: usize) -> Series {
        use rand::Rng;
        let mut rng = crate::rng::rng_from_seed(5);
        Series::new((0..n).map(|_| rng.random::<f64>() - 0.5).collect()).unwrap()
    }

    #[test]
    fn stride_arithmetic() {
        let cfg = PoosConfig {
            t: 100,
            horizons: vec![20],
            methods: vec![Method::CltOriginal],
            ..PoosConfig::default()
        };
        let report = run_poos_series(&noise(160), "x", &cfg).unwrap();
        assert!(report.rows.iter().all(|r| r.n_trials + r.n_skips == 3));
        let report = run_poos_series(&noise(179), "x", &cfg).unwrap();
        assert!(report.rows.iter().all(|r| r.n_trials + r.n_skips == 3));
        assert!(run_poos_series(&noise(119), "x", &cfg).is_err());
    }
}
