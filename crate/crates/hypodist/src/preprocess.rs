//! Spectrum ingestion and preprocessing.
//!
//! Raw spectra arrive on large irregular grids. The pipeline applies, in
//! this fixed order: domain restriction, threshold denoising,
//! Nadaraya-Watson resampling onto a common uniform grid, and
//! normalization. The output is a [`LabeledSample`] ready for
//! classification, plus a line-per-spectrum provenance log.
//!
//! File formats: one CSV per spectrum with header `t,value` (rows may be
//! unsorted; duplicate abscissae are rejected), and an optional labels CSV
//! with header `id,label` where `id` is the spectrum file stem and the
//! label is 0 or 1.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::classify::LabeledSample;
use crate::error::{Error, Result};
use crate::grid::{uniform_grid, GridFunction};

/// A raw spectrum: strictly increasing abscissae (e.g. mass/charge) with
/// non-negative intensities, an identifier, and an optional class label.
#[derive(Debug, Clone)]
pub struct RawSpectrum {
    pub id: String,
    abscissae: Vec<f64>,
    intensities: Vec<f64>,
    pub label: Option<u8>,
}

impl RawSpectrum {
    pub fn new(id: impl Into<String>, abscissae: Vec<f64>, intensities: Vec<f64>) -> Result<Self> {
        if abscissae.len() != intensities.len() {
            return Err(Error::InvalidArgument(format!(
                "{} abscissae but {} intensities",
                abscissae.len(),
                intensities.len()
            )));
        }
        if abscissae.is_empty() {
            return Err(Error::InvalidArgument("empty spectrum".into()));
        }
        for (i, &t) in abscissae.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "abscissa[{i}] = {t} is not finite"
                )));
            }
            if i > 0 && t <= abscissae[i - 1] {
                return Err(Error::InvalidArgument(format!(
                    "abscissae not strictly increasing at index {i}"
                )));
            }
        }
        for (i, &v) in intensities.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "intensity[{i}] = {v} is not finite and non-negative"
                )));
            }
        }
        Ok(RawSpectrum {
            id: id.into(),
            abscissae,
            intensities,
            label: None,
        })
    }

    pub fn len(&self) -> usize {
        self.abscissae.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }
}

/// Final scaling stage of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Divide every value by the spectrum maximum.
    Max,
    /// Affinely map both axes onto the unit square.
    UnitSquare,
    None,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Max => "max",
            Normalization::UnitSquare => "unit-square",
            Normalization::None => "none",
        })
    }
}

impl FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "max" => Ok(Normalization::Max),
            "unit-square" => Ok(Normalization::UnitSquare),
            "none" => Ok(Normalization::None),
            other => Err(format!(
                "unknown normalization '{other}' (expected max, unit-square or none)"
            )),
        }
    }
}

/// Nadaraya-Watson resampling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothParams {
    pub target_grid_size: usize,
    pub bandwidth: f64,
}

/// Pipeline configuration. Stages without parameters are skipped: no
/// `restrict` means no domain restriction, `threshold` 0 leaves every
/// value in place, no `smooth` keeps the raw abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub restrict: Option<(f64, f64)>,
    pub threshold: f64,
    pub smooth: Option<SmoothParams>,
    pub normalization: Normalization,
}

impl PipelineConfig {
    /// A configuration that applies no stage at all.
    pub fn neutral() -> Self {
        PipelineConfig {
            restrict: None,
            threshold: 0.0,
            smooth: None,
            normalization: Normalization::None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((lo, hi)) = self.restrict {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::InvalidArgument(format!(
                    "restriction needs lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        if !self.threshold.is_finite() || self.threshold < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "threshold {} must be non-negative",
                self.threshold
            )));
        }
        if let Some(sm) = &self.smooth {
            if sm.target_grid_size < 2 {
                return Err(Error::InvalidArgument(
                    "target grid size must be at least 2".into(),
                ));
            }
            if !sm.bandwidth.is_finite() || sm.bandwidth <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "bandwidth {} must be positive",
                    sm.bandwidth
                )));
            }
        }
        Ok(())
    }

    /// Parse a `key = value` configuration, one pair per line, `#` starting
    /// a comment. Keys: `lo`, `hi`, `threshold`, `target_grid_size`,
    /// `bandwidth`, `normalization`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lo = None;
        let mut hi = None;
        let mut threshold = 0.0;
        let mut target_grid_size = None;
        let mut bandwidth = None;
        let mut normalization = Normalization::None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "pipeline config line {}: expected key = value, got '{line}'",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                Error::InvalidArgument(format!(
                    "pipeline config line {}: bad {what} '{value}'",
                    lineno + 1
                ))
            };
            match key {
                "lo" => lo = Some(value.parse::<f64>().map_err(|_| bad("number"))?),
                "hi" => hi = Some(value.parse::<f64>().map_err(|_| bad("number"))?),
                "threshold" => threshold = value.parse::<f64>().map_err(|_| bad("number"))?,
                "target_grid_size" => {
                    target_grid_size = Some(value.parse::<usize>().map_err(|_| bad("integer"))?)
                }
                "bandwidth" => bandwidth = Some(value.parse::<f64>().map_err(|_| bad("number"))?),
                "normalization" => normalization = value.parse().map_err(Error::InvalidArgument)?,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "pipeline config line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }

        let restrict = match (lo, hi) {
            (Some(lo), Some(hi)) => Some((lo, hi)),
            (None, None) => None,
            _ => {
                return Err(Error::InvalidArgument(
                    "pipeline config sets only one of lo/hi".into(),
                ))
            }
        };
        let smooth = match (target_grid_size, bandwidth) {
            (Some(target_grid_size), Some(bandwidth)) => Some(SmoothParams {
                target_grid_size,
                bandwidth,
            }),
            (None, None) => None,
            _ => {
                return Err(Error::InvalidArgument(
                    "pipeline config sets only one of target_grid_size/bandwidth".into(),
                ))
            }
        };
        let config = PipelineConfig {
            restrict,
            threshold,
            smooth,
            normalization,
        };
        config.validate()?;
        Ok(config)
    }
}

fn open_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        other => Error::Parse {
            path: path.to_owned(),
            line: 0,
            message: format!("{other:?}"),
        },
    }
}

fn parse_field(path: &Path, line: u64, name: &str, raw: &str) -> Result<f64> {
    raw.trim().parse::<f64>().map_err(|_| Error::Parse {
        path: path.to_owned(),
        line,
        message: format!("non-numeric {name} field '{raw}'"),
    })
}

/// Read one spectrum from a `t,value` CSV file. Rows are sorted by `t`;
/// duplicate abscissae are reported with their line number.
pub fn read_spectrum_csv(path: &Path) -> Result<RawSpectrum> {
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned());
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| open_error(path, e))?;
    let headers = reader.headers().map_err(|e| Error::Parse {
        path: path.to_owned(),
        line: 1,
        message: e.to_string(),
    })?;
    let names: Vec<String> = headers.iter().map(|h| h.trim().to_owned()).collect();
    if names != ["t", "value"] {
        return Err(Error::Parse {
            path: path.to_owned(),
            line: 1,
            message: format!("expected header 't,value', got '{}'", names.join(",")),
        });
    }

    let mut rows: Vec<(f64, f64, u64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            path: path.to_owned(),
            line: e.position().map_or(0, csv::Position::line),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, csv::Position::line);
        if record.len() != 2 {
            return Err(Error::Parse {
                path: path.to_owned(),
                line,
                message: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let t = parse_field(path, line, "t", &record[0])?;
        let v = parse_field(path, line, "value", &record[1])?;
        rows.push((t, v, line));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in rows.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: w[1].2,
                message: format!("duplicate abscissa t = {}", w[1].0),
            });
        }
    }
    let abscissae: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let intensities: Vec<f64> = rows.iter().map(|r| r.1).collect();
    RawSpectrum::new(id, abscissae, intensities).map_err(|e| match e {
        Error::InvalidArgument(message) => Error::Parse {
            path: path.to_owned(),
            line: 0,
            message,
        },
        other => other,
    })
}

/// Read an `id,label` CSV; labels must be 0 or 1 and ids unique.
pub fn read_labels_csv(path: &Path) -> Result<HashMap<String, u8>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| open_error(path, e))?;
    let headers = reader.headers().map_err(|e| Error::Parse {
        path: path.to_owned(),
        line: 1,
        message: e.to_string(),
    })?;
    let names: Vec<String> = headers.iter().map(|h| h.trim().to_owned()).collect();
    if names != ["id", "label"] {
        return Err(Error::Parse {
            path: path.to_owned(),
            line: 1,
            message: format!("expected header 'id,label', got '{}'", names.join(",")),
        });
    }
    let mut labels = HashMap::new();
    let mut lines = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            path: path.to_owned(),
            line: e.position().map_or(0, csv::Position::line),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, csv::Position::line);
        if record.len() != 2 {
            return Err(Error::Parse {
                path: path.to_owned(),
                line,
                message: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let id = record[0].trim().to_owned();
        let label: u8 = record[1].trim().parse().map_err(|_| Error::Parse {
            path: path.to_owned(),
            line,
            message: format!("bad label '{}'", &record[1]),
        })?;
        if label > 1 {
            return Err(Error::Parse {
                path: path.to_owned(),
                line,
                message: format!("label {label} is not 0 or 1"),
            });
        }
        if labels.insert(id.clone(), label).is_some() {
            return Err(Error::Parse {
                path: path.to_owned(),
                line,
                message: format!("duplicate id '{id}'"),
            });
        }
        lines.insert(id, line);
    }
    Ok(labels)
}

/// Load spectra from a directory of `*.csv` files (or a single file), with
/// labels attached from an optional `id,label` CSV. The labels file is
/// skipped if it lives inside the data directory. A label id that matches
/// no spectrum is an error.
pub fn load_spectra(path: &Path, labels_path: Option<&Path>) -> Result<Vec<RawSpectrum>> {
    let labels_canon = labels_path.and_then(|p| p.canonicalize().ok());
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut fs: Vec<PathBuf> = fs::read_dir(path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "csv"))
            .filter(|p| match (&labels_canon, p.canonicalize()) {
                (Some(l), Ok(c)) => c != *l,
                _ => true,
            })
            .collect();
        fs.sort();
        if fs.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "no .csv spectra found in {}",
                path.display()
            )));
        }
        fs
    } else {
        vec![path.to_owned()]
    };

    let mut spectra: Vec<RawSpectrum> = files
        .iter()
        .map(|f| read_spectrum_csv(f))
        .collect::<Result<_>>()?;

    if let Some(labels_path) = labels_path {
        let labels = read_labels_csv(labels_path)?;
        let mut seen: HashMap<&str, ()> = HashMap::new();
        for s in &mut spectra {
            if let Some(&l) = labels.get(&s.id) {
                s.label = Some(l);
            }
            seen.insert(s.id.as_str(), ());
        }
        for id in labels.keys() {
            if !seen.contains_key(id.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "unknown label id '{id}' in {}: no such spectrum",
                    labels_path.display()
                )));
            }
        }
    }
    Ok(spectra)
}

/// Keep exactly the points with lo <= t <= hi (bounds inclusive).
pub fn restrict_domain(s: &RawSpectrum, lo: f64, hi: f64) -> Result<RawSpectrum> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidArgument(format!(
            "restriction needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    let kept: Vec<(f64, f64)> = s
        .abscissae
        .iter()
        .zip(&s.intensities)
        .filter(|(&t, _)| lo <= t && t <= hi)
        .map(|(&t, &v)| (t, v))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyRestriction);
    }
    let mut out = RawSpectrum::new(
        s.id.clone(),
        kept.iter().map(|p| p.0).collect(),
        kept.iter().map(|p| p.1).collect(),
    )?;
    out.label = s.label;
    Ok(out)
}

/// Set intensities strictly below `tau` to zero; a value equal to `tau`
/// survives.
pub fn threshold_denoise(s: &RawSpectrum, tau: f64) -> Result<RawSpectrum> {
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "threshold {tau} must be non-negative"
        )));
    }
    let intensities = s
        .intensities
        .iter()
        .map(|&v| if v < tau { 0.0 } else { v })
        .collect();
    let mut out = RawSpectrum::new(s.id.clone(), s.abscissae.clone(), intensities)?;
    out.label = s.label;
    Ok(out)
}

fn nearest_value(abscissae: &[f64], values: &[f64], u: f64) -> f64 {
    let idx = abscissae.partition_point(|&t| t < u);
    if idx == 0 {
        return values[0];
    }
    if idx == abscissae.len() || (u - abscissae[idx - 1]) <= (abscissae[idx] - u) {
        values[idx - 1]
    } else {
        values[idx]
    }
}

/// Nadaraya-Watson estimate of `s` on an explicit target grid, with a
/// Gaussian kernel of the given bandwidth:
/// `sum_i K((u - t_i)/h) y_i / sum_i K((u - t_i)/h)`, `K(u) = exp(-u^2/2)`.
/// Where every weight underflows to zero, the nearest input value is used.
pub fn nw_smooth_onto(s: &RawSpectrum, grid: &[f64], bandwidth: f64) -> Result<GridFunction> {
    if !bandwidth.is_finite() || bandwidth <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "bandwidth {bandwidth} must be positive"
        )));
    }
    let values: Vec<f64> = grid
        .iter()
        .map(|&u| {
            let mut num = 0.0;
            let mut den = 0.0;
            for (&t, &y) in s.abscissae.iter().zip(&s.intensities) {
                let z = (u - t) / bandwidth;
                let w = (-0.5 * z * z).exp();
                num += w * y;
                den += w;
            }
            if den > 0.0 {
                (num / den).max(0.0)
            } else {
                nearest_value(&s.abscissae, &s.intensities, u)
            }
        })
        .collect();
    GridFunction::new(grid.to_vec(), values)
}

/// Nadaraya-Watson resampling onto a uniform grid spanning the spectrum's
/// own abscissa range.
pub fn nw_smooth(s: &RawSpectrum, target_grid_size: usize, bandwidth: f64) -> Result<GridFunction> {
    if target_grid_size < 2 {
        return Err(Error::InvalidArgument(
            "target grid size must be at least 2".into(),
        ));
    }
    let lo = s.abscissae[0];
    let hi = s.abscissae[s.len() - 1];
    let grid = uniform_grid(lo, hi, target_grid_size);
    nw_smooth_onto(s, &grid, bandwidth)
}

/// Divide every value by the maximum; the resulting maximum is exactly 1.
pub fn max_normalize(f: &GridFunction) -> Result<GridFunction> {
    let peak = crate::metric::max_value(f);
    if peak <= 0.0 {
        return Err(Error::ZeroSpectrum);
    }
    let values = f.values().iter().map(|&v| v / peak).collect();
    GridFunction::new(f.grid().to_vec(), values)
}

fn rescale_unit_square_parts(grid: &[f64], values: &[f64]) -> Result<GridFunction> {
    if grid.len() < 2 {
        return Err(Error::InvalidArgument(
            "unit-square rescaling needs at least 2 points".into(),
        ));
    }
    let (t0, t1) = (grid[0], grid[grid.len() - 1]);
    let span = t1 - t0;
    let last = grid.len() - 1;
    let new_grid: Vec<f64> = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            if i == 0 {
                0.0
            } else if i == last {
                1.0
            } else {
                (t - t0) / span
            }
        })
        .collect();
    let min_y = values.iter().copied().fold(f64::INFINITY, f64::min);
    let shift = if min_y < 0.0 { -min_y } else { 0.0 };
    let max_y = values
        .iter()
        .map(|&v| v + shift)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_y <= 0.0 {
        return Err(Error::ZeroSpectrum);
    }
    let new_values = values.iter().map(|&v| (v + shift) / max_y).collect();
    GridFunction::new(new_grid, new_values)
}

/// Affinely map abscissae onto [0, 1] and intensities onto [0, 1], so the
/// whole graph fits the unit square. The grid endpoints become exactly 0
/// and 1.
pub fn rescale_unit_square(s: &RawSpectrum) -> Result<GridFunction> {
    rescale_unit_square_parts(&s.abscissae, &s.intensities)
}

/// Result of [`run_pipeline`]: the processed sample, spectrum identifiers
/// in sample order, and one provenance line per spectrum.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub sample: LabeledSample,
    pub ids: Vec<String>,
    pub provenance: Vec<String>,
}

/// Run the pipeline stages in their fixed order on every spectrum:
/// restrict, denoise, smooth, normalize.
///
/// When smoothing is configured, all spectra are resampled onto one shared
/// uniform grid spanning the restriction interval (or, without a
/// restriction, the overall abscissa range of the input set). Without
/// smoothing the raw grids are kept and must already agree. Every spectrum
/// must carry a label.
pub fn run_pipeline(spectra: &[RawSpectrum], config: &PipelineConfig) -> Result<PipelineOutput> {
    config.validate()?;
    if spectra.is_empty() {
        return Err(Error::InvalidArgument("no spectra to process".into()));
    }
    let common_grid: Option<Vec<f64>> = config.smooth.as_ref().map(|sm| {
        let (lo, hi) = config.restrict.unwrap_or_else(|| {
            let lo = spectra
                .iter()
                .map(|s| s.abscissae[0])
                .fold(f64::INFINITY, f64::min);
            let hi = spectra
                .iter()
                .map(|s| s.abscissae[s.len() - 1])
                .fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        });
        uniform_grid(lo, hi, sm.target_grid_size)
    });

    let processed: Vec<(GridFunction, Option<u8>, String)> = spectra
        .par_iter()
        .map(|s| process_one(s, config, common_grid.as_deref()))
        .collect::<Result<_>>()?;

    let mut functions = Vec::with_capacity(processed.len());
    let mut labels = Vec::with_capacity(processed.len());
    let mut ids = Vec::with_capacity(processed.len());
    let mut provenance = Vec::with_capacity(processed.len());
    for ((f, label, log), s) in processed.into_iter().zip(spectra) {
        let label = label
            .ok_or_else(|| Error::InvalidArgument("missing label".into()).for_spectrum(&s.id))?;
        functions.push(f);
        labels.push(label);
        ids.push(s.id.clone());
        provenance.push(log);
    }
    let sample = LabeledSample::new(functions, labels)?;
    Ok(PipelineOutput {
        sample,
        ids,
        provenance,
    })
}

fn process_one(
    s: &RawSpectrum,
    config: &PipelineConfig,
    common_grid: Option<&[f64]>,
) -> Result<(GridFunction, Option<u8>, String)> {
    let mut log = format!("{}: {} points", s.id, s.len());
    let annotate = |e: Error| e.for_spectrum(&s.id);

    let restricted = match config.restrict {
        Some((lo, hi)) => {
            let r = restrict_domain(s, lo, hi).map_err(annotate)?;
            log.push_str(&format!("; restrict [{lo}, {hi}] kept {}", r.len()));
            r
        }
        None => s.clone(),
    };

    let denoised = {
        let d = threshold_denoise(&restricted, config.threshold).map_err(annotate)?;
        if config.threshold > 0.0 {
            let zeroed = restricted
                .intensities()
                .iter()
                .zip(d.intensities())
                .filter(|(&before, &after)| before != after)
                .count();
            log.push_str(&format!(
                "; denoise tau={} zeroed {zeroed}",
                config.threshold
            ));
        }
        d
    };

    let smoothed: GridFunction = match (&config.smooth, common_grid) {
        (Some(sm), Some(grid)) => {
            let f = nw_smooth_onto(&denoised, grid, sm.bandwidth).map_err(annotate)?;
            log.push_str(&format!(
                "; nw-smooth n={} h={}",
                sm.target_grid_size, sm.bandwidth
            ));
            f
        }
        _ => GridFunction::new(
            denoised.abscissae().to_vec(),
            denoised.intensities().to_vec(),
        )
        .map_err(annotate)?,
    };

    let normalized = match config.normalization {
        Normalization::Max => {
            let peak = crate::metric::max_value(&smoothed);
            let f = max_normalize(&smoothed).map_err(annotate)?;
            log.push_str(&format!("; normalize max (peak {peak})"));
            f
        }
        Normalization::UnitSquare => {
            let f =
                rescale_unit_square_parts(smoothed.grid(), smoothed.values()).map_err(annotate)?;
            log.push_str("; normalize unit-square");
            f
        }
        Normalization::None => smoothed,
    };

    Ok((normalized, s.label, log))
}

/// Write a grid function as `t,value` CSV.
pub fn write_spectrum_csv(path: &Path, f: &GridFunction) -> Result<()> {
    let mut out = String::with_capacity(f.len() * 16 + 8);
    out.push_str("t,value\n");
    for (t, v) in f.grid().iter().zip(f.values()) {
        out.push_str(&format!("{t},{v}\n"));
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}
