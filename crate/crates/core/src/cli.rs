//! Batch commands behind the `volrad` binary.
//!
//! Every command is deterministic given its inputs and settings. Output files
//! are CSV with a leading `#` comment line that records the command and the
//! fully resolved settings, and are written atomically (temp file + rename).
//!
//! Settings precedence: command-line flags, then a JSON config file, then
//! defaults (r_max 20, 10% of the pixels as centers, m 10, seed 0).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classify::{compare_methods, comparison_csv, leave_one_out, ComparisonRow};
use crate::error::{Error, Result};
use crate::imgio::{ingest_dataset, load_pgm, GrayImage, LabeledDataset};
use crate::pipeline::{extract, extract_all, Method, VrfdParams};
use crate::signature::{make_signature, Signature};
use crate::baselines::FeatureVector;
use crate::vrfd::{log_log, CenterCount};

/// Partially specified settings, as read from flags or a JSON config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub r_max: Option<u32>,
    pub center_fraction: Option<f64>,
    pub n_centers: Option<usize>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
    /// `vrfd`, `fourier`, `glcm`, `gabor` or `all`.
    pub method: Option<String>,
    /// `WxH`
    pub tile: Option<String>,
    pub out: Option<PathBuf>,
    pub z_scale: Option<u32>,
}

impl RunConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Input {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` win. Setting either center field in `over`
    /// replaces both center fields of `self`.
    pub fn overlay(self, over: RunConfig) -> RunConfig {
        let centers_overridden = over.center_fraction.is_some() || over.n_centers.is_some();
        RunConfig {
            r_max: over.r_max.or(self.r_max),
            center_fraction: if centers_overridden { over.center_fraction } else { self.center_fraction },
            n_centers: if centers_overridden { over.n_centers } else { self.n_centers },
            m: over.m.or(self.m),
            seed: over.seed.or(self.seed),
            method: over.method.or(self.method),
            tile: over.tile.or(self.tile),
            out: over.out.or(self.out),
            z_scale: over.z_scale.or(self.z_scale),
        }
    }

    pub fn resolve(&self) -> Result<Settings> {
        let defaults = VrfdParams::default();
        let centers = match (self.n_centers, self.center_fraction) {
            (Some(_), Some(_)) => {
                return Err(Error::Config("set either n_centers or center_fraction, not both".into()))
            }
            (Some(0), None) => return Err(Error::Config("n_centers must be at least 1".into())),
            (Some(n), None) => CenterCount::Fixed(n),
            (None, Some(f)) if !(f > 0.0 && f <= 1.0) => {
                return Err(Error::Config(format!("center_fraction must be in (0, 1], got {f}")))
            }
            (None, Some(f)) => CenterCount::Fraction(f),
            (None, None) => defaults.centers,
        };
        let params = VrfdParams {
            r_max: self.r_max.unwrap_or(defaults.r_max),
            centers,
            m: self.m.unwrap_or(defaults.m),
            seed: self.seed.unwrap_or(defaults.seed),
            z_scale: self.z_scale.unwrap_or(defaults.z_scale),
        };
        if params.r_max == 0 {
            return Err(Error::Config("r_max must be at least 1".into()));
        }
        if params.m < 2 {
            return Err(Error::Config("m must be at least 2".into()));
        }
        if params.z_scale == 0 {
            return Err(Error::Config("z_scale must be at least 1".into()));
        }
        let methods = match self.method.as_deref() {
            None => vec![Method::Vrfd],
            Some(s) if s.eq_ignore_ascii_case("all") => Method::ALL.to_vec(),
            Some(s) => s
                .split(',')
                .map(|m| m.trim().parse())
                .collect::<Result<Vec<Method>>>()?,
        };
        let tile = self.tile.as_deref().map(parse_tile).transpose()?;
        Ok(Settings {
            params,
            methods,
            tile,
            out: self.out.clone().unwrap_or_else(|| PathBuf::from(".")),
        })
    }
}

pub fn parse_tile(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("tile must look like WxH, got '{s}'"));
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let w: usize = w.trim().parse().map_err(|_| bad())?;
    let h: usize = h.trim().parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub params: VrfdParams,
    pub methods: Vec<Method>,
    pub tile: Option<(usize, usize)>,
    pub out: PathBuf,
}

impl Default for Settings {
    fn default() -> Self {
        RunConfig::default().resolve().expect("defaults are valid")
    }
}

impl Settings {
    /// Provenance line written at the top of every CSV.
    pub fn provenance(&self, command: &str) -> String {
        let (fraction, n_centers) = match self.params.centers {
            CenterCount::Fraction(f) => (Some(f), None),
            CenterCount::Fixed(n) => (None, Some(n)),
        };
        let record = RunConfig {
            r_max: Some(self.params.r_max),
            center_fraction: fraction,
            n_centers,
            m: Some(self.params.m),
            seed: Some(self.params.seed),
            method: Some(self.methods.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(",")),
            tile: self.tile.map(|(w, h)| format!("{w}x{h}")),
            out: None,
            z_scale: Some(self.params.z_scale),
        };
        format!(
            "# volrad {command} config={}",
            serde_json::to_string(&record).expect("config serializes")
        )
    }
}

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let out_err = |source| Error::Output {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(out_err)?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(|source| Error::Output { path: tmp.clone(), source })?;
    fs::rename(&tmp, path).map_err(out_err)
}

fn csv_file(provenance: &str, body: &str) -> Vec<u8> {
    format!("{provenance}\n{body}").into_bytes()
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".into())
}

/// Feature rows per image. The volume-radius method uses the signature layout
/// (`sample_name,class_id,m,alpha_*`); baselines use the feature layout with a
/// method column.
pub fn feature_csv(method: Method, m: usize, names: &[String], features: &[FeatureVector]) -> String {
    let d = features.first().map_or(0, FeatureVector::len);
    let mut out = if method == Method::Vrfd {
        Signature::csv_header(d)
    } else {
        FeatureVector::csv_header(d)
    };
    out.push('\n');
    for (name, f) in names.iter().zip(features) {
        let row = if method == Method::Vrfd {
            Signature {
                m,
                alphas: f.values.clone(),
            }
            .csv_row(name, None)
        } else {
            f.csv_row(name, None)
        };
        out.push_str(&row);
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureOutput {
    pub files: Vec<PathBuf>,
    pub features: Vec<(Method, Vec<FeatureVector>)>,
}

/// Computes features for each image. Writes `signatures.csv` for the
/// volume-radius method and `features_<method>.csv` for baselines; with
/// `curves`, also `<stem>.curve.csv` and `<stem>.curve.json` per image.
pub fn cmd_signature(images: &[PathBuf], settings: &Settings, curves: bool) -> Result<SignatureOutput> {
    if images.is_empty() {
        return Err(Error::InvalidParameter("no input images".into()));
    }
    let loaded: Vec<GrayImage> = images.iter().map(load_pgm).collect::<Result<_>>()?;
    let refs: Vec<&GrayImage> = loaded.iter().collect();
    let names: Vec<String> = images.iter().map(|p| file_label(p)).collect();
    let prov = settings.provenance("signature");
    let mut out = SignatureOutput {
        files: Vec::new(),
        features: Vec::new(),
    };
    for &method in &settings.methods {
        let features = extract_all(&refs, method, &settings.params)?;
        let path = match method {
            Method::Vrfd => settings.out.join("signatures.csv"),
            other => settings.out.join(format!("features_{other}.csv")),
        };
        write_atomic(&path, &csv_file(&prov, &feature_csv(method, settings.params.m, &names, &features)))?;
        out.files.push(path);
        out.features.push((method, features));
    }
    if curves {
        for (img, path) in loaded.iter().zip(images) {
            let curve = settings.params.volume_curve(img)?;
            let stem = file_stem(path);
            let csv_path = settings.out.join(format!("{stem}.curve.csv"));
            let json_path = settings.out.join(format!("{stem}.curve.json"));
            write_atomic(&csv_path, &csv_file(&prov, &curve.to_csv()))?;
            write_atomic(&json_path, curve.meta_json().as_bytes())?;
            out.files.push(csv_path);
            out.files.push(json_path);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionStats {
    /// `(seed, D)` per repeat.
    pub runs: Vec<(u64, f64)>,
    pub mean: f64,
    pub std: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Full-curve dimension estimated `repeats` times with seeds
/// `seed, seed + 1, ...`. Standard deviation uses the `n - 1` denominator.
pub fn dimension_stats(img: &GrayImage, params: &VrfdParams, repeats: usize) -> Result<DimensionStats> {
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    let runs = (0..repeats as u64)
        .map(|i| {
            let seed = params.seed.wrapping_add(i);
            VrfdParams { seed, ..*params }.dimension(img).map(|d| (seed, d))
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = runs.iter().map(|r| r.1).collect();
    let (mean, std) = mean_std(&values);
    Ok(DimensionStats { runs, mean, std })
}

/// Writes `dimension.csv` (`repeat,seed,D`).
pub fn cmd_dimension(image: &Path, settings: &Settings, repeats: usize) -> Result<DimensionStats> {
    let img = load_pgm(image)?;
    let stats = dimension_stats(&img, &settings.params, repeats)?;
    let mut body = String::from("repeat,seed,D\n");
    for (i, (seed, d)) in stats.runs.iter().enumerate() {
        let _ = writeln!(body, "{i},{seed},{d}");
    }
    write_atomic(
        &settings.out.join("dimension.csv"),
        &csv_file(&settings.provenance("dimension"), &body),
    )?;
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub fraction: f64,
    pub n_centers: usize,
    pub mean_d: f64,
    pub std_d: f64,
}

pub fn stability(img: &GrayImage, params: &VrfdParams, fractions: &[f64], repeats: usize) -> Result<Vec<StabilityRow>> {
    if fractions.is_empty() {
        return Err(Error::InvalidParameter("no center fractions given".into()));
    }
    fractions
        .iter()
        .map(|&f| {
            let p = VrfdParams {
                centers: CenterCount::Fraction(f),
                ..*params
            };
            let n_centers = p.plan().resolve(img.len())?;
            let stats = dimension_stats(img, &p, repeats)?;
            Ok(StabilityRow {
                fraction: f,
                n_centers,
                mean_d: stats.mean,
                std_d: stats.std,
            })
        })
        .collect()
}

/// Writes `stability.csv` (`fraction,n_centers,mean_D,std_D`).
pub fn cmd_stability(image: &Path, settings: &Settings, fractions: &[f64], repeats: usize) -> Result<Vec<StabilityRow>> {
    let img = load_pgm(image)?;
    let rows = stability(&img, &settings.params, fractions, repeats)?;
    let mut body = String::from("fraction,n_centers,mean_D,std_D\n");
    for r in &rows {
        let _ = writeln!(body, "{},{},{},{}", r.fraction, r.n_centers, r.mean_d, r.std_d);
    }
    write_atomic(
        &settings.out.join("stability.csv"),
        &csv_file(&settings.provenance("stability"), &body),
    )?;
    Ok(rows)
}

fn load_dataset(root: &Path, settings: &Settings) -> Result<LabeledDataset> {
    let ds = ingest_dataset(root, settings.tile)?;
    ds.validate(3)?;
    Ok(ds)
}

/// Leave-one-out evaluation of every selected method. Writes
/// `comparison.csv` and `confusion_<method>.csv`.
pub fn cmd_classify(root: &Path, settings: &Settings) -> Result<Vec<ComparisonRow>> {
    let ds = load_dataset(root, settings)?;
    classify_dataset(&ds, settings)
}

pub fn classify_dataset(ds: &LabeledDataset, settings: &Settings) -> Result<Vec<ComparisonRow>> {
    let rows = compare_methods(ds, &settings.methods, &settings.params)?;
    let prov = settings.provenance("classify");
    for r in &rows {
        write_atomic(
            &settings.out.join(format!("confusion_{}.csv", r.method)),
            &csv_file(&prov, &r.confusion.to_csv(&ds.class_names)),
        )?;
    }
    write_atomic(&settings.out.join("comparison.csv"), &csv_file(&prov, &comparison_csv(&rows)))?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub m: usize,
    pub k: usize,
    pub correct: u64,
    pub total: u64,
    pub accuracy_percent: f64,
}

/// Signature-length sweep. Volume curves are computed once per sample and
/// re-segmented for every `m`.
pub fn sweep_m(ds: &LabeledDataset, params: &VrfdParams, ms: &[usize]) -> Result<Vec<SweepRow>> {
    use rayon::prelude::*;
    if ms.is_empty() {
        return Err(Error::InvalidParameter("no m values given".into()));
    }
    if let Some(&m) = ms.iter().find(|&&m| m < 2) {
        return Err(Error::InvalidParameter(format!("m must be at least 2, got {m}")));
    }
    ds.validate(3)?;
    let curves = ds
        .samples
        .par_iter()
        .map(|s| params.volume_curve(&s.image).map(|c| log_log(&c)))
        .collect::<Result<Vec<_>>>()?;
    let labels = ds.labels();
    ms.iter()
        .map(|&m| {
            let features = curves
                .iter()
                .map(|c| make_signature(c, m).map(|s| s.alphas))
                .collect::<Result<Vec<_>>>()?;
            let k = features.first().map_or(0, Vec::len);
            let cm = leave_one_out(&features, &labels)?;
            Ok(SweepRow {
                m,
                k,
                correct: cm.correct(),
                total: cm.total(),
                accuracy_percent: 100.0 * cm.accuracy(),
            })
        })
        .collect()
}

/// Writes `sweep_m.csv` (`m,k,correct,total,accuracy_percent`).
pub fn cmd_sweep_m(root: &Path, settings: &Settings, ms: &[usize]) -> Result<Vec<SweepRow>> {
    let ds = load_dataset(root, settings)?;
    let rows = sweep_m(&ds, &settings.params, ms)?;
    let mut body = String::from("m,k,correct,total,accuracy_percent\n");
    for r in &rows {
        let _ = writeln!(body, "{},{},{},{},{:.2}", r.m, r.k, r.correct, r.total, r.accuracy_percent);
    }
    write_atomic(&settings.out.join("sweep_m.csv"), &csv_file(&settings.provenance("sweep-m"), &body))?;
    Ok(rows)
}

/// Features for a single in-memory image, for callers that do not go through files.
pub fn features_for(img: &GrayImage, settings: &Settings) -> Result<Vec<FeatureVector>> {
    settings.methods.iter().map(|&m| extract(img, m, &settings.params)).collect()
}
