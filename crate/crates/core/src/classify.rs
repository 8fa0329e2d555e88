//! Linear discriminant analysis with nearest-centroid decisions, evaluated by
//! leave-one-out cross-validation.
//!
//! The within-class scatter gets a ridge of `1e-6 * trace(S_w) / d` before the
//! generalized eigenproblem `S_b v = lambda S_w v` is solved by symmetric
//! whitening. Each discriminant axis is signed so that its first non-negligible
//! component is positive. A sample is assigned to the class whose projected
//! centroid is nearest; ties go to the lowest class id.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imgio::{GrayImage, LabeledDataset};
use crate::pipeline::{extract_all, Method, VrfdParams};

pub const RIDGE_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    /// `d x q` matrix; column `j` is the `j`-th discriminant axis.
    projection: DMatrix<f64>,
    /// `C x q`, row `c` is the projected mean of class `c`.
    centroids: DMatrix<f64>,
    eigenvalues: Vec<f64>,
}

impl LdaModel {
    pub fn n_classes(&self) -> usize {
        self.centroids.nrows()
    }

    pub fn feature_dim(&self) -> usize {
        self.projection.nrows()
    }

    pub fn discriminant_dim(&self) -> usize {
        self.projection.ncols()
    }

    pub fn projection(&self) -> &DMatrix<f64> {
        &self.projection
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn centroid(&self, class_id: usize) -> Vec<f64> {
        self.centroids.row(class_id).iter().copied().collect()
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.feature_dim(), "feature dimension mismatch");
        let v = DVector::from_column_slice(x);
        (self.projection.transpose() * v).iter().copied().collect()
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let p = self.project(x);
        let mut best = (0, f64::INFINITY);
        for c in 0..self.n_classes() {
            let d: f64 = self
                .centroids
                .row(c)
                .iter()
                .zip(&p)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d < best.1 {
                best = (c, d);
            }
        }
        best.0
    }
}

fn check_inputs(features: &[Vec<f64>], labels: &[usize], min_per_class: usize) -> Result<(usize, usize)> {
    if features.len() != labels.len() {
        return Err(Error::Classification(format!(
            "{} feature vectors but {} labels",
            features.len(),
            labels.len()
        )));
    }
    let Some(first) = features.first() else {
        return Err(Error::Classification("no samples".into()));
    };
    let d = first.len();
    if d == 0 {
        return Err(Error::Classification("empty feature vectors".into()));
    }
    for (i, f) in features.iter().enumerate() {
        if f.len() != d {
            return Err(Error::Classification(format!(
                "sample {i} has {} features, expected {d}",
                f.len()
            )));
        }
        if let Some(v) = f.iter().find(|v| !v.is_finite()) {
            return Err(Error::Classification(format!("sample {i} has non-finite feature {v}")));
        }
    }
    let n_classes = labels.iter().max().map_or(0, |&m| m + 1);
    if n_classes < 2 {
        return Err(Error::Classification("at least 2 classes are required".into()));
    }
    let mut counts = vec![0usize; n_classes];
    labels.iter().for_each(|&l| counts[l] += 1);
    if let Some((c, &n)) = counts.iter().enumerate().find(|&(_, &n)| n < min_per_class) {
        return Err(Error::Classification(format!(
            "class {c} has {n} sample(s); at least {min_per_class} required"
        )));
    }
    Ok((n_classes, d))
}

pub fn fit_lda(features: &[Vec<f64>], labels: &[usize]) -> Result<LdaModel> {
    let (n_classes, d) = check_inputs(features, labels, 2)?;
    Ok(fit_unchecked(features, labels, n_classes, d))
}

fn fit_unchecked(features: &[Vec<f64>], labels: &[usize], n_classes: usize, d: usize) -> LdaModel {
    let mut means = vec![DVector::<f64>::zeros(d); n_classes];
    let mut counts = vec![0usize; n_classes];
    for (f, &l) in features.iter().zip(labels) {
        means[l] += DVector::from_column_slice(f);
        counts[l] += 1;
    }
    for (m, &n) in means.iter_mut().zip(&counts) {
        *m /= n as f64;
    }
    let mut overall = DVector::<f64>::zeros(d);
    for (m, &n) in means.iter().zip(&counts) {
        overall += m * n as f64;
    }
    overall /= features.len() as f64;

    let mut sw = DMatrix::<f64>::zeros(d, d);
    for (f, &l) in features.iter().zip(labels) {
        let r = DVector::from_column_slice(f) - &means[l];
        sw.ger(1.0, &r, &r, 1.0);
    }
    let mut sb = DMatrix::<f64>::zeros(d, d);
    for (m, &n) in means.iter().zip(&counts) {
        let r = m - &overall;
        sb.ger(n as f64, &r, &r, 1.0);
    }

    let mut scale = sw.trace() / d as f64;
    if scale <= 0.0 {
        // no within-class spread at all: fall back to the total scatter
        scale = (sw.trace() + sb.trace()) / d as f64;
    }
    if scale <= 0.0 {
        scale = 1.0;
    }
    for i in 0..d {
        sw[(i, i)] += RIDGE_EPSILON * scale;
    }

    let sw_eig = SymmetricEigen::new(sw);
    let inv_sqrt = DVector::from_iterator(
        d,
        sw_eig
            .eigenvalues
            .iter()
            .map(|&l| 1.0 / l.max(RIDGE_EPSILON * scale).sqrt()),
    );
    let v = &sw_eig.eigenvectors;
    let whiten = v * DMatrix::from_diagonal(&inv_sqrt) * v.transpose();

    let mut m = &whiten * sb * &whiten;
    m = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

    let q = (n_classes - 1).min(d);
    let mut projection = DMatrix::<f64>::zeros(d, q);
    let mut eigenvalues = Vec::with_capacity(q);
    for (j, &idx) in order.iter().take(q).enumerate() {
        let mut axis = &whiten * eig.eigenvectors.column(idx);
        let peak = axis.amax();
        if let Some(&first) = axis.iter().find(|v| v.abs() > 1e-12 * peak) {
            if first < 0.0 {
                axis = -axis;
            }
        }
        projection.set_column(j, &axis);
        eigenvalues.push(eig.eigenvalues[idx]);
    }

    let mut centroids = DMatrix::<f64>::zeros(n_classes, q);
    for (c, mean) in means.iter().enumerate() {
        let p = projection.transpose() * mean;
        centroids.set_row(c, &p.transpose());
    }
    LdaModel {
        projection,
        centroids,
        eigenvalues,
    }
}

/// Counts indexed `[true][predicted]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    n_classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(n_classes: usize) -> Self {
        Self {
            n_classes,
            counts: vec![0; n_classes * n_classes],
        }
    }

    pub fn record(&mut self, truth: usize, predicted: usize) {
        self.counts[truth * self.n_classes + predicted] += 1;
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.n_classes + predicted]
    }

    pub fn row_sum(&self, truth: usize) -> u64 {
        self.counts[truth * self.n_classes..(truth + 1) * self.n_classes].iter().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.n_classes).map(|c| self.get(c, c)).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            t => self.correct() as f64 / t as f64,
        }
    }

    /// Header `true\predicted,<class names>`, one row per true class.
    pub fn to_csv(&self, class_names: &[String]) -> String {
        let name = |c: usize| class_names.get(c).cloned().unwrap_or_else(|| c.to_string());
        let mut out = String::from("true\\predicted");
        for c in 0..self.n_classes {
            let _ = write!(out, ",{}", name(c));
        }
        out.push('\n');
        for t in 0..self.n_classes {
            out.push_str(&name(t));
            for p in 0..self.n_classes {
                let _ = write!(out, ",{}", self.get(t, p));
            }
            out.push('\n');
        }
        out
    }
}

/// Held-out predictions, one per sample, from models fitted on the rest.
pub fn leave_one_out_predictions(features: &[Vec<f64>], labels: &[usize]) -> Result<Vec<usize>> {
    let (n_classes, d) = check_inputs(features, labels, 3)?;
    Ok((0..features.len())
        .into_par_iter()
        .map(|held| {
            let train: Vec<Vec<f64>> = features
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != held)
                .map(|(_, f)| f.clone())
                .collect();
            let train_labels: Vec<usize> = labels
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != held)
                .map(|(_, &l)| l)
                .collect();
            fit_unchecked(&train, &train_labels, n_classes, d).predict(&features[held])
        })
        .collect())
}

/// Leave-one-out evaluation. Every class needs at least 3 samples so that each
/// fold keeps within-class spread for all classes.
pub fn leave_one_out(features: &[Vec<f64>], labels: &[usize]) -> Result<ConfusionMatrix> {
    let preds = leave_one_out_predictions(features, labels)?;
    let n_classes = labels.iter().max().map_or(0, |&m| m + 1);
    let mut cm = ConfusionMatrix::new(n_classes);
    for (&t, &p) in labels.iter().zip(&preds) {
        cm.record(t, p);
    }
    Ok(cm)
}

/// One row of a method comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub method: Method,
    pub confusion: ConfusionMatrix,
}

impl ComparisonRow {
    pub fn correct(&self) -> u64 {
        self.confusion.correct()
    }

    pub fn total(&self) -> u64 {
        self.confusion.total()
    }

    /// Percentage of correctly classified samples.
    pub fn success_rate(&self) -> f64 {
        100.0 * self.confusion.accuracy()
    }
}

/// Extracts features with each method and evaluates them by leave-one-out.
pub fn compare_methods(dataset: &LabeledDataset, methods: &[Method], params: &VrfdParams) -> Result<Vec<ComparisonRow>> {
    dataset.validate(3)?;
    let images: Vec<&GrayImage> = dataset.samples.iter().map(|s| &s.image).collect();
    let labels = dataset.labels();
    methods
        .iter()
        .map(|&method| {
            let features: Vec<Vec<f64>> = extract_all(&images, method, params)?
                .into_iter()
                .map(|f| f.values)
                .collect();
            Ok(ComparisonRow {
                method,
                confusion: leave_one_out(&features, &labels)?,
            })
        })
        .collect()
}

/// Aligned text table: method, images correctly classified, success rate.
pub fn comparison_table(rows: &[ComparisonRow]) -> String {
    let header = ("Method", "Images correctly classified", "Success rate (%)");
    let width = rows
        .iter()
        .map(|r| r.method.display_name().len())
        .chain([header.0.len()])
        .max()
        .unwrap_or(0);
    let mut out = format!("{:<width$}  {:>27}  {:>16}\n", header.0, header.1, header.2);
    for r in rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:>27}  {:>16.2}",
            r.method.display_name(),
            format!("{}/{}", r.correct(), r.total()),
            r.success_rate()
        );
    }
    out
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("method,images_correctly_classified,total,success_rate_percent\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{:.2}", r.method, r.correct(), r.total(), r.success_rate());
    }
    out
}
