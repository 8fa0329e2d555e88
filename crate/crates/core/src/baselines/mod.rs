//! Comparison texture descriptors: Fourier ring energies, gray-level
//! co-occurrence energy/entropy and Gabor filter-bank energies. All of them
//! work on the raw image.

mod fourier;
mod gabor;
mod glcm;

use std::fmt::Write as _;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

pub use fourier::{fourier_descriptors, FOURIER_RINGS};
pub use gabor::{gabor_bank, gabor_descriptors, GaborFilter, GABOR_ORIENTATIONS, GABOR_SCALES};
pub use glcm::{cooccurrence_descriptors, cooccurrence_matrix, GLCM_OFFSETS};

use crate::imgio::GrayImage;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub method_tag: String,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>, method_tag: impl Into<String>) -> Self {
        Self {
            values,
            method_tag: method_tag.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sample_name,class_id,method,f_1..f_d`
    pub fn csv_header(d: usize) -> String {
        let mut h = String::from("sample_name,class_id,method");
        for i in 1..=d {
            let _ = write!(h, ",f_{i}");
        }
        h
    }

    pub fn csv_row(&self, sample_name: &str, class_id: Option<usize>) -> String {
        let mut row = format!(
            "{},{},{}",
            sample_name,
            class_id.map(|c| c.to_string()).unwrap_or_default(),
            self.method_tag
        );
        for v in &self.values {
            let _ = write!(row, ",{v}");
        }
        row
    }
}

/// Unnormalized forward 2D DFT, row-major `height x width`.
pub(crate) fn fft2(img: &GrayImage) -> Vec<Complex<f64>> {
    let (w, h) = (img.width(), img.height());
    let mut data: Vec<Complex<f64>> = img.pixels().iter().map(|&p| Complex::new(f64::from(p), 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    let row_fft = planner.plan_fft_forward(w);
    row_fft.process(&mut data);
    let col_fft = planner.plan_fft_forward(h);
    let mut col = vec![Complex::new(0.0, 0.0); h];
    for x in 0..w {
        for y in 0..h {
            col[y] = data[y * w + x];
        }
        col_fft.process(&mut col);
        for y in 0..h {
            data[y * w + x] = col[y];
        }
    }
    data
}

/// Unnormalized inverse 2D DFT.
#[cfg(test)]
pub(crate) fn ifft2(data: &mut [Complex<f64>], w: usize, h: usize) {
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(w).process(data);
    let col_fft = planner.plan_fft_inverse(h);
    let mut col = vec![Complex::new(0.0, 0.0); h];
    for x in 0..w {
        for y in 0..h {
            col[y] = data[y * w + x];
        }
        col_fft.process(&mut col);
        for y in 0..h {
            data[y * w + x] = col[y];
        }
    }
}

/// Signed frequency index of DFT bin `k` of an `n`-point transform, in
/// `[-n/2, (n-1)/2]`.
pub(crate) fn signed_freq(k: usize, n: usize) -> f64 {
    if k < n.div_ceil(2) {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_matches_direct_sum() {
        let img = GrayImage::from_fn(5, 4, |x, y| ((x * 37 + y * 11) % 256) as u8).unwrap();
        let spec = fft2(&img);
        for v in 0..4 {
            for u in 0..5 {
                let mut acc = Complex::new(0.0, 0.0);
                for y in 0..4 {
                    for x in 0..5 {
                        let ph = -2.0 * std::f64::consts::PI * ((u * x) as f64 / 5.0 + (v * y) as f64 / 4.0);
                        acc += Complex::from_polar(f64::from(img.get(x, y)), ph);
                    }
                }
                assert!((spec[v * 5 + u] - acc).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let img = GrayImage::from_fn(6, 3, |x, y| (x * 40 + y) as u8).unwrap();
        let mut spec = fft2(&img);
        ifft2(&mut spec, 6, 3);
        for (c, &p) in spec.iter().zip(img.pixels()) {
            assert!((c.re / 18.0 - f64::from(p)).abs() < 1e-9);
        }
    }

    #[test]
    fn signed_frequencies() {
        let even: Vec<f64> = (0..4).map(|k| signed_freq(k, 4)).collect();
        assert_eq!(even, vec![0.0, 1.0, -2.0, -1.0]);
        let odd: Vec<f64> = (0..5).map(|k| signed_freq(k, 5)).collect();
        assert_eq!(odd, vec![0.0, 1.0, 2.0, -2.0, -1.0]);
    }
}
