//! Dimension estimate and piecewise-slope signature of a log-log curve.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::vrfd::LogLogCurve;

/// Ordinary least-squares line `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub n_points: usize,
}

pub fn ols_slope(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::Regression(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    let x0 = points[0].0;
    if points.iter().all(|&(x, _)| x == x0) {
        return Err(Error::Regression("all x values are equal".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, y)| {
        let dx = x - mx;
        (sxy + dx * (y - my), sxx + dx * dx)
    });
    let slope = sxy / sxx;
    Ok(FitResult {
        slope,
        intercept: my - slope * mx,
        n_points: points.len(),
    })
}

/// Slope of the full-curve regression of `ln V` on `ln r`.
pub fn fractal_dimension(curve: &LogLogCurve) -> Result<f64> {
    Ok(ols_slope(&curve.points)?.slope)
}

/// Like [`fractal_dimension`], restricted to radii in `[min_r, max_r]`.
pub fn fractal_dimension_in_range(curve: &LogLogCurve, min_r: f64, max_r: f64) -> Result<f64> {
    if !(min_r > 0.0 && min_r <= max_r) {
        return Err(Error::InvalidParameter(format!(
            "invalid radius range [{min_r}, {max_r}]"
        )));
    }
    let (lo, hi) = (min_r.ln(), max_r.ln());
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .copied()
        .filter(|&(lr, _)| lr >= lo - 1e-12 && lr <= hi + 1e-12)
        .collect();
    Ok(ols_slope(&pts)?.slope)
}

/// Slopes of consecutive, disjoint `m`-point segments of a log-log curve.
/// Trailing points that do not fill a segment are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub m: usize,
    pub alphas: Vec<f64>,
}

impl Signature {
    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    /// `sample_name,class_id,m,alpha_1..alpha_k`; an absent class id is left empty.
    pub fn csv_header(k: usize) -> String {
        let mut h = String::from("sample_name,class_id,m");
        for i in 1..=k {
            let _ = write!(h, ",alpha_{i}");
        }
        h
    }

    pub fn csv_row(&self, sample_name: &str, class_id: Option<usize>) -> String {
        let mut row = format!(
            "{},{},{}",
            sample_name,
            class_id.map(|c| c.to_string()).unwrap_or_default(),
            self.m
        );
        for a in &self.alphas {
            let _ = write!(row, ",{a}");
        }
        row
    }
}

pub fn make_signature(curve: &LogLogCurve, m: usize) -> Result<Signature> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "segment length m must be at least 2, got {m}"
        )));
    }
    if m > curve.len() {
        return Err(Error::InvalidParameter(format!(
            "segment length m = {m} exceeds the {} curve points",
            curve.len()
        )));
    }
    let alphas = curve
        .points
        .chunks_exact(m)
        .map(|seg| ols_slope(seg).map(|f| f.slope))
        .collect::<Result<Vec<_>>>()?;
    Ok(Signature { m, alphas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::{HeightField, RadiiGrid};
    use crate::imgio::GrayImage;
    use crate::vrfd::{log_log, volume_curve, SamplingPlan};
    use proptest::prelude::*;

    fn line_curve(len: usize, slope: f64) -> LogLogCurve {
        let grid = RadiiGrid::new(20).unwrap();
        let points = grid
            .sq_dists()
            .iter()
            .take(len)
            .map(|&n| {
                let lr = 0.5 * f64::from(n).ln();
                (lr, slope * lr + 0.3)
            })
            .collect();
        LogLogCurve { points }
    }

    #[test]
    fn exact_lines() {
        let f = ols_slope(&[(0.0, 0.0), (1.0, 2.0), (2.0, 4.0)]).unwrap();
        assert_eq!((f.slope, f.intercept, f.n_points), (2.0, 0.0, 3));
        let f = ols_slope(&[(0.0, 5.0), (1.0, 5.0), (2.0, 5.0)]).unwrap();
        assert_eq!((f.slope, f.intercept), (0.0, 5.0));
        let pts: Vec<(f64, f64)> = (0..50).map(|i| (i as f64 * 0.37, 3.0 * i as f64 * 0.37 - 1.0)).collect();
        let f = ols_slope(&pts).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12);
        assert!((f.intercept + 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_regressions() {
        assert!(ols_slope(&[(1.0, 2.0)]).is_err());
        assert!(ols_slope(&[]).is_err());
        assert!(ols_slope(&[(0.1, 1.0), (0.1, 2.0), (0.1, 3.0)]).is_err());
    }

    #[test]
    fn segment_counts() {
        let c85 = line_curve(85, 2.0);
        assert_eq!(make_signature(&c85, 10).unwrap().k(), 8);
        let c335 = line_curve(335, 2.0);
        assert_eq!(make_signature(&c335, 10).unwrap().k(), 33);
        assert!(make_signature(&c85, 86).is_err());
        assert!(make_signature(&c85, 1).is_err());
        assert_eq!(make_signature(&c85, 85).unwrap().k(), 1);
    }

    #[test]
    fn segments_are_disjoint_and_ordered() {
        let grid = RadiiGrid::new(10).unwrap();
        // slope changes at point 30: segments of 10 before it see 1, after it see 4
        let points: Vec<(f64, f64)> = grid
            .sq_dists()
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let lr = 0.5 * f64::from(n).ln();
                (lr, if i < 30 { lr } else { 4.0 * lr })
            })
            .collect();
        let sig = make_signature(&LogLogCurve { points }, 10).unwrap();
        for (j, a) in sig.alphas.iter().enumerate() {
            let expected = if j < 3 { 1.0 } else { 4.0 };
            assert!((a - expected).abs() < 1e-9, "segment {j}: {a}");
        }
    }

    #[test]
    fn lone_pixel_dimension_is_zero() {
        let f = HeightField::lift(&GrayImage::new(1, 1, vec![0]).unwrap());
        let g = RadiiGrid::new(20).unwrap();
        let c = volume_curve(&f, &SamplingPlan::fixed(1, 0).unwrap(), &g).unwrap();
        assert_eq!(fractal_dimension(&log_log(&c)).unwrap(), 0.0);
    }

    #[test]
    fn range_restricted_fit() {
        let c = line_curve(335, 2.5);
        let d = fractal_dimension_in_range(&c, 2.0, 10.0).unwrap();
        assert!((d - 2.5).abs() < 1e-9);
        assert!(fractal_dimension_in_range(&c, 0.0, 10.0).is_err());
        assert!(fractal_dimension_in_range(&c, 5.0, 4.0).is_err());
    }

    #[test]
    fn csv_row_format() {
        let sig = Signature {
            m: 10,
            alphas: vec![2.0, 1.5],
        };
        assert_eq!(Signature::csv_header(2), "sample_name,class_id,m,alpha_1,alpha_2");
        assert_eq!(sig.csv_row("a.pgm", Some(3)), "a.pgm,3,10,2,1.5");
        assert_eq!(sig.csv_row("a.pgm", None), "a.pgm,,10,2,1.5");
    }

    proptest! {
        #[test]
        fn line_signature_matches_dimension(slope in -3.0f64..4.0, m in 2usize..=85) {
            let c = line_curve(85, slope);
            let d = fractal_dimension(&c).unwrap();
            prop_assert!((d - slope).abs() < 1e-9);
            let sig = make_signature(&c, m).unwrap();
            prop_assert_eq!(sig.k(), 85 / m);
            for a in sig.alphas {
                prop_assert!((a - d).abs() < 1e-9);
            }
        }
    }
}
