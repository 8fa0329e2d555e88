//! Occupied-volume curves.
//!
//! `N` sphere centers are drawn from the height field without replacement.
//! For each center and each radius on the [`RadiiGrid`], the number of lattice
//! points within that radius (center included) is counted; `V(r)` is the mean
//! of those counts over the centers.
//!
//! Counting only visits the `(2 r_max + 1)^2` pixel window around a center:
//! each pixel column holds exactly one point, so any point farther away in
//! `x` or `y` is already outside the largest sphere. Squared distances are
//! histogrammed, summed over all centers as integers and prefix-summed onto the
//! grid once, so the result does not depend on the order in which centers are
//! processed or on the number of threads.
//!
//! Centers are drawn with a ChaCha8 generator seeded from the 64-bit plan seed
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`) and `rand::seq::index::sample`.
//! [`volume_curve_from_centers`] accepts an explicit center list for callers
//! that need to bypass the generator.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cloud::{HeightField, RadiiGrid};
use crate::error::{Error, Result};

/// How many sphere centers to draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterCount {
    Fixed(usize),
    /// `ceil(fraction * |S|)`, fraction in (0, 1].
    Fraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingPlan {
    pub centers: CenterCount,
    pub seed: u64,
}

impl SamplingPlan {
    pub fn fixed(n_centers: usize, seed: u64) -> Result<Self> {
        if n_centers == 0 {
            return Err(Error::InvalidParameter("n_centers must be at least 1".into()));
        }
        Ok(Self {
            centers: CenterCount::Fixed(n_centers),
            seed,
        })
    }

    pub fn fraction(fraction: f64, seed: u64) -> Result<Self> {
        check_fraction(fraction)?;
        Ok(Self {
            centers: CenterCount::Fraction(fraction),
            seed,
        })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Number of centers for a point set of size `n_points`.
    pub fn resolve(&self, n_points: usize) -> Result<usize> {
        let n = match self.centers {
            CenterCount::Fixed(n) => n,
            CenterCount::Fraction(f) => {
                check_fraction(f)?;
                fraction_count(f, n_points)
            }
        };
        if n == 0 {
            return Err(Error::InvalidParameter("n_centers must be at least 1".into()));
        }
        if n > n_points {
            return Err(Error::InvalidParameter(format!(
                "{n} centers requested but the image has only {n_points} pixels"
            )));
        }
        Ok(n)
    }
}

fn check_fraction(f: f64) -> Result<()> {
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "center fraction must be in (0, 1], got {f}"
        )));
    }
    Ok(())
}

fn fraction_count(f: f64, n_points: usize) -> usize {
    let x = f * n_points as f64;
    let nearest = x.round();
    // 0.1 * 40000 must give 4000, not 4001
    let n = if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    (n as usize).clamp(1, n_points.max(1))
}

/// Distinct pixel indices drawn uniformly without replacement.
pub fn sample_centers(field: &HeightField, plan: &SamplingPlan) -> Result<Vec<usize>> {
    let n = plan.resolve(field.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    Ok(rand::seq::index::sample(&mut rng, field.len(), n).into_vec())
}

/// Adds the squared distances from `center` to every point within `r_max`
/// into `hist` (length `r_max^2 + 1`).
fn accumulate(field: &HeightField, center: usize, r_max: u32, hist: &mut [u64]) {
    let w = field.width() as i64;
    let h = field.height() as i64;
    let z = field.z();
    let r = i64::from(r_max);
    let r2 = r * r;
    let cy = center as i64 / w;
    let cx = center as i64 % w;
    let cz = i64::from(z[center]);

    for y in (cy - r).max(0)..=(cy + r).min(h - 1) {
        let dy2 = (y - cy) * (y - cy);
        let rem = r2 - dy2;
        // widest dx with dx^2 <= rem
        let mut span = (rem as f64).sqrt() as i64;
        while span * span > rem {
            span -= 1;
        }
        while (span + 1) * (span + 1) <= rem {
            span += 1;
        }
        let row = &z[(y * w) as usize..((y + 1) * w) as usize];
        for x in (cx - span).max(0)..=(cx + span).min(w - 1) {
            let dx = x - cx;
            let dz = i64::from(row[x as usize]) - cz;
            let d2 = dy2 + dx * dx + dz * dz;
            if d2 <= r2 {
                hist[d2 as usize] += 1;
            }
        }
    }
}

fn cumulative_on_grid(hist: &[u64], grid: &RadiiGrid) -> Vec<u64> {
    let mut running = 0u64;
    let cum: Vec<u64> = hist
        .iter()
        .map(|&c| {
            running += c;
            running
        })
        .collect();
    grid.sq_dists().iter().map(|&n| cum[n as usize]).collect()
}

fn hist_len(grid: &RadiiGrid) -> usize {
    (grid.r_max() as usize).pow(2) + 1
}

/// `V_i(r)` for one center: entry `j` counts points whose squared distance to
/// the center is at most `grid.sq_dists()[j]`, the center included.
pub fn count_within(field: &HeightField, center: usize, grid: &RadiiGrid) -> Vec<u64> {
    assert!(center < field.len(), "center {center} out of range");
    let mut hist = vec![0u64; hist_len(grid)];
    accumulate(field, center, grid.r_max(), &mut hist);
    cumulative_on_grid(&hist, grid)
}

/// Mean occupied volume `V(r)` on every grid radius.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeCurve {
    grid: RadiiGrid,
    totals: Vec<u64>,
    v: Vec<f64>,
    n_centers: usize,
    seed: u64,
    width: usize,
    height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub n_centers: usize,
    pub seed: u64,
    pub r_max: u32,
    pub width: usize,
    pub height: usize,
}

impl VolumeCurve {
    pub fn grid(&self) -> &RadiiGrid {
        &self.grid
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Exact integer sums of the per-center counts.
    pub fn totals(&self) -> &[u64] {
        &self.totals
    }

    pub fn n_centers(&self) -> usize {
        self.n_centers
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn meta(&self) -> CurveMeta {
        CurveMeta {
            n_centers: self.n_centers,
            seed: self.seed,
            r_max: self.grid.r_max(),
            width: self.width,
            height: self.height,
        }
    }

    /// `sq_dist,r,V` with one row per grid entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sq_dist,r,V\n");
        for (&n, &v) in self.grid.sq_dists().iter().zip(&self.v) {
            let _ = writeln!(out, "{n},{},{v}", f64::from(n).sqrt());
        }
        out
    }

    pub fn meta_json(&self) -> String {
        serde_json::to_string_pretty(&self.meta()).expect("curve metadata serializes")
    }
}

pub fn volume_curve(field: &HeightField, plan: &SamplingPlan, grid: &RadiiGrid) -> Result<VolumeCurve> {
    let centers = sample_centers(field, plan)?;
    volume_curve_from_centers(field, &centers, grid, plan.seed)
}

/// Occupied-volume curve over an explicit list of centers. `seed` is only
/// recorded in the result.
pub fn volume_curve_from_centers(
    field: &HeightField,
    centers: &[usize],
    grid: &RadiiGrid,
    seed: u64,
) -> Result<VolumeCurve> {
    if centers.is_empty() {
        return Err(Error::InvalidParameter("at least one center is required".into()));
    }
    if let Some(&c) = centers.iter().find(|&&c| c >= field.len()) {
        return Err(Error::InvalidParameter(format!(
            "center {c} out of range for {} pixels",
            field.len()
        )));
    }
    let len = hist_len(grid);
    let r_max = grid.r_max();
    let hist = centers
        .par_chunks(32)
        .fold(
            || vec![0u64; len],
            |mut hist, chunk| {
                for &c in chunk {
                    accumulate(field, c, r_max, &mut hist);
                }
                hist
            },
        )
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let totals = cumulative_on_grid(&hist, grid);
    let n = centers.len() as f64;
    let v = totals.iter().map(|&t| t as f64 / n).collect();
    Ok(VolumeCurve {
        grid: grid.clone(),
        totals,
        v,
        n_centers: centers.len(),
        seed,
        width: field.width(),
        height: field.height(),
    })
}

/// Points `(ln r, ln V(r))` in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLogCurve {
    pub points: Vec<(f64, f64)>,
}

impl LogLogCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn log_log(curve: &VolumeCurve) -> LogLogCurve {
    let points = curve
        .grid
        .sq_dists()
        .iter()
        .zip(&curve.v)
        .map(|(&n, &v)| (0.5 * f64::from(n).ln(), v.ln()))
        .collect();
    LogLogCurve { points }
}
