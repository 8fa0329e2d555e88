//! Height-field lifting and the lattice radii grid.

use crate::error::{Error, Result};
use crate::imgio::GrayImage;

/// An image viewed as the lattice point set `{(y, x, z(x, y))}`, one point per
/// pixel. Pixel steps and gray-level steps share the same unit unless a
/// z-scale is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightField {
    width: usize,
    height: usize,
    z: Vec<i32>,
}

impl HeightField {
    pub fn lift(img: &GrayImage) -> Self {
        Self::lift_scaled(img, 1)
    }

    /// Lifts with every gray level multiplied by the integer `z_scale`.
    pub fn lift_scaled(img: &GrayImage, z_scale: u32) -> Self {
        let s = z_scale as i32;
        Self {
            width: img.width(),
            height: img.height(),
            z: img.pixels().iter().map(|&p| i32::from(p) * s).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of points, `width * height`.
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn z(&self) -> &[i32] {
        &self.z
    }

    /// The 3D point `(y, x, z)` of pixel `index`.
    pub fn point(&self, index: usize) -> (i64, i64, i64) {
        let y = index / self.width;
        let x = index % self.width;
        (y as i64, x as i64, i64::from(self.z[index]))
    }

    pub fn points(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }
}

/// True when `n` is a sum of three integer squares, i.e. not of the form
/// `4^a (8b + 7)`.
pub fn is_sum_of_three_squares(mut n: u64) -> bool {
    if n == 0 {
        return true;
    }
    while n % 4 == 0 {
        n /= 4;
    }
    n % 8 != 7
}

/// Squared distances `n` in `[1, r_max^2]` realized between integer lattice
/// points, ascending. Radius values are `sqrt(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiiGrid {
    r_max: u32,
    sq_dists: Vec<u32>,
}

impl RadiiGrid {
    pub fn new(r_max: u32) -> Result<Self> {
        if r_max < 1 {
            return Err(Error::InvalidParameter("r_max must be at least 1".into()));
        }
        if r_max > 4096 {
            return Err(Error::InvalidParameter(format!("r_max {r_max} is too large")));
        }
        let top = r_max * r_max;
        let sq_dists = (1..=top)
            .filter(|&n| is_sum_of_three_squares(u64::from(n)))
            .collect();
        Ok(Self { r_max, sq_dists })
    }

    pub fn r_max(&self) -> u32 {
        self.r_max
    }

    pub fn sq_dists(&self) -> &[u32] {
        &self.sq_dists
    }

    pub fn len(&self) -> usize {
        self.sq_dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sq_dists.is_empty()
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        self.sq_dists.iter().map(|&n| f64::from(n).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute_force_grid(r: i64) -> Vec<u32> {
        let mut seen = BTreeSet::new();
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    let n = a * a + b * b + c * c;
                    if n >= 1 && n <= r * r {
                        seen.insert(n as u32);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(RadiiGrid::new(20).unwrap().len(), 335);
        assert_eq!(RadiiGrid::new(10).unwrap().len(), 85);
        assert_eq!(RadiiGrid::new(1).unwrap().sq_dists(), &[1]);
        assert!(RadiiGrid::new(0).is_err());
    }

    #[test]
    fn seven_never_present() {
        for r in 3..=12 {
            let g = RadiiGrid::new(r).unwrap();
            assert!(!g.sq_dists().contains(&7));
            assert!(!g.sq_dists().contains(&28));
            assert!(!g.sq_dists().contains(&15));
        }
    }

    #[test]
    fn matches_brute_force_enumeration() {
        for r in 1..=20 {
            assert_eq!(RadiiGrid::new(r as u32).unwrap().sq_dists(), brute_force_grid(r).as_slice(), "r_max={r}");
        }
    }

    #[test]
    fn lift_is_direct() {
        let img = GrayImage::new(2, 1, vec![5, 9]).unwrap();
        let f = HeightField::lift(&img);
        assert_eq!(f.points().collect::<Vec<_>>(), vec![(0, 0, 5), (0, 1, 9)]);
        let scaled = HeightField::lift_scaled(&img, 2);
        assert_eq!(scaled.z(), &[10, 18]);
    }

    #[test]
    fn flat_image_is_coplanar() {
        let img = GrayImage::filled(4, 3, 77).unwrap();
        let f = HeightField::lift(&img);
        assert_eq!(f.len(), 12);
        assert!(f.points().all(|(_, _, z)| z == 77));
    }
}
