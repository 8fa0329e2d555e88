use super::{fft2, signed_freq, FeatureVector};
use crate::error::{Error, Result};
use crate::imgio::GrayImage;

pub const FOURIER_RINGS: usize = 99;

/// Ring index of a bin at radius `rho > 0` when `(0, r_max]` is cut into
/// `FOURIER_RINGS` equal-width rings.
fn ring_of(rho: f64, r_max: f64) -> usize {
    let t = (rho / r_max * FOURIER_RINGS as f64).ceil() as usize;
    t.clamp(1, FOURIER_RINGS) - 1
}

/// Sum of spectrum magnitudes over 99 concentric rings of the centered
/// spectrum. Radius is measured in frequency-index units; the DC bin is left
/// out.
pub fn fourier_descriptors(img: &GrayImage) -> Result<FeatureVector> {
    let (w, h) = (img.width(), img.height());
    if w < 2 || h < 2 {
        return Err(Error::InvalidImage(format!(
            "Fourier descriptors need at least 2x2 pixels, got {w}x{h}"
        )));
    }
    let spec = fft2(img);
    let radius = |u: usize, v: usize| signed_freq(u, w).hypot(signed_freq(v, h));
    let r_max = (0..h)
        .flat_map(|v| (0..w).map(move |u| (u, v)))
        .map(|(u, v)| radius(u, v))
        .fold(0.0, f64::max);

    let mut rings = vec![0.0; FOURIER_RINGS];
    for v in 0..h {
        for u in 0..w {
            if u == 0 && v == 0 {
                continue;
            }
            rings[ring_of(radius(u, v), r_max)] += spec[v * w + u].norm();
        }
    }
    Ok(FeatureVector::new(rings, "fourier"))
}
