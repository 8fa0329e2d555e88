use super::FeatureVector;
use crate::error::{Error, Result};
use crate::imgio::GrayImage;

/// Unit offsets `(dx, dy)` for -45, 0, 45 and 90 degrees, y pointing down.
pub const GLCM_OFFSETS: [(i64, i64); 4] = [(1, 1), (1, 0), (1, -1), (0, -1)];
const DISTANCES: [i64; 2] = [1, 2];

/// Normalized, non-symmetric 256x256 co-occurrence matrix for offset
/// `(dx, dy)`, indexed `[source * 256 + target]`.
pub fn cooccurrence_matrix(img: &GrayImage, dx: i64, dy: i64) -> Result<Vec<f64>> {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut counts = vec![0u64; 256 * 256];
    let mut total = 0u64;
    for y in 0.max(-dy)..h.min(h - dy) {
        for x in 0.max(-dx)..w.min(w - dx) {
            let src = img.get(x as usize, y as usize) as usize;
            let dst = img.get((x + dx) as usize, (y + dy) as usize) as usize;
            counts[src * 256 + dst] += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(Error::InvalidImage(format!(
            "offset ({dx}, {dy}) leaves no pixel pairs in a {w}x{h} image"
        )));
    }
    let t = total as f64;
    Ok(counts.into_iter().map(|c| c as f64 / t).collect())
}

fn energy_entropy(p: &[f64]) -> (f64, f64) {
    p.iter().filter(|&&v| v > 0.0).fold((0.0, 0.0), |(e, s), &v| (e + v * v, s - v * v.ln()))
}

/// Energy and entropy of 8 co-occurrence matrices (distances 1 and 2, four
/// angles), ordered distance-major, energy before entropy.
pub fn cooccurrence_descriptors(img: &GrayImage) -> Result<FeatureVector> {
    let mut values = Vec::with_capacity(16);
    for d in DISTANCES {
        for (dx, dy) in GLCM_OFFSETS {
            let p = cooccurrence_matrix(img, dx * d, dy * d)?;
            let (energy, entropy) = energy_entropy(&p);
            values.push(energy);
            values.push(entropy);
        }
    }
    Ok(FeatureVector::new(values, "glcm"))
}
