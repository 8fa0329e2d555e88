//! Deterministic synthetic textures with controllable roughness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgio::{GrayImage, LabeledDataset, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SynthKind {
    /// Constant 128.
    Flat,
    /// 128 plus i.i.d. integer noise uniform in `[-amplitude, amplitude]`.
    NoisyFlat { amplitude: u8 },
    /// i.i.d. uniform in `[0, 255]`.
    UniformNoise,
    /// Uniform noise box-filtered with a `k`x`k` window (reflect padding),
    /// then stretched to `[0, 255]`.
    SmoothedNoise { k: usize },
    /// Alternating 0/255 square blocks of side `period`, starting with 0.
    Checker { period: usize },
    /// Diamond-square surface with roughness `h` in (0, 1), stretched to `[0, 255]`.
    MidpointDisplacement { h: f64 },
}

impl SynthKind {
    pub fn label(&self) -> String {
        match self {
            SynthKind::Flat => "flat".into(),
            SynthKind::NoisyFlat { amplitude } => format!("noisy-flat-a{amplitude}"),
            SynthKind::UniformNoise => "uniform-noise".into(),
            SynthKind::SmoothedNoise { k } => format!("smoothed-noise-k{k}"),
            SynthKind::Checker { period } => format!("checker-p{period}"),
            SynthKind::MidpointDisplacement { h } => format!("midpoint-h{h}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    #[serde(flatten)]
    pub kind: SynthKind,
    pub width: usize,
    pub height: usize,
    #[serde(default)]
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(kind: SynthKind, width: usize, height: usize, seed: u64) -> Self {
        Self {
            kind,
            width,
            height,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParameter("synthetic image must be at least 1x1".into()));
        }
        match self.kind {
            SynthKind::SmoothedNoise { k } if k == 0 || k % 2 == 0 => Err(Error::InvalidParameter(format!(
                "box size k must be odd and positive, got {k}"
            ))),
            SynthKind::Checker { period: 0 } => Err(Error::InvalidParameter("checker period must be positive".into())),
            SynthKind::MidpointDisplacement { h } if !(h > 0.0 && h < 1.0) => Err(Error::InvalidParameter(format!(
                "roughness must be in (0, 1), got {h}"
            ))),
            _ => Ok(()),
        }
    }
}

fn stretch(values: &[f64]) -> Vec<u8> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo <= 0.0 {
        return vec![128; values.len()];
    }
    values
        .iter()
        .map(|&v| ((v - lo) / (hi - lo) * 255.0).round() as u8)
        .collect()
}

fn reflect(i: i64, n: i64) -> usize {
    // symmetric padding: -1 -> 0, n -> n - 1
    let period = 2 * n;
    let m = i.rem_euclid(period);
    (if m < n { m } else { period - 1 - m }) as usize
}

fn box_filter(src: &[f64], w: usize, h: usize, k: usize) -> Vec<f64> {
    let r = (k / 2) as i64;
    let norm = (k * k) as f64;
    let mut out = vec![0.0; w * h];
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let mut acc = 0.0;
            for dy in -r..=r {
                let yy = reflect(y + dy, h as i64);
                for dx in -r..=r {
                    acc += src[yy * w + reflect(x + dx, w as i64)];
                }
            }
            out[y as usize * w + x as usize] = acc / norm;
        }
    }
    out
}

fn diamond_square(w: usize, h: usize, roughness: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut n = 1usize;
    while n + 1 < w.max(h) {
        n *= 2;
    }
    let size = n + 1;
    let mut g = vec![0.0f64; size * size];
    for &(x, y) in &[(0, 0), (n, 0), (0, n), (n, n)] {
        g[y * size + x] = rng.gen_range(-1.0..1.0);
    }
    let mut step = n;
    let mut amp = 1.0;
    let decay = 0.5f64.powf(roughness);
    while step > 1 {
        let half = step / 2;
        for y in (half..size).step_by(step) {
            for x in (half..size).step_by(step) {
                let avg = (g[(y - half) * size + x - half]
                    + g[(y - half) * size + x + half]
                    + g[(y + half) * size + x - half]
                    + g[(y + half) * size + x + half])
                    / 4.0;
                g[y * size + x] = avg + amp * rng.gen_range(-1.0..1.0);
            }
        }
        for y in (0..size).step_by(half) {
            let x0 = if (y / half) % 2 == 0 { half } else { 0 };
            for x in (x0..size).step_by(step) {
                let mut sum = 0.0;
                let mut cnt = 0.0;
                if y >= half {
                    sum += g[(y - half) * size + x];
                    cnt += 1.0;
                }
                if y + half < size {
                    sum += g[(y + half) * size + x];
                    cnt += 1.0;
                }
                if x >= half {
                    sum += g[y * size + x - half];
                    cnt += 1.0;
                }
                if x + half < size {
                    sum += g[y * size + x + half];
                    cnt += 1.0;
                }
                g[y * size + x] = sum / cnt + amp * rng.gen_range(-1.0..1.0);
            }
        }
        step = half;
        amp *= decay;
    }
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        out.extend_from_slice(&g[y * size..y * size + w]);
    }
    out
}

pub fn generate(spec: &SynthSpec) -> Result<GrayImage> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pixels = match spec.kind {
        SynthKind::Flat => vec![128; w * h],
        SynthKind::NoisyFlat { amplitude } => {
            let a = i16::from(amplitude);
            (0..w * h)
                .map(|_| (128 + rng.gen_range(-a..=a)).clamp(0, 255) as u8)
                .collect()
        }
        SynthKind::UniformNoise => (0..w * h).map(|_| rng.gen()).collect(),
        SynthKind::SmoothedNoise { k } => {
            let noise: Vec<f64> = (0..w * h).map(|_| f64::from(rng.gen::<u8>())).collect();
            stretch(&box_filter(&noise, w, h, k))
        }
        SynthKind::Checker { period } => {
            return GrayImage::from_fn(w, h, |x, y| if (x / period + y / period) % 2 == 0 { 0 } else { 255 });
        }
        SynthKind::MidpointDisplacement { h: roughness } => stretch(&diamond_square(w, h, roughness, &mut rng)),
    };
    GrayImage::new(w, h, pixels)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of sample `j` in class `c`. Injective in `(c, j)` for indices below
/// 2^32 since splitmix64 is a bijection.
pub fn sample_seed(base_seed: u64, class: usize, sample: usize) -> u64 {
    base_seed ^ splitmix64(((class as u64) << 32) | (sample as u64 & 0xffff_ffff))
}

/// Builds a labeled dataset from class templates. Template seeds are ignored;
/// sample `j` of class `c` uses [`sample_seed`]. Class names are
/// `<index>_<label>` with a zero-padded index so that directory order matches
/// class ids.
pub fn make_synth_dataset(templates: &[SynthSpec], samples_per_class: usize, base_seed: u64) -> Result<LabeledDataset> {
    if templates.len() < 2 {
        return Err(Error::InvalidParameter("need at least 2 class templates".into()));
    }
    if samples_per_class < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 samples per class, got {samples_per_class}"
        )));
    }
    let mut ds = LabeledDataset::default();
    for (c, t) in templates.iter().enumerate() {
        let class_name = format!("{c:02}_{}", t.kind.label());
        for j in 0..samples_per_class {
            let spec = SynthSpec {
                seed: sample_seed(base_seed, c, j),
                ..*t
            };
            ds.samples.push(Sample {
                image: generate(&spec)?,
                class_id: c,
                name: format!("{class_name}/{j:04}"),
            });
        }
        ds.class_names.push(class_name);
    }
    Ok(ds)
}

/// The five-class set used by the end-to-end checks: noisy flat, box-smoothed
/// noise with k = 3 and k = 9, an 8-pixel checkerboard and uniform noise.
pub fn benchmark_templates(width: usize, height: usize) -> Vec<SynthSpec> {
    [
        SynthKind::NoisyFlat { amplitude: 8 },
        SynthKind::SmoothedNoise { k: 3 },
        SynthKind::SmoothedNoise { k: 9 },
        SynthKind::Checker { period: 8 },
        SynthKind::UniformNoise,
    ]
    .into_iter()
    .map(|kind| SynthSpec::new(kind, width, height, 0))
    .collect()
}
