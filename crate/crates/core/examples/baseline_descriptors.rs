//! Fourier, co-occurrence and Gabor descriptors of a few synthetic textures.
//!
//!     cargo run --release --example baseline_descriptors

use volrad::baselines::{cooccurrence_descriptors, fourier_descriptors, gabor_descriptors};
use volrad::synth::{generate, SynthKind, SynthSpec};

fn main() -> volrad::Result<()> {
    for kind in [
        SynthKind::Checker { period: 8 },
        SynthKind::SmoothedNoise { k: 9 },
        SynthKind::UniformNoise,
    ] {
        let img = generate(&SynthSpec::new(kind, 128, 128, 1))?;
        let fourier = fourier_descriptors(&img)?;
        let glcm = cooccurrence_descriptors(&img)?;
        let gabor = gabor_descriptors(&img)?;
        println!("{}", kind.label());
        println!("  fourier rings 1..5: {:?}", &fourier.values[..5].iter().map(|v| v.round()).collect::<Vec<_>>());
        println!("  glcm d=1 (energy, entropy): {:?}", glcm.values[..8].chunks(2).map(|p| (round3(p[0]), round3(p[1]))).collect::<Vec<_>>());
        println!("  gabor energy per scale (0 deg): {:?}", gabor.values.iter().step_by(4).map(|v| v.round()).collect::<Vec<_>>());
    }
    Ok(())
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}
