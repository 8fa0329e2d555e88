//! Volume curve, fractal dimension and signature of one texture.
//!
//!     cargo run --release --example texture_signature [image.pgm]
//!
//! Without an argument a midpoint-displacement surface is generated.

use volrad::cloud::{HeightField, RadiiGrid};
use volrad::imgio::load_pgm;
use volrad::signature::{fractal_dimension, make_signature};
use volrad::synth::{generate, SynthKind, SynthSpec};
use volrad::vrfd::{log_log, volume_curve, SamplingPlan};

fn main() -> volrad::Result<()> {
    let img = match std::env::args().nth(1) {
        Some(path) => load_pgm(path)?,
        None => generate(&SynthSpec::new(SynthKind::MidpointDisplacement { h: 0.6 }, 200, 200, 7))?,
    };
    let field = HeightField::lift(&img);
    let grid = RadiiGrid::new(20)?;
    let plan = SamplingPlan::fraction(0.10, 0)?;
    let curve = volume_curve(&field, &plan, &grid)?;
    let loglog = log_log(&curve);

    println!("{}x{} image, {} centers, {} radii", img.width(), img.height(), curve.n_centers(), grid.len());
    for j in [0, 9, 49, 99, 199, grid.len() - 1] {
        println!(
            "  r = {:>7.3}  V(r) = {:>9.3}",
            f64::from(grid.sq_dists()[j]).sqrt(),
            curve.v()[j]
        );
    }
    println!("D = {:.4}", fractal_dimension(&loglog)?);
    let sig = make_signature(&loglog, 10)?;
    let alphas: Vec<String> = sig.alphas.iter().map(|a| format!("{a:.3}")).collect();
    println!("signature (m = 10, k = {}): {}", sig.k(), alphas.join(" "));
    Ok(())
}
