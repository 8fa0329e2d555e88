//! Spread of the dimension estimate as the number of sphere centers grows.
//!
//!     cargo run --release --example sampling_stability

use volrad::cli::stability;
use volrad::pipeline::VrfdParams;
use volrad::synth::{generate, SynthKind, SynthSpec};

fn main() -> volrad::Result<()> {
    let img = generate(&SynthSpec::new(SynthKind::SmoothedNoise { k: 5 }, 200, 200, 3))?;
    let fractions = [0.005, 0.01, 0.025, 0.05, 0.10, 0.20];
    let rows = stability(&img, &VrfdParams::default(), &fractions, 30)?;
    println!("{:>9} {:>8} {:>9} {:>9}", "fraction", "centers", "mean D", "std D");
    for r in rows {
        println!("{:>9} {:>8} {:>9.5} {:>9.5}", r.fraction, r.n_centers, r.mean_d, r.std_d);
    }
    Ok(())
}
