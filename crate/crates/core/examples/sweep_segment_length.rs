//! Classification accuracy as a function of the signature segment length m.
//!
//!     cargo run --release --example sweep_segment_length

use volrad::cli::sweep_m;
use volrad::pipeline::VrfdParams;
use volrad::synth::{benchmark_templates, make_synth_dataset};

fn main() -> volrad::Result<()> {
    let ds = make_synth_dataset(&benchmark_templates(64, 64), 10, 1)?;
    let rows = sweep_m(&ds, &VrfdParams::default(), &[3, 5, 10, 15, 20, 30, 50])?;
    println!("{:>4} {:>4} {:>10}", "m", "k", "success %");
    for r in rows {
        println!("{:>4} {:>4} {:>10.2}", r.m, r.k, r.accuracy_percent);
    }
    Ok(())
}
