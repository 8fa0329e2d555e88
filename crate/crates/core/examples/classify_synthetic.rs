//! Leave-one-out LDA comparison of all four descriptors on a synthetic
//! five-class dataset.
//!
//!     cargo run --release --example classify_synthetic [samples_per_class] [size]

use volrad::classify::{compare_methods, comparison_table};
use volrad::pipeline::{Method, VrfdParams};
use volrad::synth::{benchmark_templates, make_synth_dataset};

fn main() -> volrad::Result<()> {
    let mut args = std::env::args().skip(1);
    let per_class = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);
    let size = args.next().and_then(|a| a.parse().ok()).unwrap_or(64);
    let ds = make_synth_dataset(&benchmark_templates(size, size), per_class, 0)?;
    println!("{} classes x {} samples of {size}x{size}: {}", ds.n_classes(), per_class, ds.class_names.join(", "));
    let rows = compare_methods(&ds, &Method::ALL, &VrfdParams::default())?;
    print!("{}", comparison_table(&rows));
    let vrfd = rows.iter().find(|r| r.method == Method::Vrfd).expect("vrfd row");
    print!("{}", vrfd.confusion.to_csv(&ds.class_names));
    Ok(())
}
