//! Writes large synthetic sources in the `root/<class>/<image>.pgm` layout and
//! ingests them as 200x200 tiles.
//!
//!     cargo run --release --example dataset_tiling [root]

use std::fs;
use std::path::PathBuf;

use volrad::imgio::{ingest_dataset, read_pgm, save_pgm, write_pgm};
use volrad::synth::{generate, SynthKind, SynthSpec};

fn main() -> volrad::Result<()> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("volrad-tiles"));
    let kinds = [
        SynthKind::MidpointDisplacement { h: 0.3 },
        SynthKind::MidpointDisplacement { h: 0.8 },
        SynthKind::SmoothedNoise { k: 7 },
    ];
    for (c, kind) in kinds.iter().enumerate() {
        let dir = root.join(format!("{c:02}_{}", kind.label()));
        fs::create_dir_all(&dir).map_err(|source| volrad::Error::Output { path: dir.clone(), source })?;
        let img = generate(&SynthSpec::new(*kind, 640, 640, c as u64))?;
        assert_eq!(read_pgm(&write_pgm(&img))?, img);
        save_pgm(&img, dir.join("source.pgm"))?;
    }
    let ds = ingest_dataset(&root, Some((200, 200)))?;
    println!("{} samples from {}", ds.len(), root.display());
    for (name, count) in ds.class_names.iter().zip(ds.class_counts()) {
        println!("  {name}: {count} tiles");
    }
    Ok(())
}
