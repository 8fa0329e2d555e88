use std::fs;
use std::path::Path;

use volrad::imgio::{ingest_dataset, save_pgm, GrayImage};
use volrad::Error;

fn gradient(w: usize, h: usize, offset: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |x, y| ((x + 3 * y + offset) % 256) as u8).unwrap()
}

fn write(root: &Path, class: &str, file: &str, img: &GrayImage) {
    let dir = root.join(class);
    fs::create_dir_all(&dir).unwrap();
    save_pgm(img, dir.join(file)).unwrap();
}

#[test]
fn tiles_forty_large_sources() {
    let tmp = tempfile::tempdir().unwrap();
    for c in 0..40 {
        write(tmp.path(), &format!("D{c:03}"), "src.pgm", &gradient(640, 640, c));
    }
    let ds = ingest_dataset(tmp.path(), Some((200, 200))).unwrap();
    assert_eq!(ds.n_classes(), 40);
    assert_eq!(ds.len(), 360);
    assert_eq!(ds.class_counts(), vec![9; 40]);
    // tile 4 of class 2 starts at (200, 200)
    let s = &ds.samples[2 * 9 + 4];
    assert_eq!(s.class_id, 2);
    assert_eq!(s.name, "D002/src.pgm#4");
    assert_eq!(s.image.get(0, 0), ((200 + 600 + 2) % 256) as u8);
}

#[test]
fn one_sample_per_file_without_tiling() {
    let tmp = tempfile::tempdir().unwrap();
    for c in 0..40 {
        for i in 0..10 {
            write(tmp.path(), &format!("class{c:02}"), &format!("{i}.pgm"), &gradient(200, 200, c * 10 + i));
        }
    }
    let ds = ingest_dataset(tmp.path(), None).unwrap();
    assert_eq!(ds.len(), 400);
    assert_eq!(ds.class_counts(), vec![10; 40]);
    assert!(ds.samples.iter().all(|s| s.image.width() == 200 && s.image.height() == 200));
    ds.validate(3).unwrap();
}

#[test]
fn ordering_is_lexicographic_and_stable() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "zebra", "b.pgm", &gradient(4, 4, 0));
    write(tmp.path(), "zebra", "a.pgm", &gradient(4, 4, 1));
    write(tmp.path(), "apple", "x.pgm", &gradient(4, 4, 2));
    fs::write(tmp.path().join("zebra").join("notes.txt"), "ignored").unwrap();
    fs::write(tmp.path().join("README"), "ignored").unwrap();
    let ds = ingest_dataset(tmp.path(), None).unwrap();
    assert_eq!(ds.class_names, vec!["apple", "zebra"]);
    let names: Vec<&str> = ds.samples.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, vec!["apple/x.pgm", "zebra/a.pgm", "zebra/b.pgm"]);
    assert_eq!(ds, ingest_dataset(tmp.path(), None).unwrap());
}

#[test]
fn small_images_contribute_no_tiles() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "a", "big.pgm", &gradient(64, 64, 0));
    write(tmp.path(), "a", "small.pgm", &gradient(16, 16, 0));
    write(tmp.path(), "b", "big.pgm", &gradient(64, 32, 0));
    let ds = ingest_dataset(tmp.path(), Some((32, 32))).unwrap();
    assert_eq!(ds.class_counts(), vec![4, 2]);
}

#[test]
fn empty_class_directory_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "a", "1.pgm", &gradient(8, 8, 0));
    fs::create_dir_all(tmp.path().join("b")).unwrap();
    let err = ingest_dataset(tmp.path(), None).unwrap_err();
    assert!(matches!(err, Error::Dataset(ref m) if m.contains("no PGM")), "{err}");
}

#[test]
fn unreadable_file_names_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "a", "1.pgm", &gradient(8, 8, 0));
    fs::create_dir_all(tmp.path().join("b")).unwrap();
    fs::write(tmp.path().join("b").join("broken.pgm"), b"P6\n1 1\n255\n\0\0\0").unwrap();
    let err = ingest_dataset(tmp.path(), None).unwrap_err();
    assert!(err.to_string().contains("broken.pgm"), "{err}");
}

#[test]
fn validation_names_small_classes() {
    let tmp = tempfile::tempdir().unwrap();
    for i in 0..3 {
        write(tmp.path(), "many", &format!("{i}.pgm"), &gradient(8, 8, i));
    }
    write(tmp.path(), "lonely", "0.pgm", &gradient(8, 8, 9));
    let ds = ingest_dataset(tmp.path(), None).unwrap();
    let err = ds.validate(3).unwrap_err().to_string();
    assert!(err.contains("'lonely'"), "{err}");
}

#[test]
fn written_datasets_read_back() {
    let tmp = tempfile::tempdir().unwrap();
    let ds = volrad::synth::make_synth_dataset(&volrad::synth::benchmark_templates(24, 20), 3, 11).unwrap();
    ds.write_to_dir(tmp.path()).unwrap();
    let back = ingest_dataset(tmp.path(), None).unwrap();
    assert_eq!(back.class_names, ds.class_names);
    assert_eq!(back.labels(), ds.labels());
    for (a, b) in back.samples.iter().zip(&ds.samples) {
        assert_eq!(a.image, b.image);
    }
}
