//! Grayscale rasters, PGM (P2/P5) encoding and labeled dataset ingestion.
//!
//! Datasets live on disk as `root/<class_name>/<image>.pgm`. Class ids follow
//! the lexicographic order of the class directories.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, PgmError, Result};

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Copies the `w`x`h` window whose top-left corner is `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<GrayImage> {
        if x0 + w > self.width || y0 + h > self.height {
            return Err(Error::InvalidParameter(format!(
                "crop {w}x{h}+{x0}+{y0} exceeds {}x{} image",
                self.width, self.height
            )));
        }
        let mut pixels = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            let row = y * self.width;
            pixels.extend_from_slice(&self.pixels[row + x0..row + x0 + w]);
        }
        GrayImage::new(w, h, pixels)
    }

    /// Rotates the raster by 90 degrees counter-clockwise.
    pub fn rotate90(&self) -> GrayImage {
        let (w, h) = (self.height, self.width);
        let mut pixels = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                // destination (x, y) takes source (w_src - 1 - y, x)
                pixels.push(self.get(self.width - 1 - y, x));
            }
        }
        GrayImage {
            width: w,
            height: h,
            pixels,
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    /// Reads an unsigned decimal token; returns the value and its start offset.
    fn number(&mut self) -> Result<(u64, usize), PgmError> {
        self.skip_separators();
        let start = self.pos;
        if start >= self.bytes.len() {
            return Err(PgmError::Truncated { offset: start });
        }
        let mut value: u64 = 0;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            value = value
                .saturating_mul(10)
                .saturating_add(u64::from(self.bytes[self.pos] - b'0'));
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PgmError::BadToken { offset: start });
        }
        Ok((value, start))
    }
}

/// Decodes a P2 (ASCII) or P5 (binary) PGM. Samples are returned as stored;
/// a maxval below 255 is not rescaled.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    if bytes.len() < 2 || bytes[0] != b'P' || !matches!(bytes[1], b'2' | b'5') {
        return Err(PgmError::BadMagic { offset: 0 });
    }
    let binary = bytes[1] == b'5';
    let mut cur = Cursor { bytes, pos: 2 };
    if cur.pos < bytes.len() && !bytes[cur.pos].is_ascii_whitespace() && bytes[cur.pos] != b'#' {
        return Err(PgmError::BadMagic { offset: 0 });
    }

    let (width, w_off) = cur.number()?;
    if width == 0 {
        return Err(PgmError::ZeroDimension { offset: w_off });
    }
    let (height, h_off) = cur.number()?;
    if height == 0 {
        return Err(PgmError::ZeroDimension { offset: h_off });
    }
    let (maxval, m_off) = cur.number()?;
    if maxval == 0 || maxval > 255 {
        return Err(PgmError::BadMaxval {
            offset: m_off,
            maxval,
        });
    }
    let count = usize::try_from(width.saturating_mul(height)).map_err(|_| PgmError::BadToken { offset: w_off })?;

    let pixels = if binary {
        // exactly one whitespace byte separates maxval from the raster
        if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
            return Err(PgmError::Truncated { offset: cur.pos });
        }
        let start = cur.pos + 1;
        let end = start.checked_add(count).filter(|&e| e <= bytes.len());
        let Some(end) = end else {
            return Err(PgmError::Truncated { offset: bytes.len() });
        };
        let raster = &bytes[start..end];
        if let Some(i) = raster.iter().position(|&v| u64::from(v) > maxval) {
            return Err(PgmError::SampleOutOfRange {
                offset: start + i,
                value: u64::from(raster[i]),
                maxval,
            });
        }
        raster.to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        for _ in 0..count {
            let (value, off) = cur.number()?;
            if value > maxval {
                return Err(PgmError::SampleOutOfRange { offset: off, value, maxval });
            }
            pixels.push(value as u8);
        }
        pixels
    };

    Ok(GrayImage {
        width: width as usize,
        height: height as usize,
        pixels,
    })
}

/// Encodes as binary P5 with maxval 255.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.pixels);
    out
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Input {
        path: path.to_path_buf(),
        source,
    })?;
    read_pgm(&bytes).map_err(|source| Error::ImageFile {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = fs::File::create(path).map_err(|source| Error::Output {
        path: path.to_path_buf(),
        source,
    })?;
    f.write_all(&write_pgm(img)).map_err(|source| Error::Output {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub image: GrayImage,
    pub class_id: usize,
    pub name: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledDataset {
    pub samples: Vec<Sample>,
    pub class_names: Vec<String>,
}

impl LabeledDataset {
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.class_id).collect()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_names.len()];
        for s in &self.samples {
            counts[s.class_id] += 1;
        }
        counts
    }

    /// Checks that there are at least two classes and that every class holds
    /// at least `min_per_class` samples. The error names the offending class.
    pub fn validate(&self, min_per_class: usize) -> Result<()> {
        if self.class_names.len() < 2 {
            return Err(Error::Dataset(format!(
                "need at least 2 classes, found {}",
                self.class_names.len()
            )));
        }
        if let Some(s) = self.samples.iter().find(|s| s.class_id >= self.class_names.len()) {
            return Err(Error::Dataset(format!(
                "sample {} has class id {} but only {} classes exist",
                s.name,
                s.class_id,
                self.class_names.len()
            )));
        }
        for (name, count) in self.class_names.iter().zip(self.class_counts()) {
            if count < min_per_class {
                return Err(Error::Dataset(format!(
                    "class '{name}' has {count} sample(s); at least {min_per_class} required"
                )));
            }
        }
        Ok(())
    }

    /// Writes the dataset as `root/<class_name>/<index>.pgm`.
    pub fn write_to_dir(&self, root: impl AsRef<Path>) -> Result<()> {
        let root = root.as_ref();
        let mut next = vec![0usize; self.class_names.len()];
        for s in &self.samples {
            let dir = root.join(&self.class_names[s.class_id]);
            fs::create_dir_all(&dir).map_err(|source| Error::Output {
                path: dir.clone(),
                source,
            })?;
            save_pgm(&s.image, dir.join(format!("{:04}.pgm", next[s.class_id])))?;
            next[s.class_id] += 1;
        }
        Ok(())
    }
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let rd = fs::read_dir(dir).map_err(|source| Error::Input {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for entry in rd {
        let entry = entry.map_err(|source| Error::Input {
            path: dir.to_path_buf(),
            source,
        })?;
        out.push(entry.path());
    }
    out.sort();
    Ok(out)
}

fn is_pgm(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

/// Non-overlapping `tw`x`th` tiles in row-major order; partial edge tiles are dropped.
pub fn tiles(img: &GrayImage, tw: usize, th: usize) -> Result<Vec<GrayImage>> {
    if tw == 0 || th == 0 {
        return Err(Error::InvalidParameter("tile size must be positive".into()));
    }
    let mut out = Vec::new();
    for ty in 0..img.height / th {
        for tx in 0..img.width / tw {
            out.push(img.crop(tx * tw, ty * th, tw, th)?);
        }
    }
    Ok(out)
}

/// Loads `root/<class>/<image>.pgm`, optionally cutting each image into tiles.
pub fn ingest_dataset(root: impl AsRef<Path>, tile: Option<(usize, usize)>) -> Result<LabeledDataset> {
    let root = root.as_ref();
    let class_dirs: Vec<PathBuf> = sorted_entries(root)?.into_iter().filter(|p| p.is_dir()).collect();
    if class_dirs.is_empty() {
        return Err(Error::Dataset(format!(
            "{} contains no class directories",
            root.display()
        )));
    }

    let mut ds = LabeledDataset::default();
    for (class_id, dir) in class_dirs.iter().enumerate() {
        let class_name = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let files: Vec<PathBuf> = sorted_entries(dir)?.into_iter().filter(|p| is_pgm(p)).collect();
        if files.is_empty() {
            return Err(Error::Dataset(format!(
                "class directory {} contains no PGM files",
                dir.display()
            )));
        }
        for file in files {
            let img = load_pgm(&file)?;
            let file_name = file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let base = format!("{class_name}/{file_name}");
            match tile {
                None => ds.samples.push(Sample {
                    image: img,
                    class_id,
                    name: base,
                }),
                Some((tw, th)) => {
                    let cut = tiles(&img, tw, th)?;
                    if cut.is_empty() {
                        log::warn!(
                            "{}: {}x{} image is smaller than the {tw}x{th} tile; skipped",
                            file.display(),
                            img.width(),
                            img.height()
                        );
                    }
                    for (i, t) in cut.into_iter().enumerate() {
                        ds.samples.push(Sample {
                            image: t,
                            class_id,
                            name: format!("{base}#{i}"),
                        });
                    }
                }
            }
        }
        ds.class_names.push(class_name);
    }
    Ok(ds)
}
