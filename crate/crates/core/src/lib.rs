//! Texture characterization by volume-radius fractal dimension.
//!
//! A grayscale texture is lifted to a set of integer lattice points
//! `(y, x, gray)`. Spheres of growing radius are centered on a random subset
//! of those points and the mean number of points each sphere intercepts gives
//! the occupied-volume curve `V(r)`. The slope of `log V` against `log r` is the
//! fractal dimension; slopes of consecutive fixed-length pieces of that curve
//! form the texture signature.
//!
//! The crate also provides the usual comparison descriptors (Fourier ring
//! energies, co-occurrence energy/entropy, Gabor filter-bank energies), an LDA
//! classifier evaluated with leave-one-out cross-validation, a synthetic
//! texture generator and PGM dataset I/O.
//!
//! ```no_run
//! use volrad::{cloud::{HeightField, RadiiGrid}, imgio, signature, vrfd::{self, SamplingPlan}};
//!
//! let img = imgio::load_pgm("texture.pgm")?;
//! let field = HeightField::lift(&img);
//! let grid = RadiiGrid::new(20)?;
//! let plan = SamplingPlan::fraction(0.10, 0)?;
//! let curve = vrfd::volume_curve(&field, &plan, &grid)?;
//! let loglog = vrfd::log_log(&curve);
//! let d = signature::fractal_dimension(&loglog)?;
//! let phi = signature::make_signature(&loglog, 10)?;
//! println!("D = {d:.4}, k = {}", phi.k());
//! # Ok::<(), volrad::Error>(())
//! ```

pub mod baselines;
pub mod classify;
pub mod cli;
pub mod cloud;
mod error;
pub mod imgio;
pub mod pipeline;
pub mod signature;
pub mod synth;
pub mod vrfd;

pub use error::{Error, PgmError, Result};
