//! Image-to-feature-vector glue shared by the classifier harness and the CLI.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{cooccurrence_descriptors, fourier_descriptors, gabor_descriptors, FeatureVector};
use crate::cloud::{HeightField, RadiiGrid};
use crate::error::{Error, Result};
use crate::imgio::GrayImage;
use crate::signature::{fractal_dimension, make_signature};
use crate::vrfd::{log_log, volume_curve, CenterCount, SamplingPlan, VolumeCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Vrfd,
    Fourier,
    Glcm,
    Gabor,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Glcm, Method::Fourier, Method::Gabor, Method::Vrfd];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Vrfd => "vrfd",
            Method::Fourier => "fourier",
            Method::Glcm => "glcm",
            Method::Gabor => "gabor",
        }
    }

    /// Row label used in comparison tables.
    pub fn display_name(self) -> &'static str {
        match self {
            Method::Vrfd => "Volume-radius signature",
            Method::Fourier => "Fourier descriptors",
            Method::Glcm => "Co-occurrence matrices",
            Method::Gabor => "Gabor filters",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vrfd" => Ok(Method::Vrfd),
            "fourier" => Ok(Method::Fourier),
            "glcm" | "cooccurrence" => Ok(Method::Glcm),
            "gabor" => Ok(Method::Gabor),
            other => Err(Error::InvalidParameter(format!(
                "unknown method '{other}' (expected vrfd, fourier, glcm or gabor)"
            ))),
        }
    }
}

/// Parameters of the volume-radius pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VrfdParams {
    pub r_max: u32,
    pub centers: CenterCount,
    pub m: usize,
    pub seed: u64,
    pub z_scale: u32,
}

impl Default for VrfdParams {
    fn default() -> Self {
        Self {
            r_max: 20,
            centers: CenterCount::Fraction(0.10),
            m: 10,
            seed: 0,
            z_scale: 1,
        }
    }
}

impl VrfdParams {
    pub fn plan(&self) -> SamplingPlan {
        SamplingPlan {
            centers: self.centers,
            seed: self.seed,
        }
    }

    pub fn grid(&self) -> Result<RadiiGrid> {
        RadiiGrid::new(self.r_max)
    }

    pub fn volume_curve(&self, img: &GrayImage) -> Result<VolumeCurve> {
        let field = HeightField::lift_scaled(img, self.z_scale);
        volume_curve(&field, &self.plan(), &self.grid()?)
    }

    /// Full-curve dimension estimate for one image.
    pub fn dimension(&self, img: &GrayImage) -> Result<f64> {
        fractal_dimension(&log_log(&self.volume_curve(img)?))
    }
}

pub fn extract(img: &GrayImage, method: Method, params: &VrfdParams) -> Result<FeatureVector> {
    match method {
        Method::Vrfd => {
            let curve = params.volume_curve(img)?;
            let sig = make_signature(&log_log(&curve), params.m)?;
            Ok(FeatureVector::new(sig.alphas, "vrfd"))
        }
        Method::Fourier => fourier_descriptors(img),
        Method::Glcm => cooccurrence_descriptors(img),
        Method::Gabor => gabor_descriptors(img),
    }
}

/// Feature vectors for many images, in input order.
pub fn extract_all(images: &[&GrayImage], method: Method, params: &VrfdParams) -> Result<Vec<FeatureVector>> {
    images.par_iter().map(|img| extract(img, method, params)).collect()
}
