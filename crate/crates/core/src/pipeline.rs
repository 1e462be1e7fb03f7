//! End-to-end sample conversion: raster image or pen strokes to a labeled
//! trajectory graph.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chaincode::{featurize, to_trajectory, ChainCode, ChainCodeError, Profile, Trajectory};
use crate::graphdata::{build_graph, GraphError, TrajectoryGraph};
use crate::raster::{binarize, otsu_threshold, thin, BinaryImage, GrayImage, DEFAULT_THRESHOLD};
use crate::strokes::StrokeSample;
use crate::trace::{recover_order, PixelPath};
use crate::Scalar;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("skeleton is empty")]
    EmptySkeleton,
    #[error(transparent)]
    ChainCode(#[from] ChainCodeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl PipelineError {
    /// True for inputs that carry no usable trajectory (blank images, single
    /// dots); callers typically skip these with a warning.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            PipelineError::EmptySkeleton
                | PipelineError::ChainCode(
                    ChainCodeError::EmptyInput | ChainCodeError::DegenerateTrajectory
                )
        )
    }
}

pub type Result<T> = std::result::Result<T, PipelineError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold {
    Fixed(u8),
    Otsu,
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::Fixed(DEFAULT_THRESHOLD)
    }
}

impl Threshold {
    pub fn level(self, img: &GrayImage) -> u8 {
        match self {
            Threshold::Fixed(t) => t,
            Threshold::Otsu => otsu_threshold(img),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Fixed(t) => write!(f, "{t}"),
            Threshold::Otsu => f.write_str("otsu"),
        }
    }
}

impl FromStr for Threshold {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("otsu") {
            return Ok(Threshold::Otsu);
        }
        s.parse::<u8>()
            .map(Threshold::Fixed)
            .map_err(|_| format!("threshold must be 0..=255 or \"otsu\", got {s:?}"))
    }
}

/// Every intermediate stage of converting one raster image.
#[derive(Clone, Debug)]
pub struct OfflineTrace<T> {
    pub binary: BinaryImage,
    pub skeleton: BinaryImage,
    pub paths: Vec<PixelPath>,
    pub trajectory: Trajectory<T>,
    pub code: ChainCode,
    pub resampled: Trajectory<T>,
}

pub fn trace_image<T: Scalar>(
    img: &GrayImage,
    threshold: Threshold,
    profile: Profile,
) -> Result<OfflineTrace<T>> {
    let binary = binarize(img, threshold.level(img));
    let skeleton = thin(&binary);
    if skeleton.is_blank() {
        return Err(PipelineError::EmptySkeleton);
    }
    let paths = recover_order(&skeleton);
    let trajectory = to_trajectory(&paths, img.height())?;
    let (code, resampled) = featurize(&trajectory, profile)?;
    Ok(OfflineTrace {
        binary,
        skeleton,
        paths,
        trajectory,
        code,
        resampled,
    })
}

pub fn image_to_graph<T: Scalar>(
    img: &GrayImage,
    label: usize,
    threshold: Threshold,
    profile: Profile,
) -> Result<TrajectoryGraph<T>> {
    let t = trace_image::<T>(img, threshold, profile)?;
    Ok(build_graph(&t.code, &t.resampled, label)?)
}

/// Chain code and resampled trajectory of one stroke sample.
pub fn trace_strokes<T: Scalar>(
    sample: &StrokeSample,
    profile: Profile,
) -> Result<(ChainCode, Trajectory<T>)> {
    let traj = sample.trajectory::<T>();
    if traj.is_empty() {
        return Err(ChainCodeError::EmptyInput.into());
    }
    Ok(featurize(&traj, profile)?)
}

pub fn strokes_to_graph<T: Scalar>(
    sample: &StrokeSample,
    profile: Profile,
) -> Result<TrajectoryGraph<T>> {
    let (code, resampled) = trace_strokes::<T>(sample, profile)?;
    Ok(build_graph(&code, &resampled, sample.label)?)
}
