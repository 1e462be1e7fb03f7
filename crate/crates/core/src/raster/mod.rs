//! Raster input: IDX loading, binarization and thinning to one-pixel skeletons.

mod idx;
mod image;
mod thin;
mod threshold;

pub use idx::{load_idx_images, load_idx_labels, parse_idx_images, parse_idx_labels};
pub use image::{count_components8, BinaryImage, GrayImage};
pub use thin::thin;
pub use threshold::{binarize, otsu_threshold, DEFAULT_THRESHOLD};

use std::path::PathBuf;

use thiserror::Error;

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad IDX magic: expected {expected:#010x}, found {found:#010x}")]
    BadMagic { expected: u32, found: u32 },
    #[error("truncated IDX data: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("label {label} at index {index} exceeds {classes} classes")]
    LabelOutOfRange {
        index: usize,
        label: u8,
        classes: usize,
    },
    #[error("invalid image dimensions {width}x{height} for {len} pixels")]
    InvalidDimensions {
        width: usize,
        height: usize,
        len: usize,
    },
}

pub type Result<T> = std::result::Result<T, RasterError>;
