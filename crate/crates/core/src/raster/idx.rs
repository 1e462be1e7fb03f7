use std::io::{Cursor, Read};
use std::path::Path;

use byteorder::{BigEndian, ReadBytesExt};
use flate2::read::GzDecoder;

use super::{GrayImage, RasterError, Result, IDX_IMAGES_MAGIC, IDX_LABELS_MAGIC};

const GZIP_PREFIX: [u8; 2] = [0x1f, 0x8b];

/// Reads a file, transparently inflating it when it starts with the gzip magic.
fn read_maybe_gzip(path: &Path) -> Result<Vec<u8>> {
    let io_err = |source| RasterError::Io {
        path: path.to_path_buf(),
        source,
    };
    let raw = std::fs::read(path).map_err(io_err)?;
    if raw.starts_with(&GZIP_PREFIX) {
        let mut out = Vec::new();
        GzDecoder::new(raw.as_slice())
            .read_to_end(&mut out)
            .map_err(io_err)?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

fn read_header(bytes: &[u8], magic: u32, dims: usize) -> Result<(Vec<usize>, usize)> {
    let header_len = 4 * (1 + dims);
    if bytes.len() < header_len {
        return Err(RasterError::Truncated {
            expected: header_len,
            actual: bytes.len(),
        });
    }
    let mut cur = Cursor::new(bytes);
    let found = cur.read_u32::<BigEndian>().expect("length checked");
    if found != magic {
        return Err(RasterError::BadMagic {
            expected: magic,
            found,
        });
    }
    let sizes = (0..dims)
        .map(|_| cur.read_u32::<BigEndian>().expect("length checked") as usize)
        .collect();
    Ok((sizes, header_len))
}

/// Parses an in-memory (already inflated) IDX image file.
pub fn parse_idx_images(bytes: &[u8]) -> Result<Vec<GrayImage>> {
    let (sizes, offset) = read_header(bytes, IDX_IMAGES_MAGIC, 3)?;
    let (count, rows, cols) = (sizes[0], sizes[1], sizes[2]);
    let per_image = rows * cols;
    let expected = offset + count * per_image;
    if bytes.len() < expected {
        return Err(RasterError::Truncated {
            expected,
            actual: bytes.len(),
        });
    }
    bytes[offset..expected]
        .chunks_exact(per_image.max(1))
        .take(count)
        .map(|px| GrayImage::new(cols, rows, px.to_vec()))
        .collect()
}

/// Parses an in-memory IDX label file, rejecting labels `>= num_classes`.
pub fn parse_idx_labels(bytes: &[u8], num_classes: usize) -> Result<Vec<u8>> {
    let (sizes, offset) = read_header(bytes, IDX_LABELS_MAGIC, 1)?;
    let expected = offset + sizes[0];
    if bytes.len() < expected {
        return Err(RasterError::Truncated {
            expected,
            actual: bytes.len(),
        });
    }
    let labels = bytes[offset..expected].to_vec();
    if let Some((index, &label)) = labels
        .iter()
        .enumerate()
        .find(|(_, &l)| l as usize >= num_classes)
    {
        return Err(RasterError::LabelOutOfRange {
            index,
            label,
            classes: num_classes,
        });
    }
    Ok(labels)
}

/// Loads an IDX image file (magic `0x00000803`), optionally gzip-compressed.
pub fn load_idx_images(path: impl AsRef<Path>) -> Result<Vec<GrayImage>> {
    parse_idx_images(&read_maybe_gzip(path.as_ref())?)
}

/// Loads an IDX label file (magic `0x00000801`), optionally gzip-compressed.
pub fn load_idx_labels(path: impl AsRef<Path>, num_classes: usize) -> Result<Vec<u8>> {
    parse_idx_labels(&read_maybe_gzip(path.as_ref())?, num_classes)
}
