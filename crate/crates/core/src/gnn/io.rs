//! `TGNN` model files, little-endian:
//!
//! ```text
//! "TGNN" | u32 version | u32 F | u32 hidden | u32 C | W₁ b₁ W₂ b₂ W₃ b₃ as f64, row-major
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Cursor, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::{GcnLayer, GnnError, GnnModel, Result};
use crate::numerics::Matrix;
use crate::Scalar;

pub const MODEL_MAGIC: [u8; 4] = *b"TGNN";
pub const MODEL_VERSION: u32 = 1;

pub fn write_model<T: Scalar, W: Write>(model: &GnnModel<T>, mut w: W) -> Result<()> {
    w.write_all(&MODEL_MAGIC)?;
    w.write_u32::<LittleEndian>(MODEL_VERSION)?;
    for dim in [model.feature_width(), model.hidden(), model.num_classes()] {
        w.write_u32::<LittleEndian>(dim as u32)?;
    }
    for param in model.params() {
        for &v in param.as_slice() {
            w.write_f64::<LittleEndian>(v.to_f64_lossy())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn save_model<T: Scalar>(model: &GnnModel<T>, path: impl AsRef<Path>) -> Result<()> {
    write_model(model, BufWriter::new(File::create(path)?))
}

fn corrupt(e: std::io::Error) -> GnnError {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        GnnError::CorruptRecord("unexpected end of file".into())
    } else {
        GnnError::Io(e)
    }
}

fn read_matrix<T: Scalar>(cur: &mut Cursor<&[u8]>, rows: usize, cols: usize) -> Result<Matrix<T>> {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let v = cur.read_f64::<LittleEndian>().map_err(corrupt)?;
        if !v.is_finite() {
            return Err(GnnError::CorruptRecord(format!("non-finite parameter {v}")));
        }
        data.push(T::lit(v));
    }
    Ok(Matrix::from_vec(rows, cols, data)?)
}

pub fn read_model<T: Scalar>(bytes: &[u8]) -> Result<GnnModel<T>> {
    let mut cur = Cursor::new(bytes);
    let mut magic = [0u8; 4];
    cur.read_exact(&mut magic).map_err(corrupt)?;
    if magic != MODEL_MAGIC {
        return Err(GnnError::BadMagic(magic));
    }
    let version = cur.read_u32::<LittleEndian>().map_err(corrupt)?;
    if version != MODEL_VERSION {
        return Err(GnnError::FormatVersionMismatch {
            found: version,
            expected: MODEL_VERSION,
        });
    }
    let mut dims = [0usize; 3];
    for d in &mut dims {
        *d = cur.read_u32::<LittleEndian>().map_err(corrupt)? as usize;
    }
    let [f, h, c] = dims;
    if f == 0 || h == 0 || c == 0 {
        return Err(GnnError::CorruptRecord(format!(
            "zero dimension in {f}×{h}×{c}"
        )));
    }
    let expected = 8 * (f * h + h + h * h + h + h * c + c) as u64;
    let remaining = bytes.len() as u64 - cur.position();
    if remaining != expected {
        return Err(GnnError::CorruptRecord(format!(
            "expected {expected} parameter bytes, found {remaining}"
        )));
    }
    let mut layer = |rows, cols| -> Result<GcnLayer<T>> {
        Ok(GcnLayer {
            weight: read_matrix(&mut cur, rows, cols)?,
            bias: read_matrix(&mut cur, 1, cols)?,
        })
    };
    let layers = [layer(f, h)?, layer(h, h)?, layer(h, c)?];
    Ok(GnnModel::from_layers(layers))
}

pub fn load_model<T: Scalar>(path: impl AsRef<Path>) -> Result<GnnModel<T>> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    read_model(&bytes)
}
