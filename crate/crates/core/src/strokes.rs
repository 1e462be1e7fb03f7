//! Online pen-stroke samples stored as JSON Lines, one sample per line:
//!
//! ```text
//! {"label": 3, "strokes": [[[0.0, 1.0], [0.5, 1.2]], [[0.2, 0.0], [0.9, 0.1]]]}
//! ```
//!
//! Coordinates are y-up in any consistent unit.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chaincode::{Point, Trajectory};
use crate::Scalar;

#[derive(Debug, Error)]
pub enum StrokeError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: non-finite coordinate")]
    NonFinite { line: usize },
}

pub type Result<T> = std::result::Result<T, StrokeError>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrokeSample {
    pub label: usize,
    pub strokes: Vec<Vec<[f64; 2]>>,
}

impl StrokeSample {
    /// All strokes joined in order; each pen-up jump becomes one segment.
    pub fn trajectory<T: Scalar>(&self) -> Trajectory<T> {
        Trajectory::new(
            self.strokes
                .iter()
                .flatten()
                .map(|&[x, y]| Point::new(T::lit(x), T::lit(y))),
        )
        .with_label(self.label)
    }

    pub fn point_count(&self) -> usize {
        self.strokes.iter().map(Vec::len).sum()
    }
}

/// Parses JSON Lines text; blank lines are ignored. Line numbers are 1-based.
pub fn parse_strokes<R: BufRead>(reader: R) -> Result<Vec<StrokeSample>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let sample: StrokeSample =
            serde_json::from_str(&line).map_err(|source| StrokeError::Json {
                line: i + 1,
                source,
            })?;
        if sample
            .strokes
            .iter()
            .flatten()
            .flatten()
            .any(|v| !v.is_finite())
        {
            return Err(StrokeError::NonFinite { line: i + 1 });
        }
        out.push(sample);
    }
    Ok(out)
}

pub fn load_strokes(path: impl AsRef<Path>) -> Result<Vec<StrokeSample>> {
    parse_strokes(BufReader::new(File::open(path)?))
}

pub fn write_strokes<W: Write>(samples: &[StrokeSample], mut w: W) -> Result<()> {
    for s in samples {
        serde_json::to_writer(&mut w, s).map_err(|source| StrokeError::Json { line: 0, source })?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
