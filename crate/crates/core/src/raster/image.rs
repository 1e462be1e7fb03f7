use std::collections::VecDeque;

use super::{RasterError, Result};

/// 8-bit grayscale raster, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(RasterError::InvalidDimensions {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, col: usize, row: usize) -> u8 {
        self.data[row * self.width + col]
    }
}

/// Foreground/background raster, row-major; `true` is ink.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != width * height {
            return Err(RasterError::InvalidDimensions {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Parses rows of text art where `#` (or `1`) is foreground and anything
    /// else is background. All rows must have the same length.
    pub fn from_art(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut data = Vec::with_capacity(width * height);
        for row in rows {
            assert_eq!(row.chars().count(), width, "ragged art row {row:?}");
            data.extend(row.chars().map(|c| c == '#' || c == '1'));
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn to_art(&self) -> String {
        let mut s = String::with_capacity((self.width + 1) * self.height);
        for row in 0..self.height {
            for col in 0..self.width {
                s.push(if self.get(col, row) { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        self.data[row * self.width + col]
    }

    /// Like [`get`](Self::get), but coordinates outside the image read as background.
    pub fn get_padded(&self, col: isize, row: isize) -> bool {
        if col < 0 || row < 0 || col as usize >= self.width || row as usize >= self.height {
            return false;
        }
        self.data[row as usize * self.width + col as usize]
    }

    pub fn set(&mut self, col: usize, row: usize, value: bool) {
        self.data[row * self.width + col] = value;
    }

    pub fn contains(&self, col: isize, row: isize) -> bool {
        col >= 0 && row >= 0 && (col as usize) < self.width && (row as usize) < self.height
    }

    pub fn foreground_count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn is_blank(&self) -> bool {
        !self.data.iter().any(|&b| b)
    }

    /// Foreground pixels as `(col, row)` in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % self.width, i / self.width))
    }

    /// True when every foreground pixel of `self` is foreground in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }

    /// Labels 8-connected foreground components. Returns one entry per pixel
    /// (`None` for background) and the component count. Labels are assigned
    /// in row-major order of each component's first pixel.
    pub fn component_labels8(&self) -> (Vec<Option<u32>>, usize) {
        let mut labels = vec![None; self.data.len()];
        let mut next = 0u32;
        let mut queue = VecDeque::new();
        for start in 0..self.data.len() {
            if !self.data[start] || labels[start].is_some() {
                continue;
            }
            labels[start] = Some(next);
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                let (col, row) = ((i % self.width) as isize, (i / self.width) as isize);
                for dr in -1..=1 {
                    for dc in -1..=1 {
                        let (c, r) = (col + dc, row + dr);
                        if (dr, dc) == (0, 0) || !self.get_padded(c, r) {
                            continue;
                        }
                        let j = r as usize * self.width + c as usize;
                        if labels[j].is_none() {
                            labels[j] = Some(next);
                            queue.push_back(j);
                        }
                    }
                }
            }
            next += 1;
        }
        (labels, next as usize)
    }
}

pub fn count_components8(img: &BinaryImage) -> usize {
    img.component_labels8().1
}
