//! Drawing-order recovery on thinned images.
//!
//! A path starts at the top-left endpoint (a pixel with at most one
//! foreground neighbor), or at the top-left pixel when there is no endpoint.
//! Each step moves to the unvisited 8-neighbor whose direction deviates least
//! from the previous step. When a path runs out of unvisited neighbors and
//! pixels remain, a new path starts from the remaining pixels by the same rule.

use std::fmt::Write as _;

use thiserror::Error;

use crate::raster::BinaryImage;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("pixel ({col}, {row}) outside {width}x{height} image")]
    OutOfBounds {
        col: usize,
        row: usize,
        width: usize,
        height: usize,
    },
    #[error("image has no foreground pixels")]
    EmptyImage,
}

pub type Result<T> = std::result::Result<T, TraceError>;

/// Image coordinate; rows grow downward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pixel {
    pub col: usize,
    pub row: usize,
}

impl Pixel {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }

    /// Raster order key: row first, then column.
    pub fn raster_key(self) -> (usize, usize) {
        (self.row, self.col)
    }

    pub fn is_adjacent8(self, other: Pixel) -> bool {
        self != other && self.col.abs_diff(other.col) <= 1 && self.row.abs_diff(other.row) <= 1
    }
}

/// Step offsets `(dcol, drow)` in the fixed scan order E, NE, N, NW, W, SW, S, SE.
/// The index of each offset is also its Freeman direction code.
pub const SCAN_ORDER: [(isize, isize); 8] = [
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// Freeman code of the step `from -> to`, if the pixels are 8-adjacent.
pub fn step_direction(from: Pixel, to: Pixel) -> Option<usize> {
    let d = (
        to.col as isize - from.col as isize,
        to.row as isize - from.row as isize,
    );
    SCAN_ORDER.iter().position(|&o| o == d)
}

/// Angular distance between two direction codes, in 45° units (0..=4).
pub fn direction_distance(a: usize, b: usize) -> usize {
    let d = (a as isize - b as isize).rem_euclid(8) as usize;
    d.min(8 - d)
}

/// Ordered pixel trajectory; consecutive points are 8-adjacent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PixelPath {
    pub points: Vec<Pixel>,
}

impl PixelPath {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn offset(img: &BinaryImage, p: Pixel, (dc, dr): (isize, isize)) -> Option<Pixel> {
    let (c, r) = (p.col as isize + dc, p.row as isize + dr);
    img.contains(c, r)
        .then(|| Pixel::new(c as usize, r as usize))
}

/// Foreground 8-neighbors of `p`, in scan order.
pub fn neighbors8(p: Pixel, bin: &BinaryImage) -> Result<Vec<Pixel>> {
    if p.col >= bin.width() || p.row >= bin.height() {
        return Err(TraceError::OutOfBounds {
            col: p.col,
            row: p.row,
            width: bin.width(),
            height: bin.height(),
        });
    }
    Ok(SCAN_ORDER
        .iter()
        .filter_map(|&o| offset(bin, p, o))
        .filter(|q| bin.get(q.col, q.row))
        .collect())
}

/// Live pixels are foreground and not yet visited.
struct Walker<'a> {
    img: &'a BinaryImage,
    visited: Vec<bool>,
}

impl<'a> Walker<'a> {
    fn new(img: &'a BinaryImage) -> Self {
        Self {
            img,
            visited: vec![false; img.width() * img.height()],
        }
    }

    fn live(&self, p: Pixel) -> bool {
        self.img.get(p.col, p.row) && !self.visited[p.row * self.img.width() + p.col]
    }

    fn visit(&mut self, p: Pixel) {
        self.visited[p.row * self.img.width() + p.col] = true;
    }

    fn live_neighbors(&self, p: Pixel) -> impl Iterator<Item = (usize, Pixel)> + '_ {
        SCAN_ORDER
            .iter()
            .enumerate()
            .filter_map(move |(dir, &o)| offset(self.img, p, o).map(|q| (dir, q)))
            .filter(move |&(_, q)| self.live(q))
    }

    /// Top-left live endpoint, else top-left live pixel. Scanning in raster
    /// order makes the first hit the minimum.
    fn start(&self) -> Option<Pixel> {
        let mut first = None;
        for (col, row) in self.img.foreground() {
            let p = Pixel::new(col, row);
            if !self.live(p) {
                continue;
            }
            first.get_or_insert(p);
            if self.live_neighbors(p).nth(1).is_none() {
                return Some(p);
            }
        }
        first
    }

    fn next(&self, at: Pixel, prev_dir: Option<usize>) -> Option<(usize, Pixel)> {
        match prev_dir {
            // min_by_key keeps the first minimum, i.e. the earliest in scan order
            Some(prev) => self
                .live_neighbors(at)
                .min_by_key(|&(dir, _)| direction_distance(dir, prev)),
            None => self.live_neighbors(at).next(),
        }
    }
}

/// Start pixel for tracing `bin`: the endpoint minimal in (row, col) order,
/// or the minimal foreground pixel when the skeleton has no endpoint.
pub fn find_start(bin: &BinaryImage) -> Result<Pixel> {
    Walker::new(bin).start().ok_or(TraceError::EmptyImage)
}

/// Recovers the drawing order of a thinned image. Every foreground pixel
/// appears in exactly one path, exactly once.
pub fn recover_order(bin: &BinaryImage) -> Vec<PixelPath> {
    let mut walker = Walker::new(bin);
    let mut paths = Vec::new();
    while let Some(start) = walker.start() {
        walker.visit(start);
        let mut points = vec![start];
        let (mut at, mut dir) = (start, None);
        while let Some((d, p)) = walker.next(at, dir) {
            walker.visit(p);
            points.push(p);
            at = p;
            dir = Some(d);
        }
        paths.push(PixelPath { points });
    }
    paths
}

/// Plain-text export: one `col row` pair per line, blank line between paths.
pub fn format_paths(paths: &[PixelPath]) -> String {
    let mut out = String::new();
    for (i, path) in paths.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for p in &path.points {
            let _ = writeln!(out, "{} {}", p.col, p.row);
        }
    }
    out
}
