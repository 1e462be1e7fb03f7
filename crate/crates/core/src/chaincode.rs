//! Freeman chain codes over ordered trajectories.
//!
//! A feature vector is the chain code of an arc-length-uniform resampling of
//! the trajectory: `L + 1` points give exactly `L` direction codes, with
//! `L = 41` for offline (image) samples and `L = 25` for online pen strokes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::trace::PixelPath;
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainCodeError {
    #[error("no points to build a trajectory from")]
    EmptyInput,
    #[error("trajectory has zero arc length")]
    DegenerateTrajectory,
    #[error("zero-length segment at index {index}")]
    DegenerateSegment { index: usize },
    #[error("cannot resample to {0} points (need at least 2)")]
    InvalidSampleCount(usize),
    #[error("direction code {0} is outside 0..8")]
    InvalidCode(u8),
    #[error("unknown profile {0:?} (expected \"offline\" or \"online\")")]
    UnknownProfile(String),
}

pub type Result<T> = std::result::Result<T, ChainCodeError>;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    fn distance(self, other: Self) -> T {
        (other.x - self.x).hypot(other.y - self.y)
    }
}

/// Ordered pen trajectory in a y-up frame. Consecutive duplicate points are
/// dropped on construction.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory<T> {
    points: Vec<Point<T>>,
    pub label: Option<usize>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn new(points: impl IntoIterator<Item = Point<T>>) -> Self {
        let mut out: Vec<Point<T>> = Vec::new();
        for p in points {
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        Self {
            points: out,
            label: None,
        }
    }

    pub fn from_xy(points: &[(T, T)]) -> Self {
        Self::new(points.iter().map(|&(x, y)| Point::new(x, y)))
    }

    pub fn with_label(mut self, label: usize) -> Self {
        self.label = Some(label);
        self
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn arc_length(&self) -> T {
        self.points
            .windows(2)
            .map(|w| w[0].distance(w[1]))
            .fold(T::zero(), |a, b| a + b)
    }

    /// Applies `f` to every point, keeping the label.
    pub fn map_points(&self, f: impl Fn(Point<T>) -> Point<T>) -> Self {
        Self {
            label: self.label,
            ..Self::new(self.points.iter().map(|&p| f(p)))
        }
    }
}

/// Which fixed feature length to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Profile {
    Offline,
    Online,
}

impl Profile {
    /// Number of chain codes in a feature vector.
    pub const fn code_length(self) -> usize {
        match self {
            Profile::Offline => 41,
            Profile::Online => 25,
        }
    }

    /// Inverse of `code_length() + 1`, the node count of a trajectory graph.
    pub fn from_node_count(nodes: usize) -> Option<Self> {
        [Profile::Offline, Profile::Online]
            .into_iter()
            .find(|p| p.code_length() + 1 == nodes)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Offline => "offline",
            Profile::Online => "online",
        })
    }
}

impl FromStr for Profile {
    type Err = ChainCodeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "offline" => Ok(Profile::Offline),
            "online" => Ok(Profile::Online),
            _ => Err(ChainCodeError::UnknownProfile(s.to_string())),
        }
    }
}

/// Sequence of Freeman direction codes: 0 = east, counterclockwise to 7 = southeast.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ChainCode {
    codes: Vec<u8>,
}

impl ChainCode {
    pub fn new(codes: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = codes.iter().find(|&&c| c > 7) {
            return Err(ChainCodeError::InvalidCode(bad));
        }
        Ok(Self { codes })
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

impl fmt::Display for ChainCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.codes {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Unit step for each code; diagonals move one unit on both axes.
pub const CODE_STEPS: [(i8, i8); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

/// Concatenates pixel paths into one trajectory, flipping rows so y points up:
/// `(col, row)` becomes `(col, height - 1 - row)`.
pub fn to_trajectory<T: Scalar>(paths: &[PixelPath], height: usize) -> Result<Trajectory<T>> {
    let top = height.saturating_sub(1);
    let traj = Trajectory::new(paths.iter().flat_map(|p| &p.points).map(|px| {
        Point::new(
            T::from_usize_lossy(px.col),
            T::from_usize_lossy(top - px.row),
        )
    }));
    if traj.is_empty() {
        return Err(ChainCodeError::EmptyInput);
    }
    Ok(traj)
}

/// Resamples to `n_points` points evenly spaced by arc length. The first and
/// last input points are kept exactly.
pub fn resample<T: Scalar>(traj: &Trajectory<T>, n_points: usize) -> Result<Trajectory<T>> {
    if n_points < 2 {
        return Err(ChainCodeError::InvalidSampleCount(n_points));
    }
    let pts = traj.points();
    if pts.len() < 2 {
        return Err(ChainCodeError::DegenerateTrajectory);
    }
    let mut cumulative = Vec::with_capacity(pts.len());
    let mut total = T::zero();
    cumulative.push(total);
    for w in pts.windows(2) {
        total += w[0].distance(w[1]);
        cumulative.push(total);
    }
    if total <= T::zero() {
        return Err(ChainCodeError::DegenerateTrajectory);
    }

    let last = n_points - 1;
    let denom = T::from_usize_lossy(last);
    let mut out = Vec::with_capacity(n_points);
    out.push(pts[0]);
    let mut seg = 0;
    for k in 1..last {
        let target = total * T::from_usize_lossy(k) / denom;
        while seg + 2 < cumulative.len() && cumulative[seg + 1] < target {
            seg += 1;
        }
        let (a, b) = (pts[seg], pts[seg + 1]);
        let span = cumulative[seg + 1] - cumulative[seg];
        let t = ((target - cumulative[seg]) / span)
            .min(T::one())
            .max(T::zero());
        out.push(Point::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t));
    }
    out.push(*pts.last().expect("at least two points"));

    Ok(Trajectory {
        // not deduplicated: a trajectory that doubles back can map two
        // samples onto one point, and encoding reports that segment
        points: out,
        label: traj.label,
    })
}

/// Quantizes the direction of `(dx, dy)` to the nearest multiple of 45°.
/// Exact half-way angles go to the smaller of the two code indices.
pub fn direction_code<T: Scalar>(dx: T, dy: T) -> Option<u8> {
    if dx == T::zero() && dy == T::zero() {
        return None;
    }
    let eighth = T::lit(std::f64::consts::FRAC_PI_4);
    let mut angle = dy.atan2(dx);
    if angle < T::zero() {
        angle += T::lit(std::f64::consts::TAU);
    }
    let q = angle / eighth;
    let lower = q.floor();
    let frac = q - lower;
    let lower = lower.to_i64().unwrap_or(0).rem_euclid(8) as u8;
    let upper = (lower + 1) % 8;
    let half = T::lit(0.5);
    Some(if frac < half {
        lower
    } else if frac > half {
        upper
    } else {
        lower.min(upper)
    })
}

/// One code per consecutive segment of `traj`.
pub fn encode_directions<T: Scalar>(traj: &Trajectory<T>) -> Result<ChainCode> {
    if traj.len() < 2 {
        return Err(ChainCodeError::DegenerateTrajectory);
    }
    let codes = traj
        .points()
        .windows(2)
        .enumerate()
        .map(|(index, w)| {
            direction_code(w[1].x - w[0].x, w[1].y - w[0].y)
                .ok_or(ChainCodeError::DegenerateSegment { index })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainCode { codes })
}

/// Walks unit steps from `start` along each code.
pub fn decode<T: Scalar>(code: &ChainCode, start: Point<T>) -> Trajectory<T> {
    let mut points = Vec::with_capacity(code.len() + 1);
    let mut at = start;
    points.push(at);
    for &c in code.codes() {
        let (dx, dy) = CODE_STEPS[c as usize];
        at = Point::new(at.x + T::lit(dx as f64), at.y + T::lit(dy as f64));
        points.push(at);
    }
    Trajectory::new(points)
}

/// The fixed-length feature vector together with the resampled trajectory
/// it was encoded from.
pub fn featurize<T: Scalar>(
    traj: &Trajectory<T>,
    profile: Profile,
) -> Result<(ChainCode, Trajectory<T>)> {
    let resampled = resample(traj, profile.code_length() + 1)?;
    let code = encode_directions(&resampled)?;
    Ok((code, resampled))
}

pub fn feature_vector<T: Scalar>(traj: &Trajectory<T>, profile: Profile) -> Result<ChainCode> {
    featurize(traj, profile).map(|(code, _)| code)
}
