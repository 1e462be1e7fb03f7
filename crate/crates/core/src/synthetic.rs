//! Digit-like synthetic pen strokes: ten polyline templates drawn in natural
//! pen order, each sample distorted by a random affine map and point jitter.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::strokes::StrokeSample;

pub const SYNTHETIC_CLASSES: usize = 10;

type Stroke = Vec<[f64; 2]>;

/// Points along an elliptical arc, angles in degrees, inclusive of both ends.
fn arc(cx: f64, cy: f64, rx: f64, ry: f64, from: f64, to: f64) -> Stroke {
    let steps = ((to - from).abs() / 10.0).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|i| {
            let a = (from + (to - from) * i as f64 / steps as f64) * PI / 180.0;
            [cx + rx * a.cos(), cy + ry * a.sin()]
        })
        .collect()
}

fn chain(parts: &[Stroke]) -> Stroke {
    parts.iter().flatten().copied().collect()
}

fn line(points: &[[f64; 2]]) -> Stroke {
    points.to_vec()
}

/// Template strokes for `digit` in the unit square, y-up.
pub fn template(digit: usize) -> Vec<Stroke> {
    match digit {
        0 => vec![arc(0.5, 0.5, 0.33, 0.46, 90.0, 460.0)],
        1 => vec![line(&[[0.3, 0.8], [0.55, 1.0], [0.55, 0.0]])],
        2 => vec![chain(&[
            arc(0.5, 0.7, 0.3, 0.28, 160.0, -30.0),
            line(&[[0.12, 0.0], [0.88, 0.0]]),
        ])],
        3 => vec![chain(&[
            arc(0.5, 0.75, 0.28, 0.24, 150.0, -90.0),
            arc(0.5, 0.26, 0.3, 0.25, 90.0, -150.0),
        ])],
        4 => vec![
            line(&[[0.6, 1.0], [0.1, 0.35], [0.9, 0.35]]),
            line(&[[0.66, 0.72], [0.66, 0.0]]),
        ],
        5 => vec![chain(&[
            line(&[[0.85, 1.0], [0.25, 1.0], [0.2, 0.55]]),
            arc(0.5, 0.3, 0.32, 0.28, 130.0, -150.0),
        ])],
        6 => vec![chain(&[
            line(&[[0.72, 1.0], [0.28, 0.52]]),
            arc(0.5, 0.28, 0.26, 0.26, 150.0, 510.0),
        ])],
        7 => vec![line(&[[0.1, 1.0], [0.9, 1.0], [0.42, 0.0]])],
        8 => vec![chain(&[
            arc(0.5, 0.76, 0.22, 0.22, 0.0, 270.0),
            arc(0.5, 0.28, 0.27, 0.26, 90.0, -270.0),
            line(&[[0.72, 0.76]]),
        ])],
        9 => vec![chain(&[
            arc(0.5, 0.72, 0.26, 0.26, 0.0, 360.0),
            line(&[[0.74, 0.0]]),
        ])],
        _ => panic!("no template for class {digit}"),
    }
}

/// Distortion ranges for [`generate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distortion {
    /// Maximum rotation in degrees.
    pub rotation: f64,
    /// Axis scales are drawn from `1 ± scale`.
    pub scale: f64,
    pub shear: f64,
    /// Per-point uniform jitter, in template units.
    pub jitter: f64,
}

impl Default for Distortion {
    fn default() -> Self {
        Self {
            rotation: 12.0,
            scale: 0.2,
            shear: 0.2,
            jitter: 0.02,
        }
    }
}

fn distort(strokes: &[Stroke], d: &Distortion, rng: &mut ChaCha8Rng) -> Vec<Stroke> {
    let theta = rng.gen_range(-d.rotation..=d.rotation) * PI / 180.0;
    let sx = 1.0 + rng.gen_range(-d.scale..=d.scale);
    let sy = 1.0 + rng.gen_range(-d.scale..=d.scale);
    let shear = rng.gen_range(-d.shear..=d.shear);
    let (sin, cos) = theta.sin_cos();
    let (ox, oy) = (rng.gen_range(0.0..50.0), rng.gen_range(0.0..50.0));
    strokes
        .iter()
        .map(|stroke| {
            stroke
                .iter()
                .map(|&[x, y]| {
                    let x = x + rng.gen_range(-d.jitter..=d.jitter);
                    let y = y + rng.gen_range(-d.jitter..=d.jitter);
                    let (x, y) = ((x - 0.5 + shear * (y - 0.5)) * sx, (y - 0.5) * sy);
                    let (x, y) = (cos * x - sin * y, sin * x + cos * y);
                    [ox + 100.0 * x, oy + 100.0 * y]
                })
                .collect()
        })
        .collect()
}

/// `per_class` samples of each of the ten classes, interleaved by class.
pub fn generate(per_class: usize, seed: u64, distortion: &Distortion) -> Vec<StrokeSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let templates: Vec<_> = (0..SYNTHETIC_CLASSES).map(template).collect();
    let mut out = Vec::with_capacity(per_class * SYNTHETIC_CLASSES);
    for _ in 0..per_class {
        for (label, t) in templates.iter().enumerate() {
            out.push(StrokeSample {
                label,
                strokes: distort(t, distortion, &mut rng),
            });
        }
    }
    out
}
