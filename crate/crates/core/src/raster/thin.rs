//! Zhang–Suen two-subiteration thinning.
//!
//! Pixels outside the image read as background. The parallel deletion rule
//! erases some small blobs (a 2×2 square, for one) in a single subiteration;
//! when a subiteration would delete every pixel of an 8-connected component,
//! the component's first deletable pixel in row-major order is kept, so the
//! component count never changes.

use super::BinaryImage;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pass {
    First,
    Second,
}

/// Neighbors P2..P9, clockwise from north.
const RING: [(isize, isize); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

fn deletable(img: &BinaryImage, col: usize, row: usize, pass: Pass) -> bool {
    let (c, r) = (col as isize, row as isize);
    let p: [bool; 8] = RING.map(|(dc, dr)| img.get_padded(c + dc, r + dr));
    let b = p.iter().filter(|&&x| x).count();
    if !(2..=6).contains(&b) {
        return false;
    }
    let a = (0..8).filter(|&i| !p[i] && p[(i + 1) % 8]).count();
    if a != 1 {
        return false;
    }
    let [p2, _, p4, _, p6, _, p8, _] = p;
    match pass {
        Pass::First => !(p2 && p4 && p6) && !(p4 && p6 && p8),
        Pass::Second => !(p2 && p4 && p8) && !(p2 && p6 && p8),
    }
}

/// Runs one subiteration; returns whether any pixel was removed.
fn subiteration(img: &mut BinaryImage, pass: Pass) -> bool {
    let candidates: Vec<(usize, usize)> = img
        .foreground()
        .filter(|&(c, r)| deletable(img, c, r, pass))
        .collect();
    if candidates.is_empty() {
        return false;
    }

    let (labels, count) = img.component_labels8();
    let mut sizes = vec![0usize; count];
    for label in labels.iter().flatten() {
        sizes[*label as usize] += 1;
    }
    let mut doomed = vec![0usize; count];
    let mut keep: Vec<Option<(usize, usize)>> = vec![None; count];
    let width = img.width();
    for &(c, r) in &candidates {
        let label = labels[r * width + c].expect("candidate is foreground") as usize;
        doomed[label] += 1;
        keep[label].get_or_insert((c, r));
    }

    for &(c, r) in &candidates {
        img.set(c, r, false);
    }
    for label in 0..count {
        if doomed[label] == sizes[label] {
            let (c, r) = keep[label].expect("component had candidates");
            img.set(c, r, true);
        }
    }
    true
}

/// Thins `bin` to a one-pixel-wide skeleton. Never adds foreground and keeps
/// the number of 8-connected components.
pub fn thin(bin: &BinaryImage) -> BinaryImage {
    let mut img = bin.clone();
    loop {
        let first = subiteration(&mut img, Pass::First);
        let second = subiteration(&mut img, Pass::Second);
        if !first && !second {
            return img;
        }
    }
}
