use super::{BinaryImage, GrayImage};

pub const DEFAULT_THRESHOLD: u8 = 128;

/// Foreground where intensity `>= threshold` (ink is bright on a dark background).
pub fn binarize(img: &GrayImage, threshold: u8) -> BinaryImage {
    let data = img.data().iter().map(|&v| v >= threshold).collect();
    BinaryImage::from_vec(img.width(), img.height(), data).expect("same dimensions")
}

/// Otsu's threshold: the cut maximizing between-class variance of the
/// intensity histogram. Returned as the first intensity of the bright class.
pub fn otsu_threshold(img: &GrayImage) -> u8 {
    let mut hist = [0u64; 256];
    for &v in img.data() {
        hist[v as usize] += 1;
    }
    let total = img.data().len() as f64;
    let weighted_total: f64 = hist
        .iter()
        .enumerate()
        .map(|(i, &c)| i as f64 * c as f64)
        .sum();

    let (mut best_cut, mut best_var) = (0usize, -1.0f64);
    let (mut w_dark, mut sum_dark) = (0.0f64, 0.0f64);
    for (level, &count) in hist.iter().enumerate().take(255) {
        w_dark += count as f64;
        sum_dark += level as f64 * count as f64;
        let w_bright = total - w_dark;
        if w_dark == 0.0 || w_bright == 0.0 {
            continue;
        }
        let mean_dark = sum_dark / w_dark;
        let mean_bright = (weighted_total - sum_dark) / w_bright;
        let var = w_dark * w_bright * (mean_dark - mean_bright).powi(2);
        if var > best_var {
            best_var = var;
            best_cut = level;
        }
    }
    if best_var < 0.0 {
        // single intensity everywhere
        return DEFAULT_THRESHOLD;
    }
    (best_cut + 1) as u8
}
