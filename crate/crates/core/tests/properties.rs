use std::collections::HashSet;

use proptest::prelude::*;
use trajgnn::chaincode::{
    decode, encode_directions, feature_vector, ChainCode, Point, Profile, Trajectory,
};
use trajgnn::gnn::{read_model, write_model, GnnModel};
use trajgnn::graphdata::{read_dataset, write_dataset, GraphDataset, TrajectoryGraph};
use trajgnn::numerics::Matrix;
use trajgnn::raster::{binarize, count_components8, thin, BinaryImage, GrayImage};
use trajgnn::trace::{recover_order, Pixel};

fn binary_image() -> impl Strategy<Value = BinaryImage> {
    (1usize..16, 1usize..16).prop_flat_map(|(w, h)| {
        proptest::collection::vec(proptest::bool::weighted(0.55), w * h)
            .prop_map(move |data| BinaryImage::from_vec(w, h, data).unwrap())
    })
}

fn gray_image() -> impl Strategy<Value = GrayImage> {
    (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<u8>(), w * h)
            .prop_map(move |data| GrayImage::new(w, h, data).unwrap())
    })
}

fn live_neighbors(p: Pixel, img: &BinaryImage, visited: &HashSet<Pixel>) -> usize {
    let mut n = 0;
    for dr in -1isize..=1 {
        for dc in -1isize..=1 {
            if (dr, dc) == (0, 0) {
                continue;
            }
            let (c, r) = (p.col as isize + dc, p.row as isize + dr);
            if img.contains(c, r) {
                let q = Pixel::new(c as usize, r as usize);
                if img.get(q.col, q.row) && !visited.contains(&q) {
                    n += 1;
                }
            }
        }
    }
    n
}

/// Checks a traversal against the skeleton it came from, independently of
/// the traversal code: exact coverage, 8-adjacent steps, and the start rule
/// at the beginning of every path.
fn validate_order(img: &BinaryImage) {
    let paths = recover_order(img);
    let mut visited = HashSet::new();
    for path in &paths {
        let start = path.points[0];
        let live: Vec<Pixel> = img
            .foreground()
            .map(|(c, r)| Pixel::new(c, r))
            .filter(|p| !visited.contains(p))
            .collect();
        let endpoints: Vec<Pixel> = live
            .iter()
            .copied()
            .filter(|&p| live_neighbors(p, img, &visited) <= 1)
            .collect();
        let expected = endpoints.first().or(live.first()).copied();
        assert_eq!(Some(start), expected);
        for w in path.points.windows(2) {
            let (dc, dr) = (w[0].col.abs_diff(w[1].col), w[0].row.abs_diff(w[1].row));
            assert!(
                dc <= 1 && dr <= 1 && (dc, dr) != (0, 0),
                "{:?} -> {:?}",
                w[0],
                w[1]
            );
        }
        for &p in &path.points {
            assert!(img.get(p.col, p.row));
            assert!(visited.insert(p), "{p:?} visited twice");
        }
    }
    assert_eq!(visited.len(), img.foreground_count());
}

fn unit_step_path() -> impl Strategy<Value = (Vec<u8>, i32, i32)> {
    (
        proptest::collection::vec(0u8..8, 1..60),
        -50i32..50,
        -50i32..50,
    )
}

/// A polyline whose consecutive points are never equal.
fn trajectory() -> impl Strategy<Value = Trajectory<f64>> {
    proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 2..30).prop_filter_map(
        "needs positive length",
        |pts| {
            let t = Trajectory::from_xy(&pts);
            (t.arc_length() > 1e-3).then_some(t)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn thinning_is_idempotent_subset_and_keeps_components(img in binary_image()) {
        let once = thin(&img);
        prop_assert_eq!(&thin(&once), &once);
        prop_assert!(once.is_subset_of(&img));
        prop_assert_eq!(count_components8(&once), count_components8(&img));
    }

    #[test]
    fn binarize_is_monotone(img in gray_image(), a in any::<u8>(), b in any::<u8>()) {
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(binarize(&img, hi).is_subset_of(&binarize(&img, lo)));
    }

    #[test]
    fn traversal_of_skeletons_is_valid(img in binary_image()) {
        validate_order(&thin(&img));
    }

    #[test]
    fn traversal_of_arbitrary_images_is_valid(img in binary_image()) {
        validate_order(&img);
    }

    #[test]
    fn decode_encode_identity((codes, x, y) in unit_step_path()) {
        let code = ChainCode::new(codes).unwrap();
        let walked = decode(&code, Point::new(x as f64, y as f64));
        prop_assert_eq!(encode_directions(&walked).unwrap(), code.clone());
        let again = decode(&encode_directions(&walked).unwrap(), walked.points()[0]);
        prop_assert_eq!(again.points(), walked.points());
    }

    #[test]
    fn feature_vector_invariances(
        t in trajectory(),
        dx in -1e3f64..1e3,
        dy in -1e3f64..1e3,
        s in prop_oneof![Just(0.5f64), Just(2.0), Just(4.0), Just(0.25)],
    ) {
        for profile in [Profile::Offline, Profile::Online] {
            let base = feature_vector(&t, profile).unwrap();
            prop_assert_eq!(base.len(), profile.code_length());
            // power-of-two scales and shifts small enough to stay exact
            let shifted = t.map_points(|p| Point::new(p.x + dx.round(), p.y + dy.round()));
            let scaled = t.map_points(|p| Point::new(p.x * s, p.y * s));
            prop_assert_eq!(&feature_vector(&shifted, profile).unwrap(), &base);
            prop_assert_eq!(&feature_vector(&scaled, profile).unwrap(), &base);
        }
    }

    #[test]
    fn quarter_turn_adds_two((codes, _, _) in unit_step_path()) {
        let code = ChainCode::new(codes).unwrap();
        let t = decode(&code, Point::new(0.0, 0.0));
        let rotated = t.map_points(|p| Point::new(-p.y, p.x));
        let turned = encode_directions(&rotated).unwrap();
        let expected: Vec<u8> = code.codes().iter().map(|c| (c + 2) % 8).collect();
        prop_assert_eq!(turned.codes(), expected.as_slice());
    }

    #[test]
    fn dataset_round_trip(
        sizes in proptest::collection::vec(1usize..6, 1..6),
        labels in proptest::collection::vec(0usize..4, 6),
        values in proptest::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 30),
    ) {
        let graphs: Vec<_> = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let feats = Matrix::from_vec(n, 3, (0..n * 3).map(|k| values[k % 30]).collect()).unwrap();
                let edges = (1..n).map(|j| (j - 1, j)).collect();
                TrajectoryGraph::new(feats, edges, labels[i]).unwrap()
            })
            .collect();
        let ds = GraphDataset::new(graphs, 4, None).unwrap();
        let mut bytes = Vec::new();
        write_dataset(&ds, &mut bytes).unwrap();
        let back: GraphDataset<f64> = read_dataset(&bytes).unwrap();
        prop_assert_eq!(back.graphs(), ds.graphs());
    }

    #[test]
    fn model_round_trip(f in 1usize..12, h in 1usize..20, c in 1usize..11, seed in any::<u64>()) {
        let m = GnnModel::<f64>::new(f, h, c, seed);
        let mut bytes = Vec::new();
        write_model(&m, &mut bytes).unwrap();
        let back: GnnModel<f64> = read_model(&bytes).unwrap();
        prop_assert_eq!(back.params(), m.params());
    }
}
