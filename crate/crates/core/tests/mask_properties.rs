//! Property tests for mask primitives: morphology against a brute-force
//! set-union oracle, boundary extraction, PNG round-trips, translation, and
//! the exact distance transform.

use std::collections::BTreeSet;

use proptest::prelude::*;

use crackeval_core::{
    boundary_points, connected_components, dilate, distance_transform, foreground_points,
    load_mask, save_mask, translate_mask, BinaryMask, StructuringElement,
};

fn mask_from_bits(bits: &[bool], h: usize, w: usize) -> BinaryMask {
    let mut m = BinaryMask::new(w, h).unwrap();
    for (i, &b) in bits.iter().enumerate() {
        if b {
            m.set(i / w, i % w, true);
        }
    }
    m
}

fn fg_set(m: &BinaryMask) -> BTreeSet<(u32, u32)> {
    foreground_points(m).iter().map(|p| (p.row, p.col)).collect()
}

/// Brute-force dilation oracle: union of the element stamped on every
/// foreground pixel, repeated `iters` times. Shares nothing with `dilate`.
fn oracle_dilate(m: &BinaryMask, offsets: &[(i64, i64)], iters: usize) -> BTreeSet<(i64, i64)> {
    let (h, w) = m.dims();
    let mut cur: BTreeSet<(i64, i64)> = fg_set(m)
        .into_iter()
        .map(|(r, c)| (r as i64, c as i64))
        .collect();
    for _ in 0..iters {
        let mut next = BTreeSet::new();
        for &(r, c) in &cur {
            for &(dr, dc) in offsets {
                let (nr, nc) = (r + dr, c + dc);
                if nr >= 0 && nc >= 0 && (nr as usize) < h && (nc as usize) < w {
                    next.insert((nr, nc));
                }
            }
        }
        cur = next;
    }
    cur
}

fn bits(h: usize, w: usize, density: f64) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(prop::bool::weighted(density), h * w)
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(64)
    })]

    #[test]
    fn dilation_is_extensive_and_monotone(b in bits(32, 32, 0.05), k in 0usize..4) {
        let m = mask_from_bits(&b, 32, 32);
        for element in [StructuringElement::Cross4, StructuringElement::Square8] {
            let once = dilate(&m, element, k);
            let more = dilate(&m, element, k + 1);
            prop_assert!(fg_set(&m).is_subset(&fg_set(&once)));
            prop_assert!(fg_set(&once).is_subset(&fg_set(&more)));
        }
    }

    #[test]
    fn dilation_matches_brute_force_oracle(b in bits(32, 32, 0.03), k in 0usize..=4) {
        let m = mask_from_bits(&b, 32, 32);
        for (element, offsets) in [
            (StructuringElement::Cross4, StructuringElement::Cross4.offsets()),
            (StructuringElement::Square8, StructuringElement::Square8.offsets()),
        ] {
            let got: BTreeSet<(i64, i64)> = fg_set(&dilate(&m, element, k))
                .into_iter()
                .map(|(r, c)| (r as i64, c as i64))
                .collect();
            prop_assert_eq!(got, oracle_dilate(&m, offsets, k));
        }
    }

    #[test]
    fn boundary_is_subset_of_foreground(b in bits(24, 24, 0.2)) {
        let m = mask_from_bits(&b, 24, 24);
        let boundary: BTreeSet<_> = boundary_points(&m).iter().map(|p| (p.row, p.col)).collect();
        prop_assert!(boundary.is_subset(&fg_set(&m)));
        // every boundary pixel has an exposed 4-neighbor; every foreground
        // pixel with one is in the boundary
        for &(r, c) in &fg_set(&m) {
            let exposed = [(0i64, 1i64), (0, -1), (1, 0), (-1, 0)].iter().any(|&(dr, dc)| {
                let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                nr < 0 || nc < 0 || nr >= 24 || nc >= 24 || !m.get(nr as usize, nc as usize)
            });
            prop_assert_eq!(exposed, boundary.contains(&(r, c)));
        }
    }

    #[test]
    fn png_round_trip_is_bit_exact(b in bits(24, 24, 0.3)) {
        let m = mask_from_bits(&b, 24, 24);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.png");
        save_mask(&m, &path).unwrap();
        prop_assert_eq!(load_mask(&path, 128).unwrap(), m);
    }

    #[test]
    fn translate_round_trips_when_interior(b in bits(16, 16, 0.2), dy in 0i64..8, dx in 0i64..8) {
        // embed in a frame large enough that nothing clips
        let mut m = BinaryMask::new(32, 32).unwrap();
        for (i, &bit) in b.iter().enumerate() {
            if bit {
                m.set(i / 16, i % 16, true);
            }
        }
        let back = translate_mask(&translate_mask(&m, dy, dx), -dy, -dx);
        prop_assert_eq!(back, m);
    }

    #[test]
    fn distance_field_is_zero_on_foreground_and_bounded(b in bits(24, 24, 0.08)) {
        prop_assume!(b.iter().any(|&x| x));
        let m = mask_from_bits(&b, 24, 24);
        let field = distance_transform(&m);
        let diagonal = ((24.0f64 * 24.0) * 2.0).sqrt();
        for r in 0..24 {
            for c in 0..24 {
                let d = field.distance(r, c);
                if m.get(r, c) {
                    prop_assert_eq!(d, 0.0);
                } else {
                    prop_assert!(d > 0.0);
                }
                prop_assert!(d <= diagonal);
            }
        }
    }

    #[test]
    fn components_invariant_under_translation(b in bits(12, 12, 0.15), dy in 0i64..6, dx in 0i64..6) {
        // interior translation cannot merge or split 8-connected components
        let mut m = BinaryMask::new(24, 24).unwrap();
        for (i, &bit) in b.iter().enumerate() {
            if bit {
                m.set(i / 12, i % 12, true);
            }
        }
        let moved = translate_mask(&m, dy, dx);
        prop_assert_eq!(
            connected_components(&m).count,
            connected_components(&moved).count
        );
    }
}
