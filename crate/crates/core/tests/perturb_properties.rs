//! Property tests for the perturbation lab: seeded determinism and the
//! closed-form behavior of translation sweeps on interior segments.

use proptest::prelude::*;

use crackeval_core::{
    apply_perturbation, sensitivity_sweep, BinaryMask, HdParams, PerturbKind, PerturbSpec,
};

fn segment(row: usize, col0: usize, len: usize, h: usize, w: usize) -> BinaryMask {
    let mut m = BinaryMask::new(w, h).unwrap();
    for c in col0..col0 + len {
        m.set(row, c, true);
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(48)
    })]

    #[test]
    fn translate_sweep_closed_form_everywhere(
        row in 5usize..20,
        col0 in 0usize..20,
        len in 1usize..30,
        u in 5.0f64..60.0,
    ) {
        // frame sized so every translated copy stays interior
        let gt = segment(row, col0, len, 48, 64);
        let params = HdParams::with_u(u);
        let specs: Vec<_> = (0..=10u32)
            .map(|d| PerturbSpec::new(PerturbKind::Translate { pixels: d }, 0))
            .collect();
        let rows = sensitivity_sweep(&gt, &specs, &params).unwrap();
        for (d, r) in rows.iter().enumerate() {
            let d = d as f64;
            if d < u {
                prop_assert_eq!(r.h_crack, d);
                prop_assert_eq!(r.hd_score, 100.0 * (1.0 - d / u));
            } else {
                prop_assert_eq!(r.hd_score, 0.0);
            }
        }
    }

    #[test]
    fn perturbations_are_seed_deterministic(
        seed in 0u64..5000,
        count in 1u32..4,
        fraction in 0.0f64..1.0,
    ) {
        let gt = segment(10, 5, 20, 48, 48);
        let specs = [
            PerturbSpec::new(PerturbKind::Translate { pixels: 2 }, seed),
            PerturbSpec::new(PerturbKind::Dilate { pixels: 1 }, seed),
            PerturbSpec::new(
                PerturbKind::FpBlob { count, radius: 1, min_dist: 8 },
                seed,
            ),
            PerturbSpec::new(PerturbKind::DropComponents { fraction }, seed),
        ];
        for spec in specs {
            let a = apply_perturbation(&gt, &spec).unwrap();
            let b = apply_perturbation(&gt, &spec).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn dilation_never_scores_below_its_radius_floor(
        k in 1u32..4,
        u in 10.0f64..60.0,
    ) {
        let gt = segment(24, 10, 20, 48, 48);
        let spec = PerturbSpec::new(PerturbKind::Dilate { pixels: k }, 0);
        let params = HdParams::with_u(u);
        let rows = sensitivity_sweep(&gt, &[spec], &params).unwrap();
        // the dilated boundary sits within city-block k of the segment
        prop_assert!(rows[0].hd_score >= 100.0 * (1.0 - k as f64 / u) - 1e-12);
        prop_assert!(rows[0].hd_score <= 100.0);
    }
}
