//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Oracles here are deliberately naive re-implementations,
//! independent of the library's distance-transform pipeline.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use crackeval_core::{
    class_weights, dilate, directed_hausdorff, h_crack, hausdorff, hd_score, load_mask, metrics,
    penalized_directed, pixel_prf, save_mask, split_manifest, translate_mask, BinaryMask,
    ConfusionMatrix, HdParams, Label, LabeledRate, Manifest, ManifestRecord, Point, PointSet,
    SegFlag, Split, StructuringElement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: &[(&str, fn() -> Result<(), String>)] = &[
        ("1 oracle equivalence on 500 random point-set pairs", oracle_equivalence),
        ("2 translate closed form is exact across the full sweep", closed_form_sweep),
        ("3 discrimination gap at d=3: F1 0.0, HD-score 90.0", discrimination_gap),
        ("4 all-black and empty-input semantics", all_black_semantics),
        ("5 saturation cap and false-positive mixing", saturation_and_mixing),
        ("6 classification metric identities", classification_identities),
        ("7 split determinism and stratification at 1:10/1:20/1:30", split_protocol),
        ("8 morphology oracle and PNG round-trip", morphology_and_roundtrip),
        ("9 eval-seg on a 2048x4096 pair under 1000 ms median", full_size_performance),
    ];
    let mut failures = 0;
    for (name, criterion) in criteria {
        match criterion() {
            Ok(()) => println!("PASS {name}"),
            Err(msg) => {
                failures += 1;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}

// --- naive oracles ---------------------------------------------------------

fn naive_min_dist(p: (u32, u32), q: &BTreeSet<(u32, u32)>) -> f64 {
    q.iter()
        .map(|&(r, c)| {
            let dr = r as f64 - p.0 as f64;
            let dc = c as f64 - p.1 as f64;
            (dr * dr + dc * dc).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

fn naive_directed(p: &BTreeSet<(u32, u32)>, q: &BTreeSet<(u32, u32)>) -> f64 {
    p.iter().map(|&pt| naive_min_dist(pt, q)).fold(0.0, f64::max)
}

fn naive_penalized(p: &BTreeSet<(u32, u32)>, q: &BTreeSet<(u32, u32)>, u: f64) -> f64 {
    let sum: f64 = p.iter().map(|&pt| naive_min_dist(pt, q).min(u)).sum();
    sum / p.len() as f64
}

// --- fixtures ---------------------------------------------------------------

/// Interior horizontal 1-px segment: boundary and foreground coincide, and
/// perpendicular translation keeps every nearest distance an exact integer.
fn segment_mask() -> BinaryMask {
    let mut m = BinaryMask::new(128, 120).unwrap();
    for col in 16..112 {
        m.set(40, col, true);
    }
    m
}

// --- criteria ---------------------------------------------------------------

fn oracle_equivalence() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = 50.0;
    for case in 0..500 {
        let draw = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(1..=200);
            (0..n)
                .map(|_| (rng.gen_range(0..512u32), rng.gen_range(0..512u32)))
                .collect::<BTreeSet<(u32, u32)>>()
        };
        let p_raw = draw(&mut rng);
        let q_raw = draw(&mut rng);
        let p = PointSet::new(p_raw.iter().map(|&(r, c)| Point::new(r, c)));
        let q = PointSet::new(q_raw.iter().map(|&(r, c)| Point::new(r, c)));

        let forward = naive_directed(&p_raw, &q_raw);
        let backward = naive_directed(&q_raw, &p_raw);
        let pen_forward = naive_penalized(&p_raw, &q_raw, u);
        let pen_backward = naive_penalized(&q_raw, &p_raw, u);
        let pairs = [
            ("directed_hausdorff", directed_hausdorff(&p, &q), forward),
            ("hausdorff", hausdorff(&p, &q), forward.max(backward)),
            ("penalized_directed", penalized_directed(&p, &q, u), pen_forward),
            ("h_crack", h_crack(&p, &q, u), pen_forward.max(pen_backward)),
        ];
        for (name, got, want) in pairs {
            let got = got.map_err(|e| format!("case {case}: {name}: {e}"))?;
            check!(
                (got - want).abs() <= 1e-6,
                "case {case}: {name} pipeline {got} vs oracle {want}"
            );
        }
    }
    let elapsed = start.elapsed();
    check!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    Ok(())
}

fn closed_form_sweep() -> Result<(), String> {
    let start = Instant::now();
    let u = 30.0;
    let gt = segment_mask();
    let params = HdParams::with_u(u);
    for d in 0..=30u32 {
        let pred = translate_mask(&gt, d as i64, 0);
        let got = hd_score(&pred, &gt, &params)
            .map_err(|e| format!("d={d}: {e}"))?
            .hd_score;
        let want = 100.0 * (1.0 - d as f64 / u);
        check!(got == want, "d={d}: hd_score {got} != {want} (must be exact)");
    }
    let elapsed = start.elapsed();
    check!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    Ok(())
}

fn discrimination_gap() -> Result<(), String> {
    let gt = segment_mask();
    let pred = translate_mask(&gt, 3, 0);
    let hd = hd_score(&pred, &gt, &HdParams::with_u(30.0)).map_err(|e| e.to_string())?;
    check!(hd.hd_score == 90.0, "hd_score {} != 90.0", hd.hd_score);
    for tolerance in [0, 2] {
        let f1 = pixel_prf(&pred, &gt, tolerance)
            .map_err(|e| e.to_string())?
            .f1;
        check!(f1 == 0.0, "tolerance {tolerance}: f1 {f1} != 0.0");
    }
    Ok(())
}

fn all_black_semantics() -> Result<(), String> {
    let params = HdParams::default();
    let empty = BinaryMask::new(64, 64).map_err(|e| e.to_string())?;
    let gt = segment_mask();
    let (height, width) = gt.dims();
    let empty_like_gt = BinaryMask::new(width, height).map_err(|e| e.to_string())?;

    let all_black = hd_score(&empty_like_gt, &gt, &params).map_err(|e| e.to_string())?;
    check!(all_black.hd_score == 0.0, "all-black score {}", all_black.hd_score);
    check!(
        all_black.flags.contains(&SegFlag::AllBlackPrediction),
        "missing all_black_prediction flag: {:?}",
        all_black.flags
    );

    let both = hd_score(&empty, &empty, &params).map_err(|e| e.to_string())?;
    check!(both.hd_score == 100.0, "empty-vs-empty score {}", both.hd_score);
    check!(
        both.flags.contains(&SegFlag::EmptyBoth),
        "missing empty_both flag: {:?}",
        both.flags
    );
    Ok(())
}

fn saturation_and_mixing() -> Result<(), String> {
    let u = 50.0;
    let q = PointSet::new((0..80).map(|c| Point::new(10, c)));
    let p_base: Vec<Point> = (0..80).map(|c| Point::new(14, c)).collect();
    let p = PointSet::new(p_base.iter().copied());
    let v = penalized_directed(&p, &q, u).map_err(|e| e.to_string())?;

    for m in [1usize, 10, 100] {
        let far: Vec<Point> = (0..m).map(|i| Point::new(1000, 3 * i as u32)).collect();
        let mixed = PointSet::new(p_base.iter().copied().chain(far));
        let got = penalized_directed(&mixed, &q, u).map_err(|e| e.to_string())?;
        let want = (p.len() as f64 * v + m as f64 * u) / (p.len() + m) as f64;
        check!(
            (got - want).abs() <= 1e-9,
            "m={m}: mixed penalty {got} vs closed form {want}"
        );
        check!(got <= u, "m={m}: penalty {got} above the cap {u}");
    }

    let all_far = PointSet::new((0..40).map(|i| Point::new(2000, i)));
    let saturated = penalized_directed(&all_far, &q, u).map_err(|e| e.to_string())?;
    check!(saturated == u, "fully saturated penalty {saturated} != u");
    Ok(())
}

fn classification_identities() -> Result<(), String> {
    let even = metrics(&ConfusionMatrix::new(1, 1, 1, 1)).map_err(|e| e.to_string())?;
    for (name, value) in [
        ("accuracy", even.accuracy),
        ("precision", even.precision),
        ("recall", even.recall),
        ("f1", even.f1),
    ] {
        check!(value == 0.5, "metrics(1,1,1,1).{name} = {value}, want 0.5");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..1000 {
        let cm = ConfusionMatrix::new(
            rng.gen_range(0..=1000),
            rng.gen_range(0..=1000),
            rng.gen_range(0..=1000),
            rng.gen_range(0..=1000),
        );
        if cm.total() == 0 {
            continue;
        }
        let m = metrics(&cm).map_err(|e| format!("case {case}: {e}"))?;
        let harmonic = if m.precision + m.recall > 0.0 {
            2.0 * m.precision * m.recall / (m.precision + m.recall)
        } else {
            0.0
        };
        check!(
            (m.f1 - harmonic).abs() <= 1e-12,
            "case {case}: f1 {} vs harmonic {harmonic}",
            m.f1
        );
    }

    // includes the 1:5.6 crack/uncrack imbalance
    for (n_pos, n_neg) in [(1000u64, 5600u64), (250, 250), (7, 9931)] {
        let w = class_weights(n_pos, n_neg).map_err(|e| e.to_string())?;
        let balance = w.w_pos * n_pos as f64 - w.w_neg * n_neg as f64;
        check!(
            balance.abs() <= 1e-9,
            "({n_pos},{n_neg}): weighted masses differ by {balance}"
        );
    }
    Ok(())
}

fn split_protocol() -> Result<(), String> {
    let records: Vec<ManifestRecord> = (0..3000)
        .map(|i| ManifestRecord {
            path: format!("patches/p{i:05}.png"),
            label: if i % 10 < 3 { Label::Crack } else { Label::Uncrack },
            split: Split::Labeled,
            pair_gt: None,
        })
        .collect();
    let base = Manifest::new(records);
    let crack_fraction = 0.3;

    for k in [10u32, 20, 30] {
        let first = split_manifest(&base, LabeledRate(k), 0.0, 0.0, 42)
            .map_err(|e| format!("1:{k}: {e}"))?;
        let second = split_manifest(&base, LabeledRate(k), 0.0, 0.0, 42)
            .map_err(|e| format!("1:{k}: {e}"))?;
        check!(
            first.to_json_string() == second.to_json_string(),
            "1:{k}: same seed produced different manifests"
        );

        let labeled: Vec<_> = first
            .records
            .iter()
            .filter(|r| r.split == Split::Labeled)
            .collect();
        check!(
            labeled.len() == 3000 / k as usize,
            "1:{k}: {} labeled, want {}",
            labeled.len(),
            3000 / k as usize
        );
        let crack = labeled.iter().filter(|r| r.label == Label::Crack).count();
        let drift = crack as f64 - crack_fraction * labeled.len() as f64;
        check!(
            drift.abs() <= 1.0,
            "1:{k}: labeled crack count {crack} is {drift} records off the overall fraction"
        );
    }
    Ok(())
}

fn morphology_and_roundtrip() -> Result<(), String> {
    let mut pixel = BinaryMask::new(31, 31).map_err(|e| e.to_string())?;
    pixel.set(15, 15, true);
    let diamond = dilate(&pixel, StructuringElement::Cross4, 3);
    check!(
        diamond.count_foreground() == 25,
        "dilate x3 grew {} pixels, want 25",
        diamond.count_foreground()
    );

    // brute-force oracle: iterated union of cross-neighborhoods
    let mut oracle: BTreeSet<(i64, i64)> = BTreeSet::from([(15, 15)]);
    for _ in 0..3 {
        let mut next = oracle.clone();
        for &(r, c) in &oracle {
            for (dr, dc) in [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)] {
                next.insert((r + dr, c + dc));
            }
        }
        oracle = next;
    }
    for row in 0..31 {
        for col in 0..31 {
            let want = oracle.contains(&(row as i64, col as i64));
            check!(
                diamond.get(row, col) == want,
                "dilate disagrees with the oracle at ({row},{col})"
            );
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mask = BinaryMask::random(83, 59, 0.2, &mut rng).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("mask.png");
    save_mask(&mask, &path).map_err(|e| e.to_string())?;
    let reloaded = load_mask(&path, 128).map_err(|e| e.to_string())?;
    check!(reloaded == mask, "PNG round-trip changed the mask");
    Ok(())
}

fn full_size_performance() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let gt = BinaryMask::random(4096, 2048, 0.01, &mut rng).map_err(|e| e.to_string())?;
    let pred = BinaryMask::random(4096, 2048, 0.01, &mut rng).map_err(|e| e.to_string())?;
    let gt_path = dir.path().join("gt.png");
    let pred_path = dir.path().join("pred.png");
    save_mask(&gt, &gt_path).map_err(|e| e.to_string())?;
    save_mask(&pred, &pred_path).map_err(|e| e.to_string())?;

    let mut totals = Vec::new();
    for run in 0..3 {
        let report_path = dir.path().join(format!("report{run}.json"));
        let output = Command::new(env!("CARGO_BIN_EXE_crackeval"))
            .args([
                "eval-seg",
                "--pred",
                pred_path.to_str().unwrap(),
                "--gt",
                gt_path.to_str().unwrap(),
                "--out",
                report_path.to_str().unwrap(),
            ])
            .output()
            .map_err(|e| format!("spawning crackeval: {e}"))?;
        check!(
            output.status.success(),
            "run {run}: eval-seg failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        let report: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(&report_path).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let total_ms = report["timing"]["total_ms"]
            .as_f64()
            .ok_or("report is missing timing.total_ms")?;
        totals.push(total_ms);
    }
    totals.sort_by(|a, b| a.total_cmp(b));
    let median = totals[1];
    check!(
        median < 1000.0,
        "median metric time {median:.1} ms over the 1000 ms budget ({totals:?})"
    );
    Ok(())
}
