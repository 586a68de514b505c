//! Exact Euclidean distance transform.
//!
//! Two-pass lower-envelope algorithm (Meijster/Saito family): a vertical
//! sweep collects per-column nearest-foreground offsets, then each row is
//! swept with an envelope of parabolas. All arithmetic is integer, so the
//! squared distances are exact, not chamfer approximations. Runs in O(N).

use crate::error::Result;
use crate::mask::BinaryMask;
use crate::points::Point;

const EMPTY_SENTINEL: i32 = i32::MAX;

/// Per-pixel exact Euclidean distance to the nearest foreground pixel of the
/// source mask. For an all-background mask every value is the +infinity
/// sentinel.
#[derive(Clone, Debug)]
pub struct DistanceField {
    width: usize,
    height: usize,
    /// Exact squared distances; `EMPTY_SENTINEL` when the mask was empty.
    sq: Vec<i32>,
}

impl DistanceField {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Euclidean distance at `(row, col)`; `f64::INFINITY` when the source
    /// mask had no foreground.
    #[inline]
    pub fn distance(&self, row: usize, col: usize) -> f64 {
        let sq = self.sq[row * self.width + col];
        if sq == EMPTY_SENTINEL {
            f64::INFINITY
        } else {
            (sq as f64).sqrt()
        }
    }

    /// Exact squared distance, `None` when the source mask was empty.
    #[inline]
    pub fn squared(&self, row: usize, col: usize) -> Option<i64> {
        let sq = self.sq[row * self.width + col];
        (sq != EMPTY_SENTINEL).then_some(sq as i64)
    }

    pub fn distance_at(&self, p: Point) -> f64 {
        self.distance(p.row as usize, p.col as usize)
    }

    pub fn squared_at(&self, p: Point) -> Option<i64> {
        self.squared(p.row as usize, p.col as usize)
    }
}

/// Computes the exact Euclidean distance transform of `mask`.
pub fn distance_transform(mask: &BinaryMask) -> DistanceField {
    let (w, h) = (mask.width(), mask.height());
    if mask.is_all_background() {
        return DistanceField {
            width: w,
            height: h,
            sq: vec![EMPTY_SENTINEL; w * h],
        };
    }

    // Vertical pass: g[y*w+x] = min |y - y'| over foreground (x, y'),
    // or `inf` for columns without foreground.
    let inf = (w + h) as i32;
    let mut g = vec![0i32; w * h];
    for x in 0..w {
        g[x] = if mask.get(0, x) { 0 } else { inf };
    }
    for y in 1..h {
        let (prev, cur) = g.split_at_mut(y * w);
        let prev = &prev[(y - 1) * w..];
        for x in 0..w {
            cur[x] = if mask.get(y, x) {
                0
            } else {
                prev[x].saturating_add(1).min(inf)
            };
        }
    }
    for y in (0..h - 1).rev() {
        let (cur, next) = g.split_at_mut((y + 1) * w);
        let cur = &mut cur[y * w..];
        for x in 0..w {
            let candidate = next[x] + 1;
            if candidate < cur[x] {
                cur[x] = candidate;
            }
        }
    }

    // Horizontal pass: per-row lower envelope of the parabolas
    // f(x, i) = (x - i)^2 + g[i]^2.
    let mut sq = vec![0i32; w * h];
    let mut s = vec![0usize; w]; // abscissa of the i-th envelope parabola
    let mut t = vec![0usize; w]; // first sample where parabola i wins
    for y in 0..h {
        let row_g = &g[y * w..(y + 1) * w];
        let f = |x: usize, i: usize| -> i64 {
            let d = x as i64 - i as i64;
            let gi = row_g[i] as i64;
            d * d + gi * gi
        };
        // sep: last sample where parabola i still beats-or-ties parabola u.
        let sep = |i: usize, u: usize| -> i64 {
            let (i, u) = (i as i64, u as i64);
            let gi = row_g[i as usize] as i64;
            let gu = row_g[u as usize] as i64;
            (u * u - i * i + gu * gu - gi * gi).div_euclid(2 * (u - i))
        };

        let mut q: isize = 0;
        s[0] = 0;
        t[0] = 0;
        for u in 1..w {
            while q >= 0 && f(t[q as usize], s[q as usize]) > f(t[q as usize], u) {
                q -= 1;
            }
            if q < 0 {
                q = 0;
                s[0] = u;
                t[0] = 0;
            } else {
                let crossover = sep(s[q as usize], u) + 1;
                if crossover < w as i64 {
                    q += 1;
                    s[q as usize] = u;
                    t[q as usize] = crossover.max(0) as usize;
                }
            }
        }
        let row_out = &mut sq[y * w..(y + 1) * w];
        for u in (0..w).rev() {
            row_out[u] = f(u, s[q as usize]) as i32;
            if q > 0 && u == t[q as usize] {
                q -= 1;
            }
        }
    }

    DistanceField {
        width: w,
        height: h,
        sq,
    }
}

/// Distance field built over the foreground of a rasterized point set; the
/// all-points nearest-neighbor query backing the Hausdorff pipeline.
pub fn distance_transform_points(
    points: &crate::points::PointSet,
    frame: (usize, usize),
) -> Result<DistanceField> {
    let mask = BinaryMask::from_points(points, frame.0, frame.1)?;
    Ok(distance_transform(&mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    /// Naive O(N * |Q|) reference: per-pixel minimum over all foreground.
    fn naive_squared(mask: &BinaryMask) -> Vec<Option<i64>> {
        let mut fg = Vec::new();
        for r in 0..mask.height() {
            for c in 0..mask.width() {
                if mask.get(r, c) {
                    fg.push((r as i64, c as i64));
                }
            }
        }
        let mut out = Vec::with_capacity(mask.width() * mask.height());
        for r in 0..mask.height() as i64 {
            for c in 0..mask.width() as i64 {
                let best = fg
                    .iter()
                    .map(|&(fr, fc)| (fr - r) * (fr - r) + (fc - c) * (fc - c))
                    .min();
                out.push(best);
            }
        }
        out
    }

    #[test]
    fn single_foreground_pixel_three_four_five() {
        let mut m = BinaryMask::new(8, 8).unwrap();
        m.set(0, 0, true);
        let field = distance_transform(&m);
        assert_eq!(field.distance(3, 4), 5.0);
        assert_eq!(field.distance(0, 0), 0.0);
        assert_eq!(field.squared(3, 4), Some(25));
    }

    #[test]
    fn all_foreground_is_all_zero() {
        let m = BinaryMask::from_pixels(5, 3, vec![1; 15]).unwrap();
        let field = distance_transform(&m);
        for r in 0..3 {
            for c in 0..5 {
                assert_eq!(field.distance(r, c), 0.0);
            }
        }
    }

    #[test]
    fn empty_mask_is_infinity_sentinel() {
        let m = BinaryMask::new(4, 4).unwrap();
        let field = distance_transform(&m);
        assert!(field.distance(2, 2).is_infinite());
        assert_eq!(field.squared(2, 2), None);
    }

    #[test]
    fn matches_naive_oracle_on_random_masks() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for case in 0..200 {
            let density = [0.002, 0.01, 0.05, 0.3, 0.9][case % 5];
            let m = BinaryMask::random(64, 64, density, &mut rng).unwrap();
            let field = distance_transform(&m);
            let naive = naive_squared(&m);
            for r in 0..64 {
                for c in 0..64 {
                    match naive[r * 64 + c] {
                        // integer-exact, so the squared values match identically
                        Some(sq) => assert_eq!(
                            field.squared(r, c),
                            Some(sq),
                            "case {case} pixel ({r},{c})"
                        ),
                        None => assert!(field.distance(r, c).is_infinite()),
                    }
                }
            }
        }
    }

    #[test]
    fn values_bounded_by_image_diagonal() {
        let mut m = BinaryMask::new(33, 17).unwrap();
        m.set(16, 32, true);
        let field = distance_transform(&m);
        let diag = ((33.0f64 * 33.0) + (17.0 * 17.0)).sqrt();
        for r in 0..17 {
            for c in 0..33 {
                assert!(field.distance(r, c) <= diag);
            }
        }
    }

    #[test]
    fn non_square_and_single_row_masks() {
        let mut m = BinaryMask::new(7, 1).unwrap();
        m.set(0, 6, true);
        let field = distance_transform(&m);
        for c in 0..7 {
            assert_eq!(field.distance(0, c), (6 - c) as f64);
        }
    }
}
