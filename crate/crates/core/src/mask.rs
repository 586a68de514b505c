//! Binary mask representation, PNG I/O, morphology and connected components.
//!
//! Conventions: foreground (crack) is 1, written to disk as 255; boundary
//! extraction uses the 4-neighborhood while connected components use the
//! 8-neighborhood; pixels outside the image count as background.

use std::path::Path;

use image::{DynamicImage, ImageFormat};
use rand::Rng;

use crate::error::{Error, Result};
use crate::points::{Point, PointSet};

/// Rectangular grid of `{0,1}` pixels stored row-major. Foreground = crack.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl std::fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BinaryMask({}x{}, {} foreground)",
            self.width,
            self.height,
            self.count_foreground()
        )
    }
}

/// Structuring element for morphology. `Cross4` is the 4-neighborhood plus
/// center (city-block growth); `Square8` is the full 3x3 block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructuringElement {
    Cross4,
    Square8,
}

impl StructuringElement {
    pub fn offsets(self) -> &'static [(i64, i64)] {
        match self {
            StructuringElement::Cross4 => &[(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)],
            StructuringElement::Square8 => &[
                (-1, -1),
                (-1, 0),
                (-1, 1),
                (0, -1),
                (0, 0),
                (0, 1),
                (1, -1),
                (1, 0),
                (1, 1),
            ],
        }
    }
}

impl std::fmt::Display for StructuringElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StructuringElement::Cross4 => write!(f, "cross4"),
            StructuringElement::Square8 => write!(f, "square8"),
        }
    }
}

impl std::str::FromStr for StructuringElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cross4" => Ok(StructuringElement::Cross4),
            "square8" => Ok(StructuringElement::Square8),
            other => Err(Error::invalid(format!(
                "unknown structuring element {other:?} (expected cross4 or square8)"
            ))),
        }
    }
}

impl BinaryMask {
    /// All-background mask.
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!(
                "mask dimensions must be positive, got {width}x{height}"
            )));
        }
        Ok(BinaryMask {
            width,
            height,
            pixels: vec![0; width * height],
        })
    }

    /// Builds a mask from a row-major `{0,1}` buffer.
    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!(
                "mask dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::invalid(format!(
                "pixel buffer has {} entries, expected {}",
                pixels.len(),
                width * height
            )));
        }
        if let Some(v) = pixels.iter().find(|&&v| v > 1) {
            return Err(Error::invalid(format!(
                "mask pixels must be 0 or 1, found {v}"
            )));
        }
        Ok(BinaryMask {
            width,
            height,
            pixels,
        })
    }

    /// Rasterizes a point set into a `height x width` mask.
    pub fn from_points(points: &PointSet, height: usize, width: usize) -> Result<Self> {
        let mut mask = BinaryMask::new(width, height)?;
        for p in points.iter() {
            if p.row as usize >= height || p.col as usize >= width {
                return Err(Error::invalid(format!(
                    "point ({}, {}) outside {height}x{width} raster",
                    p.row, p.col
                )));
            }
            mask.set(p.row as usize, p.col as usize, true);
        }
        Ok(mask)
    }

    /// Seeded random mask where each pixel is foreground with probability
    /// `density`. Used by the benchmark harness and fixtures.
    pub fn random<R: Rng>(width: usize, height: usize, density: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::invalid(format!(
                "density must lie in [0,1], got {density}"
            )));
        }
        let mut mask = BinaryMask::new(width, height)?;
        for px in mask.pixels.iter_mut() {
            *px = u8::from(rng.gen_bool(density));
        }
        Ok(mask)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// `(height, width)`, the frame used for point-set bounds.
    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.pixels[row * self.width + col] != 0
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.pixels[row * self.width + col] = u8::from(value);
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn count_foreground(&self) -> usize {
        self.pixels.iter().filter(|&&v| v != 0).count()
    }

    /// True when the mask has no foreground pixel at all ("All-Black").
    pub fn is_all_background(&self) -> bool {
        self.pixels.iter().all(|&v| v == 0)
    }

    /// Swaps foreground and background; used for dark-crack-on-light inputs.
    pub fn complement(&self) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&v| 1 - v).collect(),
        }
    }

    fn in_bounds(&self, row: i64, col: i64) -> bool {
        row >= 0 && col >= 0 && (row as usize) < self.height && (col as usize) < self.width
    }
}

/// Loads a PNG (grayscale or RGB) and binarizes it: a pixel is foreground
/// iff its luminance is `>= threshold`. RGB luminance is the integer average
/// of the three channels.
pub fn load_mask(path: impl AsRef<Path>, threshold: u8) -> Result<BinaryMask> {
    if threshold == 0 {
        return Err(Error::invalid("threshold must lie in [1,255]"));
    }
    let path = path.as_ref();
    let img = image::open(path).map_err(|source| match source {
        image::ImageError::IoError(e) => Error::io(path, e),
        other => Error::Image {
            path: path.to_path_buf(),
            source: other,
        },
    })?;
    let (width, height) = (img.width() as usize, img.height() as usize);
    if width == 0 || height == 0 {
        return Err(Error::Format(format!(
            "{} has zero dimension ({width}x{height})",
            path.display()
        )));
    }
    let luma: Vec<u8> = match img {
        DynamicImage::ImageLuma8(buf) => buf.into_raw(),
        DynamicImage::ImageLumaA8(buf) => buf.pixels().map(|p| p.0[0]).collect(),
        other => other
            .to_rgb8()
            .pixels()
            .map(|p| {
                let [r, g, b] = p.0;
                ((r as u16 + g as u16 + b as u16) / 3) as u8
            })
            .collect(),
    };
    let pixels = luma.iter().map(|&v| u8::from(v >= threshold)).collect();
    BinaryMask::from_pixels(width, height, pixels)
}

/// Writes the mask as an 8-bit grayscale PNG, foreground as 255.
/// `load_mask(save_mask(m), 128)` round-trips bit-exactly.
pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes: Vec<u8> = mask.pixels.iter().map(|&v| if v != 0 { 255 } else { 0 }).collect();
    let buf = image::GrayImage::from_raw(mask.width as u32, mask.height as u32, bytes)
        .expect("buffer length matches dimensions");
    buf.save_with_format(path, ImageFormat::Png)
        .map_err(|source| match source {
            image::ImageError::IoError(e) => Error::io(path, e),
            other => Error::Image {
                path: path.to_path_buf(),
                source: other,
            },
        })
}

/// Coordinates of every foreground pixel, with the mask dimensions attached
/// as bounds.
pub fn foreground_points(mask: &BinaryMask) -> PointSet {
    let mut points = Vec::new();
    for row in 0..mask.height {
        for col in 0..mask.width {
            if mask.get(row, col) {
                points.push(Point::new(row as u32, col as u32));
            }
        }
    }
    PointSet::with_bounds(points, mask.dims()).expect("foreground points lie within the mask")
}

/// Foreground pixels having at least one 4-neighbor that is background or
/// outside the image. Border pixels therefore always qualify.
pub fn boundary_points(mask: &BinaryMask) -> PointSet {
    let mut points = Vec::new();
    for row in 0..mask.height {
        for col in 0..mask.width {
            if !mask.get(row, col) {
                continue;
            }
            let exposed = [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)].iter().any(|&(dr, dc)| {
                let (nr, nc) = (row as i64 + dr, col as i64 + dc);
                !mask.in_bounds(nr, nc) || !mask.get(nr as usize, nc as usize)
            });
            if exposed {
                points.push(Point::new(row as u32, col as u32));
            }
        }
    }
    PointSet::with_bounds(points, mask.dims()).expect("boundary points lie within the mask")
}

/// Binary morphological dilation applied `iterations` times, clipped to the
/// image bounds. Zero iterations is the identity.
pub fn dilate(mask: &BinaryMask, element: StructuringElement, iterations: usize) -> BinaryMask {
    let mut current = mask.clone();
    for _ in 0..iterations {
        let mut next = current.clone();
        for row in 0..current.height {
            for col in 0..current.width {
                if !current.get(row, col) {
                    continue;
                }
                for &(dr, dc) in element.offsets() {
                    let (nr, nc) = (row as i64 + dr, col as i64 + dc);
                    if current.in_bounds(nr, nc) {
                        next.set(nr as usize, nc as usize, true);
                    }
                }
            }
        }
        current = next;
    }
    current
}

/// Binary morphological erosion applied `iterations` times. A pixel survives
/// a pass only if every element offset lands on foreground; offsets falling
/// outside the image count as background, so border pixels erode.
pub fn erode(mask: &BinaryMask, element: StructuringElement, iterations: usize) -> BinaryMask {
    let mut current = mask.clone();
    for _ in 0..iterations {
        let mut next = BinaryMask::new(current.width, current.height)
            .expect("dimensions already validated");
        for row in 0..current.height {
            for col in 0..current.width {
                if !current.get(row, col) {
                    continue;
                }
                let keep = element.offsets().iter().all(|&(dr, dc)| {
                    let (nr, nc) = (row as i64 + dr, col as i64 + dc);
                    current.in_bounds(nr, nc) && current.get(nr as usize, nc as usize)
                });
                next.set(row, col, keep);
            }
        }
        current = next;
    }
    current
}

/// Moves every foreground pixel by `(dy, dx)`; pixels leaving the frame are
/// discarded.
pub fn translate_mask(mask: &BinaryMask, dy: i64, dx: i64) -> BinaryMask {
    let mut out = BinaryMask::new(mask.width, mask.height).expect("dimensions already validated");
    for row in 0..mask.height {
        for col in 0..mask.width {
            if !mask.get(row, col) {
                continue;
            }
            let (nr, nc) = (row as i64 + dy, col as i64 + dx);
            if mask.in_bounds(nr, nc) {
                out.set(nr as usize, nc as usize, true);
            }
        }
    }
    out
}

/// 8-connected component labels: background stays 0, components are numbered
/// 1..=count in row-major order of first appearance.
#[derive(Clone, Debug)]
pub struct ComponentLabels {
    pub count: usize,
    pub labels: Vec<u32>,
    pub width: usize,
    pub height: usize,
}

impl ComponentLabels {
    pub fn label(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }
}

/// Labels 8-connected foreground components with a two-pass union-find.
pub fn connected_components(mask: &BinaryMask) -> ComponentLabels {
    let (w, h) = (mask.width, mask.height);
    let mut provisional = vec![0u32; w * h];
    // parent[0] is reserved for background and never unioned.
    let mut parent: Vec<u32> = vec![0];

    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }

    for row in 0..h {
        for col in 0..w {
            if !mask.get(row, col) {
                continue;
            }
            // Prior neighbors in scan order: W, NW, N, NE.
            let mut neighbor_roots = [0u32; 4];
            let mut n = 0;
            for &(dr, dc) in &[(0i64, -1i64), (-1, -1), (-1, 0), (-1, 1)] {
                let (nr, nc) = (row as i64 + dr, col as i64 + dc);
                if mask.in_bounds(nr, nc) {
                    let lbl = provisional[nr as usize * w + nc as usize];
                    if lbl != 0 {
                        neighbor_roots[n] = find(&mut parent, lbl);
                        n += 1;
                    }
                }
            }
            let label = if n == 0 {
                let fresh = parent.len() as u32;
                parent.push(fresh);
                fresh
            } else {
                let min = *neighbor_roots[..n].iter().min().unwrap();
                for &r in &neighbor_roots[..n] {
                    parent[r as usize] = min;
                }
                min
            };
            provisional[row * w + col] = label;
        }
    }

    // Second pass: resolve roots and compact ids in first-appearance order.
    let mut compact: Vec<u32> = vec![0; parent.len()];
    let mut count = 0u32;
    let mut labels = vec![0u32; w * h];
    for idx in 0..w * h {
        let lbl = provisional[idx];
        if lbl == 0 {
            continue;
        }
        let root = find(&mut parent, lbl);
        if compact[root as usize] == 0 {
            count += 1;
            compact[root as usize] = count;
        }
        labels[idx] = compact[root as usize];
    }

    ComponentLabels {
        count: count as usize,
        labels,
        width: w,
        height: h,
    }
}
