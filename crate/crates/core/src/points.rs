use crate::error::{Error, Result};

/// Integer pixel coordinate, `(row, col)` with the origin at the top-left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub row: u32,
    pub col: u32,
}

impl Point {
    pub fn new(row: u32, col: u32) -> Self {
        Point { row, col }
    }

    /// Euclidean distance between two pixel centers.
    pub fn distance(self, other: Point) -> f64 {
        let dr = self.row as f64 - other.row as f64;
        let dc = self.col as f64 - other.col as f64;
        (dr * dr + dc * dc).sqrt()
    }
}

impl From<(u32, u32)> for Point {
    fn from((row, col): (u32, u32)) -> Self {
        Point { row, col }
    }
}

/// A finite set of pixel coordinates, the operand of every Hausdorff
/// computation. Points are kept sorted and deduplicated; `bounds`, when
/// present, is the `(height, width)` of the image the set was taken from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
    bounds: Option<(usize, usize)>,
}

impl PointSet {
    /// Builds a set from arbitrary coordinates; duplicates are dropped.
    pub fn new<I, P>(points: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<Point>,
    {
        let mut points: Vec<Point> = points.into_iter().map(Into::into).collect();
        points.sort_unstable();
        points.dedup();
        PointSet {
            points,
            bounds: None,
        }
    }

    /// As [`PointSet::new`], but records the `(height, width)` bounds and
    /// rejects points lying outside them.
    pub fn with_bounds<I, P>(points: I, bounds: (usize, usize)) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: Into<Point>,
    {
        let set = Self::new(points);
        let (height, width) = bounds;
        if let Some(p) = set
            .points
            .iter()
            .find(|p| p.row as usize >= height || p.col as usize >= width)
        {
            return Err(Error::invalid(format!(
                "point ({}, {}) outside bounds {}x{}",
                p.row, p.col, height, width
            )));
        }
        Ok(PointSet {
            points: set.points,
            bounds: Some(bounds),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(height, width)` of the source image, when known.
    pub fn bounds(&self) -> Option<(usize, usize)> {
        self.bounds
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.points.iter().copied()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    /// Shifts every point by `(dy, dx)`; errors if any coordinate would go
    /// negative. Bounds are dropped since the frame no longer applies.
    pub fn translated(&self, dy: i64, dx: i64) -> Result<PointSet> {
        let mut out = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let row = p.row as i64 + dy;
            let col = p.col as i64 + dx;
            if row < 0 || col < 0 || row > u32::MAX as i64 || col > u32::MAX as i64 {
                return Err(Error::invalid(format!(
                    "translation ({dy}, {dx}) moves ({}, {}) out of the coordinate range",
                    p.row, p.col
                )));
            }
            out.push(Point::new(row as u32, col as u32));
        }
        Ok(PointSet::new(out))
    }

    /// Smallest `(height, width)` frame that contains every point: the
    /// recorded bounds when present, otherwise max coordinate + 1.
    pub fn frame(&self) -> (usize, usize) {
        if let Some(b) = self.bounds {
            return b;
        }
        let height = self
            .points
            .iter()
            .map(|p| p.row as usize + 1)
            .max()
            .unwrap_or(0);
        let width = self
            .points
            .iter()
            .map(|p| p.col as usize + 1)
            .max()
            .unwrap_or(0);
        (height, width)
    }
}
