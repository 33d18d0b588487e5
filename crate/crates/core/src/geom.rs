//! Index intervals and rectangles shared by every stage.
//!
//! Coordinates follow the image convention used throughout the crate:
//! `x` (column) grows rightward and `y` (row) grows downward.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Inclusive index interval `[start, end]` on one image axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Band {
    pub start: usize,
    pub end: usize,
}

impl Band {
    pub fn new(start: usize, end: usize) -> Self {
        assert!(start <= end, "band start {start} exceeds end {end}");
        Self { start, end }
    }

    /// Band covering `[0, len - 1]`.
    pub fn full(len: usize) -> Self {
        Self::new(0, len.saturating_sub(1))
    }

    pub fn width(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }

    pub fn intersects(&self, other: &Band) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    /// Shift both endpoints by `offset`.
    pub fn offset(&self, offset: usize) -> Self {
        Self::new(self.start + offset, self.end + offset)
    }

    /// Smallest band containing both.
    pub fn union(&self, other: &Band) -> Self {
        Self::new(self.start.min(other.start), self.end.max(other.end))
    }

    /// Midpoint index, rounded down.
    pub fn midpoint(&self) -> usize {
        self.start + (self.end - self.start) / 2
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// Inclusive rectangle `(x0, y0)`..=`(x1, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Rect {
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        assert!(x0 <= x1 && y0 <= y1, "degenerate rect");
        Self { x0, y0, x1, y1 }
    }

    pub fn from_bands(x: Band, y: Band) -> Self {
        Self::new(x.start, y.start, x.end, y.end)
    }

    pub fn x_band(&self) -> Band {
        Band::new(self.x0, self.x1)
    }

    pub fn y_band(&self) -> Band {
        Band::new(self.y0, self.y1)
    }

    pub fn width(&self) -> usize {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0 + 1
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    /// Grow to include the point `(x, y)`.
    pub fn include(&mut self, x: usize, y: usize) {
        self.x0 = self.x0.min(x);
        self.y0 = self.y0.min(y);
        self.x1 = self.x1.max(x);
        self.y1 = self.y1.max(y);
    }

    pub fn translate(&self, dx: usize, dy: usize) -> Self {
        Self::new(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)
    }
}
