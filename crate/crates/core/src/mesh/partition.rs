use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let finite = [x0, y0, x1, y1].iter().all(|v| v.is_finite());
        if !finite || x1 <= x0 || y1 <= y0 {
            return Err(invalid(format!(
                "degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Rect { x0, y0, x1, y1 })
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> [f64; 2] {
        [0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)]
    }

    /// True when `p` lies in the open rectangle.
    pub fn contains_strictly(&self, p: [f64; 2]) -> bool {
        p[0] > self.x0 && p[0] < self.x1 && p[1] > self.y0 && p[1] < self.y1
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x0 && p[0] <= self.x1 && p[1] >= self.y0 && p[1] <= self.y1
    }

    /// True when `inner` lies in the open interior of `self`.
    pub fn encloses_strictly(&self, inner: &Rect) -> bool {
        inner.x0 > self.x0 && inner.x1 < self.x1 && inner.y0 > self.y0 && inner.y1 < self.y1
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.x0 < other.x1 && other.x0 < self.x1 && self.y0 < other.y1 && other.y0 < self.y1
    }

    /// Midpoint of one side.
    pub fn side_midpoint(&self, side: Side) -> [f64; 2] {
        let [cx, cy] = self.center();
        match side {
            Side::Left => [self.x0, cy],
            Side::Right => [self.x1, cy],
            Side::Bottom => [cx, self.y0],
            Side::Top => [cx, self.y1],
        }
    }
}

/// The four sides of a rectangular cell, in the order left, bottom, right,
/// top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left = 0,
    Bottom = 1,
    Right = 2,
    Top = 3,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Bottom, Side::Right, Side::Top];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::Bottom => Side::Top,
            Side::Top => Side::Bottom,
        }
    }

    /// Sides meeting this one at its first and second endpoint. Traces run in
    /// increasing coordinate, so the first endpoint is the bottom (vertical
    /// sides) or the left (horizontal sides) one.
    pub fn endpoint_sides(self) -> [Side; 2] {
        match self {
            Side::Left | Side::Right => [Side::Bottom, Side::Top],
            Side::Bottom | Side::Top => [Side::Left, Side::Right],
        }
    }

    /// Which endpoint of `self` is shared with the perpendicular side
    /// `other`.
    pub fn endpoint_towards(self, other: Side) -> Option<usize> {
        self.endpoint_sides().iter().position(|&s| s == other)
    }

    /// Lattice offset `(d_row, d_col)` of the neighbor across this side.
    pub fn offset(self) -> (isize, isize) {
        match self {
            Side::Left => (0, -1),
            Side::Right => (0, 1),
            Side::Bottom => (-1, 0),
            Side::Top => (1, 0),
        }
    }
}

/// A lattice of `n_rows x n_cols` equal rectangular cells tiling `bounds`.
///
/// Cells are indexed row-major with row 0 at the bottom:
/// `index = row * n_cols + col`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckerboardPartition {
    bounds: Rect,
    n_rows: usize,
    n_cols: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
    active: Vec<bool>,
}

/// Builds a checkerboard partition. `mask` is row-major (row 0 at the
/// bottom); `true` marks a cell carrying unknowns.
pub fn build_partition(
    bounds: Rect,
    n_rows: usize,
    n_cols: usize,
    mask: Option<&[bool]>,
) -> Result<CheckerboardPartition> {
    if n_rows == 0 || n_cols == 0 {
        return Err(invalid(format!(
            "partition needs at least one row and column, got {n_rows} x {n_cols}"
        )));
    }
    // Validate through the constructor in case the caller built it by hand.
    let bounds = Rect::new(bounds.x0, bounds.y0, bounds.x1, bounds.y1)?;
    let active = match mask {
        Some(m) => {
            if m.len() != n_rows * n_cols {
                return Err(invalid(format!(
                    "mask has {} entries, expected {}",
                    m.len(),
                    n_rows * n_cols
                )));
            }
            m.to_vec()
        }
        None => alloc::vec![true; n_rows * n_cols],
    };
    if !active.iter().any(|&a| a) {
        return Err(invalid("mask disables every cell"));
    }
    let xs = lattice_lines(bounds.x0, bounds.x1, n_cols);
    let ys = lattice_lines(bounds.y0, bounds.y1, n_rows);
    Ok(CheckerboardPartition {
        bounds,
        n_rows,
        n_cols,
        xs,
        ys,
        active,
    })
}

fn lattice_lines(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            if i == n {
                b
            } else {
                a + (b - a) * (i as f64 / n as f64)
            }
        })
        .collect()
}

impl CheckerboardPartition {
    pub fn bounds(&self) -> Rect {
        self.bounds
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Total number of lattice cells, active or not.
    pub fn n_dom(&self) -> usize {
        self.n_rows * self.n_cols
    }

    pub fn n_active(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.n_rows && col < self.n_cols);
        row * self.n_cols + col
    }

    pub fn row_col(&self, cell: usize) -> (usize, usize) {
        (cell / self.n_cols, cell % self.n_cols)
    }

    pub fn is_active(&self, cell: usize) -> bool {
        self.active[cell]
    }

    pub fn mask(&self) -> &[bool] {
        &self.active
    }

    pub fn cell_rect(&self, cell: usize) -> Rect {
        let (r, c) = self.row_col(cell);
        Rect {
            x0: self.xs[c],
            x1: self.xs[c + 1],
            y0: self.ys[r],
            y1: self.ys[r + 1],
        }
    }

    /// Neighboring lattice cell across `side`, whether active or not.
    pub fn neighbor(&self, cell: usize, side: Side) -> Option<usize> {
        let (r, c) = self.row_col(cell);
        let (dr, dc) = side.offset();
        let nr = r as isize + dr;
        let nc = c as isize + dc;
        if nr < 0 || nc < 0 || nr >= self.n_rows as isize || nc >= self.n_cols as isize {
            None
        } else {
            Some(self.index(nr as usize, nc as usize))
        }
    }

    /// Lattice cell whose closed rectangle contains `p` (lowest index on
    /// ties).
    pub fn cell_containing(&self, p: [f64; 2]) -> Option<usize> {
        (0..self.n_dom()).find(|&c| self.cell_rect(c).contains(p))
    }

    /// x coordinates of the vertical lattice lines.
    pub fn column_lines(&self) -> &[f64] {
        &self.xs
    }

    /// y coordinates of the horizontal lattice lines.
    pub fn row_lines(&self) -> &[f64] {
        &self.ys
    }
}
