use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::partition::{Rect, Side};
use crate::error::{invalid, Error, Result};
use crate::math::{ceil, round};

/// Lagrange element order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementOrder {
    P1,
    P2,
}

impl ElementOrder {
    pub fn degree(self) -> usize {
        match self {
            ElementOrder::P1 => 1,
            ElementOrder::P2 => 2,
        }
    }

    pub fn nodes_per_element(self) -> usize {
        match self {
            ElementOrder::P1 => 3,
            ElementOrder::P2 => 6,
        }
    }
}

/// Number of uniform intervals used for a side of length `len` at target
/// size `h`. The small slack absorbs round-off in `len / h` so that, e.g.,
/// 2.5 / 0.05 gives 50 intervals and not 51.
pub fn intervals_for(len: f64, h: f64) -> usize {
    let r = len / h;
    let slack = 1e-9 * if r > 1.0 { r } else { 1.0 };
    let n = ceil(r - slack);
    if n < 1.0 {
        1
    } else {
        n as usize
    }
}

/// Structured right-triangle mesh of one rectangular cell.
///
/// Each grid square `(p00, p10, p11, p01)` is split along its rising
/// diagonal into `(p00, p10, p11)` and `(p00, p11, p01)`. For P2 the nodes
/// live on the grid refined once in each direction, so that every edge
/// midpoint is a grid point.
#[derive(Debug, Clone)]
pub struct SubdomainMesh {
    rect: Rect,
    order: ElementOrder,
    cells: [usize; 2],
    nodes: Vec<[f64; 2]>,
    node_grid: Vec<[usize; 2]>,
    grid_to_node: Vec<usize>,
    elements: Vec<usize>,
    traces: [Vec<usize>; 4],
    obstacle_boundary: Vec<usize>,
    holes: Vec<Rect>,
}

const NONE: usize = usize::MAX;

/// Meshes `cell` with uniform spacing close to `target_h`, optionally with a
/// rectangular hole snapped to the grid lines.
pub fn build_subdomain_mesh(
    cell: Rect,
    target_h: f64,
    obstacle: Option<Rect>,
    order: ElementOrder,
) -> Result<SubdomainMesh> {
    if !(target_h > 0.0) || !target_h.is_finite() {
        return Err(invalid(format!("mesh size must be positive, got {target_h}")));
    }
    let nx = intervals_for(cell.width(), target_h);
    let ny = intervals_for(cell.height(), target_h);
    let holes: Vec<Rect> = obstacle.into_iter().collect();
    build_grid_mesh(cell, nx, ny, &holes, order)
}

/// Meshes `rect` with `nx x ny` grid squares. Every hole must lie strictly
/// inside `rect`; it is snapped to the nearest grid lines.
pub fn build_grid_mesh(
    rect: Rect,
    nx: usize,
    ny: usize,
    holes: &[Rect],
    order: ElementOrder,
) -> Result<SubdomainMesh> {
    if nx == 0 || ny == 0 {
        return Err(invalid("mesh needs at least one interval per direction"));
    }
    let p = order.degree();
    let (fx, fy) = (nx * p, ny * p);
    let dx = rect.width() / nx as f64;
    let dy = rect.height() / ny as f64;

    // Snapped holes in coarse grid indices [i0, i1] x [j0, j1].
    let mut snapped = Vec::with_capacity(holes.len());
    for h in holes {
        if !rect.encloses_strictly(h) {
            return Err(Error::UnsupportedGeometry(format!(
                "obstacle {h:?} is not strictly inside cell {rect:?}"
            )));
        }
        let i0 = round((h.x0 - rect.x0) / dx) as usize;
        let i1 = round((h.x1 - rect.x0) / dx) as usize;
        let j0 = round((h.y0 - rect.y0) / dy) as usize;
        let j1 = round((h.y1 - rect.y0) / dy) as usize;
        if i1 <= i0 || j1 <= j0 {
            return Err(Error::UnsupportedGeometry(format!(
                "obstacle {h:?} is smaller than one mesh cell"
            )));
        }
        if i0 == 0 || j0 == 0 || i1 >= nx || j1 >= ny {
            return Err(Error::UnsupportedGeometry(format!(
                "obstacle {h:?} reaches the cell boundary after snapping to the mesh"
            )));
        }
        snapped.push([i0, i1, j0, j1]);
    }
    let in_hole_square = |i: usize, j: usize| {
        snapped
            .iter()
            .any(|&[i0, i1, j0, j1]| i >= i0 && i < i1 && j >= j0 && j < j1)
    };
    // Fine grid point strictly inside a hole / on a hole boundary.
    let fine_inside = |i: usize, j: usize| {
        snapped.iter().any(|&[i0, i1, j0, j1]| {
            i > i0 * p && i < i1 * p && j > j0 * p && j < j1 * p
        })
    };
    let fine_on_hole_boundary = |i: usize, j: usize| {
        snapped.iter().any(|&[i0, i1, j0, j1]| {
            let (a0, a1, b0, b1) = (i0 * p, i1 * p, j0 * p, j1 * p);
            i >= a0 && i <= a1 && j >= b0 && j <= b1 && !(i > a0 && i < a1 && j > b0 && j < b1)
        })
    };

    let coord = |a: f64, b: f64, i: usize, n: usize| {
        if i == n {
            b
        } else {
            a + (b - a) * (i as f64 / n as f64)
        }
    };

    let mut grid_to_node = vec![NONE; (fx + 1) * (fy + 1)];
    let mut nodes = Vec::new();
    let mut node_grid = Vec::new();
    let mut obstacle_boundary = Vec::new();
    for j in 0..=fy {
        for i in 0..=fx {
            if fine_inside(i, j) {
                continue;
            }
            let id = nodes.len();
            grid_to_node[j * (fx + 1) + i] = id;
            nodes.push([coord(rect.x0, rect.x1, i, fx), coord(rect.y0, rect.y1, j, fy)]);
            node_grid.push([i, j]);
            if fine_on_hole_boundary(i, j) {
                obstacle_boundary.push(id);
            }
        }
    }
    let g = |i: usize, j: usize| grid_to_node[j * (fx + 1) + i];

    let npe = order.nodes_per_element();
    let mut elements = Vec::with_capacity(2 * nx * ny * npe);
    for cj in 0..ny {
        for ci in 0..nx {
            if in_hole_square(ci, cj) {
                continue;
            }
            let (i, j) = (ci * p, cj * p);
            match order {
                ElementOrder::P1 => {
                    let (p00, p10, p11, p01) = (g(i, j), g(i + 1, j), g(i + 1, j + 1), g(i, j + 1));
                    elements.extend_from_slice(&[p00, p10, p11, p00, p11, p01]);
                }
                ElementOrder::P2 => {
                    let (p00, p10, p11, p01) = (g(i, j), g(i + 2, j), g(i + 2, j + 2), g(i, j + 2));
                    let (mb, mr, mc, mt, ml) = (
                        g(i + 1, j),
                        g(i + 2, j + 1),
                        g(i + 1, j + 1),
                        g(i + 1, j + 2),
                        g(i, j + 1),
                    );
                    // Vertices, then midpoints of edges (0,1), (1,2), (2,0).
                    elements.extend_from_slice(&[p00, p10, p11, mb, mr, mc]);
                    elements.extend_from_slice(&[p00, p11, p01, mc, mt, ml]);
                }
            }
        }
    }

    let traces = [
        (0..=fy).map(|j| g(0, j)).collect(),
        (0..=fx).map(|i| g(i, 0)).collect(),
        (0..=fy).map(|j| g(fx, j)).collect(),
        (0..=fx).map(|i| g(i, fy)).collect(),
    ];
    let holes = snapped
        .iter()
        .map(|&[i0, i1, j0, j1]| Rect {
            x0: coord(rect.x0, rect.x1, i0 * p, fx),
            x1: coord(rect.x0, rect.x1, i1 * p, fx),
            y0: coord(rect.y0, rect.y1, j0 * p, fy),
            y1: coord(rect.y0, rect.y1, j1 * p, fy),
        })
        .collect();

    Ok(SubdomainMesh {
        rect,
        order,
        cells: [nx, ny],
        nodes,
        node_grid,
        grid_to_node,
        elements,
        traces,
        obstacle_boundary,
        holes,
    })
}

impl SubdomainMesh {
    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn order(&self) -> ElementOrder {
        self.order
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len() / self.order.nodes_per_element()
    }

    /// Node indices of element `e`: the three vertices counter-clockwise,
    /// followed for P2 by the midpoints of edges (0,1), (1,2), (2,0).
    pub fn element(&self, e: usize) -> &[usize] {
        let npe = self.order.nodes_per_element();
        &self.elements[e * npe..(e + 1) * npe]
    }

    /// Vertex triples of all elements.
    pub fn triangles(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        (0..self.n_elements()).map(move |e| {
            let t = self.element(e);
            [t[0], t[1], t[2]]
        })
    }

    /// Ordered node indices along `side`, in increasing coordinate.
    pub fn trace(&self, side: Side) -> &[usize] {
        &self.traces[side.index()]
    }

    /// Nodes on the boundary of the obstacle holes.
    pub fn obstacle_boundary_nodes(&self) -> &[usize] {
        &self.obstacle_boundary
    }

    /// Holes after snapping to the grid.
    pub fn holes(&self) -> &[Rect] {
        &self.holes
    }

    /// Grid squares per direction (before any P2 refinement).
    pub fn grid_cells(&self) -> [usize; 2] {
        self.cells
    }

    /// Node-grid dimensions `[fx + 1, fy + 1]`.
    pub fn node_grid_dims(&self) -> [usize; 2] {
        let p = self.order.degree();
        [self.cells[0] * p + 1, self.cells[1] * p + 1]
    }

    /// Position of node `n` in the node grid.
    pub fn node_grid_index(&self, n: usize) -> [usize; 2] {
        self.node_grid[n]
    }

    /// Node at node-grid position `(i, j)`, if it was not removed by a hole.
    pub fn node_at(&self, i: usize, j: usize) -> Option<usize> {
        let [w, h] = self.node_grid_dims();
        if i >= w || j >= h {
            return None;
        }
        let n = self.grid_to_node[j * w + i];
        (n != NONE).then_some(n)
    }

    /// Signed area of element `e` (positive for counter-clockwise).
    pub fn element_area(&self, e: usize) -> f64 {
        let t = self.element(e);
        let [a, b, c] = [self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]];
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    pub fn area(&self) -> f64 {
        (0..self.n_elements()).map(|e| self.element_area(e)).sum()
    }

    /// Mesh node closest to `p` (lowest index on ties).
    pub fn nearest_node(&self, p: [f64; 2]) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (n, x) in self.nodes.iter().enumerate() {
            let d = (x[0] - p[0]) * (x[0] - p[0]) + (x[1] - p[1]) * (x[1] - p[1]);
            if d < best_d {
                best_d = d;
                best = n;
            }
        }
        best
    }
}
