use alloc::vec::Vec;

use super::partition::{CheckerboardPartition, Side};

/// Interface `from -> to`, seen from `from`: `side` is the side of `from`
/// facing `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectedEdge {
    pub from: usize,
    pub to: usize,
    pub side: Side,
    /// Set when either end is a null cell.
    pub dummy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossPointKind {
    /// Shared by four cells.
    Interior,
    /// On the outer boundary, shared by two cells.
    Boundary,
}

/// Lattice vertex where at least two cells meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossPoint {
    /// Lattice vertex `(row_line, col_line)`.
    pub vertex: (usize, usize),
    pub kind: CrossPointKind,
    /// Incident cells, in index order.
    pub cells: Vec<usize>,
    /// Indices into [`InterfaceTopology::edges`] of directed edges having
    /// this point as an endpoint.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterfaceTopology {
    /// Directed edges ordered by source cell, then by side
    /// (left, bottom, right, top).
    pub edges: Vec<DirectedEdge>,
    pub cross_points: Vec<CrossPoint>,
}

impl InterfaceTopology {
    pub fn n_undirected(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn n_interior_cross_points(&self) -> usize {
        self.count(CrossPointKind::Interior)
    }

    pub fn n_boundary_cross_points(&self) -> usize {
        self.count(CrossPointKind::Boundary)
    }

    fn count(&self, kind: CrossPointKind) -> usize {
        self.cross_points.iter().filter(|c| c.kind == kind).count()
    }

    /// Index of the edge `to -> from` for edge `e`.
    pub fn reverse(&self, e: usize) -> usize {
        let d = self.edges[e];
        self.edges
            .iter()
            .position(|x| x.from == d.to && x.to == d.from)
            .expect("every interface has both orientations")
    }

    /// Edges leaving `cell`.
    pub fn edges_from(&self, cell: usize) -> impl Iterator<Item = (usize, &DirectedEdge)> {
        self.edges.iter().enumerate().filter(move |(_, d)| d.from == cell)
    }
}

/// Enumerates directed interfaces and cross-points of a partition. Null
/// cells still take part; edges touching them are flagged `dummy`.
pub fn interface_topology(p: &CheckerboardPartition) -> InterfaceTopology {
    let mut edges = Vec::new();
    for cell in 0..p.n_dom() {
        for side in Side::ALL {
            if let Some(to) = p.neighbor(cell, side) {
                edges.push(DirectedEdge {
                    from: cell,
                    to,
                    side,
                    dummy: !p.is_active(cell) || !p.is_active(to),
                });
            }
        }
    }

    let (nr, nc) = (p.n_rows(), p.n_cols());
    let mut cross_points = Vec::new();
    for vr in 0..=nr {
        for vc in 0..=nc {
            // Cells whose rectangle has this vertex as a corner.
            let mut cells = Vec::new();
            for r in vr.saturating_sub(1)..(vr + 1).min(nr) {
                for c in vc.saturating_sub(1)..(vc + 1).min(nc) {
                    cells.push(p.index(r, c));
                }
            }
            let kind = match cells.len() {
                4 => CrossPointKind::Interior,
                2 => CrossPointKind::Boundary,
                _ => continue,
            };
            let touches = |d: &DirectedEdge| {
                let (r, c) = p.row_col(d.from);
                let ends = match d.side {
                    Side::Left => [(r, c), (r + 1, c)],
                    Side::Right => [(r, c + 1), (r + 1, c + 1)],
                    Side::Bottom => [(r, c), (r, c + 1)],
                    Side::Top => [(r + 1, c), (r + 1, c + 1)],
                };
                ends.contains(&(vr, vc))
            };
            let incident = edges
                .iter()
                .enumerate()
                .filter(|(_, d)| touches(d))
                .map(|(i, _)| i)
                .collect();
            cross_points.push(CrossPoint {
                vertex: (vr, vc),
                kind,
                cells,
                edges: incident,
            });
        }
    }
    InterfaceTopology {
        edges,
        cross_points,
    }
}
