use alloc::vec;
use alloc::vec::Vec;

use crate::mesh::CheckerboardPartition;

/// Sweep directions. `D1` runs between the left-down and right-up corners,
/// `D2` between the left-up and right-down corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    HForward,
    HBackward,
    VForward,
    VBackward,
    D1,
    D2,
}

impl Direction {
    pub const ALL: [Direction; 6] = [
        Direction::HForward,
        Direction::HBackward,
        Direction::VForward,
        Direction::VBackward,
        Direction::D1,
        Direction::D2,
    ];

    pub fn is_diagonal(self) -> bool {
        matches!(self, Direction::D1 | Direction::D2)
    }
}

/// Ordered groups of cells realizing one sweep direction. Null cells are
/// kept in their groups and act as no-ops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupArrangement {
    direction: Direction,
    groups: Vec<Vec<usize>>,
    group_of: Vec<usize>,
}

pub fn build_groups(p: &CheckerboardPartition, direction: Direction) -> GroupArrangement {
    let (nr, nc) = (p.n_rows(), p.n_cols());
    let key = |r: usize, c: usize| match direction {
        Direction::HForward => c,
        Direction::HBackward => nc - 1 - c,
        Direction::VForward => r,
        Direction::VBackward => nr - 1 - r,
        Direction::D1 => r + c,
        Direction::D2 => c + (nr - 1 - r),
    };
    let n_groups = match direction {
        Direction::HForward | Direction::HBackward => nc,
        Direction::VForward | Direction::VBackward => nr,
        Direction::D1 | Direction::D2 => nr + nc - 1,
    };
    let mut groups = vec![Vec::new(); n_groups];
    let mut group_of = vec![0; p.n_dom()];
    for cell in 0..p.n_dom() {
        let (r, c) = p.row_col(cell);
        let g = key(r, c);
        groups[g].push(cell);
        group_of[cell] = g;
    }
    GroupArrangement {
        direction,
        groups,
        group_of,
    }
}

impl GroupArrangement {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_of(&self, cell: usize) -> usize {
        self.group_of[cell]
    }

    /// Directed edges `(from, to)` of the partition going from group `s` to
    /// group `t`.
    pub fn crossing_edges(&self, p: &CheckerboardPartition, s: usize, t: usize) -> Vec<(usize, usize)> {
        let topo = crate::mesh::interface_topology(p);
        topo.edges
            .iter()
            .filter(|e| self.group_of[e.from] == s && self.group_of[e.to] == t)
            .map(|e| (e.from, e.to))
            .collect()
    }
}
