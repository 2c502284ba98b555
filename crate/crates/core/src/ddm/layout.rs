use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::mesh::{CheckerboardPartition, InterfaceTopology, Side};
use crate::C64;

/// One directed block `from -> to` of the transmission vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeBlock {
    pub from: usize,
    pub to: usize,
    /// Side of `from` facing `to`.
    pub side: Side,
    /// Either end is a null cell; the block stays identically zero.
    pub dummy: bool,
    pub offset: usize,
    pub trace_len: usize,
    /// Corner scalars per endpoint (the number of auxiliary fields).
    pub n_corner: usize,
    /// Index of the block `to -> from`.
    pub reverse: usize,
}

impl EdgeBlock {
    pub fn len(&self) -> usize {
        self.trace_len + 2 * self.n_corner
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn range(&self) -> core::ops::Range<usize> {
        self.offset..self.offset + self.len()
    }

    /// Positions of the corner scalars at endpoint `e` (0 or 1).
    pub fn corner_range(&self, e: usize) -> core::ops::Range<usize> {
        let start = self.offset + self.trace_len + e * self.n_corner;
        start..start + self.n_corner
    }
}

/// Placement of every directed interface block in the global transmission
/// vector. Each block is `[trace values; N corner scalars at the first
/// endpoint; N at the second]`, endpoints ordered by increasing coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransmissionLayout {
    blocks: Vec<EdgeBlock>,
    /// `by_cell[cell][side]` = block leaving `cell` through `side`.
    by_cell: Vec<[Option<usize>; 4]>,
    total: usize,
}

impl TransmissionLayout {
    /// Builds the layout from the interface topology. `trace_len(cell, side)`
    /// gives the number of trace nodes; `n_corner` the number of corner
    /// scalars per endpoint. Dummy edges are kept as zero blocks when
    /// `keep_dummy_blocks`, or left out entirely otherwise.
    pub fn new(
        partition: &CheckerboardPartition,
        topology: &InterfaceTopology,
        trace_len: impl Fn(usize, Side) -> usize,
        n_corner: usize,
        keep_dummy_blocks: bool,
    ) -> Self {
        let kept: Vec<usize> = (0..topology.edges.len())
            .filter(|&e| keep_dummy_blocks || !topology.edges[e].dummy)
            .collect();
        let mut by_cell = vec![[None; 4]; partition.n_dom()];
        let mut blocks = Vec::with_capacity(kept.len());
        let mut offset = 0;
        for &e in &kept {
            let d = topology.edges[e];
            let block = EdgeBlock {
                from: d.from,
                to: d.to,
                side: d.side,
                dummy: d.dummy,
                offset,
                trace_len: trace_len(d.from, d.side),
                n_corner,
                reverse: usize::MAX,
            };
            offset += block.len();
            by_cell[d.from][d.side.index()] = Some(blocks.len());
            blocks.push(block);
        }
        for b in 0..blocks.len() {
            let (to, side) = (blocks[b].to, blocks[b].side.opposite());
            blocks[b].reverse = by_cell[to][side.index()].expect("both orientations are kept together");
        }
        TransmissionLayout {
            blocks,
            by_cell,
            total: offset,
        }
    }

    /// Total dimension of the transmission vector.
    pub fn dim(&self) -> usize {
        self.total
    }

    pub fn blocks(&self) -> &[EdgeBlock] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &EdgeBlock {
        &self.blocks[b]
    }

    /// Block leaving `cell` through `side`, if any.
    pub fn block_of(&self, cell: usize, side: Side) -> Option<usize> {
        self.by_cell[cell][side.index()]
    }

    /// Block index whose range contains global position `i`.
    pub fn block_containing(&self, i: usize) -> Option<usize> {
        let b = self.blocks.partition_point(|blk| blk.offset + blk.len() <= i);
        (b < self.blocks.len() && self.blocks[b].range().contains(&i)).then_some(b)
    }

    pub fn check(&self, g: &[C64]) -> Result<()> {
        if g.len() != self.total {
            return Err(invalid(format!(
                "transmission vector has length {}, layout expects {}",
                g.len(),
                self.total
            )));
        }
        Ok(())
    }

    /// Zero vector of the layout's dimension.
    pub fn zeros(&self) -> Vec<C64> {
        vec![C64::new(0.0, 0.0); self.total]
    }
}
