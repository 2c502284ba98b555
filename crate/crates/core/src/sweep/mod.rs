//! Group arrangements of the checkerboard and the sweeping preconditioners.
//!
//! Ordering subdomains into groups `Omega_[1..N_gr]` turns `F` into a block
//! tridiagonal matrix whose off-diagonal blocks couple consecutive groups.
//! Both preconditioners replace the diagonal blocks by the identity:
//!
//! - SGS applies `U^{-1} L^{-1}`: a forward sweep over the groups, then a
//!   backward sweep on its output;
//! - DS applies `L~ + U~ - I` with modified triangular factors whose
//!   forward and backward sweeps touch disjoint data, so they can run
//!   concurrently.
//!
//! Nothing is assembled: every block action is a subdomain solve followed
//! by an outgoing-data extraction.

mod groups;

use alloc::vec::Vec;

pub use groups::{build_groups, Direction, GroupArrangement};

use crate::ddm::DdmProblem;
use crate::error::Result;
use crate::krylov::Preconditioner;
use crate::{par, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecondKind {
    /// Symmetric Gauss-Seidel.
    Sgs,
    /// Double sweep.
    Ds,
}

/// Preconditioner kind and the cyclic direction schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecondConfig {
    pub kind: PrecondKind,
    pub schedule: Vec<Direction>,
}

impl PrecondConfig {
    pub fn new(kind: PrecondKind, schedule: Vec<Direction>) -> Result<Self> {
        if schedule.is_empty() {
            return Err(crate::error::invalid("direction schedule must not be empty"));
        }
        Ok(PrecondConfig { kind, schedule })
    }
}

/// Direction used at outer iteration `it`.
pub fn next_direction(config: &PrecondConfig, it: usize) -> Direction {
    config.schedule[it % config.schedule.len()]
}

/// One sweep direction over the groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pass {
    Forward,
    Backward,
}

impl Pass {
    /// Group whose incoming data is updated from group `s`.
    fn target(self, s: usize) -> usize {
        match self {
            Pass::Forward => s + 1,
            Pass::Backward => s - 1,
        }
    }

    fn groups(self, n: usize) -> Vec<usize> {
        match self {
            Pass::Forward => (0..n.saturating_sub(1)).collect(),
            Pass::Backward => (1..n).rev().collect(),
        }
    }
}

/// Runs one pass in place on `w`.
///
/// For each group `S` and each subdomain `I` in it, `I` is solved and its
/// outgoing data updates the blocks `J -> I` of the neighbors `J` in the
/// target group: `w[J -> I] <- w[J -> I] - w[I -> J] + 2B(u_I)` for SGS, and
/// `w[J -> I] <- w[J -> I] + 2B(u_I)` for DS, where DS also solves `I`
/// without its data on the edges toward the target group.
fn sweep_pass(
    pb: &DdmProblem,
    arr: &GroupArrangement,
    kind: PrecondKind,
    pass: Pass,
    w: &mut [C64],
) -> Result<()> {
    let layout = pb.layout();
    for s in pass.groups(arr.n_groups()) {
        let t = pass.target(s);
        let towards = |b: usize| arr.group_of(layout.block(b).to) == t;
        let cells: Vec<usize> = arr.groups()[s]
            .iter()
            .copied()
            .filter(|&c| pb.partition().is_active(c))
            .collect();
        let snapshot: &[C64] = w;
        let updates = par::map(&cells, |&c| match kind {
            PrecondKind::Sgs => pb.cell_outgoing(c, snapshot, |_| true, None, towards),
            PrecondKind::Ds => pb.cell_outgoing(c, snapshot, |b| !towards(b), None, towards),
        });
        let mut writes = Vec::new();
        for u in updates {
            for (b, data) in u? {
                let own = layout.block(b);
                let rev = layout.block(own.reverse);
                let new: Vec<C64> = match kind {
                    PrecondKind::Sgs => rev
                        .range()
                        .zip(own.range())
                        .zip(data)
                        .map(|((r, o), d)| w[r] - w[o] + d)
                        .collect(),
                    PrecondKind::Ds => rev.range().zip(data).map(|(r, d)| w[r] + d).collect(),
                };
                writes.push((rev.offset, new));
            }
        }
        for (off, vals) in writes {
            w[off..off + vals.len()].copy_from_slice(&vals);
        }
    }
    Ok(())
}

/// Symmetric Gauss-Seidel sweep: forward over the groups, then backward.
pub fn sgs_apply(pb: &DdmProblem, arr: &GroupArrangement, r: &[C64]) -> Result<Vec<C64>> {
    pb.layout().check(r)?;
    let mut w = r.to_vec();
    sweep_pass(pb, arr, PrecondKind::Sgs, Pass::Forward, &mut w)?;
    sweep_pass(pb, arr, PrecondKind::Sgs, Pass::Backward, &mut w)?;
    Ok(w)
}

/// Double sweep: forward and backward passes run on separate copies
/// (concurrently with the `parallel` feature) and are merged by their
/// disjoint write sets.
pub fn ds_apply(pb: &DdmProblem, arr: &GroupArrangement, r: &[C64]) -> Result<Vec<C64>> {
    pb.layout().check(r)?;
    let (fw, bw) = par::join(
        || -> Result<Vec<C64>> {
            let mut w = r.to_vec();
            sweep_pass(pb, arr, PrecondKind::Ds, Pass::Forward, &mut w)?;
            Ok(w)
        },
        || -> Result<Vec<C64>> {
            let mut w = r.to_vec();
            sweep_pass(pb, arr, PrecondKind::Ds, Pass::Backward, &mut w)?;
            Ok(w)
        },
    );
    let (fw, bw) = (fw?, bw?);
    let (fset, bset) = ds_write_sets(pb, arr);
    let mut out = r.to_vec();
    for i in fset {
        out[i] = fw[i];
    }
    for i in bset {
        out[i] = bw[i];
    }
    Ok(out)
}

/// Forward DS pass alone (`L~` applied to `r`).
#[doc(hidden)]
pub fn ds_forward_only(pb: &DdmProblem, arr: &GroupArrangement, r: &[C64]) -> Result<Vec<C64>> {
    let mut w = r.to_vec();
    sweep_pass(pb, arr, PrecondKind::Ds, Pass::Forward, &mut w)?;
    Ok(w)
}

/// Backward DS pass alone (`U~` applied to `r`).
#[doc(hidden)]
pub fn ds_backward_only(pb: &DdmProblem, arr: &GroupArrangement, r: &[C64]) -> Result<Vec<C64>> {
    let mut w = r.to_vec();
    sweep_pass(pb, arr, PrecondKind::Ds, Pass::Backward, &mut w)?;
    Ok(w)
}

/// Both DS passes applied one after the other on a single vector, in the
/// given order.
#[doc(hidden)]
pub fn ds_sequential(
    pb: &DdmProblem,
    arr: &GroupArrangement,
    r: &[C64],
    forward_first: bool,
) -> Result<Vec<C64>> {
    let mut w = r.to_vec();
    let order = if forward_first {
        [Pass::Forward, Pass::Backward]
    } else {
        [Pass::Backward, Pass::Forward]
    };
    for pass in order {
        sweep_pass(pb, arr, PrecondKind::Ds, pass, &mut w)?;
    }
    Ok(w)
}

/// Global indices written by the forward and by the backward DS pass: the
/// blocks `J -> I` with `J` one group after (forward) or before (backward)
/// `I`.
pub fn ds_write_sets(pb: &DdmProblem, arr: &GroupArrangement) -> (Vec<usize>, Vec<usize>) {
    let mut fset = Vec::new();
    let mut bset = Vec::new();
    for blk in pb.layout().blocks() {
        if blk.dummy {
            continue;
        }
        let (gf, gt) = (arr.group_of(blk.from), arr.group_of(blk.to));
        if gf == gt + 1 {
            fset.extend(blk.range());
        } else if gt == gf + 1 {
            bset.extend(blk.range());
        }
    }
    (fset, bset)
}

/// Sweeping preconditioner bound to a problem, usable with FGMRES.
pub struct SweepPreconditioner<'a> {
    problem: &'a DdmProblem,
    config: PrecondConfig,
    arrangements: Vec<GroupArrangement>,
}

impl<'a> SweepPreconditioner<'a> {
    pub fn new(problem: &'a DdmProblem, config: PrecondConfig) -> Self {
        let arrangements = config
            .schedule
            .iter()
            .map(|&d| build_groups(problem.partition(), d))
            .collect();
        SweepPreconditioner {
            problem,
            config,
            arrangements,
        }
    }

    pub fn config(&self) -> &PrecondConfig {
        &self.config
    }
}

impl Preconditioner for SweepPreconditioner<'_> {
    fn apply(&self, iteration: usize, x: &[C64]) -> Result<Vec<C64>> {
        let arr = &self.arrangements[iteration % self.arrangements.len()];
        match self.config.kind {
            PrecondKind::Sgs => sgs_apply(self.problem, arr, x),
            PrecondKind::Ds => ds_apply(self.problem, arr, x),
        }
    }
}
