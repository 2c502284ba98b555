//! Transmission-variable layout and the matrix-free interface operator.
//!
//! The unknown `g` stacks one block per directed interface `I -> J`; block
//! `g[I -> J]` is the data of subdomain `I` on its side facing `J`. One
//! application of the iteration operator solves every subdomain with its
//! incoming data and returns
//! `A g [I -> J] = -g[J -> I] + 2 B(u_J, phi_J)` on the shared side, with the
//! corner scalars built the same way from the auxiliary fields. The interface
//! system is `F g = (I - A) g = b`.

mod layout;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

pub use layout::{EdgeBlock, TransmissionLayout};

use crate::error::{invalid, Error, Result};
use crate::fem::{assemble_subdomain, SideKind, SideSpec, SubdomainSource, SubdomainSystem};
use crate::habc::PadeParams;
use crate::math::cis;
use crate::mesh::{
    build_subdomain_mesh, interface_topology, intervals_for, CheckerboardPartition, ElementOrder,
    InterfaceTopology, Rect, Side, SubdomainMesh, WavenumberField,
};
use crate::{par, C64};

/// Unit-amplitude nodal load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSource {
    pub position: [f64; 2],
    pub amplitude: C64,
}

/// Incident plane wave `exp(i k (cos(theta) x + sin(theta) y))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub angle: f64,
    pub k: f64,
}

impl PlaneWave {
    pub fn eval(&self, p: [f64; 2]) -> C64 {
        let (c, s) = (crate::math::cos(self.angle), crate::math::sin(self.angle));
        cis(self.k * (c * p[0] + s * p[1]))
    }
}

/// Physical data of a problem. When `incident` is set, every obstacle
/// boundary carries the sound-soft data `u = -u_inc`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sources {
    pub points: Vec<PointSource>,
    pub incident: Option<PlaneWave>,
}

impl Sources {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.incident.is_none()
    }
}

/// Everything needed to set up the decomposed problem.
#[derive(Debug, Clone)]
pub struct DdmSetup {
    pub partition: CheckerboardPartition,
    pub wavenumber: WavenumberField,
    /// Operator on the outer boundary (and on sides facing null cells).
    pub exterior: PadeParams,
    /// Operator on the interfaces.
    pub transmission: PadeParams,
    pub order: ElementOrder,
    /// Target mesh size.
    pub h: f64,
    /// Rectangular holes, each strictly inside one cell.
    pub obstacles: Vec<(usize, Rect)>,
    /// Keep zero blocks for interfaces touching null cells.
    pub keep_dummy_blocks: bool,
}

/// Decomposed problem: meshes and factorized systems of all active cells
/// plus the transmission layout.
#[derive(Debug, Clone)]
pub struct DdmProblem {
    setup: DdmSetup,
    topology: InterfaceTopology,
    layout: TransmissionLayout,
    meshes: Vec<Option<SubdomainMesh>>,
    systems: Vec<Option<SubdomainSystem>>,
    swap_only: bool,
}

impl DdmProblem {
    /// Meshes, assembles and factorizes every active cell (concurrently with
    /// the `parallel` feature).
    pub fn new(setup: DdmSetup) -> Result<Self> {
        let part = &setup.partition;
        for &(cell, hole) in &setup.obstacles {
            if cell >= part.n_dom() || !part.is_active(cell) {
                return Err(Error::UnsupportedGeometry(format!(
                    "obstacle assigned to missing or null cell {cell}"
                )));
            }
            if !part.cell_rect(cell).encloses_strictly(&hole) {
                return Err(Error::UnsupportedGeometry(format!(
                    "obstacle {hole:?} is not contained in a single cell"
                )));
            }
        }
        let topology = interface_topology(part);
        let cells: Vec<usize> = (0..part.n_dom()).collect();
        let built = par::map(&cells, |&cell| -> Result<Option<(SubdomainMesh, SubdomainSystem)>> {
            if !part.is_active(cell) {
                return Ok(None);
            }
            let hole = setup.obstacles.iter().find(|o| o.0 == cell).map(|o| o.1);
            let mesh = build_subdomain_mesh(part.cell_rect(cell), setup.h, hole, setup.order)?;
            let sides = Side::ALL.map(|s| match part.neighbor(cell, s) {
                Some(n) if part.is_active(n) => {
                    SideSpec::new(SideKind::Transmission, setup.transmission.clone())
                }
                _ => SideSpec::new(SideKind::ExteriorHabc, setup.exterior.clone()),
            });
            let system =
                assemble_subdomain(&mesh, &setup.wavenumber, &sides, &SubdomainSource::default())?;
            Ok(Some((mesh, system)))
        });
        let mut meshes = Vec::with_capacity(cells.len());
        let mut systems = Vec::with_capacity(cells.len());
        for b in built {
            match b? {
                Some((m, s)) => {
                    meshes.push(Some(m));
                    systems.push(Some(s));
                }
                None => {
                    meshes.push(None);
                    systems.push(None);
                }
            }
        }
        let p = setup.order.degree();
        let (h, w, ht) = (setup.h, part.cell_rect(0).width(), part.cell_rect(0).height());
        let trace_len = |_: usize, s: Side| match s {
            Side::Left | Side::Right => p * intervals_for(ht, h) + 1,
            Side::Bottom | Side::Top => p * intervals_for(w, h) + 1,
        };
        let layout = TransmissionLayout::new(
            part,
            &topology,
            trace_len,
            setup.transmission.n_aux(),
            setup.keep_dummy_blocks,
        );
        Ok(DdmProblem {
            setup,
            topology,
            layout,
            meshes,
            systems,
            swap_only: false,
        })
    }

    pub fn setup(&self) -> &DdmSetup {
        &self.setup
    }

    pub fn partition(&self) -> &CheckerboardPartition {
        &self.setup.partition
    }

    pub fn topology(&self) -> &InterfaceTopology {
        &self.topology
    }

    pub fn layout(&self) -> &TransmissionLayout {
        &self.layout
    }

    /// Dimension of the interface system.
    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn mesh(&self, cell: usize) -> Option<&SubdomainMesh> {
        self.meshes[cell].as_ref()
    }

    pub fn system(&self, cell: usize) -> Option<&SubdomainSystem> {
        self.systems[cell].as_ref()
    }

    /// Test hook: suppress the `2B` extraction so that `apply_a` reduces to
    /// the sign-flipped swap `g[I -> J] <- -g[J -> I]`.
    #[doc(hidden)]
    pub fn set_swap_only(&mut self, on: bool) {
        self.swap_only = on;
    }

    /// Distributes physical data onto the cells. Point loads go to the
    /// nearest node of the cell strictly containing them.
    pub fn resolve_sources(&self, sources: &Sources) -> Result<Vec<SubdomainSource>> {
        let part = self.partition();
        let mut out = vec![SubdomainSource::default(); part.n_dom()];
        for ps in &sources.points {
            let cell = (0..part.n_dom())
                .find(|&c| part.cell_rect(c).contains_strictly(ps.position))
                .ok_or_else(|| {
                    Error::Unsupported(format!(
                        "point source at {:?} lies on an interface or outside the domain",
                        ps.position
                    ))
                })?;
            let mesh = self.meshes[cell].as_ref().ok_or_else(|| {
                invalid(format!("point source at {:?} lies in a null cell", ps.position))
            })?;
            let node = mesh.nearest_node(ps.position);
            if Side::ALL.iter().any(|&s| mesh.trace(s).contains(&node)) {
                return Err(Error::Unsupported(format!(
                    "point source at {:?} snaps to an interface node",
                    ps.position
                )));
            }
            out[cell].loads.push((node, ps.amplitude));
        }
        if let Some(wave) = sources.incident {
            for (cell, mesh) in self.meshes.iter().enumerate() {
                if let Some(mesh) = mesh {
                    out[cell].dirichlet = mesh
                        .obstacle_boundary_nodes()
                        .iter()
                        .map(|&n| -wave.eval(mesh.nodes()[n]))
                        .collect();
                }
            }
        }
        Ok(out)
    }

    /// Solves cell `cell` with the incoming blocks of `g` selected by
    /// `include(block)` and an optional physical right-hand side.
    pub fn solve_cell(
        &self,
        cell: usize,
        g: &[C64],
        include: impl Fn(usize) -> bool,
        physical: Option<&[C64]>,
    ) -> Result<Vec<C64>> {
        let sys = self.systems[cell]
            .as_ref()
            .ok_or_else(|| invalid(format!("cell {cell} is null")))?;
        let incoming = Side::ALL.map(|s| {
            self.layout
                .block_of(cell, s)
                .filter(|&b| !self.layout.block(b).dummy && include(b))
                .map(|b| &g[self.layout.block(b).range()])
        });
        sys.solve_with(&incoming, physical)
    }

    /// Outgoing data `2B(...)` of `cell` toward the neighbor across `side`.
    pub fn outgoing(&self, cell: usize, side: Side, sol: &[C64]) -> Result<Vec<C64>> {
        let sys = self.systems[cell]
            .as_ref()
            .ok_or_else(|| invalid(format!("cell {cell} is null")))?;
        if self.swap_only {
            return Ok(vec![C64::new(0.0, 0.0); sys.block_len(side)]);
        }
        sys.extract_outgoing(sol, side)
    }

    /// Whether all incoming blocks of `cell` selected by `include` vanish.
    fn incoming_is_zero(&self, cell: usize, g: &[C64], include: &impl Fn(usize) -> bool) -> bool {
        Side::ALL.iter().all(|&s| match self.layout.block_of(cell, s) {
            Some(b) if include(b) => g[self.layout.block(b).range()]
                .iter()
                .all(|v| *v == C64::new(0.0, 0.0)),
            _ => true,
        })
    }

    /// Solves `cell` with the selected incoming data and returns its outgoing
    /// data toward every active neighbor as `(block J -> I, 2B(u_J))`.
    /// Zero data short-circuits to zero output without a solve.
    pub(crate) fn cell_outgoing(
        &self,
        cell: usize,
        g: &[C64],
        include: impl Fn(usize) -> bool,
        physical: Option<&[C64]>,
        towards: impl Fn(usize) -> bool,
    ) -> Result<Vec<(usize, Vec<C64>)>> {
        let targets: Vec<(Side, usize)> = Side::ALL
            .iter()
            .filter_map(|&s| self.layout.block_of(cell, s).map(|b| (s, b)))
            .filter(|&(_, b)| !self.layout.block(b).dummy && towards(b))
            .collect();
        if targets.is_empty() {
            return Ok(Vec::new());
        }
        if physical.is_none() && self.incoming_is_zero(cell, g, &include) {
            return Ok(targets
                .iter()
                .map(|&(_, b)| (b, vec![C64::new(0.0, 0.0); self.layout.block(b).len()]))
                .collect());
        }
        let sol = self.solve_cell(cell, g, include, physical)?;
        targets
            .into_iter()
            .map(|(s, b)| Ok((b, self.outgoing(cell, s, &sol)?)))
            .collect()
    }

    fn active_cells(&self) -> Vec<usize> {
        (0..self.partition().n_dom())
            .filter(|&c| self.partition().is_active(c))
            .collect()
    }

    /// One application of the iteration operator `A`.
    pub fn apply_a(&self, g: &[C64]) -> Result<Vec<C64>> {
        self.layout.check(g)?;
        let cells = self.active_cells();
        let parts = par::map(&cells, |&c| self.cell_outgoing(c, g, |_| true, None, |_| true));
        let mut out = self.layout.zeros();
        for part in parts {
            for (b, data) in part? {
                // b = J -> I, so data updates I -> J.
                let blk = self.layout.block(b);
                let rev = self.layout.block(blk.reverse);
                for (k, v) in rev.range().zip(data) {
                    out[k] = v;
                }
                for (k, kb) in rev.range().zip(blk.range()) {
                    out[k] -= g[kb];
                }
            }
        }
        Ok(out)
    }

    /// `F g = g - A g`.
    pub fn apply_f(&self, g: &[C64]) -> Result<Vec<C64>> {
        let a = self.apply_a(g)?;
        Ok(g.iter().zip(a).map(|(x, y)| x - y).collect())
    }

    /// Right-hand side `b`: for each cell `J` with physical data, the
    /// outgoing data of the field `w_J` solved with zero transmission data.
    pub fn compute_rhs(&self, sources: &Sources) -> Result<Vec<C64>> {
        let local = self.resolve_sources(sources)?;
        let cells = self.active_cells();
        let parts = par::map(&cells, |&c| -> Result<Vec<(usize, Vec<C64>)>> {
            if local[c].is_empty() {
                return Ok(Vec::new());
            }
            let sys = self.systems[c].as_ref().expect("active cells have systems");
            let rhs = sys.source_rhs(&local[c])?;
            self.cell_outgoing(c, &[], |_| false, Some(&rhs), |_| true)
        });
        let mut b = self.layout.zeros();
        for part in parts {
            for (blk, data) in part? {
                let rev = self.layout.block(self.layout.block(blk).reverse);
                for (k, v) in rev.range().zip(data) {
                    b[k] = v;
                }
            }
        }
        Ok(b)
    }

    /// Local solutions (all dofs) of every active cell for transmission data
    /// `g` and the physical data.
    pub fn local_solutions(&self, g: &[C64], sources: &Sources) -> Result<Vec<Option<Vec<C64>>>> {
        self.layout.check(g)?;
        let local = self.resolve_sources(sources)?;
        let cells: Vec<usize> = (0..self.partition().n_dom()).collect();
        par::map(&cells, |&c| -> Result<Option<Vec<C64>>> {
            let Some(sys) = self.systems[c].as_ref() else {
                return Ok(None);
            };
            let rhs = sys.source_rhs(&local[c])?;
            self.solve_cell(c, g, |_| true, Some(&rhs)).map(Some)
        })
        .into_iter()
        .collect()
    }

    /// Nodal volume fields of every active cell (Dirichlet nodes carry their
    /// prescribed values).
    pub fn reconstruct(&self, g: &[C64], sources: &Sources) -> Result<Vec<Option<Vec<C64>>>> {
        let local = self.resolve_sources(sources)?;
        let sols = self.local_solutions(g, sources)?;
        Ok(sols
            .into_iter()
            .enumerate()
            .map(|(c, s)| {
                s.map(|s| {
                    let sys = self.systems[c].as_ref().expect("active");
                    sys.nodal_field(&s, &local[c].dirichlet)
                })
            })
            .collect())
    }

    /// Per undirected interface, `max |u_I - u_J|` over shared trace nodes
    /// relative to the largest nodal magnitude of the fields.
    pub fn interface_jumps(&self, fields: &[Option<Vec<C64>>]) -> Vec<((usize, usize), f64)> {
        let scale = fields
            .iter()
            .flatten()
            .flat_map(|f| f.iter().map(|v| v.norm()))
            .fold(0.0, f64::max);
        let mut out = Vec::new();
        for blk in self.layout.blocks() {
            if blk.dummy || blk.from > blk.to {
                continue;
            }
            let (Some(fi), Some(fj)) = (&fields[blk.from], &fields[blk.to]) else {
                continue;
            };
            let (mi, mj) = (self.mesh(blk.from).unwrap(), self.mesh(blk.to).unwrap());
            let ti = mi.trace(blk.side);
            let tj = mj.trace(blk.side.opposite());
            let jump = ti
                .iter()
                .zip(tj)
                .map(|(&a, &b)| (fi[a] - fj[b]).norm())
                .fold(0.0, f64::max);
            out.push(((blk.from, blk.to), if scale > 0.0 { jump / scale } else { jump }));
        }
        out
    }
}
