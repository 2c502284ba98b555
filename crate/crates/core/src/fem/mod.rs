//! Per-subdomain assembly of the coupled volume / auxiliary-field system,
//! transmission data injection and outgoing-data extraction.
//!
//! Unknowns are the volume field `u` at every non-Dirichlet node followed,
//! for each absorbing side (left, bottom, right, top) and each auxiliary
//! index, by the auxiliary field on that side's trace nodes.
//!
//! The auxiliary rows are scaled so that the assembled matrix is complex
//! symmetric: the `i`-th edge equation is multiplied by
//! `s_i = i (2/M) c_i / (k alpha (c_i + 1))`, which turns its `u` coupling
//! into the transpose of the `phi_i` coupling in the boundary term of `u`.
//! Corner scalars are eliminated through [`crate::habc::corner_psi`]; after
//! scaling, the resulting corner entries do not depend on `k`.

mod element;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::habc::{corner_denominator, eval_b_unchecked, PadeParams};
use crate::mesh::{ElementOrder, Rect, Side, SubdomainMesh, WavenumberField};
use crate::sparse::{factorize, CsrMatrix, Factorization};
use crate::C64;

pub(crate) use element::{segment_matrices, triangle_matrices};

/// Boundary treatment of one side of a subdomain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideKind {
    /// Absorbing condition on the outer boundary, homogeneous data.
    ExteriorHabc,
    /// Absorbing condition carrying transmission data.
    Transmission,
    /// Natural (homogeneous Neumann) boundary, no terms at all.
    Dummy,
}

/// Kind and absorbing-operator parameters of one side.
#[derive(Debug, Clone, PartialEq)]
pub struct SideSpec {
    pub kind: SideKind,
    pub params: PadeParams,
}

impl SideSpec {
    pub fn new(kind: SideKind, params: PadeParams) -> Self {
        SideSpec { kind, params }
    }

    fn n_aux(&self) -> usize {
        match self.kind {
            SideKind::Dummy => 0,
            _ => self.params.n_aux(),
        }
    }
}

/// Physical data of one subdomain: nodal loads and Dirichlet values on the
/// obstacle boundary (aligned with `mesh.obstacle_boundary_nodes()`; an
/// empty vector means homogeneous values).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SubdomainSource {
    pub loads: Vec<(usize, C64)>,
    pub dirichlet: Vec<C64>,
}

impl SubdomainSource {
    pub fn is_empty(&self) -> bool {
        self.loads.is_empty() && self.dirichlet.iter().all(|v| *v == C64::new(0.0, 0.0))
    }
}

const NONE: usize = usize::MAX;

/// Numbering of the unknowns of one subdomain system.
#[derive(Debug, Clone, PartialEq)]
pub struct DofLayout {
    n_volume: usize,
    node_dof: Vec<usize>,
    dirichlet_nodes: Vec<usize>,
    aux_start: [usize; 4],
    aux_count: [usize; 4],
    trace_len: [usize; 4],
    n_dofs: usize,
}

impl DofLayout {
    fn new(mesh: &SubdomainMesh, sides: &[SideSpec; 4]) -> Self {
        let mut is_dir = vec![false; mesh.n_nodes()];
        for &n in mesh.obstacle_boundary_nodes() {
            is_dir[n] = true;
        }
        let mut node_dof = vec![NONE; mesh.n_nodes()];
        let mut next = 0;
        for (n, d) in node_dof.iter_mut().enumerate() {
            if !is_dir[n] {
                *d = next;
                next += 1;
            }
        }
        let n_volume = next;
        let mut aux_start = [0; 4];
        let mut aux_count = [0; 4];
        let mut trace_len = [0; 4];
        for s in Side::ALL {
            let i = s.index();
            trace_len[i] = mesh.trace(s).len();
            aux_start[i] = next;
            aux_count[i] = sides[i].n_aux();
            next += aux_count[i] * trace_len[i];
        }
        DofLayout {
            n_volume,
            node_dof,
            dirichlet_nodes: mesh.obstacle_boundary_nodes().to_vec(),
            aux_start,
            aux_count,
            trace_len,
            n_dofs: next,
        }
    }

    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    pub fn n_volume(&self) -> usize {
        self.n_volume
    }

    /// Volume dof of mesh node `n`, `None` for Dirichlet nodes.
    pub fn node_dof(&self, n: usize) -> Option<usize> {
        let d = self.node_dof[n];
        (d != NONE).then_some(d)
    }

    pub fn dirichlet_nodes(&self) -> &[usize] {
        &self.dirichlet_nodes
    }

    /// Number of auxiliary fields carried by `side`.
    pub fn n_aux(&self, side: Side) -> usize {
        self.aux_count[side.index()]
    }

    pub fn trace_len(&self, side: Side) -> usize {
        self.trace_len[side.index()]
    }

    /// Contiguous dof range of auxiliary field `i` on `side`.
    pub fn aux_range(&self, side: Side, i: usize) -> core::ops::Range<usize> {
        let s = side.index();
        assert!(i < self.aux_count[s], "auxiliary index out of range");
        let start = self.aux_start[s] + i * self.trace_len[s];
        start..start + self.trace_len[s]
    }

    pub fn aux_dof(&self, side: Side, i: usize, t: usize) -> usize {
        self.aux_range(side, i).start + t
    }
}

#[derive(Debug, Clone)]
struct SideData {
    spec: SideSpec,
    /// Wavenumber at the side midpoint.
    k: f64,
    /// Wavenumber at the two endpoints, ordered as `Side::endpoint_sides`.
    /// Every cell meeting at a corner evaluates the same point, so corner
    /// operators agree across the partition.
    corner_k: [f64; 2],
    trace: Vec<usize>,
    /// Edge matrix entries `(t, t', mass, stiffness)` in trace positions.
    pairs: Vec<(usize, usize, f64, f64)>,
}

/// Assembled and factorized system of one subdomain.
#[derive(Debug, Clone)]
pub struct SubdomainSystem {
    matrix: CsrMatrix,
    factor: Factorization,
    layout: DofLayout,
    sides: [SideData; 4],
    /// Entries `(row dof, obstacle node position, a_ij)` of the eliminated
    /// Dirichlet columns.
    lifting: Vec<(usize, usize, C64)>,
    source: Vec<C64>,
}

/// Assembles and factorizes the system of one subdomain.
pub fn assemble_subdomain(
    mesh: &SubdomainMesh,
    k_field: &WavenumberField,
    sides: &[SideSpec; 4],
    source: &SubdomainSource,
) -> Result<SubdomainSystem> {
    let (matrix, layout, side_data, lifting) = assemble_parts(mesh, k_field, sides)?;
    let factor = factorize(&matrix).map_err(|e| match e {
        Error::SingularMatrix { column } => Error::Assembly(format!(
            "subdomain matrix is singular (no pivot in column {column})"
        )),
        other => other,
    })?;
    let mut system = SubdomainSystem {
        matrix,
        factor,
        layout,
        sides: side_data,
        lifting,
        source: Vec::new(),
    };
    system.source = system.source_rhs(source)?;
    Ok(system)
}

type Parts = (CsrMatrix, DofLayout, [SideData; 4], Vec<(usize, usize, C64)>);

fn assemble_parts(
    mesh: &SubdomainMesh,
    k_field: &WavenumberField,
    sides: &[SideSpec; 4],
) -> Result<Parts> {
    let order = mesh.order();
    let layout = DofLayout::new(mesh, sides);
    let n = layout.n_dofs;
    let mut trip: Vec<(usize, usize, C64)> = Vec::with_capacity(mesh.n_elements() * 36 + n * 8);
    let mut lifting = Vec::new();
    let mut obstacle_pos = vec![NONE; mesh.n_nodes()];
    for (idx, &node) in mesh.obstacle_boundary_nodes().iter().enumerate() {
        obstacle_pos[node] = idx;
    }

    // Volume terms; Dirichlet columns are lifted to the right-hand side.
    let npe = order.nodes_per_element();
    for e in 0..mesh.n_elements() {
        let t = mesh.element(e);
        let x = [mesh.nodes()[t[0]], mesh.nodes()[t[1]], mesh.nodes()[t[2]]];
        let centroid = [
            (x[0][0] + x[1][0] + x[2][0]) / 3.0,
            (x[0][1] + x[1][1] + x[2][1]) / 3.0,
        ];
        let k = checked_k(k_field.eval(centroid))?;
        let (kk, mm) = triangle_matrices(order, x);
        for a in 0..npe {
            let Some(ra) = layout.node_dof(t[a]) else { continue };
            for b in 0..npe {
                let v = C64::new(kk[a * npe + b] - k * k * mm[a * npe + b], 0.0);
                match layout.node_dof(t[b]) {
                    Some(cb) => trip.push((ra, cb, v)),
                    None => lifting.push((ra, obstacle_pos[t[b]], v)),
                }
            }
        }
    }

    let rect = mesh.rect();
    let mut side_data = Vec::with_capacity(4);
    for s in Side::ALL {
        let trace = mesh.trace(s).to_vec();
        side_data.push(SideData {
            spec: sides[s.index()].clone(),
            k: checked_k(k_field.eval(rect.side_midpoint(s)))?,
            corner_k: [
                checked_k(k_field.eval(side_endpoint(rect, s, 0)))?,
                checked_k(k_field.eval(side_endpoint(rect, s, 1)))?,
            ],
            pairs: edge_pairs(mesh, order, &trace),
            trace,
        });
    }
    let side_data: [SideData; 4] = side_data.try_into().expect("four sides");

    // Boundary term of u and the auxiliary edge equations.
    for s in Side::ALL {
        let sd = &side_data[s.index()];
        if sd.spec.kind == SideKind::Dummy {
            continue;
        }
        let p = &sd.spec.params;
        let ik_alpha = C64::new(0.0, -sd.k) * p.alpha();
        let uu = ik_alpha * p.u_factor();
        let n_aux = layout.n_aux(s);
        let reaction: Vec<C64> = (0..n_aux).map(|i| aux_reaction(p, i, sd.k)).collect();
        let scale: Vec<C64> = (0..n_aux).map(|i| aux_row_scale(p, i, sd.k)).collect();
        for &(a, b, m, st) in &sd.pairs {
            let ra = trace_dof(&layout, sd, a);
            let rb = trace_dof(&layout, sd, b);
            trip.push((ra, rb, uu * m));
            for i in 0..n_aux {
                let cross = ik_alpha * (p.weight() * p.coeffs()[i] * m);
                let (fa, fb) = (layout.aux_dof(s, i, a), layout.aux_dof(s, i, b));
                trip.push((ra, fb, cross));
                trip.push((fa, rb, cross));
                trip.push((fa, fb, scale[i] * (C64::new(st, 0.0) - reaction[i] * m)));
            }
        }
    }

    // Corner conditions: each auxiliary field of side `a` at a cell corner
    // is coupled to those of the perpendicular side `b` through psi.
    for a in Side::ALL {
        for b in a.endpoint_sides() {
            for (r, c, v) in corner_entries(&side_data, &layout, a, b)? {
                trip.push((r, c, v));
            }
        }
    }

    let matrix = CsrMatrix::from_triplets(n, &trip)?;
    Ok((matrix, layout, side_data, lifting))
}

/// Endpoint `e` of side `s`, in the order of `Side::endpoint_sides`.
fn side_endpoint(rect: Rect, s: Side, e: usize) -> [f64; 2] {
    let (lo, hi) = ([rect.x0, rect.y0], [rect.x1, rect.y1]);
    match s {
        Side::Left => [lo[0], if e == 0 { lo[1] } else { hi[1] }],
        Side::Right => [hi[0], if e == 0 { lo[1] } else { hi[1] }],
        Side::Bottom => [if e == 0 { lo[0] } else { hi[0] }, lo[1]],
        Side::Top => [if e == 0 { lo[0] } else { hi[0] }, hi[1]],
    }
}

/// Wavenumber of the corner shared by sides `a` and `b`.
fn corner_k(side_data: &[SideData; 4], a: Side, b: Side) -> f64 {
    let e = a.endpoint_towards(b).expect("perpendicular sides");
    side_data[a.index()].corner_k[e]
}

fn checked_k(k: f64) -> Result<f64> {
    if k > 0.0 && k.is_finite() {
        Ok(k)
    } else {
        Err(invalid(format!("wavenumber must be positive, got {k}")))
    }
}

fn trace_dof(layout: &DofLayout, sd: &SideData, t: usize) -> usize {
    layout
        .node_dof(sd.trace[t])
        .expect("trace nodes are never Dirichlet")
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    crate::math::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]))
}

/// Edge mass and stiffness entries along a trace.
fn edge_pairs(
    mesh: &SubdomainMesh,
    order: ElementOrder,
    trace: &[usize],
) -> Vec<(usize, usize, f64, f64)> {
    let p = order.degree();
    let mut out = Vec::new();
    let mut start = 0;
    while start + p < trace.len() {
        let len = dist(mesh.nodes()[trace[start]], mesh.nodes()[trace[start + p]]);
        let (m, k) = segment_matrices(order, len);
        for a in 0..=p {
            for b in 0..=p {
                out.push((start + a, start + b, m[a * 3 + b], k[a * 3 + b]));
            }
        }
        start += p;
    }
    out
}

/// `k^2 (alpha^2 c_i + 1)`.
fn aux_reaction(p: &PadeParams, i: usize, k: f64) -> C64 {
    let a2 = p.alpha() * p.alpha();
    (a2 * p.coeffs()[i] + 1.0) * (k * k)
}

/// Symmetrizing row scale `i (2/M) c_i / (k alpha (c_i + 1))`.
fn aux_row_scale(p: &PadeParams, i: usize, k: f64) -> C64 {
    let c = p.coeffs()[i];
    C64::new(0.0, p.weight() * c) / (p.alpha() * (k * (c + 1.0)))
}

/// Trace position of the corner shared by `a` and the perpendicular `b`.
fn corner_position(layout: &DofLayout, a: Side, b: Side) -> usize {
    match a.endpoint_towards(b) {
        Some(0) => 0,
        _ => layout.trace_len(a) - 1,
    }
}

/// Entries of the rows of side `a`'s auxiliary fields at its corner with
/// side `b`. Empty unless both sides carry auxiliary fields. The
/// off-diagonal part is symmetric under swapping `a` and `b`.
fn corner_entries(
    side_data: &[SideData; 4],
    layout: &DofLayout,
    a: Side,
    b: Side,
) -> Result<Vec<(usize, usize, C64)>> {
    let (na, nb) = (layout.n_aux(a), layout.n_aux(b));
    if na == 0 || nb == 0 {
        return Ok(Vec::new());
    }
    let (pa, pb) = (&side_data[a.index()].spec.params, &side_data[b.index()].spec.params);
    if pa != pb {
        return Err(invalid(format!(
            "sides {a:?} and {b:?} meet at a corner with different absorbing parameters"
        )));
    }
    let p = pa;
    let w = p.weight();
    let a2 = p.alpha() * p.alpha();
    let c = p.coeffs();
    let ta = corner_position(layout, a, b);
    let tb = corner_position(layout, b, a);
    // The corner operator uses the wavenumber at the corner point, which
    // every neighbor sharing it agrees on; rows are scaled with k_a, so the
    // block is symmetric when both sides see the same wavenumber.
    let ratio = corner_k(side_data, a, b) / side_data[a.index()].k;
    let mut out = Vec::with_capacity(na * (na + 1));
    for j in 0..na {
        let row = layout.aux_dof(a, j, ta);
        let lead = w * c[j] / (c[j] + 1.0) * ratio;
        let mut diag = C64::new(1.0, 0.0);
        for i in 0..na {
            let d = corner_denominator(p, i, j);
            diag += (C64::new(1.0, 0.0) - a2 * (c[i] + 1.0) / d) * (w * c[i]);
            out.push((row, layout.aux_dof(b, i, tb), -a2 * (w * w * c[i] * c[j] * ratio) / d));
        }
        out.push((row, row, diag * lead));
    }
    Ok(out)
}

impl SubdomainSystem {
    pub fn layout(&self) -> &DofLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factor
    }

    pub fn n_dofs(&self) -> usize {
        self.layout.n_dofs
    }

    pub fn side_kind(&self, side: Side) -> SideKind {
        self.sides[side.index()].spec.kind
    }

    pub fn side_params(&self, side: Side) -> &PadeParams {
        &self.sides[side.index()].spec.params
    }

    /// Wavenumber used by the boundary operator of `side`.
    pub fn side_k(&self, side: Side) -> f64 {
        self.sides[side.index()].k
    }

    /// Mesh nodes along `side`.
    pub fn trace_nodes(&self, side: Side) -> &[usize] {
        &self.sides[side.index()].trace
    }

    /// Length of the transmission block exchanged across `side`: trace
    /// values followed by `N` corner scalars per endpoint.
    pub fn block_len(&self, side: Side) -> usize {
        let sd = &self.sides[side.index()];
        match sd.spec.kind {
            SideKind::Transmission => sd.trace.len() + 2 * sd.spec.params.n_aux(),
            _ => 0,
        }
    }

    /// Right-hand side produced by the physical data given at assembly.
    pub fn physical_rhs(&self) -> &[C64] {
        &self.source
    }

    /// Right-hand side of arbitrary physical data: nodal loads plus the
    /// lifting of the Dirichlet values.
    pub fn source_rhs(&self, source: &SubdomainSource) -> Result<Vec<C64>> {
        let n_obst = self.layout.dirichlet_nodes.len();
        if !source.dirichlet.is_empty() && source.dirichlet.len() != n_obst {
            return Err(invalid(format!(
                "{} Dirichlet values for {n_obst} obstacle nodes",
                source.dirichlet.len()
            )));
        }
        let mut rhs = vec![C64::new(0.0, 0.0); self.n_dofs()];
        if !source.dirichlet.is_empty() {
            for &(row, pos, a) in &self.lifting {
                rhs[row] -= a * source.dirichlet[pos];
            }
        }
        for &(node, amp) in &source.loads {
            if node >= self.layout.node_dof.len() {
                return Err(invalid(format!("point load on missing node {node}")));
            }
            let d = self
                .layout
                .node_dof(node)
                .ok_or_else(|| invalid(format!("point load on Dirichlet node {node}")))?;
            rhs[d] += amp;
        }
        Ok(rhs)
    }

    /// Whether the physical data of this subdomain is identically zero.
    pub fn has_physical_source(&self) -> bool {
        self.source.iter().any(|v| *v != C64::new(0.0, 0.0))
    }

    /// Adds the contribution of incoming data `g` on transmission side
    /// `side` to `rhs`.
    pub fn inject(&self, side: Side, g: &[C64], rhs: &mut [C64]) -> Result<()> {
        let sd = &self.sides[side.index()];
        if sd.spec.kind != SideKind::Transmission {
            return Err(invalid(format!("side {side:?} is not a transmission side")));
        }
        if g.len() != self.block_len(side) || rhs.len() != self.n_dofs() {
            return Err(invalid(format!(
                "incoming data on {side:?} has length {}, expected {}",
                g.len(),
                self.block_len(side)
            )));
        }
        let nt = sd.trace.len();
        for &(a, b, m, _) in &sd.pairs {
            rhs[trace_dof(&self.layout, sd, a)] += g[b] * m;
        }
        let n = sd.spec.params.n_aux();
        for (e, perp) in side.endpoint_sides().into_iter().enumerate() {
            let pd = &self.sides[perp.index()];
            let np = self.layout.n_aux(perp);
            if np == 0 {
                continue;
            }
            let t = corner_position(&self.layout, perp, side);
            let data = &g[nt + e * n..nt + (e + 1) * n];
            for (j, &gj) in data.iter().enumerate().take(np) {
                rhs[self.layout.aux_dof(perp, j, t)] += aux_row_scale(&pd.spec.params, j, pd.k) * gj;
            }
        }
        Ok(())
    }

    /// Solves with the given incoming data per side and, if requested, the
    /// physical data.
    pub fn solve(&self, incoming: &[Option<&[C64]>; 4], use_physical_source: bool) -> Result<Vec<C64>> {
        let base = use_physical_source.then_some(self.source.as_slice());
        self.solve_with(incoming, base)
    }

    /// Like [`solve`](Self::solve) with an explicit physical right-hand side
    /// (see [`source_rhs`](Self::source_rhs)).
    pub fn solve_with(&self, incoming: &[Option<&[C64]>; 4], physical: Option<&[C64]>) -> Result<Vec<C64>> {
        let mut rhs = match physical {
            Some(r) if r.len() == self.n_dofs() => r.to_vec(),
            Some(r) => {
                return Err(invalid(format!(
                    "physical right-hand side has length {}, expected {}",
                    r.len(),
                    self.n_dofs()
                )))
            }
            None => vec![C64::new(0.0, 0.0); self.n_dofs()],
        };
        for s in Side::ALL {
            if let Some(g) = incoming[s.index()] {
                self.inject(s, g, &mut rhs)?;
            }
        }
        self.factor.solve(&rhs)
    }

    /// Outgoing data `2 B(u, phi)` on the trace of transmission side
    /// `side`, followed by `2 B(phi_j, psi)` for the auxiliary fields of the
    /// perpendicular sides at the first and second endpoints.
    pub fn extract_outgoing(&self, sol: &[C64], side: Side) -> Result<Vec<C64>> {
        let sd = &self.sides[side.index()];
        if sd.spec.kind != SideKind::Transmission {
            return Err(invalid(format!("side {side:?} is not a transmission side")));
        }
        if sol.len() != self.n_dofs() {
            return Err(invalid(format!(
                "local solution has length {}, expected {}",
                sol.len(),
                self.n_dofs()
            )));
        }
        let p = &sd.spec.params;
        let n = p.n_aux();
        let na = self.layout.n_aux(side);
        let mut out = Vec::with_capacity(self.block_len(side));
        let mut phis = vec![C64::new(0.0, 0.0); n];
        for t in 0..sd.trace.len() {
            let u = sol[trace_dof(&self.layout, sd, t)];
            for (i, phi) in phis.iter_mut().enumerate().take(na) {
                *phi = sol[self.layout.aux_dof(side, i, t)];
            }
            out.push(eval_b_unchecked(p, sd.k, u, &phis) * 2.0);
        }
        for perp in side.endpoint_sides() {
            out.extend(self.corner_outgoing(sol, side, perp));
        }
        Ok(out)
    }

    /// `2 B(phi^a_j, {psi_ij})` at the corner of `side` with `a`, for
    /// `j = 0..N`; zero when either side has no auxiliary fields.
    fn corner_outgoing(&self, sol: &[C64], side: Side, a: Side) -> Vec<C64> {
        let n = self.sides[side.index()].spec.params.n_aux();
        let zero = C64::new(0.0, 0.0);
        let (ns, na) = (self.layout.n_aux(side), self.layout.n_aux(a));
        if ns == 0 || na == 0 {
            return vec![zero; n];
        }
        let ad = &self.sides[a.index()];
        let p = &ad.spec.params;
        let a2 = p.alpha() * p.alpha();
        let c = p.coeffs();
        let ts = corner_position(&self.layout, side, a);
        let ta = corner_position(&self.layout, a, side);
        let phi_s: Vec<C64> = (0..ns).map(|i| sol[self.layout.aux_dof(side, i, ts)]).collect();
        let mut psi = vec![zero; na];
        (0..na)
            .map(|j| {
                let phi_a = sol[self.layout.aux_dof(a, j, ta)];
                for (i, v) in psi.iter_mut().enumerate() {
                    let d = corner_denominator(p, i, j);
                    *v = -(a2 * (c[j] + 1.0) * phi_s[i] + a2 * (c[i] + 1.0) * phi_a) / d;
                }
                eval_b_unchecked(p, corner_k(&self.sides, a, side), phi_a, &psi) * 2.0
            })
            .collect()
    }

    /// Volume field per mesh node (Dirichlet nodes receive `dirichlet`,
    /// aligned with the obstacle boundary node list, or zero).
    pub fn nodal_field(&self, sol: &[C64], dirichlet: &[C64]) -> Vec<C64> {
        let n_nodes = self.layout.node_dof.len();
        let mut u = vec![C64::new(0.0, 0.0); n_nodes];
        for (node, v) in u.iter_mut().enumerate() {
            if let Some(d) = self.layout.node_dof(node) {
                *v = sol[d];
            }
        }
        for (idx, &node) in self.layout.dirichlet_nodes.iter().enumerate() {
            u[node] = dirichlet.get(idx).copied().unwrap_or(C64::new(0.0, 0.0));
        }
        u
    }
}

/// Free-function form of [`SubdomainSystem::solve`].
pub fn solve_subdomain(
    system: &SubdomainSystem,
    incoming: &[Option<&[C64]>; 4],
    use_physical_source: bool,
) -> Result<Vec<C64>> {
    system.solve(incoming, use_physical_source)
}

/// Free-function form of [`SubdomainSystem::extract_outgoing`].
pub fn extract_outgoing(system: &SubdomainSystem, sol: &[C64], side: Side) -> Result<Vec<C64>> {
    system.extract_outgoing(sol, side)
}
