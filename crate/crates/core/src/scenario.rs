//! Benchmark scenarios and the end-to-end solve driver.
//!
//! A [`Scenario`] fully specifies one experiment: the partition, the
//! physical data, the absorbing operators, the discretization and the
//! solver. [`run_scenario`] builds the subdomain problems, solves the
//! interface system with (F)GMRES and reconstructs the volume fields.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::str::FromStr;

use crate::ddm::{DdmProblem, DdmSetup, PlaneWave, PointSource, Sources};
use crate::error::{invalid, Error, Result};
use crate::fem::{assemble_subdomain, SideKind, SideSpec, SubdomainSource};
use crate::habc::{pade_coefficients, PadeParams};
use crate::krylov::{fgmres, gmres, KrylovRun, KrylovSettings, Preconditioner};
use crate::mesh::{
    build_grid_mesh, build_partition, ElementOrder, Rect, Side, SubdomainMesh, WavenumberField,
};
use crate::sweep::{Direction, PrecondConfig, PrecondKind, SweepPreconditioner};
use crate::C64;

/// Interface preconditioner selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrecondChoice {
    None,
    Sweep(PrecondConfig),
}

impl PrecondChoice {
    /// Names accepted by [`FromStr`].
    pub const NAMES: [&'static str; 9] = [
        "none", "sgs-h", "sgs-v", "sgs-d1", "sgs-2d", "ds-h", "ds-v", "ds-d1", "ds-2d",
    ];

    /// Canonical name, the inverse of parsing.
    pub fn name(&self) -> String {
        let PrecondChoice::Sweep(c) = self else {
            return "none".to_string();
        };
        let kind = match c.kind {
            PrecondKind::Sgs => "sgs",
            PrecondKind::Ds => "ds",
        };
        let dirs = match c.schedule.as_slice() {
            [Direction::HForward] => "h",
            [Direction::VForward] => "v",
            [Direction::D1] => "d1",
            [Direction::D1, Direction::D2] => "2d",
            _ => "custom",
        };
        format!("{kind}-{dirs}")
    }

    /// Alternating schedules need the flexible Krylov method.
    pub fn is_flexible(&self) -> bool {
        matches!(self, PrecondChoice::Sweep(c) if c.schedule.len() > 1)
    }
}

impl FromStr for PrecondChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if lower == "none" {
            return Ok(PrecondChoice::None);
        }
        let bad = || {
            invalid(format!(
                "unknown preconditioner '{s}', expected one of {}",
                PrecondChoice::NAMES.join(", ")
            ))
        };
        let (kind, dirs) = lower.split_once('-').ok_or_else(bad)?;
        let kind = match kind {
            "sgs" => PrecondKind::Sgs,
            "ds" => PrecondKind::Ds,
            _ => return Err(bad()),
        };
        let schedule = match dirs {
            "h" => vec![Direction::HForward],
            "v" => vec![Direction::VForward],
            "d" | "d1" => vec![Direction::D1],
            "2d" => vec![Direction::D1, Direction::D2],
            _ => return Err(bad()),
        };
        Ok(PrecondChoice::Sweep(PrecondConfig::new(kind, schedule)?))
    }
}

/// One fully specified experiment.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    /// Side length of the square cells; the domain starts at the origin.
    pub cell_size: f64,
    /// Row-major activity mask (row 0 at the bottom); `None` keeps all.
    pub mask: Option<Vec<bool>>,
    pub wavenumber: WavenumberField,
    pub points: Vec<PointSource>,
    /// Incident plane wave scattered by the obstacles (Dirichlet data
    /// `-u_inc` on their boundaries).
    pub incident: Option<PlaneWave>,
    /// Square sound-soft obstacles as `(row, col, half width)`, centered in
    /// the cell.
    pub obstacles: Vec<(usize, usize, f64)>,
    pub exterior: PadeParams,
    pub transmission: PadeParams,
    pub order: ElementOrder,
    pub vertices_per_wavelength: f64,
    pub precond: PrecondChoice,
    pub krylov: KrylovSettings,
    /// Keep zero blocks toward null cells in the interface vector.
    pub keep_dummy_blocks: bool,
}

impl Scenario {
    pub fn bounds(&self) -> Result<Rect> {
        Rect::new(
            0.0,
            0.0,
            self.cols as f64 * self.cell_size,
            self.rows as f64 * self.cell_size,
        )
    }

    /// Center of cell `(row, col)`.
    pub fn cell_center(&self, row: usize, col: usize) -> [f64; 2] {
        [
            (col as f64 + 0.5) * self.cell_size,
            (row as f64 + 0.5) * self.cell_size,
        ]
    }

    /// Mesh size: `degree * lambda_min / vertices_per_wavelength`.
    pub fn mesh_size(&self) -> Result<f64> {
        let k_max = self.wavenumber.max_over(self.bounds()?);
        Ok(self.order.degree() as f64 * (2.0 * PI / k_max) / self.vertices_per_wavelength)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(invalid("scenario needs at least one cell"));
        }
        if !(self.cell_size.is_finite() && self.cell_size > 0.0) {
            return Err(invalid(format!("cell size must be positive, got {}", self.cell_size)));
        }
        self.wavenumber.validate()?;
        if !(self.vertices_per_wavelength >= 5.0) {
            return Err(invalid(format!(
                "mesh density must be at least 5 vertices per wavelength, got {}",
                self.vertices_per_wavelength
            )));
        }
        if !(self.krylov.tol > 0.0) || self.krylov.max_iterations == 0 {
            return Err(invalid("Krylov tolerance and iteration cap must be positive"));
        }
        if self.krylov.restart == Some(0) {
            return Err(invalid("restart length must be positive"));
        }
        for &(r, c, hw) in &self.obstacles {
            if r >= self.rows || c >= self.cols {
                return Err(invalid(format!("obstacle cell ({r}, {c}) is outside the grid")));
            }
            if !(hw > 0.0 && 2.0 * hw < self.cell_size) {
                return Err(invalid(format!(
                    "obstacle half width {hw} does not fit in a cell of size {}",
                    self.cell_size
                )));
            }
        }
        if !self.obstacles.is_empty() && self.incident.is_none() {
            return Err(invalid("obstacles need an incident wave"));
        }
        Ok(())
    }

    pub fn sources(&self) -> Sources {
        Sources {
            points: self.points.clone(),
            incident: self.incident,
        }
    }

    fn obstacle_rects(&self) -> Result<Vec<(usize, Rect)>> {
        self.obstacles
            .iter()
            .map(|&(r, c, hw)| {
                let [x, y] = self.cell_center(r, c);
                Ok((r * self.cols + c, Rect::new(x - hw, y - hw, x + hw, y + hw)?))
            })
            .collect()
    }

    /// Decomposition setup derived from the scenario.
    pub fn setup(&self) -> Result<DdmSetup> {
        self.validate()?;
        let bounds = self.bounds()?;
        Ok(DdmSetup {
            partition: build_partition(bounds, self.rows, self.cols, self.mask.as_deref())?,
            wavenumber: self.wavenumber.clone(),
            exterior: self.exterior.clone(),
            transmission: self.transmission.clone(),
            order: self.order,
            h: self.mesh_size()?,
            obstacles: self.obstacle_rects()?,
            keep_dummy_blocks: self.keep_dummy_blocks,
        })
    }
}

/// Outcome of [`run_scenario`].
pub struct Report {
    pub name: String,
    pub precond: String,
    pub problem: DdmProblem,
    /// Interface unknowns `g`.
    pub interface: Vec<C64>,
    pub run: KrylovRun,
    /// Nodal fields per cell (`None` for null cells).
    pub fields: Vec<Option<Vec<C64>>>,
    /// Largest interface jump relative to the field magnitude.
    pub interface_jump: f64,
}

impl Report {
    pub fn converged(&self) -> bool {
        self.run.converged()
    }

    pub fn iterations(&self) -> usize {
        self.run.iterations()
    }

    pub fn drop_iteration(&self) -> Option<usize> {
        drop_iteration(&self.run.history)
    }
}

/// Solves the interface system `F g = b` for a prepared problem.
pub fn solve_interface(
    pb: &DdmProblem,
    b: &[C64],
    precond: &PrecondChoice,
    settings: KrylovSettings,
) -> Result<(Vec<C64>, KrylovRun)> {
    let op = (pb.dim(), |x: &[C64]| pb.apply_f(x));
    match precond {
        PrecondChoice::None => gmres(&op, None, b, settings),
        PrecondChoice::Sweep(cfg) => {
            let m = SweepPreconditioner::new(pb, cfg.clone());
            if precond.is_flexible() {
                fgmres(&op, &m, b, settings)
            } else {
                gmres(&op, Some(&m as &dyn Preconditioner), b, settings)
            }
        }
    }
}

/// Builds, solves and post-processes a scenario.
pub fn run_scenario(s: &Scenario) -> Result<Report> {
    let pb = DdmProblem::new(s.setup()?)?;
    let sources = s.sources();
    let b = pb.compute_rhs(&sources)?;
    let (g, run) = solve_interface(&pb, &b, &s.precond, s.krylov)?;
    let fields = pb.reconstruct(&g, &sources)?;
    let interface_jump = pb
        .interface_jumps(&fields)
        .iter()
        .map(|&(_, j)| j)
        .fold(0.0, f64::max);
    Ok(Report {
        name: s.name.clone(),
        precond: s.precond.name(),
        problem: pb,
        interface: g,
        run,
        fields,
        interface_jump,
    })
}

/// Solution of the unpartitioned problem on the union of the cell meshes.
pub struct MonoReference {
    pub mesh: SubdomainMesh,
    pub field: Vec<C64>,
}

/// Assembles and solves the whole rectangle as one subdomain, with the same
/// mesh, sources and exterior conditions as the decomposition.
pub fn mono_domain_reference(s: &Scenario) -> Result<MonoReference> {
    if s.mask.as_ref().is_some_and(|m| m.iter().any(|a| !a)) {
        return Err(Error::Unsupported(
            "mono-domain reference needs every cell active".to_string(),
        ));
    }
    let setup = s.setup()?;
    let per_cell = |len: f64| crate::mesh::intervals_for(len, setup.h);
    let (cx, cy) = (per_cell(s.cell_size), per_cell(s.cell_size));
    let holes: Vec<Rect> = setup.obstacles.iter().map(|&(_, r)| r).collect();
    let mesh = build_grid_mesh(
        setup.partition.bounds(),
        cx * s.cols,
        cy * s.rows,
        &holes,
        s.order,
    )?;
    let sides = Side::ALL.map(|_| SideSpec::new(SideKind::ExteriorHabc, s.exterior.clone()));
    let mut src = SubdomainSource::default();
    for p in &s.points {
        src.loads.push((mesh.nearest_node(p.position), p.amplitude));
    }
    if let Some(w) = s.incident {
        src.dirichlet = mesh
            .obstacle_boundary_nodes()
            .iter()
            .map(|&n| -w.eval(mesh.nodes()[n]))
            .collect();
    }
    let sys = assemble_subdomain(&mesh, &s.wavenumber, &sides, &src)?;
    let sol = sys.solve(&[None; 4], true)?;
    let field = sys.nodal_field(&sol, &src.dirichlet);
    Ok(MonoReference { mesh, field })
}

/// Relative nodal L2 distance between the decomposed fields and the
/// reference over all nodes of the union mesh.
pub fn mono_domain_error(report: &Report, reference: &MonoReference) -> Result<f64> {
    let pb = &report.problem;
    let p = pb.setup().order.degree();
    let (mut num, mut den) = (0.0, 0.0);
    for (c, field) in report.fields.iter().enumerate() {
        let (Some(field), Some(mesh)) = (field, pb.mesh(c)) else {
            continue;
        };
        let (r, col) = pb.partition().row_col(c);
        let [cx, cy] = mesh.grid_cells();
        for (n, v) in field.iter().enumerate() {
            let [i, j] = mesh.node_grid_index(n);
            let g = reference
                .mesh
                .node_at(col * cx * p + i, r * cy * p + j)
                .ok_or_else(|| invalid("union mesh does not match the cell meshes"))?;
            num += (v - reference.field[g]).norm_sqr();
            den += reference.field[g].norm_sqr();
        }
    }
    if den == 0.0 {
        return Err(invalid("reference field vanishes"));
    }
    Ok(crate::math::sqrt(num / den))
}

/// Iteration of the sudden residual drop: the step with the largest
/// one-iteration decrease of `log10` of the relative residual. `None` for
/// histories without any step.
pub fn drop_iteration(history: &[(usize, f64)]) -> Option<usize> {
    let floor = f64::MIN_POSITIVE;
    history
        .windows(2)
        .map(|w| (w[1].0, libm::log10(w[0].1.max(floor)) - libm::log10(w[1].1.max(floor))))
        .fold(None, |best: Option<(usize, f64)>, (it, d)| match best {
            Some((_, bd)) if bd >= d => best,
            _ => Some((it, d)),
        })
        .map(|(it, _)| it)
}

/// Names of the catalog entries, in catalog order.
pub const SCENARIO_NAMES: [&str; 8] = [
    "corner5x5",
    "center5x5",
    "twosrc4x4",
    "twosrc8x8",
    "layered3x6",
    "masked-L",
    "obstacle5x5",
    "mono1x1",
];

/// Defaults shared by the catalog: `N = 8`, `phi = pi/3`, `k = 2 pi`, P1 at
/// 20 vertices per wavelength, square cells of 2.5 wavelengths, SGS with
/// diagonal sweeps and a relative tolerance of `1e-6`.
pub fn base_scenario(name: &str, rows: usize, cols: usize) -> Scenario {
    let pade = pade_coefficients(8, PI / 3.0).expect("valid default parameters");
    Scenario {
        name: name.to_string(),
        rows,
        cols,
        cell_size: 2.5,
        mask: None,
        wavenumber: WavenumberField::Constant(2.0 * PI),
        points: Vec::new(),
        incident: None,
        obstacles: Vec::new(),
        exterior: pade.clone(),
        transmission: pade,
        order: ElementOrder::P1,
        vertices_per_wavelength: 20.0,
        precond: PrecondChoice::Sweep(
            PrecondConfig::new(PrecondKind::Sgs, vec![Direction::D1]).expect("nonempty"),
        ),
        krylov: KrylovSettings::default(),
        keep_dummy_blocks: false,
    }
}

fn unit_source(s: &Scenario, row: usize, col: usize) -> PointSource {
    PointSource {
        position: s.cell_center(row, col),
        amplitude: C64::new(1.0, 0.0),
    }
}

/// Looks a scenario up by name.
pub fn scenario(name: &str) -> Result<Scenario> {
    let s = match name {
        "corner5x5" => {
            let mut s = base_scenario(name, 5, 5);
            s.points = vec![unit_source(&s, 0, 0)];
            s
        }
        "center5x5" => {
            let mut s = base_scenario(name, 5, 5);
            s.points = vec![unit_source(&s, 2, 2)];
            s
        }
        "twosrc4x4" | "twosrc8x8" => {
            let n = if name == "twosrc4x4" { 4 } else { 8 };
            let mut s = base_scenario(name, n, n);
            s.points = vec![unit_source(&s, 0, 0), unit_source(&s, 0, n - 1)];
            s
        }
        "layered3x6" => {
            // Horizontal layers with k = 2 pi, 3 pi, 4 pi from the bottom up.
            let mut s = base_scenario(name, 3, 6);
            s.cell_size = 1.25;
            let bounds = s.bounds()?;
            s.wavenumber = WavenumberField::raster(bounds, 1, 3, vec![2.0 * PI, 3.0 * PI, 4.0 * PI])?;
            s.points = vec![unit_source(&s, 1, 1)];
            s
        }
        "masked-L" => {
            let mut s = base_scenario(name, 3, 3);
            let mut mask = vec![true; 9];
            mask[2 * 3 + 2] = false;
            s.mask = Some(mask);
            s.points = vec![unit_source(&s, 0, 0)];
            s.precond = "sgs-2d".parse()?;
            s
        }
        "obstacle5x5" => {
            let mut s = base_scenario(name, 5, 5);
            s.obstacles = vec![(0, 0, 0.5)];
            s.incident = Some(PlaneWave {
                angle: 0.0,
                k: 2.0 * PI,
            });
            s
        }
        "mono1x1" => {
            let mut s = base_scenario(name, 1, 1);
            s.points = vec![unit_source(&s, 0, 0)];
            s
        }
        _ => {
            return Err(Error::UnknownScenario {
                name: name.to_string(),
                valid: SCENARIO_NAMES.join(", "),
            })
        }
    };
    Ok(s)
}

/// Every catalog scenario.
pub fn scenario_catalog() -> Vec<Scenario> {
    SCENARIO_NAMES
        .iter()
        .map(|n| scenario(n).expect("catalog entries are valid"))
        .collect()
}
