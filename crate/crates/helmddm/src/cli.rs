//! Command-line interface.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use helmddm_core::ddm::DdmProblem;
use helmddm_core::krylov::KrylovSettings;
use helmddm_core::scenario::{
    mono_domain_error, mono_domain_reference, run_scenario, scenario, scenario_catalog,
    solve_interface, PrecondChoice, Scenario,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{parse_order, Config};
use crate::{export, probe};

/// Exit status for a solve that stopped before reaching the tolerance.
pub const EXIT_NOT_CONVERGED: u8 = 2;
/// Exit status for usage and input errors.
pub const EXIT_USAGE: u8 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "helmddm",
    version,
    about = "Checkerboard domain decomposition solver for 2D Helmholtz problems"
)]
pub struct Cli {
    /// Cap on worker threads for subdomain solves (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one scenario and report convergence.
    Solve(SolveArgs),
    /// List the built-in scenarios.
    ListScenarios,
    /// Probe the interface operator densely (small problems only).
    ProbeOperator(ProbeArgs),
}

#[derive(Debug, Args)]
#[group(id = "input", required = true, multiple = false)]
pub struct Input {
    /// TOML experiment file.
    #[arg(long, value_name = "FILE", group = "input")]
    pub config: Option<PathBuf>,
    /// Built-in scenario name.
    #[arg(long, value_name = "NAME", group = "input")]
    pub scenario: Option<String>,
}

/// Command-line overrides applied on top of the scenario.
#[derive(Debug, Args)]
pub struct Overrides {
    /// none, sgs-h, sgs-v, sgs-d1, sgs-2d, ds-h, ds-v, ds-d1 or ds-2d.
    #[arg(long, value_name = "NAME")]
    pub precond: Option<String>,
    /// Relative residual target.
    #[arg(long)]
    pub tol: Option<f64>,
    /// GMRES restart length (no restart by default).
    #[arg(long, value_name = "N")]
    pub restart: Option<usize>,
    #[arg(long, value_name = "N")]
    pub max_iter: Option<usize>,
    /// Mesh density in vertices per wavelength.
    #[arg(long, value_name = "V")]
    pub vpw: Option<f64>,
    /// Element order, P1 or P2.
    #[arg(long)]
    pub order: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Write one VTK file per subdomain into DIR.
    #[arg(long, value_name = "DIR")]
    pub export_vtk: Option<PathBuf>,
    /// Write the residual history as CSV.
    #[arg(long, value_name = "FILE")]
    pub export_history: Option<PathBuf>,
    /// Dump the subdomain matrices in Matrix Market format into DIR.
    #[arg(long, value_name = "DIR")]
    pub export_matrices: Option<PathBuf>,
    /// Also solve the undecomposed problem and report the relative error.
    #[arg(long)]
    pub mono_error: bool,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Only check the interface dimension against --max-dim.
    #[arg(long)]
    pub size_check: bool,
    /// Largest interface dimension allowed for dense probing.
    #[arg(long, default_value_t = 400)]
    pub max_dim: usize,
    /// Write the probed operator in Matrix Market format.
    #[arg(long, value_name = "FILE")]
    pub export_matrix: Option<PathBuf>,
    /// Seed of the random test vector.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Input {
    fn load(&self) -> Result<Scenario> {
        match (&self.config, &self.scenario) {
            (Some(path), None) => Config::from_file(path)?.to_scenario(),
            (None, Some(name)) => Ok(scenario(name)?),
            _ => bail!("exactly one of --config and --scenario is required"),
        }
    }
}

impl Overrides {
    fn apply(&self, s: &mut Scenario) -> Result<()> {
        if let Some(p) = &self.precond {
            s.precond = p.parse::<PrecondChoice>()?;
        }
        s.krylov.tol = self.tol.unwrap_or(s.krylov.tol);
        s.krylov.restart = self.restart.or(s.krylov.restart);
        s.krylov.max_iterations = self.max_iter.unwrap_or(s.krylov.max_iterations);
        s.vertices_per_wavelength = self.vpw.unwrap_or(s.vertices_per_wavelength);
        if let Some(o) = &self.order {
            s.order = parse_order(o)?;
        }
        s.validate()?;
        Ok(())
    }
}

fn load_scenario(input: &Input, overrides: &Overrides) -> Result<Scenario> {
    let mut s = input.load()?;
    overrides.apply(&mut s)?;
    Ok(s)
}

/// Parses the arguments, runs the command and maps the outcome to an exit
/// code: 0 on success, 1 on usage or input errors, 2 on non-convergence.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        // Fails only if the pool was already set up, which keeps the first cap.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Solve(a) => solve(a, out),
        Command::ListScenarios => {
            list_scenarios(out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ProbeOperator(a) => probe_operator(a, out),
    }
}

fn list_scenarios(out: &mut dyn Write) -> Result<()> {
    for s in scenario_catalog() {
        let inactive = s.mask.as_ref().map_or(0, |m| m.iter().filter(|a| !**a).count());
        let mut what = vec![format!("{} point source(s)", s.points.len())];
        if !s.obstacles.is_empty() {
            what.push(format!("{} obstacle(s) under a plane wave", s.obstacles.len()));
        }
        if inactive > 0 {
            what.push(format!("{inactive} null cell(s)"));
        }
        if !s.wavenumber.is_constant() {
            what.push("layered wavenumber".to_string());
        }
        writeln!(
            out,
            "{:<12} {}x{} cells of {}, {}, {}",
            s.name,
            s.rows,
            s.cols,
            s.cell_size,
            what.join(", "),
            s.precond.name()
        )?;
    }
    Ok(())
}

fn solve(a: &SolveArgs, out: &mut dyn Write) -> Result<ExitCode> {
    let s = load_scenario(&a.input, &a.overrides)?;
    let start = Instant::now();
    let report = run_scenario(&s)?;
    let elapsed = start.elapsed();
    writeln!(out, "scenario: {}", report.name)?;
    writeln!(out, "preconditioner: {}", report.precond)?;
    writeln!(out, "mesh size: {:.6}", s.mesh_size()?)?;
    writeln!(out, "interface dimension: {}", report.problem.dim())?;
    writeln!(out, "iterations: {}", report.iterations())?;
    writeln!(out, "final relative residual: {:e}", report.run.final_residual())?;
    match report.drop_iteration() {
        Some(d) => writeln!(out, "drop iteration: {d}")?,
        None => writeln!(out, "drop iteration: none")?,
    }
    writeln!(out, "max interface jump: {:e}", report.interface_jump)?;
    writeln!(out, "outcome: {:?}", report.run.outcome)?;
    writeln!(out, "wall time: {:.2} s", elapsed.as_secs_f64())?;
    if a.mono_error {
        match mono_domain_reference(&s) {
            Ok(reference) => writeln!(out, "mono-domain error: {:e}", mono_domain_error(&report, &reference)?)?,
            Err(helmddm_core::Error::Unsupported(why)) => writeln!(out, "mono-domain error: skipped ({why})")?,
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(path) = &a.export_history {
        export::write_history_file(path, &report.run.history)?;
        writeln!(out, "history: {}", path.display())?;
    }
    if let Some(dir) = &a.export_vtk {
        let files = export::write_fields_vtk(dir, &report.name, &report.problem, &report.fields)?;
        writeln!(out, "vtk: {} file(s) in {}", files.len(), dir.display())?;
    }
    if let Some(dir) = &a.export_matrices {
        let files = export::write_subdomain_matrices(dir, &report.name, &report.problem)?;
        writeln!(out, "matrices: {} file(s) in {}", files.len(), dir.display())?;
    }
    Ok(if report.converged() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NOT_CONVERGED)
    })
}

fn probe_operator(a: &ProbeArgs, out: &mut dyn Write) -> Result<ExitCode> {
    let s = load_scenario(&a.input, &a.overrides)?;
    let pb = DdmProblem::new(s.setup()?)?;
    let n = pb.dim();
    writeln!(out, "interface dimension: {n}")?;
    if n > a.max_dim {
        bail!("interface dimension {n} exceeds --max-dim {}", a.max_dim);
    }
    writeln!(out, "size check: ok (limit {})", a.max_dim)?;
    if a.size_check {
        return Ok(ExitCode::SUCCESS);
    }

    let f = probe::dense_interface_operator(&pb)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let x: Vec<_> = (0..n)
        .map(|_| helmddm_core::C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let matrix_free = pb.apply_f(&x)?;
    let dense = probe::dense_matvec(n, &f, &x);
    writeln!(out, "apply_F vs dense F: {:e}", probe::max_abs_diff(&matrix_free, &dense))?;

    // F has a null vector per interior cross-point (the two traces meeting
    // there both carry the corner node), so the interface solution is only
    // unique up to that kernel. The reconstructed fields are unique.
    let sources = s.sources();
    let b = pb.compute_rhs(&sources)?;
    if n > 0 {
        let direct = probe::dense_solve(n, &f, &b)?;
        let settings = KrylovSettings { tol: 1e-12, max_iterations: 2 * n, restart: None };
        let (g, run) = solve_interface(&pb, &b, &s.precond, settings)?;
        let residual = |x: &[helmddm_core::C64]| probe::rel_l2_diff(&probe::dense_matvec(n, &f, x), &b);
        writeln!(out, "direct solve residual: {:e}", residual(&direct))?;
        writeln!(out, "GMRES ({} iterations) residual: {:e}", run.iterations(), residual(&g))?;
        let fields = |x: &[helmddm_core::C64]| -> Result<Vec<helmddm_core::C64>> {
            Ok(pb.reconstruct(x, &sources)?.into_iter().flatten().flatten().collect())
        };
        writeln!(
            out,
            "GMRES vs direct solve, fields: {:e}",
            probe::rel_l2_diff(&fields(&g)?, &fields(&direct)?)
        )?;
    }
    if let Some(path) = &a.export_matrix {
        let mut w = std::io::BufWriter::new(
            std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        );
        export::write_dense_matrix_market(&mut w, n, &f)?;
        w.flush()?;
        writeln!(out, "matrix: {}", path.display())?;
    }
    Ok(ExitCode::SUCCESS)
}
