//! TOML experiment files.
//!
//! A file either names a catalog scenario and overrides some of its
//! settings, or describes a scenario from scratch on top of the catalog
//! defaults (`N = 8`, `phi = pi/3`, `k = 2 pi`, P1 at 20 vertices per
//! wavelength, cells of size 2.5, SGS with diagonal sweeps, tolerance
//! `1e-6`). The full schema is documented in `docs/config.md`.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use helmddm_core::ddm::{PlaneWave, PointSource};
use helmddm_core::habc::pade_coefficients;
use helmddm_core::mesh::{ElementOrder, WavenumberField};
use helmddm_core::scenario::{base_scenario, scenario, PrecondChoice, Scenario};
use helmddm_core::C64;
use serde::Deserialize;

/// Schema version understood by this build.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    /// Catalog entry used as the starting point.
    pub scenario: Option<String>,
    pub name: Option<String>,
    pub partition: Option<PartitionConfig>,
    pub wavenumber: Option<WavenumberConfig>,
    /// Replaces the point sources of the base scenario when present.
    pub sources: Option<Vec<SourceConfig>>,
    pub incident: Option<IncidentConfig>,
    /// Replaces the obstacles of the base scenario when present.
    pub obstacles: Option<Vec<ObstacleConfig>>,
    pub exterior: Option<PadeConfig>,
    pub transmission: Option<PadeConfig>,
    pub discretization: Option<DiscretizationConfig>,
    pub solver: Option<SolverConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionConfig {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub cell_size: Option<f64>,
    /// Null cells as `[row, col]`, row 0 at the bottom.
    pub null_cells: Option<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavenumberConfig {
    /// Constant wavenumber.
    pub k: Option<f64>,
    /// Piecewise-constant raster over the whole domain.
    pub raster: Option<RasterConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RasterConfig {
    pub nx: usize,
    pub ny: usize,
    /// Row-major values, row 0 at the bottom.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    /// Center of the cell `[row, col]`.
    pub cell: Option<[usize; 2]>,
    /// Explicit position; exclusive with `cell`.
    pub position: Option<[f64; 2]>,
    /// `[re, im]`, default `[1, 0]`.
    pub amplitude: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidentConfig {
    /// Propagation angle in radians.
    pub angle: f64,
    /// Defaults to the constant wavenumber of the scenario.
    pub k: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleConfig {
    pub cell: [usize; 2],
    pub half_width: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadeConfig {
    pub n_aux: Option<i64>,
    /// Rotation angle `phi` in radians.
    pub angle: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationConfig {
    /// `"P1"` or `"P2"`.
    pub order: Option<String>,
    pub vertices_per_wavelength: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub precond: Option<String>,
    pub tol: Option<f64>,
    pub max_iterations: Option<usize>,
    pub restart: Option<usize>,
    pub keep_dummy_blocks: Option<bool>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).context("malformed configuration")?;
        ensure!(
            cfg.schema_version == SCHEMA_VERSION,
            "unsupported schema_version {} (this build reads version {SCHEMA_VERSION})",
            cfg.schema_version
        );
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Resolves the configuration into a validated scenario.
    pub fn to_scenario(&self) -> Result<Scenario> {
        let part = self.partition.clone().unwrap_or_default();
        let mut s = match &self.scenario {
            Some(name) => scenario(name)?,
            None => {
                let (Some(rows), Some(cols)) = (part.rows, part.cols) else {
                    bail!("a configuration without `scenario` needs partition.rows and partition.cols");
                };
                base_scenario("custom", rows, cols)
            }
        };
        if let Some(name) = &self.name {
            s.name = name.clone();
        }

        let resized = part.rows.is_some_and(|r| r != s.rows) || part.cols.is_some_and(|c| c != s.cols);
        s.rows = part.rows.unwrap_or(s.rows);
        s.cols = part.cols.unwrap_or(s.cols);
        s.cell_size = part.cell_size.unwrap_or(s.cell_size);
        if resized {
            s.mask = None;
        }
        if let Some(null) = &part.null_cells {
            let mut mask = vec![true; s.rows * s.cols];
            for &[r, c] in null {
                ensure!(r < s.rows && c < s.cols, "null cell [{r}, {c}] is outside the grid");
                mask[r * s.cols + c] = false;
            }
            s.mask = Some(mask);
        }

        if let Some(w) = &self.wavenumber {
            s.wavenumber = match (w.k, &w.raster) {
                (Some(k), None) => WavenumberField::constant(k)?,
                (None, Some(r)) => WavenumberField::raster(s.bounds()?, r.nx, r.ny, r.values.clone())?,
                _ => bail!("wavenumber needs exactly one of `k` and `raster`"),
            };
        } else if resized || part.cell_size.is_some() {
            // A raster is tied to the old bounds.
            if let WavenumberField::Raster(r) = &s.wavenumber {
                s.wavenumber = WavenumberField::raster(s.bounds()?, r.nx, r.ny, r.values.clone())?;
            }
        }

        if let Some(list) = &self.sources {
            s.points = list.iter().map(|src| point_source(&s, src)).collect::<Result<_>>()?;
        } else if resized || part.cell_size.is_some() {
            ensure!(
                s.points.is_empty(),
                "changing the partition of `{}` needs an explicit `sources` list",
                s.name
            );
        }
        if let Some(inc) = &self.incident {
            let k = match (inc.k, &s.wavenumber) {
                (Some(k), _) => k,
                (None, WavenumberField::Constant(k)) => *k,
                _ => bail!("incident.k is required with a variable wavenumber"),
            };
            s.incident = Some(PlaneWave { angle: inc.angle, k });
        }
        if let Some(obs) = &self.obstacles {
            s.obstacles = obs.iter().map(|o| (o.cell[0], o.cell[1], o.half_width)).collect();
        }

        s.exterior = pade(self.exterior.as_ref(), &s.exterior)?;
        s.transmission = pade(self.transmission.as_ref(), &s.transmission)?;

        if let Some(d) = &self.discretization {
            if let Some(o) = &d.order {
                s.order = parse_order(o)?;
            }
            s.vertices_per_wavelength = d.vertices_per_wavelength.unwrap_or(s.vertices_per_wavelength);
        }
        if let Some(sv) = &self.solver {
            if let Some(p) = &sv.precond {
                s.precond = p.parse::<PrecondChoice>()?;
            }
            s.krylov.tol = sv.tol.unwrap_or(s.krylov.tol);
            s.krylov.max_iterations = sv.max_iterations.unwrap_or(s.krylov.max_iterations);
            s.krylov.restart = sv.restart.or(s.krylov.restart);
            s.keep_dummy_blocks = sv.keep_dummy_blocks.unwrap_or(s.keep_dummy_blocks);
        }
        s.validate()?;
        Ok(s)
    }
}

fn point_source(s: &Scenario, src: &SourceConfig) -> Result<PointSource> {
    let position = match (src.cell, src.position) {
        (Some([r, c]), None) => {
            ensure!(r < s.rows && c < s.cols, "source cell [{r}, {c}] is outside the grid");
            s.cell_center(r, c)
        }
        (None, Some(p)) => p,
        _ => bail!("a source needs exactly one of `cell` and `position`"),
    };
    let [re, im] = src.amplitude.unwrap_or([1.0, 0.0]);
    Ok(PointSource { position, amplitude: C64::new(re, im) })
}

fn pade(
    cfg: Option<&PadeConfig>,
    base: &helmddm_core::habc::PadeParams,
) -> Result<helmddm_core::habc::PadeParams> {
    let Some(cfg) = cfg else {
        return Ok(base.clone());
    };
    let n = cfg.n_aux.unwrap_or(base.n_aux() as i64);
    let angle = cfg.angle.unwrap_or(base.angle());
    Ok(pade_coefficients(n, angle)?)
}

pub fn parse_order(s: &str) -> Result<ElementOrder> {
    match s.to_ascii_uppercase().as_str() {
        "P1" => Ok(ElementOrder::P1),
        "P2" => Ok(ElementOrder::P2),
        _ => bail!("unknown element order `{s}`, expected P1 or P2"),
    }
}

/// Default Padé angle, exposed for documentation and tests.
pub const DEFAULT_ANGLE: f64 = PI / 3.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_name_alone_reproduces_the_entry() {
        let s = Config::from_toml("schema_version = 1\nscenario = \"center5x5\"")
            .unwrap()
            .to_scenario()
            .unwrap();
        let c = scenario("center5x5").unwrap();
        assert_eq!(s.points, c.points);
        assert_eq!((s.rows, s.cols, s.cell_size), (5, 5, 2.5));
        assert_eq!(s.precond, c.precond);
        assert_eq!(s.exterior.n_aux(), 8);
        assert!((s.exterior.angle() - DEFAULT_ANGLE).abs() < 1e-15);
    }

    #[test]
    fn overrides_apply() {
        let text = r#"
            schema_version = 1
            scenario = "corner5x5"
            [exterior]
            n_aux = 4
            [transmission]
            angle = 0.5
            [discretization]
            order = "p2"
            vertices_per_wavelength = 12
            [solver]
            precond = "DS-2D"
            tol = 1e-8
            restart = 20
        "#;
        let s = Config::from_toml(text).unwrap().to_scenario().unwrap();
        assert_eq!(s.exterior.n_aux(), 4);
        assert_eq!(s.transmission.n_aux(), 8);
        assert_eq!(s.transmission.angle(), 0.5);
        assert_eq!(s.order, ElementOrder::P2);
        assert_eq!(s.precond.name(), "ds-2d");
        assert_eq!(s.krylov.restart, Some(20));
        assert_eq!(s.krylov.tol, 1e-8);
    }

    #[test]
    fn custom_scenario_from_scratch() {
        let text = r#"
            schema_version = 1
            name = "strip"
            [partition]
            rows = 2
            cols = 3
            cell_size = 1.0
            null_cells = [[1, 2]]
            [wavenumber]
            raster = { nx = 3, ny = 1, values = [6.0, 7.0, 8.0] }
            [[sources]]
            cell = [0, 1]
            [[sources]]
            position = [0.3, 0.4]
            amplitude = [0.0, 2.0]
        "#;
        let s = Config::from_toml(text).unwrap().to_scenario().unwrap();
        assert_eq!(s.name, "strip");
        assert_eq!(s.mask.as_ref().unwrap().iter().filter(|a| !**a).count(), 1);
        assert!(!s.mask.as_ref().unwrap()[5]);
        assert_eq!(s.points[0].position, [1.5, 0.5]);
        assert_eq!(s.points[1].amplitude, C64::new(0.0, 2.0));
        assert_eq!(s.wavenumber.eval([2.5, 0.5]), 8.0);
    }

    #[test]
    fn bad_files_are_rejected() {
        for text in [
            "scenario = \"corner5x5\"",
            "schema_version = 2\nscenario = \"corner5x5\"",
            "schema_version = 1\nscenario = \"nope\"",
            "schema_version = 1\nscenario = \"corner5x5\"\ncolour = 1",
            "schema_version = 1\n[partition]\nrows = 2",
            "schema_version = 1\nscenario = \"corner5x5\"\n[partition]\nrows = 3",
            "schema_version = 1\nscenario = \"corner5x5\"\n[solver]\nprecond = \"jacobi\"",
            "schema_version = 1\nscenario = \"corner5x5\"\n[discretization]\nvertices_per_wavelength = 3",
            "schema_version = 1\nscenario = \"corner5x5\"\n[exterior]\nn_aux = -1",
            "schema_version = 1\nscenario = \"corner5x5\"\n[wavenumber]\nk = 1.0\nraster = { nx = 1, ny = 1, values = [1.0] }",
        ] {
            let r = Config::from_toml(text).and_then(|c| c.to_scenario());
            assert!(r.is_err(), "accepted: {text}");
        }
    }
}
