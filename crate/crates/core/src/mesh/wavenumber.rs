use alloc::format;
use alloc::vec::Vec;

use super::partition::Rect;
use crate::error::{invalid, Result};

/// Piecewise-constant values on a uniform `nx x ny` raster over `bounds`,
/// row-major with row 0 at the bottom. Points outside are clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub bounds: Rect,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

/// Real wavenumber `k(x) > 0`.
#[derive(Debug, Clone)]
pub enum WavenumberField {
    Constant(f64),
    Raster(Raster),
    Analytic(fn(f64, f64) -> f64),
}

impl WavenumberField {
    pub fn constant(k: f64) -> Result<Self> {
        let f = WavenumberField::Constant(k);
        f.validate()?;
        Ok(f)
    }

    pub fn raster(bounds: Rect, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || values.len() != nx * ny {
            return Err(invalid(format!(
                "raster of {nx} x {ny} needs that many values, got {}",
                values.len()
            )));
        }
        let f = WavenumberField::Raster(Raster {
            bounds,
            nx,
            ny,
            values,
        });
        f.validate()?;
        Ok(f)
    }

    /// Checks positivity where it can be checked without sampling.
    pub fn validate(&self) -> Result<()> {
        let ok = |k: f64| k.is_finite() && k > 0.0;
        match self {
            WavenumberField::Constant(k) if !ok(*k) => {
                Err(invalid(format!("wavenumber must be positive, got {k}")))
            }
            WavenumberField::Raster(r) => match r.values.iter().find(|&&k| !ok(k)) {
                Some(k) => Err(invalid(format!("raster wavenumber must be positive, got {k}"))),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    pub fn eval(&self, p: [f64; 2]) -> f64 {
        match self {
            WavenumberField::Constant(k) => *k,
            WavenumberField::Analytic(f) => f(p[0], p[1]),
            WavenumberField::Raster(r) => {
                let fx = (p[0] - r.bounds.x0) / r.bounds.width() * r.nx as f64;
                let fy = (p[1] - r.bounds.y0) / r.bounds.height() * r.ny as f64;
                let clamp = |v: f64, n: usize| {
                    if v <= 0.0 {
                        0
                    } else {
                        (v as usize).min(n - 1)
                    }
                };
                r.values[clamp(fy, r.ny) * r.nx + clamp(fx, r.nx)]
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, WavenumberField::Constant(_))
    }

    /// Largest wavenumber over `rect`. Exact for constant and raster fields;
    /// analytic fields are sampled on a 65 x 65 grid.
    pub fn max_over(&self, rect: Rect) -> f64 {
        match self {
            WavenumberField::Constant(k) => *k,
            WavenumberField::Raster(r) => r.values.iter().cloned().fold(f64::MIN, f64::max),
            WavenumberField::Analytic(f) => {
                let n = 64;
                let mut m = f64::MIN;
                for j in 0..=n {
                    for i in 0..=n {
                        let x = rect.x0 + rect.width() * i as f64 / n as f64;
                        let y = rect.y0 + rect.height() * j as f64 / n as f64;
                        m = m.max(f(x, y));
                    }
                }
                m
            }
        }
    }
}
