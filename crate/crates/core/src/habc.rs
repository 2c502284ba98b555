//! Padé-type high-order absorbing operator.
//!
//! With `M = 2N + 1`, `alpha = e^{i phi / 2}` and `c_i = tan^2(i pi / M)`,
//! the impedance operator reads
//!
//! ```text
//! B(u, phi) = -i k alpha [u + (2/M) sum_i c_i (u + phi_i)]
//! ```
//!
//! where each auxiliary field solves the 1D edge equation
//! `-d_tt phi_i - k^2 (alpha^2 c_i + 1) phi_i - k^2 alpha^2 (c_i + 1) u = 0`.
//! Auxiliary indices are 0-based here: `coeffs()[i]` is `c_{i+1}`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::math::{cis, tan};
use crate::C64;

/// Padé coefficients shared by exterior and transmission conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeParams {
    n_aux: usize,
    angle: f64,
    alpha: C64,
    coeffs: Vec<f64>,
}

/// Builds the coefficient set for `n_aux` auxiliary fields and rotation
/// angle `angle` in `[0, pi)`.
pub fn pade_coefficients(n_aux: i64, angle: f64) -> Result<PadeParams> {
    if n_aux < 0 {
        return Err(invalid(format!("number of auxiliary fields must be >= 0, got {n_aux}")));
    }
    if !(0.0..PI).contains(&angle) {
        return Err(invalid(format!("rotation angle must lie in [0, pi), got {angle}")));
    }
    let n = n_aux as usize;
    let m = (2 * n + 1) as f64;
    let coeffs = (1..=n)
        .map(|i| {
            let t = tan(i as f64 * PI / m);
            t * t
        })
        .collect();
    Ok(PadeParams {
        n_aux: n,
        angle,
        alpha: cis(0.5 * angle),
        coeffs,
    })
}

impl PadeParams {
    pub fn n_aux(&self) -> usize {
        self.n_aux
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// `M = 2N + 1`.
    pub fn order(&self) -> usize {
        2 * self.n_aux + 1
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `2 / M`.
    pub(crate) fn weight(&self) -> f64 {
        2.0 / self.order() as f64
    }

    /// `1 + (2/M) sum_i c_i`, the total coefficient of `u` inside `B`.
    pub(crate) fn u_factor(&self) -> f64 {
        1.0 + self.weight() * self.coeffs.iter().sum::<f64>()
    }
}

/// Applies the impedance operator at one point.
pub fn eval_b(params: &PadeParams, k: f64, u: C64, phis: &[C64]) -> Result<C64> {
    if phis.len() != params.n_aux {
        return Err(invalid(format!(
            "expected {} auxiliary values, got {}",
            params.n_aux,
            phis.len()
        )));
    }
    Ok(eval_b_unchecked(params, k, u, phis))
}

pub(crate) fn eval_b_unchecked(params: &PadeParams, k: f64, u: C64, phis: &[C64]) -> C64 {
    let w = params.weight();
    let sum: C64 = params
        .coeffs
        .iter()
        .zip(phis)
        .map(|(&c, &p)| (u + p) * c)
        .sum();
    C64::new(0.0, -k) * params.alpha * (u + sum * w)
}

/// Corner scalar `psi_ij` coupling the `i`-th auxiliary field of one edge
/// (`phi_x`) with the `j`-th of the perpendicular edge (`phi_y`).
pub fn corner_psi(params: &PadeParams, i: usize, j: usize, phi_x: C64, phi_y: C64) -> Result<C64> {
    let n = params.n_aux;
    if i >= n || j >= n {
        return Err(invalid(format!("corner indices ({i}, {j}) out of range for N = {n}")));
    }
    let d = corner_denominator(params, i, j);
    if d.norm() < 1e-14 {
        return Err(Error::SingularCorner(d.norm()));
    }
    let a2 = params.alpha * params.alpha;
    let (ci, cj) = (params.coeffs[i], params.coeffs[j]);
    Ok(-(a2 * (cj + 1.0) * phi_x + a2 * (ci + 1.0) * phi_y) / d)
}

/// `alpha^2 c_i + alpha^2 c_j + 1`. Its imaginary part is
/// `(c_i + c_j) sin(phi)`, so it cannot vanish for `0 < phi < pi`, and for
/// `phi = 0` it is at least 1.
pub(crate) fn corner_denominator(params: &PadeParams, i: usize, j: usize) -> C64 {
    let a2 = params.alpha * params.alpha;
    a2 * (params.coeffs[i] + params.coeffs[j]) + 1.0
}

/// Coefficients `(reaction, coupling)` of the `i`-th auxiliary equation
/// `-d_tt phi_i - reaction phi_i - coupling u = 0`.
pub fn aux_equation_coefficients(params: &PadeParams, i: usize, k: f64) -> Result<(C64, C64)> {
    if i >= params.n_aux {
        return Err(invalid(format!(
            "auxiliary index {i} out of range for N = {}",
            params.n_aux
        )));
    }
    let a2 = params.alpha * params.alpha;
    let c = params.coeffs[i];
    let k2 = k * k;
    Ok(((a2 * c + 1.0) * k2, a2 * (c + 1.0) * k2))
}
