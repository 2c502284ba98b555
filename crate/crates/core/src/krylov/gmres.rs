use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{KrylovRun, KrylovSettings, LinearOperator, Outcome, Preconditioner};
use crate::error::{invalid, Result};
use crate::math::{norm2, sqrt};
use crate::C64;

/// Right-preconditioned GMRES with a fixed preconditioner. Only the Arnoldi
/// basis is stored; the preconditioner is applied once more per cycle to
/// form the update.
pub fn gmres(
    op: &dyn LinearOperator,
    precond: Option<&dyn Preconditioner>,
    b: &[C64],
    settings: KrylovSettings,
) -> Result<(Vec<C64>, KrylovRun)> {
    run(op, precond, b, settings, false)
}

/// Flexible GMRES: the preconditioner may differ at every iteration, so the
/// preconditioned vectors `z_j = M_j^{-1} v_j` are stored and the update is
/// built from them.
pub fn fgmres(
    op: &dyn LinearOperator,
    precond: &dyn Preconditioner,
    b: &[C64],
    settings: KrylovSettings,
) -> Result<(Vec<C64>, KrylovRun)> {
    run(op, Some(precond), b, settings, true)
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Givens rotation `(c, s)` with `c` real such that
/// `[c, s; -conj(s), c] [a; b] = [r; 0]`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let r = sqrt(na * na + nb * nb);
    (na / r, (a / na) * b.conj() / r)
}

fn run(
    op: &dyn LinearOperator,
    precond: Option<&dyn Preconditioner>,
    b: &[C64],
    settings: KrylovSettings,
    flexible: bool,
) -> Result<(Vec<C64>, KrylovRun)> {
    let n = op.dim();
    if b.len() != n {
        return Err(invalid(format!(
            "right-hand side has length {}, operator dimension is {n}",
            b.len()
        )));
    }
    if !(settings.tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {}", settings.tol)));
    }
    if settings.restart == Some(0) {
        return Err(invalid("restart length must be positive"));
    }
    let zero = C64::new(0.0, 0.0);
    let mut x = vec![zero; n];
    let mut log = KrylovRun {
        settings,
        history: Vec::new(),
        outcome: Outcome::Converged,
        orthogonality_loss: 0.0,
    };
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        log.history.push((0, 0.0));
        return Ok((x, log));
    }
    log.history.push((0, 1.0));
    let precondition = |it: usize, v: &[C64]| -> Result<Vec<C64>> {
        match precond {
            Some(p) => p.apply(it, v),
            None => Ok(v.to_vec()),
        }
    };

    let mut it = 0usize;
    let mut r = b.to_vec();
    loop {
        let beta = norm2(&r);
        let m = settings
            .restart
            .unwrap_or(settings.max_iterations)
            .min(settings.max_iterations - it)
            .max(1);
        let mut v: Vec<Vec<C64>> = vec![r.iter().map(|ri| ri / beta).collect()];
        let mut z: Vec<Vec<C64>> = Vec::new();
        // Columns of the rotated Hessenberg matrix (upper triangular part).
        let mut h: Vec<Vec<C64>> = Vec::new();
        let mut rot: Vec<(f64, C64)> = Vec::new();
        let mut g = vec![C64::new(beta, 0.0)];
        let mut converged = false;
        let mut breakdown = false;

        for j in 0..m {
            let zj = precondition(it, &v[j])?;
            let mut w = op.apply(&zj)?;
            if flexible {
                z.push(zj);
            }
            // Modified Gram-Schmidt, run twice: a single pass loses
            // orthogonality once the basis becomes ill-conditioned.
            let mut col = vec![zero; j + 2];
            for _ in 0..2 {
                for (i, vi) in v.iter().enumerate() {
                    let hij = dot(vi, &w);
                    axpy(-hij, vi, &mut w);
                    col[i] += hij;
                }
            }
            let hnext = norm2(&w);
            col[j + 1] = C64::new(hnext, 0.0);
            for (i, &(c, s)) in rot.iter().enumerate() {
                let (a, bb) = (col[i], col[i + 1]);
                col[i] = a * c + s * bb;
                col[i + 1] = -s.conj() * a + bb * c;
            }
            let (c, s) = givens(col[j], col[j + 1]);
            col[j] = col[j] * c + s * col[j + 1];
            col[j + 1] = zero;
            let gj = g[j];
            g[j] = gj * c;
            g.push(-s.conj() * gj);
            rot.push((c, s));
            h.push(col);
            it += 1;

            let res = g[j + 1].norm() / bnorm;
            log.history.push((it, res));
            let happy = hnext <= 1e-14 * beta;
            if res <= settings.tol || happy {
                converged = true;
                break;
            }
            if h[j][j].norm() == 0.0 {
                breakdown = true;
                break;
            }
            v.push(w.iter().map(|wi| wi / hnext).collect());
        }

        let loss = orthogonality_loss(&v);
        log.orthogonality_loss = log.orthogonality_loss.max(loss);

        // Back substitution for the cycle's coefficients.
        let k = h.len();
        let mut y = vec![zero; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for l in i + 1..k {
                s -= h[l][i] * y[l];
            }
            if h[i][i].norm() == 0.0 {
                breakdown = true;
                y[i] = zero;
            } else {
                y[i] = s / h[i][i];
            }
        }
        if flexible {
            for (yi, zi) in y.iter().zip(&z) {
                axpy(*yi, zi, &mut x);
            }
        } else {
            let mut u = vec![zero; n];
            for (yi, vi) in y.iter().zip(&v) {
                axpy(*yi, vi, &mut u);
            }
            let du = precondition(it.saturating_sub(1), &u)?;
            axpy(C64::new(1.0, 0.0), &du, &mut x);
        }

        if converged {
            log.outcome = Outcome::Converged;
            break;
        }
        if breakdown {
            log.outcome = Outcome::Breakdown;
            break;
        }
        if it >= settings.max_iterations {
            log.outcome = Outcome::MaxIterations;
            break;
        }
        let ax = op.apply(&x)?;
        r = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    }
    Ok((x, log))
}

/// `max |V^H V - I|` over the stored basis.
fn orthogonality_loss(v: &[Vec<C64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..v.len() {
        for j in i..v.len() {
            let d = dot(&v[i], &v[j]) - if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max(d.norm());
        }
    }
    worst
}
