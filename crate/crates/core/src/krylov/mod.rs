//! Right-preconditioned GMRES and flexible GMRES with optional restarts.
//!
//! Both use modified Gram-Schmidt Arnoldi and complex Givens rotations for
//! the Hessenberg least-squares problem. With right preconditioning the
//! least-squares residual is the true residual of the original system, so
//! the recorded history is `|b - F x_j| / |b|` (up to rounding).

mod gmres;

use alloc::vec::Vec;

use crate::Result;
use crate::C64;

pub use gmres::{fgmres, gmres};

/// Square linear map applied matrix-free.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64]) -> Result<Vec<C64>>;
}

/// Preconditioner that may change with the iteration index (flexible
/// variant). `iteration` counts Arnoldi steps from 0 across restarts.
pub trait Preconditioner {
    fn apply(&self, iteration: usize, x: &[C64]) -> Result<Vec<C64>>;
}

/// Identity map, useful as "no preconditioner".
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Preconditioner for Identity {
    fn apply(&self, _: usize, x: &[C64]) -> Result<Vec<C64>> {
        Ok(x.to_vec())
    }
}

/// A fixed linear operator used as a preconditioner.
pub struct Fixed<'a>(pub &'a dyn LinearOperator);

impl Preconditioner for Fixed<'_> {
    fn apply(&self, _: usize, x: &[C64]) -> Result<Vec<C64>> {
        self.0.apply(x)
    }
}

/// Dense row-major matrix as an operator (tests, probing).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub n: usize,
    pub a: Vec<C64>,
}

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.n {
            return Err(crate::error::invalid("dense operator dimension mismatch"));
        }
        Ok((0..self.n)
            .map(|i| self.a[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }
}

impl<F> LinearOperator for (usize, F)
where
    F: Fn(&[C64]) -> Result<Vec<C64>>,
{
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        (self.1)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovSettings {
    /// Relative residual target.
    pub tol: f64,
    pub max_iterations: usize,
    /// Cycle length; `None` never restarts.
    pub restart: Option<usize>,
}

impl Default for KrylovSettings {
    fn default() -> Self {
        KrylovSettings {
            tol: 1e-6,
            max_iterations: 200,
            restart: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    MaxIterations,
    /// The least-squares problem became singular without convergence.
    Breakdown,
}

/// State and history of one Krylov solve.
#[derive(Debug, Clone, PartialEq)]
pub struct KrylovRun {
    pub settings: KrylovSettings,
    /// `(iteration, relative residual)`, starting with `(0, 1.0)`.
    pub history: Vec<(usize, f64)>,
    pub outcome: Outcome,
    /// Largest `max |V^H V - I|` observed over all cycles.
    pub orthogonality_loss: f64,
}

impl KrylovRun {
    /// Number of Arnoldi steps performed.
    pub fn iterations(&self) -> usize {
        self.history.last().map_or(0, |h| h.0)
    }

    pub fn converged(&self) -> bool {
        self.outcome == Outcome::Converged
    }

    pub fn final_residual(&self) -> f64 {
        self.history.last().map_or(0.0, |h| h.1)
    }
}
