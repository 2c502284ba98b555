//! Non-overlapping checkerboard domain decomposition for the 2D Helmholtz
//! equation.
//!
//! The crate covers the whole numerical pipeline:
//!
//! - [`mesh`]: checkerboard partitions, conforming structured triangle meshes
//!   per cell, interface topology and wavenumber fields;
//! - [`habc`]: Padé-type high-order absorbing operator, its auxiliary
//!   equations and the cross-point coupling scalars;
//! - [`fem`]: per-subdomain assembly of the coupled volume/auxiliary system,
//!   data injection and outgoing-trace extraction;
//! - [`sparse`]: compressed sparse storage, RCM ordering and sparse LU;
//! - [`ddm`]: the transmission-variable layout and the matrix-free interface
//!   operator `F = I - A`;
//! - [`sweep`]: group arrangements and the symmetric Gauss-Seidel and
//!   parallel double-sweep preconditioners;
//! - [`krylov`]: right-preconditioned GMRES and flexible GMRES;
//! - [`scenario`]: the benchmark catalog and the solve driver.
//!
//! The crate is `no_std` compatible (it needs `alloc`). The `parallel`
//! feature runs independent subdomain solves on the rayon thread pool.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod ddm;
pub mod error;
pub mod fem;
pub mod habc;
pub mod krylov;
pub mod mesh;
pub mod scenario;
pub mod sparse;
pub mod sweep;

mod math;
mod par;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
