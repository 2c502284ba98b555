//! Checkerboard partitions, per-cell structured meshes, interface topology
//! and wavenumber fields.

mod grid;
mod partition;
mod topology;
mod wavenumber;

pub use grid::{build_grid_mesh, build_subdomain_mesh, intervals_for, ElementOrder, SubdomainMesh};
pub use partition::{build_partition, CheckerboardPartition, Rect, Side};
pub use topology::{
    interface_topology, CrossPoint, CrossPointKind, DirectedEdge, InterfaceTopology,
};
pub use wavenumber::{Raster, WavenumberField};
