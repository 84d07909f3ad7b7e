//! Sharp-interface fluid-structure interaction in two dimensions.
//!
//! The solver couples an incompressible Navier-Stokes discretization on a
//! staggered Cartesian grid to planar rigid-body dynamics. The fluid-structure
//! interface is represented twice: a surface mesh that moves with the fluid and
//! the boundary of the rigid volumetric mesh, tethered together by stiff spring
//! penalty forces. Stress jumps induced by the interface force are imposed
//! sharply by correcting the finite-difference stencils that the interface
//! cuts, and the exterior fluid traction drives the body.
//!
//! Module map:
//! - [`grid`]: staggered fields, differential operators, boundary conditions,
//!   piecewise-parabolic upwind advection
//! - [`lagrange`]: body meshes, mass-matrix L2 projection, penalty tether
//! - [`iim`]: interface geometry, jump evaluation, stencil corrections,
//!   corrected interpolation, exterior traction reconstruction
//! - [`rbd`]: planar rigid-body dynamics with constrained variants
//! - [`solver`]: FGMRES, conjugate gradients, geometric multigrid
//! - [`fsi`]: the Strang-split coupled time integrator
//! - [`scenarios`]: benchmark configurations, CLI-facing harnesses, output
//!   writers

pub mod error;
pub mod fsi;
pub mod grid;
pub mod iim;
pub mod lagrange;
pub mod rbd;
pub mod scenarios;
pub mod solver;

pub use error::SimError;
