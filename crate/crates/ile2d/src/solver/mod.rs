//! Krylov and multigrid building blocks for the time-dependent Stokes solve.

mod fgmres;
mod mg;
mod vec;

pub use fgmres::{fgmres, FgmresControls, FgmresStats, FgmresWorkspace};
pub use mg::PoissonMg;
pub use vec::{axpy, dot, norm2, scale, SaddleVec};
