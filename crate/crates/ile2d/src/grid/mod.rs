//! Staggered Cartesian grid: geometry, fields, boundary conditions, and the
//! discrete operators of the incompressible Navier-Stokes discretization.
//!
//! Velocity components live at the centers of cell edges (u on x-normal faces,
//! v on y-normal faces) and pressure at cell centers. All lattices carry
//! [`field::GHOST`] ghost layers so the widest upwind stencil never branches.

mod bc;
mod field;
mod ops;
mod ppm;

pub use bc::{apply_bc, apply_bc_pressure, apply_bc_velocity, BoundarySpec, SideBc};
pub use field::{CellField, ScalarLattice, StaggeredField, GHOST};
pub use ops::{
    divergence, divergence_into, gradient, gradient_into, laplacian, laplacian_into, vorticity,
    vorticity_into,
};
pub use ppm::{advect, advect_into};

use crate::error::SimError;

/// Uniform staggered grid with square cells.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid2 {
    pub x0: f64,
    pub y0: f64,
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
    h: f64,
}

impl Grid2 {
    pub fn new(x0: f64, y0: f64, lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self, SimError> {
        if nx == 0 || ny == 0 {
            return Err(SimError::grid("cell counts must be positive"));
        }
        if !(lx > 0.0 && ly > 0.0) {
            return Err(SimError::grid("extents must be positive"));
        }
        let hx = lx / nx as f64;
        let hy = ly / ny as f64;
        if (hx - hy).abs() > 1e-12 * hx.max(hy) {
            return Err(SimError::grid(format!(
                "cells must be square: lx/nx = {hx} but ly/ny = {hy}"
            )));
        }
        Ok(Grid2 {
            x0,
            y0,
            lx,
            ly,
            nx,
            ny,
            h: hx,
        })
    }

    #[inline(always)]
    pub fn h(&self) -> f64 {
        self.h
    }

    #[inline(always)]
    pub fn cell_center(&self, i: i32, j: i32) -> (f64, f64) {
        (
            self.x0 + (i as f64 + 0.5) * self.h,
            self.y0 + (j as f64 + 0.5) * self.h,
        )
    }

    #[inline(always)]
    pub fn u_face(&self, i: i32, j: i32) -> (f64, f64) {
        (
            self.x0 + i as f64 * self.h,
            self.y0 + (j as f64 + 0.5) * self.h,
        )
    }

    #[inline(always)]
    pub fn v_face(&self, i: i32, j: i32) -> (f64, f64) {
        (
            self.x0 + (i as f64 + 0.5) * self.h,
            self.y0 + j as f64 * self.h,
        )
    }

    #[inline(always)]
    pub fn node(&self, i: i32, j: i32) -> (f64, f64) {
        (self.x0 + i as f64 * self.h, self.y0 + j as f64 * self.h)
    }

    /// True when `(x, y)` is at least `margin` inside the physical domain.
    pub fn contains_with_margin(&self, x: f64, y: f64, margin: f64) -> bool {
        x >= self.x0 + margin
            && x <= self.x0 + self.lx - margin
            && y >= self.y0 + margin
            && y <= self.y0 + self.ly - margin
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_square_cells() {
        assert!(Grid2::new(0.0, 0.0, 1.0, 1.0, 10, 11).is_err());
        assert!(Grid2::new(0.0, 0.0, 2.0, 1.0, 20, 10).is_ok());
    }

    #[test]
    fn face_positions() {
        let g = Grid2::new(-1.0, 2.0, 2.0, 1.0, 4, 2).unwrap();
        assert_eq!(g.h(), 0.5);
        assert_eq!(g.u_face(0, 0), (-1.0, 2.25));
        assert_eq!(g.v_face(0, 0), (-0.75, 2.0));
        assert_eq!(g.cell_center(3, 1), (0.75, 2.75));
    }
}
