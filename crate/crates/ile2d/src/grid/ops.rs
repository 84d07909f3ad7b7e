//! Compact second-order difference operators on the staggered grid.

use rayon::prelude::*;

use super::field::{CellField, StaggeredField, GHOST};
use super::Grid2;
use crate::error::SimError;

fn check_vel(vel: &StaggeredField, grid: &Grid2) -> Result<(), SimError> {
    if !vel.matches(grid) {
        return Err(SimError::grid("staggered field does not match grid"));
    }
    Ok(())
}

fn check_cell(p: &CellField, grid: &Grid2) -> Result<(), SimError> {
    if !p.matches(grid) {
        return Err(SimError::grid("cell field does not match grid"));
    }
    Ok(())
}

/// Discrete divergence of the velocity, at cell centers.
pub fn divergence_into(vel: &StaggeredField, grid: &Grid2, out: &mut CellField) {
    let nx = grid.nx;
    let h_inv = 1.0 / grid.h();
    out.values.interior_rows_mut().for_each(|(j, row)| {
        let u0 = vel.u.row(j);
        let v0 = vel.v.row(j);
        let v1 = vel.v.row(j + 1);
        for i in 0..nx {
            row[GHOST + i] =
                (u0[GHOST + i + 1] - u0[GHOST + i] + v1[GHOST + i] - v0[GHOST + i]) * h_inv;
        }
    });
}

pub fn divergence(vel: &StaggeredField, grid: &Grid2) -> Result<CellField, SimError> {
    check_vel(vel, grid)?;
    let mut out = CellField::zeros(grid);
    divergence_into(vel, grid, &mut out);
    Ok(out)
}

/// Discrete pressure gradient, centered two-point differences onto faces.
/// Boundary faces use the ghost convention of [`super::apply_bc_pressure`].
pub fn gradient_into(p: &CellField, grid: &Grid2, out: &mut StaggeredField) {
    let nx = grid.nx;
    let h_inv = 1.0 / grid.h();
    out.u.interior_rows_mut().for_each(|(j, row)| {
        let pr = p.values.row(j);
        for i in 0..=nx {
            row[GHOST + i] = (pr[GHOST + i] - pr[GHOST + i - 1]) * h_inv;
        }
    });
    out.v.interior_rows_mut().for_each(|(j, row)| {
        let p0 = p.values.row(j - 1);
        let p1 = p.values.row(j);
        for i in 0..nx {
            row[GHOST + i] = (p1[GHOST + i] - p0[GHOST + i]) * h_inv;
        }
    });
}

pub fn gradient(p: &CellField, grid: &Grid2) -> Result<StaggeredField, SimError> {
    check_cell(p, grid)?;
    let mut out = StaggeredField::zeros(grid);
    gradient_into(p, grid, &mut out);
    Ok(out)
}

/// Five-point Laplacian applied componentwise at face centers.
pub fn laplacian_into(vel: &StaggeredField, grid: &Grid2, out: &mut StaggeredField) {
    let nx = grid.nx;
    let h2_inv = 1.0 / (grid.h() * grid.h());
    out.u.interior_rows_mut().for_each(|(j, row)| {
        let um = vel.u.row(j - 1);
        let u0 = vel.u.row(j);
        let up = vel.u.row(j + 1);
        for i in 0..=nx {
            let k = GHOST + i;
            row[k] = (u0[k - 1] + u0[k + 1] + um[k] + up[k] - 4.0 * u0[k]) * h2_inv;
        }
    });
    out.v.interior_rows_mut().for_each(|(j, row)| {
        let vm = vel.v.row(j - 1);
        let v0 = vel.v.row(j);
        let vp = vel.v.row(j + 1);
        for i in 0..nx {
            let k = GHOST + i;
            row[k] = (v0[k - 1] + v0[k + 1] + vm[k] + vp[k] - 4.0 * v0[k]) * h2_inv;
        }
    });
}

pub fn laplacian(vel: &StaggeredField, grid: &Grid2) -> Result<StaggeredField, SimError> {
    check_vel(vel, grid)?;
    let mut out = StaggeredField::zeros(grid);
    laplacian_into(vel, grid, &mut out);
    Ok(out)
}

/// Vorticity `dv/dx - du/dy` sampled at cell centers (average of the four
/// surrounding node values). Diagnostics only.
pub fn vorticity_into(vel: &StaggeredField, grid: &Grid2, out: &mut CellField) {
    let h_inv = 1.0 / grid.h();
    let nx = grid.nx as i32;
    let node = |i: i32, j: i32| -> f64 {
        (vel.v.get(i, j) - vel.v.get(i - 1, j) - vel.u.get(i, j) + vel.u.get(i, j - 1)) * h_inv
    };
    for j in 0..grid.ny as i32 {
        for i in 0..nx {
            let w = 0.25 * (node(i, j) + node(i + 1, j) + node(i, j + 1) + node(i + 1, j + 1));
            out.values.set(i, j, w);
        }
    }
}

pub fn vorticity(vel: &StaggeredField, grid: &Grid2) -> Result<CellField, SimError> {
    check_vel(vel, grid)?;
    let mut out = CellField::zeros(grid);
    vorticity_into(vel, grid, &mut out);
    Ok(out)
}
