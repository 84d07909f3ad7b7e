//! Velocity restriction and exterior-field reconstruction at the interface:
//! corrected bilinear interpolation (accounting for the normal-derivative
//! discontinuity), the one-sided exterior pressure and wall shear, and the
//! exterior traction assembled as a nodal field.

use super::topology::CorrectionSet;
use super::{InterfaceMesh, JumpPair, ScalarJump};
use crate::error::SimError;
use crate::grid::{CellField, Grid2, ScalarLattice, StaggeredField};
use crate::lagrange::{l2_project, MassMatrix, GAUSS4};

/// A point lying on the interface, tagged with the segment that owns it.
#[derive(Clone, Copy, Debug)]
pub struct SurfacePoint {
    pub pos: [f64; 2],
    pub seg: usize,
    pub t: f64,
}

/// One quadrature point per Gauss node per segment, in segment-major order.
pub fn surface_quadrature(mesh: &InterfaceMesh) -> Vec<SurfacePoint> {
    let mut pts = Vec::with_capacity(4 * mesh.segments.len());
    for s in 0..mesh.segments.len() {
        for (t, _) in GAUSS4 {
            pts.push(SurfacePoint {
                pos: mesh.point_on(s, t),
                seg: s,
                t,
            });
        }
    }
    pts
}

#[derive(Clone, Copy)]
enum Comp {
    U,
    V,
}

#[inline]
fn lattice_coords(comp: Comp, grid: &Grid2, p: [f64; 2]) -> (f64, f64) {
    match comp {
        Comp::U => ((p[0] - grid.x0) / grid.h(), (p[1] - grid.y0) / grid.h() - 0.5),
        Comp::V => ((p[0] - grid.x0) / grid.h() - 0.5, (p[1] - grid.y0) / grid.h()),
    }
}

#[inline]
fn corner_pos(comp: Comp, grid: &Grid2, i: i32, j: i32) -> [f64; 2] {
    match comp {
        Comp::U => {
            let (x, y) = grid.u_face(i, j);
            [x, y]
        }
        Comp::V => {
            let (x, y) = grid.v_face(i, j);
            [x, y]
        }
    }
}

fn check_in_domain(grid: &Grid2, p: [f64; 2]) -> Result<(), SimError> {
    if !grid.contains_with_margin(p[0], p[1], 0.0) {
        return Err(SimError::grid(format!(
            "interpolation point ({}, {}) outside the domain",
            p[0], p[1]
        )));
    }
    Ok(())
}

/// Plain bilinear interpolation of one staggered component; ghosts must be
/// filled.
fn interp_plain(lat: &ScalarLattice, comp: Comp, grid: &Grid2, p: [f64; 2]) -> f64 {
    let (gx, gy) = lattice_coords(comp, grid, p);
    let i0 = gx.floor() as i32;
    let j0 = gy.floor() as i32;
    let fx = gx - i0 as f64;
    let fy = gy - j0 as f64;
    let v00 = lat.get(i0, j0);
    let v10 = lat.get(i0 + 1, j0);
    let v01 = lat.get(i0, j0 + 1);
    let v11 = lat.get(i0 + 1, j0 + 1);
    (1.0 - fx) * (1.0 - fy) * v00 + fx * (1.0 - fy) * v10 + (1.0 - fx) * fy * v01 + fx * fy * v11
}

/// Bilinear interpolation of one velocity component onto the exterior-side
/// extension at `p`: stencil corners on the interior side are replaced by
/// their smooth exterior extension using the jump data. `anchor` supplies the
/// owning segment when `p` lies on the interface itself (the crossing search
/// degenerates there).
#[allow(clippy::too_many_arguments)]
fn interp_corrected(
    lat: &ScalarLattice,
    comp: Comp,
    jump: &ScalarJump,
    mesh: &InterfaceMesh,
    cs: &CorrectionSet,
    grid: &Grid2,
    p: [f64; 2],
    anchor: Option<(usize, f64)>,
    scratch: &mut Vec<u32>,
) -> f64 {
    let (gx, gy) = lattice_coords(comp, grid, p);
    let i0 = gx.floor() as i32;
    let j0 = gy.floor() as i32;
    let fx = gx - i0 as f64;
    let fy = gy - j0 as f64;
    let mut vals = [0.0f64; 4];
    for (k, (di, dj)) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
        let (ci, cj) = (i0 + di, j0 + dj);
        let inside = match comp {
            Comp::U => cs.u_inside(ci, cj),
            Comp::V => cs.v_inside(ci, cj),
        };
        let mut v = lat.get(ci, cj);
        if inside {
            let cpos = corner_pos(comp, grid, ci, cj);
            let crossing = cs
                .first_crossing(mesh, p, cpos, scratch)
                .or(anchor.map(|(seg, t)| super::topology::Crossing {
                    pos: mesh.point_on(seg, t),
                    seg,
                    t,
                }));
            if let Some(cr) = crossing {
                let (jv, jg) = jump.eval(mesh, cr.seg, cr.t);
                let ext = jv + (cpos[0] - cr.pos[0]) * jg[0] + (cpos[1] - cr.pos[1]) * jg[1];
                v += ext;
            }
        }
        vals[k] = v;
    }
    (1.0 - fx) * (1.0 - fy) * vals[0] + fx * (1.0 - fy) * vals[1] + (1.0 - fx) * fy * vals[2] + fx * fy * vals[3]
}

/// Corrected bilinear interpolation of both velocity components at interface
/// points. The result is the exterior-side limit; with zero jumps it is the
/// plain single-valued interpolant.
pub fn corrected_interp_velocity(
    vel: &StaggeredField,
    mesh: &InterfaceMesh,
    jumps: &JumpPair,
    cs: &CorrectionSet,
    grid: &Grid2,
    points: &[SurfacePoint],
) -> Result<Vec<[f64; 2]>, SimError> {
    let mut out = Vec::with_capacity(points.len());
    let mut scratch = Vec::new();
    for pt in points {
        check_in_domain(grid, pt.pos)?;
        let anchor = Some((pt.seg, pt.t));
        let u = interp_corrected(
            &vel.u,
            Comp::U,
            &jumps.velocity[0],
            mesh,
            cs,
            grid,
            pt.pos,
            anchor,
            &mut scratch,
        );
        let v = interp_corrected(
            &vel.v,
            Comp::V,
            &jumps.velocity[1],
            mesh,
            cs,
            grid,
            pt.pos,
            anchor,
            &mut scratch,
        );
        out.push([u, v]);
    }
    Ok(out)
}

/// Velocity restriction: corrected interpolation at the segment quadrature
/// points followed by L2 projection onto the nodal basis.
pub fn restrict(
    vel: &StaggeredField,
    mesh: &InterfaceMesh,
    jumps: &JumpPair,
    cs: &CorrectionSet,
    grid: &Grid2,
    mass: &MassMatrix,
) -> Result<Vec<[f64; 2]>, SimError> {
    let pts = surface_quadrature(mesh);
    let samples = corrected_interp_velocity(vel, mesh, jumps, cs, grid, &pts)?;
    let ns = mesh.segments.len();
    let mut sx = vec![[0.0; 4]; ns];
    let mut sy = vec![[0.0; 4]; ns];
    for (k, val) in samples.iter().enumerate() {
        sx[k / 4][k % 4] = val[0];
        sy[k / 4][k % 4] = val[1];
    }
    let ux = l2_project(mass, &mesh.reference, &mesh.segments, &sx)?;
    let uy = l2_project(mass, &mesh.reference, &mesh.segments, &sy)?;
    Ok(ux.into_iter().zip(uy).map(|(a, b)| [a, b]).collect())
}

/// Exterior pressure at interface points: the local pressure jump plus the
/// interior pressure interpolated at `x - 1.3 sqrt(2) h n`.
pub fn exterior_pressure(
    p: &CellField,
    mesh: &InterfaceMesh,
    jumps: &JumpPair,
    grid: &Grid2,
    points: &[SurfacePoint],
) -> Result<Vec<f64>, SimError> {
    let offset = 1.3 * std::f64::consts::SQRT_2 * grid.h();
    let mut out = Vec::with_capacity(points.len());
    for pt in points {
        let n = mesh.normal[pt.seg];
        let xm = [pt.pos[0] - offset * n[0], pt.pos[1] - offset * n[1]];
        check_in_domain(grid, xm)?;
        let interior = {
            let gx = (xm[0] - grid.x0) / grid.h() - 0.5;
            let gy = (xm[1] - grid.y0) / grid.h() - 0.5;
            let i0 = gx.floor() as i32;
            let j0 = gy.floor() as i32;
            let fx = gx - i0 as f64;
            let fy = gy - j0 as f64;
            (1.0 - fx) * (1.0 - fy) * p.values.get(i0, j0)
                + fx * (1.0 - fy) * p.values.get(i0 + 1, j0)
                + (1.0 - fx) * fy * p.values.get(i0, j0 + 1)
                + fx * fy * p.values.get(i0 + 1, j0 + 1)
        };
        let (jv, _) = jumps.pressure.eval(mesh, pt.seg, pt.t);
        out.push(jv + interior);
    }
    Ok(out)
}

/// One-sided exterior normal derivative of the velocity at interface points:
/// `(I[u](x + h_hat n) - u(x)) / h_hat` with `h_hat = 1.05 sqrt(2) h`.
pub fn exterior_shear(
    vel: &StaggeredField,
    mesh: &InterfaceMesh,
    jumps: &JumpPair,
    cs: &CorrectionSet,
    grid: &Grid2,
    points: &[SurfacePoint],
) -> Result<Vec<[f64; 2]>, SimError> {
    let h_hat = 1.05 * std::f64::consts::SQRT_2 * grid.h();
    let surf = corrected_interp_velocity(vel, mesh, jumps, cs, grid, points)?;
    let mut out = Vec::with_capacity(points.len());
    for (pt, us) in points.iter().zip(surf.iter()) {
        let n = mesh.normal[pt.seg];
        let xp = [pt.pos[0] + h_hat * n[0], pt.pos[1] + h_hat * n[1]];
        check_in_domain(grid, xp)?;
        let ue = interp_plain(&vel.u, Comp::U, grid, xp);
        let ve = interp_plain(&vel.v, Comp::V, grid, xp);
        out.push([(ue - us[0]) / h_hat, (ve - us[1]) / h_hat]);
    }
    Ok(out)
}

/// Exterior traction at the quadrature points, projected to a nodal field:
/// `tau = -p n + mu ((du/dn)+ + (n . du/dn) n + (n . du/dtau) tau)`, with the
/// transpose part reconstructed from the normal derivative and the tangential
/// derivative of the restricted interface velocity.
#[allow(clippy::too_many_arguments)]
pub fn exterior_traction(
    p_plus: &[f64],
    shear: &[[f64; 2]],
    interface_velocity: &[[f64; 2]],
    mesh: &InterfaceMesh,
    mass: &MassMatrix,
    mu: f64,
    points: &[SurfacePoint],
) -> Result<Vec<[f64; 2]>, SimError> {
    let ns = mesh.segments.len();
    if p_plus.len() != points.len() || shear.len() != points.len() {
        return Err(SimError::mesh("traction inputs do not match quadrature points"));
    }
    let mut sx = vec![[0.0; 4]; ns];
    let mut sy = vec![[0.0; 4]; ns];
    for (k, pt) in points.iter().enumerate() {
        let s = pt.seg;
        let n = mesh.normal[s];
        let tau = mesh.tangent[s];
        let seg = mesh.segments[s];
        let ua = interface_velocity[seg[0]];
        let ub = interface_velocity[seg[1]];
        let dudtau = [
            (ub[0] - ua[0]) / mesh.cur_length[s],
            (ub[1] - ua[1]) / mesh.cur_length[s],
        ];
        let sh = shear[k];
        let n_dot_sh = n[0] * sh[0] + n[1] * sh[1];
        let n_dot_dt = n[0] * dudtau[0] + n[1] * dudtau[1];
        let tx = -p_plus[k] * n[0] + mu * (sh[0] + n_dot_sh * n[0] + n_dot_dt * tau[0]);
        let ty = -p_plus[k] * n[1] + mu * (sh[1] + n_dot_sh * n[1] + n_dot_dt * tau[1]);
        sx[k / 4][k % 4] = tx;
        sy[k / 4][k % 4] = ty;
    }
    let nx = l2_project(mass, &mesh.reference, &mesh.segments, &sx)?;
    let ny = l2_project(mass, &mesh.reference, &mesh.segments, &sy)?;
    Ok(nx.into_iter().zip(ny).map(|(a, b)| [a, b]).collect())
}
