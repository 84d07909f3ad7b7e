//! Physical boundary conditions, imposed through ghost layers.
//!
//! Ghost values are set so that the interpolants used by the interior stencils
//! honor each side's condition:
//! - `Inflow`: Dirichlet velocity (normal face pinned, linear reflection for
//!   the rest)
//! - `Outflow`: zero normal traction and zero tangential velocity; the normal
//!   velocity ghost copies its mirror (homogeneous Neumann) and the pressure
//!   is pinned to zero on the boundary
//! - `Slip`: zero normal velocity, zero tangential traction
//! - `NoSlip`: zero velocity

use super::field::{CellField, StaggeredField};
use super::Grid2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SideBc {
    /// Dirichlet velocity with constant components.
    Inflow { u: f64, v: f64 },
    /// Dirichlet velocity with a parabolic normal profile `peak * 4 s (1-s)`
    /// along the side and zero tangential component. Used by channel-flow
    /// oracles.
    InflowParabolic { peak: f64 },
    Outflow,
    Slip,
    NoSlip,
}

impl SideBc {
    pub fn is_outflow(&self) -> bool {
        matches!(self, SideBc::Outflow)
    }

    /// Normal velocity prescribed on the boundary face, if Dirichlet.
    fn normal_value(&self, normal_component_is_u: bool, s: f64, homogeneous: bool) -> Option<f64> {
        match self {
            SideBc::Inflow { u, v } => {
                let val = if normal_component_is_u { *u } else { *v };
                Some(if homogeneous { 0.0 } else { val })
            }
            SideBc::InflowParabolic { peak } => {
                let val = peak * 4.0 * s * (1.0 - s);
                Some(if homogeneous { 0.0 } else { val })
            }
            SideBc::Slip | SideBc::NoSlip => Some(0.0),
            SideBc::Outflow => None,
        }
    }

    /// Tangential ghost rule: `ghost = a * mirror + b`.
    fn tangential_rule(&self, tangential_component_is_u: bool, homogeneous: bool) -> (f64, f64) {
        match self {
            SideBc::Inflow { u, v } => {
                let val = if tangential_component_is_u { *u } else { *v };
                let val = if homogeneous { 0.0 } else { val };
                (-1.0, 2.0 * val)
            }
            SideBc::InflowParabolic { .. } => (-1.0, 0.0),
            SideBc::Outflow => (-1.0, 0.0),
            SideBc::Slip => (1.0, 0.0),
            SideBc::NoSlip => (-1.0, 0.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundarySpec {
    pub left: SideBc,
    pub right: SideBc,
    pub bottom: SideBc,
    pub top: SideBc,
}

impl BoundarySpec {
    pub fn uniform(side: SideBc) -> Self {
        BoundarySpec {
            left: side,
            right: side,
            bottom: side,
            top: side,
        }
    }

    pub fn slip_box() -> Self {
        Self::uniform(SideBc::Slip)
    }

    pub fn has_outflow(&self) -> bool {
        self.left.is_outflow() || self.right.is_outflow() || self.bottom.is_outflow() || self.top.is_outflow()
    }
}

/// Fill velocity ghosts (and Dirichlet boundary faces) for `bc`. With
/// `homogeneous` the inflow data is replaced by zero; the solver uses this to
/// split the affine ghost map into its linear part.
pub fn apply_bc_velocity(vel: &mut StaggeredField, bc: &BoundarySpec, grid: &Grid2, homogeneous: bool) {
    let nx = grid.nx as i32;
    let ny = grid.ny as i32;

    // Pass 1: x-sides over interior rows.
    for j in 0..ny {
        let (_, y) = grid.u_face(0, j);
        let s = (y - grid.y0) / grid.ly;
        if let Some(val) = bc.left.normal_value(true, s, homogeneous) {
            vel.u.set(0, j, val);
            for k in 1..=3 {
                let mirror = vel.u.get(k, j);
                vel.u.set(-k, j, 2.0 * val - mirror);
            }
        } else {
            for k in 1..=3 {
                let mirror = vel.u.get(k, j);
                vel.u.set(-k, j, mirror);
            }
        }
        if let Some(val) = bc.right.normal_value(true, s, homogeneous) {
            vel.u.set(nx, j, val);
            for k in 1..=3 {
                let mirror = vel.u.get(nx - k, j);
                vel.u.set(nx + k, j, 2.0 * val - mirror);
            }
        } else {
            for k in 1..=3 {
                let mirror = vel.u.get(nx - k, j);
                vel.u.set(nx + k, j, mirror);
            }
        }
    }
    for j in 0..=ny {
        let (la, lb) = bc.left.tangential_rule(false, homogeneous);
        let (ra, rb) = bc.right.tangential_rule(false, homogeneous);
        for k in 1..=3 {
            let mirror = vel.v.get(k - 1, j);
            vel.v.set(-k, j, la * mirror + lb);
            let mirror = vel.v.get(nx - k, j);
            vel.v.set(nx - 1 + k, j, ra * mirror + rb);
        }
    }

    // Pass 2: y-sides over the full column range, corners included.
    for i in -3..nx + 1 + 3 {
        let (ba, bb) = bc.bottom.tangential_rule(true, homogeneous);
        let (ta, tb) = bc.top.tangential_rule(true, homogeneous);
        for k in 1..=3 {
            let mirror = vel.u.get(i, k - 1);
            vel.u.set(i, -k, ba * mirror + bb);
            let mirror = vel.u.get(i, ny - k);
            vel.u.set(i, ny - 1 + k, ta * mirror + tb);
        }
    }
    for i in -3..nx + 3 {
        let (x, _) = grid.v_face(i, 0);
        let s = (x - grid.x0) / grid.lx;
        if let Some(val) = bc.bottom.normal_value(false, s, homogeneous) {
            vel.v.set(i, 0, val);
            for k in 1..=3 {
                let mirror = vel.v.get(i, k);
                vel.v.set(i, -k, 2.0 * val - mirror);
            }
        } else {
            for k in 1..=3 {
                let mirror = vel.v.get(i, k);
                vel.v.set(i, -k, mirror);
            }
        }
        if let Some(val) = bc.top.normal_value(false, s, homogeneous) {
            vel.v.set(i, ny, val);
            for k in 1..=3 {
                let mirror = vel.v.get(i, ny - k);
                vel.v.set(i, ny + k, 2.0 * val - mirror);
            }
        } else {
            for k in 1..=3 {
                let mirror = vel.v.get(i, ny - k);
                vel.v.set(i, ny + k, mirror);
            }
        }
    }
}

/// Fill pressure ghosts: pinned to zero across an outflow side, zero normal
/// derivative elsewhere.
pub fn apply_bc_pressure(p: &mut CellField, bc: &BoundarySpec, grid: &Grid2) {
    let nx = grid.nx as i32;
    let ny = grid.ny as i32;
    let sign = |side: &SideBc| if side.is_outflow() { -1.0 } else { 1.0 };
    let (ls, rs, bs, ts) = (sign(&bc.left), sign(&bc.right), sign(&bc.bottom), sign(&bc.top));

    for j in 0..ny {
        for k in 1..=3 {
            let mirror = p.values.get(k - 1, j);
            p.values.set(-k, j, ls * mirror);
            let mirror = p.values.get(nx - k, j);
            p.values.set(nx - 1 + k, j, rs * mirror);
        }
    }
    for i in -3..nx + 3 {
        for k in 1..=3 {
            let mirror = p.values.get(i, k - 1);
            p.values.set(i, -k, bs * mirror);
            let mirror = p.values.get(i, ny - k);
            p.values.set(i, ny - 1 + k, ts * mirror);
        }
    }
}

/// Fill all ghost layers of the velocity and pressure for the declared
/// boundary conditions.
pub fn apply_bc(vel: &mut StaggeredField, p: &mut CellField, bc: &BoundarySpec, grid: &Grid2) {
    apply_bc_velocity(vel, bc, grid, false);
    apply_bc_pressure(p, bc, grid);
}
