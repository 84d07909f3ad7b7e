//! The coupled velocity-pressure solve of one time step: the saddle operator
//! of the Crank-Nicolson Stokes system, the projection-method preconditioner
//! (inexact Helmholtz solves per component plus an approximate pressure
//! Poisson solve), and the FGMRES wrapper.

use crate::error::SimError;
use crate::grid::{
    apply_bc_pressure, apply_bc_velocity, divergence_into, gradient_into, laplacian_into,
    BoundarySpec, CellField, Grid2, SideBc, StaggeredField, GHOST,
};
use crate::solver::{fgmres, FgmresControls, FgmresStats, FgmresWorkspace, PoissonMg, SaddleVec};

/// Linear-solver and coupling parameters of one simulation.
#[derive(Clone, Copy, Debug)]
pub struct SolverControls {
    /// FGMRES relative tolerance.
    pub tol: f64,
    pub max_iters: usize,
    pub restart: usize,
    /// Iteration cap of the inexact Helmholtz solves in the preconditioner.
    pub helmholtz_iters: usize,
    /// Relative-residual target of the Helmholtz solves.
    pub helmholtz_tol: f64,
    /// V-cycles of the approximate pressure Poisson solve.
    pub poisson_cycles: usize,
    /// Spring penalty stiffness.
    pub kappa: f64,
    /// Time step size.
    pub dt: f64,
}

impl SolverControls {
    pub fn new(kappa: f64, dt: f64) -> Self {
        SolverControls {
            tol: 1e-8,
            max_iters: 100,
            restart: 30,
            helmholtz_iters: 30,
            helmholtz_tol: 0.05,
            poisson_cycles: 2,
            kappa,
            dt,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.tol <= 0.0 || self.helmholtz_tol <= 0.0 {
            return Err(SimError::solver("solver tolerances must be positive"));
        }
        if self.dt <= 0.0 {
            return Err(SimError::solver("time step must be positive"));
        }
        Ok(())
    }
}

/// Dirichlet boundary-face values per side (`None` on outflow sides, where
/// the normal faces remain unknowns).
pub(crate) struct DirichletData {
    pub u_left: Option<Vec<f64>>,
    pub u_right: Option<Vec<f64>>,
    pub v_bottom: Option<Vec<f64>>,
    pub v_top: Option<Vec<f64>>,
}

fn side_values(side: &SideBc, grid: &Grid2, horizontal: bool) -> Option<Vec<f64>> {
    let n = if horizontal { grid.ny } else { grid.nx };
    match side {
        SideBc::Inflow { u, v } => {
            let val = if horizontal { *u } else { *v };
            Some(vec![val; n])
        }
        SideBc::InflowParabolic { peak } => Some(
            (0..n)
                .map(|k| {
                    let s = (k as f64 + 0.5) / n as f64;
                    peak * 4.0 * s * (1.0 - s)
                })
                .collect(),
        ),
        SideBc::Slip | SideBc::NoSlip => Some(vec![0.0; n]),
        SideBc::Outflow => None,
    }
}

impl DirichletData {
    pub fn build(bc: &BoundarySpec, grid: &Grid2) -> Self {
        DirichletData {
            u_left: side_values(&bc.left, grid, true),
            u_right: side_values(&bc.right, grid, true),
            v_bottom: side_values(&bc.bottom, grid, false),
            v_top: side_values(&bc.top, grid, false),
        }
    }
}

/// Scratch fields shared by the operator and preconditioner within one solve.
pub(crate) struct OpScratch {
    pub wu: StaggeredField,
    pub lap: StaggeredField,
    pub grad: StaggeredField,
    pub wp: CellField,
    pub div: CellField,
    cg_r: Vec<f64>,
    cg_p: Vec<f64>,
    cg_ap: Vec<f64>,
    pre_phi: Vec<f64>,
    pre_rhs: Vec<f64>,
    pub mg: PoissonMg,
}

/// Everything one Stokes solve needs besides the system definition.
pub(crate) struct StokesWorkspace {
    pub scratch: OpScratch,
    /// Laplacian of the zero field with inhomogeneous boundary ghosts; the
    /// affine part of the ghost map, folded into the right-hand side.
    pub lap_bc: StaggeredField,
    pub b: SaddleVec,
    pub x: SaddleVec,
    pub fgmres: FgmresWorkspace,
    pub stats: FgmresStats,
}

pub(crate) struct StokesSystem {
    pub grid: Grid2,
    /// Nominal boundary conditions (full-strength inflow data).
    pub bc_nominal: BoundarySpec,
    /// Possibly ramp-scaled boundary conditions used by every ghost fill.
    pub bc: BoundarySpec,
    pub rho: f64,
    pub mu: f64,
    pub dirichlet: DirichletData,
    pub nu: usize,
    pub nv: usize,
    pub np: usize,
}

fn scale_side(side: &SideBc, s: f64) -> SideBc {
    match side {
        SideBc::Inflow { u, v } => SideBc::Inflow { u: s * u, v: s * v },
        SideBc::InflowParabolic { peak } => SideBc::InflowParabolic { peak: s * peak },
        other => *other,
    }
}

pub(crate) fn scale_bc(bc: &BoundarySpec, s: f64) -> BoundarySpec {
    BoundarySpec {
        left: scale_side(&bc.left, s),
        right: scale_side(&bc.right, s),
        bottom: scale_side(&bc.bottom, s),
        top: scale_side(&bc.top, s),
    }
}

impl StokesSystem {
    pub fn new(grid: Grid2, bc: BoundarySpec, rho: f64, mu: f64) -> Self {
        let nu = (grid.nx + 1) * grid.ny;
        let nv = grid.nx * (grid.ny + 1);
        let np = grid.nx * grid.ny;
        StokesSystem {
            grid,
            bc_nominal: bc,
            bc,
            rho,
            mu,
            dirichlet: DirichletData::build(&bc, &grid),
            nu,
            nv,
            np,
        }
    }

    /// Rescale the inflow data (ramped starts). Rebuilds the Dirichlet values
    /// and the affine ghost contribution in `ws`.
    pub fn set_inflow_scale(&mut self, scale: f64, ws: &mut StokesWorkspace) {
        self.bc = scale_bc(&self.bc_nominal, scale);
        self.dirichlet = DirichletData::build(&self.bc, &self.grid);
        let mut zero = StaggeredField::zeros(&self.grid);
        apply_bc_velocity(&mut zero, &self.bc, &self.grid, false);
        self.clear_dirichlet_faces(&mut zero);
        laplacian_into(&zero, &self.grid, &mut ws.lap_bc);
    }

    pub fn make_workspace(&self, controls: &SolverControls) -> StokesWorkspace {
        let template = SaddleVec::zeros(self.nu, self.nv, self.np);
        let dirichlet_sides = [
            self.bc.left.is_outflow(),
            self.bc.right.is_outflow(),
            self.bc.bottom.is_outflow(),
            self.bc.top.is_outflow(),
        ];
        let mut lap_bc = StaggeredField::zeros(&self.grid);
        {
            let mut zero = StaggeredField::zeros(&self.grid);
            apply_bc_velocity(&mut zero, &self.bc, &self.grid, false);
            // the Dirichlet boundary faces themselves are unknowns with
            // identity rows, not ghosts: exclude them from the affine part
            self.clear_dirichlet_faces(&mut zero);
            laplacian_into(&zero, &self.grid, &mut lap_bc);
        }
        let n_comp = self.nu.max(self.nv);
        StokesWorkspace {
            scratch: OpScratch {
                wu: StaggeredField::zeros(&self.grid),
                lap: StaggeredField::zeros(&self.grid),
                grad: StaggeredField::zeros(&self.grid),
                wp: CellField::zeros(&self.grid),
                div: CellField::zeros(&self.grid),
                cg_r: vec![0.0; n_comp],
                cg_p: vec![0.0; n_comp],
                cg_ap: vec![0.0; n_comp],
                pre_phi: vec![0.0; self.np],
                pre_rhs: vec![0.0; self.np],
                mg: PoissonMg::new(self.grid.nx, self.grid.ny, self.grid.h(), dirichlet_sides),
            },
            lap_bc,
            b: SaddleVec::zeros(self.nu, self.nv, self.np),
            x: SaddleVec::zeros(self.nu, self.nv, self.np),
            fgmres: FgmresWorkspace::new(&template, controls.restart),
            stats: FgmresStats {
                iterations: 0,
                residual: 0.0,
                converged: true,
            },
        }
    }

    #[inline]
    pub fn u_is_dirichlet(&self, i: usize) -> bool {
        (i == 0 && self.dirichlet.u_left.is_some()) || (i == self.grid.nx && self.dirichlet.u_right.is_some())
    }

    #[inline]
    pub fn v_is_dirichlet(&self, j: usize) -> bool {
        (j == 0 && self.dirichlet.v_bottom.is_some()) || (j == self.grid.ny && self.dirichlet.v_top.is_some())
    }

    fn clear_dirichlet_faces(&self, vel: &mut StaggeredField) {
        let nx = self.grid.nx as i32;
        let ny = self.grid.ny as i32;
        if self.dirichlet.u_left.is_some() {
            for j in 0..ny {
                vel.u.set(0, j, 0.0);
            }
        }
        if self.dirichlet.u_right.is_some() {
            for j in 0..ny {
                vel.u.set(nx, j, 0.0);
            }
        }
        if self.dirichlet.v_bottom.is_some() {
            for i in 0..nx {
                vel.v.set(i, 0, 0.0);
            }
        }
        if self.dirichlet.v_top.is_some() {
            for i in 0..nx {
                vel.v.set(i, ny, 0.0);
            }
        }
    }

    /// Re-impose the unknown values at Dirichlet boundary faces after a
    /// homogeneous ghost fill: the faces are unknowns pinned by identity
    /// rows, and their coupling into neighboring stencils must see `x`.
    fn restore_dirichlet_faces(&self, u: &[f64], v: &[f64], vel: &mut StaggeredField) {
        let nx = self.grid.nx;
        let ny = self.grid.ny;
        if self.dirichlet.u_left.is_some() {
            for j in 0..ny {
                vel.u.set(0, j as i32, u[j * (nx + 1)]);
            }
        }
        if self.dirichlet.u_right.is_some() {
            for j in 0..ny {
                vel.u.set(nx as i32, j as i32, u[j * (nx + 1) + nx]);
            }
        }
        if self.dirichlet.v_bottom.is_some() {
            for i in 0..nx {
                vel.v.set(i as i32, 0, v[i]);
            }
        }
        if self.dirichlet.v_top.is_some() {
            for i in 0..nx {
                vel.v.set(i as i32, ny as i32, v[ny * nx + i]);
            }
        }
    }

    pub fn scatter(&self, x: &SaddleVec, vel: &mut StaggeredField, p: &mut CellField) {
        let nx = self.grid.nx;
        let ny = self.grid.ny;
        for j in 0..ny {
            let row = vel.u.row_mut(j as i32);
            row[GHOST..GHOST + nx + 1].copy_from_slice(&x.u[j * (nx + 1)..(j + 1) * (nx + 1)]);
        }
        for j in 0..=ny {
            let row = vel.v.row_mut(j as i32);
            row[GHOST..GHOST + nx].copy_from_slice(&x.v[j * nx..(j + 1) * nx]);
        }
        for j in 0..ny {
            let row = p.values.row_mut(j as i32);
            row[GHOST..GHOST + nx].copy_from_slice(&x.p[j * nx..(j + 1) * nx]);
        }
    }

    fn scatter_velocity(&self, u: &[f64], v: &[f64], vel: &mut StaggeredField) {
        let nx = self.grid.nx;
        let ny = self.grid.ny;
        for j in 0..ny {
            let row = vel.u.row_mut(j as i32);
            row[GHOST..GHOST + nx + 1].copy_from_slice(&u[j * (nx + 1)..(j + 1) * (nx + 1)]);
        }
        for j in 0..=ny {
            let row = vel.v.row_mut(j as i32);
            row[GHOST..GHOST + nx].copy_from_slice(&v[j * nx..(j + 1) * nx]);
        }
    }

    pub fn gather(&self, vel: &StaggeredField, p: &CellField, x: &mut SaddleVec) {
        let nx = self.grid.nx;
        let ny = self.grid.ny;
        for j in 0..ny {
            let row = vel.u.row(j as i32);
            x.u[j * (nx + 1)..(j + 1) * (nx + 1)].copy_from_slice(&row[GHOST..GHOST + nx + 1]);
        }
        for j in 0..=ny {
            let row = vel.v.row(j as i32);
            x.v[j * nx..(j + 1) * nx].copy_from_slice(&row[GHOST..GHOST + nx]);
        }
        for j in 0..ny {
            let row = p.values.row(j as i32);
            x.p[j * nx..(j + 1) * nx].copy_from_slice(&row[GHOST..GHOST + nx]);
        }
    }

    /// Saddle operator with homogeneous boundary data: momentum rows
    /// `(rho/dt) u - (mu/2) L u + G p` (identity at Dirichlet faces),
    /// continuity rows `-D u`.
    pub fn apply(&self, controls: &SolverControls, s: &mut OpScratch, x: &SaddleVec, y: &mut SaddleVec) {
        let nx = self.grid.nx;
        let ny = self.grid.ny;
        self.scatter_velocity(&x.u, &x.v, &mut s.wu);
        for j in 0..ny {
            let row = s.wp.values.row_mut(j as i32);
            row[GHOST..GHOST + nx].copy_from_slice(&x.p[j * nx..(j + 1) * nx]);
        }
        apply_bc_velocity(&mut s.wu, &self.bc, &self.grid, true);
        self.restore_dirichlet_faces(&x.u, &x.v, &mut s.wu);
        apply_bc_pressure(&mut s.wp, &self.bc, &self.grid);
        laplacian_into(&s.wu, &self.grid, &mut s.lap);
        gradient_into(&s.wp, &self.grid, &mut s.grad);
        divergence_into(&s.wu, &self.grid, &mut s.div);

        let a = self.rho / controls.dt;
        let half_mu = 0.5 * self.mu;
        for j in 0..ny {
            let lap = s.lap.u.row(j as i32);
            let grad = s.grad.u.row(j as i32);
            for i in 0..=nx {
                let k = j * (nx + 1) + i;
                y.u[k] = if self.u_is_dirichlet(i) {
                    x.u[k]
                } else {
                    a * x.u[k] - half_mu * lap[GHOST + i] + grad[GHOST + i]
                };
            }
        }
        for j in 0..=ny {
            let lap = s.lap.v.row(j as i32);
            let grad = s.grad.v.row(j as i32);
            for i in 0..nx {
                let k = j * nx + i;
                y.v[k] = if self.v_is_dirichlet(j) {
                    x.v[k]
                } else {
                    a * x.v[k] - half_mu * lap[GHOST + i] + grad[GHOST + i]
                };
            }
        }
        for j in 0..ny {
            let div = s.div.values.row(j as i32);
            for i in 0..nx {
                y.p[j * nx + i] = -div[GHOST + i];
            }
        }
    }

    /// Projection-method preconditioner: inexact Helmholtz solve per velocity
    /// component, approximate pressure Poisson solve of `DG phi = r_p + D u*`,
    /// velocity update `u = u* - G phi`, and pressure reconstruction
    /// `p = (rho/dt) phi - (mu/2)(r_p + D u*)`.
    pub fn precondition(&self, controls: &SolverControls, s: &mut OpScratch, r: &SaddleVec, z: &mut SaddleVec) {
        let nx = self.grid.nx;
        let ny = self.grid.ny;

        self.helmholtz(controls, s, true, &r.u, &mut z.u);
        self.helmholtz(controls, s, false, &r.v, &mut z.v);

        self.scatter_velocity(&z.u, &z.v, &mut s.wu);
        apply_bc_velocity(&mut s.wu, &self.bc, &self.grid, true);
        self.restore_dirichlet_faces(&z.u, &z.v, &mut s.wu);
        divergence_into(&s.wu, &self.grid, &mut s.div);
        for j in 0..ny {
            let div = s.div.values.row(j as i32);
            for i in 0..nx {
                s.pre_rhs[j * nx + i] = r.p[j * nx + i] + div[GHOST + i];
            }
        }
        s.mg.solve_approx(&s.pre_rhs, &mut s.pre_phi, controls.poisson_cycles);

        for j in 0..ny {
            let row = s.wp.values.row_mut(j as i32);
            row[GHOST..GHOST + nx].copy_from_slice(&s.pre_phi[j * nx..(j + 1) * nx]);
        }
        apply_bc_pressure(&mut s.wp, &self.bc, &self.grid);
        gradient_into(&s.wp, &self.grid, &mut s.grad);
        for j in 0..ny {
            let grad = s.grad.u.row(j as i32);
            for i in 0..=nx {
                if !self.u_is_dirichlet(i) {
                    z.u[j * (nx + 1) + i] -= grad[GHOST + i];
                }
            }
        }
        for j in 0..=ny {
            let grad = s.grad.v.row(j as i32);
            for i in 0..nx {
                if !self.v_is_dirichlet(j) {
                    z.v[j * nx + i] -= grad[GHOST + i];
                }
            }
        }
        let a = self.rho / controls.dt;
        let half_mu = 0.5 * self.mu;
        for k in 0..self.np {
            z.p[k] = a * s.pre_phi[k] - half_mu * s.pre_rhs[k];
        }
    }

    /// Inexact Helmholtz solve `(rho/dt - mu/2 L) out = rhs` on one component
    /// by conjugate gradients with an iteration cap; Dirichlet faces are
    /// eliminated and passed through.
    fn helmholtz(&self, controls: &SolverControls, s: &mut OpScratch, is_u: bool, rhs: &[f64], out: &mut [f64]) {
        let n = rhs.len();
        let a = self.rho / controls.dt;
        let diag = a + 2.0 * self.mu / (self.grid.h() * self.grid.h());
        for k in 0..n {
            out[k] = rhs[k] / diag;
        }

        let nx = self.grid.nx;
        let ny = self.grid.ny;
        macro_rules! matvec {
            ($xin:expr, $xout:expr) => {{
                let xin: &[f64] = $xin;
                let xout: &mut [f64] = $xout;
                if is_u {
                    for j in 0..ny {
                        let row = s.wu.u.row_mut(j as i32);
                        row[GHOST..GHOST + nx + 1].copy_from_slice(&xin[j * (nx + 1)..(j + 1) * (nx + 1)]);
                        if self.dirichlet.u_left.is_some() {
                            row[GHOST] = 0.0;
                        }
                        if self.dirichlet.u_right.is_some() {
                            row[GHOST + nx] = 0.0;
                        }
                    }
                } else {
                    for j in 0..=ny {
                        let row = s.wu.v.row_mut(j as i32);
                        row[GHOST..GHOST + nx].copy_from_slice(&xin[j * nx..(j + 1) * nx]);
                        if (j == 0 && self.dirichlet.v_bottom.is_some())
                            || (j == ny && self.dirichlet.v_top.is_some())
                        {
                            row[GHOST..GHOST + nx].fill(0.0);
                        }
                    }
                }
                apply_bc_velocity(&mut s.wu, &self.bc, &self.grid, true);
                laplacian_into(&s.wu, &self.grid, &mut s.lap);
                let half_mu = 0.5 * self.mu;
                if is_u {
                    for j in 0..ny {
                        let lap = s.lap.u.row(j as i32);
                        for i in 0..=nx {
                            let k = j * (nx + 1) + i;
                            xout[k] = if self.u_is_dirichlet(i) {
                                xin[k]
                            } else {
                                a * xin[k] - half_mu * lap[GHOST + i]
                            };
                        }
                    }
                } else {
                    for j in 0..=ny {
                        let lap = s.lap.v.row(j as i32);
                        for i in 0..nx {
                            let k = j * nx + i;
                            xout[k] = if self.v_is_dirichlet(j) {
                                xin[k]
                            } else {
                                a * xin[k] - half_mu * lap[GHOST + i]
                            };
                        }
                    }
                }
            }};
        }

        // take the CG buffers out of the scratch so the matvec macro can
        // borrow the field workspaces disjointly
        let mut cg_r = std::mem::take(&mut s.cg_r);
        let mut cg_p = std::mem::take(&mut s.cg_p);
        let mut cg_ap = std::mem::take(&mut s.cg_ap);
        {
            let r = &mut cg_r[..n];
            let p = &mut cg_p[..n];
            let ap = &mut cg_ap[..n];
            matvec!(out, ap);
            let mut rr = 0.0;
            for k in 0..n {
                r[k] = rhs[k] - ap[k];
                p[k] = r[k];
                rr += r[k] * r[k];
            }
            let target = controls.helmholtz_tol * controls.helmholtz_tol * crate::solver::dot(rhs, rhs);
            for _ in 0..controls.helmholtz_iters {
                if rr <= target {
                    break;
                }
                matvec!(p, ap);
                let pap = crate::solver::dot(p, ap);
                if pap <= 0.0 {
                    break;
                }
                let alpha = rr / pap;
                let mut rr_new = 0.0;
                for k in 0..n {
                    out[k] += alpha * p[k];
                    r[k] -= alpha * ap[k];
                    rr_new += r[k] * r[k];
                }
                let beta = rr_new / rr;
                rr = rr_new;
                for k in 0..n {
                    p[k] = r[k] + beta * p[k];
                }
            }
        }
        s.cg_r = cg_r;
        s.cg_p = cg_p;
        s.cg_ap = cg_ap;

        // exact pass-through on Dirichlet rows
        if is_u {
            for j in 0..ny {
                for i in [0usize, nx] {
                    if self.u_is_dirichlet(i) {
                        out[j * (nx + 1) + i] = rhs[j * (nx + 1) + i];
                    }
                }
            }
        } else {
            for j in [0usize, ny] {
                if self.v_is_dirichlet(j) {
                    for i in 0..nx {
                        out[j * nx + i] = rhs[j * nx + i];
                    }
                }
            }
        }
    }

    /// Assemble the momentum right-hand side into `ws.b`:
    /// `b_u = (rho/dt) u^n + (mu/2) L u^n - rho A + (mu lap_corr - grad_corr)
    ///        + (mu/2) L(ghost inhomogeneity)`,
    /// with Dirichlet rows carrying the boundary values and zero continuity
    /// rows. `vel` must have its ghosts filled for the actual boundary
    /// conditions.
    pub fn assemble_rhs(
        &self,
        controls: &SolverControls,
        ws: &mut StokesWorkspace,
        vel: &StaggeredField,
        adv: &StaggeredField,
        grad_corr: Option<&StaggeredField>,
        lap_corr: Option<&StaggeredField>,
    ) {
        let nx = self.grid.nx;
        let ny = self.grid.ny;
        laplacian_into(vel, &self.grid, &mut ws.scratch.lap);
        let a = self.rho / controls.dt;
        let half_mu = 0.5 * self.mu;
        for j in 0..ny {
            let lap = ws.scratch.lap.u.row(j as i32);
            let lap_bc = ws.lap_bc.u.row(j as i32);
            let u_row = vel.u.row(j as i32);
            let adv_row = adv.u.row(j as i32);
            for i in 0..=nx {
                let k = j * (nx + 1) + i;
                ws.b.u[k] = if self.u_is_dirichlet(i) {
                    if i == 0 {
                        self.dirichlet.u_left.as_ref().unwrap()[j]
                    } else {
                        self.dirichlet.u_right.as_ref().unwrap()[j]
                    }
                } else {
                    let mut b = a * u_row[GHOST + i] + half_mu * lap[GHOST + i]
                        - self.rho * adv_row[GHOST + i]
                        + half_mu * lap_bc[GHOST + i];
                    if let Some(gc) = grad_corr {
                        b -= gc.u.get(i as i32, j as i32);
                    }
                    if let Some(lc) = lap_corr {
                        b += self.mu * lc.u.get(i as i32, j as i32);
                    }
                    b
                };
            }
        }
        for j in 0..=ny {
            let lap = ws.scratch.lap.v.row(j as i32);
            let lap_bc = ws.lap_bc.v.row(j as i32);
            let v_row = vel.v.row(j as i32);
            let adv_row = adv.v.row(j as i32);
            for i in 0..nx {
                let k = j * nx + i;
                ws.b.v[k] = if self.v_is_dirichlet(j) {
                    if j == 0 {
                        self.dirichlet.v_bottom.as_ref().unwrap()[i]
                    } else {
                        self.dirichlet.v_top.as_ref().unwrap()[i]
                    }
                } else {
                    let mut b = a * v_row[GHOST + i] + half_mu * lap[GHOST + i]
                        - self.rho * adv_row[GHOST + i]
                        + half_mu * lap_bc[GHOST + i];
                    if let Some(gc) = grad_corr {
                        b -= gc.v.get(i as i32, j as i32);
                    }
                    if let Some(lc) = lap_corr {
                        b += self.mu * lc.v.get(i as i32, j as i32);
                    }
                    b
                };
            }
        }
        ws.b.p.fill(0.0);
    }

    /// Solve the assembled system with `(vel, p)` as the warm start; the
    /// solution is scattered back with boundary conditions re-applied.
    pub fn solve(
        &self,
        controls: &SolverControls,
        ws: &mut StokesWorkspace,
        vel: &mut StaggeredField,
        p: &mut CellField,
    ) -> Result<FgmresStats, SimError> {
        self.gather(vel, p, &mut ws.x);
        let fg = FgmresControls {
            tol: controls.tol,
            max_iters: controls.max_iters,
            restart: controls.restart,
        };
        let stats = fgmres(
            &mut ws.scratch,
            |s, xv, yv| self.apply(controls, s, xv, yv),
            |s, rv, zv| self.precondition(controls, s, rv, zv),
            &ws.b,
            &mut ws.x,
            &mut ws.fgmres,
            &fg,
        )?;
        ws.stats = stats;
        if !stats.converged {
            return Err(SimError::solver(format!(
                "fgmres stagnated: residual {} after {} iterations",
                stats.residual, stats.iterations
            )));
        }
        self.scatter(&ws.x, vel, p);
        apply_bc_velocity(vel, &self.bc, &self.grid, false);
        apply_bc_pressure(p, &self.bc, &self.grid);
        Ok(stats)
    }
}
