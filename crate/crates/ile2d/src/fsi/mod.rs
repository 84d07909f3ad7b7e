//! The coupled time integrator: Strang-split rigid-body half-steps around a
//! full IIM fluid step (Crank-Nicolson Stokes solve with jump corrections and
//! Adams-Bashforth advection), with the tethered interface advected by the
//! restricted midpoint velocity.

mod stokes;

pub use stokes::SolverControls;
pub(crate) use stokes::{StokesSystem, StokesWorkspace};

use crate::error::SimError;
use crate::grid::{
    advect_into, apply_bc_pressure, apply_bc_velocity, divergence_into, BoundarySpec, CellField,
    Grid2, StaggeredField, GHOST,
};
use crate::iim::{
    exterior_pressure, exterior_shear, exterior_traction, jump_decompose, locate_intersections,
    restrict, spread, surface_quadrature, InterfaceMesh,
};
use crate::lagrange::{assemble_mass, body_properties, penalty_force, rigid_map, MassMatrix, VolumetricMesh};
use crate::rbd::{half_step, net_load, ConstraintParams, Loads, MassProperties, RigidBodyState};

/// The rigid body and its two interface representations.
pub struct CoupledBody {
    pub volumetric: VolumetricMesh,
    pub state: RigidBodyState,
    pub mass_props: MassProperties,
    /// Center of mass in reference coordinates.
    pub reference_centroid: [f64; 2],
    pub params: ConstraintParams,
    /// The interface representation chi that moves with the fluid.
    pub interface: InterfaceMesh,
    pub mass_matrix: MassMatrix,
    /// Boundary nodes of the volumetric mesh in reference coordinates.
    pub boundary_ref: Vec<[f64; 2]>,
    /// Current body-boundary positions xi (rigidly mapped).
    pub xi: Vec<[f64; 2]>,
    /// Penalty force from the most recent Step II.
    pub force: Vec<[f64; 2]>,
    /// Nodal exterior traction from the most recent fluid step.
    pub traction: Vec<[f64; 2]>,
}

impl CoupledBody {
    /// Assemble the coupled body from its volumetric mesh and initial state.
    /// The interface starts coincident with the rigid boundary (zero tether).
    pub fn new(
        volumetric: VolumetricMesh,
        state: RigidBodyState,
        params: ConstraintParams,
    ) -> Result<Self, SimError> {
        let props = body_properties(&volumetric)?;
        let mass_props = MassProperties {
            mass: props.mass,
            area: props.area,
            inertia: props.inertia,
            rho_s: props.rho_s,
        };
        let mut interface = InterfaceMesh::from_volumetric(&volumetric)?;
        let boundary_ref = interface.reference.clone();
        let mass_matrix = assemble_mass(&interface.reference, &interface.segments)?;
        let mut xi = Vec::new();
        rigid_map(state.q, props.centroid, state.d_c, &boundary_ref, &mut xi);
        interface.position = xi.clone();
        interface.geometry_update()?;
        let n = interface.node_count();
        Ok(CoupledBody {
            volumetric,
            state,
            mass_props,
            reference_centroid: props.centroid,
            params,
            interface,
            mass_matrix,
            boundary_ref,
            xi,
            force: vec![[0.0, 0.0]; n],
            traction: vec![[0.0, 0.0]; n],
        })
    }

    /// Current center of mass.
    pub fn center(&self) -> [f64; 2] {
        [
            self.reference_centroid[0] + self.state.d_c[0],
            self.reference_centroid[1] + self.state.d_c[1],
        ]
    }

    fn loads(&self, rho_f: f64) -> Loads {
        net_load(
            &self.traction,
            &self.interface.position,
            &self.interface.segments,
            self.center(),
            &self.mass_props,
            rho_f,
            self.params.gravity,
        )
    }
}

/// Per-step diagnostics recorded by the harness.
#[derive(Clone, Copy, Debug, Default)]
pub struct StepDiagnostics {
    pub t: f64,
    pub fgmres_iterations: usize,
    pub fgmres_residual: f64,
    pub div_linf: f64,
    pub tether_linf: f64,
    pub rotation_subiterations: usize,
    pub loads: Loads,
    pub resolution_warnings: usize,
}

/// One coupled simulation: Eulerian state, optional rigid body, and all the
/// solver scratch.
pub struct FsiSimulation {
    pub grid: Grid2,
    pub bc: BoundarySpec,
    pub rho_f: f64,
    pub mu: f64,
    pub controls: SolverControls,
    pub vel: StaggeredField,
    /// Pressure, time-staggered at `n - 1/2`.
    pub p: CellField,
    pub body: Option<CoupledBody>,
    pub t: f64,
    pub step_index: u64,
    /// Inflow ramp time; the boundary data scales with `min(1, t / ramp)`.
    pub inflow_ramp: f64,
    inflow_scale: f64,
    sys: StokesSystem,
    ws: StokesWorkspace,
    adv_prev: StaggeredField,
    adv_cur: StaggeredField,
    adv_rhs: StaggeredField,
    u_old: StaggeredField,
    u_mid: StaggeredField,
    grad_corr: StaggeredField,
    lap_corr: StaggeredField,
    have_history: bool,
    chi_save: Vec<[f64; 2]>,
}

impl FsiSimulation {
    pub fn new(
        grid: Grid2,
        bc: BoundarySpec,
        rho_f: f64,
        mu: f64,
        controls: SolverControls,
        body: Option<CoupledBody>,
    ) -> Result<Self, SimError> {
        controls.validate()?;
        if rho_f <= 0.0 || mu <= 0.0 {
            return Err(SimError::config("fluid density and viscosity must be positive"));
        }
        let sys = StokesSystem::new(grid, bc, rho_f, mu);
        let ws = sys.make_workspace(&controls);
        let mut vel = StaggeredField::zeros(&grid);
        let mut p = CellField::zeros(&grid);
        apply_bc_velocity(&mut vel, &bc, &grid, false);
        apply_bc_pressure(&mut p, &bc, &grid);
        Ok(FsiSimulation {
            grid,
            bc,
            rho_f,
            mu,
            controls,
            vel,
            p,
            body,
            t: 0.0,
            step_index: 0,
            inflow_ramp: 0.0,
            inflow_scale: 1.0,
            sys,
            ws,
            adv_prev: StaggeredField::zeros(&grid),
            adv_cur: StaggeredField::zeros(&grid),
            adv_rhs: StaggeredField::zeros(&grid),
            u_old: StaggeredField::zeros(&grid),
            u_mid: StaggeredField::zeros(&grid),
            grad_corr: StaggeredField::zeros(&grid),
            lap_corr: StaggeredField::zeros(&grid),
            have_history: false,
            chi_save: Vec::new(),
        })
    }

    /// Overwrite the initial velocity from an analytic field and refresh the
    /// ghosts.
    pub fn set_initial_velocity(&mut self, fu: impl FnMut(f64, f64) -> f64, fv: impl FnMut(f64, f64) -> f64) {
        self.vel = StaggeredField::from_fn(&self.grid, fu, fv);
        apply_bc_velocity(&mut self.vel, &self.bc, &self.grid, false);
    }

    /// Advance one full time step: the first call runs the predictor-corrector
    /// bootstrap, later calls the Strang cycle with Adams-Bashforth
    /// extrapolated advection.
    pub fn step(&mut self) -> Result<StepDiagnostics, SimError> {
        if self.inflow_ramp > 0.0 {
            // scale the inflow toward full strength at the end of this step
            let scale = ((self.t + self.controls.dt) / self.inflow_ramp).min(1.0);
            if (scale - self.inflow_scale).abs() > 1e-15 {
                self.inflow_scale = scale;
                self.sys.set_inflow_scale(scale, &mut self.ws);
            }
        }
        if self.have_history {
            self.strang_cycle()
        } else {
            self.bootstrap_first_step()
        }
    }

    /// Steps I-V of the split scheme for one time step.
    pub fn strang_cycle(&mut self) -> Result<StepDiagnostics, SimError> {
        let mut diag = StepDiagnostics::default();
        self.rigid_half_step(&mut diag)?;
        self.penalty_update()?;
        self.fluid_step(false, &mut diag)?;
        self.rigid_half_step(&mut diag)?;
        self.finish_cycle(&mut diag)?;
        Ok(diag)
    }

    /// First step: the advection history does not exist yet, so the solve is
    /// repeated once with the corrector average `(A(u^0) + A(u*)) / 2`.
    pub fn bootstrap_first_step(&mut self) -> Result<StepDiagnostics, SimError> {
        let mut diag = StepDiagnostics::default();
        self.rigid_half_step(&mut diag)?;
        self.penalty_update()?;
        self.fluid_step(true, &mut diag)?;
        self.rigid_half_step(&mut diag)?;
        self.finish_cycle(&mut diag)?;
        Ok(diag)
    }

    /// Step I / IV: advance the rigid body a half step with frozen traction
    /// and move the volumetric boundary rigidly (Step V is the final move).
    fn rigid_half_step(&mut self, diag: &mut StepDiagnostics) -> Result<(), SimError> {
        let Some(body) = &mut self.body else { return Ok(()) };
        let loads = body.loads(self.rho_f);
        let (next, iters) = half_step(
            &body.state,
            &loads,
            &body.mass_props,
            &body.params,
            0.5 * self.controls.dt,
        )?;
        body.state = next;
        rigid_map(
            next.q,
            body.reference_centroid,
            next.d_c,
            &body.boundary_ref,
            &mut body.xi,
        );
        diag.rotation_subiterations = diag.rotation_subiterations.max(iters);
        diag.loads = loads;
        Ok(())
    }

    /// Step II: the spring penalty force from the gap between the rigid
    /// boundary and the fluid-advected interface.
    fn penalty_update(&mut self) -> Result<(), SimError> {
        let Some(body) = &mut self.body else { return Ok(()) };
        let mut force = std::mem::take(&mut body.force);
        penalty_force(&body.xi, &body.interface.position, self.controls.kappa, &mut force)?;
        body.force = force;
        Ok(())
    }

    /// Step III: predict the midpoint interface, assemble corrections there,
    /// solve the Stokes system, advance the interface with the restricted
    /// midpoint velocity, and evaluate the new exterior traction.
    fn fluid_step(&mut self, bootstrap: bool, diag: &mut StepDiagnostics) -> Result<(), SimError> {
        // take the body out so the fluid solve can borrow self mutably
        let mut body = self.body.take();
        let result = self.fluid_step_with(body.as_mut(), bootstrap, diag);
        self.body = body;
        result
    }

    fn fluid_step_with(
        &mut self,
        body: Option<&mut CoupledBody>,
        bootstrap: bool,
        diag: &mut StepDiagnostics,
    ) -> Result<(), SimError> {
        let dt = self.controls.dt;
        apply_bc_velocity(&mut self.vel, &self.sys.bc, &self.grid, false);
        apply_bc_pressure(&mut self.p, &self.sys.bc, &self.grid);

        // midpoint interface prediction and corrections
        let mut have_corrections = false;
        if let Some(body) = body {
            body.interface.geometry_update()?;
            let jumps_n = jump_decompose(&body.force, &body.interface, &body.mass_matrix, self.mu)?;
            let cs_n = locate_intersections(&body.interface, &self.grid)?;
            let u_nodal = restrict(
                &self.vel,
                &body.interface,
                &jumps_n,
                &cs_n,
                &self.grid,
                &body.mass_matrix,
            )?;
            self.chi_save.clear();
            self.chi_save.extend_from_slice(&body.interface.position);
            for (pos, u) in body.interface.position.iter_mut().zip(u_nodal.iter()) {
                pos[0] += 0.25 * dt * u[0];
                pos[1] += 0.25 * dt * u[1];
            }
            body.interface.geometry_update()?;

            let sp = spread(&body.force, &body.interface, &body.mass_matrix, self.mu, &self.grid)?;
            diag.resolution_warnings += sp.cs.warnings;
            self.grad_corr = sp.grad_corr;
            self.lap_corr = sp.lap_corr;
            have_corrections = true;

            // solve, then advance chi with the restricted midpoint velocity
            self.u_old = self.vel.clone();
            self.solve_momentum(bootstrap, have_corrections, diag)?;
            self.average_mid();
            let u_half = restrict(
                &self.u_mid,
                &body.interface,
                &sp.jumps,
                &sp.cs,
                &self.grid,
                &body.mass_matrix,
            )?;
            for (l, pos) in body.interface.position.iter_mut().enumerate() {
                pos[0] = self.chi_save[l][0] + dt * u_half[l][0];
                pos[1] = self.chi_save[l][1] + dt * u_half[l][1];
            }
            body.interface.geometry_update()?;
            for pos in &body.interface.position {
                if !self.grid.contains_with_margin(pos[0], pos[1], self.grid.h()) {
                    return Err(SimError::invariant(format!(
                        "interface node ({}, {}) left the domain interior margin at t = {}",
                        pos[0], pos[1], self.t
                    )));
                }
            }

            // exterior traction on the updated interface
            let jumps_new = jump_decompose(&body.force, &body.interface, &body.mass_matrix, self.mu)?;
            let cs_new = locate_intersections(&body.interface, &self.grid)?;
            let pts = surface_quadrature(&body.interface);
            let p_plus = exterior_pressure(&self.p, &body.interface, &jumps_new, &self.grid, &pts)?;
            let shear = exterior_shear(&self.vel, &body.interface, &jumps_new, &cs_new, &self.grid, &pts)?;
            let u_surf = restrict(
                &self.vel,
                &body.interface,
                &jumps_new,
                &cs_new,
                &self.grid,
                &body.mass_matrix,
            )?;
            body.traction = exterior_traction(
                &p_plus,
                &shear,
                &u_surf,
                &body.interface,
                &body.mass_matrix,
                self.mu,
                &pts,
            )?;
        } else {
            self.u_old = self.vel.clone();
            self.solve_momentum(bootstrap, have_corrections, diag)?;
        }

        // divergence diagnostic
        divergence_into(&self.vel, &self.grid, &mut self.ws.scratch.div);
        diag.div_linf = self.ws.scratch.div.values.linf_interior();
        Ok(())
    }

    /// The Crank-Nicolson Stokes solve, with the predictor-corrector pass on
    /// the first step.
    fn solve_momentum(&mut self, bootstrap: bool, corrections: bool, diag: &mut StepDiagnostics) -> Result<(), SimError> {
        advect_into(&self.vel, &self.grid, &mut self.adv_cur);
        let (gc, lc) = if corrections {
            (Some(&self.grad_corr), Some(&self.lap_corr))
        } else {
            (None, None)
        };
        if bootstrap {
            // predictor with A = A(u^n)
            self.sys
                .assemble_rhs(&self.controls, &mut self.ws, &self.u_old, &self.adv_cur, gc, lc);
            let stats = self.sys.solve(&self.controls, &mut self.ws, &mut self.vel, &mut self.p)?;
            diag.fgmres_iterations += stats.iterations;
            // corrector with A = (A(u^n) + A(u*)) / 2
            advect_into(&self.vel, &self.grid, &mut self.adv_rhs);
            mix_into(&mut self.adv_rhs, &self.adv_cur, 0.5, 0.5);
            self.sys
                .assemble_rhs(&self.controls, &mut self.ws, &self.u_old, &self.adv_rhs, gc, lc);
            let stats = self.sys.solve(&self.controls, &mut self.ws, &mut self.vel, &mut self.p)?;
            diag.fgmres_iterations += stats.iterations;
            diag.fgmres_residual = stats.residual;
            self.adv_prev = self.adv_cur.clone();
            self.have_history = true;
        } else {
            // A^{n+1/2} = 3/2 A^n - 1/2 A^{n-1}
            self.adv_rhs = self.adv_cur.clone();
            mix_into(&mut self.adv_rhs, &self.adv_prev, 1.5, -0.5);
            self.sys
                .assemble_rhs(&self.controls, &mut self.ws, &self.u_old, &self.adv_rhs, gc, lc);
            let stats = self.sys.solve(&self.controls, &mut self.ws, &mut self.vel, &mut self.p)?;
            diag.fgmres_iterations += stats.iterations;
            diag.fgmres_residual = stats.residual;
            std::mem::swap(&mut self.adv_prev, &mut self.adv_cur);
        }
        Ok(())
    }

    fn average_mid(&mut self) {
        // u_mid = (u^{n+1} + u^n)/2 including ghosts (the ghost map is affine,
        // so the average satisfies the midpoint boundary data)
        self.u_mid = self.vel.clone();
        mix_into(&mut self.u_mid, &self.u_old, 0.5, 0.5);
    }

    /// Step V bookkeeping: final rigid placement already happened in the
    /// second half-step; enforce the tether assertion and advance the clock.
    fn finish_cycle(&mut self, diag: &mut StepDiagnostics) -> Result<(), SimError> {
        if let Some(body) = &self.body {
            let gap = body.interface.max_distance_to(&body.xi);
            diag.tether_linf = gap;
            let bound = 0.1 * self.grid.h();
            // with the tether disabled the two representations legitimately
            // separate (decoupled limit)
            if self.controls.kappa > 0.0 && gap >= bound {
                return Err(SimError::invariant(format!(
                    "tether gap {gap:.3e} reached 0.1 h = {bound:.3e} at t = {:.6} (step {}): \
                     increase kappa or reduce the time step",
                    self.t, self.step_index
                )));
            }
        }
        self.t += self.controls.dt;
        self.step_index += 1;
        diag.t = self.t;
        Ok(())
    }

    /// Max-norm divergence of the current velocity (recomputed).
    pub fn divergence_linf(&mut self) -> f64 {
        divergence_into(&self.vel, &self.grid, &mut self.ws.scratch.div);
        self.ws.scratch.div.values.linf_interior()
    }

    /// Kinetic energy `0.5 rho h^2 sum(u^2 + v^2)` over interior faces.
    pub fn kinetic_energy(&self) -> f64 {
        let h2 = self.grid.h() * self.grid.h();
        0.5 * self.rho_f * h2 * (self.vel.u.sumsq_interior() + self.vel.v.sumsq_interior())
    }

    /// Interpolated cell-centered velocity magnitude bound (for CFL checks).
    pub fn max_speed(&self) -> f64 {
        self.vel.linf()
    }

    /// Fluid-only convenience: one fluid step without any body coupling.
    pub fn stokes_step(&mut self) -> Result<StepDiagnostics, SimError> {
        if self.body.is_some() {
            return Err(SimError::config("stokes_step is for fluid-only simulations"));
        }
        self.step()
    }

    /// One IIM fluid step with a prescribed interface force (no rigid-body
    /// dynamics, no penalty update). The interface still advects with the
    /// restricted midpoint velocity.
    pub fn stokes_step_with_force(&mut self, force: &[[f64; 2]]) -> Result<StepDiagnostics, SimError> {
        let mut diag = StepDiagnostics::default();
        {
            let body = self
                .body
                .as_mut()
                .ok_or_else(|| SimError::config("stokes_step_with_force needs a coupled body"))?;
            if force.len() != body.force.len() {
                return Err(SimError::mesh("force length does not match interface"));
            }
            body.force.copy_from_slice(force);
        }
        let bootstrap = !self.have_history;
        self.fluid_step(bootstrap, &mut diag)?;
        self.t += self.controls.dt;
        self.step_index += 1;
        diag.t = self.t;
        Ok(diag)
    }
}

fn mix_into(dst: &mut StaggeredField, other: &StaggeredField, a: f64, b: f64) {
    for (d, o) in dst.u.data_mut().iter_mut().zip(other.u.data().iter()) {
        *d = a * *d + b * *o;
    }
    for (d, o) in dst.v.data_mut().iter_mut().zip(other.v.data().iter()) {
        *d = a * *d + b * *o;
    }
}

// GHOST is used by the stokes submodule through this path.
#[allow(unused_imports)]
use GHOST as _GHOST;
