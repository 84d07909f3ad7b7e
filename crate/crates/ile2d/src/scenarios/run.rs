//! Build a simulation from a scenario configuration and drive it to the
//! final time, streaming the time series and optional field snapshots.

use std::io::Write;
use std::path::{Path, PathBuf};

use super::config::{BodyConfig, ScenarioConfig, Shape};
use super::outputs::{csv_row, write_vtk_fields, write_vtk_interface, TimeSeriesRecord, CSV_HEADER};
use crate::error::SimError;
use crate::fsi::{CoupledBody, FsiSimulation, SolverControls, StepDiagnostics};
use crate::lagrange::{circle, read_polygon_mesh, rectangle, VolumetricMesh};
use crate::rbd::{ConstraintParams, RigidBodyState};

pub fn build_body_mesh(body: &BodyConfig, h: f64) -> Result<VolumetricMesh, SimError> {
    let edge = body.mesh_factor * h;
    match &body.shape {
        Shape::Circle { diameter } => circle(body.center, 0.5 * diameter, edge, body.rho_s),
        Shape::Rectangle {
            length,
            height,
            corner_radius,
        } => rectangle(body.center, *length, *height, edge, *corner_radius, body.rho_s),
        Shape::Polygon { path } => read_polygon_mesh(path, body.rho_s),
    }
}

pub fn build_simulation(cfg: &ScenarioConfig) -> Result<FsiSimulation, SimError> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let mut controls = SolverControls::new(cfg.kappa, cfg.dt);
    controls.tol = cfg.tol;
    controls.max_iters = cfg.max_iters;
    controls.restart = cfg.restart;
    controls.helmholtz_iters = cfg.helmholtz_iters;
    controls.poisson_cycles = cfg.poisson_cycles;

    let body = match &cfg.body {
        None => None,
        Some(bc) => {
            let mesh = build_body_mesh(bc, grid.h())?;
            let mut state = RigidBodyState::with_pose(bc.theta0);
            state.v_c = bc.initial_velocity;
            state.omega = bc.initial_omega;
            let params = ConstraintParams {
                dof: bc.dof,
                translational: bc.translational,
                torsional: bc.torsional,
                gravity: if bc.gravity { Some([0.0, -981.0]) } else { None },
                stops: bc.stops,
            };
            Some(CoupledBody::new(mesh, state, params)?)
        }
    };
    let mut sim = FsiSimulation::new(grid, cfg.bc, cfg.rho_f, cfg.mu, controls, body)?;
    sim.inflow_ramp = cfg.inflow_ramp;
    Ok(sim)
}

fn record_of(sim: &FsiSimulation, diag: &StepDiagnostics) -> TimeSeriesRecord {
    let mut r = TimeSeriesRecord {
        t: sim.t,
        tether_linf: diag.tether_linf,
        fgmres_iters: diag.fgmres_iterations,
        fx: diag.loads.force[0],
        fy: diag.loads.force[1],
        tz: diag.loads.torque,
        ..Default::default()
    };
    if let Some(body) = &sim.body {
        r.dcx = body.state.d_c[0];
        r.dcy = body.state.d_c[1];
        r.vcx = body.state.v_c[0];
        r.vcy = body.state.v_c[1];
        r.theta = body.state.theta;
        r.omega = body.state.omega;
    }
    r
}

pub struct RunOutput {
    pub records: Vec<TimeSeriesRecord>,
    /// Why the run stopped early, if it did.
    pub aborted: Option<String>,
    pub steps_completed: u64,
    pub max_tether: f64,
    pub max_divergence: f64,
    pub resolution_warnings: usize,
}

/// Output directory override: explicit argument, else `ILE2D_OUTPUT_DIR`.
pub fn resolve_out_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    match explicit {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os("ILE2D_OUTPUT_DIR").map(PathBuf::from),
    }
}

/// Execute the scenario to its final time. With an output directory the CSV
/// is streamed append-only; snapshots are written on the configured cadence.
/// Invariant violations abort the run with a last-good snapshot and are
/// reported in the output rather than silently swallowed.
pub fn run(cfg: &ScenarioConfig, out_dir: Option<&Path>) -> Result<RunOutput, SimError> {
    let mut sim = build_simulation(cfg)?;
    let out_dir = resolve_out_dir(out_dir);
    if let Some(dir) = &out_dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut csv = match &out_dir {
        Some(dir) => {
            let file = std::fs::File::create(dir.join(format!("{}.csv", cfg.name)))?;
            let mut w = std::io::BufWriter::new(file);
            writeln!(w, "{CSV_HEADER}")?;
            Some(w)
        }
        None => None,
    };

    let steps = (cfg.t_final / cfg.dt).round() as u64;
    let mut out = RunOutput {
        records: Vec::new(),
        aborted: None,
        steps_completed: 0,
        max_tether: 0.0,
        max_divergence: 0.0,
        resolution_warnings: 0,
    };

    for step in 0..steps {
        let diag = match sim.step() {
            Ok(d) => d,
            Err(e) => {
                // keep the last good state around for diagnosis
                if let Some(dir) = &out_dir {
                    let _ = write_vtk_fields(&dir.join(format!("{}_abort.vtk", cfg.name)), &sim);
                    if sim.body.is_some() {
                        let _ =
                            write_vtk_interface(&dir.join(format!("{}_abort_interface.vtk", cfg.name)), &sim);
                    }
                }
                out.aborted = Some(e.to_string());
                break;
            }
        };
        out.steps_completed = step + 1;
        out.max_tether = out.max_tether.max(diag.tether_linf);
        out.max_divergence = out.max_divergence.max(diag.div_linf);
        out.resolution_warnings += diag.resolution_warnings;

        if cfg.csv_every > 0 && (step + 1) % cfg.csv_every as u64 == 0 {
            let rec = record_of(&sim, &diag);
            if let Some(w) = &mut csv {
                writeln!(w, "{}", csv_row(&rec))?;
            }
            out.records.push(rec);
        }
        if cfg.snapshot_every > 0 && (step + 1) % cfg.snapshot_every as u64 == 0 {
            if let Some(dir) = &out_dir {
                write_vtk_fields(&dir.join(format!("{}_{:08}.vtk", cfg.name, step + 1)), &sim)?;
                if sim.body.is_some() {
                    write_vtk_interface(
                        &dir.join(format!("{}_{:08}_interface.vtk", cfg.name, step + 1)),
                        &sim,
                    )?;
                }
            }
        }
        // blow-up guard so unstable parameter probes terminate quickly
        if !sim.max_speed().is_finite() || sim.max_speed() > 100.0 * cfg.u_ref() {
            out.aborted = Some(format!(
                "velocity blow-up: max speed {:.3e} at t = {:.6}",
                sim.max_speed(),
                sim.t
            ));
            break;
        }
    }
    if let Some(w) = &mut csv {
        w.flush()?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{BoundarySpec, SideBc};

    fn quiescent_cfg() -> ScenarioConfig {
        ScenarioConfig {
            name: "quiescent".into(),
            x0: 0.0,
            y0: 0.0,
            lx: 1.0,
            ly: 1.0,
            nx: 16,
            ny: 16,
            rho_f: 1.0,
            mu: 0.01,
            body: None,
            kappa: 0.0,
            dt: 0.01,
            t_final: 0.05,
            tol: 1e-8,
            max_iters: 50,
            restart: 20,
            helmholtz_iters: 20,
            poisson_cycles: 2,
            bc: BoundarySpec::uniform(SideBc::Slip),
            inflow_ramp: 0.0,
            csv_every: 1,
            snapshot_every: 0,
        }
    }

    #[test]
    fn quiescent_preset_yields_all_zero_series() {
        let out = run(&quiescent_cfg(), None).unwrap();
        assert!(out.aborted.is_none());
        assert_eq!(out.records.len(), 5);
        for r in &out.records {
            assert_eq!(r.fx, 0.0);
            assert_eq!(r.fy, 0.0);
            assert_eq!(r.dcx, 0.0);
        }
    }

    #[test]
    fn csv_and_snapshot_files_are_written() {
        let dir = std::env::temp_dir().join("ile2d_run_outputs");
        let _ = std::fs::remove_dir_all(&dir);
        let mut cfg = quiescent_cfg();
        cfg.snapshot_every = 5;
        let out = run(&cfg, Some(&dir)).unwrap();
        assert!(out.aborted.is_none());
        let csv = std::fs::read_to_string(dir.join("quiescent.csv")).unwrap();
        let parsed = crate::scenarios::parse_csv(&csv).unwrap();
        assert_eq!(parsed.len(), 5);
        let vtk = std::fs::read_to_string(dir.join("quiescent_00000005.vtk")).unwrap();
        assert!(vtk.contains("DATASET STRUCTURED_POINTS"));
        assert!(vtk.contains("SCALARS pressure double 1"));
        // one snapshot with nx * ny cells
        assert!(vtk.contains(&format!("CELL_DATA {}", 16 * 16)));
    }
}
