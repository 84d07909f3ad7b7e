//! Built-in benchmark scenarios, each in two profiles: `desk` runs on a
//! workstation-scale uniform grid with a shortened horizon, `paper` carries
//! the full-resolution parameters of the corresponding published cases
//! (long-running; not part of the test tiers).

use std::f64::consts::PI;

use super::config::{BodyConfig, ScenarioConfig, Shape};
use crate::grid::{BoundarySpec, SideBc};
use crate::rbd::{DofMask, SpringDamper, TorsionSpringDamper};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Desk,
    Paper,
}

impl Profile {
    pub fn parse(s: &str) -> Option<Profile> {
        match s {
            "desk" => Some(Profile::Desk),
            "paper" => Some(Profile::Paper),
            _ => None,
        }
    }
}

pub const PRESET_NAMES: &[&str] = &[
    "viv1dof",
    "viv2dof",
    "viv2dof-light",
    "viv2dof-m03",
    "galloping-damped",
    "galloping-undamped",
    "fluttering-plate",
    "tumbling-plate",
];

/// Elastically mounted cylinder in a uniform stream: shared setup.
fn viv_base(profile: Profile) -> ScenarioConfig {
    let (nx, ny, dt, kappa, tol) = match profile {
        Profile::Desk => (640, 512, 3.5e-3, 40.0, 1e-6),
        // six refinement levels of the locally refined grid, uniform here
        Profile::Paper => (2560, 2048, 2.9296875e-3, 145.6, 1e-8),
    };
    ScenarioConfig {
        name: String::new(),
        x0: -30.0,
        y0: -30.0,
        lx: 75.0,
        ly: 60.0,
        nx,
        ny,
        rho_f: 1.0,
        mu: 0.0,
        body: None,
        kappa,
        dt,
        t_final: 0.0,
        tol,
        max_iters: 200,
        restart: 20,
        helmholtz_iters: 30,
        poisson_cycles: 2,
        bc: BoundarySpec {
            left: SideBc::Inflow { u: 1.0, v: 0.0 },
            right: SideBc::Outflow,
            bottom: SideBc::Slip,
            top: SideBc::Slip,
        },
        inflow_ramp: if profile == Profile::Desk { 2.0 } else { 0.0 },
        csv_every: 5,
        snapshot_every: 0,
    }
}

fn viv_body(mass_ratio: f64, u_star: f64, zeta: f64, dof: DofMask, seed_vy: f64) -> BodyConfig {
    let diameter = 1.0;
    let rho_s = mass_ratio; // rho_f = 1
    let structural_mass = rho_s * PI * diameter * diameter / 4.0;
    let f_n = 1.0 / (u_star * diameter); // U_inf = 1
    let stiffness = structural_mass * (2.0 * PI * f_n).powi(2);
    let damping = 2.0 * zeta * (stiffness * structural_mass).sqrt();
    BodyConfig {
        shape: Shape::Circle { diameter },
        center: [0.0, 0.0],
        theta0: 0.0,
        rho_s,
        mesh_factor: 2.0,
        dof,
        translational: Some(SpringDamper {
            mass: structural_mass,
            damping,
            stiffness,
        }),
        torsional: None,
        gravity: false,
        stops: None,
        initial_velocity: [0.0, seed_vy],
        initial_omega: 0.0,
    }
}

fn viv1dof(profile: Profile) -> ScenarioConfig {
    let mut cfg = viv_base(profile);
    cfg.name = "viv1dof".into();
    cfg.mu = 1.0 / 150.0; // Re = 150
    let seed = if profile == Profile::Desk { 0.01 } else { 0.0 };
    cfg.body = Some(viv_body(
        8.0 / PI,
        4.0,
        0.0,
        DofMask {
            x: false,
            y: true,
            theta: false,
        },
        seed,
    ));
    cfg.t_final = match profile {
        Profile::Desk => 60.0,
        Profile::Paper => 300.0,
    };
    cfg
}

fn viv2dof(profile: Profile) -> ScenarioConfig {
    let mut cfg = viv_base(profile);
    cfg.name = "viv2dof".into();
    cfg.mu = 1.0 / 200.0; // Re = 200
    if profile == Profile::Paper {
        // seventh refinement level and the fixed small step of the
        // tether-convergence study
        cfg.nx = 5120;
        cfg.ny = 4096;
        cfg.dt = 1.0e-3;
        let h = cfg.ly / cfg.ny as f64;
        cfg.kappa = 0.125 / (h * h);
    }
    let seed = if profile == Profile::Desk { 0.01 } else { 0.0 };
    cfg.body = Some(viv_body(4.0 / PI, 5.0, 0.01, DofMask::all_translations(), seed));
    cfg.t_final = match profile {
        Profile::Desk => 70.0,
        Profile::Paper => 75.0,
    };
    cfg
}

fn viv2dof_light(profile: Profile) -> ScenarioConfig {
    let mut cfg = viv2dof(profile);
    cfg.name = "viv2dof-light".into();
    cfg.body = Some(viv_body(
        0.4 / PI,
        5.0,
        0.01,
        DofMask::all_translations(),
        if profile == Profile::Desk { 0.01 } else { 0.0 },
    ));
    if profile == Profile::Desk {
        cfg.t_final = 40.0;
        cfg.kappa = 30.0;
        cfg.dt = 3.0e-3;
    }
    cfg
}

fn viv2dof_m03(profile: Profile) -> ScenarioConfig {
    let mut cfg = viv2dof(profile);
    cfg.name = "viv2dof-m03".into();
    cfg.body = Some(viv_body(
        0.3,
        5.0,
        0.01,
        DofMask::all_translations(),
        if profile == Profile::Desk { 0.01 } else { 0.0 },
    ));
    if profile == Profile::Desk {
        cfg.t_final = 80.0;
        cfg.kappa = 30.0;
        cfg.dt = 3.0e-3;
    }
    cfg
}

/// Rectangle with one torsional degree of freedom in a uniform stream.
fn galloping(profile: Profile, damped: bool) -> ScenarioConfig {
    let (nx, ny, dt, kappa, tol) = match profile {
        Profile::Desk => (512, 256, 5.0e-3, 24.0, 1e-6),
        Profile::Paper => (2048, 1024, 1.25e-3, 400.0, 1e-8),
    };
    let height = 1.0;
    let inertia = 400.0; // I* rho_s H^4 with rho_s = 1
    let f_n = 1.0 / 40.0; // U* = 40, U_inf = 1
    let stiffness = inertia * (2.0 * PI * f_n).powi(2);
    let zeta = if damped { 0.25 } else { 0.0 };
    let damping = 2.0 * zeta * (stiffness * inertia).sqrt();
    ScenarioConfig {
        name: if damped {
            "galloping-damped".into()
        } else {
            "galloping-undamped".into()
        },
        x0: -32.0,
        y0: -32.0,
        lx: 128.0,
        ly: 64.0,
        nx,
        ny,
        rho_f: 1.0,
        mu: 1.0 / 250.0, // Re = 250 on the thickness
        body: Some(BodyConfig {
            shape: Shape::Rectangle {
                length: 4.0 * height,
                height,
                corner_radius: 0.0,
            },
            center: [0.0, 0.0],
            theta0: if damped { 1.0f64.to_radians() } else { (-5.0f64).to_radians() },
            rho_s: 1.0,
            mesh_factor: 2.0,
            dof: DofMask {
                x: false,
                y: false,
                theta: true,
            },
            translational: None,
            torsional: Some(TorsionSpringDamper {
                inertia,
                damping,
                stiffness,
            }),
            gravity: false,
            stops: None,
            initial_velocity: [0.0, 0.0],
            initial_omega: 0.0,
        }),
        kappa,
        dt,
        t_final: match profile {
            Profile::Desk => 320.0,
            Profile::Paper => 400.0,
        },
        tol,
        max_iters: 200,
        restart: 20,
        helmholtz_iters: 30,
        poisson_cycles: 2,
        bc: BoundarySpec {
            left: SideBc::Inflow { u: 1.0, v: 0.0 },
            right: SideBc::Outflow,
            bottom: SideBc::Slip,
            top: SideBc::Slip,
        },
        inflow_ramp: if profile == Profile::Desk { 2.0 } else { 0.0 },
        csv_every: 10,
        snapshot_every: 0,
    }
}

/// Freely falling plate; `tumbling` selects the aspect-ratio-8 case.
fn falling_plate(profile: Profile, tumbling: bool) -> ScenarioConfig {
    let height = 8.1e-2;
    let (length, theta0_deg, center, name) = if tumbling {
        (8.0 * height, -45.0, [-20.0, 0.0], "tumbling-plate")
    } else {
        (14.0 * height, 60.0, [5.0, 0.0], "fluttering-plate")
    };
    // desk profile: a trajectory-sized window replaces the 80 cm tank (the
    // uniform grid cannot afford the full adaptive-solver domain), and the
    // body starts near its settled motion to shorten the transient
    let (x0, y0, lx, ly, nx, ny, dt, kappa, t_final, seed) = match (profile, tumbling) {
        (Profile::Desk, true) => (
            -22.5,
            -19.1,
            26.0,
            22.1,
            960usize,
            816usize,
            5.0e-5,
            1.1e5,
            1.3,
            [10.0, -8.0, 12.0],
        ),
        (Profile::Desk, false) => (
            -17.0,
            -30.02,
            26.0,
            33.02,
            1000,
            1270,
            5.0e-5,
            1.3e5,
            3.0,
            [0.0, 0.0, 0.0],
        ),
        (Profile::Paper, true) => (
            -40.0,
            -56.0,
            80.0,
            80.0,
            16384,
            16384,
            1.0e-5,
            5.5e5,
            2.5,
            [0.0, 0.0, 0.0],
        ),
        (Profile::Paper, false) => (
            -40.0,
            -56.0,
            80.0,
            80.0,
            16384,
            16384,
            1.0e-5,
            7.45e5,
            3.0,
            [0.0, 0.0, 0.0],
        ),
    };
    ScenarioConfig {
        name: name.into(),
        x0,
        y0,
        lx,
        ly,
        nx,
        ny,
        rho_f: 0.997,
        mu: 8.87e-3,
        body: Some(BodyConfig {
            shape: Shape::Rectangle {
                length,
                height,
                corner_radius: 0.0,
            },
            center,
            theta0: theta0_deg * PI / 180.0,
            rho_s: 2.7,
            mesh_factor: if tumbling { 2.0 } else { 1.8 },
            dof: DofMask::all(),
            translational: None,
            torsional: None,
            gravity: true,
            stops: None,
            initial_velocity: [seed[0], seed[1]],
            initial_omega: seed[2],
        }),
        kappa,
        dt,
        t_final,
        tol: 1e-6,
        max_iters: 200,
        restart: 20,
        helmholtz_iters: 30,
        poisson_cycles: 2,
        bc: BoundarySpec {
            left: SideBc::Slip,
            right: SideBc::Slip,
            bottom: SideBc::NoSlip,
            top: SideBc::Outflow,
        },
        inflow_ramp: 0.0,
        csv_every: 20,
        snapshot_every: 0,
    }
}

/// Look up a built-in scenario by name.
pub fn preset(name: &str, profile: Profile) -> Option<ScenarioConfig> {
    let cfg = match name {
        "viv1dof" => viv1dof(profile),
        "viv2dof" => viv2dof(profile),
        "viv2dof-light" => viv2dof_light(profile),
        "viv2dof-m03" => viv2dof_m03(profile),
        "galloping-damped" => galloping(profile, true),
        "galloping-undamped" => galloping(profile, false),
        "fluttering-plate" => falling_plate(profile, false),
        "tumbling-plate" => falling_plate(profile, true),
        _ => return None,
    };
    Some(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rbd::derived_groups;

    #[test]
    fn presets_rederive_their_dimensionless_groups() {
        // viv1dof: m* = 8/pi, Re = 150, U* = 4, zeta = 0
        let cfg = preset("viv1dof", Profile::Desk).unwrap();
        let b = cfg.body.as_ref().unwrap();
        let s = b.translational.as_ref().unwrap();
        let g = derived_groups(s.mass, s.damping, s.stiffness, b.rho_s, cfg.rho_f, 1.0, 1.0, cfg.mu).unwrap();
        assert!((g.mass_ratio - 8.0 / PI).abs() < 1e-12);
        assert!((g.reynolds - 150.0).abs() < 1e-9);
        assert!((g.reduced_velocity - 4.0).abs() < 1e-12);
        assert!(g.damping_ratio.abs() < 1e-15);

        // viv2dof: m* = 4/pi, Re = 200, U* = 5, zeta = 0.01
        let cfg = preset("viv2dof", Profile::Desk).unwrap();
        let b = cfg.body.as_ref().unwrap();
        let s = b.translational.as_ref().unwrap();
        let g = derived_groups(s.mass, s.damping, s.stiffness, b.rho_s, cfg.rho_f, 1.0, 1.0, cfg.mu).unwrap();
        assert!((g.mass_ratio - 4.0 / PI).abs() < 1e-12);
        assert!((g.reynolds - 200.0).abs() < 1e-9);
        assert!((g.reduced_velocity - 5.0).abs() < 1e-12);
        assert!((g.damping_ratio - 0.01).abs() < 1e-12);

        // m* = 0.3 low-mass case
        let cfg = preset("viv2dof-m03", Profile::Desk).unwrap();
        let b = cfg.body.as_ref().unwrap();
        assert!((b.rho_s / cfg.rho_f - 0.3).abs() < 1e-12);

        // galloping: I* = 400, U* = 40, zeta_theta = 0.25, Re = 250 on H = 1
        let cfg = preset("galloping-damped", Profile::Desk).unwrap();
        let b = cfg.body.as_ref().unwrap();
        let t = b.torsional.as_ref().unwrap();
        let i_star = t.inertia / (b.rho_s * 1.0f64.powi(4));
        assert!((i_star - 400.0).abs() < 1e-9);
        let f_n = (t.stiffness / t.inertia).sqrt() / (2.0 * PI);
        assert!((1.0 / (f_n * 1.0) - 40.0).abs() < 1e-9);
        let zeta = t.damping / (2.0 * (t.stiffness * t.inertia).sqrt());
        assert!((zeta - 0.25).abs() < 1e-12);
        let re = cfg.rho_f * 1.0 * 1.0 / cfg.mu;
        assert!((re - 250.0).abs() < 1e-9);

        // tumbling plate: Re = rho_f V L / mu with the experimental scales
        let cfg = preset("tumbling-plate", Profile::Desk).unwrap();
        let b = cfg.body.as_ref().unwrap();
        assert!((b.rho_s - 2.7).abs() < 1e-12);
        match b.shape {
            Shape::Rectangle { length, height, .. } => {
                assert!((length / height - 8.0).abs() < 1e-12);
            }
            _ => panic!("tumbling plate must be a rectangle"),
        }
    }

    #[test]
    fn desk_presets_validate() {
        for name in PRESET_NAMES {
            let cfg = preset(name, Profile::Desk).unwrap();
            cfg.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn unknown_preset_is_none() {
        assert!(preset("nope", Profile::Desk).is_none());
    }
}
