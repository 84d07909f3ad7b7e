//! Planar rigid-body dynamics: net load evaluation over the interface, the
//! trapezoidal half-step integrator with rotation subiterations, and the
//! constrained spring-mass-damper variants used by the benchmark problems.

use crate::error::SimError;
use crate::lagrange::GAUSS4;

pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

/// Max-norm departure of `Q^T Q` from the identity.
pub fn orthogonality_error(q: &Mat2) -> f64 {
    let qtq = [
        [
            q[0][0] * q[0][0] + q[1][0] * q[1][0],
            q[0][0] * q[0][1] + q[1][0] * q[1][1],
        ],
        [
            q[0][1] * q[0][0] + q[1][1] * q[1][0],
            q[0][1] * q[0][1] + q[1][1] * q[1][1],
        ],
    ];
    let mut e = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            let target = if r == c { 1.0 } else { 0.0 };
            e = e.max((qtq[r][c] - target).abs());
        }
    }
    e
}

/// Closest planar rotation to a near-rotation 2x2 matrix.
fn reorthonormalize(q: &Mat2) -> Mat2 {
    let angle = (q[1][0] - q[0][1]).atan2(q[0][0] + q[1][1]);
    rotation(angle)
}

/// State of the single rigid body: center-of-mass displacement and velocity,
/// accumulated rotation angle, angular velocity, and the rotation matrix that
/// is integrated alongside them.
#[derive(Clone, Copy, Debug)]
pub struct RigidBodyState {
    pub d_c: [f64; 2],
    pub v_c: [f64; 2],
    pub theta: f64,
    pub omega: f64,
    pub q: Mat2,
}

impl RigidBodyState {
    pub fn at_rest() -> Self {
        RigidBodyState {
            d_c: [0.0, 0.0],
            v_c: [0.0, 0.0],
            theta: 0.0,
            omega: 0.0,
            q: IDENTITY,
        }
    }

    pub fn with_pose(theta: f64) -> Self {
        RigidBodyState {
            theta,
            q: rotation(theta),
            ..Self::at_rest()
        }
    }
}

/// Net hydrodynamic force and torque on the body.
#[derive(Clone, Copy, Debug, Default)]
pub struct Loads {
    pub force: [f64; 2],
    pub torque: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DofMask {
    pub x: bool,
    pub y: bool,
    pub theta: bool,
}

impl DofMask {
    pub fn all() -> Self {
        DofMask {
            x: true,
            y: true,
            theta: true,
        }
    }

    pub fn all_translations() -> Self {
        DofMask {
            x: true,
            y: true,
            theta: false,
        }
    }
}

/// Translational spring-mass-damper acting on a center-of-mass component.
#[derive(Clone, Copy, Debug)]
pub struct SpringDamper {
    pub mass: f64,
    pub damping: f64,
    pub stiffness: f64,
}

/// Torsional spring-mass-damper acting on the pitch angle.
#[derive(Clone, Copy, Debug)]
pub struct TorsionSpringDamper {
    pub inertia: f64,
    pub damping: f64,
    pub stiffness: f64,
}

/// One-sided stiff restoring springs that activate outside `[min, max]`.
#[derive(Clone, Copy, Debug)]
pub struct AngleStops {
    pub min: f64,
    pub max: f64,
    pub stiffness: f64,
    pub damping: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ConstraintParams {
    pub dof: DofMask,
    pub translational: Option<SpringDamper>,
    pub torsional: Option<TorsionSpringDamper>,
    /// Gravity vector; `None` disables the buoyant-gravity term entirely.
    pub gravity: Option<[f64; 2]>,
    pub stops: Option<AngleStops>,
}

impl ConstraintParams {
    pub fn free(gravity: Option<[f64; 2]>) -> Self {
        ConstraintParams {
            dof: DofMask::all(),
            translational: None,
            torsional: None,
            gravity,
            stops: None,
        }
    }
}

/// Mass properties consumed by the integrator.
#[derive(Clone, Copy, Debug)]
pub struct MassProperties {
    pub mass: f64,
    pub area: f64,
    pub inertia: f64,
    pub rho_s: f64,
}

/// Net load on the body: buoyant gravity plus the integral of the exterior
/// traction over the current interface, with the torque taken about the
/// body's current center of mass. The traction is a nodal field on the
/// interface mesh; integrals use the 7th-order Gauss rule per segment.
pub fn net_load(
    traction: &[[f64; 2]],
    positions: &[[f64; 2]],
    segments: &[[usize; 2]],
    center: [f64; 2],
    props: &MassProperties,
    rho_f: f64,
    gravity: Option<[f64; 2]>,
) -> Loads {
    let mut fx = 0.0;
    let mut fy = 0.0;
    let mut tz = 0.0;
    for seg in segments {
        let a = positions[seg[0]];
        let b = positions[seg[1]];
        let ta = traction[seg[0]];
        let tb = traction[seg[1]];
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        for (t, w) in GAUSS4 {
            let x = a[0] + t * (b[0] - a[0]);
            let y = a[1] + t * (b[1] - a[1]);
            let tr_x = (1.0 - t) * ta[0] + t * tb[0];
            let tr_y = (1.0 - t) * ta[1] + t * tb[1];
            fx += w * len * tr_x;
            fy += w * len * tr_y;
            tz += w * len * ((x - center[0]) * tr_y - (y - center[1]) * tr_x);
        }
    }
    if let Some(g) = gravity {
        let scale = (props.rho_s - rho_f) * props.area;
        fx += scale * g[0];
        fy += scale * g[1];
    }
    Loads {
        force: [fx, fy],
        torque: tz,
    }
}

/// Trapezoidal update of one translational component under an optional
/// spring-mass-damper, with the load frozen over the step.
fn advance_translation(d: f64, v: f64, f: f64, mass: f64, smd: Option<&SpringDamper>, dt: f64) -> (f64, f64) {
    match smd {
        Some(s) => {
            let a = s.mass / dt + 0.5 * s.damping + 0.25 * s.stiffness * dt;
            let b = s.mass / dt - 0.5 * s.damping - 0.25 * s.stiffness * dt;
            let v1 = (f - s.stiffness * d + b * v) / a;
            (d + 0.5 * dt * (v1 + v), v1)
        }
        None => {
            let v1 = v + dt * f / mass;
            (d + 0.5 * dt * (v1 + v), v1)
        }
    }
}

const SUBITER_EPS: f64 = 1e-8;
const SUBITER_MAX: usize = 50;

/// Advance the rigid body over `dt` (a half step in the Strang cycle) with
/// loads treated as constant in time. Masked degrees of freedom are left
/// bit-identical. Returns the updated state and the rotation subiteration
/// count.
pub fn half_step(
    state: &RigidBodyState,
    loads: &Loads,
    props: &MassProperties,
    params: &ConstraintParams,
    dt: f64,
) -> Result<(RigidBodyState, usize), SimError> {
    let mut next = *state;

    if let Some(s) = &params.translational {
        if (params.dof.x || params.dof.y) && s.mass <= 0.0 {
            return Err(SimError::body("zero structural mass on an active translational DOF"));
        }
    } else if (params.dof.x || params.dof.y) && props.mass <= 0.0 {
        return Err(SimError::body("body mass must be positive"));
    }

    if params.dof.x {
        let (d, v) = advance_translation(
            state.d_c[0],
            state.v_c[0],
            loads.force[0],
            props.mass,
            params.translational.as_ref(),
            dt,
        );
        next.d_c[0] = d;
        next.v_c[0] = v;
    }
    if params.dof.y {
        let (d, v) = advance_translation(
            state.d_c[1],
            state.v_c[1],
            loads.force[1],
            props.mass,
            params.translational.as_ref(),
            dt,
        );
        next.d_c[1] = d;
        next.v_c[1] = v;
    }

    let mut subiters = 0usize;
    if params.dof.theta {
        let mut torque = loads.torque;
        if let Some(stops) = &params.stops {
            if state.theta > stops.max {
                torque += -stops.stiffness * (state.theta - stops.max) - stops.damping * state.omega;
            } else if state.theta < stops.min {
                torque += -stops.stiffness * (state.theta - stops.min) - stops.damping * state.omega;
            }
        }
        match &params.torsional {
            Some(ts) => {
                if ts.inertia <= 0.0 {
                    return Err(SimError::body("zero torsional inertia on an active rotation DOF"));
                }
                // one rotational degree of freedom: integrate the angle itself
                let a = ts.inertia / dt + 0.5 * ts.damping + 0.25 * ts.stiffness * dt;
                let b = ts.inertia / dt - 0.5 * ts.damping - 0.25 * ts.stiffness * dt;
                let w1 = (torque - ts.stiffness * state.theta + b * state.omega) / a;
                next.theta = state.theta + 0.5 * dt * (w1 + state.omega);
                next.omega = w1;
                next.q = rotation(next.theta);
                subiters = 1;
            }
            None => {
                if props.inertia <= 0.0 {
                    return Err(SimError::body("body inertia must be positive"));
                }
                // scalar inertia: the conjugation Q J0 Q^T is the identity map,
                // kept in this form for the 3D extension
                let j_t = props.inertia;
                let w1 = state.omega + dt * torque / j_t;
                // midpoint fixed-point iteration for the rotation matrix
                let s = 0.25 * dt * (state.omega + w1);
                let skew = [[0.0, -s], [s, 0.0]];
                let q0 = state.q;
                let mut qk = q0;
                loop {
                    subiters += 1;
                    let sum = [
                        [qk[0][0] + q0[0][0], qk[0][1] + q0[0][1]],
                        [qk[1][0] + q0[1][0], qk[1][1] + q0[1][1]],
                    ];
                    let qn = [
                        [
                            q0[0][0] + skew[0][0] * sum[0][0] + skew[0][1] * sum[1][0],
                            q0[0][1] + skew[0][0] * sum[0][1] + skew[0][1] * sum[1][1],
                        ],
                        [
                            q0[1][0] + skew[1][0] * sum[0][0] + skew[1][1] * sum[1][0],
                            q0[1][1] + skew[1][0] * sum[0][1] + skew[1][1] * sum[1][1],
                        ],
                    ];
                    let mut diff = 0.0f64;
                    for r in 0..2 {
                        for c in 0..2 {
                            diff = diff.max((qn[r][c] - qk[r][c]).abs());
                        }
                    }
                    qk = qn;
                    if diff <= SUBITER_EPS {
                        break;
                    }
                    if subiters >= SUBITER_MAX {
                        return Err(SimError::body(format!(
                            "rotation subiterations exceeded {SUBITER_MAX}; time step too large"
                        )));
                    }
                }
                // drift is O(dt^3) per step; project back to the closest rotation
                let q1 = reorthonormalize(&qk);
                let incr = [
                    [
                        q1[0][0] * q0[0][0] + q1[0][1] * q0[0][1],
                        q1[0][0] * q0[1][0] + q1[0][1] * q0[1][1],
                    ],
                    [
                        q1[1][0] * q0[0][0] + q1[1][1] * q0[0][1],
                        q1[1][0] * q0[1][0] + q1[1][1] * q0[1][1],
                    ],
                ];
                let dtheta = (incr[1][0] - incr[0][1]).atan2(incr[0][0] + incr[1][1]);
                next.theta = state.theta + dtheta;
                next.omega = w1;
                next.q = q1;
            }
        }
    }

    Ok((next, subiters))
}

/// Effective accelerations of the constrained DOFs; the diagnostic form of
/// the mass-spring-damper balance.
pub fn constrained_rhs(
    state: &RigidBodyState,
    loads: &Loads,
    params: &ConstraintParams,
) -> Result<[f64; 3], SimError> {
    let mut acc = [0.0f64; 3];
    if params.dof.x || params.dof.y {
        let s = params
            .translational
            .as_ref()
            .ok_or_else(|| SimError::body("constrained_rhs needs translational parameters"))?;
        if s.mass <= 0.0 {
            return Err(SimError::body("zero structural mass on an active DOF"));
        }
        if params.dof.x {
            acc[0] = (loads.force[0] - s.damping * state.v_c[0] - s.stiffness * state.d_c[0]) / s.mass;
        }
        if params.dof.y {
            acc[1] = (loads.force[1] - s.damping * state.v_c[1] - s.stiffness * state.d_c[1]) / s.mass;
        }
    }
    if params.dof.theta {
        let ts = params
            .torsional
            .as_ref()
            .ok_or_else(|| SimError::body("constrained_rhs needs torsional parameters"))?;
        if ts.inertia <= 0.0 {
            return Err(SimError::body("zero torsional inertia on an active DOF"));
        }
        let mut torque = loads.torque;
        if let Some(stops) = &params.stops {
            if state.theta > stops.max {
                torque += -stops.stiffness * (state.theta - stops.max) - stops.damping * state.omega;
            } else if state.theta < stops.min {
                torque += -stops.stiffness * (state.theta - stops.min) - stops.damping * state.omega;
            }
        }
        acc[2] = (torque - ts.damping * state.omega - ts.stiffness * state.theta) / ts.inertia;
    }
    Ok(acc)
}

/// Dimensionless groups reported by the benchmark harness.
#[derive(Clone, Copy, Debug)]
pub struct DerivedGroups {
    pub mass_ratio: f64,
    pub reduced_velocity: f64,
    pub damping_ratio: f64,
    pub natural_frequency: f64,
    pub reynolds: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn derived_groups(
    structural_mass: f64,
    structural_damping: f64,
    structural_stiffness: f64,
    rho_s: f64,
    rho_f: f64,
    u_ref: f64,
    length_ref: f64,
    mu_f: f64,
) -> Result<DerivedGroups, SimError> {
    if structural_mass <= 0.0 || structural_stiffness <= 0.0 {
        return Err(SimError::body("stiffness and mass must be positive for derived groups"));
    }
    let f_n = (structural_stiffness / structural_mass).sqrt() / (2.0 * std::f64::consts::PI);
    Ok(DerivedGroups {
        mass_ratio: rho_s / rho_f,
        reduced_velocity: u_ref / (f_n * length_ref),
        damping_ratio: structural_damping / (2.0 * (structural_stiffness * structural_mass).sqrt()),
        natural_frequency: f_n,
        reynolds: rho_f * u_ref * length_ref / mu_f,
    })
}
