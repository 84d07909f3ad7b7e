//! Line-oriented scenario configuration: `key = value` records under
//! bracketed section headers. Unknown sections or keys are rejected with the
//! offending line number.

use std::path::{Path, PathBuf};

use crate::error::SimError;
use crate::grid::{BoundarySpec, SideBc};
use crate::rbd::{AngleStops, DofMask, SpringDamper, TorsionSpringDamper};

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Circle { diameter: f64 },
    Rectangle { length: f64, height: f64, corner_radius: f64 },
    Polygon { path: PathBuf },
}

#[derive(Clone, Debug)]
pub struct BodyConfig {
    pub shape: Shape,
    pub center: [f64; 2],
    /// Initial pitch angle in radians.
    pub theta0: f64,
    pub rho_s: f64,
    /// Lagrangian edge length over Eulerian spacing along the interface.
    pub mesh_factor: f64,
    pub dof: DofMask,
    pub translational: Option<SpringDamper>,
    pub torsional: Option<TorsionSpringDamper>,
    pub gravity: bool,
    pub stops: Option<AngleStops>,
    pub initial_velocity: [f64; 2],
    pub initial_omega: f64,
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub name: String,
    pub x0: f64,
    pub y0: f64,
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
    pub rho_f: f64,
    pub mu: f64,
    pub body: Option<BodyConfig>,
    pub kappa: f64,
    pub dt: f64,
    pub t_final: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub restart: usize,
    pub helmholtz_iters: usize,
    pub poisson_cycles: usize,
    pub bc: BoundarySpec,
    /// Inflow ramp time (seconds); zero starts impulsively.
    pub inflow_ramp: f64,
    pub csv_every: usize,
    pub snapshot_every: usize,
}

impl ScenarioConfig {
    pub fn grid(&self) -> Result<crate::grid::Grid2, SimError> {
        crate::grid::Grid2::new(self.x0, self.y0, self.lx, self.ly, self.nx, self.ny)
    }

    pub fn h(&self) -> f64 {
        self.lx / self.nx as f64
    }

    /// Reference inflow speed for sanity bounds (largest boundary speed, or
    /// one for enclosed domains).
    pub fn u_ref(&self) -> f64 {
        let side_speed = |s: &SideBc| match s {
            SideBc::Inflow { u, v } => (u * u + v * v).sqrt(),
            SideBc::InflowParabolic { peak } => peak.abs(),
            _ => 0.0,
        };
        [&self.bc.left, &self.bc.right, &self.bc.bottom, &self.bc.top]
            .into_iter()
            .map(side_speed)
            .fold(0.0f64, f64::max)
            .max(1.0)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.rho_f <= 0.0 || self.mu <= 0.0 {
            return Err(SimError::config("rho and mu must be positive"));
        }
        if self.dt <= 0.0 || self.t_final < 0.0 {
            return Err(SimError::config("dt must be positive and t_final nonnegative"));
        }
        let h = self.h();
        let cfl = self.dt * self.u_ref() / h;
        if cfl > 1.0 {
            return Err(SimError::config(format!(
                "dt U/h = {cfl:.3} exceeds 1; reduce dt or refine time stepping"
            )));
        }
        if let Some(body) = &self.body {
            let margin = 2.0 * h;
            let reach = match &body.shape {
                Shape::Circle { diameter } => 0.5 * diameter,
                Shape::Rectangle { length, height, .. } => 0.5 * (length * length + height * height).sqrt(),
                Shape::Polygon { .. } => 0.0,
            };
            let inside = body.center[0] - reach >= self.x0 + margin
                && body.center[0] + reach <= self.x0 + self.lx - margin
                && body.center[1] - reach >= self.y0 + margin
                && body.center[1] + reach <= self.y0 + self.ly - margin;
            if !inside {
                return Err(SimError::config(
                    "body must start at least two cells inside the domain",
                ));
            }
            if body.rho_s <= 0.0 {
                return Err(SimError::config("rho_s must be positive"));
            }
        }
        Ok(())
    }

    /// Canonical text form (parse-compatible).
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "\n[domain]");
        let _ = writeln!(s, "x0 = {}", self.x0);
        let _ = writeln!(s, "y0 = {}", self.y0);
        let _ = writeln!(s, "lx = {}", self.lx);
        let _ = writeln!(s, "ly = {}", self.ly);
        let _ = writeln!(s, "nx = {}", self.nx);
        let _ = writeln!(s, "ny = {}", self.ny);
        let _ = writeln!(s, "\n[fluid]");
        let _ = writeln!(s, "rho = {}", self.rho_f);
        let _ = writeln!(s, "mu = {}", self.mu);
        if let Some(b) = &self.body {
            let _ = writeln!(s, "\n[body]");
            match &b.shape {
                Shape::Circle { diameter } => {
                    let _ = writeln!(s, "shape = circle");
                    let _ = writeln!(s, "diameter = {diameter}");
                }
                Shape::Rectangle {
                    length,
                    height,
                    corner_radius,
                } => {
                    let _ = writeln!(s, "shape = rectangle");
                    let _ = writeln!(s, "length = {length}");
                    let _ = writeln!(s, "height = {height}");
                    if *corner_radius > 0.0 {
                        let _ = writeln!(s, "corner_radius = {corner_radius}");
                    }
                }
                Shape::Polygon { path } => {
                    let _ = writeln!(s, "shape = polygon");
                    let _ = writeln!(s, "mesh_file = {}", path.display());
                }
            }
            let _ = writeln!(s, "center = {} {}", b.center[0], b.center[1]);
            let _ = writeln!(s, "theta0_deg = {}", b.theta0.to_degrees());
            let _ = writeln!(s, "rho_s = {}", b.rho_s);
            let _ = writeln!(s, "mesh_factor = {}", b.mesh_factor);
            let mut dof = String::new();
            if b.dof.x {
                dof.push('x');
            }
            if b.dof.y {
                dof.push('y');
            }
            if b.dof.theta {
                dof.push('t');
            }
            if dof.is_empty() {
                dof.push_str("none");
            }
            let _ = writeln!(s, "dof = {dof}");
            if let Some(t) = &b.translational {
                let _ = writeln!(s, "spring_mass = {}", t.mass);
                let _ = writeln!(s, "spring_damping = {}", t.damping);
                let _ = writeln!(s, "spring_stiffness = {}", t.stiffness);
            }
            if let Some(t) = &b.torsional {
                let _ = writeln!(s, "torsion_inertia = {}", t.inertia);
                let _ = writeln!(s, "torsion_damping = {}", t.damping);
                let _ = writeln!(s, "torsion_stiffness = {}", t.stiffness);
            }
            if let Some(st) = &b.stops {
                let _ = writeln!(s, "stop_min_deg = {}", st.min.to_degrees());
                let _ = writeln!(s, "stop_max_deg = {}", st.max.to_degrees());
                let _ = writeln!(s, "stop_stiffness = {}", st.stiffness);
                let _ = writeln!(s, "stop_damping = {}", st.damping);
            }
            let _ = writeln!(s, "gravity = {}", if b.gravity { "on" } else { "off" });
            let _ = writeln!(s, "vx0 = {}", b.initial_velocity[0]);
            let _ = writeln!(s, "vy0 = {}", b.initial_velocity[1]);
            let _ = writeln!(s, "omega0 = {}", b.initial_omega);
        }
        let _ = writeln!(s, "\n[coupling]");
        let _ = writeln!(s, "kappa = {}", self.kappa);
        let _ = writeln!(s, "dt = {}", self.dt);
        let _ = writeln!(s, "t_final = {}", self.t_final);
        let _ = writeln!(s, "\n[solver]");
        let _ = writeln!(s, "tol = {}", self.tol);
        let _ = writeln!(s, "max_iters = {}", self.max_iters);
        let _ = writeln!(s, "restart = {}", self.restart);
        let _ = writeln!(s, "helmholtz_iters = {}", self.helmholtz_iters);
        let _ = writeln!(s, "poisson_cycles = {}", self.poisson_cycles);
        let _ = writeln!(s, "\n[boundary]");
        let side = |sb: &SideBc| match sb {
            SideBc::Inflow { u, v } => format!("inflow {u} {v}"),
            SideBc::InflowParabolic { peak } => format!("inflow-parabolic {peak}"),
            SideBc::Outflow => "outflow".to_string(),
            SideBc::Slip => "slip".to_string(),
            SideBc::NoSlip => "noslip".to_string(),
        };
        if self.inflow_ramp > 0.0 {
            let _ = writeln!(s, "ramp = {}", self.inflow_ramp);
        }
        let _ = writeln!(s, "left = {}", side(&self.bc.left));
        let _ = writeln!(s, "right = {}", side(&self.bc.right));
        let _ = writeln!(s, "bottom = {}", side(&self.bc.bottom));
        let _ = writeln!(s, "top = {}", side(&self.bc.top));
        let _ = writeln!(s, "\n[output]");
        let _ = writeln!(s, "csv_every = {}", self.csv_every);
        let _ = writeln!(s, "snapshot_every = {}", self.snapshot_every);
        s
    }
}

struct RawBody {
    shape: Option<Shape>,
    center: [f64; 2],
    theta0_deg: f64,
    rho_s: Option<f64>,
    mesh_factor: f64,
    dof: DofMask,
    spring: [Option<f64>; 3],
    torsion: [Option<f64>; 3],
    stops: [Option<f64>; 4],
    gravity: bool,
    vx0: f64,
    vy0: f64,
    omega0: f64,
}

/// Parse a configuration file. Every key must be known and every required
/// key present; errors carry the line number.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, SimError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::config(format!("{}: {e}", path.display())))?;
    parse_config(&text, &path.display().to_string())
}

pub fn parse_config(text: &str, origin: &str) -> Result<ScenarioConfig, SimError> {
    let mut name = String::new();
    let mut section = String::new();

    let mut domain: [Option<f64>; 4] = [None; 4];
    let mut cells: [Option<usize>; 2] = [None; 2];
    let mut fluid: [Option<f64>; 2] = [None; 2];
    let mut body: Option<RawBody> = None;
    let mut kappa: Option<f64> = None;
    let mut dt: Option<f64> = None;
    let mut t_final: Option<f64> = None;
    let mut tol = 1e-8;
    let mut max_iters = 100usize;
    let mut restart = 30usize;
    let mut helmholtz_iters = 30usize;
    let mut poisson_cycles = 2usize;
    let mut sides: [Option<SideBc>; 4] = [None, None, None, None];
    let mut inflow_ramp = 0.0f64;
    let mut csv_every = 1usize;
    let mut snapshot_every = 0usize;

    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| SimError::config(format!("{origin}:{}: {msg}", ln + 1));
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(err("malformed section header".into()));
            }
            section = line[1..line.len() - 1].trim().to_string();
            match section.as_str() {
                "domain" | "fluid" | "coupling" | "solver" | "boundary" | "output" => {}
                "body" => {
                    body = Some(RawBody {
                        shape: None,
                        center: [0.0, 0.0],
                        theta0_deg: 0.0,
                        rho_s: None,
                        mesh_factor: 2.0,
                        dof: DofMask::all(),
                        spring: [None; 3],
                        torsion: [None; 3],
                        stops: [None; 4],
                        gravity: false,
                        vx0: 0.0,
                        vy0: 0.0,
                        omega0: 0.0,
                    });
                }
                other => return Err(err(format!("unknown section [{other}]"))),
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err("expected key = value".into()));
        };
        let key = key.trim();
        let value = value.trim();
        let fnum = |v: &str| -> Result<f64, SimError> {
            v.parse::<f64>()
                .map_err(|_| SimError::config(format!("{origin}:{}: bad number for {key}: {v}", ln + 1)))
        };
        let unum = |v: &str| -> Result<usize, SimError> {
            v.parse::<usize>()
                .map_err(|_| SimError::config(format!("{origin}:{}: bad count for {key}: {v}", ln + 1)))
        };
        match (section.as_str(), key) {
            ("", "name") => name = value.to_string(),
            ("domain", "x0") => domain[0] = Some(fnum(value)?),
            ("domain", "y0") => domain[1] = Some(fnum(value)?),
            ("domain", "lx") => domain[2] = Some(fnum(value)?),
            ("domain", "ly") => domain[3] = Some(fnum(value)?),
            ("domain", "nx") => cells[0] = Some(unum(value)?),
            ("domain", "ny") => cells[1] = Some(unum(value)?),
            ("fluid", "rho") => fluid[0] = Some(fnum(value)?),
            ("fluid", "mu") => fluid[1] = Some(fnum(value)?),
            ("body", k) => {
                let b = body.as_mut().ok_or_else(|| err("body key outside [body]".into()))?;
                match k {
                    "shape" => {
                        b.shape = Some(match value {
                            "circle" => Shape::Circle { diameter: 0.0 },
                            "rectangle" => Shape::Rectangle {
                                length: 0.0,
                                height: 0.0,
                                corner_radius: 0.0,
                            },
                            "polygon" => Shape::Polygon { path: PathBuf::new() },
                            other => return Err(err(format!("unknown shape {other}"))),
                        })
                    }
                    "diameter" => match &mut b.shape {
                        Some(Shape::Circle { diameter }) => *diameter = fnum(value)?,
                        _ => return Err(err("diameter requires shape = circle".into())),
                    },
                    "length" => match &mut b.shape {
                        Some(Shape::Rectangle { length, .. }) => *length = fnum(value)?,
                        _ => return Err(err("length requires shape = rectangle".into())),
                    },
                    "height" => match &mut b.shape {
                        Some(Shape::Rectangle { height, .. }) => *height = fnum(value)?,
                        _ => return Err(err("height requires shape = rectangle".into())),
                    },
                    "corner_radius" => match &mut b.shape {
                        Some(Shape::Rectangle { corner_radius, .. }) => *corner_radius = fnum(value)?,
                        _ => return Err(err("corner_radius requires shape = rectangle".into())),
                    },
                    "mesh_file" => match &mut b.shape {
                        Some(Shape::Polygon { path }) => *path = PathBuf::from(value),
                        _ => return Err(err("mesh_file requires shape = polygon".into())),
                    },
                    "center" => {
                        let mut it = value.split_whitespace();
                        let x = it.next().map(fnum).transpose()?.ok_or_else(|| err("center needs x y".into()))?;
                        let y = it.next().map(fnum).transpose()?.ok_or_else(|| err("center needs x y".into()))?;
                        b.center = [x, y];
                    }
                    "theta0_deg" => b.theta0_deg = fnum(value)?,
                    "rho_s" => b.rho_s = Some(fnum(value)?),
                    "mesh_factor" => b.mesh_factor = fnum(value)?,
                    "dof" => {
                        b.dof = DofMask {
                            x: value.contains('x'),
                            y: value.contains('y'),
                            theta: value.contains('t'),
                        };
                        if value != "none" && !(b.dof.x || b.dof.y || b.dof.theta) {
                            return Err(err(format!("bad dof spec {value}")));
                        }
                    }
                    "spring_mass" => b.spring[0] = Some(fnum(value)?),
                    "spring_damping" => b.spring[1] = Some(fnum(value)?),
                    "spring_stiffness" => b.spring[2] = Some(fnum(value)?),
                    "torsion_inertia" => b.torsion[0] = Some(fnum(value)?),
                    "torsion_damping" => b.torsion[1] = Some(fnum(value)?),
                    "torsion_stiffness" => b.torsion[2] = Some(fnum(value)?),
                    "stop_min_deg" => b.stops[0] = Some(fnum(value)?),
                    "stop_max_deg" => b.stops[1] = Some(fnum(value)?),
                    "stop_stiffness" => b.stops[2] = Some(fnum(value)?),
                    "stop_damping" => b.stops[3] = Some(fnum(value)?),
                    "gravity" => {
                        b.gravity = match value {
                            "on" | "true" => true,
                            "off" | "false" => false,
                            other => return Err(err(format!("bad gravity flag {other}"))),
                        }
                    }
                    "vx0" => b.vx0 = fnum(value)?,
                    "vy0" => b.vy0 = fnum(value)?,
                    "omega0" => b.omega0 = fnum(value)?,
                    other => return Err(err(format!("unknown body key {other}"))),
                }
            }
            ("coupling", "kappa") => kappa = Some(fnum(value)?),
            ("coupling", "dt") => dt = Some(fnum(value)?),
            ("coupling", "t_final") => t_final = Some(fnum(value)?),
            ("solver", "tol") => tol = fnum(value)?,
            ("solver", "max_iters") => max_iters = unum(value)?,
            ("solver", "restart") => restart = unum(value)?,
            ("solver", "helmholtz_iters") => helmholtz_iters = unum(value)?,
            ("solver", "poisson_cycles") => poisson_cycles = unum(value)?,
            ("boundary", "ramp") => inflow_ramp = fnum(value)?,
            ("boundary", k @ ("left" | "right" | "bottom" | "top")) => {
                let idx = match k {
                    "left" => 0,
                    "right" => 1,
                    "bottom" => 2,
                    _ => 3,
                };
                let mut it = value.split_whitespace();
                let kind = it.next().unwrap_or("");
                sides[idx] = Some(match kind {
                    "inflow" => {
                        let u = it.next().map(fnum).transpose()?.unwrap_or(0.0);
                        let v = it.next().map(fnum).transpose()?.unwrap_or(0.0);
                        SideBc::Inflow { u, v }
                    }
                    "inflow-parabolic" => {
                        let peak = it.next().map(fnum).transpose()?.unwrap_or(1.0);
                        SideBc::InflowParabolic { peak }
                    }
                    "outflow" => SideBc::Outflow,
                    "slip" => SideBc::Slip,
                    "noslip" => SideBc::NoSlip,
                    other => return Err(err(format!("unknown boundary condition {other}"))),
                });
            }
            ("output", "csv_every") => csv_every = unum(value)?,
            ("output", "snapshot_every") => snapshot_every = unum(value)?,
            (sec, k) => {
                return Err(err(format!("unknown key {k} in section [{sec}]")));
            }
        }
    }

    let need = |opt: Option<f64>, what: &str| -> Result<f64, SimError> {
        opt.ok_or_else(|| SimError::config(format!("{origin}: missing {what}")))
    };
    let body = match body {
        None => None,
        Some(raw) => {
            let shape = raw
                .shape
                .ok_or_else(|| SimError::config(format!("{origin}: missing body shape")))?;
            let rho_s = raw
                .rho_s
                .ok_or_else(|| SimError::config(format!("{origin}: missing rho_s")))?;
            let translational = match raw.spring {
                [None, None, None] => None,
                [m, c, k] => Some(SpringDamper {
                    mass: m.ok_or_else(|| SimError::config(format!("{origin}: missing spring_mass")))?,
                    damping: c.unwrap_or(0.0),
                    stiffness: k.ok_or_else(|| SimError::config(format!("{origin}: missing spring_stiffness")))?,
                }),
            };
            let torsional = match raw.torsion {
                [None, None, None] => None,
                [i, c, k] => Some(TorsionSpringDamper {
                    inertia: i.ok_or_else(|| SimError::config(format!("{origin}: missing torsion_inertia")))?,
                    damping: c.unwrap_or(0.0),
                    stiffness: k
                        .ok_or_else(|| SimError::config(format!("{origin}: missing torsion_stiffness")))?,
                }),
            };
            let stops = match raw.stops {
                [None, None, None, None] => None,
                [mn, mx, k, c] => Some(AngleStops {
                    min: mn
                        .ok_or_else(|| SimError::config(format!("{origin}: missing stop_min_deg")))?
                        .to_radians(),
                    max: mx
                        .ok_or_else(|| SimError::config(format!("{origin}: missing stop_max_deg")))?
                        .to_radians(),
                    stiffness: k.ok_or_else(|| SimError::config(format!("{origin}: missing stop_stiffness")))?,
                    damping: c.unwrap_or(0.0),
                }),
            };
            Some(BodyConfig {
                shape,
                center: raw.center,
                theta0: raw.theta0_deg.to_radians(),
                rho_s,
                mesh_factor: raw.mesh_factor,
                dof: raw.dof,
                translational,
                torsional,
                gravity: raw.gravity,
                stops,
                initial_velocity: [raw.vx0, raw.vy0],
                initial_omega: raw.omega0,
            })
        }
    };

    let cfg = ScenarioConfig {
        name: if name.is_empty() { "unnamed".into() } else { name },
        x0: need(domain[0], "domain x0")?,
        y0: need(domain[1], "domain y0")?,
        lx: need(domain[2], "domain lx")?,
        ly: need(domain[3], "domain ly")?,
        nx: cells[0].ok_or_else(|| SimError::config(format!("{origin}: missing domain nx")))?,
        ny: cells[1].ok_or_else(|| SimError::config(format!("{origin}: missing domain ny")))?,
        rho_f: need(fluid[0], "fluid rho")?,
        mu: need(fluid[1], "fluid mu")?,
        body,
        kappa: kappa.unwrap_or(0.0),
        dt: need(dt, "coupling dt")?,
        t_final: need(t_final, "coupling t_final")?,
        tol,
        max_iters,
        restart,
        helmholtz_iters,
        poisson_cycles,
        bc: BoundarySpec {
            left: sides[0].ok_or_else(|| SimError::config(format!("{origin}: missing boundary left")))?,
            right: sides[1].ok_or_else(|| SimError::config(format!("{origin}: missing boundary right")))?,
            bottom: sides[2].ok_or_else(|| SimError::config(format!("{origin}: missing boundary bottom")))?,
            top: sides[3].ok_or_else(|| SimError::config(format!("{origin}: missing boundary top")))?,
        },
        inflow_ramp,
        csv_every,
        snapshot_every,
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_text() {
        let cfg = crate::scenarios::preset("viv2dof", crate::scenarios::Profile::Desk).unwrap();
        let text = cfg.to_text();
        let back = parse_config(&text, "roundtrip").unwrap();
        assert_eq!(back.nx, cfg.nx);
        assert_eq!(back.bc, cfg.bc);
        let b0 = cfg.body.as_ref().unwrap();
        let b1 = back.body.as_ref().unwrap();
        assert_eq!(b0.shape, b1.shape);
        assert!((b0.rho_s - b1.rho_s).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_keys_with_line_numbers() {
        let text = "name = t\n[domain]\nx0 = 0\nwhatever = 1\n";
        let err = parse_config(text, "test").unwrap_err().to_string();
        assert!(err.contains("test:4"), "{err}");
        assert!(err.contains("whatever"), "{err}");
    }

    #[test]
    fn missing_fluid_density_names_the_key() {
        let text = "\
[domain]\nx0 = 0\ny0 = 0\nlx = 1\nly = 1\nnx = 8\nny = 8\n\
[fluid]\nmu = 0.1\n\
[coupling]\ndt = 0.01\nt_final = 1\n\
[boundary]\nleft = slip\nright = slip\nbottom = slip\ntop = slip\n";
        let err = parse_config(text, "test").unwrap_err().to_string();
        assert!(err.contains("fluid rho"), "{err}");
    }

    #[test]
    fn cfl_sanity_bound_enforced() {
        let text = "\
[domain]\nx0 = 0\ny0 = 0\nlx = 1\nly = 1\nnx = 8\nny = 8\n\
[fluid]\nrho = 1\nmu = 0.1\n\
[coupling]\ndt = 0.5\nt_final = 1\n\
[boundary]\nleft = inflow 2 0\nright = outflow\nbottom = slip\ntop = slip\n";
        let err = parse_config(text, "test").unwrap_err().to_string();
        assert!(err.contains("exceeds 1"), "{err}");
    }
}
