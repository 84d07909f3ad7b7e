//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line. The paper-number regressions (criteria 8-13) run the
//! reduced desk profiles and take minutes to hours; they serialize behind a
//! mutex so each gets the machine to itself.

use std::f64::consts::PI;
use std::sync::Mutex;
use std::time::Instant;

use ile2d::fsi::{CoupledBody, FsiSimulation, SolverControls};
use ile2d::grid::{
    advect, apply_bc, divergence, gradient, laplacian, vorticity, BoundarySpec, CellField, Grid2,
    SideBc, StaggeredField,
};
use ile2d::iim::{
    corrections_gradient, corrections_laplacian, exterior_pressure, exterior_shear,
    exterior_traction, locate_intersections, restrict, surface_quadrature, InterfaceMesh,
    JumpPair, ScalarJump,
};
use ile2d::lagrange::{assemble_mass, circle};
use ile2d::rbd::{
    half_step, net_load, orthogonality_error, ConstraintParams, DofMask, Loads, MassProperties,
    RigidBodyState, SpringDamper,
};
use ile2d::scenarios::{
    self, dominant_frequency, figure_eight_crossing_x, max_abs, preset, rotation_cycle_averages,
    series, window, Profile,
};

static HEAVY: Mutex<()> = Mutex::new(());

fn report(criterion: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} criterion {criterion}: {detail}");
    assert!(pass, "criterion {criterion}: {detail}");
}

fn fill_staggered(grid: &Grid2, mut fu: impl FnMut(f64, f64) -> f64, mut fv: impl FnMut(f64, f64) -> f64) -> StaggeredField {
    let mut vel = StaggeredField::zeros(grid);
    let h = grid.h();
    for j in -3..grid.ny as i32 + 3 {
        for i in -3..grid.nx as i32 + 4 {
            vel.u.set(i, j, fu(grid.x0 + i as f64 * h, grid.y0 + (j as f64 + 0.5) * h));
        }
    }
    for j in -3..grid.ny as i32 + 4 {
        for i in -3..grid.nx as i32 + 3 {
            vel.v.set(i, j, fv(grid.x0 + (i as f64 + 0.5) * h, grid.y0 + j as f64 * h));
        }
    }
    vel
}

fn fill_cell(grid: &Grid2, mut f: impl FnMut(f64, f64) -> f64) -> CellField {
    let mut p = CellField::zeros(grid);
    for j in -3..grid.ny as i32 + 3 {
        for i in -3..grid.nx as i32 + 3 {
            let (x, y) = grid.cell_center(i, j);
            p.values.set(i, j, f(x, y));
        }
    }
    p
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn criterion_01_operator_identities() {
    let g = Grid2::new(-0.3, 0.2, 1.0, 1.0, 24, 24).unwrap();

    // adjointness of divergence and gradient on interior-supported fields
    let mut rng = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        (rng >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut vel = StaggeredField::zeros(&g);
    let mut p = CellField::zeros(&g);
    for j in 2..g.ny as i32 - 2 {
        for i in 2..g.nx as i32 - 1 {
            vel.u.set(i, j, next());
        }
    }
    for j in 2..g.ny as i32 - 1 {
        for i in 2..g.nx as i32 - 2 {
            vel.v.set(i, j, next());
        }
    }
    for j in 2..g.ny as i32 - 2 {
        for i in 2..g.nx as i32 - 2 {
            p.values.set(i, j, next());
        }
    }
    let div = divergence(&vel, &g).unwrap();
    let gp = gradient(&p, &g).unwrap();
    let mut lhs = 0.0;
    for j in 0..g.ny as i32 {
        for i in 0..g.nx as i32 {
            lhs += div.values.get(i, j) * p.values.get(i, j);
        }
    }
    let mut rhs = 0.0;
    for j in 0..g.ny as i32 {
        for i in 0..=g.nx as i32 {
            rhs += vel.u.get(i, j) * gp.u.get(i, j);
        }
    }
    for j in 0..=g.ny as i32 {
        for i in 0..g.nx as i32 {
            rhs += vel.v.get(i, j) * gp.v.get(i, j);
        }
    }
    let adjoint_err = (lhs + rhs).abs() / lhs.abs().max(1e-300);
    let adjoint_ok = adjoint_err <= 1e-12;

    // div(grad p) equals the 5-point cell Laplacian on interior cells
    let p = fill_cell(&g, |x, y| (3.1 * x).sin() * (2.3 * y).cos() + 0.5 * x * y);
    let dgp = divergence(&gradient(&p, &g).unwrap(), &g).unwrap();
    let h2_inv = 1.0 / (g.h() * g.h());
    let mut lap_err = 0.0f64;
    for j in 1..g.ny as i32 - 1 {
        for i in 1..g.nx as i32 - 1 {
            let lap = (p.values.get(i - 1, j) + p.values.get(i + 1, j) + p.values.get(i, j - 1)
                + p.values.get(i, j + 1)
                - 4.0 * p.values.get(i, j))
                * h2_inv;
            lap_err = lap_err.max((dgp.values.get(i, j) - lap).abs() / lap.abs().max(1.0));
        }
    }
    let divgrad_ok = lap_err <= 1e-12;

    // polynomial exactness per module examples
    let mut poly_ok = true;
    {
        let constant = fill_staggered(&g, |_, _| 1.0, |_, _| 1.0);
        poly_ok &= divergence(&constant, &g).unwrap().values.linf_interior() < 1e-13;
        let solenoidal = fill_staggered(&g, |x, _| x, |_, y| -y);
        poly_ok &= divergence(&solenoidal, &g).unwrap().values.linf_interior() < 1e-12;
        let expanding = fill_staggered(&g, |x, _| x, |_, y| y);
        let d = divergence(&expanding, &g).unwrap();
        poly_ok &= (d.values.get(5, 5) - 2.0).abs() < 1e-12;

        let pquad = fill_cell(&g, |x, _| x * x);
        let gq = gradient(&pquad, &g).unwrap();
        let (xf, _) = g.u_face(7, 3);
        poly_ok &= (gq.u.get(7, 3) - 2.0 * xf).abs() < 1e-12;

        let vquad = fill_staggered(&g, |x, y| x * x + y * y, |_, _| 0.0);
        let lap = laplacian(&vquad, &g).unwrap();
        poly_ok &= (lap.u.get(6, 6) - 4.0).abs() < 1e-9;

        let shear = fill_staggered(&g, |_, y| y, |_, _| 0.0);
        poly_ok &= advect(&shear, &g).unwrap().linf() < 1e-12;
        let rot = fill_staggered(&g, |_, y| -y, |x, _| x);
        let a = advect(&rot, &g).unwrap();
        let (xf, _) = g.u_face(9, 9);
        poly_ok &= (a.u.get(9, 9) + xf).abs() < 1e-10;
        let w = vorticity(&rot, &g).unwrap();
        poly_ok &= (w.values.get(4, 4) - 2.0).abs() < 1e-12;

        // boundary-condition examples: linear reflection and idempotency
        let mut vel = fill_staggered(&g, |_, _| 1.0, |_, _| 0.5);
        let mut pr = fill_cell(&g, |x, y| x - y);
        let bc = BoundarySpec {
            left: SideBc::Inflow { u: 1.0, v: 0.0 },
            right: SideBc::Outflow,
            bottom: SideBc::NoSlip,
            top: SideBc::Slip,
        };
        apply_bc(&mut vel, &mut pr, &bc, &g);
        poly_ok &= (vel.u.get(5, -1) + vel.u.get(5, 0)).abs() < 1e-15; // noslip reflection
        poly_ok &= (vel.u.get(0, 3) - 1.0).abs() < 1e-15; // inflow face pinned
        let snap = (vel.clone(), pr.clone());
        apply_bc(&mut vel, &mut pr, &bc, &g);
        poly_ok &= vel == snap.0 && pr == snap.1; // idempotent
    }

    report(
        "1 (operator identities)",
        adjoint_ok && divgrad_ok && poly_ok,
        format!("adjointness {adjoint_err:.2e}, div-grad vs 5-point {lap_err:.2e}, polynomial exactness {poly_ok}"),
    );
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn criterion_02_taylor_green_refinement() {
    let start = Instant::now();
    let nu = 0.05;
    let t_final = 0.25;
    let mut errs = Vec::new();
    for n in [64usize, 128, 256] {
        let grid = Grid2::new(0.0, 0.0, PI, PI, n, n).unwrap();
        let mut controls = SolverControls::new(0.0, 0.3 * PI / n as f64);
        controls.tol = 1e-10;
        controls.helmholtz_iters = 60;
        let mut sim = FsiSimulation::new(grid, BoundarySpec::slip_box(), 1.0, nu, controls, None).unwrap();
        sim.set_initial_velocity(|x, y| x.sin() * y.cos(), |x, y| -(x.cos()) * y.sin());
        while sim.t < t_final - 1e-12 {
            sim.step().unwrap();
        }
        let decay = (-2.0 * nu * sim.t).exp();
        let mut err2 = 0.0;
        let mut count = 0usize;
        for j in 0..grid.ny as i32 {
            for i in 0..=grid.nx as i32 {
                let (x, y) = grid.u_face(i, j);
                err2 += (sim.vel.u.get(i, j) - x.sin() * y.cos() * decay).powi(2);
                count += 1;
            }
        }
        for j in 0..=grid.ny as i32 {
            for i in 0..grid.nx as i32 {
                let (x, y) = grid.v_face(i, j);
                err2 += (sim.vel.v.get(i, j) + x.cos() * y.sin() * decay).powi(2);
                count += 1;
            }
        }
        errs.push((err2 / count as f64).sqrt());
    }
    let r1 = (errs[0] / errs[1]).log2();
    let r2 = (errs[1] / errs[2]).log2();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "2 (Taylor-Green refinement)",
        r1 >= 1.9 && r2 >= 1.9 && elapsed <= 300.0,
        format!("L2 orders {r1:.2}, {r2:.2} (errors {errs:?}), runtime {elapsed:.0} s"),
    );
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn criterion_03_manufactured_jump_corrections() {
    // piecewise-linear two-sided fields with exact nodal jump data must be
    // reproduced to round-off by the corrected operators
    let g = Grid2::new(-1.0, -1.0, 2.0, 2.0, 48, 48).unwrap();
    let body = circle([0.0, 0.0], 0.5, 2.0 * g.h(), 1.0).unwrap();
    let mesh = InterfaceMesh::from_volumetric(&body).unwrap();
    let cs = locate_intersections(&mesh, &g).unwrap();
    let inner = |x: f64, y: f64| 0.4 - 0.6 * x + 1.3 * y;
    let outer = |x: f64, y: f64| -0.2 + 0.9 * x + 0.4 * y;
    let mut p = CellField::zeros(&g);
    let mut vel = StaggeredField::zeros(&g);
    for j in -3..g.ny as i32 + 3 {
        for i in -3..g.nx as i32 + 3 {
            let (x, y) = g.cell_center(i, j);
            p.values
                .set(i, j, if cs.cell_inside(i, j) { inner(x, y) } else { outer(x, y) });
        }
    }
    let h = g.h();
    for j in -3..g.ny as i32 + 3 {
        for i in -3..g.nx as i32 + 4 {
            let (x, y) = (g.x0 + i as f64 * h, g.y0 + (j as f64 + 0.5) * h);
            vel.u
                .set(i, j, if cs.u_inside(i, j) { inner(x, y) } else { outer(x, y) });
        }
    }
    let n = mesh.node_count();
    let mut jump = ScalarJump::zeros(n);
    for l in 0..n {
        let pt = mesh.position[l];
        jump.value[l] = outer(pt[0], pt[1]) - inner(pt[0], pt[1]);
    }
    jump.gradient = Some(vec![[0.9 - (-0.6), 0.4 - 1.3]; n]);

    let raw_g = gradient(&p, &g).unwrap();
    let mut corr_g = StaggeredField::zeros(&g);
    corrections_gradient(&jump, &mesh, &cs, &g, &mut corr_g).unwrap();
    let mut grad_err = 0.0f64;
    let mut cut_faces = 0usize;
    for rec in cs.records.iter() {
        match rec.kind {
            ile2d::iim::ArmKind::GradU => {
                let (i, j) = rec.owner;
                let expect = if rec.owner_side > 0 { 0.9 } else { -0.6 };
                grad_err = grad_err.max((raw_g.u.get(i, j) + corr_g.u.get(i, j) - expect).abs());
                cut_faces += 1;
            }
            ile2d::iim::ArmKind::GradV => {
                let (i, j) = rec.owner;
                let expect = if rec.owner_side > 0 { 0.4 } else { 1.3 };
                grad_err = grad_err.max((raw_g.v.get(i, j) + corr_g.v.get(i, j) - expect).abs());
                cut_faces += 1;
            }
            _ => {}
        }
    }
    let raw_l = laplacian(&vel, &g).unwrap();
    let mut corr_l = StaggeredField::zeros(&g);
    corrections_laplacian(&jump, &ScalarJump::zeros(n), &mesh, &cs, &g, &mut corr_l).unwrap();
    let mut lap_err = 0.0f64;
    for rec in cs.records.iter().filter(|r| r.kind == ile2d::iim::ArmKind::LapU) {
        let (i, j) = rec.owner;
        lap_err = lap_err.max((raw_l.u.get(i, j) + corr_l.u.get(i, j)).abs());
    }
    let exact_ok = grad_err < 1e-10 && lap_err * g.h() * g.h() < 1e-10 && cut_faces > 20;

    // piecewise-smooth: smooth base plus linear jump; corrected-gradient error
    // order over three grids at cut faces
    let q = |x: f64, y: f64| (1.3 * x).sin() * (0.9 * y).cos();
    let qx = |x: f64, y: f64| 1.3 * (1.3 * x).cos() * (0.9 * y).cos();
    let jl = |x: f64, y: f64| 0.8 + 0.5 * x - 0.3 * y;
    let mut errs = Vec::new();
    for ncells in [32usize, 64, 128] {
        let g = Grid2::new(-1.0, -1.0, 2.0, 2.0, ncells, ncells).unwrap();
        let body = circle([0.0, 0.0], 0.5, 2.0 * g.h(), 1.0).unwrap();
        let mesh = InterfaceMesh::from_volumetric(&body).unwrap();
        let cs = locate_intersections(&mesh, &g).unwrap();
        let mut p = CellField::zeros(&g);
        for j in -3..g.ny as i32 + 3 {
            for i in -3..g.nx as i32 + 3 {
                let (x, y) = g.cell_center(i, j);
                let v = if cs.cell_inside(i, j) { q(x, y) } else { q(x, y) + jl(x, y) };
                p.values.set(i, j, v);
            }
        }
        let n = mesh.node_count();
        let mut jump = ScalarJump::zeros(n);
        for l in 0..n {
            let pt = mesh.position[l];
            jump.value[l] = jl(pt[0], pt[1]);
        }
        jump.gradient = Some(vec![[0.5, -0.3]; n]);
        let raw = gradient(&p, &g).unwrap();
        let mut corr = StaggeredField::zeros(&g);
        corrections_gradient(&jump, &mesh, &cs, &g, &mut corr).unwrap();
        let mut e = 0.0f64;
        for rec in cs.records.iter().filter(|r| r.kind == ile2d::iim::ArmKind::GradU) {
            let (i, j) = rec.owner;
            let (x, y) = g.u_face(i, j);
            let expect = qx(x, y) + if rec.owner_side > 0 { 0.5 } else { 0.0 };
            e = e.max((raw.u.get(i, j) + corr.u.get(i, j) - expect).abs());
        }
        errs.push(e);
    }
    let r1 = (errs[0] / errs[1]).log2();
    let r2 = (errs[1] / errs[2]).log2();
    let order_ok = r1 >= 1.5 && r2 >= 1.5;

    report(
        "3 (manufactured jumps)",
        exact_ok && order_ok,
        format!(
            "piecewise-linear max errors: gradient {grad_err:.2e}, scaled Laplacian {:.2e}; \
             cut-face gradient orders {r1:.2}, {r2:.2}",
            lap_err * g.h() * g.h()
        ),
    );
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn criterion_04_exterior_traction_buoyancy() {
    // quiescent hydrostatic pressure around a disk: integrated traction must
    // converge to the analytic buoyancy at first order or better
    let rho_f = 1.2;
    let grav = 981.0;
    let radius = 0.5;
    let mut errs = Vec::new();
    for n in [48usize, 96, 192] {
        let g = Grid2::new(-1.0, -1.0, 2.0, 2.0, n, n).unwrap();
        let body = circle([0.0, 0.0], radius, 2.0 * g.h(), 1.0).unwrap();
        let mesh = InterfaceMesh::from_volumetric(&body).unwrap();
        let cs = locate_intersections(&mesh, &g).unwrap();
        let mass = assemble_mass(&mesh.reference, &mesh.segments).unwrap();
        let p = fill_cell(&g, |_, y| -rho_f * grav * y);
        let vel = StaggeredField::zeros(&g);
        let jumps = JumpPair::zeros(mesh.node_count());
        let pts = surface_quadrature(&mesh);
        let p_plus = exterior_pressure(&p, &mesh, &jumps, &g, &pts).unwrap();
        let shear = exterior_shear(&vel, &mesh, &jumps, &cs, &g, &pts).unwrap();
        let u_nodal = restrict(&vel, &mesh, &jumps, &cs, &g, &mass).unwrap();
        let tau = exterior_traction(&p_plus, &shear, &u_nodal, &mesh, &mass, 0.01, &pts).unwrap();
        let props = MassProperties {
            mass: 1.0,
            area: 0.0, // isolate the traction integral from the gravity term
            inertia: 1.0,
            rho_s: 1.0,
        };
        let loads = net_load(&tau, &mesh.position, &mesh.segments, [0.0, 0.0], &props, rho_f, None);
        // polygon area, not pi r^2: the traction acts on the polygon
        let poly_area = {
            let mut a = 0.0;
            for seg in &mesh.segments {
                let p0 = mesh.position[seg[0]];
                let p1 = mesh.position[seg[1]];
                a += 0.5 * (p0[0] * p1[1] - p1[0] * p0[1]);
            }
            a
        };
        let expect = rho_f * poly_area * grav;
        errs.push(((loads.force[1] - expect).powi(2) + loads.force[0].powi(2)).sqrt() / expect);
    }
    let r1 = (errs[0] / errs[1]).log2();
    let r2 = (errs[1] / errs[2]).log2();
    let buoyancy_ok = r1 >= 0.9 && r2 >= 0.9 && errs[2] < 0.05;

    // closed-surface identity: uniform exterior pressure integrates to zero
    let g = Grid2::new(-1.0, -1.0, 2.0, 2.0, 64, 64).unwrap();
    let body = circle([0.0, 0.0], radius, 2.0 * g.h(), 1.0).unwrap();
    let mesh = InterfaceMesh::from_volumetric(&body).unwrap();
    let mass = assemble_mass(&mesh.reference, &mesh.segments).unwrap();
    let pts = surface_quadrature(&mesh);
    let tau = exterior_traction(
        &vec![5.0; pts.len()],
        &vec![[0.0, 0.0]; pts.len()],
        &vec![[0.0, 0.0]; mesh.node_count()],
        &mesh,
        &mass,
        0.01,
        &pts,
    )
    .unwrap();
    let props = MassProperties {
        mass: 1.0,
        area: 0.0,
        inertia: 1.0,
        rho_s: 1.0,
    };
    let loads = net_load(&tau, &mesh.position, &mesh.segments, [0.0, 0.0], &props, 1.0, None);
    let closed_ok = loads.force[0].abs() < 1e-10 && loads.force[1].abs() < 1e-10;

    report(
        "4 (buoyancy traction)",
        buoyancy_ok && closed_ok,
        format!(
            "buoyancy errors {errs:?} (orders {r1:.2}, {r2:.2}); closed-surface force ({:.1e}, {:.1e})",
            loads.force[0], loads.force[1]
        ),
    );
}

// ---------------------------------------------------------------- criterion 5

#[test]
fn criterion_05_rigid_body_integrator() {
    // torque-free spin over 1e5 half-steps
    let props = MassProperties {
        mass: 2.0,
        area: 1.0,
        inertia: 0.7,
        rho_s: 1.0,
    };
    let params = ConstraintParams::free(None);
    let mut st = RigidBodyState::at_rest();
    st.omega = 2.5;
    for _ in 0..100_000 {
        let (next, _) = half_step(&st, &Loads::default(), &props, &params, 1e-3).unwrap();
        st = next;
    }
    let spin_ok = st.omega == 2.5 && orthogonality_error(&st.q) <= 1e-10;

    // SHO period within 0.1% at dt = T/1000
    let (ms, ks) = (1.7f64, 9.3f64);
    let period = 2.0 * PI * (ms / ks).sqrt();
    let dt = period / 1000.0;
    let osc = ConstraintParams {
        dof: DofMask {
            x: true,
            y: false,
            theta: false,
        },
        translational: Some(SpringDamper {
            mass: ms,
            damping: 0.0,
            stiffness: ks,
        }),
        torsional: None,
        gravity: None,
        stops: None,
    };
    let mut st = RigidBodyState::at_rest();
    st.d_c[0] = 1.0;
    let mut crossings = Vec::new();
    let mut prev = st.d_c[0];
    let mut t = 0.0;
    for _ in 0..30_000 {
        let (next, _) = half_step(&st, &Loads::default(), &props, &osc, dt).unwrap();
        st = next;
        t += dt;
        if prev < 0.0 && st.d_c[0] >= 0.0 {
            crossings.push(t - dt * st.d_c[0] / (st.d_c[0] - prev));
        }
        prev = st.d_c[0];
    }
    let measured = (crossings.last().unwrap() - crossings[0]) / (crossings.len() - 1) as f64;
    let period_err = (measured - period).abs() / period;
    let sho_ok = period_err <= 1e-3;

    // ballistic: exact for constant force; second order for frozen-load
    // composition with a time-varying force
    let free = ConstraintParams::free(None);
    let mut st = RigidBodyState::at_rest();
    let dt = 0.05;
    for _ in 0..10 {
        let (next, _) = half_step(
            &st,
            &Loads {
                force: [3.0, 0.0],
                torque: 0.0,
            },
            &props,
            &free,
            dt,
        )
        .unwrap();
        st = next;
    }
    let t_tot = 10.0 * dt;
    let exact = 0.5 * 3.0 / props.mass * t_tot * t_tot;
    let const_ok = (st.d_c[0] - exact).abs() < 1e-13;

    let t_end = 2.0f64;
    let exact_var = (t_end - t_end.sin()) / props.mass;
    let mut errs = Vec::new();
    for steps in [50usize, 100, 200] {
        let dt = t_end / steps as f64;
        let mut st = RigidBodyState::at_rest();
        let mut t = 0.0f64;
        for _ in 0..steps {
            let (s1, _) = half_step(&st, &Loads { force: [t.sin(), 0.0], torque: 0.0 }, &props, &free, 0.5 * dt).unwrap();
            let (s2, _) = half_step(&s1, &Loads { force: [(t + dt).sin(), 0.0], torque: 0.0 }, &props, &free, 0.5 * dt).unwrap();
            st = s2;
            t += dt;
        }
        errs.push((st.d_c[0] - exact_var).abs());
    }
    let b1 = (errs[0] / errs[1]).log2();
    let b2 = (errs[1] / errs[2]).log2();
    let ballistic_ok = const_ok && b1 >= 1.9 && b2 >= 1.9;

    report(
        "5 (rigid-body integrator)",
        spin_ok && sho_ok && ballistic_ok,
        format!(
            "spin conservation {spin_ok}, orthogonality {:.1e}, period error {period_err:.2e}, \
             ballistic orders {b1:.2}/{b2:.2}",
            orthogonality_error(&st.q)
        ),
    );
}

// ---------------------------------------------------------------- criterion 6

#[test]
fn criterion_06_neutral_equilibrium() {
    let diameter = 0.6;
    let grid = Grid2::new(-1.0, -1.0, 2.0, 2.0, 48, 48).unwrap();
    let body = circle([0.0, 0.0], 0.5 * diameter, 2.0 * grid.h(), 1.0).unwrap();
    let coupled = CoupledBody::new(
        body,
        RigidBodyState::at_rest(),
        ConstraintParams::free(Some([0.0, -981.0])),
    )
    .unwrap();
    let mut sim = FsiSimulation::new(
        grid,
        BoundarySpec::slip_box(),
        1.0,
        0.01,
        SolverControls::new(1.0e3, 0.005),
        Some(coupled),
    )
    .unwrap();
    for _ in 0..100 {
        sim.step().unwrap();
    }
    let body = sim.body.as_ref().unwrap();
    let drift = (body.state.d_c[0].powi(2) + body.state.d_c[1].powi(2)).sqrt();
    report(
        "6 (neutral equilibrium)",
        drift <= 1e-8 * diameter,
        format!("drift {drift:.2e} over 100 cycles (bound {:.1e})", 1e-8 * diameter),
    );
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn criterion_07_tether_assertion() {
    // (a) an under-stiff tether must abort loudly with the 0.1 h diagnostic
    let mut cfg = preset("viv2dof-light", Profile::Desk).unwrap();
    cfg.nx = 160;
    cfg.ny = 128;
    cfg.kappa = 2.0;
    cfg.dt = 4e-3;
    cfg.t_final = 6.0;
    cfg.inflow_ramp = 0.5;
    cfg.tol = 1e-6;
    let out = scenarios::run(&cfg, None).unwrap();
    let abort_ok = out
        .aborted
        .as_deref()
        .map(|m| m.contains("tether gap") && m.contains("0.1 h"))
        .unwrap_or(false);

    // (b) a properly tethered run keeps the gap under 0.1 h throughout
    let mut cfg = preset("viv2dof-light", Profile::Desk).unwrap();
    cfg.nx = 320;
    cfg.ny = 256;
    cfg.kappa = 200.0;
    cfg.dt = 1.0e-3;
    cfg.t_final = 4.0;
    cfg.inflow_ramp = 1.0;
    cfg.tol = 1e-6;
    let out2 = scenarios::run(&cfg, None).unwrap();
    let bound = 0.1 * cfg.h();
    let held_ok = out2.aborted.is_none() && out2.max_tether < bound;

    report(
        "7 (tether assertion)",
        abort_ok && held_ok,
        format!(
            "under-stiff run aborted: {:?}; stable run (aborted: {:?}) max gap {:.2e} < {bound:.2e}",
            out.aborted, out2.aborted, out2.max_tether
        ),
    );
}

// ------------------------------------------------------- criterion 8 (nightly)

#[test]
fn criterion_08_kappa_inverse_scaling() {
    let _guard = HEAVY.lock().unwrap();
    let mut cfg = preset("viv2dof-light", Profile::Desk).unwrap();
    cfg.nx = 320;
    cfg.ny = 256;
    cfg.dt = 1.0e-3;
    cfg.t_final = 6.0;
    cfg.inflow_ramp = 1.0;
    cfg.tol = 1e-6;
    cfg.dt = 8.0e-4;
    let kappas = [100.0, 200.0, 400.0];
    let rows = scenarios::kappa_sensitivity(&cfg, &kappas).unwrap();
    for row in &rows {
        assert!(row.stable, "kappa {} unstable: {:?}", row.kappa, row.aborted);
    }
    // doubling kappa halves the max tether discrepancy within +-25%
    let mut scaling_ok = true;
    let mut ratios = Vec::new();
    for w in rows.windows(2) {
        let ratio = w[0].max_tether / w[1].max_tether;
        ratios.push(ratio);
        if !(1.5..=2.5).contains(&ratio) {
            scaling_ok = false;
        }
    }
    // trajectory deviation between the highest and lowest stable kappa below
    // the finest spacing
    let h = cfg.h();
    let dev = rows[0].trajectory_deviation;
    let dev_ok = dev < h;
    report(
        "8 (kappa^-1 scaling)",
        scaling_ok && dev_ok,
        format!("halving ratios {ratios:?} (target 2 +- 25%), trajectory deviation {dev:.2e} < h = {h:.2e}"),
    );
}

// ------------------------------------------------------- criterion 9 (nightly)

#[test]
fn criterion_09_tether_convergence() {
    let _guard = HEAVY.lock().unwrap();
    let mut base = preset("viv2dof", Profile::Desk).unwrap();
    base.nx = 320;
    base.ny = 256;
    base.kappa = 55.0; // scaled by 4 per refinement level: kappa ~ 1/h^2
    base.dt = 8.0e-4;
    base.t_final = 2.5;
    base.inflow_ramp = 1.25;
    base.tol = 1e-6;
    let report_data = scenarios::convergence_study(&base, 3).unwrap();
    for lvl in &report_data.levels {
        assert!(
            lvl.aborted.is_none(),
            "level {}x{} aborted: {:?}",
            lvl.nx,
            lvl.ny,
            lvl.aborted
        );
    }
    let orders = &report_data.orders;
    let min_order = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    report(
        "9 (tether convergence)",
        min_order >= 1.7 && report_data.monotone,
        format!(
            "max-tether per level {:?}, orders {orders:?} (target >= 1.7)",
            report_data
                .levels
                .iter()
                .map(|l| l.max_tether)
                .collect::<Vec<_>>()
        ),
    );
}

// ------------------------------------------------------ criterion 10 (nightly)

#[test]
fn criterion_10_viv_2dof_table() {
    let _guard = HEAVY.lock().unwrap();
    let mut cfg = preset("viv2dof", Profile::Desk).unwrap();
    cfg.kappa = 500.0;
    cfg.dt = 9.0e-4;
    cfg.t_final = 70.0;
    let out = scenarios::run(&cfg, None).unwrap();
    assert!(out.aborted.is_none(), "aborted: {:?}", out.aborted);
    let stats = window(&out.records, 40.0);
    let xc = figure_eight_crossing_x(stats).expect("no figure-eight crossings");
    let st = dominant_frequency(&series(stats, |r| r.dcy)).expect("no shedding frequency");
    // x_c / D with D = 1, St = f D / U with U = 1
    let xc_ok = (xc - 0.619).abs() <= 0.10 * 0.619;
    let st_ok = (st - 0.187).abs() <= 0.05 * 0.187;
    report(
        "10 (2-DOF VIV, Table 1)",
        xc_ok && st_ok,
        format!("x_c/D = {xc:.4} (0.619 +- 10%), St = {st:.4} (0.187 +- 5%)"),
    );
}

// ------------------------------------------------------ criterion 11 (nightly)

#[test]
fn criterion_11_galloping_damped() {
    let _guard = HEAVY.lock().unwrap();
    let mut cfg = preset("galloping-damped", Profile::Desk).unwrap();
    cfg.kappa = 48.0;
    cfg.dt = 3.0e-3;
    let out = scenarios::run(&cfg, None).unwrap();
    assert!(out.aborted.is_none(), "aborted: {:?}", out.aborted);
    let stats = window(&out.records, cfg.t_final - 110.0);
    let theta_max = max_abs(&series(stats, |r| r.theta)).to_degrees();
    let f_theta = dominant_frequency(&series(stats, |r| r.theta)).expect("no galloping frequency");
    let theta_ok = (theta_max - 15.0).abs() <= 0.10 * 15.0;
    let f_ok = (f_theta - 0.0198).abs() <= 0.10 * 0.0198;
    report(
        "11 (damped galloping, Table 3)",
        theta_ok && f_ok,
        format!("theta_max = {theta_max:.2} deg (15 +- 10%), f = {f_theta:.5} (0.0198 +- 10%)"),
    );
}

// ------------------------------------------------------ criterion 12 (nightly)

#[test]
fn criterion_12_low_mass_ratio_stability() {
    let _guard = HEAVY.lock().unwrap();
    let mut cfg = preset("viv2dof-m03", Profile::Desk).unwrap();
    cfg.kappa = 500.0;
    cfg.dt = 9.0e-4;
    cfg.t_final = 80.0;
    let out = scenarios::run(&cfg, None).unwrap();
    assert!(out.aborted.is_none(), "m* = 0.3 run did not stay stable: {:?}", out.aborted);
    let stats = window(&out.records, 50.0);
    let xc = figure_eight_crossing_x(stats).expect("no figure-eight regime reached");
    let xc_ok = (xc - 2.83).abs() <= 0.15 * 2.83;
    report(
        "12 (m* = 0.3 stability, Table 2)",
        xc_ok,
        format!("completed without instability; x_c/D = {xc:.3} (2.83 +- 15%)"),
    );
}

// ------------------------------------------------------ criterion 13 (nightly)

#[test]
fn criterion_13_tumbling_plate_averages() {
    let _guard = HEAVY.lock().unwrap();
    let cfg = preset("tumbling-plate", Profile::Desk).unwrap();
    let out = scenarios::run(&cfg, None).unwrap();
    assert!(out.aborted.is_none(), "aborted: {:?}", out.aborted);
    let (ux, uy, oz, cycles) =
        rotation_cycle_averages(&out.records, 0.35).expect("no full tumbling cycles detected");
    let ux_ok = (ux - 15.87).abs() <= 0.10 * 15.87;
    let uy_ok = (uy - (-11.32)).abs() <= 0.10 * 11.32;
    let oz_ok = (oz - 15.95).abs() <= 0.15 * 15.95;
    report(
        "13 (tumbling plate averages)",
        ux_ok && uy_ok && oz_ok,
        format!(
            "over {cycles} cycles: u_x = {ux:.2} (15.87 +- 10%), u_y = {uy:.2} (-11.32 +- 10%), \
             omega_z = {oz:.2} (15.95 +- 15%)"
        ),
    );
}
