//! Lagrangian side of the coupling: reference meshes for the rigid body, the
//! surface mass matrix and its L2 projection, body mass properties, the rigid
//! placement map, and the spring penalty force that tethers the body boundary
//! to the fluid-advected interface.

mod shapes;

pub use shapes::{circle, mesh_from_polygon, read_polygon_mesh, rectangle};

use crate::error::SimError;

/// 4-point Gauss-Legendre rule mapped to [0, 1]; exact through degree 7.
pub const GAUSS4: [(f64, f64); 4] = [
    (0.5 - 0.43056815579702629 , 0.17392742256872692),
    (0.5 - 0.16999052179242813 , 0.32607257743127305),
    (0.5 + 0.16999052179242813 , 0.32607257743127305),
    (0.5 + 0.43056815579702629 , 0.17392742256872692),
];

/// Triangulated reference configuration of the rigid body with uniform
/// density. The boundary ring is ordered counterclockwise and its node
/// positions double as the reference nodes of the fluid-structure interface
/// mesh (node-identified correspondence).
#[derive(Clone, Debug)]
pub struct VolumetricMesh {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<usize>,
    pub rho_s: f64,
}

/// Mass, area, centroid, and polar second moment of the body, all per unit
/// depth.
#[derive(Clone, Copy, Debug)]
pub struct BodyProperties {
    pub mass: f64,
    pub area: f64,
    pub centroid: [f64; 2],
    pub inertia: f64,
    pub rho_s: f64,
}

/// Exact polygon quadrature for area, centroid, and polar second moment about
/// the centroid (midpoint rule per triangle, exact for quadratics).
pub fn body_properties(mesh: &VolumetricMesh) -> Result<BodyProperties, SimError> {
    let mut area = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let a = mesh.nodes[tri[0]];
        let b = mesh.nodes[tri[1]];
        let c = mesh.nodes[tri[2]];
        let at = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
        if at <= 0.0 {
            return Err(SimError::mesh(format!("inverted or degenerate triangle {t}")));
        }
        area += at;
        cx += at * (a[0] + b[0] + c[0]) / 3.0;
        cy += at * (a[1] + b[1] + c[1]) / 3.0;
    }
    if area <= 0.0 {
        return Err(SimError::mesh("mesh has no area"));
    }
    let centroid = [cx / area, cy / area];

    let mut second = 0.0;
    for tri in &mesh.triangles {
        let a = mesh.nodes[tri[0]];
        let b = mesh.nodes[tri[1]];
        let c = mesh.nodes[tri[2]];
        let at = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
        // edge midpoints; the 3-point midpoint rule integrates quadratics exactly
        let mids = [
            [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])],
            [0.5 * (b[0] + c[0]), 0.5 * (b[1] + c[1])],
            [0.5 * (c[0] + a[0]), 0.5 * (c[1] + a[1])],
        ];
        let mut s = 0.0;
        for m in mids {
            let dx = m[0] - centroid[0];
            let dy = m[1] - centroid[1];
            s += dx * dx + dy * dy;
        }
        second += at * s / 3.0;
    }

    Ok(BodyProperties {
        mass: mesh.rho_s * area,
        area,
        centroid,
        inertia: mesh.rho_s * second,
        rho_s: mesh.rho_s,
    })
}

/// Symmetric positive-definite P1 surface mass matrix over the reference
/// interface, stored as nodal diagonal plus one off-diagonal entry per
/// segment.
#[derive(Clone, Debug)]
pub struct MassMatrix {
    diag: Vec<f64>,
    off: Vec<(usize, usize, f64)>,
}

impl MassMatrix {
    pub fn nodes(&self) -> usize {
        self.diag.len()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut sums = self.diag.clone();
        for &(k, l, m) in &self.off {
            sums[k] += m;
            sums[l] += m;
        }
        sums
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (yi, (xi, di)) in y.iter_mut().zip(x.iter().zip(self.diag.iter())) {
            *yi = xi * di;
        }
        for &(k, l, m) in &self.off {
            y[k] += m * x[l];
            y[l] += m * x[k];
        }
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }
}

/// Assemble the P1 mass matrix `M_kl = integral phi_k phi_l dA` over the
/// reference surface mesh using the 7th-order Gauss rule (exact for these
/// products).
pub fn assemble_mass(
    ref_nodes: &[[f64; 2]],
    segments: &[[usize; 2]],
) -> Result<MassMatrix, SimError> {
    let n = ref_nodes.len();
    let mut diag = vec![0.0; n];
    let mut off = Vec::with_capacity(segments.len());
    for (s, seg) in segments.iter().enumerate() {
        let a = ref_nodes[seg[0]];
        let b = ref_nodes[seg[1]];
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        if len <= 0.0 {
            return Err(SimError::mesh(format!("zero-length segment {s}")));
        }
        let mut m00 = 0.0;
        let mut m01 = 0.0;
        let mut m11 = 0.0;
        for (t, w) in GAUSS4 {
            let p0 = 1.0 - t;
            let p1 = t;
            m00 += w * p0 * p0 * len;
            m01 += w * p0 * p1 * len;
            m11 += w * p1 * p1 * len;
        }
        diag[seg[0]] += m00;
        diag[seg[1]] += m11;
        off.push((seg[0], seg[1], m01));
    }
    Ok(MassMatrix { diag, off })
}

/// L2 projection of quadrature-point samples onto the nodal basis: solves
/// `M c = b` with `b_l = integral psi phi_l dA`, by diagonally preconditioned
/// conjugate gradients to 1e-12 relative residual.
///
/// `samples[s][q]` is the integrand value on segment `s` at Gauss point `q`
/// of [`GAUSS4`].
pub fn l2_project(
    mass: &MassMatrix,
    ref_nodes: &[[f64; 2]],
    segments: &[[usize; 2]],
    samples: &[[f64; 4]],
) -> Result<Vec<f64>, SimError> {
    let n = mass.nodes();
    let mut b = vec![0.0; n];
    for (s, seg) in segments.iter().enumerate() {
        let a = ref_nodes[seg[0]];
        let bb = ref_nodes[seg[1]];
        let len = ((bb[0] - a[0]).powi(2) + (bb[1] - a[1]).powi(2)).sqrt();
        for (q, (t, w)) in GAUSS4.iter().enumerate() {
            let val = samples[s][q];
            b[seg[0]] += w * val * (1.0 - t) * len;
            b[seg[1]] += w * val * t * len;
        }
    }
    solve_mass_system(mass, &b)
}

/// CG solve of `M c = b`. Non-convergence signals a broken surface mesh.
pub fn solve_mass_system(mass: &MassMatrix, b: &[f64]) -> Result<Vec<f64>, SimError> {
    let n = mass.nodes();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut ap = vec![0.0; n];

    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if bnorm == 0.0 {
        return Ok(x);
    }
    let tol = 1e-12 * bnorm;

    for (zi, (ri, di)) in z.iter_mut().zip(r.iter().zip(mass.diag.iter())) {
        *zi = ri / di;
    }
    p.copy_from_slice(&z);
    let mut rz = r.iter().zip(z.iter()).map(|(a, b)| a * b).sum::<f64>();

    for _ in 0..10 * n.max(50) {
        mass.matvec(&p, &mut ap);
        let pap = p.iter().zip(ap.iter()).map(|(a, b)| a * b).sum::<f64>();
        let alpha = rz / pap;
        for ((xi, pi), (ri, api)) in x.iter_mut().zip(p.iter()).zip(r.iter_mut().zip(ap.iter())) {
            *xi += alpha * pi;
            *ri -= alpha * api;
        }
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= tol {
            return Ok(x);
        }
        for (zi, (ri, di)) in z.iter_mut().zip(r.iter().zip(mass.diag.iter())) {
            *zi = ri / di;
        }
        let rz_new = r.iter().zip(z.iter()).map(|(a, b)| a * b).sum::<f64>();
        let beta = rz_new / rz;
        rz = rz_new;
        for (pi, zi) in p.iter_mut().zip(z.iter()) {
            *pi = zi + beta * *pi;
        }
    }
    Err(SimError::solver(
        "mass-matrix CG did not reach 1e-12; surface mesh is broken",
    ))
}

/// Spring penalty force per unit reference length at the interface nodes:
/// `F_l = kappa (xi_l - chi_l)`.
pub fn penalty_force(
    xi: &[[f64; 2]],
    chi: &[[f64; 2]],
    kappa: f64,
    out: &mut Vec<[f64; 2]>,
) -> Result<(), SimError> {
    if xi.len() != chi.len() {
        return Err(SimError::mesh(format!(
            "penalty correspondence mismatch: {} body nodes vs {} interface nodes",
            xi.len(),
            chi.len()
        )));
    }
    out.clear();
    out.extend(
        xi.iter()
            .zip(chi.iter())
            .map(|(a, b)| [kappa * (a[0] - b[0]), kappa * (a[1] - b[1])]),
    );
    Ok(())
}

/// Rigid placement of reference points:
/// `xi(X) = Q (X - X_c) + X_c + d_c`.
pub fn rigid_map(q: [[f64; 2]; 2], x_c: [f64; 2], d_c: [f64; 2], points: &[[f64; 2]], out: &mut Vec<[f64; 2]>) {
    out.clear();
    out.extend(points.iter().map(|p| {
        let rx = p[0] - x_c[0];
        let ry = p[1] - x_c[1];
        [
            q[0][0] * rx + q[0][1] * ry + x_c[0] + d_c[0],
            q[1][0] * rx + q[1][1] * ry + x_c[1] + d_c[1],
        ]
    }));
}
