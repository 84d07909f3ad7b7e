//! Geometric multigrid for the cell-centered pressure Poisson operator
//! (the composition of the discrete divergence and pressure gradient).
//! Used as the approximate subdomain solve inside the projection
//! preconditioner; a couple of V-cycles per application suffice.

use rayon::prelude::*;

use crate::grid::{ScalarLattice, GHOST};

struct Level {
    nx: usize,
    ny: usize,
    h: f64,
    phi: ScalarLattice,
    rhs: ScalarLattice,
    res: ScalarLattice,
}

/// Per-side sign of the one-ghost mirror fill: -1 pins the value to zero on
/// the boundary (outflow), +1 imposes zero normal derivative.
#[derive(Clone, Copy)]
struct GhostSigns {
    left: f64,
    right: f64,
    bottom: f64,
    top: f64,
}

pub struct PoissonMg {
    levels: Vec<Level>,
    signs: GhostSigns,
    all_neumann: bool,
    pre_sweeps: usize,
    post_sweeps: usize,
    coarse_sweeps: usize,
}

fn fill_ghosts(phi: &mut ScalarLattice, signs: &GhostSigns) {
    let nx = phi.n1() as i32;
    let ny = phi.n2() as i32;
    for j in 0..ny {
        let v = phi.get(0, j);
        phi.set(-1, j, signs.left * v);
        let v = phi.get(nx - 1, j);
        phi.set(nx, j, signs.right * v);
    }
    for i in -1..=nx {
        let v = phi.get(i, 0);
        phi.set(i, -1, signs.bottom * v);
        let v = phi.get(i, ny - 1);
        phi.set(i, ny, signs.top * v);
    }
}

impl PoissonMg {
    /// `dirichlet` flags the sides where the pressure is pinned to zero
    /// (outflow sides), ordered left/right/bottom/top.
    pub fn new(nx: usize, ny: usize, h: f64, dirichlet: [bool; 4]) -> Self {
        let signs = GhostSigns {
            left: if dirichlet[0] { -1.0 } else { 1.0 },
            right: if dirichlet[1] { -1.0 } else { 1.0 },
            bottom: if dirichlet[2] { -1.0 } else { 1.0 },
            top: if dirichlet[3] { -1.0 } else { 1.0 },
        };
        let mut levels = Vec::new();
        let (mut cnx, mut cny, mut ch) = (nx, ny, h);
        loop {
            levels.push(Level {
                nx: cnx,
                ny: cny,
                h: ch,
                phi: ScalarLattice::zeros(cnx, cny),
                rhs: ScalarLattice::zeros(cnx, cny),
                res: ScalarLattice::zeros(cnx, cny),
            });
            if cnx % 2 != 0 || cny % 2 != 0 || cnx <= 8 || cny <= 8 || levels.len() >= 16 {
                break;
            }
            cnx /= 2;
            cny /= 2;
            ch *= 2.0;
        }
        PoissonMg {
            levels,
            signs,
            all_neumann: !dirichlet.iter().any(|d| *d),
            pre_sweeps: 2,
            post_sweeps: 2,
            coarse_sweeps: 80,
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    fn smooth(level: &mut Level, signs: &GhostSigns, sweeps: usize) {
        struct SendPtr(*mut f64);
        unsafe impl Send for SendPtr {}
        unsafe impl Sync for SendPtr {}

        let nx = level.nx;
        let ny = level.ny;
        let h2 = level.h * level.h;
        for _ in 0..sweeps {
            for color in 0..2usize {
                fill_ghosts(&mut level.phi, signs);
                let stride = level.phi.stride();
                let base = GHOST * stride + GHOST;
                let rhs = &level.rhs;
                let ptr = SendPtr(level.phi.data_mut().as_mut_ptr());
                let ptr = &ptr;
                // Within one color every write lands on that color and every
                // read on the other, so rows can be swept in parallel through
                // disjoint raw-pointer writes.
                (0..ny).into_par_iter().for_each(move |j| {
                    let p = ptr.0;
                    let row = base + j * stride;
                    let rrow = rhs.row(j as i32);
                    let mut i = (j + color) % 2;
                    while i < nx {
                        let k = row + i;
                        unsafe {
                            let sum = *p.add(k - 1)
                                + *p.add(k + 1)
                                + *p.add(k - stride)
                                + *p.add(k + stride);
                            *p.add(k) = 0.25 * (sum - h2 * rrow[GHOST + i]);
                        }
                        i += 2;
                    }
                });
            }
        }
    }

    fn residual(level: &mut Level, signs: &GhostSigns) {
        fill_ghosts(&mut level.phi, signs);
        let nx = level.nx;
        let h2_inv = 1.0 / (level.h * level.h);
        let phi = &level.phi;
        let rhs = &level.rhs;
        level.res.interior_rows_mut().for_each(|(j, out)| {
            let pm = phi.row(j - 1);
            let p0 = phi.row(j);
            let pp = phi.row(j + 1);
            let rr = rhs.row(j);
            for i in 0..nx {
                let k = GHOST + i;
                let lap = (p0[k - 1] + p0[k + 1] + pm[k] + pp[k] - 4.0 * p0[k]) * h2_inv;
                out[k] = rr[k] - lap;
            }
        });
    }

    fn vcycle(&mut self, depth: usize) {
        let last = self.levels.len() - 1;
        if depth == last {
            Self::smooth(&mut self.levels[depth], &self.signs, self.coarse_sweeps);
            return;
        }
        Self::smooth(&mut self.levels[depth], &self.signs, self.pre_sweeps);
        Self::residual(&mut self.levels[depth], &self.signs);

        // restrict residual by 4-cell averaging
        {
            let (fine, coarse) = self.levels.split_at_mut(depth + 1);
            let fine = &fine[depth];
            let coarse = &mut coarse[0];
            let cnx = coarse.nx;
            coarse.phi.fill(0.0);
            coarse.rhs.interior_rows_mut().for_each(|(cj, out)| {
                let r0 = fine.res.row(2 * cj);
                let r1 = fine.res.row(2 * cj + 1);
                for ci in 0..cnx {
                    let k = GHOST + 2 * ci;
                    out[GHOST + ci] = 0.25 * (r0[k] + r0[k + 1] + r1[k] + r1[k + 1]);
                }
            });
        }

        self.vcycle(depth + 1);

        // bilinear cell-centered prolongation, then post-smooth
        {
            let (fine, coarse) = self.levels.split_at_mut(depth + 1);
            let fine = &mut fine[depth];
            let coarse = &mut coarse[0];
            fill_ghosts(&mut coarse.phi, &self.signs);
            let cphi = &coarse.phi;
            let nx = fine.nx;
            fine.phi.interior_rows_mut().for_each(|(j, out)| {
                let cj = (j / 2) as i32;
                let wj = if j % 2 == 0 { -1 } else { 1 };
                let c0 = cphi.row(cj);
                let c1 = cphi.row(cj + wj);
                for i in 0..nx {
                    let ci = (i / 2) as i32;
                    let wi: i32 = if i % 2 == 0 { -1 } else { 1 };
                    let k0 = GHOST as i32 + ci;
                    let k1 = GHOST as i32 + ci + wi;
                    let val = (9.0 * c0[k0 as usize]
                        + 3.0 * c0[k1 as usize]
                        + 3.0 * c1[k0 as usize]
                        + c1[k1 as usize])
                        / 16.0;
                    out[GHOST + i] += val;
                }
            });
        }
        Self::smooth(&mut self.levels[depth], &self.signs, self.post_sweeps);
    }

    fn subtract_mean(values: &mut ScalarLattice) {
        let n = (values.n1() * values.n2()) as f64;
        let mut s = 0.0;
        for j in 0..values.n2() as i32 {
            let row = values.row(j);
            for i in 0..values.n1() {
                s += row[GHOST + i];
            }
        }
        let mean = s / n;
        let n1 = values.n1();
        for j in 0..values.n2() as i32 {
            let row = values.row_mut(j);
            for v in row[GHOST..GHOST + n1].iter_mut() {
                *v -= mean;
            }
        }
    }

    /// Approximately solve `Laplacian(phi) = rhs` starting from zero, running
    /// `cycles` V-cycles. `rhs` and `phi` are interior-only flat arrays in
    /// row-major order.
    pub fn solve_approx(&mut self, rhs: &[f64], phi: &mut [f64], cycles: usize) {
        {
            let lvl = &mut self.levels[0];
            debug_assert_eq!(rhs.len(), lvl.nx * lvl.ny);
            let nx = lvl.nx;
            lvl.rhs.interior_rows_mut().for_each(|(j, out)| {
                let src = &rhs[(j as usize) * nx..(j as usize + 1) * nx];
                out[GHOST..GHOST + nx].copy_from_slice(src);
            });
            if self.all_neumann {
                Self::subtract_mean(&mut lvl.rhs);
            }
            lvl.phi.fill(0.0);
        }
        for _ in 0..cycles {
            self.vcycle(0);
        }
        if self.all_neumann {
            Self::subtract_mean(&mut self.levels[0].phi);
        }
        let lvl = &self.levels[0];
        let nx = lvl.nx;
        for j in 0..lvl.ny {
            let row = lvl.phi.row(j as i32);
            phi[j * nx..(j + 1) * nx].copy_from_slice(&row[GHOST..GHOST + nx]);
        }
    }
}
