//! Flexible GMRES with right preconditioning, modified Gram-Schmidt, and
//! Givens rotations. Flexibility (storing the preconditioned vectors) lets the
//! preconditioner run inexact inner solves with iteration caps.

use super::vec::SaddleVec;
use crate::error::SimError;

#[derive(Clone, Copy, Debug)]
pub struct FgmresControls {
    pub tol: f64,
    pub max_iters: usize,
    pub restart: usize,
}

impl Default for FgmresControls {
    fn default() -> Self {
        FgmresControls {
            tol: 1e-8,
            max_iters: 200,
            restart: 30,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FgmresStats {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Krylov basis storage reused across solves.
pub struct FgmresWorkspace {
    basis: Vec<SaddleVec>,
    precond: Vec<SaddleVec>,
    scratch: SaddleVec,
    restart: usize,
}

impl FgmresWorkspace {
    pub fn new(template: &SaddleVec, restart: usize) -> Self {
        FgmresWorkspace {
            basis: (0..=restart).map(|_| SaddleVec::zeros_like(template)).collect(),
            precond: (0..restart).map(|_| SaddleVec::zeros_like(template)).collect(),
            scratch: SaddleVec::zeros_like(template),
            restart,
        }
    }
}

/// Solve `A x = b`; `x` enters as the initial guess and convergence is
/// relative to `||b||`. The operator and preconditioner share a mutable
/// context (scratch buffers) threaded through both calls.
pub fn fgmres<Ctx>(
    ctx: &mut Ctx,
    op: impl Fn(&mut Ctx, &SaddleVec, &mut SaddleVec),
    pre: impl Fn(&mut Ctx, &SaddleVec, &mut SaddleVec),
    b: &SaddleVec,
    x: &mut SaddleVec,
    ws: &mut FgmresWorkspace,
    controls: &FgmresControls,
) -> Result<FgmresStats, SimError> {
    let m = ws.restart.min(controls.max_iters);
    if m == 0 {
        return Err(SimError::solver("fgmres restart length must be positive"));
    }
    let bnorm = b.norm();
    if bnorm == 0.0 {
        x.fill(0.0);
        return Ok(FgmresStats {
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }
    let target = controls.tol * bnorm;

    let mut h = vec![vec![0.0f64; m]; m + 1];
    let mut cs = vec![0.0f64; m];
    let mut sn = vec![0.0f64; m];
    let mut g = vec![0.0f64; m + 1];

    let mut total_iters = 0usize;
    loop {
        op(ctx, x, &mut ws.scratch);
        ws.basis[0].copy_from(b);
        let scratch = &ws.scratch;
        ws.basis[0].axpy(-1.0, scratch);
        let beta = ws.basis[0].norm();
        if beta <= target {
            return Ok(FgmresStats {
                iterations: total_iters,
                residual: beta / bnorm,
                converged: true,
            });
        }
        ws.basis[0].scale(1.0 / beta);
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;

        let mut filled = 0usize;
        for j in 0..m {
            pre(ctx, &ws.basis[j], &mut ws.precond[j]);
            op(ctx, &ws.precond[j], &mut ws.scratch);

            for (i, vi) in ws.basis.iter().enumerate().take(j + 1) {
                let hij = ws.scratch.dot(vi);
                h[i][j] = hij;
                ws.scratch.axpy(-hij, vi);
            }
            let hn = ws.scratch.norm();
            h[j + 1][j] = hn;
            if hn > 0.0 {
                ws.scratch.scale(1.0 / hn);
            }
            ws.basis[j + 1].copy_from(&ws.scratch);

            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let denom = (h[j][j] * h[j][j] + h[j + 1][j] * h[j + 1][j]).sqrt();
            if denom == 0.0 {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else {
                cs[j] = h[j][j] / denom;
                sn[j] = h[j + 1][j] / denom;
            }
            h[j][j] = cs[j] * h[j][j] + sn[j] * h[j + 1][j];
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];

            total_iters += 1;
            filled = j + 1;
            if g[j + 1].abs() <= target || total_iters >= controls.max_iters {
                break;
            }
        }

        let mut y = vec![0.0f64; filled];
        for i in (0..filled).rev() {
            let mut s = g[i];
            for (k, yk) in y.iter().enumerate().take(filled).skip(i + 1) {
                s -= h[i][k] * yk;
            }
            y[i] = s / h[i][i];
        }
        for (zi, yi) in ws.precond.iter().zip(y.iter()) {
            x.axpy(*yi, zi);
        }

        let res = g[filled].abs();
        if res <= target {
            return Ok(FgmresStats {
                iterations: total_iters,
                residual: res / bnorm,
                converged: true,
            });
        }
        if total_iters >= controls.max_iters {
            return Ok(FgmresStats {
                iterations: total_iters,
                residual: res / bnorm,
                converged: false,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_spd_system() {
        let n = 40;
        let apply = |_: &mut (), x: &SaddleVec, y: &mut SaddleVec| {
            for i in 0..n {
                let xm = if i > 0 { x.u[i - 1] } else { 0.0 };
                let xp = if i + 1 < n { x.u[i + 1] } else { 0.0 };
                y.u[i] = 2.0 * x.u[i] - xm - xp;
            }
        };
        let pre = |_: &mut (), r: &SaddleVec, z: &mut SaddleVec| {
            for i in 0..n {
                z.u[i] = r.u[i] / 2.0;
            }
        };
        let mut b = SaddleVec::zeros(n, 0, 0);
        for i in 0..n {
            b.u[i] = (i as f64 * 0.3).sin();
        }
        let mut x = SaddleVec::zeros(n, 0, 0);
        let mut ws = FgmresWorkspace::new(&b, 25);
        let stats = fgmres(
            &mut (),
            apply,
            pre,
            &b,
            &mut x,
            &mut ws,
            &FgmresControls {
                tol: 1e-12,
                max_iters: 500,
                restart: 25,
            },
        )
        .unwrap();
        assert!(stats.converged, "residual {}", stats.residual);
        let mut ax = SaddleVec::zeros(n, 0, 0);
        apply(&mut (), &x, &mut ax);
        ax.axpy(-1.0, &b);
        assert!(ax.norm() <= 1e-10 * b.norm());
    }

    #[test]
    fn warm_start_counts_existing_progress() {
        // with the exact solution as the initial guess no iterations are needed
        let apply = |_: &mut (), x: &SaddleVec, y: &mut SaddleVec| {
            for i in 0..4 {
                y.u[i] = 3.0 * x.u[i];
            }
        };
        let mut b = SaddleVec::zeros(4, 0, 0);
        b.u.copy_from_slice(&[3.0, 6.0, 9.0, 12.0]);
        let mut x = SaddleVec::zeros(4, 0, 0);
        x.u.copy_from_slice(&[1.0, 2.0, 3.0, 4.0]);
        let mut ws = FgmresWorkspace::new(&b, 4);
        let stats = fgmres(&mut (), apply, |_, r, z| z.copy_from(r), &b, &mut x, &mut ws, &FgmresControls::default()).unwrap();
        assert!(stats.converged);
        assert_eq!(stats.iterations, 0);
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let b = SaddleVec::zeros(5, 0, 0);
        let mut x = SaddleVec::zeros(5, 0, 0);
        x.u[0] = 3.0;
        let mut ws = FgmresWorkspace::new(&b, 5);
        let stats = fgmres(
            &mut (),
            |_, x, y| y.copy_from(x),
            |_, r, z| z.copy_from(r),
            &b,
            &mut x,
            &mut ws,
            &FgmresControls::default(),
        )
        .unwrap();
        assert!(stats.converged);
        assert_eq!(x.u[0], 0.0);
    }
}
