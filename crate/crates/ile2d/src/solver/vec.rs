//! Flat solution vectors for the coupled velocity-pressure system, with
//! reductions that are bit-reproducible regardless of thread count: parallel
//! work is split at fixed chunk boundaries and the partial sums are combined
//! in index order.

use rayon::prelude::*;

const CHUNK: usize = 1 << 15;
const PAR_MIN: usize = 1 << 16;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() < PAR_MIN {
        return a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
    }
    let partials: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(ca, cb)| ca.iter().zip(cb.iter()).map(|(x, y)| x * y).sum::<f64>())
        .collect();
    partials.iter().sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    if x.len() < PAR_MIN {
        for (yi, xi) in y.iter_mut().zip(x.iter()) {
            *yi += alpha * xi;
        }
    } else {
        y.par_chunks_mut(CHUNK).zip(x.par_chunks(CHUNK)).for_each(|(cy, cx)| {
            for (yi, xi) in cy.iter_mut().zip(cx.iter()) {
                *yi += alpha * xi;
            }
        });
    }
}

pub fn scale(alpha: f64, y: &mut [f64]) {
    if y.len() < PAR_MIN {
        for yi in y.iter_mut() {
            *yi *= alpha;
        }
    } else {
        y.par_chunks_mut(CHUNK).for_each(|cy| {
            for yi in cy.iter_mut() {
                *yi *= alpha;
            }
        });
    }
}

/// Velocity-pressure unknown vector: `u` on x-faces, `v` on y-faces, `p` at
/// cells, each stored flat without ghosts.
#[derive(Clone, Debug)]
pub struct SaddleVec {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
}

impl SaddleVec {
    pub fn zeros(nu: usize, nv: usize, np: usize) -> Self {
        SaddleVec {
            u: vec![0.0; nu],
            v: vec![0.0; nv],
            p: vec![0.0; np],
        }
    }

    pub fn zeros_like(other: &Self) -> Self {
        Self::zeros(other.u.len(), other.v.len(), other.p.len())
    }

    pub fn fill(&mut self, value: f64) {
        self.u.fill(value);
        self.v.fill(value);
        self.p.fill(value);
    }

    pub fn copy_from(&mut self, other: &Self) {
        self.u.copy_from_slice(&other.u);
        self.v.copy_from_slice(&other.v);
        self.p.copy_from_slice(&other.p);
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(&self.u, &other.u) + dot(&self.v, &other.v) + dot(&self.p, &other.p)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn axpy(&mut self, alpha: f64, x: &Self) {
        axpy(alpha, &x.u, &mut self.u);
        axpy(alpha, &x.v, &mut self.v);
        axpy(alpha, &x.p, &mut self.p);
    }

    pub fn scale(&mut self, alpha: f64) {
        scale(alpha, &mut self.u);
        scale(alpha, &mut self.v);
        scale(alpha, &mut self.p);
    }
}
