//! Ghosted scalar lattices and the staggered velocity/pressure containers.

use super::Grid2;

/// Ghost width on every side of every lattice. Three layers cover the widest
/// advection stencil.
pub const GHOST: usize = 3;
const G: i32 = GHOST as i32;

/// A 2D scalar array with `GHOST` layers on all sides. Logical indices run
/// `-GHOST..n+GHOST`; `(0,0)` is the first interior point.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarLattice {
    n1: usize,
    n2: usize,
    stride: usize,
    data: Vec<f64>,
}

impl ScalarLattice {
    pub fn zeros(n1: usize, n2: usize) -> Self {
        let stride = n1 + 2 * GHOST;
        let rows = n2 + 2 * GHOST;
        ScalarLattice {
            n1,
            n2,
            stride,
            data: vec![0.0; stride * rows],
        }
    }

    #[inline(always)]
    pub fn n1(&self) -> usize {
        self.n1
    }

    #[inline(always)]
    pub fn n2(&self) -> usize {
        self.n2
    }

    #[inline(always)]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline(always)]
    pub fn index(&self, i: i32, j: i32) -> usize {
        ((j + G) as usize) * self.stride + (i + G) as usize
    }

    #[inline(always)]
    pub fn get(&self, i: i32, j: i32) -> f64 {
        self.data[self.index(i, j)]
    }

    #[inline(always)]
    pub fn set(&mut self, i: i32, j: i32, value: f64) {
        let k = self.index(i, j);
        self.data[k] = value;
    }

    #[inline(always)]
    pub fn add(&mut self, i: i32, j: i32, value: f64) {
        let k = self.index(i, j);
        self.data[k] += value;
    }

    /// Storage row `j` (logical), spanning all ghost columns.
    #[inline(always)]
    pub fn row(&self, j: i32) -> &[f64] {
        let start = ((j + G) as usize) * self.stride;
        &self.data[start..start + self.stride]
    }

    #[inline(always)]
    pub fn row_mut(&mut self, j: i32) -> &mut [f64] {
        let start = ((j + G) as usize) * self.stride;
        &mut self.data[start..start + self.stride]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn fill(&mut self, value: f64) {
        self.data.fill(value);
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.n1 == other.n1 && self.n2 == other.n2
    }

    /// Interior rows as parallel-iterable mutable slices, tagged with the
    /// logical row index.
    pub fn interior_rows_mut(&mut self) -> impl rayon::iter::IndexedParallelIterator<Item = (i32, &mut [f64])> {
        use rayon::prelude::*;
        let stride = self.stride;
        self.data[GHOST * stride..(GHOST + self.n2) * stride]
            .par_chunks_mut(stride)
            .enumerate()
            .map(|(j, row)| (j as i32, row))
    }

    pub fn set_from_fn(&mut self, mut f: impl FnMut(i32, i32) -> f64) {
        for j in 0..self.n2 as i32 {
            for i in 0..self.n1 as i32 {
                self.set(i, j, f(i, j));
            }
        }
    }

    /// Max absolute value over interior points.
    pub fn linf_interior(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 0..self.n2 as i32 {
            let row = self.row(j);
            for i in 0..self.n1 {
                m = m.max(row[GHOST + i].abs());
            }
        }
        m
    }

    /// Sum of squares over interior points, accumulated in a fixed order.
    pub fn sumsq_interior(&self) -> f64 {
        let mut s = 0.0f64;
        for j in 0..self.n2 as i32 {
            let row = self.row(j);
            for i in 0..self.n1 {
                let v = row[GHOST + i];
                s += v * v;
            }
        }
        s
    }
}

/// Cell-centered scalar field (pressure, vorticity samples, ...).
#[derive(Clone, Debug, PartialEq)]
pub struct CellField {
    pub values: ScalarLattice,
}

impl CellField {
    pub fn zeros(grid: &Grid2) -> Self {
        CellField {
            values: ScalarLattice::zeros(grid.nx, grid.ny),
        }
    }

    pub fn from_fn(grid: &Grid2, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut field = CellField::zeros(grid);
        for j in 0..grid.ny as i32 {
            for i in 0..grid.nx as i32 {
                let (x, y) = grid.cell_center(i, j);
                field.values.set(i, j, f(x, y));
            }
        }
        field
    }

    pub fn matches(&self, grid: &Grid2) -> bool {
        self.values.n1() == grid.nx && self.values.n2() == grid.ny
    }

    pub fn mean_interior(&self) -> f64 {
        let mut s = 0.0;
        for j in 0..self.values.n2() as i32 {
            for i in 0..self.values.n1() as i32 {
                s += self.values.get(i, j);
            }
        }
        s / (self.values.n1() * self.values.n2()) as f64
    }
}

/// MAC velocity: `u` on x-normal faces ((nx+1) x ny), `v` on y-normal faces
/// (nx x (ny+1)).
#[derive(Clone, Debug, PartialEq)]
pub struct StaggeredField {
    pub u: ScalarLattice,
    pub v: ScalarLattice,
}

impl StaggeredField {
    pub fn zeros(grid: &Grid2) -> Self {
        StaggeredField {
            u: ScalarLattice::zeros(grid.nx + 1, grid.ny),
            v: ScalarLattice::zeros(grid.nx, grid.ny + 1),
        }
    }

    pub fn from_fn(
        grid: &Grid2,
        mut fu: impl FnMut(f64, f64) -> f64,
        mut fv: impl FnMut(f64, f64) -> f64,
    ) -> Self {
        let mut vel = StaggeredField::zeros(grid);
        for j in 0..grid.ny as i32 {
            for i in 0..grid.nx as i32 + 1 {
                let (x, y) = grid.u_face(i, j);
                vel.u.set(i, j, fu(x, y));
            }
        }
        for j in 0..grid.ny as i32 + 1 {
            for i in 0..grid.nx as i32 {
                let (x, y) = grid.v_face(i, j);
                vel.v.set(i, j, fv(x, y));
            }
        }
        vel
    }

    pub fn matches(&self, grid: &Grid2) -> bool {
        self.u.n1() == grid.nx + 1
            && self.u.n2() == grid.ny
            && self.v.n1() == grid.nx
            && self.v.n2() == grid.ny + 1
    }

    pub fn linf(&self) -> f64 {
        self.u.linf_interior().max(self.v.linf_interior())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghost_indexing_round_trip() {
        let mut a = ScalarLattice::zeros(4, 3);
        a.set(-3, -3, 1.0);
        a.set(6, 5, 2.0);
        a.set(0, 0, 3.0);
        assert_eq!(a.get(-3, -3), 1.0);
        assert_eq!(a.get(6, 5), 2.0);
        assert_eq!(a.get(0, 0), 3.0);
    }

    #[test]
    fn interior_norms_ignore_ghosts() {
        let mut a = ScalarLattice::zeros(2, 2);
        a.set(-1, 0, 100.0);
        a.set(0, 0, -2.0);
        assert_eq!(a.linf_interior(), 2.0);
        assert_eq!(a.sumsq_interior(), 4.0);
    }
}
