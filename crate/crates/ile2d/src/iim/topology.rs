//! Intersections between the finite-difference stencils and the interface:
//! grid-line crossing scans, inside/outside parity masks for every lattice,
//! cut-arm records, and a segment bin structure for arbitrary segment queries.

use super::InterfaceMesh;
use crate::error::SimError;
use crate::grid::Grid2;

/// A point where the interface crosses a grid line or a query segment.
#[derive(Clone, Copy, Debug)]
pub struct Crossing {
    pub pos: [f64; 2],
    pub seg: usize,
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Which corrected operator a record belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArmKind {
    /// Pressure-gradient arm feeding a u face (cells (i-1,j) -> (i,j)).
    GradU,
    /// Pressure-gradient arm feeding a v face (cells (i,j-1) -> (i,j)).
    GradV,
    /// Laplacian arm of the u component.
    LapU,
    /// Laplacian arm of the v component.
    LapV,
}

/// One cut stencil arm. `owner` is the face whose equation the correction
/// repairs; the arm runs from the owner-side point toward `dir` along `axis`
/// and crosses the interface at `crossing`.
#[derive(Clone, Copy, Debug)]
pub struct ArmRecord {
    pub kind: ArmKind,
    pub axis: Axis,
    pub owner: (i32, i32),
    /// +1 or -1: logical direction from the owner-side stencil point to the
    /// wrong-side point. For gradient arms the owner is the face between the
    /// two cells and `dir` points at the wrong-side cell.
    pub dir: i32,
    pub crossing: Crossing,
    /// Distance from the crossing to the wrong-side stencil point.
    pub d_plus: f64,
    /// Side of the owner: +1 exterior fluid, -1 interior.
    pub owner_side: i8,
    /// More than one crossing on this arm (under-resolution diagnostic).
    pub multiple: bool,
}

/// All cut arms for the current interface configuration, together with the
/// inside masks of every lattice and binned segments for point queries.
pub struct CorrectionSet {
    pub records: Vec<ArmRecord>,
    /// Number of arms with multiple crossings (resolution warnings).
    pub warnings: usize,
    pub(crate) cell_mask: Vec<u8>,
    pub(crate) u_mask: Vec<u8>,
    pub(crate) v_mask: Vec<u8>,
    bins: SegmentBins,
    grid: Grid2,
}

struct SegmentBins {
    nx: usize,
    ny: usize,
    inv_h: f64,
    x0: f64,
    y0: f64,
    cells: Vec<Vec<u32>>,
}

impl SegmentBins {
    fn build(mesh: &InterfaceMesh, grid: &Grid2) -> Self {
        let nx = grid.nx;
        let ny = grid.ny;
        let mut cells = vec![Vec::new(); nx * ny];
        let h = grid.h();
        for (s, seg) in mesh.segments.iter().enumerate() {
            let a = mesh.position[seg[0]];
            let b = mesh.position[seg[1]];
            let pad = 1e-9 * h;
            let xmin = ((a[0].min(b[0]) - grid.x0 - pad) / h).floor().max(0.0) as usize;
            let xmax = ((a[0].max(b[0]) - grid.x0 + pad) / h).floor().min((nx - 1) as f64) as usize;
            let ymin = ((a[1].min(b[1]) - grid.y0 - pad) / h).floor().max(0.0) as usize;
            let ymax = ((a[1].max(b[1]) - grid.y0 + pad) / h).floor().min((ny - 1) as f64) as usize;
            for j in ymin..=ymax {
                for i in xmin..=xmax {
                    cells[j * nx + i].push(s as u32);
                }
            }
        }
        SegmentBins {
            nx,
            ny,
            inv_h: 1.0 / h,
            x0: grid.x0,
            y0: grid.y0,
            cells,
        }
    }

    /// Visit candidate segments near the box of `p`-`q` (deduplicated).
    fn candidates(&self, p: [f64; 2], q: [f64; 2], out: &mut Vec<u32>) {
        out.clear();
        let xmin = (((p[0].min(q[0])) - self.x0) * self.inv_h).floor().max(0.0) as usize;
        let xmax = (((p[0].max(q[0])) - self.x0) * self.inv_h)
            .floor()
            .min((self.nx - 1) as f64) as usize;
        let ymin = (((p[1].min(q[1])) - self.y0) * self.inv_h).floor().max(0.0) as usize;
        let ymax = (((p[1].max(q[1])) - self.y0) * self.inv_h)
            .floor()
            .min((self.ny - 1) as f64) as usize;
        for j in ymin..=ymax {
            for i in xmin..=xmax {
                for &s in &self.cells[j * self.nx + i] {
                    if !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
        }
    }
}

/// Segment-segment intersection; returns the parameter on `p->q` and on the
/// mesh segment.
fn intersect(p: [f64; 2], q: [f64; 2], a: [f64; 2], b: [f64; 2]) -> Option<(f64, f64)> {
    let r = [q[0] - p[0], q[1] - p[1]];
    let s = [b[0] - a[0], b[1] - a[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    if denom == 0.0 {
        return None;
    }
    let ap = [a[0] - p[0], a[1] - p[1]];
    let tq = (ap[0] * s[1] - ap[1] * s[0]) / denom;
    let tm = (ap[0] * r[1] - ap[1] * r[0]) / denom;
    if (0.0..=1.0).contains(&tq) && (0.0..=1.0).contains(&tm) {
        Some((tq, tm))
    } else {
        None
    }
}

impl CorrectionSet {
    #[inline]
    pub fn cell_inside(&self, i: i32, j: i32) -> bool {
        if i < 0 || j < 0 || i >= self.grid.nx as i32 || j >= self.grid.ny as i32 {
            return false;
        }
        self.cell_mask[(j as usize) * self.grid.nx + i as usize] != 0
    }

    #[inline]
    pub fn u_inside(&self, i: i32, j: i32) -> bool {
        if i < 0 || j < 0 || i > self.grid.nx as i32 || j >= self.grid.ny as i32 {
            return false;
        }
        self.u_mask[(j as usize) * (self.grid.nx + 1) + i as usize] != 0
    }

    #[inline]
    pub fn v_inside(&self, i: i32, j: i32) -> bool {
        if i < 0 || j < 0 || i >= self.grid.nx as i32 || j > self.grid.ny as i32 {
            return false;
        }
        self.v_mask[(j as usize) * self.grid.nx + i as usize] != 0
    }

    /// Nearest interface crossing along `p -> q`, if any.
    pub(crate) fn first_crossing(
        &self,
        mesh: &InterfaceMesh,
        p: [f64; 2],
        q: [f64; 2],
        scratch: &mut Vec<u32>,
    ) -> Option<Crossing> {
        self.bins.candidates(p, q, scratch);
        let mut best: Option<(f64, Crossing)> = None;
        for &s in scratch.iter() {
            let seg = mesh.segments[s as usize];
            let a = mesh.position[seg[0]];
            let b = mesh.position[seg[1]];
            if let Some((tq, tm)) = intersect(p, q, a, b) {
                let pos = [a[0] + tm * (b[0] - a[0]), a[1] + tm * (b[1] - a[1])];
                let cand = Crossing {
                    pos,
                    seg: s as usize,
                    t: tm,
                };
                match &best {
                    Some((t_old, _)) if *t_old <= tq => {}
                    _ => best = Some((tq, cand)),
                }
            }
        }
        best.map(|(_, c)| c)
    }

    /// Whether an arbitrary point lies in the interior fluid region, resolved
    /// from the containing cell's parity plus crossings of the short segment
    /// from the cell center to the point.
    pub fn point_inside(&self, mesh: &InterfaceMesh, p: [f64; 2], scratch: &mut Vec<u32>) -> bool {
        let h = self.grid.h();
        let ci = ((p[0] - self.grid.x0) / h).floor() as i32;
        let cj = ((p[1] - self.grid.y0) / h).floor() as i32;
        let mut inside = self.cell_inside(ci, cj);
        if ci < 0 || cj < 0 || ci >= self.grid.nx as i32 || cj >= self.grid.ny as i32 {
            return false;
        }
        let (cx, cy) = self.grid.cell_center(ci, cj);
        self.bins.candidates([cx, cy], p, scratch);
        for &s in scratch.iter() {
            let seg = mesh.segments[s as usize];
            let a = mesh.position[seg[0]];
            let b = mesh.position[seg[1]];
            if intersect([cx, cy], p, a, b).is_some() {
                inside = !inside;
            }
        }
        inside
    }
}

/// Crossings of the interface with one family of horizontal lines
/// `y = y_of(j)`, `j = 0..count`, as per-line sorted lists.
fn scan_horizontal(
    mesh: &InterfaceMesh,
    count: usize,
    y_of: impl Fn(usize) -> f64,
    y_index: impl Fn(f64) -> (i32, i32),
    tie_shift: f64,
) -> Vec<Vec<Crossing>> {
    let mut lines: Vec<Vec<Crossing>> = vec![Vec::new(); count];
    for (s, seg) in mesh.segments.iter().enumerate() {
        let a = mesh.position[seg[0]];
        let b = mesh.position[seg[1]];
        let (lo, _) = y_index(a[1].min(b[1]));
        let (_, hi) = y_index(a[1].max(b[1]));
        let j_lo = lo.max(0);
        let j_hi = hi.min(count as i32 - 1);
        for j in j_lo..=j_hi {
            let y = y_of(j as usize);
            // half-open convention so a shared endpoint is counted once
            let crosses = (a[1] <= y && y < b[1]) || (b[1] <= y && y < a[1]);
            if !crosses {
                continue;
            }
            let t = (y - a[1]) / (b[1] - a[1]);
            let mut x = a[0] + t * (b[0] - a[0]);
            // deterministic tie-break off exact lattice coordinates
            let snapped = ((x / tie_shift).round() * tie_shift - x).abs();
            if snapped < 1e-12 * tie_shift {
                x += 1e-12 * tie_shift;
            }
            lines[j as usize].push(Crossing {
                pos: [x, y],
                seg: s,
                t,
            });
        }
    }
    for line in &mut lines {
        line.sort_by(|a, b| a.pos[0].partial_cmp(&b.pos[0]).unwrap());
    }
    lines
}

fn scan_vertical(
    mesh: &InterfaceMesh,
    count: usize,
    x_of: impl Fn(usize) -> f64,
    x_index: impl Fn(f64) -> (i32, i32),
    tie_shift: f64,
) -> Vec<Vec<Crossing>> {
    let mut lines: Vec<Vec<Crossing>> = vec![Vec::new(); count];
    for (s, seg) in mesh.segments.iter().enumerate() {
        let a = mesh.position[seg[0]];
        let b = mesh.position[seg[1]];
        let (lo, _) = x_index(a[0].min(b[0]));
        let (_, hi) = x_index(a[0].max(b[0]));
        let i_lo = lo.max(0);
        let i_hi = hi.min(count as i32 - 1);
        for i in i_lo..=i_hi {
            let x = x_of(i as usize);
            let crosses = (a[0] <= x && x < b[0]) || (b[0] <= x && x < a[0]);
            if !crosses {
                continue;
            }
            let t = (x - a[0]) / (b[0] - a[0]);
            let mut y = a[1] + t * (b[1] - a[1]);
            let snapped = ((y / tie_shift).round() * tie_shift - y).abs();
            if snapped < 1e-12 * tie_shift {
                y += 1e-12 * tie_shift;
            }
            lines[i as usize].push(Crossing {
                pos: [x, y],
                seg: s,
                t,
            });
        }
    }
    for line in &mut lines {
        line.sort_by(|a, b| a.pos[1].partial_cmp(&b.pos[1]).unwrap());
    }
    lines
}

/// Parity mask along one line: `coords[k]` inside if an odd number of
/// crossings lie below it.
fn line_mask(crossings: &[Crossing], coord_of: impl Fn(usize) -> f64, count: usize, along: Axis, out: &mut [u8]) {
    let mut c = 0usize;
    for k in 0..count {
        let x = coord_of(k);
        while c < crossings.len()
            && match along {
                Axis::X => crossings[c].pos[0] < x,
                Axis::Y => crossings[c].pos[1] < x,
            }
        {
            c += 1;
        }
        out[k] = (c % 2) as u8;
    }
}

/// Find crossings strictly between scalar coordinates `lo` and `hi` in a
/// sorted line; returns (nearest-to-`from_lo` crossing, count).
fn crossings_between(line: &[Crossing], lo: f64, hi: f64, along: Axis, from_lo: bool) -> (Option<Crossing>, usize) {
    let coord = |c: &Crossing| match along {
        Axis::X => c.pos[0],
        Axis::Y => c.pos[1],
    };
    let start = line.partition_point(|c| coord(c) < lo);
    let end = line.partition_point(|c| coord(c) < hi);
    let n = end - start;
    if n == 0 {
        return (None, 0);
    }
    let pick = if from_lo { start } else { end - 1 };
    (Some(line[pick]), n)
}

/// Identify every gradient and Laplacian stencil arm that the interface cuts
/// and record the crossing nearest the stencil owner, together with the
/// inside/outside masks of all lattices.
pub fn locate_intersections(mesh: &InterfaceMesh, grid: &Grid2) -> Result<CorrectionSet, SimError> {
    let h = grid.h();
    let nx = grid.nx;
    let ny = grid.ny;

    // the interface must stay at least one cell inside the domain
    for p in &mesh.position {
        if !grid.contains_with_margin(p[0], p[1], h) {
            return Err(SimError::mesh(format!(
                "interface node ({}, {}) is within one cell of the domain boundary",
                p[0], p[1]
            )));
        }
    }

    // crossing scans for the two line families
    let cell_rows = scan_horizontal(
        mesh,
        ny,
        |j| grid.y0 + (j as f64 + 0.5) * h,
        |y| {
            let f = (y - grid.y0) / h - 0.5;
            (f.floor() as i32, f.ceil() as i32 + 1)
        },
        h,
    );
    let node_rows = scan_horizontal(
        mesh,
        ny + 1,
        |j| grid.y0 + j as f64 * h,
        |y| {
            let f = (y - grid.y0) / h;
            (f.floor() as i32, f.ceil() as i32 + 1)
        },
        h,
    );
    let cell_cols = scan_vertical(
        mesh,
        nx,
        |i| grid.x0 + (i as f64 + 0.5) * h,
        |x| {
            let f = (x - grid.x0) / h - 0.5;
            (f.floor() as i32, f.ceil() as i32 + 1)
        },
        h,
    );
    let node_cols = scan_vertical(
        mesh,
        nx + 1,
        |i| grid.x0 + i as f64 * h,
        |x| {
            let f = (x - grid.x0) / h;
            (f.floor() as i32, f.ceil() as i32 + 1)
        },
        h,
    );

    // masks: cells and u faces live on cell rows, v faces on node rows
    let mut cell_mask = vec![0u8; nx * ny];
    let mut u_mask = vec![0u8; (nx + 1) * ny];
    let mut v_mask = vec![0u8; nx * (ny + 1)];
    for j in 0..ny {
        line_mask(
            &cell_rows[j],
            |i| grid.x0 + (i as f64 + 0.5) * h,
            nx,
            Axis::X,
            &mut cell_mask[j * nx..(j + 1) * nx],
        );
        line_mask(
            &cell_rows[j],
            |i| grid.x0 + i as f64 * h,
            nx + 1,
            Axis::X,
            &mut u_mask[j * (nx + 1)..(j + 1) * (nx + 1)],
        );
    }
    for j in 0..=ny {
        line_mask(
            &node_rows[j],
            |i| grid.x0 + (i as f64 + 0.5) * h,
            nx,
            Axis::X,
            &mut v_mask[j * nx..(j + 1) * nx],
        );
    }

    let mut records = Vec::new();
    let mut warnings = 0usize;

    let cell_at = |i: i32, j: i32| -> bool {
        if i < 0 || j < 0 || i >= nx as i32 || j >= ny as i32 {
            false
        } else {
            cell_mask[(j as usize) * nx + i as usize] != 0
        }
    };
    let u_at = |i: i32, j: i32| -> bool {
        if i < 0 || j < 0 || i > nx as i32 || j >= ny as i32 {
            false
        } else {
            u_mask[(j as usize) * (nx + 1) + i as usize] != 0
        }
    };
    let v_at = |i: i32, j: i32| -> bool {
        if i < 0 || j < 0 || i >= nx as i32 || j > ny as i32 {
            false
        } else {
            v_mask[(j as usize) * nx + i as usize] != 0
        }
    };

    // gradient arms onto u faces: cells (i-1, j) -> (i, j) on cell rows
    for j in 0..ny as i32 {
        let line = &cell_rows[j as usize];
        if line.is_empty() {
            continue;
        }
        for i in 0..=nx as i32 {
            let left = cell_at(i - 1, j);
            let right = cell_at(i, j);
            if left == right {
                continue;
            }
            let xl = grid.x0 + (i as f64 - 0.5) * h;
            let xr = xl + h;
            let face_x = grid.x0 + i as f64 * h;
            let face_inside = u_at(i, j);
            // owner is the face; pick the crossing nearest the face center
            let (cross, n) = {
                let (c_lo, _) = crossings_between(line, xl, face_x, Axis::X, false);
                let (c_hi, _) = crossings_between(line, face_x, xr, Axis::X, true);
                let (_, total) = crossings_between(line, xl, xr, Axis::X, true);
                let best = match (c_lo, c_hi) {
                    (Some(a), Some(b)) => {
                        if (face_x - a.pos[0]).abs() <= (b.pos[0] - face_x).abs() {
                            Some(a)
                        } else {
                            Some(b)
                        }
                    }
                    (Some(a), None) => Some(a),
                    (None, b) => b,
                };
                (best, total)
            };
            let Some(cross) = cross else { continue };
            if n > 1 {
                warnings += 1;
            }
            // the wrong-side cell is the one opposite the face's own side
            let dir = if face_inside != right { 1 } else { -1 };
            let wrong_x = if dir == 1 { xr } else { xl };
            records.push(ArmRecord {
                kind: ArmKind::GradU,
                axis: Axis::X,
                owner: (i, j),
                dir,
                crossing: cross,
                d_plus: (wrong_x - cross.pos[0]).abs(),
                owner_side: if face_inside { -1 } else { 1 },
                multiple: n > 1,
            });
        }
    }

    // gradient arms onto v faces: cells (i, j-1) -> (i, j) on cell columns
    for i in 0..nx as i32 {
        let line = &cell_cols[i as usize];
        if line.is_empty() {
            continue;
        }
        for j in 0..=ny as i32 {
            let below = cell_at(i, j - 1);
            let above = cell_at(i, j);
            if below == above {
                continue;
            }
            let yl = grid.y0 + (j as f64 - 0.5) * h;
            let yr = yl + h;
            let face_y = grid.y0 + j as f64 * h;
            let face_inside = v_at(i, j);
            let (cross, n) = {
                let (c_lo, _) = crossings_between(line, yl, face_y, Axis::Y, false);
                let (c_hi, _) = crossings_between(line, face_y, yr, Axis::Y, true);
                let (_, total) = crossings_between(line, yl, yr, Axis::Y, true);
                let best = match (c_lo, c_hi) {
                    (Some(a), Some(b)) => {
                        if (face_y - a.pos[1]).abs() <= (b.pos[1] - face_y).abs() {
                            Some(a)
                        } else {
                            Some(b)
                        }
                    }
                    (Some(a), None) => Some(a),
                    (None, b) => b,
                };
                (best, total)
            };
            let Some(cross) = cross else { continue };
            if n > 1 {
                warnings += 1;
            }
            let dir = if face_inside != above { 1 } else { -1 };
            let wrong_y = if dir == 1 { yr } else { yl };
            records.push(ArmRecord {
                kind: ArmKind::GradV,
                axis: Axis::Y,
                owner: (i, j),
                dir,
                crossing: cross,
                d_plus: (wrong_y - cross.pos[1]).abs(),
                owner_side: if face_inside { -1 } else { 1 },
                multiple: n > 1,
            });
        }
    }

    // Laplacian x-arms of u: faces (i, j) -> (i+1, j) on cell rows
    for j in 0..ny as i32 {
        let line = &cell_rows[j as usize];
        if line.is_empty() {
            continue;
        }
        for i in 0..nx as i32 {
            let a_in = u_at(i, j);
            let b_in = u_at(i + 1, j);
            if a_in == b_in {
                continue;
            }
            let xl = grid.x0 + i as f64 * h;
            let xr = xl + h;
            // two records, one per owner, each picking its nearest crossing
            for (owner_i, dir, from_lo) in [(i, 1, true), (i + 1, -1, false)] {
                let (cross, n) = crossings_between(line, xl, xr, Axis::X, from_lo);
                let Some(cross) = cross else { continue };
                if n > 1 && dir == 1 {
                    warnings += 1;
                }
                let owner_inside = u_at(owner_i, j);
                let wrong_x = if dir == 1 { xr } else { xl };
                records.push(ArmRecord {
                    kind: ArmKind::LapU,
                    axis: Axis::X,
                    owner: (owner_i, j),
                    dir,
                    crossing: cross,
                    d_plus: (wrong_x - cross.pos[0]).abs(),
                    owner_side: if owner_inside { -1 } else { 1 },
                    multiple: n > 1,
                });
            }
        }
    }

    // Laplacian y-arms of u: faces (i, j) -> (i, j+1) on node columns
    for i in 0..=nx as i32 {
        let line = &node_cols[i as usize];
        if line.is_empty() {
            continue;
        }
        for j in 0..ny as i32 - 1 {
            let a_in = u_at(i, j);
            let b_in = u_at(i, j + 1);
            if a_in == b_in {
                continue;
            }
            let yl = grid.y0 + (j as f64 + 0.5) * h;
            let yr = yl + h;
            for (owner_j, dir, from_lo) in [(j, 1, true), (j + 1, -1, false)] {
                let (cross, n) = crossings_between(line, yl, yr, Axis::Y, from_lo);
                let Some(cross) = cross else { continue };
                if n > 1 && dir == 1 {
                    warnings += 1;
                }
                let owner_inside = u_at(i, owner_j);
                let wrong_y = if dir == 1 { yr } else { yl };
                records.push(ArmRecord {
                    kind: ArmKind::LapU,
                    axis: Axis::Y,
                    owner: (i, owner_j),
                    dir,
                    crossing: cross,
                    d_plus: (wrong_y - cross.pos[1]).abs(),
                    owner_side: if owner_inside { -1 } else { 1 },
                    multiple: n > 1,
                });
            }
        }
    }

    // Laplacian x-arms of v: faces (i, j) -> (i+1, j) on node rows
    for j in 0..=ny as i32 {
        let line = &node_rows[j as usize];
        if line.is_empty() {
            continue;
        }
        for i in 0..nx as i32 - 1 {
            let a_in = v_at(i, j);
            let b_in = v_at(i + 1, j);
            if a_in == b_in {
                continue;
            }
            let xl = grid.x0 + (i as f64 + 0.5) * h;
            let xr = xl + h;
            for (owner_i, dir, from_lo) in [(i, 1, true), (i + 1, -1, false)] {
                let (cross, n) = crossings_between(line, xl, xr, Axis::X, from_lo);
                let Some(cross) = cross else { continue };
                if n > 1 && dir == 1 {
                    warnings += 1;
                }
                let owner_inside = v_at(owner_i, j);
                let wrong_x = if dir == 1 { xr } else { xl };
                records.push(ArmRecord {
                    kind: ArmKind::LapV,
                    axis: Axis::X,
                    owner: (owner_i, j),
                    dir,
                    crossing: cross,
                    d_plus: (wrong_x - cross.pos[0]).abs(),
                    owner_side: if owner_inside { -1 } else { 1 },
                    multiple: n > 1,
                });
            }
        }
    }

    // Laplacian y-arms of v: faces (i, j) -> (i, j+1) on cell columns
    for i in 0..nx as i32 {
        let line = &cell_cols[i as usize];
        if line.is_empty() {
            continue;
        }
        for j in 0..ny as i32 {
            let a_in = v_at(i, j);
            let b_in = v_at(i, j + 1);
            if a_in == b_in {
                continue;
            }
            let yl = grid.y0 + j as f64 * h;
            let yr = yl + h;
            for (owner_j, dir, from_lo) in [(j, 1, true), (j + 1, -1, false)] {
                let (cross, n) = crossings_between(line, yl, yr, Axis::Y, from_lo);
                let Some(cross) = cross else { continue };
                if n > 1 && dir == 1 {
                    warnings += 1;
                }
                let owner_inside = v_at(i, owner_j);
                let wrong_y = if dir == 1 { yr } else { yl };
                records.push(ArmRecord {
                    kind: ArmKind::LapV,
                    axis: Axis::Y,
                    owner: (i, owner_j),
                    dir,
                    crossing: cross,
                    d_plus: (wrong_y - cross.pos[1]).abs(),
                    owner_side: if owner_inside { -1 } else { 1 },
                    multiple: n > 1,
                });
            }
        }
    }

    Ok(CorrectionSet {
        records,
        warnings,
        cell_mask,
        u_mask,
        v_mask,
        bins: SegmentBins::build(mesh, grid),
        grid: *grid,
    })
}
