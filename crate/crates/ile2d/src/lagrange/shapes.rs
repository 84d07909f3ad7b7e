//! Parametric body generators and plain-text polygon import.

use std::path::Path;

use super::VolumetricMesh;
use crate::error::SimError;

/// Disk of radius `r` with boundary edge length close to `target_edge`.
pub fn circle(center: [f64; 2], r: f64, target_edge: f64, rho_s: f64) -> Result<VolumetricMesh, SimError> {
    if r <= 0.0 || target_edge <= 0.0 {
        return Err(SimError::mesh("circle radius and edge length must be positive"));
    }
    let n = ((2.0 * std::f64::consts::PI * r / target_edge).ceil() as usize).max(8);
    let ring: Vec<[f64; 2]> = (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            [center[0] + r * a.cos(), center[1] + r * a.sin()]
        })
        .collect();
    mesh_from_polygon(ring, rho_s)
}

/// Axis-aligned rectangle of width `l` by height `h` centered at `center`,
/// with boundary edge length close to `target_edge`. `corner_radius > 0`
/// rounds the corners with quarter-circle arcs (off by default in configs).
pub fn rectangle(
    center: [f64; 2],
    l: f64,
    h: f64,
    target_edge: f64,
    corner_radius: f64,
    rho_s: f64,
) -> Result<VolumetricMesh, SimError> {
    if l <= 0.0 || h <= 0.0 || target_edge <= 0.0 {
        return Err(SimError::mesh("rectangle dimensions and edge length must be positive"));
    }
    if corner_radius < 0.0 || 2.0 * corner_radius > l.min(h) {
        return Err(SimError::mesh("corner radius must satisfy 0 <= 2r <= min(l, h)"));
    }
    let hx = 0.5 * l;
    let hy = 0.5 * h;
    let rc = corner_radius;

    let mut ring: Vec<[f64; 2]> = Vec::new();
    let add_side = |from: [f64; 2], to: [f64; 2], ring: &mut Vec<[f64; 2]>| {
        let len = ((to[0] - from[0]).powi(2) + (to[1] - from[1]).powi(2)).sqrt();
        let n = ((len / target_edge).ceil() as usize).max(1);
        for k in 0..n {
            let t = k as f64 / n as f64;
            ring.push([from[0] + t * (to[0] - from[0]), from[1] + t * (to[1] - from[1])]);
        }
    };
    let add_arc = |c: [f64; 2], a0: f64, a1: f64, ring: &mut Vec<[f64; 2]>| {
        let arc = rc * (a1 - a0).abs();
        let n = ((arc / target_edge).ceil() as usize).max(2);
        for k in 0..n {
            let a = a0 + (a1 - a0) * k as f64 / n as f64;
            ring.push([c[0] + rc * a.cos(), c[1] + rc * a.sin()]);
        }
    };

    use std::f64::consts::FRAC_PI_2;
    // counterclockwise, starting on the bottom edge
    add_side([-hx + rc, -hy], [hx - rc, -hy], &mut ring);
    if rc > 0.0 {
        add_arc([hx - rc, -hy + rc], -FRAC_PI_2, 0.0, &mut ring);
    }
    add_side([hx, -hy + rc], [hx, hy - rc], &mut ring);
    if rc > 0.0 {
        add_arc([hx - rc, hy - rc], 0.0, FRAC_PI_2, &mut ring);
    }
    add_side([hx - rc, hy], [-hx + rc, hy], &mut ring);
    if rc > 0.0 {
        add_arc([-hx + rc, hy - rc], FRAC_PI_2, 2.0 * FRAC_PI_2, &mut ring);
    }
    add_side([-hx, hy - rc], [-hx, -hy + rc], &mut ring);
    if rc > 0.0 {
        add_arc([-hx + rc, -hy + rc], 2.0 * FRAC_PI_2, 3.0 * FRAC_PI_2, &mut ring);
    }

    for p in &mut ring {
        p[0] += center[0];
        p[1] += center[1];
    }
    mesh_from_polygon(ring, rho_s)
}

/// Triangulate a simple closed polygon (ear clipping) into a volumetric mesh.
/// The ring is reoriented counterclockwise if needed.
pub fn mesh_from_polygon(mut ring: Vec<[f64; 2]>, rho_s: f64) -> Result<VolumetricMesh, SimError> {
    let n = ring.len();
    if n < 3 {
        return Err(SimError::mesh("polygon needs at least 3 nodes"));
    }
    if rho_s <= 0.0 {
        return Err(SimError::mesh("solid density must be positive"));
    }
    let mut signed = 0.0;
    for k in 0..n {
        let a = ring[k];
        let b = ring[(k + 1) % n];
        signed += a[0] * b[1] - b[0] * a[1];
    }
    if signed == 0.0 {
        return Err(SimError::mesh("degenerate polygon"));
    }
    if signed < 0.0 {
        ring.reverse();
    }

    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| -> f64 {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let scale: f64 = ring
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0, f64::max)
        .max(1e-300);
    let eps = 1e-13 * scale * scale;
    // inclusive: a vertex on an ear's edge blocks the ear, otherwise clipping
    // can pinch the remaining polygon
    let inside_tri = |p: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]| -> bool {
        cross(a, b, p) >= -eps && cross(b, c, p) >= -eps && cross(c, a, p) >= -eps
    };

    let mut remaining: Vec<usize> = (0..n).collect();
    let mut triangles = Vec::with_capacity(n - 2);
    let mut guard = 0usize;
    while remaining.len() > 3 {
        let m = remaining.len();
        let mut clipped = false;
        for k in 0..m {
            let ia = remaining[(k + m - 1) % m];
            let ib = remaining[k];
            let ic = remaining[(k + 1) % m];
            let area2 = cross(ring[ia], ring[ib], ring[ic]);
            if area2.abs() <= eps {
                // collinear corner: drop it without emitting a sliver
                remaining.remove(k);
                clipped = true;
                break;
            }
            if area2 < 0.0 {
                continue;
            }
            let mut ear = true;
            for &other in &remaining {
                if other == ia || other == ib || other == ic {
                    continue;
                }
                if inside_tri(ring[other], ring[ia], ring[ib], ring[ic]) {
                    ear = false;
                    break;
                }
            }
            if ear {
                triangles.push([ia, ib, ic]);
                remaining.remove(k);
                clipped = true;
                break;
            }
        }
        if !clipped {
            return Err(SimError::mesh("polygon triangulation failed; is it simple?"));
        }
        guard += 1;
        if guard > 4 * n {
            return Err(SimError::mesh("polygon triangulation did not terminate"));
        }
    }
    if cross(ring[remaining[0]], ring[remaining[1]], ring[remaining[2]]) > eps {
        triangles.push([remaining[0], remaining[1], remaining[2]]);
    }
    if triangles.is_empty() {
        return Err(SimError::mesh("degenerate polygon"));
    }

    let boundary: Vec<usize> = (0..n).collect();
    Ok(VolumetricMesh {
        nodes: ring,
        triangles,
        boundary,
        rho_s,
    })
}

/// Read a custom shape from a plain-text node/segment list: one record per
/// line, `v x y` for a node, `s i j` for a boundary segment (0-based). The
/// segments must chain into a single closed loop.
pub fn read_polygon_mesh(path: &Path, rho_s: f64) -> Result<VolumetricMesh, SimError> {
    let text = std::fs::read_to_string(path)?;
    let mut nodes: Vec<[f64; 2]> = Vec::new();
    let mut segs: Vec<[usize; 2]> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let tag = it.next().unwrap();
        let err = |msg: &str| SimError::mesh(format!("{}:{}: {}", path.display(), ln + 1, msg));
        match tag {
            "v" => {
                let x: f64 = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad node x"))?;
                let y: f64 = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad node y"))?;
                nodes.push([x, y]);
            }
            "s" => {
                let i: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad segment index"))?;
                let j: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad segment index"))?;
                segs.push([i, j]);
            }
            _ => return Err(err("expected 'v x y' or 's i j'")),
        }
    }
    if segs.len() != nodes.len() {
        return Err(SimError::mesh("segments must form one closed loop over all nodes"));
    }
    // chain the segments into a ring
    let n = nodes.len();
    let mut next = vec![usize::MAX; n];
    for s in &segs {
        if s[0] >= n || s[1] >= n {
            return Err(SimError::mesh("segment index out of range"));
        }
        if next[s[0]] != usize::MAX {
            return Err(SimError::mesh("node has two outgoing segments"));
        }
        next[s[0]] = s[1];
    }
    let mut ring = Vec::with_capacity(n);
    let mut at = 0usize;
    for _ in 0..n {
        ring.push(nodes[at]);
        at = next[at];
        if at == usize::MAX {
            return Err(SimError::mesh("segment chain is broken"));
        }
    }
    if at != 0 {
        return Err(SimError::mesh("segments do not close into a loop"));
    }
    mesh_from_polygon(ring, rho_s)
}
