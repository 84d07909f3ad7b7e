//! Time-series reductions used by the benchmark regressions: dominant
//! frequency from mean crossings, the figure-eight crossing abscissa, and
//! rotation-cycle averages.

use super::outputs::TimeSeriesRecord;

/// Interpolated times of upward crossings of `level`.
pub fn upward_crossings(samples: &[(f64, f64)], level: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for w in samples.windows(2) {
        let (t0, v0) = w[0];
        let (t1, v1) = w[1];
        if v0 < level && v1 >= level {
            let frac = (level - v0) / (v1 - v0);
            out.push(t0 + frac * (t1 - t0));
        }
    }
    out
}

/// Dominant frequency of a periodic signal from its mean crossings; `None`
/// with fewer than three crossings.
pub fn dominant_frequency(samples: &[(f64, f64)]) -> Option<f64> {
    if samples.len() < 4 {
        return None;
    }
    let mean = samples.iter().map(|s| s.1).sum::<f64>() / samples.len() as f64;
    let crossings = upward_crossings(samples, mean);
    if crossings.len() < 3 {
        return None;
    }
    let span = crossings.last().unwrap() - crossings.first().unwrap();
    Some((crossings.len() - 1) as f64 / span)
}

/// Largest absolute value of a signal over the window.
pub fn max_abs(samples: &[(f64, f64)]) -> f64 {
    samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max)
}

/// The abscissa of the self-intersection of a steady figure-of-eight
/// trajectory: the mean of the streamwise position at the transverse
/// mean crossings (both directions cross at the same point for the
/// symmetric eight).
pub fn figure_eight_crossing_x(records: &[TimeSeriesRecord]) -> Option<f64> {
    if records.len() < 8 {
        return None;
    }
    let mean_y = records.iter().map(|r| r.dcy).sum::<f64>() / records.len() as f64;
    let mut xs = Vec::new();
    for w in records.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if (a.dcy < mean_y && b.dcy >= mean_y) || (a.dcy >= mean_y && b.dcy < mean_y) {
            let frac = (mean_y - a.dcy) / (b.dcy - a.dcy);
            xs.push(a.dcx + frac * (b.dcx - a.dcx));
        }
    }
    if xs.len() < 4 {
        return None;
    }
    Some(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// The window of records with `t >= t_start`.
pub fn window(records: &[TimeSeriesRecord], t_start: f64) -> &[TimeSeriesRecord] {
    let idx = records.partition_point(|r| r.t < t_start);
    &records[idx..]
}

pub fn series(records: &[TimeSeriesRecord], f: impl Fn(&TimeSeriesRecord) -> f64) -> Vec<(f64, f64)> {
    records.iter().map(|r| (r.t, f(r))).collect()
}

/// Averages of the velocity components and spin rate over an integer number
/// of full rotations (theta advancing by 2 pi per cycle), discarding
/// everything before `t_start`. Returns `(u_x, u_y, omega_z, cycles)`.
pub fn rotation_cycle_averages(records: &[TimeSeriesRecord], t_start: f64) -> Option<(f64, f64, f64, usize)> {
    let win = window(records, t_start);
    if win.len() < 8 {
        return None;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let theta0 = win[0].theta;
    // interpolated times at which theta passes theta0 + k 2 pi
    let mut boundaries = Vec::new();
    let mut k = 1.0;
    for w in win.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let target = theta0 + k * two_pi * (b.theta - theta0).signum();
        let crossed = (a.theta - target) * (b.theta - target) <= 0.0 && a.theta != b.theta;
        if crossed {
            boundaries.push(a.t + (target - a.theta) / (b.theta - a.theta) * (b.t - a.t));
            k += 1.0;
        }
    }
    if boundaries.len() < 2 {
        return None;
    }
    let (t_a, t_b) = (boundaries[0], *boundaries.last().unwrap());
    let cycles = boundaries.len() - 1;
    // trapezoidal averages over [t_a, t_b]
    let mut sum = [0.0f64; 3];
    let mut span = 0.0;
    for w in win.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.t <= t_a || a.t >= t_b {
            continue;
        }
        let lo = a.t.max(t_a);
        let hi = b.t.min(t_b);
        let dt = hi - lo;
        if dt <= 0.0 {
            continue;
        }
        // midpoint values by linear interpolation
        let tm = 0.5 * (lo + hi);
        let frac = (tm - a.t) / (b.t - a.t);
        sum[0] += dt * (a.vcx + frac * (b.vcx - a.vcx));
        sum[1] += dt * (a.vcy + frac * (b.vcy - a.vcy));
        sum[2] += dt * (a.omega + frac * (b.omega - a.omega));
        span += dt;
    }
    if span <= 0.0 {
        return None;
    }
    Some((sum[0] / span, sum[1] / span, sum[2] / span, cycles))
}
