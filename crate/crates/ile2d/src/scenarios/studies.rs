//! Parameter-study harnesses: grid-refinement tether convergence, penalty
//! stiffness sensitivity, and the stability-threshold bisection.

use super::config::ScenarioConfig;
use super::run::{run, RunOutput};
use crate::error::SimError;

pub struct ConvergenceLevel {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub kappa: f64,
    pub max_tether: f64,
    pub aborted: Option<String>,
}

pub struct ConvergenceReport {
    pub levels: Vec<ConvergenceLevel>,
    /// log2 ratios of successive max-tether errors.
    pub orders: Vec<f64>,
    pub monotone: bool,
}

/// Grid-refinement study of the tether discrepancy at fixed physical time:
/// each level halves the spacing and scales `kappa` by four (`kappa
/// proportional to 1/h^2`), keeping the time step fixed.
pub fn convergence_study(base: &ScenarioConfig, levels: usize) -> Result<ConvergenceReport, SimError> {
    if levels < 3 {
        return Err(SimError::config("convergence orders need at least three levels"));
    }
    let mut report = ConvergenceReport {
        levels: Vec::new(),
        orders: Vec::new(),
        monotone: true,
    };
    for level in 0..levels {
        let mut cfg = base.clone();
        let scale = 1usize << level;
        cfg.nx = base.nx * scale;
        cfg.ny = base.ny * scale;
        cfg.kappa = base.kappa * (scale * scale) as f64;
        cfg.name = format!("{}-L{}", base.name, level);
        let out = run(&cfg, None)?;
        report.levels.push(ConvergenceLevel {
            nx: cfg.nx,
            ny: cfg.ny,
            h: cfg.h(),
            kappa: cfg.kappa,
            max_tether: out.max_tether,
            aborted: out.aborted,
        });
    }
    for w in report.levels.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.max_tether > a.max_tether {
            report.monotone = false;
        }
        report.orders.push((a.max_tether / b.max_tether).log2());
    }
    Ok(report)
}

pub struct KappaRow {
    pub kappa: f64,
    pub stable: bool,
    pub max_tether: f64,
    /// Largest center-of-mass distance to the highest stable kappa run at
    /// matching output times.
    pub trajectory_deviation: f64,
    pub aborted: Option<String>,
}

/// Run the scenario across a list of penalty stiffnesses and report the
/// tether discrepancy and trajectory deviation per value. Unstable values
/// are reported as such, not hidden.
pub fn kappa_sensitivity(base: &ScenarioConfig, kappas: &[f64]) -> Result<Vec<KappaRow>, SimError> {
    if kappas.is_empty() {
        return Err(SimError::config("kappa list is empty"));
    }
    let mut runs: Vec<(f64, RunOutput)> = Vec::new();
    for &kappa in kappas {
        let mut cfg = base.clone();
        cfg.kappa = kappa;
        cfg.name = format!("{}-k{kappa}", base.name);
        let out = run(&cfg, None)?;
        runs.push((kappa, out));
    }
    // reference: the largest stable kappa
    let reference = runs
        .iter()
        .filter(|(_, out)| out.aborted.is_none())
        .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .map(|(k, out)| (*k, out.records.clone()));

    let mut rows = Vec::new();
    for (kappa, out) in &runs {
        let mut deviation = f64::NAN;
        if let Some((ref_k, ref_records)) = &reference {
            if out.aborted.is_none() {
                deviation = 0.0;
                if (kappa - ref_k).abs() > 0.0 {
                    for (a, b) in out.records.iter().zip(ref_records.iter()) {
                        let d = ((a.dcx - b.dcx).powi(2) + (a.dcy - b.dcy).powi(2)).sqrt();
                        deviation = deviation.max(d);
                    }
                }
            }
        }
        rows.push(KappaRow {
            kappa: *kappa,
            stable: out.aborted.is_none(),
            max_tether: out.max_tether,
            trajectory_deviation: deviation,
            aborted: out.aborted.clone(),
        });
    }
    Ok(rows)
}

/// Bisection for the largest stable penalty stiffness at the configured time
/// step, following the bracketing procedure used to tune the benchmarks.
/// Returns `(largest stable, smallest unstable)`.
pub fn bisect_kappa(base: &ScenarioConfig, lo: f64, hi: f64, iterations: usize) -> Result<(f64, f64), SimError> {
    let probe = |kappa: f64| -> Result<bool, SimError> {
        let mut cfg = base.clone();
        cfg.kappa = kappa;
        cfg.name = format!("{}-probe", base.name);
        let out = run(&cfg, None)?;
        Ok(out.aborted.is_none())
    };
    let mut lo = lo;
    let mut hi = hi;
    if !probe(lo)? {
        return Err(SimError::config(format!(
            "lower bracket kappa = {lo} is already unstable at dt = {}",
            base.dt
        )));
    }
    if probe(hi)? {
        return Err(SimError::config(format!(
            "upper bracket kappa = {hi} is still stable; widen the bracket"
        )));
    }
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}
