//! Parameter sweeps comparing Monte Carlo hole proportions with the bounds.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use crate::bounds::{BoundEvaluator, CaseLabel, DEFAULT_ORDER, SECOND_CASE_CEILING};
use crate::config::NetworkConfig;
use crate::error::{Error, Result};
use crate::hole::estimate;

pub const CSV_HEADER: &str =
    "lambda,gamma,r_factor,case,mc_p,mc_stderr,lower,upper,second_case,quad_err,trials,seed";

pub const MIN_TRIALS: u64 = 1000;

/// Rough cost model used for the runtime estimate printed before a sweep.
const SECONDS_PER_TRIAL: f64 = 6e-7;
const SECONDS_PER_GEOMETRY: f64 = 10.0;

/// Where the second-case term added to the upper bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SecondCaseSource {
    /// Monte Carlo estimate from the same trials as the hole estimate.
    #[default]
    Simulated,
    /// The constant [`SECOND_CASE_CEILING`].
    Ceiling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub sensing_radius: f64,
    pub gammas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub radius_factors: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub quad_order: usize,
    pub second_case: SecondCaseSource,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            sensing_radius: 10.0,
            gammas: (0..=5).map(|k| f64::from(20 + 2 * k) / 10.0).collect(),
            lambdas: (1..=20).map(|k| f64::from(k) / 1000.0).collect(),
            radius_factors: vec![5.0, 10.0, 100.0],
            trials: 100_000,
            seed: 20_240_601,
            quad_order: DEFAULT_ORDER,
            second_case: SecondCaseSource::Simulated,
        }
    }
}

impl SweepSpec {
    pub fn config(&self, gamma: f64, factor: f64, lambda: f64) -> Result<NetworkConfig> {
        let rs = self.sensing_radius;
        NetworkConfig::new(factor * rs, rs, gamma * rs, lambda)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.gammas.is_empty() || self.lambdas.is_empty() || self.radius_factors.is_empty() {
            return bad("sweep lists must be non-empty");
        }
        if self.trials < MIN_TRIALS {
            return Err(Error::InvalidConfig(format!(
                "at least {MIN_TRIALS} trials per point required, got {}",
                self.trials
            )));
        }
        if self.quad_order < 4 {
            return bad("quadrature order must be at least 4");
        }
        for &f in &self.radius_factors {
            for &g in &self.gammas {
                for &l in &self.lambdas {
                    self.config(g, f, l)?;
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gammas.len() * self.lambdas.len() * self.radius_factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Estimated wall time in seconds on one core.
    pub fn estimated_seconds(&self) -> f64 {
        let geometries = (self.gammas.len() * self.radius_factors.len()) as f64;
        let order_scale = (self.quad_order as f64 / DEFAULT_ORDER as f64).powi(3);
        self.len() as f64 * self.trials as f64 * SECONDS_PER_TRIAL
            + geometries * SECONDS_PER_GEOMETRY * order_scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRow {
    pub lambda: f64,
    pub gamma: f64,
    pub r_factor: f64,
    pub case: CaseLabel,
    pub mc_p: f64,
    pub mc_stderr: f64,
    pub lower: f64,
    pub upper: f64,
    pub second_case: f64,
    pub quad_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl ResultRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_float(self.lambda),
            fmt_float(self.gamma),
            fmt_float(self.r_factor),
            self.case,
            fmt_float(self.mc_p),
            fmt_float(self.mc_stderr),
            fmt_float(self.lower),
            fmt_float(self.upper),
            fmt_float(self.second_case),
            fmt_float(self.quad_error),
            self.trials,
            self.seed
        )
    }
}

/// Nine significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

/// One row: bounds from `eval` and a Monte Carlo estimate at `cfg`.
pub fn run_point(
    eval: &BoundEvaluator,
    cfg: &NetworkConfig,
    trials: u64,
    seed: u64,
    source: SecondCaseSource,
) -> Result<ResultRow> {
    let mc = estimate(cfg, trials, seed)?;
    let second = match source {
        SecondCaseSource::Simulated => mc.second_case.p_hat,
        SecondCaseSource::Ceiling => SECOND_CASE_CEILING,
    };
    let b = eval.evaluate(cfg.intensity, second)?;
    Ok(ResultRow {
        lambda: cfg.intensity,
        gamma: cfg.gamma(),
        r_factor: cfg.radius / cfg.sensing_radius,
        case: b.case,
        mc_p: mc.hole.p_hat,
        mc_stderr: mc.hole.stderr,
        lower: b.lower,
        upper: b.upper,
        second_case: b.second_case_term,
        quad_error: b.quad_error,
        trials,
        seed,
    })
}

/// Runs the sweep in grid order: radius factor, then gamma, then lambda.
/// Quadrature tables are built once per (gamma, factor) geometry.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    log::info!(
        "sweep of {} points x {} trials, estimated {:.0} s",
        spec.len(),
        spec.trials,
        spec.estimated_seconds()
    );
    let mut rows = Vec::with_capacity(spec.len());
    for &factor in &spec.radius_factors {
        for &gamma in &spec.gammas {
            let base = spec.config(gamma, factor, 0.0)?;
            let eval = BoundEvaluator::new(&base, spec.quad_order)?;
            for &lambda in &spec.lambdas {
                let cfg = base.with_intensity(lambda);
                rows.push(run_point(&eval, &cfg, spec.trials, spec.seed, spec.second_case)?);
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ResultRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.to_csv())?;
    }
    out.flush()
}

/// Headline comparisons over a set of rows.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepSummary {
    pub rows: usize,
    /// Largest `mc_p - lower`.
    pub max_mc_minus_lower: f64,
    /// Largest `upper - mc_p`.
    pub max_upper_minus_mc: f64,
    /// Largest spread of `lower` across radius factors at fixed (gamma, lambda).
    pub max_lower_radius_delta: f64,
    pub max_upper_radius_delta: f64,
    pub max_quad_error: f64,
    /// Rows with `mc_p` outside `[lower - 2 se, upper + 2 se + 0.005]`.
    pub sandwich_violations: usize,
}

pub fn summarize(rows: &[ResultRow]) -> SweepSummary {
    let mut s = SweepSummary {
        rows: rows.len(),
        ..Default::default()
    };
    let mut by_point: BTreeMap<(u64, u64), (f64, f64, f64, f64)> = BTreeMap::new();
    for r in rows {
        s.max_mc_minus_lower = s.max_mc_minus_lower.max(r.mc_p - r.lower);
        s.max_upper_minus_mc = s.max_upper_minus_mc.max(r.upper - r.mc_p);
        s.max_quad_error = s.max_quad_error.max(r.quad_error);
        let se2 = 2.0 * r.mc_stderr;
        if r.mc_p < r.lower - se2 || r.mc_p > r.upper + se2 + 0.005 {
            s.sandwich_violations += 1;
        }
        let e = by_point
            .entry((r.gamma.to_bits(), r.lambda.to_bits()))
            .or_insert((f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY));
        e.0 = e.0.min(r.lower);
        e.1 = e.1.max(r.lower);
        e.2 = e.2.min(r.upper);
        e.3 = e.3.max(r.upper);
    }
    for (lo_min, lo_max, up_min, up_max) in by_point.values() {
        s.max_lower_radius_delta = s.max_lower_radius_delta.max(lo_max - lo_min);
        s.max_upper_radius_delta = s.max_upper_radius_delta.max(up_max - up_min);
    }
    s
}

impl SweepSummary {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "rows,{}", self.rows);
        let _ = writeln!(out, "max_mc_minus_lower,{}", fmt_float(self.max_mc_minus_lower));
        let _ = writeln!(out, "max_upper_minus_mc,{}", fmt_float(self.max_upper_minus_mc));
        let _ = writeln!(out, "max_lower_radius_delta,{}", fmt_float(self.max_lower_radius_delta));
        let _ = writeln!(out, "max_upper_radius_delta,{}", fmt_float(self.max_upper_radius_delta));
        let _ = writeln!(out, "max_quad_err,{}", fmt_float(self.max_quad_error));
        let _ = writeln!(out, "sandwich_violations,{}", self.sandwich_violations);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let s = SweepSpec::default();
        assert_eq!(s.len(), 360);
        assert_eq!(s.gammas, vec![2.0, 2.2, 2.4, 2.6, 2.8, 3.0]);
        assert_eq!(s.lambdas[0], 0.001);
        assert_eq!(s.lambdas[19], 0.02);
        s.validate().unwrap();
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = SweepSpec { trials: 999, ..Default::default() };
        assert!(s.validate().is_err());
        s.trials = 1000;
        s.gammas.clear();
        assert!(s.validate().is_err());
        let s = SweepSpec { radius_factors: vec![4.0], ..Default::default() };
        assert!(s.validate().is_err());
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(0.009), "9.00000000e-3");
        assert_eq!(fmt_float(0.0), "0.00000000e0");
        assert_eq!(fmt_float(100.0), "1.00000000e2");
    }

    #[test]
    fn summary_deltas() {
        let row = |f: f64, lower: f64, upper: f64, mc: f64| ResultRow {
            lambda: 0.01,
            gamma: 3.0,
            r_factor: f,
            case: CaseLabel::Case3,
            mc_p: mc,
            mc_stderr: 0.001,
            lower,
            upper,
            second_case: 0.0,
            quad_error: 1e-9,
            trials: 1000,
            seed: 1,
        };
        let s = summarize(&[row(5.0, 0.03, 0.04, 0.035), row(100.0, 0.031, 0.042, 0.05)]);
        assert!((s.max_lower_radius_delta - 0.001).abs() < 1e-12);
        assert!((s.max_upper_radius_delta - 0.002).abs() < 1e-12);
        assert!((s.max_mc_minus_lower - 0.019).abs() < 1e-12);
        assert_eq!(s.sandwich_violations, 1);
    }
}
