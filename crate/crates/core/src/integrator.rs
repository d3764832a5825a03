//! Explicit one-term fractional Euler scheme
//! `x_{j+1} = x_j + h^q / Gamma(q + 1) * F(x_j)`, plus a product-rectangle
//! Riemann-Liouville quadrature used to check it.
//!
//! The scheme carries no history terms; it is not a predictor-corrector.

use serde::Serialize;

use crate::dynamics::rhs_controlled;
use crate::error::{domain, Divergence, Error, Result};
use crate::gamma::gamma;
use crate::types::{ControlParams, FractionalOrder, State3};

/// Any component beyond this magnitude aborts the run.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-3;
pub const DEFAULT_CONVERGENCE_WINDOW: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub q: FractionalOrder,
    pub h: f64,
    pub steps: usize,
    pub x0: State3,
    pub controls: ControlParams,
}

impl IntegratorConfig {
    pub fn new(
        q: FractionalOrder,
        h: f64,
        steps: usize,
        x0: State3,
        controls: ControlParams,
    ) -> Result<Self> {
        let cfg = Self {
            q,
            h,
            steps,
            x0,
            controls,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(domain(format!(
                "step size must be finite and positive, got {}",
                self.h
            )));
        }
        if self.steps == 0 {
            return Err(domain("step count must be at least 1"));
        }
        if !self.x0.is_finite() {
            return Err(domain("initial state must be finite"));
        }
        Ok(())
    }

    /// Horizon `T = N h`.
    pub fn horizon(&self) -> f64 {
        self.steps as f64 * self.h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub j: usize,
    pub t: f64,
    pub x: State3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub config: IntegratorConfig,
    pub coefficient: f64,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples
            .last()
            .expect("trajectory always holds the initial sample")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = State3> + '_ {
        self.samples.iter().map(|s| s.x)
    }
}

/// `h^q / Gamma(q + 1)`; exactly `h` at `q = 1`.
pub fn euler_coefficient(h: f64, q: FractionalOrder) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(domain(format!(
            "step size must be finite and positive, got {h}"
        )));
    }
    if q.is_classical() {
        return Ok(h);
    }
    Ok(h.powf(q.get()) / gamma(q.get() + 1.0)?)
}

fn advance(x: State3, coefficient: f64, controls: &ControlParams) -> State3 {
    let f = rhs_controlled(x, controls);
    State3::new(
        x.x1 + coefficient * f.x1,
        x.x2 + coefficient * f.x2,
        x.x3 + coefficient * f.x3,
    )
}

fn diverged(x: State3) -> bool {
    !x.is_finite() || x.max_abs() > DIVERGENCE_LIMIT
}

/// One fractional Euler step from `x`.
pub fn step(x: State3, cfg: &IntegratorConfig) -> Result<State3> {
    if !x.is_finite() {
        return Err(domain("state must be finite"));
    }
    let next = advance(x, euler_coefficient(cfg.h, cfg.q)?, &cfg.controls);
    if diverged(next) {
        return Err(domain(format!(
            "step produced a non-finite or out-of-range state {next}"
        )));
    }
    Ok(next)
}

/// Runs `cfg.steps` steps and returns all `N + 1` samples, `t_j = j h`.
///
/// On blow-up returns [`Error::Diverged`] with every sample up to (not
/// including) the offending step.
pub fn integrate(cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let coefficient = euler_coefficient(cfg.h, cfg.q)?;
    let mut samples = Vec::with_capacity(cfg.steps + 1);
    let mut x = cfg.x0;
    samples.push(Sample { j: 0, t: 0.0, x });
    for j in 1..=cfg.steps {
        x = advance(x, coefficient, &cfg.controls);
        if diverged(x) {
            let partial = Trajectory {
                config: *cfg,
                coefficient,
                samples,
            };
            return Err(Error::Diverged(Box::new(Divergence { step: j, partial })));
        }
        samples.push(Sample {
            j,
            t: j as f64 * cfg.h,
            x,
        });
    }
    Ok(Trajectory {
        config: *cfg,
        coefficient,
        samples,
    })
}

/// `I^q f(t)` from samples `(s_k, f_k)` on a uniform grid starting at 0,
/// with `f` held constant (left endpoint) on each cell and the kernel
/// `(t - s)^(q-1) / Gamma(q)` integrated exactly per cell.
pub fn rl_integral(samples: &[(f64, f64)], q: FractionalOrder, t: f64) -> Result<f64> {
    let n = samples
        .iter()
        .position(|(s, _)| *s == t)
        .or_else(|| {
            // tolerate grid points built by accumulation
            samples
                .iter()
                .position(|(s, _)| (s - t).abs() <= 1e-12 * t.abs().max(1.0))
        })
        .ok_or_else(|| domain(format!("t = {t} is not on the sample grid")))?;
    if samples[0].0 != 0.0 {
        return Err(domain("sample grid must start at s = 0"));
    }
    let g = gamma(q.get() + 1.0)?;
    let qq = q.get();
    let mut acc = 0.0;
    for k in 0..n {
        let (s0, f0) = samples[k];
        let s1 = samples[k + 1].0;
        if f0 == 0.0 {
            continue;
        }
        let w = ((t - s0).powf(qq) - (t - s1).powf(qq)) / g;
        acc += w * f0;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convergence {
    Converged { step: usize },
    NotConverged,
}

/// First step `j` such that `|x_k - target| < tol` for every `k` in
/// `j..=j + window`.
pub fn detect_convergence(
    traj: &Trajectory,
    target: State3,
    tol: f64,
    window: usize,
) -> Convergence {
    let mut run_start = None;
    for s in &traj.samples {
        if s.x.distance(target) < tol {
            let start = *run_start.get_or_insert(s.j);
            if s.j - start >= window {
                return Convergence::Converged { step: start };
            }
        } else {
            run_start = None;
        }
    }
    Convergence::NotConverged
}
