//! Adaptive integration of planar systems and convergence to target curves.

mod dopri;

use std::fmt;

use rayon::prelude::*;

use crate::crn::PlanarSystem;
use crate::curves::OvalSet;
use crate::poly::{FloatPoly, Poly2};
use dopri::{error_norm, initial_step, trial, Dense, State};

pub use dopri::fixed_steps;

/// Integration and convergence settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_max: f64,
    pub max_steps: usize,
    /// Threshold on `|h|` for convergence.
    pub converge_tol: f64,
    /// How long `|h|` must stay below `converge_tol`.
    pub dwell_time: f64,
    /// Spacing of recorded samples.
    pub output_dt: f64,
    /// Stop as soon as convergence is certified instead of running to `t_max`.
    pub stop_on_converge: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            t_max: 200.0,
            max_steps: 2_000_000,
            converge_tol: 1e-6,
            dwell_time: 5.0,
            output_dt: 0.01,
            stop_on_converge: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("t_max", self.t_max),
            ("converge_tol", self.converge_tol),
            ("dwell_time", self.dwell_time),
            ("output_dt", self.output_dt),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.rel_tol < 1e-13 {
            return Err(format!(
                "rel_tol must be at least 1e-13, got {}",
                self.rel_tol
            ));
        }
        if self.max_steps == 0 {
            return Err("max_steps must be positive".into());
        }
        Ok(())
    }
}

/// A curve to certify convergence against.
#[derive(Debug, Clone)]
pub struct Target {
    pub h: Poly2,
    pub ovals: OvalSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    ConvergedToCurve { oval: Option<usize> },
    ReachedTmax,
    LeftDomain,
    StepFailure,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::ConvergedToCurve { oval: Some(i) } => write!(f, "converged:{i}"),
            Status::ConvergedToCurve { oval: None } => write!(f, "converged"),
            Status::ReachedTmax => write!(f, "tmax"),
            Status::LeftDomain => write!(f, "left_domain"),
            Status::StepFailure => write!(f, "step_failure"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `(t, x, y)` at the output interval, plus the terminal point.
    pub samples: Vec<(f64, f64, f64)>,
    /// `|h|` at each sample when a target is attached, else empty.
    pub h_residuals: Vec<f64>,
    pub status: Status,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// `(rel_tol, abs_tol)` the trajectory was computed with.
    pub tolerances: (f64, f64),
}

impl Trajectory {
    pub fn terminal(&self) -> Option<(f64, f64, f64)> {
        self.samples.last().copied()
    }

    pub fn is_converged(&self) -> bool {
        matches!(self.status, Status::ConvergedToCurve { .. })
    }

    pub fn oval(&self) -> Option<usize> {
        match self.status {
            Status::ConvergedToCurve { oval } => oval,
            _ => None,
        }
    }

    /// CSV with header `t,x,y,h_abs,status`; the status is on the last row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,h_abs,status\n");
        self.write_rows(&mut out, None);
        out
    }

    fn write_rows(&self, out: &mut String, index: Option<usize>) {
        let n = self.samples.len();
        for (k, &(t, x, y)) in self.samples.iter().enumerate() {
            if let Some(i) = index {
                out.push_str(&format!("{i},"));
            }
            let h = self
                .h_residuals
                .get(k)
                .map(|r| r.to_string())
                .unwrap_or_default();
            let status = if k + 1 == n {
                self.status.to_string()
            } else {
                String::new()
            };
            out.push_str(&format!("{t},{x},{y},{h},{status}\n"));
        }
    }
}

/// Concatenated CSV for a batch, with a leading `index` column.
pub fn sweep_csv(trajs: &[Trajectory]) -> String {
    let mut out = String::from("index,t,x,y,h_abs,status\n");
    for (i, tr) in trajs.iter().enumerate() {
        tr.write_rows(&mut out, Some(i));
    }
    out
}

struct Lowered {
    f: FloatPoly,
    g: FloatPoly,
    h: Option<FloatPoly>,
}

impl Lowered {
    fn new(sys: &PlanarSystem, target: Option<&Target>) -> Self {
        Lowered {
            f: sys.f.lower(),
            g: sys.g.lower(),
            h: target.map(|t| t.h.lower()),
        }
    }

    fn rhs(&self, y: &State) -> State {
        [self.f.eval(y[0], y[1]), self.g.eval(y[0], y[1])]
    }
}

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const FACC1: f64 = 5.0;
const FACC2: f64 = 0.1;

fn run(lw: &Lowered, start: (f64, f64), cfg: &SimConfig, target: Option<&Target>) -> Trajectory {
    let mut traj = Trajectory {
        samples: Vec::new(),
        h_residuals: Vec::new(),
        status: Status::StepFailure,
        accepted_steps: 0,
        rejected_steps: 0,
        tolerances: (cfg.rel_tol, cfg.abs_tol),
    };
    if !(start.0.is_finite() && start.1.is_finite()) {
        return traj;
    }
    let rhs = |y: &State| lw.rhs(y);
    let residual = |y: &State| lw.h.as_ref().map(|h| h.eval(y[0], y[1]).abs());
    let record = |traj: &mut Trajectory, t: f64, y: State| {
        traj.samples.push((t, y[0], y[1]));
        if let Some(r) = residual(&y) {
            traj.h_residuals.push(r);
        }
    };

    let expo1 = 0.2 - 0.75 * BETA;
    let mut t = 0.0;
    let mut y: State = [start.0, start.1];
    let mut k1 = rhs(&y);
    record(&mut traj, t, y);
    let mut next_out = 1usize;

    let h_max = cfg.t_max;
    let mut h = initial_step(&rhs, &y, &k1, cfg.rel_tol, cfg.abs_tol, h_max);
    let mut facold: f64 = 1e-4;
    let mut last_rejected = false;
    let mut below_since: Option<f64> = residual(&y).filter(|r| *r < cfg.converge_tol).map(|_| t);
    let status;

    if !(k1[0].is_finite() && k1[1].is_finite()) {
        return traj;
    }
    if k1 == [0.0, 0.0] {
        // Equilibrium: the solution is constant.
        while (next_out as f64) * cfg.output_dt <= cfg.t_max {
            record(&mut traj, next_out as f64 * cfg.output_dt, y);
            next_out += 1;
        }
        let converged = residual(&y).is_some_and(|r| r < cfg.converge_tol);
        traj.status = if converged {
            Status::ConvergedToCurve {
                oval: nearest(target, y),
            }
        } else {
            Status::ReachedTmax
        };
        return traj;
    }

    loop {
        if traj.accepted_steps + traj.rejected_steps >= cfg.max_steps {
            status = Status::StepFailure;
            break;
        }
        let last = t + h >= cfg.t_max;
        if last {
            h = cfg.t_max - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            status = Status::StepFailure;
            break;
        }
        let tr = trial(&rhs, &y, &k1, h);
        let err = error_norm(&tr.err, &y, &tr.y, cfg.rel_tol, cfg.abs_tol);
        if !err.is_finite() {
            traj.rejected_steps += 1;
            h *= FACC2;
            last_rejected = true;
            continue;
        }
        let fac11 = err.powf(expo1);
        if err <= 1.0 {
            let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(FACC2, FACC1);
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
            }
            facold = err.max(1e-4);
            traj.accepted_steps += 1;
            last_rejected = false;

            let t1 = if last { cfg.t_max } else { t + h };
            let dense = Dense::new(t, h, &y, &tr);
            loop {
                let ts = next_out as f64 * cfg.output_dt;
                if ts >= t1 {
                    break;
                }
                record(&mut traj, ts, dense.eval(ts));
                next_out += 1;
            }
            t = t1;
            y = tr.y;
            k1 = tr.k7;

            if y[0] < -cfg.abs_tol || y[1] < -cfg.abs_tol {
                record(&mut traj, t, y);
                status = Status::LeftDomain;
                break;
            }
            if let Some(r) = residual(&y) {
                if r < cfg.converge_tol {
                    let since = *below_since.get_or_insert(t);
                    if cfg.stop_on_converge && t - since >= cfg.dwell_time {
                        record(&mut traj, t, y);
                        status = Status::ConvergedToCurve {
                            oval: nearest(target, y),
                        };
                        break;
                    }
                } else {
                    below_since = None;
                }
            }
            if last {
                record(&mut traj, t, y);
                status = match below_since {
                    Some(s) if t - s >= cfg.dwell_time => Status::ConvergedToCurve {
                        oval: nearest(target, y),
                    },
                    _ => Status::ReachedTmax,
                };
                break;
            }
            h = h_new.min(h_max);
        } else {
            traj.rejected_steps += 1;
            h /= FACC1.min(fac11 / SAFE);
            last_rejected = true;
        }
    }
    traj.status = status;
    traj
}

fn nearest(target: Option<&Target>, y: State) -> Option<usize> {
    target
        .and_then(|t| t.ovals.nearest((y[0], y[1])))
        .map(|(i, _)| i)
}

/// Integrates `sys` from `start` until `t_max`, convergence onto the target
/// curve, a step failure, or a domain breach.
///
/// # Panics
/// If `cfg` is invalid.
pub fn integrate(
    sys: &PlanarSystem,
    start: (f64, f64),
    cfg: &SimConfig,
    target: Option<&Target>,
) -> Trajectory {
    cfg.validate().expect("invalid SimConfig");
    run(&Lowered::new(sys, target), start, cfg, target)
}

/// Integrates from each start in parallel; results follow the order of `starts`.
pub fn sweep(
    sys: &PlanarSystem,
    starts: &[(f64, f64)],
    cfg: &SimConfig,
    target: Option<&Target>,
) -> Vec<Trajectory> {
    cfg.validate().expect("invalid SimConfig");
    let lw = Lowered::new(sys, target);
    starts
        .par_iter()
        .map(|&s| run(&lw, s, cfg, target))
        .collect()
}

/// True iff the recorded `|h|` never increases by more than
/// `10 (rel_tol · max|h| + abs_tol)` from one sample to the next.
///
/// Meaningful only for gradient constructions in the open positive quadrant;
/// false when no target was attached.
pub fn monotone_residual_check(traj: &Trajectory) -> bool {
    let r = &traj.h_residuals;
    if r.is_empty() {
        return false;
    }
    let (rtol, atol) = traj.tolerances;
    let max = r.iter().cloned().fold(0.0, f64::max);
    let slack = 10.0 * (rtol * max + atol);
    r.windows(2).all(|w| w[1] <= w[0] + slack)
}
