//! Key-value run configuration shared by recipe files, `--config` and flags.

use std::collections::BTreeMap;

use planar_crn::construct::{build_christopher, build_general, build_gradient};
use planar_crn::crn::PlanarSystem;
use planar_crn::curves::{self, CurveSpec, Window};
use planar_crn::poly::{parse_rat, Poly2, Rat};
use planar_crn::presets;
use planar_crn::sim::SimConfig;

use crate::CliError;

const KEYS: &[&str] = &[
    "curve",
    "mu",
    "delta",
    "deltas",
    "h",
    "shift",
    "window",
    "resolution",
    "builder",
    "eps",
    "drift",
    "f0",
    "g0",
    "line",
    "system",
    "tau",
    "rel_tol",
    "abs_tol",
    "t_max",
    "max_steps",
    "converge_tol",
    "dwell_time",
    "output_dt",
    "stop_on_converge",
    "starts",
    "grid",
    "shade",
    "log_axes",
    "title",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builder {
    General,
    Gradient,
    Christopher,
}

/// Validated settings for one run. Every field is optional in the input;
/// defaults apply where a command needs a value.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub curve: Option<String>,
    pub params: BTreeMap<String, Rat>,
    pub h: Option<Poly2>,
    pub shift: Option<(Rat, Rat)>,
    pub window: Option<Window>,
    pub resolution: Option<usize>,
    pub builder: Option<Builder>,
    pub eps: Option<Rat>,
    pub drift: Option<(Poly2, Poly2)>,
    pub line: Option<Poly2>,
    pub system: Option<String>,
    pub tau: f64,
    pub sim: SimConfig,
    pub starts: Vec<(f64, f64)>,
    pub shade: bool,
    pub log_axes: bool,
    pub title: Option<String>,
}

fn bad(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("config key '{key}': {msg}"))
}

fn floats(key: &str, v: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let xs: Vec<f64> = v
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| bad(key, e))?;
    if xs.len() != n {
        return Err(bad(key, format!("expected {n} comma-separated numbers")));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(bad(key, "values must be finite"));
    }
    Ok(xs)
}

fn boolean(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(bad(key, format!("expected true or false, got '{v}'"))),
    }
}

fn poly(key: &str, v: &str) -> Result<Poly2, CliError> {
    v.parse().map_err(|e| bad(key, e))
}

fn rational(key: &str, v: &str) -> Result<Rat, CliError> {
    parse_rat(v).map_err(|e| bad(key, e))
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("line {}: expected 'key = value'", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl RunConfig {
    /// Builds a configuration from pairs applied in order; later pairs win.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<RunConfig, CliError> {
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        for (k, v) in pairs {
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Input(format!("unknown config key '{k}'")));
            }
            map.insert(k, v);
        }
        let mut c = RunConfig {
            tau: 1e-9,
            ..Default::default()
        };
        for (&k, &v) in &map {
            match k {
                "curve" => c.curve = Some(v.to_string()),
                "mu" | "delta" => {
                    c.params.insert(k.to_string(), rational(k, v)?);
                }
                "deltas" => {
                    for (i, d) in v.split(',').enumerate() {
                        c.params
                            .insert(format!("delta{}", i + 1), rational(k, d.trim())?);
                    }
                }
                "h" => c.h = Some(poly(k, v)?),
                "shift" => {
                    let (a, b) = v
                        .split_once(',')
                        .ok_or_else(|| bad(k, "expected 'dx, dy'"))?;
                    c.shift = Some((rational(k, a.trim())?, rational(k, b.trim())?));
                }
                "window" => {
                    let w = floats(k, v, 4)?;
                    if !(w[0] < w[1] && w[2] < w[3]) {
                        return Err(bad(k, "expected x0 < x1 and y0 < y1"));
                    }
                    c.window = Some(Window::new(w[0], w[1], w[2], w[3]));
                }
                "resolution" => {
                    c.resolution = Some(v.parse().map_err(|e| bad(k, e))?);
                }
                "builder" => {
                    c.builder = Some(match v {
                        "general" => Builder::General,
                        "gradient" => Builder::Gradient,
                        "christopher" => Builder::Christopher,
                        _ => return Err(bad(k, format!("unknown builder '{v}'"))),
                    })
                }
                "eps" => c.eps = Some(rational(k, v)?),
                "drift" => {
                    c.drift = Some(match v {
                        "linear" => presets::linear_drift(),
                        "unit-square" => presets::unit_square_drift(),
                        _ => return Err(bad(k, format!("unknown drift '{v}'"))),
                    })
                }
                "f0" | "g0" => {}
                "line" => c.line = Some(poly(k, v)?),
                "system" => c.system = Some(v.to_string()),
                "tau" => c.tau = v.parse().map_err(|e| bad(k, e))?,
                "rel_tol" => c.sim.rel_tol = v.parse().map_err(|e| bad(k, e))?,
                "abs_tol" => c.sim.abs_tol = v.parse().map_err(|e| bad(k, e))?,
                "t_max" => c.sim.t_max = v.parse().map_err(|e| bad(k, e))?,
                "max_steps" => c.sim.max_steps = v.parse().map_err(|e| bad(k, e))?,
                "converge_tol" => c.sim.converge_tol = v.parse().map_err(|e| bad(k, e))?,
                "dwell_time" => c.sim.dwell_time = v.parse().map_err(|e| bad(k, e))?,
                "output_dt" => c.sim.output_dt = v.parse().map_err(|e| bad(k, e))?,
                "stop_on_converge" => c.sim.stop_on_converge = boolean(k, v)?,
                "starts" => {
                    for s in v.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                        let p = floats(k, s, 2)?;
                        c.starts.push((p[0], p[1]));
                    }
                }
                "grid" => {
                    let g = floats(k, v, 6)?;
                    let (nx, ny) = (g[4] as usize, g[5] as usize);
                    if nx < 2 || ny < 2 || g[4].fract() != 0.0 || g[5].fract() != 0.0 {
                        return Err(bad(k, "grid counts must be integers of at least 2"));
                    }
                    for j in 0..ny {
                        for i in 0..nx {
                            let x = g[0] + (g[1] - g[0]) * i as f64 / (nx - 1) as f64;
                            let y = g[2] + (g[3] - g[2]) * j as f64 / (ny - 1) as f64;
                            c.starts.push((x, y));
                        }
                    }
                }
                "shade" => c.shade = boolean(k, v)?,
                "log_axes" => c.log_axes = boolean(k, v)?,
                "title" => c.title = Some(v.to_string()),
                _ => unreachable!("key list and match disagree"),
            }
        }
        match (map.get("f0"), map.get("g0")) {
            (Some(f), Some(g)) => {
                if c.drift.is_some() {
                    return Err(CliError::Input("give either 'drift' or 'f0'/'g0'".into()));
                }
                c.drift = Some((poly("f0", f)?, poly("g0", g)?));
            }
            (None, None) => {}
            _ => {
                return Err(CliError::Input(
                    "'f0' and 'g0' must be given together".into(),
                ))
            }
        }
        if c.curve.is_some() && c.h.is_some() {
            return Err(CliError::Input("give either 'curve' or 'h'".into()));
        }
        if c.curve.is_none() && !c.params.is_empty() {
            return Err(CliError::Input(
                "curve parameters given without 'curve'".into(),
            ));
        }
        c.sim.validate().map_err(CliError::Input)?;
        if !(c.tau >= 0.0 && c.tau < 1.0) {
            return Err(bad("tau", "must lie in [0, 1)"));
        }
        Ok(c)
    }

    pub fn has_curve(&self) -> bool {
        self.curve.is_some() || self.h.is_some()
    }

    /// The target curve with shift and window overrides applied.
    pub fn curve_spec(&self) -> Result<CurveSpec, CliError> {
        let mut spec = match (&self.curve, &self.h) {
            (Some(name), None) => {
                curves::catalog(name, &self.params).map_err(|e| CliError::Input(e.to_string()))?
            }
            (None, Some(h)) => {
                let window = self
                    .window
                    .ok_or_else(|| CliError::Input("a custom 'h' needs a 'window'".into()))?;
                CurveSpec {
                    name: "custom".into(),
                    poly: h.clone(),
                    params: BTreeMap::new(),
                    window,
                    expected_ovals: None,
                }
            }
            _ => return Err(CliError::Input("no curve given ('curve' or 'h')".into())),
        };
        if let Some((dx, dy)) = &self.shift {
            spec.poly = spec.poly.shift(dx, dy);
            let (a, b) = (
                planar_crn::poly::rat_to_f64(dx),
                planar_crn::poly::rat_to_f64(dy),
            );
            let w = spec.window;
            spec.window = Window::new(w.x0 + a, w.x1 + a, w.y0 + b, w.y1 + b);
        }
        if let Some(w) = self.window {
            spec.window = w;
        }
        Ok(spec)
    }

    pub fn resolution_for(&self, spec: &CurveSpec) -> usize {
        self.resolution
            .unwrap_or_else(|| curves::default_resolution(&spec.name))
    }

    /// The drift `(f0, g0)` implied by the builder, if any.
    pub fn drift_for(&self, h: &Poly2) -> Option<(Poly2, Poly2)> {
        match self.builder {
            Some(Builder::Gradient) => Some(planar_crn::construct::gradient_drift(h)),
            Some(Builder::Christopher) => Some((Poly2::one(), Poly2::one())),
            _ => self.drift.clone(),
        }
    }

    /// Builds the system described by the recipe.
    pub fn build_system(&self) -> Result<(PlanarSystem, Option<CurveSpec>), CliError> {
        if let Some(path) = &self.system {
            let text = crate::read(path)?;
            let sys: PlanarSystem = text
                .parse()
                .map_err(|e| CliError::Input(format!("{path}: {e}")))?;
            let spec = self.has_curve().then(|| self.curve_spec()).transpose()?;
            return Ok((sys, spec));
        }
        let builder = self
            .builder
            .ok_or_else(|| CliError::Input("no 'builder' or 'system' given".into()))?;
        let spec = self.curve_spec()?;
        let h = &spec.poly;
        let eps = || {
            self.eps
                .clone()
                .ok_or_else(|| CliError::Input("builder needs 'eps'".into()))
        };
        let sys = match builder {
            Builder::General => {
                let (f0, g0) = self.drift.clone().ok_or_else(|| {
                    CliError::Input("general builder needs 'drift' or 'f0'/'g0'".into())
                })?;
                build_general(h, &f0, &g0, &eps()?)
            }
            Builder::Gradient => build_gradient(h, &eps()?),
            Builder::Christopher => {
                let line = self
                    .line
                    .clone()
                    .ok_or_else(|| CliError::Input("christopher builder needs 'line'".into()))?;
                build_christopher(h, &line).map_err(|e| CliError::Input(e.to_string()))?
            }
        };
        Ok((sys, Some(spec)))
    }
}
