//! Systems with prescribed algebraic limit cycles.
//!
//! The central form is
//!
//! ```text
//! f = h f0 − ε xy h_y
//! g = h g0 + ε xy h_x
//! ```
//!
//! for which `h_x f + h_y g = (f0 h_x + g0 h_y) h`: the ε terms cancel, so
//! `h = 0` is invariant for every ε and the sign of the transversality
//! function `T = f0 h_x + g0 h_y` on an oval decides its stability.

use std::fmt;

use num::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::crn::{Construction, PlanarSystem};
use crate::curves::{self, OvalSet};
use crate::poly::{DivError, Poly2, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("line must have degree at most 1, got {0}")]
    Degree(i64),
    #[error("delta {0} appears more than once")]
    DuplicateDelta(Rat),
    #[error("delta must be positive, got {0}")]
    NonpositiveDelta(Rat),
    #[error("the zero polynomial is not a curve")]
    ZeroCurve,
    #[error("no ovals to classify")]
    EmptyOvalSet,
}

/// `f = h f0 − ε xy h_y`, `g = h g0 + ε xy h_x`, with the inputs kept as
/// metadata.
pub fn build_general(h: &Poly2, f0: &Poly2, g0: &Poly2, eps: &Rat) -> PlanarSystem {
    let exy = Poly2::monomial(eps.clone(), 1, 1);
    let f = h * f0 - &exy * h.dy();
    let g = h * g0 + &exy * h.dx();
    PlanarSystem {
        f,
        g,
        meta: Some(Construction {
            h: h.clone(),
            f0: f0.clone(),
            g0: g0.clone(),
            eps: eps.clone(),
        }),
    }
}

/// The drift `(−xy h_x, −xy h_y)` that makes every oval in the open
/// positive quadrant stable.
pub fn gradient_drift(h: &Poly2) -> (Poly2, Poly2) {
    let mxy = Poly2::from_int_terms(&[(1, 1, -1)]);
    (&mxy * h.dx(), &mxy * h.dy())
}

/// [`build_general`] with the gradient drift; degree `2 deg h + 1` and
/// cofactor `−xy ‖∇h‖²`.
pub fn build_gradient(h: &Poly2, eps: &Rat) -> PlanarSystem {
    let (f0, g0) = gradient_drift(h);
    build_general(h, &f0, &g0, eps)
}

/// `f = h + ℓ h_y`, `g = h − ℓ h_x` for a line `ℓ`; cofactor `h_x + h_y`.
pub fn build_christopher(h: &Poly2, line: &Poly2) -> Result<PlanarSystem, ConstructError> {
    if line.degree() > 1 {
        return Err(ConstructError::Degree(line.degree()));
    }
    Ok(PlanarSystem::new(h + line * h.dy(), h - line * h.dx()))
}

/// Product of the quartic factors `h_δ` for the given δ values.
pub fn product_curve(deltas: &[Rat]) -> Result<Poly2, ConstructError> {
    for (k, d) in deltas.iter().enumerate() {
        if !d.is_positive() {
            return Err(ConstructError::NonpositiveDelta(d.clone()));
        }
        if deltas[..k].contains(d) {
            return Err(ConstructError::DuplicateDelta(d.clone()));
        }
    }
    Ok(deltas
        .iter()
        .fold(Poly2::one(), |acc, d| acc * curves::h_delta(d)))
}

/// Result of testing whether `h = 0` is invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofactorResult {
    pub is_invariant: bool,
    /// `s` with `h_x f + h_y g = s h`, when it exists.
    pub cofactor: Option<Poly2>,
    /// Division remainder when it does not.
    pub remainder: Option<Poly2>,
}

/// Exact test of `h_x f + h_y g ≡ 0 (mod h)`.
pub fn check_invariant_curve(
    h: &Poly2,
    sys: &PlanarSystem,
) -> Result<CofactorResult, ConstructError> {
    if h.is_zero() {
        return Err(ConstructError::ZeroCurve);
    }
    let lhs = h.dx() * &sys.f + h.dy() * &sys.g;
    match lhs.try_div_exact(h) {
        Ok(s) => Ok(CofactorResult {
            is_invariant: true,
            cofactor: Some(s),
            remainder: None,
        }),
        Err(DivError::NotDivisible { remainder }) => Ok(CofactorResult {
            is_invariant: false,
            cofactor: None,
            remainder: Some(remainder),
        }),
        Err(DivError::ZeroDivisor) => Err(ConstructError::ZeroCurve),
    }
}

/// `p(x − dx, y − dy)` for both components, then multiplied by `factor`.
pub fn shift_and_multiply(sys: &PlanarSystem, dx: &Rat, dy: &Rat, factor: &Poly2) -> PlanarSystem {
    PlanarSystem::new(sys.f.shift(dx, dy) * factor, sys.g.shift(dx, dy) * factor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    Mixed,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OvalVerdict {
    pub index: usize,
    pub tag: Stability,
    /// `T = f0 h_x + g0 h_y` at each polyline vertex (closing vertex excluded).
    pub samples: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub ovals: Vec<OvalVerdict>,
}

impl StabilityVerdict {
    pub fn tags(&self) -> Vec<Stability> {
        self.ovals.iter().map(|o| o.tag).collect()
    }
}

/// Classifies each oval by the sign of `T` at its vertices.
///
/// Samples are normalized by the largest `|T|` on the oval; the oval is
/// stable if every normalized sample is below `−tau`, unstable if every
/// one is above `tau`, and mixed otherwise.
pub fn classify_transversality(
    h: &Poly2,
    f0: &Poly2,
    g0: &Poly2,
    ovals: &OvalSet,
    tau: f64,
) -> Result<StabilityVerdict, ConstructError> {
    if ovals.ovals.is_empty() {
        return Err(ConstructError::EmptyOvalSet);
    }
    let t = (f0 * h.dx() + g0 * h.dy()).lower();
    let verdicts = ovals
        .ovals
        .par_iter()
        .enumerate()
        .map(|(index, poly)| {
            let pts = &poly[..poly.len().saturating_sub(1).max(1)];
            let samples: Vec<f64> = pts.iter().map(|&(x, y)| t.eval(x, y)).collect();
            let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
            let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let scale = min.abs().max(max.abs());
            let tag = if scale == 0.0 || !scale.is_finite() {
                Stability::Mixed
            } else if max / scale < -tau {
                Stability::Stable
            } else if min / scale > tau {
                Stability::Unstable
            } else {
                Stability::Mixed
            };
            OvalVerdict {
                index,
                tag,
                samples,
                min,
                max,
            }
        })
        .collect();
    Ok(StabilityVerdict { ovals: verdicts })
}
