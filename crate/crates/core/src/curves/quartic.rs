//! Closed-form facts about the quartic family
//! `q = 16(x⁴ + y⁴) − 25(x² + y²) + μx²y² + 9` and the `h_δ` factors.

use num::{BigInt, Signed, Zero};

use super::{q, CurveError, CurveSpec};
use crate::poly::{int, rat, rat_to_f64, Rat};

/// Exact square root of a nonnegative rational, if it is rational.
fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(Rat::new(root(r.numer())?, root(r.denom())?))
}

/// Nonnegative rational roots of `a t² + b t + c` in `t = s²`, mapped to
/// `±s`. Returns `None` if a root is irrational.
fn biquadratic_roots(a: &Rat, b: &Rat, c: &Rat) -> Option<Vec<Rat>> {
    let disc = b * b - int(4) * a * c;
    let d = rat_sqrt(&disc)?;
    let mut ts = vec![(-b - &d) / (int(2) * a), (-b + &d) / (int(2) * a)];
    ts.dedup();
    let mut out = Vec::new();
    for t in ts.iter().filter(|t| !t.is_negative()) {
        let s = rat_sqrt(t)?;
        if s.is_zero() {
            out.push(s);
        } else {
            out.push(-s.clone());
            out.push(s);
        }
    }
    out.sort();
    Some(out)
}

fn q_mu(spec: &CurveSpec) -> Result<Rat, CurveError> {
    if spec.name != "q" {
        return Err(CurveError::NotQFamily(spec.name.clone()));
    }
    let mu = spec
        .param("mu")
        .cloned()
        .ok_or_else(|| CurveError::BadParams("missing parameter 'mu'".into()))?;
    if spec.poly != q(&mu) {
        return Err(CurveError::NotQFamily(spec.name.clone()));
    }
    Ok(mu)
}

/// Exact intersections of `q = 0` with the coordinate axes.
///
/// On each axis `q` restricts to `16s⁴ − 25s² + 9`, independent of μ; its
/// roots are found exactly and every returned point satisfies `q = 0` in
/// rational arithmetic.
pub fn axis_intersections(spec: &CurveSpec) -> Result<Vec<(Rat, Rat)>, CurveError> {
    q_mu(spec)?;
    let h = &spec.poly;
    let zero = Rat::zero();
    let on_x = biquadratic_roots(&h.coeff(4, 0), &h.coeff(2, 0), &h.coeff(0, 0))
        .expect("axis roots of q are rational");
    let on_y = biquadratic_roots(&h.coeff(0, 4), &h.coeff(0, 2), &h.coeff(0, 0))
        .expect("axis roots of q are rational");
    let mut pts: Vec<(Rat, Rat)> = on_x.into_iter().map(|s| (s, zero.clone())).collect();
    pts.extend(on_y.into_iter().map(|s| (zero.clone(), s)));
    debug_assert!(pts.iter().all(|(x, y)| h.eval(x, y).is_zero()));
    Ok(pts)
}

/// A real root of `q(x, x) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalRoot {
    pub x: f64,
    pub multiplicity: u32,
}

/// Real roots of `q(x, x) = (32 + μ)x⁴ − 50x² + 9`, ascending.
///
/// Two simple roots for `μ ≤ −32`, four for `−32 < μ < 337/9`, two double
/// roots `±3/5` at `μ = 337/9`, none above.
pub fn diagonal_roots(mu: &Rat) -> Vec<DiagonalRoot> {
    let simple = |x: f64| DiagonalRoot { x, multiplicity: 1 };
    let lead = int(32) + mu;
    let crunode = rat(337, 9);
    let mut xs: Vec<DiagonalRoot> = if lead.is_zero() {
        let x = 3.0 / (5.0 * 2f64.sqrt());
        vec![simple(-x), simple(x)]
    } else if *mu == crunode {
        vec![
            DiagonalRoot {
                x: -0.6,
                multiplicity: 2,
            },
            DiagonalRoot {
                x: 0.6,
                multiplicity: 2,
            },
        ]
    } else if *mu > crunode {
        Vec::new()
    } else {
        let a = rat_to_f64(&lead);
        let disc = rat_to_f64(&(int(337) - int(9) * mu)).sqrt();
        let ts: Vec<f64> = if lead.is_negative() {
            vec![(25.0 - disc) / a]
        } else {
            vec![(25.0 - disc) / a, (25.0 + disc) / a]
        };
        ts.iter()
            .flat_map(|t| [simple(-t.sqrt()), simple(t.sqrt())])
            .collect()
    };
    xs.sort_by(|a, b| a.x.total_cmp(&b.x));
    xs
}

/// x-extent of the `h_δ` oval: `1 + (δ ± √(δ(12 + δ)))/6`.
pub fn hi_x_range(delta: f64) -> (f64, f64) {
    let r = (delta * (12.0 + delta)).sqrt();
    (1.0 + (delta - r) / 6.0, 1.0 + (delta + r) / 6.0)
}
