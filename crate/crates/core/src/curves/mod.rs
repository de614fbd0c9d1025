//! Named algebraic curves and numerical extraction of their ovals.

mod march;
mod quartic;

use std::collections::BTreeMap;
use std::fmt;

use num::Signed;
use thiserror::Error;

use crate::poly::{int, parse_rat, rat, rat_to_f64, Poly2, Rat};

pub use march::{extract_ovals, extract_ovals_lenient};
pub use quartic::{axis_intersections, diagonal_roots, hi_x_range, DiagonalRoot};

pub type Point = (f64, f64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("unknown curve '{0}'")]
    UnknownCurve(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("resolution {0} is below the minimum of 32")]
    ResolutionTooLow(usize),
    #[error("{saddles} ambiguous cells remain at resolution {resolution}")]
    ResolutionTooCoarse { resolution: usize, saddles: usize },
    #[error("curve '{0}' is not a member of the quartic q family")]
    NotQFamily(String),
}

/// Axis-aligned extraction rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Window { x0, x1, y0, y1 }
    }

    pub fn square(lo: f64, hi: f64) -> Self {
        Window::new(lo, hi, lo, hi)
    }

    pub fn contains(&self, (x, y): Point) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.x0, self.x1, self.y0, self.y1)
    }
}

/// A catalog curve at concrete parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub name: String,
    pub poly: Poly2,
    pub params: BTreeMap<String, Rat>,
    pub window: Window,
    pub expected_ovals: Option<usize>,
}

impl CurveSpec {
    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn param(&self, key: &str) -> Option<&Rat> {
        self.params.get(key)
    }
}

fn p(s: &str) -> Poly2 {
    s.parse().expect("catalog polynomial")
}

/// `10x² − 12xy + 4y² + 20x − 16y + 19`, centred at `(2, 5)`.
pub fn ellipse() -> Poly2 {
    p("10 x^2 - 12 x y + 4 y^2 + 20 x - 16 y + 19")
}

/// Quartic with three ovals in the positive quadrant.
pub fn three_oval() -> Poly2 {
    p("x^2 y^2 - 9/1000 x^3 y - 9/1000 x y^3 + 6/10000 x^3 + 6/10000 y^3 + 2/50 x^2 y + 2/50 x y^2 - 2 x y + 934/1000")
}

/// `x² + xy² + y − 4xy`.
pub fn wr_small() -> Poly2 {
    p("x^2 + x y^2 + y - 4 x y")
}

/// `x²y² + x²y + xy² + x² + y² + x + y + 1 − 9xy`.
pub fn h9() -> Poly2 {
    h_delta(&int(1))
}

/// `x²y² + x²y + xy² + x² + y² + x + y + 1 − (8 + δ)xy`.
pub fn h_delta(delta: &Rat) -> Poly2 {
    let mut h = p("x^2 y^2 + x^2 y + x y^2 + x^2 + y^2 + x + y + 1");
    h -= &Poly2::monomial(int(8) + delta, 1, 1);
    h
}

/// `16(x⁴ + y⁴) − 25(x² + y²) + μx²y² + 9`.
pub fn q(mu: &Rat) -> Poly2 {
    let mut h = p("16 x^4 + 16 y^4 - 25 x^2 - 25 y^2 + 9");
    h += &Poly2::monomial(mu.clone(), 2, 2);
    h
}

/// `q(x − 2, y − 2)`.
pub fn q_shifted(mu: &Rat) -> Poly2 {
    q(mu).shift(&int(2), &int(2))
}

/// Extraction window for `q(μ)`: wide enough for the outer diagonal
/// crossing, at least `[−1.5, 1.5]²`.
pub fn q_window(mu: &Rat) -> Window {
    let far = diagonal_roots(mu)
        .iter()
        .map(|r| r.x.abs())
        .fold(0.0, f64::max);
    let w = (1.5 * far).max(1.5);
    Window::square(-w, w)
}

/// Oval count of `q(μ)` away from the crunode parameter `337/9`.
pub fn q_expected_ovals(mu: &Rat) -> Option<usize> {
    let crunode = rat(337, 9);
    if *mu <= int(-32) {
        Some(1)
    } else if *mu < crunode {
        Some(2)
    } else if *mu > crunode {
        Some(4)
    } else {
        None
    }
}

pub const CATALOG: &[&str] = &[
    "ellipse",
    "three-oval",
    "wr-small",
    "h9",
    "hi",
    "product",
    "q",
    "q-shifted",
];

/// Grid resolution that resolves every oval of the named catalog curve.
///
/// The three-oval curve has long, thin ovals whose tips pinch off into
/// spurious small ovals below 2048 cells per side.
pub fn default_resolution(name: &str) -> usize {
    match name {
        "three-oval" => 2048,
        _ => 512,
    }
}

fn take(params: &mut BTreeMap<String, Rat>, key: &str) -> Result<Rat, CurveError> {
    params
        .remove(key)
        .ok_or_else(|| CurveError::BadParams(format!("missing parameter '{key}'")))
}

/// Looks up a curve by name. Parameters: `mu` for `q` and `q-shifted`,
/// `delta` for `hi`, `delta1`, `delta2`, ... for `product`.
pub fn catalog(name: &str, params: &BTreeMap<String, Rat>) -> Result<CurveSpec, CurveError> {
    let mut rest = params.clone();
    let (poly, window, expected) = match name {
        "ellipse" => (ellipse(), Window::new(0.5, 3.5, 3.0, 7.0), Some(1)),
        "three-oval" => (three_oval(), Window::square(0.05, 13.0), Some(3)),
        "wr-small" => (wr_small(), Window::square(0.1, 4.0), Some(1)),
        "h9" => (h9(), Window::square(0.3, 4.0), Some(1)),
        "hi" => {
            let d = take(&mut rest, "delta")?;
            if !d.is_positive() {
                return Err(CurveError::BadParams("delta must be positive".into()));
            }
            (h_delta(&d), Window::square(0.3, 4.0), Some(1))
        }
        "product" => {
            let mut deltas = Vec::new();
            for k in 1.. {
                match rest.remove(&format!("delta{k}")) {
                    Some(d) => deltas.push(d),
                    None => break,
                }
            }
            if deltas.is_empty() {
                return Err(CurveError::BadParams(
                    "product needs delta1, delta2, ...".into(),
                ));
            }
            let poly = crate::construct::product_curve(&deltas)
                .map_err(|e| CurveError::BadParams(e.to_string()))?;
            (poly, Window::square(0.3, 4.0), Some(deltas.len()))
        }
        "q" => {
            let mu = take(&mut rest, "mu")?;
            (q(&mu), q_window(&mu), q_expected_ovals(&mu))
        }
        "q-shifted" => {
            let mu = take(&mut rest, "mu")?;
            (
                q_shifted(&mu),
                Window::square(0.3, 4.0),
                q_expected_ovals(&mu),
            )
        }
        other => return Err(CurveError::UnknownCurve(other.to_string())),
    };
    if let Some(extra) = rest.keys().next() {
        return Err(CurveError::BadParams(format!(
            "parameter '{extra}' does not apply to '{name}'"
        )));
    }
    Ok(CurveSpec {
        name: name.to_string(),
        poly,
        params: params.clone(),
        window,
        expected_ovals: expected,
    })
}

/// Parses `mu=39,delta1=1` style parameter lists.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, Rat>, CurveError> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CurveError::BadParams(format!("expected key=value, got '{part}'")))?;
        let v = parse_rat(v).map_err(|e| CurveError::BadParams(format!("{}: {e}", k.trim())))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// Components of `h = 0` traced on a grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OvalSet {
    /// Closed polylines, first vertex repeated at the end, counter-clockwise.
    pub ovals: Vec<Vec<Point>>,
    /// Traced pieces that leave the window.
    pub open_components: Vec<Vec<Point>>,
    /// Set when ambiguous cells had to be resolved without refinement.
    pub degenerate: bool,
    /// Cells per side actually used (after any refinement).
    pub resolution: usize,
    /// Cell width and height.
    pub cell: (f64, f64),
}

/// Signed shoelace area; positive for counter-clockwise polylines.
pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut a = 0.0;
    for k in 0..n {
        let (x0, y0) = poly[k];
        let (x1, y1) = poly[(k + 1) % n];
        a += x0 * y1 - x1 * y0;
    }
    a / 2.0
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(poly: &[Point], (px, py): Point) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (xi, yi) = poly[i];
        let (xj, yj) = poly[j];
        if (yi > py) != (yj > py) && px < (xj - xi) * (py - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn segment_distance((px, py): Point, (ax, ay): Point, (bx, by): Point) -> f64 {
    let (dx, dy) = (bx - ax, by - ay);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((px - ax) * dx + (py - ay) * dy) / len2).clamp(0.0, 1.0)
    };
    (px - ax - t * dx).hypot(py - ay - t * dy)
}

/// Distance from a point to a polyline.
pub fn polyline_distance(poly: &[Point], pt: Point) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => (pt.0 - poly[0].0).hypot(pt.1 - poly[0].1),
        _ => poly
            .windows(2)
            .map(|w| segment_distance(pt, w[0], w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

impl OvalSet {
    pub fn len(&self) -> usize {
        self.ovals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ovals.is_empty()
    }

    pub fn area(&self, i: usize) -> f64 {
        signed_area(&self.ovals[i]).abs()
    }

    /// Oval indices by increasing enclosed area.
    pub fn by_area(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.ovals.len()).collect();
        idx.sort_by(|&a, &b| self.area(a).total_cmp(&self.area(b)));
        idx
    }

    /// Number of other ovals enclosing oval `i`.
    pub fn depth(&self, i: usize) -> usize {
        let v = self.ovals[i][0];
        (0..self.ovals.len())
            .filter(|&j| j != i && point_in_polygon(&self.ovals[j], v))
            .count()
    }

    /// Index of and distance to the closest oval.
    pub fn nearest(&self, pt: Point) -> Option<(usize, f64)> {
        self.ovals
            .iter()
            .map(|o| polyline_distance(o, pt))
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// `(min x, max x, min y, max y)` of oval `i`.
    pub fn bounds(&self, i: usize) -> (f64, f64, f64, f64) {
        self.ovals[i].iter().fold(
            (
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
            ),
            |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
        )
    }

    /// `index,closed,x,y` rows; open components are numbered after the ovals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,closed,x,y\n");
        let all = self
            .ovals
            .iter()
            .map(|o| (true, o))
            .chain(self.open_components.iter().map(|o| (false, o)));
        for (k, (closed, pts)) in all.enumerate() {
            for (x, y) in pts {
                out.push_str(&format!("{k},{closed},{x},{y}\n"));
            }
        }
        out
    }

    /// Reads the format written by [`OvalSet::to_csv`].
    pub fn from_csv(text: &str) -> Result<OvalSet, String> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "index,closed,x,y" => {}
            _ => return Err("missing header 'index,closed,x,y'".into()),
        }
        let mut blocks: Vec<(usize, bool, Vec<Point>)> = Vec::new();
        for (n, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || format!("line {}: expected index,closed,x,y", n + 1);
            if cols.len() != 4 {
                return Err(bad());
            }
            let idx: usize = cols[0].parse().map_err(|_| bad())?;
            let closed: bool = cols[1].parse().map_err(|_| bad())?;
            let x: f64 = cols[2].parse().map_err(|_| bad())?;
            let y: f64 = cols[3].parse().map_err(|_| bad())?;
            match blocks.last_mut() {
                Some((i, c, pts)) if *i == idx && *c == closed => pts.push((x, y)),
                _ => blocks.push((idx, closed, vec![(x, y)])),
            }
        }
        let mut set = OvalSet::default();
        for (_, closed, pts) in blocks {
            if closed {
                set.ovals.push(pts);
            } else {
                set.open_components.push(pts);
            }
        }
        Ok(set)
    }
}

/// Parameters as `f64`, for reports.
pub fn params_f64(params: &BTreeMap<String, Rat>) -> BTreeMap<String, f64> {
    params
        .iter()
        .map(|(k, v)| (k.clone(), rat_to_f64(v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;

    fn params(s: &str) -> BTreeMap<String, Rat> {
        parse_params(s).unwrap()
    }

    #[test]
    fn q_at_32_is_radial() {
        let spec = catalog("q", &params("mu=32")).unwrap();
        // 16 r^4 - 25 r^2 + 9 with r^2 = x^2 + y^2.
        let r2 = p("x^2 + y^2");
        let radial = (&r2 * &r2).scale(&int(16)) - r2.scale(&int(25)) + Poly2::constant(int(9));
        assert_eq!(spec.poly, radial);
    }

    #[test]
    fn hi_at_one_is_h9() {
        let spec = catalog("hi", &params("delta=1")).unwrap();
        assert_eq!(spec.poly, catalog("h9", &BTreeMap::new()).unwrap().poly);
    }

    #[test]
    fn ellipse_centre_is_inside() {
        let e = ellipse();
        assert!(e.eval(&int(2), &int(5)).is_negative());
        assert!(e.dx().eval(&int(2), &int(5)) == int(0));
        assert!(e.dy().eval(&int(2), &int(5)) == int(0));
    }

    #[test]
    fn q_partial() {
        let mu = rat(7, 3);
        let expected = p("64 x^3 - 50 x") + Poly2::monomial(&mu * int(2), 1, 2);
        assert_eq!(q(&mu).partial(Var::X), expected);
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(
            catalog("spiral", &BTreeMap::new()),
            Err(CurveError::UnknownCurve(_))
        ));
        assert!(matches!(
            catalog("q", &BTreeMap::new()),
            Err(CurveError::BadParams(_))
        ));
        assert!(matches!(
            catalog("ellipse", &params("mu=1")),
            Err(CurveError::BadParams(_))
        ));
        assert!(matches!(
            catalog("product", &params("delta1=1,delta2=1")),
            Err(CurveError::BadParams(_))
        ));
        assert!(parse_params("mu").is_err());
    }

    #[test]
    fn shifted_q_moves_axis_points() {
        let h = q_shifted(&int(5));
        assert_eq!(h.eval(&int(3), &int(2)), int(0));
    }

    #[test]
    fn polygon_helpers() {
        let sq = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)];
        assert!((signed_area(&sq) - 1.0).abs() < 1e-15);
        assert!(point_in_polygon(&sq, (0.5, 0.5)));
        assert!(!point_in_polygon(&sq, (1.5, 0.5)));
        assert!((polyline_distance(&sq, (0.5, 2.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_roundtrip() {
        let set = OvalSet {
            ovals: vec![vec![(0.0, 0.0), (1.0, 0.5), (0.25, 1.0), (0.0, 0.0)]],
            open_components: vec![vec![(2.0, 2.0), (3.0, 3.0)]],
            ..OvalSet::default()
        };
        let back = OvalSet::from_csv(&set.to_csv()).unwrap();
        assert_eq!(back.ovals, set.ovals);
        assert_eq!(back.open_components, set.open_components);
    }
}
