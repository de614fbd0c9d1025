//! Marching squares on a uniform grid.
//!
//! Corners are classified as `h ≥ 0` or `h < 0`; crossings are placed by
//! linear interpolation along cell edges, and crossings on a shared edge
//! link neighbouring segments into components. A cell with four crossings
//! (a saddle) is ambiguous; the grid is refined once, and any saddle that
//! survives is either an error or, in lenient mode, resolved by the sign at
//! the cell centre.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{signed_area, CurveError, CurveSpec, OvalSet, Point, Window};
use crate::poly::FloatPoly;

/// Edge identifier: horizontal edges first, then vertical ones.
type EdgeId = usize;

struct Grid<'a> {
    h: &'a FloatPoly,
    window: Window,
    n: usize,
    dx: f64,
    dy: f64,
    values: Vec<f64>,
}

impl<'a> Grid<'a> {
    fn new(h: &'a FloatPoly, window: Window, n: usize) -> Self {
        let dx = (window.x1 - window.x0) / n as f64;
        let dy = (window.y1 - window.y0) / n as f64;
        let values: Vec<f64> = (0..=n)
            .into_par_iter()
            .flat_map_iter(|j| {
                let y = window.y0 + j as f64 * dy;
                (0..=n).map(move |i| h.eval(window.x0 + i as f64 * dx, y))
            })
            .collect();
        Grid {
            h,
            window,
            n,
            dx,
            dy,
            values,
        }
    }

    fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.n + 1) + i]
    }

    fn node(&self, i: usize, j: usize) -> Point {
        (
            self.window.x0 + i as f64 * self.dx,
            self.window.y0 + j as f64 * self.dy,
        )
    }

    fn horizontal(&self, i: usize, j: usize) -> EdgeId {
        j * self.n + i
    }

    fn vertical(&self, i: usize, j: usize) -> EdgeId {
        self.n * (self.n + 1) + j * (self.n + 1) + i
    }

    /// Endpoints of an edge as node indices.
    fn edge_nodes(&self, e: EdgeId) -> ((usize, usize), (usize, usize)) {
        let nh = self.n * (self.n + 1);
        if e < nh {
            let (j, i) = (e / self.n, e % self.n);
            ((i, j), (i + 1, j))
        } else {
            let e = e - nh;
            let (j, i) = (e / (self.n + 1), e % (self.n + 1));
            ((i, j), (i, j + 1))
        }
    }

    fn crossing(&self, e: EdgeId) -> Point {
        let ((ia, ja), (ib, jb)) = self.edge_nodes(e);
        let (va, vb) = (self.value(ia, ja), self.value(ib, jb));
        let t = va / (va - vb);
        let (pa, pb) = (self.node(ia, ja), self.node(ib, jb));
        (pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1))
    }

    /// Segments per cell in row-major cell order, plus the saddle count.
    fn segments(&self, resolve_saddles: bool) -> (Vec<(EdgeId, EdgeId)>, usize) {
        let n = self.n;
        let rows: Vec<(Vec<(EdgeId, EdgeId)>, usize)> = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut segs = Vec::new();
                let mut saddles = 0;
                for i in 0..n {
                    let s0 = self.value(i, j) >= 0.0;
                    let s1 = self.value(i + 1, j) >= 0.0;
                    let s2 = self.value(i + 1, j + 1) >= 0.0;
                    let s3 = self.value(i, j + 1) >= 0.0;
                    let bottom = self.horizontal(i, j);
                    let right = self.vertical(i + 1, j);
                    let top = self.horizontal(i, j + 1);
                    let left = self.vertical(i, j);
                    let mut crossed = Vec::with_capacity(4);
                    if s0 != s1 {
                        crossed.push(bottom);
                    }
                    if s1 != s2 {
                        crossed.push(right);
                    }
                    if s2 != s3 {
                        crossed.push(top);
                    }
                    if s3 != s0 {
                        crossed.push(left);
                    }
                    match crossed.len() {
                        0 => {}
                        2 => segs.push((crossed[0], crossed[1])),
                        _ => {
                            saddles += 1;
                            if !resolve_saddles {
                                continue;
                            }
                            let (cx, cy) = self.node(i, j);
                            let centre = self.h.eval(cx + 0.5 * self.dx, cy + 0.5 * self.dy) >= 0.0;
                            if centre == s0 {
                                // Corners 0 and 2 join through the centre.
                                segs.push((bottom, right));
                                segs.push((top, left));
                            } else {
                                segs.push((left, bottom));
                                segs.push((right, top));
                            }
                        }
                    }
                }
                (segs, saddles)
            })
            .collect();
        let saddles = rows.iter().map(|r| r.1).sum();
        (rows.into_iter().flat_map(|r| r.0).collect(), saddles)
    }
}

/// Links segments into chains. Returns `(closed, edges)` per component in
/// order of the first segment encountered.
fn link(segs: &[(EdgeId, EdgeId)]) -> Vec<(bool, Vec<EdgeId>)> {
    let mut at: HashMap<EdgeId, [usize; 2]> = HashMap::with_capacity(segs.len() * 2);
    for (k, &(a, b)) in segs.iter().enumerate() {
        for e in [a, b] {
            at.entry(e)
                .and_modify(|slot| slot[1] = k)
                .or_insert([k, usize::MAX]);
        }
    }
    let other_seg = |e: EdgeId, cur: usize| -> Option<usize> {
        let s = at[&e];
        let o = if s[0] == cur { s[1] } else { s[0] };
        (o != usize::MAX).then_some(o)
    };
    let far_end = |k: usize, from: EdgeId| -> EdgeId {
        let (a, b) = segs[k];
        if a == from {
            b
        } else {
            a
        }
    };

    let mut used = vec![false; segs.len()];
    let mut out = Vec::new();
    for start in 0..segs.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segs[start];
        let mut forward = vec![a, b];
        let mut closed = false;
        let (mut cur, mut edge) = (start, b);
        while let Some(next) = other_seg(edge, cur) {
            if next == start {
                closed = true;
                break;
            }
            if used[next] {
                break;
            }
            used[next] = true;
            edge = far_end(next, edge);
            forward.push(edge);
            cur = next;
        }
        if closed {
            forward.pop();
            out.push((true, forward));
            continue;
        }
        let mut backward = Vec::new();
        let (mut cur, mut edge) = (start, a);
        while let Some(next) = other_seg(edge, cur) {
            if used[next] {
                break;
            }
            used[next] = true;
            edge = far_end(next, edge);
            backward.push(edge);
            cur = next;
        }
        backward.reverse();
        backward.extend(forward);
        out.push((false, backward));
    }
    out
}

fn trace(spec: &CurveSpec, h: &FloatPoly, n: usize, resolve: bool) -> (OvalSet, usize) {
    let grid = Grid::new(h, spec.window, n);
    let (segs, saddles) = grid.segments(resolve);
    let mut set = OvalSet {
        resolution: n,
        cell: (grid.dx, grid.dy),
        degenerate: resolve && saddles > 0,
        ..OvalSet::default()
    };
    for (closed, edges) in link(&segs) {
        let mut pts: Vec<Point> = edges.iter().map(|&e| grid.crossing(e)).collect();
        if closed {
            if signed_area(&pts) < 0.0 {
                pts.reverse();
            }
            pts.push(pts[0]);
            set.ovals.push(pts);
        } else {
            set.open_components.push(pts);
        }
    }
    (set, saddles)
}

fn extract(spec: &CurveSpec, resolution: usize, lenient: bool) -> Result<OvalSet, CurveError> {
    if resolution < 32 {
        return Err(CurveError::ResolutionTooLow(resolution));
    }
    let h = spec.poly.lower();
    let (set, saddles) = trace(spec, &h, resolution, false);
    if saddles == 0 {
        return Ok(set);
    }
    let fine = 2 * resolution;
    let (set, saddles) = trace(spec, &h, fine, lenient);
    if saddles == 0 || lenient {
        Ok(set)
    } else {
        Err(CurveError::ResolutionTooCoarse {
            resolution: fine,
            saddles,
        })
    }
}

/// Closed components of `h = 0` inside the spec window on a
/// `resolution × resolution` grid, refined once if any cell is ambiguous.
pub fn extract_ovals(spec: &CurveSpec, resolution: usize) -> Result<OvalSet, CurveError> {
    extract(spec, resolution, false)
}

/// As [`extract_ovals`], but ambiguous cells left after refinement are
/// resolved by the centre sign and the result is flagged `degenerate`.
pub fn extract_ovals_lenient(spec: &CurveSpec, resolution: usize) -> Result<OvalSet, CurveError> {
    extract(spec, resolution, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{catalog, parse_params};
    use crate::poly::Poly2;
    use std::collections::BTreeMap;

    fn circle_spec(r2: &str) -> CurveSpec {
        CurveSpec {
            name: "circle".into(),
            poly: format!("x^2 + y^2 - {r2}").parse().unwrap(),
            params: BTreeMap::new(),
            window: Window::square(-2.0, 2.0),
            expected_ovals: Some(1),
        }
    }

    #[test]
    fn unit_circle() {
        let set = extract_ovals(&circle_spec("1"), 64).unwrap();
        assert_eq!(set.ovals.len(), 1);
        assert!(set.open_components.is_empty());
        let o = &set.ovals[0];
        assert_eq!(o.first(), o.last());
        assert!(signed_area(o) > 0.0);
        for &(x, y) in o {
            assert!(((x * x + y * y).sqrt() - 1.0).abs() < set.cell.0);
        }
        assert!((set.area(0) - std::f64::consts::PI).abs() < 0.01);
    }

    #[test]
    fn clipped_circle_is_open() {
        let set = extract_ovals(&circle_spec("6"), 64).unwrap();
        assert!(set.ovals.is_empty());
        assert_eq!(set.open_components.len(), 4);
    }

    #[test]
    fn too_coarse_resolution() {
        assert_eq!(
            extract_ovals(&circle_spec("1"), 16),
            Err(CurveError::ResolutionTooLow(16))
        );
    }

    #[test]
    fn crossing_lines_are_ambiguous() {
        // x y = 0 crosses itself at the origin, between grid nodes.
        let spec = CurveSpec {
            poly: Poly2::from_int_terms(&[(1, 1, 1)]),
            window: Window::square(-1.01, 0.99),
            ..circle_spec("1")
        };
        assert!(matches!(
            extract_ovals(&spec, 32),
            Err(CurveError::ResolutionTooCoarse { .. })
        ));
        let set = extract_ovals_lenient(&spec, 32).unwrap();
        assert!(set.degenerate);
        assert_eq!(set.open_components.len(), 2);
    }

    #[test]
    fn deterministic() {
        let spec = catalog("q", &parse_params("mu=39").unwrap()).unwrap();
        assert_eq!(
            extract_ovals(&spec, 128).unwrap(),
            extract_ovals(&spec, 128).unwrap()
        );
    }
}
