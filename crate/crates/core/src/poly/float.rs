use super::{rat_to_f64, Poly2};

/// Dense `f64` form of a [`Poly2`], evaluated by nested Horner schemes.
///
/// `rows[j][i]` is the coefficient of `x^i y^j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FloatPoly {
    rows: Vec<Vec<f64>>,
}

impl FloatPoly {
    pub fn from_poly(p: &Poly2) -> Self {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (m, c) in p.terms() {
            let (i, j) = (m.x as usize, m.y as usize);
            if rows.len() <= j {
                rows.resize(j + 1, Vec::new());
            }
            if rows[j].len() <= i {
                rows[j].resize(i + 1, 0.0);
            }
            rows[j][i] = rat_to_f64(c);
        }
        FloatPoly { rows }
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.rows.iter().rev() {
            let mut r = 0.0;
            for c in row.iter().rev() {
                r = r * x + c;
            }
            acc = acc * y + r;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|c| *c == 0.0))
    }
}
