//! Exact sparse bivariate polynomials over the rationals.
//!
//! [`Poly2`] is the substrate for every symbolic check in the crate: mass-action
//! right-hand sides, algebraic curves, cofactors. Coefficients are
//! [`Rat`] (arbitrary-precision rationals), so every identity checked here
//! holds bit-exactly. Floating-point evaluation goes through [`FloatPoly`],
//! a lowered dense form built once per polynomial.

mod float;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use float::FloatPoly;
pub use text::{parse_rat, ParsePolyError};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// `n / d` as a [`Rat`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Rat`].
pub fn int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Nearest `f64` to `r`.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Only reachable for magnitudes outside the f64 range.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// The two variables of a planar polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// Exponent pair of `x^x y^y`.
///
/// Ordered graded-lexicographically with `x > y`: first by total degree,
/// then by the power of `x`. This is the monomial order used by
/// [`Poly2::div_rem`], and the largest key of a [`Poly2`] is its leading
/// monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }

    fn divides(self, other: Monomial) -> bool {
        self.x <= other.x && self.y <= other.y
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("not exactly divisible; remainder {remainder}")]
    NotDivisible { remainder: Poly2 },
}

/// Sparse polynomial in `x` and `y` with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn one() -> Self {
        Poly2::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly2::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Poly2::monomial(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        Poly2::monomial(Rat::one(), 0, 1)
    }

    /// `c x^i y^j`.
    pub fn monomial(c: Rat, i: u32, j: u32) -> Self {
        let mut p = Poly2::zero();
        p.add_term(Monomial::new(i, j), c);
        p
    }

    /// Builds a polynomial from `(i, j, coefficient)` triples; repeated
    /// exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rat)>,
    {
        let mut p = Poly2::zero();
        for (i, j, c) in terms {
            p.add_term(Monomial::new(i, j), c);
        }
        p
    }

    /// Shorthand for small integer coefficients, used heavily by the catalogs.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        Poly2::from_terms(terms.iter().map(|&(i, j, c)| (i, j, int(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| i64::from(m.degree()))
            .max()
            .unwrap_or(-1)
    }

    /// Highest power of `var` appearing; `-1` for zero.
    pub fn degree_in(&self, var: Var) -> i64 {
        self.terms
            .keys()
            .map(|m| {
                i64::from(match var {
                    Var::X => m.x,
                    Var::Y => m.y,
                })
            })
            .max()
            .unwrap_or(-1)
    }

    /// Coefficient of `x^i y^j` (zero when absent).
    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, &Rat)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Leading term under the graded-lex order.
    pub fn leading_term(&self) -> Option<(Monomial, &Rat)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Multiplies by `c x^i y^j`.
    pub fn mul_monomial(&self, c: &Rat, i: u32, j: u32) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (Monomial::new(m.x + i, m.y + j), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly2 {
        let mut acc = Poly2::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: Var) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            let (e, m2) = match var {
                Var::X if m.x > 0 => (m.x, Monomial::new(m.x - 1, m.y)),
                Var::Y if m.y > 0 => (m.y, Monomial::new(m.x, m.y - 1)),
                _ => continue,
            };
            out.add_term(m2, c * int(i64::from(e)));
        }
        out
    }

    /// `∂p/∂x`.
    pub fn dx(&self) -> Poly2 {
        self.partial(Var::X)
    }

    /// `∂p/∂y`.
    pub fn dy(&self) -> Poly2 {
        self.partial(Var::Y)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        // Horner in y over rows of x-polynomials.
        let ydeg = self.degree_in(Var::Y);
        if ydeg < 0 {
            return Rat::zero();
        }
        let mut rows: Vec<Vec<(u32, &Rat)>> = vec![Vec::new(); ydeg as usize + 1];
        for (m, c) in &self.terms {
            rows[m.y as usize].push((m.x, c));
        }
        let mut acc = Rat::zero();
        for row in rows.iter().rev() {
            let mut r = Rat::zero();
            let xdeg = row.iter().map(|(i, _)| *i).max();
            if let Some(xdeg) = xdeg {
                let mut dense = vec![None; xdeg as usize + 1];
                for (i, c) in row {
                    dense[*i as usize] = Some(*c);
                }
                for c in dense.iter().rev() {
                    r *= x;
                    if let Some(c) = c {
                        r += *c;
                    }
                }
            }
            acc = acc * y + r;
        }
        acc
    }

    /// Floating evaluation. For repeated evaluation lower once with [`Poly2::lower`].
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.lower().eval(x, y)
    }

    pub fn lower(&self) -> FloatPoly {
        FloatPoly::from_poly(self)
    }

    /// `p(x - dx, y - dy)` expanded; translates the zero set by `(dx, dy)`.
    pub fn shift(&self, dx: &Rat, dy: &Rat) -> Poly2 {
        if dx.is_zero() && dy.is_zero() {
            return self.clone();
        }
        let xs = &Poly2::x() - &Poly2::constant(dx.clone());
        let ys = &Poly2::y() - &Poly2::constant(dy.clone());
        let xdeg = self.degree_in(Var::X).max(0) as usize;
        let ydeg = self.degree_in(Var::Y).max(0) as usize;
        let xpow = powers(&xs, xdeg);
        let ypow = powers(&ys, ydeg);
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            let t = &xpow[m.x as usize] * &ypow[m.y as usize];
            out += &t.scale(c);
        }
        out
    }

    /// Multivariate division with remainder under the graded-lex order.
    ///
    /// Returns `(q, r)` with `self = q * den + r` and no term of `r`
    /// divisible by the leading monomial of `den`.
    pub fn div_rem(&self, den: &Poly2) -> Result<(Poly2, Poly2), DivError> {
        let (lm, lc) = match den.leading_term() {
            Some((m, c)) => (m, c.clone()),
            None => return Err(DivError::ZeroDivisor),
        };
        let mut work = self.clone();
        let mut quot = Poly2::zero();
        let mut rem = Poly2::zero();
        while let Some((m, c)) = work.terms.pop_last() {
            if lm.divides(m) {
                let t = &c / &lc;
                let (i, j) = (m.x - lm.x, m.y - lm.y);
                // Cancel the whole of `den * t x^i y^j` except its leading term,
                // which was already popped.
                for (dm, dc) in den.terms.iter().rev().skip(1) {
                    work.add_term(Monomial::new(dm.x + i, dm.y + j), -(dc * &t));
                }
                quot.add_term(Monomial::new(i, j), t);
            } else {
                rem.add_term(m, c);
            }
        }
        Ok((quot, rem))
    }

    /// Exact quotient `self / den`, or [`DivError::NotDivisible`].
    pub fn try_div_exact(&self, den: &Poly2) -> Result<Poly2, DivError> {
        let (q, r) = self.div_rem(den)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(DivError::NotDivisible { remainder: r })
        }
    }

    /// True when every coefficient is positive.
    pub fn has_positive_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }
}

fn powers(base: &Poly2, n: usize) -> Vec<Poly2> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Poly2::one());
    for k in 1..=n {
        let next = &out[k - 1] * base;
        out.push(next);
    }
    out
}

impl From<Rat> for Poly2 {
    fn from(c: Rat) -> Self {
        Poly2::constant(c)
    }
}

impl AddAssign<&Poly2> for Poly2 {
    fn add_assign(&mut self, rhs: &Poly2) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Poly2> for Poly2 {
    fn sub_assign(&mut self, rhs: &Poly2) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(Monomial::new(ma.x + mb.x, ma.y + mb.y), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly2> for Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: Poly2) -> Poly2 {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly2> for Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: &Poly2) -> Poly2 {
                (&self).$method(rhs)
            }
        }
        impl $tr<Poly2> for &Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: Poly2) -> Poly2 {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        assert!((p("x") + p("-x")).is_zero());
        assert_eq!(p("1 - x") + p("x - y"), p("1 - y"));
    }

    #[test]
    fn product_from_multiplied_linear_system() {
        assert_eq!(p("1 + x^2 y") * p("1 - x"), p("1 - x + x^2 y - x^3 y"));
        assert!((p("3 x y + 2") * Poly2::zero()).is_zero());
    }

    #[test]
    fn degree_sentinel_and_product_degree() {
        assert_eq!(Poly2::zero().degree(), -1);
        assert_eq!(Poly2::one().degree(), 0);
        let a = p("x^3 y + y");
        let b = p("x y^2 - 7");
        assert_eq!((&a * &b).degree(), a.degree() + b.degree());
    }

    #[test]
    fn partial_derivatives() {
        let h = p("x^2 + x y^2 + y - 4 x y");
        assert_eq!(h.dy(), p("2 x y + 1 - 4 x"));
        assert_eq!(h.dx(), p("2 x + y^2 - 4 y"));
        assert!(p("17/3").dx().is_zero());
    }

    #[test]
    fn exact_evaluation() {
        let q = p("16 x^4 + 16 y^4 - 25 x^2 - 25 y^2 + 9 x^2 y^2 + 9");
        assert!(q.eval(&int(1), &int(0)).is_zero());
        assert!(Poly2::zero().eval(&rat(3, 7), &int(2)).is_zero());
        assert_eq!(p("x^2 y - 1/2").eval(&rat(1, 2), &int(3)), rat(1, 4));
    }

    #[test]
    fn shift_examples() {
        let x2 = p("x^2");
        assert_eq!(x2.shift(&int(1), &int(0)), p("x^2 - 2 x + 1"));
        let q = p("3 x^3 y - y^2 + 5");
        assert_eq!(q.shift(&int(0), &int(0)), q);
        let s = q.shift(&int(2), &rat(-1, 3));
        assert_eq!(s.eval(&int(3), &rat(2, 3)), q.eval(&int(1), &int(1)));
    }

    #[test]
    fn division_examples() {
        let h = p("10 x^2 - 12 x y + 4 y^2 + 20 x - 16 y + 19");
        let num = p("x - 2") * &h;
        assert_eq!(num.try_div_exact(&h).unwrap(), p("x - 2"));
        let q = p("5 x^3 - y/2 + 1/3");
        assert_eq!(q.try_div_exact(&Poly2::one()).unwrap(), q);
        match p("x^2 + 1").try_div_exact(&p("x + 1")) {
            Err(DivError::NotDivisible { remainder }) => assert_eq!(remainder, p("2")),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(q.try_div_exact(&Poly2::zero()), Err(DivError::ZeroDivisor));
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let mut ms = vec![
            Monomial::new(0, 2),
            Monomial::new(1, 0),
            Monomial::new(2, 0),
            Monomial::new(1, 1),
            Monomial::new(0, 0),
        ];
        ms.sort();
        assert_eq!(
            ms,
            vec![
                Monomial::new(0, 0),
                Monomial::new(1, 0),
                Monomial::new(0, 2),
                Monomial::new(1, 1),
                Monomial::new(2, 0),
            ]
        );
    }
}
