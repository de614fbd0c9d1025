//! Named systems and networks used throughout the examples and tests.

use crate::crn::{parse_network, Complex, Network, PlanarSystem, Reaction};
use crate::poly::{int, rat, Poly2, Rat};

fn p(s: &str) -> Poly2 {
    s.parse().expect("preset polynomial")
}

/// `X → 2X`, `X + Y → 2Y`, `Y → ∅` with rates `k1, k2, k3`.
pub fn lotka_volterra(k1: &Rat, k2: &Rat, k3: &Rat) -> Network {
    let r = |a, b, c, d, k: &Rat| {
        Reaction::new(Complex::new(a, b), Complex::new(c, d), k.clone()).expect("positive rate")
    };
    Network::new(vec![
        r(1, 0, 2, 0, k1),
        r(1, 1, 0, 2, k2),
        r(0, 1, 0, 0, k3),
    ])
    .expect("valid network")
}

/// `f = k1 x − k2 xy`, `g = k2 xy − k3 y`.
pub fn lotka_volterra_system(k1: &Rat, k2: &Rat, k3: &Rat) -> PlanarSystem {
    PlanarSystem::new(
        Poly2::monomial(k1.clone(), 1, 0) - Poly2::monomial(k2.clone(), 1, 1),
        Poly2::monomial(k2.clone(), 1, 1) - Poly2::monomial(k3.clone(), 0, 1),
    )
}

/// `∅ → X → Y → ∅`, unit rates; mass action gives `(1 − x, x − y)`.
pub fn illustrative_network_1() -> Network {
    parse_network("0 -> X @ 1\nX -> Y @ 1\nY -> 0 @ 1").expect("valid network")
}

/// `2X + Y → 3X + Y → 2X + 2Y → 2X + Y`, unit rates: the `x²y` copy of
/// [`illustrative_network_1`].
pub fn illustrative_network_2() -> Network {
    parse_network("2X + Y -> 3X + Y @ 1\n3X + Y -> 2X + 2Y @ 1\n2X + 2Y -> 2X + Y @ 1")
        .expect("valid network")
}

/// Quadratic system whose limit cycle is the ellipse of
/// [`crate::curves::ellipse`], with cofactor `x − 2`.
pub fn escher_system() -> PlanarSystem {
    PlanarSystem::new(p("2 x^2 - x y + 3/2"), p("5/2 x^2 - x y - y + 17/4"))
}

/// Quadratic system with an algebraic limit cycle for `c ∈ (0, 1/4)`;
/// not mass-action because of the `−14 c x` term.
pub fn chavarriga(c: &Rat) -> PlanarSystem {
    let cp = Poly2::constant(c.clone());
    let f = (p("1 + 2 x + 6 x y") - &cp * p("2 x^2")).scale(&int(2));
    let g = p("8 - 8 y^2") - &cp * p("3 + 14 x + 2 x y");
    PlanarSystem::new(f, g)
}

/// Linear drift `(1 − x, x − y)` with its single critical point at `(1, 1)`.
pub fn linear_drift() -> (Poly2, Poly2) {
    (p("1 - x"), p("x - y"))
}

/// Unit-square network drift `(1 − x + y − xy, 1 + x − y − xy)`.
pub fn unit_square_drift() -> (Poly2, Poly2) {
    (p("1 - x + y - x y"), p("1 + x - y - x y"))
}

/// The line `y − 7x` used with the three-oval quartic.
pub fn christopher_line() -> Poly2 {
    p("y - 7 x")
}

/// `c = 1/8` instance of [`chavarriga`].
pub fn chavarriga_default_c() -> Rat {
    rat(1, 8)
}
