#![allow(dead_code)]

use num::Signed;
use planar_crn::crn::{Complex, Network, PlanarSystem, Reaction};
use planar_crn::poly::{rat, Poly2, Rat};
use proptest::prelude::*;

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn positive_rat() -> impl Strategy<Value = Rat> {
    (1i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Random polynomial of total degree at most `deg` with up to `terms` terms.
pub fn poly(deg: u32, terms: usize) -> impl Strategy<Value = Poly2> {
    prop::collection::vec((0..=deg, 0..=deg, small_rat()), 0..=terms)
        .prop_map(move |ts| Poly2::from_terms(ts.into_iter().filter(|(i, j, _)| i + j <= deg)))
}

pub fn nonzero_poly(deg: u32, terms: usize) -> impl Strategy<Value = Poly2> {
    poly(deg, terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn abs_where(p: &Poly2, pick: impl Fn(u32, u32) -> bool) -> Poly2 {
    Poly2::from_terms(p.terms().map(|(m, c)| {
        let c = if pick(m.x, m.y) { c.abs() } else { c.clone() };
        (m.x, m.y, c)
    }))
}

/// Systems whose `x`-free part of `f` and `y`-free part of `g` are nonnegative.
pub fn s_system(deg: u32) -> impl Strategy<Value = PlanarSystem> {
    (poly(deg, 8), poly(deg, 8))
        .prop_map(|(f, g)| {
            PlanarSystem::new(abs_where(&f, |i, _| i == 0), abs_where(&g, |_, j| j == 0))
        })
        .prop_filter("nonzero", |s| !s.is_zero())
}

/// As [`s_system`], with every top-degree pair forced to `a + b ≤ 0`.
pub fn m_system(deg: u32) -> impl Strategy<Value = (PlanarSystem, u32)> {
    (s_system(deg), 1..=deg, small_rat()).prop_filter_map("fits class", |(s, n, slack)| {
        if s.degree() > i64::from(n) {
            return None;
        }
        let mut g = s.g.clone();
        for i in 0..=n {
            let j = n - i;
            let a = s.f.coeff(i, j);
            let b = s.g.coeff(i, j);
            let sum = &a + &b;
            if sum.is_positive() {
                // Replace b by -a - |slack|; keep b >= 0 when j = 0.
                let nb = -&a - slack.abs();
                if j == 0 && nb.is_negative() {
                    return None;
                }
                g -= &Poly2::monomial(b.clone(), i, j);
                g += &Poly2::monomial(nb, i, j);
            }
        }
        let sys = PlanarSystem::new(s.f, g);
        (!sys.is_zero()).then_some((sys, n))
    })
}

fn complex() -> impl Strategy<Value = Complex> {
    (0u32..=3, 0u32..=3).prop_map(|(x, y)| Complex::new(x, y))
}

/// Random valid networks with up to `max` reactions.
pub fn network(max: usize) -> impl Strategy<Value = Network> {
    prop::collection::vec((complex(), complex(), positive_rat()), 1..=max).prop_filter_map(
        "valid network",
        |rs| {
            let mut seen = std::collections::BTreeSet::new();
            let reactions: Vec<Reaction> = rs
                .into_iter()
                .filter(|(s, t, _)| s != t && seen.insert((*s, *t)))
                .filter_map(|(s, t, k)| Reaction::new(s, t, k).ok())
                .collect();
            Network::new(reactions).ok()
        },
    )
}
