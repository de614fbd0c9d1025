//! Membership tests for the classes `S_n` (order-`n` mass-action systems)
//! and `M_n` (`n`-molecular ones), and the matching constructive
//! realizations of a polynomial system as a reaction network.
//!
//! Writing `f = Σ a_{i,j} x^i y^j` and `g = Σ b_{i,j} x^i y^j`:
//!
//! * `S_n`: `deg f, deg g ≤ n`, `a_{0,j} ≥ 0` and `b_{i,0} ≥ 0`;
//! * `M_n`: `S_n` plus `a_{i,n-i} + b_{i,n-i} ≤ 0` for every `i`.

use std::fmt;

use num::{Signed, Zero};
use thiserror::Error;

use crate::crn::{Complex, Network, NetworkError, PlanarSystem, Reaction};
use crate::poly::{int, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    S,
    M,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::S => "S",
            Class::M => "M",
        })
    }
}

/// Which coefficient a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    /// Coefficient of `f`.
    A,
    /// Coefficient of `g`.
    B,
    /// `a_{i,j} + b_{i,j}` on the top-degree line.
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Term above the allowed degree.
    Degree,
    /// Negative term that would consume an absent species.
    Sign,
    /// Top-degree pair with positive sum.
    Molecularity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub which: Which,
    pub i: u32,
    pub j: u32,
    pub value: Rat,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j, v) = (self.i, self.j, &self.value);
        match (self.which, self.rule) {
            (Which::A, Rule::Degree) => write!(f, "a[{i},{j}] = {v}: degree {} too high", i + j),
            (Which::B, Rule::Degree) => write!(f, "b[{i},{j}] = {v}: degree {} too high", i + j),
            (Which::A, _) => write!(f, "a[{i},{j}] = {v}: must be >= 0"),
            (Which::B, _) => write!(f, "b[{i},{j}] = {v}: must be >= 0"),
            (Which::Sum, _) => write!(f, "a[{i},{j}] + b[{i},{j}] = {v}: must be <= 0"),
        }
    }
}

/// Outcome of a class-membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub class: Class,
    pub n: u32,
    pub degree: i64,
    pub member: bool,
    pub violations: Vec<Violation>,
}

impl ClassReport {
    fn from_violations(class: Class, n: u32, degree: i64, violations: Vec<Violation>) -> Self {
        ClassReport {
            class,
            n,
            degree,
            member: violations.is_empty(),
            violations,
        }
    }

    /// `key=value` lines for scripts.
    pub fn to_kv(&self) -> String {
        let mut out = format!(
            "class={}\nn={}\ndegree={}\nmember={}\nviolations={}\n",
            self.class,
            self.n,
            self.degree,
            self.member,
            self.violations.len()
        );
        for (k, v) in self.violations.iter().enumerate() {
            let which = match v.which {
                Which::A => "a",
                Which::B => "b",
                Which::Sum => "a+b",
            };
            out.push_str(&format!(
                "violation.{k}={which},{},{},{}\n",
                v.i, v.j, v.value
            ));
        }
        out
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.member {
            "member"
        } else {
            "not a member"
        };
        writeln!(
            f,
            "{}_{}: {} (system degree {})",
            self.class, self.n, verdict, self.degree
        )?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("system is not in the requested class:\n{0}")]
    NotInClass(Box<ClassReport>),
    #[error("the zero system has no realization")]
    EmptyRealization,
    #[error("realization is not a valid network: {0}")]
    Network(#[from] NetworkError),
}

fn s_violations(sys: &PlanarSystem, n: u32) -> Vec<Violation> {
    let mut out = Vec::new();
    for (which, p) in [(Which::A, &sys.f), (Which::B, &sys.g)] {
        for (m, c) in p.terms() {
            if m.degree() > n {
                out.push(Violation {
                    which,
                    i: m.x,
                    j: m.y,
                    value: c.clone(),
                    rule: Rule::Degree,
                });
            }
        }
    }
    for (m, c) in sys.f.terms() {
        if m.x == 0 && m.degree() <= n && c.is_negative() {
            out.push(Violation {
                which: Which::A,
                i: m.x,
                j: m.y,
                value: c.clone(),
                rule: Rule::Sign,
            });
        }
    }
    for (m, c) in sys.g.terms() {
        if m.y == 0 && m.degree() <= n && c.is_negative() {
            out.push(Violation {
                which: Which::B,
                i: m.x,
                j: m.y,
                value: c.clone(),
                rule: Rule::Sign,
            });
        }
    }
    out
}

/// Tests membership in `S_n`. Panics if `n == 0`.
pub fn check_s_n(sys: &PlanarSystem, n: u32) -> ClassReport {
    assert!(n >= 1, "n must be positive");
    ClassReport::from_violations(Class::S, n, sys.degree(), s_violations(sys, n))
}

/// Tests membership in `M_n`. Panics if `n == 0`.
pub fn check_m_n(sys: &PlanarSystem, n: u32) -> ClassReport {
    assert!(n >= 1, "n must be positive");
    let mut v = s_violations(sys, n);
    for i in 0..=n {
        let sum = sys.f.coeff(i, n - i) + sys.g.coeff(i, n - i);
        if sum.is_positive() {
            v.push(Violation {
                which: Which::Sum,
                i,
                j: n - i,
                value: sum,
                rule: Rule::Molecularity,
            });
        }
    }
    ClassReport::from_violations(Class::M, n, sys.degree(), v)
}

struct Builder {
    reactions: Vec<Reaction>,
}

impl Builder {
    fn push(&mut self, source: (u32, u32), target: (u32, u32), rate: Rat) {
        if rate.is_zero() {
            return;
        }
        let r = Reaction::new(
            Complex::new(source.0, source.1),
            Complex::new(target.0, target.1),
            rate,
        )
        .expect("realization emits nontrivial reactions with positive rates");
        self.reactions.push(r);
    }

    /// One reaction per monomial, moving only the species whose rate it is.
    fn monomials(&mut self, sys: &PlanarSystem, below: Option<u32>) {
        let keep = |d: u32| below.is_none_or(|n| d < n);
        for (m, c) in sys.f.terms().filter(|(m, _)| keep(m.degree())) {
            let tx = if c.is_positive() { m.x + 1 } else { m.x - 1 };
            self.push((m.x, m.y), (tx, m.y), c.abs());
        }
        for (m, c) in sys.g.terms().filter(|(m, _)| keep(m.degree())) {
            let ty = if c.is_positive() { m.y + 1 } else { m.y - 1 };
            self.push((m.x, m.y), (m.x, ty), c.abs());
        }
    }

    fn finish(self) -> Result<Network, RealizeError> {
        if self.reactions.is_empty() {
            return Err(RealizeError::EmptyRealization);
        }
        Ok(Network::new(self.reactions)?)
    }
}

/// Realizes `sys` in `S_n` with `n = max(degree, 1)`: the monomial
/// `a x^i y^j` of `f` becomes `iX + jY → (i±1)X + jY` at rate `|a|`, and
/// likewise for `g` in the `Y` direction.
pub fn realize_s_n(sys: &PlanarSystem) -> Result<Network, RealizeError> {
    if sys.is_zero() {
        return Err(RealizeError::EmptyRealization);
    }
    let n = sys.degree().max(1) as u32;
    let report = check_s_n(sys, n);
    if !report.member {
        return Err(RealizeError::NotInClass(Box::new(report)));
    }
    let mut b = Builder {
        reactions: Vec::new(),
    };
    b.monomials(sys, None);
    b.finish()
}

/// Realizes `sys` with molecularity at most `n`.
///
/// Terms below degree `n` are realized as in [`realize_s_n`]. Each
/// top-degree pair `a = a_{i,n-i}`, `b = b_{i,n-i}` is split into two
/// reactions from `iX + (n-i)Y` that never produce more than `n` molecules.
pub fn realize_m_n(sys: &PlanarSystem, n: u32) -> Result<Network, RealizeError> {
    if sys.is_zero() {
        return Err(RealizeError::EmptyRealization);
    }
    let report = check_m_n(sys, n);
    if !report.member {
        return Err(RealizeError::NotInClass(Box::new(report)));
    }
    let mut out = Builder {
        reactions: Vec::new(),
    };
    out.monomials(sys, Some(n));
    let two = int(2);
    for i in 0..=n {
        let j = n - i;
        let a = sys.f.coeff(i, j);
        let b = sys.g.coeff(i, j);
        let drain = (-&a - &b) / &two;
        if i == 0 {
            out.push((0, n), (1, n - 1), a.clone());
            out.push((0, n), (0, n - 1), -&a - &b);
        } else if i == n {
            out.push((n, 0), (n - 1, 1), b.clone());
            out.push((n, 0), (n - 1, 0), -&a - &b);
        } else if a >= b {
            out.push((i, j), (i + 1, j - 1), (&a - &b) / &two);
            out.push((i, j), (i - 1, j - 1), drain);
        } else {
            out.push((i, j), (i - 1, j + 1), (&b - &a) / &two);
            out.push((i, j), (i - 1, j - 1), drain);
        }
    }
    out.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crn::{derive_mass_action, molecularity, parse_network};
    use crate::poly::{rat, Poly2};
    use crate::presets;

    fn sys(f: &str, g: &str) -> PlanarSystem {
        PlanarSystem::new(f.parse().unwrap(), g.parse().unwrap())
    }

    #[test]
    fn escher_is_in_s2() {
        assert!(check_s_n(&presets::escher_system(), 2).member);
    }

    #[test]
    fn negative_inflow_is_rejected() {
        let r = check_s_n(&sys("-1", "0"), 1);
        assert!(!r.member);
        assert_eq!(
            r.violations,
            vec![Violation {
                which: Which::A,
                i: 0,
                j: 0,
                value: int(-1),
                rule: Rule::Sign
            }]
        );
        assert!(r.to_kv().contains("violation.0=a,0,0,-1"));
    }

    #[test]
    fn degree_violation_is_listed() {
        let r = check_s_n(&sys("x^3", "y"), 2);
        assert!(!r.member);
        assert_eq!(r.violations[0].rule, Rule::Degree);
    }

    #[test]
    fn m_n_examples() {
        let lv = presets::lotka_volterra_system(&int(1), &int(1), &int(1));
        assert!(check_m_n(&lv, 2).member);
        let r = check_m_n(&sys("x y", "0"), 2);
        assert!(!r.member);
        assert_eq!(r.violations[0].which, Which::Sum);
        assert_eq!(r.violations[0].value, int(1));
    }

    #[test]
    fn realize_linear_system() {
        let net = realize_s_n(&sys("1 - x", "x - y")).unwrap();
        let expected = parse_network("0 -> X @ 1\nX -> 0 @ 1\nX -> X + Y @ 1\nY -> 0 @ 1").unwrap();
        assert_eq!(net.normalized(), expected.normalized());
    }

    #[test]
    fn zero_system_has_no_realization() {
        assert_eq!(
            realize_s_n(&PlanarSystem::new(Poly2::zero(), Poly2::zero())),
            Err(RealizeError::EmptyRealization)
        );
    }

    #[test]
    fn escher_realization_roundtrips() {
        let e = presets::escher_system();
        let net = realize_s_n(&e).unwrap();
        assert_eq!(net.len(), 7);
        assert_eq!(derive_mass_action(&net), e);
    }

    #[test]
    fn top_degree_pair_on_the_x_y_line() {
        let k2 = rat(7, 3);
        let s = PlanarSystem::new(
            Poly2::monomial(-k2.clone(), 1, 1),
            Poly2::monomial(k2.clone(), 1, 1),
        );
        let net = realize_m_n(&s, 2).unwrap();
        let expected = parse_network("X + Y -> 2Y @ 7/3").unwrap();
        assert_eq!(net, expected);
    }

    #[test]
    fn pure_y_power_uses_inflow_and_drain() {
        let s = sys("y^3", "-2 y^3");
        let net = realize_m_n(&s, 3).unwrap();
        let expected = parse_network("3Y -> X + 2Y @ 1\n3Y -> 2Y @ 1").unwrap();
        assert_eq!(net, expected);
    }

    #[test]
    fn lotka_volterra_realization_matches_network() {
        let lv = presets::lotka_volterra_system(&int(2), &int(3), &int(5));
        let net = realize_m_n(&lv, 2).unwrap();
        assert_eq!(
            net.normalized(),
            presets::lotka_volterra(&int(2), &int(3), &int(5)).normalized()
        );
    }

    #[test]
    fn mirrored_x_power() {
        let s = sys("-3 x^2", "x^2 + y");
        let net = realize_m_n(&s, 2).unwrap();
        assert_eq!(derive_mass_action(&net), s);
        assert!(molecularity(&net) <= 2);
    }

    #[test]
    fn tie_uses_the_forward_branch() {
        let s = sys("-x y + y", "-x y + x");
        let net = realize_m_n(&s, 2).unwrap();
        assert!(net
            .reactions()
            .iter()
            .all(|r| r.stoichiometry() != (1, 1, 2, 0) && r.stoichiometry() != (1, 1, 0, 2)));
        assert_eq!(derive_mass_action(&net), s);
    }
}
