//! Two-species reaction networks under mass-action kinetics.
//!
//! A [`Network`] is a list of reactions `αX + βY → γX + δY` with positive
//! rational rate constants. From it we derive the planar polynomial ODE
//! system ([`derive_mass_action`]), the E-graph on lattice complexes
//! ([`egraph`]) and weak reversibility ([`is_weakly_reversible`]).

mod dsl;
mod scc;
mod system;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num::{Signed, Zero};
use thiserror::Error;

use crate::poly::{int, Poly2, Rat};

pub use dsl::{parse_network, print_network};
pub use scc::strongly_connected_components;
pub use system::{Construction, ParseSystemError, PlanarSystem};

/// A complex `xX + yY`, i.e. a lattice point of the E-graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex {
    pub x: u32,
    pub y: u32,
}

impl Complex {
    pub const EMPTY: Complex = Complex { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Complex { x, y }
    }

    /// Number of molecules, `x + y`.
    pub fn size(self) -> u32 {
        self.x + self.y
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |n: u32, s: &str| match n {
            0 => None,
            1 => Some(s.to_string()),
            n => Some(format!("{n}{s}")),
        };
        let parts: Vec<String> = [part(self.x, "X"), part(self.y, "Y")]
            .into_iter()
            .flatten()
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("network has no reactions")]
    EmptyNetwork,
    #[error("reaction {0} occurs more than once")]
    DuplicateReaction(String),
    #[error("reaction {0} changes neither species")]
    TrivialReaction(String),
    #[error("rate constant of {0} must be positive")]
    NonpositiveRate(String),
    #[error("species {0} takes part in no reaction")]
    MissingSpecies(char),
}

/// `source → target` with rate constant `rate > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reaction {
    pub source: Complex,
    pub target: Complex,
    pub rate: Rat,
}

impl Reaction {
    pub fn new(source: Complex, target: Complex, rate: Rat) -> Result<Self, NetworkError> {
        let r = Reaction {
            source,
            target,
            rate,
        };
        if source == target {
            return Err(NetworkError::TrivialReaction(r.arrow()));
        }
        if !r.rate.is_positive() {
            return Err(NetworkError::NonpositiveRate(r.arrow()));
        }
        Ok(r)
    }

    /// Stoichiometric four-tuple `(α, β, γ, δ)`.
    pub fn stoichiometry(&self) -> (u32, u32, u32, u32) {
        (self.source.x, self.source.y, self.target.x, self.target.y)
    }

    pub fn order(&self) -> u32 {
        self.source.size()
    }

    fn arrow(&self) -> String {
        format!("{} -> {}", self.source, self.target)
    }
}

impl fmt::Display for Reaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} @ {}", self.source, self.target, self.rate)
    }
}

/// A validated two-species reaction network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    reactions: Vec<Reaction>,
}

impl Network {
    /// Validates: at least one reaction, no repeated four-tuple, and both
    /// species appear in some complex.
    pub fn new(reactions: Vec<Reaction>) -> Result<Self, NetworkError> {
        if reactions.is_empty() {
            return Err(NetworkError::EmptyNetwork);
        }
        let mut seen = HashSet::new();
        for r in &reactions {
            if !seen.insert(r.stoichiometry()) {
                return Err(NetworkError::DuplicateReaction(r.arrow()));
            }
        }
        let uses = |sel: fn(&Complex) -> u32| {
            reactions
                .iter()
                .any(|r| sel(&r.source) > 0 || sel(&r.target) > 0)
        };
        if !uses(|c| c.x) {
            return Err(NetworkError::MissingSpecies('X'));
        }
        if !uses(|c| c.y) {
            return Err(NetworkError::MissingSpecies('Y'));
        }
        Ok(Network { reactions })
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn len(&self) -> usize {
        self.reactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reactions.is_empty()
    }

    /// Reactions sorted by stoichiometric four-tuple.
    pub fn normalized(&self) -> Network {
        let mut reactions = self.reactions.clone();
        reactions.sort_by_key(|r| r.stoichiometry());
        Network { reactions }
    }

    /// Union of two networks; fails if they share a four-tuple.
    pub fn union(&self, other: &Network) -> Result<Network, NetworkError> {
        let mut reactions = self.reactions.clone();
        reactions.extend(other.reactions.iter().cloned());
        Network::new(reactions)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_network(self))
    }
}

/// Mass-action ODEs: `f = Σ k(γ−α) x^α y^β`, `g = Σ k(δ−β) x^α y^β`.
pub fn derive_mass_action(net: &Network) -> PlanarSystem {
    let mut f = Poly2::zero();
    let mut g = Poly2::zero();
    for r in &net.reactions {
        let (a, b, c, d) = r.stoichiometry();
        let dx = int(i64::from(c) - i64::from(a));
        let dy = int(i64::from(d) - i64::from(b));
        if !dx.is_zero() {
            f += &Poly2::monomial(&r.rate * dx, a, b);
        }
        if !dy.is_zero() {
            g += &Poly2::monomial(&r.rate * dy, a, b);
        }
    }
    PlanarSystem::new(f, g)
}

/// Largest reaction order, `max(α + β)`.
pub fn order(net: &Network) -> u32 {
    net.reactions.iter().map(Reaction::order).max().unwrap_or(0)
}

/// Largest complex size on either side, `max(α + β, γ + δ)`.
pub fn molecularity(net: &Network) -> u32 {
    net.reactions
        .iter()
        .map(|r| r.source.size().max(r.target.size()))
        .max()
        .unwrap_or(0)
}

/// Directed graph on complexes with one edge per reaction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EGraph {
    pub nodes: BTreeSet<Complex>,
    pub edges: Vec<(Complex, Complex)>,
}

impl EGraph {
    /// Adjacency list over `nodes` in their sorted order.
    pub fn adjacency(&self) -> (Vec<Complex>, Vec<Vec<usize>>) {
        let nodes: Vec<Complex> = self.nodes.iter().copied().collect();
        let idx: HashMap<Complex, usize> = nodes.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut adj = vec![Vec::new(); nodes.len()];
        for (s, t) in &self.edges {
            adj[idx[s]].push(idx[t]);
        }
        (nodes, adj)
    }

    /// True iff every edge lies on an oriented cycle, i.e. both endpoints
    /// share a strongly connected component.
    pub fn is_weakly_reversible(&self) -> bool {
        let (nodes, adj) = self.adjacency();
        let (comp, _) = strongly_connected_components(&adj);
        let idx: HashMap<Complex, usize> = nodes.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        self.edges.iter().all(|(s, t)| comp[idx[s]] == comp[idx[t]])
    }
}

pub fn egraph(net: &Network) -> EGraph {
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::with_capacity(net.len());
    for r in &net.reactions {
        nodes.insert(r.source);
        nodes.insert(r.target);
        edges.push((r.source, r.target));
    }
    EGraph { nodes, edges }
}

pub fn is_weakly_reversible(net: &Network) -> bool {
    egraph(net).is_weakly_reversible()
}

/// Scales both right-hand sides by `p`; construction metadata is dropped.
pub fn multiply_system(sys: &PlanarSystem, p: &Poly2) -> PlanarSystem {
    PlanarSystem::new(&sys.f * p, &sys.g * p)
}

/// Appends the reverse of every reaction whose reverse is missing, with rate
/// `eps`. Every edge of the result lies on a 2-cycle.
pub fn reversibilize(net: &Network, eps: &Rat) -> Result<Network, NetworkError> {
    let present: HashSet<(Complex, Complex)> =
        net.reactions.iter().map(|r| (r.source, r.target)).collect();
    let mut reactions = net.reactions.clone();
    for r in &net.reactions {
        if !present.contains(&(r.target, r.source)) {
            reactions.push(Reaction::new(r.target, r.source, eps.clone())?);
        }
    }
    Network::new(reactions)
}
