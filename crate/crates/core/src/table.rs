//! Agent-to-candidate distance sources.
//!
//! Every verifier reads distances through [`Distances`]. An [`Instance`]
//! computes them on demand; a [`DistanceTable`] caches the full `n x m`
//! block and the per-candidate agent orderings, which pays off when one
//! instance is audited against many selections.

use std::borrow::Cow;

use crate::instance::Instance;
use crate::quota::QuotaCmp;

pub trait Distances: Sync {
    fn agents(&self) -> usize;
    fn candidates(&self) -> usize;
    fn k(&self) -> usize;
    fn dist(&self, agent: usize, candidate: usize) -> f64;

    fn quota(&self) -> QuotaCmp {
        QuotaCmp::new(self.agents(), self.k())
    }

    /// Agents in nondecreasing distance from `candidate`, ties by index.
    fn agents_by_distance(&self, candidate: usize) -> Cow<'_, [u32]> {
        Cow::Owned(sorted_agents(self, candidate))
    }
}

pub(crate) fn sorted_agents<D: Distances + ?Sized>(d: &D, candidate: usize) -> Vec<u32> {
    let mut keyed: Vec<(f64, u32)> = (0..d.agents())
        .map(|i| (d.dist(i, candidate), i as u32))
        .collect();
    keyed.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, i)| i).collect()
}

impl Distances for Instance {
    fn agents(&self) -> usize {
        self.n()
    }

    fn candidates(&self) -> usize {
        self.m()
    }

    fn k(&self) -> usize {
        Instance::k(self)
    }

    #[inline]
    fn dist(&self, agent: usize, candidate: usize) -> f64 {
        self.agent_candidate(agent, candidate)
    }
}

/// Precomputed agent-to-candidate distances and orderings.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    n: usize,
    m: usize,
    k: usize,
    // candidate-major: d[c * n + i]
    d: Vec<f64>,
    order: Vec<u32>,
}

impl DistanceTable {
    pub fn new(inst: &Instance) -> Self {
        let (n, m) = (inst.n(), inst.m());
        let mut d = Vec::with_capacity(n * m);
        for c in 0..m {
            d.extend((0..n).map(|i| inst.agent_candidate(i, c)));
        }
        let mut table = Self {
            n,
            m,
            k: inst.k(),
            d,
            order: Vec::new(),
        };
        let order: Vec<u32> = (0..m).flat_map(|c| sorted_agents(&table, c)).collect();
        table.order = order;
        table
    }

    /// Same distances, different target `k`.
    pub fn with_k(mut self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.m);
        self.k = k;
        self
    }
}

impl Distances for DistanceTable {
    fn agents(&self) -> usize {
        self.n
    }

    fn candidates(&self) -> usize {
        self.m
    }

    fn k(&self) -> usize {
        self.k
    }

    #[inline]
    fn dist(&self, agent: usize, candidate: usize) -> f64 {
        self.d[candidate * self.n + agent]
    }

    fn agents_by_distance(&self, candidate: usize) -> Cow<'_, [u32]> {
        if self.order.is_empty() {
            return Cow::Owned(sorted_agents(self, candidate));
        }
        Cow::Borrowed(&self.order[candidate * self.n..(candidate + 1) * self.n])
    }
}
