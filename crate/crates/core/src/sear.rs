//! The spatial expanding approval rule.
//!
//! Every agent starts with a budget of one unit, stored as `k` in units of
//! `1/k`. The radius grows through the distinct agent-candidate distances;
//! whenever some unselected candidate's closed ball holds a total budget of
//! at least `n/k`, the one with the largest ball budget (smallest index on
//! ties) is selected and exactly `n/k` is charged to the agents in its ball,
//! lowest agent index first. Eligibility is re-tested after each selection
//! at the same radius.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Selection;
use crate::table::Distances;

/// Remaining agent budgets in units of `1/k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetState {
    k: u64,
    weights: Vec<u64>,
}

impl BudgetState {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            k: k as u64,
            weights: vec![k as u64; n],
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Charges `amount` to `agents` in the given order, emptying each budget
    /// before moving on. Returns the per-agent charges.
    pub fn charge(&mut self, agents: &[usize], mut amount: u64) -> Vec<Charge> {
        let mut out = Vec::new();
        for &i in agents {
            if amount == 0 {
                break;
            }
            let take = self.weights[i].min(amount);
            if take > 0 {
                self.weights[i] -= take;
                amount -= take;
                out.push(Charge {
                    agent: i,
                    amount: take,
                });
            }
        }
        debug_assert_eq!(amount, 0, "ball budget was below the charge");
        out
    }

    pub fn unit(&self) -> u64 {
        self.k
    }
}

/// Budget taken from one agent, in units of `1/k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Charge {
    pub agent: usize,
    pub amount: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearStep {
    pub candidate: usize,
    pub radius: f64,
    pub charges: Vec<Charge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearOutcome {
    pub selection: Vec<usize>,
    pub trace: Vec<SearStep>,
}

impl SearOutcome {
    pub fn to_selection(&self, m: usize) -> Result<Selection> {
        Selection::new(self.selection.iter().copied(), m, self.selection.len())
    }
}

pub fn run_sear<D: Distances + ?Sized>(d: &D) -> Result<SearOutcome> {
    let (n, m, k) = (d.agents(), d.candidates(), d.k());
    if k == 0 || k > m {
        return Err(Error::Input(format!("k = {k} must lie in 1..={m}")));
    }
    let price = n as u64;
    let mut budget = BudgetState::new(n, k);

    let mut pairs: Vec<(f64, usize, usize)> = (0..m)
        .flat_map(|c| (0..n).map(move |i| (c, i)))
        .map(|(c, i)| (d.dist(i, c), i, c))
        .collect();
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)).then(a.1.cmp(&b.1)));

    let mut ball_weight = vec![0u64; m];
    let mut selected = vec![false; m];
    let mut trace = Vec::with_capacity(k);
    let mut next = 0;
    while next < pairs.len() && trace.len() < k {
        let radius = pairs[next].0;
        while next < pairs.len() && pairs[next].0 == radius {
            let (_, i, c) = pairs[next];
            ball_weight[c] += budget.weights[i];
            next += 1;
        }
        while trace.len() < k {
            let best = (0..m)
                .filter(|&c| !selected[c] && ball_weight[c] >= price)
                .max_by(|&a, &b| ball_weight[a].cmp(&ball_weight[b]).then(b.cmp(&a)));
            let Some(c) = best else { break };
            let ball: Vec<usize> = (0..n).filter(|&i| d.dist(i, c) <= radius).collect();
            let charges = budget.charge(&ball, price);
            for ch in &charges {
                for (other, w) in ball_weight.iter_mut().enumerate() {
                    if d.dist(ch.agent, other) <= radius {
                        *w -= ch.amount;
                    }
                }
            }
            selected[c] = true;
            trace.push(SearStep {
                candidate: c,
                radius,
                charges,
            });
        }
    }
    if trace.len() < k {
        return Err(Error::Invariant(format!(
            "only {} of {k} centers selected after the largest radius",
            trace.len()
        )));
    }
    let mut selection: Vec<usize> = trace.iter().map(|s| s.candidate).collect();
    selection.sort_unstable();
    Ok(SearOutcome { selection, trace })
}
