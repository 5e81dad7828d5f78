//! JSON formats for instances, approval profiles, and selections.
//!
//! Euclidean instance:
//!
//! ```json
//! {"metric": "euclidean", "dim": 2, "k": 2,
//!  "agents": [[0.0, 0.0], [1.0, 0.5]], "candidates": [[0.0, 0.0], [1.0, 1.0]],
//!  "agent_names": ["p", "q"], "candidate_names": ["a", "b"]}
//! ```
//!
//! Explicit instance (matrix rows list agents first, then candidates):
//!
//! ```json
//! {"metric": "explicit", "k": 1, "agents": ["v0"], "candidates": ["c0"],
//!  "matrix": [[0, 1], [1, 0]]}
//! ```
//!
//! Both accept an optional `"tie_epsilon"`. Approval profiles are
//! `{"voters": n, "candidates": m, "k": k, "approvals": [[0, 2], [1], []]}`.
//! A selection is a JSON array of candidate indices or labels, optionally
//! wrapped as `{"selection": [...]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::approval::ApprovalInstance;
use crate::error::{input, Result};
use crate::instance::{Instance, Metric, Point, Selection};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "lowercase", deny_unknown_fields)]
enum InstanceFile {
    Euclidean {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        k: usize,
        agents: Vec<Vec<f64>>,
        candidates: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        agent_names: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        candidate_names: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tie_epsilon: Option<f64>,
    },
    Explicit {
        k: usize,
        agents: Vec<String>,
        candidates: Vec<String>,
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tie_epsilon: Option<f64>,
    },
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let (inst, eps) = match file {
        InstanceFile::Euclidean {
            dim,
            k,
            agents,
            candidates,
            agent_names,
            candidate_names,
            tie_epsilon,
        } => {
            let dim = match dim {
                Some(d) => d,
                None => match agents.first() {
                    Some(p) => p.len(),
                    None => return input("instance has no agents"),
                },
            };
            let mut inst = Instance::euclidean(dim, agents, candidates, k)?;
            if let Some(names) = agent_names {
                inst = inst.with_agent_labels(names)?;
            }
            if let Some(names) = candidate_names {
                inst = inst.with_candidate_labels(names)?;
            }
            (inst, tie_epsilon)
        }
        InstanceFile::Explicit {
            k,
            agents,
            candidates,
            matrix,
            tie_epsilon,
        } => (
            Instance::explicit(agents, candidates, matrix, k)?,
            tie_epsilon,
        ),
    };
    match eps {
        Some(e) => inst.with_tie_epsilon(e),
        None => Ok(inst),
    }
}

fn default_labels(labels: &[String]) -> bool {
    labels.iter().enumerate().all(|(i, l)| *l == i.to_string())
}

pub fn instance_to_json(inst: &Instance) -> String {
    let eps = (inst.tie_epsilon() > 0.0).then_some(inst.tie_epsilon());
    let file = match inst.metric() {
        Metric::Euclidean { dim, .. } => {
            let rows = |p: fn(usize) -> Point, count: usize| -> Vec<Vec<f64>> {
                (0..count)
                    .map(|i| inst.coords(p(i)).expect("euclidean").to_vec())
                    .collect()
            };
            let names = |labels: &[String]| (!default_labels(labels)).then(|| labels.to_vec());
            InstanceFile::Euclidean {
                dim: Some(*dim),
                k: inst.k(),
                agents: rows(Point::Agent, inst.n()),
                candidates: rows(Point::Candidate, inst.m()),
                agent_names: names(inst.agent_labels()),
                candidate_names: names(inst.candidate_labels()),
                tie_epsilon: eps,
            }
        }
        Metric::Explicit { .. } => InstanceFile::Explicit {
            k: inst.k(),
            agents: inst.agent_labels().to_vec(),
            candidates: inst.candidate_labels().to_vec(),
            matrix: inst.distance_matrix(),
            tie_epsilon: eps,
        },
    };
    serde_json::to_string_pretty(&file).expect("instances serialize")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ApprovalFile {
    voters: usize,
    candidates: usize,
    k: usize,
    approvals: Vec<Vec<usize>>,
}

pub fn parse_approval(text: &str) -> Result<ApprovalInstance> {
    let file: ApprovalFile = serde_json::from_str(text)?;
    if file.approvals.len() != file.voters {
        return input(format!(
            "{} ballots listed for {} voters",
            file.approvals.len(),
            file.voters
        ));
    }
    ApprovalInstance::new(file.candidates, file.approvals, file.k)
}

pub fn approval_to_json(inst: &ApprovalInstance) -> String {
    let file = ApprovalFile {
        voters: inst.voters(),
        candidates: inst.candidates(),
        k: inst.k(),
        approvals: inst.approval_sets(),
    };
    serde_json::to_string_pretty(&file).expect("profiles serialize")
}

fn resolve(inst: &Instance, token: &str) -> Result<usize> {
    if let Some(c) = inst.candidate_index(token) {
        return Ok(c);
    }
    match token.parse::<usize>() {
        Ok(c) if c < inst.m() => Ok(c),
        _ => input(format!("unknown candidate {token:?}")),
    }
}

/// Parses `"0,3,4"` or `"x1, x2, x3"`. A token is first matched against the
/// candidate labels, then read as an index.
pub fn parse_selection(inst: &Instance, text: &str) -> Result<Selection> {
    let centers = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| resolve(inst, t))
        .collect::<Result<Vec<_>>>()?;
    Selection::for_instance(centers, inst)
}

/// Parses a JSON array of indices or labels, or `{"selection": [...]}`.
pub fn parse_selection_json(inst: &Instance, text: &str) -> Result<Selection> {
    let value: Value = serde_json::from_str(text)?;
    let items = match &value {
        Value::Array(a) => a,
        Value::Object(o) => match o.get("selection") {
            Some(Value::Array(a)) => a,
            _ => return input("selection object needs a \"selection\" array"),
        },
        _ => return input("selection must be a JSON array"),
    };
    let centers = items
        .iter()
        .map(|v| match v {
            Value::Number(num) => match num.as_u64() {
                Some(c) if (c as usize) < inst.m() => Ok(c as usize),
                _ => input(format!("candidate index {num} is out of range")),
            },
            Value::String(s) => resolve(inst, s),
            other => input(format!("cannot read {other} as a candidate")),
        })
        .collect::<Result<Vec<_>>>()?;
    Selection::for_instance(centers, inst)
}
