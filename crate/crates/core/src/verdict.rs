//! Verdicts, violation witnesses, and the JSON audit report.

use serde::{Deserialize, Serialize};

use crate::instance::Instance;

/// Certificate of a violation.
///
/// `center` is the unselected anchor (absent for PJR/mPJR, which are not
/// anchored). `covered` lists the selected centers the coalition does reach;
/// for the small-k verifier this is the set `Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub center: Option<usize>,
    pub level: usize,
    pub radius: Option<f64>,
    pub coalition: Option<Vec<usize>>,
    pub covered: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Satisfied,
    Violated(Witness),
}

impl Verdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Verdict::Satisfied)
    }

    pub fn is_violated(&self) -> bool {
        !self.is_satisfied()
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Satisfied => None,
            Verdict::Violated(w) => Some(w),
        }
    }
}

/// Axioms the toolkit can audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    #[serde(rename = "mpjr+")]
    MpjrPlus,
    #[serde(rename = "dc-mpjr+")]
    DcMpjrPlus,
    #[serde(rename = "mpjr-oracle")]
    MpjrOracle,
    #[serde(rename = "fixed-ell-dc")]
    FixedEllDc,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::MpjrPlus => "mpjr+",
            Axiom::DcMpjrPlus => "dc-mpjr+",
            Axiom::MpjrOracle => "mpjr-oracle",
            Axiom::FixedEllDc => "fixed-ell-dc",
        }
    }
}

impl std::str::FromStr for Axiom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mpjr+" => Ok(Axiom::MpjrPlus),
            "dc-mpjr+" => Ok(Axiom::DcMpjrPlus),
            "mpjr-oracle" => Ok(Axiom::MpjrOracle),
            "fixed-ell-dc" => Ok(Axiom::FixedEllDc),
            other => Err(format!("unknown axiom {other:?}")),
        }
    }
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Witness with candidate labels attached, as emitted in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledWitness {
    pub center: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_label: Option<String>,
    pub level: usize,
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coalition: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covered: Option<Vec<usize>>,
}

impl LabeledWitness {
    pub fn new(w: &Witness, inst: &Instance) -> Self {
        Self {
            center: w.center,
            center_label: w.center.map(|c| inst.candidate_labels()[c].clone()),
            level: w.level,
            radius: w.radius,
            coalition: w.coalition.clone(),
            covered: w.covered.clone(),
        }
    }
}

/// `{"axiom", "gamma", "satisfied", "witness", "elapsed_ms"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub axiom: Axiom,
    pub gamma: f64,
    pub satisfied: bool,
    pub witness: Option<LabeledWitness>,
    pub elapsed_ms: f64,
}

impl AuditReport {
    pub fn new(
        axiom: Axiom,
        gamma: f64,
        verdict: &Verdict,
        inst: &Instance,
        elapsed_ms: f64,
    ) -> Self {
        let witness = verdict.witness().map(|w| LabeledWitness::new(w, inst));
        Self {
            axiom,
            gamma,
            satisfied: verdict.is_satisfied(),
            witness,
            elapsed_ms,
        }
    }

    /// One-paragraph human summary.
    pub fn to_text(&self, inst: &Instance) -> String {
        let mut out = format!(
            "{} (gamma = {}): {}",
            self.axiom,
            self.gamma,
            if self.satisfied {
                "SATISFIED"
            } else {
                "VIOLATED"
            }
        );
        if let Some(w) = &self.witness {
            out.push_str(&format!("\n  level: {}", w.level));
            if let Some(label) = &w.center_label {
                out.push_str(&format!("\n  anchor: {label}"));
            }
            if let Some(r) = w.radius {
                out.push_str(&format!("\n  radius: {r}"));
            }
            if let Some(s) = &w.coalition {
                let names: Vec<&str> = s.iter().map(|&i| inst.agent_labels()[i].as_str()).collect();
                out.push_str(&format!("\n  coalition: {{{}}}", names.join(", ")));
            }
            if let Some(y) = &w.covered {
                let names: Vec<&str> = y
                    .iter()
                    .map(|&c| inst.candidate_labels()[c].as_str())
                    .collect();
                out.push_str(&format!("\n  covered: {{{}}}", names.join(", ")));
            }
        }
        out.push_str(&format!("\n  elapsed: {:.3} ms", self.elapsed_ms));
        out
    }
}
