//! Exhaustive reference checks, transcribed from the definitions.
//!
//! Nothing here shares code with the sweeps in [`crate::verify`]: groups are
//! enumerated as bitmasks over all agents, approval sets come from
//! [`Instance::group_approval_set`], and every quota test is an integer
//! cross-multiplication. The subset enumerations are capped by
//! [`Limits::max_exhaustive_agents`] and [`Limits::max_ball`].

use crate::approval::{verify_pjr_bruteforce, ApprovalInstance};
use crate::error::{input, Error, Result};
use crate::instance::{Instance, Selection};
use crate::verdict::{Verdict, Witness};
use crate::verify::default_coalition;
use crate::Limits;

fn check_agents(inst: &Instance, limits: &Limits) -> Result<()> {
    if inst.n() > limits.max_exhaustive_agents {
        return Err(Error::Size {
            what: "agent count",
            actual: inst.n(),
            limit: limits.max_exhaustive_agents,
        });
    }
    Ok(())
}

fn check_selection(inst: &Instance, x: &Selection) -> Result<()> {
    if x.universe() != inst.m() || x.len() != inst.k() {
        return input("selection does not match the instance");
    }
    Ok(())
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

fn coverage(inst: &Instance, x: &Selection, group: &[usize], r: f64) -> Result<usize> {
    Ok(inst
        .group_approval_set(group, r)?
        .into_iter()
        .filter(|&c| x.contains(c))
        .count())
}

/// The approval profile in which agent `i` approves every candidate within
/// distance `r`.
pub fn approval_profile(inst: &Instance, r: f64) -> Result<ApprovalInstance> {
    let sets = (0..inst.n())
        .map(|i| {
            (0..inst.m())
                .filter(|&c| inst.agent_candidate(i, c) <= r)
                .collect()
        })
        .collect();
    ApprovalInstance::new(inst.m(), sets, inst.k())
}

fn radii(inst: &Instance) -> Vec<f64> {
    let mut rs: Vec<f64> = (0..inst.n())
        .flat_map(|i| (0..inst.m()).map(move |c| (i, c)))
        .map(|(i, c)| inst.agent_candidate(i, c))
        .collect();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    rs
}

/// Metric PJR: at every radius `r` among the agent-candidate distances, the
/// approval profile "within `r`" must satisfy PJR.
pub fn oracle_mpjr(inst: &Instance, x: &Selection, limits: &Limits) -> Result<Verdict> {
    check_agents(inst, limits)?;
    check_selection(inst, x)?;
    for r in radii(inst) {
        let profile = approval_profile(inst, r)?;
        if let Verdict::Violated(w) = verify_pjr_bruteforce(&profile, x, limits)? {
            return Ok(Verdict::Violated(Witness {
                radius: Some(r),
                ..w
            }));
        }
    }
    Ok(Verdict::Satisfied)
}

/// `gamma`-mPJR+ by enumerating every unselected `c` and nonempty group `S`:
/// with `r = max over S of d(i, c)`, a violation is a group whose entitlement
/// `floor(|S| k / n)` exceeds `|X ∩ A_{gamma r}(S)|`.
pub fn oracle_mpjr_plus(
    inst: &Instance,
    x: &Selection,
    gamma: f64,
    limits: &Limits,
) -> Result<Verdict> {
    anchored_search(inst, x, gamma, limits, None)
}

/// `gamma`-mPJR+ restricted to one level: groups of at least `level * n / k`
/// agents must reach `level` selected centers.
pub fn oracle_fixed_ell_mpjr_plus(
    inst: &Instance,
    x: &Selection,
    level: usize,
    gamma: f64,
    limits: &Limits,
) -> Result<Verdict> {
    if level == 0 || level > inst.k() {
        return input(format!("level {level} must lie in 1..={}", inst.k()));
    }
    anchored_search(inst, x, gamma, limits, Some(level))
}

fn anchored_search(
    inst: &Instance,
    x: &Selection,
    gamma: f64,
    limits: &Limits,
    fixed: Option<usize>,
) -> Result<Verdict> {
    check_agents(inst, limits)?;
    check_selection(inst, x)?;
    if !(gamma >= 1.0 && gamma.is_finite()) {
        return input("gamma must be a finite value >= 1");
    }
    let q = inst.quota();
    for c in x.unselected() {
        for mask in 1u32..1 << inst.n() {
            let group = members(mask);
            let demanded = match fixed {
                Some(level) if q.at_least(group.len(), level) => level,
                Some(_) => continue,
                None => q.level_of(group.len()),
            };
            if demanded == 0 {
                continue;
            }
            let r = group
                .iter()
                .map(|&i| inst.agent_candidate(i, c))
                .fold(0.0, f64::max);
            let covered = coverage(inst, x, &group, gamma * r)?;
            if covered < demanded {
                return Ok(Verdict::Violated(Witness {
                    center: Some(c),
                    level: if fixed.is_some() {
                        demanded
                    } else {
                        covered + 1
                    },
                    radius: Some(r),
                    coalition: Some(group),
                    covered: None,
                }));
            }
        }
    }
    Ok(Verdict::Satisfied)
}

/// `gamma`-DC-mPJR+ checked level by level: for every unselected `c` and
/// every `level` in `1..=k`, the default coalition must reach `level`
/// selected centers within `gamma` times its radius.
pub fn oracle_dc(inst: &Instance, x: &Selection, gamma: f64) -> Result<Verdict> {
    check_selection(inst, x)?;
    if !(gamma >= 1.0 && gamma.is_finite()) {
        return input("gamma must be a finite value >= 1");
    }
    for c in x.unselected() {
        for level in 1..=inst.k() {
            let dc = default_coalition(inst, c, level)?;
            let reach = gamma * dc.radius;
            let covered: Vec<usize> = inst
                .group_approval_set(&dc.members, reach)?
                .into_iter()
                .filter(|&y| x.contains(y))
                .collect();
            if covered.len() < level {
                return Ok(Verdict::Violated(Witness {
                    center: Some(c),
                    level,
                    radius: Some(dc.radius),
                    coalition: Some(dc.members),
                    covered: Some(covered),
                }));
            }
        }
    }
    Ok(Verdict::Satisfied)
}

/// `n * f(S)` for `f(S) = |X ∩ A_r(S)| - |S| k / n`, with `f(∅) = 0`.
pub fn submodular_value(inst: &Instance, x: &Selection, r: f64, group: &[usize]) -> Result<i64> {
    let covered = if group.is_empty() {
        0
    } else {
        coverage(inst, x, group, r)?
    };
    Ok(covered as i64 * inst.n() as i64 - group.len() as i64 * inst.k() as i64)
}

/// Exhaustive minimum of `f` over subsets of the ball `B(c, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodularMin {
    pub ball: Vec<usize>,
    pub minimizer: Vec<usize>,
    pub coverage: usize,
    pub size: usize,
    /// `f(minimizer) <= -1`, tested as `coverage * n <= size * k - n`.
    pub violation: bool,
}

pub fn submodular_min_check(
    inst: &Instance,
    x: &Selection,
    c: usize,
    r: f64,
    limits: &Limits,
) -> Result<SubmodularMin> {
    check_selection(inst, x)?;
    if c >= inst.m() {
        return input(format!("candidate {c} is out of range"));
    }
    let ball: Vec<usize> = (0..inst.n())
        .filter(|&i| inst.agent_candidate(i, c) <= r)
        .collect();
    if ball.len() > limits.max_ball {
        return Err(Error::Size {
            what: "ball size",
            actual: ball.len(),
            limit: limits.max_ball,
        });
    }
    let mut best = (0i64, Vec::new());
    for mask in 1u32..1 << ball.len() {
        let group: Vec<usize> = members(mask).into_iter().map(|p| ball[p]).collect();
        let value = submodular_value(inst, x, r, &group)?;
        if value < best.0 {
            best = (value, group);
        }
    }
    let (_, minimizer) = best;
    let size = minimizer.len();
    let coverage = if minimizer.is_empty() {
        0
    } else {
        coverage(inst, x, &minimizer, r)?
    };
    let (n, k) = (inst.n() as i64, inst.k() as i64);
    Ok(SubmodularMin {
        ball,
        minimizer,
        coverage,
        size,
        violation: coverage as i64 * n <= size as i64 * k - n,
    })
}
