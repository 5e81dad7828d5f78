use std::borrow::Cow;

use rayon::prelude::*;

use super::{check_gamma, check_selection};
use crate::error::{input, Error, Result};
use crate::instance::Selection;
use crate::table::Distances;
use crate::verdict::{Verdict, Witness};

/// State of the ball grown around one unselected candidate.
///
/// Each step absorbs every agent at the next distinct distance `rho`, updates
/// `delta[x] = min over absorbed agents of d(x, agent)` for each selected `x`,
/// and reports how many selected centers lie within `gamma * rho` of the ball.
struct BallSweep<'a, D: Distances + ?Sized> {
    d: &'a D,
    centers: &'a [usize],
    candidate: usize,
    gamma: f64,
    order: Cow<'a, [u32]>,
    delta: Vec<f64>,
    absorbed: usize,
}

struct Step {
    rho: f64,
    size: usize,
    cov: usize,
}

impl<'a, D: Distances + ?Sized> BallSweep<'a, D> {
    fn new(d: &'a D, x: &'a Selection, candidate: usize, gamma: f64) -> Self {
        Self {
            d,
            centers: x.centers(),
            candidate,
            gamma,
            order: d.agents_by_distance(candidate),
            delta: vec![f64::INFINITY; x.len()],
            absorbed: 0,
        }
    }

    fn next_step(&mut self) -> Option<Step> {
        let first = *self.order.get(self.absorbed)? as usize;
        let rho = self.d.dist(first, self.candidate);
        while let Some(&i) = self.order.get(self.absorbed) {
            let i = i as usize;
            if self.d.dist(i, self.candidate) != rho {
                break;
            }
            for (slot, &x) in self.delta.iter_mut().zip(self.centers) {
                let dx = self.d.dist(i, x);
                if dx < *slot {
                    *slot = dx;
                }
            }
            self.absorbed += 1;
        }
        let reach = self.gamma * rho;
        let cov = self.delta.iter().filter(|&&v| v <= reach).count();
        Some(Step {
            rho,
            size: self.absorbed,
            cov,
        })
    }

    fn covered(&self, rho: f64) -> Vec<usize> {
        let reach = self.gamma * rho;
        self.centers
            .iter()
            .zip(&self.delta)
            .filter(|(_, &v)| v <= reach)
            .map(|(&x, _)| x)
            .collect()
    }

    fn coalition(&self) -> Vec<usize> {
        let mut members: Vec<usize> = self.order[..self.absorbed]
            .iter()
            .map(|&i| i as usize)
            .collect();
        members.sort_unstable();
        members
    }
}

fn first_violation<D: Distances + ?Sized>(
    d: &D,
    x: &Selection,
    c: usize,
    gamma: f64,
) -> Option<Witness> {
    let q = d.quota();
    let mut sweep = BallSweep::new(d, x, c, gamma);
    while let Some(step) = sweep.next_step() {
        let t = q.level_of(step.size);
        if step.cov < t {
            return Some(Witness {
                center: Some(c),
                level: t,
                radius: Some(step.rho),
                coalition: Some(sweep.coalition()),
                covered: Some(sweep.covered(step.rho)),
            });
        }
    }
    None
}

/// Decides `gamma`-DC-mPJR+.
///
/// For each unselected candidate the agents are swept in order of distance,
/// one distinct radius at a time; with `t = floor(|P| k / n)` for the current
/// ball `P`, fewer than `t` selected centers within `gamma * rho` of `P` is a
/// violation, reported as `(c, t, rho)`.
pub fn verify_dc_mpjr_plus<D: Distances + ?Sized>(
    d: &D,
    x: &Selection,
    gamma: f64,
) -> Result<Verdict> {
    check_gamma(gamma)?;
    check_selection(d, x)?;
    Ok(x.unselected()
        .find_map(|c| first_violation(d, x, c, gamma))
        .map_or(Verdict::Satisfied, Verdict::Violated))
}

/// [`verify_dc_mpjr_plus`] with the candidates checked in parallel. The
/// reported witness is the one the sequential scan would find.
pub fn verify_dc_mpjr_plus_parallel<D: Distances + ?Sized>(
    d: &D,
    x: &Selection,
    gamma: f64,
) -> Result<Verdict> {
    check_gamma(gamma)?;
    check_selection(d, x)?;
    let unselected: Vec<usize> = x.unselected().collect();
    Ok(unselected
        .par_iter()
        .find_map_first(|&c| first_violation(d, x, c, gamma))
        .map_or(Verdict::Satisfied, Verdict::Violated))
}

/// Every violating `(c, level)` pair, without early exit.
///
/// A level whose default coalition is first reached at radius `rho` is
/// violated when the coverage there is below it. Witnesses omit the
/// coalition to keep memory linear in the number of violations.
pub fn dc_violations<D: Distances + ?Sized>(
    d: &D,
    x: &Selection,
    gamma: f64,
) -> Result<Vec<Witness>> {
    check_gamma(gamma)?;
    check_selection(d, x)?;
    let q = d.quota();
    let mut out = Vec::new();
    for c in x.unselected() {
        let mut sweep = BallSweep::new(d, x, c, gamma);
        let mut reached = 0;
        while let Some(step) = sweep.next_step() {
            let t = q.level_of(step.size);
            if step.cov < t {
                let covered = sweep.covered(step.rho);
                for level in reached.max(step.cov) + 1..=t {
                    out.push(Witness {
                        center: Some(c),
                        level,
                        radius: Some(step.rho),
                        coalition: None,
                        covered: Some(covered.clone()),
                    });
                }
            }
            reached = t;
        }
    }
    Ok(out)
}

/// The default-coalition test at one level: for each unselected candidate,
/// stop at the first radius whose ball deserves `level` centers and require
/// `level` covered centers there.
pub fn verify_fixed_ell_dc<D: Distances + ?Sized>(
    d: &D,
    x: &Selection,
    level: usize,
    gamma: f64,
) -> Result<Verdict> {
    check_gamma(gamma)?;
    check_selection(d, x)?;
    if level == 0 {
        return input("level must be at least 1");
    }
    if level > d.k() {
        return Err(Error::InfeasibleLevel { level, k: d.k() });
    }
    let q = d.quota();
    for c in x.unselected() {
        let mut sweep = BallSweep::new(d, x, c, gamma);
        while let Some(step) = sweep.next_step() {
            if q.level_of(step.size) < level {
                continue;
            }
            if step.cov < level {
                return Ok(Verdict::Violated(Witness {
                    center: Some(c),
                    level,
                    radius: Some(step.rho),
                    coalition: Some(sweep.coalition()),
                    covered: Some(sweep.covered(step.rho)),
                }));
            }
            break;
        }
    }
    Ok(Verdict::Satisfied)
}
