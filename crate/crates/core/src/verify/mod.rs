//! Polynomial-time verifiers.
//!
//! * [`verify_dc_mpjr_plus`]: the default-coalition axiom, one radius sweep
//!   per unselected candidate, `O(mn log n + mnk)`.
//! * [`verify_mpjr_plus_smallk`]: the anchored metric PJR+ axiom via an
//!   interval sweep over every proper subset `Y` of the selection,
//!   `O(2^k (nk + n log n + mn))` after an `O(mn log n)` presort.
//! * [`verify_fixed_ell_dc`]: the default-coalition test at a single level.
//!
//! All three accept a stretch factor `gamma >= 1` and report the first
//! violation in a fixed scan order (candidates ascending; `Y` by size, then
//! lexicographic; radii ascending).

mod coalition;
mod dc;
mod smallk;

pub use coalition::{default_coalition, DefaultCoalition};
pub use dc::{
    dc_violations, verify_dc_mpjr_plus, verify_dc_mpjr_plus_parallel, verify_fixed_ell_dc,
};
pub use smallk::verify_mpjr_plus_smallk;

use crate::error::{input, Result};
use crate::instance::{Instance, Selection};
use crate::table::Distances;
use crate::verdict::{Axiom, Verdict};
use crate::Limits;

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 1.0 && gamma.is_finite()) {
        return input(format!("gamma = {gamma} must be a finite value >= 1"));
    }
    Ok(())
}

pub(crate) fn check_selection<D: Distances + ?Sized>(d: &D, x: &Selection) -> Result<()> {
    if x.universe() != d.candidates() {
        return input(format!(
            "selection was built for {} candidates, instance has {}",
            x.universe(),
            d.candidates()
        ));
    }
    if x.len() != d.k() {
        return input(format!(
            "selection has {} centers, expected k = {}",
            x.len(),
            d.k()
        ));
    }
    Ok(())
}

/// Runs the verifier for `axiom`. `level` is required by
/// [`Axiom::FixedEllDc`] and ignored otherwise; the metric PJR oracle
/// ignores `gamma`.
pub fn audit(
    inst: &Instance,
    x: &Selection,
    axiom: Axiom,
    gamma: f64,
    level: Option<usize>,
    limits: &Limits,
) -> Result<Verdict> {
    match axiom {
        Axiom::DcMpjrPlus => verify_dc_mpjr_plus_parallel(inst, x, gamma),
        Axiom::MpjrPlus => verify_mpjr_plus_smallk(inst, x, gamma, limits),
        Axiom::MpjrOracle => crate::oracle::oracle_mpjr(inst, x, limits),
        Axiom::FixedEllDc => match level {
            Some(l) => verify_fixed_ell_dc(inst, x, l, gamma),
            None => input("the fixed-level axiom needs a level"),
        },
    }
}
