//! The synthetic satisfaction-rate experiment.
//!
//! For every `(n, g)` cell, `instances_per_cell` planted-cluster instances
//! are generated and `selections_per_instance` uniformly random selections
//! of each are audited. Seeds are derived from the master seed with
//! [`split_seed`]:
//!
//! ```text
//! cell      = split_seed(split_seed(master, n), g)
//! instance  = split_seed(cell, i)
//! selection = split_seed(instance, j)
//! ```
//!
//! so every count is independent of scheduling. Instances are audited in
//! parallel on a shared [`DistanceTable`].

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{gen_gaussian_instance, sample_selection, split_seed, GaussianConfig};
use crate::table::DistanceTable;
use crate::verdict::{Axiom, Verdict};
use crate::verify::{verify_dc_mpjr_plus, verify_mpjr_plus_smallk};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub g_values: Vec<usize>,
    pub instances_per_cell: usize,
    pub selections_per_instance: usize,
    pub k: usize,
    pub sigma: f64,
    pub master_seed: u64,
    pub axioms: Vec<Axiom>,
    pub gamma: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_values: vec![20, 50, 80, 100],
            g_values: vec![4, 5, 6],
            instances_per_cell: 50,
            selections_per_instance: 1000,
            k: 5,
            sigma: 0.04,
            master_seed: 0,
            axioms: vec![Axiom::MpjrPlus, Axiom::DcMpjrPlus],
            gamma: 1.0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n_values.is_empty() || self.g_values.is_empty() {
            return fail("n and g lists must be nonempty".into());
        }
        if self.instances_per_cell == 0 || self.selections_per_instance == 0 {
            return fail("instance and selection counts must be positive".into());
        }
        let min_n = *self.n_values.iter().min().expect("nonempty");
        if self.k == 0 || self.k > min_n {
            return fail(format!("k = {} must lie in 1..={min_n}", self.k));
        }
        if let Some(&g) = self.g_values.iter().find(|&&g| g == 0 || g > min_n) {
            return fail(format!("g = {g} must lie in 1..={min_n}"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return fail("sigma must be finite and nonnegative".into());
        }
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return fail("gamma must be a finite value >= 1".into());
        }
        if self.axioms.is_empty() {
            return fail("no axioms requested".into());
        }
        if let Some(a) = self
            .axioms
            .iter()
            .find(|a| !matches!(a, Axiom::MpjrPlus | Axiom::DcMpjrPlus))
        {
            return fail(format!("axiom {a} is not part of the experiment"));
        }
        Ok(())
    }

    fn axioms(&self) -> (bool, bool) {
        (
            self.axioms.contains(&Axiom::MpjrPlus),
            self.axioms.contains(&Axiom::DcMpjrPlus),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub g: usize,
    pub axiom: Axiom,
    pub gamma: f64,
    pub satisfied: u64,
    pub total: u64,
    pub rate: f64,
    pub mean_ms: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub master_seed: u64,
    pub rows: Vec<ExperimentRow>,
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    satisfied: [u64; 2],
    seconds: [f64; 2],
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for a in 0..2 {
            self.satisfied[a] += other.satisfied[a];
            self.seconds[a] += other.seconds[a];
        }
        self
    }
}

pub fn cell_seed(master: u64, n: usize, g: usize) -> u64 {
    split_seed(split_seed(master, n as u64), g as u64)
}

fn audit_instance(cfg: &ExperimentConfig, n: usize, g: usize, seed: u64) -> Result<Tally> {
    let (want_plus, want_dc) = cfg.axioms();
    let gcfg = GaussianConfig {
        n,
        g,
        sigma: cfg.sigma,
        seed,
        k: cfg.k,
    };
    let inst = gen_gaussian_instance(&gcfg)?;
    let table = DistanceTable::new(&inst);
    let limits = Limits::default();
    let mut tally = Tally::default();
    for j in 0..cfg.selections_per_instance {
        let sel_seed = split_seed(seed, j as u64);
        let x = sample_selection(inst.m(), cfg.k, sel_seed)?;
        let mut plus = None;
        if want_plus {
            let t = Instant::now();
            let v = verify_mpjr_plus_smallk(&table, &x, cfg.gamma, &limits)?;
            tally.seconds[0] += t.elapsed().as_secs_f64();
            tally.satisfied[0] += v.is_satisfied() as u64;
            plus = Some(v);
        }
        if want_dc {
            let t = Instant::now();
            let v = verify_dc_mpjr_plus(&table, &x, cfg.gamma)?;
            tally.seconds[1] += t.elapsed().as_secs_f64();
            tally.satisfied[1] += v.is_satisfied() as u64;
            if let (Some(Verdict::Satisfied), Verdict::Violated(w)) = (&plus, &v) {
                return Err(Error::Invariant(format!(
                    "selection {:?} of instance seed {seed} (selection seed {sel_seed}) satisfies mPJR+ but violates DC-mPJR+ at {w:?}",
                    x.centers()
                )));
            }
        }
    }
    Ok(tally)
}

/// Runs the full grid. Any selection that satisfies mPJR+ but violates
/// DC-mPJR+ aborts the run with [`Error::Invariant`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let start = Instant::now();
    let cells: Vec<(usize, usize)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| cfg.g_values.iter().map(move |&g| (n, g)))
        .collect();
    let tasks: Vec<(usize, usize, usize)> = cells
        .iter()
        .flat_map(|&(n, g)| (0..cfg.instances_per_cell).map(move |i| (n, g, i)))
        .collect();
    let tallies = tasks
        .par_iter()
        .map(|&(n, g, i)| {
            audit_instance(
                cfg,
                n,
                g,
                split_seed(cell_seed(cfg.master_seed, n, g), i as u64),
            )
        })
        .collect::<Result<Vec<Tally>>>()?;

    let total = (cfg.instances_per_cell * cfg.selections_per_instance) as u64;
    let mut rows = Vec::new();
    for (cell, &(n, g)) in tallies.chunks(cfg.instances_per_cell).zip(&cells) {
        let sum = cell.iter().copied().fold(Tally::default(), Tally::merge);
        for axiom in [Axiom::MpjrPlus, Axiom::DcMpjrPlus] {
            if !cfg.axioms.contains(&axiom) {
                continue;
            }
            let a = (axiom == Axiom::DcMpjrPlus) as usize;
            rows.push(ExperimentRow {
                n,
                g,
                axiom,
                gamma: cfg.gamma,
                satisfied: sum.satisfied[a],
                total,
                rate: sum.satisfied[a] as f64 / total as f64,
                mean_ms: sum.seconds[a] * 1e3 / total as f64,
                seed: cfg.master_seed,
            });
        }
    }
    Ok(ExperimentReport {
        master_seed: cfg.master_seed,
        rows,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

impl ExperimentReport {
    /// CSV with columns `n,g,axiom,gamma,satisfied,total,rate,mean_ms,seed`.
    /// Timings vary between runs; with `include_timing` off the `mean_ms`
    /// column is left empty and the output is reproducible byte for byte.
    pub fn to_csv(&self, include_timing: bool) -> String {
        let mut out = String::from("n,g,axiom,gamma,satisfied,total,rate,mean_ms,seed\n");
        for r in &self.rows {
            let ms = if include_timing {
                format!("{:.4}", r.mean_ms)
            } else {
                String::new()
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{:.6},{},{}",
                r.n, r.g, r.axiom, r.gamma, r.satisfied, r.total, r.rate, ms, r.seed
            )
            .expect("writing to a string");
        }
        out
    }

    /// Tab-separated satisfaction percentages, one line per `(n, g)` cell
    /// and one column per axiom.
    pub fn plot_data(&self) -> String {
        let axioms: Vec<Axiom> = [Axiom::MpjrPlus, Axiom::DcMpjrPlus]
            .into_iter()
            .filter(|a| self.rows.iter().any(|r| r.axiom == *a))
            .collect();
        let mut out = String::from("n\tg");
        for a in &axioms {
            write!(out, "\t{a}").expect("writing to a string");
        }
        out.push('\n');
        let mut cells: Vec<(usize, usize)> = self.rows.iter().map(|r| (r.n, r.g)).collect();
        cells.dedup();
        for (n, g) in cells {
            write!(out, "{n}\t{g}").expect("writing to a string");
            for a in &axioms {
                let row = self
                    .rows
                    .iter()
                    .find(|r| r.n == n && r.g == g && r.axiom == *a);
                write!(out, "\t{:.2}", row.map_or(f64::NAN, |r| 100.0 * r.rate))
                    .expect("writing to a string");
            }
            out.push('\n');
        }
        out
    }

    /// Smallest and largest rate over the cells for one axiom.
    pub fn rate_range(&self, axiom: Axiom) -> Option<(f64, f64)> {
        let rates = self
            .rows
            .iter()
            .filter(|r| r.axiom == axiom)
            .map(|r| r.rate);
        rates.fold(None, |acc, r| match acc {
            None => Some((r, r)),
            Some((lo, hi)) => Some((lo.min(r), hi.max(r))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            n_values: vec![20],
            g_values: vec![4],
            instances_per_cell: 1,
            selections_per_instance: 1,
            master_seed: 17,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn single_cell_is_reproducible() {
        let a = run_experiment(&tiny()).unwrap();
        let b = run_experiment(&tiny()).unwrap();
        assert_eq!(a.rows.len(), 2);
        assert_eq!(a.to_csv(false), b.to_csv(false));
        assert!(a.rows.iter().all(|r| r.total == 1));
    }

    #[test]
    fn csv_and_plot_layout() {
        let cfg = ExperimentConfig {
            n_values: vec![10, 20],
            g_values: vec![2, 3],
            instances_per_cell: 2,
            selections_per_instance: 20,
            ..ExperimentConfig::default()
        };
        let report = run_experiment(&cfg).unwrap();
        let csv = report.to_csv(false);
        assert_eq!(csv.lines().count(), 1 + 8);
        assert!(csv.lines().nth(1).unwrap().starts_with("10,2,mpjr+,1,"));
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",,0")));
        let plot = report.plot_data();
        assert_eq!(plot.lines().next(), Some("n\tg\tmpjr+\tdc-mpjr+"));
        assert_eq!(plot.lines().count(), 5);
        for pair in report.rows.chunks(2) {
            assert!(pair[1].rate >= pair[0].rate);
        }
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            ExperimentConfig { k: 30, ..tiny() },
            ExperimentConfig {
                instances_per_cell: 0,
                ..tiny()
            },
            ExperimentConfig {
                gamma: 0.5,
                ..tiny()
            },
            ExperimentConfig {
                g_values: vec![0],
                ..tiny()
            },
            ExperimentConfig {
                axioms: vec![],
                ..tiny()
            },
            ExperimentConfig {
                axioms: vec![Axiom::MpjrOracle],
                ..tiny()
            },
        ];
        for cfg in bad {
            assert!(
                matches!(run_experiment(&cfg), Err(Error::Config(_))),
                "{cfg:?}"
            );
        }
    }
}
