//! Clustering objectives used as baselines: discrete k-median by swap local
//! search (or exhaustively for small `m`) and k-means by Lloyd iterations
//! with centroids snapped to candidates.

use itertools::Itertools;

use crate::error::{input, Error, Result};
use crate::gen::{rng_from, sample_selection_with, split_seed};
use crate::instance::{Instance, Point, Selection};
use crate::table::Distances;

/// Sum over agents of the distance to the nearest selected center.
pub fn kmedian_cost<D: Distances + ?Sized>(d: &D, centers: &[usize]) -> f64 {
    (0..d.agents())
        .map(|i| {
            centers
                .iter()
                .map(|&c| d.dist(i, c))
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

/// Sum over agents of the squared distance to the nearest selected center.
pub fn kmeans_cost<D: Distances + ?Sized>(d: &D, centers: &[usize]) -> f64 {
    (0..d.agents())
        .map(|i| {
            let v = centers
                .iter()
                .map(|&c| d.dist(i, c))
                .fold(f64::INFINITY, f64::min);
            v * v
        })
        .sum()
}

/// Best-improvement swap search from `start`: each round takes the swap of
/// one selected and one unselected candidate with the lowest resulting
/// cost, scanning pairs in index order, until no swap strictly improves.
pub fn kmedian_local_search_from<D: Distances + ?Sized>(
    d: &D,
    start: &Selection,
) -> Result<Selection> {
    let m = d.candidates();
    let mut current = start.centers().to_vec();
    let mut cost = kmedian_cost(d, &current);
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for pos in 0..current.len() {
            for c in (0..m).filter(|c| !current.contains(c)) {
                let mut trial = current.clone();
                trial[pos] = c;
                let t = kmedian_cost(d, &trial);
                if t < best.map_or(cost, |b| b.0) {
                    best = Some((t, pos, c));
                }
            }
        }
        match best {
            Some((t, pos, c)) => {
                current[pos] = c;
                cost = t;
            }
            None => break,
        }
    }
    Selection::new(current, m, d.k())
}

/// Local search from a uniformly random start drawn from `seed`.
pub fn kmedian_local_search<D: Distances + ?Sized>(d: &D, seed: u64) -> Result<Selection> {
    let start = sample_selection_with(d.candidates(), d.k(), &mut rng_from(seed))?;
    kmedian_local_search_from(d, &start)
}

/// Largest candidate count accepted by [`kmedian_exhaustive`].
pub const EXHAUSTIVE_MAX_CANDIDATES: usize = 12;

/// The k-median optimum over all size-`k` subsets, first in lexicographic
/// order among ties.
pub fn kmedian_exhaustive<D: Distances + ?Sized>(d: &D) -> Result<Selection> {
    let m = d.candidates();
    if m > EXHAUSTIVE_MAX_CANDIDATES {
        return Err(Error::Size {
            what: "candidate count",
            actual: m,
            limit: EXHAUSTIVE_MAX_CANDIDATES,
        });
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for subset in (0..m).combinations(d.k()) {
        let cost = kmedian_cost(d, &subset);
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, subset));
        }
    }
    let (_, centers) = best.expect("k <= m leaves at least one subset");
    Selection::new(centers, m, d.k())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KmeansOptions {
    pub max_iters: usize,
    pub restarts: usize,
}

impl Default for KmeansOptions {
    fn default() -> Self {
        Self {
            max_iters: 100,
            restarts: 10,
        }
    }
}

fn nearest(dists: impl Iterator<Item = f64>) -> usize {
    dists
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(j, _)| j)
        .expect("nonempty")
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn lloyd_once(inst: &Instance, start: Vec<usize>, max_iters: usize) -> Vec<usize> {
    let (n, m) = (inst.n(), inst.m());
    let dim = inst.coords(Point::Agent(0)).map_or(0, <[f64]>::len);
    let agent = |i: usize| inst.coords(Point::Agent(i)).expect("euclidean");
    let cand = |c: usize| inst.coords(Point::Candidate(c)).expect("euclidean");
    let mut centers = start;
    let mut assign: Vec<usize> = vec![usize::MAX; n];
    for _ in 0..max_iters {
        let next: Vec<usize> = (0..n)
            .map(|i| nearest(centers.iter().map(|&c| inst.agent_candidate(i, c))))
            .collect();
        if next == assign {
            break;
        }
        assign = next;
        let mut used = vec![false; m];
        let mut moved = centers.clone();
        for (slot, old) in centers.iter().enumerate() {
            let cluster: Vec<usize> = (0..n).filter(|&i| assign[i] == slot).collect();
            if cluster.is_empty() {
                moved[slot] = *old;
                used[*old] = true;
                continue;
            }
            let mut mean = vec![0.0; dim];
            for &i in &cluster {
                for (acc, v) in mean.iter_mut().zip(agent(i)) {
                    *acc += v;
                }
            }
            mean.iter_mut().for_each(|v| *v /= cluster.len() as f64);
            let snapped = (0..m)
                .filter(|&c| !used[c])
                .min_by(|&a, &b| sq(cand(a), &mean).total_cmp(&sq(cand(b), &mean)))
                .unwrap_or(*old);
            moved[slot] = snapped;
            used[snapped] = true;
        }
        centers = moved;
    }
    centers
}

/// Lloyd's algorithm on squared Euclidean cost, each centroid replaced by
/// the nearest candidate not already taken. Returns the best of
/// `opts.restarts` runs from random starts.
pub fn kmeans_lloyd_snapped(inst: &Instance, seed: u64, opts: KmeansOptions) -> Result<Selection> {
    if !inst.is_euclidean() {
        return Err(Error::UnsupportedBackend);
    }
    if opts.restarts == 0 {
        return input("at least one restart is required");
    }
    let (m, k) = (inst.m(), inst.k());
    let mut best: Option<(f64, Vec<usize>)> = None;
    for run in 0..opts.restarts {
        let mut rng = rng_from(split_seed(seed, run as u64));
        let start = sample_selection_with(m, k, &mut rng)?.centers().to_vec();
        let centers = lloyd_once(inst, start, opts.max_iters);
        let cost = kmeans_cost(inst, &centers);
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, centers));
        }
    }
    let (_, centers) = best.expect("restarts >= 1");
    Selection::new(centers, m, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{fixture_objective_failure, gen_gaussian_instance, GaussianConfig};

    #[test]
    fn exhaustive_on_objective_fixture() {
        let inst = fixture_objective_failure().unwrap();
        let best = kmedian_exhaustive(&inst).unwrap();
        assert_eq!(best.centers(), &[0, 3, 4]);
        assert_eq!(kmedian_cost(&inst, best.centers()), 12.0);
        assert_eq!(kmedian_cost(&inst, &[1, 2, 3]), 108.0);
    }

    #[test]
    fn single_candidate() {
        let inst = Instance::euclidean(1, vec![vec![0.0], vec![3.0]], vec![vec![1.0]], 1).unwrap();
        assert_eq!(kmedian_local_search(&inst, 0).unwrap().centers(), &[0]);
        assert_eq!(
            kmeans_lloyd_snapped(&inst, 0, KmeansOptions::default())
                .unwrap()
                .centers(),
            &[0]
        );
    }

    #[test]
    fn local_search_is_a_fixed_point_at_the_optimum() {
        let inst = gen_gaussian_instance(&GaussianConfig::new(12, 3, 3, 5)).unwrap();
        let opt = kmedian_exhaustive(&inst).unwrap();
        assert_eq!(kmedian_local_search_from(&inst, &opt).unwrap(), opt);
        for seed in 0..5 {
            let local = kmedian_local_search(&inst, seed).unwrap();
            assert!(kmedian_cost(&inst, local.centers()) >= kmedian_cost(&inst, opt.centers()));
        }
    }

    #[test]
    fn kmeans_finds_planted_clusters() {
        let cfg = GaussianConfig {
            sigma: 0.0,
            ..GaussianConfig::new(12, 3, 3, 11)
        };
        let inst = gen_gaussian_instance(&cfg).unwrap();
        let opts = KmeansOptions {
            restarts: 10,
            ..KmeansOptions::default()
        };
        let sel = kmeans_lloyd_snapped(&inst, 1, opts).unwrap();
        assert_eq!(kmeans_cost(&inst, sel.centers()), 0.0);
    }

    #[test]
    fn kmeans_requires_coordinates() {
        let (inst, _) = crate::gen::fixture_incomparability(2).unwrap();
        assert!(matches!(
            kmeans_lloyd_snapped(&inst, 0, KmeansOptions::default()),
            Err(Error::UnsupportedBackend)
        ));
    }
}
