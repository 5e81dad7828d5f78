//! Instance generators.
//!
//! Randomness comes from ChaCha8 streams seeded with 64-bit values. A master
//! seed is split into independent substreams by [`split_seed`], so that the
//! experiment harness can produce the instance for `(cell, i)` and its
//! `j`-th selection without generating anything else first:
//!
//! ```text
//! instance seed  = split_seed(split_seed(master, cell), i)
//! selection seed = split_seed(instance seed, j)
//! ```

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approval::ApprovalInstance;
use crate::embedding::embed_approval;
use crate::error::{input, Result};
use crate::instance::{Instance, Selection};

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of substream `stream` from `seed`.
pub fn split_seed(seed: u64, stream: u64) -> u64 {
    splitmix(seed ^ splitmix(stream))
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameters of the planted-cluster model in the unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianConfig {
    pub n: usize,
    pub g: usize,
    pub sigma: f64,
    pub seed: u64,
    pub k: usize,
}

impl GaussianConfig {
    pub fn new(n: usize, g: usize, k: usize, seed: u64) -> Self {
        Self {
            n,
            g,
            sigma: 0.04,
            seed,
            k,
        }
    }
}

fn standard_normal_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// `g` cluster centers uniform in `[0, 1]^2`; agent `a` belongs to cluster
/// `a mod g` and sits at its center plus isotropic noise. The candidates are
/// the agents themselves.
pub fn gen_gaussian_instance(cfg: &GaussianConfig) -> Result<Instance> {
    if cfg.g == 0 || cfg.g > cfg.n {
        return input(format!(
            "need 1 <= g <= n, got g = {}, n = {}",
            cfg.g, cfg.n
        ));
    }
    if !(cfg.sigma >= 0.0 && cfg.sigma.is_finite()) {
        return input("sigma must be finite and nonnegative");
    }
    let mut rng = rng_from(cfg.seed);
    let centers: Vec<[f64; 2]> = (0..cfg.g).map(|_| [rng.random(), rng.random()]).collect();
    let agents: Vec<Vec<f64>> = (0..cfg.n)
        .map(|a| {
            let c = centers[a % cfg.g];
            let (zx, zy) = standard_normal_pair(&mut rng);
            vec![c[0] + cfg.sigma * zx, c[1] + cfg.sigma * zy]
        })
        .collect();
    Instance::euclidean(2, agents.clone(), agents, cfg.k)
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// The two six-agent instances separating the default-coalition axiom from
/// metric PJR, with `X = {x1, x2, x3}`.
///
/// Every agent is at distance 1 from the candidates in its set `D_i` and 2
/// from the rest. Instance 1 has candidates `{a, b, x1, x2, x3}`, agents
/// 1 to 4 near `{a, b, x1}`, agent 5 near `{a, b, x2}` and agent 6 near
/// `{a, b, x3}`. Instance 2 has candidates `{z, x1, x2, x3}`, agents 1 to 3
/// near `{z, x1}`, agent 4 near `{z}`, agent 5 near `{x2}` and agent 6 near
/// `{x3}`. Same-side distances are shortest two-hop paths.
pub fn fixture_incomparability(which: u8) -> Result<(Instance, Selection)> {
    let (names, sets): (&[&str], Vec<Vec<usize>>) = match which {
        1 => (
            &["a", "b", "x1", "x2", "x3"],
            vec![
                vec![0, 1, 2],
                vec![0, 1, 2],
                vec![0, 1, 2],
                vec![0, 1, 2],
                vec![0, 1, 3],
                vec![0, 1, 4],
            ],
        ),
        2 => (
            &["z", "x1", "x2", "x3"],
            vec![
                vec![0, 1],
                vec![0, 1],
                vec![0, 1],
                vec![0],
                vec![2],
                vec![3],
            ],
        ),
        other => return input(format!("unknown incomparability fixture {other}")),
    };
    let m = names.len();
    let profile = ApprovalInstance::new(m, sets, 3)?;
    let inst = embed_approval(&profile)?
        .with_agent_labels(labels(&["1", "2", "3", "4", "5", "6"]))?
        .with_candidate_labels(labels(names))?;
    let x = Selection::new(m - 3..m, m, 3)?;
    Ok((inst, x))
}

/// A compact group of `2q` agents around `a0 = 0` with candidates `a1 = -1`
/// and `a2 = 1`, plus `q` agents split between `b1 = 1000` and
/// `b2 = 1020`; `q = 10`, `k = 3`.
///
/// The compact group has 6 agents at `-1`, 8 at `0` and 6 at `1`.
pub fn fixture_objective_failure() -> Result<Instance> {
    let mut agents = Vec::with_capacity(30);
    for (pos, count) in [(-1.0, 6), (0.0, 8), (1.0, 6), (1000.0, 5), (1020.0, 5)] {
        agents.extend(std::iter::repeat_n(vec![pos], count));
    }
    let candidates = [0.0, -1.0, 1.0, 1000.0, 1020.0].map(|p| vec![p]).to_vec();
    Instance::euclidean(1, agents, candidates, 3)?
        .with_candidate_labels(labels(&["a0", "a1", "a2", "b1", "b2"]))
}

/// A uniformly random size-`k` subset of `0..m`.
pub fn sample_selection(m: usize, k: usize, seed: u64) -> Result<Selection> {
    let mut rng = rng_from(seed);
    sample_selection_with(m, k, &mut rng)
}

pub fn sample_selection_with<R: Rng>(m: usize, k: usize, rng: &mut R) -> Result<Selection> {
    if k == 0 || k > m {
        return input(format!("cannot sample {k} of {m} candidates"));
    }
    let mut pool: Vec<usize> = (0..m).collect();
    let (chosen, _) = pool.partial_shuffle(rng, k);
    Selection::new(chosen.iter().copied(), m, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Distances;

    #[test]
    fn gaussian_round_robin() {
        let inst = gen_gaussian_instance(&GaussianConfig::new(20, 4, 5, 7)).unwrap();
        assert_eq!((inst.n(), inst.m(), inst.k()), (20, 20, 5));
        let flat = GaussianConfig {
            sigma: 0.0,
            ..GaussianConfig::new(10, 3, 2, 7)
        };
        let inst = gen_gaussian_instance(&flat).unwrap();
        for a in 0..10 {
            let same =
                inst.coords(crate::Point::Agent(a)) == inst.coords(crate::Point::Agent(a % 3));
            assert!(same);
        }
        assert_ne!(
            inst.coords(crate::Point::Agent(0)),
            inst.coords(crate::Point::Agent(1))
        );
    }

    #[test]
    fn gaussian_is_deterministic() {
        let cfg = GaussianConfig::new(30, 5, 5, 99);
        assert_eq!(
            gen_gaussian_instance(&cfg).unwrap(),
            gen_gaussian_instance(&cfg).unwrap()
        );
        let other = GaussianConfig { seed: 100, ..cfg };
        assert_ne!(
            gen_gaussian_instance(&cfg).unwrap(),
            gen_gaussian_instance(&other).unwrap()
        );
    }

    #[test]
    fn gaussian_rejects_bad_config() {
        assert!(gen_gaussian_instance(&GaussianConfig::new(3, 4, 1, 0)).is_err());
        assert!(gen_gaussian_instance(&GaussianConfig::new(3, 0, 1, 0)).is_err());
    }

    #[test]
    fn fixture_tables() {
        let (one, x) = fixture_incomparability(1).unwrap();
        assert_eq!(x.centers(), &[2, 3, 4]);
        let near1: [&[usize]; 6] = [
            &[0, 1, 2],
            &[0, 1, 2],
            &[0, 1, 2],
            &[0, 1, 2],
            &[0, 1, 3],
            &[0, 1, 4],
        ];
        for (i, near) in near1.iter().enumerate() {
            for c in 0..5 {
                let want = if near.contains(&c) { 1.0 } else { 2.0 };
                assert_eq!(one.dist(i, c), want, "instance 1, agent {i}, candidate {c}");
            }
        }
        let (two, x) = fixture_incomparability(2).unwrap();
        assert_eq!(x.centers(), &[1, 2, 3]);
        let near2: [&[usize]; 6] = [&[0, 1], &[0, 1], &[0, 1], &[0], &[2], &[3]];
        for (i, near) in near2.iter().enumerate() {
            for c in 0..4 {
                let want = if near.contains(&c) { 1.0 } else { 2.0 };
                assert_eq!(two.dist(i, c), want, "instance 2, agent {i}, candidate {c}");
            }
        }
        assert!(one.validate_metric(true).is_ok());
        assert!(two.validate_metric(true).is_ok());
        assert_eq!(two.candidate_index("z"), Some(0));
        assert!(fixture_incomparability(3).is_err());
    }

    #[test]
    fn objective_fixture_scales() {
        let inst = fixture_objective_failure().unwrap();
        assert_eq!((inst.n(), inst.m(), inst.k()), (30, 5, 3));
        let near: Vec<usize> = (0..30).filter(|&i| inst.dist(i, 0) <= 1.0).collect();
        assert_eq!(near.len(), 20);
        // diameter of the group 2, gap between b1 and b2 20, distance to the group 1000
        assert_eq!(inst.dist(0, 2) - inst.dist(0, 1), 2.0);
        assert_eq!(inst.dist(20, 4), 20.0);
        assert_eq!(inst.dist(10, 3), 1000.0);
    }

    #[test]
    fn selection_sampling() {
        assert_eq!(sample_selection(4, 4, 1).unwrap().centers(), &[0, 1, 2, 3]);
        assert_eq!(
            sample_selection(50, 5, 3).unwrap(),
            sample_selection(50, 5, 3).unwrap()
        );
        assert_ne!(
            sample_selection(50, 5, 3).unwrap(),
            sample_selection(50, 5, 4).unwrap()
        );
        assert!(sample_selection(3, 4, 0).is_err());
    }

    #[test]
    fn selection_sampling_is_uniform() {
        let mut rng = rng_from(2024);
        let mut hits = std::collections::HashMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            let s = sample_selection_with(6, 3, &mut rng).unwrap();
            *hits.entry(s.centers().to_vec()).or_insert(0usize) += 1;
        }
        assert_eq!(hits.len(), 20);
        for (subset, &count) in &hits {
            let freq = count as f64 / draws as f64;
            assert!(
                (freq - 0.05).abs() <= 0.005,
                "{subset:?} drawn with frequency {freq}"
            );
        }
    }

    #[test]
    fn seed_splitting() {
        assert_ne!(split_seed(1, 0), split_seed(1, 1));
        assert_ne!(split_seed(1, 0), split_seed(2, 0));
        assert_eq!(split_seed(5, 9), split_seed(5, 9));
    }
}
