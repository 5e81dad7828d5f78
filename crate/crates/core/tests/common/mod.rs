#![allow(dead_code)]

use propaudit::approval::{ApprovalInstance, BipartiteGraph};
use propaudit::oracle::oracle_mpjr;
use propaudit::verify::{verify_dc_mpjr_plus, verify_mpjr_plus_smallk};
use propaudit::{Instance, Limits, Selection};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Integer points on a line.
    Line,
    /// Points in the unit square, sometimes snapped to a coarse grid.
    Plane,
    /// Shortest-path closure of a random weighted complete graph.
    Graph,
}

pub const SHAPES: [Shape; 3] = [Shape::Line, Shape::Plane, Shape::Graph];

/// Random instance with exact integer distances (line or graph) or
/// arbitrary floats (plane).
pub fn random_instance<R: Rng>(
    rng: &mut R,
    shape: Shape,
    n: usize,
    m: usize,
    k: usize,
) -> Instance {
    match shape {
        Shape::Line => {
            let span = rng.random_range(2..=12);
            let mut pt = |_| vec![rng.random_range(0..=span) as f64];
            let agents = (0..n).map(&mut pt).collect();
            let cands = (0..m).map(&mut pt).collect();
            Instance::euclidean(1, agents, cands, k).unwrap()
        }
        Shape::Plane => {
            let grid = rng.random_bool(0.5);
            let mut pt = |_| {
                (0..2)
                    .map(|_| {
                        let v: f64 = rng.random();
                        if grid {
                            (v * 4.0).round() / 4.0
                        } else {
                            v
                        }
                    })
                    .collect::<Vec<f64>>()
            };
            let agents = (0..n).map(&mut pt).collect();
            let cands = (0..m).map(&mut pt).collect();
            Instance::euclidean(2, agents, cands, k).unwrap()
        }
        Shape::Graph => {
            let size = n + m;
            let top = rng.random_range(1..=6);
            let mut d = vec![vec![0.0f64; size]; size];
            for a in 0..size {
                for b in a + 1..size {
                    let w = rng.random_range(1..=top) as f64;
                    d[a][b] = w;
                    d[b][a] = w;
                }
            }
            for via in 0..size {
                for a in 0..size {
                    for b in 0..size {
                        let alt = d[a][via] + d[via][b];
                        if alt < d[a][b] {
                            d[a][b] = alt;
                        }
                    }
                }
            }
            let agents = (0..n).map(|i| format!("p{i}")).collect();
            let cands = (0..m).map(|c| format!("c{c}")).collect();
            Instance::explicit(agents, cands, d, k).unwrap()
        }
    }
}

/// Random small instance with `n <= max_n`, `m <= max_m`, `k <= max_k`.
pub fn random_small<R: Rng>(rng: &mut R, max_n: usize, max_m: usize, max_k: usize) -> Instance {
    let shape = *SHAPES.choose(rng).unwrap();
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(1..=max_m);
    let k = rng.random_range(1..=max_k.min(m));
    random_instance(rng, shape, n, m, k)
}

pub fn random_selection<R: Rng>(rng: &mut R, m: usize, k: usize) -> Selection {
    propaudit::gen::sample_selection_with(m, k, rng).unwrap()
}

pub fn random_profile<R: Rng>(
    rng: &mut R,
    max_n: usize,
    max_m: usize,
) -> (ApprovalInstance, Selection) {
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(1..=max_m);
    let k = rng.random_range(1..=m);
    let density: f64 = rng.random_range(0.1..0.9);
    let approvals = (0..n)
        .map(|_| (0..m).filter(|_| rng.random_bool(density)).collect())
        .collect();
    let inst = ApprovalInstance::new(m, approvals, k).unwrap();
    let x = random_selection(rng, m, k);
    (inst, x)
}

pub fn random_graph<R: Rng>(rng: &mut R, max_side: usize) -> BipartiteGraph {
    let left = rng.random_range(1..=max_side);
    let right = rng.random_range(1..=max_side);
    let density: f64 = rng.random_range(0.2..0.95);
    let edges: Vec<(usize, usize)> = (0..left)
        .flat_map(|u| (0..right).map(move |w| (u, w)))
        .filter(|_| rng.random_bool(density))
        .collect();
    BipartiteGraph::new(left, right, edges).unwrap()
}

/// mPJR+ implies DC-mPJR+ at the same stretch, and at stretch 1 it implies
/// metric PJR. Panics on a counterexample.
pub fn assert_chain(inst: &Instance, x: &Selection, gamma: f64) {
    let limits = Limits::default();
    let plus = verify_mpjr_plus_smallk(inst, x, gamma, &limits).unwrap();
    if plus.is_violated() {
        return;
    }
    let dc = verify_dc_mpjr_plus(inst, x, gamma).unwrap();
    assert!(
        dc.is_satisfied(),
        "mPJR+ holds but DC-mPJR+ fails at gamma {gamma}: {dc:?}\n{inst:?}\n{x:?}"
    );
    if gamma == 1.0 && inst.n() <= limits.max_exhaustive_agents {
        let mpjr = oracle_mpjr(inst, x, &limits).unwrap();
        assert!(
            mpjr.is_satisfied(),
            "mPJR+ holds but mPJR fails: {mpjr:?}\n{inst:?}\n{x:?}"
        );
    }
}
