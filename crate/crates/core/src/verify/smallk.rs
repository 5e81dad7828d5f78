use itertools::Itertools;

use super::{check_gamma, check_selection};
use crate::error::{Error, Result};
use crate::instance::Selection;
use crate::table::Distances;
use crate::verdict::{Verdict, Witness};
use crate::Limits;

/// Decides `gamma`-mPJR+ by an interval sweep over every proper subset `Y`
/// of the selection.
///
/// For fixed `Y` and unselected `c`, agent `i` can join a coalition at radius
/// `r` exactly when `d(i, c) <= r` and `gamma * r < u_i`, where `u_i` is its
/// distance to the nearest center outside `Y`. Scaling by `gamma`, each agent
/// is live on `[gamma * d(i, c), u_i)`; the largest overlap is compared with
/// `(|Y| + 1) n / k`. Upper endpoints are processed before lower ones at equal
/// keys, so the half-open intervals never overlap spuriously.
///
/// The events come from merging two presorted lists (agents by `d(i, c)`,
/// fixed per `c`; agents by `u_i`, fixed per `Y`), which yields the same
/// order as sorting them, in linear time per pair.
pub fn verify_mpjr_plus_smallk<D: Distances + ?Sized>(
    d: &D,
    x: &Selection,
    gamma: f64,
    limits: &Limits,
) -> Result<Verdict> {
    check_gamma(gamma)?;
    check_selection(d, x)?;
    let k = d.k();
    if k > limits.max_sweep_k {
        return Err(Error::Size {
            what: "k",
            actual: k,
            limit: limits.max_sweep_k,
        });
    }
    let n = d.agents();
    let q = d.quota();
    let centers = x.centers();
    let unselected: Vec<usize> = x.unselected().collect();
    if unselected.is_empty() {
        return Ok(Verdict::Satisfied);
    }
    let by_dist: Vec<Vec<u32>> = unselected
        .iter()
        .map(|&c| d.agents_by_distance(c).into_owned())
        .collect();
    // lower[c][i] = gamma * d(i, c), by agent index
    let lower: Vec<Vec<f64>> = unselected
        .iter()
        .map(|&c| (0..n).map(|i| gamma * d.dist(i, c)).collect())
        .collect();

    // center_dist[i * k + p] = d(i, centers[p]); nearest[i * k..] lists
    // positions by that distance
    let center_dist: Vec<f64> = (0..n)
        .flat_map(|i| centers.iter().map(move |&c| d.dist(i, c)))
        .collect();
    let nearest: Vec<u32> = (0..n)
        .flat_map(|i| {
            let row = &center_dist[i * k..(i + 1) * k];
            let mut order: Vec<u32> = (0..k as u32).collect();
            order.sort_by(|&a, &b| row[a as usize].total_cmp(&row[b as usize]));
            order
        })
        .collect();

    let mut upper = vec![0.0f64; n];
    let mut by_upper: Vec<u32> = (0..n as u32).collect();
    let mut in_y = vec![false; k];

    for size in 0..k {
        let need = size + 1;
        let need_agents = q.min_size(need);
        if need_agents > n {
            break;
        }
        for y in (0..k).combinations(size) {
            in_y.iter_mut().for_each(|b| *b = false);
            for &p in &y {
                in_y[p] = true;
            }
            for (i, u) in upper.iter_mut().enumerate() {
                let row = &nearest[i * k..(i + 1) * k];
                *u = row
                    .iter()
                    .find(|&&p| !in_y[p as usize])
                    .map_or(f64::INFINITY, |&p| center_dist[i * k + p as usize]);
            }
            by_upper.sort_unstable_by(|&a, &b| {
                upper[a as usize]
                    .total_cmp(&upper[b as usize])
                    .then(a.cmp(&b))
            });

            for ((&c, order), low) in unselected.iter().zip(&by_dist).zip(&lower) {
                let live = |i: usize| low[i] < upper[i];
                let alive = low.iter().zip(&upper).filter(|(l, u)| l < u).count();
                if alive < need_agents {
                    continue;
                }
                let (mut a, mut b) = (0usize, 0usize);
                let mut count = 0usize;
                while a < n && count + (n - a) >= need_agents {
                    let i = order[a] as usize;
                    a += 1;
                    if !live(i) {
                        continue;
                    }
                    let key = low[i];
                    while b < n {
                        let j = by_upper[b] as usize;
                        if upper[j] > key {
                            break;
                        }
                        if live(j) {
                            count -= 1;
                        }
                        b += 1;
                    }
                    count += 1;
                    if count >= need_agents {
                        let coalition: Vec<usize> = (0..n)
                            .filter(|&j| live(j) && low[j] <= key && upper[j] > key)
                            .collect();
                        let radius = coalition.iter().map(|&j| d.dist(j, c)).fold(0.0, f64::max);
                        return Ok(Verdict::Violated(Witness {
                            center: Some(c),
                            level: need,
                            radius: Some(radius),
                            coalition: Some(coalition),
                            covered: Some(y.iter().map(|&p| centers[p]).collect()),
                        }));
                    }
                }
            }
        }
    }
    Ok(Verdict::Satisfied)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;

    fn line(agents: &[f64], cands: &[f64], k: usize) -> Instance {
        Instance::euclidean(
            1,
            agents.iter().map(|&a| vec![a]).collect(),
            cands.iter().map(|&c| vec![c]).collect(),
            k,
        )
        .unwrap()
    }

    #[test]
    fn full_selection() {
        let inst = line(&[0.0, 1.0], &[0.0, 1.0], 2);
        let v =
            verify_mpjr_plus_smallk(&inst, &Selection::all(2), 1.0, &Limits::default()).unwrap();
        assert!(v.is_satisfied());
    }

    #[test]
    fn uncovered_cluster() {
        let inst = line(&[0.0, 0.0, 10.0, 10.0], &[0.0, 10.0, 11.0], 2);
        let x = Selection::new([1, 2], 3, 2).unwrap();
        let v = verify_mpjr_plus_smallk(&inst, &x, 1.0, &Limits::default()).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.center, Some(0));
        assert_eq!(w.level, 1);
        assert_eq!(w.radius, Some(0.0));
        assert_eq!(w.coalition.as_deref(), Some(&[0, 1][..]));
        assert_eq!(w.covered.as_deref(), Some(&[][..]));
    }

    #[test]
    fn touching_intervals_do_not_overlap() {
        // agent 0 is live on [1, 3), agent 1 on [3, 7)
        let inst = line(&[1.0, -3.0], &[0.0, 4.0], 1);
        let x = Selection::new([1], 2, 1).unwrap();
        let v = verify_mpjr_plus_smallk(&inst, &x, 1.0, &Limits::default()).unwrap();
        assert!(v.is_satisfied());
        let inst = line(&[1.0, -2.5], &[0.0, 4.0], 1);
        let v = verify_mpjr_plus_smallk(&inst, &x, 1.0, &Limits::default()).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.radius, Some(2.5));
        assert_eq!(w.coalition.as_deref(), Some(&[0, 1][..]));
    }

    #[test]
    fn enforces_cap() {
        let inst = line(&[0.0, 1.0], &[0.0, 1.0, 2.0], 2);
        let x = Selection::new([0, 1], 3, 2).unwrap();
        let limits = Limits {
            max_sweep_k: 1,
            ..Limits::default()
        };
        assert!(matches!(
            verify_mpjr_plus_smallk(&inst, &x, 1.0, &limits),
            Err(Error::Size { what: "k", .. })
        ));
    }
}
