use crate::error::{input, Error, Result};
use crate::table::Distances;

/// The agents in the smallest closed ball around `center` that holds at
/// least `level * n / k` of them. Distance ties at the boundary are all
/// included, so `members` may exceed the quota.
#[derive(Debug, Clone, PartialEq)]
pub struct DefaultCoalition {
    pub center: usize,
    pub level: usize,
    pub radius: f64,
    pub members: Vec<usize>,
}

pub fn default_coalition<D: Distances + ?Sized>(
    d: &D,
    center: usize,
    level: usize,
) -> Result<DefaultCoalition> {
    if center >= d.candidates() {
        return input(format!("candidate {center} is out of range"));
    }
    if level == 0 {
        return input("level must be at least 1");
    }
    if level > d.k() {
        return Err(Error::InfeasibleLevel { level, k: d.k() });
    }
    let need = d.quota().min_size(level);
    let mut dists: Vec<f64> = (0..d.agents()).map(|i| d.dist(i, center)).collect();
    // the need-th smallest distance is the first radius whose ball is large enough
    let (_, &mut radius, _) = dists.select_nth_unstable_by(need - 1, f64::total_cmp);
    let members = (0..d.agents())
        .filter(|&i| d.dist(i, center) <= radius)
        .collect();
    Ok(DefaultCoalition {
        center,
        level,
        radius,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;
    use crate::table::Distances;

    /// Sort-and-prefix reference: grow the ball one agent at a time.
    fn by_prefix(inst: &Instance, c: usize, level: usize) -> (f64, Vec<usize>) {
        let q = inst.quota();
        let mut ds: Vec<(f64, usize)> = (0..inst.n()).map(|i| (inst.dist(i, c), i)).collect();
        ds.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (count, &(r, _)) in ds.iter().enumerate() {
            if q.at_least(count + 1, level) {
                let mut members: Vec<usize> = ds.iter().filter(|p| p.0 <= r).map(|p| p.1).collect();
                members.sort_unstable();
                return (r, members);
            }
        }
        unreachable!("level <= k always reaches the quota")
    }

    #[test]
    fn equidistant_agents_form_one_coalition() {
        let inst = Instance::euclidean(
            2,
            vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![-1.0, 0.0],
                vec![0.0, -1.0],
            ],
            vec![vec![0.0, 0.0], vec![5.0, 5.0]],
            2,
        )
        .unwrap();
        let dc = default_coalition(&inst, 0, 2).unwrap();
        assert_eq!(dc.radius, 1.0);
        assert_eq!(dc.members, vec![0, 1, 2, 3]);
        let dc1 = default_coalition(&inst, 0, 1).unwrap();
        assert_eq!(dc1.radius, 1.0);
        assert_eq!(dc1.members.len(), 4);
    }

    #[test]
    fn matches_prefix_scan_on_grid() {
        // agents on a small integer grid, lots of ties
        let agents: Vec<Vec<f64>> = (0..13)
            .map(|i| vec![(i % 4) as f64, (i / 4) as f64])
            .collect();
        let cands: Vec<Vec<f64>> = vec![
            vec![0.0, 0.0],
            vec![1.5, 1.0],
            vec![3.0, 3.0],
            vec![2.0, 0.0],
        ];
        for k in 1..=4 {
            let inst = Instance::euclidean(2, agents.clone(), cands.clone(), k).unwrap();
            for c in 0..4 {
                for level in 1..=k {
                    let dc = default_coalition(&inst, c, level).unwrap();
                    let (r, members) = by_prefix(&inst, c, level);
                    assert_eq!(dc.radius, r);
                    assert_eq!(dc.members, members);
                    assert!(inst.quota().at_least(dc.members.len(), level));
                }
            }
        }
    }

    #[test]
    fn errors() {
        let inst = Instance::euclidean(1, vec![vec![0.0]], vec![vec![0.0], vec![1.0]], 1).unwrap();
        assert!(matches!(
            default_coalition(&inst, 0, 2),
            Err(Error::InfeasibleLevel { .. })
        ));
        assert!(matches!(
            default_coalition(&inst, 0, 0),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            default_coalition(&inst, 2, 1),
            Err(Error::Input(_))
        ));
    }
}
