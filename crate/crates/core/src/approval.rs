//! Approval-ballot multiwinner elections: exhaustive PJR, the sweep-based
//! PJR+ check, fixed-level PJR+, and the balanced-biclique reduction.

use fixedbitset::FixedBitSet;
use itertools::Itertools;

use crate::error::{input, Error, Result};
use crate::instance::Selection;
use crate::quota::QuotaCmp;
use crate::verdict::{Verdict, Witness};
use crate::Limits;

/// `n` voters, `m` candidates, one approval set per voter, committee size `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApprovalInstance {
    m: usize,
    k: usize,
    approvals: Vec<FixedBitSet>,
}

impl ApprovalInstance {
    pub fn new(m: usize, approvals: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        if approvals.is_empty() {
            return input("approval instance needs at least one voter");
        }
        if k == 0 || k > m {
            return input(format!("k = {k} must lie in 1..={m}"));
        }
        let mut sets = Vec::with_capacity(approvals.len());
        for (v, a) in approvals.iter().enumerate() {
            let mut set = FixedBitSet::with_capacity(m);
            for &c in a {
                if c >= m {
                    return input(format!("voter {v} approves unknown candidate {c}"));
                }
                set.insert(c);
            }
            sets.push(set);
        }
        Ok(Self {
            m,
            k,
            approvals: sets,
        })
    }

    pub fn voters(&self) -> usize {
        self.approvals.len()
    }

    pub fn candidates(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn quota(&self) -> QuotaCmp {
        QuotaCmp::new(self.voters(), self.k)
    }

    pub fn approves(&self, voter: usize, candidate: usize) -> bool {
        self.approvals[voter].contains(candidate)
    }

    /// Approval set of `voter`, ascending.
    pub fn approval_set(&self, voter: usize) -> Vec<usize> {
        self.approvals[voter].ones().collect()
    }

    pub fn approval_sets(&self) -> Vec<Vec<usize>> {
        (0..self.voters()).map(|v| self.approval_set(v)).collect()
    }

    fn selection_mask(&self, x: &Selection) -> Result<FixedBitSet> {
        if x.universe() != self.m || x.len() != self.k {
            return input("selection does not match the approval instance");
        }
        let mut mask = FixedBitSet::with_capacity(self.m);
        for &c in x.centers() {
            mask.insert(c);
        }
        Ok(mask)
    }

    fn union_of(&self, group: &[usize]) -> FixedBitSet {
        let mut u = FixedBitSet::with_capacity(self.m);
        for &v in group {
            u.union_with(&self.approvals[v]);
        }
        u
    }
}

fn cap(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        return Err(Error::Size {
            what,
            actual,
            limit,
        });
    }
    Ok(())
}

/// Exhaustive PJR check over all voter groups.
///
/// Groups are scanned by size, then lexicographically; the witness reports
/// the first violating group and the smallest level it is denied.
pub fn verify_pjr_bruteforce(
    inst: &ApprovalInstance,
    x: &Selection,
    limits: &Limits,
) -> Result<Verdict> {
    let n = inst.voters();
    cap("voter count", n, limits.max_exhaustive_agents)?;
    let xmask = inst.selection_mask(x)?;
    let q = inst.quota();
    for size in 1..=n {
        let entitled = q.level_of(size);
        if entitled == 0 {
            continue;
        }
        for group in (0..n).combinations(size) {
            let mut common = inst.approvals[group[0]].clone();
            for &v in &group[1..] {
                common.intersect_with(&inst.approvals[v]);
            }
            let cohesion = common.count_ones(..);
            let level = entitled.min(cohesion);
            if level == 0 {
                continue;
            }
            let covered = inst.union_of(&group).intersection_count(&xmask);
            if covered < level {
                return Ok(Verdict::Violated(Witness {
                    center: None,
                    level: covered + 1,
                    radius: None,
                    coalition: Some(group),
                    covered: None,
                }));
            }
        }
    }
    Ok(Verdict::Satisfied)
}

/// PJR+ by sweeping subsets `Y` of the committee.
///
/// For each proper `Y` (by size, then lexicographic) the voters approving
/// nothing in `X \ Y` are collected; an unselected candidate approved by at
/// least `(|Y| + 1) * n / k` of them is a violation.
pub fn verify_pjr_plus_sweep(
    inst: &ApprovalInstance,
    x: &Selection,
    limits: &Limits,
) -> Result<Verdict> {
    let k = inst.k();
    cap("committee size", k, limits.max_sweep_k)?;
    let xmask = inst.selection_mask(x)?;
    let q = inst.quota();
    let centers = x.centers();
    let unselected: Vec<usize> = x.unselected().collect();
    for size in 0..k {
        for ypos in (0..k).combinations(size) {
            let mut rest = xmask.clone();
            for &p in &ypos {
                rest.set(centers[p], false);
            }
            let free: Vec<usize> = (0..inst.voters())
                .filter(|&v| inst.approvals[v].is_disjoint(&rest))
                .collect();
            if !q.at_least(free.len(), size + 1) {
                continue;
            }
            for &c in &unselected {
                let backers: Vec<usize> = free
                    .iter()
                    .copied()
                    .filter(|&v| inst.approves(v, c))
                    .collect();
                if q.at_least(backers.len(), size + 1) {
                    return Ok(Verdict::Violated(Witness {
                        center: Some(c),
                        level: size + 1,
                        radius: None,
                        coalition: Some(backers),
                        covered: Some(ypos.iter().map(|&p| centers[p]).collect()),
                    }));
                }
            }
        }
    }
    Ok(Verdict::Satisfied)
}

/// Fixed-level PJR+: is there an unselected `c` and a group of its approvers
/// of size at least `level * n / k` that together approve fewer than `level`
/// committee members?
///
/// Shrinking a violating group keeps it violating as long as it stays above
/// the quota, so only groups of the minimum entitled size are enumerated.
pub fn verify_fixed_ell_pjr_plus_bruteforce(
    inst: &ApprovalInstance,
    x: &Selection,
    level: usize,
    limits: &Limits,
) -> Result<Verdict> {
    if level == 0 || level > inst.k() {
        return input(format!("level {level} must lie in 1..={}", inst.k()));
    }
    let xmask = inst.selection_mask(x)?;
    let size = inst.quota().min_size(level);
    for c in x.unselected() {
        let backers: Vec<usize> = (0..inst.voters())
            .filter(|&v| inst.approves(v, c))
            .collect();
        cap(
            "approver count",
            backers.len(),
            limits.max_exhaustive_agents,
        )?;
        if backers.len() < size {
            continue;
        }
        for group in backers.iter().copied().combinations(size) {
            let covered = inst.union_of(&group).intersection_count(&xmask);
            if covered < level {
                return Ok(Verdict::Violated(Witness {
                    center: Some(c),
                    level,
                    radius: None,
                    coalition: Some(group),
                    covered: None,
                }));
            }
        }
    }
    Ok(Verdict::Satisfied)
}

/// Bipartite graph on vertex sets `0..left` and `0..right`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    adj: Vec<FixedBitSet>,
}

impl BipartiteGraph {
    pub fn new(
        left: usize,
        right: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut adj = vec![FixedBitSet::with_capacity(right); left];
        for (u, w) in edges {
            if u >= left || w >= right {
                return input(format!("edge ({u}, {w}) references a missing vertex"));
            }
            adj[u].insert(w);
        }
        Ok(Self { left, right, adj })
    }

    pub fn complete(left: usize, right: usize) -> Self {
        let mut full = FixedBitSet::with_capacity(right);
        full.insert_range(..);
        Self {
            left,
            right,
            adj: vec![full; left],
        }
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.adj[u].contains(w)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.left)
            .flat_map(|u| self.adj[u].ones().map(move |w| (u, w)))
            .collect()
    }
}

/// Output of [`biclique_reduction`].
#[derive(Debug, Clone)]
pub struct BicliqueReduction {
    /// Graph after padding to `|L| = |R| = 2t' - 1`.
    pub padded: BipartiteGraph,
    /// Biclique size `t'` sought in the padded graph.
    pub target: usize,
    pub instance: ApprovalInstance,
    pub selection: Selection,
    pub level: usize,
}

/// Balanced-biclique instance `(G, t)` to a fixed-level PJR+ instance.
///
/// Both sides are first padded with isolated vertices to
/// `n' = max(|L|, |R|, 2t - 1)`, then `p = n' - 2t + 1` universal vertices
/// are added per side, giving `|L| = |R| = 2t' - 1` with `t' = t + p`.
/// Voter `v_u` approves `z` plus every `c_w` with `{u, w}` not an edge;
/// the committee is all `c_w` and the level is `t'`. Candidate `z` has the
/// last index.
pub fn biclique_reduction(g: &BipartiteGraph, t: usize) -> Result<BicliqueReduction> {
    if t == 0 {
        return input("biclique size must be at least 1");
    }
    let n_pad = g.left.max(g.right).max(2 * t - 1);
    let p = n_pad - (2 * t - 1);
    let target = t + p;
    let side = n_pad + p;
    debug_assert_eq!(side, 2 * target - 1);

    let mut edges = g.edges();
    for extra in n_pad..side {
        edges.extend((0..side).map(|w| (extra, w)));
        edges.extend((0..side).map(|u| (u, extra)));
    }
    let padded = BipartiteGraph::new(side, side, edges)?;

    let z = side;
    let approvals: Vec<Vec<usize>> = (0..side)
        .map(|u| {
            let mut a: Vec<usize> = (0..side).filter(|&w| !padded.has_edge(u, w)).collect();
            a.push(z);
            a
        })
        .collect();
    let instance = ApprovalInstance::new(side + 1, approvals, side)?;
    let selection = Selection::new(0..side, side + 1, side)?;
    Ok(BicliqueReduction {
        padded,
        target,
        instance,
        selection,
        level: target,
    })
}

/// Some `t x t` complete bipartite subgraph, by exhaustive search over
/// left `t`-subsets.
pub fn find_balanced_biclique_bruteforce(
    g: &BipartiteGraph,
    t: usize,
    limits: &Limits,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    cap("left side", g.left, limits.max_biclique_side)?;
    cap("right side", g.right, limits.max_biclique_side)?;
    if t == 0 {
        return Ok(Some((vec![], vec![])));
    }
    if t > g.left || t > g.right {
        return Ok(None);
    }
    for left in (0..g.left).combinations(t) {
        let mut common = g.adj[left[0]].clone();
        for &u in &left[1..] {
            common.intersect_with(&g.adj[u]);
        }
        if common.count_ones(..) >= t {
            return Ok(Some((left, common.ones().take(t).collect())));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance_one_profile() -> (ApprovalInstance, Selection) {
        // candidates: a=0, b=1, x1=2, x2=3, x3=4
        let approvals = vec![
            vec![0, 1, 2],
            vec![0, 1, 2],
            vec![0, 1, 2],
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 1, 4],
        ];
        let inst = ApprovalInstance::new(5, approvals, 3).unwrap();
        let x = Selection::new([2, 3, 4], 5, 3).unwrap();
        (inst, x)
    }

    #[test]
    fn pjr_fails_on_instance_one_profile() {
        let (inst, x) = instance_one_profile();
        let v = verify_pjr_bruteforce(&inst, &x, &Limits::default()).unwrap();
        let w = v.witness().expect("violation");
        assert_eq!(w.level, 2);
        assert_eq!(w.coalition.as_deref(), Some(&[0, 1, 2, 3][..]));
    }

    #[test]
    fn pjr_plus_fails_on_instance_one_profile() {
        let (inst, x) = instance_one_profile();
        let v = verify_pjr_plus_sweep(&inst, &x, &Limits::default()).unwrap();
        assert!(v.is_violated());
        let w = v.witness().unwrap();
        assert_eq!(w.center, Some(0));
        assert_eq!(w.covered.as_deref(), Some(&[2][..]));
    }

    #[test]
    fn full_committee_satisfies_everything() {
        let inst = ApprovalInstance::new(3, vec![vec![0], vec![1, 2], vec![]], 3).unwrap();
        let x = Selection::all(3);
        let lim = Limits::default();
        assert!(verify_pjr_bruteforce(&inst, &x, &lim)
            .unwrap()
            .is_satisfied());
        assert!(verify_pjr_plus_sweep(&inst, &x, &lim)
            .unwrap()
            .is_satisfied());
        for l in 1..=3 {
            assert!(verify_fixed_ell_pjr_plus_bruteforce(&inst, &x, l, &lim)
                .unwrap()
                .is_satisfied());
        }
    }

    #[test]
    fn unanimous_approval_satisfies_pjr_plus() {
        let inst = ApprovalInstance::new(4, vec![vec![0, 1, 2, 3]; 5], 2).unwrap();
        let x = Selection::new([1, 3], 4, 2).unwrap();
        assert!(verify_pjr_plus_sweep(&inst, &x, &Limits::default())
            .unwrap()
            .is_satisfied());
    }

    #[test]
    fn caps_are_enforced() {
        let inst = ApprovalInstance::new(2, vec![vec![0]; 17], 1).unwrap();
        let x = Selection::new([1], 2, 1).unwrap();
        assert!(matches!(
            verify_pjr_bruteforce(&inst, &x, &Limits::default()),
            Err(Error::Size { .. })
        ));
        let lim = Limits {
            max_exhaustive_agents: 20,
            ..Limits::default()
        };
        assert!(verify_pjr_bruteforce(&inst, &x, &lim).is_ok());
    }

    #[test]
    fn fixed_level_rejects_zero() {
        let (inst, x) = instance_one_profile();
        assert!(verify_fixed_ell_pjr_plus_bruteforce(&inst, &x, 0, &Limits::default()).is_err());
    }

    #[test]
    fn reduction_of_k33() {
        let g = BipartiteGraph::complete(3, 3);
        let red = biclique_reduction(&g, 2).unwrap();
        assert_eq!(red.target, 2);
        assert_eq!(red.level, 2);
        assert_eq!(red.instance.voters(), 3);
        assert_eq!(red.instance.k(), 3);
        assert_eq!(red.selection.centers(), &[0, 1, 2]);
        for v in 0..3 {
            assert_eq!(red.instance.approval_set(v), vec![3]);
        }
        let v = verify_fixed_ell_pjr_plus_bruteforce(
            &red.instance,
            &red.selection,
            red.level,
            &Limits::default(),
        )
        .unwrap();
        assert!(v.is_violated());
    }

    #[test]
    fn reduction_of_edgeless_graph() {
        let g = BipartiteGraph::new(3, 3, []).unwrap();
        let red = biclique_reduction(&g, 2).unwrap();
        for v in 0..3 {
            assert_eq!(red.instance.approval_set(v), vec![0, 1, 2, 3]);
        }
        let v = verify_fixed_ell_pjr_plus_bruteforce(
            &red.instance,
            &red.selection,
            2,
            &Limits::default(),
        )
        .unwrap();
        assert!(v.is_satisfied());
    }

    #[test]
    fn reduction_with_unit_target() {
        let lim = Limits::default();
        let with_edge = BipartiteGraph::new(2, 3, [(1, 2)]).unwrap();
        let red = biclique_reduction(&with_edge, 1).unwrap();
        assert_eq!(red.padded.left(), 2 * red.target - 1);
        assert!(verify_fixed_ell_pjr_plus_bruteforce(
            &red.instance,
            &red.selection,
            red.level,
            &lim
        )
        .unwrap()
        .is_violated());
        let edgeless = BipartiteGraph::new(2, 3, []).unwrap();
        let red = biclique_reduction(&edgeless, 1).unwrap();
        assert!(verify_fixed_ell_pjr_plus_bruteforce(
            &red.instance,
            &red.selection,
            red.level,
            &lim
        )
        .unwrap()
        .is_satisfied());
    }

    #[test]
    fn biclique_search() {
        let lim = Limits::default();
        let k33 = BipartiteGraph::complete(3, 3);
        assert_eq!(
            find_balanced_biclique_bruteforce(&k33, 3, &lim).unwrap(),
            Some((vec![0, 1, 2], vec![0, 1, 2]))
        );
        let empty = BipartiteGraph::new(3, 3, []).unwrap();
        assert_eq!(
            find_balanced_biclique_bruteforce(&empty, 1, &lim).unwrap(),
            None
        );
        // u0 - w0 - u1
        let path = BipartiteGraph::new(2, 1, [(0, 0), (1, 0)]).unwrap();
        assert_eq!(
            find_balanced_biclique_bruteforce(&path, 2, &lim).unwrap(),
            None
        );
        assert!(find_balanced_biclique_bruteforce(&path, 1, &lim)
            .unwrap()
            .is_some());
        let big = BipartiteGraph::new(17, 1, []).unwrap();
        assert!(find_balanced_biclique_bruteforce(&big, 1, &lim).is_err());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(BipartiteGraph::new(2, 2, [(2, 0)]).is_err());
        assert!(ApprovalInstance::new(2, vec![vec![2]], 1).is_err());
    }
}
