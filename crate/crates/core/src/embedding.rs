//! Approval profiles as metric instances.
//!
//! Voters and candidates become the points of the universe. A voter is at
//! distance 1 from each approved candidate and 2 from every other one; two
//! points on the same side are at their shortest two-hop distance through
//! the other side (2, 3 or 4). For any radius in `[1, 2)` the closed balls
//! around voters recover exactly the approval sets.

use crate::approval::ApprovalInstance;
use crate::error::Result;
use crate::instance::Instance;

/// Embeds an approval profile as an explicit metric instance with agents
/// labelled `v0, v1, ...` and candidates `c0, c1, ...`.
pub fn embed_approval(inst: &ApprovalInstance) -> Result<Instance> {
    let (n, m) = (inst.voters(), inst.candidates());
    let cross = |v: usize, c: usize| if inst.approves(v, c) { 1.0 } else { 2.0 };
    let size = n + m;
    let mut matrix = vec![vec![0.0; size]; size];
    for v in 0..n {
        for c in 0..m {
            matrix[v][n + c] = cross(v, c);
            matrix[n + c][v] = cross(v, c);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let d = (0..m)
                .map(|c| cross(a, c) + cross(b, c))
                .fold(f64::INFINITY, f64::min);
            matrix[a][b] = d;
            matrix[b][a] = d;
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let d = (0..n)
                .map(|v| cross(v, a) + cross(v, b))
                .fold(f64::INFINITY, f64::min);
            matrix[n + a][n + b] = d;
            matrix[n + b][n + a] = d;
        }
    }
    Instance::explicit(
        (0..n).map(|v| format!("v{v}")).collect(),
        (0..m).map(|c| format!("c{c}")).collect(),
        matrix,
        inst.k(),
    )
}
