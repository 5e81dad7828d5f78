//! Clustering instances, center selections, and the closed-ball queries
//! every verifier is built from.
//!
//! An instance holds `n` agents (a multiset: duplicate positions are
//! distinct agents), `m` candidate centers, a target `k`, and one of two
//! metric backends. Euclidean distances are computed on demand in
//! `O(dim)`; explicit distances are read from a dense symmetric matrix
//! whose rows list agents first, then candidates.

use crate::error::{input, Error, MetricViolation, Result};
use crate::quota::QuotaCmp;

/// Metric backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    /// Row-major coordinates, agents then candidates, `dim` values each.
    Euclidean { dim: usize, coords: Vec<f64> },
    /// Row-major `(n + m) x (n + m)` matrix, agents then candidates.
    Explicit { matrix: Vec<f64> },
}

/// A point of the universe, addressed by side and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Point {
    Agent(usize),
    Candidate(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    m: usize,
    k: usize,
    metric: Metric,
    agent_labels: Vec<String>,
    candidate_labels: Vec<String>,
    tie_epsilon: f64,
}

fn index_labels(count: usize) -> Vec<String> {
    (0..count).map(|i| i.to_string()).collect()
}

fn check_sizes(n: usize, m: usize, k: usize) -> Result<()> {
    if n == 0 {
        return input("instance needs at least one agent");
    }
    if k == 0 || k > m {
        return input(format!("k = {k} must lie in 1..={m}"));
    }
    Ok(())
}

impl Instance {
    /// Builds a Euclidean instance from coordinate rows.
    pub fn euclidean(
        dim: usize,
        agents: Vec<Vec<f64>>,
        candidates: Vec<Vec<f64>>,
        k: usize,
    ) -> Result<Self> {
        let (n, m) = (agents.len(), candidates.len());
        check_sizes(n, m, k)?;
        if dim == 0 {
            return input("euclidean dimension must be positive");
        }
        let mut coords = Vec::with_capacity((n + m) * dim);
        for (row, p) in agents.iter().chain(candidates.iter()).enumerate() {
            if p.len() != dim {
                return input(format!(
                    "point {row} has {} coordinates, expected {dim}",
                    p.len()
                ));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return input(format!("point {row} has a non-finite coordinate"));
            }
            coords.extend_from_slice(p);
        }
        Ok(Self {
            n,
            m,
            k,
            metric: Metric::Euclidean { dim, coords },
            agent_labels: index_labels(n),
            candidate_labels: index_labels(m),
            tie_epsilon: 0.0,
        })
    }

    /// Builds an explicit-matrix instance. The matrix is checked for shape,
    /// finiteness, nonnegativity, zero diagonal, and symmetry; the triangle
    /// inequality is not checked here (see [`Instance::validate_metric`]).
    pub fn explicit(
        agent_labels: Vec<String>,
        candidate_labels: Vec<String>,
        matrix: Vec<Vec<f64>>,
        k: usize,
    ) -> Result<Self> {
        let (n, m) = (agent_labels.len(), candidate_labels.len());
        check_sizes(n, m, k)?;
        validate_matrix(&matrix, false).map_err(Error::Metric)?;
        if matrix.len() != n + m {
            return Err(Error::Metric(MetricViolation::Shape {
                rows: matrix.len(),
                expected: n + m,
            }));
        }
        Ok(Self {
            n,
            m,
            k,
            metric: Metric::Explicit {
                matrix: matrix.into_iter().flatten().collect(),
            },
            agent_labels,
            candidate_labels,
            tie_epsilon: 0.0,
        })
    }

    pub fn with_agent_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return input("agent label count does not match agent count");
        }
        self.agent_labels = labels;
        Ok(self)
    }

    pub fn with_candidate_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.m {
            return input("candidate label count does not match candidate count");
        }
        self.candidate_labels = labels;
        Ok(self)
    }

    /// Snaps every distance to the nearest multiple of `eps` so that values
    /// within noise of each other group as ties. `0` (the default) disables it.
    pub fn with_tie_epsilon(mut self, eps: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return input("tie epsilon must be finite and nonnegative");
        }
        self.tie_epsilon = eps;
        Ok(self)
    }

    /// Same instance with a different target `k`.
    pub fn with_k(mut self, k: usize) -> Result<Self> {
        check_sizes(self.n, self.m, k)?;
        self.k = k;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn quota(&self) -> QuotaCmp {
        QuotaCmp::new(self.n, self.k)
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn tie_epsilon(&self) -> f64 {
        self.tie_epsilon
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self.metric, Metric::Euclidean { .. })
    }

    pub fn agent_labels(&self) -> &[String] {
        &self.agent_labels
    }

    pub fn candidate_labels(&self) -> &[String] {
        &self.candidate_labels
    }

    pub fn candidate_index(&self, label: &str) -> Option<usize> {
        self.candidate_labels.iter().position(|l| l == label)
    }

    fn row(&self, p: Point) -> Result<usize> {
        match p {
            Point::Agent(i) if i < self.n => Ok(i),
            Point::Candidate(c) if c < self.m => Ok(self.n + c),
            _ => input(format!("point {p:?} is out of range")),
        }
    }

    /// Coordinates of a point (Euclidean backend only).
    pub fn coords(&self, p: Point) -> Option<&[f64]> {
        let row = self.row(p).ok()?;
        match &self.metric {
            Metric::Euclidean { dim, coords } => Some(&coords[row * dim..(row + 1) * dim]),
            Metric::Explicit { .. } => None,
        }
    }

    #[inline]
    fn raw(&self, a: usize, b: usize) -> f64 {
        match &self.metric {
            Metric::Euclidean { dim, coords } => {
                let (pa, pb) = (
                    &coords[a * dim..(a + 1) * dim],
                    &coords[b * dim..(b + 1) * dim],
                );
                pa.iter()
                    .zip(pb)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            }
            Metric::Explicit { matrix } => matrix[a * (self.n + self.m) + b],
        }
    }

    #[inline]
    fn snapped(&self, d: f64) -> f64 {
        if self.tie_epsilon > 0.0 {
            (d / self.tie_epsilon).round() * self.tie_epsilon
        } else {
            d
        }
    }

    /// Distance between two points of the universe.
    pub fn distance(&self, a: Point, b: Point) -> Result<f64> {
        let (ra, rb) = (self.row(a)?, self.row(b)?);
        if ra == rb {
            return Ok(0.0);
        }
        Ok(self.snapped(self.raw(ra, rb)))
    }

    /// Agent-to-candidate distance. Panics on out-of-range indices.
    #[inline]
    pub fn agent_candidate(&self, agent: usize, candidate: usize) -> f64 {
        assert!(agent < self.n && candidate < self.m);
        self.snapped(self.raw(agent, self.n + candidate))
    }

    /// `A_r(S)`: candidates within closed distance `r` of some agent of `S`,
    /// in increasing index order.
    pub fn group_approval_set(&self, group: &[usize], r: f64) -> Result<Vec<usize>> {
        if group.is_empty() {
            return input("group approval set of an empty group");
        }
        if r.is_nan() || r < 0.0 {
            return input("radius must be nonnegative");
        }
        if let Some(&i) = group.iter().find(|&&i| i >= self.n) {
            return input(format!("agent {i} is out of range"));
        }
        Ok((0..self.m)
            .filter(|&c| group.iter().any(|&i| self.agent_candidate(i, c) <= r))
            .collect())
    }

    /// Checks the metric axioms. Euclidean instances are metrics by
    /// construction; explicit matrices are rechecked, including the cubic
    /// triangle scan when `triangle` is set.
    pub fn validate_metric(&self, triangle: bool) -> std::result::Result<(), MetricViolation> {
        match &self.metric {
            Metric::Euclidean { .. } => Ok(()),
            Metric::Explicit { matrix } => {
                let size = self.n + self.m;
                check_entries(size, |a, b| matrix[a * size + b], triangle)
            }
        }
    }

    /// Full `(n + m)^2` distance matrix.
    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        let size = self.n + self.m;
        (0..size)
            .map(|a| {
                (0..size)
                    .map(|b| {
                        if a == b {
                            0.0
                        } else {
                            self.snapped(self.raw(a, b))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The same instance on the explicit backend.
    pub fn to_explicit(&self) -> Instance {
        Instance {
            metric: Metric::Explicit {
                matrix: self.distance_matrix().into_iter().flatten().collect(),
            },
            tie_epsilon: 0.0,
            ..self.clone()
        }
    }
}

/// Validates a raw square matrix: shape, finite nonnegative entries, zero
/// diagonal, symmetry, and optionally the triangle inequality.
///
/// The triangle test tolerates a relative slack of `1e-12` so that matrices
/// materialized from floating-point coordinates are not rejected for
/// rounding in the last bit.
pub fn validate_matrix(
    matrix: &[Vec<f64>],
    triangle: bool,
) -> std::result::Result<(), MetricViolation> {
    let size = matrix.len();
    if let Some(row) = matrix.iter().find(|r| r.len() != size) {
        return Err(MetricViolation::Shape {
            rows: row.len(),
            expected: size,
        });
    }
    check_entries(size, |a, b| matrix[a][b], triangle)
}

fn check_entries(
    size: usize,
    d: impl Fn(usize, usize) -> f64,
    triangle: bool,
) -> std::result::Result<(), MetricViolation> {
    for a in 0..size {
        for b in 0..size {
            let v = d(a, b);
            if !v.is_finite() {
                return Err(MetricViolation::NonFinite { a, b });
            }
            if v < 0.0 {
                return Err(MetricViolation::Negative { a, b });
            }
        }
        if d(a, a) != 0.0 {
            return Err(MetricViolation::NonzeroDiagonal { a });
        }
    }
    for a in 0..size {
        for b in a + 1..size {
            if d(a, b) != d(b, a) {
                return Err(MetricViolation::Asymmetry { a, b });
            }
        }
    }
    if triangle {
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if d(a, c) > (d(a, b) + d(b, c)) * (1.0 + 1e-12) {
                        return Err(MetricViolation::Triangle { a, b, c });
                    }
                }
            }
        }
    }
    Ok(())
}

/// A size-`k` set of candidate indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection {
    centers: Vec<usize>,
    mask: Vec<bool>,
}

impl Selection {
    /// Validates `centers` against `m` candidates and target size `k`.
    pub fn new(centers: impl IntoIterator<Item = usize>, m: usize, k: usize) -> Result<Self> {
        let mut centers: Vec<usize> = centers.into_iter().collect();
        centers.sort_unstable();
        if centers.windows(2).any(|w| w[0] == w[1]) {
            return input("selection contains a duplicate center");
        }
        if let Some(&c) = centers.iter().find(|&&c| c >= m) {
            return input(format!("center {c} is out of range (m = {m})"));
        }
        if centers.len() != k {
            return input(format!(
                "selection has {} centers, expected k = {k}",
                centers.len()
            ));
        }
        let mut mask = vec![false; m];
        for &c in &centers {
            mask[c] = true;
        }
        Ok(Self { centers, mask })
    }

    pub fn for_instance(centers: impl IntoIterator<Item = usize>, inst: &Instance) -> Result<Self> {
        Self::new(centers, inst.m(), inst.k())
    }

    /// Every candidate.
    pub fn all(m: usize) -> Self {
        Self {
            centers: (0..m).collect(),
            mask: vec![true; m],
        }
    }

    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Number of candidates the selection was validated against.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    #[inline]
    pub fn contains(&self, c: usize) -> bool {
        self.mask.get(c).copied().unwrap_or(false)
    }

    /// Unselected candidates in increasing index order.
    pub fn unselected(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &s)| !s)
            .map(|(c, _)| c)
    }
}
