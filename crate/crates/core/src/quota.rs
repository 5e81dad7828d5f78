//! Exact quota arithmetic.
//!
//! The quota `n/k` is never materialized. A group of `count` agents deserves
//! `level` centers iff `count * k >= level * n`, evaluated in `u128`.

/// Quota comparator for `n` agents and `k` centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotaCmp {
    n: u64,
    k: u64,
}

impl QuotaCmp {
    pub fn new(n: usize, k: usize) -> Self {
        debug_assert!(n >= 1 && k >= 1);
        Self {
            n: n as u64,
            k: k as u64,
        }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    /// `count >= level * n / k`.
    #[inline]
    pub fn at_least(&self, count: usize, level: usize) -> bool {
        debug_assert!(level >= 1);
        count as u128 * self.k as u128 >= level as u128 * self.n as u128
    }

    /// Largest level a group of `count` agents is entitled to: `floor(count * k / n)`.
    #[inline]
    pub fn level_of(&self, count: usize) -> usize {
        (count as u128 * self.k as u128 / self.n as u128) as usize
    }

    /// Smallest group size entitled to `level` centers: `ceil(level * n / k)`.
    #[inline]
    pub fn min_size(&self, level: usize) -> usize {
        let num = level as u128 * self.n as u128;
        num.div_ceil(self.k as u128) as usize
    }
}

/// Free-function form of [`QuotaCmp::at_least`].
pub fn quota_at_least(count: usize, level: usize, q: QuotaCmp) -> bool {
    q.at_least(count, level)
}
