//! The reduced Heisenberg fan and the action of `U_r` on it.
//!
//! Each point `(2n, 2|n|(1 + 2j))` stands for the subspace spanned by
//! `ψ_{jk}^n`, `k ≥ 0`. `U_r` moves it vertically to index `j + r|n|`, unless
//! `rn ∉ Z` or the mode is in the kernel (for instance `n = ±2, j = 2` at
//! `r = 1`, where `l_2(2) = 0`).

use alloc::vec::Vec;

use crate::group::RationalMomentum;
use crate::xray::{box_eigenvalue, sublaplacian_eigenvalue, svd_factors};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanPoint {
    pub n: i64,
    pub j: u64,
    /// `2n`.
    pub eig_t: f64,
    /// `2|n|(1 + 2j)`.
    pub eig_l: f64,
    /// Ray label, `j + 1`.
    pub ray: u64,
}

impl FanPoint {
    pub fn new(n: i64, j: u64) -> Self {
        FanPoint {
            n,
            j,
            eig_t: 2.0 * n as f64,
            eig_l: sublaplacian_eigenvalue(n, j),
            ray: j + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanArrow {
    pub source: FanPoint,
    pub target: FanPoint,
    pub r: RationalMomentum,
}

impl FanArrow {
    /// `□_r` eigenvalue at the target, equal to `source.eig_l`.
    pub fn target_box_eigenvalue(&self) -> f64 {
        box_eigenvalue(self.target.n, self.target.j, self.r)
    }
}

/// Points with `1 ≤ |n| ≤ n_max` and `0 ≤ j ≤ j_max`, ordered by `n` then `j`.
pub fn fan_points(n_max: u64, j_max: u64) -> Vec<FanPoint> {
    let n_max = n_max as i64;
    (-n_max..=n_max)
        .filter(|&n| n != 0)
        .flat_map(|n| (0..=j_max).map(move |j| FanPoint::new(n, j)))
        .collect()
}

/// Arrows of `U_r` between the given points: one per point with a nonzero
/// singular value whose target is also among `points`.
pub fn fan_action(points: &[FanPoint], r: RationalMomentum) -> Vec<FanArrow> {
    points
        .iter()
        .filter_map(|&source| {
            let f = svd_factors(source.n, source.j, r);
            let target_j = f.target_j.filter(|_| f.s > 0.0)?;
            let target = *points.iter().find(|p| p.n == source.n && p.j == target_j)?;
            Some(FanArrow { source, target, r })
        })
        .collect()
}
