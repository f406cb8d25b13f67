//! Farthest-first traversal (Gonzalez) for the k-center problem.
//!
//! The first center is always index 0 and every argmax breaks ties towards
//! the lowest index, so results depend only on the input order. Distances are
//! evaluated on demand; memory stays O(n).

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{Metric, Point};
use crate::scalar::Scalar;

/// Below this many points the scan runs sequentially.
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClusterError {
    #[error("no input points")]
    EmptyInput,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("center index {index} out of range for {len} points")]
    IndexMismatch { index: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KCenterResult<T> {
    /// Indices into the clustered point list, in selection order.
    pub center_indices: Vec<usize>,
    /// Largest distance from any point to its nearest center.
    pub radius: T,
    pub metric: Metric,
}

/// Picks `k` centers greedily, each the point farthest from those chosen so far.
///
/// When `k >= points.len()` every point becomes a center and the radius is 0.
pub fn farthest_first<T: Scalar>(
    points: &[Point<T>],
    k: usize,
    metric: Metric,
) -> Result<KCenterResult<T>, ClusterError> {
    if points.is_empty() {
        return Err(ClusterError::EmptyInput);
    }
    if k == 0 {
        return Err(ClusterError::ZeroK);
    }
    let n = points.len();
    if k >= n {
        return Ok(KCenterResult {
            center_indices: (0..n).collect(),
            radius: T::zero(),
            metric,
        });
    }

    let mut centers = Vec::with_capacity(k);
    centers.push(0);
    // Chosen centers are parked at -inf so duplicates cannot be re-selected.
    let mut nearest: Vec<T> = points.iter().map(|p| metric.distance(points[0], *p)).collect();
    nearest[0] = T::neg_infinity();
    let mut farthest = argmax(&nearest);
    while centers.len() < k {
        let c = farthest.0;
        centers.push(c);
        nearest[c] = T::neg_infinity();
        farthest = relax(points, &mut nearest, points[c], metric);
    }
    Ok(KCenterResult {
        center_indices: centers,
        radius: farthest.1,
        metric,
    })
}

/// Lowers every entry of `nearest` by the distance to `c`; returns the new
/// argmax `(index, value)`.
fn relax<T: Scalar>(points: &[Point<T>], nearest: &mut [T], c: Point<T>, metric: Metric) -> (usize, T) {
    if points.len() < PAR_THRESHOLD {
        for (d, p) in nearest.iter_mut().zip(points) {
            *d = d.min(metric.distance(c, *p));
        }
        argmax(nearest)
    } else {
        nearest
            .par_iter_mut()
            .zip(points.par_iter())
            .enumerate()
            .map(|(i, (d, p))| {
                *d = d.min(metric.distance(c, *p));
                (i, *d)
            })
            .reduce(|| (usize::MAX, T::neg_infinity()), pick_max)
    }
}

fn pick_max<T: Scalar>(a: (usize, T), b: (usize, T)) -> (usize, T) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

fn argmax<T: Scalar>(values: &[T]) -> (usize, T) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((usize::MAX, T::neg_infinity()), pick_max)
}

/// Recomputes the k-center radius of `centers` over `points` from scratch.
pub fn covering_radius<T: Scalar>(points: &[Point<T>], centers: &[usize], metric: Metric) -> T {
    points
        .iter()
        .map(|p| {
            centers
                .iter()
                .map(|&c| metric.distance(points[c], *p))
                .fold(T::infinity(), T::min)
        })
        .fold(T::zero(), T::max)
}

/// Maps every point to the position (in `result.center_indices`) of its
/// nearest center; ties go to the earlier center.
pub fn assign_clusters<T: Scalar>(points: &[Point<T>], result: &KCenterResult<T>) -> Result<Vec<usize>, ClusterError> {
    if let Some(&index) = result.center_indices.iter().find(|&&i| i >= points.len()) {
        return Err(ClusterError::IndexMismatch {
            index,
            len: points.len(),
        });
    }
    Ok(points
        .iter()
        .map(|p| {
            let mut best = (0, T::infinity());
            for (slot, &c) in result.center_indices.iter().enumerate() {
                let d = result.metric.distance(points[c], *p);
                if d < best.1 {
                    best = (slot, d);
                }
            }
            best.0
        })
        .collect())
}
