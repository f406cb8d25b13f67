//! Square and circle coverage of a polygon by sampling plus farthest-first
//! clustering.
//!
//! The solver samples the target (boundary or region) at density `eps`,
//! clusters the samples into `k` groups under the footprint's own metric
//! (L∞ for axis squares, L2 for circles) and centres one footprint on each
//! chosen sample. The cluster radius `ℓ′` only covers the samples; inflating
//! it by `eps` covers every point of the target, since each one is within
//! `eps` of a sample:
//!
//! | footprint   | reported length |
//! |-------------|-----------------|
//! | axis square | side `2(ℓ′ + eps)` |
//! | circle      | radius `ℓ′ + eps` |
//!
//! Against an optimal square cover of side `ℓ*`, and since a rotated square
//! fits in an axis square √2 times larger, the side is at most
//! `2√2·ℓ* + 2·eps`. For circles the radius is at most `2·ℓ* + eps`.
//!
//! Centers are always samples of the target itself, so the constrained
//! variant (centers inside the region, or on the boundary) holds by
//! construction; [`constrained_filter`] is the explicit checkpoint.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::clustering::{farthest_first, ClusterError};
use crate::geometry::{Footprint, FootprintKind, GeometryError, Metric, Point, SimplePolygon};
use crate::sampling::{sample, SampleMode, SampleSet, SamplingError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("solution mixes footprint kinds or lengths, or its metric does not match the kind")]
    KindMismatch,
    #[error("solution has no footprints")]
    EmptySolution,
    #[error("footprint {index} is centred outside the constrained area")]
    ConstraintViolated { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverOptions<T> {
    pub k: usize,
    pub eps: T,
    pub mode: SampleMode,
    pub constrained: bool,
    /// Shuffle the samples with this seed before clustering.
    pub seed: Option<u64>,
}

impl<T: Scalar> CoverOptions<T> {
    pub fn new(k: usize, eps: T, mode: SampleMode) -> Self {
        Self {
            k,
            eps,
            mode,
            constrained: false,
            seed: None,
        }
    }

    pub fn constrained(mut self, yes: bool) -> Self {
        self.constrained = yes;
        self
    }

    pub fn seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }
}

/// `k` equal footprints plus the bookkeeping needed to audit them.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSolution<T> {
    pub footprints: Vec<Footprint<T>>,
    /// Side for squares, radius for circles.
    pub length: T,
    /// Farthest-first radius over the samples, before inflation.
    pub raw_cluster_radius: T,
    pub eps: T,
    pub metric: Metric,
    pub constrained: bool,
    pub mode: SampleMode,
}

impl<T: Scalar> CoverSolution<T> {
    pub fn k(&self) -> usize {
        self.footprints.len()
    }

    pub fn centers(&self) -> Vec<Point<T>> {
        self.footprints.iter().map(|f| f.center).collect()
    }

    /// Checks the footprints are non-empty, homogeneous, and consistent
    /// with `length` and `metric`; returns their common kind.
    pub fn kind(&self) -> Result<FootprintKind, CoverError> {
        let first = self.footprints.first().ok_or(CoverError::EmptySolution)?;
        let homogeneous = self
            .footprints
            .iter()
            .all(|f| f.kind == first.kind && f.length == self.length);
        if !homogeneous || first.kind.metric() != self.metric {
            return Err(CoverError::KindMismatch);
        }
        Ok(first.kind)
    }
}

/// A solve result together with the samples it was computed from.
#[derive(Debug, Clone)]
pub struct CoverOutcome<T> {
    pub solution: CoverSolution<T>,
    pub samples: SampleSet<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport<T> {
    pub covered: bool,
    /// Largest distance (in the footprint metric) by which a verification
    /// sample misses every footprint; 0 when covered.
    pub worst_gap: T,
    pub verify_eps: T,
    pub samples_checked: usize,
}

/// Drops candidate centers that violate the placement constraint: outside the
/// closed region, or (boundary mode) off the boundary.
pub fn constrained_filter<T: Scalar>(
    samples: &SampleSet<T>,
    polygon: &SimplePolygon<T>,
    mode: SampleMode,
) -> SampleSet<T> {
    let keep = |p: &Point<T>| match mode {
        SampleMode::Region => polygon.contains(*p),
        SampleMode::Boundary => polygon.on_boundary(*p),
    };
    SampleSet {
        points: samples.points.iter().copied().filter(keep).collect(),
        ..samples.clone()
    }
}

/// Full pipeline for either footprint kind.
pub fn solve_cover<T: Scalar>(
    polygon: &SimplePolygon<T>,
    kind: FootprintKind,
    opts: &CoverOptions<T>,
) -> Result<CoverOutcome<T>, CoverError> {
    if opts.k == 0 {
        return Err(ClusterError::ZeroK.into());
    }
    let mut samples = sample(polygon, opts.eps, opts.mode)?;
    if opts.constrained {
        samples = constrained_filter(&samples, polygon, opts.mode);
    }
    let mut points = samples.points.clone();
    if let Some(seed) = opts.seed {
        points.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let metric = kind.metric();
    let clusters = farthest_first(&points, opts.k, metric)?;
    let raw = clusters.radius;
    let length = match kind {
        FootprintKind::AxisSquare => (raw + opts.eps) * T::lit(2.0),
        FootprintKind::Circle => raw + opts.eps,
    };
    // Fewer samples than k: repeat centers so the solution still has k entries.
    let footprints = (0..opts.k)
        .map(|i| {
            let idx = clusters.center_indices[i % clusters.center_indices.len()];
            Footprint::try_new(kind, points[idx], length)
        })
        .collect::<Result<Vec<_>, _>>()?;

    if opts.constrained {
        for (index, f) in footprints.iter().enumerate() {
            let ok = match opts.mode {
                SampleMode::Region => polygon.contains(f.center),
                SampleMode::Boundary => polygon.on_boundary(f.center),
            };
            if !ok {
                return Err(CoverError::ConstraintViolated { index });
            }
        }
    }

    Ok(CoverOutcome {
        solution: CoverSolution {
            footprints,
            length,
            raw_cluster_radius: raw,
            eps: opts.eps,
            metric,
            constrained: opts.constrained,
            mode: opts.mode,
        },
        samples,
    })
}

/// Axis-aligned square cover (L∞ clustering).
pub fn solve_square_cover<T: Scalar>(
    polygon: &SimplePolygon<T>,
    opts: &CoverOptions<T>,
) -> Result<CoverSolution<T>, CoverError> {
    solve_cover(polygon, FootprintKind::AxisSquare, opts).map(|o| o.solution)
}

/// Circle cover (L2 clustering).
pub fn solve_circle_cover<T: Scalar>(
    polygon: &SimplePolygon<T>,
    opts: &CoverOptions<T>,
) -> Result<CoverSolution<T>, CoverError> {
    solve_cover(polygon, FootprintKind::Circle, opts).map(|o| o.solution)
}

/// Largest miss of `footprints` over `points` (0 when all are covered).
pub fn worst_gap<T: Scalar>(footprints: &[Footprint<T>], points: &[Point<T>]) -> T {
    let gap_at = |p: &Point<T>| footprints.iter().map(|f| f.excess(*p)).fold(T::infinity(), T::min);
    let worst = points.par_iter().map(gap_at).reduce(|| T::neg_infinity(), T::max);
    if worst <= T::geom_tol() {
        T::zero()
    } else {
        worst
    }
}

/// Re-samples the solution's target at `verify_eps` and checks every sample
/// is inside some footprint.
pub fn verify_cover<T: Scalar>(
    polygon: &SimplePolygon<T>,
    solution: &CoverSolution<T>,
    verify_eps: T,
) -> Result<VerificationReport<T>, CoverError> {
    solution.kind()?;
    let samples = sample(polygon, verify_eps, solution.mode)?;
    let gap = worst_gap(&solution.footprints, &samples.points);
    Ok(VerificationReport {
        covered: gap == T::zero(),
        worst_gap: gap,
        verify_eps,
        samples_checked: samples.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon_validate;

    fn poly(v: &[(f64, f64)]) -> SimplePolygon<f64> {
        polygon_validate(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn unit_square() -> SimplePolygon<f64> {
        poly(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])
    }

    #[test]
    fn unit_square_single_square() {
        let sq = unit_square();
        let sol = solve_square_cover(&sq, &CoverOptions::new(1, 0.05, SampleMode::Region)).unwrap();
        assert_eq!(sol.k(), 1);
        assert!(sol.length <= 2.1 + 1e-12);
        assert!(sol.length / 1.0 <= 2.0 * 2f64.sqrt());
        assert!(verify_cover(&sq, &sol, 0.025).unwrap().covered);
    }

    #[test]
    fn rectangle_four_squares() {
        let rect = poly(&[(0., 0.), (4., 0.), (4., 1.), (0., 1.)]);
        let sol = solve_square_cover(&rect, &CoverOptions::new(4, 0.05, SampleMode::Region)).unwrap();
        assert_eq!(sol.k(), 4);
        assert!(sol.length / 1.0 <= 2.0 * 2f64.sqrt() + 4.0 * 0.05);
        assert!(verify_cover(&rect, &sol, 0.025).unwrap().covered);
    }

    #[test]
    fn k_exceeding_samples_gives_eps_sized_footprints() {
        let sq = unit_square();
        let opts = CoverOptions::new(20, 10.0, SampleMode::Boundary);
        let s = solve_square_cover(&sq, &opts).unwrap();
        assert_eq!(s.raw_cluster_radius, 0.0);
        assert_eq!(s.length, 20.0);
        assert_eq!(s.k(), 20);
        let c = solve_circle_cover(&sq, &opts).unwrap();
        assert_eq!(c.length, 10.0);
    }

    #[test]
    fn unit_square_single_circle() {
        let sq = unit_square();
        let sol = solve_circle_cover(&sq, &CoverOptions::new(1, 0.01, SampleMode::Region)).unwrap();
        let opt = 2f64.sqrt() / 2.0;
        // Center at sample 0 = corner, so the radius is the diagonal: ratio √2 ≤ 2.
        assert!(sol.length <= 2.0 * opt + 0.01 + 1e-12);
        assert!(verify_cover(&sq, &sol, 0.005).unwrap().covered);
    }

    #[test]
    fn thin_rectangle_two_circles() {
        let rect = poly(&[(0., 0.), (2., 0.), (2., 0.01), (0., 0.01)]);
        let sol = solve_circle_cover(&rect, &CoverOptions::new(2, 0.01, SampleMode::Region)).unwrap();
        // Optimum 0.5; farthest-first from a corner lands on the far corner.
        assert!(sol.length <= 2.0 * 0.5 + 0.01 + 1e-9);
        assert!(verify_cover(&rect, &sol, 0.005).unwrap().covered);
    }

    #[test]
    fn undersized_circle_reports_corner_gap() {
        let sq = unit_square();
        let sol = CoverSolution {
            footprints: vec![Footprint::circle(Point::new(0.5, 0.5), 0.5).unwrap()],
            length: 0.5,
            raw_cluster_radius: 0.5,
            eps: 0.01,
            metric: Metric::L2,
            constrained: false,
            mode: SampleMode::Region,
        };
        let rep = verify_cover(&sq, &sol, 0.01).unwrap();
        assert!(!rep.covered);
        assert!((rep.worst_gap - (2f64.sqrt() / 2.0 - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn kind_mismatch_rejected() {
        let sq = unit_square();
        let mut sol = CoverSolution {
            footprints: vec![
                Footprint::circle(Point::new(0.5, 0.5), 1.0).unwrap(),
                Footprint::axis_square(Point::new(0.5, 0.5), 1.0).unwrap(),
            ],
            length: 1.0,
            raw_cluster_radius: 0.5,
            eps: 0.01,
            metric: Metric::L2,
            constrained: false,
            mode: SampleMode::Region,
        };
        assert_eq!(verify_cover(&sq, &sol, 0.1), Err(CoverError::KindMismatch));
        sol.footprints.truncate(1);
        sol.metric = Metric::Linf;
        assert_eq!(verify_cover(&sq, &sol, 0.1), Err(CoverError::KindMismatch));
        sol.footprints.clear();
        assert_eq!(verify_cover(&sq, &sol, 0.1), Err(CoverError::EmptySolution));
    }

    #[test]
    fn constrained_filter_behaviour() {
        let sq = unit_square();
        for mode in [SampleMode::Boundary, SampleMode::Region] {
            let s = sample(&sq, 0.25, mode).unwrap();
            assert_eq!(constrained_filter(&s, &sq, mode), s);
            let mut dirty = s.clone();
            dirty.points.push(Point::new(3.0, 3.0));
            assert_eq!(constrained_filter(&dirty, &sq, mode), s);
        }
        let region = sample(&sq, 0.25, SampleMode::Region).unwrap();
        let on_edge = constrained_filter(&region, &sq, SampleMode::Boundary);
        assert!(on_edge.len() < region.len());
        assert!(on_edge.points.iter().all(|p| sq.on_boundary(*p)));
    }

    #[test]
    fn length_is_monotone_in_k() {
        let l = poly(&[(0., 0.), (3., 0.), (3., 1.), (1., 1.), (1., 3.), (0., 3.)]);
        for kind in [FootprintKind::AxisSquare, FootprintKind::Circle] {
            for mode in [SampleMode::Boundary, SampleMode::Region] {
                let mut prev = f64::INFINITY;
                for k in 1..6 {
                    let o = solve_cover(&l, kind, &CoverOptions::new(k, 0.1, mode).constrained(true)).unwrap();
                    assert!(o.solution.length <= prev);
                    prev = o.solution.length;
                    assert!(verify_cover(&l, &o.solution, 0.05).unwrap().covered);
                }
            }
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let sq = unit_square();
        let opts = CoverOptions::new(3, 0.1, SampleMode::Region).seed(Some(42));
        let a = solve_square_cover(&sq, &opts).unwrap();
        assert_eq!(a, solve_square_cover(&sq, &opts).unwrap());
        assert!(verify_cover(&sq, &a, 0.05).unwrap().covered);
    }

    #[test]
    fn zero_k_is_rejected() {
        let sq = unit_square();
        assert_eq!(
            solve_square_cover(&sq, &CoverOptions::new(0, 0.1, SampleMode::Region)),
            Err(CoverError::Cluster(ClusterError::ZeroK))
        );
    }
}
