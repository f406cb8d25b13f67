//! ε-dense discretizations of a polygon's boundary or closed region.
//!
//! Boundary sampling splits every edge into `ceil(len / eps)` equal
//! intervals, so any boundary point is within `eps / 2` of a sample.
//!
//! Region sampling adds the points of an axis-aligned grid with spacing
//! `eps / √2`, anchored at the bounding-box minimum, that fall inside the
//! polygon. A region point is within `eps / 2` of its nearest cell corner;
//! if that corner lies outside the polygon, the segment towards it crosses
//! the boundary within `eps / 2`, and that crossing is within `eps / 2` of a
//! boundary sample. Either way every region point is within `eps`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{dist_l2, fingerprint, Point, SimplePolygon};
use crate::scalar::{interval_count, Scalar};

/// Hard cap on the number of generated samples.
pub const MAX_SAMPLES: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplingError {
    #[error("sampling density must be positive and finite, got {0}")]
    InvalidDensity(f64),
    #[error("sampling would produce more than {MAX_SAMPLES} points")]
    TooManySamples,
    #[error("nothing to sample")]
    EmptyInput,
}

/// What part of the polygon a sample set discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    Boundary,
    Region,
}

impl SampleMode {
    pub fn name(self) -> &'static str {
        match self {
            SampleMode::Boundary => "boundary",
            SampleMode::Region => "region",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet<T> {
    pub points: Vec<Point<T>>,
    pub density: T,
    pub mode: SampleMode,
    /// Fingerprint of the geometry the samples were drawn from.
    pub source: u64,
}

impl<T: Scalar> SampleSet<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance from `q` to the closest sample (linear scan).
    pub fn nearest_distance(&self, q: Point<T>) -> T {
        self.points.iter().map(|p| dist_l2(*p, q)).fold(T::infinity(), T::min)
    }
}

/// Merges points closer than the geometric tolerance, keeping first-seen order.
pub(crate) struct Dedup<T> {
    cells: HashMap<(i64, i64), Vec<usize>>,
    cell: f64,
    pub(crate) points: Vec<Point<T>>,
}

impl<T: Scalar> Dedup<T> {
    pub(crate) fn new() -> Self {
        Self {
            cells: HashMap::new(),
            cell: T::geom_tol().to_f64_lossy() * 4.0,
            points: Vec::new(),
        }
    }

    fn key(&self, p: Point<T>) -> (i64, i64) {
        (
            (p.x.to_f64_lossy() / self.cell).floor() as i64,
            (p.y.to_f64_lossy() / self.cell).floor() as i64,
        )
    }

    /// Returns `true` when `p` was new.
    pub(crate) fn insert(&mut self, p: Point<T>) -> bool {
        let (kx, ky) = self.key(p);
        let tol = T::geom_tol();
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(kx + dx, ky + dy)) {
                    if ids.iter().any(|&i| dist_l2(self.points[i], p) <= tol) {
                        return false;
                    }
                }
            }
        }
        self.cells.entry((kx, ky)).or_default().push(self.points.len());
        self.points.push(p);
        true
    }
}

fn check_density<T: Scalar>(eps: T) -> Result<(), SamplingError> {
    if eps.is_finite() && eps > T::zero() {
        Ok(())
    } else {
        Err(SamplingError::InvalidDensity(eps.to_f64_lossy()))
    }
}

/// Appends `a` and the interior subdivision points of segment `ab`.
pub(crate) fn push_subdivided<T: Scalar>(dedup: &mut Dedup<T>, a: Point<T>, b: Point<T>, eps: T, with_end: bool) {
    let n = interval_count(dist_l2(a, b), eps);
    dedup.insert(a);
    let nf = T::from_usize(n).unwrap();
    for j in 1..n {
        dedup.insert(a.lerp(b, T::from_usize(j).unwrap() / nf));
    }
    if with_end {
        dedup.insert(b);
    }
}

fn boundary_points<T: Scalar>(polygon: &SimplePolygon<T>, eps: T) -> Result<Dedup<T>, SamplingError> {
    let per = polygon.perimeter() / eps;
    if per.to_f64_lossy() + polygon.len() as f64 > MAX_SAMPLES as f64 {
        return Err(SamplingError::TooManySamples);
    }
    let mut dedup = Dedup::new();
    for (a, b) in polygon.edges() {
        push_subdivided(&mut dedup, a, b, eps, false);
    }
    Ok(dedup)
}

/// Samples the polygon boundary with spacing at most `eps` along every edge.
pub fn sample_boundary<T: Scalar>(polygon: &SimplePolygon<T>, eps: T) -> Result<SampleSet<T>, SamplingError> {
    check_density(eps)?;
    let dedup = boundary_points(polygon, eps)?;
    Ok(SampleSet {
        points: dedup.points,
        density: eps,
        mode: SampleMode::Boundary,
        source: polygon.identity(),
    })
}

/// Samples the closed region: boundary samples plus interior grid points.
pub fn sample_region<T: Scalar>(polygon: &SimplePolygon<T>, eps: T) -> Result<SampleSet<T>, SamplingError> {
    check_density(eps)?;
    let mut dedup = boundary_points(polygon, eps)?;
    let h = eps / T::SQRT_2();
    let bb = polygon.bbox();
    let nx = interval_count(bb.width(), h);
    let ny = interval_count(bb.height(), h);
    if (nx as f64 + 1.0) * (ny as f64 + 1.0) > MAX_SAMPLES as f64 {
        return Err(SamplingError::TooManySamples);
    }
    for j in 0..=ny {
        let y = bb.min.y + h * T::from_usize(j).unwrap();
        for i in 0..=nx {
            let p = Point::new(bb.min.x + h * T::from_usize(i).unwrap(), y);
            if polygon.contains(p) {
                dedup.insert(p);
            }
        }
    }
    Ok(SampleSet {
        points: dedup.points,
        density: eps,
        mode: SampleMode::Region,
        source: polygon.identity(),
    })
}

/// Dispatches on `mode`.
pub fn sample<T: Scalar>(polygon: &SimplePolygon<T>, eps: T, mode: SampleMode) -> Result<SampleSet<T>, SamplingError> {
    match mode {
        SampleMode::Boundary => sample_boundary(polygon, eps),
        SampleMode::Region => sample_region(polygon, eps),
    }
}

/// Samples a soup of segments (shared endpoints merged).
pub fn sample_segments<T: Scalar>(segments: &[(Point<T>, Point<T>)], eps: T) -> Result<SampleSet<T>, SamplingError> {
    check_density(eps)?;
    if segments.is_empty() {
        return Err(SamplingError::EmptyInput);
    }
    let total: f64 = segments
        .iter()
        .map(|(a, b)| (dist_l2(*a, *b) / eps).to_f64_lossy() + 2.0)
        .sum();
    if total > MAX_SAMPLES as f64 {
        return Err(SamplingError::TooManySamples);
    }
    let mut dedup = Dedup::new();
    for (a, b) in segments {
        push_subdivided(&mut dedup, *a, *b, eps, true);
    }
    Ok(SampleSet {
        points: dedup.points,
        density: eps,
        mode: SampleMode::Boundary,
        source: fingerprint(segments.iter().flat_map(|(a, b)| [*a, *b])),
    })
}
