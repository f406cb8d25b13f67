//! Brute-force ground truth for small instances.
//!
//! * [`discrete_kcenter_exact`] enumerates every center subset.
//! * [`continuous_cover_bounds`] brackets the optimal footprint length for a
//!   polygon by binary search over a feasibility test on a finite sample `S`
//!   of the polygon (density `resolution / 2`).
//!
//! Since `S` is a subset of the polygon, any length at which `S` cannot be
//! covered is a certified lower bound. The feasibility tests are:
//!
//! * axis squares: exact for `k ≤ 3`. Some square of an optimal cover can be
//!   pinned at a corner of the bounding box of the points it must cover, so
//!   the search tries the four corners and recurses on what is left.
//! * circles: the last circle is the minimum enclosing circle of whatever the
//!   others leave uncovered; the others are centred on a `resolution`-spaced
//!   grid. Snapping an optimal center to the grid moves it by at most
//!   `resolution/√2`, which is subtracted from the lower bound.
//!
//! The upper bound takes the witness centers, measures the length they need
//! on a twice finer sample `F`, and inflates it by the density of `F` so the
//! whole polygon is covered; the resulting cover is re-verified.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::farthest_first;
use crate::coverage::{solve_cover, verify_cover, CoverError, CoverOptions, CoverSolution};
use crate::geometry::{dist_l2, BBox, Footprint, FootprintKind, Metric, Point, SimplePolygon};
use crate::sampling::{sample, SampleMode, SamplingError};
use crate::scalar::Scalar;

pub const MAX_DISCRETE_POINTS: usize = 25;
pub const MAX_K: usize = 3;
/// Largest allowed bounding-box extent, per axis, in units of the resolution.
pub const MAX_GRID_STEPS: f64 = 40.0;
/// Largest verification sample the continuous oracle will build.
pub const MAX_ORACLE_SAMPLES: usize = 400_000;
const MAX_ITERATIONS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
    #[error("no input points")]
    EmptyInput,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("resolution must be positive and finite, got {0}")]
    InvalidResolution(f64),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    DiscreteKcenter,
    GridSearch,
    CornerSearch,
}

impl OracleMethod {
    pub fn name(self) -> &'static str {
        match self {
            OracleMethod::DiscreteKcenter => "discrete_kcenter",
            OracleMethod::GridSearch => "grid_search",
            OracleMethod::CornerSearch => "corner_search",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOptimum<T> {
    pub radius: T,
    /// Lexicographically smallest optimal subset.
    pub center_indices: Vec<usize>,
}

/// Exact discrete k-center by exhaustive enumeration (`n ≤ 25`, `k ≤ 3`).
pub fn discrete_kcenter_exact<T: Scalar>(
    points: &[Point<T>],
    k: usize,
    metric: Metric,
) -> Result<DiscreteOptimum<T>, OracleError> {
    if points.is_empty() {
        return Err(OracleError::EmptyInput);
    }
    if k == 0 {
        return Err(OracleError::ZeroK);
    }
    let n = points.len();
    if n > MAX_DISCRETE_POINTS || k > MAX_K {
        return Err(OracleError::TooLarge(format!(
            "discrete oracle needs n <= {MAX_DISCRETE_POINTS} and k <= {MAX_K}, got n = {n}, k = {k}"
        )));
    }
    if k >= n {
        return Ok(DiscreteOptimum {
            radius: T::zero(),
            center_indices: (0..n).collect(),
        });
    }
    let radius_of = |set: &[usize]| {
        points
            .iter()
            .map(|p| {
                set.iter()
                    .map(|&c| metric.distance(points[c], *p))
                    .fold(T::infinity(), T::min)
            })
            .fold(T::zero(), T::max)
    };
    let mut best: Option<DiscreteOptimum<T>> = None;
    let mut set: Vec<usize> = (0..k).collect();
    loop {
        let r = radius_of(&set);
        if best.as_ref().is_none_or(|b| r < b.radius) {
            best = Some(DiscreteOptimum {
                radius: r,
                center_indices: set.clone(),
            });
        }
        if !next_combination(&mut set, n) {
            break;
        }
    }
    Ok(best.expect("at least one subset"))
}

/// Advances `set` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(set: &mut [usize], n: usize) -> bool {
    let k = set.len();
    let Some(i) = (0..k).rev().find(|&i| set[i] < n - k + i) else {
        return false;
    };
    set[i] += 1;
    for j in i + 1..k {
        set[j] = set[j - 1] + 1;
    }
    true
}

/// Certified bracket on the optimal continuous cover length.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleBounds<T> {
    pub lower: T,
    pub upper: T,
    pub method: OracleMethod,
    pub resolution: T,
    /// Centers of the cover achieving `upper`.
    pub centers: Vec<Point<T>>,
    /// Size of the search sample.
    pub samples: usize,
    /// Whether the `upper` cover passed `verify_cover` at `resolution / 4`.
    pub verified: bool,
}

/// Minimum enclosing circle `(center, radius)` of a nonempty point set.
pub fn min_enclosing_circle<T: Scalar>(points: &[Point<T>]) -> Option<(Point<T>, T)> {
    let mut pts = points.to_vec();
    let first = *pts.first()?;
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(0x6d65_6331));
    let tol = T::geom_tol();
    let outside = |c: Point<T>, r: T, p: Point<T>| dist_l2(c, p) > r + tol;
    let (mut c, mut r) = (first, T::zero());
    for i in 0..pts.len() {
        if !outside(c, r, pts[i]) {
            continue;
        }
        (c, r) = (pts[i], T::zero());
        for j in 0..i {
            if !outside(c, r, pts[j]) {
                continue;
            }
            c = pts[i].midpoint(pts[j]);
            r = dist_l2(c, pts[i]);
            for l in 0..j {
                if outside(c, r, pts[l]) {
                    (c, r) = circle_through(pts[i], pts[j], pts[l]);
                }
            }
        }
    }
    Some((c, r))
}

/// Circumcircle of `a`, `b`, `c`.
fn circle_through<T: Scalar>(a: Point<T>, b: Point<T>, c: Point<T>) -> (Point<T>, T) {
    let (ab, ac) = (b - a, c - a);
    let d = ab.cross(ac) * T::lit(2.0);
    if d.abs() <= T::epsilon() * (ab.norm() + ac.norm()).powi(2) {
        // Collinear: the diameter circle of the farthest pair.
        let pairs = [(a, b), (a, c), (b, c)];
        let (p, q) = pairs
            .into_iter()
            .max_by(|x, y| dist_l2(x.0, x.1).partial_cmp(&dist_l2(y.0, y.1)).unwrap())
            .unwrap();
        let m = p.midpoint(q);
        return (m, dist_l2(m, p));
    }
    let (b2, c2) = (ab.dot(ab), ac.dot(ac));
    let ux = (ac.y * b2 - ab.y * c2) / d;
    let uy = (ab.x * c2 - ac.x * b2) / d;
    let center = Point::new(a.x + ux, a.y + uy);
    let r = [a, b, c].iter().map(|p| dist_l2(center, *p)).fold(T::zero(), T::max);
    (center, r)
}

/// Exact test: can `k ≤ 3` axis squares of side `side` cover `points`?
fn square_cover<T: Scalar>(points: &[Point<T>], k: usize, side: T) -> Option<Vec<Point<T>>> {
    let Some(bb) = BBox::from_points(points.iter().copied()) else {
        return Some(Vec::new());
    };
    let tol = T::geom_tol();
    if bb.width() <= side + tol && bb.height() <= side + tol {
        return Some(vec![bb.center()]);
    }
    if k <= 1 {
        return None;
    }
    let half = side / T::lit(2.0);
    let corners = [
        Point::new(bb.min.x + half, bb.min.y + half),
        Point::new(bb.max.x - half, bb.min.y + half),
        Point::new(bb.max.x - half, bb.max.y - half),
        Point::new(bb.min.x + half, bb.max.y - half),
    ];
    corners.into_iter().find_map(|c| {
        let f = Footprint {
            kind: FootprintKind::AxisSquare,
            center: c,
            length: side,
        };
        let rest: Vec<_> = points.iter().copied().filter(|p| !f.contains(*p)).collect();
        square_cover(&rest, k - 1, side).map(|mut cs| {
            cs.insert(0, c);
            cs
        })
    })
}

/// Test: can `k ≤ 3` circles of radius `rho` cover `points`, all but the last
/// centred on `grid`?
fn circle_cover<T: Scalar>(points: &[Point<T>], grid: &[Point<T>], k: usize, rho: T) -> Option<Vec<Point<T>>> {
    let tol = T::geom_tol();
    let Some(bb) = BBox::from_points(points.iter().copied()) else {
        return Some(Vec::new());
    };
    if k <= 1 {
        return min_enclosing_circle(points).and_then(|(c, r)| (r <= rho + tol).then(|| vec![c]));
    }
    // Branch on an extreme point: its circle must be centred within rho of it.
    let mid = bb.center();
    let pivot = points
        .iter()
        .copied()
        .fold((points[0], T::neg_infinity()), |acc, p| {
            let d = dist_l2(mid, p);
            if d > acc.1 {
                (p, d)
            } else {
                acc
            }
        })
        .0;
    let candidates: Vec<Point<T>> = grid
        .iter()
        .copied()
        .filter(|g| dist_l2(*g, pivot) <= rho + tol)
        .collect();
    let branch = |c: &Point<T>| {
        let rest: Vec<_> = points.iter().copied().filter(|p| dist_l2(*c, *p) > rho + tol).collect();
        if let Some(rb) = BBox::from_points(rest.iter().copied()) {
            // Cheap necessary condition before recursing.
            let span = rho * T::lit(2.0 * (k - 1) as f64) + tol;
            if rb.width() > span || rb.height() > span {
                return None;
            }
        }
        circle_cover(&rest, grid, k - 1, rho).map(|mut cs| {
            cs.insert(0, *c);
            cs
        })
    };
    if k == MAX_K {
        candidates.par_iter().find_map_first(branch)
    } else {
        candidates.iter().find_map(branch)
    }
}

/// Largest distance from a point of `points` to its nearest center.
fn needed_reach<T: Scalar>(points: &[Point<T>], centers: &[Point<T>], metric: Metric) -> T {
    points
        .par_iter()
        .map(|p| {
            centers
                .iter()
                .map(|c| metric.distance(*c, *p))
                .fold(T::infinity(), T::min)
        })
        .reduce(T::zero, T::max)
}

fn pad<T: Copy>(mut v: Vec<T>, k: usize) -> Vec<T> {
    if let Some(&first) = v.first() {
        while v.len() < k {
            v.push(first);
        }
    }
    v
}

/// Brackets the optimal length (square side or circle radius) of a `k`-cover
/// of the polygon's `mode` target.
pub fn continuous_cover_bounds<T: Scalar>(
    polygon: &SimplePolygon<T>,
    k: usize,
    kind: FootprintKind,
    resolution: T,
    mode: SampleMode,
) -> Result<OracleBounds<T>, OracleError> {
    if k == 0 {
        return Err(OracleError::ZeroK);
    }
    if k > MAX_K {
        return Err(OracleError::TooLarge(format!(
            "continuous oracle needs k <= {MAX_K}, got {k}"
        )));
    }
    if !(resolution.is_finite() && resolution > T::zero()) {
        return Err(OracleError::InvalidResolution(resolution.to_f64_lossy()));
    }
    let bb = polygon.bbox();
    let steps = (bb.width().max(bb.height()) / resolution).to_f64_lossy();
    if kind == FootprintKind::Circle && k > 1 && steps > MAX_GRID_STEPS {
        return Err(OracleError::TooLarge(format!(
            "bounding box spans {steps:.1} resolution steps per axis (limit {MAX_GRID_STEPS})"
        )));
    }
    let two = T::lit(2.0);
    let estimate = estimated_samples(polygon, resolution / T::lit(4.0), mode);
    if estimate > MAX_ORACLE_SAMPLES as f64 {
        return Err(OracleError::TooLarge(format!(
            "about {estimate:.0} verification samples at this resolution (limit {MAX_ORACLE_SAMPLES})"
        )));
    }
    let search = sample(polygon, resolution / two, mode)?;
    let fine_eps = resolution / T::lit(4.0);
    let fine = sample(polygon, fine_eps, mode)?;
    let pts = &search.points;

    let (method, lo, hi, centers, slack) = match kind {
        FootprintKind::AxisSquare => {
            let decide = |s: T| square_cover(pts, k, s);
            let hi = bb.width().max(bb.height());
            let tol = resolution * T::lit(1e-3);
            let (lo, hi, cs) = bisect_length(decide, T::zero(), hi, tol);
            (OracleMethod::CornerSearch, lo, hi, cs, T::zero())
        }
        FootprintKind::Circle => {
            let grid = grid_points(&bb, resolution);
            let slack = if k == 1 { T::zero() } else { resolution / two.sqrt() };
            let decide = |r: T| circle_cover(pts, &grid, k, r);
            let start = farthest_first(pts, k, Metric::L2).map_err(|_| OracleError::EmptyInput)?;
            let mut hi = start.radius + slack + T::geom_tol();
            while decide(hi).is_none() {
                hi = hi * T::lit(1.5) + resolution;
            }
            let (lo, hi, cs) = bisect_length(decide, T::zero(), hi, resolution / T::lit(4.0));
            (OracleMethod::GridSearch, lo, hi, cs, slack)
        }
    };
    debug_assert!(lo <= hi);
    let centers = pad(centers, k);
    let reach = needed_reach(&fine.points, &centers, kind.metric());
    let upper = match kind {
        FootprintKind::AxisSquare => (reach + fine_eps) * two,
        FootprintKind::Circle => reach + fine_eps,
    };
    let lower = (lo - slack).max(T::zero());

    let footprints = centers
        .iter()
        .map(|c| Footprint::try_new(kind, *c, upper))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CoverError::from)?;
    let solution = CoverSolution {
        footprints,
        length: upper,
        raw_cluster_radius: reach,
        eps: fine_eps,
        metric: kind.metric(),
        constrained: false,
        mode,
    };
    let verified = verify_cover(polygon, &solution, fine_eps)?.covered;
    Ok(OracleBounds {
        lower,
        upper,
        method,
        resolution,
        centers,
        samples: search.len(),
        verified,
    })
}

/// Upper estimate of the sample count at density `eps`.
fn estimated_samples<T: Scalar>(polygon: &SimplePolygon<T>, eps: T, mode: SampleMode) -> f64 {
    let boundary = (polygon.perimeter() / eps).to_f64_lossy() + polygon.len() as f64;
    match mode {
        SampleMode::Boundary => boundary,
        SampleMode::Region => {
            let bb = polygon.bbox();
            let h = (eps / T::lit(2.0).sqrt()).to_f64_lossy();
            let cells = (bb.width().to_f64_lossy() / h + 2.0) * (bb.height().to_f64_lossy() / h + 2.0);
            boundary + cells
        }
    }
}

/// Shrinks `[lo, hi]` (infeasible, feasible) to width `tol`; returns the final
/// endpoints and the witness at `hi`.
fn bisect_length<T: Scalar>(
    decide: impl Fn(T) -> Option<Vec<Point<T>>>,
    mut lo: T,
    mut hi: T,
    tol: T,
) -> (T, T, Vec<Point<T>>) {
    let mut witness = decide(hi).expect("upper end of the search must be feasible");
    for _ in 0..MAX_ITERATIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        match decide(mid) {
            Some(cs) => {
                hi = mid;
                witness = cs;
            }
            None => lo = mid,
        }
    }
    (lo, hi, witness)
}

/// Grid anchored at the box minimum, covering the whole box.
fn grid_points<T: Scalar>(bb: &BBox<T>, h: T) -> Vec<Point<T>> {
    let nx = (bb.width() / h).ceil().to_usize().unwrap_or(0);
    let ny = (bb.height() / h).ceil().to_usize().unwrap_or(0);
    let mut out = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            out.push(Point::new(
                bb.min.x + h * T::from_usize(i).unwrap(),
                bb.min.y + h * T::from_usize(j).unwrap(),
            ));
        }
    }
    out
}

/// Greedy set of points pairwise farther apart than `separation` (L2).
///
/// A footprint of diameter at most `separation` holds at most one of them,
/// so the count is a lower bound on the number of footprints in any cover.
pub fn packing_lower_bound<T: Scalar>(points: &[Point<T>], separation: T) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if chosen.iter().all(|&j| dist_l2(points[j], *p) > separation) {
            chosen.push(i);
        }
    }
    chosen
}

/// One instance of the ratio harness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub instance: String,
    pub k: usize,
    pub kind: FootprintKind,
    pub alg_len: f64,
    pub oracle_lo: f64,
    pub oracle_hi: f64,
    /// `alg_len / oracle_lo`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioConfig<T> {
    pub k: usize,
    pub kind: FootprintKind,
    pub eps: T,
    pub mode: SampleMode,
    /// Oracle resolution is the larger bbox extent divided by this.
    pub grid_steps: f64,
}

/// Runs the solver and the oracle on every instance.
pub fn ratio_experiment<T: Scalar>(
    instances: &[(String, SimplePolygon<T>)],
    cfg: &RatioConfig<T>,
) -> Result<Vec<RatioRow>, OracleError> {
    instances
        .iter()
        .map(|(name, poly)| {
            let sol = solve_cover(poly, cfg.kind, &CoverOptions::new(cfg.k, cfg.eps, cfg.mode))?.solution;
            let bb = poly.bbox();
            let res = bb.width().max(bb.height()) / T::lit(cfg.grid_steps);
            let b = continuous_cover_bounds(poly, cfg.k, cfg.kind, res, cfg.mode)?;
            let alg = sol.length.to_f64_lossy();
            let lo = b.lower.to_f64_lossy();
            Ok(RatioRow {
                instance: name.clone(),
                k: cfg.k,
                kind: cfg.kind,
                alg_len: alg,
                oracle_lo: lo,
                oracle_hi: b.upper.to_f64_lossy(),
                ratio: alg / lo,
            })
        })
        .collect()
}

pub const RATIO_CSV_HEADER: &str = "instance,k,kind,alg_len,oracle_lo,oracle_hi,ratio";

/// CSV table with a trailing `max` row.
pub fn ratio_csv(rows: &[RatioRow]) -> String {
    let mut out = String::from(RATIO_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.instance,
            r.k,
            r.kind.name(),
            r.alg_len,
            r.oracle_lo,
            r.oracle_hi,
            r.ratio
        ));
    }
    let max = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    if let Some(first) = rows.first() {
        out.push_str(&format!("max,{},{},,,,{}\n", first.k, first.kind.name(), max));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::farthest_first;
    use crate::geometry::polygon_validate;
    use rand::Rng;

    fn pts(v: &[(f64, f64)]) -> Vec<Point<f64>> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn rect(w: f64, h: f64) -> SimplePolygon<f64> {
        polygon_validate(pts(&[(0., 0.), (w, 0.), (w, h), (0., h)])).unwrap()
    }

    #[test]
    fn discrete_examples() {
        let two = pts(&[(0., 0.), (2., 0.)]);
        let o = discrete_kcenter_exact(&two, 1, Metric::Linf).unwrap();
        assert_eq!((o.radius, o.center_indices), (2.0, vec![0]));

        let three = pts(&[(0., 0.), (4., 0.), (4., 3.)]);
        let o = discrete_kcenter_exact(&three, 2, Metric::L2).unwrap();
        assert_eq!((o.radius, o.center_indices), (3.0, vec![0, 1]));

        assert_eq!(discrete_kcenter_exact(&two, 2, Metric::L2).unwrap().radius, 0.0);
    }

    #[test]
    fn discrete_guardrails() {
        let many: Vec<_> = (0..26).map(|i| Point::new(i as f64, 0.0)).collect();
        assert!(matches!(
            discrete_kcenter_exact(&many, 2, Metric::L2),
            Err(OracleError::TooLarge(_))
        ));
        assert!(matches!(
            discrete_kcenter_exact(&many[..5], 4, Metric::L2),
            Err(OracleError::TooLarge(_))
        ));
        assert_eq!(
            discrete_kcenter_exact::<f64>(&[], 1, Metric::L2),
            Err(OracleError::EmptyInput)
        );
    }

    #[test]
    fn combinations_are_complete() {
        let mut set = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut set, 6) {
            count += 1;
        }
        assert_eq!(count, 20);
        assert_eq!(set, vec![3, 4, 5]);
    }

    #[test]
    fn gonzalez_within_factor_two_of_discrete_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.random_range(1..=12);
            let p: Vec<_> = (0..n)
                .map(|_| Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
                .collect();
            let k = rng.random_range(1..=3);
            for m in [Metric::L2, Metric::Linf] {
                let opt = discrete_kcenter_exact(&p, k, m).unwrap().radius;
                let alg = farthest_first(&p, k, m).unwrap().radius;
                assert!(opt <= alg && alg <= 2.0 * opt + 1e-12);
            }
        }
    }

    #[test]
    fn mec_examples() {
        let (c, r) = min_enclosing_circle(&pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap();
        assert!(c.approx_eq(Point::new(0.5, 0.5), 1e-12));
        assert!((r - 0.5f64.sqrt()).abs() < 1e-12);
        let (_, r) = min_enclosing_circle(&pts(&[(0., 0.), (2., 0.), (1., 0.)])).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let (c, r) = min_enclosing_circle(&pts(&[(3., 4.)])).unwrap();
        assert_eq!((c, r), (Point::new(3., 4.), 0.0));
        assert!(min_enclosing_circle::<f64>(&[]).is_none());
    }

    #[test]
    fn mec_encloses_random_sets_and_is_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let n = rng.random_range(1..40);
            let p: Vec<_> = (0..n)
                .map(|_| Point::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
                .collect();
            let (c, r) = min_enclosing_circle(&p).unwrap();
            assert!(p.iter().all(|q| dist_l2(c, *q) <= r + 1e-9));
            // No enclosing circle is smaller than half the diameter.
            let diam = p
                .iter()
                .flat_map(|a| p.iter().map(move |b| dist_l2(*a, *b)))
                .fold(0.0, f64::max);
            assert!(r >= diam / 2.0 - 1e-12);
            assert!(r <= diam / 3f64.sqrt() + 1e-9);
        }
    }

    #[test]
    fn corner_search_matches_grid_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..40 {
            let n = rng.random_range(3..10);
            let p: Vec<_> = (0..n)
                .map(|_| Point::new(rng.random_range(0.0..4.0), rng.random_range(0.0..4.0)))
                .collect();
            let k = rng.random_range(1..=3);
            let h = 0.25;
            let grid = grid_points(&BBox::from_points(p.iter().copied()).unwrap(), h);
            let feasible_grid = |side: f64| {
                let covers = |c: &Point<f64>, q: &Point<f64>| Metric::Linf.distance(*c, *q) <= side / 2.0 + 1e-9;
                let mut set: Vec<usize> = (0..k.min(grid.len())).collect();
                loop {
                    if p.iter().all(|q| set.iter().any(|&i| covers(&grid[i], q))) {
                        return true;
                    }
                    if !next_combination(&mut set, grid.len()) {
                        return false;
                    }
                }
            };
            let exact = bisect_length(|s| square_cover(&p, k, s), 0.0, 4.0, 1e-6);
            // Grid centers are a restriction: never better, at most h worse.
            assert!(!feasible_grid(exact.0 - 1e-6));
            assert!(feasible_grid(exact.1 + h + 1e-6));
        }
    }

    #[test]
    fn unit_square_brackets() {
        let sq = rect(1.0, 1.0);
        for mode in [SampleMode::Region, SampleMode::Boundary] {
            let c = continuous_cover_bounds(&sq, 1, FootprintKind::Circle, 0.02, mode).unwrap();
            let opt = 0.5f64.sqrt();
            assert!(c.lower <= opt && opt <= c.upper, "{c:?}");
            assert!(c.upper - c.lower <= 0.04);
            assert!(c.verified);
            let s = continuous_cover_bounds(&sq, 1, FootprintKind::AxisSquare, 0.05, mode).unwrap();
            assert!(s.lower <= 1.0 && 1.0 <= s.upper, "{s:?}");
            assert!(s.upper - s.lower <= 0.1);
            assert_eq!(s.method, OracleMethod::CornerSearch);
        }
    }

    #[test]
    fn two_by_one_rectangle_two_squares() {
        let r = rect(2.0, 1.0);
        let b = continuous_cover_bounds(&r, 2, FootprintKind::AxisSquare, 0.05, SampleMode::Region).unwrap();
        assert!(b.lower <= 1.0 && 1.0 <= b.upper, "{b:?}");
        assert!(b.upper - b.lower <= 0.1);
        assert!(b.verified);
    }

    #[test]
    fn circle_brackets_with_grid_centers() {
        let r = rect(2.0, 1.0);
        let b = continuous_cover_bounds(&r, 2, FootprintKind::Circle, 0.05, SampleMode::Region).unwrap();
        // Two unit squares, each with circumradius √2/2.
        let opt = 0.5f64.sqrt();
        assert!(b.lower <= opt && opt <= b.upper, "{b:?}");
        assert!(b.upper - b.lower <= 0.1);
        assert!(b.verified);
    }

    #[test]
    fn bracket_validity() {
        let poly = polygon_validate(pts(&[(0., 0.), (3., 0.), (3., 1.), (1., 1.), (1., 3.), (0., 3.)])).unwrap();
        for kind in [FootprintKind::AxisSquare, FootprintKind::Circle] {
            for k in 1..=3 {
                let b = continuous_cover_bounds(&poly, k, kind, 0.1, SampleMode::Boundary).unwrap();
                assert!(b.verified);
                assert!(b.upper - b.lower <= 0.2 + 1e-12, "{kind:?} k={k}: {b:?}");
                // Below the lower bound the search sample cannot be covered.
                let s = sample(&poly, 0.05, SampleMode::Boundary).unwrap();
                let below = b.lower * 0.999;
                let infeasible = match kind {
                    FootprintKind::AxisSquare => square_cover(&s.points, k, below).is_none(),
                    FootprintKind::Circle => true,
                };
                assert!(infeasible);
            }
        }
    }

    #[test]
    fn oracle_guardrails() {
        let big = rect(10.0, 1.0);
        assert!(matches!(
            continuous_cover_bounds(&big, 2, FootprintKind::Circle, 0.1, SampleMode::Region),
            Err(OracleError::TooLarge(_))
        ));
        assert!(matches!(
            continuous_cover_bounds(&big, 1, FootprintKind::AxisSquare, 0.001, SampleMode::Region),
            Err(OracleError::TooLarge(_))
        ));
        assert!(matches!(
            continuous_cover_bounds(&big, 4, FootprintKind::Circle, 1.0, SampleMode::Region),
            Err(OracleError::TooLarge(_))
        ));
        assert!(matches!(
            continuous_cover_bounds(&big, 1, FootprintKind::Circle, -1.0, SampleMode::Region),
            Err(OracleError::InvalidResolution(_))
        ));
    }

    #[test]
    fn packing_bound_examples() {
        let line = pts(&[(0., 0.), (1., 0.), (2., 0.), (3., 0.)]);
        assert_eq!(packing_lower_bound(&line, 1.5), vec![0, 2]);
        assert_eq!(packing_lower_bound(&line, 0.5).len(), 4);
    }

    #[test]
    fn ratio_harness_and_csv() {
        let inst = vec![("unit".to_string(), rect(1.0, 1.0))];
        let cfg = RatioConfig {
            k: 1,
            kind: FootprintKind::AxisSquare,
            eps: 0.05,
            mode: SampleMode::Region,
            grid_steps: 20.0,
        };
        let rows = ratio_experiment(&inst, &cfg).unwrap();
        assert!(rows[0].ratio >= 1.0);
        assert!(rows[0].ratio <= 2.0 * 2f64.sqrt() + 0.2);
        let csv = ratio_csv(&rows);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], RATIO_CSV_HEADER);
        assert!(lines[2].starts_with("max,1,axis_square,,,,"));
    }
}
