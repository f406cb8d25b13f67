//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;
use std::path::PathBuf;

use polycover::geometry::{Point, SimplePolygon};
use rand::Rng;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn sorted_angles<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    // Jittered slots keep consecutive vertices apart.
    let slot = TAU / n as f64;
    (0..n).map(|i| (i as f64 + rng.random_range(0.1..0.9)) * slot).collect()
}

/// Convex polygon with 3..=`max_n` vertices on a stretched circle.
pub fn random_convex<R: Rng>(rng: &mut R, max_n: usize) -> SimplePolygon<f64> {
    loop {
        let n = rng.random_range(3..=max_n);
        let r = rng.random_range(0.5..5.0);
        let sx = rng.random_range(0.5..1.5);
        let c = Point::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let v = sorted_angles(rng, n)
            .into_iter()
            .map(|t| c + Point::new(r * sx * t.cos(), r * t.sin()))
            .collect();
        if let Ok(p) = SimplePolygon::validate(v) {
            return p;
        }
    }
}

/// Polygon star-shaped about its first-drawn center, 3..=`max_n` vertices.
pub fn random_star<R: Rng>(rng: &mut R, max_n: usize) -> SimplePolygon<f64> {
    loop {
        let n = rng.random_range(3..=max_n);
        let r = rng.random_range(0.5..5.0);
        let c = Point::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let v = sorted_angles(rng, n)
            .into_iter()
            .map(|t| c + Point::polar(t) * (r * rng.random_range(0.25..1.0)))
            .collect();
        if let Ok(p) = SimplePolygon::validate(v) {
            return p;
        }
    }
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize, span: f64) -> Vec<Point<f64>> {
    (0..n)
        .map(|_| Point::new(rng.random_range(-span..span), rng.random_range(-span..span)))
        .collect()
}
