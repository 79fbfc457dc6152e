//! Distance from the origin to the convex hull of a finite planar set.
//!
//! A set `M ⊂ C` is ε-lower bounded when every multiset average of its
//! points has modulus at least ε. Multiset averages are the convex
//! combinations with rational weights, which are dense in the hull, so the
//! best ε is the distance from 0 to `conv(M)`.

use num_complex::Complex64;
use serde::Serialize;

const HULL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonBound {
    pub epsilon_star: f64,
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Counter-clockwise hull vertices (Andrew's monotone chain), collinear
/// points dropped. A degenerate input yields one or two vertices.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup_by(|a, b| (*a - *b).norm() <= HULL_EPS);
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Complex64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= HULL_EPS {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= HULL_EPS {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segment_distance(a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 <= HULL_EPS * HULL_EPS {
        return a.norm();
    }
    // projection of the origin onto the segment
    let t = (-(a.re * ab.re + a.im * ab.im) / len2).clamp(0.0, 1.0);
    (a + ab * t).norm()
}

/// Distance from 0 to `conv(points)`; `None` for an empty set.
pub fn epsilon_star(points: &[Complex64]) -> Option<EpsilonBound> {
    if points.is_empty() {
        return None;
    }
    let hull = convex_hull(points);
    let d = match hull.len() {
        1 => hull[0].norm(),
        2 => segment_distance(hull[0], hull[1]),
        n => {
            let zero = Complex64::new(0.0, 0.0);
            let inside = (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], zero) >= -HULL_EPS);
            if inside {
                0.0
            } else {
                (0..n)
                    .map(|i| segment_distance(hull[i], hull[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    };
    Some(EpsilonBound { epsilon_star: d })
}

/// `e^{2πi r/d}`.
pub fn root_of_unity(r: u64, d: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / d as f64)
}
