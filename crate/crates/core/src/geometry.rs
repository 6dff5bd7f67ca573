//! Planar geometry: vectors, oriented rectangles and polygon distances.
//!
//! Separation between two shapes is *signed*: positive distance when apart,
//! zero when touching and negative when interiors overlap. Contact tests in
//! [`crate::contact`] are thresholds on this value.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

#[allow(unused_imports)] // float methods come from std when it is linked
use num_traits::Float;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector pointing at `angle` (radians, counter-clockwise from +x).
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Vec2::new(c, s)
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    /// Left-hand normal, i.e. the vector rotated by +90°.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Vec2, s: f64) -> Vec2 {
        self + (other - self) * s
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Splits `v` into its components along and across the heading `yaw`.
pub fn longitudinal_lateral_decompose(v: Vec2, yaw: f64) -> (f64, f64) {
    let (s, c) = yaw.sin_cos();
    (c * v.x + s * v.y, -s * v.x + c * v.y)
}

/// Inverse of [`longitudinal_lateral_decompose`].
pub fn compose(long: f64, lat: f64, yaw: f64) -> Vec2 {
    let (s, c) = yaw.sin_cos();
    Vec2::new(c * long - s * lat, s * long + c * lat)
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    if a > -core::f64::consts::PI && a <= core::f64::consts::PI {
        return a;
    }
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut r = a % two_pi;
    if r <= -core::f64::consts::PI {
        r += two_pi;
    } else if r > core::f64::consts::PI {
        r -= two_pi;
    }
    r
}

/// Rectangle centred on `center`, with `length` along `yaw` and `width` across.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedRect {
    pub center: Vec2,
    pub yaw: f64,
    pub length: f64,
    pub width: f64,
}

impl OrientedRect {
    pub fn new(center: Vec2, yaw: f64, length: f64, width: f64) -> Self {
        OrientedRect { center, yaw, length, width }
    }

    /// Corners in counter-clockwise order, starting front-left.
    pub fn corners(&self) -> [Vec2; 4] {
        let f = Vec2::from_angle(self.yaw) * (self.length / 2.0);
        let l = Vec2::from_angle(self.yaw).perp() * (self.width / 2.0);
        let c = self.center;
        [c + f + l, c - f + l, c - f - l, c + f - l]
    }

    /// Grows the rectangle by `front`/`rear` along the heading and `side` on both flanks.
    pub fn inflate(&self, front: f64, rear: f64, side: f64) -> OrientedRect {
        let shift = Vec2::from_angle(self.yaw) * ((front - rear) / 2.0);
        OrientedRect {
            center: self.center + shift,
            yaw: self.yaw,
            length: self.length + front + rear,
            width: self.width + 2.0 * side,
        }
    }

    pub fn polygon(&self) -> Vec<Vec2> {
        self.corners().to_vec()
    }
}

/// Shoelace area; positive for counter-clockwise vertex order.
pub fn polygon_signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        acc += poly[i].cross(poly[(i + 1) % n]);
    }
    acc / 2.0
}

pub fn is_convex(poly: &[Vec2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut sign = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let c = poly[(i + 2) % n];
        let z = (b - a).cross(c - b);
        if z.abs() <= 1e-12 {
            continue;
        }
        if sign == 0.0 {
            sign = z.signum();
        } else if z.signum() != sign {
            return false;
        }
    }
    true
}

/// Crossing-number test. Points on the boundary may land on either side.
pub fn point_in_polygon(p: Vec2, poly: &[Vec2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let a = poly[i];
        let b = poly[j];
        if (a.y > p.y) != (b.y > p.y) {
            let x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    point_segment_distance_squared(p, a, b).sqrt()
}

fn point_segment_distance_squared(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm_squared();
    }
    let s = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    (p - (a + d * s)).norm_squared()
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

pub fn segments_intersect(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> bool {
    let d1 = orient(b0, b1, a0);
    let d2 = orient(b0, b1, a1);
    let d3 = orient(a0, a1, b0);
    let d4 = orient(a0, a1, b1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Vec2, q: Vec2, r: Vec2| {
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    (d1 == 0.0 && on(b0, b1, a0))
        || (d2 == 0.0 && on(b0, b1, a1))
        || (d3 == 0.0 && on(a0, a1, b0))
        || (d4 == 0.0 && on(a0, a1, b1))
}

pub fn segment_distance(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> f64 {
    if segments_intersect(a0, a1, b0, b1) {
        return 0.0;
    }
    point_segment_distance(a0, b0, b1)
        .min(point_segment_distance(a1, b0, b1))
        .min(point_segment_distance(b0, a0, a1))
        .min(point_segment_distance(b1, a0, a1))
}

fn edges(poly: &[Vec2]) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
    let n = poly.len();
    (0..n).map(move |i| (poly[i], poly[(i + 1) % n]))
}

/// Distance between polygons whose boundaries do not cross: the closest
/// pair always involves a vertex.
fn vertex_edge_distance(a: &[Vec2], b: &[Vec2]) -> f64 {
    let mut best = f64::INFINITY;
    for (p, q) in [(a, b), (b, a)] {
        for v in p {
            for (e0, e1) in edges(q) {
                best = best.min(point_segment_distance_squared(*v, e0, e1));
            }
        }
    }
    best.sqrt()
}

/// Minimum distance between polygon boundaries, ignoring containment.
fn boundary_distance(a: &[Vec2], b: &[Vec2]) -> f64 {
    let mut best = f64::INFINITY;
    for (a0, a1) in edges(a) {
        for (b0, b1) in edges(b) {
            best = best.min(segment_distance(a0, a1, b0, b1));
        }
    }
    best
}

pub fn polygons_intersect(a: &[Vec2], b: &[Vec2]) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    if point_in_polygon(a[0], b) || point_in_polygon(b[0], a) {
        return true;
    }
    edges(a).any(|(a0, a1)| edges(b).any(|(b0, b1)| segments_intersect(a0, a1, b0, b1)))
}

/// Minimum distance between two polygons, zero when they touch or overlap.
pub fn polygon_distance(a: &[Vec2], b: &[Vec2]) -> f64 {
    if polygons_intersect(a, b) {
        0.0
    } else {
        boundary_distance(a, b)
    }
}

/// Signed distance from a point to a polygon boundary, negative inside.
pub fn signed_distance_point_polygon(p: Vec2, poly: &[Vec2]) -> f64 {
    let d = edges(poly)
        .map(|(a, b)| point_segment_distance(p, a, b))
        .fold(f64::INFINITY, f64::min);
    if point_in_polygon(p, poly) {
        -d
    } else {
        d
    }
}

/// Separating-axis overlap depth of two convex polygons; `None` when separated.
fn convex_overlap_depth(a: &[Vec2], b: &[Vec2]) -> Option<f64> {
    let mut depth = f64::INFINITY;
    for poly in [a, b] {
        for (p, q) in edges(poly) {
            let axis = match (q - p).perp().normalized() {
                Some(axis) => axis,
                None => continue,
            };
            let (amin, amax) = project(a, axis);
            let (bmin, bmax) = project(b, axis);
            let overlap = amax.min(bmax) - amin.max(bmin);
            if overlap < 0.0 {
                return None;
            }
            depth = depth.min(overlap);
        }
    }
    Some(depth)
}

fn project(poly: &[Vec2], axis: Vec2) -> (f64, f64) {
    poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        let d = v.dot(axis);
        (lo.min(d), hi.max(d))
    })
}

fn ccw(poly: &[Vec2]) -> Vec<Vec2> {
    let mut v = poly.to_vec();
    if polygon_signed_area(&v) < 0.0 {
        v.reverse();
    }
    v
}

/// Sutherland–Hodgman clipping of `subject` by the convex polygon `clip`.
pub fn clip_convex(subject: &[Vec2], clip: &[Vec2]) -> Vec<Vec2> {
    let clip = ccw(clip);
    let mut output = subject.to_vec();
    for (c0, c1) in edges(&clip) {
        if output.is_empty() {
            break;
        }
        let input = core::mem::take(&mut output);
        let inside = |p: Vec2| orient(c0, c1, p) >= 0.0;
        let n = input.len();
        for i in 0..n {
            let cur = input[i];
            let prev = input[(i + n - 1) % n];
            let (cin, pin) = (inside(cur), inside(prev));
            if cin {
                if !pin {
                    output.push(line_intersection(prev, cur, c0, c1));
                }
                output.push(cur);
            } else if pin {
                output.push(line_intersection(prev, cur, c0, c1));
            }
        }
    }
    output
}

fn line_intersection(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> Vec2 {
    let r = p1 - p0;
    let s = q1 - q0;
    let denom = r.cross(s);
    if denom == 0.0 {
        return p0;
    }
    let t = (q0 - p0).cross(s) / denom;
    p0 + r * t
}

/// A shape placed in the world frame.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Point(Vec2),
    Polygon(Vec<Vec2>),
}

impl Shape {
    pub fn centroid(&self) -> Vec2 {
        match self {
            Shape::Point(p) => *p,
            Shape::Polygon(poly) => {
                let n = poly.len().max(1) as f64;
                poly.iter().fold(Vec2::ZERO, |acc, v| acc + *v) / n
            }
        }
    }
}

/// Signed separation: distance when apart, `0` when touching, negative on overlap.
///
/// Overlap depth is the separating-axis depth for convex pairs and
/// `-sqrt(intersection area)` when one polygon is non-convex.
pub fn signed_separation(a: &Shape, b: &Shape) -> f64 {
    match (a, b) {
        (Shape::Point(p), Shape::Point(q)) => p.distance(*q),
        (Shape::Point(p), Shape::Polygon(poly)) | (Shape::Polygon(poly), Shape::Point(p)) => {
            signed_distance_point_polygon(*p, poly)
        }
        (Shape::Polygon(pa), Shape::Polygon(pb)) => polygon_separation(pa, pb),
    }
}

fn polygon_separation(a: &[Vec2], b: &[Vec2]) -> f64 {
    let (ca, cb) = (is_convex(a), is_convex(b));
    if ca && cb {
        return match convex_overlap_depth(a, b) {
            Some(depth) => -depth,
            None => vertex_edge_distance(a, b),
        };
    }
    if !polygons_intersect(a, b) {
        return boundary_distance(a, b);
    }
    let clipped = if cb {
        clip_convex(a, b)
    } else if ca {
        clip_convex(b, a)
    } else {
        // two non-convex polygons: deepest contained vertex
        let depth = a
            .iter()
            .map(|p| -signed_distance_point_polygon(*p, b))
            .chain(b.iter().map(|p| -signed_distance_point_polygon(*p, a)))
            .fold(0.0, f64::max);
        return -depth;
    };
    -polygon_signed_area(&clipped).abs().sqrt()
}

/// Distance between two shapes, zero on contact or overlap.
pub fn shape_distance(a: &Shape, b: &Shape) -> f64 {
    signed_separation(a, b).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn decompose_examples() {
        assert_eq!(longitudinal_lateral_decompose(Vec2::new(3.0, 0.0), 0.0), (3.0, 0.0));
        let (l, t) = longitudinal_lateral_decompose(Vec2::new(0.0, 2.0), FRAC_PI_2);
        assert_relative_eq!(l, 2.0, epsilon = 1e-12);
        assert_relative_eq!(t, 0.0, epsilon = 1e-12);
        let (l, t) = longitudinal_lateral_decompose(Vec2::new(1.0, 1.0), FRAC_PI_4);
        assert_relative_eq!(l, SQRT_2, epsilon = 1e-12);
        assert_relative_eq!(t, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn box_distance_along_axis() {
        let a = OrientedRect::new(Vec2::ZERO, 0.0, 4.0, 2.0).polygon();
        let b = OrientedRect::new(Vec2::new(10.0, 0.0), 0.0, 4.0, 2.0).polygon();
        assert_relative_eq!(polygon_distance(&a, &b), 6.0, epsilon = 1e-12);
        assert_relative_eq!(
            signed_separation(&Shape::Polygon(a), &Shape::Polygon(b)),
            6.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn overlapping_boxes_have_negative_separation() {
        let a = Shape::Polygon(OrientedRect::new(Vec2::ZERO, 0.0, 4.0, 2.0).polygon());
        let b = Shape::Polygon(OrientedRect::new(Vec2::new(3.0, 0.0), 0.0, 4.0, 2.0).polygon());
        assert_relative_eq!(signed_separation(&a, &b), -1.0, epsilon = 1e-12);
        assert_eq!(shape_distance(&a, &b), 0.0);
    }

    #[test]
    fn touching_boxes_have_zero_separation() {
        let a = Shape::Polygon(OrientedRect::new(Vec2::ZERO, 0.0, 4.0, 2.0).polygon());
        let b = Shape::Polygon(OrientedRect::new(Vec2::new(4.0, 0.0), 0.0, 4.0, 2.0).polygon());
        assert!(signed_separation(&a, &b).abs() < 1e-12);
    }

    #[test]
    fn point_inside_polygon_is_negative() {
        let sq = OrientedRect::new(Vec2::ZERO, 0.0, 2.0, 2.0).polygon();
        assert_relative_eq!(signed_distance_point_polygon(Vec2::ZERO, &sq), -1.0);
        assert_relative_eq!(signed_distance_point_polygon(Vec2::new(3.0, 0.0), &sq), 2.0);
    }

    #[test]
    fn crossing_bars_overlap_without_contained_vertices() {
        // a thin non-convex L-strip crossed by a long bar
        let strip = [
            Vec2::new(-1.0, -10.0),
            Vec2::new(1.0, -10.0),
            Vec2::new(1.0, 10.0),
            Vec2::new(5.0, 10.0),
            Vec2::new(5.0, 12.0),
            Vec2::new(-1.0, 12.0),
        ];
        assert!(!is_convex(&strip));
        let bar = OrientedRect::new(Vec2::ZERO, 0.0, 6.0, 1.0).polygon();
        let s = signed_separation(&Shape::Polygon(strip.to_vec()), &Shape::Polygon(bar));
        assert_relative_eq!(s, -(2.0f64).sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn inflate_shifts_center() {
        let r = OrientedRect::new(Vec2::ZERO, 0.0, 4.0, 2.0).inflate(2.0, 0.0, 0.5);
        assert_relative_eq!(r.center.x, 1.0);
        assert_relative_eq!(r.length, 6.0);
        assert_relative_eq!(r.width, 3.0);
    }

    #[test]
    fn wrap_angle_range() {
        assert_relative_eq!(wrap_angle(3.0 * core::f64::consts::PI), core::f64::consts::PI);
        assert_relative_eq!(wrap_angle(-FRAC_PI_2), -FRAC_PI_2);
    }
}
