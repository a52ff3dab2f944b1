//! Planar vector math, angle handling, general-position checks, seeded
//! perturbation, and the algebra of finite unions of open circular arcs.
//!
//! Arc sets are treated modulo finite point sets: two open arcs that share an
//! endpoint are merged, and the measure of a set is the sum of its arc
//! lengths. Isolated directions (critical directions) never live inside an
//! [`ArcSet`]; the stratification carries them separately.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Absolute tolerance on angles, in radians.
pub const ANGLE_TOL: f64 = 1e-12;

/// Tolerance on the cross product of a triple, normalized by the squared
/// length of the triple's longest side.
pub const COLLINEAR_TOL: f64 = 1e-12;

/// Seeded generator used everywhere randomness is needed (ChaCha8, seeded via
/// `seed_from_u64`). Its output stream is stable across platforms.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Angle of the vector from the origin, in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Maps any finite angle into `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Counterclockwise distance from `from` to `to`, in `[0, 2π)`.
pub fn ccw_offset(from: f64, to: f64) -> f64 {
    normalize_angle(to - from)
}

/// Shortest angular distance between two angles, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = ccw_offset(a, b);
    d.min(TAU - d)
}

/// A point on the unit circle, stored as its angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(f64);

impl Direction {
    pub fn new(angle: f64) -> Self {
        Direction(normalize_angle(angle))
    }

    pub fn angle(self) -> f64 {
        self.0
    }

    pub fn unit(self) -> Point2 {
        Point2::new(self.0.cos(), self.0.sin())
    }

    pub fn antipode(self) -> Direction {
        Direction::new(self.0 + PI)
    }

    /// Height of `p` in this direction.
    pub fn height(self, p: Point2) -> f64 {
        self.0.cos() * p.x + self.0.sin() * p.y
    }
}

/// Open arc traversed counterclockwise from `start`.
///
/// A length of `2π` stands for the whole circle; the missing start point is
/// immaterial because arc sets are only meaningful up to finitely many points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    start: f64,
    length: f64,
}

impl Arc {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !(start.is_finite() && length > 0.0 && length <= TAU) {
            return Err(invalid(format!(
                "arc needs finite start and length in (0, 2π], got start={start}, length={length}"
            )));
        }
        Ok(Arc {
            start: normalize_angle(start),
            length,
        })
    }

    pub fn full() -> Self {
        Arc {
            start: 0.0,
            length: TAU,
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// End angle, normalized.
    pub fn end(&self) -> f64 {
        normalize_angle(self.start + self.length)
    }

    pub fn midpoint(&self) -> Direction {
        Direction::new(self.start + self.length / 2.0)
    }

    pub fn is_full(&self) -> bool {
        self.length >= TAU
    }

    pub fn contains(&self, d: Direction) -> bool {
        if self.is_full() {
            return true;
        }
        let off = ccw_offset(self.start, d.angle());
        off > 0.0 && off < self.length
    }
}

/// A finite union of pairwise-disjoint open arcs in canonical form: sorted by
/// start angle, with no two arcs touching.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ArcSet {
    arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        ArcSet {
            arcs: vec![Arc::full()],
        }
    }

    pub fn from_arc(arc: Arc) -> Self {
        Self::from_arcs(std::iter::once(arc))
    }

    /// Canonicalizes an arbitrary collection of arcs (overlaps allowed).
    pub fn from_arcs(arcs: impl IntoIterator<Item = Arc>) -> Self {
        let mut intervals = Vec::new();
        for a in arcs {
            push_intervals(&a, &mut intervals);
        }
        Self::from_intervals(intervals)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].is_full()
    }

    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|a| a.length).sum()
    }

    pub fn contains(&self, d: Direction) -> bool {
        self.arcs.iter().any(|a| a.contains(d))
    }

    /// Half the length of the longest arc; zero for the empty set.
    pub fn max_half_width(&self) -> f64 {
        self.arcs.iter().map(|a| a.length / 2.0).fold(0.0, f64::max)
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        let mut iv = self.intervals();
        iv.extend(other.intervals());
        Self::from_intervals(iv)
    }

    pub fn intersect(&self, other: &ArcSet) -> ArcSet {
        let a = merge_intervals(self.intervals());
        let b = merge_intervals(other.intervals());
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if hi - lo > ANGLE_TOL {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    pub fn complement(&self) -> ArcSet {
        let merged = merge_intervals(self.intervals());
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for (lo, hi) in merged {
            if lo - cursor > ANGLE_TOL {
                out.push((cursor, lo));
            }
            cursor = cursor.max(hi);
        }
        if TAU - cursor > ANGLE_TOL {
            out.push((cursor, TAU));
        }
        Self::from_intervals(out)
    }

    /// Arcwise comparison: same number of arcs, starts and lengths within `tol`.
    pub fn approx_eq(&self, other: &ArcSet, tol: f64) -> bool {
        if self.arcs.len() != other.arcs.len() {
            return false;
        }
        if self.is_full() && other.is_full() {
            return true;
        }
        // Canonical order is by start angle, but a start near 0 may sit on
        // either end of the list; align on the first arc.
        let n = self.arcs.len();
        (0..n).any(|shift| {
            (0..n).all(|k| {
                let a = &self.arcs[k];
                let b = &other.arcs[(k + shift) % n];
                angular_distance(a.start, b.start) <= tol && (a.length - b.length).abs() <= tol
            })
        })
    }

    fn intervals(&self) -> Vec<(f64, f64)> {
        let mut iv = Vec::with_capacity(self.arcs.len() + 1);
        for a in &self.arcs {
            push_intervals(a, &mut iv);
        }
        iv
    }

    fn from_intervals(intervals: Vec<(f64, f64)>) -> ArcSet {
        let merged = merge_intervals(intervals);
        if merged.is_empty() {
            return ArcSet::empty();
        }
        if merged.len() == 1 && merged[0].0 <= ANGLE_TOL && merged[0].1 >= TAU - ANGLE_TOL {
            return ArcSet::full();
        }
        let wraps = merged.len() > 1 && merged[0].0 <= ANGLE_TOL && merged[merged.len() - 1].1 >= TAU - ANGLE_TOL;
        let mut arcs = Vec::with_capacity(merged.len());
        let body = if wraps {
            &merged[1..merged.len() - 1]
        } else {
            &merged[..]
        };
        for &(lo, hi) in body {
            arcs.push(Arc {
                start: lo,
                length: hi - lo,
            });
        }
        if wraps {
            let (first, last) = (merged[0], merged[merged.len() - 1]);
            arcs.push(Arc {
                start: last.0,
                length: (TAU - last.0) + first.1,
            });
        }
        ArcSet { arcs }
    }
}

fn push_intervals(a: &Arc, out: &mut Vec<(f64, f64)>) {
    if a.is_full() {
        out.push((0.0, TAU));
        return;
    }
    let end = a.start + a.length;
    if end <= TAU {
        out.push((a.start, end));
    } else {
        out.push((a.start, TAU));
        out.push((0.0, end - TAU));
    }
}

/// Sorts and merges intervals of `[0, 2π]`, joining those separated by at most
/// [`ANGLE_TOL`] and dropping slivers shorter than it.
fn merge_intervals(mut iv: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    iv.retain(|&(lo, hi)| hi - lo > ANGLE_TOL);
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
    for (lo, hi) in iv {
        match out.last_mut() {
            Some(last) if lo <= last.1 + ANGLE_TOL => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedCoordinate {
    pub i: usize,
    pub j: usize,
    pub axis: Axis,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneralPositionReport {
    pub collinear_triples: Vec<[usize; 3]>,
    pub shared_coordinate_pairs: Vec<SharedCoordinate>,
}

impl GeneralPositionReport {
    pub fn is_clean(&self) -> bool {
        self.collinear_triples.is_empty() && self.shared_coordinate_pairs.is_empty()
    }
}

/// Whether `a`, `b`, `c` are collinear within [`COLLINEAR_TOL`].
pub fn collinear(a: Point2, b: Point2, c: Point2) -> bool {
    let longest = (b - a).norm().max((c - a).norm()).max((c - b).norm());
    if longest == 0.0 {
        return true;
    }
    (b - a).cross(c - a).abs() <= COLLINEAR_TOL * longest * longest
}

/// Lists every collinear triple and every pair of points sharing an x or y
/// value. O(n³) in the number of points.
pub fn general_position_check(points: &[Point2]) -> GeneralPositionReport {
    let n = points.len();
    let mut report = GeneralPositionReport::default();
    for i in 0..n {
        for j in i + 1..n {
            if points[i].x == points[j].x {
                report
                    .shared_coordinate_pairs
                    .push(SharedCoordinate { i, j, axis: Axis::X });
            }
            if points[i].y == points[j].y {
                report
                    .shared_coordinate_pairs
                    .push(SharedCoordinate { i, j, axis: Axis::Y });
            }
            for k in j + 1..n {
                if collinear(points[i], points[j], points[k]) {
                    report.collinear_triples.push([i, j, k]);
                }
            }
        }
    }
    report
}

/// Offsets every coordinate by an independent draw from
/// `[-magnitude, magnitude)`, using [`SeededRng`] seeded with `seed`.
/// Draw order is x then y, point by point.
pub fn perturb(points: &[Point2], magnitude: f64, seed: u64) -> Result<Vec<Point2>> {
    if !(magnitude > 0.0 && magnitude.is_finite()) {
        return Err(invalid(format!(
            "perturbation magnitude must be positive, got {magnitude}"
        )));
    }
    let mut rng = seeded_rng(seed);
    Ok(points
        .iter()
        .map(|p| {
            let dx = rng.gen_range(-magnitude..magnitude);
            let dy = rng.gen_range(-magnitude..magnitude);
            Point2::new(p.x + dx, p.y + dy)
        })
        .collect())
}

/// Angle between the lines spanned by `a` and `b`, in `[0, π/2]`.
pub fn line_angle(a: Point2, b: Point2) -> f64 {
    a.cross(b).abs().atan2(a.dot(b).abs())
}

/// Smallest angle between the lines spanned by any two distinct difference
/// vectors of the point set. Brute force over all pairs of pairs, so
/// O(n⁴); intended for verification-sized inputs.
///
/// Fails when two difference vectors are parallel (the minimum would be 0)
/// or when two points coincide.
pub fn min_pairwise_line_angle(points: &[Point2]) -> Result<f64> {
    let n = points.len();
    if n < 3 {
        return Err(invalid(format!("need at least 3 points, got {n}")));
    }
    let mut diffs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let d = points[j] - points[i];
            if d.norm() == 0.0 {
                return Err(Error::DuplicatePoint(i, j));
            }
            diffs.push((i, j, d));
        }
    }
    let mut best = f64::INFINITY;
    let mut arg = (0, 0);
    for a in 0..diffs.len() {
        for b in a + 1..diffs.len() {
            let ang = line_angle(diffs[a].2, diffs[b].2);
            if ang < best {
                best = ang;
                arg = (a, b);
            }
        }
    }
    if best <= ANGLE_TOL {
        let (p, q) = (diffs[arg.0], diffs[arg.1]);
        return Err(Error::ParallelDifferences(p.0, p.1, q.0, q.1));
    }
    Ok(best)
}
