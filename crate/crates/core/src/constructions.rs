//! Generators for the worked complexes (the small triangle, the staircase of
//! thin triangles that needs one direction per apex, the lost-vertex pair),
//! random corpora, and a sampled Hausdorff distance between complexes.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{segments_intersect, validate, SimplicialComplex2D};
use crate::error::{invalid, Error, Result};
use crate::geometry::{collinear, general_position_check, seeded_rng, ArcSet, Point2, SeededRng};
use crate::stratification::observing_regions;

/// Filled triangle on (0,0), (2,1), (1,3).
pub fn example_triangle() -> SimplicialComplex2D {
    SimplicialComplex2D::new(
        vec![Point2::new(0., 0.), Point2::new(2., 1.), Point2::new(1., 3.)],
        vec![[0, 1], [0, 2], [1, 2]],
        vec![[0, 1, 2]],
    )
}

/// `n` thin triangles whose apexes have pairwise disjoint observing regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundComplex {
    pub complex: SimplicialComplex2D,
    pub apex_ids: Vec<usize>,
    pub epsilon_used: f64,
    /// Smallest gap between two chord slopes.
    pub delta_star: f64,
    /// Observing region of each apex, in `apex_ids` order.
    pub apex_regions: Vec<ArcSet>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub n: usize,
    pub delta_star: f64,
    pub epsilon_used: f64,
    pub disjoint: bool,
    /// Per apex, its arcs as `[start, length]`.
    pub region_arcs: Vec<Vec<[f64; 2]>>,
    /// Directions needed to observe every apex.
    pub min_directions: usize,
}

impl LowerBoundComplex {
    pub fn report(&self) -> LowerBoundReport {
        LowerBoundReport {
            n: self.apex_ids.len(),
            delta_star: self.delta_star,
            epsilon_used: self.epsilon_used,
            disjoint: regions_disjoint(&self.apex_regions).is_none(),
            region_arcs: self
                .apex_regions
                .iter()
                .map(|r| r.arcs().iter().map(|a| [a.start(), a.length()]).collect())
                .collect(),
            min_directions: self.apex_ids.len(),
        }
    }
}

fn regions_disjoint(regions: &[ArcSet]) -> Option<(usize, usize)> {
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            if !regions[i].intersect(&regions[j]).is_empty() {
                return Some((i, j));
            }
        }
    }
    None
}

/// For `i` in `{2, 5, …, 3n−1}`: base vertices `(i−1, i−1)` and
/// `(i+1, i+1+1/i)`, apex `(i, i + 1/(2i) + ε)`, filled. The chord under
/// apex `i` has slope `1 + 1/(2i)`; `ε` is a quarter of the smallest slope
/// gap (or of `1/(3n)` when `n = 1`). Fails if two apex regions overlap or
/// an apex is never observed.
pub fn lower_bound_complex(n: usize) -> Result<LowerBoundComplex> {
    if n < 1 {
        return Err(invalid("lower bound complex needs n >= 1"));
    }
    let idx: Vec<f64> = (0..n).map(|j| (3 * j + 2) as f64).collect();
    let slopes: Vec<f64> = idx.iter().map(|i| 1.0 + 1.0 / (2.0 * i)).collect();
    let mut delta_star = f64::INFINITY;
    for a in 0..n {
        for b in a + 1..n {
            delta_star = delta_star.min((slopes[a] - slopes[b]).abs());
        }
    }
    if n == 1 {
        delta_star = 1.0 / 3.0;
    }
    let eps = delta_star / 4.0;

    let mut vertices = Vec::with_capacity(3 * n);
    let mut edges = Vec::with_capacity(3 * n);
    let mut triangles = Vec::with_capacity(n);
    let mut apex_ids = Vec::with_capacity(n);
    for &i in &idx {
        let base = vertices.len();
        vertices.push(Point2::new(i - 1.0, i - 1.0));
        vertices.push(Point2::new(i, i + 1.0 / (2.0 * i) + eps));
        vertices.push(Point2::new(i + 1.0, i + 1.0 + 1.0 / i));
        edges.extend([[base, base + 1], [base, base + 2], [base + 1, base + 2]]);
        triangles.push([base, base + 1, base + 2]);
        apex_ids.push(base + 1);
    }
    let complex = SimplicialComplex2D::new(vertices, edges, triangles);
    let regions = observing_regions(&complex)?;
    let apex_regions: Vec<ArcSet> = apex_ids.iter().map(|&a| regions[a].region.clone()).collect();
    if let Some(e) = apex_regions.iter().position(|r| r.is_empty()) {
        return Err(Error::Construction(format!("apex {} is never observed", apex_ids[e])));
    }
    if let Some((a, b)) = regions_disjoint(&apex_regions) {
        return Err(Error::Construction(format!(
            "regions of apexes {} and {} overlap (n={n}, delta*={delta_star:e}, eps={eps:e}): {:?} / {:?}",
            apex_ids[a],
            apex_ids[b],
            apex_regions[a].arcs(),
            apex_regions[b].arcs()
        )));
    }
    Ok(LowerBoundComplex {
        complex,
        apex_ids,
        epsilon_used: eps,
        delta_star,
        apex_regions,
    })
}

/// Two complexes that agree on every direction outside the observing
/// region of `v`: `k` has the path `u–v–w`, `k_prime` replaces it by the
/// edge `u–w`. Both contain the context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LostVertexPair {
    pub k: SimplicialComplex2D,
    pub k_prime: SimplicialComplex2D,
    /// Id of `v` in `k`.
    pub v_id: usize,
    /// Turning angle `π − ∠uvw`.
    pub theta: f64,
    /// Distance from `v` to the segment `uw`, `‖v−w‖·cos(∠uvw/2)`, which is
    /// the Hausdorff distance between the two complexes.
    pub predicted_hausdorff: f64,
    /// `‖v−w‖·cos(θ/2)`; equals `predicted_hausdorff` only for a right angle
    /// at `v`.
    pub cos_half_turn: f64,
}

/// Builds the pair for an isosceles corner `u, v, w` (`‖u−v‖ = ‖w−v‖`). The
/// context may not reach into the open ball around `v` through `u` and `w`.
pub fn lost_vertex_pair(
    u: Point2,
    v: Point2,
    w: Point2,
    context: Option<&SimplicialComplex2D>,
) -> Result<LostVertexPair> {
    let (ru, rw) = (u.distance(v), w.distance(v));
    if !(ru > 0.0 && rw > 0.0) {
        return Err(invalid("u, v, w must be distinct"));
    }
    if (ru - rw).abs() > 1e-12 * ru.max(1.0) {
        return Err(invalid(format!("u and w must be equidistant from v: {ru} vs {rw}")));
    }
    if collinear(u, v, w) {
        return Err(invalid("u, v, w are collinear; the corner at v is flat"));
    }
    let empty = SimplicialComplex2D::default();
    let ctx = context.unwrap_or(&empty);
    check_ball(ctx, v, rw)?;

    let m = ctx.num_vertices();
    let mut k = ctx.clone();
    k.vertices.extend([u, v, w]);
    k.edges.extend([[m, m + 1], [m + 1, m + 2]]);
    let mut k_prime = ctx.clone();
    k_prime.vertices.extend([u, w]);
    k_prime.edges.push([m, m + 1]);

    let gp = general_position_check(&k.vertices);
    if let Some(t) = gp.collinear_triples.first() {
        return Err(invalid(format!("vertices {t:?} are collinear")));
    }

    let angle = angle_between(u - v, w - v);
    let theta = PI - angle;
    Ok(LostVertexPair {
        k,
        k_prime,
        v_id: m + 1,
        theta,
        predicted_hausdorff: rw * (angle / 2.0).cos(),
        cos_half_turn: rw * (theta / 2.0).cos(),
    })
}

fn check_ball(ctx: &SimplicialComplex2D, center: Point2, r: f64) -> Result<()> {
    let inside = |p: Point2| p.distance(center) < r;
    for (i, &p) in ctx.vertices.iter().enumerate() {
        if inside(p) {
            return Err(invalid(format!("context vertex {i} lies in the open ball around v")));
        }
    }
    for &[a, b] in &ctx.edges {
        if point_segment_distance(center, ctx.vertices[a], ctx.vertices[b]) < r {
            return Err(invalid(format!(
                "context edge ({a}, {b}) enters the open ball around v"
            )));
        }
    }
    for &[a, b, c] in &ctx.triangles {
        let (pa, pb, pc) = (ctx.vertices[a], ctx.vertices[b], ctx.vertices[c]);
        if point_in_closed_triangle(center, pa, pb, pc) {
            return Err(invalid(format!("context triangle ({a}, {b}, {c}) contains v")));
        }
    }
    Ok(())
}

/// Unsigned angle in `[0, π]` between two vectors.
fn angle_between(a: Point2, b: Point2) -> f64 {
    a.cross(b).abs().atan2(a.dot(b))
}

pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

fn point_in_closed_triangle(p: Point2, a: Point2, b: Point2, c: Point2) -> bool {
    let d1 = (b - a).cross(p - a);
    let d2 = (c - b).cross(p - b);
    let d3 = (a - c).cross(p - c);
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

/// Exact distance from `p` to the underlying set of `k`.
pub fn point_complex_distance(p: Point2, k: &SimplicialComplex2D) -> f64 {
    let v = &k.vertices;
    if k.triangles
        .iter()
        .any(|&[a, b, c]| point_in_closed_triangle(p, v[a], v[b], v[c]))
    {
        return 0.0;
    }
    let dv = v.iter().map(|&q| p.distance(q)).fold(f64::INFINITY, f64::min);
    k.edges
        .iter()
        .map(|&[a, b]| point_segment_distance(p, v[a], v[b]))
        .fold(dv, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HausdorffEstimate {
    pub value: f64,
    /// Longest sampled segment divided by the resolution.
    pub bound: f64,
}

/// Symmetric Hausdorff distance between the underlying sets, maximizing
/// the exact point-to-set distance over all vertices and `resolution`
/// uniform samples per edge (triangle edges are edges of the complex).
pub fn hausdorff_distance(
    k: &SimplicialComplex2D,
    k2: &SimplicialComplex2D,
    resolution: usize,
) -> Result<HausdorffEstimate> {
    if resolution < 1 {
        return Err(invalid("resolution must be at least 1"));
    }
    if k.is_empty() || k2.is_empty() {
        return Err(invalid("Hausdorff distance needs nonempty complexes"));
    }
    let (a, la) = directed_hausdorff(k, k2, resolution);
    let (b, lb) = directed_hausdorff(k2, k, resolution);
    Ok(HausdorffEstimate {
        value: a.max(b),
        bound: la.max(lb) / resolution as f64,
    })
}

fn directed_hausdorff(from: &SimplicialComplex2D, to: &SimplicialComplex2D, res: usize) -> (f64, f64) {
    let v = &from.vertices;
    let dv = v
        .par_iter()
        .map(|&p| point_complex_distance(p, to))
        .reduce(|| 0.0, f64::max);
    let de = from
        .edges
        .par_iter()
        .map(|&[a, b]| {
            let (pa, pb) = (v[a], v[b]);
            (0..=res)
                .map(|s| point_complex_distance(pa + (pb - pa) * (s as f64 / res as f64), to))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let longest = from.edges.iter().map(|&[a, b]| v[a].distance(v[b])).fold(0.0, f64::max);
    (dv.max(de), longest)
}

/// Uniform points in `[lo, hi)²`.
pub fn random_points(rng: &mut SeededRng, k: usize, lo: f64, hi: f64) -> Vec<Point2> {
    (0..k)
        .map(|_| {
            let x = rng.gen_range(lo..hi);
            let y = rng.gen_range(lo..hi);
            Point2::new(x, y)
        })
        .collect()
}

/// A random simple polygon with `n >= 3` vertices in general position, as a
/// cycle graph. Vertices sit at sorted random angles around the origin with
/// radii in `[0.5, 1.5)`, which keeps the polygon star-shaped.
pub fn random_polygon(rng: &mut SeededRng, n: usize) -> Result<SimplicialComplex2D> {
    if n < 3 {
        return Err(invalid("a polygon needs at least 3 vertices"));
    }
    for _ in 0..1000 {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let max_gap = (0..n)
            .map(|i| {
                let next = if i + 1 < n { angles[i + 1] } else { angles[0] + TAU };
                next - angles[i]
            })
            .fold(0.0, f64::max);
        if max_gap >= PI * 0.95 {
            continue;
        }
        let pts: Vec<Point2> = angles
            .iter()
            .map(|&a| {
                let r = rng.gen_range(0.5..1.5);
                Point2::new(r * a.cos(), r * a.sin())
            })
            .collect();
        let k = SimplicialComplex2D::cycle(pts);
        if validate(&k).is_valid() && well_separated(&k.vertices) {
            return Ok(k);
        }
    }
    Err(Error::Construction(format!("no valid {n}-gon after 1000 attempts")))
}

/// Rejects configurations whose vertex pairs nearly tie in some direction
/// with a third pair (keeps test corpora away from the merge tolerance).
fn well_separated(points: &[Point2]) -> bool {
    crate::geometry::min_pairwise_line_angle(points).is_ok_and(|a| a > 1e-9)
}

/// A filled triangle with vertices uniform in `[0, 10)²`, resampled until its
/// smallest corner exceeds 0.01 rad.
pub fn random_filled_triangle(rng: &mut SeededRng) -> SimplicialComplex2D {
    loop {
        let p = random_points(rng, 3, 0.0, 10.0);
        let corner = |a: Point2, b: Point2, c: Point2| angle_between(b - a, c - a);
        let smallest = corner(p[0], p[1], p[2])
            .min(corner(p[1], p[0], p[2]))
            .min(corner(p[2], p[0], p[1]));
        if smallest > 0.01 && general_position_check(&p).is_clean() {
            return SimplicialComplex2D::new(p, vec![[0, 1], [0, 2], [1, 2]], vec![[0, 1, 2]]);
        }
    }
}

/// An isosceles corner `(u, v, w)` with legs in `[0.5, 2)` and apex angle in
/// `[0.3, π − 0.3)`, placed and rotated at random.
pub fn random_isosceles(rng: &mut SeededRng) -> (Point2, Point2, Point2) {
    loop {
        let v = Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let r = rng.gen_range(0.5..2.0);
        let phi = rng.gen_range(0.0..TAU);
        let alpha = rng.gen_range(0.3..PI - 0.3);
        let leg = |a: f64| v + Point2::new(a.cos(), a.sin()) * r;
        let (u, w) = (leg(phi - alpha / 2.0), leg(phi + alpha / 2.0));
        if ((u - v).norm() - (w - v).norm()).abs() <= 1e-12 && general_position_check(&[u, v, w]).is_clean() {
            return (u, v, w);
        }
    }
}

/// Random embedded complexes on `1..=max_vertices` vertices: random points,
/// non-crossing random edges, and a random subset of the empty 3-cycles
/// filled in.
pub fn small_complex_suite(count: usize, max_vertices: usize, seed: u64) -> Vec<SimplicialComplex2D> {
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=max_vertices.max(1));
        let pts = random_points(&mut rng, n, 0.0, 10.0);
        if n >= 3 && !well_separated(&pts) || !general_position_check(&pts).is_clean() {
            continue;
        }
        let mut k = SimplicialComplex2D::from_points(pts);
        let mut pairs: Vec<[usize; 2]> = (0..n).flat_map(|i| (i + 1..n).map(move |j| [i, j])).collect();
        for i in (1..pairs.len()).rev() {
            pairs.swap(i, rng.gen_range(0..=i));
        }
        let density = rng.gen_range(0.2..1.0);
        for e in pairs {
            if rng.gen::<f64>() > density {
                continue;
            }
            let v = &k.vertices;
            let crosses = k.edges.iter().any(|&[a, b]| {
                let shared = a == e[0] || a == e[1] || b == e[0] || b == e[1];
                !shared && segments_intersect(v[a], v[b], v[e[0]], v[e[1]])
            });
            if !crosses {
                k.edges.push(e);
            }
        }
        let adj = k.adjacency();
        for a in 0..n {
            for &b in adj[a].iter().filter(|&&b| b > a) {
                for &c in adj[b].iter().filter(|&&c| c > b) {
                    if adj[a].contains(&c) && rng.gen_bool(0.5) {
                        let v = &k.vertices;
                        let empty = (0..n)
                            .filter(|&x| x != a && x != b && x != c)
                            .all(|x| !point_in_closed_triangle(v[x], v[a], v[b], v[c]));
                        if empty {
                            k.triangles.push([a, b, c]);
                        }
                    }
                }
            }
        }
        if validate(&k).is_simplicial() {
            out.push(k);
        }
    }
    out
}
