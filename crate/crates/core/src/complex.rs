//! Geometric simplicial complexes in the plane, their validation, and
//! lower-star filtrations in a direction.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    collinear, general_position_check, Direction, GeneralPositionReport, Point2, ANGLE_TOL, COLLINEAR_TOL,
};

/// Two vertices tie in a direction when their heights differ by at most this
/// many radians times their distance, i.e. the direction is this close to
/// orthogonal to their difference vector.
pub const TIE_TOL: f64 = ANGLE_TOL / 4.0;

/// A simplicial complex of dimension at most two, embedded in the plane.
/// Vertex ids are indices into `vertices`; edges store `i < j` and triangles
/// `i < j < k`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SimplicialComplex2D {
    pub vertices: Vec<Point2>,
    pub edges: Vec<[usize; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

impl SimplicialComplex2D {
    /// Builds a complex without checking it; indices inside each simplex are
    /// sorted. Use [`validate`] to inspect the result, or [`Self::try_new`].
    pub fn new(vertices: Vec<Point2>, edges: Vec<[usize; 2]>, triangles: Vec<[usize; 3]>) -> Self {
        let edges = edges
            .into_iter()
            .map(|[a, b]| if a <= b { [a, b] } else { [b, a] })
            .collect();
        let triangles = triangles
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        Self {
            vertices,
            edges,
            triangles,
        }
    }

    /// Like [`Self::new`], but rejects dangling indices and missing faces.
    pub fn try_new(vertices: Vec<Point2>, edges: Vec<[usize; 2]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let k = Self::new(vertices, edges, triangles);
        k.check_closure()?;
        Ok(k)
    }

    /// Vertices only.
    pub fn from_points(vertices: Vec<Point2>) -> Self {
        Self::new(vertices, Vec::new(), Vec::new())
    }

    /// The closed polygon through `points` in order, as a cycle graph.
    pub fn cycle(points: Vec<Point2>) -> Self {
        let n = points.len();
        let edges = (0..n).map(|i| [i, (i + 1) % n]).collect();
        Self::new(points, edges, Vec::new())
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Neighbor lists derived from the edges.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &[a, b] in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Removes a vertex and every simplex containing it, renumbering the
    /// remaining vertices.
    pub fn remove_vertex(&self, v: usize) -> Self {
        let remap = |i: usize| if i > v { i - 1 } else { i };
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != v)
            .map(|(_, p)| *p)
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| !e.contains(&v))
            .map(|&[a, b]| [remap(a), remap(b)])
            .collect();
        let triangles = self
            .triangles
            .iter()
            .filter(|t| !t.contains(&v))
            .map(|&[a, b, c]| [remap(a), remap(b), remap(c)])
            .collect();
        Self::new(vertices, edges, triangles)
    }

    fn check_closure(&self) -> Result<()> {
        let n = self.vertices.len();
        for (i, p) in self.vertices.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "vertex {i} has a non-finite coordinate"
                )));
            }
        }
        let edge_set: HashSet<[usize; 2]> = self.edges.iter().copied().collect();
        for e in &self.edges {
            if e[1] >= n || e[0] == e[1] {
                return Err(Error::FaceClosure(format!(
                    "edge {e:?} is not a pair of existing vertices"
                )));
            }
        }
        for t in &self.triangles {
            if t[2] >= n || t[0] == t[1] || t[1] == t[2] {
                return Err(Error::FaceClosure(format!(
                    "triangle {t:?} is not a triple of existing vertices"
                )));
            }
            for f in triangle_edges(*t) {
                if !edge_set.contains(&f) {
                    return Err(Error::FaceClosure(format!("triangle {t:?} is missing edge {f:?}")));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn triangle_edges([a, b, c]: [usize; 3]) -> [[usize; 2]; 3] {
    [[a, b], [a, c], [b, c]]
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Simplices that reference vertices that do not exist or repeat a vertex.
    pub bad_simplices: Vec<String>,
    pub duplicate_simplices: Vec<String>,
    /// `(triangle index, missing edge)`.
    pub missing_edges: Vec<(usize, [usize; 2])>,
    /// Pairs of edge indices whose segments meet outside a shared vertex.
    pub improper_crossings: Vec<(usize, usize)>,
    /// `(vertex, edge index)` with the vertex in the edge's relative interior.
    pub vertex_on_edge: Vec<(usize, usize)>,
    /// `(vertex, triangle index)` with the vertex inside the open triangle.
    pub vertex_in_triangle: Vec<(usize, usize)>,
    pub general_position: GeneralPositionReport,
}

impl ValidationReport {
    /// Face-closed and geometrically embedded.
    pub fn is_simplicial(&self) -> bool {
        self.bad_simplices.is_empty()
            && self.duplicate_simplices.is_empty()
            && self.missing_edges.is_empty()
            && self.improper_crossings.is_empty()
            && self.vertex_on_edge.is_empty()
            && self.vertex_in_triangle.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.is_simplicial() && self.general_position.is_clean()
    }
}

/// Checks face closure, embedding, and general position.
pub fn validate(k: &SimplicialComplex2D) -> ValidationReport {
    let n = k.vertices.len();
    let mut report = ValidationReport {
        general_position: general_position_check(&k.vertices),
        ..Default::default()
    };

    let mut seen = HashSet::new();
    for e in &k.edges {
        if e[1] >= n || e[0] == e[1] {
            report.bad_simplices.push(format!("edge {e:?}"));
        } else if !seen.insert(*e) {
            report.duplicate_simplices.push(format!("edge {e:?}"));
        }
    }
    let mut seen_t = HashSet::new();
    for (ti, t) in k.triangles.iter().enumerate() {
        if t[2] >= n || t[0] == t[1] || t[1] == t[2] {
            report.bad_simplices.push(format!("triangle {t:?}"));
            continue;
        }
        if !seen_t.insert(*t) {
            report.duplicate_simplices.push(format!("triangle {t:?}"));
        }
        for f in triangle_edges(*t) {
            if !seen.contains(&f) {
                report.missing_edges.push((ti, f));
            }
        }
    }
    if !report.bad_simplices.is_empty() {
        return report;
    }

    let v = &k.vertices;
    for (ei, &[a, b]) in k.edges.iter().enumerate() {
        for (fi, &[c, d]) in k.edges.iter().enumerate().skip(ei + 1) {
            let shared = a == c || a == d || b == c || b == d;
            if !shared && segments_intersect(v[a], v[b], v[c], v[d]) {
                report.improper_crossings.push((ei, fi));
            }
        }
        for w in 0..n {
            if w != a && w != b && point_in_open_segment(v[w], v[a], v[b]) {
                report.vertex_on_edge.push((w, ei));
            }
        }
    }
    for (ti, &[a, b, c]) in k.triangles.iter().enumerate() {
        for w in 0..n {
            if w != a && w != b && w != c && point_in_open_triangle(v[w], v[a], v[b], v[c]) {
                report.vertex_in_triangle.push((w, ti));
            }
        }
    }
    report
}

fn orient(a: Point2, b: Point2, c: Point2) -> i8 {
    if collinear(a, b, c) {
        return 0;
    }
    if (b - a).cross(c - a) > 0.0 {
        1
    } else {
        -1
    }
}

fn on_closed_segment(p: Point2, a: Point2, b: Point2) -> bool {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p == a;
    }
    let t = (p - a).dot(ab) / len2;
    (-COLLINEAR_TOL..=1.0 + COLLINEAR_TOL).contains(&t) && collinear(a, b, p)
}

fn point_in_open_segment(p: Point2, a: Point2, b: Point2) -> bool {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 || !collinear(a, b, p) {
        return false;
    }
    let t = (p - a).dot(ab) / len2;
    t > 0.0 && t < 1.0
}

/// Closed-segment intersection test.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    (o1 == 0 && on_closed_segment(c, a, b))
        || (o2 == 0 && on_closed_segment(d, a, b))
        || (o3 == 0 && on_closed_segment(a, c, d))
        || (o4 == 0 && on_closed_segment(b, c, d))
}

fn point_in_open_triangle(p: Point2, a: Point2, b: Point2, c: Point2) -> bool {
    let (o1, o2, o3) = (orient(a, b, p), orient(b, c, p), orient(c, a, p));
    o1 != 0 && o1 == o2 && o2 == o3
}

/// Vertex heights `s·v` in direction `s`.
pub fn heights(k: &SimplicialComplex2D, s: Direction) -> Vec<f64> {
    let (c, sn) = (s.angle().cos(), s.angle().sin());
    k.vertices.iter().map(|p| c * p.x + sn * p.y).collect()
}

/// Vertex ids sorted by height in direction `s`, failing if any two vertices
/// tie within [`TIE_TOL`].
pub fn vertex_order(points: &[Point2], s: Direction) -> Result<Vec<usize>> {
    let (c, sn) = (s.angle().cos(), s.angle().sin());
    let h: Vec<f64> = points.iter().map(|p| c * p.x + sn * p.y).collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| h[a].total_cmp(&h[b]).then(a.cmp(&b)));

    let diameter = bounding_diameter(points);
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if h[j] - h[i] > TIE_TOL * diameter {
                break;
            }
            if (h[j] - h[i]).abs() <= TIE_TOL * points[i].distance(points[j]) {
                return Err(Error::DegenerateDirection {
                    angle: s.angle(),
                    u: i.min(j),
                    v: i.max(j),
                });
            }
        }
    }
    Ok(order)
}

fn bounding_diameter(points: &[Point2]) -> f64 {
    let (mut lo, mut hi) = (
        Point2::new(f64::INFINITY, f64::INFINITY),
        Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    if points.is_empty() {
        0.0
    } else {
        (hi - lo).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Simplex {
    Vertex(usize),
    Edge(usize),
    Triangle(usize),
}

impl Simplex {
    pub fn dim(self) -> usize {
        match self {
            Simplex::Vertex(_) => 0,
            Simplex::Edge(_) => 1,
            Simplex::Triangle(_) => 2,
        }
    }

    pub fn id(self) -> usize {
        match self {
            Simplex::Vertex(i) | Simplex::Edge(i) | Simplex::Triangle(i) => i,
        }
    }

    pub fn vertices(self, k: &SimplicialComplex2D) -> Vec<usize> {
        match self {
            Simplex::Vertex(i) => vec![i],
            Simplex::Edge(i) => k.edges[i].to_vec(),
            Simplex::Triangle(i) => k.triangles[i].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiltrationEntry {
    pub simplex: Simplex,
    /// Height of the simplex's highest vertex.
    pub value: f64,
    /// The vertex attaining `value`.
    pub top_vertex: usize,
}

/// Lower-star filtration: simplices sorted by `(value, dimension, id)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    pub direction: Direction,
    pub entries: Vec<FiltrationEntry>,
}

impl Filtration {
    /// Every simplex appears after all of its faces.
    pub fn is_face_respecting(&self, k: &SimplicialComplex2D) -> bool {
        let mut pos_v = vec![usize::MAX; k.vertices.len()];
        let mut pos_e = std::collections::HashMap::new();
        for (p, e) in self.entries.iter().enumerate() {
            match e.simplex {
                Simplex::Vertex(v) => pos_v[v] = p,
                Simplex::Edge(i) => {
                    let [a, b] = k.edges[i];
                    if pos_v[a] > p || pos_v[b] > p {
                        return false;
                    }
                    pos_e.insert(k.edges[i], p);
                }
                Simplex::Triangle(i) => {
                    for f in triangle_edges(k.triangles[i]) {
                        match pos_e.get(&f) {
                            Some(&q) if q < p => {}
                            _ => return false,
                        }
                    }
                }
            }
        }
        true
    }

    /// Vertex ids in order of appearance.
    pub fn vertex_order(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter_map(|e| match e.simplex {
                Simplex::Vertex(v) => Some(v),
                _ => None,
            })
            .collect()
    }
}

/// Builds the lower-star filtration of `k` in direction `s`. Directions where
/// two vertices tie are rejected.
pub fn lower_star_filtration(k: &SimplicialComplex2D, s: Direction) -> Result<Filtration> {
    vertex_order(&k.vertices, s)?;
    let h = heights(k, s);
    let top = |vs: &[usize]| -> usize {
        *vs.iter()
            .max_by(|&&a, &&b| h[a].total_cmp(&h[b]))
            .expect("simplex has vertices")
    };
    let mut entries = Vec::with_capacity(k.vertices.len() + k.edges.len() + k.triangles.len());
    for (v, &value) in h.iter().enumerate() {
        entries.push(FiltrationEntry {
            simplex: Simplex::Vertex(v),
            value,
            top_vertex: v,
        });
    }
    for (i, e) in k.edges.iter().enumerate() {
        let t = top(e);
        entries.push(FiltrationEntry {
            simplex: Simplex::Edge(i),
            value: h[t],
            top_vertex: t,
        });
    }
    for (i, tri) in k.triangles.iter().enumerate() {
        let t = top(tri);
        entries.push(FiltrationEntry {
            simplex: Simplex::Triangle(i),
            value: h[t],
            top_vertex: t,
        });
    }
    entries.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.simplex.dim().cmp(&b.simplex.dim()))
            .then(a.simplex.id().cmp(&b.simplex.id()))
    });
    Ok(Filtration { direction: s, entries })
}

/// Whether `s` and `t` see the vertices of `k` in the same order.
pub fn filtration_order_equivalent(k: &SimplicialComplex2D, s: Direction, t: Direction) -> Result<bool> {
    Ok(vertex_order(&k.vertices, s)? == vertex_order(&k.vertices, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn triangle(filled: bool) -> SimplicialComplex2D {
        let v = vec![Point2::new(0., 0.), Point2::new(2., 1.), Point2::new(1., 3.)];
        let t = if filled { vec![[0, 1, 2]] } else { vec![] };
        SimplicialComplex2D::new(v, vec![[0, 1], [0, 2], [1, 2]], t)
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&triangle(true)).is_valid());

        let crossing = SimplicialComplex2D::new(
            vec![
                Point2::new(0., 0.),
                Point2::new(2., 2.1),
                Point2::new(0.1, 2.),
                Point2::new(2.2, -0.3),
            ],
            vec![[0, 1], [2, 3]],
            vec![],
        );
        let r = validate(&crossing);
        assert_eq!(r.improper_crossings, vec![(0, 1)]);
        assert!(!r.is_simplicial());

        let open = SimplicialComplex2D::new(triangle(true).vertices, vec![[0, 1], [1, 2]], vec![[0, 1, 2]]);
        let r = validate(&open);
        assert_eq!(r.missing_edges, vec![(0, [0, 2])]);
        assert!(SimplicialComplex2D::try_new(open.vertices, open.edges, open.triangles).is_err());
    }

    #[test]
    fn vertex_on_edge_and_inside_triangle() {
        let k = SimplicialComplex2D::new(
            vec![Point2::new(0., 0.), Point2::new(2., 2.), Point2::new(1., 1.)],
            vec![[0, 1]],
            vec![],
        );
        assert_eq!(validate(&k).vertex_on_edge, vec![(2, 0)]);

        let mut t = triangle(true);
        t.vertices.push(Point2::new(1.1, 1.3));
        assert_eq!(validate(&t).vertex_in_triangle, vec![(3, 0)]);
    }

    #[test]
    fn heights_examples() {
        let k = SimplicialComplex2D::from_points(vec![Point2::new(0., 1.), Point2::new(2., 1.), Point2::new(1., 3.)]);
        let up = heights(&k, Direction::new(FRAC_PI_2));
        assert!((up[0] - 1.0).abs() < 1e-15);
        assert!((up[2] - 3.0).abs() < 1e-15);
        assert_eq!(heights(&k, Direction::new(0.0))[1], 2.0);
    }

    #[test]
    fn filled_triangle_filtration_order() {
        let k = triangle(true);
        let f = lower_star_filtration(&k, Direction::new(FRAC_PI_2)).unwrap();
        let got: Vec<Simplex> = f.entries.iter().map(|e| e.simplex).collect();
        use Simplex::*;
        // v1; v2, e(v1,v2); v3, e(v1,v3), e(v2,v3), t
        assert_eq!(
            got,
            vec![Vertex(0), Vertex(1), Edge(0), Vertex(2), Edge(1), Edge(2), Triangle(0)]
        );
        assert!(f.is_face_respecting(&k));
    }

    #[test]
    fn tied_direction_is_rejected() {
        let square = SimplicialComplex2D::cycle(vec![
            Point2::new(0., 0.),
            Point2::new(1., 0.),
            Point2::new(1., 1.),
            Point2::new(0., 1.),
        ]);
        match lower_star_filtration(&square, Direction::new(FRAC_PI_2)) {
            Err(Error::DegenerateDirection { u, v, .. }) => assert_eq!((u, v), (0, 1)),
            other => panic!("expected degenerate direction, got {other:?}"),
        }
        assert!(lower_star_filtration(&square, Direction::new(0.3)).is_ok());
    }

    #[test]
    fn order_equivalence() {
        let k = triangle(true);
        // Criticals at 26.565°, 116.565°, 161.565° ...; 80° and 100° share a cell.
        let s = Direction::new(80f64.to_radians());
        assert!(filtration_order_equivalent(&k, s, Direction::new(100f64.to_radians())).unwrap());
        // 120° is across the critical at 116.565°.
        assert!(!filtration_order_equivalent(&k, s, Direction::new(120f64.to_radians())).unwrap());

        let two = SimplicialComplex2D::from_points(vec![Point2::new(0., 0.), Point2::new(1., 2.)]);
        let s = Direction::new(FRAC_PI_4);
        assert!(!filtration_order_equivalent(&two, s, s.antipode()).unwrap());
        let crit = Direction::new(2f64.atan2(1.0) + FRAC_PI_2);
        assert!(filtration_order_equivalent(&two, s, crit).is_err());
    }

    #[test]
    fn remove_vertex_renumbers() {
        let k = triangle(true).remove_vertex(1);
        assert_eq!(k.vertices.len(), 2);
        assert_eq!(k.edges, vec![[0, 1]]);
        assert!(k.triangles.is_empty());
    }
}
