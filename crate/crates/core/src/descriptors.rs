//! Topological descriptors of a directional lower-star filtration:
//! persistence diagrams in dimensions 0 and 1 (over Z/2), Euler
//! characteristic functions, Betti functions, and distances between them.

use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::{lower_star_filtration, Filtration, Simplex, SimplicialComplex2D};
use crate::error::Result;
use crate::geometry::Direction;

/// Heights closer than this compare equal in [`descriptor_equal`].
pub const HEIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub dim: u8,
    pub birth: f64,
    /// `f64::INFINITY` for essential classes; serialized as `"inf"`.
    #[serde(serialize_with = "ser_death", deserialize_with = "de_death")]
    pub death: f64,
}

impl DiagramPoint {
    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

fn ser_death<S: Serializer>(d: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if d.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*d)
    }
}

fn de_death<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Death {
        Finite(f64),
        Sentinel(String),
    }
    match Death::deserialize(d)? {
        Death::Finite(x) => Ok(x),
        Death::Sentinel(s) if s == "inf" => Ok(f64::INFINITY),
        Death::Sentinel(s) => Err(serde::de::Error::custom(format!("bad death value {s:?}"))),
    }
}

/// Off-diagonal persistence points, sorted by `(dim, birth, death)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    /// Drops points on the diagonal and sorts the rest.
    pub fn new(mut points: Vec<DiagramPoint>) -> Self {
        points.retain(|p| p.birth < p.death);
        points.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        Self { points }
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn in_dim(&self, dim: u8) -> impl Iterator<Item = &DiagramPoint> {
        self.points.iter().filter(move |p| p.dim == dim)
    }
}

/// A persistence pair together with the vertices whose heights it records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub dim: u8,
    pub birth: f64,
    pub death: f64,
    pub birth_vertex: usize,
    pub death_vertex: Option<usize>,
}

/// Right-continuous integer step function of height, zero before the first
/// breakpoint. Canonical: heights strictly increase and consecutive values
/// differ, so equal functions have equal breakpoint lists.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StepFunction {
    breakpoints: Vec<(f64, i64)>,
}

impl StepFunction {
    /// Builds a function from `(height, value)` breakpoints in any order.
    /// Later entries at an identical height win.
    pub fn new(mut breakpoints: Vec<(f64, i64)>) -> Self {
        breakpoints.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, i64)> = Vec::with_capacity(breakpoints.len());
        for (h, v) in breakpoints {
            if let Some(last) = out.last_mut() {
                if last.0 == h {
                    last.1 = v;
                    continue;
                }
            }
            out.push((h, v));
        }
        Self::canonical(out)
    }

    /// Accumulates `(height, delta)` events.
    pub fn from_increments(mut events: Vec<(f64, i64)>) -> Self {
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, i64)> = Vec::new();
        let mut acc = 0;
        for (h, d) in events {
            acc += d;
            match out.last_mut() {
                Some(last) if last.0 == h => last.1 = acc,
                _ => out.push((h, acc)),
            }
        }
        Self::canonical(out)
    }

    fn canonical(sorted: Vec<(f64, i64)>) -> Self {
        let mut out: Vec<(f64, i64)> = Vec::with_capacity(sorted.len());
        let mut prev = 0;
        for (h, v) in sorted {
            if v != prev {
                out.push((h, v));
                prev = v;
            }
        }
        Self { breakpoints: out }
    }

    pub fn breakpoints(&self) -> &[(f64, i64)] {
        &self.breakpoints
    }

    pub fn eval(&self, t: f64) -> i64 {
        match self.breakpoints.partition_point(|&(h, _)| h <= t) {
            0 => 0,
            i => self.breakpoints[i - 1].1,
        }
    }

    /// Value as `t → ∞`.
    pub fn final_value(&self) -> i64 {
        self.breakpoints.last().map_or(0, |b| b.1)
    }

    pub fn sub(&self, other: &StepFunction) -> StepFunction {
        let mut hs: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).map(|b| b.0).collect();
        hs.sort_by(f64::total_cmp);
        hs.dedup();
        StepFunction::new(hs.into_iter().map(|h| (h, self.eval(h) - other.eval(h))).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DescriptorKind {
    /// Persistence diagram.
    Pd,
    /// Euler characteristic function.
    Ecf,
    /// Betti functions β₀ and β₁.
    Betti,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Descriptor {
    Pd(PersistenceDiagram),
    Ecf(StepFunction),
    Betti { beta0: StepFunction, beta1: StepFunction },
}

impl Descriptor {
    pub fn kind(&self) -> DescriptorKind {
        match self {
            Descriptor::Pd(_) => DescriptorKind::Pd,
            Descriptor::Ecf(_) => DescriptorKind::Ecf,
            Descriptor::Betti { .. } => DescriptorKind::Betti,
        }
    }
}

pub fn descriptor(k: &SimplicialComplex2D, s: Direction, kind: DescriptorKind) -> Result<Descriptor> {
    let f = lower_star_filtration(k, s)?;
    Ok(match kind {
        DescriptorKind::Pd => Descriptor::Pd(diagram_from_pairs(&pairs_of(k, &f))),
        DescriptorKind::Ecf => Descriptor::Ecf(ecf_of(&f)),
        DescriptorKind::Betti => {
            let (beta0, beta1) = betti_of(&diagram_from_pairs(&pairs_of(k, &f)));
            Descriptor::Betti { beta0, beta1 }
        }
    })
}

struct Components {
    parent: Vec<usize>,
    // oldest vertex of the component rooted here
    oldest: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            oldest: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }
}

/// Persistence pairs, zero-persistence pairs included. Dimension 0 by
/// union-find with the elder rule, dimension 1 by reducing triangle
/// boundary columns.
pub fn persistence_pairs(k: &SimplicialComplex2D, s: Direction) -> Result<Vec<PersistencePair>> {
    let f = lower_star_filtration(k, s)?;
    Ok(pairs_of(k, &f))
}

fn pairs_of(k: &SimplicialComplex2D, f: &Filtration) -> Vec<PersistencePair> {
    let n = k.vertices.len();
    let mut height = vec![0.0; n];
    for e in &f.entries {
        if let Simplex::Vertex(v) = e.simplex {
            height[v] = e.value;
        }
    }

    let mut comps = Components::new(n);
    let mut pairs = Vec::new();
    // edge id -> filtration position, for positive (cycle-creating) edges only
    let mut positive: HashMap<usize, usize> = HashMap::new();
    let mut edge_pos = vec![0usize; k.edges.len()];
    // filtration position of a pivot edge -> reduced triangle column
    let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut entry_at = Vec::with_capacity(f.entries.len());
    let edge_id: HashMap<[usize; 2], usize> = k.edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();

    for (pos, entry) in f.entries.iter().enumerate() {
        entry_at.push(*entry);
        match entry.simplex {
            Simplex::Vertex(_) => {}
            Simplex::Edge(i) => {
                edge_pos[i] = pos;
                let [a, b] = k.edges[i];
                let (ra, rb) = (comps.find(a), comps.find(b));
                if ra == rb {
                    positive.insert(i, pos);
                    continue;
                }
                let (oa, ob) = (comps.oldest[ra], comps.oldest[rb]);
                let (elder, younger, young_root) = if height[oa] < height[ob] {
                    (oa, ob, rb)
                } else {
                    (ob, oa, ra)
                };
                let keep = if young_root == ra { rb } else { ra };
                comps.parent[young_root] = keep;
                comps.oldest[keep] = elder;
                pairs.push(PersistencePair {
                    dim: 0,
                    birth: height[younger],
                    death: entry.value,
                    birth_vertex: younger,
                    death_vertex: Some(entry.top_vertex),
                });
            }
            Simplex::Triangle(i) => {
                let [a, b, c] = k.triangles[i];
                let lookup = |e: [usize; 2]| edge_pos[*edge_id.get(&e).expect("face-closed complex")];
                let mut col = vec![lookup([a, b]), lookup([a, c]), lookup([b, c])];
                col.sort_unstable();
                while let Some(&low) = col.last() {
                    match pivots.get(&low) {
                        Some(other) => col = sym_diff(&col, other),
                        None => break,
                    }
                }
                if let Some(&low) = col.last() {
                    let birth_entry = entry_at[low];
                    if let Simplex::Edge(eid) = birth_entry.simplex {
                        positive.remove(&eid);
                    }
                    pairs.push(PersistencePair {
                        dim: 1,
                        birth: birth_entry.value,
                        death: entry.value,
                        birth_vertex: birth_entry.top_vertex,
                        death_vertex: Some(entry.top_vertex),
                    });
                    pivots.insert(low, col);
                }
                // A triangle with an empty reduced column would create a
                // 2-cycle, which cannot happen for an embedded planar complex.
            }
        }
    }

    for v in 0..n {
        if comps.find(v) == v {
            let o = comps.oldest[v];
            pairs.push(PersistencePair {
                dim: 0,
                birth: height[o],
                death: f64::INFINITY,
                birth_vertex: o,
                death_vertex: None,
            });
        }
    }
    let mut essential_edges: Vec<_> = positive.into_values().collect();
    essential_edges.sort_unstable();
    for pos in essential_edges {
        let e = entry_at[pos];
        pairs.push(PersistencePair {
            dim: 1,
            birth: e.value,
            death: f64::INFINITY,
            birth_vertex: e.top_vertex,
            death_vertex: None,
        });
    }
    pairs
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn diagram_from_pairs(pairs: &[PersistencePair]) -> PersistenceDiagram {
    PersistenceDiagram::new(
        pairs
            .iter()
            .map(|p| DiagramPoint {
                dim: p.dim,
                birth: p.birth,
                death: p.death,
            })
            .collect(),
    )
}

pub fn persistence_diagram(k: &SimplicialComplex2D, s: Direction) -> Result<PersistenceDiagram> {
    Ok(diagram_from_pairs(&persistence_pairs(k, s)?))
}

/// Vertices whose height carries the birth or death of an off-diagonal point.
pub fn observed_vertices(k: &SimplicialComplex2D, s: Direction) -> Result<Vec<usize>> {
    let mut seen = vec![false; k.vertices.len()];
    for p in persistence_pairs(k, s)? {
        if p.birth < p.death {
            seen[p.birth_vertex] = true;
            if let Some(d) = p.death_vertex {
                seen[d] = true;
            }
        }
    }
    Ok(seen.iter().enumerate().filter_map(|(i, &b)| b.then_some(i)).collect())
}

fn ecf_of(f: &Filtration) -> StepFunction {
    StepFunction::from_increments(
        f.entries
            .iter()
            .map(|e| (e.value, if e.simplex.dim() % 2 == 0 { 1 } else { -1 }))
            .collect(),
    )
}

pub fn euler_characteristic_function(k: &SimplicialComplex2D, s: Direction) -> Result<StepFunction> {
    Ok(ecf_of(&lower_star_filtration(k, s)?))
}

fn betti_of(d: &PersistenceDiagram) -> (StepFunction, StepFunction) {
    let events = |dim: u8| {
        let mut ev = Vec::new();
        for p in d.in_dim(dim) {
            ev.push((p.birth, 1));
            if p.death.is_finite() {
                ev.push((p.death, -1));
            }
        }
        StepFunction::from_increments(ev)
    };
    (events(0), events(1))
}

/// `(β₀, β₁)` by rank counting on the diagram.
pub fn betti_functions(k: &SimplicialComplex2D, s: Direction) -> Result<(StepFunction, StepFunction)> {
    Ok(betti_of(&persistence_diagram(k, s)?))
}

/// Bottleneck distance. Dimensions are matched separately; essential points
/// only match essential points of the same dimension. Returns
/// `f64::INFINITY` when the essential counts differ in some dimension.
pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram) -> f64 {
    let mut dims: Vec<u8> = a.points.iter().chain(&b.points).map(|p| p.dim).collect();
    dims.sort_unstable();
    dims.dedup();
    let mut worst: f64 = 0.0;
    for dim in dims {
        let (ea, fa): (Vec<&DiagramPoint>, Vec<&DiagramPoint>) = a.in_dim(dim).partition(|p| p.is_essential());
        let (eb, fb): (Vec<&DiagramPoint>, Vec<&DiagramPoint>) = b.in_dim(dim).partition(|p| p.is_essential());
        if ea.len() != eb.len() {
            return f64::INFINITY;
        }
        let mut ba: Vec<f64> = ea.iter().map(|p| p.birth).collect();
        let mut bb: Vec<f64> = eb.iter().map(|p| p.birth).collect();
        ba.sort_by(f64::total_cmp);
        bb.sort_by(f64::total_cmp);
        for (x, y) in ba.iter().zip(&bb) {
            worst = worst.max((x - y).abs());
        }
        let fa: Vec<(f64, f64)> = fa.iter().map(|p| (p.birth, p.death)).collect();
        let fb: Vec<(f64, f64)> = fb.iter().map(|p| (p.birth, p.death)).collect();
        worst = worst.max(finite_bottleneck(&fa, &fb));
    }
    worst
}

fn linf(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let diag = |p: (f64, f64)| (p.1 - p.0) / 2.0;
    let mut cands: Vec<f64> = a.iter().chain(b).map(|&p| diag(p)).collect();
    for &p in a {
        for &q in b {
            cands.push(linf(p, q));
        }
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let (mut lo, mut hi) = (0, cands.len() - 1);
    // the largest candidate is always feasible (everything to the diagonal)
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_within(a, b, cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cands[lo]
}

/// Whether the augmented bipartite graph at radius `r` has a perfect
/// matching. Left: points of `a` then diagonal copies of `b`; right: points of
/// `b` then diagonal copies of `a`.
fn perfect_matching_within(a: &[(f64, f64)], b: &[(f64, f64)], r: f64) -> bool {
    let (n, m) = (a.len(), b.len());
    let size = n + m;
    let diag = |p: (f64, f64)| (p.1 - p.0) / 2.0;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for i in 0..n {
        for (j, &bj) in b.iter().enumerate() {
            if linf(a[i], bj) <= r {
                adj[i].push(j);
            }
        }
        if diag(a[i]) <= r {
            adj[i].push(m + i);
        }
    }
    for j in 0..m {
        if diag(b[j]) <= r {
            adj[n + j].push(j);
        }
        adj[n + j].extend(m..m + n);
    }
    let mut match_right = vec![usize::MAX; size];
    for left in 0..size {
        let mut visited = vec![false; size];
        if !augment(left, &adj, &mut match_right, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(u: usize, adj: &[Vec<usize>], match_right: &mut [usize], visited: &mut [bool]) -> bool {
    for &v in &adj[u] {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        if match_right[v] == usize::MAX || augment(match_right[v], adj, match_right, visited) {
            match_right[v] = u;
            return true;
        }
    }
    false
}

/// `∫|f − g|`, or `f64::INFINITY` when the functions end at different values.
pub fn ecf_l1_distance(f: &StepFunction, g: &StepFunction) -> f64 {
    if f.final_value() != g.final_value() {
        return f64::INFINITY;
    }
    let d = f.sub(g);
    d.breakpoints
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * w[0].1.abs() as f64)
        .sum()
}

/// Equality of two descriptors of the same kind, with heights compared to
/// within [`HEIGHT_TOL`]. Descriptors of different kinds are never equal.
pub fn descriptor_equal(a: &Descriptor, b: &Descriptor) -> bool {
    match (a, b) {
        (Descriptor::Pd(x), Descriptor::Pd(y)) => diagrams_equal(x, y),
        (Descriptor::Ecf(x), Descriptor::Ecf(y)) => steps_equal(x, y),
        (Descriptor::Betti { beta0: a0, beta1: a1 }, Descriptor::Betti { beta0: b0, beta1: b1 }) => {
            steps_equal(a0, b0) && steps_equal(a1, b1)
        }
        _ => false,
    }
}

fn close(x: f64, y: f64) -> bool {
    x == y || (x - y).abs() <= HEIGHT_TOL
}

pub fn diagrams_equal(a: &PersistenceDiagram, b: &PersistenceDiagram) -> bool {
    a.len() == b.len()
        && a.points
            .iter()
            .zip(&b.points)
            .all(|(p, q)| p.dim == q.dim && close(p.birth, q.birth) && close(p.death, q.death))
}

pub fn steps_equal(a: &StepFunction, b: &StepFunction) -> bool {
    a.breakpoints.len() == b.breakpoints.len()
        && a.breakpoints
            .iter()
            .zip(&b.breakpoints)
            .all(|(p, q)| close(p.0, q.0) && p.1 == q.1)
}
