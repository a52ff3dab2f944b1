//! Coarse stratification of the direction circle induced by a vertex set,
//! and the observing regions of vertices of a complex.
//!
//! Critical directions are the normals of vertex difference vectors. The
//! open arcs between consecutive criticals are the top cells; each carries a
//! fixed total order of the vertices.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{vertex_order, SimplicialComplex2D};
use crate::descriptors::observed_vertices;
use crate::error::{invalid, Error, Result};
use crate::geometry::{ccw_offset, normalize_angle, Arc, ArcSet, Direction, Point2, ANGLE_TOL};

/// A 0-stratum. Normals closer than [`ANGLE_TOL`] are merged into one
/// critical spanning `[angle, angle + spread]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Critical {
    pub angle: f64,
    pub spread: f64,
    /// Vertex pairs `(i, j)`, `i < j`, whose heights tie here.
    pub pairs: Vec<(usize, usize)>,
}

impl Critical {
    pub fn direction(&self) -> Direction {
        Direction::new(self.angle)
    }

    fn end(&self) -> f64 {
        self.angle + self.spread
    }
}

/// An open top cell and the vertex order seen from inside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub arc: Arc,
    /// Vertex ids from lowest to highest.
    pub order: Vec<usize>,
}

/// Two distinct criticals that came within ten times the merge tolerance of
/// each other; the cell between them is numerically uncertain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearCoincidence {
    /// Index of the critical the uncertain cell starts at.
    pub critical: usize,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratification {
    pub criticals: Vec<Critical>,
    /// `cells[k]` runs from `criticals[k]` to `criticals[k + 1]` (cyclically).
    pub cells: Vec<Cell>,
    pub near_coincidences: Vec<NearCoincidence>,
}

/// Sorted critical directions of a point set, two per vertex pair.
pub fn critical_directions(points: &[Point2]) -> Result<Vec<Critical>> {
    Ok(critical_directions_with_warnings(points)?.0)
}

fn critical_directions_with_warnings(points: &[Point2]) -> Result<(Vec<Critical>, Vec<NearCoincidence>)> {
    let n = points.len();
    if n < 2 {
        return Err(invalid(format!("stratification needs at least 2 vertices, got {n}")));
    }
    let mut raw = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in i + 1..n {
            let d = points[j] - points[i];
            if d.norm() == 0.0 {
                return Err(Error::DuplicatePoint(i, j));
            }
            let normal = normalize_angle(d.y.atan2(d.x) + FRAC_PI_2);
            raw.push((normal, (i, j)));
            raw.push((normalize_angle(normal + PI), (i, j)));
        }
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut crits: Vec<Critical> = Vec::new();
    for (angle, pair) in raw {
        match crits.last_mut() {
            Some(c) if angle - c.end() <= ANGLE_TOL => {
                c.spread = angle - c.angle;
                c.pairs.push(pair);
            }
            _ => crits.push(Critical {
                angle,
                spread: 0.0,
                pairs: vec![pair],
            }),
        }
    }
    // Merge across the 0/2π seam.
    if crits.len() > 1 {
        let first_angle = crits[0].angle;
        let last = crits.last().expect("nonempty");
        if first_angle + std::f64::consts::TAU - last.end() <= ANGLE_TOL {
            let last = crits.pop().expect("nonempty");
            let first = &mut crits[0];
            first.spread = first.end() + std::f64::consts::TAU - last.angle;
            first.angle = last.angle;
            let mut pairs = last.pairs;
            pairs.append(&mut first.pairs);
            first.pairs = pairs;
            crits.rotate_right(1);
        }
    }
    for c in &mut crits {
        c.pairs.sort_unstable();
    }

    let m = crits.len();
    let mut near = Vec::new();
    for k in 0..m {
        let gap = ccw_offset(normalize_angle(crits[k].end()), crits[(k + 1) % m].angle);
        if gap <= 10.0 * ANGLE_TOL {
            log::warn!(
                "criticals {k} and {} are {gap:e} rad apart; cell boundaries are uncertain",
                (k + 1) % m
            );
            near.push(NearCoincidence { critical: k, gap });
        }
    }
    Ok((crits, near))
}

pub fn coarse_stratification(points: &[Point2]) -> Result<Stratification> {
    let (criticals, near_coincidences) = critical_directions_with_warnings(points)?;
    let m = criticals.len();
    let arcs: Vec<Arc> = (0..m)
        .map(|k| {
            let start = criticals[k].end();
            let length = ccw_offset(normalize_angle(start), criticals[(k + 1) % m].angle);
            Arc::new(start, length)
        })
        .collect::<Result<_>>()?;
    let cells = arcs
        .into_par_iter()
        .map(|arc| {
            Ok(Cell {
                order: vertex_order(points, arc.midpoint())?,
                arc,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Stratification {
        criticals,
        cells,
        near_coincidences,
    })
}

impl Stratification {
    /// Length of the smallest top cell.
    pub fn min_stratum(&self) -> f64 {
        self.cells.iter().map(|c| c.arc.length()).fold(f64::INFINITY, f64::min)
    }

    /// One direction per top cell: the cell midpoints.
    pub fn representatives(&self) -> Vec<Direction> {
        self.cells.iter().map(|c| c.arc.midpoint()).collect()
    }

    /// Index of the cell containing `d`, or `None` when `d` is critical.
    pub fn cell_containing(&self, d: Direction) -> Option<usize> {
        self.cells.iter().position(|c| c.arc.contains(d))
    }

    /// The first cell counterclockwise from `d` (the one containing `d`, or
    /// the one starting at `d` when `d` is critical).
    pub fn cell_after(&self, d: Direction) -> usize {
        self.cell_containing(d).unwrap_or_else(|| {
            (0..self.cells.len())
                .min_by(|&a, &b| {
                    let oa = ccw_offset(d.angle(), self.cells[a].arc.start());
                    let ob = ccw_offset(d.angle(), self.cells[b].arc.start());
                    oa.total_cmp(&ob)
                })
                .expect("stratification has cells")
        })
    }

    /// Indices of cells that contain no direction of `directions`.
    pub fn missed_cells(&self, directions: &[Direction]) -> Vec<usize> {
        let mut angles: Vec<f64> = directions.iter().map(|d| d.angle()).collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup();
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| !arc_hit(&c.arc, &angles))
            .map(|(i, _)| i)
            .collect()
    }

    /// Writes `cell_index,start_angle,length,vertex_order` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["cell_index", "start_angle", "length", "vertex_order"])
            .map_err(csv_err)?;
        for (i, c) in self.cells.iter().enumerate() {
            let order: Vec<String> = c.order.iter().map(|v| v.to_string()).collect();
            w.write_record([
                i.to_string(),
                format!("{:.17e}", c.arc.start()),
                format!("{:.17e}", c.arc.length()),
                order.join(" "),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn arc_hit(arc: &Arc, sorted: &[f64]) -> bool {
    if sorted.is_empty() {
        return false;
    }
    if arc.is_full() {
        return true;
    }
    // The first angle strictly past the start is the only one that can land
    // inside; later ones are farther counterclockwise.
    let idx = sorted.partition_point(|&a| a <= arc.start());
    let off = ccw_offset(arc.start(), sorted[idx % sorted.len()]);
    off > 0.0 && off < arc.length()
}

/// Minimum top-cell length of the stratification of `points`, without
/// computing the cell orders.
pub fn min_stratum(points: &[Point2]) -> Result<f64> {
    let crits = critical_directions(points)?;
    let m = crits.len();
    Ok((0..m)
        .map(|k| ccw_offset(normalize_angle(crits[k].end()), crits[(k + 1) % m].angle))
        .fold(f64::INFINITY, f64::min))
}

/// Cells of `strata` containing no member of `directions`; empty means the
/// set hits every top stratum.
pub fn hits_all_strata(strata: &Stratification, directions: &[Direction]) -> Vec<usize> {
    strata.missed_cells(directions)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservingRegion {
    pub vertex: usize,
    pub region: ArcSet,
    /// Half-length of the region's longest arc.
    pub theta: f64,
}

impl ObservingRegion {
    fn new(vertex: usize, region: ArcSet) -> Self {
        let theta = region.max_half_width();
        Self { vertex, region, theta }
    }
}

/// Observing regions of every vertex, by sweeping the top cells of the
/// stratification of `k`'s vertices.
pub fn observing_regions(k: &SimplicialComplex2D) -> Result<Vec<ObservingRegion>> {
    match k.num_vertices() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![ObservingRegion::new(0, ArcSet::full())]),
        _ => observing_regions_in(k, &coarse_stratification(&k.vertices)?),
    }
}

/// Same as [`observing_regions`], reusing a stratification of `k`'s vertices.
pub fn observing_regions_in(k: &SimplicialComplex2D, strata: &Stratification) -> Result<Vec<ObservingRegion>> {
    let observed: Vec<Vec<usize>> = strata
        .cells
        .par_iter()
        .map(|c| observed_vertices(k, c.arc.midpoint()))
        .collect::<Result<_>>()?;
    let mut arcs: Vec<Vec<Arc>> = vec![Vec::new(); k.num_vertices()];
    for (cell, obs) in strata.cells.iter().zip(&observed) {
        for &v in obs {
            arcs[v].push(cell.arc);
        }
    }
    Ok(arcs
        .into_iter()
        .enumerate()
        .map(|(v, a)| ObservingRegion::new(v, ArcSet::from_arcs(a)))
        .collect())
}

pub fn observing_region(k: &SimplicialComplex2D, v: usize) -> Result<ObservingRegion> {
    if v >= k.num_vertices() {
        return Err(invalid(format!("vertex {v} out of range")));
    }
    Ok(observing_regions(k)?.swap_remove(v))
}

/// Open half-circle of directions `s` with `s·a > 0`.
fn positive_half(a: Point2) -> ArcSet {
    ArcSet::from_arc(Arc::new(a.angle() - FRAC_PI_2, PI).expect("half circle"))
}

/// Closed-form observing region of a degree-two vertex `v` with neighbors
/// `u`, `w`: the directions where `v` is strictly above both or strictly
/// below both.
pub fn observing_region_degree_two(k: &SimplicialComplex2D, v: usize) -> Result<ObservingRegion> {
    if v >= k.num_vertices() {
        return Err(invalid(format!("vertex {v} out of range")));
    }
    let nbrs: Vec<usize> = k
        .edges
        .iter()
        .filter_map(|&[a, b]| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
        .collect();
    if nbrs.len() != 2 {
        return Err(invalid(format!("vertex {v} has degree {}, not 2", nbrs.len())));
    }
    if k.triangles.iter().any(|t| t.contains(&v)) {
        return Err(invalid(format!("vertex {v} lies in a triangle")));
    }
    let p = k.vertices[v];
    let (a, b) = (k.vertices[nbrs[0]] - p, k.vertices[nbrs[1]] - p);
    let below_both = positive_half(a).intersect(&positive_half(b));
    let above_both = positive_half(a * -1.0).intersect(&positive_half(b * -1.0));
    Ok(ObservingRegion::new(v, below_both.union(&above_both)))
}

/// Largest θ such that some arc of `v`'s observing region has half-length θ.
pub fn theta_observability(k: &SimplicialComplex2D, v: usize) -> Result<f64> {
    Ok(observing_region(k, v)?.theta)
}

/// Writes `vertex,arc_start,arc_length,theta` rows, one per arc; a vertex
/// with an empty region gets one row with empty arc fields.
pub fn write_regions_csv<W: Write>(regions: &[ObservingRegion], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["vertex", "arc_start", "arc_length", "theta"])
        .map_err(csv_err)?;
    for r in regions {
        if r.region.is_empty() {
            w.write_record([
                r.vertex.to_string(),
                String::new(),
                String::new(),
                format!("{:.17e}", r.theta),
            ])
            .map_err(csv_err)?;
        }
        for a in r.region.arcs() {
            w.write_record([
                r.vertex.to_string(),
                format!("{:.17e}", a.start()),
                format!("{:.17e}", a.length()),
                format!("{:.17e}", r.theta),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}
