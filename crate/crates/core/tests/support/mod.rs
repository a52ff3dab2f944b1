//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the filtration or persistence code of the library.

#![allow(dead_code)]

use strataudit::descriptors::{DiagramPoint, PersistenceDiagram};
use strataudit::{Point2, SimplicialComplex2D};

pub fn height(p: Point2, angle: f64) -> f64 {
    p.x * angle.cos() + p.y * angle.sin()
}

/// Every simplex as its sorted vertex list.
pub fn all_simplices(k: &SimplicialComplex2D) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..k.num_vertices()).map(|v| vec![v]).collect();
    for e in &k.edges {
        let mut s = e.to_vec();
        s.sort_unstable();
        out.push(s);
    }
    for t in &k.triangles {
        let mut s = t.to_vec();
        s.sort_unstable();
        out.push(s);
    }
    out
}

/// Persistence over Z/2 by reducing the full boundary matrix of the
/// lower-star filtration. Ties are broken by dimension, then by vertex list.
pub fn naive_diagram(k: &SimplicialComplex2D, angle: f64) -> PersistenceDiagram {
    let h: Vec<f64> = k.vertices.iter().map(|&p| height(p, angle)).collect();
    let mut simplices = all_simplices(k);
    let value = |s: &Vec<usize>| s.iter().map(|&v| h[v]).fold(f64::NEG_INFINITY, f64::max);
    simplices.sort_by(|a, b| value(a).total_cmp(&value(b)).then(a.len().cmp(&b.len())).then(a.cmp(b)));
    let index = |s: &[usize]| simplices.iter().position(|t| t.as_slice() == s).unwrap();

    let mut columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|s| {
            if s.len() == 1 {
                return Vec::new();
            }
            let mut col: Vec<usize> = (0..s.len())
                .map(|drop| {
                    let face: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    index(&face)
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();

    let mut low_owner: Vec<Option<usize>> = vec![None; simplices.len()];
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match low_owner[low] {
                Some(i) => {
                    let other = columns[i].clone();
                    columns[j] = symmetric_difference(&columns[j], &other);
                }
                None => {
                    low_owner[low] = Some(j);
                    break;
                }
            }
        }
    }

    let mut points = Vec::new();
    let mut killed = vec![false; simplices.len()];
    for (row, owner) in low_owner.iter().enumerate() {
        if let Some(j) = *owner {
            killed[row] = true;
            killed[j] = true;
            let (b, d) = (value(&simplices[row]), value(&simplices[j]));
            if b < d {
                points.push(DiagramPoint {
                    dim: (simplices[row].len() - 1) as u8,
                    birth: b,
                    death: d,
                });
            }
        }
    }
    for (i, s) in simplices.iter().enumerate() {
        if !killed[i] && columns[i].is_empty() {
            points.push(DiagramPoint {
                dim: (s.len() - 1) as u8,
                birth: value(s),
                death: f64::INFINITY,
            });
        }
    }
    PersistenceDiagram::new(points)
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    out
}

/// `#V − #E + #T` of the sublevel set at `t`, by direct count.
pub fn naive_euler(k: &SimplicialComplex2D, angle: f64, t: f64) -> i64 {
    let h: Vec<f64> = k.vertices.iter().map(|&p| height(p, angle)).collect();
    all_simplices(k)
        .iter()
        .filter(|s| s.iter().all(|&v| h[v] <= t))
        .map(|s| if s.len() % 2 == 1 { 1 } else { -1 })
        .sum()
}

/// Interior angle at `v` between the rays to `u` and `w`.
pub fn corner_angle(u: Point2, v: Point2, w: Point2) -> f64 {
    let (a, b) = (u - v, w - v);
    let c = (a.x * b.x + a.y * b.y) / (a.x.hypot(a.y) * b.x.hypot(b.y));
    c.clamp(-1.0, 1.0).acos()
}

/// Whether `v` is strictly above or strictly below both neighbors.
pub fn is_local_extremum(u: Point2, v: Point2, w: Point2, angle: f64) -> bool {
    let (hu, hv, hw) = (height(u, angle), height(v, angle), height(w, angle));
    (hv > hu && hv > hw) || (hv < hu && hv < hw)
}

/// Smallest angle between two lines through vertex pairs, by enumeration.
pub fn brute_min_line_angle(points: &[Point2]) -> f64 {
    let mut dirs = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = points[j] - points[i];
            dirs.push(d.y.atan2(d.x).rem_euclid(std::f64::consts::PI));
        }
    }
    let mut best = std::f64::consts::PI;
    for a in 0..dirs.len() {
        for b in a + 1..dirs.len() {
            let g = (dirs[a] - dirs[b]).abs();
            best = best.min(g.min(std::f64::consts::PI - g));
        }
    }
    best
}
