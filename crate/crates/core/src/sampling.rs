//! Finite direction sets, which vertices they miss, discrete transforms, and
//! the summed descriptor distance over a shared direction set.

use std::f64::consts::TAU;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex2D;
use crate::descriptors::{bottleneck_distance, descriptor, ecf_l1_distance, Descriptor, DescriptorKind};
use crate::error::{invalid, Error, Result};
use crate::geometry::{seeded_rng, Direction};
use crate::stratification::{
    coarse_stratification, csv_err, min_stratum, observing_regions, ObservingRegion, Stratification,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum Provenance {
    Grid { k: usize, phase: f64 },
    Random { k: usize, seed: u64 },
    EpsilonNet { epsilon: f64 },
    Explicit,
}

/// Sorted, deduplicated directions with a record of how they were made.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionSet {
    directions: Vec<Direction>,
    pub provenance: Provenance,
}

impl DirectionSet {
    pub fn new(directions: impl IntoIterator<Item = Direction>, provenance: Provenance) -> Self {
        let mut directions: Vec<Direction> = directions.into_iter().collect();
        directions.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
        directions.dedup_by(|a, b| a.angle() == b.angle());
        Self { directions, provenance }
    }

    pub fn explicit(directions: impl IntoIterator<Item = Direction>) -> Self {
        Self::new(directions, Provenance::Explicit)
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// One angle in radians per line.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        for d in &self.directions {
            writeln!(out, "{:.17e}", d.angle())?;
        }
        Ok(())
    }

    /// Parses one angle per line; blank lines and `#` comments are skipped.
    pub fn read_text(text: &str) -> Result<Self> {
        let mut dirs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let a: f64 = line.parse().map_err(|_| Error::Syntax {
                line: i + 1,
                message: format!("expected an angle, got {line:?}"),
            })?;
            if !a.is_finite() {
                return Err(Error::Syntax {
                    line: i + 1,
                    message: "angle is not finite".into(),
                });
            }
            dirs.push(Direction::new(a));
        }
        Ok(Self::explicit(dirs))
    }
}

/// Grid with spacing `2π/k`, `k = ceil(2π/ε)`; every open arc longer than
/// `ε` contains a member.
pub fn epsilon_net(epsilon: f64) -> Result<DirectionSet> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(invalid(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    let k = (TAU / epsilon).ceil().max(1.0) as usize;
    let mut set = grid(k, 0.0);
    set.provenance = Provenance::EpsilonNet { epsilon };
    Ok(set)
}

pub fn uniform_grid(k: usize, phase: f64) -> Result<DirectionSet> {
    if k < 1 {
        return Err(invalid("grid needs k >= 1"));
    }
    if !phase.is_finite() {
        return Err(invalid("grid phase must be finite"));
    }
    Ok(grid(k, phase))
}

fn grid(k: usize, phase: f64) -> DirectionSet {
    DirectionSet::new(
        (0..k).map(|i| Direction::new(phase + TAU * i as f64 / k as f64)),
        Provenance::Grid { k, phase },
    )
}

/// `k` i.i.d. uniform angles. The first `k` draws of the seed's stream are
/// used, so sets for the same seed are nested in `k`.
pub fn uniform_random(k: usize, seed: u64) -> Result<DirectionSet> {
    if k < 1 {
        return Err(invalid("random direction set needs k >= 1"));
    }
    let mut rng = seeded_rng(seed);
    Ok(DirectionSet::new(
        (0..k).map(|_| Direction::new(rng.gen_range(0.0..TAU))),
        Provenance::Random { k, seed },
    ))
}

/// Vertices whose observing region contains none of `directions`.
pub fn missed_vertices(k: &SimplicialComplex2D, directions: &[Direction]) -> Result<Vec<usize>> {
    Ok(missed_in(&observing_regions(k)?, directions))
}

/// [`missed_vertices`] against precomputed regions.
pub fn missed_in(regions: &[ObservingRegion], directions: &[Direction]) -> Vec<usize> {
    regions
        .iter()
        .filter(|r| !directions.iter().any(|&d| r.region.contains(d)))
        .map(|r| r.vertex)
        .collect()
}

/// Descriptors of one kind, one per direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteTransform {
    pub kind: DescriptorKind,
    pub pairs: Vec<(Direction, Descriptor)>,
}

/// Computes the descriptor of `k` at every direction. A direction where two
/// vertices tie is replaced, with a warning, by the midpoint of the cell
/// that starts there; the pair keeps the requested direction as its label.
pub fn discrete_transform(
    k: &SimplicialComplex2D,
    directions: &[Direction],
    kind: DescriptorKind,
) -> Result<DiscreteTransform> {
    let strata = if k.num_vertices() >= 2 {
        Some(coarse_stratification(&k.vertices)?)
    } else {
        None
    };
    let pairs = directions
        .par_iter()
        .map(|&d| Ok((d, descriptor_nudged(k, d, kind, strata.as_ref())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscreteTransform { kind, pairs })
}

fn descriptor_nudged(
    k: &SimplicialComplex2D,
    d: Direction,
    kind: DescriptorKind,
    strata: Option<&Stratification>,
) -> Result<Descriptor> {
    match (descriptor(k, d, kind), strata) {
        (Err(Error::DegenerateDirection { u, v, .. }), Some(s)) => {
            let cell = s.cell_after(d);
            let mid = s.cells[cell].arc.midpoint();
            log::warn!(
                "direction {} ties vertices {u} and {v}; using cell {cell} midpoint {}",
                d.angle(),
                mid.angle()
            );
            descriptor(k, mid, kind)
        }
        (r, _) => r,
    }
}

/// The ε-net with `ε` the smallest top-cell length over the corpus.
pub fn corpus_direction_set(corpus: &[SimplicialComplex2D]) -> Result<DirectionSet> {
    if corpus.is_empty() {
        return Err(invalid("corpus is empty"));
    }
    let eps = corpus
        .par_iter()
        .map(|k| min_stratum(&k.vertices))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    epsilon_net(eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescriptorMetric {
    #[default]
    EcfL1,
    Bottleneck,
}

impl DescriptorMetric {
    pub fn kind(self) -> DescriptorKind {
        match self {
            DescriptorMetric::EcfL1 => DescriptorKind::Ecf,
            DescriptorMetric::Bottleneck => DescriptorKind::Pd,
        }
    }

    fn distance(self, a: &Descriptor, b: &Descriptor) -> f64 {
        match (a, b) {
            (Descriptor::Ecf(f), Descriptor::Ecf(g)) => ecf_l1_distance(f, g),
            (Descriptor::Pd(p), Descriptor::Pd(q)) => bottleneck_distance(p, q),
            _ => unreachable!("transforms are built with the metric's kind"),
        }
    }
}

/// Sum over `directions` of the descriptor distance between `k` and `k2`.
/// Warns when the set misses a top cell of either complex, since the sum
/// may then vanish on distinct complexes.
pub fn corpus_distance(
    k: &SimplicialComplex2D,
    k2: &SimplicialComplex2D,
    directions: &[Direction],
    metric: DescriptorMetric,
) -> Result<f64> {
    for (name, c) in [("first", k), ("second", k2)] {
        if c.num_vertices() >= 2 {
            let missed = coarse_stratification(&c.vertices)?.missed_cells(directions);
            if !missed.is_empty() {
                log::warn!("direction set misses {} cells of the {name} complex", missed.len());
            }
        }
    }
    let a = discrete_transform(k, directions, metric.kind())?;
    let b = discrete_transform(k2, directions, metric.kind())?;
    transform_distance(&a, &b, metric)
}

/// Sum of per-direction descriptor distances between two transforms taken
/// over the same directions.
pub fn transform_distance(a: &DiscreteTransform, b: &DiscreteTransform, metric: DescriptorMetric) -> Result<f64> {
    if a.kind != metric.kind() || b.kind != metric.kind() {
        return Err(invalid(format!("{metric:?} needs {:?} transforms", metric.kind())));
    }
    if a.pairs.len() != b.pairs.len() || a.pairs.iter().zip(&b.pairs).any(|(x, y)| x.0 != y.0) {
        return Err(invalid("transforms are over different directions"));
    }
    Ok(a.pairs
        .iter()
        .zip(&b.pairs)
        .map(|((_, x), (_, y))| metric.distance(x, y))
        .sum())
}

/// Greedy hitting set over the nonempty observing regions: repeatedly takes
/// the cell midpoint that observes the most still-unhit vertices. For
/// reporting only; not minimal in general.
pub fn greedy_cover(strata: &Stratification, regions: &[ObservingRegion]) -> Vec<Direction> {
    let reps = strata.representatives();
    let sees: Vec<Vec<usize>> = reps
        .iter()
        .map(|&d| {
            regions
                .iter()
                .filter(|r| r.region.contains(d))
                .map(|r| r.vertex)
                .collect()
        })
        .collect();
    let mut hit = vec![false; regions.iter().map(|r| r.vertex + 1).max().unwrap_or(0)];
    let mut chosen = Vec::new();
    loop {
        let best = sees
            .iter()
            .enumerate()
            .map(|(i, vs)| (i, vs.iter().filter(|&&v| !hit[v]).count()))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
        match best {
            Some((i, gain)) if gain > 0 => {
                for &v in &sees[i] {
                    hit[v] = true;
                }
                chosen.push(reps[i]);
            }
            _ => break,
        }
    }
    chosen
}

/// One row of a missed-vertex table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissedRow {
    pub complex_id: String,
    pub k_or_eps: f64,
    pub scheme: String,
    pub seed: Option<u64>,
    pub n0: usize,
    pub missed_count: usize,
    pub missed_fraction: f64,
}

impl MissedRow {
    pub fn new(complex_id: impl Into<String>, set: &DirectionSet, n0: usize, missed_count: usize) -> Self {
        let (k_or_eps, scheme, seed) = match set.provenance {
            Provenance::Grid { k, .. } => (k as f64, "grid", None),
            Provenance::Random { k, seed } => (k as f64, "random", Some(seed)),
            Provenance::EpsilonNet { epsilon } => (epsilon, "eps_net", None),
            Provenance::Explicit => (set.len() as f64, "explicit", None),
        };
        Self {
            complex_id: complex_id.into(),
            k_or_eps,
            scheme: scheme.into(),
            seed,
            n0,
            missed_count,
            missed_fraction: if n0 == 0 { 0.0 } else { missed_count as f64 / n0 as f64 },
        }
    }
}

pub fn write_missed_csv<W: Write>(rows: &[MissedRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    if rows.is_empty() {
        w.write_record([
            "complex_id",
            "k_or_eps",
            "scheme",
            "seed",
            "n0",
            "missed_count",
            "missed_fraction",
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
