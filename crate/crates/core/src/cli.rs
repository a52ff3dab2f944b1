//! Command-line front end and the experiment runners behind it.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{validate, SimplicialComplex2D};
use crate::constructions::{
    example_triangle, hausdorff_distance, lost_vertex_pair, lower_bound_complex, random_isosceles, random_polygon,
    LowerBoundReport,
};
use crate::descriptors::{descriptor, descriptor_equal, DescriptorKind};
use crate::error::{invalid, Error, Result};
use crate::geometry::{seeded_rng, Direction, Point2};
use crate::ingest::{
    contour_pipeline, global_threshold, ingest_manifest, parse_manifest, parse_pnm, random_cloud, read_gsc, write_gsc,
};
use crate::sampling::{
    corpus_direction_set, corpus_distance, epsilon_net, missed_in, uniform_grid, uniform_random, write_missed_csv,
    DescriptorMetric, DirectionSet, MissedRow,
};
use crate::stratification::{coarse_stratification, csv_err, min_stratum, observing_regions, write_regions_csv};

/// Ordinary least squares of `ln m` on `ln n0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl RegressionFit {
    pub fn predict(&self, n0: f64) -> f64 {
        (self.intercept + self.slope * n0.ln()).exp()
    }
}

pub fn loglog_fit(points: &[(f64, f64)]) -> Result<RegressionFit> {
    if let Some(p) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(invalid(format!("log-log fit needs positive values, got {p:?}")));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if points.len() < 2 || sxx == 0.0 {
        return Err(invalid("log-log fit needs at least two distinct n0 values"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(RegressionFit {
        intercept,
        slope,
        r_squared,
        n_points: points.len(),
    })
}

/// Standalone SVG scatter plot on log-log axes, with the fitted line when
/// given. Output bytes depend only on the inputs.
pub fn svg_scatter(points: &[(f64, f64)], fit: Option<&RegressionFit>, x_label: &str, y_label: &str) -> Result<String> {
    if points.is_empty() {
        return Err(invalid("scatter plot needs at least one point"));
    }
    if let Some(p) = points
        .iter()
        .find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(invalid(format!("log axes need positive finite values, got {p:?}")));
    }
    let lx: Vec<f64> = points.iter().map(|p| p.0.log10()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.log10()).collect();
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min).floor();
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil();
        if hi > lo {
            (lo, hi)
        } else {
            (lo, lo + 1.0)
        }
    };
    let ((x0, x1), (y0, y1)) = (range(&lx), range(&ly));
    let (w, h, m) = (640.0, 480.0, 60.0);
    let sx = |v: f64| m + (v - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |v: f64| h - m - (v - y0) / (y1 - y0) * (h - 2.0 * m);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{:.2} {:.2} H{:.2} M{:.2} {:.2} V{:.2}" stroke="black" fill="none"/>"#,
        m,
        h - m,
        w - m,
        m,
        h - m,
        m
    );
    for e in x0 as i64..=x1 as i64 {
        let x = sx(e as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">1e{e}</text>"#,
            h - m,
            h - m + 5.0,
            h - m + 20.0
        );
    }
    for e in y0 as i64..=y1 as i64 {
        let y = sy(e as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{m:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">1e{e}</text>"#,
            m - 5.0,
            m - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>"#,
        w / 2.0,
        h - 15.0,
        xml_escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 15 {:.2})">{}</text>"#,
        h / 2.0,
        h / 2.0,
        xml_escape(y_label)
    );
    let _ = writeln!(s, r#"<g fill="steelblue" fill-opacity="0.6">"#);
    for (x, y) in lx.iter().zip(&ly) {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5"/>"#, sx(*x), sy(*y));
    }
    let _ = writeln!(s, "</g>");
    if let Some(f) = fit {
        // ln m = a + b ln n  ⇔  log10 m = a / ln 10 + b log10 n
        let at = |lxv: f64| f.intercept / std::f64::consts::LN_10 + f.slope * lxv;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="crimson" stroke-width="1.5"/>"#,
            sx(x0),
            sy(at(x0)),
            sx(x1),
            sy(at(x1))
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">ln m = {:.5} {:+.5} ln n0 (r² = {:.4})</text>"#,
            w - m,
            m - 10.0,
            f.intercept,
            f.slope,
            f.r_squared
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorpusSpec {
    /// Vertex-only complexes from uniform clouds in `[0, 10]²`.
    Randpts {
        sizes: Vec<usize>,
        per_size: usize,
        seed: u64,
    },
    /// Random star-shaped polygons as cycle graphs.
    Polygons {
        sizes: Vec<usize>,
        per_size: usize,
        seed: u64,
    },
    LowerBound {
        n: Vec<usize>,
    },
    /// Every `.gsc` file in a directory, by file name.
    Directory {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingSpec {
    #[serde(default = "default_ks")]
    pub ks: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub grid_phase: f64,
}

fn default_ks() -> Vec<usize> {
    vec![4, 8, 16, 32, 64]
}

fn default_seeds() -> Vec<u64> {
    (0..20).collect()
}

impl Default for SamplingSpec {
    fn default() -> Self {
        Self {
            ks: default_ks(),
            seeds: default_seeds(),
            grid_phase: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TripleSpec {
    Random { count: usize, seed: u64 },
    Explicit { triples: Vec<[[f64; 2]; 3]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub corpus: Option<CorpusSpec>,
    #[serde(default)]
    pub sampling: SamplingSpec,
    #[serde(default)]
    pub n_values: Vec<usize>,
    #[serde(default)]
    pub triples: Option<TripleSpec>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    /// Directions sampled off the observing region per lost-vertex triple.
    #[serde(default = "default_off_region")]
    pub off_region_directions: usize,
    #[serde(default)]
    pub seed: u64,
    pub output_dir: PathBuf,
}

fn default_resolution() -> usize {
    10_000
}

fn default_off_region() -> usize {
    64
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| invalid(format!("config: {e}")))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<()> {
        if let Some(CorpusSpec::Directory { path }) = &self.corpus {
            if !path.is_dir() {
                return Err(invalid(format!("corpus directory {} does not exist", path.display())));
            }
        }
        Ok(())
    }

    fn corpus(&self) -> Result<Vec<(String, SimplicialComplex2D)>> {
        let spec = self
            .corpus
            .as_ref()
            .ok_or_else(|| invalid("experiment needs a corpus"))?;
        load_corpus(spec)
    }
}

/// The randpts sizes: 3, 5, then 10 through 100 in tens.
pub fn randpts_sizes() -> Vec<usize> {
    let mut v = vec![3, 5];
    v.extend((1..=10).map(|i| 10 * i));
    v
}

/// Materializes a corpus as `(id, complex)` pairs in a fixed order. Clouds
/// and polygons draw from one stream per `(size, index)`.
pub fn load_corpus(spec: &CorpusSpec) -> Result<Vec<(String, SimplicialComplex2D)>> {
    let stream_seed = |seed: u64, size: usize, j: usize| seed ^ ((size as u64) << 32) ^ j as u64;
    match spec {
        CorpusSpec::Randpts { sizes, per_size, seed } => sizes
            .iter()
            .flat_map(|&k| (0..*per_size).map(move |j| (k, j)))
            .map(|(k, j)| {
                let pts = random_cloud(k, stream_seed(*seed, k, j))?;
                Ok((format!("randpts-{k}-{j}"), SimplicialComplex2D::from_points(pts)))
            })
            .collect(),
        CorpusSpec::Polygons { sizes, per_size, seed } => sizes
            .iter()
            .flat_map(|&k| (0..*per_size).map(move |j| (k, j)))
            .map(|(k, j)| {
                let mut rng = seeded_rng(stream_seed(*seed, k, j));
                Ok((format!("polygon-{k}-{j}"), random_polygon(&mut rng, k)?))
            })
            .collect(),
        CorpusSpec::LowerBound { n } => n
            .iter()
            .map(|&n| Ok((format!("lower-bound-{n}"), lower_bound_complex(n)?.complex)))
            .collect(),
        CorpusSpec::Directory { path } => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(path)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "gsc"))
                .collect();
            files.sort();
            files
                .into_iter()
                .map(|p| {
                    let k = read_gsc(&std::fs::read_to_string(&p)?)?;
                    let id = p
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    Ok((id, k))
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinStratumRow {
    pub complex_id: String,
    pub n0: usize,
    pub min_stratum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinStratumOutput {
    pub rows: Vec<MinStratumRow>,
    pub fit: RegressionFit,
    pub svg: String,
}

/// Smallest top cell per complex against vertex count, with a log-log fit.
/// Writes `min_stratum.csv`, `fit.json` and `min_stratum.svg`.
pub fn experiment_min_stratum(cfg: &ExperimentConfig) -> Result<MinStratumOutput> {
    let corpus = cfg.corpus()?;
    if corpus.is_empty() {
        return Err(invalid("corpus is empty"));
    }
    let rows = corpus
        .par_iter()
        .map(|(id, k)| {
            Ok(MinStratumRow {
                complex_id: id.clone(),
                n0: k.num_vertices(),
                min_stratum: min_stratum(&k.vertices)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for r in rows.iter().filter(|r| r.min_stratum < 1e-5) {
        log::warn!(
            "{}: smallest stratum {:e} rad is below 1e-5",
            r.complex_id,
            r.min_stratum
        );
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n0 as f64, r.min_stratum)).collect();
    let fit = loglog_fit(&pts)?;
    let svg = svg_scatter(&pts, Some(&fit), "number of vertices n0", "smallest stratum m (rad)")?;

    std::fs::create_dir_all(&cfg.output_dir)?;
    let mut w = csv::Writer::from_path(cfg.output_dir.join("min_stratum.csv")).map_err(csv_err)?;
    for r in &rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    write_json(&cfg.output_dir.join("fit.json"), &fit)?;
    std::fs::write(cfg.output_dir.join("min_stratum.svg"), &svg)?;
    Ok(MinStratumOutput { rows, fit, svg })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissSummary {
    pub scheme: String,
    pub k: usize,
    pub n0: usize,
    pub mean_missed_fraction: f64,
    pub runs: usize,
}

/// Missed vertices for grids and random direction sets of each size `k`.
/// Writes `missed.csv` (one row per complex, scheme, k, seed) and
/// `missed_summary.csv` (means per scheme, k, n0).
pub fn experiment_uniform_miss(cfg: &ExperimentConfig) -> Result<(Vec<MissedRow>, Vec<MissSummary>)> {
    let corpus = cfg.corpus()?;
    let sp = &cfg.sampling;
    let per_complex = corpus
        .par_iter()
        .map(|(id, k)| {
            let regions = observing_regions(k)?;
            let n0 = k.num_vertices();
            let mut rows = Vec::new();
            for &kk in &sp.ks {
                let g = uniform_grid(kk, sp.grid_phase)?;
                rows.push(MissedRow::new(
                    id.clone(),
                    &g,
                    n0,
                    missed_in(&regions, g.directions()).len(),
                ));
                for &seed in &sp.seeds {
                    let r = uniform_random(kk, seed)?;
                    rows.push(MissedRow::new(
                        id.clone(),
                        &r,
                        n0,
                        missed_in(&regions, r.directions()).len(),
                    ));
                }
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<MissedRow> = per_complex.into_iter().flatten().collect();

    let mut groups: std::collections::BTreeMap<(String, usize, usize), (f64, usize)> = Default::default();
    for r in &rows {
        let e = groups.entry((r.scheme.clone(), r.k_or_eps as usize, r.n0)).or_default();
        e.0 += r.missed_fraction;
        e.1 += 1;
    }
    let summary: Vec<MissSummary> = groups
        .into_iter()
        .map(|((scheme, k, n0), (sum, runs))| MissSummary {
            scheme,
            k,
            n0,
            mean_missed_fraction: sum / runs as f64,
            runs,
        })
        .collect();

    std::fs::create_dir_all(&cfg.output_dir)?;
    write_missed_csv(&rows, std::fs::File::create(cfg.output_dir.join("missed.csv"))?)?;
    let mut w = csv::Writer::from_path(cfg.output_dir.join("missed_summary.csv")).map_err(csv_err)?;
    for s in &summary {
        w.serialize(s).map_err(csv_err)?;
    }
    w.flush()?;
    Ok((rows, summary))
}

/// Builds the staircase complex for each `n` and reports its apex regions.
/// Writes `lower_bound.json`.
pub fn experiment_lower_bound(cfg: &ExperimentConfig) -> Result<Vec<LowerBoundReport>> {
    if cfg.n_values.is_empty() {
        return Err(invalid("lower bound experiment needs n_values"));
    }
    let reports = cfg
        .n_values
        .par_iter()
        .map(|&n| Ok(lower_bound_complex(n)?.report()))
        .collect::<Result<Vec<_>>>()?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    write_json(&cfg.output_dir.join("lower_bound.json"), &reports)?;
    Ok(reports)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LostVertexRecord {
    pub u: [f64; 2],
    pub v: [f64; 2],
    pub w: [f64; 2],
    pub theta: f64,
    pub predicted_hausdorff: f64,
    pub cos_half_turn: f64,
    pub computed_hausdorff: f64,
    pub sampling_bound: f64,
    /// Persistence diagrams and Euler curves agree at every sampled
    /// direction outside the observing region of `v`.
    pub equal_off_region: bool,
    pub off_region_directions: usize,
    /// They differ at the midpoint of every arc of the observing region.
    pub unequal_on_region: bool,
}

/// Builds the lost-vertex pair for `u, v, w` and checks the two complexes'
/// descriptors on and off the observing region of `v`.
pub fn evaluate_lost_vertex(
    u: Point2,
    v: Point2,
    w: Point2,
    resolution: usize,
    off_region: usize,
    seed: u64,
) -> Result<LostVertexRecord> {
    let pair = lost_vertex_pair(u, v, w, None)?;
    let h = hausdorff_distance(&pair.k, &pair.k_prime, resolution)?;
    let regions = observing_regions(&pair.k)?;
    let obs = &regions[pair.v_id].region;
    let off = obs.complement();

    let same = |d: Direction| -> Result<bool> {
        for kind in [DescriptorKind::Pd, DescriptorKind::Ecf] {
            if !descriptor_equal(&descriptor(&pair.k, d, kind)?, &descriptor(&pair.k_prime, d, kind)?) {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let mut rng = seeded_rng(seed);
    let mut equal_off = true;
    let mut taken = 0;
    let mut attempts = 0;
    while taken < off_region && attempts < 100 * off_region + 100 {
        attempts += 1;
        let d = sample_arcset(&off, &mut rng);
        match same(d) {
            Ok(eq) => {
                equal_off &= eq;
                taken += 1;
            }
            Err(Error::DegenerateDirection { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let mut unequal_on = !obs.is_empty();
    for a in obs.arcs() {
        unequal_on &= !same_inside(a, &same)?;
    }
    Ok(LostVertexRecord {
        u: [u.x, u.y],
        v: [v.x, v.y],
        w: [w.x, w.y],
        theta: pair.theta,
        predicted_hausdorff: pair.predicted_hausdorff,
        cos_half_turn: pair.cos_half_turn,
        computed_hausdorff: h.value,
        sampling_bound: h.bound,
        equal_off_region: equal_off && taken == off_region,
        off_region_directions: taken,
        unequal_on_region: unequal_on,
    })
}

/// Evaluates `same` at an interior point of `arc`, trying the midpoint
/// first and moving off it when the direction ties two vertices.
fn same_inside(arc: &crate::geometry::Arc, same: &impl Fn(Direction) -> Result<bool>) -> Result<bool> {
    let mut last = None;
    for f in [0.5, 0.25, 0.75, 0.375, 0.625, 0.125, 0.875] {
        match same(Direction::new(arc.start() + f * arc.length())) {
            Err(e @ Error::DegenerateDirection { .. }) => last = Some(e),
            r => return r,
        }
    }
    Err(last.expect("at least one probe"))
}

/// A direction uniform (by arc length) over a nonempty arc set.
pub fn sample_arcset(set: &crate::geometry::ArcSet, rng: &mut crate::geometry::SeededRng) -> Direction {
    let mut t = rng.gen_range(0.0..set.measure());
    for a in set.arcs() {
        if t < a.length() {
            return Direction::new(a.start() + t);
        }
        t -= a.length();
    }
    set.arcs().last().map(|a| a.midpoint()).unwrap_or(Direction::new(0.0))
}

/// Lost-vertex checks over the configured triples. Writes `lost_vertex.json`.
pub fn experiment_lost_vertex(cfg: &ExperimentConfig) -> Result<Vec<LostVertexRecord>> {
    let triples: Vec<(Point2, Point2, Point2)> = match &cfg.triples {
        None => vec![(Point2::new(-1., 0.), Point2::new(0., 1.), Point2::new(1., 0.))],
        Some(TripleSpec::Explicit { triples }) => triples
            .iter()
            .map(|t| {
                (
                    Point2::new(t[0][0], t[0][1]),
                    Point2::new(t[1][0], t[1][1]),
                    Point2::new(t[2][0], t[2][1]),
                )
            })
            .collect(),
        Some(TripleSpec::Random { count, seed }) => {
            let mut rng = seeded_rng(*seed);
            (0..*count).map(|_| random_isosceles(&mut rng)).collect()
        }
    };
    let records = triples
        .par_iter()
        .enumerate()
        .map(|(i, &(u, v, w))| {
            evaluate_lost_vertex(
                u,
                v,
                w,
                cfg.resolution,
                cfg.off_region_directions,
                cfg.seed.wrapping_add(i as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    write_json(&cfg.output_dir.join("lost_vertex.json"), &records)?;
    Ok(records)
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// command line

#[derive(Debug, Parser)]
#[command(
    name = "strataudit",
    version,
    about = "Direction-space stratification of planar simplicial complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Log verbosity (error, warn, info, debug).
    #[arg(long, global = true, default_value = "warn")]
    pub log: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Pd,
    Ecf,
    Betti,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    EcfL1,
    Bottleneck,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SchemeArg {
    Grid,
    Random,
    EpsNet,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GenerateArg {
    Triangle,
    LowerBound,
    LostVertex,
    Randpts,
    Polygon,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Top cells of the stratification as CSV.
    Stratify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Observing regions of every vertex as CSV.
    Observe {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Descriptor of a complex in one direction, as JSON.
    Descriptors {
        #[arg(long)]
        input: PathBuf,
        /// Direction angle in radians.
        #[arg(long, allow_hyphen_values = true)]
        direction: f64,
        #[arg(long, value_enum, default_value = "pd")]
        kind: KindArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a direction set; with --input, also report missed vertices.
    Sample {
        #[arg(long, value_enum, default_value = "grid")]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 16)]
        k: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phase: f64,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Image(s) to cycle graphs. Input is a PNM file or a manifest of
    /// `class_id<TAB>path` lines.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Fixed threshold; omitted means the mean Otsu threshold of each
        /// class's first image (manifest) or the image's own Otsu threshold.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = 0.005)]
        level: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Summed descriptor distance between two complexes.
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long, value_enum, default_value = "ecf-l1")]
        metric: MetricArg,
        /// Newline-delimited radians; defaults to the pair's ε-net.
        #[arg(long)]
        directions: Option<PathBuf>,
    },
    /// Write a generated complex in `.gsc` format.
    Generate {
        #[arg(value_enum)]
        what: GenerateArg,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run an experiment from a JSON config.
    Experiment {
        /// min-stratum, uniform-miss, lower-bound or lost-vertex; defaults
        /// to the config's `experiment` field.
        name: Option<String>,
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn read_complex(path: &Path) -> Result<SimplicialComplex2D> {
    let k = read_gsc(&std::fs::read_to_string(path)?)?;
    let report = validate(&k);
    if !report.is_simplicial() {
        return Err(Error::InvalidComplex(format!("{}: {report:?}", path.display())));
    }
    Ok(k)
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
        }
    }
    Ok(())
}

/// Exit code for a command result: 0 success, 2 validation rejection,
/// 1 any other error.
pub fn exit_code(r: &Result<()>) -> i32 {
    match r {
        Ok(()) => 0,
        Err(Error::Rejected(_) | Error::FaceClosure(_) | Error::InvalidComplex(_)) => 2,
        Err(_) => 1,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Stratify { input, output } => {
            let k = read_complex(&input)?;
            let mut buf = Vec::new();
            coarse_stratification(&k.vertices)?.write_csv(&mut buf)?;
            emit(output.as_deref(), &buf)
        }
        Command::Observe { input, output } => {
            let k = read_complex(&input)?;
            let mut buf = Vec::new();
            write_regions_csv(&observing_regions(&k)?, &mut buf)?;
            emit(output.as_deref(), &buf)
        }
        Command::Descriptors {
            input,
            direction,
            kind,
            output,
        } => {
            let k = read_complex(&input)?;
            let kind = match kind {
                KindArg::Pd => DescriptorKind::Pd,
                KindArg::Ecf => DescriptorKind::Ecf,
                KindArg::Betti => DescriptorKind::Betti,
            };
            let d = descriptor(&k, Direction::new(direction), kind)?;
            let text = serde_json::to_string_pretty(&d).map_err(|e| Error::Io(e.to_string()))?;
            emit(output.as_deref(), (text + "\n").as_bytes())
        }
        Command::Sample {
            scheme,
            k,
            phase,
            eps,
            seed,
            input,
            output,
        } => {
            let set = match scheme {
                SchemeArg::Grid => uniform_grid(k, phase)?,
                SchemeArg::Random => uniform_random(k, seed)?,
                SchemeArg::EpsNet => epsilon_net(eps.ok_or_else(|| invalid("--eps is required for eps-net"))?)?,
            };
            let mut buf = Vec::new();
            set.write_text(&mut buf)?;
            emit(output.as_deref(), &buf)?;
            if let Some(path) = input {
                let cx = read_complex(&path)?;
                let missed = missed_in(&observing_regions(&cx)?, set.directions());
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let mut buf = Vec::new();
                write_missed_csv(&[MissedRow::new(id, &set, cx.num_vertices(), missed.len())], &mut buf)?;
                eprint!("{}", String::from_utf8_lossy(&buf));
            }
            Ok(())
        }
        Command::Ingest {
            input,
            output,
            threshold,
            level,
            seed,
        } => ingest(&input, &output, threshold, level, seed),
        Command::Compare {
            input,
            other,
            metric,
            directions,
        } => {
            let a = read_complex(&input)?;
            let b = read_complex(&other)?;
            let set = match directions {
                Some(p) => DirectionSet::read_text(&std::fs::read_to_string(p)?)?,
                None => corpus_direction_set(&[a.clone(), b.clone()])?,
            };
            let metric = match metric {
                MetricArg::EcfL1 => DescriptorMetric::EcfL1,
                MetricArg::Bottleneck => DescriptorMetric::Bottleneck,
            };
            println!("{}", corpus_distance(&a, &b, set.directions(), metric)?);
            Ok(())
        }
        Command::Generate { what, n, seed, output } => {
            let k = match what {
                GenerateArg::Triangle => example_triangle(),
                GenerateArg::LowerBound => lower_bound_complex(n)?.complex,
                GenerateArg::LostVertex => {
                    lost_vertex_pair(Point2::new(-1., 0.), Point2::new(0., 1.), Point2::new(1., 0.), None)?.k
                }
                GenerateArg::Randpts => SimplicialComplex2D::from_points(random_cloud(n, seed)?),
                GenerateArg::Polygon => random_polygon(&mut seeded_rng(seed), n)?,
            };
            emit(output.as_deref(), write_gsc(&k).as_bytes())
        }
        Command::Experiment {
            name,
            config,
            output,
            seed,
        } => {
            let mut cfg = ExperimentConfig::from_json(&std::fs::read_to_string(config)?)?;
            if let Some(o) = output {
                cfg.output_dir = o;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let name = name.unwrap_or_else(|| cfg.experiment.clone());
            run_experiment(&name, &cfg)
        }
    }
}

pub fn run_experiment(name: &str, cfg: &ExperimentConfig) -> Result<()> {
    match name.replace('_', "-").as_str() {
        "min-stratum" => {
            let out = experiment_min_stratum(cfg)?;
            println!(
                "{} complexes: ln m = {:.5} {:+.5} ln n0, r² = {:.4}",
                out.rows.len(),
                out.fit.intercept,
                out.fit.slope,
                out.fit.r_squared
            );
        }
        "uniform-miss" => {
            let (rows, summary) = experiment_uniform_miss(cfg)?;
            println!("{} rows, {} summary groups", rows.len(), summary.len());
        }
        "lower-bound" => {
            for r in experiment_lower_bound(cfg)? {
                println!(
                    "n={} disjoint={} directions needed >= {}",
                    r.n, r.disjoint, r.min_directions
                );
            }
        }
        "lost-vertex" => {
            let recs = experiment_lost_vertex(cfg)?;
            let worst = recs
                .iter()
                .map(|r| (r.computed_hausdorff - r.predicted_hausdorff).abs())
                .fold(0.0, f64::max);
            let ok = recs
                .iter()
                .filter(|r| r.equal_off_region && r.unequal_on_region)
                .count();
            println!(
                "{} triples, {ok} with the expected descriptor verdicts, max |d_H error| = {worst:e}",
                recs.len()
            );
        }
        other => return Err(invalid(format!("unknown experiment {other:?}"))),
    }
    Ok(())
}

fn ingest(input: &Path, output: &Path, threshold: Option<f64>, level: f64, seed: u64) -> Result<()> {
    std::fs::create_dir_all(output)?;
    let bytes = std::fs::read(input)?;
    if bytes.starts_with(b"P") {
        let img = parse_pnm(&bytes)?;
        let t = match threshold {
            Some(t) => t,
            None => crate::ingest::otsu_threshold(&img)? as f64,
        };
        let k = contour_pipeline(&img, t, level, seed)?;
        let stem = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "image".into());
        std::fs::write(output.join(format!("{stem}.gsc")), write_gsc(&k))?;
        return Ok(());
    }
    let entries = parse_manifest(&String::from_utf8_lossy(&bytes))?;
    let base = input.parent().unwrap_or(Path::new("."));
    let t = match threshold {
        Some(t) => t,
        None => {
            let g = global_threshold(&entries, base)?;
            log::info!(
                "global threshold {:.3} (std {:.3}) over {} classes",
                g.mean,
                g.std,
                g.per_class.len()
            );
            g.mean
        }
    };
    let results = ingest_manifest(&entries, base, t, level, seed);
    let mut w = csv::Writer::from_path(output.join("ingest.csv")).map_err(csv_err)?;
    w.write_record(["index", "class_id", "path", "status", "vertices"])
        .map_err(csv_err)?;
    for (i, r) in results.iter().enumerate() {
        let (status, n) = match &r.outcome {
            Ok(k) => {
                std::fs::write(output.join(format!("{i:05}.gsc")), write_gsc(k))?;
                ("ok".to_string(), k.num_vertices().to_string())
            }
            Err(Error::Rejected(reason)) => (reason.code().to_string(), String::new()),
            Err(e) => (format!("error: {e}"), String::new()),
        };
        w.write_record([i.to_string(), r.entry.class_id.clone(), r.entry.path.clone(), status, n])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_examples() {
        let f = loglog_fit(&[(1., 2.), (2., 4.), (3., 6.)]).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
        assert!((f.intercept - 2f64.ln()).abs() < 1e-12);
        let pts: Vec<(f64, f64)> = (1..6).map(|n| (n as f64, (n as f64).powi(-4))).collect();
        let f = loglog_fit(&pts).unwrap();
        assert!((f.slope + 4.0).abs() < 1e-12);
        assert!(f.intercept.abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(f.n_points, 5);
        assert!(loglog_fit(&[(3., 1.), (3., 2.)]).is_err());
        assert!(loglog_fit(&[(0., 1.), (3., 2.)]).is_err());
    }

    #[test]
    fn svg_is_deterministic() {
        let pts = [(3., 0.5), (10., 0.01), (100., 1e-6)];
        let f = loglog_fit(&pts).unwrap();
        let a = svg_scatter(&pts, Some(&f), "n0", "m").unwrap();
        assert_eq!(a, svg_scatter(&pts, Some(&f), "n0", "m").unwrap());
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<circle").count(), 3);
        assert!(svg_scatter(&[], None, "x", "y").is_err());
    }

    #[test]
    fn config_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment":"lower_bound","n_values":[1,2],"output_dir":"/tmp/x"}"#)
            .unwrap();
        assert_eq!(cfg.sampling.ks, vec![4, 8, 16, 32, 64]);
        assert_eq!(cfg.sampling.seeds.len(), 20);
        assert_eq!(cfg.resolution, 10_000);
        let bad =
            r#"{"experiment":"min_stratum","corpus":{"kind":"directory","path":"/no/such/dir"},"output_dir":"/tmp/x"}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
    }

    #[test]
    fn randpts_corpus_is_reproducible() {
        let spec = CorpusSpec::Randpts {
            sizes: vec![3, 5],
            per_size: 4,
            seed: 9,
        };
        let a = load_corpus(&spec).unwrap();
        assert_eq!(a.len(), 8);
        assert_eq!(a, load_corpus(&spec).unwrap());
        assert_eq!(a[5].1.num_vertices(), 5);
        assert_eq!(randpts_sizes(), vec![3, 5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100]);
    }
}
