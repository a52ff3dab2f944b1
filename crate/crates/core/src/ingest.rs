//! Corpus construction: random clouds, the image → contour → cycle graph
//! pipeline, and the `.gsc` text format.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{validate, SimplicialComplex2D};
use crate::constructions::point_segment_distance;
use crate::error::{invalid, Error, Result};
use crate::geometry::{general_position_check, perturb, seeded_rng, Point2};

/// Why the contour pipeline declined to emit a complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, thiserror::Error)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    #[error("three vertices are collinear")]
    Collinear,
    #[error("two vertices share a coordinate value")]
    SharedCoordinate,
    #[error("simplified polygon overlaps itself")]
    SelfOverlap,
    #[error("no usable contour")]
    Empty,
}

impl RejectReason {
    pub fn code(self) -> &'static str {
        match self {
            RejectReason::Collinear => "collinear",
            RejectReason::SharedCoordinate => "shared-coordinate",
            RejectReason::SelfOverlap => "self-overlap",
            RejectReason::Empty => "empty",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major.
    pub pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, maxval: u16, pixels: Vec<u16>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(invalid(format!("{} pixels for a {width}x{height} image", pixels.len())));
        }
        if let Some(p) = pixels.iter().find(|&&p| p > maxval) {
            return Err(invalid(format!("pixel value {p} exceeds maxval {maxval}")));
        }
        Ok(Self {
            width,
            height,
            maxval,
            pixels,
        })
    }

    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }
}

struct PnmReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PnmReader<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: format!("{what} out of range"),
            })
    }

    fn bit(&mut self) -> Result<u16> {
        self.skip_space();
        match self.bytes.get(self.pos) {
            Some(b'0') => {
                self.pos += 1;
                Ok(0)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(1)
            }
            Some(_) => Err(self.err("expected 0 or 1")),
            None => Err(self.err("truncated bitmap")),
        }
    }

    /// Binary rasters start after exactly one whitespace byte.
    fn raster_start(&mut self) -> Result<()> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err("expected whitespace before raster")),
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            self.pos = self.bytes.len();
            return Err(self.err(format!("truncated raster: need {n} more bytes")));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
}

/// Value bilevel pixels get, so set bits come out bright.
const BITMAP_MAXVAL: u16 = 255;

/// Decodes PBM or PGM (`P1`, `P2`, `P4`, `P5`). Set PBM bits become
/// the maximum value.
pub fn parse_pnm(bytes: &[u8]) -> Result<GrayImage> {
    let mut r = PnmReader { bytes, pos: 0 };
    let magic = r.take(2).map_err(|_| r.err("missing magic number"))?;
    let kind = match magic {
        b"P1" => 1,
        b"P2" => 2,
        b"P4" => 4,
        b"P5" => 5,
        _ => {
            return Err(Error::Parse {
                offset: 0,
                message: "unsupported magic number, expected P1, P2, P4 or P5".into(),
            })
        }
    };
    let width = r.number("width")? as usize;
    let height = r.number("height")? as usize;
    let n = width
        .checked_mul(height)
        .ok_or_else(|| r.err("image dimensions overflow"))?;
    let maxval = if kind == 1 || kind == 4 {
        BITMAP_MAXVAL
    } else {
        let m = r.number("maxval")?;
        if m == 0 || m > 65535 {
            return Err(r.err(format!("maxval {m} outside 1..=65535")));
        }
        m as u16
    };
    let mut pixels = Vec::with_capacity(n);
    match kind {
        1 => {
            for _ in 0..n {
                pixels.push(r.bit()? * BITMAP_MAXVAL);
            }
        }
        2 => {
            for _ in 0..n {
                let at = r.pos;
                let v = r.number("pixel value")?;
                if v > maxval as u32 {
                    return Err(Error::Parse {
                        offset: at,
                        message: format!("pixel value {v} exceeds maxval {maxval}"),
                    });
                }
                pixels.push(v as u16);
            }
        }
        4 => {
            r.raster_start()?;
            let row_bytes = width.div_ceil(8);
            for _ in 0..height {
                let row = r.take(row_bytes)?;
                for x in 0..width {
                    let bit = (row[x / 8] >> (7 - x % 8)) & 1;
                    pixels.push(bit as u16 * BITMAP_MAXVAL);
                }
            }
        }
        _ => {
            r.raster_start()?;
            let wide = maxval > 255;
            let raster = r.take(if wide { 2 * n } else { n })?;
            if wide {
                pixels.extend(raster.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])));
            } else {
                pixels.extend(raster.iter().map(|&b| b as u16));
            }
            let offset = r.pos - raster.len();
            if let Some(i) = pixels.iter().position(|&p| p > maxval) {
                return Err(Error::Parse {
                    offset: offset + if wide { 2 * i } else { i },
                    message: format!("pixel value exceeds maxval {maxval}"),
                });
            }
        }
    }
    Ok(GrayImage {
        width,
        height,
        maxval,
        pixels,
    })
}

/// Otsu's threshold: the `t` maximizing between-class variance when
/// splitting into `≤ t` and `> t`. The smallest maximizer wins ties.
pub fn otsu_threshold(img: &GrayImage) -> Result<u16> {
    let mut hist = vec![0u64; img.maxval as usize + 1];
    for &p in &img.pixels {
        hist[p as usize] += 1;
    }
    if hist.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(invalid("Otsu threshold needs at least two distinct pixel values"));
    }
    let total = img.pixels.len() as f64;
    let sum_all: f64 = hist.iter().enumerate().map(|(v, &c)| v as f64 * c as f64).sum();
    let (mut w0, mut sum0) = (0.0, 0.0);
    let mut best = (f64::NEG_INFINITY, 0u16);
    for (t, &c) in hist.iter().enumerate().take(hist.len() - 1) {
        w0 += c as f64;
        sum0 += t as f64 * c as f64;
        let w1 = total - w0;
        if w0 == 0.0 || w1 == 0.0 {
            continue;
        }
        let (mu0, mu1) = (sum0 / w0, (sum_all - sum0) / w1);
        let between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if between > best.0 {
            best = (between, t as u16);
        }
    }
    Ok(best.1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalThreshold {
    pub mean: f64,
    pub std: f64,
    /// Otsu threshold of the first image of each class, in manifest order.
    pub per_class: Vec<(String, u16)>,
}

/// One manifest line: `class_id<TAB>path`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub class_id: String,
    pub path: String,
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (class_id, path) = line.split_once('\t').ok_or_else(|| Error::Syntax {
            line: i + 1,
            message: "expected class_id<TAB>path".into(),
        })?;
        out.push(ManifestEntry {
            class_id: class_id.trim().to_string(),
            path: path.trim().to_string(),
        });
    }
    Ok(out)
}

/// Mean (and spread) of the Otsu thresholds of each class's first image.
/// Relative paths resolve against `base`.
pub fn global_threshold(entries: &[ManifestEntry], base: &Path) -> Result<GlobalThreshold> {
    let mut per_class: Vec<(String, u16)> = Vec::new();
    for e in entries {
        if per_class.iter().any(|(c, _)| c == &e.class_id) {
            continue;
        }
        let img = parse_pnm(&std::fs::read(base.join(&e.path))?)?;
        per_class.push((e.class_id.clone(), otsu_threshold(&img)?));
    }
    if per_class.is_empty() {
        return Err(invalid("manifest lists no images"));
    }
    let n = per_class.len() as f64;
    let mean = per_class.iter().map(|(_, t)| *t as f64).sum::<f64>() / n;
    let var = per_class.iter().map(|(_, t)| (*t as f64 - mean).powi(2)).sum::<f64>() / n;
    Ok(GlobalThreshold {
        mean,
        std: var.sqrt(),
        per_class,
    })
}

/// Foreground mask: pixels strictly brighter than `threshold`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    pub width: usize,
    pub height: usize,
    pub fg: Vec<bool>,
}

impl BinaryImage {
    pub fn threshold(img: &GrayImage, threshold: f64) -> Self {
        Self {
            width: img.width,
            height: img.height,
            fg: img.pixels.iter().map(|&p| p as f64 > threshold).collect(),
        }
    }

    fn at(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.fg[y as usize * self.width + x as usize]
    }
}

/// A traced boundary in pixel coordinates (`x` = column, `y` = row).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub points: Vec<Point2>,
    pub closed: bool,
}

impl Contour {
    pub fn arc_length(&self) -> f64 {
        let p = &self.points;
        let open: f64 = p.windows(2).map(|w| w[0].distance(w[1])).sum();
        match (self.closed, p.first(), p.last()) {
            (true, Some(a), Some(b)) => open + a.distance(*b),
            _ => open,
        }
    }
}

/// Clockwise ring (on screen, y down) starting west.
const RING: [(i64, i64); 8] = [(-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1)];

fn ring_index(from: (i64, i64), to: (i64, i64)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    RING.iter().position(|&r| r == d).expect("8-adjacent")
}

/// Outer border of the 8-connected component whose top-left pixel is
/// `start`, by Moore-neighbor tracing with Jacob's stopping criterion.
fn trace(img: &BinaryImage, start: (i64, i64)) -> Vec<(i64, i64)> {
    let first_back = (start.0 - 1, start.1);
    let mut out = vec![start];
    let (mut p, mut back) = (start, first_back);
    let limit = 4 * img.fg.len() + 16;
    for _ in 0..limit {
        let i0 = ring_index(p, back);
        let next = (1..=8).find_map(|k| {
            let (dx, dy) = RING[(i0 + k) % 8];
            let c = (p.0 + dx, p.1 + dy);
            img.at(c.0, c.1).then(|| {
                let (bx, by) = RING[(i0 + k - 1) % 8];
                (c, (p.0 + bx, p.1 + by))
            })
        });
        let Some((c, b)) = next else {
            break; // isolated pixel
        };
        if c == start && b == first_back {
            break;
        }
        // Reaching the start from another side does not end the trace.
        out.push(c);
        p = c;
        back = b;
    }
    out
}

/// Traces the outer border of every 8-connected foreground component and
/// returns the one with the longest closed polygonal length.
pub fn extract_longest_contour(img: &BinaryImage) -> Result<Contour> {
    let (w, h) = (img.width, img.height);
    let mut label = vec![false; w * h];
    let mut best: Option<(f64, Contour)> = None;
    for y in 0..h {
        for x in 0..w {
            if !img.fg[y * w + x] || label[y * w + x] {
                continue;
            }
            flood(img, &mut label, x, y);
            let pts: Vec<Point2> = trace(img, (x as i64, y as i64))
                .into_iter()
                .map(|(px, py)| Point2::new(px as f64, py as f64))
                .collect();
            let c = Contour {
                closed: pts.len() >= 3,
                points: pts,
            };
            let len = c.arc_length();
            if best.as_ref().is_none_or(|(l, _)| len > *l) {
                best = Some((len, c));
            }
        }
    }
    best.map(|(_, c)| c)
        .ok_or_else(|| invalid("image has no foreground pixels"))
}

fn flood(img: &BinaryImage, label: &mut [bool], x: usize, y: usize) {
    let w = img.width;
    let mut stack = vec![(x as i64, y as i64)];
    label[y * w + x] = true;
    while let Some((cx, cy)) = stack.pop() {
        for (dx, dy) in RING {
            let (nx, ny) = (cx + dx, cy + dy);
            if img.at(nx, ny) && !label[ny as usize * w + nx as usize] {
                label[ny as usize * w + nx as usize] = true;
                stack.push((nx, ny));
            }
        }
    }
}

/// Douglas–Peucker simplification: a point survives when it lies farther
/// than `epsilon` from the chord of its enclosing kept pair. Closed contours
/// are cut at the point farthest from the first, and both halves simplified.
pub fn douglas_peucker(contour: &Contour, epsilon: f64) -> Contour {
    let p = &contour.points;
    if !contour.closed || p.len() < 3 {
        return Contour {
            points: dp_open(p, epsilon),
            closed: contour.closed,
        };
    }
    let far = (1..p.len())
        .max_by(|&a, &b| p[0].distance(p[a]).total_cmp(&p[0].distance(p[b])).then(b.cmp(&a)))
        .expect("at least 3 points");
    let first = dp_open(&p[..=far], epsilon);
    let mut second_half: Vec<Point2> = p[far..].to_vec();
    second_half.push(p[0]);
    let second = dp_open(&second_half, epsilon);
    let mut points = first;
    points.pop();
    points.extend_from_slice(&second[..second.len() - 1]);
    Contour { points, closed: true }
}

fn dp_open(p: &[Point2], epsilon: f64) -> Vec<Point2> {
    if p.len() < 3 {
        return p.to_vec();
    }
    let mut keep = vec![false; p.len()];
    keep[0] = true;
    keep[p.len() - 1] = true;
    let mut stack = vec![(0, p.len() - 1)];
    while let Some((a, b)) = stack.pop() {
        if b <= a + 1 {
            continue;
        }
        let (idx, d) = (a + 1..b)
            .map(|i| (i, point_segment_distance(p[i], p[a], p[b])))
            .fold((a, f64::NEG_INFINITY), |best, x| if x.1 > best.1 { x } else { best });
        if d > epsilon {
            keep[idx] = true;
            stack.push((a, idx));
            stack.push((idx, b));
        }
    }
    p.iter().zip(keep).filter(|(_, k)| *k).map(|(q, _)| *q).collect()
}

/// Half-width of the coordinate jitter applied to simplified contours.
pub const CONTOUR_JITTER: f64 = 0.01;

/// Image → cycle graph: binarize at `threshold`, keep the longest contour,
/// simplify with tolerance `level × arc length`, jitter each coordinate by
/// up to [`CONTOUR_JITTER`], and reject anything that is not a simple
/// polygon in general position.
pub fn contour_pipeline(img: &GrayImage, threshold: f64, level: f64, seed: u64) -> Result<SimplicialComplex2D> {
    if level.is_nan() || level < 0.0 {
        return Err(invalid(format!(
            "simplification level must be nonnegative, got {level}"
        )));
    }
    let bin = BinaryImage::threshold(img, threshold);
    if !bin.fg.iter().any(|&f| f) {
        return Err(Error::Rejected(RejectReason::Empty));
    }
    let contour = extract_longest_contour(&bin)?;
    let simplified = douglas_peucker(&contour, level * contour.arc_length());
    if simplified.points.len() < 3 {
        return Err(Error::Rejected(RejectReason::Empty));
    }
    cycle_from_points(&simplified.points, seed)
}

/// Jitters a closed polyline and checks it is a simple polygon in general
/// position.
pub fn cycle_from_points(points: &[Point2], seed: u64) -> Result<SimplicialComplex2D> {
    let jittered = perturb(points, CONTOUR_JITTER, seed)?;
    let k = SimplicialComplex2D::cycle(jittered);
    let report = validate(&k);
    if !report.is_simplicial() {
        return Err(Error::Rejected(RejectReason::SelfOverlap));
    }
    let gp = general_position_check(&k.vertices);
    if !gp.collinear_triples.is_empty() {
        return Err(Error::Rejected(RejectReason::Collinear));
    }
    if !gp.shared_coordinate_pairs.is_empty() {
        return Err(Error::Rejected(RejectReason::SharedCoordinate));
    }
    Ok(k)
}

/// Outcome of one manifest entry.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestResult {
    pub entry: ManifestEntry,
    pub outcome: Result<SimplicialComplex2D>,
}

/// Runs the pipeline over every manifest entry in parallel; results keep
/// manifest order. Entry `i` is jittered with `seed + i`.
pub fn ingest_manifest(
    entries: &[ManifestEntry],
    base: &Path,
    threshold: f64,
    level: f64,
    seed: u64,
) -> Vec<IngestResult> {
    entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let outcome = std::fs::read(base.join(&e.path))
                .map_err(Error::from)
                .and_then(|b| parse_pnm(&b))
                .and_then(|img| contour_pipeline(&img, threshold, level, seed.wrapping_add(i as u64)));
            if let Err(err) = &outcome {
                log::info!("{} ({}): {err}", e.path, e.class_id);
            }
            IngestResult {
                entry: e.clone(),
                outcome,
            }
        })
        .collect()
}

/// `k` points drawn uniformly from `[0, 10)²`, `x` before `y`.
pub fn random_cloud(k: usize, seed: u64) -> Result<Vec<Point2>> {
    if k < 1 {
        return Err(invalid("random cloud needs k >= 1"));
    }
    let mut rng = seeded_rng(seed);
    Ok((0..k)
        .map(|_| {
            let x = rng.gen_range(0.0..10.0);
            let y = rng.gen_range(0.0..10.0);
            Point2::new(x, y)
        })
        .collect())
}

/// Serializes to the `.gsc` format. Coordinates carry 17 significant digits
/// so reading them back is exact.
pub fn write_gsc(k: &SimplicialComplex2D) -> String {
    let mut s = String::from("gsc 2\n");
    for p in &k.vertices {
        writeln!(s, "v {:.16e} {:.16e}", p.x, p.y).expect("write to string");
    }
    for [a, b] in &k.edges {
        writeln!(s, "e {a} {b}").expect("write to string");
    }
    for [a, b, c] in &k.triangles {
        writeln!(s, "t {a} {b} {c}").expect("write to string");
    }
    s
}

pub fn read_gsc(text: &str) -> Result<SimplicialComplex2D> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut triangles = Vec::new();
    let mut header = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax { line: line_no, message };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if !header {
            if toks != ["gsc", "2"] {
                return Err(syntax(format!("expected header `gsc 2`, got {line:?}")));
            }
            header = true;
            continue;
        }
        let ints = |n: usize| -> Result<Vec<usize>> {
            if toks.len() != n + 1 {
                return Err(syntax(format!("`{}` takes {n} indices", toks[0])));
            }
            toks[1..]
                .iter()
                .map(|t| t.parse().map_err(|_| syntax(format!("bad index {t:?}"))))
                .collect()
        };
        match toks[0] {
            "v" => {
                if toks.len() != 3 {
                    return Err(syntax("`v` takes two coordinates".into()));
                }
                let c: Vec<f64> = toks[1..]
                    .iter()
                    .map(|t| t.parse().map_err(|_| syntax(format!("bad coordinate {t:?}"))))
                    .collect::<Result<_>>()?;
                vertices.push(Point2::new(c[0], c[1]));
            }
            "e" => {
                let v = ints(2)?;
                edges.push([v[0], v[1]]);
            }
            "t" => {
                let v = ints(3)?;
                triangles.push([v[0], v[1], v[2]]);
            }
            other => return Err(syntax(format!("unknown record {other:?}"))),
        }
    }
    if !header {
        return Err(Error::Syntax {
            line: 1,
            message: "missing header `gsc 2`".into(),
        });
    }
    SimplicialComplex2D::try_new(vertices, edges, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checker_p2() -> &'static [u8] {
        b"P2\n# a comment\n2 2\n255\n0 255\n255 0\n"
    }

    #[test]
    fn pnm_formats_agree() {
        let a = parse_pnm(checker_p2()).unwrap();
        assert_eq!((a.width, a.height, a.maxval), (2, 2, 255));
        assert_eq!(a.pixels, vec![0, 255, 255, 0]);
        let b = parse_pnm(b"P5 2 2 255\n\x00\xff\xff\x00").unwrap();
        assert_eq!(a, b);
        let c = parse_pnm(b"P1\n2 2\n0 1\n1 0\n").unwrap();
        assert_eq!(c.pixels, vec![0, 255, 255, 0]);
        let d = parse_pnm(b"P4\n2 2\n\x40\x80").unwrap();
        assert_eq!(c, d);
        let e = parse_pnm(b"P1 3 1 010").unwrap();
        assert_eq!(e.pixels, vec![0, 255, 0]);
        let wide = parse_pnm(b"P5 1 1 1000\n\x03\xe8").unwrap();
        assert_eq!(wide.pixels, vec![1000]);
    }

    #[test]
    fn pnm_errors_report_offsets() {
        match parse_pnm(b"P5 2 2 255\n\x00\xff") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 13),
            other => panic!("{other:?}"),
        }
        match parse_pnm(b"P7 1 1") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        match parse_pnm(b"P2 2 x") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_pnm(b"P2 1 1 9 10").is_err());
    }

    #[test]
    fn otsu_two_levels_takes_smallest_maximizer() {
        let mut px = vec![10u16; 50];
        px.extend(vec![200u16; 50]);
        let img = GrayImage::new(10, 10, 255, px).unwrap();
        assert_eq!(otsu_threshold(&img).unwrap(), 10);
        let flat = GrayImage::new(2, 1, 255, vec![7, 7]).unwrap();
        assert!(otsu_threshold(&flat).is_err());
    }

    #[test]
    fn single_pixel_and_block_contours() {
        let img = BinaryImage {
            width: 3,
            height: 3,
            fg: vec![false, false, false, false, true, false, false, false, false],
        };
        let c = extract_longest_contour(&img).unwrap();
        assert_eq!(c.points, vec![Point2::new(1., 1.)]);

        let mut fg = vec![false; 16];
        for (x, y) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            fg[y * 4 + x] = true;
        }
        let c = extract_longest_contour(&BinaryImage {
            width: 4,
            height: 4,
            fg,
        })
        .unwrap();
        assert_eq!(
            c.points,
            vec![
                Point2::new(1., 1.),
                Point2::new(2., 1.),
                Point2::new(2., 2.),
                Point2::new(1., 2.)
            ]
        );
        assert!(c.closed);
        assert_eq!(c.arc_length(), 4.0);
        let empty = BinaryImage {
            width: 2,
            height: 2,
            fg: vec![false; 4],
        };
        assert!(extract_longest_contour(&empty).is_err());
    }

    #[test]
    fn longest_of_two_blobs() {
        let (w, h) = (12, 6);
        let mut fg = vec![false; w * h];
        fg[w + 1] = true;
        for y in 1..5 {
            for x in 5..10 {
                fg[y * w + x] = true;
            }
        }
        let c = extract_longest_contour(&BinaryImage {
            width: w,
            height: h,
            fg,
        })
        .unwrap();
        assert_eq!(c.points.len(), 14);
        assert!(c.points.iter().all(|p| p.x >= 5.0));
    }

    #[test]
    fn dp_examples() {
        let line = Contour {
            points: vec![Point2::new(0., 0.), Point2::new(1., 0.05), Point2::new(2., 0.)],
            closed: false,
        };
        assert_eq!(
            douglas_peucker(&line, 0.1).points,
            vec![Point2::new(0., 0.), Point2::new(2., 0.)]
        );
        assert_eq!(douglas_peucker(&line, 0.01).points.len(), 3);
        let sq = Contour {
            points: vec![
                Point2::new(0., 0.),
                Point2::new(1., 0.05),
                Point2::new(2., 0.),
                Point2::new(2., 2.),
                Point2::new(0., 2.),
            ],
            closed: true,
        };
        assert_eq!(douglas_peucker(&sq, 0.0), sq);
        assert_eq!(douglas_peucker(&sq, 0.2).points.len(), 4);
    }

    #[test]
    fn gsc_round_trip_and_errors() {
        let k = SimplicialComplex2D::new(
            vec![
                Point2::new(0.1, 1.0 / 3.0),
                Point2::new(2., 1e-300),
                Point2::new(-1.5, 3.),
            ],
            vec![[0, 1], [0, 2], [1, 2]],
            vec![[0, 1, 2]],
        );
        let text = write_gsc(&k);
        assert!(text.starts_with("gsc 2\nv "));
        assert_eq!(read_gsc(&text).unwrap(), k);

        let missing = "gsc 2\nv 0 0\nv 1 0\nv 0 1\ne 0 1\ne 1 2\nt 0 1 2\n";
        assert!(matches!(read_gsc(missing), Err(Error::FaceClosure(_))));
        assert_eq!(read_gsc("gsc 2\n# nothing\n").unwrap(), SimplicialComplex2D::default());
        match read_gsc("gsc 2\nv 0 0\nq 1\n") {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(read_gsc("v 0 0\n"), Err(Error::Syntax { line: 1, .. })));
    }

    #[test]
    fn random_clouds() {
        let a = random_cloud(3, 42).unwrap();
        assert_eq!(a.len(), 3);
        assert!(a
            .iter()
            .all(|p| (0.0..10.0).contains(&p.x) && (0.0..10.0).contains(&p.y)));
        assert_eq!(a, random_cloud(3, 42).unwrap());
        assert!(random_cloud(0, 1).is_err());
    }
}
