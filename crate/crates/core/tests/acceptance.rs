//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails.

mod support;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::{Duration, Instant};

use strataudit::cli::{evaluate_lost_vertex, experiment_min_stratum, randpts_sizes, ExperimentConfig};
use strataudit::complex::SimplicialComplex2D;
use strataudit::constructions::{
    example_triangle, lower_bound_complex, random_filled_triangle, random_isosceles, random_points, random_polygon,
    small_complex_suite,
};
use strataudit::descriptors::{
    betti_functions, diagrams_equal, euler_characteristic_function, observed_vertices, persistence_diagram,
};
use strataudit::geometry::{min_pairwise_line_angle, seeded_rng, Direction, Point2};
use strataudit::sampling::{
    corpus_direction_set, discrete_transform, missed_vertices, transform_distance, uniform_grid, DescriptorMetric,
};
use strataudit::stratification::{coarse_stratification, min_stratum, observing_region_degree_two, observing_regions};
use strataudit::Error;

use rand::Rng;
use support::{corner_angle, naive_diagram, naive_euler};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: strataudit::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let mut rng = seeded_rng(1);
    let mut worst: f64 = 0.0;
    for trial in 0..200 {
        let n = rng.gen_range(3..=50);
        let pts = random_points(&mut rng, n, 0.0, 10.0);
        let m = lib(min_stratum(&pts))?;
        let a = lib(min_pairwise_line_angle(&pts))?;
        worst = worst.max((m - a).abs());
        ensure((m - a).abs() <= 1e-12, || {
            format!("cloud {trial} (n={n}): min stratum {m:e} vs line angle {a:e}")
        })?;
    }
    Ok(format!("200 clouds, max |min_stratum - line angle| = {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let k = example_triangle();
    let seen = lib(observed_vertices(&k, Direction::new(FRAC_PI_2)))?;
    ensure(seen == vec![0], || format!("observed {seen:?}, expected [0]"))?;
    Ok("observed set at pi/2 is {v1}".into())
}

fn criterion_3() -> Outcome {
    let mut rng = seeded_rng(3);
    let mut checked = 0;
    for g in 0..200 {
        let n = rng.gen_range(3..=10);
        let k = lib(random_polygon(&mut rng, n))?;
        let regions = lib(observing_regions(&k))?;
        for (v, obs) in regions.iter().enumerate() {
            let closed = lib(observing_region_degree_two(&k, v))?.region;
            let swept = &obs.region;
            ensure(swept.approx_eq(&closed, 1e-9), || {
                format!(
                    "graph {g} vertex {v}: swept {:?} vs closed form {:?}",
                    swept.arcs(),
                    closed.arcs()
                )
            })?;
            let (u, w) = ((v + n - 1) % n, (v + 1) % n);
            let expect = 2.0 * (PI - corner_angle(k.vertices[u], k.vertices[v], k.vertices[w]));
            ensure((swept.measure() - expect).abs() <= 1e-9, || {
                format!("graph {g} vertex {v}: measure {} vs {expect}", swept.measure())
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "200 cycle graphs, {checked} vertices match closed form and measure"
    ))
}

fn criterion_4() -> Outcome {
    let mut detail = String::new();
    for n in 1..=12 {
        let lb = lib(lower_bound_complex(n))?;
        ensure(lb.apex_ids.len() == n, || {
            format!("n={n}: {} apexes", lb.apex_ids.len())
        })?;
        for i in 0..n {
            for j in i + 1..n {
                let both = lb.apex_regions[i].intersect(&lb.apex_regions[j]);
                ensure(both.is_empty(), || format!("n={n}: apex regions {i} and {j} overlap"))?;
            }
        }
        // No single direction observes two apexes, checked directly.
        for s in 0..720 {
            let d = Direction::new(TAU * (s as f64 + 0.5) / 720.0);
            let seen = match observed_vertices(&lb.complex, d) {
                Ok(v) => v,
                Err(Error::DegenerateDirection { .. }) => continue,
                Err(e) => return Err(e.to_string()),
            };
            let apexes = seen.iter().filter(|v| lb.apex_ids.contains(v)).count();
            ensure(apexes <= 1, || {
                format!("n={n}: direction {} observes {apexes} apexes", d.angle())
            })?;
        }
        let mids: Vec<Direction> = lb.apex_regions.iter().map(|r| r.arcs()[0].midpoint()).collect();
        let missed = lib(missed_vertices(&lb.complex, &mids))?;
        ensure(lb.apex_ids.iter().all(|a| !missed.contains(a)), || {
            format!("n={n}: one direction per apex region leaves apexes unobserved")
        })?;
        if n == 5 {
            ensure(lb.report().min_directions == 5, || {
                "n=5 needs other than 5 directions".into()
            })?;
            detail = format!(
                "n=1..12 disjoint; n=5 has {} vertices and needs 5 directions",
                lb.complex.num_vertices()
            );
        }
    }
    Ok(detail)
}

fn criterion_5() -> Outcome {
    let (u, v, w) = (Point2::new(-1., 0.), Point2::new(0., 1.), Point2::new(1., 0.));
    let rec = lib(evaluate_lost_vertex(u, v, w, 10_000, 64, 5))?;
    let formula = v.distance(w) * (rec.theta / 2.0).cos();
    ensure((formula - 1.0).abs() <= 1e-12, || {
        format!("|v-w| cos(theta/2) = {formula}")
    })?;
    ensure((rec.computed_hausdorff - formula).abs() <= 1e-3, || {
        format!("canonical Hausdorff {} vs {formula}", rec.computed_hausdorff)
    })?;
    ensure(rec.equal_off_region && rec.off_region_directions == 64, || {
        "canonical: descriptors differ off region".into()
    })?;
    ensure(rec.unequal_on_region, || {
        "canonical: descriptors agree on region".into()
    })?;

    let mut rng = seeded_rng(55);
    let mut worst: f64 = 0.0;
    for t in 0..100 {
        let (u, v, w) = random_isosceles(&mut rng);
        let rec = lib(evaluate_lost_vertex(u, v, w, 10_000, 64, 500 + t))?;
        let apex = v.distance(w) * (corner_angle(u, v, w) / 2.0).cos();
        worst = worst.max((rec.computed_hausdorff - apex).abs());
        ensure((rec.computed_hausdorff - apex).abs() <= 1e-3, || {
            format!(
                "triple {t}: Hausdorff {} vs distance to chord {apex}",
                rec.computed_hausdorff
            )
        })?;
        ensure(rec.equal_off_region && rec.off_region_directions == 64, || {
            format!("triple {t}: differ off region")
        })?;
        ensure(rec.unequal_on_region, || format!("triple {t}: agree on region"))?;
    }
    Ok(format!(
        "canonical Hausdorff {:.6}; 100 isosceles triples, max Hausdorff error {worst:.1e}",
        rec.computed_hausdorff
    ))
}

fn criterion_6() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = ExperimentConfig::from_json(
        &serde_json::json!({
            "experiment": "min_stratum",
            "corpus": {"kind": "randpts", "sizes": randpts_sizes(), "per_size": 100, "seed": 6},
            "output_dir": dir.path(),
        })
        .to_string(),
    );
    let out = lib(experiment_min_stratum(&lib(cfg)?))?;
    let f = out.fit;
    ensure(out.rows.len() == 1200, || format!("{} clouds", out.rows.len()))?;
    ensure((-5.1..=-3.5).contains(&f.slope) && f.slope < 0.0, || {
        format!("slope {}", f.slope)
    })?;
    ensure(f.r_squared >= 0.8, || format!("r^2 {}", f.r_squared))?;
    Ok(format!(
        "slope {:.5}, intercept {:.5}, r^2 {:.4}",
        f.slope, f.intercept, f.r_squared
    ))
}

fn criterion_7() -> Outcome {
    let lb = lib(lower_bound_complex(3))?;
    let grid = lib(uniform_grid(4, 0.0))?;
    let missed = lib(missed_vertices(&lb.complex, grid.directions()))?;
    let missed_apexes: Vec<usize> = lb.apex_ids.iter().copied().filter(|a| missed.contains(a)).collect();
    ensure(missed_apexes == lb.apex_ids, || {
        format!("grid missed apexes {missed_apexes:?} of {:?}", lb.apex_ids)
    })?;
    let reps = lib(coarse_stratification(&lb.complex.vertices))?.representatives();
    let missed_reps = lib(missed_vertices(&lb.complex, &reps))?;
    ensure(missed_reps.is_empty(), || {
        format!("stratum representatives missed {missed_reps:?}")
    })?;
    Ok(format!(
        "k=4 grid misses apexes {missed_apexes:?}; {} representatives miss none",
        reps.len()
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = seeded_rng(8);
    let corpus: Vec<SimplicialComplex2D> = (0..20)
        .map(|_| {
            let n = rng.gen_range(3..=6);
            random_polygon(&mut rng, n)
        })
        .collect::<strataudit::Result<_>>()
        .map_err(|e| e.to_string())?;
    let p = lib(corpus_direction_set(&corpus))?;
    let mut summary = Vec::new();
    for metric in [DescriptorMetric::EcfL1, DescriptorMetric::Bottleneck] {
        let transforms = corpus
            .iter()
            .map(|k| discrete_transform(k, p.directions(), metric.kind()))
            .collect::<strataudit::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        let n = corpus.len();
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                d[i][j] = lib(transform_distance(&transforms[i], &transforms[j], metric))?;
            }
        }
        let mut min_pos = f64::INFINITY;
        for i in 0..n {
            ensure(d[i][i] == 0.0, || format!("{metric:?}: d({i},{i}) = {}", d[i][i]))?;
            for j in 0..n {
                ensure(d[i][j] == d[j][i], || format!("{metric:?}: d({i},{j}) != d({j},{i})"))?;
                if i != j {
                    ensure(d[i][j] > 0.0, || format!("{metric:?}: d({i},{j}) = 0"))?;
                    min_pos = min_pos.min(d[i][j]);
                }
                for k in 0..n {
                    ensure(d[i][k] <= d[i][j] + d[j][k] + 1e-9, || {
                        format!("{metric:?}: triangle inequality fails on ({i},{j},{k})")
                    })?;
                }
            }
        }
        summary.push(format!("{metric:?} min off-diagonal {min_pos:.3e}"));
    }
    Ok(format!("|P| = {}; {}", p.len(), summary.join(", ")))
}

fn criterion_9() -> Outcome {
    let suite = small_complex_suite(400, 7, 9);
    let mut rng = seeded_rng(90);
    let mut diagrams = 0;
    for (c, k) in suite.iter().enumerate() {
        ensure(k.num_vertices() <= 7, || {
            format!("complex {c} has {} vertices", k.num_vertices())
        })?;
        for _ in 0..12 {
            let a = rng.gen_range(0.0..TAU);
            let d = Direction::new(a);
            let fast = match persistence_diagram(k, d) {
                Ok(pd) => pd,
                Err(Error::DegenerateDirection { .. }) => continue,
                Err(e) => return Err(e.to_string()),
            };
            let slow = naive_diagram(k, a);
            ensure(diagrams_equal(&fast, &slow), || {
                format!("complex {c} at {a}: {:?} vs naive {:?}", fast.points(), slow.points())
            })?;
            let ecf = lib(euler_characteristic_function(k, d))?;
            let (b0, b1) = lib(betti_functions(k, d))?;
            let mut hs: Vec<f64> = k.vertices.iter().map(|p| support::height(*p, a)).collect();
            hs.sort_by(f64::total_cmp);
            let mut probes = vec![hs[0] - 1.0, hs[hs.len() - 1] + 1.0];
            for w in hs.windows(2) {
                probes.push((w[0] + w[1]) / 2.0);
            }
            probes.extend(ecf.breakpoints().iter().map(|b| b.0));
            for t in probes {
                let chi = ecf.eval(t);
                ensure(chi == b0.eval(t) - b1.eval(t), || {
                    format!("complex {c} at {a}, t={t}: chi != b0 - b1")
                })?;
                ensure(chi == naive_euler(k, a, t), || {
                    format!("complex {c} at {a}, t={t}: chi != direct count")
                })?;
            }
            diagrams += 1;
        }
    }
    Ok(format!(
        "{} complexes, {diagrams} diagrams match full reduction",
        suite.len()
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = seeded_rng(10);
    let mut worst: f64 = 0.0;
    for t in 0..500 {
        let k = random_filled_triangle(&mut rng);
        let r = lib(observing_regions(&k))?;
        for i in 0..3 {
            for j in i + 1..3 {
                ensure(r[i].region.intersect(&r[j].region).is_empty(), || {
                    format!("triangle {t}: regions {i} and {j} overlap")
                })?;
            }
        }
        let total: f64 = r.iter().map(|o| o.region.measure()).sum();
        worst = worst.max((total - TAU).abs());
        ensure((total - TAU).abs() <= 1e-9, || {
            format!("triangle {t}: measures sum to {total}")
        })?;
    }
    Ok(format!("500 triangles, max |sum - 2pi| = {worst:.1e}"))
}

fn main() {
    let criteria: [(fn() -> Outcome, Duration); 10] = [
        (criterion_1, Duration::from_secs(10)),
        (criterion_2, Duration::from_secs(1)),
        (criterion_3, Duration::from_secs(60)),
        (criterion_4, Duration::from_secs(60)),
        (criterion_5, Duration::from_secs(120)),
        (criterion_6, Duration::from_secs(600)),
        (criterion_7, Duration::from_secs(1)),
        (criterion_8, Duration::from_secs(300)),
        (criterion_9, Duration::from_secs(60)),
        (criterion_10, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (i, (run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *limit => Err(format!("{msg}; took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {}: PASS ({msg}; {took:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL ({msg}; {took:.2?})", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
