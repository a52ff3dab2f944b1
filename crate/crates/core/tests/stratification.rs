mod support;

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::Rng;

use strataudit::complex::vertex_order;
use strataudit::constructions::{random_filled_triangle, random_points, random_polygon, small_complex_suite};
use strataudit::descriptors::observed_vertices;
use strataudit::geometry::seeded_rng;
use strataudit::stratification::{
    coarse_stratification, min_stratum, observing_region_degree_two, observing_regions, theta_observability,
};
use strataudit::Direction;

use support::{brute_min_line_angle, corner_angle, is_local_extremum};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn regions_are_unions_of_whole_cells(seed in any::<u64>()) {
        let k = small_complex_suite(1, 7, seed).remove(0);
        prop_assume!(k.num_vertices() >= 2);
        let strata = coarse_stratification(&k.vertices).unwrap();
        let regions = observing_regions(&k).unwrap();
        let mut rng = seeded_rng(seed);
        for cell in &strata.cells {
            for _ in 0..3 {
                let f = rng.gen_range(0.05..0.95);
                let d = Direction::new(cell.arc.start() + f * cell.arc.length());
                let seen = observed_vertices(&k, d).unwrap();
                for r in &regions {
                    prop_assert_eq!(r.region.contains(d), seen.contains(&r.vertex));
                }
                prop_assert_eq!(&vertex_order(&k.vertices, d).unwrap(), &cell.order);
            }
        }
    }

    #[test]
    fn criticals_are_antipodal_and_orders_reverse(seed in any::<u64>(), n in 2usize..12) {
        let pts = random_points(&mut seeded_rng(seed), n, 0.0, 10.0);
        let strata = coarse_stratification(&pts).unwrap();
        prop_assert_eq!(strata.criticals.len(), n * (n - 1));
        for c in &strata.cells {
            let opposite = strata.cell_containing(c.arc.midpoint().antipode()).unwrap();
            let mut rev = strata.cells[opposite].order.clone();
            rev.reverse();
            prop_assert_eq!(&rev, &c.order);
            prop_assert!((strata.cells[opposite].arc.length() - c.arc.length()).abs() < 1e-12);
        }
        let total: f64 = strata.cells.iter().map(|c| c.arc.length()).sum();
        prop_assert!((total - TAU).abs() < 1e-9);
    }

    #[test]
    fn smallest_cell_is_smallest_line_angle(seed in any::<u64>(), n in 3usize..30) {
        let pts = random_points(&mut seeded_rng(seed), n, 0.0, 10.0);
        let m = min_stratum(&pts).unwrap();
        prop_assert!((m - brute_min_line_angle(&pts)).abs() < 1e-12);
        prop_assert!((m - coarse_stratification(&pts).unwrap().min_stratum()).abs() < 1e-12);
    }

    #[test]
    fn cycle_regions_are_local_extremum_sets(seed in any::<u64>(), n in 3usize..10) {
        let mut rng = seeded_rng(seed);
        let k = random_polygon(&mut rng, n).unwrap();
        let regions = observing_regions(&k).unwrap();
        for (v, obs) in regions.iter().enumerate() {
            let (u, w) = (k.vertices[(v + n - 1) % n], k.vertices[(v + 1) % n]);
            let r = &obs.region;
            let closed = observing_region_degree_two(&k, v).unwrap().region;
            prop_assert!(r.approx_eq(&closed, 1e-9));
            prop_assert!(r.approx_eq(&ArcSetExt::antipodal(r), 1e-9));
            for _ in 0..20 {
                let a = rng.gen_range(0.0..TAU);
                prop_assert_eq!(r.contains(Direction::new(a)), is_local_extremum(u, k.vertices[v], w, a));
            }
        }
    }
}

trait ArcSetExt {
    fn antipodal(&self) -> Self;
}

impl ArcSetExt for strataudit::ArcSet {
    fn antipodal(&self) -> Self {
        strataudit::ArcSet::from_arcs(
            self.arcs()
                .iter()
                .map(|a| strataudit::Arc::new(a.start() + PI, a.length()).unwrap()),
        )
    }
}

#[test]
fn filled_triangle_regions_are_lowest_vertex_arcs() {
    let mut rng = seeded_rng(42);
    for _ in 0..200 {
        let k = random_filled_triangle(&mut rng);
        let p = &k.vertices;
        let corners = [
            corner_angle(p[1], p[0], p[2]),
            corner_angle(p[0], p[1], p[2]),
            corner_angle(p[0], p[2], p[1]),
        ];
        let smallest = corners.iter().copied().fold(f64::INFINITY, f64::min);
        let mut best: f64 = 0.0;
        for (v, corner) in corners.iter().enumerate() {
            let theta = theta_observability(&k, v).unwrap();
            assert!((theta - (PI - corner) / 2.0).abs() < 1e-9);
            best = best.max(theta);
        }
        assert!(best >= smallest);
    }
}

#[test]
fn stratification_csv_lists_every_cell() {
    let pts = random_points(&mut seeded_rng(3), 6, 0.0, 10.0);
    let strata = coarse_stratification(&pts).unwrap();
    let mut buf = Vec::new();
    strata.write_csv(&mut buf).unwrap();
    let mut rd = csv::Reader::from_reader(buf.as_slice());
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), strata.cells.len());
    let total: f64 = rows.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
    assert!((total - TAU).abs() < 1e-9);
    for (row, cell) in rows.iter().zip(&strata.cells) {
        assert_eq!(row[1].parse::<f64>().unwrap(), cell.arc.start());
    }
}

fn positive_half(a: strataudit::Point2) -> strataudit::ArcSet {
    strataudit::ArcSet::from_arc(strataudit::Arc::new(a.y.atan2(a.x) - PI / 2.0, PI).unwrap())
}

#[test]
fn apex_regions_are_where_the_apex_is_lowest() {
    for n in [1, 3, 7] {
        let lb = strataudit::constructions::lower_bound_complex(n).unwrap();
        for (&apex, region) in lb.apex_ids.iter().zip(&lb.apex_regions) {
            let p = &lb.complex.vertices;
            let below = positive_half(p[apex - 1] - p[apex]).intersect(&positive_half(p[apex + 1] - p[apex]));
            assert!(region.approx_eq(&below, 1e-9), "{:?} vs {:?}", region.arcs(), below.arcs());
            let slope = (p[apex + 1].y - p[apex - 1].y) / (p[apex + 1].x - p[apex - 1].x);
            let near = 1.5 * PI + slope.atan();
            assert!((region.arcs()[0].midpoint().angle() - near).abs() < 0.01);
        }
    }
}
