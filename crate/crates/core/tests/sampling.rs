use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::Rng;

use strataudit::constructions::{lower_bound_complex, random_polygon};
use strataudit::descriptors::{descriptor, descriptor_equal, DescriptorKind};
use strataudit::geometry::seeded_rng;
use strataudit::sampling::{
    corpus_distance, epsilon_net, greedy_cover, missed_in, missed_vertices, uniform_grid, uniform_random,
    DescriptorMetric, DirectionSet,
};
use strataudit::stratification::{coarse_stratification, min_stratum, observing_regions};
use strataudit::{Direction, Error};

fn angles(set: &DirectionSet) -> Vec<f64> {
    set.directions().iter().map(|d| d.angle()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn more_directions_miss_fewer_vertices(seed in any::<u64>(), n in 3usize..10, k in 1usize..12) {
        let poly = random_polygon(&mut seeded_rng(seed), n).unwrap();
        let regions = observing_regions(&poly).unwrap();
        let small = uniform_random(k, seed).unwrap();
        let big = uniform_random(2 * k, seed).unwrap();
        for a in angles(&small) {
            prop_assert!(angles(&big).contains(&a));
        }
        let m_small = missed_in(&regions, small.directions());
        let m_big = missed_in(&regions, big.directions());
        prop_assert!(m_big.iter().all(|v| m_small.contains(v)));
        let g1 = uniform_grid(k, 0.3).unwrap();
        let g2 = uniform_grid(2 * k, 0.3).unwrap();
        prop_assert!(missed_in(&regions, g2.directions()).iter().all(|v| missed_in(&regions, g1.directions()).contains(v)));
    }

    #[test]
    fn net_at_smallest_cell_hits_everything(seed in any::<u64>(), n in 3usize..9) {
        let poly = random_polygon(&mut seeded_rng(seed), n).unwrap();
        let eps = min_stratum(&poly.vertices).unwrap();
        let net = epsilon_net(eps).unwrap();
        let strata = coarse_stratification(&poly.vertices).unwrap();
        prop_assert!(strata.missed_cells(net.directions()).is_empty());
        let regions = observing_regions(&poly).unwrap();
        let expected: Vec<usize> = regions.iter().filter(|r| r.region.is_empty()).map(|r| r.vertex).collect();
        prop_assert_eq!(missed_vertices(&poly, net.directions()).unwrap(), expected);
    }

    #[test]
    fn epsilon_net_gaps_are_at_most_epsilon(eps in 1e-3f64..3.0) {
        let a = angles(&epsilon_net(eps).unwrap());
        for w in a.windows(2) {
            prop_assert!(w[1] - w[0] <= eps + 1e-12);
        }
        prop_assert!(a[0] + TAU - a[a.len() - 1] <= eps + 1e-12);
    }

    #[test]
    fn direction_sets_survive_text(seed in any::<u64>(), k in 1usize..40) {
        let set = uniform_random(k, seed).unwrap();
        let mut buf = Vec::new();
        set.write_text(&mut buf).unwrap();
        let back = DirectionSet::read_text(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(angles(&back), angles(&set));
    }
}

#[test]
fn corpus_distance_is_a_metric_on_polygons() {
    let mut rng = seeded_rng(21);
    let polys: Vec<_> = (0..5).map(|_| random_polygon(&mut rng, 4).unwrap()).collect();
    let eps = polys
        .iter()
        .map(|p| min_stratum(&p.vertices).unwrap())
        .fold(f64::INFINITY, f64::min);
    let net = epsilon_net(eps).unwrap();
    for metric in [DescriptorMetric::EcfL1, DescriptorMetric::Bottleneck] {
        let d = |i: usize, j: usize| corpus_distance(&polys[i], &polys[j], net.directions(), metric).unwrap();
        for i in 0..polys.len() {
            assert_eq!(d(i, i), 0.0);
            for j in 0..polys.len() {
                if i != j {
                    assert!(d(i, j) > 0.0);
                    assert_eq!(d(i, j), d(j, i));
                }
                for k in 0..polys.len() {
                    assert!(d(i, k) <= d(i, j) + d(j, k) + 1e-9);
                }
            }
        }
    }
}

#[test]
fn removing_an_apex_is_invisible_off_its_region() {
    let lb = lower_bound_complex(3).unwrap();
    let mut rng = seeded_rng(4);
    for (a, region) in lb.apex_ids.iter().zip(&lb.apex_regions) {
        let without = lb.complex.remove_vertex(*a);
        let mut checked = 0;
        while checked < 64 {
            let d = Direction::new(rng.gen_range(0.0..TAU));
            if region.contains(d) {
                continue;
            }
            let (Ok(p), Ok(q)) = (
                descriptor(&lb.complex, d, DescriptorKind::Pd),
                descriptor(&without, d, DescriptorKind::Pd),
            ) else {
                continue;
            };
            assert!(descriptor_equal(&p, &q), "apex {a} visible at {}", d.angle());
            let e = descriptor(&lb.complex, d, DescriptorKind::Ecf).unwrap();
            assert!(descriptor_equal(
                &e,
                &descriptor(&without, d, DescriptorKind::Ecf).unwrap()
            ));
            checked += 1;
        }
        let mid = region.arcs()[0].midpoint();
        let p = descriptor(&lb.complex, mid, DescriptorKind::Pd).unwrap();
        assert!(!descriptor_equal(
            &p,
            &descriptor(&without, mid, DescriptorKind::Pd).unwrap()
        ));
    }
}

#[test]
fn grid_phase_decides_which_apexes_are_seen() {
    let lb = lower_bound_complex(3).unwrap();
    let at_zero = missed_vertices(&lb.complex, uniform_grid(4, 0.0).unwrap().directions()).unwrap();
    assert!(lb.apex_ids.iter().all(|a| at_zero.contains(a)));
    let phase = lb.apex_regions[0].arcs()[0].midpoint().angle();
    let shifted = missed_vertices(&lb.complex, uniform_grid(4, phase).unwrap().directions()).unwrap();
    assert!(!shifted.contains(&lb.apex_ids[0]));
}

#[test]
fn greedy_cover_sees_every_observable_vertex() {
    let lb = lower_bound_complex(4).unwrap();
    let strata = coarse_stratification(&lb.complex.vertices).unwrap();
    let regions = observing_regions(&lb.complex).unwrap();
    let cover = greedy_cover(&strata, &regions);
    let missed = missed_in(&regions, &cover);
    assert!(missed.iter().all(|&v| regions[v].region.is_empty()));
    assert!(cover.len() >= lb.apex_ids.len());
}

#[test]
fn bad_parameters_are_rejected() {
    assert!(matches!(epsilon_net(0.0), Err(Error::InvalidArgument(_))));
    assert!(uniform_grid(0, 0.0).is_err());
    assert!(uniform_random(0, 1).is_err());
    assert!(matches!(
        DirectionSet::read_text("0.5\nabc\n"),
        Err(Error::Syntax { line: 2, .. })
    ));
}
