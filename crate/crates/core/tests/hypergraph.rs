use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;

use kcuckoo::rng::rng_from_seed;
use kcuckoo::{
    core_appearance, peel, predict_core, sample_mixed, sample_regular, DegreeSpec, Hypergraph,
};

fn binomial_pmf(n: u64, p: f64, j: u64) -> f64 {
    let ln_choose: f64 = (0..j)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum();
    (ln_choose + j as f64 * p.ln() + (n - j) as f64 * (1.0 - p).ln()).exp()
}

#[test]
fn degree_histogram_is_binomial() {
    let (m, n, k) = (10_000, 9000, 3);
    let g = sample_regular(m, n, k, 1).unwrap();
    const BINS: usize = 9;
    let mut observed = [0usize; BINS + 1];
    for v in 0..m {
        observed[g.degree(v).min(BINS)] += 1;
    }
    let p = f64::from(k) / m as f64;
    let mut expected = [0.0; BINS + 1];
    for (j, e) in expected.iter_mut().take(BINS).enumerate() {
        *e = m as f64 * binomial_pmf(n as u64, p, j as u64);
    }
    expected[BINS] = m as f64 - expected[..BINS].iter().sum::<f64>();
    let chi2: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    let df = BINS as f64;
    assert!(chi2 < df + 3.0 * (2.0 * df).sqrt(), "chi2={chi2}");
}

#[test]
fn incidence_is_inverse_of_edges() {
    let g = sample_regular(500, 800, 4, 9).unwrap();
    let mut rebuilt = vec![Vec::new(); g.m()];
    for (e, edge) in g.edges().enumerate() {
        assert!(edge.windows(2).all(|w| w[0] < w[1]));
        for &v in edge {
            rebuilt[v as usize].push(e as u32);
        }
    }
    for (v, incident) in rebuilt.iter().enumerate() {
        assert_eq!(g.incident(v), incident.as_slice(), "v={v}");
    }
}

#[test]
fn mixed_edge_sizes_follow_weights() {
    let spec = DegreeSpec::new([(3, 0.5), (4, 0.5)]).unwrap();
    let n = 10_000;
    let g = sample_mixed(10_000, n, &spec, 4).unwrap();
    let threes = g.edges().filter(|e| e.len() == 3).count();
    assert_eq!(threes + g.edges().filter(|e| e.len() == 4).count(), n);
    let sigma = (n as f64 * 0.25).sqrt();
    assert!(
        (threes as f64 - 0.5 * n as f64).abs() < 3.0 * sigma,
        "threes={threes}"
    );
}

#[test]
fn point_mass_spec_reproduces_regular_sampler() {
    let spec = DegreeSpec::point_mass(3).unwrap();
    assert_eq!(
        sample_mixed(200, 150, &spec, 77).unwrap(),
        sample_regular(200, 150, 3, 77).unwrap()
    );
}

#[test]
fn only_subset_is_repeated() {
    let g = sample_regular(3, 5, 3, 123).unwrap();
    assert!(g.edges().all(|e| e == [0, 1, 2]));
}

/// Deletes one deficient node at a time, visiting candidates in a shuffled
/// order.
fn peel_randomly(g: &Hypergraph, ell: usize, seed: u64) -> (BTreeSet<u32>, Vec<u32>) {
    let mut rng = rng_from_seed(seed);
    let mut alive = vec![true; g.n()];
    let mut degree: Vec<usize> = (0..g.m()).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; g.m()];
    loop {
        let mut order: Vec<usize> = (0..g.m())
            .filter(|&v| !removed[v] && degree[v] < ell)
            .collect();
        if order.is_empty() {
            break;
        }
        order.shuffle(&mut rng);
        let v = order[0];
        removed[v] = true;
        for &e in g.incident(v) {
            if std::mem::replace(&mut alive[e as usize], false) {
                for &u in g.edge(e as usize) {
                    degree[u as usize] -= 1;
                }
            }
        }
    }
    let nodes = (0..g.m() as u32)
        .filter(|&v| !removed[v as usize])
        .collect();
    let edges = (0..g.n() as u32).filter(|&e| alive[e as usize]).collect();
    (nodes, edges)
}

fn core_nodes(g: &Hypergraph) -> BTreeSet<u32> {
    g.edges().flatten().copied().collect()
}

#[test]
fn peeling_is_confluent() {
    for seed in 0..50u64 {
        let m = 300;
        let g = sample_regular(m, 270 + seed as usize, 3, seed).unwrap();
        let peeled = peel(&g, 2);
        let (nodes, edges) = peel_randomly(&g, 2, seed ^ 0xdead);
        assert_eq!(peeled.kept_edges, edges, "seed={seed}");
        assert_eq!(core_nodes(&peeled.core), nodes, "seed={seed}");
        assert_eq!(peeled.stats.core_nodes, nodes.len());
    }
}

#[test]
fn small_cases() {
    let single = Hypergraph::new(3, [vec![0, 1, 2]]).unwrap();
    assert!(peel(&single, 2).is_empty());
    let double = Hypergraph::new(3, [vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
    let p = peel(&double, 2);
    assert_eq!(p.stats.core_edges, 2);
    assert_eq!(p.stats.core_nodes, 3);
    assert!((p.stats.edge_density - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn core_concentrates_around_prediction() {
    let (m, c, seeds) = (10_000usize, 0.95, 20u64);
    let n = (c * m as f64).ceil() as usize;
    let predicted = predict_core(3, 2, c).unwrap();
    let (mut nodes, mut edges) = (0.0, 0.0);
    for seed in 0..seeds {
        let p = peel(&sample_regular(m, n, 3, seed).unwrap(), 2);
        nodes += p.stats.core_nodes as f64 / m as f64;
        edges += p.stats.core_edges as f64 / n as f64;
    }
    nodes /= seeds as f64;
    edges /= seeds as f64;
    assert!(
        (nodes - predicted.node_fraction).abs() < 0.02,
        "{nodes} vs {predicted:?}"
    );
    assert!(
        (edges - predicted.edge_fraction).abs() < 0.02,
        "{edges} vs {predicted:?}"
    );
}

#[test]
fn core_appears_between_sub_and_supercritical_loads() {
    let (_, c_star) = core_appearance(3, 2).unwrap();
    let m = 10_000;
    let mut empty_below = 0;
    let mut large_above = 0;
    for seed in 0..100u64 {
        let below = sample_regular(m, (0.9 * c_star * m as f64).round() as usize, 3, seed).unwrap();
        empty_below += peel(&below, 2).is_empty() as usize;
        let above = sample_regular(m, (1.1 * c_star * m as f64).round() as usize, 3, seed).unwrap();
        large_above += (peel(&above, 2).stats.core_nodes >= m / 100) as usize;
    }
    assert!(empty_below >= 95, "empty below: {empty_below}");
    assert!(large_above >= 95, "large above: {large_above}");
}

#[test]
fn text_round_trip() {
    let g = sample_regular(40, 60, 3, 2).unwrap();
    assert_eq!(Hypergraph::from_text(&g.to_text()).unwrap(), g);
}

fn arb_graph() -> impl Strategy<Value = Hypergraph> {
    (3usize..40, 0usize..80, 2u32..5, any::<u64>())
        .prop_filter_map("edge size exceeds node count", |(m, n, k, seed)| {
            sample_regular(m, n, k, seed).ok()
        })
}

proptest! {
    #[test]
    fn peel_is_idempotent(g in arb_graph(), ell in 1u32..4) {
        let once = peel(&g, ell);
        let twice = peel(&once.core, ell);
        prop_assert_eq!(&twice.core, &once.core);
        prop_assert_eq!(twice.stats.core_edges, once.stats.core_edges);
    }

    #[test]
    fn core_nodes_have_degree_at_least_ell(g in arb_graph(), ell in 1u32..4) {
        let p = peel(&g, ell);
        for v in 0..p.core.m() {
            let d = p.core.degree(v);
            prop_assert!(d == 0 || d >= ell as usize);
        }
        prop_assert!(p.stats.core_edges <= g.n());
        prop_assert!(p.stats.core_nodes <= g.m());
    }

    #[test]
    fn higher_cores_are_nested(g in arb_graph(), ell in 1u32..4) {
        let lower = peel(&g, ell).kept_edges;
        let higher = peel(&g, ell + 1).kept_edges;
        prop_assert!(higher.iter().all(|e| lower.binary_search(e).is_ok()));
    }
}
