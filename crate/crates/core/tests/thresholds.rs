use kcuckoo::thresholds::{mixed_fixed_point_iterates, predict_mixed_core};
use kcuckoo::{
    g, mixed_threshold, optimal_distribution, orientation_threshold, poisson_tail, predict_core,
    DegreeSpec, Error,
};

/// `c_{k,ℓ}` rounded to 10 places, rows ℓ = 2..=7, columns k = 2..=7.
const TABLE: [[Option<f64>; 6]; 6] = [
    [
        None,
        Some(0.9179352767),
        Some(0.9767701649),
        Some(0.9924383913),
        Some(0.9973795528),
        Some(0.9990637588),
    ],
    [
        Some(1.7940237365),
        Some(1.9764028279),
        Some(1.9964829679),
        Some(1.9994487201),
        Some(1.9999137473),
        Some(1.9999866878),
    ],
    [
        Some(2.8774628058),
        Some(2.9918572178),
        Some(2.9993854302),
        Some(2.9999554360),
        Some(2.9999969384),
        Some(2.9999997987),
    ],
    [
        Some(3.9214790971),
        Some(3.9970126256),
        Some(3.9998882644),
        Some(3.9999962949),
        Some(3.9999998884),
        Some(3.9999999969),
    ],
    [
        Some(4.9477568093),
        Some(4.9988732941),
        Some(4.9999793407),
        Some(4.9999996871),
        Some(4.9999999959),
        Some(5.0000000000),
    ],
    [
        Some(5.9644362395),
        Some(5.9995688805),
        Some(5.9999961417),
        Some(5.9999999733),
        Some(5.9999999998),
        Some(6.0000000000),
    ],
];

/// Optimal two-point mixtures with ℓ = 2, κ = 2.25, 2.50, …, 6.00.
const MIXED: [f64; 16] = [
    0.6666666667,
    0.8103423635,
    0.8788457372,
    0.9179352767,
    0.9408047937,
    0.9570796377,
    0.9685811888,
    0.9767701649,
    0.9825693463,
    0.9868637629,
    0.9900548807,
    0.9924383913,
    0.9942189481,
    0.9955692011,
    0.9965961383,
    0.9973795528,
];

fn cells() -> impl Iterator<Item = (u32, u32, f64)> {
    (2..=7u32).flat_map(|ell| {
        (2..=7u32)
            .filter_map(move |k| TABLE[(ell - 2) as usize][(k - 2) as usize].map(|c| (k, ell, c)))
    })
}

#[test]
fn regular_table() {
    assert_eq!(cells().count(), 35);
    for (k, ell, expected) in cells() {
        let r = orientation_threshold(k, ell).unwrap();
        assert!(
            (r.c_threshold - expected).abs() < 1e-9,
            "k={k} ell={ell}: {} vs {expected}",
            r.c_threshold
        );
    }
}

#[test]
fn plain_graph_two_core_is_rejected() {
    let err = orientation_threshold(2, 2).unwrap_err();
    assert!(matches!(err, Error::UnsupportedCase { k: 2, ell: 2 }));
    assert!(err.is_numerical());
}

#[test]
fn appearance_precedes_threshold_and_density_hits_target() {
    for (k, ell, _) in cells() {
        let r = orientation_threshold(k, ell).unwrap();
        assert!(r.c_star < r.c_threshold, "k={k} ell={ell}");
        let p = predict_core(k, ell, r.c_threshold).unwrap();
        assert!(
            (p.edge_density - f64::from(ell - 1)).abs() < 1e-9,
            "k={k} ell={ell}: {}",
            p.edge_density
        );
    }
}

#[test]
fn mixed_table() {
    for (i, expected) in MIXED.iter().enumerate() {
        let kappa = 2.25 + 0.25 * i as f64;
        let spec = optimal_distribution(kappa).unwrap();
        let r = mixed_threshold(&spec, 2).unwrap();
        assert!(
            (r.c_threshold - expected).abs() < 1e-9,
            "kappa={kappa}: {} vs {expected}",
            r.c_threshold
        );
    }
}

#[test]
fn integral_mixtures_match_regular_cells() {
    for k in 3..=6u32 {
        let mixed = mixed_threshold(&optimal_distribution(f64::from(k)).unwrap(), 2).unwrap();
        let regular = orientation_threshold(k, 2).unwrap();
        assert!((mixed.c_threshold - regular.c_threshold).abs() < 1e-9);
    }
}

#[test]
fn point_masses_agree_with_regular_path() {
    for (k, ell, _) in cells().filter(|&(k, _, _)| k > 2) {
        let spec = DegreeSpec::point_mass(k).unwrap();
        let mixed = mixed_threshold(&spec, ell).unwrap();
        let regular = orientation_threshold(k, ell).unwrap();
        assert!(
            (mixed.c_threshold - regular.c_threshold).abs() < 1e-9,
            "k={k} ell={ell}"
        );
        let c = regular.c_threshold + 0.05;
        let a = predict_core(k, ell, c).unwrap();
        let b = predict_mixed_core(&spec, ell, c).unwrap();
        assert!((a.node_fraction - b.node_fraction).abs() < 1e-9);
        assert!((a.edge_density - b.edge_density).abs() < 1e-9);
    }
}

#[test]
fn tail_identity() {
    for beta in [0.5, 1.0, 5.0, 20.0] {
        for j in 0..=50 {
            let pmf = (-beta + f64::from(j) * f64::ln(beta) - ln_factorial(j)).exp();
            let diff = poisson_tail(beta, j).unwrap() - poisson_tail(beta, j + 1).unwrap();
            assert!((diff - pmf).abs() < 1e-12, "beta={beta} j={j}");
        }
    }
}

fn ln_factorial(j: u32) -> f64 {
    (1..=j).map(|i| f64::from(i).ln()).sum()
}

#[test]
fn g_is_convex_on_log_grid() {
    for k in 2..=7 {
        for ell in 2..=7 {
            if k + ell <= 4 {
                continue;
            }
            let betas: Vec<f64> = (0..400)
                .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / 399.0))
                .collect();
            let values: Vec<f64> = betas.iter().map(|&b| g(k, ell, b).unwrap()).collect();
            for i in 1..betas.len() - 1 {
                // Second divided difference on a non-uniform grid.
                let (x0, x1, x2) = (betas[i - 1], betas[i], betas[i + 1]);
                let d1 = (values[i] - values[i - 1]) / (x1 - x0);
                let d2 = (values[i + 1] - values[i]) / (x2 - x1);
                assert!(d2 - d1 >= -1e-9, "k={k} ell={ell} beta={x1}");
            }
        }
    }
}

#[test]
fn fixed_point_iterates_never_decrease() {
    let spec = optimal_distribution(3.5).unwrap();
    for c in [0.5, 0.9, 0.95, 1.2] {
        let mut prev = 0.0;
        for p in mixed_fixed_point_iterates(&spec, c, 2)
            .unwrap()
            .take(10_000)
        {
            assert!(p >= prev - 1e-15, "c={c}");
            prev = p;
        }
    }
}

#[test]
fn optimal_distribution_mean_and_support() {
    for i in 0..=40 {
        let kappa = 2.0 + 0.1 * f64::from(i);
        let spec = optimal_distribution(kappa).unwrap();
        assert!((spec.mean() - kappa).abs() < 1e-15, "kappa={kappa}");
        let lo = kappa.floor() as u32;
        assert!(spec.weights().keys().all(|&d| d == lo || d == lo + 1));
    }
    assert!(optimal_distribution(1.9).is_err());
}
