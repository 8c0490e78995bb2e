use sphole::bounds::{closest_node_density, required_intensity, theta_0u, BoundEvaluator, CaseLabel, SECOND_CASE_CEILING};
use sphole::experiment::SweepSpec;
use sphole::{classify, rips_threshold, Error, NetworkConfig};

#[test]
fn lower_below_upper_on_default_grid() {
    let spec = SweepSpec::default();
    for &f in &spec.radius_factors {
        for &g in &spec.gammas {
            let cfg = spec.config(g, f, 0.0).unwrap();
            let e = BoundEvaluator::new(&cfg, 16).unwrap();
            for &l in &spec.lambdas {
                let b = e.evaluate(l, 0.0).unwrap();
                assert!(0.0 <= b.lower && b.lower <= b.upper && b.upper <= 1.0, "{g} {f} {l}: {b:?}");
            }
        }
    }
}

#[test]
fn bounds_vanish_at_rips_threshold() {
    let thr = rips_threshold(10.0, 100.0).unwrap();
    let mut last = f64::INFINITY;
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let cfg = NetworkConfig::new(100.0, 10.0, thr * (1.0 + eps), 0.01).unwrap();
        assert_eq!(classify(&cfg).unwrap(), CaseLabel::Case2);
        let b = BoundEvaluator::new(&cfg, 16).unwrap().evaluate(0.01, 0.0).unwrap();
        assert!(b.upper < last);
        last = b.upper;
    }
    assert!(last < 1e-7, "{last}");
    // the outer integration range collapses
    let psi = thr / 100.0;
    assert!((theta_0u(psi) - 0.1).abs() < 1e-9);
}

#[test]
fn bounds_vanish_cubically_at_zero_intensity() {
    let cfg = NetworkConfig::new(100.0, 10.0, 30.0, 0.0).unwrap();
    let e = BoundEvaluator::new(&cfg, 16).unwrap();
    // cubic onset: lambda^2 from the prefactor, lambda from 1 - exp(-lambda S-)
    let a = e.evaluate(1e-5, 0.0).unwrap();
    let b = e.evaluate(5e-6, 0.0).unwrap();
    assert!((a.lower / b.lower - 8.0).abs() < 0.05, "{}", a.lower / b.lower);
}

#[test]
fn density_normalises_over_sphere() {
    let cfg = NetworkConfig::new(100.0, 10.0, 30.0, 0.002).unwrap();
    let n = 400_000;
    let h = std::f64::consts::PI / n as f64;
    let total: f64 = (0..n).map(|i| closest_node_density((i as f64 + 0.5) * h, &cfg)).sum::<f64>() * h;
    let exact = 1.0 - (-0.002 * 4.0 * std::f64::consts::PI * 1e4f64).exp();
    assert!((total - exact).abs() < 1e-9);
}

#[test]
fn planning_anchors() {
    let g3 = NetworkConfig::new(100.0, 10.0, 30.0, 0.0).unwrap();
    let p = required_intensity(&g3, 0.95, SECOND_CASE_CEILING, 32).unwrap();
    assert!((p.intensity - 0.009).abs() <= 0.001, "{p:?}");
    assert!(p.upper <= 0.05 + 1e-9);
    assert!(p.peak_intensity < p.intensity);

    let g2 = NetworkConfig::new(100.0, 10.0, 20.0, 0.0).unwrap();
    let p = required_intensity(&g2, 0.99, SECOND_CASE_CEILING, 32).unwrap();
    assert_eq!(p.intensity, 0.0);
    assert!(p.peak_upper < 0.01);

    assert!(required_intensity(&g3, 1.0, SECOND_CASE_CEILING, 32).is_err());
    // a target stricter than the second-case term itself can never be met
    match required_intensity(&g3, 1.0 - 0.001, SECOND_CASE_CEILING, 32) {
        Err(Error::Unreachable { .. }) => {}
        other => panic!("expected an unreachable target, got {other:?}"),
    }
}
