use num_complex::Complex;
use sle_lab::sim::stationarity_diagnostic;
use sle_lab::SimConfig64;

#[test]
fn moduli_moment_is_stable_across_horizons() {
    let cfg = SimConfig64::new(2.0).with_seed(11);
    let rows = stationarity_diagnostic(
        &cfg,
        Complex::new(0.3, 0.0),
        &[6.0, 8.0, 10.0],
        10_000,
        2.0,
        2.0,
    )
    .unwrap();
    for a in &rows {
        for b in &rows {
            let pooled = a.stderr.hypot(b.stderr);
            assert!(
                (a.estimate - b.estimate).abs() < 3.0 * pooled,
                "T={} vs T={}: {} vs {} (pooled se {pooled})",
                a.horizon,
                b.horizon,
                a.estimate,
                b.estimate
            );
        }
    }
    // |1 − z|² / (1 − |z|²) at z = 0.3
    let exact = 0.49 / 0.91;
    assert!((rows[1].estimate - exact).abs() < (3.0 * rows[1].stderr).max(0.01));
}
