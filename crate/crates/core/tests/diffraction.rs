use std::f64::consts::PI;

use relent::diffraction::{opposite_pair, purity_expansion, DEFAULT_NODES};
use relent::quantum::{negativity, purity};

/// Leading purity loss when each beam is Doppler-rescaled by √((1±β)/(1∓β)).
fn rescaled_law(sigma: f64, beta: f64) -> f64 {
    1.0 - 2.0 * sigma * sigma * (1.0 + beta * beta) / (1.0 - beta * beta)
}

#[test]
fn purity_follows_the_rescaled_law() {
    for &beta in &[0.0, 0.1, -0.1, 0.3, -0.3] {
        for &sigma in &[0.01, 0.02, 0.05] {
            let p = purity(&opposite_pair(sigma, 0.0, beta, DEFAULT_NODES, DEFAULT_NODES).unwrap());
            let c = (p - rescaled_law(sigma, beta)).abs() / sigma.powi(4);
            assert!(c < 6.0, "β={beta} σ={sigma}: {c}");
        }
    }
}

#[test]
fn purity_at_rest_matches_both_laws() {
    for &sigma in &[0.01, 0.02, 0.05] {
        let p = purity(&opposite_pair(sigma, 0.0, 0.0, DEFAULT_NODES, DEFAULT_NODES).unwrap());
        assert!((p - purity_expansion(sigma, 0.0)).abs() < 4.0 * sigma.powi(4));
    }
}

#[test]
fn small_beta_example() {
    let p = purity(&opposite_pair(0.05, 0.0, 1e-2, DEFAULT_NODES, DEFAULT_NODES).unwrap());
    assert!((p - rescaled_law(0.05, 1e-2)).abs() < 4.0 * 0.05_f64.powi(4));
}

#[test]
fn purity_is_even_in_beta() {
    for &beta in &[0.2, 0.5] {
        let a = purity(&opposite_pair(0.3, 0.0, beta, 48, 48).unwrap());
        let b = purity(&opposite_pair(0.3, 0.0, -beta, 48, 48).unwrap());
        assert!((a - b).abs() < 1e-12, "{a} {b}");
    }
}

#[test]
fn grid_doubling_converges() {
    for &(sigma, alpha, beta) in &[(0.05, 0.0, 0.3), (1.0, PI / 2.0, 0.5), (2.0, PI / 4.0, -0.2)] {
        let coarse = opposite_pair(sigma, alpha, beta, 48, 48).unwrap();
        let fine = opposite_pair(sigma, alpha, beta, 96, 96).unwrap();
        assert!((purity(&coarse) - purity(&fine)).abs() < 1e-6);
        assert!((negativity(&coarse, 0).unwrap() - negativity(&fine, 0).unwrap()).abs() < 1e-6);
    }
}
