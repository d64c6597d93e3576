mod common;

use common::*;
use hannay_vdp::dual::*;
use hannay_vdp::ode::{integrate, IntegratorConfig};
use hannay_vdp::series::{reduced_alpha_rate, reduced_beta_rate};
use rand::{Rng, SeedableRng};

#[test]
fn hamiltonian_conserved_over_100_cycles() {
    // The auxiliary oscillator is anti-damped and grows like e^{εt}, so H is
    // a fixed number cancelling between growing terms. Against max(1, |H₀|)
    // the drift is meaningful while εt stays O(1); beyond that compare with
    // the size of the terms.
    for w in [1.0, 0.8] {
        let (abs, _) = dual_drift(w, 0.01, 100.0, 1e-10);
        assert!(abs <= 1e-9, "w {w}: {abs:e}");
    }
    for (w, e) in [(1.0, 0.1), (0.8, 0.3)] {
        let (_, rel) = dual_drift(w, e, 100.0, 1e-10);
        assert!(rel <= 1e-9, "w {w} e {e}: {rel:e}");
    }
}

#[test]
fn canonical_and_physical_forms_agree() {
    let pp = p(1.1, 0.25);
    let s0 = PhysState { x: 0.4, xdot: 1.0, y: 0.2, ydot: -0.3 };
    let cfg = IntegratorConfig::with_tol(1e-11);
    let a = integrate(|_, y, dy| dy.copy_from_slice(&dual_rhs(&PhysState::from_slice(y), &pp).to_array()), &s0.to_array(), 0.0, 10.0, &cfg).unwrap();
    let b = integrate(
        |_, y, dy| dy.copy_from_slice(&hamilton_rhs(&CartState::from_slice(y), &pp).to_array()),
        &phys_to_cart(&s0, &pp).to_array(),
        0.0,
        10.0,
        &cfg,
    )
    .unwrap();
    for t in [1.0, 5.0, 10.0] {
        let x = PhysState::from_slice(&a.eval(t));
        let y = cart_to_phys(&CartState::from_slice(&b.eval(t)), &pp);
        for (u, v) in x.to_array().iter().zip(y.to_array()) {
            assert!((u - v).abs() <= 1e-8 * (1.0 + v.abs()), "t {t}: {u} vs {v}");
        }
    }
}

#[test]
fn augmented_hamiltonian_conserved_over_10_cycles() {
    let d = augmented_drift(1.0, 0.1, 10.0, 1e-10);
    assert!(d <= 1e-7, "{d:e}");
}

#[test]
fn flow_is_canonical_at_random_points() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    for _ in 0..100 {
        let pp = p(rng.random_range(0.5..1.5), rng.random_range(0.05..0.5));
        let s = AlphaBeta {
            alpha1: rng.random_range(0.2..2.0),
            alpha2: rng.random_range(0.2..2.0),
            beta1: rng.random_range(-3.0..3.0),
            beta2: rng.random_range(-3.0..3.0),
        };
        let defects = symplectic_defects(&s, &pp);
        assert!(defects.iter().all(|&d| d <= 1e-6), "{s:?} {pp:?}: {defects:?}");
    }
}

#[test]
fn manifold_reduction_matches_reduced_rates() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let pp = p(rng.random_range(0.5..1.5), rng.random_range(0.0..0.5));
        let a = rng.random_range(0.05..3.0);
        let b = rng.random_range(-3.0..3.0);
        let d = alphabeta_rhs(&AlphaBeta { alpha1: a, alpha2: a, beta1: b, beta2: -b }, &pp).unwrap();
        let (ra, rb) = (reduced_alpha_rate(a, &pp), reduced_beta_rate(a, &pp));
        assert!((d.alpha1 - ra).abs() <= 1e-12 * (1.0 + ra.abs()), "{} vs {ra}", d.alpha1);
        assert!((d.beta1 - rb).abs() <= 1e-12 * (1.0 + rb.abs()), "{} vs {rb}", d.beta1);
        assert!((d.beta1 + d.beta2).abs() <= 1e-12);
    }
}

#[test]
fn invariant_manifold_holds_over_50_cycles() {
    for (w, e, a) in [(1.0, 0.1, 0.6), (0.8, 0.3, 0.9), (1.2, 0.2, 1.8)] {
        let (da, db) = manifold_drift(w, e, a, 50.0);
        assert!(da <= 1e-8 && db <= 1e-8, "{da:e} {db:e}");
    }
}
