//! Measurements shared by the invariant tests and the acceptance run.
#![allow(dead_code)]

use hannay_vdp::dual::*;
use hannay_vdp::ode::{integrate, IntegratorConfig};
use hannay_vdp::Params;
use std::f64::consts::PI;

pub fn p(w: f64, e: f64) -> Params {
    Params::new(w, e).unwrap()
}

/// Largest |H(t) − H(0)| along the canonical flow, divided by max(1, |H₀|)
/// and, separately, by the size of the terms that make up H at time t.
pub fn dual_drift(w: f64, e: f64, cycles: f64, tol: f64) -> (f64, f64) {
    let pp = p(w, e);
    let s0 = phys_to_cart(&PhysState { x: 1.5, xdot: 0.2, y: 0.3, ydot: -0.1 }, &pp);
    let h0 = hamiltonian(&s0, &pp);
    let tr = integrate(
        |_, y, dy| dy.copy_from_slice(&hamilton_rhs(&CartState::from_slice(y), &pp).to_array()),
        &s0.to_array(),
        0.0,
        cycles * 2.0 * PI / w,
        &IntegratorConfig::with_tol(tol),
    )
    .unwrap();
    tr.states.iter().fold((0.0, 0.0), |(a, r), s| {
        let c = CartState::from_slice(s);
        let d = (hamiltonian(&c, &pp) - h0).abs();
        let scale = (c.px * c.py).abs() + (w * w * c.x * c.y).abs() + (e * (c.x * c.x - 1.0) * c.y * c.py).abs();
        (f64::max(a, d / h0.abs().max(1.0)), f64::max(r, d / scale))
    })
}

/// Largest |yᵀf(x) − y₀ᵀf(x₀)| along the oscillator with its adjoint.
pub fn augmented_drift(w: f64, e: f64, cycles: f64, tol: f64) -> f64 {
    let f = vdp_field(p(w, e));
    let h = |s: &[f64]| {
        let mut fx = [0.0; 2];
        f(&s[..2], &mut fx);
        s[2] * fx[0] + s[3] * fx[1]
    };
    let s0 = [1.0, 0.5, 0.3, -0.2];
    let tr = integrate(
        |_, s, ds| {
            f(&s[..2], &mut ds[..2]);
            let dy = augment(f, &s[..2], &s[2..]);
            ds[2..].copy_from_slice(&dy);
        },
        &s0,
        0.0,
        cycles * 2.0 * PI / w,
        &IntegratorConfig::with_tol(tol),
    )
    .unwrap();
    let h0 = h(&s0);
    tr.states.iter().map(|s| (h(s) - h0).abs()).fold(0.0, f64::max)
}

/// The four canonical identities ∂f₁/∂α₁ + ∂f₂/∂β₁ = 0, ∂f₃/∂α₂ + ∂f₄/∂β₂ = 0,
/// ∂f₁/∂α₂ + ∂f₄/∂β₁ = 0, ∂f₃/∂α₁ + ∂f₂/∂β₂ = 0 by central differences,
/// each as a relative defect.
pub fn symplectic_defects(s: &AlphaBeta, pp: &Params) -> [f64; 4] {
    let f = |s: AlphaBeta| alphabeta_rhs(&s, pp).unwrap();
    let d = |g: &dyn Fn(AlphaBeta) -> f64, v: f64, set: &dyn Fn(f64) -> AlphaBeta| {
        let h = 1e-6 * v.abs().max(1.0);
        (g(set(v + h)) - g(set(v - h))) / (2.0 * h)
    };
    let f1 = |x: AlphaBeta| f(x).alpha1;
    let f3 = |x: AlphaBeta| f(x).alpha2;
    let f2 = |x: AlphaBeta| f(x).beta1;
    let f4 = |x: AlphaBeta| f(x).beta2;
    let a1 = |v| AlphaBeta { alpha1: v, ..*s };
    let a2 = |v| AlphaBeta { alpha2: v, ..*s };
    let b1 = |v| AlphaBeta { beta1: v, ..*s };
    let b2 = |v| AlphaBeta { beta2: v, ..*s };
    let rel = |x: f64, y: f64| (x + y).abs() / (x.abs() + y.abs()).max(1e-3);
    [
        rel(d(&f1, s.alpha1, &a1), d(&f2, s.beta1, &b1)),
        rel(d(&f3, s.alpha2, &a2), d(&f4, s.beta2, &b2)),
        rel(d(&f1, s.alpha2, &a2), d(&f4, s.beta1, &b1)),
        rel(d(&f3, s.alpha1, &a1), d(&f2, s.beta2, &b2)),
    ]
}

/// Largest (|α₁ − α₂|, |β₁ + β₂|) over `cycles` periods of the α–β flow
/// started on the manifold.
pub fn manifold_drift(w: f64, e: f64, alpha: f64, cycles: f64) -> (f64, f64) {
    let pp = p(w, e);
    let s0 = AlphaBeta { alpha1: alpha, alpha2: alpha, beta1: 0.4, beta2: -0.4 };
    let tr = integrate(
        |_, y, dy| dy.copy_from_slice(&alphabeta_rhs(&AlphaBeta::from_slice(y), &pp).unwrap().to_array()),
        &s0.to_array(),
        0.0,
        cycles * 2.0 * PI / w,
        &IntegratorConfig::with_tol(1e-10),
    )
    .unwrap();
    tr.states.iter().fold((0.0, 0.0), |(a, b), s| (f64::max(a, (s[0] - s[1]).abs()), f64::max(b, (s[2] + s[3]).abs())))
}
