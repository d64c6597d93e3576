//! The van der Pol oscillator, its sign-flipped auxiliary companion, and the
//! single Hamiltonian that generates both.
//!
//! Four charts cover the 4-D phase space: physical velocities
//! ([`PhysState`]), canonical coordinates ([`CartState`]), the 45° rotated
//! chart ([`RotatedState`]) and amplitude/phase variables ([`AlphaBeta`]).

mod canonical;

use crate::error::{Error, Result};
use canonical::{eval_terms, harmonics, F1, F2, KGEN};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Parameter pair λ = (ω, ε).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub omega: f64,
    pub eps: f64,
}

impl Params {
    pub fn new(omega: f64, eps: f64) -> Result<Self> {
        let p = Self { omega, eps };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::InvalidParams(format!("omega must be positive, got {}", self.omega)));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidParams(format!("eps must be non-negative, got {}", self.eps)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysState {
    pub x: f64,
    pub xdot: f64,
    pub y: f64,
    pub ydot: f64,
}

impl PhysState {
    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.xdot, self.y, self.ydot]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self { x: s[0], xdot: s[1], y: s[2], ydot: s[3] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartState {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
}

impl CartState {
    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.px, self.py]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self { x: s[0], y: s[1], px: s[2], py: s[3] }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedState {
    pub X: f64,
    pub Y: f64,
    pub PX: f64,
    pub PY: f64,
}

/// Amplitudes α (dimension ω²) and phase offsets β (time units). Also used
/// for the rates of the canonical flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBeta {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl AlphaBeta {
    pub fn to_array(self) -> [f64; 4] {
        [self.alpha1, self.alpha2, self.beta1, self.beta2]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self { alpha1: s[0], alpha2: s[1], beta1: s[2], beta2: s[3] }
    }
}

/// α₁ together with γ₁ = β₁ + β₂ and γ₂ = β₁ − β₂. On the invariant
/// manifold γ₁ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCoords {
    pub alpha1: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

/// Right-hand side of ẍ + ε(x² − 1)ẋ + ω²x = 0 written first order.
pub fn vdp_rhs(x: f64, v: f64, p: &Params) -> (f64, f64) {
    (v, -p.eps * (x * x - 1.0) * v - p.omega * p.omega * x)
}

/// The oscillator and its companion ÿ − ε(x² − 1)ẏ + ω²y = 0. The x-part
/// never reads (y, ẏ).
pub fn dual_rhs(s: &PhysState, p: &Params) -> PhysState {
    let (xd, xdd) = vdp_rhs(s.x, s.xdot, p);
    let w2 = p.omega * p.omega;
    PhysState {
        x: xd,
        xdot: xdd,
        y: s.ydot,
        ydot: p.eps * (s.x * s.x - 1.0) * s.ydot - w2 * s.y,
    }
}

/// H = p_x p_y + ω²xy + ε(x² − 1) y p_y.
pub fn hamiltonian(s: &CartState, p: &Params) -> f64 {
    s.px * s.py + p.omega * p.omega * s.x * s.y + p.eps * (s.x * s.x - 1.0) * s.y * s.py
}

/// Hamilton's equations for [`hamiltonian`].
pub fn hamilton_rhs(s: &CartState, p: &Params) -> CartState {
    let w2 = p.omega * p.omega;
    let g = p.eps * (s.x * s.x - 1.0);
    CartState {
        x: s.py,
        y: s.px + g * s.y,
        px: -w2 * s.y - 2.0 * p.eps * s.x * s.y * s.py,
        py: -w2 * s.x - g * s.py,
    }
}

pub fn phys_to_cart(s: &PhysState, p: &Params) -> CartState {
    CartState { x: s.x, y: s.y, px: s.ydot - p.eps * (s.x * s.x - 1.0) * s.y, py: s.xdot }
}

pub fn cart_to_phys(s: &CartState, p: &Params) -> PhysState {
    PhysState { x: s.x, xdot: s.py, y: s.y, ydot: s.px + p.eps * (s.x * s.x - 1.0) * s.y }
}

pub fn cart_to_rotated(s: &CartState) -> RotatedState {
    let r = FRAC_1_SQRT_2;
    RotatedState { X: r * (s.x + s.y), Y: r * (s.x - s.y), PX: r * (s.px + s.py), PY: r * (s.px - s.py) }
}

pub fn rotated_to_cart(s: &RotatedState) -> CartState {
    let r = FRAC_1_SQRT_2;
    CartState { x: r * (s.X + s.Y), y: r * (s.X - s.Y), px: r * (s.PX + s.PY), py: r * (s.PX - s.PY) }
}

/// The Hamiltonian in the rotated chart:
/// (P_X² + ω²X²)/2 − (P_Y² + ω²Y²)/2 + ε((X+Y)²/2 − 1)(X−Y)(P_X−P_Y)/2.
///
/// The quadratic part uses ω²X²/2; a version with ω²x²/2 circulates but is
/// not what the rotation of [`hamiltonian`] gives.
pub fn rotated_hamiltonian(s: &RotatedState, p: &Params) -> f64 {
    let w2 = p.omega * p.omega;
    let h0 = 0.5 * (s.PX * s.PX + w2 * s.X * s.X) - 0.5 * (s.PY * s.PY + w2 * s.Y * s.Y);
    let x = FRAC_1_SQRT_2 * (s.X + s.Y);
    h0 + p.eps * (x * x - 1.0) * 0.5 * (s.X - s.Y) * (s.PX - s.PY)
}

/// Reduces an angle-like offset `b` with period `2π/ω` into `(−π/ω, π/ω]`.
fn reduce_phase(b: f64, omega: f64) -> f64 {
    let period = 2.0 * PI / omega;
    let mut r = b - period * (b / period).round();
    if r <= -0.5 * period {
        r += period;
    } else if r > 0.5 * period {
        r -= period;
    }
    r
}

/// Inverts X = √(2α₁)/ω sin ω(t+β₁), P_X = √(2α₁) cos ω(t+β₁),
/// Y = √(2α₂)/ω sin ω(t−β₂), P_Y = −√(2α₂) cos ω(t−β₂).
///
/// β values come back in `(−π/ω, π/ω]`. For an unperturbed orbit they are
/// constant in t, so the chart is continuous along it.
pub fn rotated_to_alphabeta(s: &RotatedState, t: f64, p: &Params) -> Result<AlphaBeta> {
    let w = p.omega;
    let alpha1 = 0.5 * (s.PX * s.PX + w * w * s.X * s.X);
    let alpha2 = 0.5 * (s.PY * s.PY + w * w * s.Y * s.Y);
    if alpha1 == 0.0 {
        return Err(Error::DegenerateAmplitude { which: "alpha1" });
    }
    if alpha2 == 0.0 {
        return Err(Error::DegenerateAmplitude { which: "alpha2" });
    }
    let phi1 = (w * s.X).atan2(s.PX);
    let phi2 = (w * s.Y).atan2(-s.PY);
    Ok(AlphaBeta {
        alpha1,
        alpha2,
        beta1: reduce_phase(phi1 / w - t, w),
        beta2: reduce_phase(t - phi2 / w, w),
    })
}

pub fn alphabeta_to_rotated(s: &AlphaBeta, t: f64, p: &Params) -> RotatedState {
    let w = p.omega;
    let a1 = (2.0 * s.alpha1).sqrt();
    let a2 = (2.0 * s.alpha2).sqrt();
    let (s1, c1) = (w * (t + s.beta1)).sin_cos();
    let (s2, c2) = (w * (t - s.beta2)).sin_cos();
    RotatedState { X: a1 / w * s1, PX: a1 * c1, Y: a2 / w * s2, PY: -a2 * c2 }
}

/// Unperturbed energy α₁ − α₂.
pub fn h0_alphabeta(s: &AlphaBeta) -> f64 {
    s.alpha1 - s.alpha2
}

fn check_alphas(s: &AlphaBeta) -> Result<(f64, f64)> {
    for (which, v) in [("alpha1", s.alpha1), ("alpha2", s.alpha2)] {
        if v < 0.0 || v.is_nan() {
            return Err(Error::NegativeAmplitude { which, value: v });
        }
        if v == 0.0 {
            return Err(Error::DegenerateAmplitude { which });
        }
    }
    Ok((s.alpha1.sqrt(), s.alpha2.sqrt()))
}

/// Canonical flow (f₁, f₂, f₃, f₄) = (α̇₁, α̇₂, β̇₁, β̇₂) through ε⁴.
///
/// Note the field order of the returned rates: `alpha1 = f₁`,
/// `alpha2 = f₃`, `beta1 = f₂`, `beta2 = f₄`.
pub fn alphabeta_rhs(s: &AlphaBeta, p: &Params) -> Result<AlphaBeta> {
    alphabeta_rhs_to(s, p, 4)
}

/// [`alphabeta_rhs`] truncated after ε^`order` (`order` in 1..=4).
pub fn alphabeta_rhs_to(s: &AlphaBeta, p: &Params, order: usize) -> Result<AlphaBeta> {
    let order = order.clamp(1, 4);
    let (r1, r2) = check_alphas(s)?;
    let w = p.omega;
    let (cs, sn) = harmonics((s.beta1 + s.beta2) * w);
    let f1 = |r1: f64, r2: f64| series(&F1, order, p.eps, |tab| eval_terms(tab, r1, r2, w, &cs, &sn));
    let rate1 = f1(r1, r2);
    // K(α₂, α₁, −θ) = −K(α₁, α₂, θ) gives f₄(α₁, α₂, θ) = −f₂(α₂, α₁, −θ).
    // Evaluating f₄ this way makes f₂ + f₄ vanish bitwise on α₁ = α₂, θ = 0,
    // which the flow needs: off that manifold perturbations grow like e^{εt}.
    let sn_rev = sn.map(|v| -v);
    Ok(AlphaBeta {
        alpha1: rate1,
        alpha2: f3(&f1, r1, r2),
        beta1: series(&F2, order, p.eps, |tab| eval_terms(tab, r1, r2, w, &cs, &sn)),
        beta2: -series(&F2, order, p.eps, |tab| eval_terms(tab, r2, r1, w, &cs, &sn_rev)),
    })
}

// α̇₂ coincides with α̇₁ identically; computed through f₁ on purpose.
fn f3(f1: &impl Fn(f64, f64) -> f64, r1: f64, r2: f64) -> f64 {
    f1(r1, r2)
}

fn series(tabs: &[&[canonical::Term]; 4], order: usize, eps: f64, mut eval: impl FnMut(&[canonical::Term]) -> f64) -> f64 {
    // Horner in ε over orders 1..=order.
    let mut acc = 0.0;
    for n in (0..order).rev() {
        acc = (acc + eval(tabs[n])) * eps;
    }
    acc
}

/// The generating function K(α₁, α₂, θ) of the canonical flow, conserved
/// along [`alphabeta_rhs`].
pub fn canonical_generator(s: &AlphaBeta, p: &Params) -> Result<f64> {
    let (r1, r2) = check_alphas(s)?;
    let (cs, sn) = harmonics((s.beta1 + s.beta2) * p.omega);
    Ok(series(&KGEN, 4, p.eps, |tab| eval_terms(tab, r1, r2, p.omega, &cs, &sn)))
}

pub fn to_reduced(s: &AlphaBeta) -> ReducedCoords {
    ReducedCoords { alpha1: s.alpha1, gamma1: s.beta1 + s.beta2, gamma2: s.beta1 - s.beta2 }
}

/// Rates (α̇₁, γ̇₁, γ̇₂) at a point of the α₁ = α₂ slice given by `r`.
pub fn reduced_rates(r: &ReducedCoords, p: &Params) -> Result<(f64, f64, f64)> {
    let s = AlphaBeta {
        alpha1: r.alpha1,
        alpha2: r.alpha1,
        beta1: 0.5 * (r.gamma1 + r.gamma2),
        beta2: 0.5 * (r.gamma1 - r.gamma2),
    };
    let d = alphabeta_rhs(&s, p)?;
    Ok((d.alpha1, d.beta1 + d.beta2, d.beta1 - d.beta2))
}

/// Adjoint augmentation ẏ = −[Df(x)]ᵀ y with a central-difference Jacobian
/// (step max(1e−6, 1e−6·|xᵢ|) per component).
pub fn augment<F>(f: F, x: &[f64], y: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = x.len();
    let mut out = vec![0.0; n];
    let mut xp = x.to_vec();
    let mut fp = vec![0.0; n];
    let mut fm = vec![0.0; n];
    for j in 0..n {
        let h = (1e-6f64).max(1e-6 * x[j].abs());
        xp[j] = x[j] + h;
        f(&xp, &mut fp);
        xp[j] = x[j] - h;
        f(&xp, &mut fm);
        xp[j] = x[j];
        // column j of J dotted with y gives component j of Jᵀy
        let mut acc = 0.0;
        for i in 0..n {
            acc += (fp[i] - fm[i]) / (2.0 * h) * y[i];
        }
        out[j] = -acc;
    }
    out
}

/// The oscillator as a vector field on (x, ẋ), for use with [`augment`].
pub fn vdp_field(p: Params) -> impl Fn(&[f64], &mut [f64]) + Copy {
    move |s: &[f64], out: &mut [f64]| {
        let (a, b) = vdp_rhs(s[0], s[1], &p);
        out[0] = a;
        out[1] = b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::{integrate, IntegratorConfig};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn p(w: f64, e: f64) -> Params {
        Params::new(w, e).unwrap()
    }

    #[test]
    fn vdp_rhs_examples() {
        assert_eq!(vdp_rhs(1.0, 0.0, &p(1.0, 0.5)), (0.0, -1.0));
        assert_eq!(vdp_rhs(0.0, 1.0, &p(1.0, 0.5)), (1.0, 0.5));
        assert_eq!(vdp_rhs(0.0, 0.0, &p(2.0, 0.3)), (0.0, 0.0));
    }

    #[test]
    fn dual_rhs_examples() {
        let d = dual_rhs(&PhysState { x: 0.0, xdot: 1.0, y: 0.0, ydot: 1.0 }, &p(1.0, 0.5));
        assert_eq!(d.to_array(), [1.0, 0.5, 1.0, -0.5]);
        let d = dual_rhs(&PhysState { x: 0.7, xdot: -0.2, y: 0.0, ydot: 0.0 }, &p(1.3, 0.5));
        assert_eq!((d.y, d.ydot), (0.0, 0.0));
    }

    #[test]
    fn dual_is_unidirectional() {
        let pp = p(0.9, 0.4);
        let a = dual_rhs(&PhysState { x: 0.3, xdot: 1.1, y: -2.0, ydot: 5.0 }, &pp);
        let b = dual_rhs(&PhysState { x: 0.3, xdot: 1.1, y: 7.0, ydot: -1.0 }, &pp);
        assert_eq!(a.x.to_bits(), b.x.to_bits());
        assert_eq!(a.xdot.to_bits(), b.xdot.to_bits());
        let (v, a2) = vdp_rhs(0.3, 1.1, &pp);
        assert_eq!((a.x, a.xdot), (v, a2));
    }

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(hamiltonian(&CartState { x: 1.0, y: 1.0, px: 0.0, py: 0.0 }, &p(1.0, 0.77)), 1.0);
        let h = hamiltonian(&CartState { x: 2.0, y: 1.0, px: 1.0, py: 1.0 }, &p(1.0, 0.1));
        assert_relative_eq!(h, 3.3, epsilon = 1e-15);
    }

    #[test]
    fn hamilton_rhs_matches_gradient() {
        let pp = p(1.2, 0.35);
        let s = CartState { x: 0.4, y: -0.7, px: 1.3, py: 0.2 };
        let d = hamilton_rhs(&s, &pp);
        let h = 1e-6;
        let dh = |f: &dyn Fn(f64) -> CartState| {
            (hamiltonian(&f(h), &pp) - hamiltonian(&f(-h), &pp)) / (2.0 * h)
        };
        assert_relative_eq!(d.x, dh(&|e| CartState { px: s.px + e, ..s }), epsilon = 1e-8);
        assert_relative_eq!(d.y, dh(&|e| CartState { py: s.py + e, ..s }), epsilon = 1e-8);
        assert_relative_eq!(d.px, -dh(&|e| CartState { x: s.x + e, ..s }), epsilon = 1e-8);
        assert_relative_eq!(d.py, -dh(&|e| CartState { y: s.y + e, ..s }), epsilon = 1e-8);
    }

    #[test]
    fn chart_examples() {
        let pp = p(1.0, 0.1);
        let c = phys_to_cart(&PhysState { x: 2.0, xdot: 0.0, y: 1.0, ydot: 1.0 }, &pp);
        assert_relative_eq!(c.px, 0.7, epsilon = 1e-15);
        assert_eq!(c.py, 0.0);
        let c = phys_to_cart(&PhysState { x: 0.3, xdot: -1.5, y: 0.0, ydot: 0.0 }, &pp);
        assert_eq!((c.px, c.py), (0.0, -1.5));
        let r = cart_to_rotated(&CartState { x: 0.5, y: 0.5, px: 0.25, py: -0.25 });
        assert_relative_eq!(r.X, 2f64.sqrt() * 0.5, epsilon = 1e-15);
        assert_eq!(r.Y, 0.0);
        assert_eq!(r.PX, 0.0);
        assert_relative_eq!(r.PY, 2f64.sqrt() * 0.25, epsilon = 1e-15);
    }

    #[test]
    fn rotation_is_symplectic() {
        // M^T J M = J for the linear map (x, y, px, py) -> (X, Y, PX, PY).
        let r = FRAC_1_SQRT_2;
        let m = [[r, r, 0.0, 0.0], [r, -r, 0.0, 0.0], [0.0, 0.0, r, r], [0.0, 0.0, r, -r]];
        let j = [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0], [-1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0]];
        for a in 0..4 {
            for b in 0..4 {
                let mut s = 0.0;
                for c in 0..4 {
                    for d in 0..4 {
                        s += m[c][a] * j[c][d] * m[d][b];
                    }
                }
                assert!((s - j[a][b]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rotated_hamiltonian_agrees() {
        let pp = p(0.8, 0.3);
        let c = CartState { x: 0.9, y: -0.4, px: 0.3, py: 1.1 };
        assert_relative_eq!(rotated_hamiltonian(&cart_to_rotated(&c), &pp), hamiltonian(&c, &pp), epsilon = 1e-14);
    }

    #[test]
    fn alphabeta_examples() {
        let pp = p(1.7, 0.0);
        let a: f64 = 0.9;
        let r = RotatedState { X: (2.0 * a).sqrt() / 1.7, PX: 0.0, Y: 0.3, PY: 0.1 };
        let ab = rotated_to_alphabeta(&r, 0.0, &pp).unwrap();
        assert_relative_eq!(ab.alpha1, a, epsilon = 1e-15);
        assert_relative_eq!(ab.beta1, PI / (2.0 * 1.7), epsilon = 1e-15);
        let h0 = 0.5 * (r.PX * r.PX + 1.7 * 1.7 * r.X * r.X) - 0.5 * (r.PY * r.PY + 1.7 * 1.7 * r.Y * r.Y);
        assert_relative_eq!(h0_alphabeta(&ab), h0, epsilon = 1e-15);
        let z = RotatedState { X: 0.0, PX: 0.0, Y: 1.0, PY: 0.0 };
        assert!(matches!(rotated_to_alphabeta(&z, 0.0, &pp), Err(Error::DegenerateAmplitude { .. })));
    }

    #[test]
    fn alphabeta_chart_is_constant_on_free_orbits() {
        let pp = p(1.3, 0.0);
        let ab = AlphaBeta { alpha1: 0.7, alpha2: 1.1, beta1: 0.4, beta2: -1.0 };
        for k in 0..50 {
            let t = 0.1 * k as f64;
            let back = rotated_to_alphabeta(&alphabeta_to_rotated(&ab, t, &pp), t, &pp).unwrap();
            assert_relative_eq!(back.beta1, ab.beta1, epsilon = 1e-12);
            assert_relative_eq!(back.beta2, ab.beta2, epsilon = 1e-12);
        }
    }

    #[test]
    fn flow_f1_equals_f3_at_random_points() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let s = AlphaBeta {
                alpha1: rng.random_range(0.1..2.0),
                alpha2: rng.random_range(0.1..2.0),
                beta1: rng.random_range(-3.0..3.0),
                beta2: rng.random_range(-3.0..3.0),
            };
            let d = alphabeta_rhs(&s, &p(rng.random_range(0.5..1.5), rng.random_range(0.0..0.5))).unwrap();
            assert_eq!(d.alpha1, d.alpha2);
        }
    }

    #[test]
    fn flow_on_manifold_at_unit_amplitude() {
        for eps in [0.05, 0.2, 0.4] {
            let s = AlphaBeta { alpha1: 1.0, alpha2: 1.0, beta1: 0.3, beta2: -0.3 };
            let d = alphabeta_rhs(&s, &p(1.0, eps)).unwrap();
            assert_relative_eq!(d.alpha1, -eps.powi(3) / 32.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn flow_rejects_bad_amplitudes() {
        let pp = p(1.0, 0.1);
        let neg = AlphaBeta { alpha1: -0.1, alpha2: 1.0, beta1: 0.0, beta2: 0.0 };
        assert!(matches!(alphabeta_rhs(&neg, &pp), Err(Error::NegativeAmplitude { .. })));
        let zero = AlphaBeta { alpha1: 1.0, alpha2: 0.0, beta1: 0.0, beta2: 0.0 };
        assert!(matches!(alphabeta_rhs(&zero, &pp), Err(Error::DegenerateAmplitude { .. })));
    }

    #[test]
    fn generator_is_conserved() {
        // Off the manifold both amplitudes grow, so keep the run short.
        let pp = p(1.0, 0.3);
        let s0 = AlphaBeta { alpha1: 0.8, alpha2: 1.2, beta1: 0.2, beta2: 0.5 };
        let k0 = canonical_generator(&s0, &pp).unwrap();
        let tr = integrate(
            |_, y, dy| dy.copy_from_slice(&alphabeta_rhs(&AlphaBeta::from_slice(y), &pp).unwrap().to_array()),
            &s0.to_array(),
            0.0,
            4.0,
            &IntegratorConfig::with_tol(1e-12),
        )
        .unwrap();
        let k1 = canonical_generator(&AlphaBeta::from_slice(tr.last_state()), &pp).unwrap();
        assert!((k1 - k0).abs() < 1e-10, "{k0} -> {k1}");
    }

    #[test]
    fn mirrored_f4_matches_its_table() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let pp = p(rng.random_range(0.5..1.5), rng.random_range(0.0..0.5));
            let s = AlphaBeta {
                alpha1: rng.random_range(0.1..2.0),
                alpha2: rng.random_range(0.1..2.0),
                beta1: rng.random_range(-3.0..3.0),
                beta2: rng.random_range(-3.0..3.0),
            };
            let (r1, r2) = (s.alpha1.sqrt(), s.alpha2.sqrt());
            let (cs, sn) = harmonics((s.beta1 + s.beta2) * pp.omega);
            let table = series(&canonical::F4, 4, pp.eps, |tab| eval_terms(tab, r1, r2, pp.omega, &cs, &sn));
            let got = alphabeta_rhs(&s, &pp).unwrap().beta2;
            assert!((got - table).abs() <= 1e-13 * (1.0 + table.abs()), "{got} vs {table}");
        }
    }

    #[test]
    fn manifold_is_invariant_bitwise() {
        let s = AlphaBeta { alpha1: 0.83, alpha2: 0.83, beta1: 0.37, beta2: -0.37 };
        let d = alphabeta_rhs(&s, &p(1.1, 0.3)).unwrap();
        assert_eq!(d.alpha1, d.alpha2);
        assert_eq!(d.beta1, -d.beta2);
    }

    #[test]
    fn gamma1_rate_vanishes_on_manifold() {
        for g2 in [-1.0, 0.0, 0.4, 2.5] {
            let (_, g1dot, _) = reduced_rates(&ReducedCoords { alpha1: 0.9, gamma1: 0.0, gamma2: g2 }, &p(1.1, 0.35)).unwrap();
            assert!(g1dot.abs() <= 1e-12, "{g1dot}");
        }
    }

    #[test]
    fn augment_linear_field() {
        let m = [[1.0, -2.0, 3.0], [0.5, 4.0, -7.0], [9.0, 0.0, -1.5]];
        let f = |x: &[f64], out: &mut [f64]| {
            for i in 0..3 {
                out[i] = (0..3).map(|j| m[i][j] * x[j]).sum();
            }
        };
        let y = [0.3, -1.2, 2.0];
        let got = augment(f, &[0.1, 2.0, -3.0], &y);
        for j in 0..3 {
            let want: f64 = -(0..3).map(|i| m[i][j] * y[i]).sum::<f64>();
            assert!((got[j] - want).abs() <= 1e-9, "{} vs {want}", got[j]);
        }
        assert_eq!(augment(f, &[1.0, 1.0, 1.0], &[0.0; 3]), vec![0.0; 3]);
    }
}
