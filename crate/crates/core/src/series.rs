//! Closed-form perturbative results: the reduced amplitude/phase flow, its
//! fixed point, the limit-cycle waveform and frequency, the action-angle
//! rates and the first-order adiabatic connection.
//!
//! Coefficients are written as exact ratios of integers and evaluated in
//! double precision.

use crate::dual::Params;
use crate::error::{Error, Result};

/// Highest power of ε retained, 1 through 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeriesOrder(u8);

impl SeriesOrder {
    pub const MAX: SeriesOrder = SeriesOrder(4);

    pub fn new(order: u8) -> Result<Self> {
        if (1..=4).contains(&order) {
            Ok(Self(order))
        } else {
            Err(Error::InvalidParams(format!("series order must be 1..=4, got {order}")))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl Default for SeriesOrder {
    fn default() -> Self {
        Self::MAX
    }
}

/// Connection one-form A = (A₁ dω + A₂ dε).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Connection {
    pub a1: f64,
    pub a2: f64,
}

/// Actions and angles of the two degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionAngle {
    pub i1: f64,
    pub i2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

/// α̇₁ = (α₁ − α₁²/ω²)ε + ((−9α₁⁴ + 16α₁³ω² − 8α₁²ω⁴)/(32ω⁸))ε³.
pub fn reduced_alpha_rate(alpha1: f64, p: &Params) -> f64 {
    let (a, w2, e) = (alpha1, p.omega * p.omega, p.eps);
    let o1 = a - a * a / w2;
    let o3 = (-9.0 * a.powi(4) + 16.0 * a.powi(3) * w2 - 8.0 * a * a * w2 * w2) / (32.0 * w2.powi(4));
    o1 * e + o3 * e.powi(3)
}

/// β̇₁ on the invariant manifold, through ε⁴.
pub fn reduced_beta_rate(alpha1: f64, p: &Params) -> f64 {
    let (a, w2, e) = (alpha1, p.omega * p.omega, p.eps);
    let o2 = (-11.0 * a * a + 12.0 * a * w2 - 2.0 * w2 * w2) / (16.0 * w2.powi(3));
    let o4 = (-2527.0 * a.powi(4) + 5032.0 * a.powi(3) * w2 - 3052.0 * a * a * w2 * w2 + 528.0 * a * w2.powi(3)
        - 24.0 * w2.powi(4))
        / (3072.0 * w2.powi(6));
    o2 * e * e + o4 * e.powi(4)
}

/// Non-trivial root of [`reduced_alpha_rate`], ω² − ε²/32.
pub fn fixed_point_alpha(p: &Params) -> f64 {
    p.omega * p.omega - p.eps * p.eps / 32.0
}

/// β̇₁ at the fixed point: −ε²/(16ω²) + 17ε⁴/(3072ω⁴).
pub fn beta1_rate(p: &Params) -> f64 {
    let (w2, e2) = (p.omega * p.omega, p.eps * p.eps);
    -e2 / (16.0 * w2) + 17.0 * e2 * e2 / (3072.0 * w2 * w2)
}

/// ω − ε²/(16ω) + 17ε⁴/(3072ω³), truncated at `order`.
pub fn limit_cycle_frequency(p: &Params, order: SeriesOrder) -> f64 {
    let (w, e) = (p.omega, p.eps);
    let mut f = w;
    if order.get() >= 2 {
        f -= e * e / (16.0 * w);
    }
    if order.get() >= 4 {
        f += 17.0 * e.powi(4) / (3072.0 * w.powi(3));
    }
    f
}

/// Limit-cycle waveform x(B₁) through ε³, with B₁ = ω(t + β₁).
pub fn solution_x(b1: f64, p: &Params) -> f64 {
    let (w, e) = (p.omega, p.eps);
    let s = |k: f64| (k * b1).sin();
    let c = |k: f64| (k * b1).cos();
    2.0 * s(1.0) - e * c(3.0) / (4.0 * w)
        + e * e * (s(1.0) / 64.0 + 3.0 * s(3.0) / 32.0 - 5.0 * s(5.0) / 96.0) / (w * w)
        + e.powi(3) * (13.0 * c(1.0) / 256.0 + 15.0 * c(3.0) / 512.0 - 85.0 * c(5.0) / 2304.0 + 7.0 * c(7.0) / 576.0)
            / w.powi(3)
}

/// Maximum of [`solution_x`] over B₁, found on a fine grid and polished by
/// golden-section search.
pub fn solution_amplitude(p: &Params) -> f64 {
    let n = 720;
    let step = std::f64::consts::TAU / n as f64;
    let best = (0..n).map(|k| k as f64 * step).max_by(|a, b| solution_x(*a, p).total_cmp(&solution_x(*b, p))).unwrap();
    let (mut a, mut b) = (best - step, best + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if solution_x(c, p) > solution_x(d, p) {
            b = d;
        } else {
            a = c;
        }
    }
    solution_x(0.5 * (a + b), p)
}

/// I₁ = ω − ε²/(32ω).
pub fn action_fixed_point(p: &Params) -> f64 {
    p.omega - p.eps * p.eps / (32.0 * p.omega)
}

/// φ̇₁ = ω − ((11I₁² − 12I₁ω + 2ω²)/(16ω³))ε².
pub fn phi1_rate(i1: f64, p: &Params) -> f64 {
    let w = p.omega;
    w - (11.0 * i1 * i1 - 12.0 * i1 * w + 2.0 * w * w) / (16.0 * w.powi(3)) * p.eps * p.eps
}

/// İ₁ = (I₁ − I₁²/ω)ε + ((−9I₁⁴ + 16I₁³ω − 8I₁²ω²)/(32ω⁵))ε³.
pub fn action_rate(i1: f64, p: &Params) -> f64 {
    let (w, e) = (p.omega, p.eps);
    (i1 - i1 * i1 / w) * e
        + (-9.0 * i1.powi(4) + 16.0 * i1.powi(3) * w - 8.0 * i1 * i1 * w * w) / (32.0 * w.powi(5)) * e.powi(3)
}

/// A = (−ε/(8ω²), 0).
pub fn connection(p: &Params) -> Connection {
    Connection { a1: -p.eps / (8.0 * p.omega * p.omega), a2: 0.0 }
}

/// Bisection root of `f` on `[a, b]`; `f(a)` and `f(b)` must differ in sign.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Root of [`reduced_alpha_rate`] near ω², by bisection.
pub fn numeric_fixed_point_alpha(p: &Params) -> f64 {
    let w2 = p.omega * p.omega;
    bisect(|a| reduced_alpha_rate(a, p), 0.5 * w2, 1.5 * w2)
}

/// Root of [`action_rate`] near ω, by bisection.
pub fn numeric_action_fixed_point(p: &Params) -> f64 {
    bisect(|i| action_rate(i, p), 0.5 * p.omega, 1.5 * p.omega)
}
