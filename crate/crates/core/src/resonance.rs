//! Two oscillators with quartic coupling,
//!
//!   H = p₁²/2 + p₂²/2 + ½c₁q₁² + ½c₂q₂² + εω₁²ω₂²q₁²q₂²,
//!
//! against their first-order averaged flow. With `quadratic_frequency`
//! the stiffnesses are c_i = ω_i²; by default they are c_i = ω_i, linear in
//! the frequency parameter.
//!
//! Chart: with ν_i = √c_i, q_i = √(2α_i)/ν_i · sin ν_i(t + β_i) and
//! p_i = √(2α_i) cos ν_i(t + β_i), so α_i is the energy of oscillator i.
//! Averaging the coupling over fast angles leaves
//! K̄ = εκα₁α₂(1 + ½cos Φ) near resonance and K̄ = εκα₁α₂ away from it,
//! where Φ = 2(ν₁ − ν₂)t + 2(ν₁β₁ − ν₂β₂) and κ = ω₁²ω₂²/(ν₁²ν₂²).

use crate::error::{Error, Result};
use crate::ode::{integrate, IntegratorConfig};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledParams {
    pub omega1: f64,
    pub omega2: f64,
    pub eps: f64,
    /// Use c_i = ω_i² instead of c_i = ω_i.
    pub quadratic_frequency: bool,
}

impl CoupledParams {
    pub fn new(omega1: f64, omega2: f64, eps: f64) -> Result<Self> {
        let cp = Self { omega1, omega2, eps, quadratic_frequency: false };
        cp.validate()?;
        Ok(cp)
    }

    pub fn quadratic(omega1: f64, omega2: f64, eps: f64) -> Result<Self> {
        let cp = Self { omega1, omega2, eps, quadratic_frequency: true };
        cp.validate()?;
        Ok(cp)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.omega1 > 0.0 && self.omega2 > 0.0 && self.eps >= 0.0;
        if !ok || ![self.omega1, self.omega2, self.eps].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "need omega1, omega2 > 0 and eps >= 0, got ({}, {}, {})",
                self.omega1, self.omega2, self.eps
            )));
        }
        Ok(())
    }

    /// Stiffnesses (c₁, c₂).
    pub fn stiffness(&self) -> (f64, f64) {
        if self.quadratic_frequency {
            (self.omega1 * self.omega1, self.omega2 * self.omega2)
        } else {
            (self.omega1, self.omega2)
        }
    }

    /// Linear frequencies ν_i = √c_i.
    pub fn nu(&self) -> (f64, f64) {
        let (c1, c2) = self.stiffness();
        (c1.sqrt(), c2.sqrt())
    }

    /// Coupling scale κ = ω₁²ω₂²/(c₁c₂) of the averaged flow.
    pub fn kappa(&self) -> f64 {
        if self.quadratic_frequency {
            1.0
        } else {
            self.omega1 * self.omega2
        }
    }

    fn coupling(&self) -> f64 {
        self.eps * (self.omega1 * self.omega2).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledCart {
    pub q1: f64,
    pub q2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl CoupledCart {
    pub fn to_array(self) -> [f64; 4] {
        [self.q1, self.q2, self.p1, self.p2]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self { q1: s[0], q2: s[1], p1: s[2], p2: s[3] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledAveraged {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl CoupledAveraged {
    pub fn to_array(self) -> [f64; 4] {
        [self.alpha1, self.alpha2, self.beta1, self.beta2]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self { alpha1: s[0], alpha2: s[1], beta1: s[2], beta2: s[3] }
    }
}

pub fn coupled_energy(s: &CoupledCart, cp: &CoupledParams) -> f64 {
    let (c1, c2) = cp.stiffness();
    0.5 * (s.p1 * s.p1 + s.p2 * s.p2) + 0.5 * (c1 * s.q1 * s.q1 + c2 * s.q2 * s.q2) + cp.coupling() * (s.q1 * s.q2).powi(2)
}

pub fn coupled_rhs(s: &CoupledCart, cp: &CoupledParams) -> CoupledCart {
    let (c1, c2) = cp.stiffness();
    let g = 2.0 * cp.coupling();
    CoupledCart {
        q1: s.p1,
        q2: s.p2,
        p1: -c1 * s.q1 - g * s.q1 * s.q2 * s.q2,
        p2: -c2 * s.q2 - g * s.q2 * s.q1 * s.q1,
    }
}

/// Φ = 2(ν₁ − ν₂)t + 2(ν₁β₁ − ν₂β₂).
pub fn resonant_angle(s: &CoupledAveraged, t: f64, cp: &CoupledParams) -> f64 {
    let (n1, n2) = cp.nu();
    2.0 * (n1 - n2) * t + 2.0 * (n1 * s.beta1 - n2 * s.beta2)
}

/// Averaged flow keeping the slow harmonic:
/// α̇₁ = εκα₁α₂ν₁ sin Φ, α̇₂ = −εκα₁α₂ν₂ sin Φ,
/// β̇₁ = εκα₂(1 + ½cos Φ), β̇₂ = εκα₁(1 + ½cos Φ).
pub fn averaged_rhs(s: &CoupledAveraged, t: f64, cp: &CoupledParams) -> CoupledAveraged {
    let (n1, n2) = cp.nu();
    let k = cp.eps * cp.kappa();
    let (sn, cs) = resonant_angle(s, t, cp).sin_cos();
    let a = k * s.alpha1 * s.alpha2 * sn;
    let b = 1.0 + 0.5 * cs;
    CoupledAveraged { alpha1: a * n1, alpha2: -a * n2, beta1: k * s.alpha2 * b, beta2: k * s.alpha1 * b }
}

/// Away from resonance only K̄ = εκα₁α₂ survives: (β̇₁, β̇₂) = (εκα₂, εκα₁).
pub fn nonresonant_prediction(alpha1: f64, alpha2: f64, cp: &CoupledParams) -> (f64, f64) {
    let k = cp.eps * cp.kappa();
    (k * alpha2, k * alpha1)
}

/// |ν₁ − ν₂| < 5ε·max(α₁, α₂)/min(ν₁, ν₂).
pub fn is_resonant(alpha1: f64, alpha2: f64, cp: &CoupledParams) -> bool {
    let (n1, n2) = cp.nu();
    (n1 - n2).abs() < 5.0 * cp.eps * alpha1.max(alpha2) / n1.min(n2)
}

/// Chart from (α, β) at time t to Cartesian coordinates.
pub fn averaged_to_cart(s: &CoupledAveraged, t: f64, cp: &CoupledParams) -> CoupledCart {
    let (n1, n2) = cp.nu();
    let (s1, c1) = (n1 * (t + s.beta1)).sin_cos();
    let (s2, c2) = (n2 * (t + s.beta2)).sin_cos();
    let (r1, r2) = ((2.0 * s.alpha1).sqrt(), (2.0 * s.alpha2).sqrt());
    CoupledCart { q1: r1 / n1 * s1, q2: r2 / n2 * s2, p1: r1 * c1, p2: r2 * c2 }
}

/// Inverse chart; β_i lands in (−π/ν_i, π/ν_i].
pub fn cart_to_averaged(s: &CoupledCart, t: f64, cp: &CoupledParams) -> CoupledAveraged {
    let (n1, n2) = cp.nu();
    let beta = |q: f64, p: f64, n: f64| {
        let b = (n * q).atan2(p) / n - t;
        let period = 2.0 * PI / n;
        let r = b - period * (b / period).round();
        if r <= -PI / n {
            r + period
        } else {
            r
        }
    };
    CoupledAveraged {
        alpha1: 0.5 * (s.p1 * s.p1 + n1 * n1 * s.q1 * s.q1),
        alpha2: 0.5 * (s.p2 * s.p2 + n2 * n2 * s.q2 * s.q2),
        beta1: beta(s.q1, s.p1, n1),
        beta2: beta(s.q2, s.p2, n2),
    }
}

/// Deviation of the averaged flow from the full flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareReport {
    pub resonant: bool,
    pub horizon: f64,
    /// sup over samples of max(|Δα₁|, |Δα₂|).
    pub alpha_deviation: f64,
    /// sup over samples of max_i |ν_i Δβ_i|, the phase error in radians.
    pub phase_deviation: f64,
    /// sup of |α₁(t) − α₁(0)| along the full flow.
    pub alpha1_excursion: f64,
    pub samples: usize,
}

/// Default starting point of [`compare`].
pub const COMPARE_START: CoupledAveraged = CoupledAveraged { alpha1: 0.5, alpha2: 0.3, beta1: 0.0, beta2: 0.4 };

pub fn compare(cp: &CoupledParams, horizon: f64) -> Result<CompareReport> {
    compare_from(cp, horizon, &COMPARE_START, &IntegratorConfig::with_tol(1e-11))
}

/// Integrates both flows from the same (α, β) and samples them 4000 times
/// over `[0, horizon]`. The averaged side uses the resonant flow when
/// [`is_resonant`] holds at the start and the K̄ = εκα₁α₂ flow otherwise.
pub fn compare_from(cp: &CoupledParams, horizon: f64, start: &CoupledAveraged, cfg: &IntegratorConfig) -> Result<CompareReport> {
    cp.validate()?;
    if !(horizon > 0.0) {
        return Err(Error::InvalidParams(format!("horizon must be positive, got {horizon}")));
    }
    if !(start.alpha1 > 0.0 && start.alpha2 > 0.0) {
        return Err(Error::InvalidParams("compare needs positive amplitudes".into()));
    }
    let resonant = is_resonant(start.alpha1, start.alpha2, cp);
    let (n1, n2) = cp.nu();
    let cart0 = averaged_to_cart(start, 0.0, cp);
    let full = integrate(
        |_, y, dy| dy.copy_from_slice(&coupled_rhs(&CoupledCart::from_slice(y), cp).to_array()),
        &cart0.to_array(),
        0.0,
        horizon,
        &cfg.max_step(cfg.max_step.min(0.1 * 2.0 * PI / n1.max(n2))),
    )?;
    let avg = integrate(
        |t, y, dy| {
            let s = CoupledAveraged::from_slice(y);
            let r = if resonant {
                averaged_rhs(&s, t, cp)
            } else {
                let (b1, b2) = nonresonant_prediction(s.alpha1, s.alpha2, cp);
                CoupledAveraged { alpha1: 0.0, alpha2: 0.0, beta1: b1, beta2: b2 }
            };
            dy.copy_from_slice(&r.to_array());
        },
        &start.to_array(),
        0.0,
        horizon,
        cfg,
    )?;
    let samples = 4000;
    let mut rep = CompareReport { resonant, horizon, alpha_deviation: 0.0, phase_deviation: 0.0, alpha1_excursion: 0.0, samples };
    // Full-flow β is only known modulo 2π/ν; unwrap it against the averaged one.
    let wrap = |d: f64| d - 2.0 * PI * (d / (2.0 * PI)).round();
    for k in 0..=samples {
        let t = horizon * k as f64 / samples as f64;
        let f = cart_to_averaged(&CoupledCart::from_slice(&full.eval(t)), t, cp);
        let a = CoupledAveraged::from_slice(&avg.eval(t));
        rep.alpha_deviation = rep.alpha_deviation.max((f.alpha1 - a.alpha1).abs()).max((f.alpha2 - a.alpha2).abs());
        let dphi = wrap(n1 * (f.beta1 - a.beta1)).abs().max(wrap(n2 * (f.beta2 - a.beta2)).abs());
        rep.phase_deviation = rep.phase_deviation.max(dphi);
        rep.alpha1_excursion = rep.alpha1_excursion.max((f.alpha1 - start.alpha1).abs());
    }
    Ok(rep)
}

/// Least-squares slope of the unwrapped full-flow β_i(t) over `[0, horizon]`.
pub fn measured_phase_drift(cp: &CoupledParams, horizon: f64, start: &CoupledAveraged) -> Result<(f64, f64)> {
    let cart0 = averaged_to_cart(start, 0.0, cp);
    let (n1, n2) = cp.nu();
    let full = integrate(
        |_, y, dy| dy.copy_from_slice(&coupled_rhs(&CoupledCart::from_slice(y), cp).to_array()),
        &cart0.to_array(),
        0.0,
        horizon,
        &IntegratorConfig::with_tol(1e-11).max_step(0.1 * 2.0 * PI / n1.max(n2)),
    )?;
    let n = 4000;
    let mut ts = Vec::with_capacity(n + 1);
    let mut b1 = Vec::with_capacity(n + 1);
    let mut b2 = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = horizon * k as f64 / n as f64;
        let f = cart_to_averaged(&CoupledCart::from_slice(&full.eval(t)), t, cp);
        let unwrap = |prev: Option<&f64>, b: f64, nu: f64| match prev {
            Some(&p) => {
                let period = 2.0 * PI / nu;
                b + period * ((p - b) / period).round()
            }
            None => b,
        };
        b1.push(unwrap(b1.last(), f.beta1, n1));
        b2.push(unwrap(b2.last(), f.beta2, n2));
        ts.push(t);
    }
    let slope = |y: &[f64]| {
        let m = ts.len() as f64;
        let (mt, my) = (ts.iter().sum::<f64>() / m, y.iter().sum::<f64>() / m);
        ts.iter().zip(y).map(|(t, v)| (t - mt) * (v - my)).sum::<f64>() / ts.iter().map(|t| (t - mt).powi(2)).sum::<f64>()
    };
    Ok((slope(&b1), slope(&b2)))
}
