//! The ε-expanded canonical flow in (α₁, α₂, β₁, β₂) through fourth order.
//!
//! With θ = (β₁ + β₂)ω every rate is a finite trigonometric polynomial in θ
//! whose coefficients are monomials in √α₁, √α₂ and ω. The tables below hold
//! those monomials per order; [`Term`] `t(k, Cos, c, i, j, m)` stands for
//! `c · √α₁^i · √α₂^j · ω^m · cos(kθ)`.
//!
//! All four rates derive from one generating function K(α₁, α₂, θ):
//! f₁ = f₃ = −ω ∂K/∂θ, f₂ = ∂K/∂α₁, f₄ = ∂K/∂α₂. `KGEN` tabulates K itself so
//! the flow can be checked for canonicity and K for conservation.
//!
//! Corrections applied to the commonly quoted closed forms, each forced by
//! dimensional consistency and the canonical identities above:
//! - f₁, order 3: the cos 3θ and cos 4θ coefficients are
//!   3α₁α₂(27α₁ + 27α₂ − 64ω²) and 36α₁α₂√(α₁α₂); with these the reduction to
//!   α₁ = α₂, β₁ = −β₂ reproduces the reduced amplitude rate exactly.
//! - f₁, order 4: the bracketed harmonic sum multiplies sin θ, which restores
//!   periodicity of K in θ.
//! - f₂, order 4, θ-independent part: the α₁α₂³ coefficient is 101080, as
//!   required by ∂f̄₂/∂α₂ = ∂f̄₄/∂α₁ and by the α₁ ↔ α₂ antisymmetry with f₄.
//! - f₂ and f₄, order 4, harmonic parts: taken as ∂K/∂α₁ and ∂K/∂α₂ of the K
//!   fixed by f₁ at order 4, since the quoted forms are incomplete.

// Tables keep unreduced fractions such as 1.0 / 1.0 for uniformity.
#![allow(clippy::eq_op)]

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Trig {
    Cos,
    Sin,
}
use Trig::{Cos, Sin};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Term {
    pub k: u8,
    pub trig: Trig,
    pub c: f64,
    pub i: i8,
    pub j: i8,
    pub m: i8,
}

const fn t(k: u8, trig: Trig, c: f64, i: i8, j: i8, m: i8) -> Term {
    Term { k, trig, c, i, j, m }
}

/// Sum of `terms` at (r₁, r₂, ω, θ) with r = √α. `cs[k]`, `sn[k]` are cos kθ
/// and sin kθ for k ≤ 5.
pub(crate) fn eval_terms(terms: &[Term], r1: f64, r2: f64, w: f64, cs: &[f64; 6], sn: &[f64; 6]) -> f64 {
    terms
        .iter()
        .map(|tm| {
            let tr = match tm.trig {
                Cos => cs[tm.k as usize],
                Sin => sn[tm.k as usize],
            };
            tm.c * r1.powi(tm.i as i32) * r2.powi(tm.j as i32) * w.powi(tm.m as i32) * tr
        })
        .sum()
}

pub(crate) fn harmonics(theta: f64) -> ([f64; 6], [f64; 6]) {
    let mut cs = [0.0; 6];
    let mut sn = [0.0; 6];
    for k in 0..6 {
        let (s, c) = (k as f64 * theta).sin_cos();
        cs[k] = c;
        sn[k] = s;
    }
    (cs, sn)
}

pub(crate) const F1: [&[Term]; 4] = [
    &[
        t(1, Cos, -1.0 / 4.0, 3, 1, -2),
        t(1, Cos, -1.0 / 4.0, 1, 3, -2),
        t(1, Cos, 1.0 / 1.0, 1, 1, 0),
        t(2, Cos, -1.0 / 2.0, 2, 2, -2),
    ],
    &[
        t(1, Sin, -11.0 / 64.0, 5, 1, -5),
        t(1, Sin, 3.0 / 8.0, 3, 1, -3),
        t(1, Sin, 11.0 / 64.0, 1, 5, -5),
        t(1, Sin, -3.0 / 8.0, 1, 3, -3),
        t(2, Sin, -11.0 / 64.0, 4, 2, -5),
        t(2, Sin, 11.0 / 64.0, 2, 4, -5),
    ],
    &[
        t(1, Cos, -9.0 / 2048.0, 7, 1, -8),
        t(1, Cos, -27.0 / 1024.0, 5, 3, -8),
        t(1, Cos, 1.0 / 32.0, 5, 1, -6),
        t(1, Cos, -27.0 / 1024.0, 3, 5, -8),
        t(1, Cos, 3.0 / 32.0, 3, 3, -6),
        t(1, Cos, -1.0 / 16.0, 3, 1, -4),
        t(1, Cos, -9.0 / 2048.0, 1, 7, -8),
        t(1, Cos, 1.0 / 32.0, 1, 5, -6),
        t(1, Cos, -1.0 / 16.0, 1, 3, -4),
        t(2, Cos, -27.0 / 1024.0, 6, 2, -8),
        t(2, Cos, -9.0 / 128.0, 4, 4, -8),
        t(2, Cos, 1.0 / 8.0, 4, 2, -6),
        t(2, Cos, -27.0 / 1024.0, 2, 6, -8),
        t(2, Cos, 1.0 / 8.0, 2, 4, -6),
        t(2, Cos, -1.0 / 8.0, 2, 2, -4),
        t(3, Cos, -81.0 / 2048.0, 5, 3, -8),
        t(3, Cos, -81.0 / 2048.0, 3, 5, -8),
        t(3, Cos, 3.0 / 32.0, 3, 3, -6),
        t(4, Cos, -9.0 / 512.0, 4, 4, -8),
    ],
    &[
        t(1, Sin, -2527.0 / 98304.0, 9, 1, -11),
        t(1, Sin, -12635.0 / 98304.0, 7, 3, -11),
        t(1, Sin, 629.0 / 4096.0, 7, 1, -9),
        t(1, Sin, 629.0 / 2048.0, 5, 3, -9),
        t(1, Sin, -763.0 / 3072.0, 5, 1, -7),
        t(1, Sin, 12635.0 / 98304.0, 3, 7, -11),
        t(1, Sin, -629.0 / 2048.0, 3, 5, -9),
        t(1, Sin, 11.0 / 128.0, 3, 1, -5),
        t(1, Sin, 2527.0 / 98304.0, 1, 9, -11),
        t(1, Sin, -629.0 / 4096.0, 1, 7, -9),
        t(1, Sin, 763.0 / 3072.0, 1, 5, -7),
        t(1, Sin, -11.0 / 128.0, 1, 3, -5),
        t(2, Sin, -2527.0 / 32768.0, 8, 2, -11),
        t(2, Sin, -12635.0 / 98304.0, 6, 4, -11),
        t(2, Sin, 629.0 / 2048.0, 6, 2, -9),
        t(2, Sin, 12635.0 / 98304.0, 4, 6, -11),
        t(2, Sin, -763.0 / 3072.0, 4, 2, -7),
        t(2, Sin, 2527.0 / 32768.0, 2, 8, -11),
        t(2, Sin, -629.0 / 2048.0, 2, 6, -9),
        t(2, Sin, 763.0 / 3072.0, 2, 4, -7),
        t(3, Sin, -2527.0 / 32768.0, 7, 3, -11),
        t(3, Sin, 629.0 / 4096.0, 5, 3, -9),
        t(3, Sin, 2527.0 / 32768.0, 3, 7, -11),
        t(3, Sin, -629.0 / 4096.0, 3, 5, -9),
        t(4, Sin, -2527.0 / 98304.0, 6, 4, -11),
        t(4, Sin, 2527.0 / 98304.0, 4, 6, -11),
    ],
];
pub(crate) const F2: [&[Term]; 4] = [
    &[
        t(1, Sin, 3.0 / 8.0, 1, 1, -3),
        t(1, Sin, 1.0 / 8.0, -1, 3, -3),
        t(1, Sin, -1.0 / 2.0, -1, 1, -1),
        t(2, Sin, 1.0 / 4.0, 0, 2, -3),
    ],
    &[
        t(0, Cos, -33.0 / 256.0, 4, 0, -6),
        t(0, Cos, -33.0 / 128.0, 2, 2, -6),
        t(0, Cos, 3.0 / 8.0, 2, 0, -4),
        t(0, Cos, 33.0 / 256.0, 0, 4, -6),
        t(0, Cos, -1.0 / 8.0, 0, 0, -2),
        t(1, Cos, -55.0 / 128.0, 3, 1, -6),
        t(1, Cos, 9.0 / 16.0, 1, 1, -4),
        t(1, Cos, 11.0 / 128.0, -1, 5, -6),
        t(1, Cos, -3.0 / 16.0, -1, 3, -4),
        t(2, Cos, -11.0 / 64.0, 2, 2, -6),
        t(2, Cos, 11.0 / 128.0, 0, 4, -6),
    ],
    &[
        t(1, Sin, 63.0 / 4096.0, 5, 1, -9),
        t(1, Sin, 135.0 / 2048.0, 3, 3, -9),
        t(1, Sin, -5.0 / 64.0, 3, 1, -7),
        t(1, Sin, 81.0 / 2048.0, 1, 5, -9),
        t(1, Sin, -9.0 / 64.0, 1, 3, -7),
        t(1, Sin, 3.0 / 32.0, 1, 1, -5),
        t(1, Sin, 9.0 / 4096.0, -1, 7, -9),
        t(1, Sin, -1.0 / 64.0, -1, 5, -7),
        t(1, Sin, 1.0 / 32.0, -1, 3, -5),
        t(2, Sin, 81.0 / 2048.0, 4, 2, -9),
        t(2, Sin, 9.0 / 128.0, 2, 4, -9),
        t(2, Sin, -1.0 / 8.0, 2, 2, -7),
        t(2, Sin, 27.0 / 2048.0, 0, 6, -9),
        t(2, Sin, -1.0 / 16.0, 0, 4, -7),
        t(2, Sin, 1.0 / 16.0, 0, 2, -5),
        t(3, Sin, 135.0 / 4096.0, 3, 3, -9),
        t(3, Sin, 81.0 / 4096.0, 1, 5, -9),
        t(3, Sin, -3.0 / 64.0, 1, 3, -7),
        t(4, Sin, 9.0 / 1024.0, 2, 4, -9),
    ],
    &[
        t(0, Cos, -12635.0 / 786432.0, 8, 0, -12),
        t(0, Cos, -12635.0 / 65536.0, 6, 2, -12),
        t(0, Cos, 629.0 / 6144.0, 6, 0, -10),
        t(0, Cos, -12635.0 / 65536.0, 4, 4, -12),
        t(0, Cos, 629.0 / 1024.0, 4, 2, -10),
        t(0, Cos, -763.0 / 4096.0, 4, 0, -8),
        t(0, Cos, 12635.0 / 98304.0, 2, 6, -12),
        t(0, Cos, -763.0 / 2048.0, 2, 2, -8),
        t(0, Cos, 11.0 / 128.0, 2, 0, -6),
        t(0, Cos, 12635.0 / 262144.0, 0, 8, -12),
        t(0, Cos, -629.0 / 3072.0, 0, 6, -10),
        t(0, Cos, 763.0 / 4096.0, 0, 4, -8),
        t(0, Cos, -1.0 / 128.0, 0, 0, -4),
        t(1, Cos, -7581.0 / 65536.0, 7, 1, -12),
        t(1, Cos, -88445.0 / 196608.0, 5, 3, -12),
        t(1, Cos, 4403.0 / 8192.0, 5, 1, -10),
        t(1, Cos, 3145.0 / 4096.0, 3, 3, -10),
        t(1, Cos, -3815.0 / 6144.0, 3, 1, -8),
        t(1, Cos, 12635.0 / 65536.0, 1, 7, -12),
        t(1, Cos, -1887.0 / 4096.0, 1, 5, -10),
        t(1, Cos, 33.0 / 256.0, 1, 1, -6),
        t(1, Cos, 2527.0 / 196608.0, -1, 9, -12),
        t(1, Cos, -629.0 / 8192.0, -1, 7, -10),
        t(1, Cos, 763.0 / 6144.0, -1, 5, -8),
        t(1, Cos, -11.0 / 256.0, -1, 3, -6),
        t(2, Cos, -2527.0 / 16384.0, 6, 2, -12),
        t(2, Cos, -12635.0 / 65536.0, 4, 4, -12),
        t(2, Cos, 1887.0 / 4096.0, 4, 2, -10),
        t(2, Cos, 12635.0 / 98304.0, 2, 6, -12),
        t(2, Cos, -763.0 / 3072.0, 2, 2, -8),
        t(2, Cos, 2527.0 / 65536.0, 0, 8, -12),
        t(2, Cos, -629.0 / 4096.0, 0, 6, -10),
        t(2, Cos, 763.0 / 6144.0, 0, 4, -8),
        t(3, Cos, -17689.0 / 196608.0, 5, 3, -12),
        t(3, Cos, 3145.0 / 24576.0, 3, 3, -10),
        t(3, Cos, 2527.0 / 65536.0, 1, 7, -12),
        t(3, Cos, -629.0 / 8192.0, 1, 5, -10),
        t(4, Cos, -2527.0 / 131072.0, 4, 4, -12),
        t(4, Cos, 2527.0 / 196608.0, 2, 6, -12),
    ],
];
#[cfg(test)]
pub(crate) const F4: [&[Term]; 4] = [
    &[
        t(1, Sin, 1.0 / 8.0, 3, -1, -3),
        t(1, Sin, 3.0 / 8.0, 1, 1, -3),
        t(1, Sin, -1.0 / 2.0, 1, -1, -1),
        t(2, Sin, 1.0 / 4.0, 2, 0, -3),
    ],
    &[
        t(0, Cos, -33.0 / 256.0, 4, 0, -6),
        t(0, Cos, 33.0 / 128.0, 2, 2, -6),
        t(0, Cos, 33.0 / 256.0, 0, 4, -6),
        t(0, Cos, -3.0 / 8.0, 0, 2, -4),
        t(0, Cos, 1.0 / 8.0, 0, 0, -2),
        t(1, Cos, -11.0 / 128.0, 5, -1, -6),
        t(1, Cos, 3.0 / 16.0, 3, -1, -4),
        t(1, Cos, 55.0 / 128.0, 1, 3, -6),
        t(1, Cos, -9.0 / 16.0, 1, 1, -4),
        t(2, Cos, -11.0 / 128.0, 4, 0, -6),
        t(2, Cos, 11.0 / 64.0, 2, 2, -6),
    ],
    &[
        t(1, Sin, 9.0 / 4096.0, 7, -1, -9),
        t(1, Sin, 81.0 / 2048.0, 5, 1, -9),
        t(1, Sin, -1.0 / 64.0, 5, -1, -7),
        t(1, Sin, 135.0 / 2048.0, 3, 3, -9),
        t(1, Sin, -9.0 / 64.0, 3, 1, -7),
        t(1, Sin, 1.0 / 32.0, 3, -1, -5),
        t(1, Sin, 63.0 / 4096.0, 1, 5, -9),
        t(1, Sin, -5.0 / 64.0, 1, 3, -7),
        t(1, Sin, 3.0 / 32.0, 1, 1, -5),
        t(2, Sin, 27.0 / 2048.0, 6, 0, -9),
        t(2, Sin, 9.0 / 128.0, 4, 2, -9),
        t(2, Sin, -1.0 / 16.0, 4, 0, -7),
        t(2, Sin, 81.0 / 2048.0, 2, 4, -9),
        t(2, Sin, -1.0 / 8.0, 2, 2, -7),
        t(2, Sin, 1.0 / 16.0, 2, 0, -5),
        t(3, Sin, 81.0 / 4096.0, 5, 1, -9),
        t(3, Sin, 135.0 / 4096.0, 3, 3, -9),
        t(3, Sin, -3.0 / 64.0, 3, 1, -7),
        t(4, Sin, 9.0 / 1024.0, 4, 2, -9),
    ],
    &[
        t(0, Cos, -12635.0 / 262144.0, 8, 0, -12),
        t(0, Cos, -12635.0 / 98304.0, 6, 2, -12),
        t(0, Cos, 629.0 / 3072.0, 6, 0, -10),
        t(0, Cos, 12635.0 / 65536.0, 4, 4, -12),
        t(0, Cos, -763.0 / 4096.0, 4, 0, -8),
        t(0, Cos, 12635.0 / 65536.0, 2, 6, -12),
        t(0, Cos, -629.0 / 1024.0, 2, 4, -10),
        t(0, Cos, 763.0 / 2048.0, 2, 2, -8),
        t(0, Cos, 12635.0 / 786432.0, 0, 8, -12),
        t(0, Cos, -629.0 / 6144.0, 0, 6, -10),
        t(0, Cos, 763.0 / 4096.0, 0, 4, -8),
        t(0, Cos, -11.0 / 128.0, 0, 2, -6),
        t(0, Cos, 1.0 / 128.0, 0, 0, -4),
        t(1, Cos, -2527.0 / 196608.0, 9, -1, -12),
        t(1, Cos, -12635.0 / 65536.0, 7, 1, -12),
        t(1, Cos, 629.0 / 8192.0, 7, -1, -10),
        t(1, Cos, 1887.0 / 4096.0, 5, 1, -10),
        t(1, Cos, -763.0 / 6144.0, 5, -1, -8),
        t(1, Cos, 88445.0 / 196608.0, 3, 5, -12),
        t(1, Cos, -3145.0 / 4096.0, 3, 3, -10),
        t(1, Cos, 11.0 / 256.0, 3, -1, -6),
        t(1, Cos, 7581.0 / 65536.0, 1, 7, -12),
        t(1, Cos, -4403.0 / 8192.0, 1, 5, -10),
        t(1, Cos, 3815.0 / 6144.0, 1, 3, -8),
        t(1, Cos, -33.0 / 256.0, 1, 1, -6),
        t(2, Cos, -2527.0 / 65536.0, 8, 0, -12),
        t(2, Cos, -12635.0 / 98304.0, 6, 2, -12),
        t(2, Cos, 629.0 / 4096.0, 6, 0, -10),
        t(2, Cos, 12635.0 / 65536.0, 4, 4, -12),
        t(2, Cos, -763.0 / 6144.0, 4, 0, -8),
        t(2, Cos, 2527.0 / 16384.0, 2, 6, -12),
        t(2, Cos, -1887.0 / 4096.0, 2, 4, -10),
        t(2, Cos, 763.0 / 3072.0, 2, 2, -8),
        t(3, Cos, -2527.0 / 65536.0, 7, 1, -12),
        t(3, Cos, 629.0 / 8192.0, 5, 1, -10),
        t(3, Cos, 17689.0 / 196608.0, 3, 5, -12),
        t(3, Cos, -3145.0 / 24576.0, 3, 3, -10),
        t(4, Cos, -2527.0 / 196608.0, 6, 2, -12),
        t(4, Cos, 2527.0 / 131072.0, 4, 4, -12),
    ],
];
pub(crate) const KGEN: [&[Term]; 4] = [
    &[
        t(1, Sin, 1.0 / 4.0, 3, 1, -3),
        t(1, Sin, 1.0 / 4.0, 1, 3, -3),
        t(1, Sin, -1.0 / 1.0, 1, 1, -1),
        t(2, Sin, 1.0 / 4.0, 2, 2, -3),
    ],
    &[
        t(0, Cos, -11.0 / 256.0, 6, 0, -6),
        t(0, Cos, -33.0 / 256.0, 4, 2, -6),
        t(0, Cos, 3.0 / 16.0, 4, 0, -4),
        t(0, Cos, 33.0 / 256.0, 2, 4, -6),
        t(0, Cos, -1.0 / 8.0, 2, 0, -2),
        t(0, Cos, 11.0 / 256.0, 0, 6, -6),
        t(0, Cos, -3.0 / 16.0, 0, 4, -4),
        t(0, Cos, 1.0 / 8.0, 0, 2, -2),
        t(1, Cos, -11.0 / 64.0, 5, 1, -6),
        t(1, Cos, 3.0 / 8.0, 3, 1, -4),
        t(1, Cos, 11.0 / 64.0, 1, 5, -6),
        t(1, Cos, -3.0 / 8.0, 1, 3, -4),
        t(2, Cos, -11.0 / 128.0, 4, 2, -6),
        t(2, Cos, 11.0 / 128.0, 2, 4, -6),
    ],
    &[
        t(1, Sin, 9.0 / 2048.0, 7, 1, -9),
        t(1, Sin, 27.0 / 1024.0, 5, 3, -9),
        t(1, Sin, -1.0 / 32.0, 5, 1, -7),
        t(1, Sin, 27.0 / 1024.0, 3, 5, -9),
        t(1, Sin, -3.0 / 32.0, 3, 3, -7),
        t(1, Sin, 1.0 / 16.0, 3, 1, -5),
        t(1, Sin, 9.0 / 2048.0, 1, 7, -9),
        t(1, Sin, -1.0 / 32.0, 1, 5, -7),
        t(1, Sin, 1.0 / 16.0, 1, 3, -5),
        t(2, Sin, 27.0 / 2048.0, 6, 2, -9),
        t(2, Sin, 9.0 / 256.0, 4, 4, -9),
        t(2, Sin, -1.0 / 16.0, 4, 2, -7),
        t(2, Sin, 27.0 / 2048.0, 2, 6, -9),
        t(2, Sin, -1.0 / 16.0, 2, 4, -7),
        t(2, Sin, 1.0 / 16.0, 2, 2, -5),
        t(3, Sin, 27.0 / 2048.0, 5, 3, -9),
        t(3, Sin, 27.0 / 2048.0, 3, 5, -9),
        t(3, Sin, -1.0 / 32.0, 3, 3, -7),
        t(4, Sin, 9.0 / 2048.0, 4, 4, -9),
    ],
    &[
        t(0, Cos, -2527.0 / 786432.0, 10, 0, -12),
        t(0, Cos, -12635.0 / 262144.0, 8, 2, -12),
        t(0, Cos, 629.0 / 24576.0, 8, 0, -10),
        t(0, Cos, -12635.0 / 196608.0, 6, 4, -12),
        t(0, Cos, 629.0 / 3072.0, 6, 2, -10),
        t(0, Cos, -763.0 / 12288.0, 6, 0, -8),
        t(0, Cos, 12635.0 / 196608.0, 4, 6, -12),
        t(0, Cos, -763.0 / 4096.0, 4, 2, -8),
        t(0, Cos, 11.0 / 256.0, 4, 0, -6),
        t(0, Cos, 12635.0 / 262144.0, 2, 8, -12),
        t(0, Cos, -629.0 / 3072.0, 2, 6, -10),
        t(0, Cos, 763.0 / 4096.0, 2, 4, -8),
        t(0, Cos, -1.0 / 128.0, 2, 0, -4),
        t(0, Cos, 2527.0 / 786432.0, 0, 10, -12),
        t(0, Cos, -629.0 / 24576.0, 0, 8, -10),
        t(0, Cos, 763.0 / 12288.0, 0, 6, -8),
        t(0, Cos, -11.0 / 256.0, 0, 4, -6),
        t(0, Cos, 1.0 / 128.0, 0, 2, -4),
        t(1, Cos, -2527.0 / 98304.0, 9, 1, -12),
        t(1, Cos, -12635.0 / 98304.0, 7, 3, -12),
        t(1, Cos, 629.0 / 4096.0, 7, 1, -10),
        t(1, Cos, 629.0 / 2048.0, 5, 3, -10),
        t(1, Cos, -763.0 / 3072.0, 5, 1, -8),
        t(1, Cos, 12635.0 / 98304.0, 3, 7, -12),
        t(1, Cos, -629.0 / 2048.0, 3, 5, -10),
        t(1, Cos, 11.0 / 128.0, 3, 1, -6),
        t(1, Cos, 2527.0 / 98304.0, 1, 9, -12),
        t(1, Cos, -629.0 / 4096.0, 1, 7, -10),
        t(1, Cos, 763.0 / 3072.0, 1, 5, -8),
        t(1, Cos, -11.0 / 128.0, 1, 3, -6),
        t(2, Cos, -2527.0 / 65536.0, 8, 2, -12),
        t(2, Cos, -12635.0 / 196608.0, 6, 4, -12),
        t(2, Cos, 629.0 / 4096.0, 6, 2, -10),
        t(2, Cos, 12635.0 / 196608.0, 4, 6, -12),
        t(2, Cos, -763.0 / 6144.0, 4, 2, -8),
        t(2, Cos, 2527.0 / 65536.0, 2, 8, -12),
        t(2, Cos, -629.0 / 4096.0, 2, 6, -10),
        t(2, Cos, 763.0 / 6144.0, 2, 4, -8),
        t(3, Cos, -2527.0 / 98304.0, 7, 3, -12),
        t(3, Cos, 629.0 / 12288.0, 5, 3, -10),
        t(3, Cos, 2527.0 / 98304.0, 3, 7, -12),
        t(3, Cos, -629.0 / 12288.0, 3, 5, -10),
        t(4, Cos, -2527.0 / 393216.0, 6, 4, -12),
        t(4, Cos, 2527.0 / 393216.0, 4, 6, -12),
    ],
];
