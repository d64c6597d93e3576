//! Loop integrals φ_H = ∮ A·dλ of the averaged connection, by line
//! quadrature and, independently, by Green's theorem over the enclosed area.
//!
//! For the oscillator the connection is A = (−ε/(8ω²), 0), whose curl in
//! the (ω, ε) plane is ∂A₂/∂ω − ∂A₁/∂ε = 1/(8ω²).

use crate::error::{Error, Result};
use crate::loops::{LoopKind, ParamLoop, Point};
use crate::quad::{integrate, integrate_pieces, QuadConfig};

/// Reference value quoted for the square loop ω ∈ (0.6, 0.8), ε ∈ (0.1, 0.3).
pub const REFERENCE_SQUARE: f64 = 0.0104;
/// Reference value quoted for the ellipse centred at (0.8, 0.1) with
/// semi-axes (0.2, 0.1). It does not match the area integral; see
/// [`ellipse_closed_form`].
pub const REFERENCE_ELLIPSE: f64 = 0.0147;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    LineQuadrature,
    GreenTheorem,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopIntegralResult {
    pub phi_h: f64,
    pub method: Method,
    pub error_estimate: f64,
    /// Closed form, computed alongside the quadrature for square loops.
    pub closed_form: Option<f64>,
}

/// A = (−ε/(8ω²), 0).
pub fn vdp_connection(p: Point) -> Point {
    let [w, e] = p;
    [-e / (8.0 * w * w), 0.0]
}

/// curl A = 1/(8ω²).
pub fn vdp_curl(p: Point) -> f64 {
    1.0 / (8.0 * p[0] * p[0])
}

/// ∮ A·dλ around a counter-clockwise rectangle; only the two horizontal
/// edges contribute.
pub fn square_closed_form(omega_min: f64, omega_max: f64, eps_min: f64, eps_max: f64) -> f64 {
    (eps_max - eps_min) / 8.0 * (1.0 / omega_min - 1.0 / omega_max)
}

/// Area integral of 1/(8ω²) over the ellipse with centre ω₀ and semi-axes
/// (a_ω, a_ε): (π a_ε / (4 a_ω)) (ω₀/√(ω₀² − a_ω²) − 1).
pub fn ellipse_closed_form(omega0: f64, a_omega: f64, a_eps: f64) -> f64 {
    std::f64::consts::PI * a_eps / (4.0 * a_omega) * (omega0 / (omega0 * omega0 - a_omega * a_omega).sqrt() - 1.0)
}

/// ∮ A·dλ by adaptive Gauss–Kronrod quadrature over the smooth pieces of
/// the loop, absolute tolerance 1e−10. Square loops also carry the closed
/// form.
pub fn hannay_angle<C: Fn(Point) -> Point>(lp: &ParamLoop, conn: C) -> Result<LoopIntegralResult> {
    let cfg = QuadConfig::abs(1e-10);
    let r = integrate_pieces(
        |s| {
            let a = conn(lp.eval(s));
            let v = lp.velocity(s);
            a[0] * v[0] + a[1] * v[1]
        },
        &lp.breakpoints(),
        &cfg,
    )?;
    let closed_form = match (lp.kind(), lp.square_bounds()) {
        (LoopKind::Square, Some([w0, w1, e0, e1])) => Some(lp.orientation() * square_closed_form(w0, w1, e0, e1)),
        _ => None,
    };
    Ok(LoopIntegralResult { phi_h: r.value, method: Method::LineQuadrature, error_estimate: r.abs_err, closed_form })
}

/// [`hannay_angle`] with the oscillator connection.
pub fn hannay_angle_vdp(lp: &ParamLoop) -> Result<LoopIntegralResult> {
    hannay_angle(lp, vdp_connection)
}

/// ∬ curl A dω dε over the region enclosed by a simple loop, signed by its
/// orientation (positive when counter-clockwise).
///
/// The region is covered by the cone map (s, ρ) ↦ c + ρ(λ(s) − c) about the
/// centroid c of the boundary, with Jacobian ρ (λ − c) × λ′, so the region
/// must be star-shaped about c.
pub fn green_theorem_oracle<C: Fn(Point) -> f64>(lp: &ParamLoop, curl: C) -> Result<LoopIntegralResult> {
    let poly = lp.polygon(1024);
    if !is_simple(&poly) {
        return Err(Error::NonSimpleLoop);
    }
    let n = poly.len() as f64;
    let c = [poly.iter().map(|p| p[0]).sum::<f64>() / n, poly.iter().map(|p| p[1]).sum::<f64>() / n];
    let jac = |s: f64| {
        let p = lp.eval(s);
        let v = lp.velocity(s);
        (p[0] - c[0]) * v[1] - (p[1] - c[1]) * v[0]
    };
    // Star-shaped about c: the cross product keeps one sign.
    let scale = poly.iter().map(|p| (p[0] - c[0]).hypot(p[1] - c[1])).fold(0.0, f64::max);
    let js: Vec<f64> = lp.samples(4096).into_iter().map(&jac).collect();
    let tiny = 1e-12 * scale * scale;
    if js.iter().any(|&j| j > tiny) && js.iter().any(|&j| j < -tiny) {
        return Err(Error::InvalidLoop("enclosed region is not star-shaped about its centroid".into()));
    }
    let inner = QuadConfig { abs_tol: 1e-14, rel_tol: 1e-13, ..QuadConfig::default() };
    let mut inner_err = 0.0f64;
    let mut failure = None;
    let outer = integrate_pieces(
        |s| {
            let j = jac(s);
            if j == 0.0 {
                return 0.0;
            }
            let p = lp.eval(s);
            let r = integrate(|rho| curl([c[0] + rho * (p[0] - c[0]), c[1] + rho * (p[1] - c[1])]) * rho, 0.0, 1.0, &inner);
            match r {
                Ok(r) => {
                    inner_err = inner_err.max(r.abs_err * j.abs());
                    r.value * j
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        &lp.breakpoints(),
        &QuadConfig::abs(1e-11),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let r = outer?;
    Ok(LoopIntegralResult {
        phi_h: r.value,
        method: Method::GreenTheorem,
        error_estimate: r.abs_err + inner_err,
        closed_form: None,
    })
}

/// [`green_theorem_oracle`] with curl 1/(8ω²).
pub fn green_theorem_vdp(lp: &ParamLoop) -> Result<LoopIntegralResult> {
    green_theorem_oracle(lp, vdp_curl)
}

pub fn make_square_loop(omega_min: f64, omega_max: f64, eps_min: f64, eps_max: f64) -> Result<ParamLoop> {
    ParamLoop::square(omega_min, omega_max, eps_min, eps_max)
}

pub fn make_ellipse_loop(omega0: f64, eps0: f64, a_omega: f64, a_eps: f64, phase: f64) -> Result<ParamLoop> {
    ParamLoop::ellipse(omega0, eps0, a_omega, a_eps, phase)
}

/// No two non-adjacent edges of the closed polygon meet.
fn is_simple(poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let edge = |k: usize| (poly[k], poly[(k + 1) % n]);
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            if segments_meet(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_meet(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (d1, d2) = (cross(c, d, a), cross(c, d, b));
    let (d3, d4) = (cross(a, b, c), cross(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |p: Point, q: Point, r: Point| {
        r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
    };
    (d1 == 0.0 && on(c, d, a)) || (d2 == 0.0 && on(c, d, b)) || (d3 == 0.0 && on(a, b, c)) || (d4 == 0.0 && on(a, b, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn square() -> ParamLoop {
        make_square_loop(0.6, 0.8, 0.1, 0.3).unwrap()
    }

    fn ellipse() -> ParamLoop {
        make_ellipse_loop(0.8, 0.1, 0.2, 0.1, 0.0).unwrap()
    }

    #[test]
    fn square_quadrature_and_closed_form() {
        let r = hannay_angle_vdp(&square()).unwrap();
        let cf = r.closed_form.unwrap();
        assert!((cf - 0.2 / 8.0 * (1.0 / 0.6 - 1.0 / 0.8)).abs() < 1e-16);
        assert!((cf - 0.01041667).abs() < 5e-9);
        assert!((r.phi_h - cf).abs() <= 1e-8, "{} vs {cf}", r.phi_h);
        assert!((r.phi_h - REFERENCE_SQUARE).abs() <= 5e-5);
    }

    #[test]
    fn square_green_matches() {
        let g = green_theorem_vdp(&square()).unwrap();
        assert!((g.phi_h - 0.2 / 8.0 * (1.0 / 0.6 - 1.0 / 0.8)).abs() <= 1e-8, "{}", g.phi_h);
    }

    #[test]
    fn ellipse_area_integral() {
        let exact = PI / 8.0 * (4.0 / 15f64.sqrt() - 1.0);
        assert!((ellipse_closed_form(0.8, 0.2, 0.1) - exact).abs() < 1e-15);
        assert!((exact - 0.012879).abs() < 5e-7);
        let g = green_theorem_vdp(&ellipse()).unwrap();
        let l = hannay_angle_vdp(&ellipse()).unwrap();
        assert!((g.phi_h - exact).abs() < 1e-9, "{}", g.phi_h);
        assert!((l.phi_h - exact).abs() < 1e-9, "{}", l.phi_h);
        assert!((l.phi_h - g.phi_h).abs() <= 1e-8f64.max(l.error_estimate).max(g.error_estimate));
    }

    #[test]
    fn area_integral_by_substitution() {
        // ∫₋₁¹ √(1 − u²)/(4 + u)² du = π(4/√15 − 1), computed in u.
        let v = integrate(|u: f64| (1.0 - u * u).max(0.0).sqrt() / (4.0 + u).powi(2), -1.0, 1.0, &QuadConfig::abs(1e-13)).unwrap();
        assert!((v.value - PI * (4.0 / 15f64.sqrt() - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn reversal_flips_sign() {
        for lp in [square(), ellipse()] {
            let f = hannay_angle_vdp(&lp).unwrap();
            let b = hannay_angle_vdp(&lp.reversed()).unwrap();
            assert!((f.phi_h + b.phi_h).abs() < 1e-12);
            let g = green_theorem_vdp(&lp.reversed()).unwrap();
            assert!((g.phi_h + f.phi_h).abs() < 1e-9);
        }
        let r = hannay_angle_vdp(&square().reversed()).unwrap();
        assert!((r.closed_form.unwrap() + square_closed_form(0.6, 0.8, 0.1, 0.3)).abs() < 1e-16);
    }

    #[test]
    fn zero_area_segment() {
        let seg = ParamLoop::polyline(vec![[0.6, 0.1], [0.9, 0.4]]).unwrap();
        assert!(hannay_angle_vdp(&seg).unwrap().phi_h.abs() <= 1e-12);
        assert!(matches!(green_theorem_vdp(&seg), Err(Error::NonSimpleLoop)));
    }

    #[test]
    fn figure_eight_is_rejected_and_additive() {
        // Two squares sharing the edge ω = 0.7, and the figure-eight through both lobes.
        let left = ParamLoop::polyline(vec![[0.6, 0.1], [0.7, 0.1], [0.7, 0.3], [0.6, 0.3]]).unwrap();
        let right = ParamLoop::polyline(vec![[0.7, 0.1], [0.8, 0.1], [0.8, 0.3], [0.7, 0.3]]).unwrap();
        let whole = hannay_angle_vdp(&square()).unwrap().phi_h;
        let sum = hannay_angle_vdp(&left).unwrap().phi_h + hannay_angle_vdp(&right).unwrap().phi_h;
        assert!((whole - sum).abs() <= 1e-9);
        let eight = ParamLoop::polyline(vec![[0.6, 0.1], [0.8, 0.3], [0.8, 0.1], [0.6, 0.3]]).unwrap();
        assert!(matches!(green_theorem_vdp(&eight), Err(Error::NonSimpleLoop)));
        let lobes = hannay_angle_vdp(&eight).unwrap().phi_h;
        let west = ParamLoop::polyline(vec![[0.7, 0.2], [0.6, 0.3], [0.6, 0.1]]).unwrap();
        let east = ParamLoop::polyline(vec![[0.7, 0.2], [0.8, 0.3], [0.8, 0.1]]).unwrap();
        let parts = hannay_angle_vdp(&west).unwrap().phi_h + hannay_angle_vdp(&east).unwrap().phi_h;
        assert!((lobes - parts).abs() <= 1e-9, "{lobes} vs {parts}");
    }

    #[test]
    fn reparameterization_invariance() {
        // Same ellipse traversed with a non-uniform speed s ↦ s + 0.08 sin 2πs.
        let warp = |s: f64| s + 0.08 * (TAU * s).sin();
        let lp = ParamLoop::parametric(
            move |s| {
                let u = TAU * warp(s);
                [0.8 + 0.2 * u.cos(), 0.1 + 0.1 * u.sin()]
            },
            None,
            vec![],
        )
        .unwrap();
        let a = hannay_angle_vdp(&lp).unwrap().phi_h;
        let b = hannay_angle_vdp(&ellipse()).unwrap().phi_h;
        assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
    }

    #[test]
    fn non_star_region_is_refused() {
        // A thin U-shape, simple but not star-shaped about its centroid.
        let u = ParamLoop::polyline(vec![
            [0.6, 0.1],
            [0.9, 0.1],
            [0.9, 0.5],
            [0.85, 0.5],
            [0.85, 0.15],
            [0.65, 0.15],
            [0.65, 0.5],
            [0.6, 0.5],
        ])
        .unwrap();
        assert!(green_theorem_vdp(&u).is_err());
        assert!(hannay_angle_vdp(&u).is_ok());
    }

    #[test]
    fn green_agrees_with_line_on_random_ellipses() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let w0 = rng.random_range(0.5..1.5);
            let aw = rng.random_range(0.05..0.4) * w0;
            let e0 = rng.random_range(0.2..0.5);
            let ae = rng.random_range(0.05..0.19);
            let ph = rng.random_range(0.0..TAU);
            let lp = make_ellipse_loop(w0, e0, aw, ae, ph).unwrap();
            let l = hannay_angle_vdp(&lp).unwrap();
            let g = green_theorem_vdp(&lp).unwrap();
            assert!((l.phi_h - g.phi_h).abs() <= 1e-8f64.max(l.error_estimate).max(g.error_estimate));
            assert!((g.phi_h - ellipse_closed_form(w0, aw, ae)).abs() < 1e-9);
        }
    }
}
