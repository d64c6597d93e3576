//! Closed loops λ(s) = (ω(s), ε(s)), s ∈ [0, 1], in the parameter plane.

use crate::dual::Params;
use crate::error::{Error, Result};
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

pub type Point = [f64; 2];

type CurveFn = Arc<dyn Fn(f64) -> Point + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopKind {
    Square,
    Ellipse,
    Polyline,
    Parametric,
}

#[derive(Clone)]
enum Shape {
    /// Closed polygon, vertices without the repeated first point, with
    /// cumulative arc-length fractions `knots` (first 0, last 1).
    Polyline { pts: Vec<Point>, knots: Vec<f64> },
    Ellipse { center: Point, semi: Point, phase: f64, dir: f64 },
    Parametric { f: CurveFn, df: Option<CurveFn>, breaks: Vec<f64> },
}

/// A closed parameter loop. Orientation follows increasing s.
#[derive(Clone)]
pub struct ParamLoop {
    kind: LoopKind,
    shape: Shape,
    /// (ω_min, ω_max, ε_min, ε_max) for squares, kept for the closed form.
    bounds: Option<[f64; 4]>,
    /// +1 as constructed, −1 after an odd number of reversals.
    orientation: f64,
}

impl fmt::Debug for ParamLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamLoop").field("kind", &self.kind).field("start", &self.eval(0.0)).finish()
    }
}

impl ParamLoop {
    /// Counter-clockwise rectangle in the (ω, ε) plane starting at the
    /// corner (ω_min, ε_min) and moving along increasing ω first.
    pub fn square(omega_min: f64, omega_max: f64, eps_min: f64, eps_max: f64) -> Result<Self> {
        let ok = omega_min > 0.0 && omega_max > omega_min && eps_min >= 0.0 && eps_max > eps_min;
        if !ok || ![omega_min, omega_max, eps_min, eps_max].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidLoop(format!(
                "square needs 0 < omega_min < omega_max and 0 <= eps_min < eps_max, got omega {omega_min}:{omega_max}, eps {eps_min}:{eps_max}"
            )));
        }
        let pts = vec![[omega_min, eps_min], [omega_max, eps_min], [omega_max, eps_max], [omega_min, eps_max]];
        let mut lp = Self::polyline(pts)?;
        lp.kind = LoopKind::Square;
        lp.bounds = Some([omega_min, omega_max, eps_min, eps_max]);
        Ok(lp)
    }

    /// ω = ω₀ + a_ω cos(2πs + phase), ε = ε₀ + a_ε sin(2πs + phase);
    /// counter-clockwise for positive semi-axes.
    pub fn ellipse(omega0: f64, eps0: f64, a_omega: f64, a_eps: f64, phase: f64) -> Result<Self> {
        if !(a_omega > 0.0 && a_eps > 0.0) || !phase.is_finite() {
            return Err(Error::InvalidLoop(format!("ellipse semi-axes must be positive, got ({a_omega}, {a_eps})")));
        }
        let lp = Self {
            kind: LoopKind::Ellipse,
            shape: Shape::Ellipse { center: [omega0, eps0], semi: [a_omega, a_eps], phase, dir: 1.0 },
            bounds: None,
            orientation: 1.0,
        };
        lp.validate()?;
        Ok(lp)
    }

    /// Closed polygon through `pts` (the closing edge back to `pts[0]` is
    /// implicit), parameterized by arc length.
    pub fn polyline(pts: Vec<Point>) -> Result<Self> {
        if pts.len() < 2 {
            return Err(Error::InvalidLoop("a polyline loop needs at least two vertices".into()));
        }
        let m = pts.len();
        let mut knots = vec![0.0];
        for k in 0..m {
            let (a, b) = (pts[k], pts[(k + 1) % m]);
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            if !(len > 0.0) {
                return Err(Error::InvalidLoop(format!("polyline edge {k} has zero or undefined length")));
            }
            knots.push(knots[k] + len);
        }
        let total = knots[m];
        for v in &mut knots {
            *v /= total;
        }
        knots[m] = 1.0;
        let lp = Self { kind: LoopKind::Polyline, shape: Shape::Polyline { pts, knots }, bounds: None, orientation: 1.0 };
        lp.validate()?;
        Ok(lp)
    }

    /// Arbitrary closed curve. Without `df` the velocity comes from central
    /// differences. `breaks` lists interior values of s where the curve is
    /// not smooth.
    pub fn parametric<F>(f: F, df: Option<CurveFn>, mut breaks: Vec<f64>) -> Result<Self>
    where
        F: Fn(f64) -> Point + Send + Sync + 'static,
    {
        breaks.retain(|&b| b > 0.0 && b < 1.0);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let lp = Self { kind: LoopKind::Parametric, shape: Shape::Parametric { f: Arc::new(f), df, breaks }, bounds: None, orientation: 1.0 };
        lp.validate()?;
        Ok(lp)
    }

    /// λ(s) ≡ (ω, ε).
    pub fn constant(omega: f64, eps: f64) -> Result<Self> {
        Self::parametric(move |_| [omega, eps], Some(Arc::new(|_| [0.0, 0.0])), vec![])
    }

    /// Same curve traversed the other way: λ_rev(s) = λ(1 − s).
    pub fn reversed(&self) -> Self {
        let shape = match &self.shape {
            Shape::Polyline { pts, .. } => {
                let mut rev: Vec<Point> = pts.clone();
                rev.reverse();
                rev.rotate_right(1);
                let shape = Self::polyline(rev).expect("reversal keeps validity").shape;
                return Self { shape, orientation: -self.orientation, ..self.clone() };
            }
            Shape::Ellipse { center, semi, phase, dir } => Shape::Ellipse { center: *center, semi: *semi, phase: *phase, dir: -dir },
            Shape::Parametric { f, df, breaks } => {
                let f = f.clone();
                let df = df.clone().map(|d| -> CurveFn {
                    Arc::new(move |s| {
                        let v = d(1.0 - s);
                        [-v[0], -v[1]]
                    })
                });
                Shape::Parametric {
                    f: Arc::new(move |s| f(1.0 - s)),
                    df,
                    breaks: breaks.iter().rev().map(|b| 1.0 - b).collect(),
                }
            }
        };
        Self { shape, orientation: -self.orientation, ..self.clone() }
    }

    /// +1 for the constructed orientation, −1 once reversed.
    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub fn kind(&self) -> LoopKind {
        self.kind
    }

    /// Rectangle bounds (ω_min, ω_max, ε_min, ε_max) for square loops.
    pub fn square_bounds(&self) -> Option<[f64; 4]> {
        self.bounds
    }

    /// λ(s), with s taken modulo 1.
    pub fn eval(&self, s: f64) -> Point {
        let s = wrap(s);
        match &self.shape {
            Shape::Polyline { pts, knots } => {
                let k = edge_index(knots, s);
                let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
                let u = (s - knots[k]) / (knots[k + 1] - knots[k]);
                [a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])]
            }
            Shape::Ellipse { center, semi, phase, dir } => {
                let (sn, cs) = (dir * TAU * s + phase).sin_cos();
                [center[0] + semi[0] * cs, center[1] + semi[1] * sn]
            }
            Shape::Parametric { f, .. } => f(s),
        }
    }

    /// dλ/ds; right-sided at corners.
    pub fn velocity(&self, s: f64) -> Point {
        let s = wrap(s);
        match &self.shape {
            Shape::Polyline { pts, knots } => {
                let k = edge_index(knots, s);
                let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
                let dl = knots[k + 1] - knots[k];
                [(b[0] - a[0]) / dl, (b[1] - a[1]) / dl]
            }
            Shape::Ellipse { semi, phase, dir, .. } => {
                let (sn, cs) = (dir * TAU * s + phase).sin_cos();
                [-semi[0] * sn * dir * TAU, semi[1] * cs * dir * TAU]
            }
            Shape::Parametric { f, df, breaks } => match df {
                Some(d) => d(s),
                None => {
                    // Fourth-order differences, kept inside the smooth piece.
                    let h = 1e-4;
                    let (lo, hi) = piece_around(breaks, s);
                    let c = s.clamp(lo + 2.0 * h, hi - 2.0 * h);
                    let c = if hi - lo > 4.0 * h { c } else { s };
                    let (a, b, cc, d) = (f(c - 2.0 * h), f(c - h), f(c + h), f(c + 2.0 * h));
                    let g = |i: usize| (a[i] - 8.0 * b[i] + 8.0 * cc[i] - d[i]) / (12.0 * h);
                    [g(0), g(1)]
                }
            },
        }
    }

    pub fn params_at(&self, s: f64) -> Params {
        let [omega, eps] = self.eval(s);
        Params { omega, eps }
    }

    /// 0, interior kinks in increasing order, 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Polyline { knots, .. } => knots.clone(),
            Shape::Ellipse { .. } => vec![0.0, 1.0],
            Shape::Parametric { breaks, .. } => {
                let mut v = vec![0.0];
                v.extend(breaks);
                v.push(1.0);
                v
            }
        }
    }

    /// Dense samples over one traversal, including every breakpoint.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        let mut s: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
        s.extend(self.breakpoints().iter().filter(|&&b| b < 1.0));
        s.sort_by(f64::total_cmp);
        s.dedup_by(|b, a| *b - *a <= 1e-12);
        s
    }

    /// Extremes of `g(λ(s))`, refined by golden-section search around the
    /// best samples.
    pub fn extremes<G: Fn(Point) -> f64>(&self, g: G) -> (f64, f64) {
        let s = self.samples(4096);
        let vals: Vec<f64> = s.iter().map(|&t| g(self.eval(t))).collect();
        let refine = |sign: f64| {
            let (k, _) = vals.iter().enumerate().max_by(|a, b| (sign * a.1).total_cmp(&(sign * b.1))).unwrap();
            let h = 1.0 / 4096.0;
            let (mut a, mut b) = (s[k] - h, s[k] + h);
            let r = 0.5 * (5f64.sqrt() - 1.0);
            let mut best = sign * vals[k];
            for _ in 0..60 {
                let c = b - r * (b - a);
                let d = a + r * (b - a);
                let (fc, fd) = (sign * g(self.eval(c)), sign * g(self.eval(d)));
                best = best.max(fc).max(fd);
                if fc > fd {
                    b = d;
                } else {
                    a = c;
                }
            }
            sign * best
        };
        (refine(-1.0), refine(1.0))
    }

    /// (min ω, max ω) along the loop.
    pub fn omega_range(&self) -> (f64, f64) {
        self.extremes(|p| p[0])
    }

    /// (min, max) of ε/ω along the loop.
    pub fn mu_range(&self) -> (f64, f64) {
        self.extremes(|p| p[1] / p[0])
    }

    /// Closure within 1e−12, ω > 0 and ε ≥ 0 at dense samples.
    pub fn validate(&self) -> Result<()> {
        let a = self.eval_raw(0.0);
        let b = self.eval_raw(1.0);
        let gap = (a[0] - b[0]).hypot(a[1] - b[1]);
        if !(gap <= 1e-12) {
            return Err(Error::InvalidLoop(format!("loop is not closed: |λ(1) − λ(0)| = {gap:e}")));
        }
        for s in self.samples(2048) {
            let [w, e] = self.eval(s);
            if !(w > 0.0 && e >= 0.0 && w.is_finite() && e.is_finite()) {
                return Err(Error::InvalidLoop(format!("λ({s}) = ({w}, {e}) leaves omega > 0, eps >= 0")));
            }
        }
        Ok(())
    }

    fn eval_raw(&self, s: f64) -> Point {
        match &self.shape {
            Shape::Parametric { f, .. } => f(s),
            _ if s == 1.0 => self.eval(0.0),
            _ => self.eval(s),
        }
    }

    /// Polygonal approximation of the curve: `n` uniform samples plus the
    /// breakpoints, without the closing point.
    pub fn polygon(&self, n: usize) -> Vec<Point> {
        self.samples(n).into_iter().map(|s| self.eval(s)).collect()
    }
}

fn wrap(s: f64) -> f64 {
    if (0.0..1.0).contains(&s) {
        s
    } else {
        let r = s.rem_euclid(1.0);
        if r >= 1.0 {
            0.0
        } else {
            r
        }
    }
}

fn edge_index(knots: &[f64], s: f64) -> usize {
    let m = knots.len() - 1;
    knots.partition_point(|&k| k <= s).saturating_sub(1).min(m - 1)
}

fn piece_around(breaks: &[f64], s: f64) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 1.0;
    for &b in breaks {
        if b <= s {
            lo = b;
        } else {
            hi = b;
            break;
        }
    }
    (lo, hi)
}
