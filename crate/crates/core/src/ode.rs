//! Adaptive Dormand–Prince 8(5,3) integration with 7th-order dense output.
//!
//! The stepper follows Hairer's DOP853: twelve stages per attempted step,
//! the 5th-order embedded error estimate in the max norm, PI ("Lund") step
//! control and three extra stages for the continuous extension. Dense
//! output is assembled lazily, so streaming callers that never interpolate
//! do not pay for it.
//!
//! ```
//! use hannay_vdp::ode::{integrate, IntegratorConfig};
//!
//! let traj = integrate(|_t, y, dy| dy[0] = y[0], &[1.0], 0.0, 1.0, &IntegratorConfig::default()).unwrap();
//! let e = traj.last_state()[0];
//! assert!((e - std::f64::consts::E).abs() < 1e-10 * std::f64::consts::E);
//! ```

// Stage arithmetic mixes several arrays per component; indices read clearer.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

/// Tolerances and step limits. Defaults are `rel_tol = abs_tol = 1e-10`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step size; `f64::INFINITY` means unbounded.
    pub max_step: f64,
    /// First trial step; `None` lets the solver pick one.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_step: f64::INFINITY,
            initial_step: None,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorConfig {
    /// Same relative and absolute tolerance.
    pub fn with_tol(tol: f64) -> Self {
        Self { rel_tol: tol, abs_tol: tol, ..Self::default() }
    }

    pub fn max_step(mut self, h: f64) -> Self {
        self.max_step = h;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v <= 0.1;
        if !ok(self.rel_tol) || !ok(self.abs_tol) {
            return Err(Error::InvalidConfig(format!(
                "tolerances must lie in (0, 0.1], got rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::InvalidConfig("max_step must be positive".into()));
        }
        if let Some(h) = self.initial_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidConfig("initial_step must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Counters for one integration run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evals: usize,
}

/// Continuous extension over one accepted step `[t0, t0 + h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    n: usize,
    /// Eight coefficient blocks of length `n`, stored contiguously.
    coef: Vec<f64>,
}

impl DenseSegment {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Interpolated state at `t`; meaningful for `t` inside the step.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let n = self.n;
        let c = &self.coef;
        for i in 0..n {
            let conpar = c[4 * n + i] + s * (c[5 * n + i] + s1 * (c[6 * n + i] + s * c[7 * n + i]));
            out[i] = c[i] + s * (c[n + i] + s1 * (c[2 * n + i] + s * (c[3 * n + i] + s1 * conpar)));
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.eval_into(t, &mut out);
        out
    }
}

/// Accepted step endpoints plus the dense extension of every step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub segments: Vec<DenseSegment>,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn last_state(&self) -> &[f64] {
        self.states.last().expect("trajectory always holds the initial state")
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Dense evaluation; `t` is clamped to the covered interval.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        if self.segments.is_empty() {
            return self.states[0].clone();
        }
        let t = t.clamp(self.t_start(), self.t_end());
        let idx = self.times.partition_point(|&ti| ti <= t).saturating_sub(1);
        let idx = idx.min(self.segments.len() - 1);
        self.segments[idx].eval(t)
    }
}

/// Integrates `rhs` from `t0` to `t1` and keeps every step with its dense
/// extension.
pub fn integrate<F>(rhs: F, y0: &[f64], t0: f64, t1: f64, cfg: &IntegratorConfig) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut st = Dop853::new(rhs, t0, y0, t1, cfg)?;
    let mut times = vec![t0];
    let mut states = vec![y0.to_vec()];
    let mut segments = Vec::new();
    while !st.done() {
        st.step()?;
        segments.push(st.dense());
        times.push(st.t());
        states.push(st.y().to_vec());
    }
    Ok(Trajectory { times, states, segments, stats: st.stats() })
}

// Butcher tableau of DOP853.
const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;
const C14: f64 = 0.1E+00;
const C15: f64 = 0.2E+00;
const C16: f64 = 0.777777777777777777777777777778E+00;

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;
const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;


const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

const D41: f64 = -0.84289382761090128651353491142E+01;
const D46: f64 = 0.56671495351937776962531783590E+00;
const D47: f64 = -0.30689499459498916912797304727E+01;
const D48: f64 = 0.23846676565120698287728149680E+01;
const D49: f64 = 0.21170345824450282767155149946E+01;
const D410: f64 = -0.87139158377797299206789907490E+00;
const D411: f64 = 0.22404374302607882758541771650E+01;
const D412: f64 = 0.63157877876946881815570249290E+00;
const D413: f64 = -0.88990336451333310820698117400E-01;
const D414: f64 = 0.18148505520854727256656404962E+02;
const D415: f64 = -0.91946323924783554000451984436E+01;
const D416: f64 = -0.44360363875948939664310572000E+01;
const D51: f64 = 0.10427508642579134603413151009E+02;
const D56: f64 = 0.24228349177525818288430175319E+03;
const D57: f64 = 0.16520045171727028198505394887E+03;
const D58: f64 = -0.37454675472269020279518312152E+03;
const D59: f64 = -0.22113666853125306036270938578E+02;
const D510: f64 = 0.77334326684722638389603898808E+01;
const D511: f64 = -0.30674084731089398182061213626E+02;
const D512: f64 = -0.93321305264302278729567221706E+01;
const D513: f64 = 0.15697238121770843886131091075E+02;
const D514: f64 = -0.31139403219565177677282850411E+02;
const D515: f64 = -0.93529243588444783865713862664E+01;
const D516: f64 = 0.35816841486394083752465898540E+02;
const D61: f64 = 0.19985053242002433820987653617E+02;
const D66: f64 = -0.38703730874935176555105901742E+03;
const D67: f64 = -0.18917813819516756882830838328E+03;
const D68: f64 = 0.52780815920542364900561016686E+03;
const D69: f64 = -0.11573902539959630126141871134E+02;
const D610: f64 = 0.68812326946963000169666922661E+01;
const D611: f64 = -0.10006050966910838403183860980E+01;
const D612: f64 = 0.77771377980534432092869265740E+00;
const D613: f64 = -0.27782057523535084065932004339E+01;
const D614: f64 = -0.60196695231264120758267380846E+02;
const D615: f64 = 0.84320405506677161018159903784E+02;
const D616: f64 = 0.11992291136182789328035130030E+02;
const D71: f64 = -0.25693933462703749003312586129E+02;
const D76: f64 = -0.15418974869023643374053993627E+03;
const D77: f64 = -0.23152937917604549567536039109E+03;
const D78: f64 = 0.35763911791061412378285349910E+03;
const D79: f64 = 0.93405324183624310003907691704E+02;
const D710: f64 = -0.37458323136451633156875139351E+02;
const D711: f64 = 0.10409964950896230045147246184E+03;
const D712: f64 = 0.29840293426660503123344363579E+02;
const D713: f64 = -0.43533456590011143754432175058E+02;
const D714: f64 = 0.96324553959188282948394950600E+02;
const D715: f64 = -0.39177261675615439165231486172E+02;
const D716: f64 = -0.14972683625798562581422125276E+03;

const SAFE: f64 = 0.9;
const FAC1: f64 = 0.333;
const FAC2: f64 = 6.0;
const BETA: f64 = 0.04;
const EXPO1: f64 = 1.0 / 8.0 - BETA * 0.2;

/// Streaming DOP853 stepper. Call [`Dop853::step`] until [`Dop853::done`];
/// between steps the last accepted step can be interpolated through
/// [`Dop853::dense`].
pub struct Dop853<F> {
    rhs: F,
    cfg: IntegratorConfig,
    n: usize,
    t: f64,
    t_end: f64,
    min_step: f64,
    h: f64,
    y: Vec<f64>,
    k1: Vec<f64>,
    k: [Vec<f64>; 9], // k2..k10
    ynew: Vec<f64>,
    knew: Vec<f64>,
    ystage: Vec<f64>,
    facold: f64,
    last_rejected: bool,
    // Last accepted step, kept for dense output.
    t_old: f64,
    h_old: f64,
    y_old: Vec<f64>,
    k_old: Vec<f64>,
    dense_ready: bool,
    dense_cache: Option<DenseSegment>,
    stats: StepStats,
}

impl<F> Dop853<F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    pub fn new(mut rhs: F, t0: f64, y0: &[f64], t_end: f64, cfg: &IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        if !(t_end > t0) {
            return Err(Error::InvalidConfig(format!("need t1 > t0, got [{t0}, {t_end}]")));
        }
        if y0.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: t0 });
        }
        let n = y0.len();
        let mut k1 = vec![0.0; n];
        rhs(t0, y0, &mut k1);
        if k1.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: t0 });
        }
        let z = || vec![0.0; n];
        let mut st = Self {
            rhs,
            cfg: *cfg,
            n,
            t: t0,
            t_end,
            min_step: 1e-14 * (t_end - t0),
            h: 0.0,
            y: y0.to_vec(),
            k1,
            k: std::array::from_fn(|_| z()),
            ynew: z(),
            knew: z(),
            ystage: z(),
            facold: 1e-4,
            last_rejected: false,
            t_old: t0,
            h_old: 0.0,
            y_old: z(),
            k_old: z(),
            dense_ready: false,
            dense_cache: None,
            stats: StepStats { evals: 1, ..StepStats::default() },
        };
        st.h = match cfg.initial_step {
            Some(h) => h.min(cfg.max_step),
            None => st.initial_step(),
        };
        Ok(st)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Derivative at the current point.
    pub fn dydt(&self) -> &[f64] {
        &self.k1
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn done(&self) -> bool {
        self.t >= self.t_end
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    /// Start of the last accepted step.
    pub fn t_prev(&self) -> f64 {
        self.t_old
    }

    pub fn y_prev(&self) -> &[f64] {
        &self.y_old
    }

    fn initial_step(&mut self) -> f64 {
        let n = self.n;
        let (rtol, atol) = (self.cfg.rel_tol, self.cfg.abs_tol);
        let mut dnf = 0.0;
        let mut dny = 0.0;
        for i in 0..n {
            let sk = atol + rtol * self.y[i].abs();
            dnf += (self.k1[i] / sk).powi(2);
            dny += (self.y[i] / sk).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { (dny / dnf).sqrt() * 0.01 };
        h = h.min(self.cfg.max_step).min(self.t_end - self.t);
        for i in 0..n {
            self.ystage[i] = self.y[i] + h * self.k1[i];
        }
        let mut f = vec![0.0; n];
        (self.rhs)(self.t + h, &self.ystage, &mut f);
        self.stats.evals += 1;
        let mut der2 = 0.0;
        for i in 0..n {
            let sk = atol + rtol * self.y[i].abs();
            der2 += ((f[i] - self.k1[i]) / sk).powi(2);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.abs().max(dnf.sqrt());
        let h1 = if !der12.is_finite() {
            h * 1e-3
        } else if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(1.0 / 8.0)
        };
        (100.0 * h).min(h1).min(self.cfg.max_step)
    }

    /// Advances by one accepted step.
    pub fn step(&mut self) -> Result<()> {
        if self.done() {
            return Ok(());
        }
        let n = self.n;
        loop {
            if self.stats.accepted + self.stats.rejected >= self.cfg.max_steps {
                return Err(Error::TooManySteps(self.cfg.max_steps));
            }
            let mut h = self.h.min(self.cfg.max_step);
            let remaining = self.t_end - self.t;
            if self.t + 1.01 * h >= self.t_end {
                h = remaining;
            } else if h < self.min_step {
                return Err(Error::StepUnderflow { t: self.t, h });
            }
            self.h = h;
            self.stages(h);
            let t_new = self.t + h;

            // Error estimate: the 5th-order embedded difference in the max
            // norm, so every component meets its own tolerance. Hairer's
            // damping by the 3rd-order estimate is left out; it lets the
            // energy of long oscillatory runs drift past the tolerance.
            let mut err: f64 = 0.0;
            let k = &self.k;
            for i in 0..n {
                let sk = self.cfg.abs_tol + self.cfg.rel_tol * self.y[i].abs().max(self.ynew[i].abs());
                let e = ER1 * self.k1[i]
                    + ER6 * k[4][i]
                    + ER7 * k[5][i]
                    + ER8 * k[6][i]
                    + ER9 * k[7][i]
                    + ER10 * k[8][i]
                    + ER11 * k[0][i]
                    + ER12 * k[1][i];
                err = err.max((e / sk).abs());
            }
            let err = h.abs() * err;

            if !err.is_finite() || self.ynew.iter().any(|v| !v.is_finite()) {
                // Treat as a hard rejection and retry with a much smaller step.
                self.stats.rejected += 1;
                self.last_rejected = true;
                self.h = h * 0.1;
                if self.h < self.min_step {
                    return Err(Error::NonFinite { t: self.t });
                }
                continue;
            }

            let fac11 = err.powf(EXPO1);
            let fac = fac11 / self.facold.powf(BETA);
            let fac = (1.0 / FAC2).max((1.0 / FAC1).min(fac / SAFE));
            let mut h_new = h / fac;

            if err <= 1.0 {
                self.facold = err.max(1e-4);
                self.stats.accepted += 1;
                // knew currently holds the b-combination; overwrite with f(t_new, y_new)
                let mut fnew = std::mem::take(&mut self.knew);
                (self.rhs)(t_new, &self.ynew, &mut fnew);
                self.knew = fnew;
                self.stats.evals += 1;
                if self.knew.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { t: t_new });
                }
                std::mem::swap(&mut self.y_old, &mut self.y);
                std::mem::swap(&mut self.k_old, &mut self.k1);
                self.t_old = self.t;
                self.h_old = h;
                self.y.copy_from_slice(&self.ynew);
                self.k1.copy_from_slice(&self.knew);
                self.t = if h == remaining { self.t_end } else { t_new };
                if self.last_rejected {
                    h_new = h_new.min(h);
                }
                self.last_rejected = false;
                self.h = h_new.min(self.cfg.max_step);
                self.dense_ready = false;
                self.dense_cache = None;
                return Ok(());
            }
            self.last_rejected = true;
            self.stats.rejected += 1;
            self.h = h / (1.0 / FAC1).min(fac11 / SAFE);
            if self.h < self.min_step && self.t + 1.01 * self.h < self.t_end {
                return Err(Error::StepUnderflow { t: self.t, h: self.h });
            }
        }
    }

    fn stages(&mut self, h: f64) {
        let n = self.n;
        let t = self.t;
        let y = &self.y;
        let k1 = &self.k1;
        let ys = &mut self.ystage;
        let [k2, k3, k4, k5, k6, k7, k8, k9, k10] = &mut self.k;
        let f = &mut self.rhs;

        for i in 0..n {
            ys[i] = y[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, ys, k2);
        for i in 0..n {
            ys[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, ys, k3);
        for i in 0..n {
            ys[i] = y[i] + h * (A41 * k1[i] + A43 * k3[i]);
        }
        f(t + C4 * h, ys, k4);
        for i in 0..n {
            ys[i] = y[i] + h * (A51 * k1[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, ys, k5);
        for i in 0..n {
            ys[i] = y[i] + h * (A61 * k1[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + C6 * h, ys, k6);
        for i in 0..n {
            ys[i] = y[i] + h * (A71 * k1[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(t + C7 * h, ys, k7);
        for i in 0..n {
            ys[i] = y[i] + h * (A81 * k1[i] + A84 * k4[i] + A85 * k5[i] + A86 * k6[i] + A87 * k7[i]);
        }
        f(t + C8 * h, ys, k8);
        for i in 0..n {
            ys[i] = y[i]
                + h * (A91 * k1[i] + A94 * k4[i] + A95 * k5[i] + A96 * k6[i] + A97 * k7[i] + A98 * k8[i]);
        }
        f(t + C9 * h, ys, k9);
        for i in 0..n {
            ys[i] = y[i]
                + h * (A101 * k1[i]
                    + A104 * k4[i]
                    + A105 * k5[i]
                    + A106 * k6[i]
                    + A107 * k7[i]
                    + A108 * k8[i]
                    + A109 * k9[i]);
        }
        f(t + C10 * h, ys, k10);
        for i in 0..n {
            ys[i] = y[i]
                + h * (A111 * k1[i]
                    + A114 * k4[i]
                    + A115 * k5[i]
                    + A116 * k6[i]
                    + A117 * k7[i]
                    + A118 * k8[i]
                    + A119 * k9[i]
                    + A1110 * k10[i]);
        }
        // Hairer's storage trick: stage 11 lands in k2, stage 12 in k3.
        f(t + C11 * h, ys, k2);
        for i in 0..n {
            ys[i] = y[i]
                + h * (A121 * k1[i]
                    + A124 * k4[i]
                    + A125 * k5[i]
                    + A126 * k6[i]
                    + A127 * k7[i]
                    + A128 * k8[i]
                    + A129 * k9[i]
                    + A1210 * k10[i]
                    + A1211 * k2[i]);
        }
        f(t + h, ys, k3);
        for i in 0..n {
            let b = B1 * k1[i]
                + B6 * k6[i]
                + B7 * k7[i]
                + B8 * k8[i]
                + B9 * k9[i]
                + B10 * k10[i]
                + B11 * k2[i]
                + B12 * k3[i];
            self.knew[i] = b;
            self.ynew[i] = y[i] + h * b;
        }
        self.stats.evals += 11;
    }

    /// Continuous extension of the last accepted step. Costs three extra
    /// right-hand-side evaluations the first time it is requested.
    pub fn dense(&mut self) -> DenseSegment {
        if let Some(seg) = &self.dense_cache {
            return seg.clone();
        }
        assert!(self.stats.accepted > 0, "dense output requested before the first step");
        let n = self.n;
        let h = self.h_old;
        let t = self.t_old;
        let mut c = vec![0.0; 8 * n];
        let [k2, k3, _k4, _k5, k6, k7, k8, k9, k10] = &mut self.k;
        let k_old = &self.k_old;
        let knew = &self.knew;
        let y_old = &self.y_old;
        for i in 0..n {
            let ydiff = self.y[i] - y_old[i];
            let bspl = h * k_old[i] - ydiff;
            c[i] = y_old[i];
            c[n + i] = ydiff;
            c[2 * n + i] = bspl;
            c[3 * n + i] = ydiff - h * knew[i] - bspl;
            c[4 * n + i] = D41 * k_old[i]
                + D46 * k6[i]
                + D47 * k7[i]
                + D48 * k8[i]
                + D49 * k9[i]
                + D410 * k10[i]
                + D411 * k2[i]
                + D412 * k3[i];
            c[5 * n + i] = D51 * k_old[i]
                + D56 * k6[i]
                + D57 * k7[i]
                + D58 * k8[i]
                + D59 * k9[i]
                + D510 * k10[i]
                + D511 * k2[i]
                + D512 * k3[i];
            c[6 * n + i] = D61 * k_old[i]
                + D66 * k6[i]
                + D67 * k7[i]
                + D68 * k8[i]
                + D69 * k9[i]
                + D610 * k10[i]
                + D611 * k2[i]
                + D612 * k3[i];
            c[7 * n + i] = D71 * k_old[i]
                + D76 * k6[i]
                + D77 * k7[i]
                + D78 * k8[i]
                + D79 * k9[i]
                + D710 * k10[i]
                + D711 * k2[i]
                + D712 * k3[i];
        }
        let ys = &mut self.ystage;
        let f = &mut self.rhs;
        for i in 0..n {
            ys[i] = y_old[i]
                + h * (A141 * k_old[i]
                    + A147 * k7[i]
                    + A148 * k8[i]
                    + A149 * k9[i]
                    + A1410 * k10[i]
                    + A1411 * k2[i]
                    + A1412 * k3[i]
                    + A1413 * knew[i]);
        }
        f(t + C14 * h, ys, k10);
        for i in 0..n {
            ys[i] = y_old[i]
                + h * (A151 * k_old[i]
                    + A156 * k6[i]
                    + A157 * k7[i]
                    + A158 * k8[i]
                    + A1511 * k2[i]
                    + A1512 * k3[i]
                    + A1513 * knew[i]
                    + A1514 * k10[i]);
        }
        f(t + C15 * h, ys, k2);
        for i in 0..n {
            ys[i] = y_old[i]
                + h * (A161 * k_old[i]
                    + A166 * k6[i]
                    + A167 * k7[i]
                    + A168 * k8[i]
                    + A169 * k9[i]
                    + A1613 * knew[i]
                    + A1614 * k10[i]
                    + A1615 * k2[i]);
        }
        f(t + C16 * h, ys, k3);
        self.stats.evals += 3;
        for i in 0..n {
            c[4 * n + i] = h * (c[4 * n + i] + D413 * knew[i] + D414 * k10[i] + D415 * k2[i] + D416 * k3[i]);
            c[5 * n + i] = h * (c[5 * n + i] + D513 * knew[i] + D514 * k10[i] + D515 * k2[i] + D516 * k3[i]);
            c[6 * n + i] = h * (c[6 * n + i] + D613 * knew[i] + D614 * k10[i] + D615 * k2[i] + D616 * k3[i]);
            c[7 * n + i] = h * (c[7 * n + i] + D713 * knew[i] + D714 * k10[i] + D715 * k2[i] + D716 * k3[i]);
        }
        self.dense_ready = true;
        let seg = DenseSegment { t0: t, h, n, coef: c };
        self.dense_cache = Some(seg.clone());
        seg
    }
}

/// Which sign changes of an event function count as crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Rising,
    Falling,
    Any,
}

impl Direction {
    fn accepts(self, ga: f64, gb: f64) -> bool {
        let rising = ga < 0.0 && gb >= 0.0;
        let falling = ga > 0.0 && gb <= 0.0;
        match self {
            Direction::Rising => rising,
            Direction::Falling => falling,
            Direction::Any => rising || falling,
        }
    }
}

/// An event location on a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub t: f64,
    pub state: Vec<f64>,
}

/// Sub-intervals probed per step when looking for sign changes.
const PROBES_PER_STEP: usize = 4;

/// Locates the sign changes of `g(t, y)` along `traj`, refined on the
/// dense output by bisection and one final secant step.
///
/// A zero of `g` exactly at the initial time is not reported.
pub fn find_crossings<G>(traj: &Trajectory, mut g: G, dir: Direction) -> Vec<Crossing>
where
    G: FnMut(f64, &[f64]) -> f64,
{
    let mut out = Vec::new();
    for seg in &traj.segments {
        out.extend(crossings_in_segment(seg, &mut g, dir));
    }
    out
}

/// Crossings inside a single dense segment.
pub fn crossings_in_segment<G>(seg: &DenseSegment, g: &mut G, dir: Direction) -> Vec<Crossing>
where
    G: FnMut(f64, &[f64]) -> f64,
{
    let mut out = Vec::new();
    let mut buf = vec![0.0; seg.dim()];
    let mut ta = seg.t0;
    seg.eval_into(ta, &mut buf);
    let mut ga = g(ta, &buf);
    for j in 1..=PROBES_PER_STEP {
        let tb = if j == PROBES_PER_STEP { seg.t1() } else { seg.t0 + seg.h * j as f64 / PROBES_PER_STEP as f64 };
        seg.eval_into(tb, &mut buf);
        let gb = g(tb, &buf);
        if dir.accepts(ga, gb) {
            let t = refine_root(seg, g, ta, tb, ga, gb);
            out.push(Crossing { t, state: seg.eval(t) });
        }
        ta = tb;
        ga = gb;
    }
    out
}

fn refine_root<G>(seg: &DenseSegment, g: &mut G, mut a: f64, mut b: f64, mut ga: f64, mut gb: f64) -> f64
where
    G: FnMut(f64, &[f64]) -> f64,
{
    let mut buf = vec![0.0; seg.dim()];
    let tol = 1e-13 * (1.0 + a.abs().max(b.abs()));
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        seg.eval_into(m, &mut buf);
        let gm = g(m, &buf);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
            gb = gm;
        }
    }
    if gb == ga {
        return 0.5 * (a + b);
    }
    let s = a - ga * (b - a) / (gb - ga);
    s.clamp(a, b)
}
