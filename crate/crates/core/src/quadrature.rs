//! Adaptive Gauss–Kronrod integration and the handful of integrand families
//! the kernels need: the Gaussian-damped oscillatory integral behind the
//! reflected-drift kernel, exponentially weighted half-line integrals, and
//! the rotationally reduced integrals over `E`.
//!
//! Every routine returns a value together with an error estimate so that
//! callers can propagate uncertainty instead of trusting bare numbers.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Factor by which truncation tails are kept below `abs_tol`.
    pub truncation_safety: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_panels: 4000, truncation_safety: 10.0 }
    }
}

impl QuadConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if self.max_panels < 8 {
            return Err(Error::InvalidConfig(format!(
                "max_panels must be >= 8, got {}",
                self.max_panels
            )));
        }
        if !(self.truncation_safety >= 1.0 && self.truncation_safety.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "truncation_safety must be >= 1, got {}",
                self.truncation_safety
            )));
        }
        Ok(())
    }

    /// Same limits with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { abs_tol: self.abs_tol * factor, rel_tol: self.rel_tol * factor, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Upper end of the integrated range; equals the interval end for
    /// finite-range integrals.
    pub truncation_point: f64,
    pub panels_used: usize,
}

// Gauss–Kronrod 10/21 nodes and weights (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Roundoff floor of this panel's error estimate.
    floor: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval<F>(f: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let v = f(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteF { at: x, value: v })
    }
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval(f, center)?;
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let hl = half.abs();
    let value = kronrod * half;
    res_abs *= hl;
    res_asc *= hl;
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    Ok(Panel { a, b, value, error: error.max(floor), floor })
}

/// Globally adaptive GK21 integration over `[breakpoints[0], breakpoints[last]]`,
/// starting from the panels given by consecutive breakpoints.
///
/// Stops once the summed error estimate is below `max(abs_tol, rel_tol·|I|)`,
/// or below 1.5× the summed roundoff floor when the tolerance is finer than
/// double precision allows.
pub fn integrate<F>(mut f: F, breakpoints: &[f64], cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if breakpoints.len() < 2 || breakpoints.iter().any(|b| !b.is_finite()) {
        return Err(Error::InvalidInput("need at least two finite breakpoints".into()));
    }
    if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
    }

    let mut heap = BinaryHeap::with_capacity(breakpoints.len() * 2);
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut total_floor = 0.0;
    for w in breakpoints.windows(2) {
        let p = gk21(&mut f, w[0], w[1])?;
        total += p.value;
        total_err += p.error;
        total_floor += p.floor;
        heap.push(p);
    }

    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs()).max(1.5 * total_floor);
        if total_err <= tol {
            break;
        }
        if heap.len() >= cfg.max_panels {
            return Err(Error::NoConvergence {
                value: total,
                error_estimate: total_err,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::NoConvergence {
                value: total,
                error_estimate: total_err,
                panels: heap.len() + 1,
            });
        }
        let left = gk21(&mut f, worst.a, mid)?;
        let right = gk21(&mut f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    let panels = heap.into_vec();
    let value = panels.iter().map(|p| p.value).sum();
    let error_estimate = panels.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error_estimate,
        truncation_point: *breakpoints.last().unwrap(),
        panels_used: panels.len(),
    })
}

/// Breakpoints splitting `[a, b]` into `n` equal panels with the extra
/// points in `hints` (those strictly inside) merged in.
pub(crate) fn panel_points(a: f64, b: f64, n: usize, hints: &[f64]) -> Vec<f64> {
    let n = n.max(1);
    let mut pts: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    pts[n] = b;
    pts.extend(hints.iter().copied().filter(|h| *h > a && *h < b));
    pts.sort_by(f64::total_cmp);
    let min_gap = 1e-12 * (b - a).abs().max(1e-300);
    pts.dedup_by(|x, y| (*x - *y).abs() <= min_gap);
    *pts.last_mut().unwrap() = b;
    pts
}

/// Truncation point `S` for `∫_0^∞ e^{-s²t/2}(…) ds` whose integrand is bounded
/// by `e^{-s²t/2}`: the tail is at most `sqrt(π/2t)·e^{-S²t/2}`, which is kept
/// below `abs_tol / truncation_safety`.
pub fn gaussian_truncation_point(t: f64, cfg: &QuadConfig) -> f64 {
    let scale = (PI / (2.0 * t)).sqrt();
    let arg = scale * cfg.truncation_safety / cfg.abs_tol;
    let floor = 1.0 / t.sqrt();
    if arg > 1.0 {
        (2.0 * arg.ln() / t).sqrt().max(floor)
    } else {
        floor
    }
}

/// `I(t,x,y) = ∫_0^∞ e^{-s²t/2}/(s²+γ²) [s cos(sx) − γ sin(sx)][s cos(sy) − γ sin(sy)] ds`.
///
/// The integrand is bounded by `e^{-s²t/2}` (Cauchy–Schwarz on each bracket),
/// which gives a certified truncation point. The range is pre-split into
/// panels one wavelength of `cos(s(x+y))` wide before adaptive refinement.
pub fn damped_oscillatory_integral(
    t: f64,
    x: f64,
    y: f64,
    gamma: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("t must be > 0, got {t}")));
    }
    if !(x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::InvalidInput(format!("x, y must be >= 0, got {x}, {y}")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidGamma(gamma));
    }
    cfg.validate()?;

    let s_max = gaussian_truncation_point(t, cfg);
    let tail = (PI / (2.0 * t)).sqrt() * (-0.5 * s_max * s_max * t).exp();
    let omega = x + y;
    let wavelengths = (s_max * omega / (2.0 * PI)).ceil() as usize;
    let n0 = (8 + wavelengths).min(cfg.max_panels / 2);
    let g2 = gamma * gamma;
    let integrand = |s: f64| {
        let (sx, cx) = (s * x).sin_cos();
        let (sy, cy) = (s * y).sin_cos();
        Ok((-0.5 * s * s * t).exp() / (s * s + g2) * (s * cx - gamma * sx) * (s * cy - gamma * sy))
    };
    let inner = QuadConfig { abs_tol: cfg.abs_tol * (1.0 - 1.0 / cfg.truncation_safety).max(0.5), ..*cfg };
    let r = integrate(integrand, &panel_points(0.0, s_max, n0, &[]), &inner)?;
    Ok(QuadResult {
        value: r.value,
        error_estimate: r.error_estimate + tail,
        truncation_point: s_max,
        panels_used: r.panels_used,
    })
}

/// Truncation point for `∫_0^∞ f(u) 2γe^{-2γu} du`: the weight tail is pushed
/// below `abs_tol/safety`, then extended while `|f|` at the cut still makes the
/// tail estimate too large.
fn weighted_cut<F>(f: &mut F, gamma: f64, cfg: &QuadConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let target = cfg.abs_tol / cfg.truncation_safety;
    let mut cut = (1.0 / target).ln().max(1.0) / (2.0 * gamma);
    for _ in 0..8 {
        let fu = eval(f, cut)?.abs();
        // polynomial growth: |f| at 2·cut is bounded by a modest multiple of |f(cut)|
        let tail = fu.max(1.0) * (-2.0 * gamma * cut).exp() * 4.0;
        if tail <= target {
            return Ok(cut);
        }
        cut += (tail / target).ln() / (2.0 * gamma);
    }
    Ok(cut)
}

/// `∫_0^∞ f(u) m^{(+)}(du)` with `m^{(+)}(du) = 2γe^{-2γu}du`.
pub fn integrate_halfline_weighted<F>(f: F, gamma: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_halfline_weighted_near(f, gamma, cfg, &[])
}

/// As [`integrate_halfline_weighted`], with extra breakpoints where `f` is
/// known to vary quickly (peaks of a kernel, for instance).
pub fn integrate_halfline_weighted_near<F>(
    mut f: F,
    gamma: f64,
    cfg: &QuadConfig,
    hints: &[f64],
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidGamma(gamma));
    }
    cfg.validate()?;
    let cut = weighted_cut(&mut f, gamma, cfg)?;
    let g2 = 2.0 * gamma;
    let weighted = |u: f64| Ok(f(u)? * g2 * (-g2 * u).exp());
    let mut r = integrate(weighted, &panel_points(0.0, cut, 16, hints), cfg)?;
    r.error_estimate += cfg.abs_tol / cfg.truncation_safety;
    Ok(r)
}

/// `∫_E g dm_γ` for integrands that depend on a point only through its
/// component and radius: both components contribute `∫_0^∞ g(r)·2γe^{-2γr} dr`
/// (on `E1` this is `(γ/2π)e^{-2γr}/r² · 4πr²`).
pub fn integrate_e_rotreduced<G1, G2>(
    g_e1: G1,
    g_e2: G2,
    gamma: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    G1: FnMut(f64) -> Result<f64>,
    G2: FnMut(f64) -> Result<f64>,
{
    integrate_e_rotreduced_near(g_e1, g_e2, gamma, cfg, &[])
}

pub fn integrate_e_rotreduced_near<G1, G2>(
    g_e1: G1,
    g_e2: G2,
    gamma: f64,
    cfg: &QuadConfig,
    hints: &[f64],
) -> Result<QuadResult>
where
    G1: FnMut(f64) -> Result<f64>,
    G2: FnMut(f64) -> Result<f64>,
{
    let a = integrate_halfline_weighted_near(g_e1, gamma, cfg, hints)?;
    let b = integrate_halfline_weighted_near(g_e2, gamma, cfg, hints)?;
    Ok(QuadResult {
        value: a.value + b.value,
        error_estimate: a.error_estimate + b.error_estimate,
        truncation_point: a.truncation_point.max(b.truncation_point),
        panels_used: a.panels_used + b.panels_used,
    })
}

/// `∫_{E1} g dm_γ` for integrands that depend on the radius `r` and on
/// `c = cos θ`, the cosine of the angle to a fixed axis:
/// `∫_0^∞ 2γe^{-2γr} ∫_{-1}^{1} g(r, c) dc/2 dr`.
///
/// The inner integral is refined near `c = 1`, where kernels centred on the
/// axis concentrate at small times.
pub fn integrate_e1_polar<G>(mut g: G, gamma: f64, cfg: &QuadConfig, hints: &[f64]) -> Result<QuadResult>
where
    G: FnMut(f64, f64) -> Result<f64>,
{
    let mut inner_err: f64 = 0.0;
    let mut inner_panels = 0usize;
    let c_points = [-1.0, 0.0, 0.9, 0.99, 1.0];
    let g2 = 2.0 * gamma;
    let outer = |r: f64| {
        // each radius only has to be resolved to its share of the weighted total
        let weight = g2 * (-g2 * r).exp();
        let local = QuadConfig { abs_tol: (cfg.abs_tol / weight).min(f64::MAX), ..*cfg };
        let res = integrate(|c| Ok(0.5 * g(r, c)?), &c_points, &local)?;
        inner_err = inner_err.max(res.error_estimate * weight);
        inner_panels += res.panels_used;
        Ok(res.value)
    };
    let mut r = integrate_halfline_weighted_near(outer, gamma, cfg, hints)?;
    r.error_estimate += inner_err * r.truncation_point;
    r.panels_used += inner_panels;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    // closed form of I(1,0,0) at γ=1, sqrt(π/2) − (π/2)e^{1/2}erfc(1/√2),
    // evaluated at 30 digits with an independent arbitrary-precision integrator
    const I_1_0_0: f64 = 0.431_541_697_253_461_891_922_956;

    #[test]
    fn damped_integral_at_zero() {
        let r = damped_oscillatory_integral(1.0, 0.0, 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - I_1_0_0).abs() < 1e-12, "{r:?}");
        assert!(r.error_estimate <= 1e-10);
        assert!(r.truncation_point > 0.0);
    }

    #[test]
    fn damped_integral_vanishes_for_large_t() {
        let mut last = f64::INFINITY;
        for t in [10.0, 100.0, 1e4, 1e6] {
            let r = damped_oscillatory_integral(t, 0.7, 1.3, 1.0, &cfg()).unwrap();
            assert!(r.value.abs() < last);
            // |I| <= ∫ e^{-s²t/2} ds
            assert!(r.value.abs() <= (PI / (2.0 * t)).sqrt() + r.error_estimate);
            last = r.value.abs();
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn damped_integral_is_symmetric() {
        for (x, y) in [(0.0, 2.0), (0.3, 5.0), (3.0, 1.0)] {
            let a = damped_oscillatory_integral(0.2, x, y, 1.5, &cfg()).unwrap();
            let b = damped_oscillatory_integral(0.2, y, x, 1.5, &cfg()).unwrap();
            assert!((a.value - b.value).abs() <= a.error_estimate + b.error_estimate);
        }
    }

    #[test]
    fn damped_integral_rejects_bad_input() {
        assert!(matches!(
            damped_oscillatory_integral(0.0, 1.0, 1.0, 1.0, &cfg()),
            Err(Error::InvalidInput(_))
        ));
        assert!(damped_oscillatory_integral(1.0, -1.0, 1.0, 1.0, &cfg()).is_err());
        assert!(damped_oscillatory_integral(1.0, 1.0, 1.0, 0.0, &cfg()).is_err());
    }

    #[test]
    fn exhausted_panels_report_no_convergence() {
        let tight = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-15, max_panels: 8, truncation_safety: 10.0 };
        let r = integrate(|x: f64| Ok(x.abs().sqrt()), &[-1.0, 1.0], &tight);
        assert!(matches!(r, Err(Error::NoConvergence { .. })), "{r:?}");
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = integrate(|x: f64| Ok(if x > 0.5 { f64::NAN } else { x }), &[0.0, 1.0], &cfg());
        assert!(matches!(r, Err(Error::NonFiniteF { .. })));
        let r = integrate_halfline_weighted(|_| Ok(f64::INFINITY), 1.0, &cfg());
        assert!(matches!(r, Err(Error::NonFiniteF { .. })));
    }

    // Naive composite Simpson on [0, S] with 10^6 panels as an independent check.
    fn simpson_damped(t: f64, x: f64, y: f64, g: f64, s_max: f64) -> f64 {
        let n = 1_000_000usize;
        let h = s_max / n as f64;
        let f = |s: f64| {
            (-0.5 * s * s * t).exp() / (s * s + g * g)
                * (s * (s * x).cos() - g * (s * x).sin())
                * (s * (s * y).cos() - g * (s * y).sin())
        };
        let mut acc = f(0.0) + f(s_max);
        for i in 1..n {
            acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn damped_integral_matches_fine_simpson() {
        let c = cfg();
        for t in [0.1, 1.0, 10.0] {
            for (x, y) in [(0.0, 0.5), (1.0, 3.0), (0.5, 0.5), (3.0, 3.0)] {
                for g in [0.5, 2.0] {
                    let r = damped_oscillatory_integral(t, x, y, g, &c).unwrap();
                    let s = simpson_damped(t, x, y, g, r.truncation_point);
                    assert!((r.value - s).abs() < 1e-8, "t={t} x={x} y={y} g={g}: {} vs {s}", r.value);
                }
            }
        }
    }

    #[test]
    fn halfline_weighted_examples() {
        let r = integrate_halfline_weighted(|_| Ok(1.0), 0.8, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        let r = integrate_halfline_weighted(Ok, 1.0, &cfg()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-10);
        // polynomial growth: E[U^3] = 6/(2γ)^3
        let r = integrate_halfline_weighted(|u| Ok(u * u * u), 0.5, &cfg()).unwrap();
        assert!((r.value - 6.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn rotreduced_examples() {
        let r = integrate_e_rotreduced(|_| Ok(1.0), |_| Ok(1.0), 1.3, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        let a = 2f64.ln() / 2.0;
        let ind = |r: f64| Ok(if r > a { 1.0 } else { 0.0 });
        let r = integrate_e_rotreduced_near(ind, ind, 1.0, &cfg(), &[a]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn polar_reduction_of_constant_and_moments() {
        let r = integrate_e1_polar(|_, _| Ok(1.0), 0.9, &cfg(), &[]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        // ∫ c² dc/2 = 1/3
        let r = integrate_e1_polar(|_, c| Ok(c * c), 0.9, &cfg(), &[]).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn reference_weights_have_unit_mass() {
        // ∫_{R³} ψ² dx = ∫ 4πr² ψ(r)² dr and ∫_0^∞ φ² du, integrated in plain
        // Lebesgue form so the weighted engines are not involved
        for gamma in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let p = crate::geometry::KernelParams::new(gamma).unwrap();
            let cut = 40.0 / gamma;
            let pts = panel_points(0.0, cut, 64, &[]);
            // GK nodes are interior, so r = 0 is never evaluated
            let psi = integrate(|r| Ok(4.0 * PI * r * r * p.psi(r).powi(2)), &pts, &cfg()).unwrap();
            assert!((psi.value - 1.0).abs() < 1e-10, "gamma={gamma}: {}", psi.value);
            let phi = integrate(|u| Ok(p.phi(u).powi(2)), &pts, &cfg()).unwrap();
            assert!((phi.value - 1.0).abs() < 1e-10);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn refinement_is_self_consistent(t in 0.05f64..5.0, x in 0.0f64..4.0, y in 0.0f64..4.0, g in 0.3f64..3.0) {
            let coarse = QuadConfig::with_tolerances(1e-8, 1e-8);
            let a = damped_oscillatory_integral(t, x, y, g, &coarse).unwrap();
            let b = damped_oscillatory_integral(t, x, y, g, &coarse.scaled(0.5)).unwrap();
            prop_assert!((a.value - b.value).abs() <= a.error_estimate);
        }
    }
}
