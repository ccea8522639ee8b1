//! Checks tying the kernels to quadrature identities and to Monte Carlo
//! evidence. Each check returns a [`CheckReport`]; reports serialize as JSON
//! lines.

pub mod stats;
mod suite;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Component, EPoint, KernelParams};
use crate::kernel3d::{killed_kernel3d, killed_semigroup_integral};
use crate::kernels1d::{check_time, hitting_part, first_passage_density, reflected_kernel, signed_kernel};
use crate::kernelvd::{kernel, origin_kernel};
use crate::quadrature::{
    integrate, integrate_e1_polar, integrate_e_rotreduced_near, integrate_halfline_weighted_near, panel_points,
    QuadConfig,
};
use crate::simulate::{simulate, PathSample, Scheme, SimPlan, SimPoint};

pub use suite::{run_suite, Suite};

pub const NORMALIZATION_TOL: f64 = 1e-6;
pub const CHAPMAN_KOLMOGOROV_TOL: f64 = 1e-4;
pub const KILLED_SEMIGROUP_TOL: f64 = 1e-6;
pub const CONVOLUTION_TOL: f64 = 1e-4;
pub const CONTINUITY_TOL: f64 = 1e-3;
/// Significance level of the Monte Carlo χ² checks.
pub const MC_ALPHA: f64 = 1e-3;
pub const MC_MIN_PATHS: usize = 10_000;
pub const MC_MIN_EXPECTED: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub details: String,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, computed: f64, reference: f64, tolerance: f64, details: impl Into<String>) -> Self {
        let abs_error = (computed - reference).abs();
        Self {
            name: name.into(),
            computed,
            reference,
            abs_error,
            tolerance,
            passed: abs_error <= tolerance,
            details: details.into(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

/// A point in `E1` at radius `r` whose direction makes cosine `c` with the
/// unit vector `axis`.
fn point_at(axis: [f64; 3], r: f64, c: f64) -> Result<EPoint> {
    // any unit vector orthogonal to the axis
    let helper = if axis[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = helper[0] * axis[0] + helper[1] * axis[1] + helper[2] * axis[2];
    let mut perp = [helper[0] - d * axis[0], helper[1] - d * axis[1], helper[2] - d * axis[2]];
    let n = (perp[0] * perp[0] + perp[1] * perp[1] + perp[2] * perp[2]).sqrt();
    perp.iter_mut().for_each(|v| *v /= n);
    let s = (1.0 - c * c).max(0.0).sqrt();
    EPoint::e1([
        r * (c * axis[0] + s * perp[0]),
        r * (c * axis[1] + s * perp[1]),
        r * (c * axis[2] + s * perp[2]),
    ])
}

fn unit_axis(x: &EPoint) -> Option<[f64; 3]> {
    x.coords3().map(|c| {
        let r = x.radius();
        [c[0] / r, c[1] / r, c[2] / r]
    })
}

/// Tolerances for kernel values evaluated inside an integrand. Nested
/// quadrature noise must sit well below the outer tolerance, or the outer
/// rule cannot converge.
fn pointwise(cfg: &QuadConfig) -> QuadConfig {
    cfg.scaled(1e-2)
}

/// `∫_{E} f dm_γ` for `f(z) = g(z)` where `g` may depend on the full 3D
/// position through its angle to `x`: polar integration around `x` on `E1`
/// and a radial integral on `E2`.
fn integrate_around<G>(x: &EPoint, mut g: G, params: &KernelParams, cfg: &QuadConfig, hints: &[f64]) -> Result<f64>
where
    G: FnMut(&EPoint) -> Result<f64>,
{
    let gamma = params.gamma();
    match unit_axis(x) {
        Some(axis) => {
            let e1 = integrate_e1_polar(|r, c| g(&point_at(axis, r, c)?), gamma, cfg, hints)?;
            let e2 = integrate_halfline_weighted_near(|r| g(&EPoint::e2(r)?), gamma, cfg, hints)?;
            Ok(e1.value + e2.value)
        }
        None => {
            let mut g2 = |r: f64, on_e1: bool| {
                let z = if on_e1 { EPoint::e1_on_axis(r)? } else { EPoint::e2(r)? };
                g(&z)
            };
            // the two halves cannot share one mutable closure, so evaluate them in turn
            let e1 = integrate_halfline_weighted_near(|r| g2(r, true), gamma, cfg, hints)?;
            let e2 = integrate_halfline_weighted_near(|r| g2(r, false), gamma, cfg, hints)?;
            Ok(e1.value + e2.value)
        }
    }
}

/// `∫_E p(t,x,·) dm_γ` against 1.
pub fn check_normalization(
    t: f64,
    x: &EPoint,
    params: &KernelParams,
    cfg: &QuadConfig,
    tolerance: f64,
) -> Result<CheckReport> {
    check_normalization_against(t, x, params, params, cfg, tolerance)
}

/// Like [`check_normalization`], but integrates the kernel built with
/// `kernel_params` against the measure of `measure_params`. With the two
/// differing this is a negative control that should fail.
pub fn check_normalization_against(
    t: f64,
    x: &EPoint,
    kernel_params: &KernelParams,
    measure_params: &KernelParams,
    cfg: &QuadConfig,
    tolerance: f64,
) -> Result<CheckReport> {
    check_time(t)?;
    let a = x.radius();
    let inner = pointwise(cfg);
    let total =
        integrate_around(x, |z| Ok(kernel(t, x, z, kernel_params, &inner)?.value), measure_params, cfg, &[a])?;
    let details = if kernel_params == measure_params {
        "integral of p(t,x,.) against m_gamma".to_string()
    } else {
        format!("kernel at gamma={} against m_gamma at gamma={}", kernel_params.gamma(), measure_params.gamma())
    };
    Ok(CheckReport::new(
        format!("normalization t={t} x={x} gamma={}", kernel_params.gamma()),
        total,
        1.0,
        tolerance,
        details,
    ))
}

fn is_radial(p: &EPoint) -> bool {
    matches!(p.component(), Component::E2 | Component::Origin)
}

/// `∫_E p(t,x,z) p(s,z,y) m_γ(dz)` against `p(t+s,x,y)`.
///
/// Supported patterns: both points on the half-line or at the origin (the
/// integrand depends on `z` only through its component and radius), and both
/// points in `E1`.
pub fn check_chapman_kolmogorov(
    t: f64,
    s: f64,
    x: &EPoint,
    y: &EPoint,
    params: &KernelParams,
    cfg: &QuadConfig,
    tolerance: f64,
) -> Result<CheckReport> {
    check_time(t)?;
    check_time(s)?;
    let gamma = params.gamma();
    let (a, b) = (x.radius(), y.radius());
    let hints = [a, b];
    let inner = pointwise(cfg);
    let reference = kernel(t + s, x, y, params, cfg)?.value;
    let computed = if is_radial(x) && is_radial(y) {
        let f = |z: EPoint| Ok(kernel(t, x, &z, params, &inner)?.value * kernel(s, &z, y, params, &inner)?.value);
        let r = integrate_e_rotreduced_near(
            |r| f(EPoint::e1_on_axis(r)?),
            |r| f(EPoint::e2(r)?),
            gamma,
            cfg,
            &hints,
        )?;
        r.value
    } else if x.component() == Component::E1 && y.component() == Component::E1 {
        // p = q + H on E1 and p = H across; expand the product
        let h = |tt: f64, u: f64, r: f64| -> Result<f64> { Ok(hitting_part(tt, u, r, params, &inner)?.value) };
        let qq = killed_semigroup_integral(t, s, x, y, params, cfg)?.value;
        let ax = unit_axis(x).expect("x lies in E1");
        let ay = unit_axis(y).expect("y lies in E1");
        let q_h = integrate_e1_polar(
            |r, c| Ok(killed_kernel3d(t, x, &point_at(ax, r, c)?, params)?.value * h(s, r, b)?),
            gamma,
            cfg,
            &hints,
        )?;
        let h_q = integrate_e1_polar(
            |r, c| Ok(h(t, a, r)? * killed_kernel3d(s, &point_at(ay, r, c)?, y, params)?.value),
            gamma,
            cfg,
            &hints,
        )?;
        let h_h = integrate_halfline_weighted_near(|r| Ok(h(t, a, r)? * h(s, r, b)?), gamma, cfg, &hints)?;
        qq + q_h.value + h_q.value + 2.0 * h_h.value
    } else {
        return Err(Error::UnsupportedPattern(format!(
            "Chapman-Kolmogorov for {} and {} is not reduced",
            x.component().tag(),
            y.component().tag()
        )));
    };
    Ok(CheckReport::new(
        format!("chapman_kolmogorov t={t} s={s} x={x} y={y}"),
        computed,
        reference,
        tolerance,
        "integral of p(t,x,z)p(s,z,y) m_gamma(dz) against p(t+s,x,y)",
    ))
}

/// `∫_{E1} q(t,x,z) q(s,z,y) m_γ(dz)` against `q(t+s,x,y)`.
pub fn check_killed_semigroup(
    t: f64,
    s: f64,
    x: &EPoint,
    y: &EPoint,
    params: &KernelParams,
    cfg: &QuadConfig,
    tolerance: f64,
) -> Result<CheckReport> {
    let computed = killed_semigroup_integral(t, s, x, y, params, cfg)?.value;
    let reference = killed_kernel3d(t + s, x, y, params)?.value;
    Ok(CheckReport::new(
        format!("killed_semigroup t={t} s={s} x={x} y={y}"),
        computed,
        reference,
        tolerance,
        "integral of q(t,x,z)q(s,z,y) m_gamma(dz) against q(t+s,x,y)",
    ))
}

/// Below this exponent the Gaussian factor of a kernel started at zero is
/// treated as zero when cutting the time integral short of `s = t`.
const GAUSSIAN_CUTOFF: f64 = 45.0;

/// First-passage decomposition of the density of `Y_t` at `−y` for a start
/// at `x > 0`:
/// `∫_0^t f(s,x) p̂^Y(t−s,0,−y) ds = p̂^Y(t,x,−y)` (Lebesgue densities).
///
/// The substitution `s = x²/(2w)` removes the inverse-Gaussian spike at
/// `s → 0`; the range where `t − s` is so short that the kernel from zero
/// cannot reach `y` is cut off.
pub fn check_convolution_identity(
    t: f64,
    x: f64,
    y: f64,
    params: &KernelParams,
    cfg: &QuadConfig,
    tolerance: f64,
) -> Result<CheckReport> {
    check_time(t)?;
    if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::InvalidInput(format!("x and y must be finite and > 0, got {x}, {y}")));
    }
    let gamma = params.gamma();
    let inner = pointwise(cfg);
    let lebesgue = 2.0 * gamma * (-2.0 * gamma * y).exp();
    // shortest remaining time for which (y − γτ)²/2τ stays below the cutoff
    let tau_min = {
        let c = GAUSSIAN_CUTOFF;
        // solve (y − γτ)² = 2cτ for the small root
        let (qa, qb, qc) = (gamma * gamma, -(2.0 * gamma * y + 2.0 * c), y * y);
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
        (2.0 * qc / (-qb + disc.sqrt())).min(t)
    };
    let s_max = t - tau_min;
    let computed = if s_max <= 0.0 {
        0.0
    } else {
        let w_lo = x * x / (2.0 * s_max);
        let w_hi = w_lo + 50.0;
        let integrand = |w: f64| {
            let s = x * x / (2.0 * w);
            let jac = first_passage_density(s, x, params)? * x * x / (2.0 * w * w);
            if jac == 0.0 {
                return Ok(0.0);
            }
            let from_zero = 0.5 * reflected_kernel(t - s, 0.0, y, params, &inner)?.value * lebesgue;
            Ok(jac * from_zero)
        };
        integrate(integrand, &panel_points(w_lo, w_hi, 32, &[]), cfg)?.value
    };
    let reference = signed_kernel(t, x, -y, params, cfg)?.value * lebesgue;
    Ok(CheckReport::new(
        format!("convolution t={t} x={x} y={y}"),
        computed,
        reference,
        tolerance,
        "first-passage convolution against the signed kernel at -y (Lebesgue densities)",
    ))
}

/// `p(t, x_n, y)` with `x_n` on the half-line at radius `2^-12`, against
/// `p(t, 0, y)`. For `y` at the origin the second point is moved off it too.
pub fn check_origin_continuity(
    t: f64,
    y: &EPoint,
    params: &KernelParams,
    cfg: &QuadConfig,
    tolerance: f64,
) -> Result<CheckReport> {
    check_time(t)?;
    let eps = 2f64.powi(-12);
    let x_n = EPoint::e2(eps)?;
    let y_n = if y.is_origin() { EPoint::e2(eps)? } else { *y };
    let computed = kernel(t, &x_n, &y_n, params, cfg)?.value;
    let reference = origin_kernel(t, y, params, cfg)?.value;
    Ok(CheckReport::new(
        format!("origin_continuity t={t} y={y}"),
        computed,
        reference,
        tolerance,
        "kernel at |x| = 2^-12 against the origin formula",
    ))
}

/// Bins of the signed radial coordinate used by the Monte Carlo checks.
pub fn mc_bin_edges(plan: &SimPlan, gamma: f64, width: f64) -> Vec<f64> {
    let y0 = plan.x0.signed_radial();
    let t = plan.horizon;
    let span = 7.0 * t.sqrt() + gamma * t + 0.5;
    let (lo, hi) = match plan.scheme {
        Scheme::Reflected => (0.0, y0.abs() + span),
        _ => (y0.min(0.0) - span, y0.max(0.0) + span),
    };
    let k0 = (lo / width).floor() as i64;
    let k1 = (hi / width).ceil() as i64;
    (k0..=k1).map(|k| k as f64 * width).collect()
}

/// Lebesgue density of the signed radial coordinate of `X_t` (the radius
/// for the reflected scheme) under the analytic kernels.
pub fn radial_endpoint_density(plan: &SimPlan, u: f64, params: &KernelParams, cfg: &QuadConfig) -> Result<f64> {
    let t = plan.horizon;
    let gamma = params.gamma();
    let weight = 2.0 * gamma * (-2.0 * gamma * u.abs()).exp();
    match plan.scheme {
        Scheme::Signed => Ok(signed_kernel(t, plan.x0.signed_radial(), u, params, cfg)?.value * weight),
        Scheme::Reflected => Ok(reflected_kernel(t, plan.x0.radius(), u.abs(), params, cfg)?.value * weight),
        Scheme::FullSkewProduct => {
            let x = match plan.x0 {
                SimPoint::Point(p) => p,
                SimPoint::Scalar(y) => EPoint::from_signed_radial(y)?,
            };
            let z_radial = EPoint::from_signed_radial(u)?;
            match (unit_axis(&x), z_radial.component()) {
                (Some(axis), Component::E1) => {
                    let inner = pointwise(cfg);
                    let shell = integrate(
                        |c| Ok(0.5 * kernel(t, &x, &point_at(axis, u, c)?, params, &inner)?.value),
                        &[-1.0, 0.0, 0.9, 0.99, 1.0],
                        cfg,
                    )?;
                    Ok(shell.value * weight)
                }
                _ => Ok(kernel(t, &x, &z_radial, params, cfg)?.value * weight),
            }
        }
    }
}

/// Probabilities of the bins `edges` under the analytic endpoint law, plus
/// the leftover mass outside them as the last entry.
pub fn mc_expected_masses(plan: &SimPlan, edges: &[f64], params: &KernelParams, cfg: &QuadConfig) -> Result<Vec<f64>> {
    let mut masses = Vec::with_capacity(edges.len());
    let inner = pointwise(cfg);
    for w in edges.windows(2) {
        let m = integrate(|u| radial_endpoint_density(plan, u, params, &inner), &[w[0], w[1]], cfg)?;
        masses.push(m.value);
    }
    let inside: f64 = masses.iter().sum();
    masses.push((1.0 - inside).max(0.0));
    Ok(masses)
}

fn radial_values(plan: &SimPlan, samples: &[PathSample]) -> Vec<f64> {
    samples
        .iter()
        .map(|s| match plan.scheme {
            Scheme::Reflected => s.endpoint.radius(),
            _ => s.endpoint.signed_radial(),
        })
        .collect()
}

/// Observed counts per bin plus the count outside all bins.
fn mc_counts(values: &[f64], edges: &[f64]) -> Vec<f64> {
    let bins = edges.len() - 1;
    let mut counts = vec![0.0; bins + 1];
    for &v in values {
        if v < edges[0] || v > edges[bins] || v.is_nan() {
            counts[bins] += 1.0;
        } else {
            let i = edges.partition_point(|e| *e <= v).saturating_sub(1).min(bins - 1);
            counts[i] += 1.0;
        }
    }
    counts
}

/// χ² comparison of simulated endpoints with the analytic law of `plan`
/// under `analytic`. The report compares the statistic with the critical
/// value at level [`MC_ALPHA`], so it passes exactly when `p > MC_ALPHA`.
pub fn check_mc_samples(
    plan: &SimPlan,
    samples: &[PathSample],
    analytic: &KernelParams,
    cfg: &QuadConfig,
) -> Result<CheckReport> {
    if samples.len() < MC_MIN_PATHS {
        return Err(Error::InsufficientSamples { required: MC_MIN_PATHS, got: samples.len() });
    }
    let edges = mc_bin_edges(plan, analytic.gamma(), 0.1);
    let expected = mc_expected_masses(plan, &edges, analytic, cfg)?;
    let observed = mc_counts(&radial_values(plan, samples), &edges);
    // move the outside cell to the front so that a small one merges with the first bin
    let rotate = |v: &[f64]| {
        let mut r = Vec::with_capacity(v.len());
        r.push(v[v.len() - 1]);
        r.extend_from_slice(&v[..v.len() - 1]);
        r
    };
    let n = samples.len() as f64;
    let outcome = stats::chi_square(&rotate(&observed), &rotate(&expected), n, MC_MIN_EXPECTED)?;
    let critical = stats::chi_square_critical(outcome.dof, MC_ALPHA);
    Ok(CheckReport::new(
        format!(
            "mc_agreement scheme={:?} x0={} t={} n={} dt={} gamma={}",
            plan.scheme,
            describe(&plan.x0),
            plan.horizon,
            plan.n_paths,
            plan.dt,
            analytic.gamma()
        ),
        outcome.statistic,
        0.0,
        critical,
        format!("chi2={:.3} dof={} p={:.4e} cells={}", outcome.statistic, outcome.dof, outcome.p_value, outcome.cells),
    ))
}

fn describe(p: &SimPoint) -> String {
    match p {
        SimPoint::Scalar(y) => format!("{y}"),
        SimPoint::Point(e) => format!("{e}"),
    }
}

/// Simulates `plan` under `simulated` and compares with the kernels under
/// `analytic` (normally the same parameters; different ones make a
/// negative control).
pub fn check_mc_agreement(
    plan: &SimPlan,
    simulated: &KernelParams,
    analytic: &KernelParams,
    cfg: &QuadConfig,
) -> Result<CheckReport> {
    if plan.n_paths < MC_MIN_PATHS {
        return Err(Error::InsufficientSamples { required: MC_MIN_PATHS, got: plan.n_paths });
    }
    let samples = simulate(plan, simulated)?;
    check_mc_samples(plan, &samples, analytic, cfg)
}

/// Single-cell χ² check that the fraction of `values` in `[lo, hi)` matches
/// `expected_mass`, at level [`MC_ALPHA`].
pub fn check_bin_mass(name: impl Into<String>, values: &[f64], lo: f64, hi: f64, expected_mass: f64) -> Result<CheckReport> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = values.len() as f64;
    let inside = values.iter().filter(|v| **v >= lo && **v < hi).count() as f64;
    let outcome = stats::chi_square(&[inside, n - inside], &[expected_mass, 1.0 - expected_mass], n, 0.0)?;
    let critical = stats::chi_square_critical(1, MC_ALPHA);
    Ok(CheckReport::new(
        name,
        outcome.statistic,
        0.0,
        critical,
        format!(
            "observed={:.6e} expected={:.6e} p={:.4e}",
            inside / n,
            expected_mass,
            outcome.p_value
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> KernelParams {
        KernelParams::new(1.0).unwrap()
    }

    fn cfg() -> QuadConfig {
        QuadConfig::with_tolerances(1e-11, 1e-11)
    }

    #[test]
    fn normalization_examples() {
        let r = check_normalization(1.0, &EPoint::e2(1.0).unwrap(), &p1(), &cfg(), NORMALIZATION_TOL).unwrap();
        assert!(r.passed, "{r:?}");
        let r = check_normalization(10.0, &EPoint::origin(), &p1(), &cfg(), NORMALIZATION_TOL).unwrap();
        assert!(r.passed, "{r:?}");
        let r = check_normalization(0.3, &EPoint::e1([0.2, -0.5, 0.4]).unwrap(), &p1(), &cfg(), NORMALIZATION_TOL).unwrap();
        assert!(r.passed, "{r:?}");
        let r = check_normalization(1.0, &EPoint::e2(1.0).unwrap(), &p1(), &cfg(), 0.0).unwrap();
        assert!(!r.passed || r.abs_error == 0.0);
        assert_eq!(r.abs_error, (r.computed - 1.0).abs());
    }

    #[test]
    fn chapman_kolmogorov_examples() {
        let o = EPoint::origin();
        let r = check_chapman_kolmogorov(0.5, 0.5, &o, &o, &p1(), &cfg(), CHAPMAN_KOLMOGOROV_TOL).unwrap();
        assert!(r.passed, "{r:?}");
        let x = EPoint::e2(0.7).unwrap();
        let y = EPoint::e2(1.4).unwrap();
        let r = check_chapman_kolmogorov(0.2, 1.0, &x, &y, &p1(), &cfg(), CHAPMAN_KOLMOGOROV_TOL).unwrap();
        assert!(r.passed, "{r:?}");
        let e = EPoint::e1([1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            check_chapman_kolmogorov(0.5, 0.5, &e, &y, &p1(), &cfg(), 1e-4),
            Err(Error::UnsupportedPattern(_))
        ));
        assert!(matches!(
            check_chapman_kolmogorov(0.0, 0.5, &o, &o, &p1(), &cfg(), 1e-4),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn chapman_kolmogorov_in_three_dimensions() {
        let x = EPoint::e1([0.5, 0.5, 0.0]).unwrap();
        let y = EPoint::e1([0.0, -0.3, 1.1]).unwrap();
        let r = check_chapman_kolmogorov(0.5, 0.5, &x, &y, &p1(), &QuadConfig::with_tolerances(1e-9, 1e-9), 1e-4)
            .unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn convolution_examples() {
        for (t, x, y) in [(1.0, 1.0, 1.0), (1.0, 20.0, 1.0), (2.0, 0.5, 1.5)] {
            let r = check_convolution_identity(t, x, y, &p1(), &cfg(), CONVOLUTION_TOL).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(check_convolution_identity(1.0, 0.0, 1.0, &p1(), &cfg(), 1e-4).is_err());
    }

    #[test]
    fn origin_continuity_examples() {
        for y in [EPoint::e2(1.0).unwrap(), EPoint::origin(), EPoint::e1([0.0, 0.0, 1.0]).unwrap()] {
            let r = check_origin_continuity(1.0, &y, &p1(), &cfg(), CONTINUITY_TOL).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(check_origin_continuity(0.0, &EPoint::origin(), &p1(), &cfg(), 1e-3).is_err());
    }

    #[test]
    fn bin_masses_sum_to_one() {
        let plan = SimPlan::new(Scheme::Signed, SimPoint::Scalar(1.0), 1.0, 1e-3, 10, 0);
        let edges = mc_bin_edges(&plan, 1.0, 0.1);
        let m = mc_expected_masses(&plan, &edges, &p1(), &cfg()).unwrap();
        assert!(m[m.len() - 1] < 1e-8, "{}", m[m.len() - 1]);
        assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn mc_agreement_small_runs() {
        let c = QuadConfig::with_tolerances(1e-9, 1e-9);
        let plan = SimPlan::new(Scheme::Signed, SimPoint::Scalar(0.0), 1.0, 1e-3, 20_000, 11);
        let r = check_mc_agreement(&plan, &p1(), &p1(), &c).unwrap();
        assert!(r.passed, "{r:?}");
        let wrong = KernelParams::new(1.5).unwrap();
        let r = check_mc_agreement(&plan, &p1(), &wrong, &c).unwrap();
        assert!(!r.passed, "{r:?}");
        let small = SimPlan { n_paths: 100, ..plan };
        assert!(matches!(
            check_mc_agreement(&small, &p1(), &p1(), &c),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn report_json_line() {
        let r = CheckReport::new("x", 1.0, 1.5, 0.1, "d");
        assert!(!r.passed);
        let line = r.to_json_line();
        assert!(!line.contains('\n'));
        let back: CheckReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }
}
