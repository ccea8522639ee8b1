//! One-dimensional kernels: the reflected drifted motion `|Y|` on `[0, ∞)`,
//! the same motion killed at zero, the signed radial motion `Y` on `R`, and
//! first passage to zero.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::geometry::{KernelParams, MeasureTag};
use crate::quadrature::{damped_oscillatory_integral, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kernel1DValue {
    pub value: f64,
    /// Reference measure the density is taken with respect to.
    pub measure: MeasureTag,
    pub error_estimate: f64,
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("time must be finite and > 0, got {t}")))
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be finite and > 0, got {x}")))
    }
}

fn check_halfline(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be finite and >= 0, got {x}")))
    }
}

/// Transition density of the reflected motion with drift `-γ`, with respect
/// to `m^{(+)}(dy) = 2γe^{-2γy}dy`:
///
/// `1 + (1/πγ) e^{γ(x+y) − γ²t/2} I(t, x, y)`.
///
/// Arguments are put in canonical order first so the result is exactly
/// symmetric in `x` and `y`.
pub fn reflected_kernel(
    t: f64,
    x: f64,
    y: f64,
    params: &KernelParams,
    cfg: &QuadConfig,
) -> Result<Kernel1DValue> {
    check_time(t)?;
    check_halfline("x", x)?;
    check_halfline("y", y)?;
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    let g = params.gamma();
    let prefactor = (g * (x + y) - 0.5 * g * g * t).exp() / (PI * g);
    if !prefactor.is_finite() {
        return Err(Error::NonFinite(format!(
            "reflected kernel prefactor overflows at t={t}, x={x}, y={y}"
        )));
    }
    let abs_tol = (cfg.abs_tol / prefactor).clamp(1e-300, f64::MAX);
    let inner = QuadConfig { abs_tol, ..*cfg };
    let integral = damped_oscillatory_integral(t, x, y, g, &inner)?;
    let value = 1.0 + prefactor * integral.value;
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("reflected kernel at t={t}, x={x}, y={y}")));
    }
    Ok(Kernel1DValue {
        value,
        measure: MeasureTag::MPlus,
        error_estimate: prefactor * integral.error_estimate + 4.0 * f64::EPSILON * value.abs(),
    })
}

/// Density of the drifted motion killed on hitting zero, with respect to
/// `m^{(+)}`:
///
/// `(1/(γ√(8πt))) e^{−γ²t/2 + γ(x+y)} (e^{−(x−y)²/2t} − e^{−(x+y)²/2t})`,
///
/// evaluated as a single exponential times `−expm1(−2xy/t)` so small `xy/t`
/// keeps full relative precision.
pub fn killed_halfline_kernel(t: f64, x: f64, y: f64, params: &KernelParams) -> Result<Kernel1DValue> {
    check_time(t)?;
    check_positive("x", x)?;
    check_positive("y", y)?;
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    let g = params.gamma();
    let d = x - y;
    let exponent = -0.5 * g * g * t + g * (x + y) - d * d / (2.0 * t);
    let value = exponent.exp() * -(-2.0 * x * y / t).exp_m1() / (g * (8.0 * PI * t).sqrt());
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("killed kernel at t={t}, x={x}, y={y}")));
    }
    Ok(Kernel1DValue { value, measure: MeasureTag::MPlus, error_estimate: 8.0 * f64::EPSILON * value })
}

/// `½(p^Ŷ − p_{R+})`: the density of paths that touched zero, which is also
/// the signed kernel between points on opposite sides of zero.
///
/// Rounding-level negatives are clamped to zero; anything larger than the
/// error estimate is reported as [`Error::NegativeDensity`].
pub fn hitting_part(
    t: f64,
    x: f64,
    y: f64,
    params: &KernelParams,
    cfg: &QuadConfig,
) -> Result<Kernel1DValue> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    let reflected = reflected_kernel(t, x, y, params, cfg)?;
    let killed = killed_halfline_kernel(t, x, y, params)?;
    let value = 0.5 * (reflected.value - killed.value);
    let error = 0.5 * (reflected.error_estimate + killed.error_estimate);
    let slack = error + 64.0 * f64::EPSILON * reflected.value.abs();
    if value < -slack {
        return Err(Error::NegativeDensity { value, error_estimate: error });
    }
    Ok(Kernel1DValue { value: value.max(0.0), measure: MeasureTag::MPlus, error_estimate: error })
}

/// Transition density of the signed radial motion `dY = dB − γ sign(Y) dt`
/// with respect to `m̃(dy) = 2γe^{-2γ|y|}dy` on `R`.
pub fn signed_kernel(
    t: f64,
    a: f64,
    b: f64,
    params: &KernelParams,
    cfg: &QuadConfig,
) -> Result<Kernel1DValue> {
    check_time(t)?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput(format!("points must be finite, got {a}, {b}")));
    }
    let reflected = reflected_kernel(t, a.abs(), b.abs(), params, cfg)?;
    if a == 0.0 || b == 0.0 {
        return Ok(Kernel1DValue {
            value: 0.5 * reflected.value,
            measure: MeasureTag::MTilde,
            error_estimate: 0.5 * reflected.error_estimate,
        });
    }
    let killed = killed_halfline_kernel(t, a.abs(), b.abs(), params)?;
    let same_side = (a > 0.0) == (b > 0.0);
    let value = if same_side {
        0.5 * (reflected.value + killed.value)
    } else {
        0.5 * (reflected.value - killed.value)
    };
    let error = 0.5 * (reflected.error_estimate + killed.error_estimate);
    if value < -(error + 64.0 * f64::EPSILON * reflected.value.abs()) {
        return Err(Error::NegativeDensity { value, error_estimate: error });
    }
    Ok(Kernel1DValue { value: value.max(0.0), measure: MeasureTag::MTilde, error_estimate: error })
}

/// Lebesgue density in `s` of the first time `|Y|` started at `x > 0` hits
/// zero: `x/√(2πs³) · e^{−(x−γs)²/2s}`.
pub fn first_passage_density(s: f64, x: f64, params: &KernelParams) -> Result<f64> {
    check_time(s)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidInput(format!("start must be finite and > 0, got {x}")));
    }
    let g = params.gamma();
    let d = x - g * s;
    Ok(x / (2.0 * PI * s * s * s).sqrt() * (-d * d / (2.0 * s)).exp())
}

/// `e^a · erfc(z)` without overflow in `e^a` or underflow in `erfc(z)`.
fn exp_erfc(a: f64, z: f64) -> f64 {
    if z < 25.0 {
        let e = erfc(z);
        if e == 0.0 {
            return 0.0;
        }
        (a + e.ln()).exp()
    } else {
        // erfc(z) = e^{-z²} / (z√π) · (1 − 1/(2z²) + 3/(4z⁴) − …)
        let z2 = z * z;
        let series = 1.0 - 0.5 / z2 + 0.75 / (z2 * z2) - 1.875 / (z2 * z2 * z2);
        (a - z2).exp() * series / (z * PI.sqrt())
    }
}

/// `P(σ_0 > t)` for `|Y|` started at `x`:
/// `Φ((x−γt)/√t) − e^{2γx} Φ(−(x+γt)/√t)`.
pub fn first_passage_survival(t: f64, x: f64, params: &KernelParams) -> Result<f64> {
    check_halfline("x", x)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("time must be finite and >= 0, got {t}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let g = params.gamma();
    let st = (2.0 * t).sqrt();
    // Φ(u) = ½ erfc(−u/√2)
    let first = 0.5 * erfc(-(x - g * t) / st);
    let second = 0.5 * exp_erfc(2.0 * g * x, (x + g * t) / st);
    Ok((first - second).clamp(0.0, 1.0))
}
