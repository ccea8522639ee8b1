//! The kernel of the three-dimensional part killed on reaching the origin.
//!
//! With `ψ(x) = √(γ/2π) e^{−γ|x|}/|x|`,
//! `q(t,x,y) = (2πt)^{−3/2} e^{−γ²t/2 − |x−y|²/2t} / (ψ(x)ψ(y))`
//! with respect to `m_γ`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{dist3_sq, norm3, Component, EPoint, KernelParams, MeasureTag};
use crate::kernels1d::{check_time, Kernel1DValue};
use crate::quadrature::{integrate_e1_polar, QuadConfig, QuadResult};

fn coords_in_e1(name: &str, p: &EPoint) -> Result<[f64; 3]> {
    match (p.component(), p.coords3()) {
        (Component::E1, Some(c)) => Ok(c),
        _ => Err(Error::InvalidInput(format!("{name} must lie in the 3D component, got {p}"))),
    }
}

/// Natural log of `q` for radii `a`, `b` and squared distance `d2`.
fn log_q(t: f64, a: f64, b: f64, d2: f64, gamma: f64) -> f64 {
    (2.0 * PI / gamma * a * b).ln() - 1.5 * (2.0 * PI * t).ln() + gamma * (a + b)
        - 0.5 * gamma * gamma * t
        - d2 / (2.0 * t)
}

pub(crate) fn q_raw(t: f64, x: &[f64; 3], y: &[f64; 3], gamma: f64) -> f64 {
    let a = norm3(*x);
    let b = norm3(*y);
    let d2 = dist3_sq(*x, *y);
    (2.0 * PI / gamma) * a * b * (2.0 * PI * t).powf(-1.5)
        * (gamma * (a + b) - 0.5 * gamma * gamma * t - d2 / (2.0 * t)).exp()
}

/// Killed kernel `q(t,x,y)` with respect to `m_γ`, for `x`, `y` in the 3D
/// component.
pub fn killed_kernel3d(t: f64, x: &EPoint, y: &EPoint, params: &KernelParams) -> Result<Kernel1DValue> {
    check_time(t)?;
    let (x, y) = if x.total_cmp(y).is_le() { (x, y) } else { (y, x) };
    let xc = coords_in_e1("x", x)?;
    let yc = coords_in_e1("y", y)?;
    let value = q_raw(t, &xc, &yc, params.gamma());
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("killed 3D kernel at t={t}, x={x}, y={y}")));
    }
    Ok(Kernel1DValue { value, measure: MeasureTag::MGamma, error_estimate: 16.0 * f64::EPSILON * value })
}

/// `P_x(t < σ_0) = ∫_{E1} q(t,x,y) m_γ(dy)`, computed by the polar reduction
/// around the axis through `x`.
pub fn survival_probability_3d(t: f64, x: &EPoint, params: &KernelParams, cfg: &QuadConfig) -> Result<QuadResult> {
    check_time(t)?;
    let a = norm3(coords_in_e1("x", x)?);
    let g = params.gamma();
    let integrand = |r: f64, c: f64| {
        // |x − y|² with y at radius r and angle cos⁻¹ c from x
        let d2 = ((a - r) * (a - r) + 2.0 * a * r * (1.0 - c)).max(0.0);
        Ok(log_q(t, a, r, d2, g).exp())
    };
    let mut res = integrate_e1_polar(integrand, g, cfg, &[a])?;
    res.value = res.value.min(1.0);
    Ok(res)
}

/// `∫_{E1} q(t,x,z) q(s,z,y) m_γ(dz)`, which equals `q(t+s,x,y)`.
///
/// `x` is rotated onto the polar axis; the azimuthal integral of
/// `e^{κ cos φ}` is done by the periodic trapezoid rule, which converges
/// geometrically, leaving a 2D integral over radius and polar angle.
pub fn killed_semigroup_integral(
    t: f64,
    s: f64,
    x: &EPoint,
    y: &EPoint,
    params: &KernelParams,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    check_time(t)?;
    check_time(s)?;
    let xc = coords_in_e1("x", x)?;
    let yc = coords_in_e1("y", y)?;
    let a = norm3(xc);
    let b = norm3(yc);
    let dot = xc[0] * yc[0] + xc[1] * yc[1] + xc[2] * yc[2];
    let cross = [
        xc[1] * yc[2] - xc[2] * yc[1],
        xc[2] * yc[0] - xc[0] * yc[2],
        xc[0] * yc[1] - xc[1] * yc[0],
    ];
    let cos_b = (dot / (a * b)).clamp(-1.0, 1.0);
    let sin_b = (norm3(cross) / (a * b)).clamp(0.0, 1.0);
    let g = params.gamma();

    let integrand = |r: f64, c: f64| {
        let sin_th = (1.0 - c * c).max(0.0).sqrt();
        let d2_x = ((a - r) * (a - r) + 2.0 * a * r * (1.0 - c)).max(0.0);
        // |z − y|² = r² + b² − 2rb(cos θ cos β + sin θ sin β cos φ)
        let base_y = r * r + b * b - 2.0 * r * b * c * cos_b;
        let kappa = r * b * sin_th * sin_b / s;
        let lq = log_q(t, a, r, d2_x, g) + log_q(s, r, b, (base_y - 2.0 * s * kappa).max(0.0), g);
        // base term is evaluated at cos φ = 1; the average of e^{κ(cos φ − 1)} restores the rest
        let n = if kappa == 0.0 { 1 } else { 16 + (8.0 * kappa.sqrt()).ceil() as usize };
        let mut avg = 0.0;
        for k in 0..n {
            let phi = 2.0 * PI * k as f64 / n as f64;
            avg += (kappa * (phi.cos() - 1.0)).exp();
        }
        avg /= n as f64;
        Ok(lq.exp() * avg)
    };
    integrate_e1_polar(integrand, g, cfg, &[a, b, 0.5 * (a + b)])
}
