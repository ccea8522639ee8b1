//! Named collections of checks for the command line.

use serde::{Deserialize, Serialize};

use super::*;
use crate::kernel3d::survival_probability_3d;
use crate::kernels1d::first_passage_survival;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Seconds: one instance of every identity and a small Monte Carlo run.
    Fast,
    /// Minutes: the full grids and million-path Monte Carlo runs.
    Full,
}

fn e1(r: f64) -> EPoint {
    EPoint::e1([0.0, 0.0, r]).expect("positive radius")
}

fn e2(r: f64) -> EPoint {
    EPoint::e2(r).expect("positive radius")
}

fn symmetry(t: f64, x: &EPoint, y: &EPoint, params: &KernelParams, cfg: &QuadConfig) -> Result<CheckReport> {
    let a = kernel(t, x, y, params, cfg)?.value;
    let b = kernel(t, y, x, params, cfg)?.value;
    Ok(CheckReport::new(format!("symmetry t={t} x={x} y={y}"), a, b, 0.0, "p(t,x,y) against p(t,y,x)"))
}

fn survival(t: f64, r: f64, params: &KernelParams, cfg: &QuadConfig) -> Result<CheckReport> {
    let s = survival_probability_3d(t, &e1(r), params, cfg)?.value;
    let tail = first_passage_survival(t, r, params)?;
    Ok(CheckReport::new(
        format!("survival_3d t={t} r={r}"),
        s,
        tail,
        1e-6,
        "integral of q(t,x,.) against the inverse Gaussian tail",
    ))
}

fn equilibrium(x: &EPoint, y: &EPoint, params: &KernelParams, cfg: &QuadConfig) -> Result<CheckReport> {
    let g = params.gamma();
    let t = 50.0 / (g * g);
    let v = kernel(t, x, y, params, cfg)?.value;
    Ok(CheckReport::new(format!("equilibrium t={t} x={x} y={y}"), v, 0.5, 1e-3, "long-time limit 1/2"))
}

/// Runs a suite. Checks are deterministic given `seed`, which only feeds the
/// Monte Carlo runs.
pub fn run_suite(suite: Suite, seed: u64, params: &KernelParams, cfg: &QuadConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let points = [EPoint::origin(), e2(1.0), e1(1.0)];
    match suite {
        Suite::Fast => {
            for x in &points {
                out.push(check_normalization(1.0, x, params, cfg, NORMALIZATION_TOL)?);
            }
            out.push(symmetry(0.7, &e1(0.4), &e2(1.3), params, cfg)?);
            let o = EPoint::origin();
            out.push(check_chapman_kolmogorov(0.5, 0.5, &o, &o, params, cfg, CHAPMAN_KOLMOGOROV_TOL)?);
            out.push(check_chapman_kolmogorov(0.2, 1.0, &e2(0.5), &e2(1.0), params, cfg, CHAPMAN_KOLMOGOROV_TOL)?);
            let x3 = EPoint::e1([0.6, 0.0, 0.8]).expect("unit point");
            out.push(check_killed_semigroup(0.5, 0.5, &x3, &e1(1.2), params, cfg, KILLED_SEMIGROUP_TOL)?);
            out.push(survival(1.0, 1.0, params, cfg)?);
            out.push(check_convolution_identity(1.0, 1.0, 1.0, params, cfg, CONVOLUTION_TOL)?);
            out.push(check_origin_continuity(1.0, &e2(1.0), params, cfg, CONTINUITY_TOL)?);
            out.push(equilibrium(&e2(1.0), &e1(1.0), params, cfg)?);
            let plan = SimPlan::new(Scheme::Signed, SimPoint::Scalar(0.0), 1.0, 1e-3, 20_000, seed);
            out.push(check_mc_agreement(&plan, params, params, cfg)?);
        }
        Suite::Full => {
            for t in [0.1, 1.0, 10.0] {
                for x in &points {
                    out.push(check_normalization(t, x, params, cfg, NORMALIZATION_TOL)?);
                }
            }
            for x in &points {
                for y in &points {
                    out.push(symmetry(0.5, x, y, params, cfg)?);
                    out.push(equilibrium(x, y, params, cfg)?);
                }
            }
            let radial = [EPoint::origin(), e2(0.5), e2(1.5)];
            for (t, s) in [(0.5, 0.5), (0.2, 1.0)] {
                for x in &radial {
                    for y in &radial {
                        out.push(check_chapman_kolmogorov(t, s, x, y, params, cfg, CHAPMAN_KOLMOGOROV_TOL)?);
                    }
                }
                let x3 = EPoint::e1([0.6, 0.0, 0.8]).expect("unit point");
                out.push(check_killed_semigroup(t, s, &x3, &e1(1.2), params, cfg, KILLED_SEMIGROUP_TOL)?);
            }
            for t in [0.5, 1.0, 2.0] {
                for x in [0.5, 1.0, 2.0] {
                    out.push(survival(t, x, params, cfg)?);
                    for y in [0.5, 1.0, 2.0] {
                        out.push(check_convolution_identity(t, x, y, params, cfg, CONVOLUTION_TOL)?);
                    }
                }
            }
            for y in [EPoint::origin(), e2(1.0), e1(1.0)] {
                out.push(check_origin_continuity(1.0, &y, params, cfg, CONTINUITY_TOL)?);
            }
            let starts = [
                (Scheme::Signed, SimPoint::Scalar(0.0)),
                (Scheme::Signed, SimPoint::Scalar(1.0)),
                (Scheme::Reflected, SimPoint::Scalar(1.0)),
                (Scheme::FullSkewProduct, SimPoint::Point(e1(1.0))),
            ];
            for (i, (scheme, x0)) in starts.into_iter().enumerate() {
                let plan = SimPlan::new(scheme, x0, 1.0, 1e-4, 1_000_000, seed.wrapping_add(i as u64));
                out.push(check_mc_agreement(&plan, params, params, cfg)?);
            }
        }
    }
    Ok(out)
}
