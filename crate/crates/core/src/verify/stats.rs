//! Goodness-of-fit statistics for comparing Monte Carlo samples with
//! analytic laws.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Number of cells after merging.
    pub cells: usize,
}

/// Pearson χ² of `observed` counts against cell probabilities `expected`
/// for `n` samples. Adjacent cells are merged left to right until each
/// holds at least `min_expected` expected counts; a short trailing group is
/// folded into its neighbour.
pub fn chi_square(observed: &[f64], expected: &[f64], n: f64, min_expected: f64) -> Result<ChiSquareOutcome> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(Error::InvalidInput("observed and expected cells must match".into()));
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&oi, &pi) in observed.iter().zip(expected) {
        o += oi;
        e += pi * n;
        if e >= min_expected {
            cells.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => cells.push((o, e)),
        }
    }
    if cells.len() < 2 {
        return Err(Error::InvalidInput("fewer than two cells after merging".into()));
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len() - 1;
    let law = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    Ok(ChiSquareOutcome { statistic, dof, p_value: law.sf(statistic), cells: cells.len() })
}

/// Upper `alpha` quantile of the χ² law with `dof` degrees of freedom.
pub fn chi_square_critical(dof: usize, alpha: f64) -> f64 {
    ChiSquared::new(dof as f64).expect("positive degrees of freedom").inverse_cdf(1.0 - alpha)
}

/// Asymptotic Kolmogorov tail `P(K > λ)`.
fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = 2.0 * (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let s = n_eff.sqrt();
    kolmogorov_sf((s + 0.12 + 0.11 / s) * d)
}

/// One-sample Kolmogorov–Smirnov test; returns `(D, p)`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok((d, ks_p_value(d, n)))
}

/// Two-sample Kolmogorov–Smirnov test; returns `(D, p)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok((d, ks_p_value(d, na * nb / (na + nb))))
}
