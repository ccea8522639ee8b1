//! Brownian motion on the unit sphere, generator `½Δ`.

use rand::Rng;
use rand_distr::StandardNormal;

/// Clock beyond which the law is replaced by the uniform distribution. The
/// slowest non-constant mode decays like `e^{-A}`, so at this clock the law
/// is uniform to well below Monte Carlo resolution.
pub const MIXING_CLOCK: f64 = 20.0;

/// Largest tangent-plane step.
pub const MAX_SUBSTEP: f64 = 1e-2;

pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Runs spherical Brownian motion from `start` for clock time `clock` with
/// tangent-plane Gaussian steps followed by renormalization.
pub fn evolve<R: Rng + ?Sized>(start: [f64; 3], clock: f64, rng: &mut R) -> [f64; 3] {
    if clock <= 0.0 {
        return start;
    }
    if clock >= MIXING_CLOCK {
        return uniform(rng);
    }
    let steps = (clock / MAX_SUBSTEP).ceil().max(1.0) as usize;
    let sd = (clock / steps as f64).sqrt();
    let mut u = start;
    for _ in 0..steps {
        let xi: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let radial = xi[0] * u[0] + xi[1] * u[1] + xi[2] * u[2];
        let mut v = [0.0; 3];
        for k in 0..3 {
            v[k] = u[k] + sd * (xi[k] - radial * u[k]);
        }
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        u = [v[0] / n, v[1] / n, v[2] / n];
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::rng::{path_rng, TAG_PATHS};

    #[test]
    fn uniform_points_are_unit_and_centred() {
        let mut rng = path_rng(1, TAG_PATHS, 0);
        let n = 50_000;
        let mut mean = [0.0; 3];
        for _ in 0..n {
            let u = uniform(&mut rng);
            assert!((u[0] * u[0] + u[1] * u[1] + u[2] * u[2] - 1.0).abs() < 1e-12);
            for k in 0..3 {
                mean[k] += u[k] / n as f64;
            }
        }
        // each coordinate has variance 1/3
        let se = (1.0 / 3.0 / n as f64).sqrt();
        assert!(mean.iter().all(|m| m.abs() < 4.0 * se), "{mean:?}");
    }

    #[test]
    fn mean_cosine_decays_like_exp_minus_clock() {
        // E[⟨U_A, u0⟩] = e^{-A} for Brownian motion on S² with generator ½Δ
        let mut rng = path_rng(2, TAG_PATHS, 0);
        let n = 20_000;
        for clock in [0.1, 0.5, 1.5] {
            let m: f64 = (0..n).map(|_| evolve([0.0, 0.0, 1.0], clock, &mut rng)[2]).sum::<f64>() / n as f64;
            let se = (1.0 / n as f64).sqrt();
            assert!((m - (-clock).exp()).abs() < 4.0 * se + 0.01, "clock={clock}: {m}");
        }
    }
}
