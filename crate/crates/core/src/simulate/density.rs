use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{KernelParams, MeasureTag};

/// Histogram of scalar samples. Bins are half-open `[e_i, e_{i+1})` except
/// the last, which also contains its right edge. Samples outside the edges
/// are counted in `n_samples` but in no bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDensity {
    pub bin_edges: Vec<f64>,
    pub masses: Vec<f64>,
    pub measure: MeasureTag,
    pub n_samples: usize,
}

impl EmpiricalDensity {
    pub fn counts(&self) -> Vec<f64> {
        self.masses.iter().map(|m| m * self.n_samples as f64).collect()
    }

    /// Per-bin density with respect to `measure`: mass divided by the
    /// measure of the bin.
    pub fn densities(&self, params: &KernelParams) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .zip(&self.masses)
            .map(|(w, m)| m / self.measure.interval_mass(w[0], w[1], params))
            .collect()
    }
}

pub fn empirical_density(samples: &[f64], bin_edges: &[f64], measure: MeasureTag) -> Result<EmpiricalDensity> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if bin_edges.len() < 2 || bin_edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::UnsortedEdges);
    }
    let bins = bin_edges.len() - 1;
    let (lo, hi) = (bin_edges[0], bin_edges[bins]);
    let mut counts = vec![0usize; bins];
    for &s in samples {
        if s < lo || s > hi || s.is_nan() {
            continue;
        }
        let idx = bin_edges.partition_point(|e| *e <= s).saturating_sub(1).min(bins - 1);
        counts[idx] += 1;
    }
    let n = samples.len() as f64;
    Ok(EmpiricalDensity {
        bin_edges: bin_edges.to_vec(),
        masses: counts.iter().map(|&c| c as f64 / n).collect(),
        measure,
        n_samples: samples.len(),
    })
}
