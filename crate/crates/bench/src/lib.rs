//! Shared inputs for the criterion benchmarks.

use vdkernel::{EPoint, KernelParams, QuadConfig, Scheme, SimPlan, SimPoint};

pub fn params() -> KernelParams {
    KernelParams::new(1.0).expect("gamma = 1 is valid")
}

pub fn quad() -> QuadConfig {
    QuadConfig::default()
}

/// One representative pair of points per kernel case, labelled by case tag.
pub fn case_pairs() -> Vec<(&'static str, EPoint, EPoint)> {
    let e1 = |c| EPoint::e1(c).unwrap();
    let e2 = |u| EPoint::e2(u).unwrap();
    vec![
        ("i", e1([0.3, -0.4, 1.2]), e1([-1.0, 0.5, 0.2])),
        ("ii", e2(0.7), e2(1.8)),
        ("iii", e1([0.0, 0.0, 1.0]), e2(1.0)),
        ("iv", EPoint::origin(), e2(1.0)),
    ]
}

/// Times spanning the short, moderate and near-equilibrium regimes.
pub const TIMES: [f64; 3] = [0.05, 1.0, 20.0];

pub fn plan(scheme: Scheme, n_paths: usize) -> SimPlan {
    let x0 = match scheme {
        Scheme::FullSkewProduct => SimPoint::Point(EPoint::e1([1.0, 0.0, 0.0]).unwrap()),
        _ => SimPoint::Scalar(1.0),
    };
    SimPlan::new(scheme, x0, 1.0, 1e-3, n_paths, 17)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for (label, x, y) in case_pairs() {
            let v = vdkernel::kernel(1.0, &x, &y, &params(), &quad()).unwrap();
            assert_eq!(v.case.label(), label);
        }
        for s in [Scheme::Signed, Scheme::Reflected, Scheme::FullSkewProduct] {
            plan(s, 10).validate().unwrap();
        }
    }
}
