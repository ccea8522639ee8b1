//! Transition density of the process on `E` with respect to `m_γ`.
//!
//! | pattern              | density                              |
//! |----------------------|--------------------------------------|
//! | both in `E1`         | `q(t,x,y) + ½(p^Ŷ − p_{R+})`         |
//! | both in `E2`         | `½(p^Ŷ + p_{R+})`                    |
//! | one in each          | `½(p^Ŷ − p_{R+})`                    |
//! | either at the origin | `½ p^Ŷ(t, 0, |y|)`                   |
//!
//! The one-dimensional kernels are evaluated at the radii `|x|`, `|y|`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Component, EPoint, KernelParams};
use crate::kernel3d::killed_kernel3d;
use crate::kernels1d::{check_time, hitting_part, killed_halfline_kernel, reflected_kernel};
use crate::quadrature::QuadConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// Both points in the 3D component.
    #[serde(rename = "i")]
    Both3d,
    /// Both points on the half-line.
    #[serde(rename = "ii")]
    Both1d,
    /// One point in each component.
    #[serde(rename = "iii")]
    Cross,
    /// At least one point at the origin.
    #[serde(rename = "iv")]
    Origin,
}

impl CaseTag {
    pub const ALL: [CaseTag; 4] = [CaseTag::Both3d, CaseTag::Both1d, CaseTag::Cross, CaseTag::Origin];

    pub fn label(self) -> &'static str {
        match self {
            CaseTag::Both3d => "i",
            CaseTag::Both1d => "ii",
            CaseTag::Cross => "iii",
            CaseTag::Origin => "iv",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }

    pub fn of(x: &EPoint, y: &EPoint) -> Self {
        match (x.component(), y.component()) {
            (Component::Origin, _) | (_, Component::Origin) => CaseTag::Origin,
            (Component::E1, Component::E1) => CaseTag::Both3d,
            (Component::E2, Component::E2) => CaseTag::Both1d,
            _ => CaseTag::Cross,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelVdValue {
    pub value: f64,
    pub case: CaseTag,
    pub error_estimate: f64,
}

/// `p(t, x, y)` with respect to `m_γ`. The arguments are put in canonical
/// order before dispatch, so `kernel(t,x,y)` and `kernel(t,y,x)` are
/// bit-identical.
pub fn kernel(t: f64, x: &EPoint, y: &EPoint, params: &KernelParams, cfg: &QuadConfig) -> Result<KernelVdValue> {
    check_time(t)?;
    let (x, y) = if x.total_cmp(y).is_le() { (x, y) } else { (y, x) };
    let case = CaseTag::of(x, y);
    let (a, b) = (x.radius(), y.radius());
    let (value, error_estimate) = match case {
        CaseTag::Origin => {
            let other = if x.is_origin() { y } else { x };
            let v = origin_kernel(t, other, params, cfg)?;
            (v.value, v.error_estimate)
        }
        CaseTag::Both3d => {
            let q = killed_kernel3d(t, x, y, params)?;
            let h = hitting_part(t, a, b, params, cfg)?;
            (q.value + h.value, q.error_estimate + h.error_estimate)
        }
        CaseTag::Both1d => {
            let r = reflected_kernel(t, a, b, params, cfg)?;
            let k = killed_halfline_kernel(t, a, b, params)?;
            (0.5 * (r.value + k.value), 0.5 * (r.error_estimate + k.error_estimate))
        }
        CaseTag::Cross => {
            let h = hitting_part(t, a, b, params, cfg)?;
            (h.value, h.error_estimate)
        }
    };
    Ok(KernelVdValue { value, case, error_estimate })
}

/// `p(t, 0, y) = ½ p^Ŷ(t, 0, |y|)`, the limit of the half-line and cross
/// cases as `|x| → 0`.
pub fn origin_kernel(t: f64, y: &EPoint, params: &KernelParams, cfg: &QuadConfig) -> Result<KernelVdValue> {
    let r = reflected_kernel(t, 0.0, y.radius(), params, cfg)?;
    Ok(KernelVdValue { value: 0.5 * r.value, case: CaseTag::Origin, error_estimate: 0.5 * r.error_estimate })
}
