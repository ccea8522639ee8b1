//! The glued state space `E = E1 ∪ E2`: a copy of R³ and a half-line that
//! share a single point, the origin.
//!
//! Points are kept in canonical form. The shared point is only ever the
//! [`Component::Origin`] tag; a 3D point never has zero coordinates and a
//! half-line point never sits at zero. Kernels are singular-weighted at the
//! origin, so there is no silent coercion of tiny radii.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radii below this are rejected when building a point.
pub const MIN_RADIUS: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    /// The shared point.
    Origin,
    /// The half-line `E2`.
    E2,
    /// The three-dimensional part `E1`.
    E1,
}

impl Component {
    pub fn tag(self) -> &'static str {
        match self {
            Component::Origin => "O",
            Component::E1 => "E1",
            Component::E2 => "E2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Coords {
    Origin,
    E1([f64; 3]),
    E2(f64),
}

/// A point of `E` in canonical form.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct EPoint(Coords);

impl EPoint {
    pub const ORIGIN: EPoint = EPoint(Coords::Origin);

    pub fn origin() -> Self {
        Self::ORIGIN
    }

    /// A point of the 3D component. Rejects non-finite coordinates and radii
    /// below [`MIN_RADIUS`].
    pub fn e1(coords: [f64; 3]) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite 3D coordinates {coords:?}")));
        }
        let r = norm3(coords);
        if !(r >= MIN_RADIUS) {
            return Err(Error::InvalidPoint(format!(
                "3D radius {r:e} is below {MIN_RADIUS:e}; use the origin tag"
            )));
        }
        Ok(EPoint(Coords::E1(coords)))
    }

    /// A point of the half-line at distance `u` from the origin.
    pub fn e2(u: f64) -> Result<Self> {
        if !u.is_finite() || u < MIN_RADIUS {
            return Err(Error::InvalidPoint(format!(
                "half-line coordinate must be finite and >= {MIN_RADIUS:e}, got {u}"
            )));
        }
        Ok(EPoint(Coords::E2(u)))
    }

    /// The point of `E1` at radius `r` along the first axis.
    pub fn e1_on_axis(r: f64) -> Result<Self> {
        Self::e1([r, 0.0, 0.0])
    }

    /// Inverse of [`signed_radial`] for the half-line and the origin; positive
    /// values land on the first axis of `E1`.
    pub fn from_signed_radial(y: f64) -> Result<Self> {
        if y == 0.0 {
            Ok(Self::ORIGIN)
        } else if y > 0.0 {
            Self::e1_on_axis(y)
        } else {
            Self::e2(-y)
        }
    }

    pub fn component(&self) -> Component {
        match self.0 {
            Coords::Origin => Component::Origin,
            Coords::E1(_) => Component::E1,
            Coords::E2(_) => Component::E2,
        }
    }

    pub fn coords3(&self) -> Option<[f64; 3]> {
        match self.0 {
            Coords::E1(c) => Some(c),
            _ => None,
        }
    }

    pub fn coord1(&self) -> Option<f64> {
        match self.0 {
            Coords::E2(u) => Some(u),
            _ => None,
        }
    }

    pub fn is_origin(&self) -> bool {
        matches!(self.0, Coords::Origin)
    }

    /// Distance to the origin.
    pub fn radius(&self) -> f64 {
        match self.0 {
            Coords::Origin => 0.0,
            Coords::E1(c) => norm3(c),
            Coords::E2(u) => u,
        }
    }

    /// A total order on canonical points: origin, then half-line, then 3D,
    /// ties broken coordinate-wise. Used to order kernel arguments so that
    /// evaluation is symmetric bit-for-bit.
    pub fn total_cmp(&self, other: &EPoint) -> Ordering {
        self.component().cmp(&other.component()).then_with(|| match (self.0, other.0) {
            (Coords::E2(a), Coords::E2(b)) => a.total_cmp(&b),
            (Coords::E1(a), Coords::E1(b)) => a[0]
                .total_cmp(&b[0])
                .then(a[1].total_cmp(&b[1]))
                .then(a[2].total_cmp(&b[2])),
            _ => Ordering::Equal,
        })
    }
}

impl fmt::Debug for EPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Coords::Origin => write!(f, "O"),
            Coords::E1(c) => write!(f, "E1({}, {}, {})", c[0], c[1], c[2]),
            Coords::E2(u) => write!(f, "E2({u})"),
        }
    }
}

impl fmt::Display for EPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Wire form: `{"component": "E1"|"E2"|"O", "coords": [..]}`.
#[derive(Serialize, Deserialize)]
struct RawPoint {
    component: String,
    #[serde(default)]
    coords: Vec<f64>,
}

impl TryFrom<RawPoint> for EPoint {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Self> {
        match (raw.component.as_str(), raw.coords.as_slice()) {
            ("O", []) => Ok(EPoint::ORIGIN),
            ("E1", &[a, b, c]) => EPoint::e1([a, b, c]),
            ("E2", &[u]) => EPoint::e2(u),
            (comp, coords) => Err(Error::InvalidPoint(format!(
                "component {comp:?} does not accept coords {coords:?}"
            ))),
        }
    }
}

impl From<EPoint> for RawPoint {
    fn from(p: EPoint) -> Self {
        let coords = match p.0 {
            Coords::Origin => vec![],
            Coords::E1(c) => c.to_vec(),
            Coords::E2(u) => vec![u],
        };
        RawPoint { component: p.component().tag().to_owned(), coords }
    }
}

pub(crate) fn norm3(c: [f64; 3]) -> f64 {
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

pub(crate) fn dist3_sq(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

/// Metric on `E`: Euclidean inside a component, sum of radii across.
pub fn distance(a: &EPoint, b: &EPoint) -> f64 {
    match (a.0, b.0) {
        (Coords::E1(p), Coords::E1(q)) => dist3_sq(p, q).sqrt(),
        (Coords::E2(u), Coords::E2(v)) => (u - v).abs(),
        _ => a.radius() + b.radius(),
    }
}

/// `+|a|` on `E1`, `-|a|` on `E2`, zero at the origin.
pub fn signed_radial(a: &EPoint) -> f64 {
    match a.0 {
        Coords::Origin => 0.0,
        Coords::E1(c) => norm3(c),
        Coords::E2(u) => -u,
    }
}

/// The distortion parameter and the weights derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct KernelParams {
    gamma: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    gamma: f64,
}

impl TryFrom<RawParams> for KernelParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        KernelParams::new(raw.gamma)
    }
}

impl From<KernelParams> for RawParams {
    fn from(p: KernelParams) -> Self {
        RawParams { gamma: p.gamma }
    }
}

impl KernelParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::InvalidGamma(gamma))
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `ψ_γ` as a function of the radius `r = |x| > 0` of a 3D point.
    pub fn psi(&self, r: f64) -> f64 {
        (self.gamma / (2.0 * PI)).sqrt() * (-self.gamma * r).exp() / r
    }

    /// `φ_γ(u) = sqrt(2γ) e^{-γu}` on the half-line.
    pub fn phi(&self, u: f64) -> f64 {
        (2.0 * self.gamma).sqrt() * (-self.gamma * u).exp()
    }

    /// Scale function of the radial diffusion.
    pub fn scale(&self, u: f64) -> f64 {
        (2.0 * self.gamma * u).exp() / (4.0 * self.gamma * self.gamma)
    }

    /// Speed density `2γ e^{-2γu}` of the radial diffusion; also the density
    /// of `m^{(+)}` and the radial marginal of `m_γ` on either component.
    pub fn speed_density(&self, u: f64) -> f64 {
        2.0 * self.gamma * (-2.0 * self.gamma * u).exp()
    }

    /// `h_γ(y)²`, the Lebesgue density of `m_γ` at `y`.
    pub fn h_squared(&self, y: &EPoint) -> Result<f64> {
        match y.component() {
            Component::E1 => Ok(self.psi(y.radius()).powi(2)),
            Component::E2 => Ok(self.speed_density(y.radius())),
            Component::Origin => Err(Error::SingularWeight(
                "m_gamma has no finite Lebesgue density at the origin".into(),
            )),
        }
    }
}

/// Reference measures that densities may be expressed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureTag {
    /// `m_γ` on `E`.
    MGamma,
    /// `m̃(dx) = 2γ e^{-2γ|x|} dx` on R.
    MTilde,
    /// `m^{(+)}(du) = 2γ e^{-2γu} du` on `[0, ∞)`.
    MPlus,
    Lebesgue,
}

impl MeasureTag {
    /// Lebesgue density of the measure at `y`.
    fn lebesgue_density(self, y: &EPoint, params: &KernelParams) -> Result<f64> {
        match self {
            MeasureTag::Lebesgue => Ok(1.0),
            MeasureTag::MGamma => params.h_squared(y),
            MeasureTag::MTilde | MeasureTag::MPlus => Ok(params.speed_density(y.radius())),
        }
    }

    /// Mass the measure gives to `[a, b]`. For `MGamma` the interval is read
    /// as a radial shell on one component.
    pub fn interval_mass(self, a: f64, b: f64, params: &KernelParams) -> f64 {
        let g2 = 2.0 * params.gamma();
        let tail = |u: f64| (-g2 * u).exp();
        match self {
            MeasureTag::Lebesgue => b - a,
            MeasureTag::MPlus | MeasureTag::MGamma => {
                let (a, b) = (a.max(0.0), b.max(0.0));
                tail(a) - tail(b)
            }
            MeasureTag::MTilde => {
                if a >= 0.0 {
                    tail(a) - tail(b)
                } else if b <= 0.0 {
                    tail(-b) - tail(-a)
                } else {
                    2.0 - tail(-a) - tail(b)
                }
            }
        }
    }

    pub fn total_mass(self) -> f64 {
        match self {
            MeasureTag::MGamma | MeasureTag::MTilde => 2.0,
            MeasureTag::MPlus => 1.0,
            MeasureTag::Lebesgue => f64::INFINITY,
        }
    }
}

/// Re-express a density at `y` against a different reference measure.
///
/// Supported pairs are Lebesgue ↔ `MGamma` on `E`, and Lebesgue ↔
/// `MTilde`/`MPlus` on the line (where `y` is read through its radius).
pub fn convert_density(
    value: f64,
    y: &EPoint,
    from: MeasureTag,
    to: MeasureTag,
    params: &KernelParams,
) -> Result<f64> {
    use MeasureTag::*;
    if from == to {
        return Ok(value);
    }
    match (from, to) {
        (Lebesgue, _) => Ok(value / to.lebesgue_density(y, params)?),
        (_, Lebesgue) => Ok(value * from.lebesgue_density(y, params)?),
        _ => Err(Error::UnsupportedPair { from, to }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p1() -> KernelParams {
        KernelParams::new(1.0).unwrap()
    }

    #[test]
    fn distance_examples() {
        let o = EPoint::origin();
        assert_eq!(distance(&o, &o), 0.0);
        let a = EPoint::e1([1.0, 0.0, 0.0]).unwrap();
        let b = EPoint::e2(2.0).unwrap();
        assert_eq!(distance(&a, &b), 3.0);
        let c = EPoint::e1([0.0, 1.0, 0.0]).unwrap();
        assert!((distance(&a, &c) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn signed_radial_examples() {
        assert_eq!(signed_radial(&EPoint::origin()), 0.0);
        assert_eq!(signed_radial(&EPoint::e1([0.0, 0.0, 2.0]).unwrap()), 2.0);
        assert_eq!(signed_radial(&EPoint::e2(0.5).unwrap()), -0.5);
    }

    #[test]
    fn canonical_form_is_enforced() {
        assert!(EPoint::e1([0.0, 0.0, 0.0]).is_err());
        assert!(EPoint::e1([1e-301, 0.0, 0.0]).is_err());
        assert!(EPoint::e1([f64::NAN, 1.0, 0.0]).is_err());
        assert!(EPoint::e2(0.0).is_err());
        assert!(EPoint::e2(-1.0).is_err());
        assert!(EPoint::e2(1e-300).is_ok());
        assert!(KernelParams::new(0.0).is_err());
        assert!(KernelParams::new(-1.0).is_err());
        assert!(KernelParams::new(f64::NAN).is_err());
    }

    #[test]
    fn json_wire_format() {
        let p: EPoint = serde_json::from_str(r#"{"component":"E1","coords":[1,2,2]}"#).unwrap();
        assert_eq!(p.radius(), 3.0);
        let o: EPoint = serde_json::from_str(r#"{"component":"O"}"#).unwrap();
        assert!(o.is_origin());
        let q: EPoint = serde_json::from_str(r#"{"component":"E2","coords":[0.5]}"#).unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"{"component":"E2","coords":[0.5]}"#);
        assert!(serde_json::from_str::<EPoint>(r#"{"component":"E2","coords":[1,2]}"#).is_err());
        assert!(serde_json::from_str::<EPoint>(r#"{"component":"E1","coords":[0,0,0]}"#).is_err());
        assert!(serde_json::from_str::<EPoint>(r#"{"component":"X"}"#).is_err());
    }

    #[test]
    fn convert_density_examples() {
        let params = p1();
        let y = EPoint::e2(1.0).unwrap();
        let v = convert_density(1.0, &y, MeasureTag::Lebesgue, MeasureTag::MPlus, &params).unwrap();
        assert!((v - 0.5 * 2f64.exp()).abs() < 1e-14 * v);
        assert!((v - 3.694_528_049_465_325).abs() < 1e-12);

        let y3 = EPoint::e1([0.0, 1.0, 0.0]).unwrap();
        let v = convert_density(1.0, &y3, MeasureTag::Lebesgue, MeasureTag::MGamma, &params).unwrap();
        assert!((v - 46.426_808_714_726_77).abs() < 1e-11);

        let back = convert_density(v, &y3, MeasureTag::MGamma, MeasureTag::Lebesgue, &params).unwrap();
        assert!((back - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn convert_density_errors() {
        let params = p1();
        let o = EPoint::origin();
        assert!(matches!(
            convert_density(1.0, &o, MeasureTag::Lebesgue, MeasureTag::MGamma, &params),
            Err(Error::SingularWeight(_))
        ));
        // the line measures have a finite weight at zero
        assert!(convert_density(1.0, &o, MeasureTag::Lebesgue, MeasureTag::MTilde, &params).is_ok());
        let y = EPoint::e2(1.0).unwrap();
        assert!(matches!(
            convert_density(1.0, &y, MeasureTag::MGamma, MeasureTag::MTilde, &params),
            Err(Error::UnsupportedPair { .. })
        ));
    }

    #[test]
    fn interval_masses() {
        let params = KernelParams::new(0.7).unwrap();
        let big = 200.0;
        assert!((MeasureTag::MTilde.interval_mass(-big, big, &params) - 2.0).abs() < 1e-15);
        assert!((MeasureTag::MPlus.interval_mass(0.0, big, &params) - 1.0).abs() < 1e-15);
        let split = MeasureTag::MTilde.interval_mass(-0.3, 0.4, &params);
        let parts = MeasureTag::MTilde.interval_mass(-0.3, 0.0, &params)
            + MeasureTag::MTilde.interval_mass(0.0, 0.4, &params);
        assert!((split - parts).abs() < 1e-15);
    }

    fn arb_point() -> impl Strategy<Value = EPoint> {
        prop_oneof![
            Just(EPoint::origin()),
            (0.01f64..5.0).prop_map(|u| EPoint::e2(u).unwrap()),
            (-3.0f64..3.0, -3.0f64..3.0, 0.01f64..3.0).prop_map(|(a, b, c)| EPoint::e1([a, b, c]).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn triangle_inequality(a in arb_point(), b in arb_point(), c in arb_point()) {
            let ab = distance(&a, &b);
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(ab, distance(&b, &a));
            prop_assert!(ab <= distance(&a, &c) + distance(&c, &b) + 1e-12);
        }

        #[test]
        fn signed_radial_magnitude_is_radius(a in arb_point()) {
            prop_assert_eq!(signed_radial(&a).abs(), a.radius());
            prop_assert_eq!(a.radius() == 0.0, a.is_origin());
        }

        #[test]
        fn lebesgue_mgamma_round_trip(a in arb_point().prop_filter("not origin", |p| !p.is_origin()),
                                      v in 1e-3f64..1e3, gamma in 0.1f64..3.0) {
            let params = KernelParams::new(gamma).unwrap();
            let there = convert_density(v, &a, MeasureTag::Lebesgue, MeasureTag::MGamma, &params).unwrap();
            let back = convert_density(there, &a, MeasureTag::MGamma, MeasureTag::Lebesgue, &params).unwrap();
            prop_assert!(((back - v) / v).abs() <= 1e-14);
        }
    }
}
