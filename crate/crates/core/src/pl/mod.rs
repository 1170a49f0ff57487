//! Exact piecewise-linear geometry in the plane.
//!
//! All coordinates are [`BigRational`]s; nothing is compared with a
//! tolerance. Degenerate configurations are reported, never perturbed.

mod curve;
pub mod fixtures;
mod surface;
pub mod svg;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use curve::{
    cover_from_multiplicity, curve_ic, finite_model, ic_by_multiplicity, pl_local_injectivity, self_intersections,
    verify_param_cover, CircleComplement, CurveJson, LocalInjectivity, MultiplePoint, MultiplePointReport, Param,
    ParamCover, PLCurve,
};
pub use surface::{
    euclidean_obstruction, preimage_of_polygon, winding_number, Component, NodeKey, ObstructionReport, PLSurfaceMap, Preimage,
    SurfaceJson, Verdict,
};

pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlError {
    #[error("curve needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("zero-length edge at vertex {0}")]
    ZeroLengthEdge(usize),
    #[error("degenerate position: {first} and {second} {what}{}", hint.as_ref().map(|h| format!(" ({h})")).unwrap_or_default())]
    DegeneratePosition {
        what: String,
        first: String,
        second: String,
        hint: Option<String>,
    },
    #[error("triangle {0} has a degenerate image")]
    DegenerateTriangle(String),
    #[error("preimage of the circle is empty")]
    EmptyPreimage,
    #[error("preimage is not a 1-manifold near {0}")]
    NonManifold(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// A point of the rational plane.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(Q::from_integer(x.into()), Q::from_integer(y.into()))
    }

    pub fn origin() -> Self {
        Self::new(Q::zero(), Q::zero())
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, s: &Q) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    /// `self + t (to - self)`.
    pub fn lerp(&self, to: &Point, t: &Q) -> Point {
        self.add(&to.sub(self).scale(t))
    }

    pub fn cross(&self, o: &Point) -> Q {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Point) -> Q {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (q_to_f64(&self.x), q_to_f64(&self.y))
    }

    pub fn to_strings(&self) -> [String; 2] {
        [self.x.to_string(), self.y.to_string()]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Orientation of `c` relative to the directed line `a -> b`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Q {
    b.sub(a).cross(&c.sub(a))
}

pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Q, PlError> {
    let s = s.trim();
    let bad = || PlError::Invalid(format!("not a rational number: `{s}`"));
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let q = Q::new(num, den);
        return Ok(if neg { -q } else { q });
    }
    let q = Q::from_str(s).map_err(|_| bad())?;
    Ok(q)
}

/// Nearest rational to `v` with denominator `den`.
pub fn rational_approx(v: f64, den: i64) -> Q {
    Q::new(BigInt::from((v * den as f64).round() as i64), BigInt::from(den))
}

/// A rational point on the unit circle near angle `theta`, obtained from the
/// rational parameter `t ≈ tan(theta/2)` with denominator `den`. The result
/// is odd in `theta` and exact at `0` and `±π`.
pub fn unit_point(theta: f64, den: i64) -> Point {
    let theta = theta.rem_euclid(std::f64::consts::TAU);
    let theta = if theta > std::f64::consts::PI { theta - std::f64::consts::TAU } else { theta };
    if (theta.abs() - std::f64::consts::PI).abs() < 1e-12 {
        return Point::from_ints(-1, 0);
    }
    let t = rational_approx((theta.abs() / 2.0).tan(), den);
    let t = if theta < 0.0 { -t } else { t };
    let one = Q::one();
    let d = &one + &t * &t;
    Point::new((&one - &t * &t) / &d, (&t + &t) / &d)
}

/// Regular `m`-gon proxy of the unit circle: vertices on the circle near
/// angles `-π + 2π(j + 1/2)/m`, counter-clockwise and symmetric under
/// `y ↦ -y`. For even `m` no vertex lies on the x-axis.
pub fn circle_proxy(m: usize) -> Vec<Point> {
    (0..m)
        .map(|j| {
            let theta = -std::f64::consts::PI + std::f64::consts::TAU * (j as f64 + 0.5) / m as f64;
            unit_point(theta, 10_000)
        })
        .collect()
}

pub(crate) fn sign(q: &Q) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/4").unwrap(), Q::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-1.25").unwrap(), Q::new((-5).into(), 4.into()));
        assert_eq!(parse_rational("-0.5").unwrap(), Q::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("7").unwrap(), Q::from_integer(7.into()));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn unit_points_lie_on_the_circle() {
        for k in 0..37 {
            let p = unit_point(k as f64 * 0.3 - 5.0, 10_000);
            assert_eq!(p.dot(&p), Q::one());
        }
        assert_eq!(unit_point(0.0, 100), Point::from_ints(1, 0));
        assert_eq!(unit_point(std::f64::consts::PI, 100), Point::from_ints(-1, 0));
    }

    #[test]
    fn proxy_is_convex_and_symmetric() {
        for m in [3, 4, 7, 64] {
            let p = circle_proxy(m);
            for j in 0..m {
                let (a, b, c) = (&p[j], &p[(j + 1) % m], &p[(j + 2) % m]);
                assert!(orient(a, b, c).is_positive());
                let mirror = &p[m - 1 - j];
                assert_eq!((mirror.x.clone(), -mirror.y.clone()), (a.x.clone(), a.y.clone()));
                assert!(m % 2 == 1 || !a.y.is_zero());
            }
        }
    }

    #[test]
    fn float_conversion() {
        assert!((q_to_f64(&parse_rational("1/3").unwrap()) - 1.0 / 3.0).abs() < 1e-15);
    }
}
