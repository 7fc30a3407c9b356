//! Torus points, the wraparound circle metric, L_p distances, ball
//! volumes, and the weight-dependent connection threshold.

use crate::error::{domain, invalid, Error, Result};
use crate::special::{gamma, ln_gamma};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Norm order: a finite p >= 1 or the max-norm.
///
/// Infinity is a distinguished value rather than a large float, so the
/// cube fast paths stay exact and `|x|^p` never overflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormOrder {
    Finite(f64),
    Inf,
}

impl NormOrder {
    pub const INF: NormOrder = NormOrder::Inf;

    pub fn finite(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(domain(format!("norm order p must be >= 1, got {p}")));
        }
        Ok(NormOrder::Finite(p))
    }

    pub fn is_inf(self) -> bool {
        matches!(self, NormOrder::Inf)
    }

    pub fn p(self) -> Option<f64> {
        match self {
            NormOrder::Finite(p) => Some(p),
            NormOrder::Inf => None,
        }
    }

    /// Largest distance realizable on the unit torus under this norm.
    pub fn torus_diameter(self, dim: usize) -> f64 {
        match self {
            NormOrder::Finite(p) => 0.5 * (dim as f64).powf(1.0 / p),
            NormOrder::Inf => 0.5,
        }
    }
}

impl fmt::Display for NormOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormOrder::Inf => write!(f, "inf"),
            NormOrder::Finite(p) if p.fract() == 0.0 => write!(f, "{}", *p as i64),
            NormOrder::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for NormOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(NormOrder::Inf);
        }
        let p: f64 = s
            .parse()
            .map_err(|_| invalid(format!("cannot parse norm order {s:?}")))?;
        NormOrder::finite(p)
    }
}

impl Serialize for NormOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NormOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// A point on the unit torus; every coordinate lives in [0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    /// Wraps arbitrary real coordinates onto the torus.
    pub fn new(coords: Vec<f64>) -> Self {
        let coords = coords.into_iter().map(|c| c.rem_euclid(1.0)).collect();
        TorusPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Distance on the circle of circumference 1: min{|x-y|, 1-|x-y|}.
pub fn circle_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).abs();
    d.min(1.0 - d)
}

/// Torus L_p distance between equal-length coordinate slices.
pub fn torus_distance_slice(a: &[f64], b: &[f64], norm: NormOrder) -> f64 {
    assert_eq!(a.len(), b.len(), "torus points must share a dimension");
    match norm {
        NormOrder::Inf => a
            .iter()
            .zip(b)
            .map(|(&x, &y)| circle_distance(x, y))
            .fold(0.0, f64::max),
        NormOrder::Finite(p) => {
            let sum: f64 = a
                .iter()
                .zip(b)
                .map(|(&x, &y)| circle_distance(x, y).powf(p))
                .sum();
            sum.powf(1.0 / p)
        }
    }
}

/// Torus L_p distance between two points.
pub fn torus_distance(a: &TorusPoint, b: &TorusPoint, norm: NormOrder) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(torus_distance_slice(a.coords(), b.coords(), norm))
}

/// Volume of the unit ball B_p(1) in d dimensions.
///
/// (2 Γ(1/p + 1))^d / Γ(d/p + 1) for finite p; the cube volume 2^d for
/// the max-norm.
pub fn lp_ball_volume(d: usize, norm: NormOrder) -> Result<f64> {
    if d == 0 {
        return Err(domain("ball volume needs d >= 1"));
    }
    Ok(match norm {
        NormOrder::Inf => (2.0f64).powi(d as i32),
        NormOrder::Finite(p) => {
            let ln_num = d as f64 * (2.0 * gamma(1.0 / p + 1.0)).ln();
            (ln_num - ln_gamma(d as f64 / p + 1.0)).exp()
        }
    })
}

/// Volume of B_p(r): r^d * volume of the unit ball.
pub fn lp_ball_volume_scaled(d: usize, norm: NormOrder, r: f64) -> Result<f64> {
    Ok(r.powi(d as i32) * lp_ball_volume(d, norm)?)
}

/// Connection threshold t_uv: the distance below which u and v are
/// adjacent, calibrated so the marginal edge probability follows
/// min{1, lambda w_u w_v / n}.
///
/// Max-norm: (1/2)(lambda w_u w_v / n)^(1/d). Finite p: the radius of
/// the ball of volume lambda w_u w_v / n. When the radius leaves the
/// regime where the ball embeds in the torus the edge is unconditional
/// and the threshold snaps to the torus diameter.
pub fn connection_threshold(
    w_u: f64,
    w_v: f64,
    n: usize,
    lambda: f64,
    d: usize,
    norm: NormOrder,
) -> Result<f64> {
    if !(w_u > 0.0) || !(w_v > 0.0) {
        return Err(domain("weights must be positive"));
    }
    if n == 0 {
        return Err(domain("n must be >= 1"));
    }
    if !(lambda > 0.0) {
        return Err(domain("lambda must be positive"));
    }
    let vol1 = lp_ball_volume(d, norm)?;
    Ok(connection_threshold_with_volume(w_u, w_v, n, lambda, d, norm, vol1))
}

/// Threshold with the unit-ball volume precomputed; hot path for the
/// generators. Must stay the single source of edge semantics.
pub(crate) fn connection_threshold_with_volume(
    w_u: f64,
    w_v: f64,
    n: usize,
    lambda: f64,
    d: usize,
    norm: NormOrder,
    vol1: f64,
) -> f64 {
    let mass = lambda * w_u * w_v / n as f64;
    match norm {
        NormOrder::Inf => {
            let t = 0.5 * mass.powf(1.0 / d as f64);
            if t >= 0.5 {
                0.5
            } else {
                t
            }
        }
        NormOrder::Finite(_) => {
            let t = (mass / vol1).powf(1.0 / d as f64);
            if t > 0.5 {
                norm.torus_diameter(d)
            } else {
                t
            }
        }
    }
}
