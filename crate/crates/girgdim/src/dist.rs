//! Sampling and closed-form evaluators for the distributions the model
//! is built from: Pareto weights, the chi_p family, and uniform points
//! in L_p unit balls.
//!
//! The component density of the chi_p family is gamma * exp(-|x|^p / 2)
//! with gamma = p / (2^(1/p+1) Gamma(1/p)). Its moment generating
//! function (1 - 2 lambda)^(-1/p) pins |X|^p to a Gamma(1/p, 2) law,
//! so scalar sampling reduces to a Gamma draw (Marsaglia-Tsang under
//! the hood) followed by a p-th root and a fair sign.

use crate::error::{domain, Result};
use crate::geometry::NormOrder;
use crate::special::gamma as gamma_fn;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

/// Pareto weight distribution: Pr[w <= x] = 1 - (x / w0)^(1 - beta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoParams {
    w0: f64,
    beta: f64,
}

impl ParetoParams {
    /// Requires w0 > 0 and beta > 2 (finite-mean regime).
    pub fn new(w0: f64, beta: f64) -> Result<Self> {
        if !(w0 > 0.0) {
            return Err(domain(format!("pareto minimum weight must be > 0, got {w0}")));
        }
        if !(beta > 2.0) {
            return Err(domain(format!("power-law exponent must be > 2, got {beta}")));
        }
        Ok(ParetoParams { w0, beta })
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Mean of the distribution: w0 (beta - 1) / (beta - 2).
    pub fn mean(&self) -> f64 {
        self.w0 * (self.beta - 1.0) / (self.beta - 2.0)
    }
}

impl Distribution<f64> for ParetoParams {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // random::<f64>() is uniform on [0, 1), inside the CDF domain.
        pareto_inverse_cdf(rng.random::<f64>(), self).expect("u in [0,1)")
    }
}

/// Inverse CDF of the Pareto law: w0 * (1 - u)^(1 / (1 - beta)).
pub fn pareto_inverse_cdf(u: f64, params: &ParetoParams) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(domain(format!("pareto inverse cdf needs u in [0,1), got {u}")));
    }
    Ok(params.w0 * (1.0 - u).powf(1.0 / (1.0 - params.beta)))
}

/// Parameters of the chi_p / chi^p family: norm order p and degrees of
/// freedom d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiPParams {
    pub p: f64,
    pub d: usize,
}

impl ChiPParams {
    pub fn new(p: f64, d: usize) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(domain(format!("chi_p needs p >= 1, got {p}")));
        }
        if d == 0 {
            return Err(domain("chi_p needs d >= 1"));
        }
        Ok(ChiPParams { p, d })
    }

    /// E[Z] for Z ~ chi^p(d).
    pub fn mean_power(&self) -> f64 {
        2.0 * self.d as f64 / self.p
    }
}

/// Normalizing constant gamma = p / (2^(1/p+1) Gamma(1/p)) of the
/// component density.
pub fn chi_p_normalizer(p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(domain(format!("chi_p normalizer needs p >= 1, got {p}")));
    }
    Ok(p / ((2.0f64).powf(1.0 / p + 1.0) * gamma_fn(1.0 / p)))
}

/// Moment generating function of chi^p(1): (1 - 2 lambda)^(-1/p) for
/// lambda < 1/2. Raise to the d-th power for d degrees of freedom.
pub fn chi_p_mgf(p: f64, lambda: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(domain(format!("chi_p mgf needs p >= 1, got {p}")));
    }
    if !(lambda < 0.5) {
        return Err(domain(format!("chi_p mgf diverges for lambda >= 1/2, got {lambda}")));
    }
    Ok((1.0 - 2.0 * lambda).powf(-1.0 / p))
}

/// Two-sided relative tail bound on Z ~ chi^p(d):
/// Pr[|Z - E[Z]| >= eps E[Z]] <= 2 exp(-2 delta d / p), with delta
/// solving eps = 2 (sqrt(2 delta) + delta).
pub fn chi_p_tail_bound(p: f64, d: usize, epsilon: f64) -> Result<f64> {
    let params = ChiPParams::new(p, d)?;
    if !(epsilon > 0.0) {
        return Err(domain(format!("tail bound needs eps > 0, got {epsilon}")));
    }
    // Substituting s = sqrt(2 delta): eps = 2s + s^2, so s = -1 + sqrt(1 + eps).
    let s = (1.0 + epsilon).sqrt() - 1.0;
    let delta = s * s / 2.0;
    Ok(2.0 * (-2.0 * delta * params.d as f64 / params.p).exp())
}

/// The scalar chi_p(1) distribution.
#[derive(Debug, Clone, Copy)]
pub struct ChiP {
    p_inv: f64,
    power_law: Gamma<f64>,
}

impl ChiP {
    pub fn new(p: f64) -> Result<Self> {
        let params = ChiPParams::new(p, 1)?;
        let power_law = Gamma::new(1.0 / params.p, 2.0)
            .map_err(|e| domain(format!("gamma law for chi_p: {e}")))?;
        Ok(ChiP { p_inv: 1.0 / params.p, power_law })
    }

    /// One draw of |X|^p, i.e. a chi^p(1) variate.
    pub fn sample_power<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.power_law.sample(rng)
    }
}

impl Distribution<f64> for ChiP {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let magnitude = self.power_law.sample(rng).powf(self.p_inv);
        if rng.random::<bool>() {
            magnitude
        } else {
            -magnitude
        }
    }
}

/// One chi_p(1) draw.
pub fn sample_chi_p_scalar<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Result<f64> {
    Ok(ChiP::new(p)?.sample(rng))
}

/// One chi^p(d) draw: the sum of d independent |X_i|^p.
pub fn sample_chi_p_power<R: Rng + ?Sized>(p: f64, d: usize, rng: &mut R) -> Result<f64> {
    ChiPParams::new(p, d)?;
    let chi = ChiP::new(p)?;
    Ok((0..d).map(|_| chi.sample_power(rng)).sum())
}

/// Uniform sampler over the L_p unit ball in d dimensions.
///
/// Finite p couples a chi_p(d) direction with an independent radius
/// U^(1/d); the max-norm ball is the cube [-1, 1]^d and is sampled
/// coordinatewise.
#[derive(Debug, Clone, Copy)]
pub struct UnitBall {
    d: usize,
    norm: NormOrder,
    chi: Option<ChiP>,
    p_inv: f64,
}

impl UnitBall {
    pub fn new(d: usize, norm: NormOrder) -> Result<Self> {
        if d == 0 {
            return Err(domain("unit ball needs d >= 1"));
        }
        let (chi, p_inv) = match norm {
            NormOrder::Inf => (None, 0.0),
            NormOrder::Finite(p) => (Some(ChiP::new(p)?), 1.0 / p),
        };
        Ok(UnitBall { d, norm, chi, p_inv })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Fills `out` (length d) with one uniform draw from the ball.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        assert_eq!(out.len(), self.d);
        match (self.norm, &self.chi) {
            (NormOrder::Inf, _) => {
                for x in out.iter_mut() {
                    *x = 2.0 * rng.random::<f64>() - 1.0;
                }
            }
            (NormOrder::Finite(_), Some(chi)) => {
                // out temporarily holds signed |z_i|^p; sum gives ||z||_p^p.
                let mut sum;
                loop {
                    sum = 0.0;
                    for x in out.iter_mut() {
                        let g = chi.sample_power(rng);
                        *x = if rng.random::<bool>() { g } else { -g };
                        sum += g;
                    }
                    if sum > 0.0 {
                        break;
                    }
                }
                let r = rng.random::<f64>().powf(1.0 / self.d as f64);
                for x in out.iter_mut() {
                    let dir = (x.abs() / sum).powf(self.p_inv);
                    *x = r * dir.copysign(*x);
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Distribution<Vec<f64>> for UnitBall {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.d];
        self.sample_into(rng, &mut out);
        out
    }
}

/// One uniform point in the d-dimensional L_p unit ball.
pub fn sample_unit_ball<R: Rng + ?Sized>(
    d: usize,
    norm: NormOrder,
    rng: &mut R,
) -> Result<Vec<f64>> {
    Ok(UnitBall::new(d, norm)?.sample(rng))
}
