//! Survival curves from signature mixtures.
//!
//! With `N(t)` the number of links failed by time `t` and the failure
//! process independent of the network structure,
//! `P(T > t) = Σ_i s_i · P(N(t) ≤ i − 1)`. A classic signature with the
//! binomial count of i.i.d. link lifetimes gives the order-statistic mixture.

use alloc::vec::Vec;

use crate::Error;

/// A link lifetime distribution.
pub trait LifetimeDistribution {
    fn cdf(&self, t: f64) -> f64;
    fn name(&self) -> &'static str;
    fn parameters(&self) -> Vec<(&'static str, f64)>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lifetime {
    Exponential { rate: f64 },
}

impl LifetimeDistribution for Lifetime {
    fn cdf(&self, t: f64) -> f64 {
        match *self {
            Lifetime::Exponential { rate } => -libm::expm1(-rate * t),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Lifetime::Exponential { .. } => "exponential",
        }
    }

    fn parameters(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Lifetime::Exponential { rate } => alloc::vec![("rate", rate)],
        }
    }
}

/// Law of `N(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CountingModel {
    /// Poisson arrivals of single failures at `rate` per unit time.
    Poisson { rate: f64 },
    /// `links` i.i.d. lifetimes; `N(t) ~ Binomial(links, F(t))`.
    Binomial { links: usize, lifetime: Lifetime },
}

fn positive(name: &str, v: f64) -> Result<(), Error> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Argument(alloc::format!("{name} must be positive and finite, got {v}")))
    }
}

impl CountingModel {
    pub fn poisson(rate: f64) -> Result<Self, Error> {
        positive("rate", rate)?;
        Ok(CountingModel::Poisson { rate })
    }

    pub fn binomial_exponential(links: usize, rate: f64) -> Result<Self, Error> {
        positive("rate", rate)?;
        if links == 0 {
            return Err(Error::Argument("binomial model needs at least one link".into()));
        }
        Ok(CountingModel::Binomial { links, lifetime: Lifetime::Exponential { rate } })
    }

    fn validate(&self) -> Result<(), Error> {
        match *self {
            CountingModel::Poisson { rate } => positive("rate", rate),
            CountingModel::Binomial { links, lifetime: Lifetime::Exponential { rate } } => {
                positive("rate", rate)?;
                if links == 0 {
                    return Err(Error::Argument("binomial model needs at least one link".into()));
                }
                Ok(())
            }
        }
    }
}

/// Adds `exp(logs)` without overflow or premature underflow.
fn sum_exp(logs: &[f64]) -> f64 {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return 0.0;
    }
    let s: f64 = logs.iter().map(|&l| libm::exp(l - max)).sum();
    libm::exp(max) * s
}

/// `P(N(t) ≤ j)`.
pub fn count_cdf(model: &CountingModel, j: usize, t: f64) -> Result<f64, Error> {
    model.validate()?;
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Argument(alloc::format!("time must be finite and >= 0, got {t}")));
    }
    let p = match *model {
        CountingModel::Poisson { rate } => {
            let x = rate * t;
            if x == 0.0 {
                return Ok(1.0);
            }
            let ln_x = libm::log(x);
            let mut logs = Vec::with_capacity(j + 1);
            let mut term = -x;
            logs.push(term);
            for r in 1..=j {
                term += ln_x - libm::log(r as f64);
                logs.push(term);
            }
            sum_exp(&logs)
        }
        CountingModel::Binomial { links, lifetime } => {
            use LifetimeDistribution as _;
            let f = lifetime.cdf(t);
            if j >= links || f <= 0.0 {
                return Ok(1.0);
            }
            if f >= 1.0 {
                return Ok(0.0);
            }
            let (ln_f, ln_q) = (libm::log(f), libm::log1p(-f));
            let mut logs = Vec::with_capacity(j + 1);
            let mut ln_choose = 0.0;
            for r in 0..=j {
                if r > 0 {
                    ln_choose += libm::log((links - r + 1) as f64) - libm::log(r as f64);
                }
                logs.push(ln_choose + r as f64 * ln_f + (links - r) as f64 * ln_q);
            }
            sum_exp(&logs)
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Survival probabilities on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityCurve {
    pub times: Vec<f64>,
    pub survival: Vec<f64>,
}

/// `points` evenly spaced times from 0 to `t_max` inclusive.
pub fn uniform_grid(t_max: f64, points: usize) -> Result<Vec<f64>, Error> {
    if points < 2 {
        return Err(Error::Argument("a grid needs at least two points".into()));
    }
    positive("t_max", t_max)?;
    let last = (points - 1) as f64;
    Ok((0..points).map(|i| t_max * i as f64 / last).collect())
}

/// `Σ_i s_i · P(N(t) ≤ i − 1)` at every grid time, normalised by `Σ s_i`
/// so the curve starts at exactly 1.
pub fn survival_mixture(values: &[f64], model: &CountingModel, grid: &[f64]) -> Result<ReliabilityCurve, Error> {
    if values.is_empty() {
        return Err(Error::Argument("empty signature".into()));
    }
    if values.iter().any(|&v| !v.is_finite() || v < 0.0) {
        return Err(Error::Argument("signature values must be finite and nonnegative".into()));
    }
    if let CountingModel::Binomial { links, .. } = *model {
        if links != values.len() {
            return Err(Error::Argument(alloc::format!(
                "binomial model has {links} links but the signature has {} components",
                values.len()
            )));
        }
    }
    if grid.iter().any(|t| t.is_nan()) || grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Argument("time grid must be ascending".into()));
    }
    let mass: f64 = values.iter().sum();
    if mass <= 0.0 {
        return Err(Error::Argument("signature has no mass".into()));
    }
    let mut survival = Vec::with_capacity(grid.len());
    for &t in grid {
        let mut acc = 0.0;
        for (i, &s) in values.iter().enumerate() {
            if s != 0.0 {
                acc += s * count_cdf(model, i, t)?;
            }
        }
        survival.push((acc / mass).clamp(0.0, 1.0));
    }
    Ok(ReliabilityCurve { times: grid.to_vec(), survival })
}
