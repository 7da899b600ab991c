//! Closed-form cost bounds.
//!
//! Any covering path with `T` stops and length `L` on a grid of area
//! `A > 2k^2` satisfies `(T-1) f(L/(T-1)) >= A - 2k^2`, where `f` is the
//! per-stop coverage trade-off below. Minimising `alpha L + beta T` under
//! that constraint gives the per-area constant `sigma`, and the
//! constructions in this crate stay within `2 sigma (A + 16kP + 32k^2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::rational::{self, Q};

/// Perimeter coefficient of the construction's upper bound.
pub const C1: f64 = 16.0;
/// Constant coefficient of the construction's upper bound.
pub const C2: f64 = 32.0;

/// Coverage radius and objective weights of `alpha L + beta T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    #[serde(with = "crate::rational")]
    pub k: Q,
    pub alpha: f64,
    pub beta: f64,
}

impl CostParams {
    pub fn new(k: Q, alpha: f64, beta: f64) -> Result<Self> {
        if k <= rational::q(0) {
            return Err(Error::Domain(format!("coverage radius k must be positive, got {k}")));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::Domain(format!("beta must be non-negative, got {beta}")));
        }
        Ok(CostParams { k, alpha, beta })
    }

    pub fn k_f64(&self) -> f64 {
        rational::to_f64(&self.k)
    }

    pub fn gamma(&self) -> f64 {
        gamma(self.alpha, self.beta, self.k_f64())
    }

    pub fn sigma(&self) -> f64 {
        sigma(self.alpha, self.beta, self.k_f64())
    }

    /// Optimal average inter-stop distance; `None` when `beta = 0`, where the
    /// optimum degenerates.
    pub fn d_star(&self) -> Option<f64> {
        optimal_spacing(self.alpha, self.beta, self.k_f64())
    }

    pub fn cost(&self, length: f64, stops: usize) -> f64 {
        self.alpha * length + self.beta * stops as f64
    }
}

/// Unique coverage area per stop as a function of the average spacing `d`:
/// `d (2k - d/2)` up to `d = 2k`, then `2k^2`.
pub fn tradeoff_area(d: f64, k: f64) -> Result<f64> {
    if d.is_nan() || k.is_nan() || d <= 0.0 || k <= 0.0 {
        return Err(Error::Domain(format!(
            "tradeoff_area needs d > 0 and k > 0, got d={d}, k={k}"
        )));
    }
    Ok(if d <= 2.0 * k {
        d * (2.0 * k - d / 2.0)
    } else {
        2.0 * k * k
    })
}

/// Exact `tradeoff_area` on rationals.
pub fn tradeoff_area_exact(d: &Q, k: &Q) -> Q {
    let two = rational::q(2);
    if *d <= two * k {
        d * (two * k - d / two)
    } else {
        two * k * k
    }
}

/// `gamma = (4ak + b + sqrt((4ak + b) b)) / (2k (4ak + b))`.
///
/// `alpha = 0` is accepted here (unlike [`CostParams::new`]) so limit cases
/// can be evaluated.
pub fn gamma(alpha: f64, beta: f64, k: f64) -> f64 {
    let m = 4.0 * alpha * k + beta;
    (m + (m * beta).sqrt()) / (2.0 * k * m)
}

/// Exact `gamma` when `(4ak + b) b` is the square of a rational.
pub fn gamma_exact(alpha: &Q, beta: &Q, k: &Q) -> Option<Q> {
    let m = rational::q(4) * alpha * k + beta;
    let root = rational_sqrt(&(m * beta))?;
    Some((m + root) / (rational::q(2) * k * m))
}

fn rational_sqrt(v: &Q) -> Option<Q> {
    let n = int_sqrt(*v.numer())?;
    let d = int_sqrt(*v.denom())?;
    Some(Q::new(n, d))
}

fn int_sqrt(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let r = num_integer::Roots::sqrt(&v);
    (r * r == v).then_some(r)
}

/// Per-area cost constant. At `beta = 0` this is the limit `alpha / (2k)`.
pub fn sigma(alpha: f64, beta: f64, k: f64) -> f64 {
    if beta == 0.0 {
        return alpha / (2.0 * k);
    }
    let g = gamma(alpha, beta, k);
    alpha * g + beta * g * g / (4.0 * k * g - 2.0)
}

/// The same constant written through the optimal spacing:
/// `(alpha d* + beta) / f(d*)`. Requires `beta > 0`.
pub fn sigma_via_spacing(alpha: f64, beta: f64, k: f64) -> Option<f64> {
    let d = optimal_spacing(alpha, beta, k)?;
    Some((alpha * d + beta) / tradeoff_area(d, k).ok()?)
}

/// `d* = (4k gamma - 2) / gamma`, in `(0, 2k]` whenever `beta > 0`.
pub fn optimal_spacing(alpha: f64, beta: f64, k: f64) -> Option<f64> {
    if beta <= 0.0 {
        return None;
    }
    let g = gamma(alpha, beta, k);
    Some((4.0 * k * g - 2.0) / g)
}

/// The objective `C(L) = alpha L + beta L^2 / (2(2kL - A0)) + beta` along the
/// trade-off frontier, defined for `L > A0 / (2k)`.
pub fn frontier_cost(alpha: f64, beta: f64, k: f64, a0: f64, length: f64) -> f64 {
    alpha * length + beta * length * length / (2.0 * (2.0 * k * length - a0)) + beta
}

/// `2 sigma (A + 16kP + 32k^2)`.
pub fn upper_bound_general(p: &CostParams, area: f64, perimeter: f64) -> f64 {
    2.0 * upper_bound_convex(p, area, perimeter)
}

/// `sigma (A + 16kP + 32k^2)`; applies to convex grids.
pub fn upper_bound_convex(p: &CostParams, area: f64, perimeter: f64) -> f64 {
    let k = p.k_f64();
    p.sigma() * (area + C1 * k * perimeter + C2 * k * k)
}

/// Optimum of the relaxed problem together with the upper bounds for one
/// grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsProfile {
    pub gamma: f64,
    pub sigma: f64,
    pub d_star: Option<f64>,
    pub l_star: f64,
    pub t0_star: Option<f64>,
    pub a0: f64,
    /// `sigma A0 + beta`, the value of the relaxed optimum.
    pub lower_bound: f64,
    /// `sigma (A - 2k^2)`, the looser published form.
    pub base_lower_bound: f64,
    pub upper_general: f64,
    pub upper_convex: f64,
    /// `A <= 2k^2`: one stop may suffice, only `beta` is claimed.
    pub degenerate: bool,
}

/// Evaluates the optimum for area `area` (perimeter only feeds the upper
/// bounds).
pub fn optimal_profile(p: &CostParams, area: f64, perimeter: f64) -> BoundsProfile {
    let k = p.k_f64();
    let gamma = p.gamma();
    let sigma = p.sigma();
    let d_star = p.d_star();
    let raw_a0 = area - 2.0 * k * k;
    let degenerate = raw_a0 <= 0.0;
    let a0 = raw_a0.max(0.0);
    let l_star = gamma * a0;
    let t0_star = if p.beta > 0.0 {
        Some(gamma * gamma * a0 / (4.0 * k * gamma - 2.0))
    } else {
        None
    };
    let lower_bound = if degenerate { p.beta } else { sigma * a0 + p.beta };
    BoundsProfile {
        gamma,
        sigma,
        d_star,
        l_star,
        t0_star,
        a0,
        lower_bound,
        base_lower_bound: sigma * raw_a0,
        upper_general: upper_bound_general(p, area, perimeter),
        upper_convex: upper_bound_convex(p, area, perimeter),
        degenerate,
    }
}

pub fn profile_for_grid(p: &CostParams, g: &Grid) -> BoundsProfile {
    optimal_profile(p, g.area() as f64, g.perimeter() as f64)
}
