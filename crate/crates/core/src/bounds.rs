//! Closed-form upper bounds on `I(f(X); Y)` and on the even posterior
//! moments, each with its validity premise.
//!
//! A bound evaluated outside its premise is an error, never a clamped value.
//! All constants come from runtime transcendentals.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::channel::{self, entropy_deficit, log2_e, NoiseParameter};
use crate::hypercube::BooleanFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("crossover probability must lie in [0, 1/2], got {0}")]
    AlphaOutOfRange(f64),
    #[error("{bound} needs alpha >= {threshold}, got {alpha}")]
    PremiseViolated {
        bound: &'static str,
        alpha: f64,
        threshold: f64,
    },
    #[error("order must be a positive integer")]
    ZeroOrder,
    #[error("variable count must be positive")]
    ZeroDimension,
}

pub type Result<T, E = BoundError> = std::result::Result<T, E>;

fn rho_of(alpha: f64) -> Result<f64> {
    NoiseParameter::new(alpha)
        .map(NoiseParameter::rho)
        .map_err(|_| BoundError::AlphaOutOfRange(alpha))
}

/// `1 - h(α)`: the conjectured maximum, attained by dictators.
pub fn conjectured_bound(alpha: f64) -> Result<f64> {
    rho_of(alpha).map(entropy_deficit)
}

/// `(1 - 2α)²`, valid for every Boolean function.
pub fn quadratic_bound(alpha: f64) -> Result<f64> {
    rho_of(alpha).map(|rho| rho * rho)
}

/// Smallest α for which the order-`t` bound holds: `½(1 - 1/√(2t-1))`.
pub fn general_t_threshold(t: usize) -> f64 {
    0.5 * (1.0 - 1.0 / ((2 * t - 1) as f64).sqrt())
}

/// `½(1 - 1/√3)`.
pub fn theorem1_threshold() -> f64 {
    general_t_threshold(2)
}

/// Whether `(1-2α)√(2k-1) ≤ 1`.
pub fn moment_premise(alpha: f64, k: usize) -> bool {
    k > 0 && (1.0 - 2.0 * alpha) * ((2 * k - 1) as f64).sqrt() <= 1.0
}

/// `Σ_{k<t} c_k (2k-1)^k ρ^{2k} + (1 - Σ_{k<t} c_k)(2t-1)^t ρ^{2t}` for
/// balanced functions, `ρ = 1 - 2α`.
pub fn general_t_bound(alpha: f64, t: usize) -> Result<f64> {
    if t == 0 {
        return Err(BoundError::ZeroOrder);
    }
    let rho = rho_of(alpha)?;
    let threshold = general_t_threshold(t);
    if alpha < threshold {
        return Err(BoundError::PremiseViolated {
            bound: "general-t bound",
            alpha,
            threshold,
        });
    }
    let (head, tail) = channel::taylor_head_and_tail(t);
    let body: f64 = head
        .iter()
        .enumerate()
        .map(|(i, c)| c * lemma_moment(rho, i + 1))
        .sum();
    Ok(body + tail * lemma_moment(rho, t))
}

/// `(2k-1)^k ρ^{2k}`.
fn lemma_moment(rho: f64, k: usize) -> f64 {
    let k = i32::try_from(k).expect("order fits in i32");
    f64::from(2 * k - 1).powi(k) * rho.powi(2 * k)
}

/// `(log₂e/2)(1-2α)² + 9(1 - log₂e/2)(1-2α)⁴` for balanced functions and
/// `α ≥ ½(1 - 1/√3)`. Same formula path as `general_t_bound(α, 2)`.
pub fn theorem1_bound(alpha: f64) -> Result<f64> {
    general_t_bound(alpha, 2).map_err(|e| match e {
        BoundError::PremiseViolated {
            alpha, threshold, ..
        } => BoundError::PremiseViolated {
            bound: "theorem-1 bound",
            alpha,
            threshold,
        },
        other => other,
    })
}

/// `E_Y[(1-2P_Y)^{2k}] ≤ (2k-1)^k (1-2α)^{2k}` when `(1-2α)√(2k-1) ≤ 1`.
pub fn moment_bound(alpha: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(BoundError::ZeroOrder);
    }
    let rho = rho_of(alpha)?;
    if !moment_premise(alpha, k) {
        return Err(BoundError::PremiseViolated {
            bound: "moment bound",
            alpha,
            threshold: general_t_threshold(k),
        });
    }
    Ok(lemma_moment(rho, k))
}

/// `ᾱ_n = 2^{-n}/4`: dictators are optimal among balanced functions for
/// `α ∈ [½ - ᾱ_n, ½]`.
pub fn corollary_threshold(n: usize) -> f64 {
    0.25 * 0.5f64.powi(n as i32)
}

/// Upper bound on `I(f(X);Y)` for balanced non-dictators:
/// `c(1 - 4^{-n})ρ² + (9(1-c) + c·4^{-n})ρ⁴` with `c = log₂e/2`.
pub fn nondictator_mi_bound(alpha: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(BoundError::ZeroDimension);
    }
    let rho = rho_of(alpha)?;
    let threshold = theorem1_threshold();
    if alpha < threshold {
        return Err(BoundError::PremiseViolated {
            bound: "non-dictator bound",
            alpha,
            threshold,
        });
    }
    let c = log2_e() / 2.0;
    let quarter_n = 0.25f64.powi(n as i32);
    let x = rho * rho;
    Ok(c * (1.0 - quarter_n) * x + (9.0 * (1.0 - c) + c * quarter_n) * x * x)
}

/// Every bound at one α. Absent entries failed their premise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub alpha: NoiseParameter,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mi_bits: Option<f64>,
    pub conjectured: f64,
    pub quadratic: f64,
    pub theorem1: Option<f64>,
    pub general_t: BTreeMap<usize, Option<f64>>,
    pub moment_bounds: BTreeMap<usize, Option<f64>>,
}

/// Evaluates every bound at `alpha` for the given orders.
pub fn bound_report(alpha: NoiseParameter, orders: &[usize], moment_orders: &[usize]) -> BoundReport {
    let a = alpha.alpha();
    BoundReport {
        alpha,
        n: None,
        mi_bits: None,
        conjectured: conjectured_bound(a).expect("validated alpha"),
        quadratic: quadratic_bound(a).expect("validated alpha"),
        theorem1: theorem1_bound(a).ok(),
        general_t: orders
            .iter()
            .map(|&t| (t, general_t_bound(a, t).ok()))
            .collect(),
        moment_bounds: moment_orders
            .iter()
            .map(|&k| (k, moment_bound(a, k).ok()))
            .collect(),
    }
}

/// [`bound_report`] together with the exact mutual information of `f`.
pub fn bound_report_for(
    f: &BooleanFunction,
    alpha: NoiseParameter,
    orders: &[usize],
    moment_orders: &[usize],
) -> BoundReport {
    BoundReport {
        n: Some(f.n()),
        mi_bits: Some(channel::mutual_information(f, alpha)),
        ..bound_report(alpha, orders, moment_orders)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjectured_examples() {
        assert_eq!(conjectured_bound(0.5).unwrap(), 0.0);
        assert_eq!(conjectured_bound(0.0).unwrap(), 1.0);
        assert!((conjectured_bound(0.25).unwrap() - 0.188_721_875_540_867_14).abs() < 1e-15);
        assert_eq!(conjectured_bound(0.6), Err(BoundError::AlphaOutOfRange(0.6)));
    }

    #[test]
    fn quadratic_examples() {
        assert_eq!(quadratic_bound(0.5).unwrap(), 0.0);
        assert_eq!(quadratic_bound(0.25).unwrap(), 0.25);
        let ratio = quadratic_bound(0.4999).unwrap() / conjectured_bound(0.4999).unwrap();
        assert!((ratio - 1.3863).abs() < 1e-4);
        assert!(quadratic_bound(-0.1).is_err());
    }

    #[test]
    fn theorem1_examples() {
        assert_eq!(theorem1_bound(0.5).unwrap(), 0.0);
        assert!((theorem1_bound(1.0 / 3.0).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        let ratio = theorem1_bound(0.4999).unwrap() / conjectured_bound(0.4999).unwrap();
        assert!((1.0 - 1e-3..=1.0 + 1e-6).contains(&ratio));
        assert!(matches!(
            theorem1_bound(0.2),
            Err(BoundError::PremiseViolated { bound: "theorem-1 bound", .. })
        ));
        assert!((theorem1_threshold() - 0.211_324_865_405_187_1).abs() < 1e-15);
        assert!(theorem1_bound(theorem1_threshold()).is_ok());
    }

    #[test]
    fn moment_bound_examples() {
        for i in 0..=50 {
            let a = i as f64 / 100.0;
            let rho = 1.0 - 2.0 * a;
            assert_eq!(moment_bound(a, 1).unwrap(), rho * rho);
        }
        assert_eq!(moment_bound(0.25, 2).unwrap(), 0.5625);
        let a = 0.3;
        assert!((moment_bound(a, 2).unwrap() - 9.0 * 0.4f64.powi(4)).abs() < 1e-16);
        assert!((moment_bound(0.3, 3).unwrap() - 125.0 * 0.4f64.powi(6)).abs() < 1e-15);
        assert!(moment_bound(0.2, 2).is_err());
        assert_eq!(moment_bound(0.3, 0), Err(BoundError::ZeroOrder));
        assert!(moment_premise(0.3, 3));
        assert!(!moment_premise(0.25, 3));
    }

    #[test]
    fn general_t_examples() {
        for i in 0..=50 {
            let a = i as f64 / 100.0;
            assert_eq!(general_t_bound(a, 1).unwrap(), quadratic_bound(a).unwrap());
        }
        for i in 0..=100 {
            let a = theorem1_threshold() + (0.5 - theorem1_threshold()) * i as f64 / 100.0;
            assert_eq!(general_t_bound(a, 2).unwrap(), theorem1_bound(a).unwrap());
        }
        // mpmath, 40 digits
        let v = general_t_bound(0.45, 3).unwrap();
        assert!((v - 0.007_341_480_819_113_335).abs() < 1e-17);
        assert!(general_t_bound(0.2, 3).is_err());
        assert_eq!(general_t_bound(0.3, 0), Err(BoundError::ZeroOrder));
    }

    #[test]
    fn corollary_examples() {
        assert_eq!(corollary_threshold(3), 0.03125);
        assert_eq!(corollary_threshold(4), 0.015625);
        assert_eq!(corollary_threshold(1), 0.125);
    }

    #[test]
    fn nondictator_examples() {
        for n in 1..8 {
            assert_eq!(nondictator_mi_bound(0.5, n).unwrap(), 0.0);
        }
        let a = 0.5 - 1.0 / 32.0;
        let v = nondictator_mi_bound(a, 3).unwrap();
        assert!(v < log2_e() / 2.0 / 256.0);
        assert!(v < conjectured_bound(a).unwrap());
        let c = log2_e() / 2.0;
        let x = 0.2f64 * 0.2;
        let limit = c * x + 9.0 * (1.0 - c) * x * x;
        assert!((nondictator_mi_bound(0.4, 40).unwrap() - limit).abs() < 1e-15);
        assert!(nondictator_mi_bound(0.2, 3).is_err());
        assert!(nondictator_mi_bound(0.3, 0).is_err());
    }

    #[test]
    fn report_presence_and_json() {
        let r = bound_report(NoiseParameter::new(0.1).unwrap(), &[1, 2, 3], &[1, 2, 3]);
        assert!(r.theorem1.is_none());
        assert_eq!(r.general_t[&1], Some(r.quadratic));
        assert!(r.general_t[&2].is_none());
        assert!(r.moment_bounds[&1].is_some());
        assert!(r.moment_bounds[&2].is_none());
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert!(v["theorem1"].is_null());
        assert!(v["general_t"]["2"].is_null());
        assert_eq!(v["alpha"], 0.1);
        assert!(v.get("mi_bits").is_none());

        let r = bound_report(NoiseParameter::new(0.45).unwrap(), &[1, 2, 3], &[1, 2, 3]);
        assert!(r.theorem1.is_some() && r.general_t.values().all(Option::is_some));
        assert!(r.moment_bounds.values().all(Option::is_some));
    }
}
