//! Exact information quantities of `f(X)` observed through a binary symmetric
//! channel.
//!
//! Everything is computed from the posterior-deviation table
//! `d(y) = 1 - 2 Pr(f(X) = -1 | Y = y)`, which is the noise operator
//! `T_{1-2α} f` evaluated at `y`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypercube::{
    self, BooleanFunction, FourierSpectrum, HypercubeError, RealHypercubeFunction, Spectral,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("crossover probability must lie in [0, 1/2], got {0}")]
    AlphaOutOfRange(f64),
    #[error("probability must lie in [0, 1], got {0}")]
    ProbabilityOutOfRange(f64),
    #[error("value must lie in [-1, 1], got {0}")]
    CorrelationOutOfRange(f64),
    #[error("correlation must lie in [0, 1], got {0}")]
    RhoOutOfRange(f64),
    #[error("order must be a positive integer")]
    ZeroOrder,
    #[error("moment report holds M_2..M_{available} but order t = {needed} was requested", available = 2 * .available)]
    MissingMoment { needed: usize, available: usize },
    #[error("the moment bound on mutual information is only established for balanced functions")]
    Unbalanced,
    #[error("norm exponents need 1 <= p < q < inf, got p = {p}, q = {q}")]
    NormOrder { p: f64, q: f64 },
    #[error(transparent)]
    Hypercube(#[from] HypercubeError),
}

pub type Result<T, E = ChannelError> = std::result::Result<T, E>;

/// Default number of even moments in a [`MomentReport`].
pub const DEFAULT_K_MAX: usize = 8;

/// `log₂ e`, evaluated at runtime.
pub fn log2_e() -> f64 {
    std::f64::consts::E.log2()
}

/// Crossover probability `α ∈ [0, 1/2]` of a binary symmetric channel.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct NoiseParameter {
    alpha: f64,
}

impl NoiseParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&alpha) {
            return Err(ChannelError::AlphaOutOfRange(alpha));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    /// Correlation `ρ = 1 - 2α`.
    pub fn rho(self) -> f64 {
        1.0 - 2.0 * self.alpha
    }
}

impl TryFrom<f64> for NoiseParameter {
    type Error = ChannelError;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<NoiseParameter> for f64 {
    fn from(p: NoiseParameter) -> f64 {
        p.alpha
    }
}

/// Base-2 binary entropy, with `h(0) = h(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ChannelError::ProbabilityOutOfRange(p));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

/// `1 - h((1-d)/2)` for `d ∈ [-1, 1]`.
///
/// For `|d| < 1/2` this sums the even power series `Σ c_k d^{2k}`, which
/// avoids the cancellation in `1 - h(·)` when `d` is small. Inputs are
/// clamped to `[-1, 1]`.
pub fn entropy_deficit(d: f64) -> f64 {
    let a = d.abs().min(1.0);
    if a == 1.0 {
        return 1.0;
    }
    if a < 0.5 {
        let x = a * a;
        let mut power = x;
        let mut sum = 0.0;
        for k in 1..=64u32 {
            let term = power / f64::from(2 * k * (2 * k - 1));
            sum += term;
            if term <= sum * 1e-18 {
                break;
            }
            power *= x;
        }
        return sum * log2_e();
    }
    ((1.0 + a) * a.ln_1p() + (1.0 - a) * (-a).ln_1p()) / (2.0 * std::f64::consts::LN_2)
}

/// Posterior deviations `d(y) = 1 - 2 P_y` for every channel output `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorTable {
    deviations: RealHypercubeFunction,
    alpha: NoiseParameter,
}

impl PosteriorTable {
    pub fn from_spectrum(spectrum: &FourierSpectrum, alpha: NoiseParameter) -> Self {
        let deviations = hypercube::noise_operator(spectrum, alpha.rho())
            .expect("rho = 1 - 2 alpha is in [0, 1]");
        Self { deviations, alpha }
    }

    pub fn n(&self) -> usize {
        self.deviations.n()
    }

    pub fn alpha(&self) -> NoiseParameter {
        self.alpha
    }

    pub fn deviations(&self) -> &RealHypercubeFunction {
        &self.deviations
    }

    pub fn deviation(&self, y: usize) -> f64 {
        self.deviations.get(y)
    }

    /// `Pr(f(X) = -1 | Y = y)`.
    pub fn posterior(&self, y: usize) -> f64 {
        (1.0 - self.deviation(y)) / 2.0
    }

    /// `M_{2k} = E_Y d(Y)^{2k}`.
    pub fn even_moment(&self, k: usize) -> f64 {
        even_moment_of(self.deviations.values(), k)
    }

    /// Largest `|d(y)|` and the smallest mask attaining it.
    pub fn max_deviation(&self) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (y, d) in self.deviations.values().iter().enumerate() {
            if d.abs() > best.0 {
                best = (d.abs(), y);
            }
        }
        best
    }
}

/// The posterior deviation table of `f` through BSC(α).
pub fn posterior_table(f: &BooleanFunction, alpha: NoiseParameter) -> PosteriorTable {
    PosteriorTable::from_spectrum(&f.spectrum(), alpha)
}

pub(crate) fn even_moment_of(deviations: &[f64], k: usize) -> f64 {
    let exponent = i32::try_from(2 * k).expect("moment order fits in i32");
    deviations.iter().map(|d| d.powi(exponent)).sum::<f64>() / deviations.len() as f64
}

/// `E_y[1 - h(P_y)] - (1 - h(Pr(f = -1)))`, the mutual information in bits.
///
/// `mean_deviation` is `1 - 2 Pr(f = -1)`.
pub(crate) fn mi_from_deviations(deviations: &[f64], mean_deviation: f64) -> f64 {
    let base = entropy_deficit(mean_deviation);
    let excess = deviations.iter().map(|&d| entropy_deficit(d) - base).sum::<f64>();
    (excess / deviations.len() as f64).max(0.0)
}

/// `1 - 2 Pr(f = -1)`, exactly from the popcount.
pub(crate) fn bias(f: &BooleanFunction) -> f64 {
    let len = f.len() as f64;
    (len - 2.0 * f.count_minus() as f64) / len
}

/// `I(f(X); Y) = H(f(X)) - E_Y h(P_Y)` in bits.
pub fn mutual_information(f: &BooleanFunction, alpha: NoiseParameter) -> f64 {
    let table = posterior_table(f, alpha);
    mi_from_deviations(table.deviations.values(), bias(f))
}

/// `M_{2k} = E_Y[(1 - 2 P_Y)^{2k}]`, summed directly over the table.
pub fn even_moment(f: &BooleanFunction, alpha: NoiseParameter, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(ChannelError::ZeroOrder);
    }
    Ok(posterior_table(f, alpha).even_moment(k))
}

/// `Σ_S f̂(S)² ρ^{2|S|}`.
pub fn second_moment_spectral(spectrum: &FourierSpectrum, rho: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(ChannelError::RhoOutOfRange(rho));
    }
    let squared = hypercube::level_powers(spectrum.n(), rho * rho);
    Ok(spectrum
        .coeffs()
        .iter()
        .enumerate()
        .map(|(mask, c)| c * c * squared[mask.count_ones() as usize])
        .sum())
}

/// `max_y |1 - 2 P_y|` and the smallest output mask attaining it.
pub fn max_posterior_deviation(f: &BooleanFunction, alpha: NoiseParameter) -> (f64, usize) {
    posterior_table(f, alpha).max_deviation()
}

/// Even moments `M_2, M_4, …` of one function at one noise level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub n: usize,
    pub alpha: NoiseParameter,
    /// `moments[k-1] = M_{2k}`.
    pub moments: Vec<f64>,
    pub mi_bits: f64,
}

impl MomentReport {
    pub fn k_max(&self) -> usize {
        self.moments.len()
    }

    /// `M_{2k}`, if present.
    pub fn moment(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.moments.get(i)).copied()
    }
}

/// Moments `M_2..M_{2 k_max}` and the exact mutual information.
pub fn moment_report(f: &BooleanFunction, alpha: NoiseParameter, k_max: usize) -> MomentReport {
    let table = posterior_table(f, alpha);
    let values = table.deviations.values();
    MomentReport {
        n: f.n(),
        alpha,
        moments: (1..=k_max).map(|k| even_moment_of(values, k)).collect(),
        mi_bits: mi_from_deviations(values, bias(f)),
    }
}

/// `c_k = log₂e / (2k(2k-1))`, the coefficients of
/// `h((1-p)/2) = 1 - Σ_k c_k p^{2k}`.
pub fn taylor_coefficient(k: usize) -> f64 {
    let k = k as f64;
    log2_e() / (2.0 * k * (2.0 * k - 1.0))
}

/// `Σ_{k<t} c_k` and `1 - Σ_{k<t} c_k`, the weight carried by the tail.
pub(crate) fn taylor_head_and_tail(t: usize) -> (Vec<f64>, f64) {
    let head: Vec<f64> = (1..t).map(taylor_coefficient).collect();
    let tail = 1.0 - head.iter().sum::<f64>();
    (head, tail)
}

/// Truncated series with every power past `2t` replaced by `p^{2t}`:
/// `1 - Σ_{k<t} c_k p^{2k} - (1 - Σ_{k<t} c_k) p^{2t}`.
///
/// This never exceeds `h((1-p)/2)`.
pub fn entropy_taylor_lower_bound(p: f64, t: usize) -> Result<f64> {
    if !(-1.0..=1.0).contains(&p) {
        return Err(ChannelError::CorrelationOutOfRange(p));
    }
    if t == 0 {
        return Err(ChannelError::ZeroOrder);
    }
    let (head, tail) = taylor_head_and_tail(t);
    // Written as Σ_k c_k (1 - p^{2k}) so the endpoints p = 0, ±1 come out exact.
    let x = p * p;
    let mut power = 1.0;
    let mut value = 0.0;
    for c in head {
        power *= x;
        value += c * (1.0 - power);
    }
    power *= x;
    Ok(value + tail * (1.0 - power))
}

/// `Σ_{k<t} c_k M_{2k} + (1 - Σ_{k<t} c_k) M_{2t}`, an upper bound on the
/// mutual information of a balanced function.
pub fn mi_upper_from_moments(moments: &MomentReport, t: usize, balanced: bool) -> Result<f64> {
    if t == 0 {
        return Err(ChannelError::ZeroOrder);
    }
    if !balanced {
        return Err(ChannelError::Unbalanced);
    }
    if moments.k_max() < t {
        return Err(ChannelError::MissingMoment {
            needed: t,
            available: moments.k_max(),
        });
    }
    let (head, tail) = taylor_head_and_tail(t);
    let body: f64 = head
        .iter()
        .zip(&moments.moments)
        .map(|(c, m)| c * m)
        .sum();
    Ok(body + tail * moments.moments[t - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypercontractiveCheck {
    /// `‖T_ρ g‖_q`
    pub lhs: f64,
    /// `‖g‖_p`
    pub rhs: f64,
    /// `ρ ≤ √((p-1)/(q-1))`
    pub premise_ok: bool,
}

/// Both sides of `‖T_ρ g‖_q ≤ ‖g‖_p`.
pub fn hypercontractive_check(
    g: &RealHypercubeFunction,
    rho: f64,
    p: f64,
    q: f64,
) -> Result<HypercontractiveCheck> {
    if !(p >= 1.0 && q > p && q.is_finite()) {
        return Err(ChannelError::NormOrder { p, q });
    }
    let smoothed = hypercube::noise_operator(g, rho)?;
    Ok(HypercontractiveCheck {
        lhs: smoothed.norm(q),
        rhs: g.norm(p),
        // A few ulps of slack so that ρ = 1/√(q-1) computed either way passes.
        premise_ok: rho <= ((p - 1.0) / (q - 1.0)).sqrt() * (1.0 + 4.0 * f64::EPSILON),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::{named_family, Family};

    fn alpha(a: f64) -> NoiseParameter {
        NoiseParameter::new(a).unwrap()
    }

    fn fam(f: Family, n: usize) -> BooleanFunction {
        named_family(&f, n).unwrap()
    }

    #[test]
    fn noise_parameter_range() {
        assert!(NoiseParameter::new(-0.01).is_err());
        assert!(NoiseParameter::new(0.51).is_err());
        assert!(NoiseParameter::new(f64::NAN).is_err());
        assert_eq!(alpha(0.25).rho(), 0.5);
        assert_eq!(alpha(0.5).rho(), 0.0);
        let json = serde_json::to_string(&alpha(0.25)).unwrap();
        assert_eq!(json, "0.25");
        assert!(serde_json::from_str::<NoiseParameter>("0.7").is_err());
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let closed = 2.0 - 0.75 * 3f64.log2();
        assert!((binary_entropy(0.25).unwrap() - closed).abs() < 1e-15);
        assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_9).abs() < 1e-15);
        assert!(binary_entropy(1.5).is_err());
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            let a = binary_entropy(p).unwrap();
            let b = binary_entropy(1.0 - p).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn deficit_matches_direct_entropy() {
        for i in 0..=2000 {
            let d = -1.0 + i as f64 / 1000.0;
            let direct = 1.0 - binary_entropy((1.0 - d) / 2.0).unwrap();
            assert!((entropy_deficit(d) - direct).abs() < 1e-14, "d = {d}");
        }
        assert_eq!(entropy_deficit(0.0), 0.0);
        assert_eq!(entropy_deficit(1.0), 1.0);
    }

    #[test]
    fn posterior_examples() {
        let d = fam(Family::Dictator(1), 3);
        let t = posterior_table(&d, alpha(0.2));
        for y in 0..8 {
            let expected = if y & 1 == 1 { 0.8 } else { 0.2 };
            assert!((t.posterior(y) - expected).abs() < 1e-15);
        }
        let maj = fam(Family::Majority, 3);
        let t = posterior_table(&maj, alpha(0.5));
        assert!(t.deviations().values().iter().all(|&v| v == 0.0));
        let t = posterior_table(&maj, alpha(0.0));
        for y in 0..8 {
            assert_eq!(t.deviation(y), f64::from(maj.value(y)));
        }
    }

    #[test]
    fn mi_examples() {
        let d = fam(Family::Dictator(2), 3);
        assert!((mutual_information(&d, alpha(0.25)) - 0.188_721_875_540_867_1).abs() < 1e-15);
        let p = fam(Family::Parity(vec![1, 2]), 2);
        assert!((mutual_information(&p, alpha(0.25)) - 0.045_565_997_075_035_04).abs() < 1e-15);
        let c = fam(Family::Constant(1), 3);
        assert_eq!(mutual_information(&c, alpha(0.1)), 0.0);
        assert!((mutual_information(&d, alpha(0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn moment_examples() {
        let d = fam(Family::Dictator(1), 3);
        for k in 1..=4 {
            let m = even_moment(&d, alpha(0.3), k).unwrap();
            assert!((m - 0.4f64.powi(2 * k as i32)).abs() < 1e-15);
        }
        let maj = fam(Family::Majority, 3);
        assert_eq!(even_moment(&maj, alpha(0.25), 1).unwrap(), 0.191_406_25);
        assert_eq!(even_moment(&maj, alpha(0.5), 3).unwrap(), 0.0);
        assert_eq!(even_moment(&maj, alpha(0.25), 0), Err(ChannelError::ZeroOrder));
        // frozen from an independent exact-arithmetic posterior computation
        let r = moment_report(&maj, alpha(0.25), 4);
        assert_eq!(
            r.moments,
            vec![0.191_406_25, 0.063_003_540_039_062_5, 0.027_096_807_956_695_557, 0.012_545_541_161_671_28]
        );
        assert!((r.mi_bits - 0.147_412_844_397_993_52).abs() < 1e-15);
    }

    #[test]
    fn spectral_second_moment_examples() {
        let s = fam(Family::Dictator(1), 3).spectrum().into_owned();
        assert!((second_moment_spectral(&s, 0.7).unwrap() - 0.49).abs() < 1e-15);
        let s = fam(Family::Majority, 3).spectrum().into_owned();
        assert_eq!(second_moment_spectral(&s, 0.5).unwrap(), 0.191_406_25);
        let s = fam(Family::Constant(1), 3).spectrum().into_owned();
        assert_eq!(second_moment_spectral(&s, 0.3).unwrap(), 1.0);
        assert!(second_moment_spectral(&s, 1.5).is_err());
    }

    #[test]
    fn max_deviation_examples() {
        let d = fam(Family::Dictator(1), 3);
        let (v, _) = max_posterior_deviation(&d, alpha(0.25));
        assert_eq!(v, 0.5);
        let maj = fam(Family::Majority, 3);
        assert_eq!(max_posterior_deviation(&maj, alpha(0.25)), (0.6875, 0));
        assert_eq!(max_posterior_deviation(&maj, alpha(0.5)).0, 0.0);
    }

    #[test]
    fn taylor_examples() {
        for t in 1..=5 {
            assert_eq!(entropy_taylor_lower_bound(0.0, t).unwrap(), 1.0);
            assert_eq!(entropy_taylor_lower_bound(1.0, t).unwrap(), 0.0);
            assert_eq!(entropy_taylor_lower_bound(-1.0, t).unwrap(), 0.0);
        }
        let v = entropy_taylor_lower_bound(0.5, 2).unwrap();
        assert!((v - 0.802_247_339_916_659_7).abs() < 1e-15);
        assert!(v <= binary_entropy(0.25).unwrap());
        assert!(entropy_taylor_lower_bound(1.01, 2).is_err());
        assert!(entropy_taylor_lower_bound(0.5, 0).is_err());
    }

    #[test]
    fn coefficient_fixture() {
        let c1 = taylor_coefficient(1);
        assert!((0.721_347_52..=0.721_347_53).contains(&c1));
        assert!((taylor_coefficient(2) - 0.120_224_586_740_746_95).abs() < 1e-16);
    }

    #[test]
    fn moment_bound_examples() {
        let d = fam(Family::Dictator(1), 2);
        let r = moment_report(&d, alpha(0.25), 3);
        assert_eq!(mi_upper_from_moments(&r, 1, true).unwrap(), 0.25);
        let v = mi_upper_from_moments(&r, 2, true).unwrap();
        assert!((v - 0.197_752_660_083_340_32).abs() < 1e-15);
        assert!(v >= r.mi_bits);
        let r_half = moment_report(&d, alpha(0.5), 3);
        assert_eq!(mi_upper_from_moments(&r_half, 3, true).unwrap(), 0.0);
        assert_eq!(mi_upper_from_moments(&r, 2, false), Err(ChannelError::Unbalanced));
        assert_eq!(
            mi_upper_from_moments(&r, 4, true),
            Err(ChannelError::MissingMoment { needed: 4, available: 3 })
        );
    }

    #[test]
    fn hypercontractive_examples() {
        let one = RealHypercubeFunction::new(3, vec![1.0; 8]).unwrap();
        let c = hypercontractive_check(&one, 0.4, 2.0, 4.0).unwrap();
        assert!((c.lhs - 1.0).abs() < 1e-15 && (c.rhs - 1.0).abs() < 1e-15);
        let rho = 1.0 / 3f64.sqrt();
        let d = fam(Family::Dictator(1), 3).to_real();
        let c = hypercontractive_check(&d, rho, 2.0, 4.0).unwrap();
        assert!((c.lhs - 0.577_350_269_189_625_8).abs() < 1e-15);
        assert!((c.rhs - 1.0).abs() < 1e-15);
        assert!(c.premise_ok);
        assert!(!hypercontractive_check(&d, 0.6, 2.0, 4.0).unwrap().premise_ok);
        assert!(hypercontractive_check(&d, rho, 4.0, 2.0).is_err());
        assert!(hypercontractive_check(&d, rho, 0.5, 2.0).is_err());
        assert!(hypercontractive_check(&d, rho, 2.0, f64::INFINITY).is_err());
    }

    #[test]
    fn moment_report_json_field_names() {
        let r = moment_report(&fam(Family::Dictator(1), 2), alpha(0.25), 2);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["n"], 2);
        assert_eq!(v["alpha"], 0.25);
        assert_eq!(v["moments"][0], 0.25);
        assert!(v["mi_bits"].is_f64());
    }
}
