//! Functions on the hypercube `{-1,1}^n`, their Fourier-Walsh spectra and the
//! noise operator.
//!
//! # Index convention
//!
//! A point `x ∈ {-1,1}^n` is stored as an integer mask `m ∈ [0, 2^n)` with
//! bit `j-1` of `m` set iff `x_j = -1`. Subsets `S ⊆ [n]` use the same bit
//! order, so the character `χ_S(x) = ∏_{j∈S} x_j` evaluates to
//! `(-1)^{popcount(S & m)}` and the whole transform is the plain
//! Walsh-Hadamard butterfly.
//!
//! Coordinates in the public API (dictator index, parity subsets) are
//! 1-based, matching `x_1, …, x_n`.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

/// Default cap on the number of variables (a `2^24` table of `f64` is 128 MiB).
pub const DEFAULT_N_MAX: usize = 24;

/// The cap can be raised with `BOOLINFO_NMAX`, but never past this.
pub const HARD_N_MAX: usize = 30;

/// Environment variable overriding [`DEFAULT_N_MAX`].
pub const N_MAX_ENV: &str = "BOOLINFO_NMAX";

/// Below this length the transform never hands work to rayon.
const PARALLEL_MIN_LEN: usize = 1 << 16;
const PARALLEL_MIN_HALF: usize = 1 << 12;

/// Current variable-count cap, read once from [`N_MAX_ENV`].
pub fn n_max() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(N_MAX_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|v| v.clamp(1, HARD_N_MAX))
            .unwrap_or(DEFAULT_N_MAX)
    })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypercubeError {
    #[error("n = {n} is outside the supported range 1..={max}")]
    DimensionOutOfRange { n: usize, max: usize },
    #[error("table has {found} entries but n = {n} needs {expected}")]
    LengthMismatch {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry {index} is {value}, expected -1 or +1")]
    NotASign { index: usize, value: i64 },
    #[error("entry {index} is not a finite real")]
    NonFinite { index: usize },
    #[error("coordinate {coordinate} is outside 1..={n}")]
    CoordinateOutOfRange { coordinate: usize, n: usize },
    #[error("majority needs an odd number of variables, got n = {0}")]
    MajorityNeedsOddN(usize),
    #[error("threshold function on n = {n} variables got {found} weights")]
    WeightCount { n: usize, found: usize },
    #[error("noise parameter must be a non-negative real, got {0}")]
    InvalidRho(f64),
    #[error("cannot combine functions on {left} and {right} variables")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid truth table {input:?} at position {position}: {reason}")]
    Parse {
        input: String,
        position: usize,
        reason: String,
    },
}

pub type Result<T, E = HypercubeError> = std::result::Result<T, E>;

fn check_n(n: usize) -> Result<()> {
    let max = n_max();
    if n == 0 || n > max {
        return Err(HypercubeError::DimensionOutOfRange { n, max });
    }
    Ok(())
}

fn check_len(n: usize, found: usize) -> Result<()> {
    let expected = 1usize << n;
    if found != expected {
        return Err(HypercubeError::LengthMismatch { n, expected, found });
    }
    Ok(())
}

/// Anything with a real-valued table over `{-1,1}^n`.
pub trait HypercubeTable {
    fn n(&self) -> usize;
    fn to_values(&self) -> Vec<f64>;
}

/// Anything that has a Fourier-Walsh spectrum.
pub trait Spectral {
    fn spectrum(&self) -> Cow<'_, FourierSpectrum>;
}

/// A Boolean function `{-1,1}^n → {-1,1}`.
///
/// The table is bit-packed: bit `m` is set iff `f(m) = -1`. Bits past `2^n`
/// in the last word are always clear.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

fn last_word_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1usize << n)) - 1
    }
}

impl BooleanFunction {
    /// Builds a function from a table of signs indexed by input mask.
    pub fn from_signs(n: usize, table: &[i8]) -> Result<Self> {
        check_n(n)?;
        check_len(n, table.len())?;
        let mut words = vec![0u64; word_count(n)];
        for (index, &value) in table.iter().enumerate() {
            match value {
                1 => {}
                -1 => words[index / 64] |= 1 << (index % 64),
                _ => {
                    return Err(HypercubeError::NotASign {
                        index,
                        value: value as i64,
                    })
                }
            }
        }
        Ok(Self { n, words })
    }

    /// Builds a function from packed words (bit set means `-1`).
    pub fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        check_n(n)?;
        let expected = word_count(n);
        if words.len() != expected {
            return Err(HypercubeError::LengthMismatch {
                n,
                expected: 1 << n,
                found: words.len() * 64,
            });
        }
        if words[expected - 1] & !last_word_mask(n) != 0 {
            return Err(HypercubeError::LengthMismatch {
                n,
                expected: 1 << n,
                found: 64 * (expected - 1) + 64 - words[expected - 1].leading_zeros() as usize,
            });
        }
        Ok(Self { n, words })
    }

    /// Builds a function on at most 6 variables from a single word.
    pub fn from_small(n: usize, bits: u64) -> Result<Self> {
        if n > 6 {
            return Err(HypercubeError::DimensionOutOfRange { n, max: 6 });
        }
        Self::from_words(n, vec![bits])
    }

    /// Builds a function by evaluating `is_minus` on every input mask.
    pub fn from_predicate(n: usize, mut is_minus: impl FnMut(usize) -> bool) -> Result<Self> {
        check_n(n)?;
        let mut words = vec![0u64; word_count(n)];
        for m in 0..1usize << n {
            if is_minus(m) {
                words[m / 64] |= 1 << (m % 64);
            }
        }
        Ok(Self { n, words })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of table entries, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The whole table as one word, when `n ≤ 6`.
    pub fn as_small(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    pub fn is_minus(&self, mask: usize) -> bool {
        (self.words[mask / 64] >> (mask % 64)) & 1 == 1
    }

    /// `f` at the input with mask `mask`.
    pub fn value(&self, mask: usize) -> i8 {
        if self.is_minus(mask) {
            -1
        } else {
            1
        }
    }

    pub fn signs(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len()).map(|m| self.value(m))
    }

    /// Number of inputs mapped to `-1`.
    pub fn count_minus(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `Pr(f(X) = -1)` under uniform `X`.
    pub fn minus_fraction(&self) -> f64 {
        self.count_minus() as f64 / self.len() as f64
    }

    /// Exactly `2^{n-1}` entries equal `-1`.
    pub fn is_balanced(&self) -> bool {
        self.count_minus() == 1u64 << (self.n - 1)
    }

    /// The function `-f`.
    pub fn negate(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let last = words.len() - 1;
        words[last] &= last_word_mask(self.n);
        Self { n: self.n, words }
    }

    /// `g(x) = f(x_{π(1)}, …, x_{π(n)})` for a 0-based permutation `perm`.
    ///
    /// # Panics
    ///
    /// If `perm` is not a permutation of `0..n`.
    pub fn permute_inputs(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length");
        let mut seen = vec![false; self.n];
        for &p in perm {
            assert!(p < self.n && !seen[p], "not a permutation");
            seen[p] = true;
        }
        Self::from_predicate(self.n, |m| {
            let mut source = 0usize;
            for (j, &p) in perm.iter().enumerate() {
                if (m >> p) & 1 == 1 {
                    source |= 1 << j;
                }
            }
            self.is_minus(source)
        })
        .expect("same n")
    }

    /// `f` as a real table of `±1.0`.
    pub fn to_real(&self) -> RealHypercubeFunction {
        RealHypercubeFunction {
            n: self.n,
            values: self.to_values(),
        }
    }

    /// If `f = ±x_i` for some coordinate, returns `(i, sign)` with `i` 1-based.
    pub fn as_dictator(&self) -> Option<(usize, i8)> {
        (1..=self.n).find_map(|i| {
            let bit = 1usize << (i - 1);
            let positive = (0..self.len()).all(|m| self.is_minus(m) == (m & bit != 0));
            let negative = (0..self.len()).all(|m| self.is_minus(m) != (m & bit != 0));
            if positive {
                Some((i, 1))
            } else if negative {
                Some((i, -1))
            } else {
                None
            }
        })
    }

    /// Hex digits of the `n:HEX` form, without the `n:` prefix.
    pub fn hex_digits(&self) -> String {
        let digits = hex_digit_count(self.n);
        let mut out = String::with_capacity(digits);
        for i in (0..digits).rev() {
            let bit = 4 * i;
            let nibble = (self.words[bit / 64] >> (bit % 64)) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).expect("nibble"));
        }
        out
    }
}

fn hex_digit_count(n: usize) -> usize {
    (1usize << n).div_ceil(4)
}

impl fmt::Display for BooleanFunction {
    /// `n:HEX`, big-endian, bit `m` set iff `f(m) = -1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.n, self.hex_digits())
    }
}

impl FromStr for BooleanFunction {
    type Err = HypercubeError;

    fn from_str(input: &str) -> Result<Self> {
        let parse_err = |position: usize, reason: &str| HypercubeError::Parse {
            input: input.to_string(),
            position,
            reason: reason.to_string(),
        };
        let colon = input
            .find(':')
            .ok_or_else(|| parse_err(0, "expected `n:HEX`"))?;
        let n: usize = input[..colon]
            .parse()
            .map_err(|_| parse_err(0, "variable count is not an integer"))?;
        check_n(n)?;
        let hex = &input[colon + 1..];
        let digits = hex_digit_count(n);
        if hex.len() != digits {
            return Err(parse_err(
                colon + 1,
                &format!("expected {digits} hex digits for n = {n}, found {}", hex.len()),
            ));
        }
        let mut words = vec![0u64; word_count(n)];
        for (i, ch) in hex.char_indices() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| parse_err(colon + 1 + i, "not a hex digit"))? as u64;
            let bit = 4 * (digits - 1 - i);
            words[bit / 64] |= nibble << (bit % 64);
        }
        if words[words.len() - 1] & !last_word_mask(n) != 0 {
            return Err(parse_err(colon + 1, "bits set beyond 2^n"));
        }
        Ok(Self { n, words })
    }
}

impl HypercubeTable for BooleanFunction {
    fn n(&self) -> usize {
        self.n
    }

    fn to_values(&self) -> Vec<f64> {
        self.signs().map(f64::from).collect()
    }
}

impl Spectral for BooleanFunction {
    fn spectrum(&self) -> Cow<'_, FourierSpectrum> {
        Cow::Owned(fourier_transform(self))
    }
}

/// Validated constructor for a Boolean function from its sign table.
pub fn make_function(n: usize, table: &[i8]) -> Result<BooleanFunction> {
    BooleanFunction::from_signs(n, table)
}

/// Standard function families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `f(x) = x_i`, 1-based.
    Dictator(usize),
    /// `f(x) = ∏_{j∈S} x_j`, 1-based coordinates.
    Parity(Vec<usize>),
    /// Majority of all `n` coordinates; `n` must be odd.
    Majority,
    /// Constant `+1` or `-1`.
    Constant(i8),
    /// `f(x) = +1` iff `Σ w_j x_j ≥ θ`.
    Threshold { weights: Vec<i64>, theta: i64 },
}

/// The truth table of `family` on `n` variables.
pub fn named_family(family: &Family, n: usize) -> Result<BooleanFunction> {
    check_n(n)?;
    let coord = |c: usize| -> Result<usize> {
        if c == 0 || c > n {
            Err(HypercubeError::CoordinateOutOfRange { coordinate: c, n })
        } else {
            Ok(c - 1)
        }
    };
    match family {
        Family::Dictator(i) => {
            let bit = 1usize << coord(*i)?;
            BooleanFunction::from_predicate(n, |m| m & bit != 0)
        }
        Family::Parity(subset) => {
            let mut mask = 0usize;
            for &c in subset {
                mask ^= 1 << coord(c)?;
            }
            BooleanFunction::from_predicate(n, |m| (m & mask).count_ones() % 2 == 1)
        }
        Family::Majority => {
            if n.is_multiple_of(2) {
                return Err(HypercubeError::MajorityNeedsOddN(n));
            }
            BooleanFunction::from_predicate(n, |m| 2 * m.count_ones() as usize > n)
        }
        Family::Constant(sign) => match sign {
            1 => BooleanFunction::from_predicate(n, |_| false),
            -1 => BooleanFunction::from_predicate(n, |_| true),
            other => Err(HypercubeError::NotASign {
                index: 0,
                value: *other as i64,
            }),
        },
        Family::Threshold { weights, theta } => {
            if weights.len() != n {
                return Err(HypercubeError::WeightCount {
                    n,
                    found: weights.len(),
                });
            }
            BooleanFunction::from_predicate(n, |m| {
                let sum: i64 = weights
                    .iter()
                    .enumerate()
                    .map(|(j, w)| if (m >> j) & 1 == 1 { -w } else { *w })
                    .sum();
                sum < *theta
            })
        }
    }
}

/// A finite real-valued table on `{-1,1}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealHypercubeFunction {
    n: usize,
    values: Vec<f64>,
}

impl RealHypercubeFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        check_len(n, values.len())?;
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(HypercubeError::NonFinite { index });
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, mask: usize) -> f64 {
        self.values[mask]
    }

    /// Mean under the uniform distribution.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `(E|g|^p)^{1/p}` under the uniform distribution.
    pub fn norm(&self, p: f64) -> f64 {
        let mean = self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() / self.values.len() as f64;
        mean.powf(1.0 / p)
    }

    /// Largest pointwise distance to another table on the same cube.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl HypercubeTable for RealHypercubeFunction {
    fn n(&self) -> usize {
        self.n
    }

    fn to_values(&self) -> Vec<f64> {
        self.values.clone()
    }
}

impl Spectral for RealHypercubeFunction {
    fn spectrum(&self) -> Cow<'_, FourierSpectrum> {
        Cow::Owned(fourier_transform(self))
    }
}

/// Fourier-Walsh coefficients: `coeffs[mask(S)] = f̂(S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        check_len(n, coeffs.len())?;
        if let Some(index) = coeffs.iter().position(|v| !v.is_finite()) {
            return Err(HypercubeError::NonFinite { index });
        }
        Ok(Self { n, coeffs })
    }

    /// The all-zero spectrum.
    pub fn zero(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            coeffs: vec![0.0; 1 << n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, subset_mask: usize) -> f64 {
        self.coeffs[subset_mask]
    }

    /// `Σ_S f̂(S)²`.
    pub fn parseval_total(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `W_k = Σ_{|S|=k} f̂(S)²` for `k = 0..=n`.
    pub fn weight_profile(&self) -> Vec<f64> {
        let mut weights = vec![0.0; self.n + 1];
        for (mask, c) in self.coeffs.iter().enumerate() {
            weights[mask.count_ones() as usize] += c * c;
        }
        weights
    }
}

impl Spectral for FourierSpectrum {
    fn spectrum(&self) -> Cow<'_, FourierSpectrum> {
        Cow::Borrowed(self)
    }
}

/// Unnormalized in-place Walsh-Hadamard butterfly.
///
/// After the call `values[S] = Σ_m values_in[m] · (-1)^{popcount(S & m)}`.
/// Applying it twice multiplies by `len`. Large inputs are split across the
/// rayon pool; every output is produced by the same sequence of additions
/// either way, so the result does not depend on the thread count.
///
/// # Panics
///
/// If the length is not a power of two.
pub fn fwht_in_place(values: &mut [f64]) {
    let len = values.len();
    assert!(len.is_power_of_two(), "length must be a power of two");
    let parallel = len >= PARALLEL_MIN_LEN;
    let mut half = 1;
    while half < len {
        if parallel {
            values.par_chunks_mut(2 * half).for_each(|block| {
                let (lo, hi) = block.split_at_mut(half);
                if half >= PARALLEL_MIN_HALF {
                    lo.par_iter_mut().zip(hi.par_iter_mut()).for_each(butterfly);
                } else {
                    lo.iter_mut().zip(hi.iter_mut()).for_each(butterfly);
                }
            });
        } else {
            for block in values.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                lo.iter_mut().zip(hi.iter_mut()).for_each(butterfly);
            }
        }
        half *= 2;
    }
}

#[inline]
fn butterfly((a, b): (&mut f64, &mut f64)) {
    let (x, y) = (*a, *b);
    *a = x + y;
    *b = x - y;
}

/// `ρ^k` for `k = 0..=n`.
pub(crate) fn level_powers(n: usize, rho: f64) -> Vec<f64> {
    let mut powers = Vec::with_capacity(n + 1);
    let mut p = 1.0;
    for _ in 0..=n {
        powers.push(p);
        p *= rho;
    }
    powers
}

/// Multiplies `coeffs[S]` by `ρ^{|S|}`.
pub(crate) fn attenuate_in_place(coeffs: &mut [f64], powers: &[f64]) {
    for (mask, c) in coeffs.iter_mut().enumerate() {
        *c *= powers[mask.count_ones() as usize];
    }
}

/// `f̂(S) = 2^{-n} Σ_x f(x) χ_S(x)`, in `O(n 2^n)`.
pub fn fourier_transform<T: HypercubeTable + ?Sized>(f: &T) -> FourierSpectrum {
    let n = f.n();
    let mut coeffs = f.to_values();
    fwht_in_place(&mut coeffs);
    let scale = 1.0 / (1usize << n) as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    FourierSpectrum { n, coeffs }
}

/// `f(x) = Σ_S f̂(S) χ_S(x)`.
pub fn inverse_transform(spectrum: &FourierSpectrum) -> RealHypercubeFunction {
    let mut values = spectrum.coeffs.clone();
    fwht_in_place(&mut values);
    RealHypercubeFunction {
        n: spectrum.n,
        values,
    }
}

/// `(T_ρ f)(x) = Σ_S f̂(S) ρ^{|S|} χ_S(x)`.
///
/// `ρ > 1` is accepted (it expresses `T_{1/ρ}` when composing operators) but
/// then the output of a Boolean function may leave `[-1, 1]`.
pub fn noise_operator<T: Spectral + ?Sized>(f: &T, rho: f64) -> Result<RealHypercubeFunction> {
    if rho.is_nan() || rho < 0.0 || rho.is_infinite() {
        return Err(HypercubeError::InvalidRho(rho));
    }
    let spectrum = f.spectrum();
    let mut values = spectrum.coeffs.clone();
    attenuate_in_place(&mut values, &level_powers(spectrum.n, rho));
    fwht_in_place(&mut values);
    RealHypercubeFunction::new(spectrum.n, values)
}

/// `W_k = Σ_{|S|=k} f̂(S)²` for `k = 0..=n`.
pub fn weight_profile(spectrum: &FourierSpectrum) -> Vec<f64> {
    spectrum.weight_profile()
}
