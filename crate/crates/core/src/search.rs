//! Exhaustive and sampled verification over classes of Boolean functions.
//!
//! A class is an indexed sequence of truth tables. A scan splits the index
//! range into fixed-size chunks, evaluates chunks on the rayon pool and
//! folds the partial results in index order, so a report never depends on
//! the number of worker threads.

use std::fmt;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::bounds;
use crate::channel::{self, NoiseParameter};
use crate::hypercube::{self, BooleanFunction, Family, HypercubeError};

/// Slack allowed on every `lhs ≤ rhs` check.
pub const CHECK_TOLERANCE: f64 = 1e-12;

/// Values this close to the per-point maximum count as maximizers.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// "Strictly below" means below by more than this.
pub const STRICT_MARGIN: f64 = 1e-12;

/// Largest `n` scanned exhaustively without the large flag.
pub const DEFAULT_EXHAUSTIVE_N: usize = 4;

/// Largest `n` for the balanced class with the large flag.
pub const LARGE_EXHAUSTIVE_N: usize = 5;

/// Functions per unit of parallel work.
const CHUNK: u64 = 4096;

/// Functions per checkpoint record.
pub const DEFAULT_BLOCK: u64 = 1 << 20;

/// Violations kept verbatim in a report; the count is always exact.
pub const MAX_RECORDED_VIOLATIONS: usize = 1000;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("exhaustive {scope} scan at n = {n} is too large{hint}")]
    TooLarge {
        n: usize,
        scope: &'static str,
        hint: &'static str,
    },
    #[error("{check} check is not defined at alpha = {alpha}{detail}")]
    OutOfRange {
        check: CheckId,
        alpha: f64,
        detail: String,
    },
    #[error("{0} is only defined for balanced functions")]
    NeedsBalanced(CheckId),
    #[error("crossover experiment needs odd n <= 7, got n = {0}")]
    CrossoverDimension(usize),
    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Hypercube(#[from] HypercubeError),
}

pub type Result<T, E = SearchError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckId {
    Conjecture,
    Theorem1,
    Moments,
    Corollary,
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Conjecture => "conjecture",
            Self::Theorem1 => "theorem1",
            Self::Moments => "moments",
            Self::Corollary => "corollary",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Scope {
    /// Every function, `2^{2^n}` of them.
    All,
    /// Every balanced function, `C(2^n, 2^{n-1})` of them.
    Balanced,
    /// `samples` functions from [`random_balanced`], seeds derived from `seed`.
    RandomBalanced { samples: u64, seed: u64 },
}

impl Scope {
    fn name(&self) -> &'static str {
        match self {
            Self::All => "all",
            Self::Balanced => "balanced",
            Self::RandomBalanced { .. } => "random-balanced",
        }
    }

    fn is_balanced(&self) -> bool {
        !matches!(self, Self::All)
    }
}

/// A class of functions on `n` variables in a fixed order.
///
/// `All` and `Balanced` are ordered by truth table, read as the integer whose
/// bit `m` is set iff `f(m) = -1` (the same order as their `n:HEX` strings).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionClass {
    pub n: usize,
    pub scope: Scope,
}

impl FunctionClass {
    /// Exhaustive classes stop at `n = 4`; `large` admits balanced `n = 5`.
    pub fn new(n: usize, scope: Scope, large: bool) -> Result<Self> {
        if n == 0 {
            return Err(HypercubeError::DimensionOutOfRange {
                n,
                max: hypercube::n_max(),
            }
            .into());
        }
        let too_large = |hint| SearchError::TooLarge {
            n,
            scope: scope.name(),
            hint,
        };
        match scope {
            Scope::All if n > DEFAULT_EXHAUSTIVE_N => Err(too_large(
                " (the full class is only scanned up to n = 4; sample balanced functions instead)",
            )),
            Scope::Balanced if n > LARGE_EXHAUSTIVE_N => Err(too_large(
                " (balanced classes are only scanned up to n = 5; sample instead)",
            )),
            Scope::Balanced if n > DEFAULT_EXHAUSTIVE_N && !large => Err(too_large(
                " (n = 5 has about 6.0e8 balanced functions; pass the large flag to run it)",
            )),
            Scope::RandomBalanced { .. } if n > hypercube::n_max() => {
                Err(HypercubeError::DimensionOutOfRange {
                    n,
                    max: hypercube::n_max(),
                }
                .into())
            }
            _ => Ok(Self { n, scope }),
        }
    }

    pub fn all(n: usize) -> Result<Self> {
        Self::new(n, Scope::All, false)
    }

    pub fn balanced(n: usize) -> Result<Self> {
        Self::new(n, Scope::Balanced, false)
    }

    /// Number of functions in the class.
    pub fn size(&self) -> u64 {
        match self.scope {
            Scope::All => 1u64 << (1u64 << self.n),
            Scope::Balanced => binomial(1 << self.n, 1 << (self.n - 1)),
            Scope::RandomBalanced { samples, .. } => samples,
        }
    }

    /// Functions with index in `start..end`.
    pub fn range(&self, start: u64, end: u64) -> ClassIter {
        let end = end.min(self.size());
        let state = match self.scope {
            Scope::All => IterState::Counter(start),
            Scope::Balanced => IterState::Combination(if start < end {
                unrank_combination(1 << self.n, 1 << (self.n - 1), start)
            } else {
                0
            }),
            Scope::RandomBalanced { seed, .. } => IterState::Sampled(seed),
        };
        ClassIter {
            n: self.n,
            index: start,
            end,
            state,
        }
    }

    pub fn iter(&self) -> ClassIter {
        self.range(0, self.size())
    }
}

/// Stream of functions from a [`FunctionClass`].
pub struct ClassIter {
    n: usize,
    index: u64,
    end: u64,
    state: IterState,
}

enum IterState {
    Counter(u64),
    Combination(u64),
    Sampled(u64),
}

impl Iterator for ClassIter {
    type Item = BooleanFunction;

    fn next(&mut self) -> Option<BooleanFunction> {
        if self.index >= self.end {
            return None;
        }
        let f = match &mut self.state {
            IterState::Counter(bits) => {
                let f = BooleanFunction::from_small(self.n, *bits);
                *bits += 1;
                f
            }
            IterState::Combination(bits) => {
                let f = BooleanFunction::from_small(self.n, *bits);
                *bits = next_combination(*bits);
                f
            }
            IterState::Sampled(seed) => random_balanced(self.n, sample_seed(*seed, self.index)),
        };
        self.index += 1;
        Some(f.expect("class members are valid tables"))
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as u64
}

/// The `rank`-th `k`-subset of `0..n`, as a bitmask, in increasing integer order.
fn unrank_combination(n: u64, k: u64, mut rank: u64) -> u64 {
    let mut bits = 0u64;
    let mut k = k;
    for i in (0..n).rev() {
        if k == 0 {
            break;
        }
        let below = binomial_or_zero(i, k);
        if rank >= below {
            bits |= 1 << i;
            rank -= below;
            k -= 1;
        }
    }
    bits
}

fn binomial_or_zero(n: u64, k: u64) -> u64 {
    if k > n {
        0
    } else {
        binomial(n, k)
    }
}

/// Next integer with the same popcount (Gosper).
fn next_combination(v: u64) -> u64 {
    let c = v & v.wrapping_neg();
    let r = v.wrapping_add(c);
    (((r ^ v) >> 2) / c) | r
}

fn sample_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 over (seed, index)
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A uniformly random balanced function, reproducible from `seed`.
pub fn random_balanced(n: usize, seed: u64) -> Result<BooleanFunction, HypercubeError> {
    if n == 0 || n > hypercube::n_max() {
        return Err(HypercubeError::DimensionOutOfRange { n, max: hypercube::n_max() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = 1usize << n;
    let picked = rand::seq::index::sample(&mut rng, len, len / 2);
    let mut minus = vec![false; len];
    for i in picked.iter() {
        minus[i] = true;
    }
    BooleanFunction::from_predicate(n, |m| minus[m])
}

/// One α of a scan, with the moment order for moment checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub alpha: NoiseParameter,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl GridPoint {
    pub fn alpha(alpha: NoiseParameter) -> Self {
        Self { alpha, k: None }
    }

    /// Key used in report maps: the α, plus `,k=K` for moment checks.
    pub fn key(&self) -> String {
        match self.k {
            Some(k) => format!("{},k={}", self.alpha.alpha(), k),
            None => format!("{}", self.alpha.alpha()),
        }
    }
}

/// `count` evenly spaced points from `start` to `end` inclusive.
pub fn linear_grid(start: f64, end: f64, count: usize) -> Result<Vec<NoiseParameter>, channel::ChannelError> {
    let points: Vec<f64> = match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    end
                } else {
                    (start * (count - 1 - i) as f64 + end * i as f64) / (count - 1) as f64
                }
            })
            .collect(),
    };
    points.into_iter().map(NoiseParameter::new).collect()
}

/// `α = i/40` for `i = 0..=20`.
pub fn default_alpha_grid() -> Vec<NoiseParameter> {
    (0..=20)
        .map(|i| NoiseParameter::new(f64::from(i) / 40.0).expect("in range"))
        .collect()
}

/// `[0.2114, 0.25, 0.30, 0.31, …, 0.49]`.
pub fn default_theorem1_grid() -> Vec<NoiseParameter> {
    let mut grid = vec![0.2114, 0.25];
    grid.extend((30..=49).map(|i| f64::from(i) / 100.0));
    grid.into_iter()
        .map(|a| NoiseParameter::new(a).expect("in range"))
        .collect()
}

/// `count` points `½ - ᾱ_n + i ᾱ_n / count`, `i = 0..count`, inside `[½ - ᾱ_n, ½)`.
pub fn corollary_grid(n: usize, count: usize) -> Vec<NoiseParameter> {
    let width = bounds::corollary_threshold(n);
    (0..count)
        .map(|i| NoiseParameter::new(0.5 - width + width * i as f64 / count as f64).expect("in range"))
        .collect()
}

/// Every `(α, k)` pair with `(1-2α)√(2k-1) ≤ 1`.
pub fn moment_points(alpha_grid: &[NoiseParameter], k_set: &[usize]) -> Vec<GridPoint> {
    let mut points = Vec::new();
    for &k in k_set {
        for &alpha in alpha_grid {
            if bounds::moment_premise(alpha.alpha(), k) {
                points.push(GridPoint { alpha, k: Some(k) });
            }
        }
    }
    points
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// `n:HEX`
    pub function: String,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub check: CheckId,
}

/// Per-point summary of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointStats {
    /// Largest checked quantity (MI, or `M_{2k}` for moment checks).
    #[serde(with = "extended_f64")]
    pub max_value: f64,
    /// `n:HEX` of every function within [`TIE_TOLERANCE`] of `max_value`, sorted.
    pub maximizers: Vec<String>,
    /// Smallest `rhs - lhs`. For the corollary check this ranges over
    /// non-dictators only.
    #[serde(with = "extended_f64")]
    pub min_margin: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    candidates: Vec<(f64, String)>,
}

impl PointStats {
    fn empty() -> Self {
        Self {
            max_value: f64::NEG_INFINITY,
            maximizers: Vec::new(),
            min_margin: f64::INFINITY,
            candidates: Vec::new(),
        }
    }

    fn offer(&mut self, value: f64, f: impl FnOnce() -> String) {
        if value > self.max_value {
            self.max_value = value;
            let floor = value - TIE_TOLERANCE;
            self.candidates.retain(|(v, _)| *v >= floor);
        }
        if value >= self.max_value - TIE_TOLERANCE {
            self.candidates.push((value, f()));
        }
    }

    fn merge(&mut self, other: PointStats) {
        self.max_value = self.max_value.max(other.max_value);
        self.min_margin = self.min_margin.min(other.min_margin);
        self.candidates.extend(other.candidates);
        let floor = self.max_value - TIE_TOLERANCE;
        self.candidates.retain(|(v, _)| *v >= floor);
    }

    fn finish(&mut self) {
        let floor = self.max_value - TIE_TOLERANCE;
        let mut names: Vec<String> = self
            .candidates
            .drain(..)
            .filter(|(v, _)| *v >= floor)
            .map(|(_, s)| s)
            .chain(self.maximizers.drain(..))
            .collect();
        names.sort();
        names.dedup();
        self.maximizers = names;
    }
}

/// `f64` that survives JSON with infinities intact (empty summaries use them).
mod extended_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Finite(f64),
        Named(String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        match *x {
            f64::INFINITY => Repr::Named("inf".into()),
            f64::NEG_INFINITY => Repr::Named("-inf".into()),
            v => Repr::Finite(v),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Finite(v) => Ok(v),
            Repr::Named(n) if n == "inf" => Ok(f64::INFINITY),
            Repr::Named(n) if n == "-inf" => Ok(f64::NEG_INFINITY),
            Repr::Named(n) => Err(serde::de::Error::custom(format!("not a number: {n}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Partial {
    checked: u64,
    violation_count: u64,
    violations: Vec<Violation>,
    stats: Vec<PointStats>,
}

impl Partial {
    fn empty(points: usize) -> Self {
        Self {
            checked: 0,
            violation_count: 0,
            violations: Vec::new(),
            stats: (0..points).map(|_| PointStats::empty()).collect(),
        }
    }

    fn merge(&mut self, other: Partial) {
        self.checked += other.checked;
        self.violation_count += other.violation_count;
        let room = MAX_RECORDED_VIOLATIONS.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        for (mine, theirs) in self.stats.iter_mut().zip(other.stats) {
            mine.merge(theirs);
        }
    }

    fn finish(mut self) -> Self {
        self.stats.iter_mut().for_each(PointStats::finish);
        self
    }
}

/// Outcome of one verification scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub check: CheckId,
    pub class: FunctionClass,
    pub points: Vec<GridPoint>,
    /// Functions × grid points.
    pub checked_count: u64,
    pub violation_count: u64,
    /// The first [`MAX_RECORDED_VIOLATIONS`] violations in scan order.
    pub violations: Vec<Violation>,
    /// One entry per grid point.
    pub stats: Vec<PointStats>,
}

impl SearchReport {
    pub fn is_verified(&self) -> bool {
        self.violation_count == 0
    }

    pub fn alpha_grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.alpha.alpha()).collect()
    }

    /// Smallest margin over all points.
    pub fn min_margin(&self) -> f64 {
        self.stats.iter().map(|s| s.min_margin).fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Serialize for SearchReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Keyed<'a, T: Serialize>(&'a [GridPoint], Vec<&'a T>);
        impl<T: Serialize> Serialize for Keyed<'_, T> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (p, v) in self.0.iter().zip(&self.1) {
                    map.serialize_entry(&p.key(), v)?;
                }
                map.end()
            }
        }
        let orders: Option<Vec<usize>> = self.points.iter().map(|p| p.k).collect();
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("check", &self.check)?;
        map.serialize_entry("class", &self.class)?;
        map.serialize_entry("alpha_grid", &self.alpha_grid())?;
        if let Some(orders) = orders.filter(|o| !o.is_empty()) {
            map.serialize_entry("k", &orders)?;
        }
        map.serialize_entry("checked_count", &self.checked_count)?;
        map.serialize_entry("violation_count", &self.violation_count)?;
        map.serialize_entry("violations", &self.violations)?;
        map.serialize_entry(
            "maximizers",
            &Keyed(&self.points, self.stats.iter().map(|s| &s.maximizers).collect()),
        )?;
        map.serialize_entry(
            "max_value",
            &Keyed(&self.points, self.stats.iter().map(|s| &s.max_value).collect()),
        )?;
        map.serialize_entry(
            "min_margin",
            &Keyed(&self.points, self.stats.iter().map(|s| &s.min_margin).collect()),
        )?;
        map.end()
    }
}

/// Execution knobs; none of them change the report.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Append-only checkpoint file; completed blocks found there are skipped.
    pub checkpoint: Option<PathBuf>,
    /// Functions per checkpoint record.
    pub block_size: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            threads: None,
            checkpoint: None,
            block_size: DEFAULT_BLOCK,
        }
    }
}

/// What to compare at a grid point.
#[derive(Debug, Clone, Copy)]
struct PointPlan {
    point: GridPoint,
    rhs: f64,
}

struct Plan {
    check: CheckId,
    class: FunctionClass,
    points: Vec<PointPlan>,
    powers: Vec<Vec<f64>>,
    dictators: Vec<BooleanFunction>,
}

impl Plan {
    fn new(check: CheckId, class: FunctionClass, points: Vec<PointPlan>) -> Result<Self> {
        let n = class.n;
        let powers = points
            .iter()
            .map(|p| hypercube::level_powers(n, p.point.alpha.rho()))
            .collect();
        let mut dictators = Vec::new();
        if check == CheckId::Corollary {
            for i in 1..=n {
                let d = hypercube::named_family(&Family::Dictator(i), n)?;
                dictators.push(d.negate());
                dictators.push(d);
            }
        }
        Ok(Self {
            check,
            class,
            points,
            powers,
            dictators,
        })
    }

    fn scan(&self, start: u64, end: u64) -> Partial {
        let len = 1usize << self.class.n;
        let scale = 1.0 / len as f64;
        let mut partial = Partial::empty(self.points.len());
        let mut spectrum = vec![0.0; len];
        let mut work = vec![0.0; len];
        for f in self.class.range(start, end) {
            for (m, c) in spectrum.iter_mut().enumerate() {
                *c = if f.is_minus(m) { -scale } else { scale };
            }
            hypercube::fwht_in_place(&mut spectrum);
            let bias = channel::bias(&f);
            let is_dictator = self.dictators.contains(&f);
            for (i, plan) in self.points.iter().enumerate() {
                work.copy_from_slice(&spectrum);
                hypercube::attenuate_in_place(&mut work, &self.powers[i]);
                hypercube::fwht_in_place(&mut work);
                let lhs = match plan.point.k {
                    Some(k) => channel::even_moment_of(&work, k),
                    None => channel::mi_from_deviations(&work, bias),
                };
                let margin = plan.rhs - lhs;
                let violated = match self.check {
                    CheckId::Corollary if is_dictator => margin.abs() >= TIE_TOLERANCE,
                    CheckId::Corollary => margin <= STRICT_MARGIN,
                    _ => margin < -CHECK_TOLERANCE,
                };
                let stats = &mut partial.stats[i];
                if !(self.check == CheckId::Corollary && is_dictator) {
                    stats.min_margin = stats.min_margin.min(margin);
                }
                stats.offer(lhs, || f.to_string());
                if violated {
                    partial.violation_count += 1;
                    if partial.violations.len() < MAX_RECORDED_VIOLATIONS {
                        partial.violations.push(Violation {
                            function: f.to_string(),
                            alpha: plan.point.alpha.alpha(),
                            k: plan.point.k,
                            lhs,
                            rhs: plan.rhs,
                            check: self.check,
                        });
                    }
                }
                partial.checked += 1;
            }
        }
        partial
    }

    fn scan_parallel(&self, start: u64, end: u64) -> Partial {
        let chunks: Vec<(u64, u64)> = (start..end)
            .step_by(CHUNK as usize)
            .map(|s| (s, (s + CHUNK).min(end)))
            .collect();
        let partials: Vec<Partial> = chunks
            .into_par_iter()
            .map(|(s, e)| self.scan(s, e))
            .collect();
        let mut total = Partial::empty(self.points.len());
        for p in partials {
            total.merge(p);
        }
        total
    }

    fn fingerprint(&self) -> String {
        let points: Vec<GridPoint> = self.points.iter().map(|p| p.point).collect();
        serde_json::to_string(&(self.check, self.class, points)).expect("serializable")
    }

    fn run(&self, options: &SearchOptions) -> Result<SearchReport> {
        let body = || -> Result<Partial> {
            match &options.checkpoint {
                None => Ok(self.scan_parallel(0, self.class.size())),
                Some(path) => self.run_checkpointed(path, options.block_size.max(1)),
            }
        };
        let partial = match options.threads {
            Some(threads) => rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| SearchError::ThreadPool(e.to_string()))?
                .install(body)?,
            None => body()?,
        }
        .finish();
        Ok(SearchReport {
            check: self.check,
            class: self.class,
            points: self.points.iter().map(|p| p.point).collect(),
            checked_count: partial.checked,
            violation_count: partial.violation_count,
            violations: partial.violations,
            stats: partial.stats,
        })
    }

    fn run_checkpointed(&self, path: &Path, block: u64) -> Result<Partial> {
        let fingerprint = self.fingerprint();
        let (mut total, mut next) = read_checkpoint(path, &fingerprint, self.points.len())?;
        let size = self.class.size();
        let ck_err = |e: std::io::Error| SearchError::Checkpoint {
            path: path.to_path_buf(),
            reason: e.to_string(),
        };
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(ck_err)?;
        while next < size {
            let end = (next + block).min(size);
            let partial = self.scan_parallel(next, end);
            let record = CheckpointRecord {
                fingerprint: fingerprint.clone(),
                start: next,
                end,
                partial: partial.clone(),
            };
            let line = serde_json::to_string(&record).expect("serializable");
            writeln!(file, "{line}").map_err(ck_err)?;
            file.flush().map_err(ck_err)?;
            total.merge(partial);
            next = end;
        }
        Ok(total)
    }
}

#[derive(Serialize, Deserialize)]
struct CheckpointRecord {
    fingerprint: String,
    start: u64,
    end: u64,
    partial: Partial,
}

/// Folds the completed records of `path` and drops a torn final line left by
/// an interrupted write so appends start on a clean line.
fn read_checkpoint(path: &Path, fingerprint: &str, points: usize) -> Result<(Partial, u64)> {
    let mut total = Partial::empty(points);
    let mut next = 0;
    let err = |reason: String| SearchError::Checkpoint {
        path: path.to_path_buf(),
        reason,
    };
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((total, 0)),
        Err(e) => return Err(err(e.to_string())),
    };
    let mut offset = 0;
    let lines: Vec<&str> = text.split_inclusive('\n').collect();
    for (lineno, line) in lines.iter().enumerate() {
        let last = lineno + 1 == lines.len();
        let parsed = line
            .strip_suffix('\n')
            .and_then(|l| serde_json::from_str::<CheckpointRecord>(l).ok());
        let record = match parsed {
            Some(r) => r,
            None if line.trim().is_empty() && line.ends_with('\n') => {
                offset += line.len();
                continue;
            }
            None if last => {
                OpenOptions::new()
                    .write(true)
                    .open(path)
                    .and_then(|f| f.set_len(offset as u64))
                    .map_err(|e| err(e.to_string()))?;
                break;
            }
            None => return Err(err(format!("record {} is corrupt", lineno + 1))),
        };
        if record.fingerprint != fingerprint {
            return Err(err(format!("record {} belongs to a different scan", lineno + 1)));
        }
        if record.start != next {
            return Err(err(format!(
                "record {} starts at {} but {} was expected",
                lineno + 1,
                record.start,
                next
            )));
        }
        next = record.end;
        total.merge(record.partial);
        offset += line.len();
    }
    Ok((total, next))
}

fn check_balanced(check: CheckId, class: &FunctionClass) -> Result<()> {
    if class.scope.is_balanced() {
        Ok(())
    } else {
        Err(SearchError::NeedsBalanced(check))
    }
}

/// `I(f(X);Y) ≤ 1 - h(α)` for every member of `class`.
pub fn verify_conjecture(
    class: FunctionClass,
    alpha_grid: &[NoiseParameter],
    options: &SearchOptions,
) -> Result<SearchReport> {
    let points = alpha_grid
        .iter()
        .map(|&alpha| PointPlan {
            point: GridPoint::alpha(alpha),
            rhs: bounds::conjectured_bound(alpha.alpha()).expect("validated alpha"),
        })
        .collect();
    Plan::new(CheckId::Conjecture, class, points)?.run(options)
}

fn theorem1_points(alpha_grid: &[NoiseParameter]) -> Result<Vec<PointPlan>> {
    alpha_grid
        .iter()
        .map(|&alpha| {
            let rhs = bounds::theorem1_bound(alpha.alpha()).map_err(|_| SearchError::OutOfRange {
                check: CheckId::Theorem1,
                alpha: alpha.alpha(),
                detail: format!(" (needs alpha >= {})", bounds::theorem1_threshold()),
            })?;
            Ok(PointPlan {
                point: GridPoint::alpha(alpha),
                rhs,
            })
        })
        .collect()
}

/// The balanced-function bound `I ≤ c ρ² + 9(1-c) ρ⁴` on every balanced
/// function on `n` variables.
pub fn verify_theorem1(
    n: usize,
    alpha_grid: &[NoiseParameter],
    large: bool,
    options: &SearchOptions,
) -> Result<SearchReport> {
    let class = FunctionClass::new(n, Scope::Balanced, large)?;
    verify_theorem1_on(class, alpha_grid, options)
}

/// [`verify_theorem1`] on any balanced class, including sampled ones.
pub fn verify_theorem1_on(
    class: FunctionClass,
    alpha_grid: &[NoiseParameter],
    options: &SearchOptions,
) -> Result<SearchReport> {
    check_balanced(CheckId::Theorem1, &class)?;
    let points = theorem1_points(alpha_grid)?;
    Plan::new(CheckId::Theorem1, class, points)?.run(options)
}

/// `M_{2k} ≤ (2k-1)^k (1-2α)^{2k}` at each `(α, k)` of `alpha_grid × k_set`.
pub fn verify_moment_bounds(
    n: usize,
    alpha_grid: &[NoiseParameter],
    k_set: &[usize],
    large: bool,
    options: &SearchOptions,
) -> Result<SearchReport> {
    let mut points = Vec::new();
    for &k in k_set {
        for &alpha in alpha_grid {
            points.push(GridPoint { alpha, k: Some(k) });
        }
    }
    verify_moment_points(FunctionClass::new(n, Scope::Balanced, large)?, &points, options)
}

/// Moment check at explicit `(α, k)` points; every point must satisfy the premise.
pub fn verify_moment_points(
    class: FunctionClass,
    points: &[GridPoint],
    options: &SearchOptions,
) -> Result<SearchReport> {
    check_balanced(CheckId::Moments, &class)?;
    let plans = points
        .iter()
        .map(|&point| {
            let k = point.k.unwrap_or(1);
            let rhs = bounds::moment_bound(point.alpha.alpha(), k).map_err(|_| SearchError::OutOfRange {
                check: CheckId::Moments,
                alpha: point.alpha.alpha(),
                detail: format!(" with k = {k} (needs (1-2 alpha) sqrt(2k-1) <= 1)"),
            })?;
            Ok(PointPlan {
                point: GridPoint { alpha: point.alpha, k: Some(k) },
                rhs,
            })
        })
        .collect::<Result<_>>()?;
    Plan::new(CheckId::Moments, class, plans)?.run(options)
}

/// In the very noisy regime `α ∈ [½ - ᾱ_n, ½)` every balanced non-dictator
/// has `I < 1 - h(α)` strictly and dictators meet it with equality.
pub fn verify_corollary(
    n: usize,
    alpha_grid: &[NoiseParameter],
    large: bool,
    options: &SearchOptions,
) -> Result<SearchReport> {
    let width = bounds::corollary_threshold(n);
    let points = alpha_grid
        .iter()
        .map(|&alpha| {
            let a = alpha.alpha();
            if a < 0.5 - width || a >= 0.5 {
                return Err(SearchError::OutOfRange {
                    check: CheckId::Corollary,
                    alpha: a,
                    detail: format!(" (grid must lie in [{}, 0.5))", 0.5 - width),
                });
            }
            Ok(PointPlan {
                point: GridPoint::alpha(alpha),
                rhs: bounds::conjectured_bound(a).expect("validated alpha"),
            })
        })
        .collect::<Result<_>>()?;
    let class = FunctionClass::new(n, Scope::Balanced, large)?;
    Plan::new(CheckId::Corollary, class, points)?.run(options)
}

/// One row of [`moment_crossover_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverRow {
    pub k: usize,
    pub majority_moment: f64,
    pub dictator_moment: f64,
    /// `M_{2k}(Maj) / M_{2k}(Dict)`; `None` when both vanish.
    pub moment_ratio: Option<f64>,
    /// `(max|d|_Maj / max|d|_Dict)^{2k}`; `None` when both vanish.
    pub max_deviation_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverTable {
    pub n: usize,
    pub alpha: NoiseParameter,
    pub majority_max_deviation: f64,
    pub dictator_max_deviation: f64,
    /// All posterior deviations vanish (`α = ½`).
    pub degenerate: bool,
    /// When majority's peak deviation beats the dictator's, the max-deviation
    /// ratio exceeds 1 and increases with k.
    pub dominance_holds: bool,
    pub rows: Vec<CrossoverRow>,
}

/// Majority against a dictator: even moments and peak posterior deviations.
pub fn moment_crossover_experiment(
    n: usize,
    alpha: NoiseParameter,
    k_list: &[usize],
) -> Result<CrossoverTable> {
    if n.is_multiple_of(2) || n > 7 {
        return Err(SearchError::CrossoverDimension(n));
    }
    let majority = hypercube::named_family(&Family::Majority, n)?;
    let dictator = hypercube::named_family(&Family::Dictator(1), n)?;
    let maj = channel::posterior_table(&majority, alpha);
    let dict = channel::posterior_table(&dictator, alpha);
    let (maj_peak, _) = maj.max_deviation();
    let (dict_peak, _) = dict.max_deviation();
    let degenerate = maj_peak == 0.0 && dict_peak == 0.0;
    let ratio = |a: f64, b: f64| (!degenerate && b > 0.0).then(|| a / b);
    let rows: Vec<CrossoverRow> = k_list
        .iter()
        .map(|&k| {
            let m_maj = maj.even_moment(k);
            let m_dict = dict.even_moment(k);
            CrossoverRow {
                k,
                majority_moment: m_maj,
                dictator_moment: m_dict,
                moment_ratio: ratio(m_maj, m_dict),
                max_deviation_ratio: ratio(maj_peak, dict_peak).map(|r| r.powi(2 * k as i32)),
            }
        })
        .collect();
    let dominance_holds = if !degenerate && maj_peak > dict_peak {
        let ratios: Vec<f64> = rows.iter().filter_map(|r| r.max_deviation_ratio).collect();
        let mut ks: Vec<(usize, f64)> = rows.iter().map(|r| r.k).zip(ratios).collect();
        ks.sort_by_key(|(k, _)| *k);
        ks.iter().all(|(_, r)| *r > 1.0) && ks.windows(2).all(|w| w[0].0 == w[1].0 || w[1].1 > w[0].1)
    } else {
        true
    };
    Ok(CrossoverTable {
        n,
        alpha,
        majority_max_deviation: maj_peak,
        dictator_max_deviation: dict_peak,
        degenerate,
        dominance_holds,
        rows,
    })
}

/// Outcome of a pointwise property sweep (Taylor dominance, hypercontractivity).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub check: String,
    pub checked_count: u64,
    pub violation_count: u64,
    /// First [`MAX_RECORDED_VIOLATIONS`] failures, as `{what, lhs, rhs}`.
    pub violations: Vec<PropertyViolation>,
    /// Smallest `rhs - lhs` seen.
    pub min_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyViolation {
    pub what: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl PropertyReport {
    fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            checked_count: 0,
            violation_count: 0,
            violations: Vec::new(),
            min_margin: f64::INFINITY,
        }
    }

    /// Records `lhs ≤ rhs + CHECK_TOLERANCE`.
    fn record(&mut self, lhs: f64, rhs: f64, what: impl FnOnce() -> String) {
        self.checked_count += 1;
        self.min_margin = self.min_margin.min(rhs - lhs);
        let holds = lhs <= rhs + CHECK_TOLERANCE;
        if !holds {
            self.violation_count += 1;
            if self.violations.len() < MAX_RECORDED_VIOLATIONS {
                self.violations.push(PropertyViolation { what: what(), lhs, rhs });
            }
        }
    }

    pub fn is_verified(&self) -> bool {
        self.violation_count == 0
    }
}

/// Truncated entropy series against `h((1-p)/2)` on `count` evenly spaced
/// `p ∈ [-1, 1]` for `t = 1..=t_max`, plus monotonicity in `t`.
pub fn verify_taylor(count: usize, t_max: usize) -> PropertyReport {
    let mut report = PropertyReport::new("taylor");
    let step = if count > 1 { 2.0 / (count - 1) as f64 } else { 0.0 };
    for i in 0..count {
        let p = if i + 1 == count && count > 1 { 1.0 } else { -1.0 + step * i as f64 };
        let exact = channel::binary_entropy((1.0 - p) / 2.0).expect("probability in range");
        let mut previous = f64::NEG_INFINITY;
        for t in 1..=t_max {
            let lower = channel::entropy_taylor_lower_bound(p, t).expect("p in range, t > 0");
            report.record(lower, exact, || format!("p={p},t={t}"));
            report.record(previous, lower, || format!("monotone p={p},t={t}"));
            previous = lower;
        }
    }
    report
}

/// `‖T_ρ g‖_q ≤ ‖g‖_2` with `ρ = (q-1)^{-1/2}` on `samples` uniform random
/// tables in `[-1, 1)` per dimension.
pub fn verify_hypercontractivity(dims: &[usize], q_values: &[f64], samples: u64, seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("hypercontractivity");
    for &n in dims {
        if n == 0 || n > hypercube::n_max() {
            return Err(HypercubeError::DimensionOutOfRange { n, max: hypercube::n_max() }.into());
        }
        for i in 0..samples {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed ^ ((n as u64) << 48), i));
            let values: Vec<f64> = (0..1usize << n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let g = hypercube::RealHypercubeFunction::new(n, values)?;
            for &q in q_values {
                let rho = (1.0 / (q - 1.0)).sqrt();
                let c = channel::hypercontractive_check(&g, rho, 2.0, q).expect("valid norm orders");
                report.record(c.lhs, c.rhs, || format!("n={n},sample={i},q={q}"));
            }
        }
    }
    Ok(report)
}
