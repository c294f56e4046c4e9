//! Analytical memory/time cost model for slice-pool configurations.
//!
//! Memory is counted in 32-bit slots. For a term with frequency `f` the
//! allocator produces a chain of slices whose cumulative posting capacities
//! form a threshold sequence; the slot count and the number of followable
//! inter-slice pointers are step functions of `f` over those thresholds.
//! Layered on top: exact and closed-form evaluation of the total memory
//! cost under a Zipfian rank/frequency law, an abstract time cost that
//! counts pointer follows (each one is likely a cache miss, so it is the
//! configuration-dependent part of traversal time), a configuration sweep,
//! and memory-bucketed Pareto selection.

use std::ops::RangeInclusive;

use crate::config::PoolConfig;
use crate::error::{Error, Result};

/// Cumulative posting-capacity thresholds for one configuration and
/// starting pool, extended on demand.
///
/// With `theta(i)` the total postings the first `i + 1` slices of a chain
/// can hold: the first slice holds its full `2^{z_s}` words of postings when
/// the chain starts in pool 0, one fewer otherwise (slot 0 is the reserved
/// null pointer); every later slice gives its size minus the pointer slot,
/// drawing from the next pool up until the last pool repeats.
#[derive(Debug, Clone)]
pub struct ThresholdTable {
    exponents: Vec<u8>,
    start_pool: usize,
    thetas: Vec<u64>,
}

impl ThresholdTable {
    pub fn new(config: &PoolConfig, start_pool: usize) -> Result<Self> {
        if start_pool >= config.pool_count() {
            return Err(Error::InvalidConfig(format!(
                "start pool {start_pool} out of range (pools: {})",
                config.pool_count()
            )));
        }
        let first_capacity =
            (1u64 << config.exponent(start_pool)) - if start_pool > 0 { 1 } else { 0 };
        Ok(ThresholdTable {
            exponents: config.exponents().to_vec(),
            start_pool,
            thetas: vec![first_capacity],
        })
    }

    pub fn start_pool(&self) -> usize {
        self.start_pool
    }

    /// Posting capacity of the chain's `index`-th slice.
    fn capacity(&self, index: usize) -> u64 {
        let pool = (self.start_pool + index).min(self.exponents.len() - 1);
        (1u64 << self.exponents[pool])
            - if index > 0 || self.start_pool > 0 {
                1
            } else {
                0
            }
    }

    fn grow_once(&mut self) -> Result<()> {
        let i = self.thetas.len();
        let cap = self.capacity(i);
        if cap == 0 {
            return Err(Error::InvalidConfig(
                "slice chain cannot grow: continuation slices need at least 2 words".into(),
            ));
        }
        let last = *self.thetas.last().expect("table never empty");
        self.thetas.push(last + cap);
        Ok(())
    }

    /// Threshold `i`, extending the table as needed.
    pub fn theta(&mut self, i: usize) -> Result<u64> {
        while self.thetas.len() <= i {
            self.grow_once()?;
        }
        Ok(self.thetas[i])
    }

    /// Index `i` of the interval `theta(i-1) < f <= theta(i)`; 0 when
    /// `f <= theta(0)`. Also the chain's slice count minus one and its
    /// followable pointer count.
    pub fn bucket_of(&mut self, f: u64) -> Result<usize> {
        if f < 1 {
            return Err(Error::Range {
                what: "frequency",
                value: f,
                allowed: ">= 1",
            });
        }
        while *self.thetas.last().expect("table never empty") < f {
            self.grow_once()?;
        }
        Ok(self.thetas.partition_point(|&t| t < f))
    }

    /// Total slots (postings plus pointer slots) a term with frequency `f`
    /// occupies.
    pub fn slots_for(&mut self, f: u64) -> Result<u64> {
        let i = self.bucket_of(f)?;
        let pointer_slots = i as u64 + if self.start_pool > 0 { 1 } else { 0 };
        Ok(self.thetas[i] + pointer_slots)
    }

    /// Followable (non-null) previous pointers in the chain for frequency
    /// `f`.
    pub fn pointers_for(&mut self, f: u64) -> Result<u64> {
        Ok(self.bucket_of(f)? as u64)
    }
}

/// Slots required for one term with frequency `f` starting in `start_pool`.
pub fn slots_required(f: u64, config: &PoolConfig, start_pool: usize) -> Result<u64> {
    ThresholdTable::new(config, start_pool)?.slots_for(f)
}

/// Followable previous pointers for one term with frequency `f`.
pub fn pointer_count(f: u64, config: &PoolConfig, start_pool: usize) -> Result<u64> {
    ThresholdTable::new(config, start_pool)?.pointers_for(f)
}

/// Total slots for a collection given per-term (frequency, starting pool)
/// pairs.
pub fn memory_cost_direct(
    config: &PoolConfig,
    terms: impl IntoIterator<Item = (u64, usize)>,
) -> Result<u64> {
    let mut tables: Vec<Option<ThresholdTable>> = vec![None; config.pool_count()];
    let mut total = 0u64;
    for (f, s) in terms {
        if s >= tables.len() {
            return Err(Error::InvalidConfig(format!(
                "start pool {s} out of range (pools: {})",
                tables.len()
            )));
        }
        let table = match &mut tables[s] {
            Some(t) => t,
            slot => slot.insert(ThresholdTable::new(config, s)?),
        };
        total += table.slots_for(f)?;
    }
    Ok(total)
}

/// Parameters of the Zipfian rank/frequency law `p(r) = r^-alpha / H` with
/// `H` the generalized harmonic number over the vocabulary, plus the
/// derived rank-bound factor `beta = (H / N)^(-1/alpha)`.
#[derive(Debug, Clone)]
pub struct ZipfParams {
    pub alpha: f64,
    pub vocab: u64,
    pub total_terms: f64,
    pub harmonic: f64,
    pub beta: f64,
}

impl ZipfParams {
    pub fn new(alpha: f64, vocab: u64, total_terms: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if vocab < 1 {
            return Err(Error::InvalidConfig("vocabulary must be non-empty".into()));
        }
        if !total_terms.is_finite() || total_terms <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "total term count must be positive, got {total_terms}"
            )));
        }
        let harmonic = harmonic_number(vocab, alpha);
        let beta = (harmonic / total_terms).powf(-1.0 / alpha);
        Ok(ZipfParams {
            alpha,
            vocab,
            total_terms,
            harmonic,
            beta,
        })
    }

    fn frequency_at(&self, rank: u64) -> f64 {
        self.total_terms * (rank as f64).powf(-self.alpha) / self.harmonic
    }

    /// Integer frequency assigned to a rank: the real-valued estimate
    /// rounded down, kept at least 1 so every vocabulary entry stays a term.
    fn discrete_frequency(&self, rank: u64) -> u64 {
        let f = self.frequency_at(rank).floor();
        if f < 1.0 { 1 } else { f as u64 }
    }
}

/// Generalized harmonic number `H_{n,alpha}`, summed smallest-terms-first
/// with compensated accumulation. Exact-summation territory for `n` up to
/// around `2 * 10^7`, which covers every parameterization used here.
fn harmonic_number(n: u64, alpha: f64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in (1..=n).rev() {
        let term = (x as f64).powf(-alpha);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Estimated real-valued frequency of the rank-`r` term: `N * p(r)`.
pub fn zipf_frequency(rank: u64, params: &ZipfParams) -> Result<f64> {
    if rank < 1 || rank > params.vocab {
        return Err(Error::Range {
            what: "rank",
            value: rank,
            allowed: "1..=vocabulary size",
        });
    }
    Ok(params.frequency_at(rank))
}

/// The integer frequency the summations assign to a rank: the real-valued
/// estimate floored, kept at least 1.
pub fn zipf_discrete_frequency(rank: u64, params: &ZipfParams) -> Result<u64> {
    zipf_frequency(rank, params)?;
    Ok(params.discrete_frequency(rank))
}

/// Number of ranks whose real-valued frequency is at least `t` (an integer
/// threshold), clamped to the vocabulary.
///
/// The float estimate `beta * t^(-1/alpha)` lands within a step or two of
/// the true boundary; the fix-up loops re-evaluate the same frequency
/// expression the direct summation uses, so bucketed and direct totals
/// agree exactly.
fn ranks_with_frequency_at_least(t: u64, params: &ZipfParams) -> u64 {
    let tf = t as f64;
    let est = (params.beta * tf.powf(-1.0 / params.alpha)).floor();
    let mut r = est.clamp(0.0, params.vocab as f64) as u64;
    while r < params.vocab && params.frequency_at(r + 1) >= tf {
        r += 1;
    }
    while r >= 1 && params.frequency_at(r) < tf {
        r -= 1;
    }
    r
}

/// Memory cost under the Zipfian law by direct summation over every rank.
/// All chains start in pool 0.
pub fn memory_cost_zipf_direct(config: &PoolConfig, params: &ZipfParams) -> Result<u64> {
    let mut table = ThresholdTable::new(config, 0)?;
    let mut total = 0u64;
    for rank in 1..=params.vocab {
        total += table.slots_for(params.discrete_frequency(rank))?;
    }
    Ok(total)
}

/// Memory cost under the Zipfian law evaluated per threshold bucket instead
/// of per rank: `O(f_max / smallest repeated capacity)` work instead of
/// `O(|V|)`.
///
/// Rank-interval boundaries use the same integer frequency discretization
/// as [`memory_cost_zipf_direct`], so the two agree exactly.
pub fn memory_cost_closed_bucketed(config: &PoolConfig, params: &ZipfParams) -> Result<u64> {
    let mut table = ThresholdTable::new(config, 0)?;
    let f_max = params.discrete_frequency(1);
    let theta0 = table.theta(0)?;
    let mut total = (params.vocab - ranks_with_frequency_at_least(theta0 + 1, params)) * theta0;
    let mut k = 1usize;
    while table.theta(k - 1)? < f_max {
        let hi = ranks_with_frequency_at_least(table.theta(k - 1)? + 1, params);
        let lo = ranks_with_frequency_at_least(table.theta(k)? + 1, params);
        total += (hi - lo) * (table.theta(k)? + k as u64);
        k += 1;
    }
    Ok(total)
}

/// The continuous closed form: per-bucket rank counts taken as real-valued
/// interval lengths `beta * (theta_{k-1}^(-1/a) - theta_k^(-1/a))` with rank
/// bounds clamped to the vocabulary, plus the `theta_0` tail bucket
/// `(|V| - beta * theta_0^(-1/a) + 1) * theta_0`.
///
/// Informational: the real-valued bounds ignore frequency discretization,
/// so this deviates from the exact totals by a small per-bucket remainder.
pub fn memory_cost_closed_continuous(config: &PoolConfig, params: &ZipfParams) -> Result<f64> {
    let mut table = ThresholdTable::new(config, 0)?;
    let v = params.vocab as f64;
    let inv_alpha = 1.0 / params.alpha;
    let rank_bound = |theta: u64| params.beta * (theta as f64).powf(-inv_alpha);

    let theta0 = table.theta(0)?;
    let lo0 = rank_bound(theta0).clamp(1.0, v + 1.0);
    let mut total = (v + 1.0 - lo0) * theta0 as f64;
    let mut k = 1usize;
    loop {
        let hi = rank_bound(table.theta(k - 1)?);
        if hi <= 1.0 {
            break;
        }
        let lo = rank_bound(table.theta(k)?);
        let b = hi.clamp(1.0, v + 1.0);
        let a = lo.clamp(1.0, v + 1.0);
        if b > a {
            total += (b - a) * (table.theta(k)? + k as u64) as f64;
        }
        k += 1;
    }
    Ok(total)
}

/// Abstract time cost of reading the given query-term postings lists end to
/// end: the total followable pointer count, in units of the (constant,
/// never physically estimated) cost of one pointer follow.
///
/// `query_freqs` is a frequency histogram: (term frequency, number of query
/// term occurrences with that frequency).
pub fn time_cost(
    config: &PoolConfig,
    query_freqs: &[(u64, u64)],
    start_pool: usize,
) -> Result<u64> {
    let mut table = ThresholdTable::new(config, start_pool)?;
    let mut total = 0u64;
    for &(f, count) in query_freqs {
        total += count * table.pointers_for(f)?;
    }
    Ok(total)
}

/// One sweep result: a configuration with its two analytical costs.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub config: PoolConfig,
    pub memory_cost: u64,
    pub time_cost: u64,
}

/// Evaluate every configuration with strictly increasing exponents drawn
/// from `exponent_range`, for each pool count in `pool_counts`. Order:
/// ascending pool count, then lexicographic exponents.
pub fn sweep_configurations(
    exponent_range: RangeInclusive<u8>,
    pool_counts: RangeInclusive<usize>,
    params: &ZipfParams,
    query_freqs: &[(u64, u64)],
) -> Result<Vec<SweepPoint>> {
    let exponents: Vec<u8> = exponent_range.collect();
    let n = exponents.len();
    let mut points = Vec::new();
    for pools in pool_counts {
        if pools == 0 || pools > n {
            continue;
        }
        let mut pick: Vec<usize> = (0..pools).collect();
        loop {
            let combo: Vec<u8> = pick.iter().map(|&i| exponents[i]).collect();
            let config = PoolConfig::new(combo)?;
            let memory_cost = memory_cost_closed_bucketed(&config, params)?;
            let time_cost = time_cost(&config, query_freqs, 0)?;
            points.push(SweepPoint {
                config,
                memory_cost,
                time_cost,
            });
            // Advance to the next lexicographic index combination.
            let Some(i) = (0..pools).rev().find(|&i| pick[i] < n - pools + i) else {
                break;
            };
            pick[i] += 1;
            for j in i + 1..pools {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    Ok(points)
}

/// Partition the memory-cost range into `n_buckets` equal-width intervals
/// and pick, from each non-empty bucket, the point with the smallest time
/// cost. Ties break toward smaller memory cost, then lexicographically
/// smaller exponents. Returns indices into `points`, ascending.
pub fn pareto_bucket_select(points: &[SweepPoint], n_buckets: usize) -> Vec<usize> {
    if points.is_empty() || n_buckets == 0 {
        return Vec::new();
    }
    let min_m = points
        .iter()
        .map(|p| p.memory_cost)
        .min()
        .expect("non-empty");
    let max_m = points
        .iter()
        .map(|p| p.memory_cost)
        .max()
        .expect("non-empty");
    let span = (max_m - min_m) as f64;
    let mut best: Vec<Option<usize>> = vec![None; n_buckets];
    for (i, pt) in points.iter().enumerate() {
        let bucket = if span == 0.0 {
            0
        } else {
            (((pt.memory_cost - min_m) as f64 / span) * n_buckets as f64) as usize
        }
        .min(n_buckets - 1);
        let replace = match best[bucket] {
            None => true,
            Some(j) => {
                let cur = &points[j];
                (pt.time_cost, pt.memory_cost, pt.config.exponents())
                    < (cur.time_cost, cur.memory_cost, cur.config.exponents())
            }
        };
        if replace {
            best[bucket] = Some(i);
        }
    }
    best.into_iter().flatten().collect()
}
