//! Uniform random search over complete cycles.
//!
//! Samples are drawn in fixed-size chunks; chunk `c` uses ChaCha8 keyed by
//! the caller's seed on stream `c`. The sample sequence is therefore the
//! same whether chunks run on one thread or many.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;

use crate::cost::Weight;
use crate::error::{Error, Result};
use crate::exact::{cycle_count, solve_exact_with, SolveOptions, Tour};
use crate::instances::{sum_along, CostMatrix};
use crate::{seeded_rng, LabRng};

/// Samples per independently seeded chunk.
pub const CHUNK: u64 = 4096;

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

fn chunk_rng(seed: u64, chunk: u64) -> LabRng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(chunk);
    rng
}

/// Fisher–Yates shuffle of `seq[1..]`; vertex 0 stays in front.
fn shuffle_tail(rng: &mut LabRng, seq: &mut [usize]) {
    for i in (2..seq.len()).rev() {
        let j = rng.random_range(1..=i);
        seq.swap(i, j);
    }
}

/// Folds every sample of chunk `c` into its own accumulator; results come
/// back in chunk order.
fn fold_chunks<T: Send>(
    n: usize,
    k: u64,
    seed: u64,
    init: impl Fn() -> T + Sync,
    step: impl Fn(&mut T, &[usize]) + Sync,
) -> Vec<T> {
    (0..k.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let mut acc = init();
            let mut seq = vec![0; n];
            for _ in 0..CHUNK.min(k - c * CHUNK) {
                for (i, v) in seq.iter_mut().enumerate() {
                    *v = i;
                }
                shuffle_tail(&mut rng, &mut seq);
                step(&mut acc, &seq);
            }
            acc
        })
        .collect()
}

/// `k` i.i.d. uniform draws over the `(n-1)!` rotation-normalised directed
/// cycles.
pub fn sample_cycles(n: usize, k: u64, seed: u64) -> Result<Vec<Tour>> {
    if n < 3 || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "sampling needs n >= 3 and k >= 1, got n = {n}, k = {k}"
        )));
    }
    let parts = fold_chunks(n, k, seed, Vec::new, |acc: &mut Vec<Tour>, s| {
        acc.push(Tour::new(s.to_vec()).expect("permutation"));
    });
    Ok(parts.into_iter().flatten().collect())
}

/// 95% Wilson score interval for `hits` successes in `k` trials.
pub fn wilson_interval(hits: u64, k: u64) -> (f64, f64) {
    let kf = k as f64;
    let p = hits as f64 / kf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / kf;
    let center = (p + z2 / (2.0 * kf)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / kf + z2 / (4.0 * kf * kf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HitEstimate {
    pub samples: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// (number of optimal tours) / (n-1)!
    pub theoretical: f64,
    pub num_optimal: usize,
    pub n: usize,
    pub seed: u64,
}

impl HitEstimate {
    pub fn brackets_theory(&self) -> bool {
        self.ci_low <= self.theoretical && self.theoretical <= self.ci_high
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n: {}", self.n).unwrap();
        writeln!(out, "seed: {}", self.seed).unwrap();
        writeln!(out, "samples: {}", self.samples).unwrap();
        writeln!(out, "hits: {}", self.hits).unwrap();
        writeln!(out, "p_hat: {:?}", self.p_hat).unwrap();
        writeln!(out, "ci_low: {:?}", self.ci_low).unwrap();
        writeln!(out, "ci_high: {:?}", self.ci_high).unwrap();
        writeln!(out, "num_optimal: {}", self.num_optimal).unwrap();
        writeln!(out, "theoretical: {:?}", self.theoretical).unwrap();
        // Same quantity in the n+1 vertex convention: 1/m! with m = n - 1.
        writeln!(
            out,
            "theoretical_convention: {}/({}!)",
            self.num_optimal,
            self.n - 1
        )
        .unwrap();
        writeln!(out, "brackets_theory: {}", self.brackets_theory()).unwrap();
        out
    }
}

/// Fraction of `k` uniform cycles that hit the exact optimum cost.
pub fn estimate_hit_rate(
    cm: &CostMatrix,
    k: u64,
    seed: u64,
    opts: SolveOptions,
) -> Result<HitEstimate> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    let sol = solve_exact_with(cm, None, opts)?
        .optimal()
        .expect("complete graph always has a cycle");
    let n = cm.n();
    let hits: u64 = with_weights!(cm, |w| {
        let opt = sol
            .opt_tours
            .first()
            .map(|t| sum_along(n, w, t.seq(), true))
            .expect("non-empty");
        fold_chunks(
            n,
            k,
            seed,
            || 0u64,
            |hits, s| {
                if sum_along(n, w, s, true).ties(opt) {
                    *hits += 1;
                }
            },
        )
        .into_iter()
        .sum()
    });
    let (ci_low, ci_high) = wilson_interval(hits, k);
    Ok(HitEstimate {
        samples: k,
        hits,
        p_hat: hits as f64 / k as f64,
        ci_low,
        ci_high,
        theoretical: sol.opt_tours.len() as f64 / cycle_count(n) as f64,
        num_optimal: sol.opt_tours.len(),
        n,
        seed,
    })
}

/// Exact arithmetic for the polynomial-size cycle subset bound, evaluated
/// with `n` as written there (cycles of an `(n+1)`-vertex instance number `n!`).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    /// `n^3 / n!`
    pub p_j: BigRational,
    /// `n^2 / ((n-1)(n-2))`, the constant with `p_j = a_star / (n-3)!`.
    pub a_star: BigRational,
    /// `1 / (a_star (n-3)!)`
    pub lower: BigRational,
    /// `1 - p_j`
    pub complement: BigRational,
    /// `p_j > 1`: the expression is not a probability.
    pub p_j_exceeds_one: bool,
    /// `1 < a_star < 8`
    pub a_star_in_range: bool,
    /// `lower <= p_j`
    pub lower_bound_holds: bool,
    /// `p_j <= 1/n!` as literally stated.
    pub upper_claim_holds: bool,
    /// `((n-3)! - 1)/(n-3)! <= 1 - p_j` as literally stated.
    pub complement_lower_claim_holds: bool,
    /// `1 - p_j <= (a_star (n-3)! - 1)/(a_star (n-3)!)` as literally stated.
    pub complement_upper_claim_holds: bool,
}

fn big_factorial(k: usize) -> BigInt {
    (1..=k)
        .map(BigInt::from)
        .product::<BigInt>()
        .max(BigInt::one())
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn bounds_report(n: usize) -> Result<BoundsReport> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "bounds need n >= 4, got {n}"
        )));
    }
    let nb = BigInt::from(n);
    let one = BigRational::one();
    let n_fact = big_factorial(n);
    let m_fact = BigRational::from_integer(big_factorial(n - 3));
    let p_j = BigRational::new(nb.pow(3), n_fact.clone());
    let a_star = BigRational::new(nb.pow(2), BigInt::from((n - 1) * (n - 2)));
    let lower = one.clone() / (a_star.clone() * m_fact.clone());
    let complement = one.clone() - p_j.clone();
    let eight = BigRational::from_integer(BigInt::from(8));
    let a_m = a_star.clone() * m_fact.clone();
    Ok(BoundsReport {
        n,
        p_j_exceeds_one: p_j > one,
        a_star_in_range: a_star > one && a_star < eight,
        lower_bound_holds: lower <= p_j,
        upper_claim_holds: p_j <= BigRational::new(BigInt::one(), n_fact),
        complement_lower_claim_holds: (m_fact.clone() - one.clone()) / m_fact <= complement,
        complement_upper_claim_holds: complement <= (a_m.clone() - one) / a_m,
        p_j,
        a_star,
        lower,
        complement,
    })
}

impl BoundsReport {
    pub fn report(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, k: &str, r: &BigRational| {
            writeln!(out, "{k}: {} ({:e})", r, ratio_to_f64(r)).unwrap();
        };
        writeln!(out, "n: {}", self.n).unwrap();
        line(&mut out, "p_j", &self.p_j);
        line(&mut out, "a_star", &self.a_star);
        line(&mut out, "lower", &self.lower);
        line(&mut out, "complement", &self.complement);
        writeln!(out, "p_j_exceeds_one: {}", self.p_j_exceeds_one).unwrap();
        writeln!(out, "a_star_in_range: {}", self.a_star_in_range).unwrap();
        writeln!(out, "lower_bound_holds: {}", self.lower_bound_holds).unwrap();
        writeln!(out, "upper_claim_holds: {}", self.upper_claim_holds).unwrap();
        writeln!(
            out,
            "complement_lower_claim_holds: {}",
            self.complement_lower_claim_holds
        )
        .unwrap();
        writeln!(
            out,
            "complement_upper_claim_holds: {}",
            self.complement_upper_claim_holds
        )
        .unwrap();
        out
    }
}
