//! Exhaustive enumeration of complete cycles and everything that rests on it:
//! exact optima, canonical relabelling, coincident edges and the subsequence
//! monotonicity test.
//!
//! Tours are directed and stored rotated so that vertex 0 comes first; the
//! `n - 1` other rotations of the same cycle are not enumerated separately.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::cost::{Cost, Weight};
use crate::error::{Error, ParseError, Result};
use crate::instances::{content_lines, sum_along, CostMatrix, EdgeMask};
use crate::seeded_rng;

/// Enumeration is refused above this `n` unless forced (11! ≈ 4·10^7 tours).
pub const ENUMERATION_GUARD: usize = 12;

/// Pairwise-distinct cost checking keeps every cycle cost in memory; it is
/// only attempted when the cycle count stays below this bound.
pub const DISTINCT_GUARD: u64 = 3_628_800;

/// Up to this `n` the monotonicity check enumerates every path pair.
pub const EXHAUSTIVE_MONOTONICITY_MAX_N: usize = 7;

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Number of rotation-normalised directed complete cycles on `n` vertices.
pub fn cycle_count(n: usize) -> u64 {
    factorial(n.saturating_sub(1))
}

pub fn check_guard(n: usize, force: bool) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n must be >= 3, got {n}")));
    }
    if n > ENUMERATION_GUARD && !force {
        return Err(Error::GuardExceeded {
            n,
            limit: ENUMERATION_GUARD,
        });
    }
    Ok(())
}

/// A directed complete cycle, rotated to start at vertex 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tour {
    seq: Vec<usize>,
}

impl Tour {
    /// Validates a 0-based vertex sequence and rotates it to start at 0.
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        let n = seq.len();
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "a complete cycle needs at least 3 vertices, got {n}"
            )));
        }
        let mut seen = vec![false; n];
        for &v in &seq {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v + 1, n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidArgument(format!(
                    "vertex {} repeated in tour",
                    v + 1
                )));
            }
        }
        let start = seq.iter().position(|&v| v == 0).expect("permutation");
        let mut seq = seq;
        seq.rotate_left(start);
        Ok(Self { seq })
    }

    /// Builds a tour from 1-based labels.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let n = labels.len();
        let seq = labels
            .iter()
            .map(|&l| {
                if l == 0 || l > n {
                    Err(Error::VertexOutOfRange { vertex: l, n })
                } else {
                    Ok(l - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(seq)
    }

    pub(crate) fn from_canonical(seq: Vec<usize>) -> Self {
        debug_assert_eq!(seq.first(), Some(&0));
        Self { seq }
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn labels(&self) -> Vec<usize> {
        self.seq.iter().map(|v| v + 1).collect()
    }

    /// `succ[v]` is the vertex visited after `v`.
    pub fn successors(&self) -> Vec<usize> {
        let n = self.n();
        let mut succ = vec![0; n];
        for k in 0..n {
            succ[self.seq[k]] = self.seq[(k + 1) % n];
        }
        succ
    }

    /// Directed edges including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).map(move |k| (self.seq[k], self.seq[(k + 1) % n]))
    }

    /// Same cycle traversed in the opposite direction.
    pub fn reversed(&self) -> Tour {
        let mut seq = self.seq.clone();
        seq[1..].reverse();
        Tour { seq }
    }

    /// One line of 1-based labels.
    pub fn to_text(&self) -> String {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        labels.join(" ")
    }
}

/// Reads a tour file: one line of 1-based labels, return to start implicit.
pub fn parse_tour(text: &str) -> Result<Tour, ParseError> {
    let mut lines = content_lines(text);
    let (line, body) = lines.next().ok_or(ParseError::Truncated { line: 1 })?;
    if let Some((extra, _)) = lines.next() {
        return Err(ParseError::TrailingContent { line: extra });
    }
    let labels = body
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| ParseError::NonNumeric {
                line,
                token: t.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = labels.len();
    if n < 3 {
        return Err(ParseError::TooFewVertices { line, n });
    }
    if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l > n) {
        return Err(ParseError::LabelOutOfRange {
            line,
            label: bad,
            n,
        });
    }
    Tour::from_labels(&labels).map_err(|e| ParseError::Invalid {
        line,
        msg: e.to_string(),
    })
}

/// An open sequence of distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    seq: Vec<usize>,
}

impl Path {
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        if seq.len() < 2 {
            return Err(Error::InvalidArgument(
                "a path needs at least 2 vertices".into(),
            ));
        }
        for (i, v) in seq.iter().enumerate() {
            if seq[..i].contains(v) {
                return Err(Error::InvalidArgument(format!(
                    "vertex {} repeated in path",
                    v + 1
                )));
            }
        }
        Ok(Self { seq })
    }

    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::VertexOutOfRange {
                vertex: 0,
                n: labels.len(),
            });
        }
        Self::new(labels.iter().map(|l| l - 1).collect())
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn labels(&self) -> Vec<usize> {
        self.seq.iter().map(|v| v + 1).collect()
    }
}

/// Sum of consecutive edge costs along an open path.
pub fn path_cost(cm: &CostMatrix, p: &Path) -> Result<Cost> {
    let n = cm.n();
    if let Some(&v) = p.seq.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v + 1, n });
    }
    Ok(with_weights!(cm, |w| sum_along(n, w, &p.seq, false).into_cost()))
}

/// Cost of a complete cycle including the closing edge.
pub fn tour_cost(cm: &CostMatrix, t: &Tour) -> Result<Cost> {
    if t.n() != cm.n() {
        return Err(Error::SizeMismatch {
            expected: cm.n(),
            found: t.n(),
        });
    }
    Ok(with_weights!(cm, |w| sum_along(cm.n(), w, &t.seq, true).into_cost()))
}

/// Lexicographic stream of rotation-normalised tours.
#[derive(Debug, Clone)]
pub struct Cycles {
    seq: Vec<usize>,
    /// First position that is permuted (1 for the full stream, 2 for a
    /// fixed-second-vertex partition).
    free_from: usize,
    done: bool,
}

impl Iterator for Cycles {
    type Item = Tour;

    fn next(&mut self) -> Option<Tour> {
        if self.done {
            return None;
        }
        let out = Tour::from_canonical(self.seq.clone());
        self.done = !next_permutation(&mut self.seq[self.free_from..]);
        Some(out)
    }
}

/// Advances `s` to its lexicographic successor; false when `s` was the last.
fn next_permutation(s: &mut [usize]) -> bool {
    if s.len() < 2 {
        return false;
    }
    let mut i = s.len() - 1;
    while i > 0 && s[i - 1] >= s[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = s.len() - 1;
    while s[j] <= s[i - 1] {
        j -= 1;
    }
    s.swap(i - 1, j);
    s[i..].reverse();
    true
}

/// All `(n-1)!` complete cycles, lexicographic in `seq[1..]`.
pub fn enumerate_cycles(n: usize, force: bool) -> Result<Cycles> {
    check_guard(n, force)?;
    Ok(Cycles {
        seq: (0..n).collect(),
        free_from: 1,
        done: false,
    })
}

/// The partition of [`enumerate_cycles`] whose second vertex is `second`.
/// Concatenating the partitions for `second = 1..n` reproduces the full
/// stream.
pub fn enumerate_cycles_from(n: usize, second: usize, force: bool) -> Result<Cycles> {
    check_guard(n, force)?;
    if second == 0 || second >= n {
        return Err(Error::VertexOutOfRange {
            vertex: second + 1,
            n,
        });
    }
    let mut seq = vec![0, second];
    seq.extend((1..n).filter(|&v| v != second));
    Ok(Cycles {
        seq,
        free_from: 2,
        done: false,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Allow `n` above [`ENUMERATION_GUARD`].
    pub force: bool,
    /// Spread partitions over the current rayon pool.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            force: false,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub opt_cost: Cost,
    /// Every co-optimal tour, sorted lexicographically.
    pub opt_tours: Vec<Tour>,
    /// Whether all feasible cycle costs are pairwise distinct; `None` when
    /// the cycle count exceeded [`DISTINCT_GUARD`].
    pub distinct_costs: Option<bool>,
    pub cycles_evaluated: u64,
}

impl Solution {
    pub fn is_unique(&self) -> bool {
        self.opt_tours.len() == 1
    }

    /// `key: value` lines followed by one optimal tour per line.
    pub fn report(&self) -> String {
        let mut out = String::new();
        writeln!(out, "opt_cost: {}", self.opt_cost).unwrap();
        writeln!(out, "num_opt_tours: {}", self.opt_tours.len()).unwrap();
        let distinct = match self.distinct_costs {
            Some(d) => d.to_string(),
            None => "unknown".to_string(),
        };
        writeln!(out, "distinct_costs: {distinct}").unwrap();
        writeln!(out, "cycles_evaluated: {}", self.cycles_evaluated).unwrap();
        for t in &self.opt_tours {
            writeln!(out, "{}", t.to_text()).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Optimal(Solution),
    /// No complete cycle uses only masked edges.
    Infeasible,
}

impl SolveOutcome {
    pub fn optimal(self) -> Option<Solution> {
        match self {
            SolveOutcome::Optimal(s) => Some(s),
            SolveOutcome::Infeasible => None,
        }
    }

    pub fn as_optimal(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Optimal(s) => Some(s),
            SolveOutcome::Infeasible => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, SolveOutcome::Infeasible)
    }

    pub fn report(&self) -> String {
        match self {
            SolveOutcome::Optimal(s) => s.report(),
            SolveOutcome::Infeasible => "status: infeasible\ncycles_evaluated: 0\n".to_string(),
        }
    }
}

/// Exhaustive minimum over complete cycles, restricted to `mask` when given.
pub fn solve_exact(cm: &CostMatrix, mask: Option<&EdgeMask>) -> Result<SolveOutcome> {
    solve_exact_with(cm, mask, SolveOptions::default())
}

pub fn solve_exact_with(
    cm: &CostMatrix,
    mask: Option<&EdgeMask>,
    opts: SolveOptions,
) -> Result<SolveOutcome> {
    let n = cm.n();
    check_guard(n, opts.force)?;
    if let Some(m) = mask {
        if m.n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: m.n(),
            });
        }
    }
    let keep_costs = cycle_count(n) <= DISTINCT_GUARD;
    Ok(with_weights!(cm, |w| search(
        n,
        w,
        mask,
        keep_costs,
        opts.parallel
    )))
}

struct Partial<W> {
    min: Option<W>,
    best: Vec<(W, Vec<usize>)>,
    costs: Option<Vec<W>>,
    evaluated: u64,
}

impl<W: Weight> Partial<W> {
    fn new(keep_costs: bool) -> Self {
        Self {
            min: None,
            best: Vec::new(),
            costs: keep_costs.then(Vec::new),
            evaluated: 0,
        }
    }

    fn record(&mut self, total: W, seq: &[usize]) {
        self.evaluated += 1;
        if let Some(costs) = &mut self.costs {
            costs.push(total);
        }
        match self.min {
            Some(m) if total < m => {
                self.min = Some(total);
                self.best.retain(|(c, _)| c.ties(total));
                self.best.push((total, seq.to_vec()));
            }
            Some(m) => {
                if total.ties(m) {
                    self.best.push((total, seq.to_vec()));
                }
            }
            None => {
                self.min = Some(total);
                self.best.push((total, seq.to_vec()));
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.evaluated += other.evaluated;
        self.costs = match (self.costs, other.costs) {
            (Some(mut a), Some(b)) => {
                a.extend(b);
                Some(a)
            }
            _ => None,
        };
        let min = match (self.min, other.min) {
            (Some(a), Some(b)) => Some(if b < a { b } else { a }),
            (a, b) => a.or(b),
        };
        self.best.extend(other.best);
        if let Some(m) = min {
            self.best.retain(|(c, _)| c.ties(m));
        }
        self.min = min;
        self
    }
}

struct Dfs<'a, W> {
    n: usize,
    w: &'a [W],
    mask: Option<&'a EdgeMask>,
    path: Vec<usize>,
    used: Vec<bool>,
    out: Partial<W>,
}

impl<W: Weight> Dfs<'_, W> {
    fn allowed(&self, a: usize, b: usize) -> bool {
        self.mask.is_none_or(|m| m.contains(a, b))
    }

    fn run(&mut self, cost: W) {
        let last = *self.path.last().expect("non-empty path");
        if self.path.len() == self.n {
            if self.allowed(last, 0) {
                let total = cost + self.w[last * self.n];
                self.out.record(total, &self.path);
            }
            return;
        }
        for v in 1..self.n {
            if !self.used[v] && self.allowed(last, v) {
                self.used[v] = true;
                self.path.push(v);
                self.run(cost + self.w[last * self.n + v]);
                self.path.pop();
                self.used[v] = false;
            }
        }
    }
}

fn search_partition<W: Weight>(
    n: usize,
    w: &[W],
    mask: Option<&EdgeMask>,
    second: usize,
    keep_costs: bool,
) -> Partial<W> {
    let mut used = vec![false; n];
    used[0] = true;
    used[second] = true;
    let mut dfs = Dfs {
        n,
        w,
        mask,
        path: vec![0, second],
        used,
        out: Partial::new(keep_costs),
    };
    dfs.run(W::ZERO + w[second]);
    dfs.out
}

fn search<W: Weight>(
    n: usize,
    w: &[W],
    mask: Option<&EdgeMask>,
    keep_costs: bool,
    parallel: bool,
) -> SolveOutcome {
    let seconds: Vec<usize> = (1..n)
        .filter(|&v| mask.is_none_or(|m| m.contains(0, v)))
        .collect();
    let parts: Vec<Partial<W>> = if parallel {
        seconds
            .par_iter()
            .map(|&s| search_partition(n, w, mask, s, keep_costs))
            .collect()
    } else {
        seconds
            .iter()
            .map(|&s| search_partition(n, w, mask, s, keep_costs))
            .collect()
    };
    let merged = parts
        .into_iter()
        .fold(Partial::new(keep_costs), Partial::merge);
    let Some(min) = merged.min else {
        return SolveOutcome::Infeasible;
    };
    let distinct_costs = merged.costs.map(|mut costs| {
        costs.sort_by(W::total_cmp);
        costs.windows(2).all(|p| !W::same(p[0], p[1]))
    });
    let mut opt_tours: Vec<Tour> = merged
        .best
        .into_iter()
        .map(|(_, seq)| Tour::from_canonical(seq))
        .collect();
    opt_tours.sort();
    SolveOutcome::Optimal(Solution {
        opt_cost: min.into_cost(),
        opt_tours,
        distinct_costs,
        cycles_evaluated: merged.evaluated,
    })
}

/// A bijection on the vertex set together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRelabeling {
    map: Vec<usize>,
    inverse: Vec<usize>,
}

impl VertexRelabeling {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &m) in map.iter().enumerate() {
            if m >= n {
                return Err(Error::VertexOutOfRange { vertex: m + 1, n });
            }
            if inverse[m] != usize::MAX {
                return Err(Error::InvalidArgument(format!(
                    "relabeling is not injective at {}",
                    m + 1
                )));
            }
            inverse[m] = i;
        }
        Ok(Self { map, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn inverse(&self, v: usize) -> usize {
        self.inverse[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverted(&self) -> VertexRelabeling {
        VertexRelabeling {
            map: self.inverse.clone(),
            inverse: self.map.clone(),
        }
    }

    pub fn apply_to_tour(&self, t: &Tour) -> Result<Tour> {
        if t.n() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: t.n(),
            });
        }
        Tour::new(t.seq.iter().map(|&v| self.map[v]).collect())
    }

    pub fn apply_to_path(&self, p: &Path) -> Result<Path> {
        if let Some(&v) = p.seq.iter().find(|&&v| v >= self.n()) {
            return Err(Error::VertexOutOfRange {
                vertex: v + 1,
                n: self.n(),
            });
        }
        Path::new(p.seq.iter().map(|&v| self.map[v]).collect())
    }
}

/// The descent cycle `n, n-1, ..., 1` (1-based), rotated to start at vertex 1.
pub fn descent_cycle(n: usize) -> Tour {
    let mut seq = vec![0];
    seq.extend((1..n).rev());
    Tour::from_canonical(seq)
}

/// The unique relabeling sending the k-th vertex of `t` (k = 1..n, starting
/// at `t.seq()[0]`) to label `n - k + 1`.
pub fn relabel_to_descent(t: &Tour) -> VertexRelabeling {
    let n = t.n();
    let mut map = vec![0; n];
    for (k, &v) in t.seq.iter().enumerate() {
        map[v] = n - 1 - k;
    }
    VertexRelabeling::new(map).expect("tour is a permutation")
}

/// The equivalent instance with `cost'[m(i)][m(j)] = cost[i][j]`.
pub fn apply_relabeling(cm: &CostMatrix, m: &VertexRelabeling) -> Result<CostMatrix> {
    let n = cm.n();
    if m.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: m.n(),
        });
    }
    fn permute<W: Copy + Default>(n: usize, w: &[W], m: &VertexRelabeling) -> Vec<W> {
        let mut out = vec![W::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                out[m.map[i] * n + m.map[j]] = w[i * n + j];
            }
        }
        out
    }
    match cm.weights() {
        crate::instances::Weights::Exact(w) => CostMatrix::from_exact(n, permute(n, w, m)),
        crate::instances::Weights::Float(w) => CostMatrix::from_float(n, permute(n, w, m)),
    }
}

/// Directed edges shared by two closed tours.
pub fn coincident_edge_count(a: &Tour, b: &Tour) -> Result<usize> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let sa = a.successors();
    let sb = b.successors();
    Ok(sa.iter().zip(&sb).filter(|(x, y)| x == y).count())
}

/// Maximum of [`coincident_edge_count`] over all pairs of distinct tours.
pub fn max_coincident_edges(n: usize, force: bool) -> Result<usize> {
    let succs: Vec<Vec<usize>> = enumerate_cycles(n, force)?
        .map(|t| t.successors())
        .collect();
    let best = (0..succs.len())
        .into_par_iter()
        .map(|i| {
            succs[i + 1..]
                .iter()
                .map(|b| succs[i].iter().zip(b).filter(|(x, y)| x == y).count())
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    Ok(best)
}

/// A subsequence pair whose shorter path costs more than the longer one.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub short: Path,
    pub long: Path,
    pub short_cost: Cost,
    pub long_cost: Cost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub exhaustive: bool,
    pub pairs_checked: u64,
    pub violations: u64,
    pub first_violation: Option<Counterexample>,
}

impl MonotonicityReport {
    pub fn is_monotone(&self) -> bool {
        self.violations == 0
    }
}

struct MonoScan<'a, W> {
    n: usize,
    w: &'a [W],
    pairs: u64,
    violations: u64,
    first: Option<(Vec<usize>, Vec<usize>, W, W)>,
}

impl<W: Weight> MonoScan<'_, W> {
    /// Checks `long` against the subsequence that drops the interior
    /// positions set in `deleted` (bit k = interior position k + 1).
    fn check(&mut self, long: &[usize], long_cost: W, deleted: u64) {
        let l = long.len();
        let short: Vec<usize> = long
            .iter()
            .enumerate()
            .filter(|&(k, _)| k == 0 || k == l - 1 || deleted & (1 << (k - 1)) == 0)
            .map(|(_, &v)| v)
            .collect();
        let short_cost = sum_along(self.n, self.w, &short, false);
        self.pairs += 1;
        if short_cost.exceeds(long_cost) {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some((short, long.to_vec(), short_cost, long_cost));
            }
        }
    }

    fn exhaust(&mut self, path: &mut Vec<usize>, used: &mut [bool], len: usize) {
        if path.len() == len {
            let long_cost = sum_along(self.n, self.w, path, false);
            for deleted in 1..(1u64 << (len - 2)) {
                self.check(path, long_cost, deleted);
            }
            return;
        }
        for v in 0..self.n {
            if !used[v] {
                used[v] = true;
                path.push(v);
                self.exhaust(path, used, len);
                path.pop();
                used[v] = false;
            }
        }
    }
}

/// Looks for paths `p1 ⊂ p2` (subsequence, same endpoints) with
/// `cost(p1) > cost(p2)`.
///
/// For `n <= 7` every pair is checked in lexicographic order of `p2` (by
/// length, then labels) and `trials`/`seed` are ignored. Larger instances
/// draw `trials` random pairs: a random-length `p2` of distinct vertices and
/// a uniformly random nonempty subset of its interior to delete.
pub fn monotonicity_check(cm: &CostMatrix, trials: u64, seed: u64) -> MonotonicityReport {
    with_weights!(cm, |w| mono_scan(cm.n(), w, trials, seed))
}

fn mono_scan<W: Weight>(n: usize, w: &[W], trials: u64, seed: u64) -> MonotonicityReport {
    let mut scan = MonoScan {
        n,
        w,
        pairs: 0,
        violations: 0,
        first: None,
    };
    let exhaustive = n <= EXHAUSTIVE_MONOTONICITY_MAX_N;
    if exhaustive {
        for len in 3..=n {
            let mut used = vec![false; n];
            scan.exhaust(&mut Vec::with_capacity(len), &mut used, len);
        }
    } else {
        let mut rng = seeded_rng(seed);
        let mut verts: Vec<usize> = (0..n).collect();
        for _ in 0..trials {
            let len = rng.random_range(3..=n);
            for k in 0..len {
                let j = rng.random_range(k..n);
                verts.swap(k, j);
            }
            let long = &verts[..len];
            let interior = len - 2;
            let deleted = loop {
                let mut bits = 0u64;
                for k in 0..interior.min(64) {
                    if rng.random::<bool>() {
                        bits |= 1 << k;
                    }
                }
                if bits != 0 {
                    break bits;
                }
            };
            let long_cost = sum_along(n, w, long, false);
            scan.check(long, long_cost, deleted);
        }
    }
    MonotonicityReport {
        exhaustive,
        pairs_checked: scan.pairs,
        violations: scan.violations,
        first_violation: scan.first.map(|(s, l, sc, lc)| Counterexample {
            short: Path { seq: s },
            long: Path { seq: l },
            short_cost: sc.into_cost(),
            long_cost: lc.into_cost(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::instances::{gen_unique_gap, points_to_costs, PointSet};

    fn unit_square() -> CostMatrix {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        points_to_costs(&ps).unwrap()
    }

    #[test]
    fn path_and_tour_costs_on_unique3() {
        let cm = gen_unique_gap(3).unwrap();
        let t = Tour::from_labels(&[1, 2, 3]).unwrap();
        assert_eq!(tour_cost(&cm, &t).unwrap(), Cost::Exact(16));
        let p = Path::from_labels(&[2, 1, 3]).unwrap();
        assert_eq!(path_cost(&cm, &p).unwrap(), Cost::Exact(5));
        let bad = Path::from_labels(&[1, 4]).unwrap();
        assert!(matches!(
            path_cost(&cm, &bad),
            Err(Error::VertexOutOfRange { vertex: 4, n: 3 })
        ));
    }

    #[test]
    fn zero_matrix_tours_cost_nothing() {
        let cm = CostMatrix::from_exact(5, vec![0; 25]).unwrap();
        for t in enumerate_cycles(5, false).unwrap() {
            assert_eq!(tour_cost(&cm, &t).unwrap(), Cost::Exact(0));
        }
    }

    #[test]
    fn tours_are_rotation_normalised() {
        let t = Tour::from_labels(&[3, 1, 2]).unwrap();
        assert_eq!(t.labels(), vec![1, 2, 3]);
        assert!(Tour::from_labels(&[1, 1, 2]).is_err());
        assert!(Tour::from_labels(&[1, 2]).is_err());
    }

    #[test]
    fn tour_text_round_trip() {
        let t = Tour::from_labels(&[1, 3, 2, 4]).unwrap();
        assert_eq!(parse_tour(&t.to_text()).unwrap(), t);
        assert!(matches!(
            parse_tour("1 2 5\n"),
            Err(ParseError::LabelOutOfRange { label: 5, .. })
        ));
        assert!(matches!(
            parse_tour("1 x 2\n"),
            Err(ParseError::NonNumeric { .. })
        ));
    }

    #[test]
    fn three_vertices_have_two_cycles() {
        let tours: Vec<Vec<usize>> = enumerate_cycles(3, false)
            .unwrap()
            .map(|t| t.labels())
            .collect();
        assert_eq!(tours, vec![vec![1, 2, 3], vec![1, 3, 2]]);
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        for n in 3..=8 {
            let tours: Vec<Tour> = enumerate_cycles(n, false).unwrap().collect();
            assert_eq!(tours.len() as u64, factorial(n - 1));
            assert!(tours.windows(2).all(|w| w[0] < w[1]));
            let set: HashSet<&Tour> = tours.iter().collect();
            assert_eq!(set.len(), tours.len());
        }
    }

    #[test]
    fn partitions_concatenate_to_full_stream() {
        let n = 6;
        let full: Vec<Tour> = enumerate_cycles(n, false).unwrap().collect();
        let parts: Vec<Tour> = (1..n)
            .flat_map(|s| enumerate_cycles_from(n, s, false).unwrap())
            .collect();
        assert_eq!(full, parts);
    }

    #[test]
    fn guard_rejects_large_n() {
        assert!(matches!(
            enumerate_cycles(13, false),
            Err(Error::GuardExceeded { n: 13, limit: 12 })
        ));
        assert!(enumerate_cycles(13, true).is_ok());
        assert!(enumerate_cycles(2, true).is_err());
    }

    #[test]
    fn unique3_solution() {
        let sol = solve_exact(&gen_unique_gap(3).unwrap(), None)
            .unwrap()
            .optimal()
            .unwrap();
        assert_eq!(sol.opt_cost, Cost::Exact(16));
        assert_eq!(sol.opt_tours, vec![Tour::from_labels(&[1, 2, 3]).unwrap()]);
        assert_eq!(sol.distinct_costs, Some(true));
        assert_eq!(sol.cycles_evaluated, 2);
        let other = tour_cost(
            &gen_unique_gap(3).unwrap(),
            &Tour::from_labels(&[1, 3, 2]).unwrap(),
        );
        assert_eq!(other.unwrap(), Cost::Exact(23));
    }

    #[test]
    fn unit_square_has_two_orientations() {
        let sol = solve_exact(&unit_square(), None)
            .unwrap()
            .optimal()
            .unwrap();
        assert_eq!(sol.opt_cost, Cost::Float(4.0));
        let labels: Vec<Vec<usize>> = sol.opt_tours.iter().map(Tour::labels).collect();
        assert_eq!(labels, vec![vec![1, 2, 3, 4], vec![1, 4, 3, 2]]);
        assert_eq!(sol.distinct_costs, Some(false));
    }

    #[test]
    fn empty_mask_is_infeasible() {
        let out = solve_exact(&unit_square(), Some(&EdgeMask::empty(4))).unwrap();
        assert!(out.is_infeasible());
        assert!(out.report().contains("infeasible"));
    }

    #[test]
    fn mask_restricts_search() {
        let cm = unit_square();
        let mut mask = EdgeMask::empty(4);
        for (a, b) in [(0, 2), (2, 1), (1, 3), (3, 0)] {
            mask.insert(a, b);
        }
        let sol = solve_exact(&cm, Some(&mask)).unwrap().optimal().unwrap();
        assert_eq!(sol.cycles_evaluated, 1);
        assert_eq!(sol.opt_tours[0].labels(), vec![1, 3, 2, 4]);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let cm = crate::instances::gen_random_gap(8, 3, 0.0, 10.0).unwrap();
        let seq = solve_exact_with(
            &cm,
            None,
            SolveOptions {
                force: false,
                parallel: false,
            },
        )
        .unwrap();
        let par = solve_exact_with(&cm, None, SolveOptions::default()).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn report_layout() {
        let sol = solve_exact(&gen_unique_gap(3).unwrap(), None).unwrap();
        assert_eq!(
            sol.report(),
            "opt_cost: 16\nnum_opt_tours: 1\ndistinct_costs: true\ncycles_evaluated: 2\n1 2 3\n"
        );
    }

    #[test]
    fn descent_relabelings() {
        let m = relabel_to_descent(&Tour::from_labels(&[1, 2, 3]).unwrap());
        assert_eq!(m.as_slice(), &[2, 1, 0]);
        let m = relabel_to_descent(&Tour::from_labels(&[1, 3, 2, 4]).unwrap());
        // 1->4, 3->3, 2->2, 4->1
        assert_eq!(m.as_slice(), &[3, 1, 2, 0]);
        let t = Tour::from_labels(&[1, 3, 2, 4]).unwrap();
        assert_eq!(m.apply_to_tour(&t).unwrap(), descent_cycle(4));
        assert_eq!(descent_cycle(4).labels(), vec![1, 4, 3, 2]);
    }

    #[test]
    fn identity_relabeling_keeps_matrix() {
        let cm = gen_unique_gap(5).unwrap();
        assert_eq!(
            apply_relabeling(&cm, &VertexRelabeling::identity(5)).unwrap(),
            cm
        );
    }

    #[test]
    fn relabeled_optimum_is_descent() {
        let cm = gen_unique_gap(5).unwrap();
        let sol = solve_exact(&cm, None).unwrap().optimal().unwrap();
        let m = relabel_to_descent(&sol.opt_tours[0]);
        let sol2 = solve_exact(&apply_relabeling(&cm, &m).unwrap(), None)
            .unwrap()
            .optimal()
            .unwrap();
        assert_eq!(sol2.opt_cost, sol.opt_cost);
        assert_eq!(sol2.opt_tours, vec![descent_cycle(5)]);
    }

    #[test]
    fn relabeling_rejects_non_bijection() {
        assert!(VertexRelabeling::new(vec![0, 0, 1]).is_err());
        assert!(VertexRelabeling::new(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn coincidence_of_equal_tours_is_n() {
        let t = Tour::from_labels(&[1, 4, 2, 5, 3]).unwrap();
        assert_eq!(coincident_edge_count(&t, &t).unwrap(), 5);
        assert_eq!(coincident_edge_count(&t, &t.reversed()).unwrap(), 0);
    }

    #[test]
    fn monotonicity_counterexample_on_unique3() {
        let r = monotonicity_check(&gen_unique_gap(3).unwrap(), 0, 0);
        assert!(r.exhaustive);
        let ce = r.first_violation.unwrap();
        assert_eq!(ce.short.labels(), vec![2, 3]);
        assert_eq!(ce.long.labels(), vec![2, 1, 3]);
        assert_eq!(ce.short_cost, Cost::Exact(6));
        assert_eq!(ce.long_cost, Cost::Exact(5));
    }

    #[test]
    fn monotone_on_square() {
        let r = monotonicity_check(&unit_square(), 0, 0);
        assert!(r.is_monotone());
        // 4*3*2*1 paths of length 3 with 1 deletion, 4! of length 4 with 3.
        assert_eq!(r.pairs_checked, 24 + 24 * 3);
    }

    #[test]
    fn sampled_monotonicity_is_seeded() {
        let cm = crate::instances::gen_random_gap(9, 4, 0.0, 1.0).unwrap();
        let a = monotonicity_check(&cm, 500, 11);
        assert!(!a.exhaustive);
        assert_eq!(a.pairs_checked, 500);
        assert_eq!(a, monotonicity_check(&cm, 500, 11));
    }
}
