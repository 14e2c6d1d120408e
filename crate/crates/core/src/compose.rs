//! Block compositions: a Euclidean (or arbitrary) block and a GAP block placed
//! on the diagonal of a larger matrix, joined by random cross edges.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::ops::Range;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{check_guard, solve_exact_with, Solution, SolveOptions, Tour};
use crate::instances::{points_to_costs, CostMatrix, PointSet};
use crate::reduction::{triangle_audit, DEFAULT_AUDIT_TOL};
use crate::seeded_rng;

/// The first block of a composition.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockSource {
    E2d(PointSet),
    Gap(CostMatrix),
}

impl BlockSource {
    pub fn n(&self) -> usize {
        match self {
            BlockSource::E2d(ps) => ps.n(),
            BlockSource::Gap(cm) => cm.n(),
        }
    }

    pub fn cost_matrix(&self) -> Result<CostMatrix> {
        match self {
            BlockSource::E2d(ps) => points_to_costs(ps),
            BlockSource::Gap(cm) => Ok(cm.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    pub cm: CostMatrix,
    pub block_a: Range<usize>,
    pub block_b: Range<usize>,
    pub fill_seed: u64,
    pub fill_range: (f64, f64),
}

/// Largest within-block edge cost of either block.
pub fn max_block_cost(a: &BlockSource, b: &CostMatrix) -> Result<f64> {
    Ok(a.cost_matrix()?
        .max_cost()
        .to_f64()
        .max(b.max_cost().to_f64()))
}

/// Places `a` on vertices `0..n` and `b` on `n..n+m`; every cross-block edge
/// is drawn i.i.d. uniform on `[lo, hi]` in row-major order from `seed`.
pub fn compose_instances(
    a: &BlockSource,
    b: &CostMatrix,
    seed: u64,
    lo: f64,
    hi: f64,
) -> Result<Composition> {
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "invalid fill range [{lo}, {hi}]"
        )));
    }
    let ca = a.cost_matrix()?.to_float()?;
    let cb = b.to_float()?;
    let (n, m) = (ca.n(), cb.n());
    let total = n + m;
    let mut rng = seeded_rng(seed);
    let mut entries = vec![0.0; total * total];
    for i in 0..total {
        for j in 0..total {
            if i == j {
                continue;
            }
            entries[i * total + j] = match (i < n, j < n) {
                (true, true) => ca.get_f64(i, j),
                (false, false) => cb.get_f64(i - n, j - n),
                _ => rng.random_range(lo..=hi),
            };
        }
    }
    Ok(Composition {
        cm: CostMatrix::from_float(total, entries)?,
        block_a: 0..n,
        block_b: n..total,
        fill_seed: seed,
        fill_range: (lo, hi),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport {
    pub seed: u64,
    pub composed_opt: Solution,
    /// Some optimal cycle of block A, minus one of its edges, runs inside an
    /// optimal cycle of the composition.
    pub sub_preserved: bool,
    pub triangle_violations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationSummary {
    pub block_opt: Solution,
    pub reports: Vec<PreservationReport>,
    pub first_non_preserved: Option<u64>,
    pub first_violating: Option<u64>,
    pub preserved_fraction: f64,
}

impl PreservationSummary {
    pub fn report(&self) -> String {
        let mut out = String::new();
        let opt = |s: Option<u64>| s.map_or("none".to_string(), |v| v.to_string());
        writeln!(out, "seeds: {}", self.reports.len()).unwrap();
        writeln!(out, "block_a_opt_cost: {}", self.block_opt.opt_cost).unwrap();
        writeln!(out, "preserved_fraction: {:?}", self.preserved_fraction).unwrap();
        writeln!(
            out,
            "first_non_preserved_seed: {}",
            opt(self.first_non_preserved)
        )
        .unwrap();
        writeln!(
            out,
            "first_triangle_violating_seed: {}",
            opt(self.first_violating)
        )
        .unwrap();
        out
    }

    /// `seed,composed_opt_cost,sub_preserved,triangle_violations`
    pub fn csv(&self) -> String {
        let mut out = String::from("seed,composed_opt_cost,sub_preserved,triangle_violations\n");
        for r in &self.reports {
            writeln!(
                out,
                "{},{},{},{}",
                r.seed, r.composed_opt.opt_cost, r.sub_preserved, r.triangle_violations
            )
            .unwrap();
        }
        out
    }
}

/// Whether `block` minus at most one edge is contained in `cycle`.
fn keeps_sub_path(block: &Tour, cycle: &Tour) -> bool {
    let edges: HashSet<(usize, usize)> = cycle.edges().collect();
    let shared = block.edges().filter(|e| edges.contains(e)).count();
    shared + 1 >= block.n()
}

/// Solves the composition for every seed and checks whether block A's own
/// optimal cycle survives as a sub-path of the composed optimum.
pub fn preservation_search(
    a: &BlockSource,
    b: &CostMatrix,
    seeds: &[u64],
    lo: f64,
    hi: f64,
    opts: SolveOptions,
) -> Result<PreservationSummary> {
    check_guard(a.n() + b.n(), opts.force)?;
    let block_opt = solve_exact_with(&a.cost_matrix()?, None, opts)?
        .optimal()
        .expect("complete graph always has a cycle");
    let reports = seeds
        .par_iter()
        .map(|&seed| {
            let comp = compose_instances(a, b, seed, lo, hi)?;
            let sol = solve_exact_with(&comp.cm, None, opts)?
                .optimal()
                .expect("complete graph always has a cycle");
            let sub_preserved = block_opt
                .opt_tours
                .iter()
                .any(|bt| sol.opt_tours.iter().any(|ct| keeps_sub_path(bt, ct)));
            Ok(PreservationReport {
                seed,
                triangle_violations: triangle_audit(&comp.cm, DEFAULT_AUDIT_TOL).violations,
                composed_opt: sol,
                sub_preserved,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let preserved = reports.iter().filter(|r| r.sub_preserved).count();
    Ok(PreservationSummary {
        block_opt,
        first_non_preserved: reports.iter().find(|r| !r.sub_preserved).map(|r| r.seed),
        first_violating: reports
            .iter()
            .find(|r| r.triangle_violations > 0)
            .map(|r| r.seed),
        preserved_fraction: if reports.is_empty() {
            0.0
        } else {
            preserved as f64 / reports.len() as f64
        },
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_random_gap, gen_random_points, BoundingBox};

    fn blocks() -> (BlockSource, CostMatrix) {
        let ps = gen_random_points(4, 1, BoundingBox::default()).unwrap();
        (
            BlockSource::E2d(ps),
            gen_random_gap(4, 2, 0.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn embedding_is_exact() {
        let (a, b) = blocks();
        let comp = compose_instances(&a, &b, 7, 0.0, 2.0).unwrap();
        assert_eq!(comp.cm.n(), 8);
        assert_eq!(comp.cm.edges().count(), 56);
        assert_eq!(
            comp.cm.submatrix(comp.block_a.clone()).unwrap(),
            a.cost_matrix().unwrap()
        );
        assert_eq!(comp.cm.submatrix(comp.block_b.clone()).unwrap(), b);
        let cross = comp
            .cm
            .edges()
            .filter(|&(i, j, _)| (i < 4) != (j < 4))
            .inspect(|(_, _, c)| assert!((0.0..=2.0).contains(&c.to_f64())))
            .count();
        assert_eq!(cross, 32);
        assert_eq!(comp, compose_instances(&a, &b, 7, 0.0, 2.0).unwrap());
        assert!(compose_instances(&a, &b, 7, 2.0, 1.0).is_err());
    }

    #[test]
    fn sub_path_predicate() {
        let block = Tour::from_labels(&[1, 2, 3, 4]).unwrap();
        // 1 2 3 4 kept as a run inside a longer cycle; the closing edge 4->1 is lost.
        let cycle = Tour::new(vec![0, 1, 2, 3, 5, 4, 6]).unwrap();
        assert!(keeps_sub_path(&block, &cycle));
        let broken = Tour::new(vec![0, 1, 4, 2, 3, 5, 6]).unwrap();
        assert!(!keeps_sub_path(&block, &broken));
    }

    #[test]
    fn search_is_deterministic() {
        let (a, b) = blocks();
        let seeds: Vec<u64> = (0..6).collect();
        let s1 = preservation_search(&a, &b, &seeds, 0.0, 1.0, SolveOptions::default()).unwrap();
        let s2 = preservation_search(&a, &b, &seeds, 0.0, 1.0, SolveOptions::default()).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.csv().lines().count(), 7);
    }

    #[test]
    fn guard_applies_to_total_size() {
        let ps = gen_random_points(7, 1, BoundingBox::default()).unwrap();
        let b = gen_random_gap(6, 2, 0.0, 1.0).unwrap();
        let err = preservation_search(
            &BlockSource::E2d(ps),
            &b,
            &[1],
            0.0,
            1.0,
            SolveOptions::default(),
        );
        assert!(matches!(err, Err(Error::GuardExceeded { n: 13, .. })));
    }

    #[test]
    fn default_range_breaks_triangle_inequality() {
        let (a, b) = blocks();
        let hi = max_block_cost(&a, &b).unwrap();
        let violating = (0..100)
            .filter(|&seed| {
                let comp = compose_instances(&a, &b, seed, 0.0, hi).unwrap();
                triangle_audit(&comp.cm, DEFAULT_AUDIT_TOL).violations > 0
            })
            .count();
        assert!(violating >= 95, "{violating}");
    }

    #[test]
    fn expensive_cross_edges_keep_blocks_intact() {
        let (a, b) = blocks();
        let seeds: Vec<u64> = (0..40).collect();
        let s =
            preservation_search(&a, &b, &seeds, 100.0, 100.001, SolveOptions::default()).unwrap();
        eprintln!("tube fraction {}", s.preserved_fraction);
        assert!(s.preserved_fraction >= 0.9);
    }
}
