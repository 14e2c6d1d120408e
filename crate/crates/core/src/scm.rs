//! Sorted cost matrix: each vertex's outgoing edges ranked by cost, the rank
//! "frontier" an optimal tour traces through it, and pixmap/CSV renderings.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::exact::{check_guard, enumerate_cycles, tour_cost, Solution, Tour};
use crate::instances::{CostMatrix, EdgeMask};
use crate::render::{Pixmap, BACKGROUND, GREEN, GREY_MAX, RED};

/// Default relative slack for "near-optimal" tours.
pub const DEFAULT_NEAR_EPS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScmEntry {
    pub neighbor: usize,
    pub cost: Cost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SortedCostMatrix {
    n: usize,
    rows: Vec<Vec<ScmEntry>>,
}

impl SortedCostMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<ScmEntry>] {
        &self.rows
    }

    pub fn row(&self, v: usize) -> &[ScmEntry] {
        &self.rows[v]
    }

    /// Active out-degree of `v`.
    pub fn mask_size(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    /// 1-based rank of edge `v -> w` in `v`'s row.
    pub fn rank_of(&self, v: usize, w: usize) -> Option<usize> {
        self.rows[v]
            .iter()
            .position(|e| e.neighbor == w)
            .map(|r| r + 1)
    }
}

/// Sorts each vertex's allowed outgoing edges by ascending cost, ties by
/// neighbour label.
pub fn build_scm(cm: &CostMatrix, mask: Option<&EdgeMask>) -> Result<SortedCostMatrix> {
    let n = cm.n();
    if let Some(m) = mask {
        if m.n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: m.n(),
            });
        }
    }
    let mut rows = Vec::with_capacity(n);
    for v in 0..n {
        let mut row: Vec<ScmEntry> = (0..n)
            .filter(|&w| w != v && mask.is_none_or(|m| m.contains(v, w)))
            .map(|w| ScmEntry {
                neighbor: w,
                cost: cm.get(v, w).expect("off-diagonal"),
            })
            .collect();
        if row.is_empty() {
            return Err(Error::IsolatedVertex(v + 1));
        }
        row.sort_by(|a, b| a.cost.total_cmp(&b.cost).then(a.neighbor.cmp(&b.neighbor)));
        rows.push(row);
    }
    Ok(SortedCostMatrix { n, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frontier {
    /// `ranks[v]`: 1-based rank of the tour's outgoing edge at `v`.
    pub ranks: Vec<usize>,
    /// Largest rank divided by `n - 1`.
    pub elongation: f64,
    pub mean_rank: f64,
}

pub fn compute_frontier(scm: &SortedCostMatrix, t: &Tour) -> Result<Frontier> {
    let n = scm.n();
    if t.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: t.n(),
        });
    }
    let succ = t.successors();
    let ranks = (0..n)
        .map(|v| {
            scm.rank_of(v, succ[v]).ok_or(Error::EdgeAbsent {
                from: v + 1,
                to: succ[v] + 1,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max = *ranks.iter().max().expect("n >= 3");
    Ok(Frontier {
        elongation: max as f64 / (n - 1) as f64,
        mean_rank: ranks.iter().sum::<usize>() as f64 / n as f64,
        ranks,
    })
}

/// Every non-optimal tour with cost at most `(1 + epsilon) * opt_cost`,
/// sorted by cost then lexicographically.
pub fn near_optimal_set(
    cm: &CostMatrix,
    sol: &Solution,
    epsilon: f64,
    force: bool,
) -> Result<Vec<(Tour, Cost)>> {
    check_guard(cm.n(), force)?;
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be >= 0, got {epsilon}"
        )));
    }
    let optimal: HashSet<&Tour> = sol.opt_tours.iter().collect();
    let opt = sol.opt_cost.to_f64();
    let bound = opt * (1.0 + epsilon);
    let mut near = Vec::new();
    for t in enumerate_cycles(cm.n(), force)? {
        if optimal.contains(&t) {
            continue;
        }
        let c = tour_cost(cm, &t)?;
        let within = match (c, sol.opt_cost) {
            (Cost::Exact(c), Cost::Exact(o)) => (c - o) as f64 <= epsilon * o as f64,
            (c, _) => c.to_f64() <= bound,
        };
        if within {
            near.push((t, c));
        }
    }
    near.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(near)
}

/// Cell role in the rendered matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellTag {
    Plain,
    Solution,
    Near,
}

impl CellTag {
    fn as_str(self) -> &'static str {
        match self {
            CellTag::Plain => "plain",
            CellTag::Solution => "solution",
            CellTag::Near => "near",
        }
    }
}

fn tags(scm: &SortedCostMatrix, fr: Option<&Frontier>, near: &[Tour]) -> Vec<Vec<CellTag>> {
    let mut tags: Vec<Vec<CellTag>> = scm
        .rows
        .iter()
        .map(|r| vec![CellTag::Plain; r.len()])
        .collect();
    for t in near {
        for (v, w) in t.edges() {
            if let Some(r) = scm.rank_of(v, w) {
                tags[v][r - 1] = CellTag::Near;
            }
        }
    }
    if let Some(fr) = fr {
        for (v, &r) in fr.ranks.iter().enumerate() {
            tags[v][r - 1] = CellTag::Solution;
        }
    }
    tags
}

/// One pixel per (vertex, rank): grey scaled linearly between the global
/// minimum and maximum cost, green on the frontier, red on near-optimal
/// tour edges. Rows are padded to `n - 1` columns with background.
pub fn render_scm(scm: &SortedCostMatrix, fr: Option<&Frontier>, near: &[Tour]) -> Pixmap {
    let n = scm.n();
    let mut pm = Pixmap::new(n - 1, n, BACKGROUND);
    let all = scm.rows.iter().flatten().map(|e| e.cost.to_f64());
    let (lo, hi) = all.fold((f64::MAX, f64::MIN), |(lo, hi), c| (lo.min(c), hi.max(c)));
    let tags = tags(scm, fr, near);
    for (v, row) in scm.rows.iter().enumerate() {
        for (r, e) in row.iter().enumerate() {
            let color = match tags[v][r] {
                CellTag::Solution => GREEN,
                CellTag::Near => RED,
                CellTag::Plain => {
                    let t = if hi > lo {
                        (e.cost.to_f64() - lo) / (hi - lo)
                    } else {
                        0.0
                    };
                    let g = (t * GREY_MAX as f64).round() as u8;
                    [g, g, g]
                }
            };
            pm.set(v, r, color);
        }
    }
    pm
}

/// CSV twin of [`render_scm`]: `vertex,rank,neighbor,cost,tag`, 1-based.
pub fn scm_csv(scm: &SortedCostMatrix, fr: Option<&Frontier>, near: &[Tour]) -> String {
    let tags = tags(scm, fr, near);
    let mut out = String::from("vertex,rank,neighbor,cost,tag\n");
    for (v, row) in scm.rows.iter().enumerate() {
        for (r, e) in row.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                v + 1,
                r + 1,
                e.neighbor + 1,
                e.cost,
                tags[v][r].as_str()
            )
            .unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::solve_exact;
    use crate::instances::{gen_unique_gap, points_to_costs, PointSet};
    use crate::reduction::{delaunay_triangulate, restrict_to_edges};

    fn square() -> PointSet {
        PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap()
    }

    fn row_pairs(scm: &SortedCostMatrix, v: usize) -> Vec<(usize, f64)> {
        scm.row(v)
            .iter()
            .map(|e| (e.neighbor + 1, e.cost.to_f64()))
            .collect()
    }

    #[test]
    fn unique3_rows() {
        let scm = build_scm(&gen_unique_gap(3).unwrap(), None).unwrap();
        assert_eq!(row_pairs(&scm, 0), vec![(2, 1.0), (3, 2.0)]);
        assert_eq!(row_pairs(&scm, 1), vec![(1, 3.0), (3, 6.0)]);
        assert_eq!(row_pairs(&scm, 2), vec![(1, 9.0), (2, 18.0)]);
    }

    #[test]
    fn unique3_frontier() {
        let scm = build_scm(&gen_unique_gap(3).unwrap(), None).unwrap();
        let fr = compute_frontier(&scm, &Tour::from_labels(&[1, 2, 3]).unwrap()).unwrap();
        assert_eq!(fr.ranks, vec![1, 2, 1]);
        assert_eq!(fr.elongation, 1.0);
        let pm = render_scm(&scm, Some(&fr), &[]);
        assert_eq!(pm.count(GREEN), 3);
    }

    #[test]
    fn square_rows_and_frontier() {
        let cm = points_to_costs(&square()).unwrap();
        let scm = build_scm(&cm, None).unwrap();
        for v in 0..4 {
            let row = scm.row(v);
            assert_eq!(row[0].cost, Cost::Float(1.0));
            assert_eq!(row[1].cost, Cost::Float(1.0));
            assert_eq!(row[2].cost, Cost::Float(2f64.sqrt()));
        }
        let t = Tour::from_labels(&[1, 2, 3, 4]).unwrap();
        let fr = compute_frontier(&scm, &t).unwrap();
        assert!(fr.ranks.iter().all(|&r| r <= 2));
        assert_eq!(fr.elongation, 2.0 / 3.0);

        let tr = delaunay_triangulate(&square()).unwrap();
        let mask = restrict_to_edges(&cm, &tr).unwrap();
        let reduced = build_scm(&cm, Some(&mask)).unwrap();
        assert!((0..4).all(|v| reduced.mask_size(v) <= 3));
        let fr2 = compute_frontier(&reduced, &t).unwrap();
        assert!(fr2.ranks.iter().max() <= fr.ranks.iter().max());
    }

    #[test]
    fn absent_edge_and_isolated_vertex() {
        let cm = points_to_costs(&square()).unwrap();
        let mut mask = EdgeMask::empty(4);
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            mask.insert(a, b);
        }
        let scm = build_scm(&cm, Some(&mask)).unwrap();
        let err = compute_frontier(&scm, &Tour::from_labels(&[1, 4, 3, 2]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::EdgeAbsent { from: 1, to: 4 }));
        mask = EdgeMask::empty(4);
        mask.insert(0, 1);
        assert!(matches!(
            build_scm(&cm, Some(&mask)),
            Err(Error::IsolatedVertex(2))
        ));
    }

    #[test]
    fn near_optimal_unique3() {
        let cm = gen_unique_gap(3).unwrap();
        let sol = solve_exact(&cm, None).unwrap().optimal().unwrap();
        // the only other cycle costs 23: above 1.4 * 16 = 22.4, below 1.5 * 16 = 24
        assert!(near_optimal_set(&cm, &sol, 0.4, false).unwrap().is_empty());
        assert!(near_optimal_set(&cm, &sol, 0.0, false).unwrap().is_empty());
        let near = near_optimal_set(&cm, &sol, 0.5, false).unwrap();
        assert_eq!(near.len(), 1);
        assert_eq!(near[0].1, Cost::Exact(23));
    }

    #[test]
    fn near_optimal_square_threshold() {
        let cm = points_to_costs(&square()).unwrap();
        let sol = solve_exact(&cm, None).unwrap().optimal().unwrap();
        assert!(near_optimal_set(&cm, &sol, 0.2, false).unwrap().is_empty());
        let near = near_optimal_set(&cm, &sol, 0.21, false).unwrap();
        assert_eq!(near.len(), 4);
        assert!(near
            .iter()
            .all(|(_, c)| (c.to_f64() - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12));
    }

    #[test]
    fn csv_tags_cells() {
        let cm = gen_unique_gap(3).unwrap();
        let scm = build_scm(&cm, None).unwrap();
        let t = Tour::from_labels(&[1, 2, 3]).unwrap();
        let fr = compute_frontier(&scm, &t).unwrap();
        let near = vec![Tour::from_labels(&[1, 3, 2]).unwrap()];
        let csv = scm_csv(&scm, Some(&fr), &near);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "vertex,rank,neighbor,cost,tag");
        assert_eq!(lines[1], "1,1,2,1,solution");
        assert_eq!(lines[2], "1,2,3,2,near");
        assert_eq!(lines.len(), 7);
        let pm = render_scm(&scm, Some(&fr), &near);
        assert_eq!(pm.count(GREEN), 3);
        assert_eq!(pm.count(RED), 3);
    }
}
