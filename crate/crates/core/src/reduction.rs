//! Triangle reduction: restrict a Euclidean instance to the edges of a planar
//! triangulation and check whether the optimal tour survives.
//!
//! Two triangulations are offered. [`delaunay_triangulate`] needs nothing but
//! the points; whether it contains the optimum is an empirical question.
//! [`triangulate_around_tour`] is built around a given simple tour polygon
//! and contains it by construction.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::cost::Cost;
use crate::error::{Error, ParseError, Result};
use crate::exact::{solve_exact_with, Solution, SolveOptions, SolveOutcome, Tour};
use crate::geometry::{
    all_collinear, convex_hull, ear_clip, in_circle, is_simple_polygon, orient, signed_area2,
};
use crate::instances::{
    content_lines, gen_random_points, points_to_costs, BoundingBox, CostMatrix, EdgeMask, Point,
    PointSet,
};
use crate::seeded_rng;

/// Jitter magnitude relative to the larger bounding-box side.
pub const JITTER_REL: f64 = 1e-12;
/// Seed of the first jitter attempt; later attempts add 1.
pub const JITTER_SEED: u64 = 0x6a17_7e12;
const JITTER_ATTEMPTS: u64 = 8;

/// Default relative slack for [`triangle_audit`].
pub const DEFAULT_AUDIT_TOL: f64 = 1e-9;
/// Witnesses kept in an [`AuditReport`].
pub const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    faces: Vec<[usize; 3]>,
    jitter: Option<u64>,
}

fn undirected(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Triangulation {
    fn from_faces(n: usize, faces: Vec<[usize; 3]>, jitter: Option<u64>) -> Self {
        let edges = faces
            .iter()
            .flat_map(|f| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .map(|(a, b)| undirected(a, b))
            .collect();
        Self {
            n,
            edges,
            faces,
            jitter,
        }
    }

    /// Edge set without faces, as read from a triangulation file.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: a.max(b) + 1,
                    n,
                });
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self loop at {}", a + 1)));
            }
            set.insert(undirected(a, b));
        }
        Ok(Self {
            n,
            edges: set,
            faces: Vec::new(),
            jitter: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Undirected edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&undirected(a, b))
    }

    /// Counter-clockwise triangles; empty when read from a file.
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Seed of the coordinate jitter used to break degeneracies, if any.
    pub fn jitter(&self) -> Option<u64> {
        self.jitter
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// `tri <n> <m>` followed by one 1-based `i j` pair per line, `i < j`.
    pub fn to_text(&self) -> String {
        let mut out = format!("tri {} {}\n", self.n, self.edges.len());
        for (a, b) in &self.edges {
            writeln!(out, "{} {}", a + 1, b + 1).unwrap();
        }
        out
    }
}

pub fn parse_triangulation(text: &str) -> Result<Triangulation, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(ParseError::Truncated { line: 1 })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad = || ParseError::MalformedHeader {
        line: hline,
        found: header.to_string(),
    };
    if fields.len() != 3 || fields[0] != "tri" {
        return Err(bad());
    }
    let n: usize = fields[1].parse().map_err(|_| bad())?;
    let m: usize = fields[2].parse().map_err(|_| bad())?;
    if n < 3 {
        return Err(ParseError::TooFewVertices { line: hline, n });
    }
    let mut edges = Vec::with_capacity(m);
    let mut last = hline;
    for _ in 0..m {
        let (line, body) = lines
            .next()
            .ok_or(ParseError::Truncated { line: last + 1 })?;
        last = line;
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(ParseError::WrongFieldCount {
                line,
                expected: 2,
                found: toks.len(),
            });
        }
        let mut ends = [0usize; 2];
        for (e, t) in ends.iter_mut().zip(&toks) {
            *e = t.parse().map_err(|_| ParseError::NonNumeric {
                line,
                token: t.to_string(),
            })?;
            if *e == 0 || *e > n {
                return Err(ParseError::LabelOutOfRange { line, label: *e, n });
            }
        }
        if ends[0] >= ends[1] {
            return Err(ParseError::Invalid {
                line,
                msg: "edge endpoints must satisfy i < j".into(),
            });
        }
        edges.push((ends[0] - 1, ends[1] - 1));
    }
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::TrailingContent { line });
    }
    Triangulation::from_edges(n, edges).map_err(|e| ParseError::Invalid {
        line: hline,
        msg: e.to_string(),
    })
}

fn jittered(points: &[Point], seed: u64) -> Vec<Point> {
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in points {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let scale = JITTER_REL * (max_x - min_x).max(max_y - min_y);
    let mut rng = seeded_rng(seed);
    points
        .iter()
        .map(|p| {
            Point::new(
                p.x + scale * rng.random_range(-1.0..=1.0),
                p.y + scale * rng.random_range(-1.0..=1.0),
            )
        })
        .collect()
}

fn third(face: [usize; 3], a: usize, b: usize) -> usize {
    face.into_iter()
        .find(|&v| v != a && v != b)
        .expect("triangle")
}

/// Sweep triangulation followed by Lawson flips. `None` when a collinear or
/// cocircular configuration makes the result ambiguous.
fn build_delaunay(p: &[Point]) -> Option<Vec<[usize; 3]>> {
    let n = p.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| p[i].x.total_cmp(&p[j].x).then(p[i].y.total_cmp(&p[j].y)));
    let (a, b, c) = (order[0], order[1], order[2]);
    let mut hull = match orient(p[a], p[b], p[c]) {
        Ordering::Greater => vec![a, b, c],
        Ordering::Less => vec![a, c, b],
        Ordering::Equal => return None,
    };
    let mut faces = vec![[hull[0], hull[1], hull[2]]];
    for &v in &order[3..] {
        let h = hull.len();
        let mut visible = vec![false; h];
        for (k, vis) in visible.iter_mut().enumerate() {
            match orient(p[hull[k]], p[hull[(k + 1) % h]], p[v]) {
                Ordering::Less => *vis = true,
                Ordering::Equal => return None,
                Ordering::Greater => {}
            }
        }
        let s = (0..h).find(|&k| visible[k] && !visible[(k + h - 1) % h])?;
        let len = (0..h).take_while(|&d| visible[(s + d) % h]).count();
        for d in 0..len {
            faces.push([hull[(s + d + 1) % h], hull[(s + d) % h], v]);
        }
        let mut next = Vec::with_capacity(h - len + 2);
        for d in 0..=(h - len) {
            next.push(hull[(s + len + d) % h]);
        }
        next.push(v);
        hull = next;
    }

    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, f) in faces.iter().enumerate() {
        for k in 0..3 {
            owner.insert((f[k], f[(k + 1) % 3]), t);
        }
    }
    let mut stack: Vec<(usize, usize)> = owner.keys().copied().collect();
    stack.sort_unstable();
    while let Some((a, b)) = stack.pop() {
        let (Some(&t1), Some(&t2)) = (owner.get(&(a, b)), owner.get(&(b, a))) else {
            continue;
        };
        let c = third(faces[t1], a, b);
        let d = third(faces[t2], b, a);
        if in_circle(p[a], p[b], p[c], p[d]) == Ordering::Greater {
            owner.remove(&(a, b));
            owner.remove(&(b, a));
            faces[t1] = [a, d, c];
            faces[t2] = [d, b, c];
            for (t, f) in [(t1, faces[t1]), (t2, faces[t2])] {
                for k in 0..3 {
                    owner.insert((f[k], f[(k + 1) % 3]), t);
                }
            }
            stack.extend([(a, d), (d, b), (b, c), (c, a)]);
        }
    }
    for (&(a, b), &t1) in &owner {
        if a < b {
            if let Some(&t2) = owner.get(&(b, a)) {
                let c = third(faces[t1], a, b);
                let d = third(faces[t2], b, a);
                if in_circle(p[a], p[b], p[c], p[d]) == Ordering::Equal {
                    return None;
                }
            }
        }
    }
    Some(faces)
}

/// Delaunay triangulation (empty circumcircle criterion).
///
/// Collinear or cocircular inputs are resolved by re-running on coordinates
/// perturbed by at most [`JITTER_REL`] times the bounding-box size, drawn
/// from [`JITTER_SEED`]; the seed used is recorded in the result.
pub fn delaunay_triangulate(ps: &PointSet) -> Result<Triangulation> {
    let p = ps.points();
    if all_collinear(p) {
        return Err(Error::Collinear);
    }
    if let Some(faces) = build_delaunay(p) {
        return Ok(Triangulation::from_faces(ps.n(), faces, None));
    }
    for attempt in 0..JITTER_ATTEMPTS {
        let seed = JITTER_SEED + attempt;
        if let Some(faces) = build_delaunay(&jittered(p, seed)) {
            return Ok(Triangulation::from_faces(ps.n(), faces, Some(seed)));
        }
    }
    Err(Error::Degenerate(
        "jitter did not reach general position".into(),
    ))
}

/// Triangulates the convex hull of `ps` so that every edge of `t` is an edge
/// of the result: the tour polygon's interior is ear-clipped, and so is each
/// pocket between the polygon and a hull edge it does not use.
pub fn triangulate_around_tour(ps: &PointSet, t: &Tour) -> Result<Triangulation> {
    let n = ps.n();
    if t.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: t.n(),
        });
    }
    let p = ps.points();
    if all_collinear(p) {
        return Err(Error::Collinear);
    }
    let mut poly = t.seq().to_vec();
    if !is_simple_polygon(p, &poly) {
        return Err(Error::TourNotSimple);
    }
    if signed_area2(p, &poly) < 0.0 {
        poly.reverse();
    }
    let mut pos = vec![0; n];
    for (k, &v) in poly.iter().enumerate() {
        pos[v] = k;
    }
    let mut faces = ear_clip(p, &poly)?;
    let hull = convex_hull(p);
    let h = hull.len();
    let mut covered = 0;
    for i in 0..h {
        let (a, b) = (hull[i], hull[(i + 1) % h]);
        let steps = (pos[b] + n - pos[a]) % n;
        covered += steps;
        if steps > 1 {
            let pocket: Vec<usize> = (0..=steps).map(|d| poly[(pos[a] + d) % n]).collect();
            faces.extend(ear_clip(p, &pocket)?);
        }
    }
    if covered != n {
        return Err(Error::Degenerate(
            "tour polygon does not visit hull vertices in hull order".into(),
        ));
    }
    let tr = Triangulation::from_faces(n, faces, None);
    if !containment_check(t, &tr) {
        return Err(Error::Degenerate(
            "constrained triangulation lost a tour edge".into(),
        ));
    }
    Ok(tr)
}

/// Both orientations of every triangulation edge.
pub fn restrict_to_edges(cm: &CostMatrix, tr: &Triangulation) -> Result<EdgeMask> {
    if cm.n() != tr.n() {
        return Err(Error::SizeMismatch {
            expected: cm.n(),
            found: tr.n(),
        });
    }
    let mut mask = EdgeMask::empty(cm.n());
    for (a, b) in tr.edges() {
        mask.insert(a, b);
        mask.insert(b, a);
    }
    Ok(mask)
}

/// Whether every (undirected) edge of `t` is a triangulation edge.
pub fn containment_check(t: &Tour, tr: &Triangulation) -> bool {
    t.n() == tr.n() && t.edges().all(|(a, b)| tr.contains_edge(a, b))
}

/// Ordered triple `(i, k, j)`: edge `i -> j` against the detour through `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple {
    pub i: usize,
    pub k: usize,
    pub j: usize,
}

impl Triple {
    pub fn labels(&self) -> (usize, usize, usize) {
        (self.i + 1, self.k + 1, self.j + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub triples_checked: u64,
    pub violations: u64,
    /// Largest `cost[i][j] / (cost[i][k] + cost[k][j])` seen.
    pub worst_ratio: f64,
    /// First [`MAX_WITNESSES`] violations in `(i, k, j)` scan order.
    pub witnesses: Vec<Triple>,
}

impl AuditReport {
    pub fn report(&self) -> String {
        let mut out = String::new();
        writeln!(out, "triples_checked: {}", self.triples_checked).unwrap();
        writeln!(out, "violations: {}", self.violations).unwrap();
        writeln!(out, "worst_ratio: {:?}", self.worst_ratio).unwrap();
        for w in &self.witnesses {
            let (i, k, j) = w.labels();
            writeln!(out, "witness: {i} {k} {j}").unwrap();
        }
        out
    }
}

/// Exhaustive scan of ordered triples for `cost[i][j] > cost[i][k] + cost[k][j]`.
/// Integer matrices are compared exactly; float matrices allow `tolerance`
/// relative slack.
pub fn triangle_audit(cm: &CostMatrix, tolerance: f64) -> AuditReport {
    let n = cm.n();
    let rows: Vec<(u64, u64, f64, Vec<Triple>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut checked = 0;
            let mut violations = 0;
            let mut worst = 0.0f64;
            let mut wit = Vec::new();
            for k in 0..n {
                for j in 0..n {
                    if i == k || k == j || i == j {
                        continue;
                    }
                    checked += 1;
                    let (direct, detour) = (
                        cm.get(i, j).unwrap(),
                        (cm.get(i, k).unwrap(), cm.get(k, j).unwrap()),
                    );
                    let (violates, ratio) = match (direct, detour) {
                        (Cost::Exact(d), (Cost::Exact(a), Cost::Exact(b))) => {
                            let s = a as i128 + b as i128;
                            (d as i128 > s, ratio(d as f64, s as f64))
                        }
                        (d, (a, b)) => {
                            let (d, s) = (d.to_f64(), a.to_f64() + b.to_f64());
                            (d > s * (1.0 + tolerance), ratio(d, s))
                        }
                    };
                    worst = worst.max(ratio);
                    if violates {
                        violations += 1;
                        if wit.len() < MAX_WITNESSES {
                            wit.push(Triple { i, k, j });
                        }
                    }
                }
            }
            (checked, violations, worst, wit)
        })
        .collect();
    let mut report = AuditReport {
        triples_checked: 0,
        violations: 0,
        worst_ratio: 0.0,
        witnesses: Vec::new(),
    };
    for (c, v, w, wit) in rows {
        report.triples_checked += c;
        report.violations += v;
        report.worst_ratio = report.worst_ratio.max(w);
        let room = MAX_WITNESSES - report.witnesses.len();
        report.witnesses.extend(wit.into_iter().take(room));
    }
    report
}

fn ratio(direct: f64, detour: f64) -> f64 {
    if detour > 0.0 {
        direct / detour
    } else if direct > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Delaunay,
    Constrained,
}

/// Outcome of reducing one Euclidean instance to a triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub method: Method,
    pub triangulation: Triangulation,
    /// The full (unrestricted) exact solution.
    pub full: Solution,
    /// Tour the constrained triangulation was built around.
    pub reference_tour: Tour,
    /// Whether some optimal tour lies inside the triangulation.
    pub contained: bool,
    pub masked_edges: usize,
    pub reduced: SolveOutcome,
}

impl ReductionReport {
    /// Reduced optimum equals the full optimum (exactly).
    pub fn preserves_optimum(&self) -> bool {
        self.reduced
            .as_optimal()
            .is_some_and(|s| s.opt_cost == self.full.opt_cost)
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        let method = match self.method {
            Method::Delaunay => "delaunay",
            Method::Constrained => "constrained",
        };
        writeln!(out, "method: {method}").unwrap();
        writeln!(
            out,
            "triangulation_edges: {}",
            self.triangulation.edge_count()
        )
        .unwrap();
        match self.triangulation.jitter() {
            Some(s) => writeln!(out, "jitter_seed: {s}").unwrap(),
            None => writeln!(out, "jitter_seed: none").unwrap(),
        }
        writeln!(out, "masked_directed_edges: {}", self.masked_edges).unwrap();
        writeln!(out, "full_opt_cost: {}", self.full.opt_cost).unwrap();
        writeln!(out, "full_cycles_evaluated: {}", self.full.cycles_evaluated).unwrap();
        writeln!(out, "reference_tour: {}", self.reference_tour.to_text()).unwrap();
        writeln!(out, "contained: {}", self.contained).unwrap();
        match &self.reduced {
            SolveOutcome::Optimal(s) => {
                writeln!(out, "reduced_opt_cost: {}", s.opt_cost).unwrap();
                writeln!(out, "reduced_cycles_evaluated: {}", s.cycles_evaluated).unwrap();
            }
            SolveOutcome::Infeasible => writeln!(out, "reduced_opt_cost: infeasible").unwrap(),
        }
        writeln!(out, "optimum_preserved: {}", self.preserves_optimum()).unwrap();
        out
    }
}

/// Solves `ps` exactly, triangulates it with `method` (around `tour`, or the
/// first optimal tour when `tour` is `None`) and re-solves on the
/// triangulation edges.
pub fn reduce_instance(
    ps: &PointSet,
    method: Method,
    tour: Option<&Tour>,
    opts: SolveOptions,
) -> Result<ReductionReport> {
    let cm = points_to_costs(ps)?;
    let full = solve_exact_with(&cm, None, opts)?
        .optimal()
        .expect("complete graph always has a cycle");
    let reference_tour = tour.cloned().unwrap_or_else(|| full.opt_tours[0].clone());
    let triangulation = match method {
        Method::Delaunay => delaunay_triangulate(ps)?,
        Method::Constrained => triangulate_around_tour(ps, &reference_tour)?,
    };
    let mask = restrict_to_edges(&cm, &triangulation)?;
    let reduced = solve_exact_with(&cm, Some(&mask), opts)?;
    let contained = full
        .opt_tours
        .iter()
        .any(|t| containment_check(t, &triangulation));
    Ok(ReductionReport {
        method,
        triangulation,
        full,
        reference_tour,
        contained,
        masked_edges: mask.len(),
        reduced,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentRecord {
    pub seed: u64,
    pub n: usize,
    pub contained: bool,
    pub opt_cost: Cost,
    pub delaunay_edges: usize,
    pub reduced_opt_cost: Option<Cost>,
}

/// Delaunay containment of the optimum over a seed batch of random
/// unit-square instances.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentStats {
    pub records: Vec<ContainmentRecord>,
    pub contained: usize,
    pub fraction: f64,
}

impl ContainmentStats {
    pub fn report(&self) -> String {
        let mut out = String::new();
        writeln!(out, "runs: {}", self.records.len()).unwrap();
        writeln!(out, "contained: {}", self.contained).unwrap();
        writeln!(out, "contained_fraction: {:?}", self.fraction).unwrap();
        out
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("seed,n,contained,opt_cost,delaunay_edges,reduced_opt_cost\n");
        for r in &self.records {
            let reduced = r
                .reduced_opt_cost
                .map_or("infeasible".to_string(), |c| c.to_string());
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.seed, r.n, r.contained, r.opt_cost, r.delaunay_edges, reduced
            )
            .unwrap();
        }
        out
    }
}

pub fn delaunay_containment_batch(
    n: usize,
    seeds: &[u64],
    opts: SolveOptions,
) -> Result<ContainmentStats> {
    let records = seeds
        .par_iter()
        .map(|&seed| {
            let ps = gen_random_points(n, seed, BoundingBox::default())?;
            let r = reduce_instance(&ps, Method::Delaunay, None, opts)?;
            Ok(ContainmentRecord {
                seed,
                n,
                contained: r.contained,
                opt_cost: r.full.opt_cost,
                delaunay_edges: r.triangulation.edge_count(),
                reduced_opt_cost: r.reduced.as_optimal().map(|s| s.opt_cost),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let contained = records.iter().filter(|r| r.contained).count();
    let fraction = if records.is_empty() {
        0.0
    } else {
        contained as f64 / records.len() as f64
    };
    Ok(ContainmentStats {
        records,
        contained,
        fraction,
    })
}
