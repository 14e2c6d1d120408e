//! Instance model: cost matrices, planar point sets, edge masks and the
//! line-oriented text format shared by the CLI and the bindings.
//!
//! Vertices are 0-based in memory and 1-based in every file and report.

use std::fmt::Write as _;
use std::ops::Range;

use rand::Rng;

use crate::cost::{Cost, Weight};
use crate::error::{Error, ParseError, Result};
use crate::seeded_rng;

/// Largest `n` accepted by [`gen_unique_gap`]; keeps every tour sum inside `i64`.
pub const MAX_UNIQUE_N: usize = 15;

/// Largest integer magnitude that converts to `f64` without rounding.
const F64_EXACT_INT: i64 = 1 << 53;

/// Borrowed view of the off-diagonal weights, row-major with `n * n` slots.
/// Diagonal slots hold zero and are never read.
#[derive(Debug, Clone, Copy)]
pub enum Weights<'a> {
    Exact(&'a [i64]),
    Float(&'a [f64]),
}

#[derive(Debug, Clone, PartialEq)]
enum Entries {
    Exact(Vec<i64>),
    Float(Vec<f64>),
}

/// Edge costs of a complete directed graph without self loops.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    entries: Entries,
}

fn check_n(n: usize, len: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidInstance(format!(
            "vertex count must be at least 3, got {n}"
        )));
    }
    if len != n * n {
        return Err(Error::InvalidInstance(format!(
            "expected {} entries for n = {n}, got {len}",
            n * n
        )));
    }
    Ok(())
}

impl CostMatrix {
    /// Builds an integer matrix from `n * n` row-major entries. Diagonal
    /// values are discarded.
    pub fn from_exact(n: usize, mut entries: Vec<i64>) -> Result<Self> {
        check_n(n, entries.len())?;
        let mut max = 0i64;
        for i in 0..n {
            for j in 0..n {
                let v = &mut entries[i * n + j];
                if i == j {
                    *v = 0;
                    continue;
                }
                if *v < 0 {
                    return Err(Error::InvalidInstance(format!(
                        "negative cost {} on edge {} -> {}",
                        v,
                        i + 1,
                        j + 1
                    )));
                }
                max = max.max(*v);
            }
        }
        if max.checked_mul(n as i64).is_none() {
            return Err(Error::InvalidInstance(
                "integer costs too large: a tour sum could overflow i64".into(),
            ));
        }
        Ok(Self {
            n,
            entries: Entries::Exact(entries),
        })
    }

    /// Builds a float matrix from `n * n` row-major entries. Diagonal values
    /// are discarded.
    pub fn from_float(n: usize, mut entries: Vec<f64>) -> Result<Self> {
        check_n(n, entries.len())?;
        for i in 0..n {
            for j in 0..n {
                let v = &mut entries[i * n + j];
                if i == j {
                    *v = 0.0;
                    continue;
                }
                if !v.is_finite() || *v < 0.0 {
                    return Err(Error::InvalidInstance(format!(
                        "cost {} on edge {} -> {} must be finite and non-negative",
                        v,
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self {
            n,
            entries: Entries::Float(entries),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, Entries::Exact(_))
    }

    pub fn weights(&self) -> Weights<'_> {
        match &self.entries {
            Entries::Exact(v) => Weights::Exact(v),
            Entries::Float(v) => Weights::Float(v),
        }
    }

    /// Cost of edge `i -> j`; `None` on the diagonal.
    ///
    /// # Panics
    /// If either index is `>= n`.
    pub fn get(&self, i: usize, j: usize) -> Option<Cost> {
        assert!(i < self.n && j < self.n, "vertex index out of range");
        if i == j {
            return None;
        }
        Some(match &self.entries {
            Entries::Exact(v) => Cost::Exact(v[i * self.n + j]),
            Entries::Float(v) => Cost::Float(v[i * self.n + j]),
        })
    }

    pub fn get_f64(&self, i: usize, j: usize) -> f64 {
        self.get(i, j).map_or(f64::NAN, Cost::to_f64)
    }

    /// Iterates `(i, j, cost)` over off-diagonal edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Cost)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (0..n)
                .filter(move |&j| j != i)
                .map(move |j| (i, j, self.get(i, j).expect("off-diagonal")))
        })
    }

    pub fn max_cost(&self) -> Cost {
        self.edges()
            .map(|(_, _, c)| c)
            .max_by(|a, b| a.total_cmp(b))
            .expect("n >= 3")
    }

    pub fn min_cost(&self) -> Cost {
        self.edges()
            .map(|(_, _, c)| c)
            .min_by(|a, b| a.total_cmp(b))
            .expect("n >= 3")
    }

    /// Float copy of this matrix. Fails if an integer entry cannot be
    /// represented exactly.
    pub fn to_float(&self) -> Result<CostMatrix> {
        match &self.entries {
            Entries::Float(_) => Ok(self.clone()),
            Entries::Exact(v) => {
                if v.iter().any(|&x| x > F64_EXACT_INT) {
                    return Err(Error::InvalidInstance(
                        "integer cost not exactly representable as f64".into(),
                    ));
                }
                CostMatrix::from_float(self.n, v.iter().map(|&x| x as f64).collect())
            }
        }
    }

    /// Restriction to a contiguous vertex range, relabelled from 0.
    pub fn submatrix(&self, range: Range<usize>) -> Result<CostMatrix> {
        if range.end > self.n || range.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "submatrix range {range:?} invalid for n = {}",
                self.n
            )));
        }
        let k = range.len();
        let n = self.n;
        match &self.entries {
            Entries::Exact(v) => {
                let mut out = vec![0; k * k];
                for (a, i) in range.clone().enumerate() {
                    for (b, j) in range.clone().enumerate() {
                        out[a * k + b] = v[i * n + j];
                    }
                }
                CostMatrix::from_exact(k, out)
            }
            Entries::Float(v) => {
                let mut out = vec![0.0; k * k];
                for (a, i) in range.clone().enumerate() {
                    for (b, j) in range.clone().enumerate() {
                        out[a * k + b] = v[i * n + j];
                    }
                }
                CostMatrix::from_float(k, out)
            }
        }
    }

    /// Whether `cost[i][j] == cost[j][i]` for every pair.
    pub fn is_symmetric(&self) -> bool {
        let n = self.n;
        match &self.entries {
            Entries::Exact(v) => (0..n).all(|i| (0..i).all(|j| v[i * n + j] == v[j * n + i])),
            Entries::Float(v) => (0..n).all(|i| (0..i).all(|j| v[i * n + j] == v[j * n + i])),
        }
    }
}

/// Sums edge costs along `seq` left to right, closing back to `seq[0]` when
/// `closed`. Indices must already be validated.
pub(crate) fn sum_along<W: Weight>(n: usize, w: &[W], seq: &[usize], closed: bool) -> W {
    let mut acc = W::ZERO;
    for pair in seq.windows(2) {
        acc = acc + w[pair[0] * n + pair[1]];
    }
    if closed {
        acc = acc + w[seq[seq.len() - 1] * n + seq[0]];
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Planar vertex coordinates of a Euclidean instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidInstance(format!(
                "point count must be at least 3, got {}",
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "point {} has non-finite coordinates",
                    i + 1
                )));
            }
            if let Some(j) = points[..i].iter().position(|q| q == p) {
                return Err(Error::InvalidInstance(format!(
                    "points {} and {} coincide",
                    j + 1,
                    i + 1
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }
}

/// Axis-aligned sampling box for [`gen_random_points`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Default for BoundingBox {
    fn default() -> Self {
        Self {
            min_x: 0.0,
            min_y: 0.0,
            max_x: 1.0,
            max_y: 1.0,
        }
    }
}

/// Subset of directed off-diagonal edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMask {
    n: usize,
    allowed: Vec<bool>,
}

impl EdgeMask {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            allowed: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut mask = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    mask.allowed[i * n + j] = true;
                }
            }
        }
        mask
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Allows `i -> j`. Self loops are ignored.
    pub fn insert(&mut self, i: usize, j: usize) {
        if i != j {
            self.allowed[i * self.n + j] = true;
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.allowed[i * self.n + j]
    }

    /// Number of allowed directed edges.
    pub fn len(&self) -> usize {
        self.allowed.iter().filter(|&&a| a).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.allowed[i * self.n..(i + 1) * self.n]
            .iter()
            .filter(|&&a| a)
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Gap,
    E2d,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Gap(CostMatrix),
    E2d(PointSet),
}

/// An instance as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub payload: Payload,
    /// Generator name and seed, free text.
    pub provenance: Option<String>,
}

impl InstanceFile {
    pub fn gap(cm: CostMatrix, provenance: impl Into<Option<String>>) -> Self {
        Self {
            payload: Payload::Gap(cm),
            provenance: provenance.into(),
        }
    }

    pub fn e2d(ps: PointSet, provenance: impl Into<Option<String>>) -> Self {
        Self {
            payload: Payload::E2d(ps),
            provenance: provenance.into(),
        }
    }

    pub fn kind(&self) -> InstanceKind {
        match self.payload {
            Payload::Gap(_) => InstanceKind::Gap,
            Payload::E2d(_) => InstanceKind::E2d,
        }
    }

    pub fn n(&self) -> usize {
        match &self.payload {
            Payload::Gap(cm) => cm.n(),
            Payload::E2d(ps) => ps.n(),
        }
    }

    /// Cost matrix of the instance; Euclidean instances are converted.
    pub fn cost_matrix(&self) -> CostMatrix {
        match &self.payload {
            Payload::Gap(cm) => cm.clone(),
            Payload::E2d(ps) => points_to_costs(ps).expect("validated point set"),
        }
    }

    pub fn points(&self) -> Option<&PointSet> {
        match &self.payload {
            Payload::E2d(ps) => Some(ps),
            Payload::Gap(_) => None,
        }
    }
}

const PROVENANCE_TAG: &str = "# provenance:";

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses the instance text format:
///
/// ```text
/// gap 3
/// inf 1 2
/// 3 inf 6
/// 9 18 inf
/// ```
///
/// or `e2d <n>` followed by `n` lines of `<x> <y>`. Lines starting with `#`
/// are comments; `# provenance: ...` is kept as the instance provenance.
pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let provenance = text
        .lines()
        .map(str::trim)
        .find_map(|l| l.strip_prefix(PROVENANCE_TAG))
        .map(|p| p.trim().to_string());
    let mut lines = content_lines(text);
    let Some((hline, header)) = lines.next() else {
        return Err(ParseError::Truncated {
            line: text.lines().count().max(1),
        });
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || ParseError::MalformedHeader {
        line: hline,
        found: header.to_string(),
    };
    if fields.len() != 2 {
        return Err(bad_header());
    }
    let n: usize = fields[1].parse().map_err(|_| bad_header())?;
    if n < 3 {
        return Err(ParseError::TooFewVertices { line: hline, n });
    }
    let payload = match fields[0] {
        "gap" => Payload::Gap(parse_gap_rows(n, hline, &mut lines)?),
        "e2d" => Payload::E2d(parse_points(n, hline, &mut lines)?),
        _ => return Err(bad_header()),
    };
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::TrailingContent { line });
    }
    Ok(InstanceFile {
        payload,
        provenance,
    })
}

fn next_row<'a>(
    last_line: &mut usize,
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    expected: usize,
) -> Result<(usize, Vec<&'a str>), ParseError> {
    let (line, text) = lines.next().ok_or(ParseError::Truncated {
        line: *last_line + 1,
    })?;
    *last_line = line;
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != expected {
        return Err(ParseError::WrongFieldCount {
            line,
            expected,
            found: tokens.len(),
        });
    }
    Ok((line, tokens))
}

fn parse_gap_rows<'a>(
    n: usize,
    header_line: usize,
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<CostMatrix, ParseError> {
    let mut last = header_line;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let (line, tokens) = next_row(&mut last, lines, n)?;
        for (j, tok) in tokens.iter().enumerate() {
            if i == j {
                if *tok != "inf" {
                    return Err(ParseError::FiniteDiagonal { line });
                }
            } else if tok.parse::<f64>().is_err() {
                return Err(ParseError::NonNumeric {
                    line,
                    token: tok.to_string(),
                });
            }
        }
        rows.push((line, tokens));
    }
    let exact = rows.iter().enumerate().all(|(i, (_, toks))| {
        toks.iter()
            .enumerate()
            .all(|(j, t)| i == j || t.parse::<i64>().is_ok())
    });
    let to_err = |line: usize, e: Error| ParseError::Invalid {
        line,
        msg: e.to_string(),
    };
    if exact {
        let mut entries = vec![0i64; n * n];
        for (i, (line, toks)) in rows.iter().enumerate() {
            for (j, t) in toks.iter().enumerate() {
                if i == j {
                    continue;
                }
                let v: i64 = t.parse().expect("checked above");
                if v < 0 {
                    return Err(ParseError::InvalidEntry {
                        line: *line,
                        token: t.to_string(),
                    });
                }
                entries[i * n + j] = v;
            }
        }
        CostMatrix::from_exact(n, entries).map_err(|e| to_err(rows[0].0, e))
    } else {
        let mut entries = vec![0f64; n * n];
        for (i, (line, toks)) in rows.iter().enumerate() {
            for (j, t) in toks.iter().enumerate() {
                if i == j {
                    continue;
                }
                let v: f64 = t.parse().expect("checked above");
                if !v.is_finite() || v < 0.0 {
                    return Err(ParseError::InvalidEntry {
                        line: *line,
                        token: t.to_string(),
                    });
                }
                entries[i * n + j] = v;
            }
        }
        CostMatrix::from_float(n, entries).map_err(|e| to_err(rows[0].0, e))
    }
}

fn parse_points<'a>(
    n: usize,
    header_line: usize,
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<PointSet, ParseError> {
    let mut last = header_line;
    let mut points: Vec<Point> = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, tokens) = next_row(&mut last, lines, 2)?;
        let mut coord = [0.0f64; 2];
        for (c, tok) in coord.iter_mut().zip(&tokens) {
            *c = tok.parse().map_err(|_| ParseError::NonNumeric {
                line,
                token: tok.to_string(),
            })?;
            if !c.is_finite() {
                return Err(ParseError::InvalidEntry {
                    line,
                    token: tok.to_string(),
                });
            }
        }
        let p = Point::new(coord[0], coord[1]);
        if let Some(first) = points.iter().position(|q| *q == p) {
            return Err(ParseError::DuplicatePoint {
                line,
                first: first + 1,
            });
        }
        points.push(p);
    }
    Ok(PointSet { points })
}

/// Canonical text for an instance; [`parse_instance`] inverts it exactly.
pub fn serialize_instance(inst: &InstanceFile) -> String {
    let mut out = String::new();
    match &inst.payload {
        Payload::Gap(cm) => {
            let n = cm.n();
            writeln!(out, "gap {n}").unwrap();
            if let Some(p) = &inst.provenance {
                writeln!(out, "{PROVENANCE_TAG} {p}").unwrap();
            }
            for i in 0..n {
                let row: Vec<String> = (0..n)
                    .map(|j| match cm.get(i, j) {
                        None => "inf".to_string(),
                        Some(c) => c.to_string(),
                    })
                    .collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        }
        Payload::E2d(ps) => {
            writeln!(out, "e2d {}", ps.n()).unwrap();
            if let Some(p) = &inst.provenance {
                writeln!(out, "{PROVENANCE_TAG} {p}").unwrap();
            }
            for p in ps.points() {
                writeln!(out, "{:?} {:?}", p.x, p.y).unwrap();
            }
        }
    }
    out
}

/// Euclidean distance matrix of a point set.
pub fn points_to_costs(ps: &PointSet) -> Result<CostMatrix> {
    let n = ps.n();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = ps.point(i).distance(&ps.point(j));
            if d <= 0.0 {
                return Err(Error::InvalidInstance(format!(
                    "points {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
            entries[i * n + j] = d;
        }
    }
    CostMatrix::from_float(n, entries)
}

/// The unique-solution matrix: row `i` (1-based) holds `n^(i-1)` times the
/// rank of each column among the row's off-diagonal columns, so every
/// complete cycle's cost is a distinct base-`n` number.
pub fn gen_unique_gap(n: usize) -> Result<CostMatrix> {
    if !(3..=MAX_UNIQUE_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "unique generator needs 3 <= n <= {MAX_UNIQUE_N}, got {n}"
        )));
    }
    let mut entries = vec![0i64; n * n];
    let mut scale = 1i64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let rank = if j < i { j + 1 } else { j } as i64;
            entries[i * n + j] = scale * rank;
        }
        scale *= n as i64;
    }
    CostMatrix::from_exact(n, entries)
}

/// Off-diagonal entries i.i.d. uniform on `[lo, hi]`, drawn row-major from
/// ChaCha8 seeded with `seed`.
pub fn gen_random_gap(n: usize, seed: u64, lo: f64, hi: f64) -> Result<CostMatrix> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n must be >= 3, got {n}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi && lo >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "invalid cost range [{lo}, {hi}]"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                entries[i * n + j] = rng.random_range(lo..=hi);
            }
        }
    }
    CostMatrix::from_float(n, entries)
}

/// `n` distinct points uniform in `bbox`; coincident draws are redrawn.
pub fn gen_random_points(n: usize, seed: u64, bbox: BoundingBox) -> Result<PointSet> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n must be >= 3, got {n}")));
    }
    let finite = [bbox.min_x, bbox.min_y, bbox.max_x, bbox.max_y]
        .iter()
        .all(|v| v.is_finite());
    if !finite || bbox.min_x >= bbox.max_x || bbox.min_y >= bbox.max_y {
        return Err(Error::InvalidArgument(format!(
            "degenerate bounding box {bbox:?}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let p = Point::new(
            rng.random_range(bbox.min_x..=bbox.max_x),
            rng.random_range(bbox.min_y..=bbox.max_y),
        );
        if !points.contains(&p) {
            points.push(p);
        }
    }
    PointSet::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAP3: &str = "gap 3\ninf 1 2\n3 inf 6\n9 18 inf\n";

    #[test]
    fn unique_gap_matches_displayed_pattern() {
        let cm = gen_unique_gap(3).unwrap();
        let expected = [
            [None, Some(1), Some(2)],
            [Some(3), None, Some(6)],
            [Some(9), Some(18), None],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert_eq!(cm.get(i, j), e.map(Cost::Exact));
            }
        }
        assert!(cm.is_exact());
    }

    #[test]
    fn unique_gap_rows_follow_formula() {
        // Independent evaluation of n^(i-1) * rank with 1-based labels.
        for n in 3..=MAX_UNIQUE_N {
            let cm = gen_unique_gap(n).unwrap();
            for i in 1..=n {
                let mut rank = 0;
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    rank += 1;
                    let want = (n as i64).pow(i as u32 - 1) * rank;
                    assert_eq!(cm.get(i - 1, j - 1), Some(Cost::Exact(want)));
                }
            }
        }
    }

    #[test]
    fn unique_gap_range_is_enforced() {
        assert!(gen_unique_gap(2).is_err());
        assert!(gen_unique_gap(MAX_UNIQUE_N + 1).is_err());
    }

    #[test]
    fn parses_gap_text() {
        let inst = parse_instance(GAP3).unwrap();
        assert_eq!(inst.kind(), InstanceKind::Gap);
        assert_eq!(inst.cost_matrix(), gen_unique_gap(3).unwrap());
    }

    #[test]
    fn serializes_unique_gap() {
        let inst = InstanceFile::gap(gen_unique_gap(3).unwrap(), None);
        assert_eq!(serialize_instance(&inst), GAP3);
    }

    #[test]
    fn parses_e2d_text() {
        let inst = parse_instance("e2d 3\n0 0\n1 0\n0 1\n").unwrap();
        let ps = inst.points().unwrap();
        assert_eq!(ps.n(), 3);
        assert_eq!(ps.point(2), Point::new(0.0, 1.0));
    }

    #[test]
    fn unit_square_serializes_four_lines() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let text = serialize_instance(&InstanceFile::e2d(ps, None));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "e2d 4");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn parse_errors_name_lines() {
        let err = parse_instance("gap 3\n1 2 3\n3 inf 6\n9 18 inf\n").unwrap_err();
        assert_eq!(err, ParseError::FiniteDiagonal { line: 2 });
        assert_eq!(err.to_string(), "line 2: diagonal must be inf");

        let err = parse_instance("# c\ngap 3\ninf 1 2\n3 inf x\n9 18 inf\n").unwrap_err();
        assert!(matches!(err, ParseError::NonNumeric { line: 4, .. }));

        let err = parse_instance("gap 2\ninf 1\n1 inf\n").unwrap_err();
        assert_eq!(err, ParseError::TooFewVertices { line: 1, n: 2 });

        let err = parse_instance("tsp 3\n").unwrap_err();
        assert!(matches!(err, ParseError::MalformedHeader { line: 1, .. }));

        let err = parse_instance("e2d 3\n0 0\n1 0\n0 0\n").unwrap_err();
        assert_eq!(err, ParseError::DuplicatePoint { line: 4, first: 1 });

        let err = parse_instance("gap 3\ninf 1 2\n3 inf 6\n").unwrap_err();
        assert_eq!(err, ParseError::Truncated { line: 4 });

        let err = parse_instance("gap 3\ninf 1 2\n3 inf 6\n9 18 inf\n1 1\n").unwrap_err();
        assert_eq!(err, ParseError::TrailingContent { line: 5 });

        let err = parse_instance("gap 3\ninf 1 inf\n3 inf 6\n9 18 inf\n").unwrap_err();
        assert!(matches!(err, ParseError::InvalidEntry { line: 2, .. }));
    }

    #[test]
    fn mixed_tokens_switch_to_float() {
        let inst = parse_instance("gap 3\ninf 1 2.5\n3 inf 6\n9 18 inf\n").unwrap();
        let cm = inst.cost_matrix();
        assert!(!cm.is_exact());
        assert_eq!(cm.get(0, 2), Some(Cost::Float(2.5)));
        let again = parse_instance(&serialize_instance(&inst)).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn provenance_round_trips() {
        let cm = gen_random_gap(4, 9, 0.0, 1.0).unwrap();
        let inst = InstanceFile::gap(cm, Some("random-gap seed=9".to_string()));
        let again = parse_instance(&serialize_instance(&inst)).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn unit_square_distances() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let cm = points_to_costs(&ps).unwrap();
        assert_eq!(cm.get(0, 1), Some(Cost::Float(1.0)));
        assert_eq!(cm.get(0, 2), Some(Cost::Float(2f64.sqrt())));
        assert!(cm.is_symmetric());
    }

    #[test]
    fn collinear_points_give_degenerate_triangle() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]).unwrap();
        let cm = points_to_costs(&ps).unwrap();
        assert_eq!(cm.get_f64(0, 2), cm.get_f64(0, 1) + cm.get_f64(1, 2));
    }

    #[test]
    fn duplicate_points_rejected() {
        assert!(PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]).is_err());
    }

    #[test]
    fn random_gap_is_seeded_and_bounded() {
        let a = gen_random_gap(5, 1, 2.0, 3.0).unwrap();
        let b = gen_random_gap(5, 1, 2.0, 3.0).unwrap();
        let c = gen_random_gap(5, 2, 2.0, 3.0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.edges().all(|(_, _, c)| (2.0..=3.0).contains(&c.to_f64())));
        assert!(gen_random_gap(5, 1, 3.0, 3.0).is_err());
    }

    #[test]
    fn random_points_are_seeded_and_boxed() {
        let bbox = BoundingBox {
            min_x: -2.0,
            min_y: 1.0,
            max_x: 3.0,
            max_y: 1.5,
        };
        let a = gen_random_points(4, 7, bbox).unwrap();
        assert_eq!(a, gen_random_points(4, 7, bbox).unwrap());
        assert!(a
            .points()
            .iter()
            .all(|p| (-2.0..=3.0).contains(&p.x) && (1.0..=1.5).contains(&p.y)));
        assert!(points_to_costs(&a).is_ok());
        let flat = BoundingBox { max_y: 1.0, ..bbox };
        assert!(gen_random_points(4, 7, flat).is_err());
    }

    #[test]
    fn overflowing_exact_matrix_rejected() {
        let mut e = vec![1i64; 9];
        e[1] = i64::MAX / 2;
        assert!(CostMatrix::from_exact(3, e).is_err());
    }

    #[test]
    fn submatrix_extracts_block() {
        let cm = gen_unique_gap(5).unwrap();
        let sub = cm.submatrix(1..4).unwrap();
        assert_eq!(sub.n(), 3);
        assert_eq!(sub.get(0, 1), cm.get(1, 2));
        assert_eq!(sub.get(2, 0), cm.get(3, 1));
    }
}
