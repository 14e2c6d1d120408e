//! Exact-sign planar predicates and the polygon routines the triangulations
//! are built from.

use std::cmp::Ordering;

use robust::Coord;

use crate::error::{Error, Result};
use crate::instances::Point;

fn coord(p: Point) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Sign of the signed area of `a, b, c`: positive when counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> Ordering {
    robust::orient2d(coord(a), coord(b), coord(c))
        .partial_cmp(&0.0)
        .expect("finite coordinates")
}

/// Positive when `d` lies strictly inside the circle through the
/// counter-clockwise triangle `a, b, c`.
pub fn in_circle(a: Point, b: Point, c: Point, d: Point) -> Ordering {
    robust::incircle(coord(a), coord(b), coord(c), coord(d))
        .partial_cmp(&0.0)
        .expect("finite coordinates")
}

pub fn all_collinear(points: &[Point]) -> bool {
    let (a, b) = (points[0], points[1]);
    points[2..]
        .iter()
        .all(|&c| orient(a, b, c) == Ordering::Equal)
}

/// Strict convex hull (collinear boundary points dropped), counter-clockwise,
/// starting from the lexicographically smallest point.
pub fn convex_hull(points: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| {
        points[i]
            .x
            .total_cmp(&points[j].x)
            .then(points[i].y.total_cmp(&points[j].y))
    });
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if orient(points[a], points[b], points[i]) == Ordering::Greater {
                    break;
                }
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Twice the signed area of a polygon given by vertex indices.
pub fn signed_area2(points: &[Point], poly: &[usize]) -> f64 {
    let k = poly.len();
    (0..k)
        .map(|i| {
            let p = points[poly[i]];
            let q = points[poly[(i + 1) % k]];
            p.x * q.y - q.x * p.y
        })
        .sum()
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segment intersection, touching and collinear overlap included.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2
        && o3 != o4
        && o1 != Ordering::Equal
        && o2 != Ordering::Equal
        && o3 != Ordering::Equal
        && o4 != Ordering::Equal
    {
        return true;
    }
    (o1 == Ordering::Equal && on_segment(a, b, c))
        || (o2 == Ordering::Equal && on_segment(a, b, d))
        || (o3 == Ordering::Equal && on_segment(c, d, a))
        || (o4 == Ordering::Equal && on_segment(c, d, b))
}

/// Whether the closed polygon through `poly` has no self intersections.
pub fn is_simple_polygon(points: &[Point], poly: &[usize]) -> bool {
    let k = poly.len();
    let seg = |i: usize| (points[poly[i]], points[poly[(i + 1) % k]]);
    for i in 0..k {
        let (a, b) = seg(i);
        // Adjacent edges share one endpoint; they may not fold back over each other.
        let c = points[poly[(i + 2) % k]];
        if orient(a, b, c) == Ordering::Equal && (on_segment(a, b, c) || on_segment(b, c, a)) {
            return false;
        }
        for j in i + 2..k {
            if i == 0 && j == k - 1 {
                continue;
            }
            let (c, d) = seg(j);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

fn in_closed_triangle(a: Point, b: Point, c: Point, p: Point) -> bool {
    orient(a, b, p) != Ordering::Less
        && orient(b, c, p) != Ordering::Less
        && orient(c, a, p) != Ordering::Less
}

/// Ear-clipping triangulation of a simple polygon. Triangles come out
/// counter-clockwise; the first ear found scanning from the polygon start is
/// clipped at each step.
pub fn ear_clip(points: &[Point], poly: &[usize]) -> Result<Vec<[usize; 3]>> {
    let mut rest: Vec<usize> = poly.to_vec();
    if signed_area2(points, &rest) < 0.0 {
        rest.reverse();
    }
    let mut tris = Vec::with_capacity(poly.len().saturating_sub(2));
    while rest.len() > 3 {
        let k = rest.len();
        let ear = (0..k).find(|&i| {
            let (a, b, c) = (rest[(i + k - 1) % k], rest[i], rest[(i + 1) % k]);
            let (pa, pb, pc) = (points[a], points[b], points[c]);
            orient(pa, pb, pc) == Ordering::Greater
                && rest
                    .iter()
                    .filter(|&&v| v != a && v != b && v != c)
                    .all(|&v| !in_closed_triangle(pa, pb, pc, points[v]))
        });
        let Some(i) = ear else {
            return Err(Error::Degenerate(
                "no ear found while triangulating a polygon".into(),
            ));
        };
        tris.push([rest[(i + k - 1) % k], rest[i], rest[(i + 1) % k]]);
        rest.remove(i);
    }
    let [a, b, c] = [rest[0], rest[1], rest[2]];
    if orient(points[a], points[b], points[c]) != Ordering::Greater {
        return Err(Error::Degenerate("zero-area triangle in polygon".into()));
    }
    tris.push([a, b, c]);
    Ok(tris)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &[(f64, f64)]) -> Vec<Point> {
        c.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn orientation_signs() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (2.0, 0.0)]);
        assert_eq!(orient(p[0], p[1], p[2]), Ordering::Greater);
        assert_eq!(orient(p[0], p[2], p[1]), Ordering::Less);
        assert_eq!(orient(p[0], p[1], p[3]), Ordering::Equal);
    }

    #[test]
    fn square_is_cocircular() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert_eq!(in_circle(p[0], p[1], p[2], p[3]), Ordering::Equal);
        let inside = Point::new(0.5, 0.5);
        assert_eq!(in_circle(p[0], p[1], p[2], inside), Ordering::Greater);
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let p = pts(&[
            (0.0, 0.0),
            (2.0, 0.0),
            (1.0, 0.0),
            (2.0, 2.0),
            (0.0, 2.0),
            (1.0, 1.0),
        ]);
        assert_eq!(convex_hull(&p), vec![0, 1, 3, 4]);
    }

    #[test]
    fn bow_tie_is_not_simple() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert!(is_simple_polygon(&p, &[0, 1, 2, 3]));
        assert!(!is_simple_polygon(&p, &[0, 2, 1, 3]));
    }

    #[test]
    fn ear_clip_concave_polygon() {
        let p = pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (1.0, 0.5), (0.0, 2.0)]);
        let tris = ear_clip(&p, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(tris.len(), 3);
        let area: f64 = tris.iter().map(|t| signed_area2(&p, t)).sum();
        assert!((area - signed_area2(&p, &[0, 1, 2, 3, 4])).abs() < 1e-12);
        // clockwise input is accepted too
        assert_eq!(ear_clip(&p, &[4, 3, 2, 1, 0]).unwrap().len(), 3);
    }
}
