//! Exact rational geometry in three dimensions: points, planes, convex polytopes.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type P3 = [Q; 3];

pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub fn qi(p: i64) -> Q {
    Q::from_integer(BigInt::from(p))
}

pub fn p3(x: Q, y: Q, z: Q) -> P3 {
    [x, y, z]
}

pub fn add(a: &P3, b: &P3) -> P3 {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

pub fn sub(a: &P3, b: &P3) -> P3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub fn scale(a: &P3, k: &Q) -> P3 {
    [&a[0] * k, &a[1] * k, &a[2] * k]
}

pub fn dot(a: &P3, b: &P3) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub fn cross(a: &P3, b: &P3) -> P3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn is_zero(a: &P3) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn midpoint(a: &P3, b: &P3) -> P3 {
    scale(&add(a, b), &q(1, 2))
}

pub fn centroid(points: &[P3]) -> P3 {
    let mut s = [Q::zero(), Q::zero(), Q::zero()];
    for p in points {
        s = add(&s, p);
    }
    scale(&s, &Q::new(BigInt::one(), BigInt::from(points.len())))
}

pub fn det3(m: &[P3; 3]) -> Q {
    dot(&m[0], &cross(&m[1], &m[2]))
}

/// Inverse of a 3×3 matrix given by rows.
pub fn inverse3(m: &[P3; 3]) -> Option<[P3; 3]> {
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    // rows of the inverse's transpose are cross products of row pairs
    let c0 = cross(&m[1], &m[2]);
    let c1 = cross(&m[2], &m[0]);
    let c2 = cross(&m[0], &m[1]);
    let inv = |i: usize| [&c0[i] / &d, &c1[i] / &d, &c2[i] / &d];
    Some([inv(0), inv(1), inv(2)])
}

/// Row vector `v` times matrix `m` (rows).
pub fn vec_mat(v: &P3, m: &[P3; 3]) -> P3 {
    let mut out = [Q::zero(), Q::zero(), Q::zero()];
    for k in 0..3 {
        out = add(&out, &scale(&m[k], &v[k]));
    }
    out
}

pub fn floor3(p: &P3) -> [BigInt; 3] {
    [
        p[0].floor().to_integer(),
        p[1].floor().to_integer(),
        p[2].floor().to_integer(),
    ]
}

pub fn int_vec(t: &[BigInt; 3]) -> P3 {
    [
        Q::from_integer(t[0].clone()),
        Q::from_integer(t[1].clone()),
        Q::from_integer(t[2].clone()),
    ]
}

/// Representative of `p` modulo the integer lattice, in `[0,1)³`.
pub fn reduce(p: &P3) -> P3 {
    [&p[0] - p[0].floor(), &p[1] - p[1].floor(), &p[2] - p[2].floor()]
}

/// Translation-invariant key of a finite point set: sorted points shifted so the least one lies in `[0,1)³`.
pub fn set_key(points: &[P3]) -> (Vec<P3>, P3) {
    let least = points.iter().min().expect("non-empty");
    let shift = int_vec(&floor3(least)).map(|c| -c);
    let mut key: Vec<P3> = points.iter().map(|p| add(p, &shift)).collect();
    key.sort();
    (key, shift)
}

/// Primitive integer multiple of a nonzero rational vector.
pub fn primitive(v: &P3) -> [BigInt; 3] {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * Q::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    [&ints[0] / &g, &ints[1] / &g, &ints[2] / &g]
}

/// Oriented plane `normal · x = offset` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plane {
    pub normal: [BigInt; 3],
    pub offset: Q,
}

impl Plane {
    pub fn through(normal: &P3, point: &P3) -> Plane {
        let n = primitive(normal);
        let nq = int_vec(&n);
        let offset = dot(&nq, point);
        Plane { normal: n, offset }
    }

    pub fn normal_q(&self) -> P3 {
        int_vec(&self.normal)
    }

    /// `normal · p − offset`.
    pub fn eval(&self, p: &P3) -> Q {
        dot(&self.normal_q(), p) - &self.offset
    }

    pub fn flipped(&self) -> Plane {
        Plane {
            normal: self.normal.clone().map(|c| -c),
            offset: -self.offset.clone(),
        }
    }

    pub fn translated(&self, t: &P3) -> Plane {
        Plane {
            normal: self.normal.clone(),
            offset: &self.offset + dot(&self.normal_q(), t),
        }
    }

    /// Coordinate axis dropped when projecting the plane to two dimensions.
    pub fn drop_axis(&self) -> usize {
        (0..3).max_by_key(|&i| self.normal[i].abs()).expect("three axes")
    }
}

fn project(p: &P3, drop: usize) -> (Q, Q) {
    match drop {
        0 => (p[1].clone(), p[2].clone()),
        1 => (p[2].clone(), p[0].clone()),
        _ => (p[0].clone(), p[1].clone()),
    }
}

fn lift(x: &Q, y: &Q, plane: &Plane) -> P3 {
    let n = plane.normal_q();
    let drop = plane.drop_axis();
    let (a, b) = match drop {
        0 => (1, 2),
        1 => (2, 0),
        _ => (0, 1),
    };
    let mut p = [Q::zero(), Q::zero(), Q::zero()];
    p[a] = x.clone();
    p[b] = y.clone();
    p[drop] = (&plane.offset - &n[a] * x - &n[b] * y) / &n[drop];
    p
}

/// Sign of the projection orientation relative to the plane normal.
fn projection_sign(plane: &Plane) -> i8 {
    if plane.normal[plane.drop_axis()].is_positive() {
        1
    } else {
        -1
    }
}

fn cross2(o: &(Q, Q), a: &(Q, Q), b: &(Q, Q)) -> Q {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Strict convex hull (no collinear corners), counter-clockwise.
fn hull2(mut pts: Vec<(Q, Q)>) -> Vec<(Q, Q)> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(Q, Q)> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<(Q, Q)> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Strict convex hull of coplanar points, counter-clockwise seen from the normal's tip.
pub fn planar_hull(points: &[P3], plane: &Plane) -> Vec<P3> {
    let drop = plane.drop_axis();
    let hull = hull2(points.iter().map(|p| project(p, drop)).collect());
    let mut out: Vec<P3> = hull.iter().map(|(x, y)| lift(x, y, plane)).collect();
    if projection_sign(plane) < 0 {
        out.reverse();
    }
    out
}

/// Intersection of two convex polygons lying in `plane`, as a strict hull (possibly degenerate).
pub fn polygon_intersection(a: &[P3], b: &[P3], plane: &Plane) -> Vec<P3> {
    let drop = plane.drop_axis();
    let pa: Vec<(Q, Q)> = a.iter().map(|p| project(p, drop)).collect();
    let pb0: Vec<(Q, Q)> = b.iter().map(|p| project(p, drop)).collect();
    let pb = hull2(pb0);
    let mut poly = hull2(pa);
    if pb.len() < 3 {
        return Vec::new();
    }
    for i in 0..pb.len() {
        let e0 = &pb[i];
        let e1 = &pb[(i + 1) % pb.len()];
        let side = |p: &(Q, Q)| cross2(e0, e1, p);
        let mut out = Vec::new();
        for k in 0..poly.len() {
            let cur = &poly[k];
            let nxt = &poly[(k + 1) % poly.len()];
            let sc = side(cur);
            let sn = side(nxt);
            if !sc.is_negative() {
                out.push(cur.clone());
            }
            if (sc.is_positive() && sn.is_negative()) || (sc.is_negative() && sn.is_positive()) {
                let t = &sc / (&sc - &sn);
                out.push((&cur.0 + &t * (&nxt.0 - &cur.0), &cur.1 + &t * (&nxt.1 - &cur.1)));
            }
        }
        poly = out;
        if poly.is_empty() {
            return Vec::new();
        }
    }
    let hull = hull2(poly);
    let mut out: Vec<P3> = hull.iter().map(|(x, y)| lift(x, y, plane)).collect();
    if projection_sign(plane) < 0 {
        out.reverse();
    }
    out
}

/// `p` on the segment `[a, b]`: `Some(true)` strictly inside, `Some(false)` at an endpoint.
pub fn on_segment(p: &P3, a: &P3, b: &P3) -> Option<bool> {
    let d = sub(b, a);
    let r = sub(p, a);
    if !is_zero(&cross(&d, &r)) {
        return None;
    }
    let s = dot(&r, &d);
    let len = dot(&d, &d);
    match (s.cmp(&Q::zero()), s.cmp(&len)) {
        (Ordering::Less, _) | (_, Ordering::Greater) => None,
        (Ordering::Equal, _) | (_, Ordering::Equal) => Some(false),
        _ => Some(true),
    }
}

/// Position of a point relative to a convex polygon in its plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolygonPos {
    Outside,
    Corner,
    /// Relative interior of a side.
    Side(usize),
    Interior,
}

/// Locates `p` against a counter-clockwise convex polygon (seen from `normal`).
pub fn locate_in_polygon(p: &P3, poly: &[P3], plane: &Plane) -> PolygonPos {
    if !plane.eval(p).is_zero() {
        return PolygonPos::Outside;
    }
    let n = plane.normal_q();
    let k = poly.len();
    let mut boundary = None;
    for i in 0..k {
        let a = &poly[i];
        let b = &poly[(i + 1) % k];
        let s = dot(&cross(&sub(b, a), &sub(p, a)), &n);
        if s.is_negative() {
            return PolygonPos::Outside;
        }
        if s.is_zero() {
            match on_segment(p, a, b) {
                Some(true) => boundary = Some(PolygonPos::Side(i)),
                Some(false) => return PolygonPos::Corner,
                None => return PolygonPos::Outside,
            }
        }
    }
    boundary.unwrap_or(PolygonPos::Interior)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    /// Outward plane: the cell lies in `normal · x ≤ offset`.
    pub plane: Plane,
    /// Corners as indices into the cell's apices, counter-clockwise seen from outside.
    pub corners: Vec<usize>,
}

/// A convex polytope with its full face lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    pub apices: Vec<P3>,
    pub facets: Vec<Facet>,
    pub ridges: Vec<(usize, usize)>,
    pub volume: Q,
    pub bbox: (P3, P3),
}

impl Polytope {
    /// Hull of points in strictly convex position; every point must be an apex.
    pub fn from_points(points: &[P3]) -> Result<Polytope> {
        let mut pts: Vec<P3> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() < 4 {
            return Err(Error::NonConvexCell(format!("{} distinct points", pts.len())));
        }
        let n = pts.len();
        let mut planes: Vec<Plane> = Vec::new();
        let mut seen: HashSet<Plane> = HashSet::new();
        for i in 0..n {
            for j in i + 1..n {
                let dij = sub(&pts[j], &pts[i]);
                for k in j + 1..n {
                    let normal = cross(&dij, &sub(&pts[k], &pts[i]));
                    if is_zero(&normal) {
                        continue;
                    }
                    let mut plane = Plane::through(&normal, &pts[i]);
                    if seen.contains(&plane) || seen.contains(&plane.flipped()) {
                        continue;
                    }
                    let (mut pos, mut neg) = (false, false);
                    for p in &pts {
                        let s = plane.eval(p);
                        pos |= s.is_positive();
                        neg |= s.is_negative();
                        if pos && neg {
                            break;
                        }
                    }
                    seen.insert(plane.clone());
                    if pos && neg {
                        continue;
                    }
                    if !pos && !neg {
                        return Err(Error::NonConvexCell("all points coplanar".into()));
                    }
                    if pos {
                        plane = plane.flipped();
                    }
                    planes.push(plane);
                }
            }
        }
        let mut apex_flags = vec![false; n];
        let mut facets = Vec::new();
        for plane in planes {
            let on: Vec<P3> = pts.iter().filter(|p| plane.eval(p).is_zero()).cloned().collect();
            let hull = planar_hull(&on, &plane);
            if hull.len() != on.len() {
                return Err(Error::NonConvexCell("a listed point is not an apex".into()));
            }
            let corners: Vec<usize> = hull.iter().map(|h| pts.binary_search(h).expect("listed")).collect();
            for &c in &corners {
                apex_flags[c] = true;
            }
            facets.push(Facet { plane, corners });
        }
        if apex_flags.iter().any(|f| !f) {
            return Err(Error::NonConvexCell("a listed point lies inside the cell".into()));
        }
        let mut ridges: Vec<(usize, usize)> = Vec::new();
        for f in &facets {
            for i in 0..f.corners.len() {
                let a = f.corners[i];
                let b = f.corners[(i + 1) % f.corners.len()];
                ridges.push((a.min(b), a.max(b)));
            }
        }
        ridges.sort();
        ridges.dedup();
        let c = centroid(&pts);
        let mut volume = Q::zero();
        for f in &facets {
            let v0 = sub(&pts[f.corners[0]], &c);
            for w in f.corners[1..].windows(2) {
                let m = [v0.clone(), sub(&pts[w[0]], &c), sub(&pts[w[1]], &c)];
                volume += det3(&m).abs();
            }
        }
        volume /= qi(6);
        let lo = [0, 1, 2].map(|a| pts.iter().map(|p| p[a].clone()).min().expect("points"));
        let hi = [0, 1, 2].map(|a| pts.iter().map(|p| p[a].clone()).max().expect("points"));
        Ok(Polytope {
            apices: pts,
            facets,
            ridges,
            volume,
            bbox: (lo, hi),
        })
    }

    /// Vertices of `{x : a·x ≤ d}` for rows `[a0, a1, a2, d]`.
    pub fn from_halfspaces(rows: &[[Q; 4]]) -> Result<Polytope> {
        let planes: Vec<(P3, Q)> = rows
            .iter()
            .map(|r| ([r[0].clone(), r[1].clone(), r[2].clone()], r[3].clone()))
            .collect();
        let mut pts = Vec::new();
        for i in 0..planes.len() {
            for j in i + 1..planes.len() {
                for k in j + 1..planes.len() {
                    let m = [planes[i].0.clone(), planes[j].0.clone(), planes[k].0.clone()];
                    let Some(inv) = inverse3(&m) else { continue };
                    // solve m x = d  ⇒  x = inv_rows applied column-wise
                    let d = [planes[i].1.clone(), planes[j].1.clone(), planes[k].1.clone()];
                    let x = vec_mat(&d, &transpose(&inv));
                    if planes.iter().all(|(a, b)| dot(a, &x) <= *b) {
                        pts.push(x);
                    }
                }
            }
        }
        Polytope::from_points(&pts)
    }

    pub fn translated(&self, t: &P3) -> Polytope {
        Polytope {
            apices: self.apices.iter().map(|p| add(p, t)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    plane: f.plane.translated(t),
                    corners: f.corners.clone(),
                })
                .collect(),
            ridges: self.ridges.clone(),
            volume: self.volume.clone(),
            bbox: (add(&self.bbox.0, t), add(&self.bbox.1, t)),
        }
    }

    pub fn facet_points(&self, f: usize) -> Vec<P3> {
        self.facets[f].corners.iter().map(|&i| self.apices[i].clone()).collect()
    }

    /// Closed membership.
    pub fn contains(&self, p: &P3) -> bool {
        self.facets.iter().all(|f| !f.plane.eval(p).is_positive())
    }

    /// Facet whose relative interior contains `p`.
    pub fn facet_interior_of(&self, p: &P3) -> Option<usize> {
        (0..self.facets.len())
            .find(|&f| locate_in_polygon(p, &self.facet_points(f), &self.facets[f].plane) == PolygonPos::Interior)
    }

    pub fn edge_directions(&self) -> Vec<P3> {
        self.ridges
            .iter()
            .map(|&(a, b)| sub(&self.apices[b], &self.apices[a]))
            .collect()
    }
}

pub fn transpose(m: &[P3; 3]) -> [P3; 3] {
    [0, 1, 2].map(|i| [m[0][i].clone(), m[1][i].clone(), m[2][i].clone()])
}

pub fn boxes_overlap(a: &(P3, P3), b: &(P3, P3)) -> bool {
    (0..3).all(|i| a.0[i] <= b.1[i] && b.0[i] <= a.1[i])
}

fn separated_along(axis: &P3, a: &Polytope, b: &Polytope) -> bool {
    let proj = |p: &Polytope| {
        let vals: Vec<Q> = p.apices.iter().map(|x| dot(axis, x)).collect();
        (
            vals.iter().min().cloned().expect("apices"),
            vals.into_iter().max().expect("apices"),
        )
    };
    let (amin, amax) = proj(a);
    let (bmin, bmax) = proj(b);
    amax <= bmin || bmax <= amin
}

/// `b` lies in the closed outer side of one of `a`'s facet planes.
fn facet_separates(a: &Polytope, b: &Polytope) -> bool {
    a.facets
        .iter()
        .any(|f| b.apices.iter().all(|x| !f.plane.eval(x).is_negative()))
}

fn edge_axes(p: &Polytope) -> Vec<[BigInt; 3]> {
    let mut dirs: Vec<[BigInt; 3]> = p
        .edge_directions()
        .iter()
        .map(|d| {
            let v = primitive(d);
            // one representative per line direction
            if v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
                v.map(|c| -c)
            } else {
                v
            }
        })
        .collect();
    dirs.sort();
    dirs.dedup();
    dirs
}

/// Whether two convex polytopes have disjoint interiors.
pub fn interiors_disjoint(a: &Polytope, b: &Polytope) -> bool {
    if (0..3).any(|i| a.bbox.1[i] <= b.bbox.0[i] || b.bbox.1[i] <= a.bbox.0[i]) {
        return true;
    }
    if facet_separates(a, b) || facet_separates(b, a) {
        return true;
    }
    let to_q = |v: &[BigInt; 3]| -> P3 { v.clone().map(Q::from_integer) };
    let (ea, eb) = (edge_axes(a), edge_axes(b));
    for da in &ea {
        for db in &eb {
            let axis = cross(&to_q(da), &to_q(db));
            if !is_zero(&axis) && separated_along(&axis, a, b) {
                return true;
            }
        }
    }
    false
}

/// Decimal rendering of a rational for geometry dumps (exact when terminating).
pub fn decimal(v: &Q) -> String {
    crate::scalar::format_decimal(v, 20)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(o: [i64; 3]) -> Vec<P3> {
        let mut v = Vec::new();
        for dx in 0..2 {
            for dy in 0..2 {
                for dz in 0..2 {
                    v.push([qi(o[0] + dx), qi(o[1] + dy), qi(o[2] + dz)]);
                }
            }
        }
        v
    }

    #[test]
    fn cube_lattice_counts() {
        let c = Polytope::from_points(&cube([0, 0, 0])).unwrap();
        assert_eq!(c.facets.len(), 6);
        assert_eq!(c.ridges.len(), 12);
        assert_eq!(c.volume, qi(1));
        assert!(c.facets.iter().all(|f| f.corners.len() == 4));
        let t = Polytope::from_points(&[
            [qi(0), qi(0), qi(0)],
            [qi(1), qi(0), qi(0)],
            [qi(0), qi(1), qi(0)],
            [qi(0), qi(0), qi(1)],
        ])
        .unwrap();
        assert_eq!(t.volume, q(1, 6));
    }

    #[test]
    fn rejects_non_apex_points() {
        let mut pts = cube([0, 0, 0]);
        pts.push([q(1, 2), q(1, 2), q(1, 2)]);
        assert!(matches!(Polytope::from_points(&pts), Err(Error::NonConvexCell(_))));
        let mut pts = cube([0, 0, 0]);
        pts.push([q(1, 2), qi(0), qi(0)]);
        assert!(Polytope::from_points(&pts).is_err());
    }

    #[test]
    fn halfspace_cube() {
        let rows: Vec<[Q; 4]> = (0..3)
            .flat_map(|a| {
                let mut lo = [qi(0), qi(0), qi(0), qi(0)];
                lo[a] = qi(-1);
                let mut hi = [qi(0), qi(0), qi(0), qi(1)];
                hi[a] = qi(1);
                [lo, hi]
            })
            .collect();
        let c = Polytope::from_halfspaces(&rows).unwrap();
        assert_eq!(c.apices.len(), 8);
        assert_eq!(c.volume, qi(1));
    }

    #[test]
    fn disjointness() {
        let a = Polytope::from_points(&cube([0, 0, 0])).unwrap();
        let b = Polytope::from_points(&cube([1, 0, 0])).unwrap();
        assert!(interiors_disjoint(&a, &b));
        let half: Vec<P3> = cube([0, 0, 0])
            .into_iter()
            .map(|p| add(&p, &[q(1, 2), qi(0), qi(0)]))
            .collect();
        let c = Polytope::from_points(&half).unwrap();
        assert!(!interiors_disjoint(&a, &c));
    }

    #[test]
    fn polygon_ops() {
        let c = Polytope::from_points(&cube([0, 0, 0])).unwrap();
        let top = (0..6)
            .find(|&f| c.facets[f].plane.normal == [BigInt::zero(), BigInt::zero(), BigInt::one()])
            .unwrap();
        let poly = c.facet_points(top);
        let plane = &c.facets[top].plane;
        assert_eq!(
            locate_in_polygon(&[q(1, 2), q(1, 2), qi(1)], &poly, plane),
            PolygonPos::Interior
        );
        assert!(matches!(
            locate_in_polygon(&[q(1, 2), qi(0), qi(1)], &poly, plane),
            PolygonPos::Side(_)
        ));
        assert_eq!(
            locate_in_polygon(&[qi(1), qi(1), qi(1)], &poly, plane),
            PolygonPos::Corner
        );
        let shifted: Vec<P3> = poly.iter().map(|p| add(p, &[q(1, 2), q(1, 2), qi(0)])).collect();
        let inter = polygon_intersection(&poly, &shifted, plane);
        assert_eq!(inter.len(), 4);
        assert_eq!(
            on_segment(&[q(1, 2), qi(0), qi(0)], &[qi(0), qi(0), qi(0)], &[qi(1), qi(0), qi(0)]),
            Some(true)
        );
    }
}
