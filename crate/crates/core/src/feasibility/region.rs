//! Boundary polylines of the two-dimensional views of the permissible region.

use super::{psi_interval, Cyclic};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default EP ceiling for the unbounded non-facet-to-facet zone.
pub const DEFAULT_EP_CEILING: i64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    Ftf,
    NonFtf,
    Both,
}

impl Zone {
    pub fn as_str(self) -> &'static str {
        match self {
            Zone::Ftf => "ftf",
            Zone::NonFtf => "non_ftf",
            Zone::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionPolyline {
    pub x_axis: String,
    pub y_axis: String,
    pub points: Vec<(Scalar, Scalar)>,
    /// `open[i]` is true when the segment leaving `points[i]` is not part of the region.
    pub open: Vec<bool>,
    pub closed: bool,
    pub zone: Zone,
}

type Point = (Scalar, Scalar);

fn same_point(a: &Point, b: &Point) -> bool {
    a.0.approx_eq(&b.0) && a.1.approx_eq(&b.1)
}

/// Removes vertices equal to their successor; each survivor keeps the flag of its outgoing edge.
fn dedupe_cycle(pts: Vec<Point>, flags: Vec<bool>) -> (Vec<Point>, Vec<bool>) {
    let n = pts.len();
    let mut out_p = Vec::new();
    let mut out_f = Vec::new();
    for i in 0..n {
        let next = &pts[(i + 1) % n];
        if n > 1 && same_point(&pts[i], next) && !(out_p.is_empty() && i == n - 1) {
            continue;
        }
        out_p.push(pts[i].clone());
        out_f.push(flags[i]);
    }
    (out_p, out_f)
}

/// Keeps the part of a convex polygon where `a·x + b·y + c ≥ 0`.
pub fn clip_halfplane(poly: &[Point], a: &Scalar, b: &Scalar, c: &Scalar) -> Vec<Point> {
    let eval = |p: &Point| &(&(a * &p.0) + &(b * &p.1)) + c;
    let n = poly.len();
    let mut out: Vec<Point> = Vec::new();
    for i in 0..n {
        let cur = &poly[i];
        let nxt = &poly[(i + 1) % n];
        let fc = eval(cur);
        let fn_ = eval(nxt);
        let cin = fc.signum() >= 0;
        let nin = fn_.signum() >= 0;
        if cin {
            out.push(cur.clone());
        }
        if cin != nin && fc.signum() != 0 && fn_.signum() != 0 {
            let t = &fc / &(&fc - &fn_);
            let x = &cur.0 + &(&t * &(&nxt.0 - &cur.0));
            let y = &cur.1 + &(&t * &(&nxt.1 - &cur.1));
            out.push((x, y));
        }
    }
    let mut dedup: Vec<Point> = Vec::new();
    for p in out {
        if !dedup.iter().any(|q| same_point(q, &p)) {
            dedup.push(p);
        }
    }
    dedup
}

fn cross(o: &Point, a: &Point, b: &Point) -> Scalar {
    &(&(&a.0 - &o.0) * &(&b.1 - &o.1)) - &(&(&a.1 - &o.1) * &(&b.0 - &o.0))
}

/// Membership in a closed convex polygon (degenerate polygons allowed).
pub fn polygon_contains(poly: &[Point], p: &Point) -> bool {
    match poly.len() {
        0 => false,
        1 => same_point(&poly[0], p),
        _ => {
            let mut orient = 0i8;
            for i in 0..poly.len() {
                let s = cross(&poly[i], &poly[(i + 1) % poly.len()], &poly[(i + 2) % poly.len()]).signum();
                if s != 0 {
                    orient = s;
                    break;
                }
            }
            if orient == 0 {
                // collinear: inside the bounding box of the segment and on its line
                let on_line = cross(&poly[0], &poly[1], p).is_zero();
                let within = |k: usize| {
                    let lo = poly
                        .iter()
                        .map(|q| if k == 0 { &q.0 } else { &q.1 })
                        .cloned()
                        .reduce(Scalar::min)
                        .unwrap();
                    let hi = poly
                        .iter()
                        .map(|q| if k == 0 { &q.0 } else { &q.1 })
                        .cloned()
                        .reduce(Scalar::max)
                        .unwrap();
                    let v = if k == 0 { &p.0 } else { &p.1 };
                    v.ge(&lo) && v.le(&hi)
                };
                return on_line && within(0) && within(1);
            }
            (0..poly.len()).all(|i| {
                let s = cross(&poly[i], &poly[(i + 1) % poly.len()], p).signum();
                s == 0 || s == orient
            })
        }
    }
}

/// Splits each edge into `resolution − 1` equal segments.
pub fn subdivide(vertices: &[Point], open: &[bool], closed: bool, resolution: usize) -> (Vec<Point>, Vec<bool>) {
    let steps = resolution.max(2) as i64 - 1;
    let n = vertices.len();
    if n < 2 {
        return (vertices.to_vec(), open.to_vec());
    }
    let edges = if closed { n } else { n - 1 };
    let mut pts = Vec::new();
    let mut flags = Vec::new();
    for i in 0..edges {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        for k in 0..steps {
            let t = Scalar::ratio(k, steps);
            pts.push((&a.0 + &(&t * &(&b.0 - &a.0)), &a.1 + &(&t * &(&b.1 - &a.1))));
            flags.push(open[i]);
        }
    }
    if !closed {
        pts.push(vertices[n - 1].clone());
    }
    (pts, flags)
}

fn polyline(
    x: &str,
    y: &str,
    vertices: Vec<Point>,
    open: Vec<bool>,
    closed: bool,
    zone: Zone,
    resolution: usize,
) -> RegionPolyline {
    let (points, open) = subdivide(&vertices, &open, closed, resolution);
    RegionPolyline {
        x_axis: x.into(),
        y_axis: y.into(),
        points,
        open,
        closed,
        zone,
    }
}

/// (PV, EP) zones for a fixed `VE`: the facet-to-facet zone, the non-facet-to-facet zone
/// above the fundamental curve clipped at `ceiling`, and the line where the ψ ceilings cross.
pub fn region_pv_ep(ve: &Scalar, resolution: usize, ceiling: &Scalar) -> Result<Vec<RegionPolyline>> {
    if ve.lt(&Scalar::int(4)) {
        return Err(Error::InvalidParams(format!("mu_VE = {ve} below 4")));
    }
    if resolution < 2 {
        return Err(Error::InvalidParams("resolution must be at least 2".into()));
    }
    let three = Scalar::int(3);
    let ratio = ve / &(ve - 2);
    let top = super::fundamental_curve(ve);
    let (v, f) = dedupe_cycle(
        vec![
            (three.clone(), three.clone()),
            (three.clone(), top.clone()),
            (Scalar::int(6), top.clone()),
            (&three * &ratio, three.clone()),
        ],
        vec![false, false, true, false],
    );
    let mut out = vec![polyline("mu_PV", "mu_EP", v, f, true, Zone::Ftf, resolution)];

    if ceiling.gt(&top) {
        let v = vec![
            (three.clone(), top.clone()),
            (Scalar::int(6), top.clone()),
            (ceiling * &ratio, ceiling.clone()),
            (&(ceiling * &ratio) / 2, ceiling.clone()),
        ];
        out.push(polyline(
            "mu_PV",
            "mu_EP",
            v,
            vec![false, true, false, true],
            true,
            Zone::NonFtf,
            resolution,
        ));
    }

    let slope = &(ve * 3 - 8) / &(ve * 2);
    let end_pv = ceiling / &slope;
    let v = vec![(three.clone(), &three * &slope), (end_pv, ceiling.clone())];
    out.push(polyline(
        "mu_PV",
        "mu_EP",
        v,
        vec![false],
        false,
        Zone::Both,
        resolution,
    ));
    Ok(out)
}

/// Exact vertices of the (ψ, τ) polygon.
pub fn psi_tau_polygon(c: &Cyclic) -> Result<Vec<Point>> {
    let psi_max = psi_interval(c)?.upper;
    let tau_max = c.tau_nu_ps();
    let zero = Scalar::zero();
    let one = Scalar::one();
    let mut poly = vec![
        (zero.clone(), zero.clone()),
        (psi_max.clone(), zero.clone()),
        (psi_max.clone(), tau_max.clone()),
        (zero.clone(), tau_max.clone()),
    ];
    poly = clip_halfplane(&poly, &one, &-&one, &zero);
    poly = clip_halfplane(&poly, &-&one, &one, &(&c.ve / 2));
    let shift = &c.ve / 4 * (&c.ep - &c.curve());
    poly = clip_halfplane(&poly, &-&Scalar::ratio(1, 2), &one, &-&shift);
    Ok(poly)
}

pub fn region_psi_tau(c: &Cyclic, resolution: usize) -> Result<RegionPolyline> {
    let v = psi_tau_polygon(c)?;
    let flags = vec![false; v.len()];
    Ok(polyline("psi", "tau", v, flags, true, Zone::NonFtf, resolution))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::ratio(p, d)
    }

    #[test]
    fn pv_ep_at_ve8() {
        let r = region_pv_ep(&q(8, 1), 2, &q(6, 1)).unwrap();
        let ftf = &r[0];
        assert!(ftf.points.contains(&(q(3, 1), q(3, 1))));
        assert!(ftf.points.contains(&(q(6, 1), q(9, 2))));
        assert!(ftf.points.contains(&(q(4, 1), q(3, 1))));
        let dashed = r.last().unwrap();
        assert!(dashed.points.iter().all(|(x, y)| x == y));
    }

    #[test]
    fn ve4_collapses() {
        let r = region_pv_ep(&q(4, 1), 2, &q(12, 1)).unwrap();
        assert!(r[0].points.iter().all(|(_, ep)| *ep == q(3, 1)));
        assert!(r[0].points.len() >= 2);
        for w in r[0].points.windows(2) {
            assert_ne!(w[0], w[1]);
        }
    }

    #[test]
    fn ve6_top() {
        let r = region_pv_ep(&q(6, 1), 5, &q(12, 1)).unwrap();
        assert!(r[0].points.contains(&(q(6, 1), q(4, 1))));
        assert!(r[0].points.contains(&(q(9, 2), q(3, 1))));
        assert_eq!(r[1].zone, Zone::NonFtf);
        assert!(region_pv_ep(&q(7, 2), 5, &q(12, 1)).is_err());
    }

    #[test]
    fn psi_tau_contains_dots() {
        let c = Cyclic::new(q(8, 1), q(4, 1), q(7, 2));
        let poly = psi_tau_polygon(&c).unwrap();
        assert!(polygon_contains(&poly, &(q(5, 2), q(6, 5))));
        assert!(polygon_contains(&poly, &(q(3, 1), q(9, 5))));
        assert!(!polygon_contains(&poly, &(q(1, 1), q(2, 1))));
        let c = Cyclic::new(q(4, 1), q(3, 1), q(36, 7));
        assert!(polygon_contains(&psi_tau_polygon(&c).unwrap(), &(q(2, 1), q(4, 3))));
    }

    #[test]
    fn clip_segment() {
        let seg = vec![(q(0, 1), q(0, 1)), (q(2, 1), q(0, 1))];
        let out = clip_halfplane(&seg, &-&q(1, 1), &q(0, 1), &q(1, 1));
        assert_eq!(out.len(), 2);
        assert!(out.contains(&(q(1, 1), q(0, 1))));
    }
}
