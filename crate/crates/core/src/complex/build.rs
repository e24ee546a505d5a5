//! Construction of the periodic cell complex from a fundamental domain.
//!
//! Everything is computed in lattice coordinates, where the lattice is `Z³`; incidence and
//! convexity are invariant under the linear change of coordinates.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::domain::FundamentalDomain;
use super::geom::{
    add, dot, floor3, int_vec, interiors_disjoint, on_segment, polygon_intersection, reduce, set_key, sub, Plane,
    Polytope, P3, Q,
};
use crate::error::{Error, Result};

/// A plate `z_a ∩ (z_b + shift)`, stored in the frame where cell `a` sits at its representative position.
#[derive(Debug, Clone, PartialEq)]
pub struct Plate {
    pub corners: Vec<P3>,
    /// Plane oriented outward from cell `a`.
    pub plane: Plane,
    pub cells: (usize, usize),
    pub shift: P3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub ends: [P3; 2],
    pub vertices: [usize; 2],
}

/// A point or segment positioned in some cell's frame, with its global id.
#[derive(Debug, Clone, PartialEq)]
pub struct Local<T> {
    pub at: T,
    pub id: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicComplex {
    pub domain: FundamentalDomain,
    /// Cells in lattice coordinates, bounding boxes anchored in `[0,1)³`.
    pub cells: Vec<Polytope>,
    /// `(j, t)`: cell `j` shifted by `t` meets the bounding box of cell `i`.
    pub neighbors: Vec<Vec<(usize, P3)>>,
    /// Canonical representatives in `[0,1)³`.
    pub vertices: Vec<P3>,
    pub edges: Vec<Edge>,
    pub plates: Vec<Plate>,
    /// Per cell: `(plate, t)` with the plate's corners at `corners + t` in the cell's frame.
    pub plate_refs: Vec<Vec<(usize, P3)>>,
    /// Per cell: distinct vertex positions inside the cell's bounding box.
    pub local_vertices: Vec<Vec<Local<P3>>>,
    /// Per cell: distinct edge positions inside the cell's bounding box.
    pub local_edges: Vec<Vec<Local<[P3; 2]>>>,
    /// Per cell and ridge: vertices in the ridge's relative interior.
    pub ridge_interiors: Vec<Vec<Vec<usize>>>,
    /// Per cell: the pieces its ridges are split into.
    pub ridge_pieces: Vec<Vec<Local<[P3; 2]>>>,
}

fn in_box(p: &P3, b: &(P3, P3)) -> bool {
    (0..3).all(|k| b.0[k] <= p[k] && p[k] <= b.1[k])
}

fn ceil(v: &Q) -> BigInt {
    v.ceil().to_integer()
}

fn floor(v: &Q) -> BigInt {
    v.floor().to_integer()
}

/// Integer shifts `t` with `box(b) + t` meeting `box(a)`.
fn overlapping_shifts(a: &(P3, P3), b: &(P3, P3)) -> Vec<P3> {
    let ranges: Vec<(i64, i64)> = (0..3)
        .map(|k| {
            let lo = ceil(&(&a.0[k] - &b.1[k]));
            let hi = floor(&(&a.1[k] - &b.0[k]));
            (i64::try_from(lo).expect("small"), i64::try_from(hi).expect("small"))
        })
        .collect();
    let mut out = Vec::new();
    for x in ranges[0].0..=ranges[0].1 {
        for y in ranges[1].0..=ranges[1].1 {
            for z in ranges[2].0..=ranges[2].1 {
                out.push(int_vec(&[x.into(), y.into(), z.into()]));
            }
        }
    }
    out
}

fn is_positive_shift(t: &P3) -> bool {
    t.iter().find(|c| !c.is_zero()).is_some_and(|c| *c > Q::zero())
}

impl PeriodicComplex {
    pub fn build(domain: &FundamentalDomain) -> Result<PeriodicComplex> {
        if domain.cells.is_empty() {
            return Err(Error::NotATessellation("no cells".into()));
        }
        let frac = domain.to_fractional()?;
        let mut cells = Vec::with_capacity(frac.len());
        // lattice translates of one shape share a hull
        let mut hulls: HashMap<Vec<P3>, Polytope> = HashMap::new();
        for pts in &frac {
            let least = pts
                .iter()
                .min()
                .ok_or_else(|| Error::NotATessellation("empty cell".into()))?;
            let mut key: Vec<P3> = pts.iter().map(|p| sub(p, least)).collect();
            key.sort();
            let p = match hulls.get(&key) {
                Some(p) => p.translated(least),
                None => {
                    let p = Polytope::from_points(&key)?;
                    hulls.insert(key, p.clone());
                    p.translated(least)
                }
            };
            let t = int_vec(&floor3(&p.bbox.0)).map(|c| -c);
            cells.push(p.translated(&t));
        }
        let total: Q = cells.iter().map(|c| c.volume.clone()).sum();
        if total != Q::one() {
            return Err(Error::NotATessellation(format!(
                "cell volumes sum to {} lattice volumes",
                crate::scalar::render_rational(&total)
            )));
        }

        let n = cells.len();
        let zero: P3 = [Q::zero(), Q::zero(), Q::zero()];
        let mut neighbors: Vec<Vec<(usize, P3)>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                for t in overlapping_shifts(&cells[i].bbox, &cells[j].bbox) {
                    if i == j && t == zero {
                        continue;
                    }
                    neighbors[i].push((j, t));
                }
            }
        }

        let mut plates: Vec<Plate> = Vec::new();
        let mut plate_refs: Vec<Vec<(usize, P3)>> = vec![Vec::new(); n];
        let mut plate_keys: HashSet<Vec<P3>> = HashSet::new();
        for i in 0..n {
            let by_plane: HashMap<Plane, usize> = cells[i]
                .facets
                .iter()
                .enumerate()
                .map(|(fi, f)| (f.plane.flipped(), fi))
                .collect();
            for (j, t) in &neighbors[i] {
                let (j, t) = (*j, t.clone());
                if j < i || (j == i && !is_positive_shift(&t)) {
                    continue;
                }
                // boxes meeting in at most a segment share no interior and no plate
                let (a, b) = (&cells[i].bbox, &cells[j].bbox);
                let flat = (0..3)
                    .filter(|&k| a.1[k] <= &b.0[k] + &t[k] || &b.1[k] + &t[k] <= a.0[k])
                    .count();
                if flat >= 2 {
                    continue;
                }
                let other = cells[j].translated(&t);
                if flat == 0 && !interiors_disjoint(&cells[i], &other) {
                    return Err(Error::NotATessellation(format!("cells {i} and {j} overlap")));
                }
                for (gi, g) in other.facets.iter().enumerate() {
                    let Some(&fi) = by_plane.get(&g.plane) else { continue };
                    let f = &cells[i].facets[fi];
                    let inter = polygon_intersection(&cells[i].facet_points(fi), &other.facet_points(gi), &f.plane);
                    if inter.len() < 3 {
                        continue;
                    }
                    let (key, _) = set_key(&inter);
                    if !plate_keys.insert(key) {
                        continue;
                    }
                    let pid = plates.len();
                    plate_refs[i].push((pid, zero.clone()));
                    plate_refs[j].push((pid, t.clone().map(|c| -c)));
                    plates.push(Plate {
                        corners: inter,
                        plane: f.plane.clone(),
                        cells: (i, j),
                        shift: t.clone(),
                    });
                }
            }
        }

        let mut vertex_ids: HashMap<P3, usize> = HashMap::new();
        let mut vertices: Vec<P3> = Vec::new();
        let mut intern = |p: &P3, vertices: &mut Vec<P3>| -> usize {
            let r = reduce(p);
            *vertex_ids.entry(r.clone()).or_insert_with(|| {
                vertices.push(r);
                vertices.len() - 1
            })
        };
        for c in &cells {
            for a in &c.apices {
                intern(a, &mut vertices);
            }
        }
        for p in &plates {
            for a in &p.corners {
                intern(a, &mut vertices);
            }
        }

        let mut local_vertices: Vec<Vec<Local<P3>>> = Vec::with_capacity(n);
        for i in 0..n {
            let bbox = &cells[i].bbox;
            let mut seen: HashSet<P3> = HashSet::new();
            let mut out = Vec::new();
            let mut offer = |p: P3, out: &mut Vec<Local<P3>>| {
                if in_box(&p, bbox) && seen.insert(p.clone()) {
                    let id = intern(&p, &mut vertices);
                    out.push(Local { at: p, id });
                }
            };
            for (j, t) in std::iter::once(&(i, zero.clone())).chain(&neighbors[i]) {
                for a in &cells[*j].apices {
                    offer(add(a, t), &mut out);
                }
                for (pid, s) in &plate_refs[*j] {
                    let shift = add(s, t);
                    for c in &plates[*pid].corners {
                        offer(add(c, &shift), &mut out);
                    }
                }
            }
            local_vertices.push(out);
        }

        let mut edge_ids: HashMap<Vec<P3>, usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut ridge_interiors = Vec::with_capacity(n);
        let mut ridge_pieces = Vec::with_capacity(n);
        for i in 0..n {
            let cell = &cells[i];
            let mut interiors = Vec::with_capacity(cell.ridges.len());
            let mut pieces = Vec::new();
            for &(a, b) in &cell.ridges {
                let (pa, pb) = (&cell.apices[a], &cell.apices[b]);
                let dir = sub(pb, pa);
                let rbox = (
                    [0, 1, 2].map(|k| pa[k].clone().min(pb[k].clone())),
                    [0, 1, 2].map(|k| pa[k].clone().max(pb[k].clone())),
                );
                let mut inner: Vec<(Q, &Local<P3>)> = local_vertices[i]
                    .iter()
                    .filter(|v| in_box(&v.at, &rbox) && on_segment(&v.at, pa, pb) == Some(true))
                    .map(|v| (dot(&sub(&v.at, pa), &dir), v))
                    .collect();
                inner.sort_by(|x, y| x.0.cmp(&y.0));
                interiors.push(inner.iter().map(|(_, v)| v.id).collect::<Vec<_>>());
                let mut chain: Vec<P3> = vec![pa.clone()];
                chain.extend(inner.iter().map(|(_, v)| v.at.clone()));
                chain.push(pb.clone());
                for w in chain.windows(2) {
                    let (key, _) = set_key(&[w[0].clone(), w[1].clone()]);
                    let id = *edge_ids.entry(key.clone()).or_insert_with(|| {
                        let ends = [key[0].clone(), key[1].clone()];
                        let vertices = [intern(&ends[0], &mut vertices), intern(&ends[1], &mut vertices)];
                        edges.push(Edge { ends, vertices });
                        edges.len() - 1
                    });
                    pieces.push(Local {
                        at: [w[0].clone(), w[1].clone()],
                        id,
                    });
                }
            }
            ridge_interiors.push(interiors);
            ridge_pieces.push(pieces);
        }

        let mut local_edges = Vec::with_capacity(n);
        for i in 0..n {
            let bbox = &cells[i].bbox;
            let mut seen: HashSet<[P3; 2]> = HashSet::new();
            let mut out = Vec::new();
            for (j, t) in std::iter::once(&(i, zero.clone())).chain(&neighbors[i]) {
                for piece in &ridge_pieces[*j] {
                    let at = [add(&piece.at[0], t), add(&piece.at[1], t)];
                    if !in_box(&at[0], bbox) || !in_box(&at[1], bbox) {
                        continue;
                    }
                    let mut sorted = at.clone();
                    sorted.sort();
                    if seen.insert(sorted) {
                        out.push(Local { at, id: piece.id });
                    }
                }
            }
            local_edges.push(out);
        }

        Ok(PeriodicComplex {
            domain: domain.clone(),
            cells,
            neighbors,
            vertices,
            edges,
            plates,
            plate_refs,
            local_vertices,
            local_edges,
            ridge_interiors,
            ridge_pieces,
        })
    }

    /// Lattice volume in Cartesian units.
    pub fn volume(&self) -> Q {
        self.domain.volume()
    }

    pub fn counts(&self) -> [usize; 4] {
        [
            self.vertices.len(),
            self.edges.len(),
            self.plates.len(),
            self.cells.len(),
        ]
    }
}
