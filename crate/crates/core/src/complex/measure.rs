//! Exact measurement of the parameters of a periodic complex.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::build::PeriodicComplex;
use super::geom::{locate_in_polygon, midpoint, PolygonPos};
use crate::feasibility::classify;
use crate::params::{check_identities, derive, Adjacency, Class, DerivedSummary, TessParams};
use crate::scalar::Scalar;

/// Per-vertex counts around one vertex of the complex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexStats {
    pub m_e: usize,
    pub m_e_pi: usize,
    /// 1 when the vertex lies in the relative interior of some facet.
    pub m_z2: usize,
    /// `(cell, ridge)` pairs with the vertex in the ridge's relative interior.
    pub m_z1: usize,
    /// `(plate, side)` pairs with the vertex in the side's relative interior.
    pub m_p1: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredParams {
    pub params: TessParams,
    pub lambda_e: Scalar,
    pub lambda_p: Scalar,
    pub lambda_z: Scalar,
    pub adjacency: Adjacency,
    pub lambda_z2: Scalar,
    pub lambda_z1: Scalar,
    pub lambda_z0: Scalar,
    pub lambda_z2_sides: Scalar,
    pub lambda_p_sides: Scalar,
    pub nu0_z: Scalar,
    pub nu1_z: Scalar,
    pub nu2_z: Scalar,
    pub nu_fs: Scalar,
    pub nu_ps: Scalar,
    /// Vertices, edges, plates, cells per fundamental domain.
    pub counts: [usize; 4],
    pub pi_edges: usize,
    pub vertex_stats: Vec<VertexStats>,
    /// Plates per edge.
    pub edge_plates: Vec<usize>,
    /// Vertices found in some plate's relative interior.
    pub plate_interior_vertices: Vec<usize>,
    /// Plate corners that are not apices of any cell.
    pub plate_corners_not_apices: Vec<usize>,
}

fn ratio(a: usize, b: usize) -> Scalar {
    Scalar::rational(BigRational::new(BigInt::from(a), BigInt::from(b)))
}

impl MeasuredParams {
    /// Measured value of every field `derive` produces, in the same order.
    pub fn named(&self) -> Vec<(String, Scalar)> {
        let lv = self.params.lambda_v.clone();
        let mu_vepi = &self.params.xi * &self.params.mu_ve;
        let pv = &self.params.mu_pv;
        let f2 = self.params.f(&Scalar::int(2));
        let f_pv = self.params.f(pv);
        let mut out: Vec<(String, Scalar)> = vec![
            ("f2".into(), f2),
            ("f_PV".into(), f_pv),
            ("lambda_V".into(), lv),
            ("lambda_E".into(), self.lambda_e.clone()),
            ("lambda_P".into(), self.lambda_p.clone()),
            ("lambda_Z".into(), self.lambda_z.clone()),
        ];
        out.extend(self.adjacency.named().into_iter().map(|(k, v)| (k, v.clone())));
        out.extend([
            ("lambda_Z2".into(), self.lambda_z2.clone()),
            ("lambda_Z1".into(), self.lambda_z1.clone()),
            ("lambda_Z0".into(), self.lambda_z0.clone()),
            ("lambda_Z2_sides".into(), self.lambda_z2_sides.clone()),
            ("lambda_P_sides".into(), self.lambda_p_sides.clone()),
            ("nu0_Z".into(), self.nu0_z.clone()),
            ("nu1_Z".into(), self.nu1_z.clone()),
            ("nu2_Z".into(), self.nu2_z.clone()),
            ("nu_FS".into(), self.nu_fs.clone()),
            ("nu_PS".into(), self.nu_ps.clone()),
            ("mu_VEpi".into(), mu_vepi),
        ]);
        out
    }
}

pub fn vertex_stats(c: &PeriodicComplex) -> Vec<VertexStats> {
    measure(c).vertex_stats
}

pub fn measure(c: &PeriodicComplex) -> MeasuredParams {
    let [nv, ne, np, nz] = c.counts();
    let vol = Scalar::rational(c.volume());
    let per_vol = |k: usize| &Scalar::int(k as i64) / &vol;

    let mut stats = vec![VertexStats::default(); nv];
    let mut pi = vec![false; ne];
    let mut inc_vz = 0usize;
    let mut inc_ez = 0usize;
    for (i, cell) in c.cells.iter().enumerate() {
        for v in &c.local_vertices[i] {
            if cell.contains(&v.at) {
                inc_vz += 1;
                if cell.facet_interior_of(&v.at).is_some() {
                    stats[v.id].m_z2 = 1;
                }
            }
        }
        for e in &c.local_edges[i] {
            if cell.contains(&e.at[0]) && cell.contains(&e.at[1]) {
                inc_ez += 1;
                if !pi[e.id] && cell.facet_interior_of(&midpoint(&e.at[0], &e.at[1])).is_some() {
                    pi[e.id] = true;
                }
            }
        }
        for inner in &c.ridge_interiors[i] {
            for &v in inner {
                stats[v].m_z1 += 1;
            }
        }
    }
    for (e, edge) in c.edges.iter().enumerate() {
        for &v in &edge.vertices {
            stats[v].m_e += 1;
            if pi[e] {
                stats[v].m_e_pi += 1;
            }
        }
    }

    let mut edge_plates = vec![0usize; ne];
    let mut inc_pv = 0usize;
    let mut inc_ep = 0usize;
    let mut plate_sides = 0usize;
    let mut plate_interior_vertices = Vec::new();
    for plate in &c.plates {
        let a = plate.cells.0;
        plate_sides += plate.corners.len();
        for v in &c.local_vertices[a] {
            match locate_in_polygon(&v.at, &plate.corners, &plate.plane) {
                PolygonPos::Outside => {}
                PolygonPos::Corner => inc_pv += 1,
                PolygonPos::Side(_) => {
                    inc_pv += 1;
                    stats[v.id].m_p1 += 1;
                }
                PolygonPos::Interior => {
                    inc_pv += 1;
                    plate_interior_vertices.push(v.id);
                }
            }
        }
        for e in &c.local_edges[a] {
            let inside = |p| locate_in_polygon(p, &plate.corners, &plate.plane) != PolygonPos::Outside;
            if inside(&e.at[0]) && inside(&e.at[1]) {
                inc_ep += 1;
                edge_plates[e.id] += 1;
            }
        }
    }

    let mut apex_flags = vec![false; nv];
    for (i, cell) in c.cells.iter().enumerate() {
        for v in &c.local_vertices[i] {
            if cell.apices.contains(&v.at) {
                apex_flags[v.id] = true;
            }
        }
    }
    let plate_corners_not_apices: Vec<usize> = (0..nv).filter(|&v| !apex_flags[v]).collect();

    let facets: usize = c.cells.iter().map(|z| z.facets.len()).sum();
    let ridges: usize = c.cells.iter().map(|z| z.ridges.len()).sum();
    let apices: usize = c.cells.iter().map(|z| z.apices.len()).sum();
    let facet_sides: usize = c
        .cells
        .iter()
        .flat_map(|z| z.facets.iter().map(|f| f.corners.len()))
        .sum();
    let pi_edges = pi.iter().filter(|x| **x).count();
    let hemi: usize = stats.iter().map(|s| s.m_z2).sum();
    let z1: usize = stats.iter().map(|s| s.m_z1).sum();
    let p1: usize = stats.iter().map(|s| s.m_p1).sum();

    let params = TessParams {
        lambda_v: per_vol(nv),
        mu_ve: ratio(2 * ne, nv),
        mu_ep: ratio(inc_ep, ne),
        mu_pv: ratio(inc_pv, np),
        xi: ratio(pi_edges, ne),
        kappa: ratio(hemi, nv),
        psi: ratio(z1, nv),
        tau: ratio(p1, nv),
    };
    let one = Scalar::one();
    let counts = [nv, ne, np, nz];
    let inc = |x: Class, y: Class| -> Scalar {
        use Class::*;
        let pairs = match (x, y) {
            (V, E) | (E, V) => 2 * ne,
            (V, P) | (P, V) => inc_pv,
            (V, Z) | (Z, V) => inc_vz,
            (E, P) | (P, E) => inc_ep,
            (E, Z) | (Z, E) => inc_ez,
            (P, Z) | (Z, P) => 2 * np,
            _ => return one.clone(),
        };
        ratio(pairs, counts[x.index()])
    };
    let adjacency = Adjacency(Class::ALL.map(|x| Class::ALL.map(|y| inc(x, y))));

    MeasuredParams {
        params,
        lambda_e: per_vol(ne),
        lambda_p: per_vol(np),
        lambda_z: per_vol(nz),
        adjacency,
        lambda_z2: per_vol(facets),
        lambda_z1: per_vol(ridges),
        lambda_z0: per_vol(apices),
        lambda_z2_sides: per_vol(facet_sides),
        lambda_p_sides: per_vol(plate_sides),
        nu0_z: ratio(apices, nz),
        nu1_z: ratio(ridges, nz),
        nu2_z: ratio(facets, nz),
        nu_fs: ratio(facet_sides, facets),
        nu_ps: ratio(plate_sides, np),
        counts,
        pi_edges,
        vertex_stats: stats,
        edge_plates,
        plate_interior_vertices,
        plate_corners_not_apices,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationItem {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub items: Vec<ValidationItem>,
    /// Informational findings that are not failures.
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> Vec<&ValidationItem> {
        self.items.iter().filter(|i| !i.passed).collect()
    }

    fn push(&mut self, check: &str, passed: bool, detail: impl Into<String>) {
        self.items.push(ValidationItem {
            check: check.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Checks the complex against its structural invariants and the parameter calculus.
pub fn validate(c: &PeriodicComplex) -> ValidationReport {
    let m = measure(c);
    validate_measured(&m)
}

pub fn validate_measured(m: &MeasuredParams) -> ValidationReport {
    let mut r = ValidationReport::default();
    r.push(
        "partition",
        true,
        "volumes sum to the lattice volume; interiors pairwise disjoint",
    );
    let low_degree: Vec<usize> = (0..m.vertex_stats.len())
        .filter(|&v| m.vertex_stats[v].m_e < 4)
        .collect();
    r.push(
        "vertex_degree_min",
        low_degree.is_empty(),
        format!("vertices with fewer than 4 edges: {low_degree:?}"),
    );
    let thin: Vec<usize> = (0..m.edge_plates.len()).filter(|&e| m.edge_plates[e] < 3).collect();
    r.push(
        "edge_plates_min",
        thin.is_empty(),
        format!("edges in fewer than 3 plates: {thin:?}"),
    );
    r.push(
        "plate_interior_empty",
        m.plate_interior_vertices.is_empty(),
        format!("vertices inside plates: {:?}", m.plate_interior_vertices),
    );
    let bad_lemma: Vec<usize> = (0..m.vertex_stats.len())
        .filter(|&v| m.vertex_stats[v].m_p1 > m.vertex_stats[v].m_z1)
        .collect();
    r.push(
        "side_interiors_within_ridge_interiors",
        bad_lemma.is_empty(),
        format!("{bad_lemma:?}"),
    );
    let bad_pi: Vec<usize> = (0..m.vertex_stats.len())
        .filter(|&v| {
            let s = &m.vertex_stats[v];
            let need = 2 * s.m_z1.saturating_sub(s.m_p1) + 3 * s.m_z2;
            s.m_e_pi < need
        })
        .collect();
    r.push("pi_edges_per_vertex", bad_pi.is_empty(), format!("{bad_pi:?}"));
    if !m.plate_corners_not_apices.is_empty() {
        r.notes.push(format!(
            "plate corners that are not cell apices: {:?}",
            m.plate_corners_not_apices
        ));
    }

    let p = &m.params;
    let euler = &(&(&p.lambda_v - &m.lambda_e) + &m.lambda_p) - &m.lambda_z;
    r.push("euler_intensity", euler.is_zero(), euler.render());
    let a = &m.adjacency;
    let ev = &(&(a.get(Class::V, Class::E) - a.get(Class::V, Class::P)) + a.get(Class::V, Class::Z)) - 2;
    r.push("euler_vertex", ev.is_zero(), ev.render());
    let ez = &(&(a.get(Class::Z, Class::V) - a.get(Class::Z, Class::E)) + a.get(Class::Z, Class::P)) - 2;
    r.push("euler_cell", ez.is_zero(), ez.render());
    let nu = &(&(&m.nu0_z - &m.nu1_z) + &m.nu2_z) - 2;
    r.push("euler_cell_faces", nu.is_zero(), nu.render());

    match derive(p) {
        Ok(d) => {
            let bad: Vec<String> = check_identities(&d)
                .into_iter()
                .filter(|x| !x.holds)
                .map(|x| x.name)
                .collect();
            r.push("identities", bad.is_empty(), bad.join(", "));
            let diffs = compare_with_derived(m, &d);
            r.push("derived_fields", diffs.is_empty(), diffs.join("; "));
        }
        Err(e) => r.push("derived_fields", false, e.to_string()),
    }
    match classify(p) {
        Ok(rep) => {
            let bad: Vec<String> = rep.violations().iter().map(|b| b.name.to_string()).collect();
            r.push("feasible", rep.feasible, bad.join(", "));
        }
        Err(e) => r.push("feasible", false, e.to_string()),
    }
    r
}

/// Fields where the measured value differs from the formula value.
pub fn compare_with_derived(m: &MeasuredParams, d: &DerivedSummary) -> Vec<String> {
    m.named()
        .into_iter()
        .zip(d.named())
        .filter(|((_, a), (_, b))| a != b)
        .map(|((k, a), (_, b))| format!("{k}: measured {a}, formula {b}"))
        .collect()
}
