//! Worked tessellation models as exact parameter tuples, with an end-to-end verifier.

use crate::error::{Error, Result};
use crate::feasibility::{classify, fundamental_curve};
use crate::params::{check_identities, derive, Class, TessParams, PARAM_NAMES};
use crate::scalar::Scalar;
use crate::transforms::{central_point, column, stratum, PlanarParams};

/// Parameter tuple in which any field may be unknown.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PartialParams {
    pub values: [Option<Scalar>; 8],
}

impl PartialParams {
    pub fn full(p: &TessParams) -> Self {
        PartialParams {
            values: p.values().map(|v| Some(v.clone())),
        }
    }

    pub fn cyclic(ve: Scalar, ep: Scalar, pv: Option<Scalar>) -> Self {
        PartialParams {
            values: [Some(Scalar::one()), Some(ve), Some(ep), pv, None, None, None, None],
        }
    }

    pub fn get(&self, name: &str) -> Option<&Scalar> {
        let i = PARAM_NAMES.iter().position(|n| *n == name)?;
        self.values[i].as_ref()
    }

    pub fn named(&self) -> Vec<(&'static str, Option<&Scalar>)> {
        PARAM_NAMES
            .iter()
            .copied()
            .zip(self.values.iter().map(|v| v.as_ref()))
            .collect()
    }

    pub fn to_params(&self) -> Option<TessParams> {
        let vals: Option<Vec<Scalar>> = self.values.iter().cloned().collect();
        TessParams::from_array(vals?.try_into().ok()?).ok()
    }
}

/// How an entry is produced from another model.
#[derive(Debug, Clone, PartialEq)]
pub enum Link {
    Stratum(PlanarParams),
    Column(PlanarParams),
    CentralPoint(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub params: PartialParams,
    pub ftf: bool,
    pub provenance: String,
    pub generator: Option<String>,
    pub link: Option<Link>,
    /// Sits exactly on `EP = 6(1 − 2/VE)`.
    pub on_curve: bool,
    pub notes: String,
}

impl CatalogEntry {
    pub fn is_complete(&self) -> bool {
        self.params.to_params().is_some()
    }
}

fn q(p: i64, d: i64) -> Scalar {
    Scalar::ratio(p, d)
}

fn t() -> Scalar {
    Scalar::pi_squared()
}

/// `a + b·π²` with integer coefficients.
fn lin(a: i64, b: i64) -> Scalar {
    &Scalar::int(a) + &(&t() * b)
}

struct Builder {
    entries: Vec<CatalogEntry>,
}

impl Builder {
    fn add(&mut self, id: &str, provenance: &str, params: PartialParams, ftf: bool) -> &mut CatalogEntry {
        self.entries.push(CatalogEntry {
            id: id.into(),
            params,
            ftf,
            provenance: provenance.into(),
            generator: None,
            link: None,
            on_curve: false,
            notes: String::new(),
        });
        self.entries.last_mut().unwrap()
    }

    fn full(&mut self, id: &str, provenance: &str, v: [Scalar; 7]) -> &mut CatalogEntry {
        let [ve, ep, pv, xi, kappa, psi, tau] = v;
        let p = TessParams::new(ve, ep, pv, xi, kappa, psi, tau).expect("catalog tuple");
        let ftf = p.is_ftf();
        self.add(id, provenance, PartialParams::full(&p), ftf)
    }

    fn ratios(&mut self, id: &str, provenance: &str, v: [(i64, i64); 7]) -> &mut CatalogEntry {
        self.full(id, provenance, v.map(|(a, b)| q(a, b)))
    }
}

fn ftf_tuple(ve: Scalar, ep: Scalar, pv: Scalar) -> [Scalar; 7] {
    [
        ve,
        ep,
        pv,
        Scalar::zero(),
        Scalar::zero(),
        Scalar::zero(),
        Scalar::zero(),
    ]
}

fn planar(ve: Scalar, phi: Scalar, ev_pi: Scalar, ve2: Scalar) -> PlanarParams {
    PlanarParams::new(ve, phi).with_moments(ev_pi, ve2)
}

/// Cyclic triple of the spoked-cube family.
pub fn spoke_cube_params(k: i64, n: i64) -> TessParams {
    let d = 2 + k + 2 * n;
    let ve = q(2 * (12 + 5 * k + 12 * n + 4 * k * n), d);
    let ep = q(8 * (7 + 3 * k) * (1 + n), 12 + 5 * k + 12 * n + 4 * k * n);
    let pv = q(4 * (7 + 3 * k), 9 + 4 * k);
    TessParams::cyclic(ve, ep, pv).expect("positive")
}

/// Cyclic triple of the cored-cube family.
pub fn core_prism_cube_params(k: i64, n: i64) -> TessParams {
    let ve = q(2 * (15 + 8 * k + 16 * n + 8 * k * n), 5 + 4 * k + 6 * n + 4 * k * n);
    let ep = q(12 * (5 + 2 * k) * (1 + n), 15 + 8 * k + 16 * n + 8 * k * n);
    let pv = q(12 * (5 + 2 * k) * (1 + n), 15 + 5 * k + 14 * n + 4 * k * n);
    TessParams::cyclic(ve, ep, pv).expect("positive")
}

/// Closed-form vertex adjacencies `(μ_VP, μ_VZ)` of the spoked-cube family.
pub fn spoke_cube_vertex_adjacency(k: i64, n: i64) -> (Scalar, Scalar) {
    let d = 2 + k + 2 * n;
    (q(8 * (7 + 3 * k) * (1 + n), d), q(4 * (9 + 4 * k) * (1 + n), d))
}

/// Closed-form cell adjacencies `(μ_ZV, μ_ZE, μ_ZP)` of the cored-cube family.
pub fn core_prism_cube_cell_adjacency(k: i64, n: i64) -> (Scalar, Scalar, Scalar) {
    let d = 5 + k + 4 * n;
    (
        q(8 * (5 + 2 * k) * (1 + n), d),
        q(12 * (5 + 2 * k) * (1 + n), d),
        q(2 * (15 + 5 * k + 14 * n + 4 * k * n), d),
    )
}

const SPOKE_INSTANCES: [(i64, i64); 3] = [(2, 0), (0, 0), (2, 1)];
const CORE_INSTANCES: [(i64, i64); 1] = [(3, 3)];

fn family_entry(id: &str) -> Option<CatalogEntry> {
    let (base, rest) = id.split_once('(')?;
    let inner = rest.strip_suffix(')')?;
    let mut k = None;
    let mut n = None;
    for part in inner.split(',') {
        let (key, val) = part.trim().split_once('=')?;
        let v: i64 = val.trim().parse().ok()?;
        if v < 0 {
            return None;
        }
        match key.trim() {
            "k" => k = Some(v),
            "n" => n = Some(v),
            _ => return None,
        }
    }
    let (k, n) = (k?, n?);
    let canonical = format!("{base}(k={k},n={n})");
    let (params, generator, provenance) = match base {
        "ex11_spoke_cube" => (
            spoke_cube_params(k, n),
            "spoke_cube",
            "cube with an axial spine of k interior vertices and 4(n+1) boundary vertices per square face",
        ),
        "ex12_core_prism_cube" => (
            core_prism_cube_params(k, n),
            "core_prism_cube",
            "cube with a central core of k+1 prisms with 4(n+1)-gon plates",
        ),
        _ => return None,
    };
    Some(CatalogEntry {
        id: canonical,
        params: PartialParams::full(&params),
        ftf: true,
        provenance: provenance.into(),
        generator: Some(format!("{generator}(k={k},n={n})")),
        link: None,
        on_curve: base == "ex12_core_prism_cube",
        notes: "closed-form family in (k, n)".into(),
    })
}

fn fixed_entries() -> Vec<CatalogEntry> {
    let mut b = Builder { entries: Vec::new() };
    let voronoi_pv = &(&t() * 144) / &lin(35, 24);
    b.full(
        "ex01_poisson_voronoi",
        "Poisson-Voronoi tessellation",
        ftf_tuple(Scalar::int(4), Scalar::int(3), voronoi_pv.clone()),
    )
    .on_curve = true;
    b.full(
        "ex02_poisson_delaunay",
        "Poisson-Delaunay tessellation; all cells tetrahedra",
        ftf_tuple(&Scalar::int(2) + &(&t() * 48 / 35), voronoi_pv, Scalar::int(3)),
    )
    .on_curve = true;
    b.ratios(
        "ex03_poisson_planes",
        "Poisson plane tessellation",
        [(6, 1), (4, 1), (4, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
    );
    b.ratios(
        "ex04_stit",
        "STIT tessellation",
        [(4, 1), (3, 1), (36, 7), (1, 1), (2, 3), (2, 1), (4, 3)],
    )
    .on_curve = true;
    b.ratios(
        "ex05_cubic_lattice",
        "lattice of unit cubes",
        [(6, 1), (4, 1), (4, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
    )
    .generator = Some("cubic_lattice".into());

    let e = b.ratios(
        "ex06a_triangular_prisms",
        "columns of triangular prisms with unaligned end facets",
        [(4, 1), (9, 2), (27, 4), (1, 2), (0, 1), (5, 1), (4, 1)],
    );
    e.link = Some(Link::Column(planar(q(6, 1), q(0, 1), q(0, 1), q(36, 1))));
    e.generator = Some("prism_columns(triangle)".into());
    let e = b.ratios(
        "ex06b_quadrilateral_prisms",
        "columns of square prisms with unaligned end facets",
        [(4, 1), (7, 2), (28, 5), (1, 2), (0, 1), (3, 1), (2, 1)],
    );
    e.link = Some(Link::Column(planar(q(4, 1), q(0, 1), q(0, 1), q(16, 1))));
    e.generator = Some("prism_columns(square)".into());
    b.ratios(
        "ex06c_pentagonal_prisms",
        "columns over the Cairo pentagon tiling",
        [(4, 1), (16, 5), (16, 3), (1, 2), (0, 1), (12, 5), (7, 5)],
    )
    .link = Some(Link::Column(planar(q(10, 3), q(0, 1), q(0, 1), q(34, 3))));
    let e = b.ratios(
        "ex06d_hexagonal_prisms",
        "columns of hexagonal prisms with unaligned end facets",
        [(4, 1), (3, 1), (36, 7), (1, 2), (0, 1), (2, 1), (1, 1)],
    );
    e.link = Some(Link::Column(planar(q(3, 1), q(0, 1), q(0, 1), q(9, 1))));
    e.on_curve = true;

    let e = b.ratios(
        "ex07_divided_cube",
        "2x2x2 cube blocks, each cube split into three pyramids about the block centre",
        // one vertex per cube and five plates per pyramid force (11, 48/11, 16/5)
        [(11, 1), (48, 11), (16, 5), (0, 1), (0, 1), (0, 1), (0, 1)],
    );
    e.generator = Some("divided_cube".into());
    e.notes = "commonly quoted as (8, 4, 16/5); the counts of this construction give the stored values".into();

    let den = &lin(35, 24) * &lin(35, 32);
    b.full(
        "ex08_divided_delaunay",
        "Delaunay cells split in two through a random ridge",
        [
            &(&lin(5, 16) * 14) / &lin(35, 32),
            &(&(&t() * 72) * &lin(175, 176)) / &(&(&lin(5, 16) * &lin(35, 24)) * 7),
            &(&lin(175, 176) * 9) / &(&lin(35, 24) * 16),
            &(&t() * 64) / &(&lin(5, 16) * 7),
            Scalar::zero(),
            &(&(&t() * 8) * &lin(35, 528)) / &den,
            &(&(&t() * 32) * &lin(-35, 102)) / &den,
        ],
    );

    let strata = [
        (
            "ex09a_stratum_voronoi",
            "strata over planar Poisson-Voronoi",
            (3, 0),
            [(5, 1), (18, 5), (9, 2), (0, 1), (0, 1), (0, 1), (0, 1)],
        ),
        (
            "ex09b_stratum_hexagonal",
            "strata over the hexagonal tiling",
            (6, 0),
            [(8, 1), (9, 2), (18, 5), (0, 1), (0, 1), (0, 1), (0, 1)],
        ),
        (
            "ex09c_stratum_square",
            "strata over the square tiling",
            (4, 0),
            [(6, 1), (4, 1), (4, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        ),
        (
            "ex09d_stratum_stit",
            "strata over planar STIT",
            (3, 1),
            [(5, 1), (18, 5), (9, 2), (2, 5), (0, 1), (2, 1), (1, 1)],
        ),
    ];
    for (id, prov, (ve, phi), v) in strata {
        let e = b.ratios(id, prov, v);
        e.link = Some(Link::Stratum(PlanarParams::new(q(ve, 1), q(phi, 1))));
        e.on_curve = true;
    }

    let e = b.add(
        "ex10a_central_voronoi",
        "central-point construction on Poisson-Voronoi",
        PartialParams::cyclic(
            &(&t() * 288) / &lin(35, 24),
            Scalar::int(4),
            Some(&(&t() * 576) / &(&lin(5, 24) * 7)),
        ),
        true,
    );
    e.link = Some(Link::CentralPoint("ex01_poisson_voronoi".into()));
    e.notes = "interior values not published; facet-to-facet by construction".into();
    let e = b.add(
        "ex10b_central_delaunay",
        "central-point construction on Poisson-Delaunay",
        PartialParams::cyclic(
            &(&lin(7, 24) * 10) / &lin(35, 24),
            &(&t() * 576) / &(&lin(7, 24) * 5),
            Some(Scalar::int(3)),
        ),
        true,
    );
    e.link = Some(Link::CentralPoint("ex02_poisson_delaunay".into()));
    e.on_curve = true;
    e.notes = "interior values not published; facet-to-facet by construction".into();
    b.ratios(
        "ex10c_central_stit",
        "central-point construction on STIT",
        [(40, 7), (21, 5), (84, 19), (3, 5), (4, 7), (24, 7), (20, 7)],
    )
    .link = Some(Link::CentralPoint("ex04_stit".into()));
    b.ratios(
        "ex10d_central_cubic",
        "central-point construction on the cube lattice",
        [(11, 1), (48, 11), (16, 5), (0, 1), (0, 1), (0, 1), (0, 1)],
    )
    .link = Some(Link::CentralPoint("ex05_cubic_lattice".into()));
    b.ratios(
        "ex10e_central_triangular_prisms",
        "central-point construction on triangular prism columns",
        [(6, 1), (23, 4), (69, 13), (1, 4), (0, 1), (15, 2), (27, 4)],
    )
    .link = Some(Link::CentralPoint("ex06a_triangular_prisms".into()));

    b.ratios(
        "ex14_spoked_columns",
        "columns over squares with an n=8 spoked centre vertex",
        [(4, 1), (431, 66), (431, 41), (19, 22), (16, 33), (299, 33), (274, 33)],
    )
    .link = Some(Link::Column(PlanarParams::spoked_squares(8)));
    b.ratios(
        "ex15_split_prism",
        "cubes halved into triangular prisms with alternating orientation",
        [(10, 1), (4, 1), (10, 3), (2, 5), (0, 1), (0, 1), (0, 1)],
    )
    .generator = Some("split_prism".into());
    b.ratios(
        "ex16_parallel_pyramids",
        "cubes split into three pyramids along parallel diagonals",
        [(14, 1), (27, 7), (3, 1), (3, 7), (0, 1), (0, 1), (0, 1)],
    )
    .generator = Some("parallel_pyramids".into());
    b.ratios(
        "ex17_stratum_prism",
        "triangular prism strata with alternate strata split into three prisms",
        [(22, 3), (42, 11), (7, 2), (6, 11), (2, 3), (0, 1), (0, 1)],
    )
    .generator = Some("stratum_prism".into());

    b.add(
        "ex18a_rhombic_dodecahedra",
        "face-to-face rhombic dodecahedron tiling",
        PartialParams::cyclic(q(16, 3), q(3, 1), None),
        true,
    )
    .notes = "only (mu_VE, mu_EP) recorded".into();
    for (id, ve) in [
        ("ex18b_cut_rhombic_dodecahedra", 8),
        ("ex18c_cut_rhombic_dodecahedra", 10),
    ] {
        let e = b.add(
            id,
            "rhombic dodecahedra cut into convex pieces without hitting ridge interiors",
            PartialParams::cyclic(q(ve, 1), q(3, 1), None),
            false,
        );
        e.notes = "only (mu_VE, mu_EP) recorded".into();
    }
    b.entries
}

/// All entry ids, family members at their listed instances included.
pub fn list() -> Vec<String> {
    let mut ids: Vec<String> = fixed_entries().into_iter().map(|e| e.id).collect();
    let pos = ids.iter().position(|id| id.starts_with("ex14")).unwrap_or(ids.len());
    let mut family: Vec<String> = SPOKE_INSTANCES
        .iter()
        .map(|(k, n)| format!("ex11_spoke_cube(k={k},n={n})"))
        .chain(
            CORE_INSTANCES
                .iter()
                .map(|(k, n)| format!("ex12_core_prism_cube(k={k},n={n})")),
        )
        .collect();
    family.reverse();
    for id in family {
        ids.insert(pos, id);
    }
    ids
}

pub fn entries() -> Vec<CatalogEntry> {
    list().iter().map(|id| get(id).expect("listed")).collect()
}

pub fn get(id: &str) -> Result<CatalogEntry> {
    let id = id.trim();
    if let Some(e) = fixed_entries().into_iter().find(|e| e.id == id) {
        return Ok(e);
    }
    family_entry(&id.replace(' ', "")).ok_or_else(|| Error::UnknownEntry(id.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogCheck {
    pub entry: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CatalogReport {
    pub checks: Vec<CatalogCheck>,
}

impl CatalogReport {
    pub fn failures(&self) -> Vec<&CatalogCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, entry: &str, check: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CatalogCheck {
            entry: entry.into(),
            check: check.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Compares the known fields of `stored` with `produced`.
fn matches_known(stored: &PartialParams, produced: &TessParams) -> (bool, String) {
    let mut diffs = Vec::new();
    for ((name, s), p) in stored.named().into_iter().zip(produced.values()).skip(1) {
        if let Some(s) = s {
            if s != p {
                diffs.push(format!("{name}: stored {s}, produced {p}"));
            }
        }
    }
    (diffs.is_empty(), diffs.join("; "))
}

fn verify_entry(e: &CatalogEntry, report: &mut CatalogReport) {
    let id = e.id.as_str();
    let ve = e.params.get("mu_VE");
    let ep = e.params.get("mu_EP");
    if let (Some(ve), Some(ep)) = (ve, ep) {
        let curve = fundamental_curve(ve);
        if e.on_curve {
            report.push(
                id,
                "on_fundamental_curve",
                *ep == curve,
                format!("EP = {ep}, curve = {curve}"),
            );
        }
        if e.ftf {
            report.push(
                id,
                "ftf_below_curve",
                ep.le(&curve),
                format!("EP = {ep}, curve = {curve}"),
            );
        }
        if let Some(tau) = e.params.get("tau") {
            if ep.gt(&curve) {
                report.push(id, "above_curve_has_tau", tau.signum() > 0, format!("tau = {tau}"));
            }
        }
    }
    if e.ftf {
        let interior_zero = ["xi", "kappa", "psi", "tau"]
            .iter()
            .all(|n| e.params.get(n).is_none_or(|v| v.is_zero()));
        report.push(id, "ftf_interior_zero", interior_zero, "");
    }
    if let Some(p) = e.params.to_params() {
        match classify(&p) {
            Ok(r) => {
                let bad: Vec<String> = r.violations().iter().map(|b| b.name.to_string()).collect();
                report.push(id, "feasible", r.feasible, bad.join(", "));
            }
            Err(err) => report.push(id, "feasible", false, err.to_string()),
        }
        match derive(&p) {
            Ok(s) => {
                let bad: Vec<String> = check_identities(&s)
                    .into_iter()
                    .filter(|r| !r.holds)
                    .map(|r| r.name)
                    .collect();
                report.push(id, "identities", bad.is_empty(), bad.join(", "));
                verify_family(e, &s, report);
            }
            Err(err) => report.push(id, "identities", false, err.to_string()),
        }
    }
    if let Some(link) = &e.link {
        let produced = match link {
            Link::Stratum(pl) => stratum(pl),
            Link::Column(pl) => column(pl),
            Link::CentralPoint(src) => get(src).and_then(|s| {
                s.params
                    .to_params()
                    .ok_or_else(|| Error::InvalidParams(format!("{src} is partial")))
                    .and_then(|p| central_point(&p))
            }),
        };
        match produced {
            Ok(p) => {
                let (ok, detail) = matches_known(&e.params, &p);
                let ftf_ok = p.is_ftf() == e.ftf;
                report.push(id, "transform_reproduces", ok && ftf_ok, detail);
            }
            Err(err) => report.push(id, "transform_reproduces", false, err.to_string()),
        }
    }
}

fn family_kn(id: &str) -> Option<(i64, i64)> {
    let inner = id.split_once('(')?.1.strip_suffix(')')?;
    let mut it = inner
        .split(',')
        .map(|s| s.split_once('=').and_then(|(_, v)| v.parse::<i64>().ok()));
    Some((it.next()??, it.next()??))
}

fn verify_family(e: &CatalogEntry, s: &crate::params::DerivedSummary, report: &mut CatalogReport) {
    let Some((k, n)) = family_kn(&e.id) else { return };
    if e.id.starts_with("ex11") {
        let (vp, vz) = spoke_cube_vertex_adjacency(k, n);
        let ok = *s.mu(Class::V, Class::P) == vp && *s.mu(Class::V, Class::Z) == vz;
        report.push(
            &e.id,
            "closed_form_adjacency",
            ok,
            format!(
                "mu_VP = {}, mu_VZ = {}",
                s.mu(Class::V, Class::P),
                s.mu(Class::V, Class::Z)
            ),
        );
    } else if e.id.starts_with("ex12") {
        let (zv, ze, zp) = core_prism_cube_cell_adjacency(k, n);
        let ok = *s.mu(Class::Z, Class::V) == zv && *s.mu(Class::Z, Class::E) == ze && *s.mu(Class::Z, Class::P) == zp;
        report.push(&e.id, "closed_form_adjacency", ok, "");
    }
}

pub fn verify_catalog() -> CatalogReport {
    let mut report = CatalogReport::default();
    for e in entries() {
        verify_entry(&e, &mut report);
    }
    report
}
