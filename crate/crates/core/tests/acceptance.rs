//! Acceptance suite: one verdict line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tesstopo::catalog::{
    self, core_prism_cube_cell_adjacency, core_prism_cube_params, spoke_cube_params, spoke_cube_vertex_adjacency,
};
use tesstopo::complex::{self, generators, measure, validate_measured, FundamentalDomain, MeasuredParams};
use tesstopo::feasibility::{
    classify, kappa_xi_region, psi_tau_polygon, sample_cyclic, sample_feasible, tau_interval, BoundName, Cyclic,
    RegionShape, XiLines,
};
use tesstopo::params::identity_violations;
use tesstopo::transforms::{
    central_point, column, iterate_central_point, mixture, mixture_curve, stratum, MixtureComponent, MixtureCurve,
    PlanarParams,
};
use tesstopo::{check_identities, derive, Class, Scalar, TessParams};

type Outcome = Result<String, String>;

const SAMPLES: usize = 10_000;

const GENERATORS: [&str; 7] = [
    "cubic_lattice",
    "divided_cube",
    "parallel_pyramids",
    "split_prism",
    "prism_columns(square)",
    "prism_columns(triangle)",
    "stratum_prism",
];

const FAMILIES: [&str; 4] = [
    "spoke_cube(k=0,n=0)",
    "spoke_cube(k=2,n=0)",
    "spoke_cube(k=2,n=1)",
    "core_prism_cube(k=3,n=3)",
];

fn q(p: i64, d: i64) -> Scalar {
    Scalar::ratio(p, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(a: &Scalar, b: &Scalar) -> bool {
    a.compare(b).is_eq()
}

fn catalog_params(id: &str) -> TessParams {
    catalog::get(id).unwrap().params.to_params().unwrap()
}

/// All seven scale-free values equal exactly.
fn same_tuple(label: &str, got: &TessParams, want: &TessParams) -> Result<(), String> {
    for ((name, g), (_, w)) in got.named().into_iter().zip(want.named()).skip(1) {
        ensure(same(g, w), || {
            format!("{label}: {name} = {} expected {}", g.render(), w.render())
        })?;
    }
    Ok(())
}

fn measured(spec: &str) -> Result<MeasuredParams, String> {
    let c = complex::generate(spec).map_err(|e| format!("{spec}: {e}"))?;
    Ok(measure(&c))
}

fn c1_table_algebra() -> Outcome {
    let s = derive(&catalog_params("ex05_cubic_lattice")).map_err(|e| e.to_string())?;
    use Class::*;
    for (name, got, want) in [
        ("lambda_E", s.lambda(E), 3),
        ("lambda_P", s.lambda(P), 3),
        ("lambda_Z", s.lambda(Z), 1),
        ("mu_ZV", s.mu(Z, V), 8),
        ("mu_ZE", s.mu(Z, E), 12),
        ("mu_ZP", s.mu(Z, P), 6),
    ] {
        ensure(same(got, &Scalar::int(want)), || {
            format!("cubic {name} = {}", got.render())
        })?;
    }
    let samples = sample_feasible(SAMPLES, 1);
    for p in &samples {
        let s = derive(p).map_err(|e| e.to_string())?;
        for r in check_identities(&s) {
            let relevant = r.name.starts_with("euler_intensity")
                || r.name == "euler_vertex"
                || r.name == "euler_cell"
                || r.name.starts_with("symmetry");
            if relevant {
                ensure(r.residual.is_zero(), || {
                    format!("{} residual {} at {:?}", r.name, r.residual.render(), p.named())
                })?;
            }
        }
    }
    Ok(format!("{} sampled tuples", samples.len()))
}

fn c2_catalog_feasibility() -> Outcome {
    let mut n = 0;
    for e in catalog::entries() {
        let Some(p) = e.params.to_params() else { continue };
        if e.id.starts_with("ex18") {
            continue;
        }
        let r = classify(&p).map_err(|err| format!("{}: {err}", e.id))?;
        ensure(r.feasible, || format!("{} infeasible: {:?}", e.id, r.violations()))?;
        n += 1;
    }
    let r1 = classify(&catalog_params("ex01_poisson_voronoi")).map_err(|e| e.to_string())?;
    ensure(r1.boundary_flags.contains(&BoundName::EpFtfMax), || {
        format!("ex01 flags {:?}", r1.boundary_flags)
    })?;
    let r16 = classify(&catalog_params("ex16_parallel_pyramids")).map_err(|e| e.to_string())?;
    ensure(r16.boundary_flags.contains(&BoundName::PvMin), || {
        format!("ex16 flags {:?}", r16.boundary_flags)
    })?;
    Ok(format!("{n} complete entries feasible"))
}

fn c3_transform_goldens() -> Outcome {
    let err = |e: tesstopo::Error| e.to_string();
    same_tuple(
        "stratum(3,0)",
        &stratum(&PlanarParams::new(q(3, 1), q(0, 1))).map_err(err)?,
        &catalog_params("ex09a_stratum_voronoi"),
    )?;
    same_tuple(
        "stratum(3,1)",
        &stratum(&PlanarParams::new(q(3, 1), q(1, 1))).map_err(err)?,
        &catalog_params("ex09d_stratum_stit"),
    )?;
    let square = PlanarParams::new(q(4, 1), q(0, 1)).with_moments(q(0, 1), q(16, 1));
    same_tuple(
        "column(square)",
        &column(&square).map_err(err)?,
        &catalog_params("ex06b_quadrilateral_prisms"),
    )?;
    // Cairo pentagonal tiling: two thirds of vertices of degree 3, one third of degree 4
    let cairo = PlanarParams::new(q(10, 3), q(0, 1)).with_moments(q(0, 1), q(34, 3));
    same_tuple(
        "column(cairo)",
        &column(&cairo).map_err(err)?,
        &catalog_params("ex06c_pentagonal_prisms"),
    )?;
    let spoked = column(&PlanarParams::spoked_squares(8)).map_err(err)?;
    ensure(same(&spoked.mu_ep, &q(431, 66)), || {
        format!("column(spoked n=8) EP = {}", spoked.mu_ep.render())
    })?;
    same_tuple(
        "central_point(cubic)",
        &central_point(&catalog_params("ex05_cubic_lattice")).map_err(err)?,
        &catalog_params("ex10d_central_cubic"),
    )?;
    same_tuple(
        "central_point(stit)",
        &central_point(&catalog_params("ex04_stit")).map_err(err)?,
        &catalog_params("ex10c_central_stit"),
    )?;
    same_tuple(
        "central_point(ex6a)",
        &central_point(&catalog_params("ex06a_triangular_prisms")).map_err(err)?,
        &catalog_params("ex10e_central_triangular_prisms"),
    )?;
    Ok("8 goldens exact".into())
}

fn c4_mixture_closure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut draw = |lo: i64, hi: i64, den: i64| -> Scalar { q(rng.random_range(lo * den..=hi * den), den) };
    let on_curve = |ve: Scalar, pv_frac: Scalar| -> TessParams {
        let ep = tesstopo::feasibility::fundamental_curve(&ve);
        let c = Cyclic::new(ve.clone(), ep.clone(), Scalar::int(3));
        let pv = &Scalar::int(3) + &(&(&c.pv_upper() - 3) * &pv_frac);
        TessParams::cyclic(ve, ep, pv).unwrap()
    };
    for i in 0..100 {
        let a = on_curve(draw(4, 12, 7), draw(0, 1, 9) * q(9, 10));
        let mut b = on_curve(draw(4, 12, 11), draw(0, 1, 5) * q(9, 10));
        if same(&a.mu_ve, &b.mu_ve) {
            b = on_curve(&b.mu_ve + 1, q(1, 2));
        }
        let a = a.with_lambda(draw(1, 5, 3)).unwrap();
        let b = b.with_lambda(draw(1, 5, 4)).unwrap();
        let share = draw(0, 1, 13).min(q(12, 13)).max(q(1, 13));
        let m = mixture(&[
            MixtureComponent {
                params: a.clone(),
                share: share.clone(),
            },
            MixtureComponent {
                params: b.clone(),
                share: &Scalar::one() - &share,
            },
        ])
        .map_err(|e| format!("pair {i}: {e}"))?;
        let curve = tesstopo::feasibility::fundamental_curve(&m.mu_ve);
        ensure(same(&m.mu_ep, &curve), || {
            format!("pair {i}: mixture EP {} off curve {}", m.mu_ep.render(), curve.render())
        })?;
        match mixture_curve(&a, &b) {
            MixtureCurve::Curve { a: ca, b: cb } => {
                ensure(same(&ca, &Scalar::int(6)) && same(&cb, &Scalar::int(12)), || {
                    format!("pair {i}: (A,B) = ({}, {})", ca.render(), cb.render())
                })?
            }
            other => return Err(format!("pair {i}: {other:?}")),
        }
    }
    Ok("100 pairs".into())
}

fn c5_central_iteration() -> Outcome {
    let start = catalog_params("ex06a_triangular_prisms");
    let steps = iterate_central_point(&start, 6).map_err(|e| e.to_string())?;
    let dist = |p: &TessParams| {
        let dv = &p.mu_ve - 8;
        let de = &p.mu_ep - &q(9, 2);
        &(&dv * &dv) + &(&de * &de)
    };
    let mut prev = dist(&start);
    for (i, p) in steps.iter().enumerate() {
        let d = dist(p);
        ensure(d.lt(&prev), || {
            format!(
                "step {}: distance {} not below {}",
                i + 1,
                d.to_decimal(20),
                prev.to_decimal(20)
            )
        })?;
        prev = d;
    }
    Ok(format!("final squared distance {}", prev.to_decimal(6)))
}

fn c6_engine_oracle() -> Outcome {
    for spec in GENERATORS {
        let g: generators::Generator = spec.parse().map_err(|e: tesstopo::Error| e.to_string())?;
        let m = measured(spec)?;
        let id = generators::catalog_id(&g).ok_or_else(|| format!("{spec} has no catalog entry"))?;
        same_tuple(spec, &m.params, &catalog_params(&id))?;
    }
    use Class::*;
    for (k, n) in [(0, 0), (2, 0), (2, 1)] {
        let spec = format!("spoke_cube(k={k},n={n})");
        let m = measured(&spec)?;
        let want = spoke_cube_params(k, n);
        let (vp, vz) = spoke_cube_vertex_adjacency(k, n);
        for (name, got, exp) in [
            ("mu_VE", &m.params.mu_ve, &want.mu_ve),
            ("mu_EP", &m.params.mu_ep, &want.mu_ep),
            ("mu_PV", &m.params.mu_pv, &want.mu_pv),
            ("mu_VP", m.adjacency.get(V, P), &vp),
            ("mu_VZ", m.adjacency.get(V, Z), &vz),
        ] {
            ensure(same(got, exp), || {
                format!("{spec} {name} = {} expected {}", got.render(), exp.render())
            })?;
        }
    }
    let m = measured("core_prism_cube(k=3,n=3)")?;
    let (zv, ze, zp) = core_prism_cube_cell_adjacency(3, 3);
    for (name, got, exp) in [
        ("mu_ZV", m.adjacency.get(Z, V), &zv),
        ("mu_ZE", m.adjacency.get(Z, E), &ze),
        ("mu_ZP", m.adjacency.get(Z, P), &zp),
    ] {
        ensure(same(got, exp), || {
            format!(
                "core_prism_cube(3,3) {name} = {} expected {}",
                got.render(),
                exp.render()
            )
        })?;
    }
    same_tuple("core_prism_cube(3,3)", &m.params, &core_prism_cube_params(3, 3))?;
    Ok(format!("{} generators, 4 family instances", GENERATORS.len()))
}

fn c7_derived_closure() -> Outcome {
    for spec in GENERATORS.iter().chain(&FAMILIES) {
        let m = measured(spec)?;
        let d = derive(&m.params).map_err(|e| format!("{spec}: {e}"))?;
        let diffs = complex::compare_with_derived(&m, &d);
        ensure(diffs.is_empty(), || format!("{spec}: {}", diffs.join("; ")))?;
        ensure(identity_violations(&d).is_empty(), || {
            format!("{spec}: identities fail")
        })?;
    }
    let m = measured("prism_columns(square)")?;
    let got = [&m.nu0_z, &m.nu1_z, &m.nu2_z, &m.nu_fs, &m.nu_ps];
    let want = [8, 12, 6, 4, 4];
    for (g, w) in got.iter().zip(want) {
        ensure(same(g, &Scalar::int(w)), || {
            format!(
                "prism_columns(square) nu = {:?}",
                got.iter().map(|s| s.render()).collect::<Vec<_>>()
            )
        })?;
    }
    Ok(format!("{} complexes", GENERATORS.len() + FAMILIES.len()))
}

fn c8_vertex_invariants() -> Outcome {
    let mut vertices = 0;
    for spec in GENERATORS.iter().chain(&FAMILIES) {
        let c = complex::generate(spec).map_err(|e| e.to_string())?;
        let m = measure(&c);
        let stats = complex::vertex_stats(&c);
        for (i, s) in stats.iter().enumerate() {
            ensure(s.m_p1 <= s.m_z1, || {
                format!("{spec} vertex {i}: m_P1 {} > m_Z1 {}", s.m_p1, s.m_z1)
            })?;
            let floor = 2 * (s.m_z1 - s.m_p1) + 3 * s.m_z2;
            ensure(s.m_e_pi >= floor, || {
                format!("{spec} vertex {i}: m_Epi {} < {floor}", s.m_e_pi)
            })?;
        }
        vertices += stats.len();
        let n = stats.len() as i64;
        let mean = |f: fn(&complex::VertexStats) -> usize| q(stats.iter().map(f).sum::<usize>() as i64, n);
        // compare against the catalog, not just the measurement that produced them
        let g: generators::Generator = spec.parse().map_err(|e: tesstopo::Error| e.to_string())?;
        let reference = match g {
            generators::Generator::SpokeCube { k, n } => spoke_cube_params(i64::from(k), i64::from(n)),
            generators::Generator::CorePrismCube { k, n } => core_prism_cube_params(i64::from(k), i64::from(n)),
            _ => catalog_params(&generators::catalog_id(&g).unwrap()),
        };
        for (name, got, want) in [
            ("kappa", mean(|s| s.m_z2), &reference.kappa),
            ("psi", mean(|s| s.m_z1), &reference.psi),
            ("tau", mean(|s| s.m_p1), &reference.tau),
            ("xi*mu_VE", mean(|s| s.m_e_pi), &(&reference.xi * &reference.mu_ve)),
        ] {
            ensure(same(&got, want), || {
                format!("{spec}: mean {name} = {} expected {}", got.render(), want.render())
            })?;
        }
        ensure(validate_measured(&m).ok(), || format!("{spec}: validation failed"))?;
    }
    Ok(format!("{vertices} vertices"))
}

fn c9_bound_structure() -> Outcome {
    let samples = sample_feasible(SAMPLES, 9);
    let mut nonftf = 0;
    for p in &samples {
        let c = Cyclic::of(p);
        let lines = XiLines::new(&c, &p.psi, &p.tau);
        let (ck, cx) = lines.common_point();
        for (name, l) in [
            ("U1", &lines.u1),
            ("U2", &lines.u2),
            ("U3", &lines.u3),
            ("L2", &lines.l2),
        ] {
            ensure(same(&l.at(&ck), &cx), || {
                format!("{name} misses the common point at {:?}", p.named())
            })?;
        }
        let hi = lines.kappa_max();
        if !p.is_ftf() && hi.signum() >= 0 {
            nonftf += 1;
            for kappa in [Scalar::zero(), hi.clone()] {
                let u3 = lines.u3.at(&kappa);
                ensure(lines.u1.at(&kappa).ge(&u3) && lines.u2.at(&kappa).ge(&u3), || {
                    format!("U1/U2 below U3 at kappa {kappa}")
                })?;
                ensure(lines.l2.at(&kappa).le(&u3), || format!("L2 above U3 at kappa {kappa}"))?;
            }
        }
        let above = p.mu_ep.gt(&c.curve());
        ensure(!(above && p.xi.signum() > 0) || p.tau.signum() > 0, || {
            format!("tau = 0 above the curve at {:?}", p.named())
        })?;
        let at_cross = Cyclic::new(c.ve.clone(), c.ep.clone(), c.crossover());
        ensure(same(&at_cross.r1(), &at_cross.r2()), || {
            format!("R1 != R2 at the crossover for {:?}", p.named())
        })?;
    }
    Ok(format!("{} tuples, {nonftf} non-ftf", samples.len()))
}

fn c10_null_zone() -> Outcome {
    let c = Cyclic::new(q(24, 5), q(19, 5), q(7, 2));
    let r = kappa_xi_region(&c, &Scalar::zero(), &Scalar::zero()).map_err(|e| e.to_string())?;
    ensure(r.shape == RegionShape::Empty, || {
        format!("null-zone inputs gave {:?}", r.shape)
    })?;
    let dd = catalog_params("ex08_divided_delaunay");
    let r = kappa_xi_region(&Cyclic::of(&dd), &dd.psi, &dd.tau).map_err(|e| e.to_string())?;
    ensure(r.shape == RegionShape::Point, || {
        format!("divided Delaunay gave {:?}", r.shape)
    })?;
    let (k, x) = &r.vertices[0];
    let want = Scalar::pi2_linear(0, 64, 35, 112);
    let rel = (&(x - &want) / &want).to_f64().abs();
    ensure(k.is_zero() && rel <= 1e-12, || {
        format!("point ({}, {}) expected (0, {})", k.render(), x.render(), want.render())
    })?;
    Ok("empty region; single point".into())
}

fn c11_lemma7() -> Outcome {
    let samples = sample_cyclic(SAMPLES, 11);
    for c in &samples {
        let poly = psi_tau_polygon(c).map_err(|e| e.to_string())?;
        ensure(!poly.is_empty(), || format!("empty (psi, tau) polygon at {c:?}"))?;
        let psi = c.r1().min(c.r2());
        let iv = tau_interval(c, &psi).map_err(|e| e.to_string())?;
        ensure(!iv.empty, || {
            format!("empty tau interval at psi = min(R1, R2) for {c:?}")
        })?;
    }
    Ok(format!("{} cyclic triples", samples.len()))
}

/// Random rational matrix with determinant ±1 (product of shears and a swap).
fn random_unimodular_rational(rng: &mut ChaCha8Rng) -> [[Scalar; 3]; 3] {
    let mut m: [[Scalar; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| Scalar::int(i64::from(i == j))));
    for _ in 0..4 {
        let (i, j) = (rng.random_range(0..3), rng.random_range(0..3));
        if i == j {
            continue;
        }
        let f = q(rng.random_range(-3..=3), rng.random_range(1..=4));
        let row = m[j].clone();
        for (x, y) in m[i].iter_mut().zip(&row) {
            *x = &*x + &(&f * y);
        }
    }
    if rng.random_bool(0.5) {
        m.swap(0, 1);
    }
    m
}

fn rational_matrix(m: &[[Scalar; 3]; 3]) -> [complex::geom::P3; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].as_rational().unwrap().clone()))
}

fn c12_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    for spec in GENERATORS.iter().chain(&FAMILIES) {
        let g: generators::Generator = spec.parse().map_err(|e: tesstopo::Error| e.to_string())?;
        let base_domain = generators::domain(&g).map_err(|e| e.to_string())?;
        let base = measure(&complex::load(&base_domain).map_err(|e| e.to_string())?);
        let a = rational_matrix(&random_unimodular_rational(&mut rng));
        let b: complex::geom::P3 =
            std::array::from_fn(|_| complex::geom::q(rng.random_range(-5..=5), rng.random_range(1..=7)));
        let u = [[1, 1, 0], [0, 1, 0], [0, -1, 1]];
        let variants: Vec<(String, FundamentalDomain)> = vec![
            ("supercell 2x2x2".into(), base_domain.supercell([2, 2, 2])),
            ("affine".into(), base_domain.affine(&a, &b).map_err(|e| e.to_string())?),
            (
                "rebased affine".into(),
                base_domain
                    .affine(&a, &b)
                    .and_then(|d| d.rebase(&u))
                    .map_err(|e| e.to_string())?,
            ),
        ];
        for (label, d) in variants {
            let m = measure(&complex::load(&d).map_err(|e| format!("{spec} {label}: {e}"))?);
            for ((name, x), (_, y)) in m.params.named().into_iter().zip(base.params.named()) {
                ensure(same(x, y), || {
                    format!("{spec} {label}: {name} {} vs {}", x.render(), y.render())
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} transformed domains"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("table algebra", c1_table_algebra),
        ("catalog feasibility", c2_catalog_feasibility),
        ("transform goldens", c3_transform_goldens),
        ("mixture closure", c4_mixture_closure),
        ("central-point iteration", c5_central_iteration),
        ("engine oracle equivalence", c6_engine_oracle),
        ("derived-formula closure", c7_derived_closure),
        ("per-vertex invariants", c8_vertex_invariants),
        ("bound-system structure", c9_bound_structure),
        ("null-zone reproduction", c10_null_zone),
        ("region nonemptiness", c11_lemma7),
        ("supercell/affine invariance", c12_invariance),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2}. {name} ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
