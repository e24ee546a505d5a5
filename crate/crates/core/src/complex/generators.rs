//! Built-in periodic tessellations with exact rational coordinates.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use super::domain::FundamentalDomain;
use super::geom::{q, qi, reduce, P3, Q};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnBase {
    Square,
    Triangle,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    CubicLattice,
    DividedCube,
    ParallelPyramids,
    /// `aligned` puts the same diagonal plane in every cube.
    SplitPrism {
        aligned: bool,
    },
    PrismColumns {
        base: ColumnBase,
        offsets: Option<Vec<Q>>,
    },
    StratumPrism,
    SpokeCube {
        k: u32,
        n: u32,
    },
    CorePrismCube {
        k: u32,
        n: u32,
    },
}

pub const GENERATOR_NAMES: [&str; 8] = [
    "cubic_lattice",
    "divided_cube",
    "parallel_pyramids",
    "split_prism",
    "prism_columns",
    "stratum_prism",
    "spoke_cube",
    "core_prism_cube",
];

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidGeneratorParams(msg.into())
}

impl FromStr for Generator {
    type Err = Error;

    /// Accepts `name` or `name(args)`, e.g. `spoke_cube(k=2,n=0)`, `prism_columns(square)`,
    /// `prism_columns(square,offsets=0|1/4|1/2|3/4)`, `split_prism(aligned)`.
    fn from_str(s: &str) -> Result<Generator> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, args) = match s.split_once('(') {
            Some((n, rest)) => (
                n.to_string(),
                rest.strip_suffix(')')
                    .ok_or_else(|| bad("unbalanced parentheses"))?
                    .to_string(),
            ),
            None => (s.clone(), String::new()),
        };
        let args: Vec<&str> = args.split(',').filter(|a| !a.is_empty()).collect();
        let kv = |key: &str| -> Result<Option<u32>> {
            args.iter()
                .filter_map(|a| a.split_once('='))
                .find(|(k, _)| *k == key)
                .map(|(_, v)| {
                    v.parse::<u32>()
                        .map_err(|_| bad(format!("{key} must be a non-negative integer")))
                })
                .transpose()
        };
        let kn = || -> Result<(u32, u32)> {
            Ok((
                kv("k")?.ok_or_else(|| bad("missing k"))?,
                kv("n")?.ok_or_else(|| bad("missing n"))?,
            ))
        };
        Ok(match name.as_str() {
            "cubic_lattice" => Generator::CubicLattice,
            "divided_cube" => Generator::DividedCube,
            "parallel_pyramids" => Generator::ParallelPyramids,
            "split_prism" => Generator::SplitPrism {
                aligned: args.contains(&"aligned"),
            },
            "stratum_prism" => Generator::StratumPrism,
            "spoke_cube" => {
                let (k, n) = kn()?;
                Generator::SpokeCube { k, n }
            }
            "core_prism_cube" => {
                let (k, n) = kn()?;
                Generator::CorePrismCube { k, n }
            }
            "prism_columns" => {
                let base = if args.contains(&"triangle") {
                    ColumnBase::Triangle
                } else if args.is_empty() || args.contains(&"square") {
                    ColumnBase::Square
                } else {
                    return Err(bad("prism_columns base must be square or triangle"));
                };
                let offsets = args
                    .iter()
                    .find_map(|a| a.strip_prefix("offsets="))
                    .map(|list| {
                        list.split('|')
                            .map(|o| {
                                crate::scalar::Scalar::parse(o)
                                    .ok()
                                    .and_then(|s| s.as_rational().cloned())
                                    .ok_or_else(|| bad(format!("bad offset {o:?}")))
                            })
                            .collect::<Result<Vec<Q>>>()
                    })
                    .transpose()?;
                Generator::PrismColumns { base, offsets }
            }
            other => return Err(bad(format!("unknown generator {other:?}"))),
        })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::CubicLattice => f.write_str("cubic_lattice"),
            Generator::DividedCube => f.write_str("divided_cube"),
            Generator::ParallelPyramids => f.write_str("parallel_pyramids"),
            Generator::SplitPrism { aligned: false } => f.write_str("split_prism"),
            Generator::SplitPrism { aligned: true } => f.write_str("split_prism(aligned)"),
            Generator::PrismColumns { base, offsets } => {
                let b = match base {
                    ColumnBase::Square => "square",
                    ColumnBase::Triangle => "triangle",
                };
                match offsets {
                    None => write!(f, "prism_columns({b})"),
                    Some(o) => {
                        let list: Vec<String> = o.iter().map(crate::scalar::render_rational).collect();
                        write!(f, "prism_columns({b},offsets={})", list.join("|"))
                    }
                }
            }
            Generator::StratumPrism => f.write_str("stratum_prism"),
            Generator::SpokeCube { k, n } => write!(f, "spoke_cube(k={k},n={n})"),
            Generator::CorePrismCube { k, n } => write!(f, "core_prism_cube(k={k},n={n})"),
        }
    }
}

fn pt(x: &Q, y: &Q, z: &Q) -> P3 {
    [x.clone(), y.clone(), z.clone()]
}

fn diag(a: i64, b: i64, c: i64) -> [P3; 3] {
    [[qi(a), qi(0), qi(0)], [qi(0), qi(b), qi(0)], [qi(0), qi(0), qi(c)]]
}

fn cube_corners(o: [i64; 3]) -> Vec<P3> {
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

/// Three square pyramids with apex at `apex`, a corner of the unit cube at `o`.
fn corner_pyramids(o: [i64; 3], apex: [i64; 3]) -> Vec<Vec<P3>> {
    let corners = cube_corners(o);
    let apex_q = apex.map(qi);
    (0..3)
        .map(|axis| {
            let far = if apex[axis] == o[axis] { o[axis] + 1 } else { o[axis] };
            let mut cell: Vec<P3> = corners.iter().filter(|c| c[axis] == qi(far)).cloned().collect();
            cell.push(apex_q.clone());
            cell
        })
        .collect()
}

fn prism(base: &[(Q, Q)], z0: &Q, z1: &Q) -> Vec<P3> {
    base.iter().flat_map(|(x, y)| [pt(x, y, z0), pt(x, y, z1)]).collect()
}

fn cubic_lattice() -> FundamentalDomain {
    FundamentalDomain::new("cubic_lattice", diag(1, 1, 1), vec![cube_corners([0, 0, 0])])
}

fn divided_cube() -> FundamentalDomain {
    let mut cells = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                cells.extend(corner_pyramids([a, b, c], [1, 1, 1]));
            }
        }
    }
    FundamentalDomain::new("divided_cube", diag(2, 2, 2), cells)
}

fn parallel_pyramids() -> FundamentalDomain {
    FundamentalDomain::new(
        "parallel_pyramids",
        diag(1, 1, 1),
        corner_pyramids([0, 0, 0], [1, 1, 1]),
    )
}

/// Halves of the unit cube at `o` cut by `x = y` (axes `(0, 1)`) or `y = z` (axes `(1, 2)`).
fn cube_halves(o: [i64; 3], axes: (usize, usize)) -> [Vec<P3>; 2] {
    let corners = cube_corners(o);
    let rel = |c: &P3, k: usize| &c[k] - qi(o[k]);
    let (a, b) = axes;
    let ge: Vec<P3> = corners.iter().filter(|c| rel(c, a) >= rel(c, b)).cloned().collect();
    let le: Vec<P3> = corners.iter().filter(|c| rel(c, a) <= rel(c, b)).cloned().collect();
    [ge, le]
}

fn split_prism(aligned: bool) -> FundamentalDomain {
    let mut cells = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let axes = if aligned || (a + b + c) % 2 == 0 {
                    (0, 1)
                } else {
                    (1, 2)
                };
                cells.extend(cube_halves([a, b, c], axes));
            }
        }
    }
    let name = if aligned { "split_prism(aligned)" } else { "split_prism" };
    FundamentalDomain::new(name, diag(2, 2, 2), cells)
}

/// Base polygons of a 2×2 block of unit squares (optionally halved along `x = y`).
fn column_bases(base: ColumnBase) -> Vec<Vec<(Q, Q)>> {
    let mut out = Vec::new();
    for b in 0..2 {
        for a in 0..2 {
            let c = |dx: i64, dy: i64| (qi(a + dx), qi(b + dy));
            match base {
                ColumnBase::Square => out.push(vec![c(0, 0), c(1, 0), c(1, 1), c(0, 1)]),
                ColumnBase::Triangle => {
                    out.push(vec![c(0, 0), c(1, 0), c(1, 1)]);
                    out.push(vec![c(0, 0), c(1, 1), c(0, 1)]);
                }
            }
        }
    }
    out
}

fn prism_columns(base: ColumnBase, offsets: Option<&[Q]>) -> Result<FundamentalDomain> {
    let bases = column_bases(base);
    let offsets: Vec<Q> = match offsets {
        Some(o) => o.to_vec(),
        None => (0..bases.len()).map(|i| q(i as i64, bases.len() as i64)).collect(),
    };
    if offsets.len() != bases.len() {
        return Err(bad(format!("{} columns need {} offsets", bases.len(), bases.len())));
    }
    if offsets.iter().any(|o| o.is_negative() || *o >= qi(1)) {
        return Err(bad("offsets must lie in [0, 1)"));
    }
    // columns sharing a vertical lattice line must be cut at distinct heights
    let mut at_line: HashMap<(Q, Q), Vec<&Q>> = HashMap::new();
    for (poly, o) in bases.iter().zip(&offsets) {
        for (x, y) in poly {
            let key = reduce(&[x / qi(2), y / qi(2), Q::zero()]);
            at_line.entry((key[0].clone(), key[1].clone())).or_default().push(o);
        }
    }
    for (line, offs) in &at_line {
        let mut sorted: Vec<&Q> = offs.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad(format!(
                "columns meeting the vertical line at ({}, {}) share an offset",
                crate::scalar::render_rational(&(&line.0 * qi(2))),
                crate::scalar::render_rational(&(&line.1 * qi(2)))
            )));
        }
    }
    let cells = bases
        .iter()
        .zip(&offsets)
        .map(|(poly, o)| prism(poly, o, &(o + qi(1))))
        .collect();
    let name = match base {
        ColumnBase::Square => "prism_columns(square)",
        ColumnBase::Triangle => "prism_columns(triangle)",
    };
    Ok(FundamentalDomain::new(name, diag(2, 2, 1), cells))
}

fn stratum_prism() -> FundamentalDomain {
    let tri_a = [(qi(0), qi(0)), (qi(1), qi(0)), (qi(1), qi(1))];
    let tri_b = [(qi(0), qi(0)), (qi(1), qi(1)), (qi(0), qi(1))];
    let mut cells = Vec::new();
    for tri in [&tri_a, &tri_b] {
        cells.push(prism(tri, &qi(0), &qi(1)));
        let g = (
            (&tri[0].0 + &tri[1].0 + &tri[2].0) / qi(3),
            (&tri[0].1 + &tri[1].1 + &tri[2].1) / qi(3),
        );
        for i in 0..3 {
            let piece = [g.clone(), tri[i].clone(), tri[(i + 1) % 3].clone()];
            cells.push(prism(&piece, &qi(1), &qi(2)));
        }
    }
    FundamentalDomain::new("stratum_prism", diag(1, 1, 2), cells)
}

/// The `4(n+1)` boundary points of the unit square, counter-clockwise from the origin.
fn square_boundary(n: u32) -> Vec<(Q, Q)> {
    let m = i64::from(n) + 1;
    let mut out = Vec::new();
    for s in 0..m {
        out.push((q(s, m), qi(0)));
    }
    for s in 0..m {
        out.push((qi(1), q(s, m)));
    }
    for s in 0..m {
        out.push((qi(1) - q(s, m), qi(1)));
    }
    for s in 0..m {
        out.push((qi(0), qi(1) - q(s, m)));
    }
    out
}

fn spoke_cube(k: u32, n: u32) -> FundamentalDomain {
    let ring = square_boundary(n);
    let levels = i64::from(k) + 1;
    let half = q(1, 2);
    let axis: Vec<P3> = (0..=levels).map(|j| pt(&half, &half, &q(j, levels))).collect();
    let top = &axis[axis.len() - 1];
    let mut cells = Vec::new();
    let r = ring.len();
    for i in 0..r {
        let (p0, p1) = (&ring[i], &ring[(i + 1) % r]);
        let bottom = |p: &(Q, Q)| pt(&p.0, &p.1, &qi(0));
        let upper = |p: &(Q, Q)| pt(&p.0, &p.1, &qi(1));
        for w in axis.windows(2) {
            cells.push(vec![w[0].clone(), w[1].clone(), bottom(p0), bottom(p1)]);
        }
        cells.push(vec![top.clone(), bottom(p0), bottom(p1), upper(p1), upper(p0)]);
    }
    FundamentalDomain::new(format!("spoke_cube(k={k},n={n})"), diag(1, 1, 1), cells)
}

fn strictly_convex(poly: &[(Q, Q)]) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let (o, a, b) = (&poly[i], &poly[(i + 1) % n], &poly[(i + 2) % n]);
        let c = (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0);
        c.is_positive()
    })
}

fn core_prism_cube(k: u32, n: u32) -> Result<FundamentalDomain> {
    let ring = square_boundary(n);
    let half = q(1, 2);
    // core corners on the rays towards the ring, pulled in by 1/(1 + s²) where s is the offset
    // from the side midpoint; the resulting curve is strictly convex along each side
    let shape: Vec<(Q, Q)> = ring
        .iter()
        .map(|(x, y)| {
            let (dx, dy) = (x - &half, y - &half);
            let s = if dx.abs() == half { dy.clone() } else { dx.clone() };
            let rho = qi(1) / (qi(1) + &s * &s);
            (&dx * &rho, &dy * &rho)
        })
        .collect();
    if !strictly_convex(&shape) {
        return Err(bad(format!("core polygon for n={n} is not strictly convex")));
    }
    let levels = i64::from(k) + 1;
    let z: Vec<Q> = (0..=levels).map(|j| q(j, levels)).collect();
    // strictly convex in z, so the outer cells stay convex around the waisted core
    let sigma: Vec<Q> = z.iter().map(|t| &half - t * (qi(1) - t) / qi(2)).collect();
    let core = |i: usize, j: usize| {
        pt(
            &(&half + &sigma[j] * &shape[i].0),
            &(&half + &sigma[j] * &shape[i].1),
            &z[j],
        )
    };
    let r = ring.len();
    let mut cells = Vec::new();
    for j in 0..z.len() - 1 {
        cells.push((0..r).flat_map(|i| [core(i, j), core(i, j + 1)]).collect());
    }
    for i in 0..r {
        let i1 = (i + 1) % r;
        let mut cell = Vec::new();
        for p in [&ring[i], &ring[i1]] {
            cell.push(pt(&p.0, &p.1, &qi(0)));
            cell.push(pt(&p.0, &p.1, &qi(1)));
        }
        for j in 0..z.len() {
            cell.push(core(i, j));
            cell.push(core(i1, j));
        }
        cells.push(cell);
    }
    Ok(FundamentalDomain::new(
        format!("core_prism_cube(k={k},n={n})"),
        diag(1, 1, 1),
        cells,
    ))
}

/// Fundamental domain of a built-in generator.
pub fn domain(g: &Generator) -> Result<FundamentalDomain> {
    let mut d = match g {
        Generator::CubicLattice => cubic_lattice(),
        Generator::DividedCube => divided_cube(),
        Generator::ParallelPyramids => parallel_pyramids(),
        Generator::SplitPrism { aligned } => split_prism(*aligned),
        Generator::PrismColumns { base, offsets } => prism_columns(*base, offsets.as_deref())?,
        Generator::StratumPrism => stratum_prism(),
        Generator::SpokeCube { k, n } => spoke_cube(*k, *n),
        Generator::CorePrismCube { k, n } => core_prism_cube(*k, *n)?,
    };
    d.name = g.to_string();
    Ok(d)
}

/// Catalog entry whose parameters a generator realises, when there is one.
pub fn catalog_id(g: &Generator) -> Option<String> {
    Some(match g {
        Generator::CubicLattice => "ex05_cubic_lattice".into(),
        Generator::DividedCube => "ex07_divided_cube".into(),
        Generator::ParallelPyramids => "ex16_parallel_pyramids".into(),
        Generator::SplitPrism { aligned: false } => "ex15_split_prism".into(),
        Generator::PrismColumns {
            base: ColumnBase::Square,
            ..
        } => "ex06b_quadrilateral_prisms".into(),
        Generator::PrismColumns {
            base: ColumnBase::Triangle,
            ..
        } => "ex06a_triangular_prisms".into(),
        Generator::StratumPrism => "ex17_stratum_prism".into(),
        Generator::SpokeCube { k, n } => format!("ex11_spoke_cube(k={k},n={n})"),
        Generator::CorePrismCube { k, n } => format!("ex12_core_prism_cube(k={k},n={n})"),
        Generator::SplitPrism { aligned: true } => return None,
    })
}
