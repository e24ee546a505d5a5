//! Exact periodic cell complexes: construction, measurement and validation.

mod build;
mod domain;
pub mod generators;
pub mod geom;
mod measure;

use std::fmt::Write as _;

pub use build::{Edge, Local, PeriodicComplex, Plate};
pub use domain::FundamentalDomain;
pub use generators::{ColumnBase, Generator};
pub use measure::{
    compare_with_derived, measure, validate, validate_measured, vertex_stats, MeasuredParams, ValidationItem,
    ValidationReport, VertexStats,
};

use crate::error::Result;

/// Builds the complex of a user-supplied fundamental domain.
pub fn load(domain: &FundamentalDomain) -> Result<PeriodicComplex> {
    PeriodicComplex::build(domain)
}

/// Builds a built-in generator from its textual spec, e.g. `spoke_cube(k=2,n=0)`.
pub fn generate(spec: &str) -> Result<PeriodicComplex> {
    let g: Generator = spec.parse()?;
    PeriodicComplex::build(&generators::domain(&g)?)
}

/// Wavefront OBJ of the fundamental domain's cells in Cartesian coordinates.
pub fn to_obj(c: &PeriodicComplex) -> String {
    let lattice = &c.domain.lattice;
    let mut out = String::new();
    let mut next = 1usize;
    for (i, cell) in c.cells.iter().enumerate() {
        let _ = writeln!(out, "o cell_{i}");
        for a in &cell.apices {
            let p = geom::vec_mat(a, lattice);
            let _ = writeln!(
                out,
                "v {} {} {}",
                geom::decimal(&p[0]),
                geom::decimal(&p[1]),
                geom::decimal(&p[2])
            );
        }
        for f in &cell.facets {
            let idx: Vec<String> = f.corners.iter().map(|k| (next + k).to_string()).collect();
            let _ = writeln!(out, "f {}", idx.join(" "));
        }
        next += cell.apices.len();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn check(spec: &str) {
        let g: Generator = spec.parse().unwrap();
        let c = generate(spec).unwrap();
        let m = measure(&c);
        let report = validate_measured(&m);
        assert!(report.ok(), "{spec}: {:?}", report.failures());
        let id = generators::catalog_id(&g).unwrap();
        let entry = catalog::get(&id).unwrap();
        for (name, expected) in entry.params.named() {
            if let (Some(e), false) = (expected, name == "lambda_V") {
                let got = m.params.named().into_iter().find(|(n, _)| *n == name).unwrap().1;
                assert!(
                    got.compare(e).is_eq(),
                    "{spec} {name}: measured {} expected {}",
                    got.render(),
                    e.render()
                );
            }
        }
    }

    #[test]
    fn small_generators_match_catalog() {
        for spec in [
            "cubic_lattice",
            "parallel_pyramids",
            "divided_cube",
            "split_prism",
            "stratum_prism",
        ] {
            check(spec);
        }
    }

    #[test]
    fn prism_columns_match_catalog() {
        check("prism_columns(square)");
        check("prism_columns(triangle)");
    }

    #[test]
    fn families_match_catalog() {
        check("spoke_cube(k=0,n=0)");
        check("spoke_cube(k=2,n=1)");
        check("core_prism_cube(k=0,n=0)");
        check("core_prism_cube(k=1,n=1)");
    }

    #[test]
    fn spec_round_trip() {
        for s in [
            "spoke_cube(k=2,n=0)",
            "prism_columns(triangle)",
            "split_prism(aligned)",
            "prism_columns(square,offsets=0|1/2|1/4|3/4)",
        ] {
            let g: Generator = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("prism_columns(square,offsets=0|0|1/4|3/4)"
            .parse::<Generator>()
            .and_then(|g| generators::domain(&g))
            .is_err());
        assert!("nonsense".parse::<Generator>().is_err());
    }

    #[test]
    fn obj_lists_cells() {
        let c = generate("parallel_pyramids").unwrap();
        let obj = to_obj(&c);
        assert_eq!(obj.matches("o cell_").count(), 3);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 15);
    }
}
