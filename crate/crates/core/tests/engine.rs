use proptest::prelude::*;
use serde_json::{json, Value};
use tesstopo::complex::{self, generators, FundamentalDomain, Generator};
use tesstopo::error::Error;
use tesstopo::params::TessParams;
use tesstopo::scalar::Scalar;

fn domain(v: Value) -> FundamentalDomain {
    FundamentalDomain::from_json(&v).unwrap()
}

const UNIT: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
const CUBE: [[i64; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [1, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
];

fn cubic_params() -> TessParams {
    TessParams::from_ratios([(6, 1), (4, 1), (4, 1), (0, 1), (0, 1), (0, 1), (0, 1)]).unwrap()
}

#[test]
fn domains_round_trip_through_json() {
    for name in [
        "cubic_lattice",
        "divided_cube",
        "split_prism",
        "prism_columns(triangle)",
        "spoke_cube(k=2,n=1)",
    ] {
        let g: Generator = name.parse().unwrap();
        let d = generators::domain(&g).unwrap();
        let text = serde_json::to_string(&d.to_json()).unwrap();
        let back = domain(serde_json::from_str(&text).unwrap());
        assert_eq!(back, d, "{name}");
    }
}

#[test]
fn user_cube_measures_as_the_cubic_lattice() {
    let c = complex::load(&domain(json!({"lattice": UNIT, "cells": [CUBE]}))).unwrap();
    let m = complex::measure(&c);
    assert_eq!(m.params, cubic_params());
    assert!(complex::validate_measured(&m).ok());
    assert_eq!(m.counts, [1, 3, 3, 1]);
}

#[test]
fn half_space_cells_are_accepted() {
    let rows = json!([
        [1, 0, 0, 0],
        [-1, 0, 0, 1],
        [0, 1, 0, 0],
        [0, -1, 0, 1],
        [0, 0, 1, 0],
        [0, 0, -1, 1]
    ]);
    let c = complex::load(&domain(json!({"lattice": UNIT, "cells": [{"halfspaces": rows}]}))).unwrap();
    assert_eq!(complex::measure(&c).params, cubic_params());
}

#[test]
fn skewed_lattice_with_rational_coordinates() {
    let lattice = json!([[2, 0, 0], ["1/2", 1, 0], [0, 0, 3]]);
    let cell = json!([
        [0, 0, 0],
        [2, 0, 0],
        ["1/2", 1, 0],
        ["5/2", 1, 0],
        [0, 0, 3],
        [2, 0, 3],
        ["1/2", 1, 3],
        ["5/2", 1, 3]
    ]);
    let c = complex::load(&domain(json!({"lattice": lattice, "cells": [cell]}))).unwrap();
    let m = complex::measure(&c);
    assert_eq!(m.params.mu_ve, Scalar::int(6));
    assert_eq!(m.params.lambda_v, Scalar::ratio(1, 6));
}

#[test]
fn gaps_and_overlaps_are_rejected() {
    let half = json!([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1]]);
    let gap = complex::load(&domain(json!({"lattice": UNIT, "cells": [half]})));
    assert!(matches!(gap, Err(Error::NotATessellation(_))), "{gap:?}");
    let twice = complex::load(&domain(
        json!({"lattice": [[2, 0, 0], [0, 1, 0], [0, 0, 1]], "cells": [CUBE, CUBE]}),
    ));
    assert!(matches!(twice, Err(Error::NotATessellation(_))), "{twice:?}");
}

#[test]
fn non_convex_cells_are_rejected() {
    let mut pts: Vec<Value> = CUBE.iter().map(|p| json!(p)).collect();
    pts.push(json!(["1/2", "1/2", "1/2"]));
    let r = complex::load(&domain(json!({"lattice": UNIT, "cells": [pts]})));
    assert!(matches!(r, Err(Error::NonConvexCell(_))), "{r:?}");
    let flat = json!([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]);
    let r = complex::load(&domain(json!({"lattice": UNIT, "cells": [flat]})));
    assert!(matches!(r, Err(Error::NonConvexCell(_))), "{r:?}");
}

#[test]
fn malformed_domains_are_rejected() {
    for v in [
        json!({"cells": []}),
        json!({"lattice": UNIT}),
        json!({"lattice": UNIT, "cells": [[["x", 0, 0]]]}),
    ] {
        assert!(
            matches!(
                FundamentalDomain::from_json(&v),
                Err(Error::Format(_) | Error::Parse(_))
            ),
            "{v}"
        );
    }
}

#[test]
fn obj_lists_one_object_per_cell() {
    let c = complex::generate("split_prism").unwrap();
    let obj = complex::to_obj(&c);
    assert_eq!(obj.lines().filter(|l| l.starts_with("o ")).count(), c.cells.len());
    let vertices = obj.lines().filter(|l| l.starts_with("v ")).count();
    for line in obj.lines().filter(|l| l.starts_with("f ")) {
        for k in line.split_whitespace().skip(1) {
            let k: usize = k.parse().unwrap();
            assert!((1..=vertices).contains(&k));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cubic_supercells_keep_scale_free_params(a in 1u32..=3, b in 1u32..=3, c in 1u32..=2) {
        let d = domain(json!({"lattice": UNIT, "cells": [CUBE]})).supercell([a, b, c]);
        let m = complex::measure(&complex::load(&d).unwrap());
        prop_assert_eq!(m.params, cubic_params());
        prop_assert_eq!(m.counts, [a * b * c, 3 * a * b * c, 3 * a * b * c, a * b * c].map(|x| x as usize));
    }
}
