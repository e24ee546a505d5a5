//! Fundamental domains of lattice-periodic tessellations.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::geom::{add, det3, inverse3, qi, scale, vec_mat, Polytope, P3, Q};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One lattice cell's worth of cells, each given by its apices, in Cartesian coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalDomain {
    /// Lattice basis vectors (rows).
    pub lattice: [P3; 3],
    pub cells: Vec<Vec<P3>>,
    pub name: String,
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn read_q(v: &Value) -> Result<Q> {
    let s = match v {
        Value::String(s) => Scalar::parse(s)?,
        Value::Number(n) => Scalar::parse(&n.to_string())?,
        _ => return Err(format_err(format!("expected a rational, got {v}"))),
    };
    s.as_rational()
        .cloned()
        .ok_or_else(|| format_err("coordinates must be rational"))
}

fn read_p3(v: &Value) -> Result<P3> {
    let a = v
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| format_err("expected a coordinate triple"))?;
    Ok([read_q(&a[0])?, read_q(&a[1])?, read_q(&a[2])?])
}

fn q_json(v: &Q) -> Value {
    Value::String(crate::scalar::render_rational(v))
}

impl FundamentalDomain {
    pub fn new(name: impl Into<String>, lattice: [P3; 3], cells: Vec<Vec<P3>>) -> Self {
        FundamentalDomain {
            lattice,
            cells,
            name: name.into(),
        }
    }

    /// Absolute lattice volume.
    pub fn volume(&self) -> Q {
        let d = det3(&self.lattice);
        if d < Q::zero() {
            -d
        } else {
            d
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let lat = v
            .get("lattice")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 3)
            .ok_or_else(|| format_err("domain needs a 3×3 \"lattice\""))?;
        let lattice = [read_p3(&lat[0])?, read_p3(&lat[1])?, read_p3(&lat[2])?];
        let cells_v = v
            .get("cells")
            .and_then(Value::as_array)
            .ok_or_else(|| format_err("domain needs \"cells\""))?;
        let mut cells = Vec::new();
        for c in cells_v {
            if let Some(hs) = c.get("halfspaces").and_then(Value::as_array) {
                let rows = hs
                    .iter()
                    .map(|r| {
                        let a = r
                            .as_array()
                            .filter(|a| a.len() == 4)
                            .ok_or_else(|| format_err("half-space rows are [a, b, c, d]"))?;
                        Ok([read_q(&a[0])?, read_q(&a[1])?, read_q(&a[2])?, read_q(&a[3])?])
                    })
                    .collect::<Result<Vec<_>>>()?;
                cells.push(Polytope::from_halfspaces(&rows)?.apices);
            } else {
                let pts = c
                    .as_array()
                    .ok_or_else(|| format_err("cell must be a point list or {halfspaces}"))?;
                cells.push(pts.iter().map(read_p3).collect::<Result<Vec<_>>>()?);
            }
        }
        let name = v
            .get("metadata")
            .and_then(|m| m.get("name"))
            .and_then(Value::as_str)
            .unwrap_or("domain")
            .to_string();
        Ok(FundamentalDomain { lattice, cells, name })
    }

    pub fn to_json(&self) -> Value {
        let p = |x: &P3| Value::Array(x.iter().map(q_json).collect());
        json!({
            "lattice": self.lattice.iter().map(p).collect::<Vec<_>>(),
            "cells": self.cells.iter().map(|c| c.iter().map(p).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "metadata": {"name": self.name},
        })
    }

    /// The same tessellation with an `m[0] × m[1] × m[2]` block of lattice cells as its domain.
    pub fn supercell(&self, m: [u32; 3]) -> Self {
        let mut cells = Vec::new();
        for a in 0..m[0] {
            for b in 0..m[1] {
                for c in 0..m[2] {
                    let t = add(
                        &add(
                            &scale(&self.lattice[0], &qi(a.into())),
                            &scale(&self.lattice[1], &qi(b.into())),
                        ),
                        &scale(&self.lattice[2], &qi(c.into())),
                    );
                    cells.extend(self.cells.iter().map(|cell| cell.iter().map(|p| add(p, &t)).collect()));
                }
            }
        }
        let lattice = [0, 1, 2].map(|k| scale(&self.lattice[k], &qi(m[k].into())));
        FundamentalDomain {
            lattice,
            cells,
            name: format!("{}×{}×{}×{}", self.name, m[0], m[1], m[2]),
        }
    }

    /// Image under `x ↦ x·A + b` (row-vector convention); `A` must be invertible.
    pub fn affine(&self, a: &[P3; 3], b: &P3) -> Result<Self> {
        if det3(a).is_zero() {
            return Err(Error::InvalidGeneratorParams("singular affine map".into()));
        }
        let map = |p: &P3| add(&vec_mat(p, a), b);
        Ok(FundamentalDomain {
            lattice: self.lattice.clone().map(|v| vec_mat(&v, a)),
            cells: self.cells.iter().map(|c| c.iter().map(map).collect()).collect(),
            name: self.name.clone(),
        })
    }

    /// Same tessellation described by the lattice basis `U·lattice`; `U` must be unimodular.
    pub fn rebase(&self, u: &[[i64; 3]; 3]) -> Result<Self> {
        let uq: [P3; 3] = u.map(|r| r.map(qi));
        let d = det3(&uq);
        if d != Q::one() && d != -Q::one() {
            return Err(Error::InvalidGeneratorParams("basis change must be unimodular".into()));
        }
        Ok(FundamentalDomain {
            lattice: [0, 1, 2].map(|i| vec_mat(&uq[i], &self.lattice)),
            cells: self.cells.clone(),
            name: self.name.clone(),
        })
    }

    /// Converts Cartesian points to lattice coordinates.
    pub fn to_fractional(&self) -> Result<Vec<Vec<P3>>> {
        let inv = inverse3(&self.lattice).ok_or_else(|| Error::NotATessellation("degenerate lattice".into()))?;
        Ok(self
            .cells
            .iter()
            .map(|c| c.iter().map(|p| vec_mat(p, &inv)).collect())
            .collect())
    }
}
