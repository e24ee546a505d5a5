//! JSON and CSV encodings of scalars, parameter tuples and derived summaries.
//!
//! Scalar encoding:
//! - exact rationals are strings `"p/q"` (decimal strings and JSON numbers are accepted on input);
//! - π² values linear over linear are objects `{a, b, c, d}` for `(a+bπ²)/(c+dπ²)`, other π²
//!   values `{num, den}` with integer coefficient lists in ascending powers of π²;
//! - evaluated values are `{decimal, precision_digits}`.
//!
//! π² objects also carry `decimal`/`precision_digits` as a read-only view; decoding ignores it.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::catalog::PartialParams;
use crate::error::{Error, Result};
use crate::params::{DerivedSummary, TessParams, PARAM_NAMES};
use crate::scalar::{format_decimal, integer_pair, Poly, Scalar};

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn scalar_to_json(s: &Scalar, digits: u32) -> Value {
    match s {
        Scalar::Rational(_) => Value::String(s.render()),
        Scalar::Pi2(f) => {
            let mut m = Map::new();
            if let Some([a, b, c, d]) = f.linear_form() {
                for (k, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
                    m.insert(k.into(), Value::String(v.to_string()));
                }
            } else {
                let (n, d) = integer_pair(f.numerator(), f.denominator());
                let list = |v: Vec<BigInt>| Value::Array(v.into_iter().map(|c| Value::String(c.to_string())).collect());
                m.insert("num".into(), list(n));
                m.insert("den".into(), list(d));
            }
            m.insert("decimal".into(), Value::String(s.to_decimal(digits)));
            m.insert("precision_digits".into(), json!(digits));
            Value::Object(m)
        }
        // guard digits included so decoding is lossless
        Scalar::Evaluated(a) => json!({
            "decimal": format_decimal(a.value(), a.digits() + 5),
            "precision_digits": a.digits(),
        }),
    }
}

fn rational_from_json(v: &Value) -> Result<BigRational> {
    match scalar_from_json(v)? {
        Scalar::Rational(r) => Ok(r),
        other => Err(format_err(format!("expected a rational, got {other}"))),
    }
}

fn poly_from_json(v: &Value) -> Result<Poly> {
    let items = v
        .as_array()
        .ok_or_else(|| format_err("coefficient list must be an array"))?;
    Ok(Poly::from_coeffs(
        items.iter().map(rational_from_json).collect::<Result<_>>()?,
    ))
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => Ok(Scalar::parse(s)?),
        Value::Number(n) => Ok(Scalar::parse(&n.to_string())?),
        Value::Object(m) => {
            if let (Some(a), Some(b), Some(c), Some(d)) = (m.get("a"), m.get("b"), m.get("c"), m.get("d")) {
                let [a, b, c, d] = [a, b, c, d].map(rational_from_json);
                let (a, b, c, d) = (a?, b?, c?, d?);
                let den = Poly::from_coeffs(vec![c, d]);
                if den.is_zero() {
                    return Err(format_err("zero π² denominator"));
                }
                return Ok(Scalar::from_polys(Poly::from_coeffs(vec![a, b]), den));
            }
            if let (Some(n), Some(d)) = (m.get("num"), m.get("den")) {
                let den = poly_from_json(d)?;
                if den.is_zero() {
                    return Err(format_err("zero π² denominator"));
                }
                return Ok(Scalar::from_polys(poly_from_json(n)?, den));
            }
            if let Some(dec) = m.get("decimal").and_then(Value::as_str) {
                let digits = m
                    .get("precision_digits")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| format_err("evaluated scalar needs precision_digits"))?;
                let Scalar::Rational(r) = Scalar::parse(dec)? else {
                    return Err(format_err("decimal field must be a plain decimal"));
                };
                return Ok(Scalar::evaluated(r, digits as u32));
            }
            Err(format_err("unrecognised scalar object"))
        }
        _ => Err(format_err(format!("cannot read a scalar from {v}"))),
    }
}

/// Canonical parameter key for the accepted spellings (`mu_VE`, `VE`, `lambda_V`, `lambda`, ...).
pub fn canonical_key(key: &str) -> Option<&'static str> {
    let k = key.trim().to_ascii_lowercase();
    let k = k.strip_prefix("mu_").unwrap_or(&k);
    Some(match k {
        "lambda_v" | "lambda" => "lambda_V",
        "ve" => "mu_VE",
        "ep" => "mu_EP",
        "pv" => "mu_PV",
        "xi" => "xi",
        "kappa" => "kappa",
        "psi" => "psi",
        "tau" => "tau",
        _ => return None,
    })
}

/// Builds parameters from named values; `lambda_V` defaults to 1.
pub fn params_from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, Scalar)>) -> Result<TessParams> {
    let mut slots: [Option<Scalar>; 8] = Default::default();
    for (key, value) in pairs {
        let name = canonical_key(key).ok_or_else(|| format_err(format!("unknown parameter {key:?}")))?;
        let i = PARAM_NAMES.iter().position(|n| *n == name).expect("canonical");
        if slots[i].replace(value).is_some() {
            return Err(format_err(format!("parameter {name} given twice")));
        }
    }
    slots[0].get_or_insert_with(Scalar::one);
    let missing: Vec<&str> = PARAM_NAMES
        .iter()
        .zip(&slots)
        .filter(|(_, s)| s.is_none())
        .map(|(n, _)| *n)
        .collect();
    if !missing.is_empty() {
        return Err(format_err(format!("missing parameters: {}", missing.join(", "))));
    }
    TessParams::from_array(slots.map(|s| s.expect("filled")))
}

/// Parses `key=value` words.
pub fn params_from_kv<S: AsRef<str>>(words: &[S]) -> Result<TessParams> {
    let mut pairs = Vec::new();
    for w in words {
        let w = w.as_ref();
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| format_err(format!("expected key=value, got {w:?}")))?;
        pairs.push((k, Scalar::parse(v)?));
    }
    params_from_pairs(pairs)
}

pub fn params_from_json(v: &Value) -> Result<TessParams> {
    let m = v
        .as_object()
        .ok_or_else(|| format_err("parameter file must be a JSON object"))?;
    let obj = match m.get("params") {
        Some(Value::Object(inner)) => inner,
        _ => m,
    };
    let mut pairs = Vec::new();
    for (k, v) in obj {
        if canonical_key(k).is_none() {
            continue;
        }
        pairs.push((k.as_str(), scalar_from_json(v)?));
    }
    params_from_pairs(pairs)
}

pub fn params_to_json(p: &TessParams, digits: u32) -> Value {
    let mut m = Map::new();
    for (name, v) in p.named() {
        m.insert(name.into(), scalar_to_json(v, digits));
    }
    Value::Object(m)
}

pub fn partial_to_json(p: &PartialParams, digits: u32) -> Value {
    let mut m = Map::new();
    for (name, v) in p.named() {
        m.insert(name.into(), v.map_or(Value::Null, |s| scalar_to_json(s, digits)));
    }
    Value::Object(m)
}

pub fn summary_to_json(s: &DerivedSummary, digits: u32) -> Value {
    let mut m = Map::new();
    m.insert("params".into(), params_to_json(&s.params, digits));
    for (name, v) in s.named() {
        m.insert(name, scalar_to_json(&v, digits));
    }
    Value::Object(m)
}

/// A rectangular table of strings rendered as CSV.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(Into::into).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn from_csv(text: &str) -> Result<Table> {
        let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
        let headers = r
            .headers()
            .map_err(|e| format_err(e.to_string()))?
            .iter()
            .map(String::from)
            .collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(
                rec.map_err(|e| format_err(e.to_string()))?
                    .iter()
                    .map(String::from)
                    .collect(),
            );
        }
        Ok(Table { headers, rows })
    }

    /// Value of column `col` in the row whose first column is `key`.
    pub fn lookup(&self, key: &str, col: &str) -> Option<&str> {
        let c = self.headers.iter().position(|h| h == col)?;
        self.rows
            .iter()
            .find(|r| r.first().is_some_and(|k| k == key))?
            .get(c)
            .map(String::as_str)
    }
}

/// `name,value,decimal` rows; the `value` column is lossless.
pub fn scalars_table<'a>(items: impl IntoIterator<Item = (&'a str, &'a Scalar)>, digits: u32) -> Table {
    let mut t = Table::new(["name", "value", "decimal"]);
    for (name, v) in items {
        t.push([name.to_string(), v.render(), v.to_decimal(digits)]);
    }
    t
}

pub fn params_to_csv(p: &TessParams, digits: u32) -> String {
    scalars_table(p.named(), digits).to_csv()
}

pub fn params_from_csv(text: &str) -> Result<TessParams> {
    let t = Table::from_csv(text)?;
    let vi = t
        .headers
        .iter()
        .position(|h| h == "value")
        .ok_or_else(|| format_err("CSV needs a value column"))?;
    let mut pairs = Vec::new();
    for row in &t.rows {
        let (Some(k), Some(v)) = (row.first(), row.get(vi)) else {
            continue;
        };
        if canonical_key(k).is_some() {
            pairs.push((k.as_str(), Scalar::parse(v)?));
        }
    }
    params_from_pairs(pairs)
}

/// Reads a parameter file, JSON or CSV by content.
pub fn params_from_text(text: &str) -> Result<TessParams> {
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| format_err(e.to_string()))?;
        params_from_json(&v)
    } else {
        params_from_csv(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stit() -> TessParams {
        TessParams::from_ratios([(4, 1), (3, 1), (36, 7), (1, 1), (2, 3), (2, 1), (4, 3)]).unwrap()
    }

    #[test]
    fn scalar_encodings() {
        assert_eq!(scalar_to_json(&Scalar::ratio(36, 7), 20), json!("36/7"));
        let v = Scalar::pi2_linear(0, 144, 35, 24);
        let j = scalar_to_json(&v, 20);
        assert_eq!(j["a"], json!("0"));
        assert_eq!(j["b"], json!("144"));
        assert_eq!(j["c"], json!("35"));
        assert_eq!(j["d"], json!("24"));
        assert_eq!(scalar_from_json(&j).unwrap(), v);
        let sq = &v * &v;
        assert_eq!(scalar_from_json(&scalar_to_json(&sq, 20)).unwrap(), sq);
        let e = v.evaluate(30);
        assert_eq!(scalar_from_json(&scalar_to_json(&e, 30)).unwrap(), e);
        assert_eq!(scalar_from_json(&json!(2.5)).unwrap(), Scalar::ratio(5, 2));
        assert_eq!(
            scalar_from_json(&json!({"a": 1, "b": 0, "c": 2, "d": 0})).unwrap(),
            Scalar::ratio(1, 2)
        );
        assert!(scalar_from_json(&json!({"a": 1, "b": 0, "c": 0, "d": 0})).is_err());
    }

    #[test]
    fn params_round_trips() {
        let p = stit().with_lambda(Scalar::ratio(5, 2)).unwrap();
        assert_eq!(params_from_json(&params_to_json(&p, 20)).unwrap(), p);
        assert_eq!(params_from_csv(&params_to_csv(&p, 20)).unwrap(), p);
        let kv = params_from_kv(&["VE=4", "EP=3", "PV=36/7", "xi=1", "kappa=2/3", "psi=2", "tau=4/3"]).unwrap();
        assert_eq!(kv, stit());
        assert!(params_from_kv(&["VE=4"]).is_err());
        assert!(params_from_kv(&["VE=4", "ve=5"]).is_err());
        assert!(params_from_kv(&["foo=1"]).is_err());
    }

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(["a", "b"]);
        t.push(["(1+2*pi^2)/(3+4*pi^2)", "x,y"]);
        assert_eq!(Table::from_csv(&t.to_csv()).unwrap(), t);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::feasibility::sample_feasible;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn encodings_round_trip(seed in any::<u64>(), lambda in 1i64..50) {
            for p in sample_feasible(3, seed) {
                let p = p.with_lambda(Scalar::ratio(lambda, 7)).unwrap();
                prop_assert_eq!(params_from_json(&params_to_json(&p, 25)).unwrap(), p.clone());
                prop_assert_eq!(params_from_csv(&params_to_csv(&p, 25)).unwrap(), p);
            }
        }
    }
}
