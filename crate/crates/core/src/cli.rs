//! Command-line front end. `run` is kept in the library so the binary stays a thin shim and
//! every subcommand can be exercised in-process.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::catalog::{self, CatalogEntry, Link};
use crate::complex::{self, generators, FundamentalDomain, Generator, PeriodicComplex};
use crate::error::{Error, Result};
use crate::feasibility::{self, classify, kappa_xi_region, Cyclic, RegionPolyline};
use crate::io::{self, Table};
use crate::params::{derive, TessParams};
use crate::scalar::Scalar;
use crate::transforms::{self, MixtureComponent, MixtureCurve, PlanarParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "tesstopo",
    version,
    about = "Topological parameters of spatial tessellations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Decimal digits for evaluated output (at least 15).
    #[arg(long, global = true, env = "TESSTOPO_PRECISION", default_value_t = 50)]
    pub precision: u32,
}

/// Parameter input: inline `KEY=VALUE` words, a JSON/CSV file, or a catalog id.
#[derive(Debug, Args, Clone)]
pub struct Source {
    #[arg(value_name = "KEY=VALUE")]
    pub pairs: Vec<String>,
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub catalog: Option<String>,
}

/// A complex: built-in generator or a domain file.
#[derive(Debug, Args, Clone)]
pub struct ComplexSource {
    #[arg(long)]
    pub generator: Option<String>,
    #[arg(long)]
    pub domain: Option<PathBuf>,
    /// Replicate the domain, e.g. `2,2,2`.
    #[arg(long)]
    pub supercell: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionKind {
    PvEp,
    PsiTau,
    KappaXi,
}

#[derive(Debug, Args, Clone)]
pub struct PlanarArgs {
    #[arg(long)]
    pub ve: Option<String>,
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub mu_ev_pi: Option<String>,
    #[arg(long)]
    pub mu_ve2: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    /// Use the `n`-spoke subdivided square lattice instead of explicit values.
    #[arg(long)]
    pub spoked: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum TransformOp {
    Stratum(PlanarArgs),
    Column(PlanarArgs),
    CentralPoint {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
    },
    /// Components as `ID_OR_FILE@SHARE`.
    Mixture {
        #[arg(long = "component", required = true)]
        components: Vec<String>,
    },
    MixtureCurve {
        first: String,
        second: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogOp {
    List,
    Show { id: String },
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intensities and mean adjacencies from the seven parameters.
    Derive(Source),
    /// Feasibility report; exits 1 when infeasible.
    Check(Source),
    /// Boundary polylines or the (κ, ξ) region.
    Region {
        #[arg(long = "type", value_enum)]
        kind: RegionKind,
        #[arg(long)]
        ve: String,
        #[arg(long)]
        ep: Option<String>,
        #[arg(long)]
        pv: Option<String>,
        #[arg(long)]
        psi: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long, default_value_t = feasibility::DEFAULT_EP_CEILING.to_string())]
        ceiling: String,
    },
    Transform {
        #[command(subcommand)]
        op: TransformOp,
    },
    Catalog {
        #[command(subcommand)]
        op: CatalogOp,
    },
    /// Exact parameters of a periodic complex; exits 3 when validation fails.
    Measure {
        #[command(flatten)]
        source: ComplexSource,
        /// Also write the fundamental domain as Wavefront OBJ.
        #[arg(long)]
        obj: Option<PathBuf>,
    },
    /// Per-vertex counts of a periodic complex.
    Stats {
        #[command(flatten)]
        source: ComplexSource,
    },
    /// Seeded feasible parameter tuples.
    Sample {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cyclic triples only.
        #[arg(long)]
        cyclic: bool,
    },
}

/// Result tree shared by the JSON and CSV renderings.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Null,
    Bool(bool),
    Int(i64),
    Text(String),
    Scalar(Scalar),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    fn map<K: Into<String>>(items: impl IntoIterator<Item = (K, Node)>) -> Node {
        Node::Map(items.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    fn text(s: impl Into<String>) -> Node {
        Node::Text(s.into())
    }

    fn int(v: usize) -> Node {
        Node::Int(i64::try_from(v).expect("count fits"))
    }

    pub fn to_json(&self, digits: u32) -> Value {
        match self {
            Node::Null => Value::Null,
            Node::Bool(b) => Value::Bool(*b),
            Node::Int(i) => Value::from(*i),
            Node::Text(s) => Value::String(s.clone()),
            Node::Scalar(s) => io::scalar_to_json(s, digits),
            Node::List(items) => Value::Array(items.iter().map(|n| n.to_json(digits)).collect()),
            Node::Map(items) => {
                let mut m = Map::new();
                for (k, v) in items {
                    m.insert(k.clone(), v.to_json(digits));
                }
                Value::Object(m)
            }
        }
    }

    /// `path,value,decimal` rows, one per leaf.
    pub fn flatten(&self, digits: u32) -> Table {
        let mut t = Table::new(["path", "value", "decimal"]);
        self.flatten_into("", digits, &mut t);
        t
    }

    fn flatten_into(&self, path: &str, digits: u32, t: &mut Table) {
        let child = |k: &str| {
            if path.is_empty() {
                k.to_string()
            } else {
                format!("{path}.{k}")
            }
        };
        match self {
            Node::Null => t.push([path.to_string(), String::new(), String::new()]),
            Node::Bool(b) => t.push([path.to_string(), b.to_string(), String::new()]),
            Node::Int(i) => t.push([path.to_string(), i.to_string(), String::new()]),
            Node::Text(s) => t.push([path.to_string(), s.clone(), String::new()]),
            Node::Scalar(s) => t.push([path.to_string(), s.render(), s.to_decimal(digits)]),
            Node::List(items) => {
                for (i, n) in items.iter().enumerate() {
                    n.flatten_into(&child(&i.to_string()), digits, t);
                }
            }
            Node::Map(items) => {
                for (k, n) in items {
                    n.flatten_into(&child(k), digits, t);
                }
            }
        }
    }
}

/// Output of one subcommand; `table` replaces the flattened tree in CSV mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub tree: Node,
    pub table: Option<Table>,
    pub exit: i32,
}

impl Report {
    fn ok(tree: Node) -> Self {
        Report {
            tree,
            table: None,
            exit: EXIT_OK,
        }
    }

    pub fn render(&self, format: Format, digits: u32) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.tree.to_json(digits)).expect("serialisable");
                s.push('\n');
                s
            }
            Format::Csv => match &self.table {
                Some(t) => t.to_csv(),
                None => self.tree.flatten(digits).to_csv(),
            },
        }
    }
}

/// Exit status for an error raised while handling a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotATessellation(_) | Error::NonConvexCell(_) => EXIT_VALIDATION,
        _ => EXIT_INVALID,
    }
}

fn scalar(s: &str) -> Result<Scalar> {
    Ok(Scalar::parse(s)?)
}

fn opt_scalar(s: &Option<String>, name: &str) -> Result<Scalar> {
    s.as_deref()
        .ok_or_else(|| Error::InvalidParams(format!("--{name} is required")))
        .and_then(scalar)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn catalog_params(id: &str) -> Result<TessParams> {
    let e = catalog::get(id)?;
    e.params
        .to_params()
        .ok_or_else(|| Error::InvalidParams(format!("catalog entry {id} does not record all seven parameters")))
}

impl Source {
    fn load(&self) -> Result<TessParams> {
        let given = usize::from(!self.pairs.is_empty())
            + usize::from(self.file.is_some())
            + usize::from(self.catalog.is_some());
        if given != 1 {
            return Err(Error::InvalidParams(
                "give exactly one of KEY=VALUE pairs, --file or --catalog".into(),
            ));
        }
        if let Some(path) = &self.file {
            return io::params_from_text(&read_text(path)?);
        }
        if let Some(id) = &self.catalog {
            return catalog_params(id);
        }
        // absent interior parameters mean facet-to-facet
        let mut words = self.pairs.clone();
        for key in ["xi", "kappa", "psi", "tau"] {
            let present = self
                .pairs
                .iter()
                .any(|w| w.split_once('=').and_then(|(k, _)| io::canonical_key(k.trim())) == Some(key));
            if !present {
                words.push(format!("{key}=0"));
            }
        }
        io::params_from_kv(&words)
    }
}

/// A catalog id, or a parameter file when the argument names an existing path.
fn params_ref(s: &str) -> Result<TessParams> {
    let p = Path::new(s);
    if p.exists() {
        io::params_from_text(&read_text(p)?)
    } else {
        catalog_params(s)
    }
}

impl ComplexSource {
    fn domain(&self) -> Result<FundamentalDomain> {
        let d = match (&self.generator, &self.domain) {
            (Some(g), None) => generators::domain(&g.parse::<Generator>()?)?,
            (None, Some(path)) => {
                let v: Value = serde_json::from_str(&read_text(path)?).map_err(|e| Error::Format(e.to_string()))?;
                FundamentalDomain::from_json(&v)?
            }
            _ => {
                return Err(Error::InvalidParams(
                    "give exactly one of --generator or --domain".into(),
                ))
            }
        };
        match &self.supercell {
            None => Ok(d),
            Some(s) => {
                let parts: Vec<u32> = s
                    .split(',')
                    .map(|x| x.trim().parse::<u32>().ok().filter(|v| *v > 0))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::InvalidParams(format!("bad supercell {s:?}")))?;
                let m: [u32; 3] = parts
                    .try_into()
                    .map_err(|_| Error::InvalidParams("supercell needs three factors".into()))?;
                Ok(d.supercell(m))
            }
        }
    }

    fn build(&self) -> Result<PeriodicComplex> {
        complex::load(&self.domain()?)
    }
}

fn params_node(p: &TessParams) -> Node {
    Node::map(p.named().into_iter().map(|(k, v)| (k, Node::Scalar(v.clone()))))
}

fn named_node(items: Vec<(String, Scalar)>) -> Node {
    Node::map(items.into_iter().map(|(k, v)| (k, Node::Scalar(v))))
}

fn params_table(rows: &[TessParams], digits: u32) -> Table {
    let mut headers = vec!["index".to_string()];
    headers.extend(crate::params::PARAM_NAMES.iter().map(|s| s.to_string()));
    headers.extend(crate::params::PARAM_NAMES.iter().map(|s| format!("{s}_decimal")));
    let mut t = Table::new(headers);
    for (i, p) in rows.iter().enumerate() {
        let mut row = vec![i.to_string()];
        row.extend(p.values().iter().map(|v| v.render()));
        row.extend(p.values().iter().map(|v| v.to_decimal(digits)));
        t.push(row);
    }
    t
}

fn cmd_derive(src: &Source) -> Result<Report> {
    let s = derive(&src.load()?)?;
    let mut items = vec![("params".to_string(), params_node(&s.params))];
    items.extend(s.named().into_iter().map(|(k, v)| (k, Node::Scalar(v))));
    Ok(Report::ok(Node::Map(items)))
}

fn cmd_check(src: &Source) -> Result<Report> {
    let p = src.load()?;
    let r = classify(&p)?;
    let bounds = r
        .bounds
        .iter()
        .map(|b| {
            Node::map([
                ("name", Node::text(b.name.as_str())),
                ("subject", Node::text(b.name.subject())),
                ("value", Node::Scalar(b.value.clone())),
                ("strict", Node::Bool(b.strict)),
                ("status", Node::text(b.status.as_str())),
            ])
        })
        .collect();
    let tree = Node::map([
        ("params", params_node(&p)),
        ("regime", Node::text(r.regime.as_str())),
        ("feasible", Node::Bool(r.feasible)),
        (
            "boundary_flags",
            Node::List(r.boundary_flags.iter().map(|b| Node::text(b.as_str())).collect()),
        ),
        ("bounds", Node::List(bounds)),
    ]);
    Ok(Report {
        tree,
        table: None,
        exit: if r.feasible { EXIT_OK } else { EXIT_INFEASIBLE },
    })
}

fn polyline_node(p: &RegionPolyline) -> Node {
    let points = p
        .points
        .iter()
        .zip(&p.open)
        .map(|((x, y), open)| {
            Node::map([
                ("x", Node::Scalar(x.clone())),
                ("y", Node::Scalar(y.clone())),
                ("open", Node::Bool(*open)),
            ])
        })
        .collect();
    Node::map([
        ("x_axis", Node::text(p.x_axis.clone())),
        ("y_axis", Node::text(p.y_axis.clone())),
        ("zone", Node::text(p.zone.as_str())),
        ("closed", Node::Bool(p.closed)),
        ("points", Node::List(points)),
    ])
}

fn polyline_table(lines: &[RegionPolyline], digits: u32) -> Table {
    let mut t = Table::new([
        "polyline",
        "zone",
        "closed",
        "index",
        "x",
        "y",
        "x_decimal",
        "y_decimal",
        "open",
    ]);
    for (li, p) in lines.iter().enumerate() {
        for (i, ((x, y), open)) in p.points.iter().zip(&p.open).enumerate() {
            t.push([
                li.to_string(),
                p.zone.as_str().to_string(),
                p.closed.to_string(),
                i.to_string(),
                x.render(),
                y.render(),
                x.to_decimal(digits),
                y.to_decimal(digits),
                open.to_string(),
            ]);
        }
    }
    t
}

#[allow(clippy::too_many_arguments)]
fn cmd_region(
    kind: RegionKind,
    ve: &str,
    ep: &Option<String>,
    pv: &Option<String>,
    psi: &Option<String>,
    tau: &Option<String>,
    resolution: usize,
    ceiling: &str,
    digits: u32,
) -> Result<Report> {
    let ve = scalar(ve)?;
    let lines = match kind {
        RegionKind::PvEp => feasibility::region_pv_ep(&ve, resolution, &scalar(ceiling)?)?,
        RegionKind::PsiTau => {
            let c = Cyclic::new(ve.clone(), opt_scalar(ep, "ep")?, opt_scalar(pv, "pv")?);
            vec![feasibility::region_psi_tau(&c, resolution)?]
        }
        RegionKind::KappaXi => {
            let c = Cyclic::new(ve.clone(), opt_scalar(ep, "ep")?, opt_scalar(pv, "pv")?);
            let r = kappa_xi_region(&c, &opt_scalar(psi, "psi")?, &opt_scalar(tau, "tau")?)?;
            let line = |l: &feasibility::Line| {
                Node::map([
                    ("intercept", Node::Scalar(l.intercept.clone())),
                    ("slope", Node::Scalar(l.slope.clone())),
                ])
            };
            let (ck, cx) = r.lines.common_point();
            let vertices: Vec<Node> = r
                .vertices
                .iter()
                .map(|(k, x)| Node::map([("kappa", Node::Scalar(k.clone())), ("xi", Node::Scalar(x.clone()))]))
                .collect();
            let tree = Node::map([
                ("type", Node::text("kappa-xi")),
                ("shape", Node::text(r.shape.as_str())),
                ("kappa_max", Node::Scalar(r.kappa_max.clone())),
                (
                    "common_point",
                    Node::map([("kappa", Node::Scalar(ck)), ("xi", Node::Scalar(cx))]),
                ),
                (
                    "lines",
                    Node::map([
                        ("K", Node::Scalar(r.lines.k.clone())),
                        ("L1", line(&r.lines.l1)),
                        ("L2", line(&r.lines.l2)),
                        ("U1", line(&r.lines.u1)),
                        ("U2", line(&r.lines.u2)),
                        ("U3", line(&r.lines.u3)),
                    ]),
                ),
                ("vertices", Node::List(vertices)),
            ]);
            return Ok(Report::ok(tree));
        }
    };
    let name = match kind {
        RegionKind::PvEp => "pv-ep",
        _ => "psi-tau",
    };
    let tree = Node::map([
        ("type", Node::text(name)),
        ("polylines", Node::List(lines.iter().map(polyline_node).collect())),
    ]);
    Ok(Report {
        tree,
        table: Some(polyline_table(&lines, digits)),
        exit: EXIT_OK,
    })
}

fn planar(a: &PlanarArgs) -> Result<PlanarParams> {
    if let Some(n) = a.spoked {
        return Ok(PlanarParams::spoked_squares(n));
    }
    let mut p = PlanarParams::new(opt_scalar(&a.ve, "ve")?, opt_scalar(&a.phi, "phi")?);
    if let Some(l) = &a.lambda {
        p.lambda_v = scalar(l)?;
    }
    match (&a.mu_ev_pi, &a.mu_ve2) {
        (Some(ev), Some(m2)) => Ok(p.with_moments(scalar(ev)?, scalar(m2)?)),
        (None, None) => Ok(p),
        _ => Err(Error::InvalidPlanar("give both --mu-ev-pi and --mu-ve2".into())),
    }
}

fn cmd_transform(op: &TransformOp) -> Result<Report> {
    let tree = match op {
        TransformOp::Stratum(a) => params_node(&transforms::stratum(&planar(a)?)?),
        TransformOp::Column(a) => params_node(&transforms::column(&planar(a)?)?),
        TransformOp::CentralPoint { source, iterations } => {
            let steps = transforms::iterate_central_point(&source.load()?, *iterations)?;
            if steps.len() == 1 {
                params_node(&steps[0])
            } else {
                Node::List(steps.iter().map(params_node).collect())
            }
        }
        TransformOp::Mixture { components } => {
            let parsed = components
                .iter()
                .map(|c| {
                    let (src, share) = c
                        .rsplit_once('@')
                        .ok_or_else(|| Error::InvalidShares(format!("component {c:?} is not ID_OR_FILE@SHARE")))?;
                    Ok(MixtureComponent {
                        params: params_ref(src)?,
                        share: scalar(share)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            params_node(&transforms::mixture(&parsed)?)
        }
        TransformOp::MixtureCurve { first, second } => {
            match transforms::mixture_curve(&params_ref(first)?, &params_ref(second)?) {
                MixtureCurve::Curve { a, b } => Node::map([
                    ("kind", Node::text("curve")),
                    ("a", Node::Scalar(a)),
                    ("b", Node::Scalar(b)),
                ]),
                MixtureCurve::Vertical { ve, ep_low, ep_high } => Node::map([
                    ("kind", Node::text("vertical")),
                    ("ve", Node::Scalar(ve)),
                    ("ep_low", Node::Scalar(ep_low)),
                    ("ep_high", Node::Scalar(ep_high)),
                ]),
                MixtureCurve::Point { ve, ep } => Node::map([
                    ("kind", Node::text("point")),
                    ("ve", Node::Scalar(ve)),
                    ("ep", Node::Scalar(ep)),
                ]),
            }
        }
    };
    Ok(Report::ok(tree))
}

fn link_node(l: &Option<Link>) -> Node {
    match l {
        None => Node::Null,
        Some(Link::Stratum(_)) => Node::text("stratum"),
        Some(Link::Column(_)) => Node::text("column"),
        Some(Link::CentralPoint(id)) => Node::text(format!("central_point({id})")),
    }
}

fn entry_node(e: &CatalogEntry) -> Node {
    let params = Node::map(
        e.params
            .named()
            .into_iter()
            .map(|(k, v)| (k, v.map_or(Node::Null, |s| Node::Scalar(s.clone())))),
    );
    Node::map([
        ("id", Node::text(e.id.clone())),
        ("provenance", Node::text(e.provenance.clone())),
        ("ftf", Node::Bool(e.ftf)),
        ("complete", Node::Bool(e.is_complete())),
        ("on_curve", Node::Bool(e.on_curve)),
        ("generator", e.generator.clone().map_or(Node::Null, Node::Text)),
        ("link", link_node(&e.link)),
        ("notes", Node::text(e.notes.clone())),
        ("params", params),
    ])
}

fn cmd_catalog(op: &CatalogOp) -> Result<Report> {
    match op {
        CatalogOp::List => {
            let entries = catalog::entries();
            let mut t = Table::new(["id", "ftf", "complete", "generator", "provenance"]);
            let mut list = Vec::new();
            for e in &entries {
                t.push([
                    e.id.clone(),
                    e.ftf.to_string(),
                    e.is_complete().to_string(),
                    e.generator.clone().unwrap_or_default(),
                    e.provenance.clone(),
                ]);
                list.push(Node::map([
                    ("id", Node::text(e.id.clone())),
                    ("ftf", Node::Bool(e.ftf)),
                    ("complete", Node::Bool(e.is_complete())),
                    ("generator", e.generator.clone().map_or(Node::Null, Node::Text)),
                    ("provenance", Node::text(e.provenance.clone())),
                ]));
            }
            Ok(Report {
                tree: Node::List(list),
                table: Some(t),
                exit: EXIT_OK,
            })
        }
        CatalogOp::Show { id } => Ok(Report::ok(entry_node(&catalog::get(id)?))),
        CatalogOp::Verify => {
            let r = catalog::verify_catalog();
            let mut t = Table::new(["entry", "check", "passed", "detail"]);
            let mut list = Vec::new();
            for c in &r.checks {
                t.push([c.entry.clone(), c.check.clone(), c.passed.to_string(), c.detail.clone()]);
                list.push(Node::map([
                    ("entry", Node::text(c.entry.clone())),
                    ("check", Node::text(c.check.clone())),
                    ("passed", Node::Bool(c.passed)),
                    ("detail", Node::text(c.detail.clone())),
                ]));
            }
            let ok = r.failures().is_empty();
            Ok(Report {
                tree: Node::map([("ok", Node::Bool(ok)), ("checks", Node::List(list))]),
                table: Some(t),
                exit: if ok { EXIT_OK } else { EXIT_VALIDATION },
            })
        }
    }
}

fn cmd_measure(src: &ComplexSource, obj: &Option<PathBuf>) -> Result<Report> {
    let c = src.build()?;
    if let Some(path) = obj {
        std::fs::write(path, complex::to_obj(&c)).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    }
    let m = complex::measure(&c);
    let report = complex::validate_measured(&m);
    let [v, e, p, z] = m.counts;
    let items = report
        .items
        .iter()
        .map(|i| {
            Node::map([
                ("check", Node::text(i.check.clone())),
                ("passed", Node::Bool(i.passed)),
                ("detail", Node::text(i.detail.clone())),
            ])
        })
        .collect();
    let tree = Node::map([
        ("name", Node::text(c.domain.name.clone())),
        (
            "counts",
            Node::map([
                ("vertices", Node::int(v)),
                ("edges", Node::int(e)),
                ("plates", Node::int(p)),
                ("cells", Node::int(z)),
            ]),
        ),
        ("params", params_node(&m.params)),
        ("derived", named_node(m.named())),
        (
            "validation",
            Node::map([
                ("ok", Node::Bool(report.ok())),
                ("items", Node::List(items)),
                (
                    "notes",
                    Node::List(report.notes.iter().map(|n| Node::text(n.clone())).collect()),
                ),
            ]),
        ),
    ]);
    Ok(Report {
        tree,
        table: None,
        exit: if report.ok() { EXIT_OK } else { EXIT_VALIDATION },
    })
}

fn cmd_stats(src: &ComplexSource) -> Result<Report> {
    let c = src.build()?;
    let stats = complex::vertex_stats(&c);
    let mut t = Table::new(["vertex", "x", "y", "z", "m_E", "m_Epi", "m_Z2", "m_Z1", "m_P1"]);
    let mut list = Vec::new();
    for (i, (s, pos)) in stats.iter().zip(&c.vertices).enumerate() {
        let coords: Vec<String> = pos.iter().map(crate::scalar::render_rational).collect();
        let counts = [s.m_e, s.m_e_pi, s.m_z2, s.m_z1, s.m_p1];
        let mut row = vec![i.to_string()];
        row.extend(coords.iter().cloned());
        row.extend(counts.iter().map(|v| v.to_string()));
        t.push(row);
        list.push(Node::map([
            ("vertex", Node::int(i)),
            ("position", Node::List(coords.into_iter().map(Node::Text).collect())),
            ("m_E", Node::int(s.m_e)),
            ("m_Epi", Node::int(s.m_e_pi)),
            ("m_Z2", Node::int(s.m_z2)),
            ("m_Z1", Node::int(s.m_z1)),
            ("m_P1", Node::int(s.m_p1)),
        ]));
    }
    Ok(Report {
        tree: Node::map([
            ("name", Node::text(c.domain.name.clone())),
            ("vertices", Node::List(list)),
        ]),
        table: Some(t),
        exit: EXIT_OK,
    })
}

fn cmd_sample(count: usize, seed: u64, cyclic: bool, digits: u32) -> Result<Report> {
    if cyclic {
        let rows = feasibility::sample_cyclic(count, seed);
        let mut t = Table::new(["index", "mu_VE", "mu_EP", "mu_PV"]);
        let mut list = Vec::new();
        for (i, c) in rows.iter().enumerate() {
            t.push([i.to_string(), c.ve.render(), c.ep.render(), c.pv.render()]);
            list.push(Node::map([
                ("mu_VE", Node::Scalar(c.ve.clone())),
                ("mu_EP", Node::Scalar(c.ep.clone())),
                ("mu_PV", Node::Scalar(c.pv.clone())),
            ]));
        }
        return Ok(Report {
            tree: Node::List(list),
            table: Some(t),
            exit: EXIT_OK,
        });
    }
    let rows = feasibility::sample_feasible(count, seed);
    Ok(Report {
        tree: Node::List(rows.iter().map(params_node).collect()),
        table: Some(params_table(&rows, digits)),
        exit: EXIT_OK,
    })
}

/// Executes a parsed invocation.
pub fn execute(cli: &Cli) -> Result<Report> {
    if cli.precision < 15 {
        return Err(Error::InvalidParams(format!(
            "precision must be at least 15, got {}",
            cli.precision
        )));
    }
    let digits = cli.precision;
    match &cli.command {
        Command::Derive(src) => cmd_derive(src),
        Command::Check(src) => cmd_check(src),
        Command::Region {
            kind,
            ve,
            ep,
            pv,
            psi,
            tau,
            resolution,
            ceiling,
        } => cmd_region(*kind, ve, ep, pv, psi, tau, *resolution, ceiling, digits),
        Command::Transform { op } => cmd_transform(op),
        Command::Catalog { op } => cmd_catalog(op),
        Command::Measure { source, obj } => cmd_measure(source, obj),
        Command::Stats { source } => cmd_stats(source),
        Command::Sample { count, seed, cyclic } => cmd_sample(*count, *seed, *cyclic, digits),
    }
}

/// Outcome of a full run: exit status with the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let text = e.render().to_string();
            return if informational {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(r) => Outcome {
            code: r.exit,
            stdout: r.render(cli.format, cli.precision),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
