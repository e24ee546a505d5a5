//! Parameter-level model constructions: stratum, column, central point, mixture.

use crate::error::{Error, Result};
use crate::feasibility::BoundStatus;
use crate::params::{derive, TessParams};
use crate::scalar::Scalar;

/// Parameters of a planar tessellation.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarParams {
    /// Vertices per unit area.
    pub lambda_v: Scalar,
    pub mu_ve: Scalar,
    /// Proportion of π-vertices.
    pub phi: Scalar,
    /// Mean number of π-vertices adjacent to the typical edge.
    pub mu_ev_pi: Option<Scalar>,
    /// Second moment of the vertex degree.
    pub mu_ve2: Option<Scalar>,
}

impl PlanarParams {
    pub fn new(mu_ve: Scalar, phi: Scalar) -> Self {
        PlanarParams {
            lambda_v: Scalar::one(),
            mu_ve,
            phi,
            mu_ev_pi: None,
            mu_ve2: None,
        }
    }

    pub fn with_moments(mut self, mu_ev_pi: Scalar, mu_ve2: Scalar) -> Self {
        self.mu_ev_pi = Some(mu_ev_pi);
        self.mu_ve2 = Some(mu_ve2);
        self
    }

    /// The `n`-spoke subdivided square lattice whose columns are unbounded in `μ_EP`.
    pub fn spoked_squares(n: i64) -> Self {
        let d = 2 * n + 1;
        PlanarParams::new(Scalar::ratio(2 * (4 * n + 1), d), Scalar::ratio(2 * n, d)).with_moments(
            Scalar::ratio(6 * n, 4 * n + 1),
            Scalar::ratio(2 * (4 * n * n + 9 * n + 4), d),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarCheck {
    pub name: &'static str,
    pub value: Scalar,
    pub status: BoundStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarReport {
    pub checks: Vec<PlanarCheck>,
    pub feasible: bool,
}

fn planar_check(name: &'static str, subject: &Scalar, value: Scalar, upper: bool) -> PlanarCheck {
    let ord = subject.compare(&value);
    let ord = if upper { ord.reverse() } else { ord };
    let status = match ord {
        std::cmp::Ordering::Greater => BoundStatus::Satisfied,
        std::cmp::Ordering::Equal => BoundStatus::Boundary,
        std::cmp::Ordering::Less => BoundStatus::Violated,
    };
    PlanarCheck { name, value, status }
}

pub fn planar_validate(p: &PlanarParams) -> PlanarReport {
    let mut checks = vec![
        planar_check("VE_min", &p.mu_ve, Scalar::int(3), false),
        planar_check("VE_max", &p.mu_ve, Scalar::int(6) - &(&p.phi * 2), true),
        planar_check("PHI_min", &p.phi, Scalar::zero(), false),
        planar_check("PHI_max", &p.phi, Scalar::one(), true),
    ];
    if p.lambda_v.signum() <= 0 {
        checks.push(PlanarCheck {
            name: "LAMBDA_positive",
            value: Scalar::zero(),
            status: BoundStatus::Violated,
        });
    }
    if let Some(ev) = &p.mu_ev_pi {
        checks.push(planar_check("EVPI_min", ev, Scalar::zero(), false));
    }
    if let Some(m2) = &p.mu_ve2 {
        checks.push(planar_check("VE2_min", m2, &p.mu_ve * &p.mu_ve, false));
    }
    let feasible = checks.iter().all(|c| c.status != BoundStatus::Violated);
    PlanarReport { checks, feasible }
}

fn require_planar(p: &PlanarParams) -> Result<()> {
    let report = planar_validate(p);
    if report.feasible {
        return Ok(());
    }
    let bad: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| c.status == BoundStatus::Violated)
        .map(|c| c.name)
        .collect();
    Err(Error::InvalidPlanar(bad.join(", ")))
}

/// Unit-depth strata of prisms over a planar tessellation, with no offset between strata.
pub fn stratum(p: &PlanarParams) -> Result<TessParams> {
    require_planar(p)?;
    let v = &p.mu_ve;
    TessParams::new(
        v + 2,
        v * 6 / &(v + 2),
        v * 3 / &(v - 1),
        &p.phi * 2 / &(v + 2),
        Scalar::zero(),
        &p.phi * 2,
        p.phi.clone(),
    )?
    .with_lambda(p.lambda_v.clone())
}

/// Columns over planar cells cut at unit spacing with independent offsets.
pub fn column(p: &PlanarParams) -> Result<TessParams> {
    require_planar(p)?;
    let (Some(ev), Some(m2)) = (&p.mu_ev_pi, &p.mu_ve2) else {
        return Err(Error::InvalidPlanar("column needs mu_EVpi and mu_VE2".into()));
    };
    let v = &p.mu_ve;
    let phi = &p.phi;
    let s = &(v * 3) + m2;
    let ep = &s / &(v * 2);
    let pv = &s * 2 / &(v * 3 - 2);
    let xi = &Scalar::ratio(1, 2) + &(ev / 4);
    let kappa = &(ev / 2) - &(phi / v);
    let psi = &(&(m2 + &(phi * 3)) / v) - &(&Scalar::one() + &(ev / 2));
    let tau = &(&(m2 + phi) / v) - 2;
    for (name, x) in [("kappa", &kappa), ("psi", &psi), ("tau", &tau)] {
        if x.signum() < 0 {
            return Err(Error::NegativeInterior(format!("{name} = {x}")));
        }
    }
    // one vertex per unit height for every (vertex, cell with that corner) pair
    let lambda = &p.lambda_v * &(v - phi);
    TessParams::new(Scalar::int(4), ep, pv, xi, kappa, psi, tau)?.with_lambda(lambda)
}

/// Every cell split into pyramids over its facets with apex at an interior point.
pub fn central_point(p: &TessParams) -> Result<TessParams> {
    let s = derive(p)?;
    let (ve, ep, pv) = (&p.mu_ve, &p.mu_ep, &p.mu_pv);
    let (xi, kappa, psi, tau) = (&p.xi, &p.kappa, &p.psi, &p.tau);
    let vep = ve * ep;
    let kp2 = (kappa + psi) * 2;
    // VE'EP' − PV'(VE' − 4)
    let d = &vep - &(pv * &(ve - 4));
    let n_ep = &(&(&vep * 4) - &(ve * xi * 3)) - &(psi * 4);

    let out_ve = &(pv * 2) * &(&(&(ve - 4) - &vep) + &kp2) / &-&d;
    let out_ep = &n_ep / &(&(&(&Scalar::int(4) - ve) + &vep) - &kp2);
    let out_pv = pv * &n_ep / &(&(&vep * &(pv + 1)) - &(pv * &(&(ve * xi) + &(psi * 2))));
    let out_xi = &(ve * xi) / &(&(&(ve * &(ep - 1)) + 4) - &kp2);
    let out_kappa = pv * 2 * kappa / &d;
    let out_psi = pv * 4 * psi / &d;
    let out_tau = &(pv * 2) * &(tau + psi) / &d;
    let lambda = &p.lambda_v + &s.lambda_z;
    TessParams::new(out_ve, out_ep, out_pv, out_xi, out_kappa, out_psi, out_tau)?.with_lambda(lambda)
}

/// `n` successive central-point constructions, starting value excluded.
pub fn iterate_central_point(p: &TessParams, n: usize) -> Result<Vec<TessParams>> {
    let mut out = Vec::with_capacity(n);
    let mut cur = p.clone();
    for _ in 0..n {
        cur = central_point(&cur)?;
        out.push(cur.clone());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureComponent {
    pub params: TessParams,
    pub share: Scalar,
}

/// Superposition in which each component is realised with its share.
pub fn mixture(components: &[MixtureComponent]) -> Result<TessParams> {
    if components.is_empty() {
        return Err(Error::InvalidShares("no components".into()));
    }
    let total: Scalar = components.iter().map(|c| c.share.clone()).sum();
    if !total.approx_eq(&Scalar::one()) {
        return Err(Error::InvalidShares(format!("shares sum to {total}")));
    }
    if let Some(c) = components
        .iter()
        .find(|c| c.share.signum() < 0 || c.share.gt(&Scalar::one()))
    {
        return Err(Error::InvalidShares(format!("share {} outside [0, 1]", c.share)));
    }
    let derived = components
        .iter()
        .map(|c| derive(&c.params))
        .collect::<Result<Vec<_>>>()?;

    let weighted = |lambda: &dyn Fn(usize) -> Scalar, value: &dyn Fn(&TessParams) -> Scalar| {
        let mut num = Scalar::zero();
        let mut den = Scalar::zero();
        for (i, c) in components.iter().enumerate() {
            let w = &c.share * &lambda(i);
            num = &num + &(&w * &value(&c.params));
            den = &den + &w;
        }
        num / den
    };
    let lv = |i: usize| components[i].params.lambda_v.clone();
    let le = |i: usize| derived[i].lambda_e.clone();
    let lp = |i: usize| derived[i].lambda_p.clone();

    let lambda_v: Scalar = components.iter().map(|c| &c.share * &c.params.lambda_v).sum();
    let ve = weighted(&lv, &|p| p.mu_ve.clone());
    let kappa = weighted(&lv, &|p| p.kappa.clone());
    let psi = weighted(&lv, &|p| p.psi.clone());
    let tau = weighted(&lv, &|p| p.tau.clone());
    let ep = weighted(&le, &|p| p.mu_ep.clone());
    let xi = weighted(&le, &|p| p.xi.clone());
    let pv = weighted(&lp, &|p| p.mu_pv.clone());
    TessParams::new(ve, ep, pv, xi, kappa, psi, tau)?.with_lambda(lambda_v)
}

/// Locus of `(VE, EP)` over all mixing shares of two models.
#[derive(Debug, Clone, PartialEq)]
pub enum MixtureCurve {
    /// `EP = a − b/VE`.
    Curve {
        a: Scalar,
        b: Scalar,
    },
    Vertical {
        ve: Scalar,
        ep_low: Scalar,
        ep_high: Scalar,
    },
    Point {
        ve: Scalar,
        ep: Scalar,
    },
}

impl MixtureCurve {
    /// `EP` on the curve at `ve`; `None` for the degenerate cases.
    pub fn ep_at(&self, ve: &Scalar) -> Option<Scalar> {
        match self {
            MixtureCurve::Curve { a, b } => Some(a - &(b / ve)),
            _ => None,
        }
    }
}

pub fn mixture_curve(p1: &TessParams, p2: &TessParams) -> MixtureCurve {
    let (v1, e1, v2, e2) = (&p1.mu_ve, &p1.mu_ep, &p2.mu_ve, &p2.mu_ep);
    if v1.approx_eq(v2) {
        if e1.approx_eq(e2) {
            return MixtureCurve::Point {
                ve: v1.clone(),
                ep: e1.clone(),
            };
        }
        return MixtureCurve::Vertical {
            ve: v1.clone(),
            ep_low: e1.clone().min(e2.clone()),
            ep_high: e1.clone().max(e2.clone()),
        };
    }
    let dv = v1 - v2;
    let a = &(&(e1 * v1) - &(e2 * v2)) / &dv;
    let b = &(&(e1 - e2) * &(v1 * v2)) / &dv;
    MixtureCurve::Curve { a, b }
}
