//! Membership in the permissible parameter region and its intermediate bounds.

mod region;
mod sample;

pub use region::{
    clip_halfplane, polygon_contains, psi_tau_polygon, region_psi_tau, region_pv_ep, subdivide, RegionPolyline, Zone,
    DEFAULT_EP_CEILING,
};
pub use sample::{sample_cyclic, sample_feasible};

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::TessParams;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundName {
    VeMin,
    EpMin,
    EpFtfMax,
    PvMin,
    PvNonftfLower,
    PvUpper,
    PsiMin,
    PsiMaxR1,
    PsiMaxR2,
    TauLowerPt,
    TauLowerShift,
    TauLowerCurve,
    TauUpperPsi,
    TauUpperNuPs,
    KappaMaxK,
    XiLowerL1,
    XiLowerL2,
    XiUpperU1,
    XiUpperU2,
    XiUpperU3,
    XiPositive,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        use BoundName::*;
        match self {
            VeMin => "VE_min",
            EpMin => "EP_min",
            EpFtfMax => "EP_ftf_max",
            PvMin => "PV_min",
            PvNonftfLower => "PV_nonftf_lower",
            PvUpper => "PV_upper",
            PsiMin => "PSI_min",
            PsiMaxR1 => "PSI_max_R1",
            PsiMaxR2 => "PSI_max_R2",
            TauLowerPt => "TAU_lower_pt",
            TauLowerShift => "TAU_lower_shift",
            TauLowerCurve => "TAU_lower_curve",
            TauUpperPsi => "TAU_upper_psi",
            TauUpperNuPs => "TAU_upper_nuPS",
            KappaMaxK => "KAPPA_max_K",
            XiLowerL1 => "XI_lower_L1",
            XiLowerL2 => "XI_lower_L2",
            XiUpperU1 => "XI_upper_U1",
            XiUpperU2 => "XI_upper_U2",
            XiUpperU3 => "XI_upper_U3",
            XiPositive => "XI_positive",
        }
    }

    /// Parameter the bound constrains.
    pub fn subject(self) -> &'static str {
        use BoundName::*;
        match self {
            VeMin => "mu_VE",
            EpMin | EpFtfMax => "mu_EP",
            PvMin | PvNonftfLower | PvUpper => "mu_PV",
            PsiMin | PsiMaxR1 | PsiMaxR2 => "psi",
            TauLowerPt | TauLowerShift | TauLowerCurve | TauUpperPsi | TauUpperNuPs => "tau",
            KappaMaxK => "kappa",
            XiLowerL1 | XiLowerL2 | XiUpperU1 | XiUpperU2 | XiUpperU3 | XiPositive => "xi",
        }
    }

    pub fn is_upper(self) -> bool {
        use BoundName::*;
        matches!(
            self,
            EpFtfMax
                | PvUpper
                | PsiMaxR1
                | PsiMaxR2
                | TauUpperPsi
                | TauUpperNuPs
                | KappaMaxK
                | XiUpperU1
                | XiUpperU2
                | XiUpperU3
        )
    }

    pub fn is_strict(self) -> bool {
        matches!(
            self,
            BoundName::PvNonftfLower | BoundName::PvUpper | BoundName::XiPositive
        )
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundStatus {
    Satisfied,
    Boundary,
    Violated,
    Inapplicable,
}

impl BoundStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundStatus::Satisfied => "satisfied",
            BoundStatus::Boundary => "boundary",
            BoundStatus::Violated => "violated",
            BoundStatus::Inapplicable => "inapplicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub name: BoundName,
    /// Threshold the subject parameter is compared with.
    pub value: Scalar,
    pub strict: bool,
    pub status: BoundStatus,
}

impl Bound {
    /// Evaluates `subject` against `value`. Exact ties on strict bounds are violations;
    /// tolerance ties of evaluated scalars never are.
    pub fn check(name: BoundName, subject: &Scalar, value: Scalar) -> Bound {
        let strict = name.is_strict();
        let exact = subject.is_exact() && value.is_exact();
        let ord = subject.compare(&value);
        let ord = if name.is_upper() { ord.reverse() } else { ord };
        let status = match ord {
            Ordering::Greater => BoundStatus::Satisfied,
            Ordering::Less => BoundStatus::Violated,
            Ordering::Equal if !strict => BoundStatus::Boundary,
            Ordering::Equal if exact => BoundStatus::Violated,
            Ordering::Equal => BoundStatus::Satisfied,
        };
        Bound {
            name,
            value,
            strict,
            status,
        }
    }

    pub fn inapplicable(name: BoundName, value: Scalar) -> Bound {
        Bound {
            name,
            value,
            strict: name.is_strict(),
            status: BoundStatus::Inapplicable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    FacetToFacet,
    NonFacetToFacet,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::FacetToFacet => "facet_to_facet",
            Regime::NonFacetToFacet => "non_facet_to_facet",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub regime: Regime,
    pub bounds: Vec<Bound>,
    pub feasible: bool,
    pub boundary_flags: Vec<BoundName>,
}

impl FeasibilityReport {
    pub fn bound(&self, name: BoundName) -> Option<&Bound> {
        self.bounds.iter().find(|b| b.name == name)
    }

    pub fn violations(&self) -> Vec<&Bound> {
        self.bounds
            .iter()
            .filter(|b| b.status == BoundStatus::Violated)
            .collect()
    }

    fn new(regime: Regime, bounds: Vec<Bound>) -> Self {
        let feasible = bounds.iter().all(|b| b.status != BoundStatus::Violated);
        let boundary_flags = bounds
            .iter()
            .filter(|b| b.status == BoundStatus::Boundary)
            .map(|b| b.name)
            .collect();
        FeasibilityReport {
            regime,
            bounds,
            feasible,
            boundary_flags,
        }
    }
}

/// The three cyclic parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Cyclic {
    pub ve: Scalar,
    pub ep: Scalar,
    pub pv: Scalar,
}

impl Cyclic {
    pub fn new(ve: Scalar, ep: Scalar, pv: Scalar) -> Self {
        Cyclic { ve, ep, pv }
    }

    pub fn of(p: &TessParams) -> Self {
        Cyclic::new(p.mu_ve.clone(), p.mu_ep.clone(), p.mu_pv.clone())
    }

    /// `6(1 − 2/VE)`, the fundamental curve at this `VE`.
    pub fn curve(&self) -> Scalar {
        fundamental_curve(&self.ve)
    }

    /// `VE·EP/(VE−2)`.
    pub fn pv_upper(&self) -> Scalar {
        &self.ve * &self.ep / &(&self.ve - 2)
    }

    /// `VE·EP/(2(VE−2))`.
    pub fn pv_nonftf_lower(&self) -> Scalar {
        &self.ve * &self.ep / &((&self.ve - 2) * 2)
    }

    /// `2VE·EP/(3VE−8)`, where the two ψ ceilings meet.
    pub fn crossover(&self) -> Scalar {
        &self.ve * &self.ep * 2 / &(&self.ve * 3 - 8)
    }

    pub fn r1(&self) -> Scalar {
        &(&self.ve - 2) + &(&self.ve * &self.ep / 2 * (Scalar::one() - Scalar::int(4) / &self.pv))
    }

    pub fn r2(&self) -> Scalar {
        &(&self.ve / 4) + &(&self.ve * &self.ep / 2 * (Scalar::one() - Scalar::int(3) / &self.pv))
    }

    /// `½·VE·EP(1 − 3/PV)`, the plate-side ceiling on τ.
    pub fn tau_nu_ps(&self) -> Scalar {
        &self.ve * &self.ep / 2 * (Scalar::one() - Scalar::int(3) / &self.pv)
    }

    /// Cyclic bounds for the non-facet-to-facet regime.
    pub fn nonftf_bounds(&self) -> Vec<Bound> {
        use BoundName::*;
        let mut out = vec![
            Bound::check(VeMin, &self.ve, Scalar::int(4)),
            Bound::check(EpMin, &self.ep, Scalar::int(3)),
        ];
        if self.ve.signum() > 0 && self.ve.gt(&Scalar::int(2)) {
            let below = self.ep.lt(&self.curve());
            if below {
                out.push(Bound::check(PvMin, &self.pv, Scalar::int(3)));
                out.push(Bound::inapplicable(PvNonftfLower, self.pv_nonftf_lower()));
            } else {
                out.push(Bound::inapplicable(PvMin, Scalar::int(3)));
                out.push(Bound::check(PvNonftfLower, &self.pv, self.pv_nonftf_lower()));
            }
            out.push(Bound::check(PvUpper, &self.pv, self.pv_upper()));
        }
        out
    }

    fn require_nonftf(&self) -> Result<()> {
        let bad: Vec<String> = self
            .nonftf_bounds()
            .iter()
            .filter(|b| b.status == BoundStatus::Violated)
            .map(|b| b.name.to_string())
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InfeasibleCyclic(bad.join(", ")))
        }
    }
}

pub fn fundamental_curve(ve: &Scalar) -> Scalar {
    (Scalar::one() - Scalar::int(2) / ve) * 6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiBranch {
    R1,
    R2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiInterval {
    pub lower: Scalar,
    pub upper: Scalar,
    pub branch: PsiBranch,
    pub crossover: Scalar,
}

pub fn psi_interval(c: &Cyclic) -> Result<PsiInterval> {
    c.require_nonftf()?;
    let crossover = c.crossover();
    let (upper, branch) = if c.pv.le(&crossover) {
        (c.r1(), PsiBranch::R1)
    } else {
        (c.r2(), PsiBranch::R2)
    };
    Ok(PsiInterval {
        lower: Scalar::zero(),
        upper,
        branch,
        crossover,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauInterval {
    pub lower: Scalar,
    pub upper: Scalar,
    pub empty: bool,
}

/// The three lower and two upper τ bounds, in report order.
fn tau_terms(c: &Cyclic, psi: &Scalar) -> ([Scalar; 3], [Scalar; 2]) {
    let pt = psi - &(&c.ve / 2);
    let curve = psi / 2 + &(&c.ve / 4 * (&c.ep - &c.curve()));
    ([pt, Scalar::zero(), curve], [psi.clone(), c.tau_nu_ps()])
}

pub fn tau_interval(c: &Cyclic, psi: &Scalar) -> Result<TauInterval> {
    c.require_nonftf()?;
    let (lows, highs) = tau_terms(c, psi);
    let lower = lows.into_iter().reduce(Scalar::max).expect("three terms");
    let upper = highs.into_iter().reduce(Scalar::min).expect("two terms");
    let empty = lower.gt(&upper);
    Ok(TauInterval { lower, upper, empty })
}

/// `ξ = intercept + slope·κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub intercept: Scalar,
    pub slope: Scalar,
}

impl Line {
    pub fn at(&self, kappa: &Scalar) -> Scalar {
        &self.intercept + &(&self.slope * kappa)
    }
}

/// All bounding lines of the (κ, ξ) view for fixed cyclic parameters, ψ and τ.
#[derive(Debug, Clone, PartialEq)]
pub struct XiLines {
    /// Ceiling on κ.
    pub k: Scalar,
    pub l1: Line,
    pub l2: Line,
    pub u1: Line,
    pub u2: Line,
    pub u3: Line,
}

impl XiLines {
    pub fn new(c: &Cyclic, psi: &Scalar, tau: &Scalar) -> Self {
        let ve = &c.ve;
        let one = Scalar::one();
        let k = &c.r1() - psi;
        let l1 = Line {
            intercept: (psi - tau) * 2 / ve,
            slope: Scalar::int(3) / ve,
        };
        let l2 = Line {
            intercept: &(psi * 4 / ve) - &(&c.ep * 2 * (&one - &(Scalar::int(3) / &c.pv))),
            slope: Scalar::int(6) / ve,
        };
        let u1 = Line {
            intercept: &(&c.curve() + &(&c.ep * (&one - &(Scalar::int(6) / &c.pv)))) - &(psi * 2 / ve),
            slope: Scalar::zero(),
        };
        let u2 = Line {
            intercept: &((&one - &(Scalar::int(2) / ve)) * 4) - &(&c.ep * 2 / &c.pv),
            slope: Scalar::int(2) / ve,
        };
        let u3 = Line {
            intercept: &(Scalar::int(3) - &(&c.ep / 2)) + &((psi - 6) / ve),
            slope: Scalar::int(3) / ve,
        };
        XiLines { k, l1, l2, u1, u2, u3 }
    }

    /// `(K, U1)`, where K, U1, U2, U3 and L2 meet.
    pub fn common_point(&self) -> (Scalar, Scalar) {
        (self.k.clone(), self.u1.intercept.clone())
    }

    pub fn kappa_max(&self) -> Scalar {
        Scalar::one().min(self.k.clone())
    }

    pub fn xi_lower_at(&self, kappa: &Scalar) -> Scalar {
        self.l1.at(kappa).max(self.l2.at(kappa))
    }

    pub fn xi_upper_at(&self, kappa: &Scalar) -> Scalar {
        Scalar::one().min(self.u3.at(kappa))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionShape {
    Empty,
    Point,
    Segment,
    TwoDimensional,
}

impl RegionShape {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionShape::Empty => "empty",
            RegionShape::Point => "point",
            RegionShape::Segment => "segment",
            RegionShape::TwoDimensional => "two_dimensional",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaXiRegion {
    pub lines: XiLines,
    pub kappa_max: Scalar,
    /// Vertices `(κ, ξ)` of the closed region before removing `ξ = 0`.
    pub vertices: Vec<(Scalar, Scalar)>,
    pub shape: RegionShape,
}

/// Region for `(κ, ξ)` once the other five parameters are fixed.
pub fn kappa_xi_region(c: &Cyclic, psi: &Scalar, tau: &Scalar) -> Result<KappaXiRegion> {
    c.require_nonftf()
        .map_err(|e| Error::InfeasibleUpstream(e.to_string()))?;
    let psi_iv = psi_interval(c)?;
    if psi.lt(&psi_iv.lower) || psi.gt(&psi_iv.upper) {
        return Err(Error::InfeasibleUpstream(format!(
            "psi = {psi} outside [{}, {}]",
            psi_iv.lower, psi_iv.upper
        )));
    }
    // the curve term of the τ floor is L1 ≤ U3 itself and shows up as an empty region
    let ([pt, shift, _], highs) = tau_terms(c, psi);
    let lower = pt.max(shift);
    let upper = highs.into_iter().reduce(Scalar::min).expect("two terms");
    if tau.lt(&lower) || tau.gt(&upper) {
        return Err(Error::InfeasibleUpstream(format!(
            "tau = {tau} outside [{lower}, {upper}]"
        )));
    }
    let lines = XiLines::new(c, psi, tau);
    let kappa_max = lines.kappa_max();
    let zero = Scalar::zero();
    let one = Scalar::one();
    let mut poly = vec![
        (zero.clone(), zero.clone()),
        (kappa_max.clone(), zero.clone()),
        (kappa_max.clone(), one.clone()),
        (zero.clone(), one.clone()),
    ];
    if kappa_max.lt(&zero) {
        poly.clear();
    }
    // ξ − (a + bκ) ≥ 0 and (a + bκ) − ξ ≥ 0 in the form p·κ + q·ξ + r ≥ 0
    for line in [&lines.l1, &lines.l2] {
        poly = clip_halfplane(&poly, &-&line.slope, &one, &-&line.intercept);
    }
    poly = clip_halfplane(&poly, &lines.u3.slope, &-&one, &lines.u3.intercept);
    let shape = classify_shape(&poly);
    let shape = match shape {
        RegionShape::Point | RegionShape::Segment if poly.iter().all(|(_, xi)| xi.is_zero()) => RegionShape::Empty,
        s => s,
    };
    Ok(KappaXiRegion {
        lines,
        kappa_max,
        vertices: poly,
        shape,
    })
}

fn classify_shape(poly: &[(Scalar, Scalar)]) -> RegionShape {
    match poly.len() {
        0 => RegionShape::Empty,
        1 => RegionShape::Point,
        2 => RegionShape::Segment,
        _ => {
            let (x0, y0) = &poly[0];
            let (x1, y1) = &poly[1];
            let collinear = poly[2..].iter().all(|(x, y)| {
                let cross = &(&(x1 - x0) * &(y - y0)) - &(&(y1 - y0) * &(x - x0));
                cross.approx_eq(&Scalar::zero())
            });
            if collinear {
                RegionShape::Segment
            } else {
                RegionShape::TwoDimensional
            }
        }
    }
}

/// Full bound report for a parameter tuple.
pub fn classify(p: &TessParams) -> Result<FeasibilityReport> {
    use BoundName::*;
    p.validate()?;
    let c = Cyclic::of(p);
    if p.is_ftf() {
        let mut bounds = vec![
            Bound::check(VeMin, &c.ve, Scalar::int(4)),
            Bound::check(EpMin, &c.ep, Scalar::int(3)),
        ];
        if c.ve.gt(&Scalar::int(2)) {
            bounds.push(Bound::check(EpFtfMax, &c.ep, c.curve()));
            bounds.push(Bound::check(PvMin, &c.pv, Scalar::int(3)));
            bounds.push(Bound::inapplicable(PvNonftfLower, c.pv_nonftf_lower()));
            bounds.push(Bound::check(PvUpper, &c.pv, c.pv_upper()));
        }
        return Ok(FeasibilityReport::new(Regime::FacetToFacet, bounds));
    }

    let mut bounds = c.nonftf_bounds();
    if !c.ve.gt(&Scalar::int(2)) {
        return Ok(FeasibilityReport::new(Regime::NonFacetToFacet, bounds));
    }
    bounds.insert(2, Bound::inapplicable(EpFtfMax, c.curve()));
    let (psi, tau, kappa, xi) = (&p.psi, &p.tau, &p.kappa, &p.xi);

    bounds.push(Bound::check(PsiMin, psi, Scalar::zero()));
    let crossover = c.crossover();
    let r1 = c.r1();
    let r2 = c.r2();
    bounds.push(if c.pv.le(&crossover) {
        Bound::check(PsiMaxR1, psi, r1)
    } else {
        Bound::inapplicable(PsiMaxR1, r1)
    });
    bounds.push(if c.pv.ge(&crossover) {
        Bound::check(PsiMaxR2, psi, r2)
    } else {
        Bound::inapplicable(PsiMaxR2, r2)
    });

    let ([pt, shift, curve], [up_psi, up_nu]) = tau_terms(&c, psi);
    bounds.push(Bound::check(TauLowerPt, tau, pt));
    bounds.push(Bound::check(TauLowerShift, tau, shift));
    bounds.push(Bound::check(TauLowerCurve, tau, curve));
    bounds.push(Bound::check(TauUpperPsi, tau, up_psi));
    bounds.push(Bound::check(TauUpperNuPs, tau, up_nu));

    let lines = XiLines::new(&c, psi, tau);
    bounds.push(Bound::check(KappaMaxK, kappa, lines.k.clone()));
    bounds.push(Bound::check(XiLowerL1, xi, lines.l1.at(kappa)));
    bounds.push(Bound::check(XiLowerL2, xi, lines.l2.at(kappa)));
    bounds.push(Bound::check(XiUpperU1, xi, lines.u1.at(kappa)));
    bounds.push(Bound::check(XiUpperU2, xi, lines.u2.at(kappa)));
    bounds.push(Bound::check(XiUpperU3, xi, lines.u3.at(kappa)));
    bounds.push(Bound::check(XiPositive, xi, Scalar::zero()));
    Ok(FeasibilityReport::new(Regime::NonFacetToFacet, bounds))
}
