//! The seven fundamental parameters and every quantity derived from them.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Field names in canonical order, as used by every text and JSON encoding.
pub const PARAM_NAMES: [&str; 8] = ["lambda_V", "mu_VE", "mu_EP", "mu_PV", "xi", "kappa", "psi", "tau"];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TessParams {
    pub lambda_v: Scalar,
    pub mu_ve: Scalar,
    pub mu_ep: Scalar,
    pub mu_pv: Scalar,
    pub xi: Scalar,
    pub kappa: Scalar,
    pub psi: Scalar,
    pub tau: Scalar,
}

impl TessParams {
    /// Seven parameters at unit vertex intensity.
    pub fn new(
        mu_ve: Scalar,
        mu_ep: Scalar,
        mu_pv: Scalar,
        xi: Scalar,
        kappa: Scalar,
        psi: Scalar,
        tau: Scalar,
    ) -> Result<Self> {
        let p = TessParams {
            lambda_v: Scalar::one(),
            mu_ve,
            mu_ep,
            mu_pv,
            xi,
            kappa,
            psi,
            tau,
        };
        p.validate()?;
        Ok(p)
    }

    /// Facet-to-facet parameters: all interior values zero.
    pub fn cyclic(mu_ve: Scalar, mu_ep: Scalar, mu_pv: Scalar) -> Result<Self> {
        TessParams::new(
            mu_ve,
            mu_ep,
            mu_pv,
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
        )
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(values: [(i64, i64); 7]) -> Result<Self> {
        let s: Vec<Scalar> = values.iter().map(|&(p, q)| Scalar::ratio(p, q)).collect();
        let [ve, ep, pv, xi, ka, ps, ta]: [Scalar; 7] = s.try_into().expect("seven values");
        TessParams::new(ve, ep, pv, xi, ka, ps, ta)
    }

    pub fn with_lambda(mut self, lambda_v: Scalar) -> Result<Self> {
        self.lambda_v = lambda_v;
        self.validate()?;
        Ok(self)
    }

    /// Builds from values in [`PARAM_NAMES`] order.
    pub fn from_array(values: [Scalar; 8]) -> Result<Self> {
        let [lambda_v, mu_ve, mu_ep, mu_pv, xi, kappa, psi, tau] = values;
        let p = TessParams {
            lambda_v,
            mu_ve,
            mu_ep,
            mu_pv,
            xi,
            kappa,
            psi,
            tau,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn values(&self) -> [&Scalar; 8] {
        [
            &self.lambda_v,
            &self.mu_ve,
            &self.mu_ep,
            &self.mu_pv,
            &self.xi,
            &self.kappa,
            &self.psi,
            &self.tau,
        ]
    }

    pub fn named(&self) -> Vec<(&'static str, &Scalar)> {
        PARAM_NAMES.iter().copied().zip(self.values()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda_V", &self.lambda_v),
            ("mu_VE", &self.mu_ve),
            ("mu_EP", &self.mu_ep),
            ("mu_PV", &self.mu_pv),
        ];
        for (name, v) in positive {
            if v.signum() <= 0 {
                return Err(Error::InvalidParams(format!("{name} = {v} must be positive")));
            }
        }
        for (name, v) in [
            ("xi", &self.xi),
            ("kappa", &self.kappa),
            ("psi", &self.psi),
            ("tau", &self.tau),
        ] {
            if v.signum() < 0 {
                return Err(Error::InvalidParams(format!("{name} = {v} must be non-negative")));
            }
        }
        for (name, v) in [("xi", &self.xi), ("kappa", &self.kappa)] {
            if v.gt(&Scalar::one()) {
                return Err(Error::InvalidParams(format!("{name} = {v} exceeds 1")));
            }
        }
        Ok(())
    }

    /// True when every interior parameter vanishes.
    pub fn is_ftf(&self) -> bool {
        self.xi.is_zero() && self.kappa.is_zero() && self.psi.is_zero() && self.tau.is_zero()
    }

    pub fn f(&self, x: &Scalar) -> Scalar {
        &self.mu_ve * &self.mu_ep - x * &(&self.mu_ve - 2)
    }

    /// Every field evaluated to `digits` significant digits.
    pub fn evaluate(&self, digits: u32) -> TessParams {
        TessParams {
            lambda_v: self.lambda_v.evaluate(digits),
            mu_ve: self.mu_ve.evaluate(digits),
            mu_ep: self.mu_ep.evaluate(digits),
            mu_pv: self.mu_pv.evaluate(digits),
            xi: self.xi.evaluate(digits),
            kappa: self.kappa.evaluate(digits),
            psi: self.psi.evaluate(digits),
            tau: self.tau.evaluate(digits),
        }
    }

    /// Same parameters with the vertex intensity dropped back to 1.
    pub fn scale_free(&self) -> TessParams {
        TessParams {
            lambda_v: Scalar::one(),
            ..self.clone()
        }
    }
}

impl fmt::Display for TessParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.named().iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn f_eval(params: &TessParams, x: &Scalar) -> Scalar {
    params.f(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    V,
    E,
    P,
    Z,
}

impl Class {
    pub const ALL: [Class; 4] = [Class::V, Class::E, Class::P, Class::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Class::V => 'V',
            Class::E => 'E',
            Class::P => 'P',
            Class::Z => 'Z',
        }
    }
}

/// `μ_XY` indexed by `[X][Y]` over V, E, P, Z; diagonal entries are 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjacency(pub [[Scalar; 4]; 4]);

impl Adjacency {
    pub fn get(&self, x: Class, y: Class) -> &Scalar {
        &self.0[x.index()][y.index()]
    }

    /// Off-diagonal entries as `("mu_XY", value)` in row-major order.
    pub fn named(&self) -> Vec<(String, &Scalar)> {
        let mut out = Vec::new();
        for x in Class::ALL {
            for y in Class::ALL {
                if x != y {
                    out.push((format!("mu_{}{}", x.letter(), y.letter()), self.get(x, y)));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedSummary {
    pub params: TessParams,
    pub f2: Scalar,
    pub f_pv: Scalar,
    pub lambda_e: Scalar,
    pub lambda_p: Scalar,
    pub lambda_z: Scalar,
    pub adjacency: Adjacency,
    pub lambda_z2: Scalar,
    pub lambda_z1: Scalar,
    pub lambda_z0: Scalar,
    pub lambda_z2_sides: Scalar,
    pub lambda_p_sides: Scalar,
    pub nu0_z: Scalar,
    pub nu1_z: Scalar,
    pub nu2_z: Scalar,
    pub nu_fs: Scalar,
    pub nu_ps: Scalar,
    pub mu_ve_pi: Scalar,
}

impl DerivedSummary {
    pub fn lambda(&self, x: Class) -> &Scalar {
        match x {
            Class::V => &self.params.lambda_v,
            Class::E => &self.lambda_e,
            Class::P => &self.lambda_p,
            Class::Z => &self.lambda_z,
        }
    }

    pub fn mu(&self, x: Class, y: Class) -> &Scalar {
        self.adjacency.get(x, y)
    }

    /// Every derived field by name, in a fixed order.
    pub fn named(&self) -> Vec<(String, Scalar)> {
        let mut out: Vec<(String, Scalar)> = vec![
            ("f2".into(), self.f2.clone()),
            ("f_PV".into(), self.f_pv.clone()),
            ("lambda_V".into(), self.params.lambda_v.clone()),
            ("lambda_E".into(), self.lambda_e.clone()),
            ("lambda_P".into(), self.lambda_p.clone()),
            ("lambda_Z".into(), self.lambda_z.clone()),
        ];
        out.extend(self.adjacency.named().into_iter().map(|(k, v)| (k, v.clone())));
        out.extend([
            ("lambda_Z2".into(), self.lambda_z2.clone()),
            ("lambda_Z1".into(), self.lambda_z1.clone()),
            ("lambda_Z0".into(), self.lambda_z0.clone()),
            ("lambda_Z2_sides".into(), self.lambda_z2_sides.clone()),
            ("lambda_P_sides".into(), self.lambda_p_sides.clone()),
            ("nu0_Z".into(), self.nu0_z.clone()),
            ("nu1_Z".into(), self.nu1_z.clone()),
            ("nu2_Z".into(), self.nu2_z.clone()),
            ("nu_FS".into(), self.nu_fs.clone()),
            ("nu_PS".into(), self.nu_ps.clone()),
            ("mu_VEpi".into(), self.mu_ve_pi.clone()),
        ]);
        out
    }
}

pub fn derive(params: &TessParams) -> Result<DerivedSummary> {
    let TessParams {
        lambda_v: lv,
        mu_ve: ve,
        mu_ep: ep,
        mu_pv: pv,
        xi,
        kappa,
        psi,
        tau,
    } = params;
    let f2 = params.f(&Scalar::int(2));
    let f_pv = params.f(pv);
    if f_pv.signum() <= 0 {
        return Err(Error::DegenerateCellIntensity(f_pv.render()));
    }
    let ve_ep = ve * ep;
    let one = Scalar::one();

    let lambda_e = lv * ve / 2;
    let lambda_p = lv * &ve_ep / &(pv * 2);
    let lambda_z = lv * &f_pv / &(pv * 2);

    let mu_zv = pv * &f2 / &f_pv;
    let mu_ze = &ve_ep * pv / &f_pv;
    let mu_zp = &ve_ep * 2 / &f_pv;
    let adjacency = Adjacency([
        [one.clone(), ve.clone(), &ve_ep / 2, &f2 / 2],
        [Scalar::int(2), one.clone(), ep.clone(), ep.clone()],
        [pv.clone(), pv.clone(), one.clone(), Scalar::int(2)],
        [mu_zv.clone(), mu_ze.clone(), mu_zp.clone(), one],
    ]);

    let xi_ve = xi * ve;
    let facet_term = &xi_ve - &(kappa * 2);
    let lambda_z2 = lv * &(&(&ve_ep * 2) - &(pv * &facet_term)) / &(pv * 2);
    let side_count = &(ve * &(ep - xi)) - &(psi * 2);
    let lambda_z1 = lv * &side_count / 2;
    let lambda_z0 = lv * &(&(&f2 / 2) - kappa - psi);
    let lambda_z2_sides = lv * &side_count;
    let lambda_p_sides = lv * &(&ve_ep - &(tau * 2)) / 2;

    let pv_over_f = pv / &f_pv;
    let nu0_z = &mu_zv - &(&pv_over_f * &((kappa + psi) * 2));
    let nu1_z = &mu_ze - &(&pv_over_f * &(&xi_ve + &(psi * 2)));
    let nu2_z = &mu_zp - &(&pv_over_f * &facet_term);
    let nu_fs = pv * 2 * &side_count / &(&(&ve_ep * 2) - &(pv * &facet_term));
    let nu_ps = pv * &(Scalar::one() - &(tau * 2) / &ve_ep);

    Ok(DerivedSummary {
        params: params.clone(),
        f2,
        f_pv,
        lambda_e,
        lambda_p,
        lambda_z,
        adjacency,
        lambda_z2,
        lambda_z1,
        lambda_z0,
        lambda_z2_sides,
        lambda_p_sides,
        nu0_z,
        nu1_z,
        nu2_z,
        nu_fs,
        nu_ps,
        mu_ve_pi: xi_ve,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual {
    pub name: String,
    /// Left-hand side minus right-hand side.
    pub residual: Scalar,
    pub holds: bool,
}

fn residual(name: impl Into<String>, lhs: Scalar, rhs: Scalar) -> IdentityResidual {
    let holds = lhs.approx_eq(&rhs);
    IdentityResidual {
        name: name.into(),
        residual: &lhs - &rhs,
        holds,
    }
}

/// Residuals of the Euler-type linear identities, the pairwise symmetry
/// `λ_X μ_XY = λ_Y μ_YX`, the cell Euler relation and the π-edge linkage.
pub fn check_identities(s: &DerivedSummary) -> Vec<IdentityResidual> {
    use Class::*;
    let mut out = vec![
        residual(
            "euler_intensity",
            &(s.lambda(V) - s.lambda(E)) + s.lambda(P),
            s.lambda(Z).clone(),
        ),
        residual("euler_vertex", &(s.mu(V, E) - s.mu(V, P)) + s.mu(V, Z), Scalar::int(2)),
        residual("euler_cell", &(s.mu(Z, V) - s.mu(Z, E)) + s.mu(Z, P), Scalar::int(2)),
    ];
    for (i, x) in Class::ALL.iter().enumerate() {
        for y in &Class::ALL[i + 1..] {
            out.push(residual(
                format!("symmetry_{}{}", x.letter(), y.letter()),
                s.lambda(*x) * s.mu(*x, *y),
                s.lambda(*y) * s.mu(*y, *x),
            ));
        }
    }
    out.push(residual(
        "euler_cell_faces",
        &(&s.nu0_z - &s.nu1_z) + &s.nu2_z,
        Scalar::int(2),
    ));
    out.push(residual(
        "xi_linkage",
        &s.params.lambda_v * &s.mu_ve_pi,
        &s.lambda_e * &s.params.xi * 2,
    ));
    out
}

pub fn identity_violations(s: &DerivedSummary) -> Vec<IdentityResidual> {
    check_identities(s).into_iter().filter(|r| !r.holds).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::ratio(p, d)
    }

    fn cubic() -> TessParams {
        TessParams::cyclic(Scalar::int(6), Scalar::int(4), Scalar::int(4)).unwrap()
    }

    #[test]
    fn f_values() {
        let p = cubic();
        assert_eq!(f_eval(&p, &Scalar::int(2)), Scalar::int(16));
        assert_eq!(f_eval(&p, &Scalar::int(4)), Scalar::int(8));
        let v = TessParams::cyclic(Scalar::int(4), Scalar::int(3), Scalar::int(5)).unwrap();
        assert_eq!(f_eval(&v, &Scalar::zero()), Scalar::int(12));
    }

    #[test]
    fn cubic_lattice_summary() {
        let s = derive(&cubic()).unwrap();
        use Class::*;
        assert_eq!(s.lambda_e, Scalar::int(3));
        assert_eq!(s.lambda_p, Scalar::int(3));
        assert_eq!(s.lambda_z, Scalar::int(1));
        assert_eq!(*s.mu(Z, V), Scalar::int(8));
        assert_eq!(*s.mu(Z, E), Scalar::int(12));
        assert_eq!(*s.mu(Z, P), Scalar::int(6));
        assert_eq!(s.nu0_z, Scalar::int(8));
        assert_eq!(s.nu1_z, Scalar::int(12));
        assert_eq!(s.nu2_z, Scalar::int(6));
        assert_eq!(s.nu_fs, Scalar::int(4));
        assert_eq!(s.nu_ps, Scalar::int(4));
        for r in check_identities(&s) {
            assert!(r.residual.is_zero() && r.holds, "{}", r.name);
        }
    }

    #[test]
    fn stit_and_columns() {
        let stit = TessParams::from_ratios([(4, 1), (3, 1), (36, 7), (1, 1), (2, 3), (2, 1), (4, 3)]).unwrap();
        let s = derive(&stit).unwrap();
        assert_eq!(*s.mu(Class::Z, Class::V), Scalar::int(24));
        assert_eq!(
            (s.nu0_z.clone(), s.nu1_z.clone(), s.nu2_z.clone()),
            (Scalar::int(8), Scalar::int(12), Scalar::int(6))
        );

        let b6 = TessParams::from_ratios([(4, 1), (7, 2), (28, 5), (1, 2), (0, 1), (3, 1), (2, 1)]).unwrap();
        let s = derive(&b6).unwrap();
        assert_eq!(s.nu0_z, Scalar::int(8));
        assert_eq!(s.nu1_z, Scalar::int(12));
        assert_eq!(s.nu2_z, Scalar::int(6));
        assert_eq!(s.nu_fs, Scalar::int(4));
        assert_eq!(s.nu_ps, Scalar::int(4));
    }

    #[test]
    fn voronoi_identities_exact() {
        let pv = Scalar::pi2_linear(0, 144, 35, 24);
        let p = TessParams::cyclic(Scalar::int(4), Scalar::int(3), pv).unwrap();
        let s = derive(&p).unwrap();
        for r in check_identities(&s) {
            assert!(r.residual.is_zero(), "{}: {}", r.name, r.residual);
        }
        assert_eq!(s.nu0_z, *s.mu(Class::Z, Class::V));
        assert_eq!(s.nu_ps, p.mu_pv);
    }

    #[test]
    fn corrupted_summary_flagged() {
        let mut s = derive(&cubic()).unwrap();
        s.lambda_p = &s.lambda_p + 1;
        let bad = identity_violations(&s);
        assert!(bad.iter().any(|r| r.name == "euler_intensity"));
    }

    #[test]
    fn degenerate_cells_rejected() {
        // f(PV) = 12 - PV*2 <= 0 for PV >= 6 with VE=4, EP=3
        let p = TessParams::cyclic(Scalar::int(4), Scalar::int(3), Scalar::int(6)).unwrap();
        assert!(matches!(derive(&p), Err(Error::DegenerateCellIntensity(_))));
    }

    #[test]
    fn validation() {
        assert!(TessParams::cyclic(Scalar::int(-1), Scalar::int(3), Scalar::int(3)).is_err());
        assert!(TessParams::new(q(4, 1), q(3, 1), q(5, 1), q(3, 2), q(0, 1), q(0, 1), q(0, 1)).is_err());
        assert!(TessParams::new(q(4, 1), q(3, 1), q(5, 1), q(1, 2), q(0, 1), q(-1, 1), q(0, 1)).is_err());
        assert!(cubic().with_lambda(Scalar::zero()).is_err());
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
        fn sampled_points_satisfy_identities(seed in any::<u64>()) {
            for p in sample_feasible(4, seed) {
                let s = derive(&p).unwrap();
                prop_assert!(identity_violations(&s).is_empty());
                prop_assert_eq!(s.mu(Class::V, Class::E), &p.mu_ve);
            }
        }
    }
}
