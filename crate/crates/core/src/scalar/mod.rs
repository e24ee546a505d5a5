//! Exact scalars: rationals, rational functions of π², and tagged decimal evaluations.
//!
//! Every parameter of the calculus is either rational or lives in the field `Q(π²)`.
//! Because π² is transcendental, `Q(π²)` is isomorphic to the field of rational
//! functions `Q(t)`, so a canonical reduced fraction `N(t)/D(t)` is an exact value and
//! structural equality is mathematical equality. Signs are decided by evaluating
//! `N` and `D` on rigorous enclosures of π² with increasing precision.

mod interval;
mod parse;
mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use interval::{pi2_enclosure, pi_enclosure, Interval};
pub use parse::ScalarParseError;
pub use poly::Poly;

/// Relative tolerance applied whenever an evaluated (decimal) scalar takes part in a comparison.
pub const REL_TOLERANCE_EXP: u32 = 12;

/// Default number of significant decimal digits for evaluations.
pub const DEFAULT_DIGITS: u32 = 50;

/// A reduced rational function of π², with monic denominator and non-constant value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pi2Fraction {
    num: Poly,
    den: Poly,
}

impl Pi2Fraction {
    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// Coefficients `(a, b, c, d)` of `(a + bπ²)/(c + dπ²)` in primitive integer form,
    /// when both numerator and denominator are at most linear in π².
    pub fn linear_form(&self) -> Option<[BigInt; 4]> {
        if self.num.degree() > 1 || self.den.degree() > 1 {
            return None;
        }
        let (n, d) = integer_pair(&self.num, &self.den);
        let get = |v: &Vec<BigInt>, i: usize| v.get(i).cloned().unwrap_or_else(BigInt::zero);
        Some([get(&n, 0), get(&n, 1), get(&d, 0), get(&d, 1)])
    }

    fn eval_enclosure(&self, digits: u32) -> (Interval, Interval) {
        let t = pi2_enclosure(digits);
        (self.num.eval_interval(&t), self.den.eval_interval(&t))
    }

    fn sign(&self) -> i8 {
        let mut digits = 40;
        loop {
            let (n, d) = self.eval_enclosure(digits);
            if let (Some(a), Some(b)) = (n.sign(), d.sign()) {
                return a * b;
            }
            digits *= 2;
        }
    }

    fn approximate(&self, digits: u32) -> BigRational {
        let (n, d) = self.eval_enclosure(digits + 20);
        n.midpoint() / d.midpoint()
    }
}

/// Integer coefficient vectors `(n, d)` with `N/D = n/d` and `d`'s leading coefficient positive.
pub fn integer_pair(num: &Poly, den: &Poly) -> (Vec<BigInt>, Vec<BigInt>) {
    let (n_int, n_scale) = num.primitive_integer();
    let (d_int, d_scale) = den.primitive_integer();
    // num = n_int / n_scale, den = d_int / d_scale
    let ratio = d_scale / n_scale;
    let (p, q) = (ratio.numer().clone(), ratio.denom().clone());
    let mut n: Vec<BigInt> = n_int.into_iter().map(|c| c * &p).collect();
    let mut d: Vec<BigInt> = d_int.into_iter().map(|c| c * &q).collect();
    if d.last().is_some_and(|c| c.is_negative()) {
        n.iter_mut().for_each(|c| *c = -c.clone());
        d.iter_mut().for_each(|c| *c = -c.clone());
    }
    (n, d)
}

/// A decimal approximation carrying the number of significant digits it was computed to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Approx {
    value: BigRational,
    digits: u32,
}

impl Approx {
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Pi2(Pi2Fraction),
    Evaluated(Approx),
}

fn pow10(n: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(10), n.unsigned_abs() as usize);
    if n >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Estimate of floor(log10 |v|), exact to within one.
fn decimal_exponent(v: &BigRational) -> i64 {
    let n = v.numer().abs().to_string().len() as i64;
    let d = v.denom().to_string().len() as i64;
    let mut e = n - d;
    // refine so that 10^e <= |v| < 10^(e+1)
    let a = v.abs();
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }
    e
}

fn round_significant(v: &BigRational, sig: u32) -> BigRational {
    if v.is_zero() {
        return BigRational::zero();
    }
    let e = decimal_exponent(v);
    let shift = sig as i64 - 1 - e;
    let scaled = v * pow10(shift);
    scaled.round() * pow10(-shift)
}

/// Decimal rendering with `digits` significant digits (plain notation, trailing zeros trimmed).
pub fn format_decimal(v: &BigRational, digits: u32) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = v.is_negative();
    let a = v.abs();
    let mut e = decimal_exponent(&a);
    let mut m = (&a * pow10(digits as i64 - 1 - e)).round().to_integer();
    if m.to_string().len() > digits as usize {
        e += 1;
        m = (&a * pow10(digits as i64 - 1 - e)).round().to_integer();
    }
    let s = m.to_string();
    let (int_part, frac_part) = if e >= 0 {
        let e = e as usize;
        if e + 1 >= s.len() {
            (format!("{}{}", s, "0".repeat(e + 1 - s.len())), String::new())
        } else {
            (s[..e + 1].to_string(), s[e + 1..].to_string())
        }
    } else {
        ("0".to_string(), format!("{}{}", "0".repeat((-e - 1) as usize), s))
    };
    let frac = frac_part.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(v.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Rational(BigRational::new(p.into(), q.into()))
    }

    pub fn rational(v: BigRational) -> Self {
        Scalar::Rational(v)
    }

    pub fn zero() -> Self {
        Scalar::int(0)
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    /// π² itself.
    pub fn pi_squared() -> Self {
        Self::from_polys(
            Poly::from_coeffs(vec![BigRational::zero(), BigRational::one()]),
            Poly::constant(BigRational::one()),
        )
    }

    /// `(a + bπ²)/(c + dπ²)` with integer coefficients.
    pub fn pi2_linear(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |v: i64| BigRational::from_integer(v.into());
        Self::from_polys(Poly::from_coeffs(vec![r(a), r(b)]), Poly::from_coeffs(vec![r(c), r(d)]))
    }

    /// Canonical scalar for `num(π²)/den(π²)`. Panics if `den` is the zero polynomial.
    pub fn from_polys(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading();
        let num = num.scale(&lead.recip());
        let den = den.monic();
        match (num.as_constant(), den.as_constant()) {
            (Some(n), Some(d)) => Scalar::Rational(n / d),
            _ => Scalar::Pi2(Pi2Fraction { num, den }),
        }
    }

    pub fn evaluated(value: BigRational, digits: u32) -> Self {
        Scalar::Evaluated(Approx {
            value: round_significant(&value, digits + 5),
            digits,
        })
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Evaluated(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    fn as_fraction(&self) -> Option<(Poly, Poly)> {
        match self {
            Scalar::Rational(r) => Some((Poly::constant(r.clone()), Poly::constant(BigRational::one()))),
            Scalar::Pi2(f) => Some((f.num.clone(), f.den.clone())),
            Scalar::Evaluated(_) => None,
        }
    }

    /// Rational approximation accurate to at least `digits` significant digits.
    pub fn approximate(&self, digits: u32) -> BigRational {
        match self {
            Scalar::Rational(r) => r.clone(),
            Scalar::Pi2(f) => f.approximate(digits),
            Scalar::Evaluated(a) => a.value.clone(),
        }
    }

    /// Decimal evaluation at `digits` significant digits.
    pub fn evaluate(&self, digits: u32) -> Scalar {
        match self {
            Scalar::Evaluated(a) if a.digits <= digits => self.clone(),
            _ => Scalar::evaluated(self.approximate(digits + 5), digits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.approximate(20).to_f64().unwrap_or(f64::NAN)
    }

    pub fn precision_digits(&self) -> Option<u32> {
        match self {
            Scalar::Evaluated(a) => Some(a.digits),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    /// Sign; for evaluated scalars, magnitudes below `10^-digits` count as zero.
    pub fn signum(&self) -> i8 {
        match self {
            Scalar::Rational(r) => sign_of(r),
            Scalar::Pi2(f) => f.sign(),
            Scalar::Evaluated(a) => {
                if a.value.abs() <= pow10(-(a.digits as i64)) {
                    0
                } else {
                    sign_of(&a.value)
                }
            }
        }
    }

    /// Tri-state comparison: exact for exact operands; `Equal` within relative `10^-12`
    /// whenever an evaluated scalar is involved.
    pub fn compare(&self, other: &Scalar) -> Ordering {
        if self.is_exact() && other.is_exact() {
            return match (self - other).signum() {
                1 => Ordering::Greater,
                -1 => Ordering::Less,
                _ => Ordering::Equal,
            };
        }
        let digits = self
            .precision_digits()
            .into_iter()
            .chain(other.precision_digits())
            .min()
            .unwrap_or(DEFAULT_DIGITS);
        let a = self.approximate(digits + 5);
        let b = other.approximate(digits + 5);
        let diff = &a - &b;
        let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
        let tol = scale * pow10(-(REL_TOLERANCE_EXP as i64));
        if diff.abs() <= tol || diff.abs() <= pow10(-(digits as i64)) {
            Ordering::Equal
        } else if diff.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn lt(&self, other: &Scalar) -> bool {
        self.compare(other) == Ordering::Less
    }

    pub fn le(&self, other: &Scalar) -> bool {
        self.compare(other) != Ordering::Greater
    }

    pub fn gt(&self, other: &Scalar) -> bool {
        self.compare(other) == Ordering::Greater
    }

    pub fn ge(&self, other: &Scalar) -> bool {
        self.compare(other) != Ordering::Less
    }

    pub fn approx_eq(&self, other: &Scalar) -> bool {
        self.compare(other) == Ordering::Equal
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other.lt(&self) {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other.gt(&self) {
            other
        } else {
            self
        }
    }

    pub fn recip(&self) -> Scalar {
        Scalar::one() / self
    }

    pub fn checked_div(&self, other: &Scalar) -> Option<Scalar> {
        if other.is_exact() && other.is_zero() {
            None
        } else {
            Some(self / other)
        }
    }

    fn binary(
        &self,
        other: &Scalar,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
        frac: impl Fn((Poly, Poly), (Poly, Poly)) -> (Poly, Poly),
    ) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(rat(a, b)),
            _ => match (self.as_fraction(), other.as_fraction()) {
                (Some(a), Some(b)) => {
                    let (n, d) = frac(a, b);
                    Scalar::from_polys(n, d)
                }
                _ => {
                    let digits = self
                        .precision_digits()
                        .into_iter()
                        .chain(other.precision_digits())
                        .min()
                        .unwrap_or(DEFAULT_DIGITS);
                    let a = self.approximate(digits + 5);
                    let b = other.approximate(digits + 5);
                    Scalar::evaluated(rat(&a, &b), digits)
                }
            },
        }
    }

    /// Human-readable rendering: `p/q`, `(a+b*pi^2)/(c+d*pi^2)` or a decimal.
    pub fn render(&self) -> String {
        match self {
            Scalar::Rational(r) => render_rational(r),
            Scalar::Pi2(f) => {
                let (n, d) = integer_pair(&f.num, &f.den);
                if d.len() == 1 && d[0].is_one() {
                    format!("({})", render_poly(&n))
                } else {
                    format!("({})/({})", render_poly(&n), render_poly(&d))
                }
            }
            Scalar::Evaluated(a) => format_decimal(&a.value, a.digits),
        }
    }

    pub fn to_decimal(&self, digits: u32) -> String {
        format_decimal(&self.approximate(digits + 5), digits)
    }

    pub fn parse(s: &str) -> Result<Scalar, ScalarParseError> {
        parse::parse_scalar(s)
    }
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub(crate) fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_poly(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = match k {
            0 => c.abs().to_string(),
            1 => format!("{}*pi^2", c.abs()),
            _ => format!("{}*pi^{}", c.abs(), 2 * k),
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push(if c.is_negative() { '-' } else { '+' });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::Rational(v)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Pi2(f) => Scalar::Pi2(Pi2Fraction {
                num: f.num.neg(),
                den: f.den.clone(),
            }),
            Scalar::Evaluated(a) => Scalar::Evaluated(Approx {
                value: -&a.value,
                digits: a.digits,
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, other: &Scalar) -> Scalar {
        self.binary(
            other,
            |a, b| a + b,
            |(an, ad), (bn, bd)| {
                if ad == bd {
                    (an.add(&bn), ad)
                } else {
                    (an.mul(&bd).add(&bn.mul(&ad)), ad.mul(&bd))
                }
            },
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, other: &Scalar) -> Scalar {
        self + &(-other)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        self.binary(other, |a, b| a * b, |(an, ad), (bn, bd)| (an.mul(&bn), ad.mul(&bd)))
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, other: &Scalar) -> Scalar {
        if other.is_exact() {
            assert!(!other.is_zero(), "scalar division by zero");
        }
        self.binary(other, |a, b| a / b, |(an, ad), (bn, bd)| (an.mul(&bd), ad.mul(&bn)))
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self).$m(o) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { self.$m(&o) }
        }
        impl $tr<i64> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: i64) -> Scalar { self.$m(&Scalar::int(o)) }
        }
        impl $tr<i64> for Scalar {
            type Output = Scalar;
            fn $m(self, o: i64) -> Scalar { (&self).$m(&Scalar::int(o)) }
        }
        impl $tr<&Scalar> for i64 {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&Scalar::int(self)).$m(o) }
        }
        impl $tr<Scalar> for i64 {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&Scalar::int(self)).$m(&o) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_canonicalize() {
        assert_eq!(Scalar::ratio(4, -6), Scalar::ratio(-2, 3));
        assert_eq!(Scalar::ratio(6, 3).render(), "2");
        assert_eq!(Scalar::ratio(-2, 3).render(), "-2/3");
    }

    #[test]
    fn pi2_fraction_collapses_to_rational() {
        // (2 + 4π²)/(1 + 2π²) = 2
        assert_eq!(Scalar::pi2_linear(2, 4, 1, 2), Scalar::int(2));
        let v = Scalar::pi2_linear(0, 144, 35, 24);
        assert!(matches!(v, Scalar::Pi2(_)));
        assert_eq!(v.render(), "(144*pi^2)/(35+24*pi^2)");
    }

    #[test]
    fn field_operations_stay_exact() {
        let pv = Scalar::pi2_linear(0, 144, 35, 24);
        let back = (&pv * &Scalar::int(3) - &pv * 2) / &pv;
        assert_eq!(back, Scalar::one());
        let q = (&pv * &pv) / (&pv * &pv);
        assert_eq!(q, Scalar::one());
        assert_eq!(&pv - &pv, Scalar::zero());
    }

    #[test]
    fn pi2_sign_and_value() {
        let pv = Scalar::pi2_linear(0, 144, 35, 24);
        // 144π²/(24π²+35) ≈ 5.2071
        assert_eq!(pv.to_decimal(5), "5.2276");
        assert_eq!((&pv - &Scalar::int(6)).signum(), -1);
        assert!(pv.gt(&Scalar::int(5)));
    }

    #[test]
    fn evaluated_comparison_uses_tolerance() {
        let pv = Scalar::pi2_linear(0, 144, 35, 24);
        let e = pv.evaluate(30);
        assert_eq!(e.compare(&pv), Ordering::Equal);
        let shifted = &e + &Scalar::evaluated(BigRational::new(1.into(), 1_000_000.into()), 30);
        assert_eq!(shifted.compare(&pv), Ordering::Greater);
        // within 1e-12 relative
        let tiny = &e + &Scalar::evaluated(BigRational::new(1.into(), 10_000_000_000_000i64.into()), 30);
        assert_eq!(tiny.compare(&pv), Ordering::Equal);
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_decimal(&BigRational::new(36.into(), 7.into()), 6), "5.14286");
        assert_eq!(format_decimal(&BigRational::new(1.into(), 800.into()), 3), "0.00125");
        assert_eq!(format_decimal(&BigRational::from_integer(1200.into()), 2), "1200");
        assert_eq!(format_decimal(&BigRational::new((-999).into(), 1000.into()), 2), "-1");
    }

    #[test]
    fn evaluation_refines_monotonically() {
        let pv = Scalar::pi2_linear(0, 144, 35, 24);
        let coarse = parse::parse_decimal(&pv.to_decimal(15)).unwrap();
        let fine = parse::parse_decimal(&pv.to_decimal(50)).unwrap();
        let ulp = BigRational::new(1.into(), BigInt::from(10).pow(14));
        assert!((coarse - fine).abs() <= ulp);
    }
}
