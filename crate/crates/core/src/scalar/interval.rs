//! Closed rational intervals and enclosures of π².

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(v: BigRational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn add_scalar(&self, c: &BigRational) -> Interval {
        Interval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if *p < lo {
                lo = p.clone();
            }
            if *p > hi {
                hi = p.clone();
            }
        }
        Interval { lo, hi }
    }

    /// `Some(sign)` once the interval excludes zero.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }
}

fn pow10(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), n as usize)
}

/// atan(1/x) scaled by `scale`, truncated term by term.
fn arctan_inv(x: u32, scale: &BigInt) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = scale / &x;
    let mut sum = power.clone();
    let mut n = 1u32;
    loop {
        power = &power / &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * n + 1);
        if n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        n += 1;
    }
    sum
}

fn pi_cache() -> &'static Mutex<HashMap<u32, Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// An interval of width `2·10^-digits` that contains π (Machin's formula).
pub fn pi_enclosure(digits: u32) -> Interval {
    if let Some(iv) = pi_cache().lock().unwrap().get(&digits) {
        return iv.clone();
    }
    let guard = 10;
    let scale = pow10(digits + guard);
    let approx = BigInt::from(16) * arctan_inv(5, &scale) - BigInt::from(4) * arctan_inv(239, &scale);
    let mid = BigRational::new(approx, scale);
    let eps = BigRational::new(BigInt::one(), pow10(digits));
    let iv = Interval {
        lo: &mid - &eps,
        hi: &mid + &eps,
    };
    pi_cache().lock().unwrap().insert(digits, iv.clone());
    iv
}

/// Enclosure of π² at the given number of decimal digits.
pub fn pi2_enclosure(digits: u32) -> Interval {
    let pi = pi_enclosure(digits + 2);
    Interval {
        lo: &pi.lo * &pi.lo,
        hi: &pi.hi * &pi.hi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_enclosure_contains_known_digits() {
        // 3.14159265358979323846264338327950288419716939937510
        let known: BigRational = BigRational::new(
            "314159265358979323846264338327950288419716939937510".parse().unwrap(),
            pow10(50),
        );
        let iv = pi_enclosure(45);
        assert!(iv.lo <= known && known <= iv.hi);
        let next = &known + BigRational::new(BigInt::one(), pow10(40));
        assert!(next > iv.hi);
    }

    #[test]
    fn interval_sign() {
        let iv = Interval {
            lo: BigRational::from_integer((-1).into()),
            hi: BigRational::from_integer(2.into()),
        };
        assert_eq!(iv.sign(), None);
        let sq = pi2_enclosure(20);
        assert_eq!(sq.sign(), Some(1));
    }
}
