//! Seeded constructive sampler over the nested bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{classify, psi_interval, tau_interval, Cyclic, XiLines};
use crate::params::TessParams;
use crate::scalar::Scalar;

/// Rational point of `[lo, hi]` on a grid with a small random denominator.
fn draw(rng: &mut ChaCha8Rng, lo: &Scalar, hi: &Scalar, open_lo: bool, open_hi: bool) -> Option<Scalar> {
    let n: i64 = rng.random_range(2..=16);
    let k_lo = i64::from(open_lo);
    let k_hi = if open_hi { n - 1 } else { n };
    if k_lo > k_hi || lo.gt(hi) {
        return None;
    }
    let k = rng.random_range(k_lo..=k_hi);
    Some(lo + &(&(hi - lo) * &Scalar::ratio(k, n)))
}

fn draw_cyclic(rng: &mut ChaCha8Rng, ftf: bool) -> Option<Cyclic> {
    let three = Scalar::int(3);
    let ve = draw(rng, &Scalar::int(4), &Scalar::int(12), false, false)?;
    let curve = super::fundamental_curve(&ve);
    let ep_hi = if ftf { curve.clone() } else { &curve + 4 };
    let ep = draw(rng, &three, &ep_hi, false, false)?;
    let c = Cyclic::new(ve, ep, three.clone());
    let pv = if c.ep.lt(&curve) || ftf {
        draw(rng, &three, &c.pv_upper(), false, true)?
    } else {
        draw(rng, &c.pv_nonftf_lower(), &c.pv_upper(), true, true)?
    };
    Some(Cyclic::new(c.ve, c.ep, pv))
}

/// Cyclic triples satisfying the non-facet-to-facet cyclic constraints.
pub fn sample_cyclic(count: usize, seed: u64) -> Vec<Cyclic> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if let Some(c) = draw_cyclic(&mut rng, false) {
            if psi_interval(&c).is_ok() {
                out.push(c);
            }
        }
    }
    out
}

fn draw_interior(rng: &mut ChaCha8Rng, c: &Cyclic) -> Option<[Scalar; 4]> {
    let zero = Scalar::zero();
    let one = Scalar::one();
    let psi_iv = psi_interval(c).ok()?;
    let excess = &c.ep - &c.curve();
    let psi_lo = if excess.signum() > 0 {
        (&c.ve / 2 * excess).max(zero.clone())
    } else {
        zero.clone()
    };
    let psi = draw(rng, &psi_lo, &psi_iv.upper, false, false)?;
    let tau_iv = tau_interval(c, &psi).ok()?;
    if tau_iv.empty {
        return None;
    }
    let tau = draw(rng, &tau_iv.lower, &tau_iv.upper, false, false)?;
    let lines = XiLines::new(c, &psi, &tau);
    let l1_cap = &(&c.ve - &((&psi - &tau) * 2)) / 3;
    let l2_cap = &(&one - &lines.l2.intercept) * &c.ve / 6;
    let kappa_max = lines.kappa_max().min(l1_cap).min(l2_cap);
    let kappa = draw(rng, &zero, &kappa_max, false, false)?;
    let xi_lo = lines.xi_lower_at(&kappa).max(zero.clone());
    let xi_hi = lines.xi_upper_at(&kappa);
    let xi = draw(rng, &xi_lo, &xi_hi, xi_lo.is_zero(), false)?;
    Some([xi, kappa, psi, tau])
}

/// `count` feasible tuples, deterministic in `seed`; about a fifth are facet-to-facet.
pub fn sample_feasible(count: usize, seed: u64) -> Vec<TessParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let ftf = rng.random_range(0..5) == 0;
        let Some(c) = draw_cyclic(&mut rng, ftf) else { continue };
        let interior = if ftf {
            Some([Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()])
        } else {
            draw_interior(&mut rng, &c)
        };
        let Some([xi, kappa, psi, tau]) = interior else {
            continue;
        };
        let Ok(p) = TessParams::new(c.ve, c.ep, c.pv, xi, kappa, psi, tau) else {
            continue;
        };
        if classify(&p).is_ok_and(|r| r.feasible) {
            out.push(p);
        }
    }
    out
}
