//! Exact integers, rationals, rational intervals, and the few
//! transcendental enclosures the estimators need.
//!
//! Rationals are `num_rational::BigRational`, which keeps `gcd(num, den) = 1`
//! and `den > 0` after every operation. Its normalization runs a binary gcd
//! that is quadratic in the operand size, so quantities built from very
//! large convergents are rounded outward to dyadic rationals
//! ([`round_down`], [`round_up`]) whose canonical form needs no gcd.

mod decimal;
mod interval;
mod log;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::{Rat, RatInterval};

pub use decimal::{exact_string, to_decimal, RoundDir};
pub use interval::{Field, Interval, Scalar};
pub use log::{ln2_enclose, log_enclose, phi_enclose, sqrt_enclose};

/// Mantissa bits kept when a large rational is rounded outward.
pub const DEFAULT_PRECISION: u32 = 256;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// Size of a rational in bits (numerator plus denominator).
pub fn rat_bits(x: &Rat) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Canonical rational `m · 2^e` built without a gcd pass.
pub fn dyadic(m: BigInt, e: i64) -> Rat {
    if m.is_zero() {
        return Rat::zero();
    }
    let tz = m.trailing_zeros().unwrap_or(0) as i64;
    let m = m >> tz as usize;
    let e = e + tz;
    if e >= 0 {
        Rat::new_raw(m << e as usize, BigInt::one())
    } else {
        Rat::new_raw(m, BigInt::one() << (-e) as usize)
    }
}

fn div_round(n: &BigInt, d: &BigInt, dir: RoundDir) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    match dir {
        RoundDir::Down => q,
        RoundDir::Up => {
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Dyadic rational with about `prec` significant bits bounding `n/d` in the
/// given direction. Cost is linear in the operand size.
pub fn round_quotient(n: &BigInt, d: &BigInt, prec: u32, dir: RoundDir) -> Rat {
    assert!(d.is_positive(), "denominator must be positive");
    if n.is_zero() {
        return Rat::zero();
    }
    let shift = prec as i64 + d.bits() as i64 - n.bits() as i64;
    if shift >= 0 {
        let m = div_round(&(n << shift as usize), d, dir);
        dyadic(m, -shift)
    } else {
        let m = div_round(n, &(d << (-shift) as usize), dir);
        dyadic(m, -shift)
    }
}

pub fn round_down(x: &Rat, prec: u32) -> Rat {
    round_quotient(x.numer(), x.denom(), prec, RoundDir::Down)
}

pub fn round_up(x: &Rat, prec: u32) -> Rat {
    round_quotient(x.numer(), x.denom(), prec, RoundDir::Up)
}

/// Builds `n/d` exactly when it is small, otherwise rounds it in `dir`.
pub fn quotient_or_round(n: BigInt, d: BigInt, prec: u32, dir: RoundDir) -> Rat {
    if n.bits() + d.bits() <= 4 * prec as u64 {
        Rat::new(n, d)
    } else {
        round_quotient(&n, &d, prec, dir)
    }
}

/// Widens each endpoint that exceeds `4·prec` bits to a dyadic with `prec`
/// significant bits. Small endpoints are kept exact.
pub fn round_outward(iv: &RatInterval, prec: u32) -> RatInterval {
    let limit = 4 * prec as u64;
    let lo = if rat_bits(iv.lo()) > limit {
        round_down(iv.lo(), prec)
    } else {
        iv.lo().clone()
    };
    let hi = if rat_bits(iv.hi()) > limit {
        round_up(iv.hi(), prec)
    } else {
        iv.hi().clone()
    };
    Interval::new(lo, hi)
}

/// Unpacks a positive rational exponent into `u32` numerator and denominator.
pub fn gamma_parts(gamma: &Rat) -> Result<(u32, u32)> {
    if !gamma.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "exponent must be positive, got {gamma}"
        )));
    }
    let u = gamma.numer().to_u32();
    let v = gamma.denom().to_u32();
    match (u, v) {
        (Some(u), Some(v)) => Ok((u, v)),
        _ => Err(Error::InvalidArgument(format!(
            "exponent {gamma} has components beyond 32 bits"
        ))),
    }
}

/// `⌊q^{u/v}⌋` exactly, via the integer `v`-th root of `q^u`.
pub fn floor_pow(q: &BigInt, gamma: &Rat) -> Result<BigInt> {
    if !q.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "floor_pow base must be positive, got {q}"
        )));
    }
    let (u, v) = gamma_parts(gamma)?;
    let power = num_traits::pow(q.clone(), u as usize);
    Ok(if v == 1 { power } else { power.nth_root(v) })
}

/// Upper estimate of the bit length of `⌊q^{u/v}⌋`, used to check budgets
/// before an expensive power is formed.
pub fn floor_pow_bits_estimate(q: &BigInt, u: u64, v: u64) -> u64 {
    q.bits().saturating_mul(u) / v.max(1) + 1
}

/// Bounds `(L, U)` with `L < log2(x) < U` for positive rational `x`.
fn log2_bracket(x: &Rat) -> (i128, i128) {
    let n = x.numer().bits() as i128;
    let d = x.denom().bits() as i128;
    (n - 1 - d, n - d + 1)
}

/// Exact comparison of `a^e1` against `b^e2` for positive rationals.
pub fn pow_compare(a: &Rat, e1: u64, b: &Rat, e2: u64) -> Ordering {
    assert!(
        a.is_positive() && b.is_positive(),
        "pow_compare needs positive bases"
    );
    let (la, ua) = log2_bracket(a);
    let (lb, ub) = log2_bracket(b);
    // log2(a^e1) lies in the open interval (e1·la, e1·ua) when e1 > 0 and is
    // exactly 0 when e1 = 0.
    let (lo_a, hi_a) = (e1 as i128 * la, e1 as i128 * ua);
    let (lo_b, hi_b) = (e2 as i128 * lb, e2 as i128 * ub);
    let open = e1 > 0 || e2 > 0;
    if hi_a < lo_b || (hi_a == lo_b && open) {
        return Ordering::Less;
    }
    if lo_a > hi_b || (lo_a == hi_b && open) {
        return Ordering::Greater;
    }
    let e1u = usize::try_from(e1).expect("exponent fits usize");
    let e2u = usize::try_from(e2).expect("exponent fits usize");
    let left = num_traits::pow(a.numer().clone(), e1u) * num_traits::pow(b.denom().clone(), e2u);
    let right = num_traits::pow(b.numer().clone(), e2u) * num_traits::pow(a.denom().clone(), e1u);
    left.cmp(&right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn floor_pow_examples() {
        assert_eq!(
            floor_pow(&BigInt::from(1), &rat(1, 1)).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            floor_pow(&BigInt::from(7), &rat(1, 2)).unwrap(),
            BigInt::from(2)
        );
        // 3429² by hand: 3429·3429 = 11 758 041.
        assert_eq!(
            floor_pow(&BigInt::from(3429), &rat(2, 1)).unwrap(),
            BigInt::from(11_758_041u64)
        );
    }

    #[test]
    fn floor_pow_rejects_bad_input() {
        assert!(floor_pow(&BigInt::from(0), &rat(1, 1)).is_err());
        assert!(floor_pow(&BigInt::from(5), &rat(0, 1)).is_err());
        assert!(floor_pow(&BigInt::from(5), &rat(-1, 2)).is_err());
    }

    #[test]
    fn pow_compare_examples() {
        assert_eq!(pow_compare(&rat(2, 1), 3, &rat(8, 1), 1), Ordering::Equal);
        assert_eq!(pow_compare(&rat(3, 2), 2, &rat(2, 1), 1), Ordering::Greater);
        assert_eq!(pow_compare(&rat(7, 1), 3, &rat(58, 1), 2), Ordering::Less);
        assert_eq!(pow_compare(&rat(5, 1), 0, &rat(1, 1), 7), Ordering::Equal);
        assert_eq!(pow_compare(&rat(1, 3), 0, &rat(1, 2), 1), Ordering::Greater);
    }

    #[test]
    fn dyadic_is_canonical() {
        let x = dyadic(BigInt::from(12), -5);
        assert_eq!(x, rat(3, 8));
        let y = dyadic(BigInt::from(-3), 4);
        assert_eq!(y, rat(-48, 1));
    }

    #[test]
    fn rounding_brackets_value() {
        let x = rat(1, 3);
        let lo = round_down(&x, 20);
        let hi = round_up(&x, 20);
        assert!(lo < x && x < hi);
        assert!(&hi - &lo <= rat(1, 1 << 20));
        let n = -rat(22, 7);
        assert!(round_down(&n, 10) <= n && n <= round_up(&n, 10));
    }

    proptest! {
        #[test]
        fn floor_pow_brackets(q in 1u64..=1_000_000, u in 1u32..=5, v in 1u32..=5) {
            let q = BigInt::from(q);
            let r = floor_pow(&q, &Rat::new(u.into(), v.into())).unwrap();
            let target = num_traits::pow(q.clone(), u as usize);
            prop_assert!(num_traits::pow(r.clone(), v as usize) <= target);
            prop_assert!(num_traits::pow(r + 1, v as usize) > target);
        }

        #[test]
        fn pow_compare_matches_expansion(an in 1i64..400, ad in 1i64..400, bn in 1i64..400,
                                         bd in 1i64..400, e1 in 0u64..6, e2 in 0u64..6) {
            let a = rat(an, ad);
            let b = rat(bn, bd);
            let lhs = num_traits::pow(a.clone(), e1 as usize);
            let rhs = num_traits::pow(b.clone(), e2 as usize);
            prop_assert_eq!(pow_compare(&a, e1, &b, e2), lhs.cmp(&rhs));
        }

        #[test]
        fn interval_ops_are_sound(a in -50i64..50, b in 0i64..50, c in -50i64..50, d in 0i64..50,
                                  s in 0i64..=16, t in 0i64..=16) {
            let x_iv = Interval::new(rat(a, 4), rat(a + b, 4));
            let y_iv = Interval::new(rat(c, 3), rat(c + d, 3));
            let x = rat(a, 4) + rat(b * s, 64);
            let y = rat(c, 3) + rat(d * t, 48);
            prop_assert!((&x_iv + &y_iv).contains(&(&x + &y)));
            prop_assert!((&x_iv - &y_iv).contains(&(&x - &y)));
            prop_assert!((&x_iv * &y_iv).contains(&(&x * &y)));
            prop_assert!(x_iv.abs().contains(&x.abs()));
            prop_assert!((-&x_iv).contains(&-x.clone()));
            let prod = &x_iv * &y_iv;
            prop_assert!(prod.lo().denom().is_positive());
            prop_assert!(prod.lo().numer().gcd(prod.lo().denom()).is_one());
        }
    }
}
