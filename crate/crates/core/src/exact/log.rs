//! Certified enclosures of `ln`, `sqrt`, and the golden ratio.
//!
//! `ln y` is evaluated as `e·ln 2 + 2·atanh(s)` with `y = m·2^e`,
//! `m ∈ [1, 2)`, `s = (m − 1)/(m + 1) < 1/3`, in scaled integer
//! arithmetic with floor/ceil at every step and an explicit series
//! remainder. Endpoints are first snapped outward to a grid with `bits + 8`
//! mantissa bits; the evaluation error is kept below a quarter of the grid
//! spacing, which makes the enclosure monotone under inclusion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{dyadic, Interval, RoundDir};
use crate::error::{Error, Result};
use crate::{Rat, RatInterval};

/// `(lo, hi)` with `lo ≤ 2^f·atanh(a/b) ≤ hi`, for `0 ≤ a/b ≤ 1/3`.
fn atanh_scaled(a: &BigInt, b: &BigInt, f: u64) -> (BigInt, BigInt) {
    if a.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let a2 = a * a;
    let b2 = b * b;
    let one_scaled = BigInt::one() << f as usize;
    // pow_lo ≤ 2^f·s^(2i+1) ≤ pow_hi
    let mut pow_lo = (&one_scaled * a).div_floor(b);
    let mut pow_hi = ceil_div(&(&one_scaled * a), b);
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut i: u64 = 0;
    loop {
        let denom = BigInt::from(2 * i + 1);
        sum_lo += pow_lo.div_floor(&denom);
        sum_hi += ceil_div(&pow_hi, &denom);
        pow_lo = (&pow_lo * &a2).div_floor(&b2);
        pow_hi = ceil_div(&(&pow_hi * &a2), &b2);
        i += 1;
        if pow_hi <= BigInt::one() {
            break;
        }
    }
    // Remaining terms sum to at most pow_hi/(1 − s²) ≤ 9/8 · pow_hi ≤ 2 ulps.
    sum_hi += 2;
    (sum_lo, sum_hi)
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

/// `ln 2` scaled by `2^f`, as `(lo, hi)`.
fn ln2_scaled(f: u64) -> (BigInt, BigInt) {
    let (lo, hi) = atanh_scaled(&BigInt::one(), &BigInt::from(3), f);
    (lo * 2, hi * 2)
}

pub fn ln2_enclose(bits: u32) -> RatInterval {
    let f = bits as u64 + 8;
    let (lo, hi) = ln2_scaled(f);
    Interval::new(dyadic(lo, -(f as i64)), dyadic(hi, -(f as i64)))
}

/// `(e, j)` with `j·2^(e−p)` the grid point at or beyond `y` in direction
/// `dir`, where `j ∈ [2^p, 2^(p+1))`.
fn snap(y: &Rat, p: u64, dir: RoundDir) -> (i64, BigInt) {
    let n = y.numer();
    let d = y.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // Fix e so that 2^e ≤ y < 2^(e+1).
    let ge = |e: i64| -> bool {
        if e >= 0 {
            n >= &(d << e as usize)
        } else {
            (n << (-e) as usize) >= *d
        }
    };
    if !ge(e) {
        e -= 1;
    }
    let shift = p as i64 - e;
    let (num, den) = if shift >= 0 {
        (n << shift as usize, d.clone())
    } else {
        (n.clone(), d << (-shift) as usize)
    };
    let (q, r) = num.div_mod_floor(&den);
    let mut j = match dir {
        RoundDir::Down => q,
        RoundDir::Up if r.is_zero() => q,
        RoundDir::Up => q + 1,
    };
    if j.bits() > p + 1 {
        // Rounded up to 2^(p+1): renormalize.
        j >>= 1usize;
        e += 1;
    }
    (e, j)
}

/// Bounds on `2^f·ln(j·2^(e−p))`.
fn ln_grid_point(e: i64, j: &BigInt, p: u64, f: u64) -> (BigInt, BigInt) {
    let base = BigInt::one() << p as usize;
    let a = j - &base;
    let b = j + &base;
    let (t_lo, t_hi) = atanh_scaled(&a, &b, f);
    let (mut lo, mut hi) = (t_lo * 2, t_hi * 2);
    if e != 0 {
        let e_bits = 64 - e.unsigned_abs().leading_zeros() as u64;
        let f2 = f + e_bits + 4;
        let (l2_lo, l2_hi) = ln2_scaled(f2);
        let eb = BigInt::from(e);
        let (c_lo, c_hi) = if e > 0 {
            (&eb * l2_lo, &eb * l2_hi)
        } else {
            (&eb * l2_hi, &eb * l2_lo)
        };
        let drop = BigInt::one() << (f2 - f) as usize;
        lo += c_lo.div_floor(&drop);
        hi += ceil_div(&c_hi, &drop);
    }
    (lo, hi)
}

/// Interval containing `ln y` for every `y` in `x`, of width at most about
/// `2^-bits·max(1, |ln x|)` beyond the width of `ln x` itself.
pub fn log_enclose(x: &RatInterval, bits: u32) -> Result<RatInterval> {
    if !x.lo().is_positive() {
        return Err(Error::Domain(format!(
            "logarithm of an interval reaching {} is undefined",
            x.lo()
        )));
    }
    let p = bits as u64 + 8;
    let p_bits = 64 - p.leading_zeros() as u64;
    let f = p + 24 + 2 * p_bits;
    let (e_lo, j_lo) = snap(x.lo(), p, RoundDir::Down);
    let (e_hi, j_hi) = snap(x.hi(), p, RoundDir::Up);
    let (lo, _) = ln_grid_point(e_lo, &j_lo, p, f);
    let (_, hi) = ln_grid_point(e_hi, &j_hi, p, f);
    let fi = -(f as i64);
    Ok(Interval::new(dyadic(lo, fi), dyadic(hi, fi)))
}

fn sqrt_bound(y: &Rat, bits: u32, dir: RoundDir) -> Rat {
    if y.is_zero() {
        return Rat::zero();
    }
    let n = y.numer();
    let d = y.denom();
    let mag = n.bits() as i64 - d.bits() as i64;
    let s = bits as i64 + 2 - mag.div_euclid(2);
    let (num, den) = if s >= 0 {
        (n << (2 * s) as usize, d.clone())
    } else {
        (n.clone(), d << (-2 * s) as usize)
    };
    let (q, r) = num.div_mod_floor(&den);
    let root = match dir {
        RoundDir::Down => q.sqrt(),
        RoundDir::Up => {
            let q = if r.is_zero() { q } else { q + 1 };
            let root = q.sqrt();
            if &root * &root == q {
                root
            } else {
                root + 1
            }
        }
    };
    dyadic(root, -s)
}

/// Interval containing `√y` for every `y ≥ 0` in `x`.
pub fn sqrt_enclose(x: &RatInterval, bits: u32) -> Result<RatInterval> {
    if x.lo().is_negative() {
        return Err(Error::Domain(format!(
            "square root of an interval reaching {} is undefined",
            x.lo()
        )));
    }
    Ok(Interval::new(
        sqrt_bound(x.lo(), bits, RoundDir::Down),
        sqrt_bound(x.hi(), bits, RoundDir::Up),
    ))
}

/// Enclosure of the golden ratio `(1 + √5)/2`.
pub fn phi_enclose(bits: u32) -> RatInterval {
    let five = Interval::point(Rat::from_integer(BigInt::from(5)));
    let root = sqrt_enclose(&five, bits + 2).expect("5 is positive");
    let one = Interval::point(Rat::one());
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    (&one + &root).scale(&half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn p(x: Rat) -> RatInterval {
        Interval::point(x)
    }

    /// e from its factorial series, bracketed with the tail bound 2/(n+1)!.
    fn e_enclosure() -> RatInterval {
        let mut sum = Rat::zero();
        let mut term = Rat::one();
        for n in 0..40u32 {
            sum += &term;
            term /= Rat::from_integer(BigInt::from(n + 1));
        }
        Interval::new(sum.clone(), sum + term * Rat::from_integer(BigInt::from(2)))
    }

    /// ln 2 = Σ 1/(k·2^k), bracketed with tail bound 2/((N+1)·2^(N+1)).
    fn ln2_series(n: u32) -> RatInterval {
        let mut sum = Rat::zero();
        for k in 1..=n {
            sum += Rat::new(
                BigInt::one(),
                BigInt::from(k) * (BigInt::one() << k as usize),
            );
        }
        let tail = Rat::new(
            BigInt::from(2),
            BigInt::from(n + 1) * (BigInt::one() << (n + 1) as usize),
        );
        Interval::new(sum.clone(), sum + tail)
    }

    #[test]
    fn log_of_one_is_zero() {
        for bits in [16u32, 64, 200] {
            let l = log_enclose(&p(Rat::one()), bits).unwrap();
            assert!(l.contains(&Rat::zero()));
            assert!(l.width() <= Rat::new(BigInt::one(), BigInt::one() << bits as usize));
        }
    }

    #[test]
    fn log_of_e_contains_one() {
        let l = log_enclose(&e_enclosure(), 80).unwrap();
        assert!(l.contains(&Rat::one()), "{l:?}");
        assert!(l.width() < rat(1, 1_000_000_000));
    }

    #[test]
    fn log_of_two_matches_independent_series() {
        let oracle = ln2_series(300);
        let bits = 100;
        let l = log_enclose(&p(rat(2, 1)), bits).unwrap();
        assert!(l.overlaps(&oracle));
        assert!(l.width() <= Rat::new(BigInt::one(), BigInt::one() << bits as usize));
        let expected_lo = rat(693_147, 1_000_000);
        assert!(*l.lo() > expected_lo && *l.hi() < rat(693_148, 1_000_000));
        assert!(ln2_enclose(100).overlaps(&oracle));
    }

    #[test]
    fn log_handles_extreme_magnitudes() {
        let huge = Rat::from_integer(BigInt::one() << 100_000usize);
        let l = log_enclose(&p(huge), 64).unwrap();
        let oracle = ln2_series(200).scale(&rat(100_000, 1));
        assert!(l.overlaps(&oracle));
        let tiny = Rat::new(BigInt::one(), BigInt::from(3) << 5000usize);
        let l = log_enclose(&p(tiny), 64).unwrap();
        assert!(l.hi() < &rat(-3466, 1) && l.lo() > &rat(-3467, 1));
    }

    #[test]
    fn log_rejects_nonpositive() {
        assert!(log_enclose(&Interval::new(rat(-1, 1), rat(1, 1)), 32).is_err());
        assert!(log_enclose(&p(Rat::zero()), 32).is_err());
    }

    #[test]
    fn sqrt_and_phi() {
        let r = sqrt_enclose(&p(rat(2, 1)), 60).unwrap();
        assert!(r.lo() * r.lo() <= rat(2, 1) && r.hi() * r.hi() >= rat(2, 1));
        assert!(r.width() < rat(1, 1 << 50));
        let third = sqrt_enclose(&p(rat(4, 9)), 30).unwrap();
        assert!(third.contains(&rat(2, 3)) && third.width() < rat(1, 1 << 28));
        assert_eq!(sqrt_enclose(&p(rat(9, 4)), 30).unwrap(), p(rat(3, 2)));
        let phi = phi_enclose(64);
        // φ² = φ + 1 must be consistent with the enclosure.
        let sq = &phi * &phi;
        let plus = &phi + &p(Rat::one());
        assert!(sq.overlaps(&plus));
        assert!(phi.is_subset_of(&Interval::new(
            rat(16_180_339_887, 10_000_000_000),
            rat(16_180_339_888, 10_000_000_000)
        )));
    }

    proptest! {
        #[test]
        fn log_monotone_under_inclusion(a in 1i64..10_000, b in 0i64..1000, c in 0i64..1000,
                                        d in 0i64..1000, den in 1i64..500, bits in 8u32..90) {
            let outer = Interval::new(rat(a, den), rat(a + b + c + d, den));
            let inner = Interval::new(rat(a + b, den), rat(a + b + c, den));
            let lo = log_enclose(&inner, bits).unwrap();
            let lo2 = log_enclose(&outer, bits).unwrap();
            prop_assert!(lo.is_subset_of(&lo2), "{:?} not in {:?}", lo, lo2);
        }

        #[test]
        fn log_contains_float_value(n in 1i64..1_000_000, d in 1i64..1_000_000) {
            let x = rat(n, d);
            let l = log_enclose(&p(x), 40).unwrap();
            let f = (n as f64 / d as f64).ln();
            let slack = 1e-9;
            let lo = num_traits::ToPrimitive::to_f64(l.lo()).unwrap();
            let hi = num_traits::ToPrimitive::to_f64(l.hi()).unwrap();
            prop_assert!(lo - slack <= f && f <= hi + slack);
        }
    }
}
