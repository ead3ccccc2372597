//! Exhaustive preimage sweeps in fixed point.
//!
//! θ is held as integers `lo ≤ θ·2^n ≤ hi`; every coordinate of a swept
//! point becomes an integer interval in units of `2^-n`, so a sweep needs no
//! rational normalization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::cf::{CFNumber, ThetaBox};
use crate::error::{Error, Result};
use crate::Rat;

pub(crate) type Iv = (BigInt, BigInt);

fn iv_abs(lo: BigInt, hi: BigInt) -> Iv {
    if !lo.is_negative() {
        (lo, hi)
    } else if !hi.is_positive() {
        (-hi, -lo)
    } else {
        let m = (-lo).max(hi.clone());
        (BigInt::zero(), m)
    }
}

pub(crate) fn iv_max(a: &Iv, b: &Iv) -> Iv {
    ((&a.0).max(&b.0).clone(), (&a.1).max(&b.1).clone())
}

/// Certified order of two intervals, `None` when they overlap.
pub(crate) fn iv_cmp(a: &Iv, b: &Iv) -> Option<std::cmp::Ordering> {
    use std::cmp::Ordering::*;
    if a.1 < b.0 {
        Some(Less)
    } else if a.0 > b.1 {
        Some(Greater)
    } else if a.0 == a.1 && b.0 == b.1 && a.0 == b.0 {
        Some(Equal)
    } else {
        None
    }
}

#[derive(Debug, Clone)]
pub(crate) struct FixedTheta {
    pub n: u64,
    pub lo: BigInt,
    pub hi: BigInt,
    pub theta: ThetaBox,
}

impl FixedTheta {
    pub fn new(cf: &mut CFNumber, n: u64) -> Result<Self> {
        let theta = cf.theta_box_bits(n + 2)?;
        let scale = |r: &Rat, up: bool| {
            let num = r.numer() << n as usize;
            let (q, rem) = num.div_mod_floor(r.denom());
            if up && !rem.is_zero() {
                q + 1
            } else {
                q
            }
        };
        let lo = scale(theta.interval.lo(), false);
        let hi = scale(theta.interval.hi(), true);
        Ok(FixedTheta { n, lo, hi, theta })
    }

    fn one(&self) -> BigInt {
        BigInt::from(1) << self.n as usize
    }

    /// Scaled enclosure of `θ·t`.
    fn times(&self, t: &BigInt) -> Iv {
        let (a, b) = (&self.lo * t, &self.hi * t);
        if t.is_negative() {
            (b, a)
        } else {
            (a, b)
        }
    }

    /// Scaled `|θx − y|`.
    pub fn abs_z1(&self, x: &BigInt, y: &BigInt) -> Iv {
        let (a, b) = self.times(x);
        let s = y << self.n as usize;
        iv_abs(a - &s, b - s)
    }

    /// Scaled `|x + θy|`.
    pub fn abs_z2(&self, x: &BigInt, y: &BigInt) -> Iv {
        let (a, b) = self.times(y);
        let s = x << self.n as usize;
        iv_abs(a + &s, b + s)
    }

    /// `⌊λ·2^n⌋`: a scaled value `v` satisfies `v ≤ λ·2^n` iff `v ≤ F`.
    pub fn floor_scaled(&self, lambda: &Rat) -> BigInt {
        (lambda.numer() << self.n as usize).div_floor(lambda.denom())
    }
}

fn ceil_int(r: &Rat) -> BigInt {
    r.numer().div_ceil(r.denom())
}

/// A swept point with scaled `|z1|`, `|z2|`.
#[derive(Debug, Clone)]
pub(crate) struct Raw {
    pub x: BigInt,
    pub y: BigInt,
    pub a: Iv,
    pub b: Iv,
}

pub(crate) struct Scan {
    pub points: Vec<Raw>,
    /// Some point could not be placed inside or outside the box.
    pub ambiguous: bool,
}

/// All nonzero preimages with `|z1| ≤ λ1`, `|z2| ≤ λ2`; with
/// `quadrant_only`, just those with `x > 0, y ≥ 0`.
pub(crate) fn scan(
    ft: &FixedTheta,
    l1: &Rat,
    l2: &Rat,
    quadrant_only: bool,
    budget: u64,
) -> Result<Scan> {
    let one = ft.one();
    let one2 = &one * &one;
    let (c1, c2) = (ceil_int(l1), ceil_int(l2));
    // |x| ≤ (θλ1 + λ2)/(1 + θ²)
    let xmax = (&ft.hi * &c1 * &one + &c2 * &one2).div_floor(&(&one2 + &ft.lo * &ft.lo));
    let xmax: i64 = i64::try_from(xmax).map_err(|_| Error::Budget {
        resource: "preimages",
        attempted: u64::MAX,
        limit: budget,
    })?;
    let xmin = if quadrant_only { 1 } else { -xmax };
    let big1 = &c1 * &one;
    let f1 = ft.floor_scaled(l1);
    let f2 = ft.floor_scaled(l2);

    let range = |x: i64| -> (BigInt, BigInt) {
        let xb = BigInt::from(x);
        let (tl, th) = ft.times(&xb);
        let mut ylo = (tl - &big1).div_ceil(&one);
        let mut yhi = (th + &big1).div_floor(&one);
        let u = &c2 - &xb;
        let l = -&c2 - &xb;
        let u_den = if u.is_negative() { &ft.hi } else { &ft.lo };
        let l_den = if l.is_positive() { &ft.hi } else { &ft.lo };
        yhi = yhi.min((u * &one).div_floor(u_den));
        ylo = ylo.max((l * &one).div_ceil(l_den));
        if quadrant_only {
            ylo = ylo.max(BigInt::zero());
        }
        (ylo, yhi)
    };

    let xs: Vec<i64> = (xmin..=xmax).collect();
    let ranges: Vec<(BigInt, BigInt)> = xs.par_iter().map(|&x| range(x)).collect();
    let total: BigInt = ranges
        .iter()
        .filter(|(a, b)| a <= b)
        .map(|(a, b)| b - a + 1)
        .sum();
    let total = u64::try_from(total).unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::Budget {
            resource: "preimages",
            attempted: total,
            limit: budget,
        });
    }

    let per_x: Vec<(Vec<Raw>, bool)> = xs
        .par_iter()
        .zip(ranges.par_iter())
        .map(|(&x, (ylo, yhi))| {
            let xb = BigInt::from(x);
            let mut out = Vec::new();
            let mut ambiguous = false;
            let mut y = ylo.clone();
            while &y <= yhi {
                if !(x == 0 && y.is_zero()) {
                    let a = ft.abs_z1(&xb, &y);
                    let b = ft.abs_z2(&xb, &y);
                    let inside = a.1 <= f1 && b.1 <= f2;
                    let outside = a.0 > f1 || b.0 > f2;
                    if inside {
                        out.push(Raw {
                            x: xb.clone(),
                            y: y.clone(),
                            a,
                            b,
                        });
                    } else if !outside {
                        ambiguous = true;
                    }
                }
                y += 1;
            }
            (out, ambiguous)
        })
        .collect();

    let ambiguous = per_x.iter().any(|(_, a)| *a);
    let points = per_x.into_iter().flat_map(|(p, _)| p).collect();
    Ok(Scan { points, ambiguous })
}

/// Starting and final fixed-point precisions for a sweep up to `bound`.
pub(crate) fn precision_schedule(bound_bits: u64) -> (u64, u64) {
    (32 + 3 * bound_bits, 200 + 4 * bound_bits)
}

pub(crate) fn bits_of(r: &Rat) -> u64 {
    ceil_int(&r.abs()).bits().max(1)
}
