//! Closed intervals over an ordered scalar.
//!
//! All operations are exact in the scalar: for exact fields (rationals,
//! integers) the result is the tight image of the operands, so no directed
//! rounding is needed. Floating scalars are accepted for convenience but
//! carry no soundness guarantee.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Num, Signed};

/// Scalars an [`Interval`] can be built over.
pub trait Scalar: Clone + PartialOrd + Num + Signed + fmt::Debug {}

impl<T: Clone + PartialOrd + Num + Signed + fmt::Debug> Scalar for T {}

/// Scalars with exact (or at least meaningful) division.
pub trait Field: Scalar {}

impl Field for num_rational::BigRational {}
impl Field for num_rational::Rational64 {}
impl Field for f64 {}
impl Field for f32 {}

fn min_of<T: Scalar>(a: &T, b: &T) -> T {
    if b < a {
        b.clone()
    } else {
        a.clone()
    }
}

fn max_of<T: Scalar>(a: &T, b: &T) -> T {
    if b > a {
        b.clone()
    } else {
        a.clone()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    /// Builds `[lo, hi]`; panics if `lo > hi`.
    pub fn new(lo: T, hi: T) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        Interval { lo, hi }
    }

    /// Builds the interval spanned by two endpoints in either order.
    pub fn hull_of(a: T, b: T) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(x: T) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn into_bounds(self) -> (T, T) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &T) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        Interval {
            lo: min_of(&self.lo, &other.lo),
            hi: max_of(&self.hi, &other.hi),
        }
    }

    pub fn abs(&self) -> Self {
        let zero = T::zero();
        if self.lo >= zero {
            self.clone()
        } else if self.hi <= zero {
            -self
        } else {
            Interval {
                lo: zero,
                hi: max_of(&-self.lo.clone(), &self.hi),
            }
        }
    }

    /// Image of `max(x, y)` over the operands.
    pub fn max(&self, other: &Self) -> Self {
        Interval {
            lo: max_of(&self.lo, &other.lo),
            hi: max_of(&self.hi, &other.hi),
        }
    }

    /// Image of `min(x, y)` over the operands.
    pub fn min(&self, other: &Self) -> Self {
        Interval {
            lo: min_of(&self.lo, &other.lo),
            hi: min_of(&self.hi, &other.hi),
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::hull_of(self.lo.clone() * k.clone(), self.hi.clone() * k.clone())
    }

    /// `Some(ordering)` when every pair of members compares the same way;
    /// `Equal` only for identical degenerate intervals.
    pub fn certified_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Self) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo > T::zero()
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi < T::zero()
    }
}

impl<T: Field> Interval<T> {
    /// Quotient by an interval that excludes zero.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        let zero = T::zero();
        if other.lo <= zero && other.hi >= zero {
            return None;
        }
        let inv = Interval::hull_of(T::one() / other.lo.clone(), T::one() / other.hi.clone());
        Some(self * &inv)
    }

    pub fn midpoint(&self) -> T {
        (self.lo.clone() + self.hi.clone()) / (T::one() + T::one())
    }
}

impl<T: Scalar> fmt::Debug for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl<T: Scalar> Add for &Interval<T> {
    type Output = Interval<T>;
    fn add(self, rhs: Self) -> Interval<T> {
        Interval {
            lo: self.lo.clone() + rhs.lo.clone(),
            hi: self.hi.clone() + rhs.hi.clone(),
        }
    }
}

impl<T: Scalar> Sub for &Interval<T> {
    type Output = Interval<T>;
    fn sub(self, rhs: Self) -> Interval<T> {
        Interval {
            lo: self.lo.clone() - rhs.hi.clone(),
            hi: self.hi.clone() - rhs.lo.clone(),
        }
    }
}

impl<T: Scalar> Neg for &Interval<T> {
    type Output = Interval<T>;
    fn neg(self) -> Interval<T> {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

impl<T: Scalar> Mul for &Interval<T> {
    type Output = Interval<T>;
    fn mul(self, rhs: Self) -> Interval<T> {
        let zero = T::zero();
        // Nonnegative operands are the hot path (sup-norms, Π², defects).
        if self.lo >= zero && rhs.lo >= zero {
            return Interval {
                lo: self.lo.clone() * rhs.lo.clone(),
                hi: self.hi.clone() * rhs.hi.clone(),
            };
        }
        let c = [
            self.lo.clone() * rhs.lo.clone(),
            self.lo.clone() * rhs.hi.clone(),
            self.hi.clone() * rhs.lo.clone(),
            self.hi.clone() * rhs.hi.clone(),
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        Interval { lo, hi }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Interval<T> {
            type Output = Interval<T>;
            fn $m(self, rhs: Self) -> Interval<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Interval<T> {
    type Output = Interval<T>;
    fn neg(self) -> Interval<T> {
        -&self
    }
}
