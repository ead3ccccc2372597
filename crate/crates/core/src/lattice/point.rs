use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cf::{CFNumber, ThetaBox};
use crate::error::{Error, Result};
use crate::exact::{round_outward, DEFAULT_PRECISION};
use crate::RatInterval;

/// Levels of θ refinement beyond `k` used for the convergent points `v_k`.
pub const V_REFINE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointLabel {
    /// The class of `A(1, 0) = (θ, 1)`.
    Axis,
    /// `v_k = A(q_k, p_k)`.
    Convergent(usize),
    Generic,
}

/// A point `A·(x, y)` of `Λθ` with `z1 = θx − y`, `z2 = x + θy`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint {
    pub x: BigInt,
    pub y: BigInt,
    pub z1: RatInterval,
    pub z2: RatInterval,
    pub sup: RatInterval,
    pub pi2: RatInterval,
    pub label: PointLabel,
}

impl LatticePoint {
    pub fn from_box(x: BigInt, y: BigInt, theta: &ThetaBox, label: PointLabel) -> Self {
        let z1 = theta.eval(&x, &-&y, DEFAULT_PRECISION);
        let z2 = theta.eval(&y, &x, DEFAULT_PRECISION);
        Self::from_coords(x, y, z1, z2, label)
    }

    fn from_coords(
        x: BigInt,
        y: BigInt,
        z1: RatInterval,
        z2: RatInterval,
        label: PointLabel,
    ) -> Self {
        let (a1, a2) = (z1.abs(), z2.abs());
        let sup = a1.max(&a2);
        let pi2 = round_outward(&(&a1 * &a2), DEFAULT_PRECISION);
        LatticePoint {
            x,
            y,
            z1,
            z2,
            sup,
            pi2,
            label,
        }
    }

    /// `R·z = (−z2, z1)`, the image of the preimage `(−y, x)`.
    pub fn rotate(&self) -> Self {
        LatticePoint {
            x: -&self.y,
            y: self.x.clone(),
            z1: -&self.z2,
            z2: self.z1.clone(),
            sup: self.sup.clone(),
            pi2: self.pi2.clone(),
            label: self.label,
        }
    }

    pub fn preimage(&self) -> (BigInt, BigInt) {
        (self.x.clone(), self.y.clone())
    }

    pub fn class_key(&self) -> (BigInt, BigInt) {
        class_key(&self.x, &self.y)
    }
}

/// The member of `{±(x, y), ±(−y, x)}` with `x > 0, y ≥ 0`; every nonzero
/// class has exactly one.
pub fn class_key(x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
    let mut p = (x.clone(), y.clone());
    for _ in 0..4 {
        if p.0.is_positive() && !p.1.is_negative() {
            return p;
        }
        p = (-p.1, p.0);
    }
    p
}

/// Rejects θ ≤ 1. Irrational rules always have `a_0 ≥ 1`, hence θ > 1.
pub fn require_theta_above_one(cf: &CFNumber) -> Result<()> {
    if let crate::cf::QuotientRule::Rational(n, d) = cf.rule() {
        if n <= d {
            return Err(Error::Domain(format!(
                "the lattice needs θ > 1, got {}",
                cf.rule()
            )));
        }
    }
    Ok(())
}

/// Extra bits of `q_level` over `q_{k+1}` that keep the box error of
/// `z1(v_k)` far below its size.
const V_MARGIN_BITS: u64 = 20;

/// `v_k = A(q_k, p_k)`, with θ taken from the convergents through at least
/// `k + V_REFINE` (deeper while `q` grows slowly), or as deep as the digit
/// budget allows.
pub fn v_point(cf: &mut CFNumber, k: usize) -> Result<LatticePoint> {
    require_theta_above_one(cf)?;
    let c = cf.convergent(k)?.clone();
    let mut level = cf.reach(k + V_REFINE)?;
    let want = cf.convergents()[level.min(k + 1)].q.bits() + V_MARGIN_BITS;
    while cf.convergents()[level].q.bits() < want {
        let next = cf.reach(level + 1)?;
        if next == level {
            break;
        }
        level = next;
    }
    let theta = cf.theta_box(level)?;
    Ok(LatticePoint::from_box(
        c.q,
        c.p,
        &theta,
        PointLabel::Convergent(k),
    ))
}

/// The class representative `A(1, 0) = (θ, 1)`.
pub fn axis_point(cf: &mut CFNumber, theta_bits: u64) -> Result<LatticePoint> {
    require_theta_above_one(cf)?;
    let theta = cf.theta_box_bits(theta_bits)?;
    Ok(LatticePoint::from_box(
        BigInt::one(),
        BigInt::zero(),
        &theta,
        PointLabel::Axis,
    ))
}
