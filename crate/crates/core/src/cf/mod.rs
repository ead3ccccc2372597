//! Continued fractions `θ = [a_0; a_1, a_2, …]` generated by a
//! [`QuotientRule`], with cached convergents and exact enclosures of θ.

mod cache;
mod rule;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    floor_pow, floor_pow_bits_estimate, gamma_parts, quotient_or_round, Interval, RoundDir,
};
use crate::{Rat, RatInterval};

pub use rule::QuotientRule;

/// Default cap on the decimal digits of any convergent denominator.
pub const DEFAULT_MAX_DIGITS: u64 = 100_000;

/// Bits of the rule-derived lower bound used for an unknown complete quotient.
const TAIL_BOUND_BITS: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub k: usize,
    pub a: BigInt,
    pub p: BigInt,
    pub q: BigInt,
}

/// Exact enclosure of θ obtained from the convergents up to `level` and
/// bounds on the complete quotient `ζ_{level+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaBox {
    pub level: usize,
    pub interval: RatInterval,
}

impl ThetaBox {
    /// Encloses `α·θ + β` over the box, rounding large endpoints outward to
    /// `prec` significant bits.
    pub fn eval(&self, alpha: &BigInt, beta: &BigInt, prec: u32) -> RatInterval {
        let at = |t: &Rat, dir| {
            let n = alpha * t.numer() + beta * t.denom();
            quotient_or_round(n, t.denom().clone(), prec, dir)
        };
        let (tl, th) = if alpha.is_negative() {
            (self.interval.hi(), self.interval.lo())
        } else {
            (self.interval.lo(), self.interval.hi())
        };
        Interval::new(at(tl, RoundDir::Down), at(th, RoundDir::Up))
    }

    pub fn is_exact(&self) -> bool {
        self.interval.is_point()
    }
}

pub(crate) fn digits_for_bits(bits: u64) -> u64 {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as u64
}

#[derive(Debug, Clone)]
pub struct CFNumber {
    rule: QuotientRule,
    convs: Vec<Convergent>,
    /// Remaining Euclid pair for a rational rule; `None` once exhausted.
    euclid: Option<(BigInt, BigInt)>,
    max_digits: u64,
}

impl CFNumber {
    pub fn new(rule: QuotientRule) -> Result<Self> {
        rule.validate()?;
        let euclid = match &rule {
            QuotientRule::Rational(n, d) => Some((n.clone(), d.clone())),
            _ => None,
        };
        Ok(CFNumber {
            rule,
            convs: Vec::new(),
            euclid,
            max_digits: DEFAULT_MAX_DIGITS,
        })
    }

    pub fn parse(spec: &str) -> Result<Self> {
        Self::new(spec.parse()?)
    }

    pub fn with_max_digits(mut self, max_digits: u64) -> Self {
        self.max_digits = max_digits;
        self
    }

    pub fn rule(&self) -> &QuotientRule {
        &self.rule
    }

    pub fn max_digits(&self) -> u64 {
        self.max_digits
    }

    pub fn is_rational(&self) -> bool {
        self.rule.is_rational()
    }

    /// True once a rational expansion has produced its last quotient.
    pub fn is_terminated(&self) -> bool {
        self.is_rational() && self.euclid.is_none()
    }

    /// Cached convergents `0..len`.
    pub fn convergents(&self) -> &[Convergent] {
        &self.convs
    }

    pub fn len(&self) -> usize {
        self.convs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.convs.is_empty()
    }

    /// Index of the final convergent of a fully expanded rational.
    pub fn last_index(&mut self) -> Option<usize> {
        if !self.is_rational() {
            return None;
        }
        while self.next_quotient().ok().flatten().is_some() {}
        self.convs.len().checked_sub(1)
    }

    /// `(p_k, q_k)` including the seeds at `k = -1, -2`.
    fn pq(&self, k: isize) -> (BigInt, BigInt) {
        match k {
            -2 => (BigInt::zero(), BigInt::one()),
            -1 => (BigInt::one(), BigInt::zero()),
            _ => {
                let c = &self.convs[k as usize];
                (c.p.clone(), c.q.clone())
            }
        }
    }

    fn check_digits(&self, bits: u64) -> Result<()> {
        let digits = digits_for_bits(bits);
        if digits > self.max_digits {
            return Err(Error::Budget {
                resource: "digits",
                attempted: digits,
                limit: self.max_digits,
            });
        }
        Ok(())
    }

    fn last_q_bits(&self) -> u64 {
        self.convs.last().map_or(1, |c| c.q.bits())
    }

    /// Appends `a_{k+1}` and its convergent. `Ok(None)` once a rational
    /// expansion is exhausted.
    pub fn next_quotient(&mut self) -> Result<Option<BigInt>> {
        let k = self.convs.len();
        let a = match &self.rule {
            QuotientRule::Explicit(_) | QuotientRule::Periodic { .. } => {
                let a = self.rule.listed(k).expect("listed rule").clone();
                self.check_digits(self.last_q_bits() + a.bits() + 1)?;
                a
            }
            QuotientRule::PowerGrowth(g) => {
                if k == 0 {
                    BigInt::one()
                } else {
                    let (u, v) = gamma_parts(g)?;
                    let q = &self.convs[k - 1].q;
                    let est = floor_pow_bits_estimate(q, u as u64, v as u64);
                    self.check_digits(est + q.bits() + 2)?;
                    floor_pow(q, g)? + 1
                }
            }
            QuotientRule::SuperGrowth => match k {
                0 => BigInt::one(),
                1 => BigInt::from(2),
                _ => {
                    let q = &self.convs[k - 1].q;
                    let e = (k - 1) as u64;
                    self.check_digits(floor_pow_bits_estimate(q, e, 1) + q.bits() + 2)?;
                    floor_pow(q, &Rat::from_integer(e.into()))? + 1
                }
            },
            QuotientRule::Rational(..) => {
                let Some((n, d)) = self.euclid.take() else {
                    return Ok(None);
                };
                let (a, r) = n.div_mod_floor(&d);
                if !r.is_zero() {
                    self.euclid = Some((d, r));
                }
                a
            }
        };
        let (p1, q1) = self.pq(k as isize - 1);
        let (p2, q2) = self.pq(k as isize - 2);
        let p = &a * p1 + p2;
        let q = &a * q1 + q2;
        self.convs.push(Convergent {
            k,
            a: a.clone(),
            p,
            q,
        });
        Ok(Some(a))
    }

    /// Convergents `0..=depth`, or the whole finite expansion if shorter.
    pub fn extend_to(&mut self, depth: usize) -> Result<&[Convergent]> {
        while self.convs.len() <= depth {
            if self.next_quotient()?.is_none() {
                break;
            }
        }
        let end = self.convs.len().min(depth + 1);
        Ok(&self.convs[..end])
    }

    pub fn convergent(&mut self, k: usize) -> Result<&Convergent> {
        self.extend_to(k)?;
        let have = self.convs.len();
        self.convs
            .get(k)
            .ok_or(Error::SequenceTooShort { need: k + 1, have })
    }

    /// Largest index `≤ level` whose convergent fits the digit budget.
    pub fn reach(&mut self, level: usize) -> Result<usize> {
        match self.extend_to(level).map(|_| ()) {
            Ok(()) => {}
            Err(e) if e.is_budget() && !self.convs.is_empty() => {}
            Err(e) => return Err(e),
        }
        Ok(self.convs.len().min(level + 1).saturating_sub(1))
    }

    /// θ exactly, for a rational rule.
    fn rational_value(&self) -> Option<Rat> {
        match &self.rule {
            QuotientRule::Rational(n, d) => Some(Rat::new(n.clone(), d.clone())),
            _ => None,
        }
    }

    /// Bounds `[lo, hi]` on the complete quotient `ζ_{L+1}`; `hi = None`
    /// means unbounded. Rule-derived, so independent of the cache.
    fn tail_bounds(&self, level: usize) -> (BigInt, Option<BigInt>) {
        if let Some(a) = self.rule.listed(level + 1) {
            return (a.clone(), Some(a + 1));
        }
        let b = self.convs[level].q.bits().max(1) - 1;
        let e = match &self.rule {
            QuotientRule::PowerGrowth(g) => {
                let (u, v) = gamma_parts(g).expect("validated exponent");
                b * u as u64 / v as u64
            }
            QuotientRule::SuperGrowth if level == 0 => {
                return (BigInt::from(2), Some(BigInt::from(3)));
            }
            QuotientRule::SuperGrowth => b * level as u64,
            _ => 0,
        };
        (BigInt::one() << e.min(TAIL_BOUND_BITS) as usize, None)
    }

    /// Exact enclosure of θ from the convergents through `level`.
    pub fn theta_box(&mut self, level: usize) -> Result<ThetaBox> {
        if let Some(t) = self.rational_value() {
            return Ok(ThetaBox {
                level,
                interval: Interval::point(t),
            });
        }
        self.convergent(level)?;
        let (lo, hi) = self.tail_bounds(level);
        let (p1, q1) = self.pq(level as isize);
        let (p0, q0) = self.pq(level as isize - 1);
        let at = |z: &BigInt| Rat::new_raw(z * &p1 + &p0, z * &q1 + &q0);
        let a = at(&lo);
        let b = match hi {
            Some(h) => at(&h),
            None => Rat::new_raw(p1, q1),
        };
        Ok(ThetaBox {
            level,
            interval: Interval::hull_of(a, b),
        })
    }

    /// Smallest-level box whose width is at most about `2^-bits`, or the
    /// deepest box the digit budget allows.
    pub fn theta_box_bits(&mut self, bits: u64) -> Result<ThetaBox> {
        if self.is_rational() {
            return self.theta_box(0);
        }
        let mut level = 0;
        loop {
            if self.reach(level)? < level {
                return self.theta_box(level - 1);
            }
            let (lo, _) = self.tail_bounds(level);
            let qb = self.convs[level].q.bits();
            // width ≤ 1/(q_L·(ζ q_L + q_{L-1})) ≤ 2^-(2(qb-1) + bits(lo) - 1)
            if 2 * (qb - 1) + lo.bits() > bits + 2 {
                return self.theta_box(level);
            }
            level += 1;
        }
    }

    /// Interval with endpoints `p_{k+refine}/q_{k+refine}` and
    /// `p_{k+refine+1}/q_{k+refine+1}`; the exact value for a rational rule.
    pub fn enclose_theta(&mut self, k: usize, refine: usize) -> Result<RatInterval> {
        if let Some(t) = self.rational_value() {
            return Ok(Interval::point(t));
        }
        let l = k + refine;
        self.convergent(l + 1)?;
        let (a, b) = (&self.convs[l], &self.convs[l + 1]);
        Ok(Interval::hull_of(
            Rat::new_raw(a.p.clone(), a.q.clone()),
            Rat::new_raw(b.p.clone(), b.q.clone()),
        ))
    }

    /// Enclosure of `D_k = q_k·|q_k θ − p_k|` using θ from the convergents
    /// through `k + refine`, or as deep as the digit budget allows.
    pub fn approx_defect(&mut self, k: usize, refine: usize) -> Result<RatInterval> {
        self.convergent(k)?;
        if self.is_rational() && self.last_index() == Some(k) {
            return Ok(Interval::point(Rat::zero()));
        }
        let level = self.reach(k + refine)?;
        let boxed = self.theta_box(level)?;
        let c = &self.convs[k];
        let alpha = &c.q * &c.q;
        let beta = -(&c.q * &c.p);
        // D_k sits within a relative 1/q_{k+1} of 1/a_{k+1}; keep enough bits
        // to resolve that.
        let next = &self.convs[level.min(k + 1)].q;
        let prec = crate::exact::DEFAULT_PRECISION as u64 + next.bits() + c.q.bits();
        let prec = u32::try_from(prec).unwrap_or(u32::MAX);
        Ok(boxed.eval(&alpha, &beta, prec).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{pow_compare, rat, rat_int};
    use std::cmp::Ordering;

    fn pq(cf: &mut CFNumber, depth: usize) -> Vec<(i64, i64)> {
        cf.extend_to(depth)
            .unwrap()
            .iter()
            .map(|c| {
                (
                    c.p.to_string().parse().unwrap(),
                    c.q.to_string().parse().unwrap(),
                )
            })
            .collect()
    }

    fn quotients(cf: &CFNumber) -> Vec<BigInt> {
        cf.convergents().iter().map(|c| c.a.clone()).collect()
    }

    #[test]
    fn golden_is_fibonacci() {
        let mut cf = CFNumber::new(QuotientRule::golden()).unwrap();
        assert_eq!(pq(&mut cf, 4), [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5)]);
    }

    #[test]
    fn power_one_table() {
        let mut cf = CFNumber::parse("power:1").unwrap();
        assert_eq!(
            pq(&mut cf, 4),
            [(1, 1), (3, 2), (10, 7), (83, 58), (4907, 3429)]
        );
        assert_eq!(quotients(&cf), [1, 2, 3, 8, 59].map(BigInt::from));
    }

    #[test]
    fn super_growth_quotients() {
        let mut cf = CFNumber::new(QuotientRule::SuperGrowth).unwrap();
        cf.extend_to(3).unwrap();
        // q_0 = 1, q_1 = 2, a_2 = 2 + 1, q_2 = 7, a_3 = 49 + 1.
        assert_eq!(quotients(&cf), [1, 2, 3, 50].map(BigInt::from));
    }

    #[test]
    fn rational_terminates() {
        let mut cf = CFNumber::parse("rational:10/7").unwrap();
        let got = pq(&mut cf, 10);
        assert_eq!(quotients(&cf), [1, 2, 3].map(BigInt::from));
        assert_eq!(got.last(), Some(&(10, 7)));
        assert!(cf.is_terminated());
        assert_eq!(cf.next_quotient().unwrap(), None);
        assert!(matches!(
            cf.convergent(5),
            Err(Error::SequenceTooShort { .. })
        ));
    }

    #[test]
    fn enclose_theta_examples() {
        let mut cf = CFNumber::parse("power:1/1").unwrap();
        let t = cf.enclose_theta(2, 1).unwrap();
        assert_eq!(t, Interval::new(rat(4907, 3429), rat(83, 58)));
        let mut g = CFNumber::new(QuotientRule::golden()).unwrap();
        assert_eq!(
            g.enclose_theta(0, 0).unwrap(),
            Interval::new(rat(1, 1), rat(2, 1))
        );
        let mut r = CFNumber::parse("rational:10/7").unwrap();
        for k in 0..4 {
            assert_eq!(r.enclose_theta(k, 2).unwrap(), Interval::point(rat(10, 7)));
        }
    }

    #[test]
    fn enclosures_nest() {
        for spec in [
            "golden",
            "sqrt2",
            "power:1/2",
            "power:2",
            "super",
            "quotients:3,1,4,1,5,9,2,6",
        ] {
            let mut cf = CFNumber::parse(spec).unwrap();
            for k in 0..4 {
                let outer = cf.enclose_theta(k, 0).unwrap();
                let inner = cf.enclose_theta(k, 1).unwrap();
                assert!(inner.is_subset_of(&outer), "{spec} k={k}");
                let b = cf.theta_box(k + 1).unwrap();
                assert!(b.interval.is_subset_of(&outer), "{spec} box k={k}");
            }
        }
    }

    #[test]
    fn theta_box_contains_sqrt2() {
        let mut cf = CFNumber::new(QuotientRule::sqrt2()).unwrap();
        let b = cf.theta_box_bits(200).unwrap();
        let (lo, hi) = (b.interval.lo(), b.interval.hi());
        assert!(lo * lo < rat(2, 1) && hi * hi > rat(2, 1));
        assert!(b.interval.width() < Rat::new(BigInt::one(), BigInt::one() << 200usize));
    }

    #[test]
    fn determinant_identity() {
        for spec in [
            "golden",
            "sqrt2",
            "power:1/2",
            "power:1",
            "power:2",
            "super",
            "rational:355/113",
        ] {
            let mut cf = CFNumber::parse(spec).unwrap();
            let convs = cf.extend_to(8).unwrap().to_vec();
            for w in convs.windows(2) {
                let det = &w[0].p * &w[1].q - &w[0].q * &w[1].p;
                assert_eq!(det.abs(), BigInt::one(), "{spec} k={}", w[0].k);
            }
        }
    }

    #[test]
    fn defect_examples() {
        let mut g = CFNumber::new(QuotientRule::golden()).unwrap();
        // D_1 = 2 - φ ≈ 0.381966
        let d1 = g.approx_defect(1, 2).unwrap();
        assert!(d1.lo() > &rat(1, 3) && d1.hi() < &rat(1, 1));
        assert!(d1.contains(&rat(381_966, 1_000_000)));
        let fine = g.approx_defect(1, 40).unwrap();
        assert!(fine.lo() > &rat(381_966, 1_000_000) && fine.hi() < &rat(381_967, 1_000_000));
        let mut p = CFNumber::parse("power:1").unwrap();
        let d3 = p.approx_defect(3, 2).unwrap();
        assert!(d3.lo() > &rat(1, 61) && d3.hi() < &rat(1, 59));
        let mut r = CFNumber::parse("rational:10/7").unwrap();
        assert_eq!(r.approx_defect(2, 2).unwrap(), Interval::point(Rat::zero()));
    }

    #[test]
    fn classical_sandwich() {
        for (spec, depth) in [("golden", 25), ("sqrt2", 25), ("power:1", 12), ("super", 6)] {
            let mut cf = CFNumber::parse(spec).unwrap();
            for k in 0..=depth {
                let d = cf.approx_defect(k, 2).unwrap();
                let a = cf.convergent(k + 1).unwrap().a.clone();
                let lower = Rat::new(BigInt::one(), &a + 2);
                let upper = Rat::new(BigInt::one(), a);
                assert!(d.lo() > &lower && d.hi() < &upper, "{spec} k={k}");
            }
        }
    }

    #[test]
    fn power_growth_sandwiches() {
        for (u, v, depth) in [(1u32, 2u32, 12usize), (1, 1, 9), (2, 1, 6)] {
            let mut cf = CFNumber::new(QuotientRule::power(u, v)).unwrap();
            cf.extend_to(depth + 1).unwrap();
            for k in 1..=depth {
                let qk = cf.convergents()[k].q.clone();
                let qn = cf.convergents()[k + 1].q.clone();
                // q_{k+1}^v > q_k^{u+v} and q_{k+1}^v < 3^v q_k^{u+v}
                let lhs = rat_int(qn);
                let rhs = rat_int(qk.clone());
                assert_eq!(
                    pow_compare(&lhs, v as u64, &rhs, (u + v) as u64),
                    Ordering::Greater
                );
                let scaled = &lhs / rat_int(3);
                assert_eq!(
                    pow_compare(&scaled, v as u64, &rhs, (u + v) as u64),
                    Ordering::Less
                );
                // 1/(q^γ + 3) < D_k < 1/q^γ: compare 1/D against q^γ
                let d = cf.approx_defect(k, 2).unwrap();
                let inv_hi = rat_int(1) / d.lo();
                let inv_lo = rat_int(1) / d.hi();
                assert_eq!(
                    pow_compare(&inv_lo, v as u64, &rhs, u as u64),
                    Ordering::Greater
                );
                let shifted = inv_hi - rat_int(3);
                assert!(
                    !shifted.is_positive()
                        || pow_compare(&shifted, v as u64, &rhs, u as u64) == Ordering::Less
                );
            }
        }
    }

    #[test]
    fn digit_budget_is_enforced() {
        let mut cf = CFNumber::new(QuotientRule::SuperGrowth)
            .unwrap()
            .with_max_digits(1000);
        let err = cf.extend_to(20).unwrap_err();
        assert!(err.is_budget());
        let reached = cf.reach(20).unwrap();
        assert!((5..20).contains(&reached));
        let b = cf.theta_box(reached).unwrap();
        assert!(b.interval.is_subset_of(&cf.enclose_theta(0, 0).unwrap()));
    }
}
