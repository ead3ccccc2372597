use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::grid::{bits_of, iv_cmp, iv_max, precision_schedule, scan, FixedTheta, Iv, Raw};
use super::point::{axis_point, require_theta_above_one, v_point, LatticePoint, PointLabel};
use crate::cf::CFNumber;
use crate::error::{Error, Result};
use crate::exact::{dyadic, Interval};
use crate::{Rat, RatInterval};

/// Default cap on preimages examined by one sweep.
pub const DEFAULT_MAX_PREIMAGES: u64 = 100_000_000;

/// `(x, y)` of the representative with `x > 0`, `y ≥ 0`.
pub type ClassKey = (BigInt, BigInt);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimaKind {
    Relative,
    Hyperbolic,
}

impl MinimaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MinimaKind::Relative => "relative",
            MinimaKind::Hyperbolic => "hyperbolic",
        }
    }
}

/// Two classes whose `quantity` could not be ordered at the finest
/// precision tried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieReport {
    pub a: (BigInt, BigInt),
    pub b: (BigInt, BigInt),
    pub quantity: &'static str,
}

/// One representative per `{±z, ±Rz}` class, ordered by sup-norm.
#[derive(Debug, Clone)]
pub struct MinimaSequence {
    pub kind: MinimaKind,
    pub bound: Rat,
    pub points: Vec<LatticePoint>,
    /// Every minimum of this kind with sup-norm at most `bound` is listed.
    pub complete: bool,
    /// The last member is not followed inside the bound by a later relative
    /// minimum, so the next hyperbolic minimum is unknown.
    pub provisional_last: bool,
    pub ties: Vec<TieReport>,
}

impl MinimaSequence {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn class_keys(&self) -> BTreeSet<ClassKey> {
        self.points.iter().map(|p| p.class_key()).collect()
    }

    pub fn require_untied(&self) -> Result<()> {
        match self.ties.first() {
            None => Ok(()),
            Some(t) => Err(Error::Tie(Box::new(t.clone()))),
        }
    }
}

fn reject_rational(cf: &CFNumber) -> Result<()> {
    if cf.is_rational() {
        return Err(Error::Domain(
            "the convergent characterization of minima needs an irrational θ".to_string(),
        ));
    }
    Ok(())
}

/// Relative minima with sup-norm at most `bound` from the convergents:
/// the class of `A(1, 0)` followed by `v_0, v_1, …`.
pub fn relative_minima_convergent(cf: &mut CFNumber, bound: &Rat) -> Result<MinimaSequence> {
    require_theta_above_one(cf)?;
    reject_rational(cf)?;
    let mut points = Vec::new();
    let axis = axis_point(cf, 64 + 2 * bits_of(bound))?;
    let below = |p: &LatticePoint| -> Result<bool> {
        if p.sup.hi() <= bound {
            Ok(true)
        } else if p.sup.lo() > bound {
            Ok(false)
        } else {
            Err(Error::Undecided(format!(
                "sup-norm of ({}, {}) against the bound {bound}",
                p.x, p.y
            )))
        }
    };
    if below(&axis)? {
        points.push(axis);
        for k in 0.. {
            let v = v_point(cf, k)?;
            if !below(&v)? {
                break;
            }
            points.push(v);
        }
    }
    Ok(MinimaSequence {
        kind: MinimaKind::Relative,
        bound: bound.clone(),
        points,
        complete: true,
        provisional_last: false,
        ties: Vec::new(),
    })
}

/// The class of `A(1, 0)` and `v_0..=v_depth`; complete up to the sup-norm
/// of `v_depth`.
pub fn convergent_minima(cf: &mut CFNumber, depth: usize) -> Result<MinimaSequence> {
    require_theta_above_one(cf)?;
    reject_rational(cf)?;
    let mut points = vec![axis_point(cf, 128)?];
    for k in 0..=depth {
        points.push(v_point(cf, k)?);
    }
    let bound = points.last().expect("nonempty").sup.hi().clone();
    Ok(MinimaSequence {
        kind: MinimaKind::Relative,
        bound,
        points,
        complete: true,
        provisional_last: false,
        ties: Vec::new(),
    })
}

/// Keeps each relative minimum whose Π² is at most every earlier one.
/// Overlapping Π² intervals keep the point and are reported as ties.
pub fn hyperbolic_from_relative(seq: &MinimaSequence) -> Result<MinimaSequence> {
    if seq.kind != MinimaKind::Relative {
        return Err(Error::InvalidArgument(
            "expected a sequence of relative minima".to_string(),
        ));
    }
    let mut points: Vec<LatticePoint> = Vec::new();
    let mut ties = Vec::new();
    let mut kept_last = 0;
    let mut min: Option<(RatInterval, usize)> = None;
    for (i, p) in seq.points.iter().enumerate() {
        if i > 0 && !seq.points[i - 1].sup.certainly_lt(&p.sup) {
            return Err(Error::Undecided(format!(
                "sup-norm order of ({}, {}) and its predecessor",
                p.x, p.y
            )));
        }
        let keep = match &min {
            None => true,
            Some((m, at)) => {
                if p.pi2.hi() < m.lo() {
                    true
                } else if p.pi2.lo() > m.hi() {
                    false
                } else {
                    ties.push(TieReport {
                        a: seq.points[*at].class_key(),
                        b: p.class_key(),
                        quantity: "pi2",
                    });
                    true
                }
            }
        };
        min = Some(match min {
            None => (p.pi2.clone(), i),
            Some((m, at)) => {
                let at = if p.pi2.lo() < m.lo() { i } else { at };
                (m.min(&p.pi2), at)
            }
        });
        if keep {
            points.push(p.clone());
            kept_last = i;
        }
    }
    let provisional_last = match points.last() {
        None => false,
        Some(last) => !seq.points[kept_last + 1..]
            .iter()
            .any(|q| q.pi2.lo() > last.pi2.hi()),
    };
    Ok(MinimaSequence {
        kind: MinimaKind::Hyperbolic,
        bound: seq.bound.clone(),
        points,
        complete: seq.complete,
        provisional_last,
        ties,
    })
}

fn label_for(cf: &CFNumber, x: &BigInt, y: &BigInt) -> PointLabel {
    if x.is_one() && y.is_zero() {
        return PointLabel::Axis;
    }
    cf.convergents()
        .iter()
        .find(|c| &c.q == x && &c.p == y)
        .map_or(PointLabel::Generic, |c| PointLabel::Convergent(c.k))
}

fn sup_of(r: &Raw) -> Iv {
    iv_max(&r.a, &r.b)
}

fn pi2_of(r: &Raw) -> Iv {
    (&r.a.0 * &r.b.0, &r.a.1 * &r.b.1)
}

/// Indices of relative minima, or `None` if some comparison is undecided.
fn relative_sweep(points: &[Raw]) -> Option<Vec<usize>> {
    let mut entries: Vec<(&Iv, &Iv, usize, bool)> = Vec::with_capacity(2 * points.len());
    for (i, r) in points.iter().enumerate() {
        entries.push((&r.a, &r.b, i, false));
        entries.push((&r.b, &r.a, i, true));
    }
    entries.sort_by(|x, y| x.0.cmp(y.0).then(x.2.cmp(&y.2)).then(x.3.cmp(&y.3)));
    if entries.windows(2).any(|w| w[0].0 .1 >= w[1].0 .0) {
        return None;
    }
    let mut minimal = vec![false; points.len()];
    let mut run: Option<(BigInt, BigInt)> = None;
    for (_, b, i, rot) in entries {
        let is_min = match &run {
            None => true,
            Some((lo, hi)) => {
                if &b.1 < lo {
                    true
                } else if &b.0 > hi {
                    false
                } else {
                    return None;
                }
            }
        };
        if !rot {
            minimal[i] = is_min;
        }
        run = Some(match run {
            None => b.clone(),
            Some((lo, hi)) => (lo.min(b.0.clone()), hi.min(b.1.clone())),
        });
    }
    Some((0..points.len()).filter(|&i| minimal[i]).collect())
}

/// Indices of points sorted by certified sup-norm order.
fn sup_order(points: &[Raw], idx: &[usize]) -> Option<Vec<usize>> {
    let sups: Vec<Iv> = idx.iter().map(|&i| sup_of(&points[i])).collect();
    let mut order: Vec<usize> = (0..idx.len()).collect();
    order.sort_by(|&x, &y| sups[x].cmp(&sups[y]));
    if order
        .windows(2)
        .any(|w| iv_cmp(&sups[w[0]], &sups[w[1]]) != Some(Ordering::Less))
    {
        return None;
    }
    Some(order.into_iter().map(|o| idx[o]).collect())
}

type HyperbolicPick = (Vec<usize>, Vec<(usize, usize)>);

fn hyperbolic_sweep(points: &[Raw], last_pass: bool) -> Option<HyperbolicPick> {
    let all: Vec<usize> = (0..points.len()).collect();
    let order = sup_order(points, &all)?;
    let mut kept = Vec::new();
    let mut ties = Vec::new();
    let mut run: Option<(Iv, usize)> = None;
    for i in order {
        let p = pi2_of(&points[i]);
        let keep = match &run {
            None => true,
            Some((m, at)) => {
                if p.1 < m.0 {
                    true
                } else if p.0 > m.1 {
                    false
                } else if last_pass {
                    ties.push((*at, i));
                    true
                } else {
                    return None;
                }
            }
        };
        run = Some(match run {
            None => (p, i),
            Some((m, at)) => {
                let at = if p.0 < m.0 { i } else { at };
                ((m.0.min(p.0), m.1.min(p.1)), at)
            }
        });
        if keep {
            kept.push(i);
        }
    }
    Some((kept, ties))
}

/// Runs `step` at doubling fixed-point precision until it decides.
fn refine<R>(
    cf: &mut CFNumber,
    bound_bits: u64,
    mut step: impl FnMut(&mut CFNumber, &FixedTheta, bool) -> Result<Option<R>>,
    what: &str,
) -> Result<R> {
    let (mut n, n_max) = precision_schedule(bound_bits);
    let mut last_width = None;
    loop {
        let ft = FixedTheta::new(cf, n)?;
        let width = &ft.hi - &ft.lo;
        // A box that stopped shrinking means the digit budget is exhausted.
        let stalled = last_width
            .as_ref()
            .is_some_and(|w: &BigInt| (w << 1usize) <= width);
        let last_pass = n >= n_max || stalled;
        if let Some(r) = step(cf, &ft, last_pass)? {
            return Ok(r);
        }
        if last_pass {
            return Err(Error::Undecided(what.to_string()));
        }
        last_width = Some(width);
        n = (2 * n).min(n_max);
    }
}

fn to_points(cf: &CFNumber, ft: &FixedTheta, raws: &[Raw], idx: &[usize]) -> Vec<LatticePoint> {
    idx.iter()
        .map(|&i| {
            let r = &raws[i];
            let label = label_for(cf, &r.x, &r.y);
            LatticePoint::from_box(r.x.clone(), r.y.clone(), &ft.theta, label)
        })
        .collect()
}

/// Exhaustively certified minima with sup-norm at most `bound`.
pub fn brute_minima(
    cf: &mut CFNumber,
    bound: &Rat,
    kind: MinimaKind,
    max_preimages: u64,
) -> Result<MinimaSequence> {
    require_theta_above_one(cf)?;
    let bb = bits_of(bound);
    let (points, ties) = refine(
        cf,
        bb,
        |cf, ft, last_pass| {
            let s = scan(ft, bound, bound, true, max_preimages)?;
            if s.ambiguous {
                return Ok(None);
            }
            let picked = match kind {
                MinimaKind::Relative => match relative_sweep(&s.points) {
                    Some(idx) => sup_order(&s.points, &idx).map(|o| (o, Vec::new())),
                    None => None,
                },
                MinimaKind::Hyperbolic => hyperbolic_sweep(&s.points, last_pass),
            };
            Ok(picked.map(|(idx, ties)| {
                let pts = to_points(cf, ft, &s.points, &idx);
                let ties = ties
                    .into_iter()
                    .map(|(a, b)| TieReport {
                        a: (s.points[a].x.clone(), s.points[a].y.clone()),
                        b: (s.points[b].x.clone(), s.points[b].y.clone()),
                        quantity: "pi2",
                    })
                    .collect::<Vec<_>>();
                (pts, ties)
            }))
        },
        "minima sweep did not separate the swept points",
    )?;
    Ok(MinimaSequence {
        kind,
        bound: bound.clone(),
        points,
        complete: true,
        provisional_last: false,
        ties,
    })
}

/// All nonzero lattice points with `|z1| ≤ λ1` and `|z2| ≤ λ2`, ordered by
/// preimage.
pub fn enumerate_box(
    cf: &mut CFNumber,
    lambda1: &Rat,
    lambda2: &Rat,
    max_preimages: u64,
) -> Result<Vec<LatticePoint>> {
    require_theta_above_one(cf)?;
    if lambda1 <= &Rat::zero() || lambda2 <= &Rat::zero() {
        return Err(Error::InvalidArgument(
            "box half-widths must be positive".to_string(),
        ));
    }
    let bb = bits_of(lambda1).max(bits_of(lambda2));
    refine(
        cf,
        bb,
        |cf, ft, _| {
            let s = scan(ft, lambda1, lambda2, false, max_preimages)?;
            if s.ambiguous {
                return Ok(None);
            }
            let idx: Vec<usize> = (0..s.points.len()).collect();
            Ok(Some(to_points(cf, ft, &s.points, &idx)))
        },
        "a point lies on the box boundary within the finest precision",
    )
}

/// `min Π²` over nonzero points with sup-norm at most `t`, for each `t`;
/// `None` where no such point exists.
pub fn min_product_profile(
    cf: &mut CFNumber,
    ts: &[Rat],
    max_preimages: u64,
) -> Result<Vec<Option<RatInterval>>> {
    require_theta_above_one(cf)?;
    let Some(tmax) = ts.iter().max().cloned() else {
        return Ok(Vec::new());
    };
    refine(
        cf,
        bits_of(&tmax),
        |_, ft, _| {
            let s = scan(ft, &tmax, &tmax, true, max_preimages)?;
            if s.ambiguous {
                return Ok(None);
            }
            let rows: Vec<(Iv, Iv)> = s.points.iter().map(|r| (sup_of(r), pi2_of(r))).collect();
            let mut out = Vec::with_capacity(ts.len());
            for t in ts {
                let f = ft.floor_scaled(t);
                let mut lo: Option<&BigInt> = None;
                let mut hi: Option<&BigInt> = None;
                for (sup, p) in &rows {
                    if sup.0 > f {
                        continue;
                    }
                    lo = Some(lo.map_or(&p.0, |m| m.min(&p.0)));
                    if sup.1 <= f {
                        hi = Some(hi.map_or(&p.1, |m| m.min(&p.1)));
                    }
                }
                match (lo, hi) {
                    (None, _) => out.push(None),
                    (Some(_), None) => return Ok(None),
                    (Some(l), Some(h)) => {
                        let e = -2 * ft.n as i64;
                        out.push(Some(Interval::new(
                            dyadic(l.clone(), e),
                            dyadic(h.clone(), e),
                        )));
                    }
                }
            }
            Ok(Some(out))
        },
        "a point lies on a profile radius within the finest precision",
    )
}

/// Whether the only integer points with `|xθ − y| ≤ |q_kθ − p_k|` and
/// `|x| ≤ q_{k+1}` are `0`, `±(q_k, p_k)` and `±(q_{k+1}, p_{k+1})`.
pub fn check_empty_parallelogram(cf: &mut CFNumber, k: usize, max_preimages: u64) -> Result<bool> {
    let ck = cf.convergent(k)?.clone();
    let cn = cf.convergent(k + 1)?.clone();
    let span = u64::try_from(&cn.q)
        .unwrap_or(u64::MAX)
        .saturating_mul(2)
        .saturating_add(1);
    if span.saturating_mul(3) > max_preimages {
        return Err(Error::Budget {
            resource: "preimages",
            attempted: span.saturating_mul(3),
            limit: max_preimages,
        });
    }
    let qn = i64::try_from(&cn.q).expect("bounded by the budget");
    let allowed: BTreeSet<(BigInt, BigInt)> = [
        (ck.q.clone(), ck.p.clone()),
        (-&ck.q, -&ck.p),
        (cn.q.clone(), cn.p.clone()),
        (-&cn.q, -&cn.p),
    ]
    .into_iter()
    .collect();
    let bb = cn.q.bits() + 1;
    refine(
        cf,
        2 * bb,
        |_, ft, _| {
            let d = ft.abs_z1(&ck.q, &ck.p);
            let one = BigInt::one() << ft.n as usize;
            let verdicts: Vec<Option<bool>> = (-qn..=qn)
                .into_par_iter()
                .map(|x| {
                    let xb = BigInt::from(x);
                    let tx = (&ft.lo * &xb).min(&ft.hi * &xb);
                    let tx_hi = (&ft.lo * &xb).max(&ft.hi * &xb);
                    let ylo = num_integer::Integer::div_ceil(&(tx - &d.1), &one);
                    let yhi = num_integer::Integer::div_floor(&(tx_hi + &d.1), &one);
                    let mut y = ylo;
                    let mut empty = Some(true);
                    while y <= yhi {
                        let pt = (xb.clone(), y.clone());
                        if !(x == 0 && y.is_zero()) && !allowed.contains(&pt) {
                            let a = ft.abs_z1(&xb, &y);
                            if a.1 <= d.0 {
                                return Some(false);
                            }
                            if a.0 <= d.1 {
                                empty = None;
                            }
                        }
                        y += 1;
                    }
                    empty
                })
                .collect();
            if verdicts.contains(&Some(false)) {
                return Ok(Some(false));
            }
            Ok(verdicts.iter().all(|v| *v == Some(true)).then_some(true))
        },
        "a point lies on the parallelogram boundary within the finest precision",
    )
}

/// Class sets of two sequences compared, as `(only_in_a, only_in_b)`.
pub fn class_difference(a: &MinimaSequence, b: &MinimaSequence) -> (Vec<ClassKey>, Vec<ClassKey>) {
    let (ka, kb) = (a.class_keys(), b.class_keys());
    (
        ka.difference(&kb).cloned().collect(),
        kb.difference(&ka).cloned().collect(),
    )
}
