use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::estimate::{convergent_hyperbolic, offset_of, omega_hat_hat_lattice};
use super::{point, CheckRow, Provenance, Scope, Verdict, VerificationReport};
use crate::cf::{CFNumber, QuotientRule, DEFAULT_MAX_DIGITS};
use crate::error::{Error, Result};
use crate::exact::{
    gamma_parts, phi_enclose, pow_compare, rat, rat_int, round_outward, DEFAULT_PRECISION,
};
use crate::lattice::{check_empty_parallelogram, MinimaKind, MinimaSequence};
use crate::{Rat, RatInterval};

/// Bits kept in interval values attached to report rows.
const SHOWN_BITS: u32 = 128;

fn shown(iv: &RatInterval) -> RatInterval {
    round_outward(iv, SHOWN_BITS)
}

fn decide(lt: bool, ge: bool) -> Option<bool> {
    if lt {
        Some(true)
    } else if ge {
        Some(false)
    } else {
        None
    }
}

/// Downgrades a verdict when the run stopped short of the requested depth.
fn truncate(report: &mut VerificationReport, stop: Option<String>) {
    if let Some(note) = stop {
        report.notes.push(note);
        if report.verdict == Verdict::Certified {
            report.verdict = Verdict::Inconclusive;
        }
    }
}

fn require_irrational(cf: &CFNumber) -> Result<()> {
    if cf.is_rational() {
        return Err(Error::Domain(format!("{} is rational", cf.rule())));
    }
    Ok(())
}

fn power_number(gamma: &Rat, max_digits: u64) -> Result<CFNumber> {
    gamma_parts(gamma)?;
    Ok(CFNumber::new(QuotientRule::PowerGrowth(gamma.clone()))?.with_max_digits(max_digits))
}

/// `D_k > 3·D_{k+1}` for `k = 0..depth`; certified when it holds on a
/// suffix reaching `depth − 1`.
pub fn verify_lemma2_premise(cf: &mut CFNumber, depth: usize) -> Result<VerificationReport> {
    require_irrational(cf)?;
    if !cf.convergent(0)?.a.is_one() {
        return Err(Error::Domain(format!(
            "{} does not lie in (1, 2)",
            cf.rule()
        )));
    }
    if depth < 1 {
        return Err(Error::InvalidArgument(
            "depth must be at least 1".to_string(),
        ));
    }
    cf.extend_to(depth)?;
    let mut rows = Vec::with_capacity(depth);
    let mut next = cf.approx_defect(0, 2)?;
    for k in 0..depth {
        let d = next;
        next = cf.approx_defect(k + 1, 2)?;
        let rhs = next.scale(&rat(3, 1));
        rows.push(CheckRow {
            k,
            holds: decide(rhs.certainly_lt(&d), d.certainly_le(&rhs)),
            values: vec![("defect", shown(&d)), ("three_next_defect", shown(&rhs))],
        });
    }
    Ok(VerificationReport::conclude(
        "lemma2-premise",
        cf.rule().to_string(),
        rows,
        Scope::Eventually,
    ))
}

fn lemma3_rows(seq: &MinimaSequence, phi: &RatInterval) -> Vec<CheckRow> {
    let four_thirds = rat(4, 3);
    let mut phi_pow = point(Rat::one());
    let mut rows = Vec::new();
    for k in 2..seq.len() {
        if k > 2 {
            phi_pow = round_outward(&(&phi_pow * phi), 2 * SHOWN_BITS);
        }
        let z = &seq.points[k - 1];
        let next = &seq.points[k];
        let bound = phi_pow.scale(&four_thirds).checked_div(&z.pi2);
        let holds = bound
            .as_ref()
            .and_then(|b| decide(b.certainly_lt(&next.sup), next.sup.certainly_le(b)));
        let mut values = vec![("sup_next", shown(&next.sup))];
        if let Some(b) = &bound {
            values.push(("bound", shown(b)));
        }
        values.push(("pi2_times_sup_next", shown(&(&z.pi2 * &next.sup))));
        rows.push(CheckRow { k, holds, values });
    }
    rows
}

/// `|z_{k+1}| > (4/3)·φ^{k−2}·Π(z_k)^{−2}` for every `k ≥ 2`, with
/// hyperbolic minima numbered from `z_1`. φ is enclosed from above, and
/// refined when a row is undecided.
pub fn verify_lemma3_growth(seq: &MinimaSequence) -> Result<VerificationReport> {
    if seq.kind != MinimaKind::Hyperbolic {
        return Err(Error::InvalidArgument(
            "expected hyperbolic minima".to_string(),
        ));
    }
    if seq.len() < 3 {
        return Err(Error::SequenceTooShort {
            need: 3,
            have: seq.len(),
        });
    }
    let mut rows = Vec::new();
    for bits in [64, 256, 1024] {
        rows = lemma3_rows(seq, &phi_enclose(bits));
        if rows.iter().all(|r| r.holds.is_some()) {
            break;
        }
    }
    let subject = format!("{} hyperbolic minima up to {}", seq.len(), seq.bound);
    let mut report = VerificationReport::conclude("lemma3-growth", subject, rows, Scope::From(2));
    report.index_offset = offset_of(seq);
    Ok(report)
}

/// `1/(a_{k+1} + 2) < D_k < 1/a_{k+1}` for `k = 0..=depth`, or as far as the
/// digit budget allows.
pub fn verify_classical_sandwich(cf: &mut CFNumber, depth: usize) -> Result<VerificationReport> {
    require_irrational(cf)?;
    let mut rows = Vec::new();
    let mut stop = None;
    for k in 0..=depth {
        let a = match cf.convergent(k + 1) {
            Ok(c) => c.a.clone(),
            Err(e) if e.is_budget() => {
                stop = Some(format!("stopped at k = {k}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let d = cf.approx_defect(k, 2)?;
        let lower = Rat::new(BigInt::one(), &a + 2);
        let upper = Rat::new(BigInt::one(), a);
        let holds = decide(
            d.lo() > &lower && d.hi() < &upper,
            d.hi() <= &lower || d.lo() >= &upper,
        );
        rows.push(CheckRow {
            k,
            holds,
            values: vec![
                ("defect", shown(&d)),
                ("lower", point(lower)),
                ("upper", point(upper)),
            ],
        });
    }
    let mut report = VerificationReport::conclude(
        "classical-sandwich",
        cf.rule().to_string(),
        rows,
        Scope::From(0),
    );
    truncate(&mut report, stop);
    Ok(report)
}

/// `q_k^{1+γ} < q_{k+1} < 3·q_k^{1+γ}` for `k = 1..=depth`, as the exact
/// integer comparisons `q_{k+1}^v > q_k^{u+v}` and `q_{k+1}^v < 3^v·q_k^{u+v}`.
pub fn verify_denominator_sandwich(
    gamma: &Rat,
    depth: usize,
    max_digits: u64,
) -> Result<VerificationReport> {
    let (u, v) = gamma_parts(gamma)?;
    let mut cf = power_number(gamma, max_digits)?;
    cf.extend_to(depth + 1)?;
    let third = rat(1, 3);
    let rows = (1..=depth)
        .map(|k| {
            let q = rat_int(cf.convergents()[k].q.clone());
            let next = rat_int(cf.convergents()[k + 1].q.clone());
            let above = pow_compare(&next, v as u64, &q, (u + v) as u64) == Ordering::Greater;
            let below =
                pow_compare(&(&next * &third), v as u64, &q, (u + v) as u64) == Ordering::Less;
            CheckRow {
                k,
                holds: Some(above && below),
                values: Vec::new(),
            }
        })
        .collect();
    Ok(VerificationReport::conclude(
        "denominator-sandwich",
        format!("power:{gamma}"),
        rows,
        Scope::From(1),
    ))
}

/// `1/(q_k^γ + 3) < D_k < 1/q_k^γ` for `k = 1..=depth`, comparing `1/D_k`
/// against `q_k^γ` exactly.
pub fn verify_product_bounds(
    gamma: &Rat,
    depth: usize,
    max_digits: u64,
) -> Result<VerificationReport> {
    let (u, v) = gamma_parts(gamma)?;
    let mut cf = power_number(gamma, max_digits)?;
    cf.extend_to(depth + 1)?;
    let one = Rat::one();
    let three = rat(3, 1);
    let mut rows = Vec::with_capacity(depth);
    for k in 1..=depth {
        let q = rat_int(cf.convergents()[k].q.clone());
        let d = cf.approx_defect(k, 2)?;
        let inv_lo = &one / d.hi();
        let inv_hi = &one / d.lo();
        // D < q^{-γ}  ⟺  (1/D)^v > q^u
        let upper = pow_compare(&inv_lo, v as u64, &q, u as u64) == Ordering::Greater;
        // D > 1/(q^γ + 3)  ⟺  1/D − 3 < q^γ
        let shifted = &inv_hi - &three;
        let lower = !shifted.is_positive()
            || pow_compare(&shifted, v as u64, &q, u as u64) == Ordering::Less;
        let upper_fails = pow_compare(&inv_hi, v as u64, &q, u as u64) != Ordering::Greater;
        let shifted_lo = &inv_lo - &three;
        let lower_fails = shifted_lo.is_positive()
            && pow_compare(&shifted_lo, v as u64, &q, u as u64) != Ordering::Less;
        rows.push(CheckRow {
            k,
            holds: decide(upper && lower, upper_fails || lower_fails),
            values: vec![("defect", shown(&d))],
        });
    }
    Ok(VerificationReport::conclude(
        "product-bounds",
        format!("power:{gamma}"),
        rows,
        Scope::From(1),
    ))
}

/// Exhaustive emptiness of the parallelograms around `v_0, …, v_depth`.
pub fn verify_empty_parallelogram(
    cf: &mut CFNumber,
    depth: usize,
    max_preimages: u64,
) -> Result<VerificationReport> {
    require_irrational(cf)?;
    let mut rows = Vec::new();
    let mut stop = None;
    for k in 0..=depth {
        match check_empty_parallelogram(cf, k, max_preimages) {
            Ok(empty) => rows.push(CheckRow {
                k,
                holds: Some(empty),
                values: Vec::new(),
            }),
            Err(e) if e.is_budget() => {
                stop = Some(format!("stopped at k = {k}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let mut report = VerificationReport::conclude(
        "empty-parallelogram",
        cf.rule().to_string(),
        rows,
        Scope::From(0),
    );
    truncate(&mut report, stop);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletOutcome {
    pub t: Rat,
    pub gamma: Rat,
    /// `(x, y)` with `|x| ≤ t` and `|θx − y| ≤ t^{−γ}`.
    pub solution: Option<(BigInt, BigInt)>,
    pub defect: Option<RatInterval>,
    /// Some convergent could be neither confirmed nor ruled out.
    pub undecided: bool,
}

/// Searches the convergents with `q_k ≤ t`, largest first, for a certified
/// solution of `|x| ≤ t`, `|θx − y| ≤ t^{−γ}`. For `γ = 1` the largest such
/// convergent always works.
pub fn dirichlet_check(cf: &mut CFNumber, t: &Rat, gamma: &Rat) -> Result<DirichletOutcome> {
    if t < &Rat::one() {
        return Err(Error::InvalidArgument(format!(
            "t must be at least 1, got {t}"
        )));
    }
    let (u, v) = gamma_parts(gamma)?;
    cf.extend_to(0)?;
    while &rat_int(cf.convergents().last().expect("extended").q.clone()) <= t {
        if cf.next_quotient()?.is_none() {
            break;
        }
    }
    let inv_t = t.recip();
    let mut undecided = false;
    let candidates: Vec<usize> = cf
        .convergents()
        .iter()
        .filter(|c| &rat_int(c.q.clone()) <= t)
        .map(|c| c.k)
        .collect();
    for k in candidates.into_iter().rev() {
        let bits = 2 * cf.convergents()[k].q.bits() + 64;
        let theta = cf.theta_box_bits(bits)?;
        let c = &cf.convergents()[k];
        let prec = DEFAULT_PRECISION + bits as u32;
        let defect = theta.eval(&c.q, &-&c.p, prec).abs();
        let fits = |x: &Rat| {
            x.is_zero() || pow_compare(x, v as u64, &inv_t, u as u64) != Ordering::Greater
        };
        if fits(defect.hi()) {
            return Ok(DirichletOutcome {
                t: t.clone(),
                gamma: gamma.clone(),
                solution: Some((c.q.clone(), c.p.clone())),
                defect: Some(defect),
                undecided,
            });
        }
        if fits(defect.lo()) {
            undecided = true;
        }
    }
    Ok(DirichletOutcome {
        t: t.clone(),
        gamma: gamma.clone(),
        solution: None,
        defect: None,
        undecided,
    })
}

/// [`dirichlet_check`] over several `t`; certified when every `t` has a
/// certified solution.
pub fn verify_dirichlet(cf: &mut CFNumber, ts: &[Rat], gamma: &Rat) -> Result<VerificationReport> {
    let mut rows = Vec::with_capacity(ts.len());
    for (i, t) in ts.iter().enumerate() {
        let out = dirichlet_check(cf, t, gamma)?;
        let holds = match (&out.solution, out.undecided) {
            (Some(_), _) => Some(true),
            (None, true) => None,
            (None, false) => Some(false),
        };
        let mut values = vec![("t", point(t.clone()))];
        if let (Some((x, y)), Some(d)) = (&out.solution, &out.defect) {
            values.push(("x", point(rat_int(x.clone()))));
            values.push(("y", point(rat_int(y.clone()))));
            values.push(("defect", shown(d)));
        }
        rows.push(CheckRow {
            k: i,
            holds,
            values,
        });
    }
    Ok(VerificationReport::conclude(
        "dirichlet",
        format!("{} with exponent {gamma}", cf.rule()),
        rows,
        Scope::From(0),
    ))
}

#[derive(Debug, Clone)]
pub struct SpectrumOptions {
    pub window: Option<usize>,
    pub max_digits: u64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            window: None,
            max_digits: DEFAULT_MAX_DIGITS,
        }
    }
}

/// Builds the power-growth number for γ, certifies `D_k > 3·D_{k+1}` on a
/// suffix, estimates `ω̂̂(Λθ)` from the hyperbolic minima among the
/// convergent points and compares it with `γ/(2 + 2γ)`.
pub fn verify_spectrum_point(
    gamma: &Rat,
    depth: usize,
    tol: &Rat,
    opts: &SpectrumOptions,
) -> Result<VerificationReport> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut cf = power_number(gamma, opts.max_digits)?;
    cf.extend_to(depth)?;
    let premise = verify_lemma2_premise(&mut cf, depth)?;
    if premise.verdict != Verdict::Certified {
        return Err(Error::FormulaInapplicable(format!(
            "D_k > 3·D_(k+1) is {} at k = {}",
            premise.verdict.as_str(),
            premise.rows.last().map_or(0, |r| r.k)
        )));
    }
    let seq = convergent_hyperbolic(&mut cf, depth)?;
    let mut estimate = omega_hat_hat_lattice(&seq, opts.window)?;
    if estimate.provenance != Provenance::Trace {
        return Err(Error::FormulaInapplicable(
            "hyperbolic minima stop decreasing".to_string(),
        ));
    }
    let target = gamma / (rat(2, 1) + gamma * rat(2, 1));
    estimate.target = Some(target.clone());
    let band = RatInterval::new(&target - tol, &target + tol);
    let judge = |v: &RatInterval| decide(v.is_subset_of(&band), !v.overlaps(&band));
    let rows = estimate
        .trace
        .iter()
        .map(|(k, v)| CheckRow {
            k: *k,
            holds: judge(v),
            values: vec![("lambda", v.clone())],
        })
        .collect();
    let mut report = VerificationReport::conclude(
        "spectrum-point",
        format!("power:{gamma}"),
        rows,
        Scope::Eventually,
    );
    let tail = estimate.tail_estimate.clone().expect("finite estimate");
    report.verdict = match judge(&tail) {
        Some(true) => Verdict::Certified,
        Some(false) => Verdict::Refuted,
        None => Verdict::Inconclusive,
    };
    report.notes.push(format!(
        "D_k > 3·D_(k+1) certified for k = {}..{}",
        premise.first_k.unwrap_or(0),
        depth - 1
    ));
    report.index_offset = estimate.index_offset;
    report.target = Some(target);
    report.estimate = Some(estimate);
    Ok(report)
}
