use num_bigint::BigInt;
use num_traits::One;

use super::verify::verify_lemma2_premise;
use super::{
    log_ratio, point, window_max, window_min, Exponent, ExponentEstimate, Provenance, Verdict,
};
use crate::cf::CFNumber;
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, sqrt_enclose, DEFAULT_PRECISION};
use crate::lattice::{
    check_empty_parallelogram, convergent_minima, hyperbolic_from_relative, min_product_profile,
    MinimaKind, MinimaSequence, PointLabel,
};
use crate::{Rat, RatInterval};

/// Trailing quarter of a trace, at least one entry.
pub fn default_window(len: usize) -> usize {
    len.div_ceil(4).max(1)
}

fn require_depth(depth: usize) -> Result<()> {
    if depth < 2 {
        return Err(Error::InvalidArgument(format!(
            "depth must be at least 2, got {depth}"
        )));
    }
    Ok(())
}

/// `ω(θ)` from `λ_k = 1 + ln a_{k+1} / ln q_k`, maximized over the window.
pub fn omega_regular(
    cf: &mut CFNumber,
    depth: usize,
    window: Option<usize>,
) -> Result<ExponentEstimate> {
    require_depth(depth)?;
    if cf.is_rational() {
        return Ok(ExponentEstimate::infinite(Exponent::Omega));
    }
    cf.extend_to(depth)?;
    let one = Rat::one();
    let mut trace = Vec::new();
    for k in 1..depth {
        let c = &cf.convergents()[k];
        if c.q.is_one() {
            continue;
        }
        let a = point(rat_int(cf.convergents()[k + 1].a.clone()));
        let q = point(rat_int(c.q.clone()));
        let ratio = log_ratio(&a, &q, &one)?;
        trace.push((k, &point(one.clone()) + &ratio));
    }
    let window = window.unwrap_or_else(|| default_window(trace.len()));
    Ok(ExponentEstimate {
        exponent: Exponent::Omega,
        tail_estimate: window_max(&trace, window),
        trace,
        window,
        target: None,
        infinite: false,
        provenance: Provenance::Trace,
        index_offset: Some(0),
        notes: Vec::new(),
    })
}

/// `ω̂(θ) = 1` for irrational θ, backed by exhaustive checks that the
/// parallelograms around `v_0, …, v_depth` hold no other lattice points.
/// A budget stop keeps the indices certified so far.
pub fn omega_hat_uniform(
    cf: &mut CFNumber,
    depth: usize,
    max_preimages: u64,
) -> Result<ExponentEstimate> {
    require_depth(depth)?;
    if cf.is_rational() {
        return Ok(ExponentEstimate::infinite(Exponent::OmegaHat));
    }
    let mut trace = Vec::new();
    let mut notes = Vec::new();
    for k in 0..=depth {
        match check_empty_parallelogram(cf, k, max_preimages) {
            Ok(true) => trace.push((k, point(Rat::one()))),
            Ok(false) => {
                notes.push(format!(
                    "parallelogram around v_{k} holds another lattice point"
                ));
                break;
            }
            Err(e) if e.is_budget() => {
                notes.push(format!("stopped at k = {k}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ExponentEstimate {
        exponent: Exponent::OmegaHat,
        window: trace.len(),
        trace,
        tail_estimate: Some(point(Rat::one())),
        target: Some(Rat::one()),
        infinite: false,
        provenance: Provenance::Parallelogram,
        index_offset: Some(0),
        notes,
    })
}

/// True when the hyperbolic minima stop decreasing inside the bound: either
/// Π ties or a later relative minimum certifiably exceeds the last one.
fn attains_minimum(seq: &MinimaSequence) -> bool {
    !seq.ties.is_empty() || (!seq.is_empty() && !seq.provisional_last)
}

pub(crate) fn offset_of(seq: &MinimaSequence) -> Option<i64> {
    seq.points
        .iter()
        .enumerate()
        .rev()
        .find_map(|(i, p)| match p.label {
            PointLabel::Convergent(n) => Some(n as i64 - (i as i64 + 1)),
            _ => None,
        })
}

/// `ω̂̂(Λθ)` from hyperbolic minima `z_1, z_2, …` via
/// `λ_k = −(1/2)·ln Π(z_k)² / ln |z_{k+1}|`, minimized over the window.
/// When the minimum of Π is attained the exponent is 0.
pub fn omega_hat_hat_lattice(
    seq: &MinimaSequence,
    window: Option<usize>,
) -> Result<ExponentEstimate> {
    if seq.kind != MinimaKind::Hyperbolic {
        return Err(Error::InvalidArgument(
            "expected hyperbolic minima".to_string(),
        ));
    }
    let direct = attains_minimum(seq);
    if !direct && seq.len() < 3 {
        return Err(Error::SequenceTooShort {
            need: 3,
            have: seq.len(),
        });
    }
    let half = rat(-1, 2);
    let mut trace = Vec::new();
    for (i, pair) in seq.points.windows(2).enumerate() {
        if !direct && !pair[0].sup.certainly_lt(&pair[1].sup) {
            return Err(Error::Undecided(format!(
                "sup-norm order of z_{} and z_{}",
                i + 1,
                i + 2
            )));
        }
        trace.push((i + 1, log_ratio(&pair[0].pi2, &pair[1].sup, &half)?));
    }
    let window = window.unwrap_or_else(|| default_window(trace.len()));
    let (tail, provenance) = if direct {
        (
            Some(point(Rat::from_integer(BigInt::from(0)))),
            Provenance::DirectProfile,
        )
    } else {
        (window_min(&trace, window), Provenance::Trace)
    };
    Ok(ExponentEstimate {
        exponent: Exponent::OmegaHatHatLattice,
        trace,
        window,
        tail_estimate: tail,
        target: None,
        infinite: false,
        provenance,
        index_offset: offset_of(seq),
        notes: Vec::new(),
    })
}

/// Hyperbolic minima among `A(1, 0), v_0, …, v_depth`.
pub fn convergent_hyperbolic(cf: &mut CFNumber, depth: usize) -> Result<MinimaSequence> {
    hyperbolic_from_relative(&convergent_minima(cf, depth)?)
}

/// [`omega_hat_hat_lattice`] over the hyperbolic minima among the
/// convergent points; infinite for rational θ.
pub fn omega_hat_hat_lattice_of(
    cf: &mut CFNumber,
    depth: usize,
    window: Option<usize>,
) -> Result<ExponentEstimate> {
    require_depth(depth)?;
    if cf.is_rational() {
        return Ok(ExponentEstimate::infinite(Exponent::OmegaHatHatLattice));
    }
    omega_hat_hat_lattice(&convergent_hyperbolic(cf, depth)?, window)
}

/// `ω̂̂(θ) = 1 + 2·ω̂̂(Λθ)`. The trace route needs the premise
/// `D_k > 3·D_{k+1}` certified from some index on.
pub fn omega_hat_hat_number(
    cf: &mut CFNumber,
    depth: usize,
    window: Option<usize>,
) -> Result<ExponentEstimate> {
    require_depth(depth)?;
    if cf.is_rational() {
        return Ok(ExponentEstimate::infinite(Exponent::OmegaHatHat));
    }
    let seq = convergent_hyperbolic(cf, depth)?;
    let lattice = omega_hat_hat_lattice(&seq, window)?;
    let mut notes = Vec::new();
    if lattice.provenance == Provenance::Trace {
        let premise = verify_lemma2_premise(cf, depth)?;
        if premise.verdict != Verdict::Certified {
            return Err(Error::FormulaInapplicable(format!(
                "D_k > 3·D_(k+1) is {} at k = {}",
                premise.verdict.as_str(),
                premise.rows.last().map_or(0, |r| r.k)
            )));
        }
        notes.push(format!(
            "D_k > 3·D_(k+1) certified for k = {}..{}",
            premise.first_k.unwrap_or(0),
            premise.rows.last().map_or(0, |r| r.k)
        ));
    }
    Ok(to_number(lattice, notes))
}

pub(crate) fn to_number(lattice: ExponentEstimate, notes: Vec<String>) -> ExponentEstimate {
    let one = point(Rat::one());
    let two = rat(2, 1);
    let lift = |v: &RatInterval| &one + &v.scale(&two);
    ExponentEstimate {
        exponent: Exponent::OmegaHatHat,
        trace: lattice.trace.iter().map(|(k, v)| (*k, lift(v))).collect(),
        window: lattice.window,
        tail_estimate: lattice.tail_estimate.as_ref().map(lift),
        target: lattice.target.map(|t| Rat::one() + t * rat(2, 1)),
        infinite: false,
        provenance: lattice.provenance,
        index_offset: lattice.index_offset,
        notes,
    }
}

/// `f(t) = min Π(z)` over nonzero `z ∈ Λθ` with `|z| ≤ t`, by exhaustive
/// sweep; `None` where the ball holds no lattice point.
pub fn direct_weak_profile(
    cf: &mut CFNumber,
    ts: &[Rat],
    max_preimages: u64,
) -> Result<Vec<(Rat, Option<RatInterval>)>> {
    let pi2 = min_product_profile(cf, ts, max_preimages)?;
    ts.iter()
        .zip(pi2)
        .map(|(t, v)| {
            let f = v.map(|v| sqrt_enclose(&v, DEFAULT_PRECISION)).transpose()?;
            Ok((t.clone(), f))
        })
        .collect()
}
