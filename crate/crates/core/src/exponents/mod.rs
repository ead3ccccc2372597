//! Certified estimates of the Diophantine exponents of θ and of `Λθ`, and
//! verifiers for the inequalities behind the spectrum construction.

mod estimate;
mod verify;

use crate::error::{Error, Result};
use crate::exact::{log_enclose, rat, round_outward, Interval};
use crate::{Rat, RatInterval};

pub use estimate::{
    convergent_hyperbolic, default_window, direct_weak_profile, omega_hat_hat_lattice,
    omega_hat_hat_lattice_of, omega_hat_hat_number, omega_hat_uniform, omega_regular,
};
pub use verify::{
    dirichlet_check, verify_classical_sandwich, verify_denominator_sandwich, verify_dirichlet,
    verify_empty_parallelogram, verify_lemma2_premise, verify_lemma3_growth, verify_product_bounds,
    verify_spectrum_point, DirichletOutcome, SpectrumOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exponent {
    /// `ω(θ)`
    Omega,
    /// `ω̂(θ)`
    OmegaHat,
    /// `ω̂̂(θ)`
    OmegaHatHat,
    /// `ω̂̂(Λθ)`
    OmegaHatHatLattice,
}

impl Exponent {
    pub fn as_str(self) -> &'static str {
        match self {
            Exponent::Omega => "omega",
            Exponent::OmegaHat => "omega_hat",
            Exponent::OmegaHatHat => "omega_hat_hat",
            Exponent::OmegaHatHatLattice => "omega_hat_hat_lattice",
        }
    }
}

/// Where a tail estimate comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Extremum of the trace over the trailing window.
    Trace,
    /// The minimum of Π over balls is attained, so the weak exponent is 0.
    DirectProfile,
    /// Empty parallelograms around the convergents.
    Parallelogram,
    /// θ is rational.
    Rational,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Trace => "trace",
            Provenance::DirectProfile => "direct-profile",
            Provenance::Parallelogram => "parallelogram",
            Provenance::Rational => "rational",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentEstimate {
    pub exponent: Exponent,
    pub trace: Vec<(usize, RatInterval)>,
    /// Number of trailing trace entries the tail estimate is taken over.
    pub window: usize,
    /// `None` exactly when `infinite` is set.
    pub tail_estimate: Option<RatInterval>,
    pub target: Option<Rat>,
    pub infinite: bool,
    pub provenance: Provenance,
    /// Trace index `k` refers to the convergent point `v_{k + offset}`.
    pub index_offset: Option<i64>,
    pub notes: Vec<String>,
}

impl ExponentEstimate {
    pub(crate) fn infinite(exponent: Exponent) -> Self {
        ExponentEstimate {
            exponent,
            trace: Vec::new(),
            window: 0,
            tail_estimate: None,
            target: None,
            infinite: true,
            provenance: Provenance::Rational,
            index_offset: None,
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One index of a checked claim; `holds` is `None` when the enclosures
/// could not decide it.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub k: usize,
    pub holds: Option<bool>,
    pub values: Vec<(&'static str, RatInterval)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub claim: &'static str,
    pub subject: String,
    pub rows: Vec<CheckRow>,
    /// First index from which every later row holds.
    pub first_k: Option<usize>,
    pub verdict: Verdict,
    pub index_offset: Option<i64>,
    pub estimate: Option<ExponentEstimate>,
    pub target: Option<Rat>,
    pub notes: Vec<String>,
}

/// How the rows of a report combine into a verdict.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Scope {
    /// Every row with `k ≥ from` must hold.
    From(usize),
    /// Some suffix must hold; the last row decides.
    Eventually,
}

impl VerificationReport {
    pub(crate) fn conclude(
        claim: &'static str,
        subject: String,
        rows: Vec<CheckRow>,
        scope: Scope,
    ) -> Self {
        let mut first_k = None;
        for row in rows.iter().rev() {
            if row.holds != Some(true) {
                break;
            }
            first_k = Some(row.k);
        }
        let verdict = match scope {
            Scope::From(from) => {
                let relevant: Vec<_> = rows.iter().filter(|r| r.k >= from).collect();
                if relevant.iter().any(|r| r.holds == Some(false)) {
                    Verdict::Refuted
                } else if !relevant.is_empty() && relevant.iter().all(|r| r.holds == Some(true)) {
                    Verdict::Certified
                } else {
                    Verdict::Inconclusive
                }
            }
            Scope::Eventually => match rows.last().and_then(|r| r.holds) {
                Some(true) => Verdict::Certified,
                Some(false) => Verdict::Refuted,
                None => Verdict::Inconclusive,
            },
        };
        VerificationReport {
            claim,
            subject,
            rows,
            first_k,
            verdict,
            index_offset: None,
            estimate: None,
            target: None,
            notes: Vec::new(),
        }
    }
}

/// Width every trace interval is refined to before window extrema are taken.
fn lambda_width() -> Rat {
    rat(1, 10_000)
}

const MIN_LOG_BITS: u32 = 64;
const MAX_LOG_BITS: u32 = 4096;

/// `scale · ln(num) / ln(den)`, with the logarithms refined until the
/// result is narrower than [`lambda_width`] or the bit cap is reached.
pub(crate) fn log_ratio(num: &RatInterval, den: &RatInterval, scale: &Rat) -> Result<RatInterval> {
    let mut bits = MIN_LOG_BITS;
    loop {
        let ln_num = log_enclose(num, bits)?;
        let ln_den = log_enclose(den, bits)?;
        if !ln_den.certainly_positive() {
            return Err(Error::Domain(format!(
                "log-ratio denominator {} is not certifiably above 1",
                den.lo()
            )));
        }
        let ratio = ln_num
            .checked_div(&ln_den)
            .expect("denominator excludes zero")
            .scale(scale);
        let ratio = round_outward(&ratio, 2 * bits);
        if ratio.width() <= lambda_width() || bits >= MAX_LOG_BITS {
            return Ok(ratio);
        }
        bits *= 2;
    }
}

pub(crate) fn window_min(trace: &[(usize, RatInterval)], window: usize) -> Option<RatInterval> {
    let start = trace.len().saturating_sub(window);
    trace[start..]
        .iter()
        .map(|(_, v)| v.clone())
        .reduce(|a, b| a.min(&b))
}

pub(crate) fn window_max(trace: &[(usize, RatInterval)], window: usize) -> Option<RatInterval> {
    let start = trace.len().saturating_sub(window);
    trace[start..]
        .iter()
        .map(|(_, v)| v.clone())
        .reduce(|a, b| a.max(&b))
}

pub(crate) fn point(x: Rat) -> RatInterval {
    Interval::point(x)
}
