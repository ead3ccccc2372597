use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rat;

/// How the partial quotients `a_0, a_1, …` are produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientRule {
    /// Listed quotients; the last one repeats forever.
    Explicit(Vec<BigInt>),
    Periodic {
        prefix: Vec<BigInt>,
        period: Vec<BigInt>,
    },
    /// `a_0 = 1`, `a_{k+1} = ⌊q_k^γ⌋ + 1`.
    PowerGrowth(Rat),
    /// `a_0 = 1`, `a_{k+1} = ⌊q_k^k⌋ + 1` (so `a_1 = 2`).
    SuperGrowth,
    /// The rational number `num/den`, expanded by Euclid's algorithm.
    Rational(BigInt, BigInt),
}

impl QuotientRule {
    pub fn golden() -> Self {
        QuotientRule::Explicit(vec![BigInt::one()])
    }

    pub fn sqrt2() -> Self {
        QuotientRule::Periodic {
            prefix: vec![BigInt::one()],
            period: vec![BigInt::from(2)],
        }
    }

    pub fn power(u: u32, v: u32) -> Self {
        QuotientRule::PowerGrowth(Rat::new(u.into(), v.into()))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        QuotientRule::Rational(num.into(), den.into())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, QuotientRule::Rational(..))
    }

    /// Quotient `a_k` for list-driven rules, `None` for the others.
    pub fn listed(&self, k: usize) -> Option<&BigInt> {
        match self {
            QuotientRule::Explicit(list) => Some(&list[k.min(list.len() - 1)]),
            QuotientRule::Periodic { prefix, period } => Some(if k < prefix.len() {
                &prefix[k]
            } else {
                &period[(k - prefix.len()) % period.len()]
            }),
            _ => None,
        }
    }

    /// Largest quotient a list-driven rule ever produces.
    pub fn quotient_bound(&self) -> Option<BigInt> {
        match self {
            QuotientRule::Explicit(list) => list.iter().max().cloned(),
            QuotientRule::Periodic { prefix, period } => prefix.iter().chain(period).max().cloned(),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidRule(self.to_string(), why.to_string()));
        match self {
            QuotientRule::Explicit(list) => {
                if list.is_empty() {
                    return bad("quotient list is empty");
                }
                if list.iter().any(|a| !a.is_positive()) {
                    return bad("quotients must be positive integers");
                }
            }
            QuotientRule::Periodic { prefix, period } => {
                if period.is_empty() {
                    return bad("period is empty");
                }
                if prefix.iter().chain(period).any(|a| !a.is_positive()) {
                    return bad("quotients must be positive integers");
                }
            }
            QuotientRule::PowerGrowth(g) => {
                if !g.is_positive() {
                    return bad("exponent must be positive");
                }
                crate::exact::gamma_parts(g)
                    .map_err(|e| Error::InvalidRule(self.to_string(), e.to_string()))?;
            }
            QuotientRule::SuperGrowth => {}
            QuotientRule::Rational(n, d) => {
                if !d.is_positive() {
                    return bad("denominator must be at least 1");
                }
                if n.is_negative() {
                    return bad("numerator must be nonnegative");
                }
            }
        }
        Ok(())
    }
}

fn join(list: &[BigInt]) -> String {
    list.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for QuotientRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientRule::Explicit(list) => write!(f, "quotients:{}", join(list)),
            QuotientRule::Periodic { prefix, period } => {
                write!(f, "periodic:{};{}", join(prefix), join(period))
            }
            QuotientRule::PowerGrowth(g) => write!(f, "power:{}/{}", g.numer(), g.denom()),
            QuotientRule::SuperGrowth => write!(f, "super"),
            QuotientRule::Rational(n, d) => write!(f, "rational:{n}/{d}"),
        }
    }
}

fn parse_list(src: &str, body: &str) -> Result<Vec<BigInt>> {
    let body = body.trim();
    let body = body
        .strip_suffix('…')
        .or_else(|| body.strip_suffix("..."))
        .unwrap_or(body)
        .trim_end_matches([',', ' ']);
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|s| {
            s.trim().parse::<BigInt>().map_err(|_| {
                Error::InvalidRule(src.to_string(), format!("`{}` is not an integer", s.trim()))
            })
        })
        .collect()
}

fn parse_ratio(src: &str, body: &str) -> Result<(BigInt, BigInt)> {
    let bad = || Error::InvalidRule(src.to_string(), format!("`{body}` is not a ratio P/Q"));
    let (n, d) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (body.trim(), "1"),
    };
    let n = n.parse::<BigInt>().map_err(|_| bad())?;
    let d = d.parse::<BigInt>().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok((n, d))
}

impl FromStr for QuotientRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let rule = match kind {
            "quotients" | "explicit" => QuotientRule::Explicit(parse_list(s, body)?),
            "periodic" => {
                let (prefix, period) = body.split_once(';').ok_or_else(|| {
                    Error::InvalidRule(s.to_string(), "expected `prefix;period`".to_string())
                })?;
                QuotientRule::Periodic {
                    prefix: parse_list(s, prefix)?,
                    period: parse_list(s, period)?,
                }
            }
            "power" => {
                let (n, d) = parse_ratio(s, body)?;
                QuotientRule::PowerGrowth(Rat::new(n, d))
            }
            "super" if body.is_empty() => QuotientRule::SuperGrowth,
            "rational" => {
                let (n, d) = parse_ratio(s, body)?;
                QuotientRule::Rational(n, d)
            }
            "golden" if body.is_empty() => QuotientRule::golden(),
            "sqrt2" if body.is_empty() => QuotientRule::sqrt2(),
            _ => {
                return Err(Error::InvalidRule(
                    s.to_string(),
                    "expected power:U/V, super, quotients:a0,a1,…, periodic:prefix;period or rational:P/Q"
                        .to_string(),
                ))
            }
        };
        rule.validate()?;
        Ok(rule)
    }
}
