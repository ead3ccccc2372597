//! Directed-rounded decimal rendering of rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundDir {
    Down,
    Up,
}

fn pow10(k: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// `n·10^s / d` rounded in `dir`, for `n, d > 0`.
fn scaled(n: &BigInt, d: &BigInt, s: i64, up: bool) -> BigInt {
    let (num, den) = if s >= 0 {
        (n * pow10(s as u64), d.clone())
    } else {
        (n.clone(), d * pow10((-s) as u64))
    };
    let (q, r) = num.div_mod_floor(&den);
    if up && !r.is_zero() {
        q + 1
    } else {
        q
    }
}

/// Renders `x` with at most `digits` significant digits, rounded toward
/// `-∞` (`Down`) or `+∞` (`Up`). Plain notation is used for decimal
/// exponents in `[-6, 20]`, scientific notation otherwise.
pub fn to_decimal(x: &Rat, digits: u32, dir: RoundDir) -> String {
    let digits = digits.max(1) as i64;
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let n = x.numer().abs();
    let d = x.denom().clone();
    // Rounding the magnitude up moves a negative value down.
    let up = matches!(dir, RoundDir::Up) != neg;

    // Decimal exponent E with 10^E ≤ |x| < 10^(E+1).
    let log2 = n.bits() as f64 - d.bits() as f64;
    let mut e = (log2 * std::f64::consts::LOG10_2).floor() as i64 - 1;
    loop {
        let below = if e >= 0 {
            n >= &d * pow10(e as u64)
        } else {
            &n * pow10((-e) as u64) >= d
        };
        if !below {
            e -= 1;
            continue;
        }
        let above = if e + 1 >= 0 {
            n >= &d * pow10((e + 1) as u64)
        } else {
            &n * pow10((-(e + 1)) as u64) >= d
        };
        if above {
            e += 1;
        } else {
            break;
        }
    }

    let mut m = scaled(&n, &d, digits - 1 - e, up);
    if m == pow10(digits as u64) {
        m = pow10((digits - 1) as u64);
        e += 1;
    }
    let mut s = m.to_string();
    let trimmed = s.trim_end_matches('0').len().max(1);
    s.truncate(trimmed);

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-6..=20).contains(&e) {
        if e < 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-e - 1) as usize));
            out.push_str(&s);
        } else {
            let int_len = e as usize + 1;
            if s.len() <= int_len {
                out.push_str(&s);
                out.extend(std::iter::repeat_n('0', int_len - s.len()));
            } else {
                out.push_str(&s[..int_len]);
                out.push('.');
                out.push_str(&s[int_len..]);
            }
        }
    } else {
        out.push_str(&s[..1]);
        if s.len() > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        out.push('e');
        out.push_str(&e.to_string());
    }
    out
}

/// Exact text form: `p/q`, or `m*2^e` for a large dyadic, or an integer.
pub fn exact_string(x: &Rat) -> String {
    let d = x.denom();
    if d.is_one() {
        return x.numer().to_string();
    }
    if x.numer().bits() + d.bits() > 512 && d.trailing_zeros() == Some(d.bits() - 1) {
        return format!("{}*2^-{}", x.numer(), d.bits() - 1);
    }
    format!("{}/{}", x.numer(), d)
}
