//! JSON snapshot of a convergent table, for resuming deep constructions.

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::{CFNumber, Convergent, QuotientRule};
use crate::error::{Error, Result};

fn strings(it: impl Iterator<Item = String>) -> Value {
    Value::Array(it.map(Value::String).collect())
}

fn read_list(v: &Value, key: &str) -> Result<Vec<BigInt>> {
    let arr = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Cache(format!("missing array `{key}`")))?;
    arr.iter()
        .map(|x| {
            x.as_str()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Cache(format!("`{key}` holds a non-integer entry")))
        })
        .collect()
}

impl CFNumber {
    pub fn to_cache_json(&self) -> Value {
        json!({
            "schema": 1,
            "rule": self.rule.to_string(),
            "quotients": strings(self.convs.iter().map(|c| c.a.to_string())),
            "p": strings(self.convs.iter().map(|c| c.p.to_string())),
            "q": strings(self.convs.iter().map(|c| c.q.to_string())),
        })
    }

    /// Rebuilds a number from a snapshot. The stored table must match the
    /// recurrence for its quotients, and a rational rule is replayed.
    pub fn from_cache_json(v: &Value, max_digits: u64) -> Result<Self> {
        if v.get("schema").and_then(Value::as_u64) != Some(1) {
            return Err(Error::Cache("unsupported schema".to_string()));
        }
        let rule: QuotientRule = v
            .get("rule")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Cache("missing `rule`".to_string()))?
            .parse()?;
        let a = read_list(v, "quotients")?;
        let p = read_list(v, "p")?;
        let q = read_list(v, "q")?;
        if a.len() != p.len() || a.len() != q.len() {
            return Err(Error::Cache("table columns differ in length".to_string()));
        }
        let mut cf = CFNumber::new(rule)?.with_max_digits(max_digits);
        if cf.is_rational() {
            cf.extend_to(a.len().saturating_sub(1))?;
            if cf.len() != a.len() || cf.convs.iter().zip(&a).any(|(c, a)| &c.a != a) {
                return Err(Error::Cache(
                    "quotients disagree with the rational".to_string(),
                ));
            }
        } else {
            for (k, a) in a.into_iter().enumerate() {
                if let Some(listed) = cf.rule.listed(k) {
                    if listed != &a {
                        return Err(Error::Cache(format!(
                            "quotient {k} disagrees with the rule"
                        )));
                    }
                }
                let (p1, q1) = cf.pq(k as isize - 1);
                let (p2, q2) = cf.pq(k as isize - 2);
                cf.convs.push(Convergent {
                    k,
                    p: &a * p1 + p2,
                    q: &a * q1 + q2,
                    a,
                });
            }
        }
        for (k, c) in cf.convs.iter().enumerate() {
            if c.p != p[k] || c.q != q[k] {
                return Err(Error::Cache(format!(
                    "convergent {k} breaks the recurrence"
                )));
            }
        }
        Ok(cf)
    }
}
