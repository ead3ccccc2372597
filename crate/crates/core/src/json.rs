//! JSON encodings. Every number is written twice: as a directed-rounded
//! decimal for plotting and as an exact string (`p/q`, an integer or
//! `m*2^-e`). Objects are key-sorted, so equal inputs give equal bytes.

use serde_json::{json, Value};

use crate::cf::CFNumber;
use crate::exact::{exact_string, to_decimal, RoundDir};
use crate::exponents::{CheckRow, ExponentEstimate, VerificationReport};
use crate::lattice::{LatticePoint, MinimaSequence, PointLabel, TieReport};
use crate::{Rat, RatInterval};

pub const SCHEMA: u64 = 1;

/// Significant digits of the decimal forms.
pub const DECIMAL_DIGITS: u32 = 12;

pub fn rat_json(x: &Rat) -> Value {
    json!({
        "dec": to_decimal(x, DECIMAL_DIGITS, RoundDir::Down),
        "exact": exact_string(x),
    })
}

pub fn interval_json(iv: &RatInterval) -> Value {
    json!({
        "dec": [
            to_decimal(iv.lo(), DECIMAL_DIGITS, RoundDir::Down),
            to_decimal(iv.hi(), DECIMAL_DIGITS, RoundDir::Up),
        ],
        "exact": [exact_string(iv.lo()), exact_string(iv.hi())],
    })
}

fn opt<T>(x: Option<&T>, f: impl Fn(&T) -> Value) -> Value {
    x.map_or(Value::Null, f)
}

/// Wraps a payload with the schema version and the command that made it.
pub fn document(kind: &str, body: Value) -> Value {
    json!({ "schema": SCHEMA, "kind": kind, "data": body })
}

pub fn convergents_json(cf: &CFNumber) -> Value {
    let rows: Vec<Value> = cf
        .convergents()
        .iter()
        .map(|c| {
            json!({
                "k": c.k,
                "a": c.a.to_string(),
                "p": c.p.to_string(),
                "q": c.q.to_string(),
                "q_digits": c.q.to_string().trim_start_matches('-').len(),
            })
        })
        .collect();
    json!({
        "rule": cf.rule().to_string(),
        "terminated": cf.is_terminated(),
        "convergents": rows,
    })
}

fn label_json(label: PointLabel) -> Value {
    match label {
        PointLabel::Axis => json!("axis"),
        PointLabel::Convergent(k) => json!(format!("v{k}")),
        PointLabel::Generic => Value::Null,
    }
}

pub fn point_json(p: &LatticePoint) -> Value {
    json!({
        "x": p.x.to_string(),
        "y": p.y.to_string(),
        "z1": interval_json(&p.z1),
        "z2": interval_json(&p.z2),
        "sup": interval_json(&p.sup),
        "pi2": interval_json(&p.pi2),
        "label": label_json(p.label),
    })
}

fn tie_json(t: &TieReport) -> Value {
    json!({
        "a": [t.a.0.to_string(), t.a.1.to_string()],
        "b": [t.b.0.to_string(), t.b.1.to_string()],
        "quantity": t.quantity,
    })
}

pub fn minima_json(seq: &MinimaSequence) -> Value {
    json!({
        "kind": seq.kind.as_str(),
        "bound": rat_json(&seq.bound),
        "complete": seq.complete,
        "provisional_last": seq.provisional_last,
        "points": seq.points.iter().map(point_json).collect::<Vec<_>>(),
        "ties": seq.ties.iter().map(tie_json).collect::<Vec<_>>(),
    })
}

fn trace_json(trace: &[(usize, RatInterval)]) -> Value {
    Value::Array(
        trace
            .iter()
            .map(|(k, v)| json!({ "k": k, "value": interval_json(v) }))
            .collect(),
    )
}

pub fn estimate_json(e: &ExponentEstimate) -> Value {
    json!({
        "exponent": e.exponent.as_str(),
        "infinite": e.infinite,
        "tail_estimate": opt(e.tail_estimate.as_ref(), interval_json),
        "target": opt(e.target.as_ref(), rat_json),
        "provenance": e.provenance.as_str(),
        "window": e.window,
        "index_offset": e.index_offset,
        "trace": trace_json(&e.trace),
        "notes": e.notes,
    })
}

fn row_json(r: &CheckRow) -> Value {
    let values: serde_json::Map<String, Value> = r
        .values
        .iter()
        .map(|(name, v)| (name.to_string(), interval_json(v)))
        .collect();
    json!({ "k": r.k, "holds": r.holds, "values": values })
}

pub fn report_json(r: &VerificationReport) -> Value {
    json!({
        "claim": r.claim,
        "subject": r.subject,
        "verdict": r.verdict.as_str(),
        "first_k": r.first_k,
        "index_offset": r.index_offset,
        "target": opt(r.target.as_ref(), rat_json),
        "estimate": opt(r.estimate.as_ref(), estimate_json),
        "rows": r.rows.iter().map(row_json).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

pub fn profile_json(profile: &[(Rat, Option<RatInterval>)]) -> Value {
    Value::Array(
        profile
            .iter()
            .map(|(t, f)| json!({ "t": rat_json(t), "f": opt(f.as_ref(), interval_json) }))
            .collect(),
    )
}
