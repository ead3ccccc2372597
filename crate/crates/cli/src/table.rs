//! Flat CSV tables, one per artifact kind.

use diophant_core::cf::CFNumber;
use diophant_core::exact::{to_decimal, RoundDir};
use diophant_core::exponents::{ExponentEstimate, VerificationReport};
use diophant_core::json::DECIMAL_DIGITS;
use diophant_core::lattice::{MinimaSequence, PointLabel};
use diophant_core::{Rat, RatInterval};

pub(crate) struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(mut self, row: Vec<String>) -> Self {
        self.rows.push(row);
        self
    }

    pub fn render(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
    }
}

fn lo(iv: &RatInterval) -> String {
    to_decimal(iv.lo(), DECIMAL_DIGITS, RoundDir::Down)
}

fn hi(iv: &RatInterval) -> String {
    to_decimal(iv.hi(), DECIMAL_DIGITS, RoundDir::Up)
}

fn dec(x: &Rat) -> String {
    to_decimal(x, DECIMAL_DIGITS, RoundDir::Down)
}

pub(crate) fn convergents(cf: &CFNumber, depth: usize) -> Table {
    cf.convergents()
        .iter()
        .take(depth + 1)
        .fold(Table::new(&["k", "a", "p", "q"]), |t, c| {
            t.row(vec![
                c.k.to_string(),
                c.a.to_string(),
                c.p.to_string(),
                c.q.to_string(),
            ])
        })
}

pub(crate) fn estimates_header() -> Table {
    Table::new(&["exponent", "k", "lo", "hi", "target"])
}

/// One row per trace entry, then a `tail` row; an infinite exponent is a
/// single row with `inf` bounds.
pub(crate) fn estimate_rows(mut t: Table, e: &ExponentEstimate) -> Table {
    let name = e.exponent.as_str().to_string();
    let target = e.target.as_ref().map(dec).unwrap_or_default();
    if e.infinite {
        return t.row(vec![
            name,
            "tail".into(),
            "inf".into(),
            "inf".into(),
            target,
        ]);
    }
    for (k, v) in &e.trace {
        t = t.row(vec![
            name.clone(),
            k.to_string(),
            lo(v),
            hi(v),
            target.clone(),
        ]);
    }
    if let Some(v) = &e.tail_estimate {
        t = t.row(vec![name, "tail".into(), lo(v), hi(v), target]);
    }
    t
}

pub(crate) fn minima_header() -> Table {
    Table::new(&[
        "source", "index", "x", "y", "label", "sup_lo", "sup_hi", "pi2_lo", "pi2_hi",
    ])
}

pub(crate) fn minima(mut t: Table, source: &str, seq: &MinimaSequence) -> Table {
    for (i, p) in seq.points.iter().enumerate() {
        let label = match p.label {
            PointLabel::Axis => "axis".to_string(),
            PointLabel::Convergent(k) => format!("v{k}"),
            PointLabel::Generic => String::new(),
        };
        t = t.row(vec![
            source.to_string(),
            (i + 1).to_string(),
            p.x.to_string(),
            p.y.to_string(),
            label,
            lo(&p.sup),
            hi(&p.sup),
            lo(&p.pi2),
            hi(&p.pi2),
        ]);
    }
    t
}

/// Long format: one row per reported value.
pub(crate) fn reports(reports: &[VerificationReport]) -> Table {
    let mut t = Table::new(&["claim", "subject", "k", "holds", "value", "lo", "hi"]);
    for r in reports {
        for row in &r.rows {
            let holds = match row.holds {
                Some(true) => "true",
                Some(false) => "false",
                None => "undecided",
            };
            let head = vec![
                r.claim.to_string(),
                r.subject.clone(),
                row.k.to_string(),
                holds.to_string(),
            ];
            if row.values.is_empty() {
                let mut cells = head.clone();
                cells.extend([String::new(), String::new(), String::new()]);
                t = t.row(cells);
            }
            for (name, v) in &row.values {
                let mut cells = head.clone();
                cells.extend([name.to_string(), lo(v), hi(v)]);
                t = t.row(cells);
            }
        }
    }
    t
}

pub(crate) fn profile(f: &[(Rat, Option<RatInterval>)]) -> Table {
    f.iter()
        .fold(Table::new(&["t", "f_lo", "f_hi"]), |t, (x, v)| {
            let (l, h) = v
                .as_ref()
                .map_or((String::new(), String::new()), |v| (lo(v), hi(v)));
            t.row(vec![dec(x), l, h])
        })
}
