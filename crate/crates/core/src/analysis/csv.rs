use std::time::Duration;

use thiserror::Error;

use crate::logic::rational::{format_decimal, format_exact, parse_rational};

use super::{BoundEntry, BoundKind, BoundSequence};

pub const CSV_HEADER: &str = "k,value_exact,value_decimal,solve_ms";

const DECIMAL_DIGITS: usize = 20;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("row {row}: {msg}")]
    Row { row: usize, msg: String },
    #[error("expected header `{CSV_HEADER}`")]
    Header,
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

// milliseconds with nanosecond resolution, so that reading back is lossless
fn format_ms(d: Duration) -> String {
    format!("{}.{:06}", d.as_millis(), d.as_nanos() % 1_000_000)
}

fn parse_ms(text: &str) -> Option<Duration> {
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    if frac.len() > 6 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let ms: u64 = whole.parse().ok()?;
    let nanos: u64 = if frac.is_empty() { 0 } else { format!("{frac:0<6}").parse().ok()? };
    Some(Duration::from_millis(ms) + Duration::from_nanos(nanos))
}

pub fn write_csv(seq: &BoundSequence) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
    for e in &seq.entries {
        w.write_record([
            e.k.to_string(),
            format_exact(&e.value),
            format_decimal(&e.value, DECIMAL_DIGITS),
            format_ms(e.solve_time),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Reads a sequence written by [`write_csv`]; the decimal column must agree
/// with the exact one.
pub fn read_csv(text: &str, kind: BoundKind) -> Result<BoundSequence, CsvError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    if r.headers()?.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(CsvError::Header);
    }
    let mut seq = BoundSequence::new(kind);
    for (i, rec) in r.records().enumerate() {
        let row = i + 1;
        let rec = rec?;
        let bad = |msg: &str| CsvError::Row { row, msg: msg.to_string() };
        let k = rec[0].parse().map_err(|_| bad("bad k"))?;
        let value = parse_rational(&rec[1]).map_err(|e| bad(&e.to_string()))?;
        if format_decimal(&value, DECIMAL_DIGITS) != rec[2] {
            return Err(bad("decimal column disagrees with the exact value"));
        }
        let solve_time = parse_ms(&rec[3]).ok_or_else(|| bad("bad solve_ms"))?;
        seq.entries.push(BoundEntry { k, value, solve_time });
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::rational::ratio;

    #[test]
    fn round_trip() {
        let seq = BoundSequence {
            kind: BoundKind::UpperReach,
            entries: vec![
                BoundEntry { k: 0, value: ratio(1, 1), solve_time: Duration::from_nanos(1_234_567) },
                BoundEntry { k: 1, value: ratio(9, 10), solve_time: Duration::from_millis(3) },
                BoundEntry { k: 2, value: ratio(2, 3), solve_time: Duration::from_nanos(7) },
            ],
        };
        let text = write_csv(&seq);
        assert!(text.starts_with("k,value_exact,value_decimal,solve_ms\n0,1,1,1.234567\n1,9/10,0.9,3.000000\n"));
        assert_eq!(read_csv(&text, BoundKind::UpperReach).unwrap(), seq);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(read_csv("k,value\n", BoundKind::LowerReach), Err(CsvError::Header)));
        let text = format!("{CSV_HEADER}\n0,1/2,0.6,1.0\n");
        assert!(matches!(read_csv(&text, BoundKind::LowerReach), Err(CsvError::Row { row: 1, .. })));
        let text = format!("{CSV_HEADER}\n0,1/2,0.5,x\n");
        assert!(read_csv(&text, BoundKind::LowerReach).is_err());
    }
}
