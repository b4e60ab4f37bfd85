//! Sweep records as CSV.

use std::io::{self, Write};

use nmqubits::sweep::SweepRecord;

pub const HEADER: [&str; 8] = [
    "time",
    "time_axis",
    "Q",
    "R",
    "theta",
    "mode",
    "concurrence",
    "regime",
];

/// Rounds to 9 significant digits, then prints the shortest decimal that
/// reads back as the rounded value.
pub fn format_sig9(x: f64) -> String {
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

struct Counting<W> {
    inner: W,
    bytes: usize,
}

impl<W: Write> Write for Counting<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.bytes += n;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

fn into_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

/// Writes the header and one row per record; returns the bytes written.
pub fn emit_csv<W: Write>(records: &[SweepRecord], sink: W) -> io::Result<usize> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Counting {
            inner: sink,
            bytes: 0,
        });
    w.write_record(HEADER).map_err(into_io)?;
    for r in records {
        w.write_record([
            format_sig9(r.time),
            r.axis.to_string(),
            format_sig9(r.q),
            format_sig9(r.r),
            format_sig9(r.theta),
            r.mode.to_string(),
            format_sig9(r.concurrence),
            r.regime.to_string(),
        ])
        .map_err(into_io)?;
    }
    w.flush()?;
    let counting = w.into_inner().map_err(|e| e.into_error())?;
    Ok(counting.bytes)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub time: f64,
    pub time_axis: String,
    pub q: f64,
    pub r: f64,
    pub theta: f64,
    pub mode: String,
    pub concurrence: f64,
    pub regime: String,
}

/// Reads back what [`emit_csv`] wrote; rejects a foreign header.
pub fn parse_csv(text: &str) -> io::Result<Vec<CsvRow>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(into_io)?;
    if header.iter().ne(HEADER) {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("unexpected header {header:?}"),
        ));
    }
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("'{s}': {e}")))
    };
    rd.records()
        .map(|rec| {
            let rec = rec.map_err(into_io)?;
            Ok(CsvRow {
                time: num(&rec[0])?,
                time_axis: rec[1].to_string(),
                q: num(&rec[2])?,
                r: num(&rec[3])?,
                theta: num(&rec[4])?,
                mode: rec[5].to_string(),
                concurrence: num(&rec[6])?,
                regime: rec[7].to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(0.0), "0.0");
        assert_eq!(format_sig9(1.0), "1.0");
        assert_eq!(format_sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(format_sig9(2.0 / 3.0), "0.666666667");
        assert_eq!(format_sig9(1.0e-20 / 3.0), "3.33333333e-21");
        assert_eq!(format_sig9(123456789012.0), "123456789000.0");
    }

    #[test]
    fn empty_collection_is_header_only() {
        let mut buf = Vec::new();
        let n = emit_csv(&[], &mut buf).unwrap();
        assert_eq!(buf, b"time,time_axis,Q,R,theta,mode,concurrence,regime\n");
        assert_eq!(n, buf.len());
        assert!(parse_csv(std::str::from_utf8(&buf).unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn foreign_header_rejected() {
        assert!(parse_csv("a,b\n1,2\n").is_err());
    }
}
