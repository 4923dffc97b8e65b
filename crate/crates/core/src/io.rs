//! CSV tables: constants sweeps, `A`-profiles and eigenvalue curves.
//!
//! Floats are written with 17 significant digits, so every value read back
//! is bit-identical. Header row first, LF line endings, no timestamp.

use std::io::{Read, Write};

use crate::ball_spectrum::CurvePoint;
use crate::constants::{ConstantRecord, Status};
use crate::error::{invalid, Error, Result};
use crate::jab::ProfileSample;

pub const CONSTANTS_HEADER: &str = "n,R,Lambda1,lambda1,A_min,B_min,J_min,C,C_raw,status";
pub const PROFILE_HEADER: &str = "A,B,sqrtJ,status";
pub const CURVE_HEADER: &str = "R,l,lambda,status";

/// 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn io_err(e: impl std::fmt::Display) -> Error {
    invalid(format!("I/O: {e}"))
}

pub fn write_constants<W: Write>(mut w: W, rows: &[ConstantRecord]) -> Result<()> {
    writeln!(w, "{CONSTANTS_HEADER}").map_err(io_err)?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.n,
            fmt_f64(r.radius),
            fmt_f64(r.lambda1_eigen),
            fmt_f64(r.lambda1),
            fmt_f64(r.a_min),
            fmt_f64(r.b_min),
            fmt_f64(r.j_min),
            fmt_f64(r.c),
            fmt_f64(r.c_raw),
            r.status.as_str()
        )
        .map_err(io_err)?;
    }
    Ok(())
}

/// Profile rows; failed samples carry NaN in `sqrtJ`.
pub fn write_profile<W: Write>(mut w: W, samples: &[ProfileSample]) -> Result<()> {
    writeln!(w, "{PROFILE_HEADER}").map_err(io_err)?;
    for s in samples {
        let (v, status) = match &s.lambda {
            Ok(l) => (*l, "ok"),
            Err(e) => (f64::NAN, e.status()),
        };
        writeln!(w, "{},{},{},{}", fmt_f64(s.a), fmt_f64(s.b), fmt_f64(v), status).map_err(io_err)?;
    }
    Ok(())
}

pub fn write_curve<W: Write>(mut w: W, points: &[CurvePoint]) -> Result<()> {
    writeln!(w, "{CURVE_HEADER}").map_err(io_err)?;
    for p in points {
        let (v, status) = match &p.lambda {
            Ok(l) => (*l, "ok"),
            Err(e) => (f64::NAN, e.status()),
        };
        writeln!(w, "{},{},{},{}", fmt_f64(p.radius), p.l, fmt_f64(v), status).map_err(io_err)?;
    }
    Ok(())
}

fn records<R: Read>(r: R, header: &str) -> Result<Vec<csv::StringRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let got = rdr.headers().map_err(io_err)?.iter().collect::<Vec<_>>().join(",");
    if got != header {
        return Err(invalid(format!("unexpected CSV header '{got}', expected '{header}'")));
    }
    rdr.records().map(|r| r.map_err(io_err)).collect()
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T> {
    let s = rec.get(i).ok_or_else(|| invalid(format!("missing column {i}")))?;
    s.parse::<T>().map_err(|_| invalid(format!("cannot parse '{s}' in column {i}")))
}

fn status(rec: &csv::StringRecord, i: usize) -> Result<Status> {
    let s = rec.get(i).unwrap_or("");
    Status::parse(s).ok_or_else(|| invalid(format!("unknown status '{s}'")))
}

pub fn read_constants<R: Read>(r: R) -> Result<Vec<ConstantRecord>> {
    records(r, CONSTANTS_HEADER)?
        .iter()
        .map(|rec| {
            Ok(ConstantRecord {
                n: field(rec, 0)?,
                radius: field(rec, 1)?,
                lambda1_eigen: field(rec, 2)?,
                lambda1: field(rec, 3)?,
                a_min: field(rec, 4)?,
                b_min: field(rec, 5)?,
                j_min: field(rec, 6)?,
                c: field(rec, 7)?,
                c_raw: field(rec, 8)?,
                status: status(rec, 9)?,
            })
        })
        .collect()
}

/// `(A, B, sqrtJ, status)` rows.
pub fn read_profile<R: Read>(r: R) -> Result<Vec<(f64, f64, f64, Status)>> {
    records(r, PROFILE_HEADER)?
        .iter()
        .map(|rec| Ok((field(rec, 0)?, field(rec, 1)?, field(rec, 2)?, status(rec, 3)?)))
        .collect()
}

/// `(R, l, lambda, status)` rows.
pub fn read_curve<R: Read>(r: R) -> Result<Vec<(f64, u32, f64, Status)>> {
    records(r, CURVE_HEADER)?
        .iter()
        .map(|rec| Ok((field(rec, 0)?, field(rec, 1)?, field(rec, 2)?, status(rec, 3)?)))
        .collect()
}
