use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Grid, Signal};
use crate::error::{Error, Result};

/// Relative tolerance (in units of the step) on the spacing of a time column.
const SPACING_TOLERANCE: f64 = 1e-9;

/// `%.17g`-style formatting: 17 significant digits, trailing zeros dropped,
/// scientific notation outside `1e-5 ≤ |x| < 1e17`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Read a `t,u` CSV file into a signal. Lines starting with `#` are ignored.
pub fn read_csv(path: impl AsRef<Path>) -> Result<Signal> {
    read_csv_from(File::open(path)?)
}

pub fn read_csv_from(reader: impl Read) -> Result<Signal> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| parse_error(&e))?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "u" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header `t,u`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| parse_error(&e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| -> Result<f64> {
            let raw = record.get(i).unwrap_or_default();
            let v: f64 = raw.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("`{raw}` is not a number"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse {
                    line,
                    msg: format!("`{raw}` is not finite"),
                })
            }
        };
        times.push(field(0)?);
        values.push(field(1)?);
    }
    if times.is_empty() {
        return Err(Error::EmptyFile);
    }
    let n = times.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let t0 = times[0];
    let dt = (times[n - 1] - t0) / (n - 1) as f64;
    if !(dt > 0.0) {
        return Err(Error::NonUniformGrid { row: n - 1 });
    }
    for (i, &t) in times.iter().enumerate() {
        if (t - (t0 + i as f64 * dt)).abs() > SPACING_TOLERANCE * dt {
            return Err(Error::NonUniformGrid { row: i });
        }
    }
    Signal::new(Grid::new(t0, dt, n)?, values)
}

fn parse_error(e: &csv::Error) -> Error {
    Error::Parse {
        line: e.position().map_or(0, |p| p.line() as usize),
        msg: e.to_string(),
    }
}

pub fn write_csv_to(writer: impl Write, s: &Signal) -> Result<()> {
    let grid = *s.grid();
    write_rows(
        writer,
        &["t", "u"],
        s.values().iter().enumerate().map(|(i, &v)| vec![grid.t(i), v]),
    )
}

/// Write `s` as a `t,u` CSV file. The file is replaced atomically.
pub fn write_csv(path: impl AsRef<Path>, s: &Signal) -> Result<()> {
    atomic_write(path.as_ref(), |w| write_csv_to(w, s))
}

/// Write numeric rows under `header`, replacing `path` atomically.
pub fn write_table<I>(path: impl AsRef<Path>, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    atomic_write(path.as_ref(), |w| write_rows(w, header, rows))
}

pub(crate) fn write_rows<W, I>(writer: W, header: &[&str], rows: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut wtr = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::Io(e.into());
    wtr.write_record(header).map_err(csv_err)?;
    for row in rows {
        wtr.write_record(row.iter().map(|&v| format_g17(v)))
            .map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

pub(crate) fn atomic_write(
    path: &Path,
    fill: impl FnOnce(&mut std::io::BufWriter<&mut File>) -> Result<()>,
) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut buf)?;
        buf.flush()?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
