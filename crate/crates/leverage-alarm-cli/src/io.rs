//! CSV ingestion with per-line diagnostics and deterministic JSON/CSV
//! emission (floats always carry 17 significant digits so outputs are
//! byte-stable regression fixtures).

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use chrono::NaiveDate;
use leverage_alarm::calibration::DEFAULT_TAX_RATE;
use leverage_alarm::{FirmModel, WaccInputs};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::report::ModelFile;

/// Failures split by exit code: bad input (2) versus numerical trouble (3).
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        CliError::Numeric(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<leverage_alarm::Error> for CliError {
    fn from(e: leverage_alarm::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

/// Column-level validation applied while parsing a dated CSV.
#[derive(Clone, Copy)]
pub enum ValuePolicy {
    /// Finite and strictly positive (prices, debt levels).
    Positive,
    /// Finite only (returns may be negative).
    Finite,
}

/// Read a `date,<value_col>` CSV: header row mandatory, ISO-8601 dates,
/// strictly increasing, at least one data row. Errors name the file, the
/// line, and the offending column.
pub fn read_dated_csv(
    path: &Path,
    value_col: &str,
    policy: ValuePolicy,
) -> Result<Vec<(NaiveDate, f64)>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
        .clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::input(format!("{}: missing column `{name}`", path.display()))
        })
    };
    let di = col("date")?;
    let vi = col(value_col)?;

    let mut out: Vec<(NaiveDate, f64)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(0, |p| p.line());
        let at = |msg: String| CliError::input(format!("{}:{line}: {msg}", path.display()));
        let date_s = rec
            .get(di)
            .ok_or_else(|| at("row is missing the `date` field".into()))?;
        let date = NaiveDate::parse_from_str(date_s, "%Y-%m-%d")
            .map_err(|e| at(format!("bad date `{date_s}`: {e}")))?;
        let val_s = rec
            .get(vi)
            .ok_or_else(|| at(format!("row is missing the `{value_col}` field")))?;
        let val: f64 = val_s
            .parse()
            .map_err(|_| at(format!("bad number `{val_s}` in column `{value_col}`")))?;
        match policy {
            ValuePolicy::Positive if !(val.is_finite() && val > 0.0) => {
                return Err(at(format!("column `{value_col}` must be positive, got {val_s}")));
            }
            ValuePolicy::Finite if !val.is_finite() => {
                return Err(at(format!("column `{value_col}` must be finite, got {val_s}")));
            }
            _ => {}
        }
        if let Some(&(prev, _)) = out.last() {
            if date <= prev {
                return Err(at(format!(
                    "dates must be strictly increasing; {date} follows {prev}"
                )));
            }
        }
        out.push((date, val));
    }
    if out.is_empty() {
        return Err(CliError::input(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    Ok(out)
}

/// Read WACC inputs from a one-row CSV. Required columns: `equity_value`,
/// `debt_value`, `prior_debt_value`, `interest_paid`, `index_annual_return`,
/// `risk_free`, `beta`; `tax_rate` is optional and defaults to 0.35.
pub fn read_wacc_csv(path: &Path) -> Result<WaccInputs, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
        .clone();
    let mut rows = rdr.records();
    let rec = rows
        .next()
        .ok_or_else(|| CliError::input(format!("{}: no data rows", path.display())))?
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    if rows.next().is_some() {
        return Err(CliError::input(format!(
            "{}: expected exactly one data row",
            path.display()
        )));
    }
    let line = rec.position().map_or(0, |p| p.line());
    let field = |name: &str| -> Result<f64, CliError> {
        let idx = headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::input(format!("{}: missing column `{name}`", path.display()))
        })?;
        let s = rec.get(idx).unwrap_or("");
        s.parse().map_err(|_| {
            CliError::input(format!(
                "{}:{line}: bad number `{s}` in column `{name}`",
                path.display()
            ))
        })
    };
    let tax_rate = if headers.iter().any(|h| h == "tax_rate") {
        field("tax_rate")?
    } else {
        DEFAULT_TAX_RATE
    };
    Ok(WaccInputs::new(
        field("equity_value")?,
        field("debt_value")?,
        field("prior_debt_value")?,
        field("interest_paid")?,
        field("index_annual_return")?,
        field("risk_free")?,
        field("beta")?,
        tax_rate,
    )?)
}

/// Parse a model JSON file and derive the working model from it.
pub fn load_model(path: &Path) -> Result<(ModelFile, FirmModel), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let model = file.to_model()?;
    Ok((file, model))
}

/// Pretty JSON with every float rendered as `{:.16e}` (17 significant
/// digits); everything else delegates to the stock pretty-printer.
struct Digits17<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serialize to pretty 17-digit JSON, newline-terminated, to `out` or stdout.
pub fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut buf = Vec::new();
    let fmt = Digits17 {
        inner: PrettyFormatter::new(),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::numeric(format!("JSON encoding failed: {e}")))?;
    buf.push(b'\n');
    write_bytes(&buf, out)
}

/// Write a header plus rows of 17-digit floats as CSV to `out` or stdout.
pub fn write_float_csv(
    header: &[&str],
    rows: &[Vec<f64>],
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header)
        .map_err(|e| CliError::numeric(format!("CSV encoding failed: {e}")))?;
    for row in rows {
        wtr.write_record(row.iter().map(|v| format!("{v:.16e}")))
            .map_err(|e| CliError::numeric(format!("CSV encoding failed: {e}")))?;
    }
    let buf = wtr
        .into_inner()
        .map_err(|e| CliError::numeric(format!("CSV encoding failed: {e}")))?;
    write_bytes(&buf, out)
}

fn write_bytes(buf: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, buf).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
        }
        None => io::stdout()
            .write_all(buf)
            .map_err(|e| CliError::input(format!("stdout: {e}"))),
    }
}
