use std::fs::File;
use std::io::{self, Write};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use crate::{Format, OutputArgs};

/// One `--n` item: a single size or an inclusive range `a..b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<u32>);

pub fn parse_n_list(s: &str) -> Result<NList, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("{t:?} is not a nonnegative integer"))
    };
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(NList((a..=b).collect()))
        }
        None => Ok(NList(vec![num(s)?])),
    }
}

pub fn flatten(items: &[NList]) -> Vec<u32> {
    items.iter().flat_map(|l| l.0.iter().copied()).collect()
}

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn sink(out: &OutputArgs) -> Result<Box<dyn Write>> {
    Ok(match &out.output {
        Some(path) => Box::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    })
}

/// Emits flat records as a JSON array or as CSV with a header row.
pub fn emit_records<T: Serialize>(out: &OutputArgs, rows: &[T]) -> Result<()> {
    let mut w = sink(out)?;
    match out.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            for r in rows {
                csv.serialize(r)?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}

/// Emits a JSON document, or CSV built from an explicit header and rows.
pub fn emit_table<J: Serialize>(
    out: &OutputArgs,
    json: &J,
    header: &[String],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut w = sink(out)?;
    match out.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, json)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(header)?;
            for r in rows {
                if r.len() != header.len() {
                    bail!(
                        "internal: row width {} != header width {}",
                        r.len(),
                        header.len()
                    );
                }
                csv.write_record(r)?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}
