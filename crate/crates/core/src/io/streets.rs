//! Street CSV: `street_id,piece_index,length,traffic`.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimator::{StreetPiece, StreetRecord};
use crate::Scalar;

pub const STREET_HEADER: [&str; 4] = ["street_id", "piece_index", "length", "traffic"];

/// Parses street rows from any reader. `path` only labels errors.
///
/// Streets come out in order of first appearance, pieces sorted by index.
pub fn read_streets<T: Scalar, R: Read>(reader: R, path: &Path) -> Result<Vec<StreetRecord<T>>> {
    let err = |line: usize, reason: String| Error::Csv { path: path.to_path_buf(), line, reason };
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut records = rdr.records();

    match records.next() {
        Some(Ok(h)) if h.iter().eq(STREET_HEADER) => {}
        Some(Ok(_)) | None => return Err(err(1, format!("missing header `{}`", STREET_HEADER.join(",")))),
        Some(Err(e)) => return Err(err(1, e.to_string())),
    }

    let mut order: Vec<String> = Vec::new();
    let mut rows: HashMap<String, Vec<(u64, usize, StreetPiece<T>)>> = HashMap::new();
    for rec in records {
        let rec = rec.map_err(|e| err(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 4 {
            return Err(err(line, format!("expected 4 fields, found {}", rec.len())));
        }
        let id = rec[0].to_string();
        if id.is_empty() {
            return Err(err(line, "empty street_id".into()));
        }
        let index: u64 = rec[1].parse().map_err(|_| err(line, format!("bad piece_index `{}`", &rec[1])))?;
        let number = |field: &str, name: &str| -> Result<f64> {
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(line, format!("bad {name} `{field}`")))
        };
        let length = number(&rec[2], "length")?;
        let traffic = number(&rec[3], "traffic")?;
        if length <= 0.0 {
            return Err(err(line, format!("length {length} is not positive")));
        }
        if traffic < 0.0 {
            return Err(err(line, format!("traffic {traffic} is negative")));
        }
        let piece = StreetPiece { length: T::lit(length), traffic: T::lit(traffic) };
        rows.entry(id.clone())
            .or_insert_with(|| {
                order.push(id);
                Vec::new()
            })
            .push((index, line, piece));
    }

    let mut streets = Vec::with_capacity(order.len());
    for id in order {
        let mut pieces = rows.remove(&id).unwrap_or_default();
        pieces.sort_by_key(|&(i, line, _)| (i, line));
        for (k, w) in pieces.windows(2).enumerate() {
            if w[0].0 == w[1].0 {
                return Err(err(w[1].1, format!("duplicate piece ({id}, {})", w[1].0)));
            }
            if w[1].0 != k as u64 + 1 {
                return Err(err(w[1].1, format!("street `{id}` skips piece {}", k + 1)));
            }
        }
        if pieces[0].0 != 0 {
            return Err(err(pieces[0].1, format!("street `{id}` does not start at piece 0")));
        }
        streets.push(StreetRecord::new(id, pieces.into_iter().map(|(_, _, p)| p).collect())?);
    }
    Ok(streets)
}

pub fn import_streets_csv<T: Scalar>(path: impl AsRef<Path>) -> Result<Vec<StreetRecord<T>>> {
    let path = path.as_ref();
    read_streets(std::fs::File::open(path)?, path)
}

/// Lengths and traffic use the shortest representation that parses back exactly.
pub fn write_streets<T: Scalar, W: Write>(streets: &[StreetRecord<T>], mut out: W) -> Result<()> {
    writeln!(out, "{}", STREET_HEADER.join(","))?;
    for s in streets {
        for (i, p) in s.pieces().iter().enumerate() {
            writeln!(out, "{},{},{},{}", s.id(), i, p.length.as_f64(), p.traffic.as_f64())?;
        }
    }
    Ok(())
}

pub fn export_streets_csv<T: Scalar>(streets: &[StreetRecord<T>], path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_streets(streets, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}
