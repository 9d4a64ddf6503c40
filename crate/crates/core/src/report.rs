//! Versioned JSON and CSV output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// Version of every JSON document written by this crate.
pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    kind: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with the schema version and a document kind on top.
pub fn to_json<T: Serialize>(kind: &str, body: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(&Envelope {
        schema: SCHEMA,
        kind,
        body,
    })?;
    text.push('\n');
    Ok(text)
}

/// CSV with a header row derived from the field names.
pub fn to_csv<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// One row of a spectrum table.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRow {
    pub m: u32,
    pub p: u32,
    pub q: u32,
    pub p_exact: f64,
    pub p_contour: f64,
    pub pprime: f64,
}

/// One volume sample.
#[derive(Clone, Debug, Serialize)]
pub struct VolumeSample {
    pub eps: f64,
    pub volume: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_carries_schema() {
        #[derive(Serialize)]
        struct Body {
            x: f64,
        }
        let v: serde_json::Value = serde_json::from_str(&to_json("demo", &Body { x: 1.5 }).unwrap()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["kind"], "demo");
        assert_eq!(v["x"], 1.5);
    }

    #[test]
    fn csv_header() {
        let text = to_csv(&[VolumeSample { eps: 0.1, volume: 2.0 }]).unwrap();
        assert_eq!(text, "eps,volume\n0.1,2.0\n");
    }
}
