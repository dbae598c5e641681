use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// `sle-lab/<table>/v<version>`, written first in every output.
pub fn schema_id(table: &str) -> String {
    format!("sle-lab/{table}/v{SCHEMA_VERSION}")
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[derive(Serialize)]
struct JsonTable<'a, R> {
    schema: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix: Option<u64>,
    rows: &'a [R],
}

/// Writes `rows` to the configured destination.
///
/// CSV output opens with a `# schema:` comment and, unless `--no-header` is
/// set, a `# generated-unix:` line; JSON carries the same two fields.
pub fn emit<R: Serialize>(cfg: &RunConfig, table: &str, rows: &[R]) -> Result<(), CliError> {
    let sink: Box<dyn Write> =
        match &cfg.output {
            Some(path) => Box::new(File::create(path).map_err(|e| {
                CliError::Validation(format!("cannot create {}: {e}", path.display()))
            })?),
            None => Box::new(io::stdout().lock()),
        };
    let mut out = BufWriter::new(sink);
    let stamp = (!cfg.no_header).then(timestamp);
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            writeln!(out, "# schema: {}", schema_id(table))?;
            if let Some(t) = stamp {
                writeln!(out, "# generated-unix: {t}")?;
            }
            let mut w = csv::Writer::from_writer(&mut out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let doc = JsonTable {
                schema: schema_id(table),
                generated_unix: stamp,
                rows,
            };
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}
