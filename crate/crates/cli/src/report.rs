//! The report envelope shared by every subcommand, in text or JSON.

use serde::Serialize;
use serde_json::{json, Value};

use crate::Format;

/// Version of `schema/report.schema.json` the JSON output conforms to.
pub const SCHEMA_VERSION: u32 = 1;

pub struct Header<'a> {
    pub command: &'a str,
    pub algebra: &'a str,
    pub dim: usize,
    pub seed: u64,
    pub truncation: usize,
}

pub struct Rendered {
    pub rendered: String,
    pub holds: bool,
    pub witnesses: Vec<String>,
}

pub fn render<T: Serialize>(format: Format, h: &Header, result: &T, text: &[String], witnesses: Vec<String>) -> Rendered {
    let holds = witnesses.is_empty();
    let rendered = match format {
        Format::Json => {
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "version": env!("CARGO_PKG_VERSION"),
                "command": h.command,
                "algebra": h.algebra,
                "dim": h.dim,
                "seed": h.seed,
                "truncation": h.truncation,
                "holds": holds,
                "result": serde_json::to_value(result).expect("reports serialize"),
            });
            let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("{} on {} (dim {}, N = {}, seed {})\n", h.command, h.algebra, h.dim, h.truncation, h.seed);
            for line in text {
                s.push_str(line);
                s.push('\n');
            }
            s.push_str(if holds { "result: holds\n" } else { "result: FAILED\n" });
            s
        }
    };
    Rendered { rendered, holds, witnesses }
}

pub fn list(items: &[impl ToString]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

pub fn value_of<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}
