//! Machine-readable records.
//!
//! Every integer crosses this boundary as a decimal string.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use chebprime_core::primality::{Certificate, Verdict};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<i8>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<BTreeMap<String, Value>>,
    pub elapsed_ms: u64,
}

impl OutputRecord {
    pub fn new(command: impl Into<String>, inputs: BTreeMap<String, String>) -> Self {
        OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            inputs,
            epsilon: None,
            delta: None,
            verdict: String::new(),
            profile: None,
            certificate: None,
            elapsed_ms: 0,
        }
    }

    pub fn error(command: impl Into<String>, inputs: BTreeMap<String, String>, msg: &str) -> Self {
        let mut r = Self::new(command, inputs);
        r.verdict = "error".into();
        r.cert_entry("message", Value::String(msg.into()));
        r
    }

    pub fn cert_entry(&mut self, key: &str, value: Value) {
        self.certificate
            .get_or_insert_with(BTreeMap::new)
            .insert(key.into(), value);
    }

    /// Copies symbols, profile and certificate fields from a verdict.
    pub fn absorb(&mut self, v: &Verdict, q: &BigUint) {
        self.cert_entry("reason", Value::String(v.reason.as_str().into()));
        let c: &Certificate = &v.certificate;
        if let Some(s) = c.symbols {
            self.epsilon = Some(s.epsilon);
            self.delta = Some(s.delta);
        }
        if let Some(p) = &c.profile {
            self.profile = Some(p.signed_entries(q).iter().map(|x| x.to_string()).collect());
        }
        if let Some(b) = &c.base {
            self.cert_entry("base", dec(b));
        }
        if let Some(w) = &c.witness {
            self.cert_entry("witness", dec(w));
        }
        if let Some(o) = &c.order {
            self.cert_entry("order", dec(o));
        }
        if let Some(r) = &c.residue {
            self.cert_entry("residue", dec(r));
        }
    }
}

pub fn dec(x: &impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn inputs<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// One row of a scan in JSON-lines form.
#[derive(Debug, Clone, Serialize)]
pub struct RowRecord<'a> {
    pub schema_version: &'static str,
    pub command: &'a str,
    pub row: BTreeMap<&'a str, String>,
}

/// Scan output in one of the two machine formats.
pub struct Table<'a, W: Write> {
    command: &'a str,
    header: &'a [&'a str],
    csv: Option<csv::Writer<W>>,
    json: Option<W>,
}

impl<'a, W: Write> Table<'a, W> {
    pub fn new(command: &'a str, header: &'a [&'a str], out: W, as_csv: bool) -> Result<Self> {
        if as_csv {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header)?;
            Ok(Table {
                command,
                header,
                csv: Some(w),
                json: None,
            })
        } else {
            Ok(Table {
                command,
                header,
                csv: None,
                json: Some(out),
            })
        }
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        debug_assert_eq!(fields.len(), self.header.len());
        if let Some(w) = &mut self.csv {
            w.write_record(fields)?;
        }
        if let Some(w) = &mut self.json {
            let rec = RowRecord {
                schema_version: SCHEMA_VERSION,
                command: self.command,
                row: self.header.iter().copied().zip(fields.iter().cloned()).collect(),
            };
            serde_json::to_writer(&mut *w, &rec)?;
            writeln!(w)?;
        }
        Ok(())
    }

    /// Writes the summary to the stream for JSON-lines, to stderr for CSV.
    pub fn finish(mut self, summary: &OutputRecord) -> Result<()> {
        if let Some(mut w) = self.csv.take() {
            w.flush()?;
            eprintln!("{}", serde_json::to_string(summary)?);
        }
        if let Some(w) = &mut self.json {
            serde_json::to_writer(&mut *w, summary)?;
            writeln!(w)?;
            w.flush()?;
        }
        Ok(())
    }
}

pub fn write_record<W: Write + ?Sized>(out: &mut W, r: &OutputRecord) -> Result<()> {
    serde_json::to_writer(&mut *out, r)?;
    writeln!(out)?;
    Ok(())
}

/// `23*43`, `103^2`
pub fn factor_string<T: ToString>(factors: &[(T, u32)]) -> String {
    factors
        .iter()
        .map(|(p, e)| {
            if *e == 1 {
                p.to_string()
            } else {
                format!("{}^{}", p.to_string(), e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}
