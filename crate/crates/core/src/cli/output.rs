use super::CliError;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "normality-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Everything a subcommand produces: a CSV table and a JSON summary, plus
/// the metadata both carry.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub seed: Option<u64>,
    pub system_sha256: Option<String>,
    pub params: Vec<(String, String)>,
    /// Headline results, repeated in the CSV header.
    pub notes: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: Value,
}

impl Report {
    pub fn new(command: &'static str, header: Vec<&'static str>) -> Self {
        Report {
            command,
            seed: None,
            system_sha256: None,
            params: Vec::new(),
            notes: Vec::new(),
            header,
            rows: Vec::new(),
            summary: Value::Object(Map::new()),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn note(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.notes.push((key.to_string(), value.to_string()));
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope()).expect("plain data");
                s.push('\n');
                Ok(s)
            }
        }
    }

    fn render_csv(&self) -> Result<String, CliError> {
        let mut out = format!("# tool: {TOOL} {VERSION}\n# command: {}\n", self.command);
        if let Some(seed) = self.seed {
            out.push_str(&format!("# seed: {seed}\n"));
        }
        if let Some(h) = &self.system_sha256 {
            out.push_str(&format!("# system_sha256: {h}\n"));
        }
        for (k, v) in self.params.iter().chain(&self.notes) {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(bytes).expect("utf-8 cells"));
        Ok(out)
    }

    pub fn envelope(&self) -> Value {
        let params: Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "seed": self.seed,
            "system_sha256": self.system_sha256,
            "parameters": params,
            "summary": self.summary,
        })
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

/// SHA-256 of the canonical JSON form of a system.
pub fn system_hash(canonical_json: &str) -> String {
    format!("{:x}", Sha256::digest(canonical_json.as_bytes()))
}

/// Shortest round-trip form of a float.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
