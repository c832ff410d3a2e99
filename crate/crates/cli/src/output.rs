use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use photon_scatter_core::Error;
use serde_json::{json, Map, Value};

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file or parameter values (exit 2).
    Config(String),
    /// A computation did not converge or a check failed (exit 3).
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    /// Single-line JSON record for stderr.
    pub fn record(&self) -> String {
        let (kind, message) = match self {
            CliError::Config(m) => ("config", m),
            CliError::Numerical(m) => ("numerical", m),
        };
        let one_line = message.split_whitespace().collect::<Vec<_>>().join(" ");
        json!({"error": kind, "exit_code": self.exit_code(), "message": one_line}).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.record())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::RootSearch(_) | Error::Quadrature { .. } | Error::Boundary { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Mantissa digits after the decimal point in CSV (scientific notation).
    #[arg(long, default_value_t = 12)]
    pub precision: usize,
}

impl OutputArgs {
    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.output {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    pub fn write_table(&self, table: &Table) -> CliResult<()> {
        let text = match self.format.unwrap_or(Format::Csv) {
            Format::Csv => table.to_csv(self.precision),
            Format::Json => format!("{}\n", table.to_json()),
        };
        self.emit(&text)
    }

    /// Objects have no CSV form; CSV requests are refused.
    pub fn write_object(&self, value: &Value) -> CliResult<()> {
        if self.format == Some(Format::Csv) {
            return Err(CliError::Config("this command only produces JSON".into()));
        }
        self.emit(&format!(
            "{}\n",
            serde_json::to_string_pretty(value).expect("serializable")
        ))
    }
}

/// Column-oriented numeric table: CSV header carries units, JSON keys are
/// snake_case.
pub struct Table {
    columns: Vec<(&'static str, &'static str)>,
    rows: Vec<Vec<f64>>,
    /// Columns printed as integers.
    integer: Vec<bool>,
}

impl Table {
    /// `columns` pairs the CSV header (with unit) and the JSON key.
    pub fn new(columns: &[(&'static str, &'static str)]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            integer: vec![false; columns.len()],
        }
    }

    pub fn integer_column(mut self, index: usize) -> Self {
        self.integer[index] = true;
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = Vec<f64>>) {
        for r in rows {
            self.push(r);
        }
    }

    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = self
            .columns
            .iter()
            .map(|c| c.0)
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .zip(&self.integer)
                .map(|(v, &int)| {
                    if int {
                        format!("{}", *v as i64)
                    } else {
                        // Adding 0.0 turns -0.0 into 0.0.
                        format!("{:.precision$e}", v + 0.0)
                    }
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (j, (_, key)) in self.columns.iter().enumerate() {
            m.insert(
                key.to_string(),
                Value::from(self.rows.iter().map(|r| r[j]).collect::<Vec<_>>()),
            );
        }
        Value::Object(m)
    }
}
