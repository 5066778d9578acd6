//! Command line front end: JSON documents in, deterministic JSON reports out.

pub mod commands;
pub mod doc;
pub mod error;
pub mod report;

use std::path::PathBuf;

use clap::Parser;
use serde_json::{json, Map, Value};

use crate::commands::{registry, Context};
use crate::doc::Convention;
use crate::error::CliError;
use crate::report::{Report, Status};

#[derive(Parser, Debug, Clone, Default)]
#[command(name = "ainfty", version, about = "Exact Hochschild calculus on finite A-infinity categories")]
pub struct Cli {
    /// One of: validate, hochschild, exp, log, bch, compose, isotopy-check,
    /// homotopy-check, gauge-check, quillen-check, center, glue, restrict, twist
    pub command: String,
    /// Input documents
    pub inputs: Vec<PathBuf>,
    /// Top weight kept in series computations
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Hochschild degree
    #[arg(long, allow_hyphen_values = true)]
    pub degree: Option<i64>,
    /// Restrict to weight at least two
    #[arg(long)]
    pub plus: bool,
    /// Convention of the structure table, overriding the document
    #[arg(long, value_enum)]
    pub convention: Option<Convention>,
    /// Powers of t kept in path reports
    #[arg(long)]
    pub t_cutoff: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Named cochain
    #[arg(long, visible_alias = "cocycle")]
    pub cochain: Option<String>,
    /// First operand
    #[arg(long)]
    pub left: Option<String>,
    /// Second operand
    #[arg(long)]
    pub right: Option<String>,
    /// Maurer-Cartan element to twist by, or the gauge image
    #[arg(long)]
    pub zeta: Option<String>,
    /// Maurer-Cartan element acted on
    #[arg(long)]
    pub xi: Option<String>,
    /// Gauge parameter of degree -1
    #[arg(long)]
    pub parameter: Option<String>,
    /// Invertible element conjugating one Maurer-Cartan element into another
    #[arg(long)]
    pub conjugator: Option<String>,
    /// Named polynomial path
    #[arg(long)]
    pub path: Option<String>,
    /// Named functor
    #[arg(long)]
    pub functor: Option<String>,
    /// Comma separated objects
    #[arg(long, value_delimiter = ',')]
    pub objects: Vec<String>,
    /// Comma separated cochains fed to the twisted operations
    #[arg(long, value_delimiter = ',')]
    pub apply: Vec<String>,
    /// Exponentiate the operands first
    #[arg(long)]
    pub integrate: bool,
}

impl Cli {
    /// The flags that were set, in a fixed order.
    fn echo(&self) -> Map<String, Value> {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        if let Some(x) = self.cutoff {
            put("cutoff", json!(x));
        }
        if let Some(x) = self.degree {
            put("degree", json!(x));
        }
        if self.plus {
            put("plus", json!(true));
        }
        if let Some(x) = self.convention {
            put("convention", json!(x.name()));
        }
        if let Some(x) = self.t_cutoff {
            put("t_cutoff", json!(x));
        }
        for (k, v) in [
            ("cochain", &self.cochain),
            ("left", &self.left),
            ("right", &self.right),
            ("zeta", &self.zeta),
            ("xi", &self.xi),
            ("parameter", &self.parameter),
            ("conjugator", &self.conjugator),
            ("path", &self.path),
            ("functor", &self.functor),
        ] {
            if let Some(x) = v {
                put(k, json!(x));
            }
        }
        if !self.objects.is_empty() {
            put("objects", json!(self.objects));
        }
        if !self.apply.is_empty() {
            put("apply", json!(self.apply));
        }
        if self.integrate {
            put("integrate", json!(true));
        }
        m
    }
}

/// Runs one command and returns the report with its exit status.
pub fn run(cli: &Cli) -> (Value, i32) {
    let mut report = Report::default();
    let inputs: Vec<String> = cli.inputs.iter().map(|p| p.display().to_string()).collect();
    let outcome = execute(cli, &inputs, &mut report);
    let (status, code) = match outcome {
        Ok(Status::Ok) => ("ok", 0),
        Ok(Status::Failed) => ("failed", 1),
        Ok(Status::Window) => ("window", 2),
        Err(e) => {
            report.diagnostics.push(e.to_string());
            (if e.exit_code() == 2 { "window" } else { "error" }, e.exit_code())
        }
    };
    let mut doc = Map::new();
    doc.insert("format_version".into(), json!(doc::FORMAT_VERSION));
    doc.insert("command".into(), json!({ "name": cli.command, "inputs": inputs, "flags": cli.echo() }));
    doc.insert("window".into(), report.window_json());
    doc.insert("conventions".into(), report.conventions.take().unwrap_or(Value::Null));
    doc.insert("status".into(), json!(status));
    doc.insert("diagnostics".into(), json!(report.diagnostics));
    doc.insert("result".into(), Value::Object(report.result));
    (Value::Object(doc), code)
}

fn execute(cli: &Cli, inputs: &[String], report: &mut Report) -> Result<Status, CliError> {
    let command = registry().into_iter().find(|c| c.name() == cli.command).ok_or_else(|| {
        let names: Vec<&str> = registry().iter().map(|c| c.name()).collect();
        CliError::Usage(format!("unknown command {:?}; expected one of {}", cli.command, names.join(", ")))
    })?;
    let (lo, hi) = command.inputs();
    if inputs.len() < lo || inputs.len() > hi {
        return Err(CliError::Usage(format!("{} takes {lo} to {hi} input documents", command.name())));
    }
    let loaded = inputs.iter().map(|p| doc::read(p, cli.convention)).collect::<Result<Vec<_>, _>>()?;
    if let Some(first) = loaded.first() {
        report.conventions = Some(report::conventions(first));
    }
    command.run(&Context { flags: cli, inputs: loaded }, report)
}

/// Serializes a report: pretty JSON, LF line endings, trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports are plain JSON");
    s.push('\n');
    s
}
