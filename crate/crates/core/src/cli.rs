//! The `derive` command: parse an analysis, derive its readings, report a diagnosis.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::diagnostics::{diagnose, DiagnoseError, Diagnosis, Status};
use crate::fstructure::FStructure;
use crate::glue_core::{GlueError, Lexicon};
use crate::prover::{derive_with, DeriveOptions, Goal, Reading};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub fstructure: PathBuf,
    pub lexicon: PathBuf,
    /// `label` or `label:type`; defaults to the root's semantic structure at type t.
    pub goal: Option<String>,
    pub trace: bool,
    pub all_traces: bool,
    pub format: Format,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCOMPLETE: i32 = 2;
pub const EXIT_INCOHERENT: i32 = 3;
pub const EXIT_BOTH: i32 = 4;
pub const EXIT_UNINSTANTIABLE: i32 = 5;

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Ok => EXIT_OK,
        Status::Incomplete => EXIT_INCOMPLETE,
        Status::Incoherent => EXIT_INCOHERENT,
        Status::IncompleteIncoherent => EXIT_BOTH,
        Status::Uninstantiable => EXIT_UNINSTANTIABLE,
    }
}

#[derive(Serialize)]
struct JsonReading {
    meaning: String,
    #[serde(rename = "type")]
    ty: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    traces: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    readings: Vec<JsonReading>,
    diagnosis: &'a Diagnosis,
}

struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn glue_failure(e: &GlueError, config: &RunConfig, lexicon: &Lexicon) -> String {
    match e {
        GlueError::Uninstantiable { word, .. } => {
            let line = lexicon.get(word).map_or(0, |entry| entry.line);
            format!("{}:{line}: {e}", config.lexicon.display())
        }
        GlueError::MissingEntry { .. } => format!(
            "{}: {e} in {}",
            config.fstructure.display(),
            config.lexicon.display()
        ),
    }
}

/// Runs one analysis, writing results to `out` and diagnostics to `err`. Returns the exit
/// status.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let fs_text = read(&config.fstructure)?;
    let lex_text = read(&config.lexicon)?;
    let fs = FStructure::parse(&fs_text)
        .map_err(|e| input_error(format!("{}:{e}", config.fstructure.display())))?;
    let lexicon = Lexicon::parse(&lex_text)
        .map_err(|e| input_error(format!("{}:{e}", config.lexicon.display())))?;
    let goal = match &config.goal {
        Some(g) => Goal::parse(g).map_err(|e| input_error(format!("--goal: {}", e.message)))?,
        None => Goal::root(&fs),
    };
    let mut diagnosis = match diagnose(&fs, &lexicon, &goal) {
        Ok(d) => d,
        Err(DiagnoseError::Glue(e)) => {
            return Err(Failure {
                code: EXIT_UNINSTANTIABLE,
                message: glue_failure(&e, config, &lexicon),
            })
        }
        Err(DiagnoseError::Prove(e)) => return Err(input_error(e.to_string())),
    };
    if diagnosis.status == Status::Uninstantiable {
        if let Err(e) = crate::glue_core::premises(&fs, &lexicon) {
            diagnosis.detail = Some(glue_failure(&e, config, &lexicon));
        }
    }
    let readings = if config.all_traces && diagnosis.status == Status::Ok {
        let opts = DeriveOptions {
            all_traces: true,
            ..Default::default()
        };
        let premises =
            crate::glue_core::premises(&fs, &lexicon).map_err(|e| input_error(e.to_string()))?;
        derive_with(&premises, &goal, &opts).map_err(|e| input_error(e.to_string()))?
    } else {
        diagnosis.readings.clone()
    };
    let written = match config.format {
        Format::Text => write_text(config, &readings, &diagnosis, out, err),
        Format::Json => write_json(config, &readings, &diagnosis, out),
    };
    written.map_err(|e| input_error(format!("writing output: {e}")))?;
    Ok(exit_code(diagnosis.status))
}

fn traces_of(config: &RunConfig, r: &Reading) -> Vec<Vec<String>> {
    if config.all_traces {
        r.traces.iter().map(|t| t.lines()).collect()
    } else if config.trace {
        vec![r.trace.lines()]
    } else {
        Vec::new()
    }
}

fn write_text(
    config: &RunConfig,
    readings: &[Reading],
    diagnosis: &Diagnosis,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<()> {
    for r in readings {
        writeln!(out, "{}", r.meaning)?;
        let traces = traces_of(config, r);
        let numbered = traces.len() > 1;
        for (k, lines) in traces.iter().enumerate() {
            if numbered {
                writeln!(out, "  derivation {}:", k + 1)?;
            }
            for l in lines {
                writeln!(out, "    {l}")?;
            }
        }
    }
    if diagnosis.status != Status::Ok {
        for l in diagnosis.lines() {
            writeln!(err, "{l}")?;
        }
    }
    Ok(())
}

fn write_json(
    config: &RunConfig,
    readings: &[Reading],
    diagnosis: &Diagnosis,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let readings = readings
        .iter()
        .map(|r| JsonReading {
            meaning: r.meaning.to_string(),
            ty: r.ty.to_string(),
            trace: (config.trace || config.all_traces).then(|| r.trace.lines()),
            traces: config.all_traces.then(|| traces_of(config, r)),
        })
        .collect();
    let doc = JsonOutput {
        readings,
        diagnosis,
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}
