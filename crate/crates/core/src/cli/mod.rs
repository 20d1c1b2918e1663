//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 for usage and
//! parse errors.

pub mod parse;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::classification::{
    classify, decompose, enumerate_age_one_with, verify_notes, verify_series, verify_table1,
    verify_table2_against, SliceMethod,
};
use crate::enumeration::{primitives_up_to_weight, verify_lemma_2_1};
use crate::error::Error;
use crate::fixtures::Fixtures;
use crate::par::Exec;
use crate::series::{compare_routes, monomial_to_type, SCALE};
use crate::types::Weight;

pub use parse::parse_type;
pub use render::RenderFormat;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "abvar-types",
    version,
    about = "Eigenvalue types of finite-order automorphisms of abelian varieties"
)]
struct Cli {
    /// Golden-data JSON to use instead of the embedded tables.
    #[arg(long, global = true, value_name = "PATH")]
    fixtures: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Series,
    Knapsack,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Subject {
    Table1,
    Table2,
    Notes,
    Lemmas,
    Series,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List primitive types of weight at most W (W <= 1).
    Primitives {
        #[arg(long, value_name = "W")]
        max_weight: String,
        #[arg(long, value_enum, default_value_t)]
        format: RenderFormat,
    },
    /// List every reduced type of weight 1 with its applicable strategies.
    AgeOne {
        #[arg(long, value_enum, default_value = "series")]
        method: Method,
        #[arg(long, value_enum, default_value_t)]
        format: RenderFormat,
    },
    /// Strategies whose hypotheses hold for a weight-1 type.
    Classify {
        #[arg(allow_hyphen_values = true)]
        r#type: String,
        #[arg(long, value_enum, default_value_t)]
        format: RenderFormat,
    },
    /// Type of g^K.
    Power {
        #[arg(allow_hyphen_values = true)]
        r#type: String,
        k: u64,
        /// Drop zero entries from the result.
        #[arg(long)]
        reduce: bool,
        #[arg(long, value_enum, default_value_t)]
        format: RenderFormat,
    },
    /// Type of g^-1.
    Inverse {
        #[arg(allow_hyphen_values = true)]
        r#type: String,
        #[arg(long, value_enum, default_value_t)]
        format: RenderFormat,
    },
    /// Exact weight (age).
    Weight {
        #[arg(allow_hyphen_values = true)]
        r#type: String,
        #[arg(long, value_enum, default_value_t)]
        format: RenderFormat,
    },
    /// All decompositions into weight-<=1 primitive types.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        r#type: String,
        #[arg(long, value_enum, default_value_t)]
        format: RenderFormat,
    },
    /// Check generated results against the reference data.
    Verify {
        #[arg(value_enum)]
        subject: Subject,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
        #[arg(long, value_enum, default_value_t)]
        format: RenderFormat,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ClassificationFailure(_) | Error::Consistency(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: format!("error: {e}"),
        }
    }
}

fn type_json(t: &crate::types::AutType) -> serde_json::Value {
    json!(t
        .entries()
        .iter()
        .map(|x| format!("{}/{}", x.num(), x.den()))
        .collect::<Vec<_>>())
}

fn simple_type_output(t: &crate::types::AutType, format: RenderFormat) -> String {
    match format {
        RenderFormat::Json => format!("{}\n", json!({ "entries": type_json(t) })),
        RenderFormat::Csv => format!(
            "entries\n\"{}\"\n",
            t.entries()
                .iter()
                .map(|x| format!("{}/{}", x.num(), x.den()))
                .collect::<Vec<_>>()
                .join(";")
        ),
        _ => format!("{}\n", render::render_type(t)),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let fixtures = match &cli.fixtures {
        Some(path) => Fixtures::from_path(path)?,
        None => Fixtures::embedded()?,
    };
    let mut emit = |s: String| {
        out.write_all(s.as_bytes()).map_err(|e| Failure {
            code: EXIT_FAILED,
            message: format!("error: writing output: {e}"),
        })
    };

    match cli.command {
        Command::Primitives { max_weight, format } => {
            let w: Weight = max_weight.parse()?;
            let cat = primitives_up_to_weight(w)?;
            emit(render::primitives(&cat, format))?;
            Ok(EXIT_OK)
        }
        Command::AgeOne { method, format } => {
            let slice_method = match method {
                Method::Knapsack => SliceMethod::Knapsack,
                _ => SliceMethod::Series,
            };
            let cat = enumerate_age_one_with(&fixtures, slice_method)?;
            let mut code = EXIT_OK;
            let mut diagnostics = String::new();
            if method == Method::Both {
                let disagreements = compare_routes(SCALE, Exec::default())?;
                for (grade, _, _) in &disagreements {
                    diagnostics.push_str(&format!("series and knapsack differ at grade {grade}\n"));
                }
                let knapsack = enumerate_age_one_with(&fixtures, SliceMethod::Knapsack)?;
                if knapsack != cat {
                    diagnostics.push_str("series and knapsack catalogues differ\n");
                }
                if !diagnostics.is_empty() {
                    code = EXIT_FAILED;
                }
            }
            emit(render::age_one(&cat, format))?;
            if code != EXIT_OK {
                return Err(Failure {
                    code,
                    message: diagnostics.trim_end().to_string(),
                });
            }
            Ok(code)
        }
        Command::Classify { r#type, format } => {
            let t = parse_type(&r#type)?;
            let strategies = classify(&t)?;
            let reduced = t.reduce();
            let row = fixtures.table2.iter().find(|r| r.canonical == reduced);
            let s = match format {
                RenderFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({
                        "entries": type_json(&t),
                        "weight": t.weight()?.to_string(),
                        "table_row": row.map(|r| r.index),
                        "table_note": row.map(|r| r.note.tag()),
                        "strategies": strategies.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    }))
                    .unwrap()
                ),
                _ => {
                    let mut s = format!(
                        "type: {}\nweight: {}\n",
                        render::render_type(&t),
                        t.weight()?
                    );
                    match row {
                        Some(r) => s.push_str(&format!("table row: #{} ({})\n", r.index, r.note)),
                        None => s.push_str("table row: none\n"),
                    }
                    s.push_str("strategies:\n");
                    for st in &strategies {
                        s.push_str(&format!("  {st}\n"));
                    }
                    s
                }
            };
            emit(s)?;
            Ok(EXIT_OK)
        }
        Command::Power {
            r#type,
            k,
            reduce,
            format,
        } => {
            let t = parse_type(&r#type)?;
            let mut p = t.power(k)?;
            if reduce {
                p = p.reduce();
            }
            emit(simple_type_output(&p, format))?;
            Ok(EXIT_OK)
        }
        Command::Inverse { r#type, format } => {
            let t = parse_type(&r#type)?;
            emit(simple_type_output(&t.inverse(), format))?;
            Ok(EXIT_OK)
        }
        Command::Weight { r#type, format } => {
            let t = parse_type(&r#type)?;
            let w = t.weight()?;
            emit(match format {
                RenderFormat::Json => format!("{}\n", json!({ "weight": w.to_string() })),
                _ => format!("{w}\n"),
            })?;
            Ok(EXIT_OK)
        }
        Command::Decompose { r#type, format } => {
            let t = parse_type(&r#type)?;
            let parts = decompose(&t)?;
            let s = match format {
                RenderFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({
                        "entries": type_json(&t),
                        "decompositions": parts.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                    }))
                    .unwrap()
                ),
                _ => {
                    let mut s = String::new();
                    for m in &parts {
                        let pieces: Vec<String> = m
                            .exponents()
                            .iter()
                            .flat_map(|(&i, &e)| {
                                let p = monomial_to_type(&crate::series::Monomial::var(i))
                                    .map(|t| format!("({t})"))
                                    .unwrap_or_default();
                                std::iter::repeat_n(p, e as usize)
                            })
                            .collect();
                        s.push_str(&format!("{m} = {}\n", pieces.join(" + ")));
                    }
                    if parts.is_empty() {
                        s.push_str("no decomposition into weight <= 1 primitive types\n");
                    }
                    s
                }
            };
            emit(s)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            subject,
            n_max,
            format,
        } => {
            let mut reports = Vec::new();
            let all = subject == Subject::All;
            if all || subject == Subject::Table1 {
                reports.push(verify_table1(&fixtures));
            }
            if all || subject == Subject::Table2 {
                let generated = enumerate_age_one_with(&fixtures, SliceMethod::Series)?;
                reports.push(verify_table2_against(&generated, &fixtures));
            }
            if all || subject == Subject::Notes {
                reports.push(verify_notes(&fixtures));
            }
            if all || subject == Subject::Series {
                reports.push(verify_series(&fixtures)?);
            }
            if all || subject == Subject::Lemmas {
                reports.push(verify_lemma_2_1(n_max)?);
            }
            emit(render::reports(&reports, format, !all))?;
            Ok(if reports.iter().all(|r| r.passed()) {
                EXIT_OK
            } else {
                EXIT_FAILED
            })
        }
    }
}

/// Run the CLI on `args` (program name first). Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}
