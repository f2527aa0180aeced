//! `ucca`: batch front end for parsing, validating, converting, scoring
//! and counting foundational-layer passages.
//!
//! Exit status: 0 success, 1 error diagnostics, 2 parse, IO or format
//! failure, 3 usage error. Nothing is written to stdout on 2 or 3.

mod input;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::Value;
use ucca_core::interchange::{to_interchange, to_interchange_many};
use ucca_core::notation::{render_document, LabelSide, ParseOptions};
use ucca_core::score::{score, ScoreMode, ScoreReport};
use ucca_core::validate::{has_errors, validate, Config};
use ucca_core::{canonical_json, stats, CategoryCounts, Passage};

use input::{detect, load, sorted, stem, Loaded, JSON_SUFFIX};

const OK: u8 = 0;
const DIAGNOSTICS: u8 = 1;
const FAILURE: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ucca",
    version,
    about = "Parse, validate, convert, score and count UCCA passages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// Bracket notation
    Text,
    /// Interchange JSON
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Labeled,
    Unlabeled,
}

#[derive(Subcommand)]
enum Command {
    /// Parse bracket-notation files and write one .ucca.json file per input
    Parse {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Directory for the JSON files (default: next to each input)
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Resolve ambiguous remotes to the nearest match with a warning
        #[arg(long)]
        lenient_remotes: bool,
        /// Write every file that parses instead of stopping at the first error
        #[arg(long)]
        keep_going: bool,
    },
    /// Check passages against the annotation restrictions
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Severity overrides, one `RULE = error|warning|off` per line
        /// (default: $UCCA_CONFIG)
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Input format (default: by extension)
        #[arg(long, value_enum)]
        from: Option<InputFormat>,
    },
    /// Convert between bracket notation and interchange JSON
    Convert {
        path: PathBuf,
        /// Output format (default: the other one)
        #[arg(long, value_enum)]
        to: Option<InputFormat>,
        /// Label placement for text output
        #[arg(long, value_enum, default_value = "left")]
        label_side: Side,
        /// Input format (default: by extension)
        #[arg(long, value_enum)]
        from: Option<InputFormat>,
    },
    /// Compare a predicted annotation with a gold one
    Score {
        gold: PathBuf,
        pred: PathBuf,
        #[arg(long, value_enum, default_value = "labeled")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Input format for both files (default: by extension)
        #[arg(long, value_enum)]
        from: Option<InputFormat>,
    },
    /// Count edges per category across files
    Stats {
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Input format (default: by extension)
        #[arg(long, value_enum)]
        from: Option<InputFormat>,
    },
}

/// Result of a subcommand: exit status, stdout text and stderr lines.
struct Run {
    status: u8,
    out: String,
    err: Vec<String>,
}

impl Run {
    fn ok(out: String) -> Self {
        Run {
            status: OK,
            out,
            err: Vec::new(),
        }
    }

    fn failed(err: Vec<String>) -> Self {
        Run {
            status: FAILURE,
            out: String::new(),
            err,
        }
    }
}

fn load_all(
    paths: &[PathBuf],
    from: Option<InputFormat>,
) -> Result<Vec<(PathBuf, Loaded)>, Vec<String>> {
    let options = ParseOptions::default();
    let results: Vec<_> = paths
        .par_iter()
        .map(|p| load(p, detect(p, from), &options).map(|l| (p.clone(), l)))
        .collect();
    let errors: Vec<String> = results
        .iter()
        .filter_map(|r| r.as_ref().err().cloned())
        .collect();
    if errors.is_empty() {
        Ok(results.into_iter().map(Result::unwrap).collect())
    } else {
        Err(errors)
    }
}

fn json_outputs(path: &Path, out_dir: Option<&Path>, count: usize) -> Vec<PathBuf> {
    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| path.parent().map(Path::to_path_buf))
        .unwrap_or_default();
    let stem = stem(path);
    if count == 1 {
        vec![dir.join(format!("{stem}{JSON_SUFFIX}"))]
    } else {
        (1..=count)
            .map(|n| dir.join(format!("{stem}.{n}{JSON_SUFFIX}")))
            .collect()
    }
}

fn cmd_parse(paths: &[PathBuf], out_dir: Option<&Path>, lenient: bool, keep_going: bool) -> Run {
    let options = ParseOptions {
        lenient_remotes: lenient,
    };
    let paths = sorted(paths);
    let results: Vec<_> = paths
        .par_iter()
        .map(|p| load(p, InputFormat::Text, &options))
        .collect();
    if !keep_going {
        if let Some(Err(e)) = results.iter().find(|r| r.is_err()) {
            return Run::failed(vec![e.clone()]);
        }
    }
    if let Some(dir) = out_dir {
        if let Err(e) = fs::create_dir_all(dir) {
            return Run::failed(vec![format!("{}: {e}", dir.display())]);
        }
    }
    let mut run = Run::ok(String::new());
    let mut summaries = String::new();
    for (path, result) in paths.iter().zip(results) {
        match result {
            Ok(loaded) => {
                run.err.extend(loaded.warnings);
                let targets = json_outputs(path, out_dir, loaded.passages.len());
                for (passage, target) in loaded.passages.iter().zip(&targets) {
                    if let Err(e) = fs::write(target, to_interchange(passage)) {
                        run.status = FAILURE;
                        run.err.push(format!("{}: {e}", target.display()));
                        continue;
                    }
                    summaries.push_str(&format!(
                        "{}: {} tokens, {} units, {} edges -> {}\n",
                        path.display(),
                        passage.tokens().len(),
                        passage.units().len(),
                        passage.edges().count(),
                        target.display()
                    ));
                }
            }
            Err(e) => {
                run.status = FAILURE;
                run.err.push(e);
            }
        }
    }
    if run.status == OK {
        run.out = summaries;
    } else {
        run.err.extend(summaries.lines().map(str::to_string));
    }
    run
}

fn read_config(path: Option<PathBuf>) -> Result<Config, String> {
    let path = path.or_else(|| std::env::var_os("UCCA_CONFIG").map(PathBuf::from));
    match path {
        None => Ok(Config::default()),
        Some(p) => {
            let text = fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
            text.parse().map_err(|e| format!("{}: {e}", p.display()))
        }
    }
}

fn cmd_validate(
    paths: &[PathBuf],
    config: Option<PathBuf>,
    format: Format,
    from: Option<InputFormat>,
) -> Run {
    let config = match read_config(config) {
        Ok(c) => c,
        Err(e) => return Run::failed(vec![e]),
    };
    let files = match load_all(&sorted(paths), from) {
        Ok(f) => f,
        Err(e) => return Run::failed(e),
    };
    let reports: Vec<Vec<(String, Passage, _)>> = files
        .par_iter()
        .map(|(path, loaded)| {
            loaded
                .passages
                .iter()
                .map(|p| (path.display().to_string(), p.clone(), validate(p, &config)))
                .collect()
        })
        .collect();
    let mut errors = false;
    let mut json = Vec::new();
    let mut text = String::new();
    for (file, passage, diagnostics) in reports.into_iter().flatten() {
        errors |= has_errors(&diagnostics);
        for d in diagnostics {
            match format {
                Format::Text => text.push_str(&format!("{file} [{}]: {d}\n", passage.id())),
                Format::Json => {
                    let mut v = serde_json::to_value(&d).expect("diagnostics serialize");
                    v["file"] = Value::from(file.clone());
                    v["passage"] = Value::from(passage.id());
                    json.push(v);
                }
            }
        }
    }
    let out = match format {
        Format::Text => text,
        Format::Json => canonical_json(&json),
    };
    Run {
        status: if errors { DIAGNOSTICS } else { OK },
        out,
        err: Vec::new(),
    }
}

fn cmd_convert(path: &Path, to: Option<InputFormat>, side: Side, from: Option<InputFormat>) -> Run {
    let source = detect(path, from);
    let loaded = match load(path, source, &ParseOptions::default()) {
        Ok(l) => l,
        Err(e) => return Run::failed(vec![e]),
    };
    let target = to.unwrap_or(match source {
        InputFormat::Text => InputFormat::Json,
        InputFormat::Json => InputFormat::Text,
    });
    let out = match target {
        InputFormat::Json if loaded.passages.len() == 1 => to_interchange(&loaded.passages[0]),
        InputFormat::Json => to_interchange_many(&loaded.passages),
        InputFormat::Text => {
            let side = match side {
                Side::Left => LabelSide::Left,
                Side::Right => LabelSide::Right,
            };
            render_document(&loaded.passages, side) + "\n"
        }
    };
    Run {
        err: loaded.warnings,
        ..Run::ok(out)
    }
}

fn cmd_score(
    gold: &Path,
    pred: &Path,
    mode: Mode,
    format: Format,
    from: Option<InputFormat>,
) -> Run {
    let files = match load_all(&[gold.to_path_buf(), pred.to_path_buf()], from) {
        Ok(f) => f,
        Err(e) => return Run::failed(e),
    };
    let (g, p) = (&files[0].1.passages, &files[1].1.passages);
    if g.len() != p.len() {
        return Run::failed(vec![format!(
            "{} has {} passages but {} has {}",
            gold.display(),
            g.len(),
            pred.display(),
            p.len()
        )]);
    }
    let mode = match mode {
        Mode::Labeled => ScoreMode::Labeled,
        Mode::Unlabeled => ScoreMode::Unlabeled,
    };
    let mut total = ScoreReport::empty(mode);
    for (a, b) in g.iter().zip(p) {
        match score(a, b, mode) {
            Ok(r) => total += &r,
            Err(e) => return Run::failed(vec![format!("{}: {e}", a.id())]),
        }
    }
    Run::ok(match format {
        Format::Text => total.to_table(),
        Format::Json => canonical_json(&total),
    })
}

fn cmd_stats(paths: &[PathBuf], format: Format, from: Option<InputFormat>) -> Run {
    let files = match load_all(&sorted(paths), from) {
        Ok(f) => f,
        Err(e) => return Run::failed(e),
    };
    let total: CategoryCounts = files
        .par_iter()
        .flat_map(|(_, l)| l.passages.par_iter().map(stats))
        .collect::<Vec<_>>()
        .iter()
        .sum();
    Run::ok(match format {
        Format::Text => total.to_table(),
        Format::Json => canonical_json(&total),
    })
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Parse {
            paths,
            out_dir,
            lenient_remotes,
            keep_going,
        } => cmd_parse(&paths, out_dir.as_deref(), lenient_remotes, keep_going),
        Command::Validate {
            paths,
            config,
            format,
            from,
        } => cmd_validate(&paths, config, format, from),
        Command::Convert {
            path,
            to,
            label_side,
            from,
        } => cmd_convert(&path, to, label_side, from),
        Command::Score {
            gold,
            pred,
            mode,
            format,
            from,
        } => cmd_score(&gold, &pred, mode, format, from),
        Command::Stats {
            paths,
            format,
            from,
        } => cmd_stats(&paths, format, from),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(cli);
    for line in &result.err {
        eprintln!("{line}");
    }
    if result.status <= DIAGNOSTICS {
        print!("{}", result.out);
    }
    ExitCode::from(result.status)
}
