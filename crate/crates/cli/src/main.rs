mod output;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hurwitz_core::certify::{certify, Conclusion, CERT_VERSION};
use hurwitz_core::obstruct::exceptions;
use hurwitz_core::plan::{
    build_recipe, execute, survey, PlanError, SurveyOptions, EXECUTE_LIMIT, SURVEY_VERSION,
};
use hurwitz_core::registry::{
    brute_search, embedded, parse_records, write_record, Registry, SearchSpec,
    DEFAULT_SEARCH_CAP,
};
use hurwitz_core::{parse_word, Diagram};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (cert/1, survey/1)");

#[derive(Parser, Debug)]
#[command(name = "hurwitz", version = VERSION, about = "Build and certify (2,3,7) generators of alternating groups")]
struct Cli {
    /// Directory of base-diagram files. Without it only the embedded
    /// degree-56 and degree-96 triples are available.
    #[arg(long, global = true, env = "HURWITZ_DATA")]
    data: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the recipe for one degree and certify the result.
    Build {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Classify every degree in a range.
    Survey {
        #[arg(long, default_value_t = 8)]
        from: u64,
        #[arg(long, default_value_t = EXECUTE_LIMIT)]
        to: u64,
        /// Also build degrees above 300 instead of only checking their shape.
        #[arg(long)]
        execute_all: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Certify the triples of a data file, or `embedded:a56` / `embedded:a96`.
    Verify {
        target: String,
        /// Witness word, e.g. "(x,y)^13". Defaults to a commutator search.
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// List the degrees where Alt(n) is Hurwitz but its double cover is not.
    Exceptions,
    /// Exhaustively search small (2,3,7) triples.
    Search {
        #[arg(long)]
        degree: usize,
        /// Transpositions of x.
        #[arg(long)]
        m: usize,
        /// 3-cycles of y.
        #[arg(long)]
        q: usize,
        /// Require an (i)-handle; may be repeated.
        #[arg(long = "handle", value_parser = clap::value_parser!(u8).range(1..=6))]
        handles: Vec<u8>,
        #[arg(long)]
        transitive: bool,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP, value_parser = parse_cap)]
        cap: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn parse_cap(s: &str) -> Result<usize, String> {
    let cap: usize = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if cap < 7 {
        return Err("the search cap must be at least 7".into());
    }
    Ok(cap)
}

fn load_registry(data: Option<&Path>) -> Result<Registry> {
    match data {
        Some(dir) => Registry::load(dir).with_context(|| format!("loading {}", dir.display())),
        None => Ok(Registry::embedded_only()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli, &mut out);
    // a closed pipe (`hurwitz survey | head`) is not an error
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// `Ok(false)` for a completed run whose verdict is a failure.
fn run(cli: Cli, out: &mut String) -> Result<bool> {
    match cli.command {
        Command::Build { n, json } => {
            let registry = load_registry(cli.data.as_deref())?;
            let recipe = match build_recipe(n) {
                Ok(r) => r,
                Err(e @ (PlanError::NotHurwitz(_) | PlanError::Exception { .. })) => {
                    writeln!(out, "{e}")?;
                    return Ok(false);
                }
                Err(e) => return Err(e.into()),
            };
            let (diagram, exec) = execute(&recipe, &registry)?;
            if json {
                writeln!(out, "{}", output::build_json(&recipe, &exec)?)?;
            } else {
                out.push_str(&output::build_text(&recipe, &diagram, &exec));
            }
            Ok(exec.certificate.conclusion == Conclusion::CoverHurwitz)
        }
        Command::Survey {
            from,
            to,
            execute_all,
            format,
        } => {
            if from > to {
                bail!("--from {from} is greater than --to {to}");
            }
            let registry = load_registry(cli.data.as_deref())?;
            let report = survey(from, to, &registry, SurveyOptions { execute_all });
            debug_assert_eq!(report.version, SURVEY_VERSION);
            out.push_str(&output::survey(&report, format)?);
            Ok(report.ok())
        }
        Command::Verify { target, word, json } => {
            let (diagrams, default_word) = load_target(&target)?;
            let word = match word.or(default_word) {
                Some(w) => Some(parse_word(&w).with_context(|| format!("word '{w}'"))?),
                None => None,
            };
            let mut all_ok = true;
            for d in &diagrams {
                let cert = certify(d.x(), d.y(), word.as_ref());
                debug_assert_eq!(cert.version, CERT_VERSION);
                all_ok &= cert.conclusion != Conclusion::Fail;
                if json {
                    writeln!(out, "{}", cert.to_json())?;
                } else {
                    out.push_str(&output::certificate_text(d.name(), &cert));
                }
            }
            Ok(all_ok)
        }
        Command::Exceptions => {
            for (n, reason) in exceptions() {
                writeln!(out, "{n} {}", reason.tag())?;
            }
            Ok(true)
        }
        Command::Search {
            degree,
            m,
            q,
            handles,
            transitive,
            cap,
        } => {
            let spec = SearchSpec {
                degree,
                m,
                q,
                handles,
                transitive,
            };
            let hits = brute_search(&spec, cap)?;
            eprintln!("{} triple(s)", hits.len());
            for (idx, t) in hits.into_iter().enumerate() {
                let d = Diagram::new(format!("S{}", idx + 1), t, vec![])?;
                out.push_str(&write_record(&d, Some("exhaustive search")));
            }
            Ok(true)
        }
    }
}

/// Diagrams named by a verify target, with the witness word that goes with
/// an embedded triple.
fn load_target(target: &str) -> Result<(Vec<Diagram>, Option<String>)> {
    if let Some(key) = target.strip_prefix("embedded:") {
        let e = embedded(key).with_context(|| {
            format!("unknown embedded triple '{key}' (known: a56, a96)")
        })?;
        return Ok((vec![e.diagram], Some(e.witness.to_string())));
    }
    let text = std::fs::read_to_string(target).with_context(|| format!("reading {target}"))?;
    let records = parse_records(&text).with_context(|| format!("parsing {target}"))?;
    if records.is_empty() {
        bail!("{target} contains no diagram records");
    }
    Ok((records.into_iter().map(|r| r.diagram).collect(), None))
}
