use std::fmt::Write as _;

use anyhow::Result;
use hurwitz_core::certify::Certificate;
use hurwitz_core::plan::{Execution, Recipe, SurveyReport};
use hurwitz_core::Diagram;
use serde::Serialize;

use crate::Format;

pub fn certificate_text(name: &str, cert: &Certificate) -> String {
    let mut out = String::new();
    writeln!(out, "{name}: {}", cert.conclusion).unwrap();
    writeln!(out, "  degree      {}", cert.degree).unwrap();
    writeln!(
        out,
        "  orders      ({}, {}, {})",
        cert.orders.x, cert.orders.y, cert.orders.xy
    )
    .unwrap();
    writeln!(out, "  m           {}", cert.m).unwrap();
    writeln!(out, "  even        {}", cert.even).unwrap();
    writeln!(out, "  transitive  {}", cert.transitive).unwrap();
    writeln!(out, "  primitive   {}", cert.primitive).unwrap();
    match &cert.witness {
        Some(w) => writeln!(out, "  witness     {} (p={})", w.word, w.p).unwrap(),
        None => writeln!(out, "  witness     none").unwrap(),
    }
    if let Some(order) = cert.lift_order {
        writeln!(out, "  lift order  {order}").unwrap();
    }
    if let Some(reason) = &cert.reason {
        writeln!(out, "  reason      {reason}").unwrap();
    }
    out
}

pub fn build_text(recipe: &Recipe, diagram: &Diagram, exec: &Execution) -> String {
    let mut out = String::new();
    writeln!(out, "n = {}", recipe.n).unwrap();
    writeln!(out, "recipe      {}", recipe.final_expression()).unwrap();
    if recipe.g_prime {
        writeln!(out, "            (last G replaced by G' to fix m mod 4)").unwrap();
    }
    if !recipe.alternatives.is_empty() {
        writeln!(out, "also        {}", recipe.alternatives.join(", ")).unwrap();
    }
    if let Some((want, got)) = exec.prime_mismatch {
        writeln!(out, "note        witness prime {got}, expected {want}").unwrap();
    }
    out.push_str(&certificate_text(diagram.name(), &exec.certificate));
    out
}

#[derive(Serialize)]
struct BuildReport<'a> {
    recipe: &'a Recipe,
    built: &'a str,
    certificate: &'a Certificate,
}

pub fn build_json(recipe: &Recipe, exec: &Execution) -> Result<String> {
    Ok(serde_json::to_string_pretty(&BuildReport {
        recipe,
        built: &exec.diagram_name,
        certificate: &exec.certificate,
    })?)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: u64,
    outcome: String,
    recipe: &'a str,
    p: Option<usize>,
    m: Option<usize>,
    reason: &'a str,
}

pub fn survey(report: &SurveyReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(report.to_json() + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for e in &report.entries {
                w.serialize(CsvRow {
                    n: e.n,
                    outcome: e.outcome.to_string(),
                    recipe: e.recipe.as_deref().unwrap_or(""),
                    p: e.certificate.as_ref().and_then(|c| c.witness.as_ref()).map(|w| w.p),
                    m: e.certificate.as_ref().map(|c| c.m),
                    reason: e.reason.as_deref().unwrap_or(""),
                })?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Text => {
            let mut out = String::new();
            for e in &report.entries {
                write!(out, "{:>5} {}", e.n, e.outcome).unwrap();
                if let Some(r) = &e.recipe {
                    write!(out, " {r}").unwrap();
                }
                if let Some(w) = e.certificate.as_ref().and_then(|c| c.witness.as_ref()) {
                    write!(out, " p={}", w.p).unwrap();
                }
                if let Some(reason) = &e.reason {
                    write!(out, " ({reason})").unwrap();
                }
                out.push('\n');
            }
            writeln!(
                out,
                "exceptions ({}): {}",
                report.exceptions.len(),
                report
                    .exceptions
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            )
            .unwrap();
            Ok(out)
        }
    }
}
