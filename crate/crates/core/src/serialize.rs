//! Text and structured output for knowledge bases, compiled programs,
//! models and classifications.
//!
//! The structured format is line oriented: one record per line, fields
//! `key=value` in a fixed order, `kind` first and `text` (which may contain
//! spaces) last.
//!
//! ```text
//! kind=rule tag=c3 text=D(X) :- R(X,Y), C(Y).
//! kind=atom value=true text=D(b)
//! ```

use crate::el::{ClassificationMaps, Concept, NormalAxiom};
use crate::error::{Error, Location, Result};
use crate::kb::HybridKb;
use crate::logic::{GroundAtom, Truth};
use crate::parser::parse_program;
use crate::symbols::SymbolTable;
use crate::transform::{Tag, TaggedRule};
use crate::wfs::ThreeValuedModel;
use std::fmt::Write;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

/// A knowledge base in surface syntax; parsing the output gives the same
/// text again.
pub fn kb_text(kb: &HybridKb) -> String {
    let mut out = String::from("%tbox\n");
    for ax in &kb.ontology.tbox {
        out.push_str(&ax.display(&kb.symbols));
        out.push('\n');
    }
    out.push_str("%abox\n");
    for a in &kb.ontology.abox {
        out.push_str(&a.display(&kb.symbols));
        out.push('\n');
    }
    out.push_str("%rules\n");
    for r in &kb.program.rules {
        writeln!(out, "{}", r.display(&kb.symbols)).unwrap();
    }
    out
}

/// Compiled rules, each followed by the schema that produced it.
pub fn program_text(rules: &[TaggedRule], syms: &SymbolTable, format: Format) -> String {
    let mut out = String::new();
    for t in rules {
        match format {
            Format::Text => writeln!(out, "{}  #tag: {}", t.rule.display(syms), t.tag),
            Format::Structured => writeln!(out, "kind=rule tag={} text={}", t.tag, t.rule.display(syms)),
        }
        .unwrap();
    }
    out
}

fn fields(line: &str) -> Vec<(&str, &str)> {
    let mut out = Vec::new();
    let mut rest = line.trim();
    while !rest.is_empty() {
        let (key, after) = rest.split_once('=').unwrap_or((rest, ""));
        if key == "text" {
            out.push((key, after));
            break;
        }
        let (value, tail) = after.split_once(' ').unwrap_or((after, ""));
        out.push((key, value));
        rest = tail.trim_start();
    }
    out
}

/// Reads back the structured form of [`program_text`].
pub fn parse_structured_program(text: &str, syms: &mut SymbolTable) -> Result<Vec<TaggedRule>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let loc = Location { line: i + 1, col: 1 };
        let f = fields(line);
        let get = |k: &str| f.iter().find(|(key, _)| *key == k).map(|(_, v)| *v);
        if get("kind") != Some("rule") {
            return Err(Error::Syntax { loc, msg: "expected a `kind=rule` record".into() });
        }
        let tag = get("tag")
            .and_then(Tag::parse)
            .ok_or_else(|| Error::Syntax { loc, msg: "missing or unknown tag".into() })?;
        let body = get("text").ok_or_else(|| Error::Syntax { loc, msg: "missing text".into() })?;
        let mut p = parse_program(body, syms).map_err(|e| match e {
            Error::Syntax { loc: inner, msg } => {
                Error::Syntax { loc: Location { line: loc.line, col: inner.col }, msg }
            }
            other => other,
        })?;
        if p.rules.len() != 1 {
            return Err(Error::Syntax { loc, msg: "one rule per record".into() });
        }
        out.push(TaggedRule { rule: p.rules.remove(0), tag });
    }
    Ok(out)
}

fn atoms_sorted<'a>(set: impl IntoIterator<Item = &'a GroundAtom>) -> Vec<&'a GroundAtom> {
    let mut v: Vec<&GroundAtom> = set.into_iter().collect();
    v.sort();
    v
}

/// The three partitions of a model, in interned order.
pub fn model_text(model: &ThreeValuedModel, syms: &SymbolTable, format: Format) -> String {
    let mut out = String::new();
    let parts = [
        (Truth::True, &model.true_atoms),
        (Truth::Undefined, &model.undefined),
        (Truth::False, &model.false_atoms),
    ];
    for (value, set) in parts {
        if format == Format::Text {
            writeln!(out, "%{}", value.as_str()).unwrap();
        }
        for a in atoms_sorted(set) {
            match format {
                Format::Text => writeln!(out, "{}.", a.display(syms)),
                Format::Structured => writeln!(out, "kind=atom value={} text={}", value.as_str(), a.display(syms)),
            }
            .unwrap();
        }
    }
    for a in atoms_sorted(&model.conflicts) {
        match format {
            Format::Text => writeln!(out, "# conflict: {} is true and false", a.display(syms)),
            Format::Structured => writeln!(out, "kind=conflict text={}", a.display(syms)),
        }
        .unwrap();
    }
    out
}

/// S and T of a classification.
pub fn classification_text(maps: &ClassificationMaps, syms: &SymbolTable, format: Format) -> String {
    let c = |x: &Concept| x.display(syms).to_string();
    let mut out = String::new();
    for (k, s) in &maps.s {
        match format {
            Format::Text => {
                let v: Vec<String> = s.iter().map(c).collect();
                writeln!(out, "S({}) = {{{}}}", c(k), v.join(", ")).unwrap();
            }
            Format::Structured => {
                for d in s {
                    writeln!(out, "kind=s concept={} sup={}", c(k), c(d)).unwrap();
                }
            }
        }
    }
    for (r, pairs) in &maps.t {
        match format {
            Format::Text => {
                let v: Vec<String> = pairs.iter().map(|(a, b)| format!("({}, {})", c(a), c(b))).collect();
                writeln!(out, "T({}) = {{{}}}", syms.pred_name(*r), v.join(", ")).unwrap();
            }
            Format::Structured => {
                for (a, b) in pairs {
                    writeln!(out, "kind=t role={} sub={} filler={}", syms.pred_name(*r), c(a), c(b)).unwrap();
                }
            }
        }
    }
    out
}

/// Normal-form axioms, one per line.
pub fn axioms_text(axioms: &[NormalAxiom], syms: &SymbolTable, format: Format) -> String {
    let mut out = String::new();
    for ax in axioms {
        match format {
            Format::Text => writeln!(out, "{}", ax.display(syms)),
            Format::Structured => writeln!(out, "kind=axiom text={}", ax.display(syms)),
        }
        .unwrap();
    }
    out
}
