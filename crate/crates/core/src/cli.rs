//! The `hybridmknf` command line.
//!
//! Exit codes: 0 ok or true, 1 false, 2 parse error, 3 safety or
//! constructor error, 4 undefined, 5 inconsistent ontology, 6 MKNF
//! inconsistency flagged, 7 internal error.

use crate::el::{classify, complete_tbox, normalize, reduce_tbox};
use crate::error::{Error, Result};
use crate::kb::HybridKb;
use crate::logic::{Literal, Truth};
use crate::parser::{parse_kb, parse_query, Query};
use crate::serialize::{axioms_text, classification_text, model_text, program_text, Format};
use crate::slg::{answer_query, inconsistency_probe, Engine, Strategy, DEFAULT_STEP_BUDGET};
use crate::symbols::SymbolTable;
use crate::transform::{build_combined_with, CompiledKb, DoublingOptions};
use crate::wfs::{
    alternating_fixpoint, alternating_fixpoint_d, compiled_model, consistency_check, extract_model, GroundKb,
    MknfConsistency, OntologyOracle, PositiveEntailment, UnfoundedChecker, DEFAULT_UNFOUNDED_CAP,
};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::{BufRead, Write};
use std::path::PathBuf;

pub const DEFAULT_GROUND_CAP: usize = 1_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNDEFINED: i32 = 4;
pub const EXIT_MKNF_INCONSISTENT: i32 = 6;
pub const EXIT_INTERNAL: i32 = 7;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    #[default]
    Local,
    Batched,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    #[default]
    Text,
    Structured,
}

/// Well-founded reasoning over hybrid MKNF knowledge bases with EL+
/// ontologies.
#[derive(Debug, Parser)]
#[command(name = "hybridmknf", version)]
pub struct RunConfig {
    /// Scheduling strategy of the tabled engine.
    #[arg(long, global = true, value_enum, default_value_t)]
    pub strategy: StrategyArg,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: FormatArg,
    /// Print the fixpoint sequences or the table forest.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Most ground rule instances the bottom-up commands may create.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUND_CAP, value_parser = positive)]
    pub ground_cap: usize,
    /// Most known atoms for brute-force unfounded sets (with `check --trace`).
    #[arg(long, global = true, default_value_t = DEFAULT_UNFOUNDED_CAP, value_parser = positive)]
    pub unfounded_cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the S and T maps of the TBox.
    Classify { kb: PathBuf },
    /// Print the normalized and the reduced TBox.
    Reduce { kb: PathBuf },
    /// Print the combined rule program with provenance tags.
    Translate {
        kb: PathBuf,
        /// Do not double guard predicates defined by facts only.
        #[arg(long)]
        undouble_guards: bool,
    },
    /// Print the three-valued model.
    Model {
        kb: PathBuf,
        /// Compute the doubled alternating fixpoint against the ontology
        /// instead of the compiled program.
        #[arg(long)]
        semantic: bool,
    },
    /// Run the MKNF-consistency test.
    Check { kb: PathBuf },
    /// Answer one conjunctive query.
    Query { kb: PathBuf, query: String },
    /// Read queries from standard input.
    Repl { kb: PathBuf },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, input: &mut dyn BufRead) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let path = match &cfg.command {
        Command::Classify { kb }
        | Command::Reduce { kb }
        | Command::Translate { kb, .. }
        | Command::Model { kb, .. }
        | Command::Check { kb }
        | Command::Query { kb, .. }
        | Command::Repl { kb } => kb.clone(),
    };
    match execute(&cfg, out, input) {
        Ok(code) => code,
        Err(e) => {
            let loc = matches!(e, Error::Syntax { .. } | Error::Unsupported { .. } | Error::Unsafe { .. });
            if loc {
                eprintln!("{}:{e}", path.display());
            } else {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn load(path: &PathBuf) -> Result<HybridKb> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_kb(&text)
}

fn format(cfg: &RunConfig) -> Format {
    match cfg.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    }
}

fn strategy(cfg: &RunConfig) -> Strategy {
    match cfg.strategy {
        StrategyArg::Local => Strategy::Local,
        StrategyArg::Batched => Strategy::Batched,
    }
}

/// Ground instances `kb` would produce, saturating at `usize::MAX`.
fn ground_size(kb: &HybridKb) -> usize {
    let n = kb.individuals().len();
    kb.program.rules.iter().fold(0usize, |acc, r| {
        let k = r.vars().len() as u32;
        acc.saturating_add(n.saturating_pow(k))
    })
}

fn check_ground_cap(cfg: &RunConfig, kb: &HybridKb) -> Result<()> {
    let size = ground_size(kb);
    if size > cfg.ground_cap {
        return Err(Error::TooLarge { size, cap: cfg.ground_cap });
    }
    Ok(())
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn execute(cfg: &RunConfig, out: &mut dyn Write, input: &mut dyn BufRead) -> Result<i32> {
    let fmt = format(cfg);
    match &cfg.command {
        Command::Classify { kb } => {
            let mut kb = load(kb)?;
            let nt = normalize(&kb.ontology.tbox, &mut kb.symbols);
            let maps = classify(&nt);
            write!(out, "{}", classification_text(&maps, &kb.symbols, fmt)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Reduce { kb } => {
            let mut kb = load(kb)?;
            let nt = normalize(&kb.ontology.tbox, &mut kb.symbols);
            let reduced = reduce_tbox(&complete_tbox(&nt, &classify(&nt)));
            if fmt == Format::Text {
                writeln!(out, "# normalized").map_err(io)?;
            }
            write!(out, "{}", axioms_text(&nt.axioms, &kb.symbols, fmt)).map_err(io)?;
            if fmt == Format::Text {
                writeln!(out, "# reduced").map_err(io)?;
            }
            write!(out, "{}", axioms_text(&reduced, &kb.symbols, fmt)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Translate { kb, undouble_guards } => {
            let kb = load(kb)?;
            let c = build_combined_with(&kb, DoublingOptions { undouble_guards: *undouble_guards })?;
            write!(out, "{}", program_text(&c.rules, &c.symbols, fmt)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Model { kb, semantic } => {
            let kb = load(kb)?;
            let model = if *semantic {
                check_ground_cap(cfg, &kb)?;
                build_combined_with(&kb, DoublingOptions::default())?;
                let oracle = OntologyOracle::new(&kb, PositiveEntailment::default());
                let g = GroundKb::doubled(&kb, Some(&oracle))?;
                let trace = alternating_fixpoint_d(&g);
                if cfg.trace {
                    write!(out, "{}", trace.render(&kb.symbols)).map_err(io)?;
                }
                extract_model(&trace, &g.ka)
            } else {
                let c = build_combined_with(&kb, DoublingOptions::default())?;
                compiled_model(&c)?
            };
            write!(out, "{}", model_text(&model, &kb.symbols, fmt)).map_err(io)?;
            Ok(if model.mknf_consistent() { EXIT_OK } else { EXIT_MKNF_INCONSISTENT })
        }
        Command::Check { kb } => {
            let kb = load(kb)?;
            build_combined_with(&kb, DoublingOptions::default())?;
            check_ground_cap(cfg, &kb)?;
            let oracle = OntologyOracle::new(&kb, PositiveEntailment::default());
            let g = GroundKb::original(&kb, Some(&oracle))?;
            let trace = alternating_fixpoint(&g);
            if cfg.trace {
                write!(out, "{}", trace.render(&kb.symbols)).map_err(io)?;
                print_unfounded(cfg, &kb, &oracle, out)?;
            }
            let verdict = consistency_check(&g, &trace);
            let (word, detail) = match verdict {
                MknfConsistency::Consistent => ("consistent", ""),
                MknfConsistency::InconsistentAtP => ("inconsistent", "Γ'(P_ω) ⊂ Γ(P_ω)"),
                MknfConsistency::InconsistentAtN => ("inconsistent", "Γ'(N_ω) ⊂ Γ(N_ω)"),
                MknfConsistency::OntologyInconsistent => ("inconsistent", "the ontology is inconsistent"),
            };
            match fmt {
                Format::Text if detail.is_empty() => writeln!(out, "MKNF-consistent"),
                Format::Text => writeln!(out, "MKNF-inconsistent: {detail}"),
                Format::Structured => writeln!(out, "kind=verdict value={word} text={detail}"),
            }
            .map_err(io)?;
            Ok(if verdict.is_consistent() { EXIT_OK } else { EXIT_MKNF_INCONSISTENT })
        }
        Command::Query { kb, query } => {
            let kb = load(kb)?;
            let mut s = Session::new(&kb, strategy(cfg))?;
            let code = match s.query(query, fmt, out) {
                Err(e @ (Error::Syntax { .. } | Error::Unsafe { .. } | Error::Unsupported { .. })) => {
                    eprintln!("query:{e}");
                    return Ok(e.exit_code());
                }
                other => other?,
            };
            if cfg.trace {
                write!(out, "{}", s.engine.export_forest(&s.symbols)).map_err(io)?;
            }
            Ok(code)
        }
        Command::Repl { kb } => {
            let kb = load(kb)?;
            let mut s = Session::new(&kb, strategy(cfg))?;
            s.trace = cfg.trace;
            s.repl(fmt, out, input)?;
            Ok(EXIT_OK)
        }
    }
}

/// The greatest unfounded set of each step of the doubled sequence, when
/// the KB is small enough.
fn print_unfounded(cfg: &RunConfig, kb: &HybridKb, oracle: &OntologyOracle, out: &mut dyn Write) -> Result<()> {
    let g = GroundKb::doubled(kb, Some(oracle))?;
    let checker = match UnfoundedChecker::new(&g, cfg.unfounded_cap) {
        Ok(c) => c,
        Err(e) => {
            writeln!(out, "# unfounded sets skipped: {e}").map_err(io)?;
            return Ok(());
        }
    };
    let trace = alternating_fixpoint_d(&g);
    for i in 0..trace.n.len() {
        let f = g.ka.difference(&trace.n[i]).cloned().collect();
        let u = checker.greatest(&trace.p[i], &f);
        let v: Vec<String> = u.iter().map(|a| a.display(&kb.symbols)).collect();
        writeln!(out, "U^d_{i} = {{{}}}", v.join(", ")).map_err(io)?;
    }
    Ok(())
}

/// A compiled KB with a tabled engine, shared by `query` and `repl`.
pub struct Session {
    pub compiled: CompiledKb,
    pub symbols: SymbolTable,
    pub engine: Engine,
    pub trace: bool,
}

impl Session {
    pub fn new(kb: &HybridKb, strategy: Strategy) -> Result<Self> {
        let compiled = build_combined_with(kb, DoublingOptions::default())?;
        let engine = Engine::new(&compiled.program(), strategy).with_budget(DEFAULT_STEP_BUDGET);
        let symbols = compiled.symbols.clone();
        Ok(Session { compiled, symbols, engine, trace: false })
    }

    fn parse(&mut self, text: &str) -> Result<Query> {
        let q = parse_query(text, &mut self.symbols)?;
        for w in &q.warnings {
            eprintln!("warning: {w}");
        }
        Ok(q)
    }

    /// Answers `text` and returns the exit code: 0 if some answer is true,
    /// 4 if answers exist but none is true, 1 without answers.
    pub fn query(&mut self, text: &str, fmt: Format, out: &mut dyn Write) -> Result<i32> {
        let q = self.parse(text)?;
        let answers = answer_query(&mut self.engine, &q)?;
        let syms = &self.symbols;
        let mut rows: Vec<(Vec<&str>, Truth)> = answers
            .iter()
            .map(|a| (a.binding.iter().map(|c| syms.const_name(*c)).collect(), a.value))
            .collect();
        rows.sort();
        if q.vars.is_empty() {
            let v = rows.first().map_or(Truth::False, |r| r.1);
            match fmt {
                Format::Text => writeln!(out, "{}", v.as_str()),
                Format::Structured => writeln!(out, "kind=answer value={} text=", v.as_str()),
            }
            .map_err(io)?;
        } else {
            for (binding, v) in &rows {
                let text: Vec<String> =
                    q.vars.iter().zip(binding).map(|(var, c)| format!("{}={c}", syms.var_name(*var))).collect();
                match fmt {
                    Format::Text => writeln!(out, "{}: {}", text.join(", "), v.as_str()),
                    Format::Structured => writeln!(out, "kind=answer value={} text={}", v.as_str(), text.join(", ")),
                }
                .map_err(io)?;
            }
            if rows.is_empty() && fmt == Format::Text {
                writeln!(out, "false").map_err(io)?;
            }
        }
        Ok(if rows.iter().any(|r| r.1 == Truth::True) {
            EXIT_OK
        } else if rows.is_empty() {
            EXIT_FALSE
        } else {
            EXIT_UNDEFINED
        })
    }

    /// `A` true while `A^d` false.
    pub fn probe(&mut self, text: &str, out: &mut dyn Write) -> Result<bool> {
        let q = self.parse(text)?;
        let atom = match q.body.as_slice() {
            [Literal::Pos(a)] => a.to_ground().ok_or_else(|| Error::NonGround(text.to_string()))?,
            _ => return Err(Error::NonGround(text.to_string())),
        };
        let flagged = inconsistency_probe(&mut self.engine, &atom)?;
        if flagged {
            writeln!(out, "MKNF-inconsistent: {} is true and {} is false", text.trim(), atom.doubled().display(&self.symbols))
        } else {
            writeln!(out, "not flagged")
        }
        .map_err(io)?;
        Ok(flagged)
    }

    /// Reads commands until end of input or `:quit`. Errors are reported
    /// and the loop goes on.
    pub fn repl(&mut self, fmt: Format, out: &mut dyn Write, input: &mut dyn BufRead) -> Result<()> {
        let mut line = String::new();
        loop {
            line.clear();
            if input.read_line(&mut line).map_err(io)? == 0 {
                return Ok(());
            }
            let cmd = line.trim();
            let res = if cmd.is_empty() || cmd.starts_with('#') {
                Ok(())
            } else if cmd == ":quit" || cmd == ":q" {
                return Ok(());
            } else if let Some(rest) = cmd.strip_prefix(":probe") {
                self.probe(rest, out).map(|_| ())
            } else if let Some(rest) = cmd.strip_prefix(":trace") {
                match rest.trim() {
                    "on" => self.trace = true,
                    "off" => self.trace = false,
                    _ => writeln!(out, "usage: :trace on|off").map_err(io)?,
                }
                Ok(())
            } else if cmd.starts_with(':') {
                writeln!(out, "commands: :probe A, :trace on|off, :quit").map_err(io)
            } else {
                self.query(cmd, fmt, out).map(|_| ()).and_then(|_| {
                    if self.trace {
                        write!(out, "{}", self.engine.export_forest(&self.symbols)).map_err(io)?;
                    }
                    Ok(())
                })
            };
            if let Err(e) = res {
                writeln!(out, "error: {e}").map_err(io)?;
            }
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let stdin = std::io::stdin();
    let mut input = stdin.lock();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = run(std::env::args_os(), &mut out, &mut input);
    let _ = out.flush();
    code
}

