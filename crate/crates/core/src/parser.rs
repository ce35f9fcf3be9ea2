//! Surface syntax for knowledge bases, rule programs and queries.
//!
//! ```text
//! %tbox
//! C <= D.                      # concept inclusion
//! C and E <= bot.              # disjointness, also written  C <= not E.
//! exists r.C <= D.
//! r o s <= t.                  # role chain
//! role r <= s.                 # role inclusion (`role` optional when
//!                              # r or s is used as a role elsewhere)
//! %abox
//! C(b). r(a,b).
//! %rules
//! p(X) :- not D(X), o(X).
//! o(a).
//! ```
//!
//! Sections may also share a line. A predicate is a DL predicate iff it
//! occurs in `%tbox` or `%abox`. In rules, identifiers starting with an
//! uppercase letter or `_` are variables, all others constants.

use crate::error::{Error, Location, Result};
use crate::kb::{validate_dl_safety, HybridKb};
use crate::logic::{Atom, Literal, Pred, PredKind, Program, Rule, Term};
use crate::ontology::{Assertion, ConceptExpr, Ontology, TBoxAxiom};
use crate::symbols::{PredId, SymbolTable, VarId};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Section(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Sub,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    loc: Location,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let is_ident = |c: char| c.is_ascii_alphanumeric() || c == '_' || c == '^';
    while i < chars.len() {
        let c = chars[i];
        let loc = Location { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, loc });
            i += 1;
            col += 1;
            continue;
        }
        if c == ':' && chars.get(i + 1) == Some(&'-') {
            out.push(Token { tok: Tok::If, loc });
            i += 2;
            col += 2;
            continue;
        }
        if c == '<' && chars.get(i + 1) == Some(&'=') {
            out.push(Token { tok: Tok::Sub, loc });
            i += 2;
            col += 2;
            continue;
        }
        if c == '%' || is_ident(c) {
            let start = i;
            i += 1;
            while i < chars.len() && is_ident(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            if let Some(name) = word.strip_prefix('%') {
                out.push(Token { tok: Tok::Section(name.to_string()), loc });
            } else {
                out.push(Token { tok: Tok::Ident(word), loc });
            }
            continue;
        }
        return Err(Error::Syntax { loc, msg: format!("unexpected character `{c}`") });
    }
    out.push(Token { tok: Tok::Eof, loc: Location { line, col } });
    Ok(out)
}

const KEYWORDS: &[&str] = &["and", "exists", "top", "bot", "not", "or", "forall", "o", "role"];

#[derive(Clone, Debug)]
enum SConcept {
    Top,
    Bot,
    Name(String, Location),
    And(Vec<SConcept>),
    Exists(String, Location, Box<SConcept>),
}

#[derive(Clone, Debug)]
struct SAtom {
    name: String,
    args: Vec<String>,
    loc: Location,
}

#[derive(Clone, Debug)]
enum Stmt {
    Gci { sub: SConcept, sup: SConcept },
    Ri { chain: Vec<(String, Location)>, sup: (String, Location) },
    Assert(SAtom),
    Rule { head: SAtom, body: Vec<(bool, SAtom)> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    None,
    TBox,
    ABox,
    Rules,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn loc(&self) -> Location {
        self.toks[self.pos].loc
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { loc: self.loc(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == kw)
    }

    fn name(&mut self, what: &str) -> Result<(String, Location)> {
        let loc = self.loc();
        match self.peek().clone() {
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => {
                self.bump();
                Ok((w, loc))
            }
            Tok::Ident(w) if w == "or" || w == "forall" => {
                Err(Error::Unsupported { loc, construct: w })
            }
            other => self.err(format!("expected {what}, found {}", describe(&other))),
        }
    }

    fn unsupported_here(&self) -> Option<Error> {
        match self.peek() {
            Tok::Ident(w) if w == "or" || w == "forall" || w == "not" => {
                Some(Error::Unsupported { loc: self.loc(), construct: w.clone() })
            }
            _ => None,
        }
    }

    fn concept(&mut self) -> Result<SConcept> {
        let mut parts = vec![self.unary()?];
        while self.is_kw("and") {
            self.bump();
            parts.push(self.unary()?);
        }
        if let Some(e) = self.unsupported_here() {
            return Err(e);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { SConcept::And(parts) })
    }

    fn unary(&mut self) -> Result<SConcept> {
        if let Some(e) = self.unsupported_here() {
            return Err(e);
        }
        match self.peek().clone() {
            Tok::Ident(w) if w == "top" => {
                self.bump();
                Ok(SConcept::Top)
            }
            Tok::Ident(w) if w == "bot" => {
                self.bump();
                Ok(SConcept::Bot)
            }
            Tok::Ident(w) if w == "exists" => {
                self.bump();
                let (role, loc) = self.name("role name")?;
                self.expect(Tok::Dot, "`.` after the role of `exists`")?;
                let filler = self.unary()?;
                Ok(SConcept::Exists(role, loc, Box::new(filler)))
            }
            Tok::LParen => {
                self.bump();
                let c = self.concept()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(c)
            }
            _ => {
                let (n, loc) = self.name("concept")?;
                Ok(SConcept::Name(n, loc))
            }
        }
    }

    fn tbox_stmt(&mut self) -> Result<Stmt> {
        if self.is_kw("role") {
            self.bump();
            let chain = self.role_chain()?;
            self.expect(Tok::Sub, "`<=`")?;
            let sup = self.name("role name")?;
            self.expect(Tok::Dot, "`.`")?;
            return Ok(Stmt::Ri { chain, sup });
        }
        let chain_ahead = matches!(self.peek(), Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()))
            && matches!(self.peek_at(1), Tok::Ident(w) if w == "o");
        if chain_ahead {
            let chain = self.role_chain()?;
            self.expect(Tok::Sub, "`<=`")?;
            let sup = self.name("role name")?;
            self.expect(Tok::Dot, "`.`")?;
            return Ok(Stmt::Ri { chain, sup });
        }
        let sub = self.concept()?;
        self.expect(Tok::Sub, "`<=`")?;
        let sup = if self.is_kw("not") {
            self.bump();
            let negated = self.concept()?;
            // C <= not D  is  C and D <= bot
            self.expect(Tok::Dot, "`.`")?;
            return Ok(Stmt::Gci { sub: SConcept::And(vec![sub, negated]), sup: SConcept::Bot });
        } else {
            self.concept()?
        };
        self.expect(Tok::Dot, "`.`")?;
        Ok(Stmt::Gci { sub, sup })
    }

    fn role_chain(&mut self) -> Result<Vec<(String, Location)>> {
        let mut chain = vec![self.name("role name")?];
        while self.is_kw("o") {
            self.bump();
            chain.push(self.name("role name")?);
        }
        Ok(chain)
    }

    fn atom(&mut self) -> Result<SAtom> {
        let loc = self.loc();
        // outside the TBox only `not` is reserved
        let name = match self.peek().clone() {
            Tok::Ident(w) if w != "not" => {
                self.bump();
                w
            }
            other => return self.err(format!("expected an atom, found {}", describe(&other))),
        };
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                match self.peek().clone() {
                    Tok::Ident(w) if w != "not" && !w.contains('^') => {
                        self.bump();
                        args.push(w);
                    }
                    other => {
                        return self.err(format!("expected a term, found {}", describe(&other)))
                    }
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                    continue;
                }
                self.expect(Tok::RParen, "`)` or `,`")?;
                break;
            }
        }
        Ok(SAtom { name, args, loc })
    }

    fn literals(&mut self) -> Result<Vec<(bool, SAtom)>> {
        let mut body = Vec::new();
        loop {
            let positive = if self.is_kw("not") {
                self.bump();
                false
            } else {
                true
            };
            body.push((positive, self.atom()?));
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(body);
            }
        }
    }

    fn rule_stmt(&mut self) -> Result<Stmt> {
        let head = self.atom()?;
        let body = if *self.peek() == Tok::If {
            self.bump();
            self.literals()?
        } else {
            Vec::new()
        };
        self.expect(Tok::Dot, "`.` at the end of the rule")?;
        Ok(Stmt::Rule { head, body })
    }

    fn statements(&mut self, start: Section) -> Result<Vec<(Stmt, Location)>> {
        let mut section = start;
        let mut out = Vec::new();
        loop {
            let loc = self.loc();
            match self.peek().clone() {
                Tok::Eof => return Ok(out),
                Tok::Section(s) => {
                    section = match s.as_str() {
                        "tbox" => Section::TBox,
                        "abox" => Section::ABox,
                        "rules" => Section::Rules,
                        _ => return self.err(format!("unknown section `%{s}`")),
                    };
                    self.bump();
                }
                _ => {
                    let stmt = match section {
                        Section::None => {
                            return self.err("statement before any %tbox, %abox or %rules section")
                        }
                        Section::TBox => self.tbox_stmt()?,
                        Section::ABox => {
                            let a = self.atom()?;
                            self.expect(Tok::Dot, "`.` at the end of the assertion")?;
                            Stmt::Assert(a)
                        }
                        Section::Rules => self.rule_stmt()?,
                    };
                    out.push((stmt, loc));
                }
            }
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(w) => format!("`{w}`"),
        Tok::Section(s) => format!("`%{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::If => "`:-`".into(),
        Tok::Sub => "`<=`".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn is_var_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase() || c == '_')
}

/// Splits `A^d` and `N^A` into their base name and kind.
fn split_derived(name: &str) -> (String, PredKind) {
    if let Some(base) = name.strip_suffix("^d") {
        (base.to_string(), PredKind::Doubled)
    } else if let Some(base) = name.strip_prefix("N^") {
        (base.to_string(), PredKind::Marker)
    } else {
        (name.to_string(), PredKind::Base)
    }
}

struct Builder<'s> {
    syms: &'s mut SymbolTable,
    allow_derived: bool,
}

impl Builder<'_> {
    fn pred(&mut self, name: &str, arity: usize, loc: Location) -> Result<Pred> {
        let (base, kind) = split_derived(name);
        if kind != PredKind::Base && !self.allow_derived {
            return Err(Error::Syntax {
                loc,
                msg: format!("`{name}` is a reserved derived predicate name"),
            });
        }
        if base.is_empty() || base.contains('^') {
            return Err(Error::Syntax { loc, msg: format!("malformed predicate name `{name}`") });
        }
        let id = self.syms.intern_pred(&base, arity);
        let have = self.syms.arity(id);
        if have != arity {
            return Err(Error::Syntax {
                loc,
                msg: format!("`{base}` used with arity {arity} but earlier with arity {have}"),
            });
        }
        Ok(Pred { id, kind })
    }

    fn atom(&mut self, a: &SAtom) -> Result<Atom> {
        let pred = self.pred(&a.name, a.args.len(), a.loc)?;
        let args = a
            .args
            .iter()
            .map(|t| {
                if is_var_name(t) {
                    Term::Var(self.syms.intern_var(t))
                } else {
                    Term::Const(self.syms.intern_const(t))
                }
            })
            .collect();
        Ok(Atom::new(pred, args))
    }

    fn rule(&mut self, head: &SAtom, body: &[(bool, SAtom)]) -> Result<Rule> {
        let h = self.atom(head)?;
        let mut lits = Vec::new();
        for (pos, a) in body {
            let atom = self.atom(a)?;
            lits.push(if *pos { Literal::Pos(atom) } else { Literal::Neg(atom) });
        }
        Ok(Rule::new(h, lits))
    }

    fn dl_name(&mut self, name: &str, arity: usize, loc: Location) -> Result<PredId> {
        let p = self.pred(name, arity, loc)?;
        if p.kind != PredKind::Base {
            return Err(Error::Syntax { loc, msg: format!("`{name}` cannot be used in an ontology") });
        }
        self.syms.set_dl(p.id);
        Ok(p.id)
    }

    fn concept(&mut self, c: &SConcept) -> Result<ConceptExpr> {
        Ok(match c {
            SConcept::Top => ConceptExpr::Top,
            SConcept::Bot => ConceptExpr::Bottom,
            SConcept::Name(n, loc) => ConceptExpr::Name(self.dl_name(n, 1, *loc)?),
            SConcept::And(parts) => {
                let mut v = Vec::new();
                for p in parts {
                    v.push(self.concept(p)?);
                }
                ConceptExpr::and(v)
            }
            SConcept::Exists(r, loc, f) => {
                let role = self.dl_name(r, 2, *loc)?;
                ConceptExpr::exists(role, self.concept(f)?)
            }
        })
    }
}

fn collect_roles(c: &SConcept, out: &mut BTreeSet<String>) {
    match c {
        SConcept::And(parts) => parts.iter().for_each(|p| collect_roles(p, out)),
        SConcept::Exists(r, _, f) => {
            out.insert(r.clone());
            collect_roles(f, out);
        }
        _ => {}
    }
}

/// Parses a hybrid knowledge base and validates DL-safety of its rules.
pub fn parse_kb(text: &str) -> Result<HybridKb> {
    let stmts = Parser::new(text)?.statements(Section::None)?;

    // Names used as binary relations anywhere; a bare `A <= B` between two
    // such names is a role inclusion.
    let mut binary = BTreeSet::new();
    for (s, _) in &stmts {
        match s {
            Stmt::Gci { sub, sup } => {
                collect_roles(sub, &mut binary);
                collect_roles(sup, &mut binary);
            }
            Stmt::Ri { chain, sup } => {
                binary.extend(chain.iter().map(|c| c.0.clone()));
                binary.insert(sup.0.clone());
            }
            Stmt::Assert(a) if a.args.len() == 2 => {
                binary.insert(a.name.clone());
            }
            Stmt::Rule { head, body } => {
                for a in std::iter::once(head).chain(body.iter().map(|b| &b.1)) {
                    if a.args.len() == 2 {
                        binary.insert(a.name.clone());
                    }
                }
            }
            _ => {}
        }
    }

    let mut syms = SymbolTable::new();
    let mut b = Builder { syms: &mut syms, allow_derived: false };
    let mut ontology = Ontology::default();
    let mut rules = Vec::new();
    let mut rule_locations = Vec::new();
    // Ontology first so DL flags are final before safety checks.
    for (s, loc) in &stmts {
        match s {
            Stmt::Gci { sub, sup } => {
                if let (SConcept::Name(a, la), SConcept::Name(c, lc)) = (sub, sup) {
                    if binary.contains(a) || binary.contains(c) {
                        let r = b.dl_name(a, 2, *la)?;
                        let s = b.dl_name(c, 2, *lc)?;
                        ontology.tbox.push(TBoxAxiom::Ri { chain: vec![r], sup: s });
                        continue;
                    }
                }
                let sub = b.concept(sub)?;
                let sup = b.concept(sup)?;
                ontology.tbox.push(TBoxAxiom::Gci { sub, sup });
            }
            Stmt::Ri { chain, sup } => {
                let mut ids = Vec::new();
                for (n, l) in chain {
                    ids.push(b.dl_name(n, 2, *l)?);
                }
                let s = b.dl_name(&sup.0, 2, sup.1)?;
                ontology.tbox.push(TBoxAxiom::Ri { chain: ids, sup: s });
            }
            Stmt::Assert(a) => {
                let p = b.dl_name(&a.name, a.args.len(), a.loc)?;
                for t in &a.args {
                    if is_var_name(t) && t.starts_with('_') {
                        return Err(Error::Syntax { loc: *loc, msg: "individual expected".into() });
                    }
                }
                let consts: Vec<_> = a.args.iter().map(|t| b.syms.intern_const(t)).collect();
                ontology.abox.push(match consts.as_slice() {
                    [x] => Assertion::Concept(p, *x),
                    [x, y] => Assertion::Role(p, *x, *y),
                    _ => {
                        return Err(Error::Syntax {
                            loc: a.loc,
                            msg: "assertions take one or two individuals".into(),
                        })
                    }
                });
            }
            Stmt::Rule { .. } => {}
        }
    }
    for (s, loc) in &stmts {
        if let Stmt::Rule { head, body } = s {
            for a in std::iter::once(head).chain(body.iter().map(|x| &x.1)) {
                if let Some(p) = b.syms.pred(&a.name) {
                    if b.syms.is_dl(p) && !(1..=2).contains(&a.args.len()) {
                        return Err(Error::Syntax {
                            loc: a.loc,
                            msg: format!("DL predicate `{}` needs arity 1 or 2", a.name),
                        });
                    }
                }
            }
            rules.push(b.rule(head, body)?);
            rule_locations.push(*loc);
        }
    }
    for (r, loc) in rules.iter().zip(&rule_locations) {
        validate_dl_safety(&syms, r, *loc)?;
    }
    Ok(HybridKb { symbols: syms, ontology, program: Program::new(rules), rule_locations })
}

/// Parses rules (with or without a leading `%rules`) into an existing symbol
/// table. Derived names `A^d` and `N^A` are accepted and no safety check is
/// made, so compiled programs read back.
pub fn parse_program(text: &str, syms: &mut SymbolTable) -> Result<Program> {
    let stmts = Parser::new(text)?.statements(Section::Rules)?;
    let mut b = Builder { syms, allow_derived: true };
    let mut rules = Vec::new();
    for (s, loc) in &stmts {
        match s {
            Stmt::Rule { head, body } => rules.push(b.rule(head, body)?),
            _ => return Err(Error::Syntax { loc: *loc, msg: "only rules are allowed here".into() }),
        }
    }
    Ok(Program::new(rules))
}

/// A conjunctive query `q(X1..Xn) :- body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub body: Vec<Literal>,
    /// Answer variables in order of first occurrence.
    pub vars: Vec<VarId>,
    pub warnings: Vec<String>,
}

impl Query {
    pub fn as_rule(&self) -> Rule {
        Rule::new(
            Atom::new(Pred::query(), self.vars.iter().map(|&v| Term::Var(v)).collect()),
            self.body.clone(),
        )
    }
}

/// Parses a query such as `p(X), not D(X), o(X)`. Unknown predicates are
/// interned as non-DL predicates and reported as warnings.
pub fn parse_query(text: &str, syms: &mut SymbolTable) -> Result<Query> {
    let mut p = Parser::new(text)?;
    let start = p.loc();
    let lits = p.literals()?;
    if *p.peek() == Tok::Dot {
        p.bump();
    }
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {} after the query", describe(p.peek())));
    }
    let mut warnings = Vec::new();
    for (_, a) in &lits {
        let (base, _) = split_derived(&a.name);
        if syms.pred(&base).is_none() {
            warnings.push(format!("unknown predicate `{}`; it has no rules and is false", a.name));
        }
    }
    let mut b = Builder { syms, allow_derived: true };
    let mut body = Vec::new();
    for (pos, a) in &lits {
        let atom = b.atom(a)?;
        body.push(if *pos { Literal::Pos(atom) } else { Literal::Neg(atom) });
    }
    let mut vars = Vec::new();
    for l in &body {
        for v in l.atom().vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    let q = Query { body, vars, warnings };
    validate_dl_safety(syms, &q.as_rule(), start)?;
    Ok(q)
}
