//! Atoms, literals, rules and programs.

use crate::symbols::{ConstId, PredId, SymbolTable, VarId};
use std::collections::BTreeSet;
use std::fmt;

/// Which copy of a base predicate an atom talks about.
///
/// Doubling introduces, for every predicate `A`, a non-falsity copy `A^d` and
/// a classical-negation marker `NA`. Both are derived from the base id so no
/// new names are interned for them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredKind {
    Base,
    Doubled,
    Marker,
    /// Head of an installed query rule.
    Query,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pred {
    pub id: PredId,
    pub kind: PredKind,
}

impl Pred {
    pub fn base(id: PredId) -> Self {
        Pred { id, kind: PredKind::Base }
    }
    pub fn doubled(id: PredId) -> Self {
        Pred { id, kind: PredKind::Doubled }
    }
    pub fn marker(id: PredId) -> Self {
        Pred { id, kind: PredKind::Marker }
    }
    pub fn query() -> Self {
        Pred { id: PredId(u32::MAX), kind: PredKind::Query }
    }
    pub fn with_kind(self, kind: PredKind) -> Self {
        Pred { id: self.id, kind }
    }

    pub fn name(&self, syms: &SymbolTable) -> String {
        match self.kind {
            PredKind::Base => syms.pred_name(self.id).to_string(),
            PredKind::Doubled => format!("{}^d", syms.pred_name(self.id)),
            PredKind::Marker => format!("N^{}", syms.pred_name(self.id)),
            PredKind::Query => "q".to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(VarId),
    Const(ConstId),
}

impl Term {
    pub fn as_const(&self) -> Option<ConstId> {
        match self {
            Term::Const(c) => Some(*c),
            Term::Var(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Pred,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: Pred, args: Vec<Term>) -> Self {
        Atom { pred, args }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Const(_)))
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(*v),
            Term::Const(_) => None,
        })
    }

    pub fn to_ground(&self) -> Option<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(Term::as_const)
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom { pred: self.pred, args })
    }

    pub fn with_kind(&self, kind: PredKind) -> Atom {
        Atom { pred: self.pred.with_kind(kind), args: self.args.clone() }
    }

    pub fn display<'a>(&'a self, syms: &'a SymbolTable) -> impl fmt::Display + 'a {
        AtomDisplay { atom: self, syms }
    }
}

struct AtomDisplay<'a> {
    atom: &'a Atom,
    syms: &'a SymbolTable,
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.atom.pred.name(self.syms))?;
        if self.atom.args.is_empty() {
            return Ok(());
        }
        write!(f, "(")?;
        for (i, t) in self.atom.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match t {
                Term::Var(v) => write!(f, "{}", self.syms.var_name(*v))?,
                Term::Const(c) => write!(f, "{}", self.syms.const_name(*c))?,
            }
        }
        write!(f, ")")
    }
}

/// A variable-free atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub pred: Pred,
    pub args: Vec<ConstId>,
}

impl GroundAtom {
    pub fn new(pred: Pred, args: Vec<ConstId>) -> Self {
        GroundAtom { pred, args }
    }

    pub fn to_atom(&self) -> Atom {
        Atom::new(self.pred, self.args.iter().map(|&c| Term::Const(c)).collect())
    }

    pub fn with_kind(&self, kind: PredKind) -> GroundAtom {
        GroundAtom { pred: self.pred.with_kind(kind), args: self.args.clone() }
    }

    pub fn doubled(&self) -> GroundAtom {
        self.with_kind(PredKind::Doubled)
    }

    pub fn marker(&self) -> GroundAtom {
        self.with_kind(PredKind::Marker)
    }

    pub fn kind(&self) -> PredKind {
        self.pred.kind
    }

    pub fn display(&self, syms: &SymbolTable) -> String {
        self.to_atom().display(syms).to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Pos(Atom),
    Neg(Atom),
}

impl Literal {
    pub fn atom(&self) -> &Atom {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a,
        }
    }

    pub fn atom_mut(&mut self) -> &mut Atom {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a,
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Literal::Pos(_))
    }

    pub fn display<'a>(&'a self, syms: &'a SymbolTable) -> impl fmt::Display + 'a {
        LitDisplay { lit: self, syms }
    }
}

struct LitDisplay<'a> {
    lit: &'a Literal,
    syms: &'a SymbolTable,
}

impl fmt::Display for LitDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lit {
            Literal::Pos(a) => write!(f, "{}", a.display(self.syms)),
            Literal::Neg(a) => write!(f, "not {}", a.display(self.syms)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn new(head: Atom, body: Vec<Literal>) -> Self {
        Rule { head, body }
    }

    pub fn fact(head: Atom) -> Self {
        Rule { head, body: Vec::new() }
    }

    pub fn positive(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter_map(|l| match l {
            Literal::Pos(a) => Some(a),
            Literal::Neg(_) => None,
        })
    }

    pub fn negative(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter_map(|l| match l {
            Literal::Neg(a) => Some(a),
            Literal::Pos(_) => None,
        })
    }

    /// Variables in order of first occurrence (head first).
    pub fn vars(&self) -> Vec<VarId> {
        let mut seen = Vec::new();
        let atoms = std::iter::once(&self.head).chain(self.body.iter().map(Literal::atom));
        for a in atoms {
            for v in a.vars() {
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
        }
        seen
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground() && self.body.iter().all(|l| l.atom().is_ground())
    }

    pub fn display<'a>(&'a self, syms: &'a SymbolTable) -> impl fmt::Display + 'a {
        RuleDisplay { rule: self, syms }
    }
}

struct RuleDisplay<'a> {
    rule: &'a Rule,
    syms: &'a SymbolTable,
}

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule.head.display(self.syms))?;
        if !self.rule.body.is_empty() {
            write!(f, " :- ")?;
            for (i, l) in self.rule.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", l.display(self.syms))?;
            }
        }
        write!(f, ".")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.rules.iter().all(Rule::is_ground)
    }

    /// Constants mentioned anywhere in the program.
    pub fn constants(&self) -> BTreeSet<ConstId> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            for a in std::iter::once(&r.head).chain(r.body.iter().map(Literal::atom)) {
                out.extend(a.args.iter().filter_map(Term::as_const));
            }
        }
        out
    }
}

/// Three-valued truth, ordered false < undefined < true.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Truth {
    False,
    Undefined,
    True,
}

impl Truth {
    pub fn negate(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Undefined => Truth::Undefined,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Undefined => "undefined",
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
