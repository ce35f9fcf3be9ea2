//! EL+ concept expressions, axioms and assertions.

use crate::symbols::{ConstId, PredId, SymbolTable};
use std::fmt;

/// An EL+ concept. Build conjunctions and existentials through
/// [`ConceptExpr::and`] and [`ConceptExpr::exists`], which keep the
/// canonical shape: conjunctions are flat, sorted, duplicate free, have at
/// least two members, and `Bottom` never sits inside a larger expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConceptExpr {
    Top,
    Bottom,
    Name(PredId),
    And(Vec<ConceptExpr>),
    Exists(PredId, Box<ConceptExpr>),
}

impl ConceptExpr {
    pub fn and(parts: impl IntoIterator<Item = ConceptExpr>) -> ConceptExpr {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                ConceptExpr::Top => {}
                ConceptExpr::Bottom => return ConceptExpr::Bottom,
                ConceptExpr::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => ConceptExpr::Top,
            1 => flat.pop().unwrap(),
            _ => ConceptExpr::And(flat),
        }
    }

    pub fn exists(role: PredId, filler: ConceptExpr) -> ConceptExpr {
        match filler {
            ConceptExpr::Bottom => ConceptExpr::Bottom,
            f => ConceptExpr::Exists(role, Box::new(f)),
        }
    }

    /// `Top` or a concept name.
    pub fn is_basic(&self) -> bool {
        matches!(self, ConceptExpr::Top | ConceptExpr::Name(_))
    }

    pub fn display<'a>(&'a self, syms: &'a SymbolTable) -> impl fmt::Display + 'a {
        ExprDisplay { expr: self, syms, nested: false }
    }
}

struct ExprDisplay<'a> {
    expr: &'a ConceptExpr,
    syms: &'a SymbolTable,
    nested: bool,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            ConceptExpr::Top => write!(f, "top"),
            ConceptExpr::Bottom => write!(f, "bot"),
            ConceptExpr::Name(p) => write!(f, "{}", self.syms.pred_name(*p)),
            ConceptExpr::And(parts) => {
                if self.nested {
                    write!(f, "(")?;
                }
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " and ")?;
                    }
                    write!(f, "{}", ExprDisplay { expr: p, syms: self.syms, nested: true })?;
                }
                if self.nested {
                    write!(f, ")")?;
                }
                Ok(())
            }
            ConceptExpr::Exists(r, c) => write!(
                f,
                "exists {}.{}",
                self.syms.pred_name(*r),
                ExprDisplay { expr: c, syms: self.syms, nested: true }
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TBoxAxiom {
    Gci { sub: ConceptExpr, sup: ConceptExpr },
    /// `chain[0] o ... o chain[k-1] <= sup`, k >= 1.
    Ri { chain: Vec<PredId>, sup: PredId },
}

impl TBoxAxiom {
    pub fn display(&self, syms: &SymbolTable) -> String {
        match self {
            TBoxAxiom::Gci { sub, sup } => {
                format!("{} <= {}.", sub.display(syms), sup.display(syms))
            }
            TBoxAxiom::Ri { chain, sup } => {
                let names: Vec<_> = chain.iter().map(|r| syms.pred_name(*r)).collect();
                if chain.len() == 1 {
                    format!("role {} <= {}.", names[0], syms.pred_name(*sup))
                } else {
                    format!("{} <= {}.", names.join(" o "), syms.pred_name(*sup))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    Concept(PredId, ConstId),
    Role(PredId, ConstId, ConstId),
}

impl Assertion {
    pub fn display(&self, syms: &SymbolTable) -> String {
        match self {
            Assertion::Concept(c, a) => {
                format!("{}({}).", syms.pred_name(*c), syms.const_name(*a))
            }
            Assertion::Role(r, a, b) => format!(
                "{}({},{}).",
                syms.pred_name(*r),
                syms.const_name(*a),
                syms.const_name(*b)
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    pub tbox: Vec<TBoxAxiom>,
    pub abox: Vec<Assertion>,
}

impl Ontology {
    pub fn is_empty(&self) -> bool {
        self.tbox.is_empty() && self.abox.is_empty()
    }
}
