//! Top-down evaluation of compiled programs by tabled SLG resolution under
//! the well-founded semantics.

mod engine;

pub use engine::{DelayLit, Engine, Strategy, SubgoalId, DEFAULT_STEP_BUDGET};

use crate::error::Result;
use crate::logic::{GroundAtom, Literal, PredKind, Rule, Truth};
use crate::parser::Query;
use crate::symbols::ConstId;

/// Value of a ground literal over original predicates. `not A` is answered
/// through the doubled atom `A^d`.
pub fn query_literal(engine: &mut Engine, lit: &Literal) -> Result<Truth> {
    let g = lit.atom().to_ground().ok_or_else(|| crate::Error::NonGround(format!("{:?}", lit.atom())))?;
    match lit {
        Literal::Pos(_) => engine.value(&g),
        Literal::Neg(_) => Ok(engine.value(&falsity_atom(&g))?.negate()),
    }
}

/// The atom whose truth decides `not A`: `A^d` for plain atoms, `A` itself
/// for anything already derived.
fn falsity_atom(a: &GroundAtom) -> GroundAtom {
    if a.kind() == PredKind::Base {
        a.doubled()
    } else {
        a.clone()
    }
}

/// One answer of a conjunctive query.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct QueryAnswer {
    pub binding: Vec<ConstId>,
    pub value: Truth,
}

/// Answers a DL-safe conjunctive query: the query becomes the rule
/// `q(vars) :- body` with its negative literals doubled, and the answers of
/// `q` are returned sorted, each true or undefined.
pub fn answer_query(engine: &mut Engine, query: &Query) -> Result<Vec<QueryAnswer>> {
    let rule = query.as_rule();
    let body = rule
        .body
        .iter()
        .map(|l| match l {
            Literal::Neg(a) if a.pred.kind == PredKind::Base => Literal::Neg(a.with_kind(PredKind::Doubled)),
            other => other.clone(),
        })
        .collect();
    let rule = Rule::new(rule.head, body);
    engine.set_query_rule(&rule);
    let mut out: Vec<QueryAnswer> = engine
        .answers(&rule.head)?
        .into_iter()
        .map(|(g, value)| QueryAnswer { binding: g.args, value })
        .collect();
    out.sort();
    Ok(out)
}

/// `A` true while `A^d` is false: the knowledge base is MKNF-inconsistent.
pub fn inconsistency_probe(engine: &mut Engine, atom: &GroundAtom) -> Result<bool> {
    Ok(engine.value(atom)? == Truth::True && engine.value(&atom.doubled())? == Truth::False)
}
