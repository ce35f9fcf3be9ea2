//! Bottom-up reference semantics: the MKNF transforms, the Γ operators, the
//! alternating fixpoint (for a KB and for its doubled form), the
//! consistency test and unfounded sets.
//!
//! Everything here works on the ground instantiation and is meant as an
//! oracle, not as the fast path.

mod entail;
mod fixpoint;
mod unfounded;

pub use entail::{least_model, Closure, EntailmentContext, OntologyOracle, PositiveEntailment};
pub use fixpoint::{
    alternating_fixpoint, alternating_fixpoint_d, coherent_transform, coherent_transform_d,
    consistency_check, extract_model, gamma, gamma_d, gamma_prime, lfp_t, mknf_transform,
    model_from_trace, plain_wfs, FixpointTrace, Lfp, MknfConsistency, PositiveRule,
    StepProvenance, ThreeValuedModel,
};
pub use unfounded::{UnfoundedChecker, DEFAULT_UNFOUNDED_CAP};

use crate::error::Result;
use crate::kb::{ground_instantiation, ground_rules, known_atoms, HybridKb};
use crate::logic::{GroundAtom, Literal, PredKind, Program, Truth};
use crate::symbols::ConstId;
use crate::transform::{double_rules, CompiledKb};
use std::collections::BTreeSet;

pub type AtomSet = BTreeSet<GroundAtom>;

/// A ground rule split into head, positive and negative body.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundRule {
    pub head: GroundAtom,
    pub pos: Vec<GroundAtom>,
    pub neg: Vec<GroundAtom>,
}

impl GroundRule {
    /// The marked head `H1` when the body carries `not N^H1` for a doubled
    /// head `H1^d`.
    pub fn marked_head(&self) -> Option<GroundAtom> {
        if self.head.kind() != PredKind::Doubled {
            return None;
        }
        let base = self.head.with_kind(PredKind::Base);
        self.neg.contains(&base.marker()).then_some(base)
    }
}

/// A ground KB: rules, known atoms and the ontology side.
#[derive(Clone)]
pub struct GroundKb<'a> {
    pub rules: Vec<GroundRule>,
    pub ka: AtomSet,
    pub ctx: EntailmentContext<'a>,
    /// The rules are the doubled rules of a KB.
    pub doubled: bool,
}

fn split(program: &Program) -> Result<Vec<GroundRule>> {
    let mut out = Vec::with_capacity(program.len());
    for r in &program.rules {
        let g = |a: &crate::logic::Atom| {
            a.to_ground().ok_or_else(|| crate::Error::NonGround(format!("{a:?}")))
        };
        let mut rule = GroundRule { head: g(&r.head)?, pos: Vec::new(), neg: Vec::new() };
        for l in &r.body {
            match l {
                Literal::Pos(a) => rule.pos.push(g(a)?),
                Literal::Neg(a) => rule.neg.push(g(a)?),
            }
        }
        out.push(rule);
    }
    Ok(out)
}

impl<'a> GroundKb<'a> {
    /// A ground program under a given ontology side.
    pub fn from_program(program: &Program, ctx: EntailmentContext<'a>, doubled: bool) -> Result<Self> {
        Ok(GroundKb { rules: split(program)?, ka: known_atoms(program)?, ctx, doubled })
    }

    /// The ground instantiation of `kb` with its ontology.
    pub fn original(kb: &HybridKb, oracle: Option<&'a OntologyOracle>) -> Result<Self> {
        let ctx = oracle.map_or_else(EntailmentContext::empty, EntailmentContext::with);
        Self::from_program(&ground_instantiation(kb), ctx, false)
    }

    /// The doubled KB: the ground instantiation doubled, with O and its
    /// doubled copy.
    pub fn doubled(kb: &HybridKb, oracle: Option<&'a OntologyOracle>) -> Result<Self> {
        let ground = ground_instantiation(kb);
        let doubled = Program::new(double_rules(&ground, &kb.symbols).into_iter().map(|t| t.rule).collect());
        let ctx = oracle.map_or_else(EntailmentContext::empty, EntailmentContext::with);
        Self::from_program(&doubled, ctx, true)
    }

    /// A (possibly non-ground) plain program without ontology, grounded over
    /// its own constants.
    pub fn plain(program: &Program) -> Result<GroundKb<'static>> {
        let domain: Vec<ConstId> = program.constants().into_iter().collect();
        GroundKb::from_program(&ground_rules(&program.rules, &domain), EntailmentContext::empty(), false)
    }

    /// KA(K): the known atoms over plain predicates.
    pub fn ka_base(&self) -> AtomSet {
        self.ka.iter().filter(|a| a.kind() == PredKind::Base).cloned().collect()
    }
}

/// The model the compiled program assigns to the source atoms: the value of
/// each plain atom over a non-fresh predicate in the program's well-founded
/// model. An atom that is true while its doubled copy is false is also
/// listed as a conflict.
pub fn compiled_model(compiled: &CompiledKb) -> Result<ThreeValuedModel> {
    let g = GroundKb::plain(&compiled.program())?;
    let wfs = plain_wfs(&g);
    let source = compiled.original_preds();
    let mut m = ThreeValuedModel::default();
    for (a, v) in wfs.values() {
        if a.kind() != PredKind::Base || !source.contains(&a.pred.id) {
            continue;
        }
        match v {
            Truth::True => {
                if wfs.value(&a.doubled()) == Some(Truth::False) {
                    m.conflicts.insert(a.clone());
                }
                m.true_atoms.insert(a)
            }
            Truth::Undefined => m.undefined.insert(a),
            Truth::False => m.false_atoms.insert(a),
        };
    }
    Ok(m)
}
