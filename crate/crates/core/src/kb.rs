//! Hybrid knowledge bases, grounding, known atoms and DL-safety.

use crate::error::{Error, Location, Result};
use crate::logic::{Atom, GroundAtom, Literal, PredKind, Program, Rule, Term};
use crate::ontology::{Assertion, Ontology};
use crate::symbols::{ConstId, SymbolTable, VarId};
use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Debug, Default)]
pub struct HybridKb {
    pub symbols: SymbolTable,
    pub ontology: Ontology,
    pub program: Program,
    /// Source location of each rule, parallel to `program.rules`.
    pub rule_locations: Vec<Location>,
}

impl HybridKb {
    /// Individuals occurring anywhere in the KB, ontology or rules.
    pub fn individuals(&self) -> BTreeSet<ConstId> {
        let mut out = self.program.constants();
        for a in &self.ontology.abox {
            match *a {
                Assertion::Concept(_, x) => {
                    out.insert(x);
                }
                Assertion::Role(_, x, y) => {
                    out.insert(x);
                    out.insert(y);
                }
            }
        }
        out
    }

    /// Whether an atom of this KB is a DL-atom.
    pub fn is_dl_atom(&self, atom: &Atom) -> bool {
        is_dl_atom(&self.symbols, atom)
    }
}

pub fn is_dl_atom(syms: &SymbolTable, atom: &Atom) -> bool {
    atom.pred.kind == PredKind::Base && syms.is_dl(atom.pred.id)
}

/// Instantiates every rule over all individuals of the KB.
pub fn ground_instantiation(kb: &HybridKb) -> Program {
    let domain: Vec<ConstId> = kb.individuals().into_iter().collect();
    ground_rules(&kb.program.rules, &domain)
}

/// Instantiates each rule with every total mapping of its variables into
/// `domain`. Ground rules pass through unchanged.
pub fn ground_rules(rules: &[Rule], domain: &[ConstId]) -> Program {
    let mut out = Vec::new();
    for rule in rules {
        let vars = rule.vars();
        if vars.is_empty() {
            out.push(rule.clone());
            continue;
        }
        if domain.is_empty() {
            continue;
        }
        let mut idx = vec![0usize; vars.len()];
        loop {
            let binding: HashMap<VarId, ConstId> =
                vars.iter().zip(&idx).map(|(&v, &i)| (v, domain[i])).collect();
            out.push(substitute_rule(rule, &binding));
            let mut k = 0;
            loop {
                idx[k] += 1;
                if idx[k] < domain.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
                if k == vars.len() {
                    break;
                }
            }
            if k == vars.len() {
                break;
            }
        }
    }
    Program::new(out)
}

pub fn substitute_atom(atom: &Atom, binding: &HashMap<VarId, ConstId>) -> Atom {
    Atom::new(
        atom.pred,
        atom.args
            .iter()
            .map(|t| match t {
                Term::Var(v) => binding.get(v).map_or(*t, |&c| Term::Const(c)),
                Term::Const(_) => *t,
            })
            .collect(),
    )
}

pub fn substitute_rule(rule: &Rule, binding: &HashMap<VarId, ConstId>) -> Rule {
    Rule::new(
        substitute_atom(&rule.head, binding),
        rule.body
            .iter()
            .map(|l| match l {
                Literal::Pos(a) => Literal::Pos(substitute_atom(a, binding)),
                Literal::Neg(a) => Literal::Neg(substitute_atom(a, binding)),
            })
            .collect(),
    )
}

/// KA: every positive ground literal of the program plus the atom under each
/// negative literal.
pub fn known_atoms(program: &Program) -> Result<BTreeSet<GroundAtom>> {
    let mut out = BTreeSet::new();
    for rule in &program.rules {
        for a in std::iter::once(&rule.head).chain(rule.body.iter().map(Literal::atom)) {
            match a.to_ground() {
                Some(g) => {
                    out.insert(g);
                }
                None => return Err(Error::NonGround(format!("{:?}", a))),
            }
        }
    }
    Ok(out)
}

/// Returns the variables that occur in no positive non-DL body atom.
pub fn unsafe_vars(syms: &SymbolTable, rule: &Rule) -> Vec<VarId> {
    let mut covered = BTreeSet::new();
    for a in rule.positive() {
        if !is_dl_atom(syms, a) {
            covered.extend(a.vars());
        }
    }
    rule.vars().into_iter().filter(|v| !covered.contains(v)).collect()
}

/// DL-safety: every variable occurs in a positive non-DL body atom.
pub fn validate_dl_safety(syms: &SymbolTable, rule: &Rule, loc: Location) -> Result<()> {
    let bad = unsafe_vars(syms, rule);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Unsafe { loc, vars: bad.into_iter().map(|v| syms.var_name(v)).collect() })
    }
}
