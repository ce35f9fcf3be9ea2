//! Objective knowledge: what the ontology together with a set of atoms
//! entails.

use super::AtomSet;
use crate::el::{
    classify, complete_tbox, instance_saturate_indexed, normalize, reduce_tbox, AxiomIndex,
    Concept, NormalizedTBox,
};
use crate::kb::HybridKb;
use crate::logic::{GroundAtom, Literal, Pred, PredKind, Rule, Term};
use crate::ontology::Assertion;
use crate::symbols::{ConstId, PredId, VarId};
use crate::transform::translate_ontology;
use std::collections::{BTreeSet, HashMap, HashSet};

/// How positive consequences of the ontology are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PositiveEntailment {
    /// Least model of the truth rules translated from the reduced TBox and
    /// the ABox.
    #[default]
    Translation,
    /// Instance saturation of the normalized TBox with individual nodes.
    Saturation,
}

/// The positive consequences of an ontology plus atoms.
#[derive(Clone, Debug, Default)]
pub struct Closure {
    pub inconsistent: bool,
    pub concepts: HashSet<(PredId, ConstId)>,
    pub roles: HashSet<(PredId, ConstId, ConstId)>,
}

impl Closure {
    pub fn entails(&self, pred: PredId, args: &[ConstId]) -> bool {
        match *args {
            [a] => self.concepts.contains(&(pred, a)),
            [a, b] => self.roles.contains(&(pred, a, b)),
            _ => false,
        }
    }
}

/// An EL+ ontology prepared for repeated entailment checks.
pub struct OntologyOracle {
    nt: NormalizedTBox,
    index: AxiomIndex,
    abox: Vec<Assertion>,
    individuals: Vec<ConstId>,
    dl: HashSet<PredId>,
    mode: PositiveEntailment,
    translated: Vec<Rule>,
}

impl OntologyOracle {
    pub fn new(kb: &HybridKb, mode: PositiveEntailment) -> Self {
        let mut syms = kb.symbols.clone();
        let nt = normalize(&kb.ontology.tbox, &mut syms);
        let maps = classify(&nt);
        let reduced = reduce_tbox(&complete_tbox(&nt, &maps));
        let translated = translate_ontology(&reduced, &kb.ontology.abox, &mut syms)
            .map(|rules| {
                rules
                    .into_iter()
                    .filter(|t| t.rule.head.pred.kind == PredKind::Base)
                    .map(|t| t.rule)
                    .collect()
            })
            .unwrap_or_default();
        OntologyOracle {
            index: AxiomIndex::new(&nt.axioms),
            nt,
            abox: kb.ontology.abox.clone(),
            individuals: kb.individuals().into_iter().collect(),
            dl: kb.symbols.preds().filter(|&p| kb.symbols.is_dl(p)).collect(),
            mode,
            translated,
        }
    }

    pub fn mode(&self) -> PositiveEntailment {
        self.mode
    }

    pub fn is_dl(&self, p: PredId) -> bool {
        self.dl.contains(&p)
    }

    fn assertions<'a>(&self, atoms: impl Iterator<Item = (PredId, &'a [ConstId])>) -> Vec<Assertion> {
        let mut out = self.abox.clone();
        for (p, args) in atoms {
            if !self.dl.contains(&p) {
                continue;
            }
            match *args {
                [a] => out.push(Assertion::Concept(p, a)),
                [a, b] => out.push(Assertion::Role(p, a, b)),
                _ => {}
            }
        }
        out
    }

    /// Consequences of the ontology together with the given DL atoms
    /// (non-DL atoms are ignored).
    pub fn closure<'a>(&self, atoms: impl Iterator<Item = (PredId, &'a [ConstId])>) -> Closure {
        let asserted = self.assertions(atoms);
        let g = instance_saturate_indexed(&self.index, &self.nt, &asserted, self.individuals.iter().copied());
        let inconsistent = g.inconsistency_witness().is_some()
            || g.classes.s.get(&Concept::Top).is_some_and(|s| s.contains(&Concept::Bottom));
        let mut c = Closure { inconsistent, ..Default::default() };
        match self.mode {
            PositiveEntailment::Saturation => {
                for (&a, s) in &g.individuals {
                    for d in s {
                        if let Concept::Named(p) = d {
                            c.concepts.insert((*p, a));
                        }
                    }
                }
                for (&r, pairs) in &g.roles {
                    for &(a, b) in pairs {
                        c.roles.insert((r, a, b));
                    }
                }
            }
            PositiveEntailment::Translation => {
                let facts: Vec<GroundAtom> = asserted
                    .iter()
                    .map(|a| match *a {
                        Assertion::Concept(p, x) => GroundAtom::new(Pred::base(p), vec![x]),
                        Assertion::Role(p, x, y) => GroundAtom::new(Pred::base(p), vec![x, y]),
                    })
                    .collect();
                for g in least_model(&self.translated, facts, &self.individuals) {
                    match g.args.as_slice() {
                        [a] => {
                            c.concepts.insert((g.pred.id, *a));
                        }
                        [a, b] => {
                            c.roles.insert((g.pred.id, *a, *b));
                        }
                        _ => {}
                    }
                }
            }
        }
        c
    }
}

/// The ontology side used by the D operator.
#[derive(Clone, Copy)]
pub struct EntailmentContext<'a> {
    oracle: Option<&'a OntologyOracle>,
}

fn base_atoms(s: &AtomSet, kind: PredKind) -> impl Iterator<Item = (PredId, &[ConstId])> {
    s.iter().filter(move |a| a.pred.kind == kind).map(|a| (a.pred.id, a.args.as_slice()))
}

impl<'a> EntailmentContext<'a> {
    pub fn empty() -> Self {
        EntailmentContext { oracle: None }
    }

    pub fn with(oracle: &'a OntologyOracle) -> Self {
        EntailmentContext { oracle: Some(oracle) }
    }

    pub fn oracle(&self) -> Option<&'a OntologyOracle> {
        self.oracle
    }

    /// Atoms of `universe` entailed by OB with S. Plain atoms are checked
    /// against O and the plain atoms of S, doubled atoms against the
    /// doubled ontology and the doubled atoms of S. Marker atoms are only
    /// entailed when they are in S.
    pub fn d(&self, s: &AtomSet, universe: &AtomSet) -> AtomSet {
        let Some(o) = self.oracle else {
            return s.intersection(universe).cloned().collect();
        };
        let need = |k: PredKind| universe.iter().any(|a| a.pred.kind == k);
        let plain = need(PredKind::Base).then(|| o.closure(base_atoms(s, PredKind::Base)));
        let doubled = need(PredKind::Doubled).then(|| o.closure(base_atoms(s, PredKind::Doubled)));
        universe
            .iter()
            .filter(|x| {
                if s.contains(*x) {
                    return true;
                }
                let cl = match x.pred.kind {
                    PredKind::Base => plain.as_ref(),
                    PredKind::Doubled => doubled.as_ref(),
                    _ => None,
                };
                cl.is_some_and(|c| {
                    c.inconsistent || (o.is_dl(x.pred.id) && c.entails(x.pred.id, &x.args))
                })
            })
            .cloned()
            .collect()
    }

    /// Whether OB with S entails the atom (plain atoms against O, doubled
    /// atoms against the doubled ontology).
    pub fn entails(&self, s: &AtomSet, atom: &GroundAtom) -> bool {
        let universe = BTreeSet::from([atom.clone()]);
        !self.d(s, &universe).is_empty()
    }

    /// OB with S entails the classical negation of the plain atom `h`, i.e.
    /// O together with the plain atoms of S and `h` is inconsistent.
    pub fn entails_negation(&self, s: &AtomSet, h: &GroundAtom) -> bool {
        let Some(o) = self.oracle else { return false };
        let extra = (h.pred.id, h.args.as_slice());
        o.closure(base_atoms(s, PredKind::Base).chain(std::iter::once(extra))).inconsistent
    }

    /// O (or its doubled copy) with the matching atoms of S is inconsistent.
    pub fn inconsistent(&self, s: &AtomSet, kind: PredKind) -> bool {
        self.oracle.is_some_and(|o| o.closure(base_atoms(s, kind)).inconsistent)
    }
}

/// Least model of positive, possibly non-ground rules plus facts. Head
/// variables that do not occur in the body range over `domain`.
pub fn least_model(rules: &[Rule], facts: Vec<GroundAtom>, domain: &[ConstId]) -> AtomSet {
    let mut model: AtomSet = facts.into_iter().collect();
    let mut by_pred: HashMap<Pred, Vec<GroundAtom>> = HashMap::new();
    for f in &model {
        by_pred.entry(f.pred).or_default().push(f.clone());
    }
    loop {
        let mut new = Vec::new();
        for r in rules {
            let body: Vec<_> = r.body.iter().filter_map(|l| match l {
                Literal::Pos(a) => Some(a),
                Literal::Neg(_) => None,
            }).collect();
            let mut bindings: Vec<HashMap<VarId, ConstId>> = vec![HashMap::new()];
            for atom in body {
                let mut next = Vec::new();
                let candidates = by_pred.get(&atom.pred).map(Vec::as_slice).unwrap_or(&[]);
                for b in &bindings {
                    'facts: for f in candidates {
                        let mut b2 = b.clone();
                        for (t, &c) in atom.args.iter().zip(&f.args) {
                            match t {
                                Term::Const(k) if *k != c => continue 'facts,
                                Term::Const(_) => {}
                                Term::Var(v) => match b2.get(v) {
                                    Some(&bound) if bound != c => continue 'facts,
                                    Some(_) => {}
                                    None => {
                                        b2.insert(*v, c);
                                    }
                                },
                            }
                        }
                        next.push(b2);
                    }
                }
                bindings = next;
            }
            for b in bindings {
                let free: Vec<VarId> = r.head.vars().filter(|v| !b.contains_key(v)).collect();
                let mut combos = vec![b];
                for v in free {
                    combos = combos
                        .into_iter()
                        .flat_map(|b| {
                            domain.iter().map(move |&c| {
                                let mut b = b.clone();
                                b.insert(v, c);
                                b
                            })
                        })
                        .collect();
                }
                for b in combos {
                    let args = r
                        .head
                        .args
                        .iter()
                        .map(|t| match t {
                            Term::Const(c) => *c,
                            Term::Var(v) => b[v],
                        })
                        .collect();
                    let g = GroundAtom::new(r.head.pred, args);
                    if !model.contains(&g) {
                        new.push(g);
                    }
                }
            }
        }
        if new.is_empty() {
            return model;
        }
        for g in new {
            if model.insert(g.clone()) {
                by_pred.entry(g.pred).or_default().push(g);
            }
        }
    }
}
