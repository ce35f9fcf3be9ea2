use super::{AtomSet, EntailmentContext, GroundKb, GroundRule};
use crate::logic::{GroundAtom, PredKind, Truth};
use crate::symbols::SymbolTable;
use std::collections::{BTreeMap, HashMap};

/// A rule of a transformed (positive) KB, with the index of the rule it
/// came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveRule {
    pub source: usize,
    pub head: GroundAtom,
    pub pos: Vec<GroundAtom>,
}

fn positive(i: usize, r: &GroundRule) -> PositiveRule {
    PositiveRule { source: i, head: r.head.clone(), pos: r.pos.clone() }
}

fn avoids(r: &GroundRule, s: &AtomSet) -> bool {
    r.neg.iter().all(|b| !s.contains(b))
}

/// K/S: drop rules with a negated atom in S, strip the negative bodies.
pub fn mknf_transform(kb: &GroundKb, s: &AtomSet) -> Vec<PositiveRule> {
    kb.rules.iter().enumerate().filter(|(_, r)| avoids(r, s)).map(|(i, r)| positive(i, r)).collect()
}

/// Cache for `OB_{O,S} |= not H` within one transform.
struct NegCache<'c, 'a> {
    ctx: &'c EntailmentContext<'a>,
    s: &'c AtomSet,
    seen: HashMap<GroundAtom, bool>,
}

impl NegCache<'_, '_> {
    fn entailed(&mut self, h: &GroundAtom) -> bool {
        if self.ctx.oracle().is_none() {
            return false;
        }
        if let Some(&v) = self.seen.get(h) {
            return v;
        }
        let v = self.ctx.entails_negation(self.s, h);
        self.seen.insert(h.clone(), v);
        v
    }
}

/// K//S: as K/S, also dropping every rule whose head has its classical
/// negation entailed by O with S.
pub fn coherent_transform(kb: &GroundKb, s: &AtomSet) -> Vec<PositiveRule> {
    let mut neg = NegCache { ctx: &kb.ctx, s, seen: HashMap::new() };
    kb.rules
        .iter()
        .enumerate()
        .filter(|(_, r)| avoids(r, s) && !neg.entailed(&r.head))
        .map(|(i, r)| positive(i, r))
        .collect()
}

/// The doubled coherent transform: the classical-negation drop applies to
/// marked rules only, testing the head's plain version against O.
pub fn coherent_transform_d(kb: &GroundKb, s: &AtomSet) -> Vec<PositiveRule> {
    let mut neg = NegCache { ctx: &kb.ctx, s, seen: HashMap::new() };
    kb.rules
        .iter()
        .enumerate()
        .filter(|(_, r)| avoids(r, s) && !r.marked_head().is_some_and(|h| neg.entailed(&h)))
        .map(|(i, r)| positive(i, r))
        .collect()
}

/// A least fixpoint with the rules that fired and the atoms first
/// obtained from the ontology.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lfp {
    pub atoms: AtomSet,
    pub fired: Vec<usize>,
    pub entailed: AtomSet,
}

/// Least fixpoint of T = R ∪ D from the empty set; D ranges over `universe`.
pub fn lfp_t(rules: &[PositiveRule], ctx: &EntailmentContext, universe: &AtomSet) -> Lfp {
    let mut out = Lfp::default();
    let mut fired = vec![false; rules.len()];
    loop {
        // close under R
        loop {
            let mut changed = false;
            for (k, r) in rules.iter().enumerate() {
                if !fired[k] && r.pos.iter().all(|a| out.atoms.contains(a)) {
                    fired[k] = true;
                    out.fired.push(r.source);
                    changed |= out.atoms.insert(r.head.clone());
                }
            }
            if !changed {
                break;
            }
        }
        let d = ctx.d(&out.atoms, universe);
        let before = out.atoms.len();
        for a in d {
            if !out.atoms.contains(&a) {
                out.entailed.insert(a.clone());
                out.atoms.insert(a);
            }
        }
        if out.atoms.len() == before {
            return out;
        }
    }
}

pub fn gamma(kb: &GroundKb, s: &AtomSet) -> AtomSet {
    lfp_t(&mknf_transform(kb, s), &kb.ctx, &kb.ka).atoms
}

pub fn gamma_prime(kb: &GroundKb, s: &AtomSet) -> AtomSet {
    lfp_t(&coherent_transform(kb, s), &kb.ctx, &kb.ka).atoms
}

pub fn gamma_d(kb: &GroundKb, s: &AtomSet) -> AtomSet {
    lfp_t(&coherent_transform_d(kb, s), &kb.ctx, &kb.ka).atoms
}

/// What produced one set of an iteration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepProvenance {
    /// Source rule indices, in firing order.
    pub fired: Vec<usize>,
    /// Atoms obtained from the ontology rather than a rule.
    pub entailed: AtomSet,
}

/// The sequences P_0.. and N_0.. of an alternating fixpoint computation.
/// The last entries are P_ω and N_ω.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FixpointTrace {
    pub p: Vec<AtomSet>,
    pub n: Vec<AtomSet>,
    /// Provenance of P_{i+1} and N_{i+1} at index i.
    pub p_steps: Vec<StepProvenance>,
    pub n_steps: Vec<StepProvenance>,
    pub doubled: bool,
}

impl FixpointTrace {
    pub fn p_omega(&self) -> &AtomSet {
        self.p.last().expect("trace has P_0")
    }

    pub fn n_omega(&self) -> &AtomSet {
        self.n.last().expect("trace has N_0")
    }

    /// Human-readable dump, one line per set.
    pub fn render(&self, syms: &SymbolTable) -> String {
        let show = |s: &AtomSet| {
            let v: Vec<String> = s.iter().map(|a| a.display(syms)).collect();
            format!("{{{}}}", v.join(", "))
        };
        let d = if self.doubled { "^d" } else { "" };
        let mut out = String::new();
        for i in 0..self.p.len() {
            out.push_str(&format!("P{d}_{i} = {}\n", show(&self.p[i])));
            out.push_str(&format!("N{d}_{i} = {}\n", show(&self.n[i])));
            if i > 0 {
                let ent = &self.p_steps[i - 1].entailed;
                if !ent.is_empty() {
                    out.push_str(&format!("  P{d}_{i} from the ontology: {}\n", show(ent)));
                }
                let ent = &self.n_steps[i - 1].entailed;
                if !ent.is_empty() {
                    out.push_str(&format!("  N{d}_{i} from the ontology: {}\n", show(ent)));
                }
            }
        }
        out
    }
}

fn iterate(
    kb: &GroundKb,
    up: impl Fn(&AtomSet) -> Vec<PositiveRule>,
    down: impl Fn(&AtomSet) -> Vec<PositiveRule>,
    doubled: bool,
) -> FixpointTrace {
    let mut t = FixpointTrace { p: vec![AtomSet::new()], n: vec![kb.ka.clone()], doubled, ..Default::default() };
    loop {
        let (pn, nn) = (t.p_omega().clone(), t.n_omega().clone());
        let p = lfp_t(&up(&nn), &kb.ctx, &kb.ka);
        let n = lfp_t(&down(&pn), &kb.ctx, &kb.ka);
        let done = p.atoms == pn && n.atoms == nn;
        if !done {
            t.p.push(p.atoms);
            t.n.push(n.atoms);
            t.p_steps.push(StepProvenance { fired: p.fired, entailed: p.entailed });
            t.n_steps.push(StepProvenance { fired: n.fired, entailed: n.entailed });
        }
        if done {
            return t;
        }
    }
}

/// P_{n+1} = Γ(N_n), N_{n+1} = Γ'(P_n) from P_0 = ∅, N_0 = KA.
pub fn alternating_fixpoint(kb: &GroundKb) -> FixpointTrace {
    iterate(kb, |s| mknf_transform(kb, s), |s| coherent_transform(kb, s), false)
}

/// The doubled iteration, Γ_{K^d} for both sequences.
pub fn alternating_fixpoint_d(kb: &GroundKb) -> FixpointTrace {
    iterate(kb, |s| coherent_transform_d(kb, s), |s| coherent_transform_d(kb, s), true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MknfConsistency {
    Consistent,
    /// Γ'(P_ω) ⊂ Γ(P_ω)
    InconsistentAtP,
    /// Γ'(N_ω) ⊂ Γ(N_ω)
    InconsistentAtN,
    OntologyInconsistent,
}

impl MknfConsistency {
    pub fn is_consistent(self) -> bool {
        self == MknfConsistency::Consistent
    }
}

fn strict_subset(a: &AtomSet, b: &AtomSet) -> bool {
    a.len() < b.len() && a.is_subset(b)
}

/// The MKNF-consistency test on the trace of [`alternating_fixpoint`].
pub fn consistency_check(kb: &GroundKb, trace: &FixpointTrace) -> MknfConsistency {
    if kb.ctx.inconsistent(&AtomSet::new(), PredKind::Base) {
        return MknfConsistency::OntologyInconsistent;
    }
    let p = trace.p_omega();
    if strict_subset(&gamma_prime(kb, p), &gamma(kb, p)) {
        return MknfConsistency::InconsistentAtP;
    }
    let n = trace.n_omega();
    if strict_subset(&gamma_prime(kb, n), &gamma(kb, n)) {
        return MknfConsistency::InconsistentAtN;
    }
    MknfConsistency::Consistent
}

/// A three-valued partition of an atom universe.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThreeValuedModel {
    pub true_atoms: AtomSet,
    pub undefined: AtomSet,
    pub false_atoms: AtomSet,
    /// Atoms found both true and false; they are listed as true.
    pub conflicts: AtomSet,
}

impl ThreeValuedModel {
    pub fn value(&self, a: &GroundAtom) -> Option<Truth> {
        if self.true_atoms.contains(a) {
            Some(Truth::True)
        } else if self.false_atoms.contains(a) {
            Some(Truth::False)
        } else if self.undefined.contains(a) {
            Some(Truth::Undefined)
        } else {
            None
        }
    }

    /// No atom is both true and false.
    pub fn mknf_consistent(&self) -> bool {
        self.conflicts.is_empty()
    }

    pub fn values(&self) -> BTreeMap<GroundAtom, Truth> {
        let mut out = BTreeMap::new();
        for (set, v) in [
            (&self.true_atoms, Truth::True),
            (&self.undefined, Truth::Undefined),
            (&self.false_atoms, Truth::False),
        ] {
            out.extend(set.iter().map(|a| (a.clone(), v)));
        }
        out
    }

    fn classify(universe: impl Iterator<Item = GroundAtom>, is_true: impl Fn(&GroundAtom) -> bool, is_false: impl Fn(&GroundAtom) -> bool) -> Self {
        let mut m = ThreeValuedModel::default();
        for a in universe {
            let (t, f) = (is_true(&a), is_false(&a));
            if t && f {
                m.conflicts.insert(a.clone());
            }
            if t {
                m.true_atoms.insert(a);
            } else if f {
                m.false_atoms.insert(a);
            } else {
                m.undefined.insert(a);
            }
        }
        m
    }
}

/// The model of a doubled trace over the plain atoms of `universe`: true iff
/// in P^d_ω, false iff the doubled atom is not in N^d_ω.
pub fn extract_model(trace: &FixpointTrace, universe: &AtomSet) -> ThreeValuedModel {
    ThreeValuedModel::classify(
        universe.iter().filter(|a| a.kind() == PredKind::Base).cloned(),
        |a| trace.p_omega().contains(a),
        |a| !trace.n_omega().contains(&a.doubled()),
    )
}

/// The model of an undoubled trace: true iff in P_ω, false iff not in N_ω.
pub fn model_from_trace(trace: &FixpointTrace, universe: &AtomSet) -> ThreeValuedModel {
    ThreeValuedModel::classify(
        universe.iter().cloned(),
        |a| trace.p_omega().contains(a),
        |a| !trace.n_omega().contains(a),
    )
}

/// Textbook well-founded model of a program without ontology, over its
/// known atoms.
pub fn plain_wfs(kb: &GroundKb) -> ThreeValuedModel {
    model_from_trace(&alternating_fixpoint(kb), &kb.ka)
}
