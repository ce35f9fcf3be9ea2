use super::{AtomSet, Closure, GroundKb};
use crate::error::{Error, Result};
use crate::logic::{GroundAtom, PredKind};
use std::collections::HashMap;

pub const DEFAULT_UNFOUNDED_CAP: usize = 14;

/// Unfounded sets by brute force over subsets of KA. Minimal dependencies
/// are computed once per KB since they depend on neither (T, F) nor U.
pub struct UnfoundedChecker<'k, 'a> {
    kb: &'k GroundKb<'a>,
    atoms: Vec<GroundAtom>,
    /// For each atom of KA, the consistent minimal sets it depends on, for
    /// O and (doubled KBs) for the doubled copy.
    deps: HashMap<GroundAtom, Vec<AtomSet>>,
}

/// Subsets of `cands` (as bitmasks) with their closures, for one side.
struct Side {
    kind: PredKind,
    cands: Vec<GroundAtom>,
    closures: Vec<Closure>,
}

impl Side {
    fn new(kb: &GroundKb, kind: PredKind) -> Self {
        let o = kb.ctx.oracle().expect("side needs an ontology");
        let cands: Vec<GroundAtom> =
            kb.ka.iter().filter(|a| a.kind() == kind && o.is_dl(a.pred.id)).cloned().collect();
        let closures = (0..1usize << cands.len())
            .map(|mask| {
                let set = cands.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1);
                o.closure(set.map(|(_, a)| (a.pred.id, a.args.as_slice())))
            })
            .collect();
        Side { kind, cands, closures }
    }

    /// Minimal consistent S with OB_{O',S} |= h, S drawn from the
    /// candidates plus `h` itself when `allowed`.
    fn deps(&self, h: &GroundAtom, allowed: bool) -> Vec<AtomSet> {
        let own = self.cands.iter().position(|c| c == h);
        let entails = |mask: usize| {
            let c = &self.closures[mask];
            c.inconsistent
                || own.is_some_and(|i| mask >> i & 1 == 1)
                || (h.kind() == self.kind && c.entails(h.pred.id, &h.args))
        };
        let mut out: Vec<usize> = Vec::new();
        for mask in 0..self.closures.len() {
            if self.closures[mask].inconsistent || !entails(mask) {
                continue;
            }
            if (0..self.cands.len()).any(|i| mask >> i & 1 == 1 && entails(mask & !(1 << i))) {
                continue;
            }
            out.push(mask);
        }
        let mut sets: Vec<AtomSet> = out
            .into_iter()
            .map(|m| self.cands.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, a)| a.clone()).collect())
            .collect();
        // h outside the candidates only depends on {h}, unless already entailed
        if own.is_none() && allowed && !entails(0) && !self.closures[0].inconsistent {
            sets.push(AtomSet::from([h.clone()]));
        }
        sets
    }
}

impl<'k, 'a> UnfoundedChecker<'k, 'a> {
    /// Refuses KBs with more than `cap` known atoms.
    pub fn new(kb: &'k GroundKb<'a>, cap: usize) -> Result<Self> {
        if kb.ka.len() > cap {
            return Err(Error::TooLarge { size: kb.ka.len(), cap });
        }
        let atoms: Vec<GroundAtom> = kb.ka.iter().cloned().collect();
        let mut deps: HashMap<GroundAtom, Vec<AtomSet>> = HashMap::new();
        if kb.ctx.oracle().is_some() {
            let plain = Side::new(kb, PredKind::Base);
            let dbl = kb.doubled.then(|| Side::new(kb, PredKind::Doubled));
            for h in &atoms {
                // S ⊆ KA(K) for O; S ⊆ KA(K^d) for the copy
                let mut d = plain.deps(h, h.kind() == PredKind::Base);
                if let Some(s) = &dbl {
                    d.extend(s.deps(h, true));
                }
                deps.insert(h.clone(), d);
            }
        } else {
            for h in &atoms {
                deps.insert(h.clone(), vec![AtomSet::from([h.clone()])]);
            }
        }
        Ok(UnfoundedChecker { kb, atoms, deps })
    }

    /// Classical negation of the rule head entailed by O with T, as
    /// required by (Uic).
    fn neg_entailed(&self, t: &AtomSet, rule: &super::GroundRule) -> bool {
        if self.kb.ctx.oracle().is_none() {
            return false;
        }
        if self.kb.doubled {
            rule.marked_head().is_some_and(|h| self.kb.ctx.entails_negation(t, &h))
        } else {
            self.kb.ctx.entails_negation(t, &rule.head)
        }
    }

    fn check(&self, t: &AtomSet, f: &AtomSet, u: &AtomSet, neg: &mut HashMap<usize, bool>) -> bool {
        let in_uf = |a: &GroundAtom| u.contains(a) || f.contains(a);
        for h in u {
            for (i, r) in self.kb.rules.iter().enumerate() {
                if &r.head != h {
                    continue;
                }
                let ok = r.pos.iter().any(in_uf)
                    || r.neg.iter().any(|b| t.contains(b))
                    || *neg.entry(i).or_insert_with(|| self.neg_entailed(t, r));
                if !ok {
                    return false;
                }
            }
            let deps = self.deps.get(h).map(Vec::as_slice).unwrap_or(&[]);
            // for a minimal S every member qualifies as the witness A
            if !deps.iter().all(|s| s.iter().any(in_uf)) {
                return false;
            }
        }
        true
    }

    /// Conditions (Ui), (Uii) and, for doubled KBs, (Uii^d).
    pub fn is_unfounded(&self, t: &AtomSet, f: &AtomSet, u: &AtomSet) -> bool {
        self.check(t, f, u, &mut HashMap::new())
    }

    /// The union of all unfounded sets w.r.t. (T, F), by exhaustive search.
    pub fn greatest(&self, t: &AtomSet, f: &AtomSet) -> AtomSet {
        let mut neg = HashMap::new();
        let mut out = AtomSet::new();
        for mask in 0..1usize << self.atoms.len() {
            let u: AtomSet =
                self.atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a.clone()).collect();
            if u.is_subset(&out) {
                continue;
            }
            if self.check(t, f, &u, &mut neg) {
                out.extend(u);
            }
        }
        out
    }
}
