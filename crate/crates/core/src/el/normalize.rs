use crate::ontology::{ConceptExpr, TBoxAxiom};
use crate::symbols::{PredId, SymbolTable};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// A basic concept: a concept name, `Top`, or (in superclass position only)
/// `Bottom`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Top,
    Bottom,
    Named(PredId),
}

impl Concept {
    pub fn display<'a>(&'a self, syms: &'a SymbolTable) -> impl fmt::Display + 'a {
        ConceptDisplay(*self, syms)
    }

    fn from_expr(e: &ConceptExpr) -> Option<Concept> {
        match e {
            ConceptExpr::Top => Some(Concept::Top),
            ConceptExpr::Bottom => Some(Concept::Bottom),
            ConceptExpr::Name(p) => Some(Concept::Named(*p)),
            _ => None,
        }
    }
}

struct ConceptDisplay<'a>(Concept, &'a SymbolTable);

impl fmt::Display for ConceptDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Concept::Top => write!(f, "top"),
            Concept::Bottom => write!(f, "bot"),
            Concept::Named(p) => write!(f, "{}", self.1.pred_name(p)),
        }
    }
}

/// The six EL+ normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormalAxiom {
    /// C <= D
    Sub { sub: Concept, sup: Concept },
    /// C1 and C2 <= D
    Conj { left: Concept, right: Concept, sup: Concept },
    /// exists R.C <= D
    ExistsSub { role: PredId, filler: Concept, sup: Concept },
    /// C <= exists R.D
    SubExists { sub: Concept, role: PredId, filler: Concept },
    /// R <= S
    RoleSub { sub: PredId, sup: PredId },
    /// R1 o R2 <= S
    RoleChain { first: PredId, second: PredId, sup: PredId },
}

impl NormalAxiom {
    pub fn display(&self, syms: &SymbolTable) -> String {
        let r = |p: PredId| syms.pred_name(p).to_string();
        match *self {
            NormalAxiom::Sub { sub, sup } => {
                format!("{} <= {}.", sub.display(syms), sup.display(syms))
            }
            NormalAxiom::Conj { left, right, sup } => format!(
                "{} and {} <= {}.",
                left.display(syms),
                right.display(syms),
                sup.display(syms)
            ),
            NormalAxiom::ExistsSub { role, filler, sup } => format!(
                "exists {}.{} <= {}.",
                r(role),
                filler.display(syms),
                sup.display(syms)
            ),
            NormalAxiom::SubExists { sub, role, filler } => format!(
                "{} <= exists {}.{}.",
                sub.display(syms),
                r(role),
                filler.display(syms)
            ),
            NormalAxiom::RoleSub { sub, sup } => format!("role {} <= {}.", r(sub), r(sup)),
            NormalAxiom::RoleChain { first, second, sup } => {
                format!("{} o {} <= {}.", r(first), r(second), r(sup))
            }
        }
    }

    pub fn is_sub_exists(&self) -> bool {
        matches!(self, NormalAxiom::SubExists { .. })
    }

    pub fn concepts(&self) -> Vec<Concept> {
        match *self {
            NormalAxiom::Sub { sub, sup } => vec![sub, sup],
            NormalAxiom::Conj { left, right, sup } => vec![left, right, sup],
            NormalAxiom::ExistsSub { filler, sup, .. } => vec![filler, sup],
            NormalAxiom::SubExists { sub, filler, .. } => vec![sub, filler],
            _ => vec![],
        }
    }

    pub fn roles(&self) -> Vec<PredId> {
        match *self {
            NormalAxiom::ExistsSub { role, .. } | NormalAxiom::SubExists { role, .. } => vec![role],
            NormalAxiom::RoleSub { sub, sup } => vec![sub, sup],
            NormalAxiom::RoleChain { first, second, sup } => vec![first, second, sup],
            _ => vec![],
        }
    }
}

/// What a fresh name stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreshOrigin {
    Concept(ConceptExpr),
    RoleChain(Vec<PredId>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizedTBox {
    pub axioms: Vec<NormalAxiom>,
    pub fresh: Vec<(PredId, FreshOrigin)>,
}

impl NormalizedTBox {
    pub fn from_axioms(axioms: Vec<NormalAxiom>) -> Self {
        NormalizedTBox { axioms, fresh: Vec::new() }
    }

    /// BC_T: `Top` and every concept name in the axioms (never `Bottom`).
    pub fn basic_concepts(&self) -> BTreeSet<Concept> {
        let mut out = BTreeSet::from([Concept::Top]);
        for ax in &self.axioms {
            out.extend(ax.concepts().into_iter().filter(|c| *c != Concept::Bottom));
        }
        out
    }

    /// R_T: every role name in the axioms.
    pub fn roles(&self) -> BTreeSet<PredId> {
        self.axioms.iter().flat_map(|a| a.roles()).collect()
    }

    pub fn is_fresh(&self, p: PredId) -> bool {
        self.fresh.iter().any(|(q, _)| *q == p)
    }
}

struct Normalizer<'s> {
    syms: &'s mut SymbolTable,
    out: Vec<NormalAxiom>,
    fresh: Vec<(PredId, FreshOrigin)>,
    /// expression -> (name, `expr <= name` emitted, `name <= expr` emitted)
    concept_names: HashMap<ConceptExpr, (PredId, bool, bool)>,
    chain_names: HashMap<Vec<PredId>, PredId>,
}

impl Normalizer<'_> {
    fn name_for(&mut self, e: &ConceptExpr) -> PredId {
        if let Some(entry) = self.concept_names.get(e) {
            return entry.0;
        }
        let p = self.syms.fresh_pred("N", 1);
        self.fresh.push((p, FreshOrigin::Concept(e.clone())));
        self.concept_names.insert(e.clone(), (p, false, false));
        p
    }

    /// Fresh N with `e <= N`.
    fn lhs_name(&mut self, e: &ConceptExpr) -> Concept {
        let p = self.name_for(e);
        let entry = self.concept_names.get_mut(e).unwrap();
        if !entry.1 {
            entry.1 = true;
            self.gci(e.clone(), ConceptExpr::Name(p));
        }
        Concept::Named(p)
    }

    /// Fresh N with `N <= e`.
    fn rhs_name(&mut self, e: &ConceptExpr) -> Concept {
        let p = self.name_for(e);
        let entry = self.concept_names.get_mut(e).unwrap();
        if !entry.2 {
            entry.2 = true;
            self.gci(ConceptExpr::Name(p), e.clone());
        }
        Concept::Named(p)
    }

    fn basic_lhs(&mut self, e: &ConceptExpr) -> Concept {
        Concept::from_expr(e).unwrap_or_else(|| self.lhs_name(e))
    }

    fn push(&mut self, ax: NormalAxiom) {
        if !self.out.contains(&ax) {
            self.out.push(ax);
        }
    }

    fn gci(&mut self, sub: ConceptExpr, sup: ConceptExpr) {
        if sub == ConceptExpr::Bottom || sup == ConceptExpr::Top || sub == sup {
            return;
        }
        if let ConceptExpr::And(parts) = &sup {
            for p in parts.clone() {
                self.gci(sub.clone(), p);
            }
            return;
        }
        let sup_basic = Concept::from_expr(&sup);
        match (Concept::from_expr(&sub), sup_basic) {
            (Some(c), Some(d)) => self.push(NormalAxiom::Sub { sub: c, sup: d }),
            (Some(c), None) => {
                let ConceptExpr::Exists(role, filler) = &sup else { unreachable!() };
                let f = match Concept::from_expr(filler) {
                    Some(f) => f,
                    None => self.rhs_name(filler),
                };
                self.push(NormalAxiom::SubExists { sub: c, role: *role, filler: f });
            }
            (None, None) => {
                let n = self.rhs_name(&sup);
                self.gci(sub, ConceptExpr::Name(match n {
                    Concept::Named(p) => p,
                    _ => unreachable!(),
                }));
            }
            (None, Some(d)) => match &sub {
                ConceptExpr::And(parts) => {
                    let basics: Vec<Concept> = parts.iter().map(|p| self.basic_lhs(p)).collect();
                    self.conj_chain(&basics, parts, d);
                }
                ConceptExpr::Exists(role, filler) => {
                    let f = self.basic_lhs(filler);
                    self.push(NormalAxiom::ExistsSub { role: *role, filler: f, sup: d });
                }
                _ => unreachable!(),
            },
        }
    }

    /// B1 and ... and Bn <= D, split left-associatively through fresh names
    /// for the prefixes.
    fn conj_chain(&mut self, basics: &[Concept], parts: &[ConceptExpr], sup: Concept) {
        debug_assert!(basics.len() >= 2);
        let mut acc = basics[0];
        for i in 1..basics.len() {
            let target = if i + 1 == basics.len() {
                sup
            } else {
                let prefix = ConceptExpr::and(parts[..=i].iter().cloned());
                let p = self.name_for(&prefix);
                self.concept_names.get_mut(&prefix).unwrap().1 = true;
                Concept::Named(p)
            };
            self.push(NormalAxiom::Conj { left: acc, right: basics[i], sup: target });
            acc = target;
        }
    }

    fn chain(&mut self, chain: &[PredId], sup: PredId) {
        match chain.len() {
            0 => {}
            1 => {
                if chain[0] != sup {
                    self.push(NormalAxiom::RoleSub { sub: chain[0], sup });
                }
            }
            _ => {
                let mut acc = chain[0];
                for i in 1..chain.len() {
                    let target = if i + 1 == chain.len() {
                        sup
                    } else {
                        let prefix = chain[..=i].to_vec();
                        match self.chain_names.get(&prefix) {
                            Some(&p) => p,
                            None => {
                                let p = self.syms.fresh_pred("R", 2);
                                self.fresh.push((p, FreshOrigin::RoleChain(prefix.clone())));
                                self.chain_names.insert(prefix, p);
                                p
                            }
                        }
                    };
                    self.push(NormalAxiom::RoleChain { first: acc, second: chain[i], sup: target });
                    acc = target;
                }
            }
        }
    }
}

/// Brings a TBox into normal form. Fresh concept names `_N<k>` and role
/// names `_R<k>` are introduced in a deterministic order and reused for equal
/// subexpressions.
pub fn normalize(tbox: &[TBoxAxiom], syms: &mut SymbolTable) -> NormalizedTBox {
    let mut n = Normalizer {
        syms,
        out: Vec::new(),
        fresh: Vec::new(),
        concept_names: HashMap::new(),
        chain_names: HashMap::new(),
    };
    for ax in tbox {
        match ax {
            TBoxAxiom::Gci { sub, sup } => n.gci(sub.clone(), sup.clone()),
            TBoxAxiom::Ri { chain, sup } => n.chain(chain, *sup),
        }
    }
    NormalizedTBox { axioms: n.out, fresh: n.fresh }
}
