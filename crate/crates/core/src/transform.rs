//! Compilation of a hybrid KB into one doubled rule program: rule doubling
//! plus the translation of the reduced EL+ TBox and the ABox into rules.

use crate::el::{
    check_ontology_consistency, classify, complete_tbox, normalize, reduce_tbox,
    ClassificationMaps, Concept, Consistency, NormalAxiom, NormalizedTBox,
};
use crate::error::{Error, Result};
use crate::kb::{is_dl_atom, HybridKb};
use crate::logic::{Atom, Literal, Pred, PredKind, Program, Rule, Term};
use crate::ontology::Assertion;
use crate::symbols::{PredId, SymbolTable, VarId};
use std::collections::{BTreeSet, HashSet};
use std::fmt;

/// Which schema produced a compiled rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// Truth copy of a user rule.
    User2a,
    /// Non-falsity copy of a user rule with a DL head (carries the marker).
    User2bI,
    /// Non-falsity copy of a user rule with a non-DL head.
    User2bII,
    A1,
    A2,
    C1,
    C2,
    C3,
    R1,
    R2,
    I1,
    I2,
    I3,
}

impl Tag {
    pub const ALL: [Tag; 13] = [
        Tag::User2a,
        Tag::User2bI,
        Tag::User2bII,
        Tag::A1,
        Tag::A2,
        Tag::C1,
        Tag::C2,
        Tag::C3,
        Tag::R1,
        Tag::R2,
        Tag::I1,
        Tag::I2,
        Tag::I3,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::User2a => "user-2a",
            Tag::User2bI => "user-2b.i",
            Tag::User2bII => "user-2b.ii",
            Tag::A1 => "a1",
            Tag::A2 => "a2",
            Tag::C1 => "c1",
            Tag::C2 => "c2",
            Tag::C3 => "c3",
            Tag::R1 => "r1",
            Tag::R2 => "r2",
            Tag::I1 => "i1",
            Tag::I2 => "i2",
            Tag::I3 => "i3",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        Tag::ALL.iter().copied().find(|t| t.as_str() == s)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedRule {
    pub rule: Rule,
    pub tag: Tag,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DoublingOptions {
    /// Leave guard atoms undoubled in non-falsity copies. A guard is a
    /// non-DL predicate defined by ground facts only, so its doubled copy
    /// would coincide with it. Affects user rules only.
    pub undouble_guards: bool,
}

fn guard_preds(program: &Program, syms: &SymbolTable) -> HashSet<PredId> {
    let mut facts_only: std::collections::HashMap<PredId, bool> = Default::default();
    for r in &program.rules {
        let ok = r.body.is_empty()
            && r.head.is_ground()
            && r.head.pred.kind == PredKind::Base
            && !syms.is_dl(r.head.pred.id);
        let e = facts_only.entry(r.head.pred.id).or_insert(true);
        *e &= ok;
    }
    facts_only.into_iter().filter(|(_, ok)| *ok).map(|(p, _)| p).collect()
}

/// Rule doubling: every rule `H :- A1..An, not B1..not Bm` yields
/// `H :- A1..An, not B1^d..not Bm^d` and
/// `H^d :- A1^d..An^d, not B1..not Bm [, not NH]`, the marker being added
/// iff H is a DL-atom.
pub fn double_rules(program: &Program, syms: &SymbolTable) -> Vec<TaggedRule> {
    double_rules_with(program, syms, DoublingOptions::default())
}

pub fn double_rules_with(
    program: &Program,
    syms: &SymbolTable,
    opts: DoublingOptions,
) -> Vec<TaggedRule> {
    let guards = if opts.undouble_guards { guard_preds(program, syms) } else { HashSet::new() };
    let is_guard = |a: &Atom| a.pred.kind == PredKind::Base && guards.contains(&a.pred.id);
    let mut out = Vec::with_capacity(2 * program.len());
    for r in &program.rules {
        let truth_body = r
            .body
            .iter()
            .map(|l| match l {
                Literal::Pos(a) => Literal::Pos(a.clone()),
                Literal::Neg(b) => Literal::Neg(b.with_kind(PredKind::Doubled)),
            })
            .collect();
        out.push(TaggedRule { rule: Rule::new(r.head.clone(), truth_body), tag: Tag::User2a });
        if is_guard(&r.head) {
            continue;
        }
        let mut body: Vec<Literal> = r
            .body
            .iter()
            .map(|l| match l {
                Literal::Pos(a) if is_guard(a) => Literal::Pos(a.clone()),
                Literal::Pos(a) => Literal::Pos(a.with_kind(PredKind::Doubled)),
                Literal::Neg(b) => Literal::Neg(b.clone()),
            })
            .collect();
        let dl_head = is_dl_atom(syms, &r.head);
        if dl_head {
            body.push(Literal::Neg(r.head.with_kind(PredKind::Marker)));
        }
        out.push(TaggedRule {
            rule: Rule::new(r.head.with_kind(PredKind::Doubled), body),
            tag: if dl_head { Tag::User2bI } else { Tag::User2bII },
        });
    }
    out
}

struct Translator {
    x: VarId,
    y: VarId,
    z: VarId,
    out: Vec<TaggedRule>,
}

fn unary(p: PredId, kind: PredKind, v: VarId) -> Atom {
    Atom::new(Pred { id: p, kind }, vec![Term::Var(v)])
}

fn binary(p: PredId, kind: PredKind, v: VarId, w: VarId) -> Atom {
    Atom::new(Pred { id: p, kind }, vec![Term::Var(v), Term::Var(w)])
}

impl Translator {
    fn emit(&mut self, tag: Tag, head: Atom, body: Vec<Literal>) {
        self.out.push(TaggedRule { rule: Rule::new(head, body), tag });
    }

    /// The truth and non-falsity rules for `head :- body` over DL atoms.
    fn pair(&mut self, tag: Tag, head: Atom, body: Vec<Atom>) {
        let truth = body.iter().cloned().map(Literal::Pos).collect();
        self.emit(tag, head.clone(), truth);
        let mut nf: Vec<Literal> =
            body.iter().map(|a| Literal::Pos(a.with_kind(PredKind::Doubled))).collect();
        nf.push(Literal::Neg(head.with_kind(PredKind::Marker)));
        self.emit(tag, head.with_kind(PredKind::Doubled), nf);
    }

    fn concept_atoms(&self, cs: &[Concept], v: VarId) -> Vec<Atom> {
        cs.iter()
            .filter_map(|c| match c {
                Concept::Named(p) => Some(unary(*p, PredKind::Base, v)),
                _ => None,
            })
            .collect()
    }

    fn axiom(&mut self, ax: &NormalAxiom, syms: &SymbolTable) -> Result<()> {
        let (x, y, z) = (self.x, self.y, self.z);
        match *ax {
            NormalAxiom::Sub { sub, sup } => match sup {
                Concept::Top => {}
                Concept::Named(d) => {
                    let body = self.concept_atoms(&[sub], x);
                    self.pair(Tag::C1, unary(d, PredKind::Base, x), body);
                }
                Concept::Bottom => {
                    if let Concept::Named(c) = sub {
                        self.emit(Tag::I1, unary(c, PredKind::Marker, x), vec![]);
                    }
                }
            },
            NormalAxiom::Conj { left, right, sup } => match sup {
                Concept::Top => {}
                Concept::Named(d) => {
                    let body = self.concept_atoms(&[left, right], x);
                    self.pair(Tag::C2, unary(d, PredKind::Base, x), body);
                }
                Concept::Bottom => {
                    for (neg, other) in [(right, left), (left, right)] {
                        if let Concept::Named(n) = neg {
                            let body = self.concept_atoms(&[other], x);
                            self.emit(
                                Tag::I2,
                                unary(n, PredKind::Marker, x),
                                body.into_iter().map(Literal::Pos).collect(),
                            );
                        }
                    }
                }
            },
            NormalAxiom::ExistsSub { role, filler, sup } => {
                let mut body = vec![binary(role, PredKind::Base, x, y)];
                body.extend(self.concept_atoms(&[filler], y));
                match sup {
                    Concept::Top => {}
                    Concept::Named(d) => self.pair(Tag::C3, unary(d, PredKind::Base, x), body),
                    Concept::Bottom => {
                        if let Concept::Named(c) = filler {
                            self.emit(
                                Tag::I3,
                                unary(c, PredKind::Marker, y),
                                vec![Literal::Pos(binary(role, PredKind::Base, x, y))],
                            );
                        }
                        let body = self.concept_atoms(&[filler], y);
                        self.emit(
                            Tag::I3,
                            binary(role, PredKind::Marker, x, y),
                            body.into_iter().map(Literal::Pos).collect(),
                        );
                    }
                }
            }
            NormalAxiom::SubExists { .. } => {
                return Err(Error::NotReduced(ax.display(syms)));
            }
            NormalAxiom::RoleSub { sub, sup } => {
                self.pair(Tag::R1, binary(sup, PredKind::Base, x, y), vec![binary(
                    sub,
                    PredKind::Base,
                    x,
                    y,
                )]);
            }
            NormalAxiom::RoleChain { first, second, sup } => {
                self.pair(Tag::R2, binary(sup, PredKind::Base, x, z), vec![
                    binary(first, PredKind::Base, x, y),
                    binary(second, PredKind::Base, y, z),
                ]);
            }
        }
        Ok(())
    }
}

/// Translates a reduced TBox and an ABox into rules. Variables `X`, `Y`,
/// `Z` are interned into `syms`. `top` atoms are left out of rule bodies; a
/// resulting head variable without a body occurrence ranges over all
/// individuals.
pub fn translate_ontology(
    reduced: &[NormalAxiom],
    abox: &[Assertion],
    syms: &mut SymbolTable,
) -> Result<Vec<TaggedRule>> {
    let mut t = Translator {
        x: syms.intern_var("X"),
        y: syms.intern_var("Y"),
        z: syms.intern_var("Z"),
        out: Vec::new(),
    };
    for a in abox {
        match *a {
            Assertion::Concept(c, i) => {
                let head = Atom::new(Pred::base(c), vec![Term::Const(i)]);
                t.emit(Tag::A1, head.clone(), vec![]);
                t.emit(Tag::A1, head.with_kind(PredKind::Doubled), vec![Literal::Neg(
                    head.with_kind(PredKind::Marker),
                )]);
            }
            Assertion::Role(r, i, j) => {
                let head = Atom::new(Pred::base(r), vec![Term::Const(i), Term::Const(j)]);
                t.emit(Tag::A2, head.clone(), vec![]);
                t.emit(Tag::A2, head.with_kind(PredKind::Doubled), vec![Literal::Neg(
                    head.with_kind(PredKind::Marker),
                )]);
            }
        }
    }
    for ax in reduced {
        t.axiom(ax, syms)?;
    }
    Ok(t.out)
}

/// The compiled form of a hybrid KB.
#[derive(Clone, Debug)]
pub struct CompiledKb {
    /// The KB's symbols plus fresh normalization names and `X`, `Y`, `Z`.
    pub symbols: SymbolTable,
    pub normalized: NormalizedTBox,
    pub classification: ClassificationMaps,
    pub reduced: Vec<NormalAxiom>,
    pub rules: Vec<TaggedRule>,
}

impl CompiledKb {
    pub fn program(&self) -> Program {
        Program::new(self.rules.iter().map(|t| t.rule.clone()).collect())
    }

    /// Base predicates of the source KB (not fresh normalization names).
    pub fn original_preds(&self) -> BTreeSet<PredId> {
        self.symbols.preds().filter(|&p| !self.symbols.info(p).fresh).collect()
    }
}

/// normalize -> classify -> complete -> reduce -> translate, together with
/// the doubled rules.
pub fn build_combined(kb: &HybridKb) -> Result<CompiledKb> {
    build_combined_with(kb, DoublingOptions::default())
}

pub fn build_combined_with(kb: &HybridKb, opts: DoublingOptions) -> Result<CompiledKb> {
    let mut symbols = kb.symbols.clone();
    let normalized = normalize(&kb.ontology.tbox, &mut symbols);
    if let Consistency::Inconsistent(w) = check_ontology_consistency(&normalized, &kb.ontology.abox)
    {
        return Err(Error::InconsistentOntology {
            witness: w.map_or_else(|| "top".to_string(), |a| symbols.const_name(a).to_string()),
        });
    }
    let classification = classify(&normalized);
    let reduced = reduce_tbox(&complete_tbox(&normalized, &classification));
    let mut rules = double_rules_with(&kb.program, &symbols, opts);
    rules.extend(translate_ontology(&reduced, &kb.ontology.abox, &mut symbols)?);
    Ok(CompiledKb { symbols, normalized, classification, reduced, rules })
}
