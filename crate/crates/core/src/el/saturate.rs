//! Completion-rule saturation (CR1-CR7) over concept nodes and, for instance
//! checking, individual nodes.

use super::normalize::{Concept, NormalAxiom, NormalizedTBox};
use crate::error::{Error, Result};
use crate::ontology::Assertion;
use crate::symbols::{ConstId, PredId};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

/// The saturated mappings: `D in S(C)` means C <= D, `(C,D) in T(R)` means
/// C <= exists R.D.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassificationMaps {
    pub s: BTreeMap<Concept, BTreeSet<Concept>>,
    pub t: BTreeMap<PredId, BTreeSet<(Concept, Concept)>>,
}

impl ClassificationMaps {
    pub fn s_of(&self, c: Concept) -> Option<&BTreeSet<Concept>> {
        self.s.get(&c)
    }
}

/// Saturation with one extra node per individual.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstanceGraph {
    /// The concept-node part; equal to `classify` of the same TBox.
    pub classes: ClassificationMaps,
    pub individuals: BTreeMap<ConstId, BTreeSet<Concept>>,
    /// Role pairs between individuals.
    pub roles: BTreeMap<PredId, BTreeSet<(ConstId, ConstId)>>,
}

impl InstanceGraph {
    pub fn has_concept(&self, a: ConstId, c: Concept) -> bool {
        c == Concept::Top && self.individuals.contains_key(&a)
            || self.individuals.get(&a).is_some_and(|s| s.contains(&c))
    }

    pub fn has_role(&self, r: PredId, a: ConstId, b: ConstId) -> bool {
        self.roles.get(&r).is_some_and(|s| s.contains(&(a, b)))
    }

    /// Some individual that is an instance of `bot`.
    pub fn inconsistency_witness(&self) -> Option<ConstId> {
        self.individuals
            .iter()
            .find(|(_, s)| s.contains(&Concept::Bottom))
            .map(|(a, _)| *a)
    }
}

#[derive(Default)]
pub(crate) struct AxiomIndex {
    sub: HashMap<Concept, Vec<Concept>>,
    conj: HashMap<Concept, Vec<(Concept, Concept)>>,
    sub_exists: HashMap<Concept, Vec<(PredId, Concept)>>,
    exists_sub: HashMap<(PredId, Concept), Vec<Concept>>,
    role_sup: HashMap<PredId, Vec<PredId>>,
    chain_first: HashMap<PredId, Vec<(PredId, PredId)>>,
    chain_second: HashMap<PredId, Vec<(PredId, PredId)>>,
}

impl AxiomIndex {
    pub(crate) fn new(axioms: &[NormalAxiom]) -> Self {
        let mut ix = AxiomIndex::default();
        for ax in axioms {
            match *ax {
                NormalAxiom::Sub { sub, sup } => ix.sub.entry(sub).or_default().push(sup),
                NormalAxiom::Conj { left, right, sup } => {
                    ix.conj.entry(left).or_default().push((right, sup));
                    ix.conj.entry(right).or_default().push((left, sup));
                }
                NormalAxiom::SubExists { sub, role, filler } => {
                    ix.sub_exists.entry(sub).or_default().push((role, filler))
                }
                NormalAxiom::ExistsSub { role, filler, sup } => {
                    ix.exists_sub.entry((role, filler)).or_default().push(sup)
                }
                NormalAxiom::RoleSub { sub, sup } => ix.role_sup.entry(sub).or_default().push(sup),
                NormalAxiom::RoleChain { first, second, sup } => {
                    ix.chain_first.entry(first).or_default().push((second, sup));
                    ix.chain_second.entry(second).or_default().push((first, sup));
                }
            }
        }
        ix
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    Class(Concept),
    Ind(ConstId),
}

enum Job {
    S(usize, Concept),
    T(PredId, usize, usize),
}

struct Saturator<'a> {
    ix: &'a AxiomIndex,
    nodes: Vec<Node>,
    node_of: HashMap<Node, usize>,
    s: Vec<HashSet<Concept>>,
    s_list: Vec<Vec<Concept>>,
    links: HashSet<(PredId, usize, usize)>,
    out: HashMap<(PredId, usize), Vec<usize>>,
    inc: HashMap<(PredId, usize), Vec<usize>>,
    inc_any: Vec<Vec<(PredId, usize)>>,
    jobs: Vec<Job>,
}

impl<'a> Saturator<'a> {
    fn new(ix: &'a AxiomIndex) -> Self {
        Saturator {
            ix,
            nodes: Vec::new(),
            node_of: HashMap::new(),
            s: Vec::new(),
            s_list: Vec::new(),
            links: HashSet::new(),
            out: HashMap::new(),
            inc: HashMap::new(),
            inc_any: Vec::new(),
            jobs: Vec::new(),
        }
    }

    fn node(&mut self, n: Node) -> usize {
        if let Some(&i) = self.node_of.get(&n) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(n);
        self.node_of.insert(n, i);
        self.s.push(HashSet::new());
        self.s_list.push(Vec::new());
        self.inc_any.push(Vec::new());
        self.jobs.push(Job::S(i, Concept::Top));
        if let Node::Class(c) = n {
            self.jobs.push(Job::S(i, c));
        }
        i
    }

    fn run(&mut self) {
        while let Some(job) = self.jobs.pop() {
            match job {
                Job::S(x, c) => self.add_s(x, c),
                Job::T(r, x, y) => self.add_t(r, x, y),
            }
        }
    }

    fn add_s(&mut self, x: usize, c: Concept) {
        if !self.s[x].insert(c) {
            return;
        }
        self.s_list[x].push(c);
        let ix = self.ix;
        // CR1
        if let Some(ds) = ix.sub.get(&c) {
            self.jobs.extend(ds.iter().map(|&d| Job::S(x, d)));
        }
        // CR2
        if let Some(cs) = ix.conj.get(&c) {
            for &(other, d) in cs {
                if self.s[x].contains(&other) {
                    self.jobs.push(Job::S(x, d));
                }
            }
        }
        // CR3
        if let Some(es) = ix.sub_exists.get(&c) {
            for &(r, filler) in es {
                let y = self.node(Node::Class(filler));
                self.jobs.push(Job::T(r, x, y));
            }
        }
        // CR4 and CR5 for links ending in x
        for &(r, y) in &self.inc_any[x] {
            if c == Concept::Bottom {
                self.jobs.push(Job::S(y, Concept::Bottom));
            }
            if let Some(es) = ix.exists_sub.get(&(r, c)) {
                self.jobs.extend(es.iter().map(|&e| Job::S(y, e)));
            }
        }
    }

    fn add_t(&mut self, r: PredId, x: usize, y: usize) {
        if !self.links.insert((r, x, y)) {
            return;
        }
        self.out.entry((r, x)).or_default().push(y);
        self.inc.entry((r, y)).or_default().push(x);
        self.inc_any[y].push((r, x));
        let ix = self.ix;
        // CR4, CR5
        for &d in &self.s_list[y] {
            if d == Concept::Bottom {
                self.jobs.push(Job::S(x, Concept::Bottom));
            }
            if let Some(es) = ix.exists_sub.get(&(r, d)) {
                self.jobs.extend(es.iter().map(|&e| Job::S(x, e)));
            }
        }
        // CR6
        if let Some(sups) = ix.role_sup.get(&r) {
            self.jobs.extend(sups.iter().map(|&s| Job::T(s, x, y)));
        }
        // CR7, r as first link: (x,y) in r, (y,z) in r2
        if let Some(cs) = ix.chain_first.get(&r) {
            for &(r2, s) in cs {
                if let Some(zs) = self.out.get(&(r2, y)) {
                    self.jobs.extend(zs.iter().map(|&z| Job::T(s, x, z)));
                }
            }
        }
        // CR7, r as second link: (w,x) in r1, (x,y) in r
        if let Some(cs) = ix.chain_second.get(&r) {
            for &(r1, s) in cs {
                if let Some(ws) = self.inc.get(&(r1, x)) {
                    self.jobs.extend(ws.iter().map(|&w| Job::T(s, w, y)));
                }
            }
        }
    }

    fn class_maps(&self) -> ClassificationMaps {
        let mut maps = ClassificationMaps::default();
        for (i, n) in self.nodes.iter().enumerate() {
            if let Node::Class(c) = n {
                maps.s.insert(*c, self.s[i].iter().copied().collect());
            }
        }
        for &(r, x, y) in &self.links {
            if let (Node::Class(c), Node::Class(d)) = (self.nodes[x], self.nodes[y]) {
                maps.t.entry(r).or_default().insert((c, d));
            }
        }
        maps
    }
}

/// Least fixpoint of CR1-CR7 from the seeds S(C) = {C, top}, T(R) = {}.
pub fn classify(nt: &NormalizedTBox) -> ClassificationMaps {
    let ix = AxiomIndex::new(&nt.axioms);
    let mut sat = Saturator::new(&ix);
    for c in nt.basic_concepts() {
        sat.node(Node::Class(c));
    }
    sat.run();
    let mut maps = sat.class_maps();
    for r in nt.roles() {
        maps.t.entry(r).or_default();
    }
    maps
}

/// `C <= D` according to the maps; an unsatisfiable C is below everything.
pub fn subsumes(maps: &ClassificationMaps, c: Concept, d: Concept) -> Result<bool> {
    let s = maps.s.get(&c).ok_or_else(|| Error::UnknownConcept(format!("{c:?}")))?;
    Ok(s.contains(&d) || s.contains(&Concept::Bottom))
}

/// Saturates concept nodes together with one node per individual, seeded by
/// the assertions. `extra` individuals get a node even without assertions.
pub fn instance_saturate(
    nt: &NormalizedTBox,
    abox: &[Assertion],
    extra: impl IntoIterator<Item = ConstId>,
) -> InstanceGraph {
    let ix = AxiomIndex::new(&nt.axioms);
    instance_saturate_indexed(&ix, nt, abox, extra)
}

pub(crate) fn instance_saturate_indexed(
    ix: &AxiomIndex,
    nt: &NormalizedTBox,
    abox: &[Assertion],
    extra: impl IntoIterator<Item = ConstId>,
) -> InstanceGraph {
    let mut sat = Saturator::new(ix);
    for c in nt.basic_concepts() {
        sat.node(Node::Class(c));
    }
    for a in extra {
        sat.node(Node::Ind(a));
    }
    for asr in abox {
        match *asr {
            Assertion::Concept(c, a) => {
                let x = sat.node(Node::Ind(a));
                sat.jobs.push(Job::S(x, Concept::Named(c)));
            }
            Assertion::Role(r, a, b) => {
                let x = sat.node(Node::Ind(a));
                let y = sat.node(Node::Ind(b));
                sat.jobs.push(Job::T(r, x, y));
            }
        }
    }
    sat.run();
    let mut g = InstanceGraph { classes: sat.class_maps(), ..Default::default() };
    for (i, n) in sat.nodes.iter().enumerate() {
        if let Node::Ind(a) = n {
            g.individuals.insert(*a, sat.s[i].iter().copied().collect());
        }
    }
    for &(r, x, y) in &sat.links {
        if let (Node::Ind(a), Node::Ind(b)) = (sat.nodes[x], sat.nodes[y]) {
            g.roles.entry(r).or_default().insert((a, b));
        }
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    /// The witness is an individual that is an instance of `bot`; `None`
    /// when `top` itself is unsatisfiable, which no interpretation (its
    /// domain being non-empty) can satisfy even without individuals.
    Inconsistent(Option<ConstId>),
}

/// Inconsistent iff some individual saturates to `bot` (or `top` does).
pub fn check_ontology_consistency(nt: &NormalizedTBox, abox: &[Assertion]) -> Consistency {
    let g = instance_saturate(nt, abox, []);
    if let Some(a) = g.inconsistency_witness() {
        return Consistency::Inconsistent(Some(a));
    }
    if g.classes.s.get(&Concept::Top).is_some_and(|s| s.contains(&Concept::Bottom)) {
        return Consistency::Inconsistent(None);
    }
    Consistency::Consistent
}
