//! Shared test support: random generators and independent oracles.
#![allow(dead_code)]

use hybrid_mknf::el::{Concept, NormalAxiom, NormalizedTBox};
use hybrid_mknf::kb::ground_rules;
use hybrid_mknf::logic::{GroundAtom, Literal, Program, Truth};
use hybrid_mknf::ontology::Assertion;
use hybrid_mknf::symbols::{ConstId, PredId};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Concept instances and role instances.
pub type InstanceSets = (BTreeSet<(PredId, ConstId)>, BTreeSet<(PredId, ConstId, ConstId)>);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- generators

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub concepts: usize,
    pub roles: usize,
    pub individuals: usize,
    pub axioms: usize,
    pub assertions: usize,
    pub rules: usize,
    /// Allow role chains in the TBox.
    pub chains: bool,
}

impl Shape {
    /// At most 6 concepts, 3 roles, 4 individuals and 10 rules, guard facts
    /// included.
    pub fn small() -> Shape {
        Shape { concepts: 6, roles: 3, individuals: 4, axioms: 8, assertions: 5, rules: 10, chains: true }
    }

    pub fn tiny() -> Shape {
        Shape { concepts: 3, roles: 1, individuals: 1, axioms: 3, assertions: 1, rules: 3, chains: false }
    }
}

const INDS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn pick<'a>(rng: &mut ChaCha8Rng, xs: &'a [String]) -> &'a str {
    &xs[rng.random_range(0..xs.len())]
}

fn concept_expr(rng: &mut ChaCha8Rng, cs: &[String], rs: &[String], depth: u32) -> String {
    let k = if depth == 0 || rs.is_empty() { 0 } else { rng.random_range(0..6) };
    match k {
        0..=2 => pick(rng, cs).to_string(),
        3 => format!(
            "{} and {}",
            pick(rng, cs),
            concept_expr(rng, cs, rs, depth - 1)
        ),
        4 => {
            let inner = concept_expr(rng, cs, rs, depth - 1);
            if inner.contains(' ') {
                format!("exists {}.({inner})", pick(rng, rs))
            } else {
                format!("exists {}.{inner}", pick(rng, rs))
            }
        }
        _ => "top".to_string(),
    }
}

/// A random EL+ hybrid KB in surface syntax. Every rule variable is guarded
/// by the non-DL predicate `o`, so the rules are DL-safe.
pub fn random_kb(rng: &mut ChaCha8Rng, shape: Shape) -> String {
    let nc = rng.random_range(1..=shape.concepts);
    let nr = rng.random_range(0..=shape.roles);
    let ni = rng.random_range(1..=shape.individuals);
    let cs: Vec<String> = (0..nc).map(|i| format!("C{i}")).collect();
    let rs: Vec<String> = (0..nr).map(|i| format!("R{i}")).collect();
    let inds: Vec<String> = INDS[..ni].iter().map(|s| s.to_string()).collect();
    let ps: Vec<String> = (0..2).map(|i| format!("p{i}")).collect();
    let mut out = String::from("%tbox\n");
    for _ in 0..rng.random_range(0..=shape.axioms) {
        let k = rng.random_range(0..10);
        let line = match k {
            0..=4 => {
                let lhs = concept_expr(rng, &cs, &rs, 2);
                let rhs = concept_expr(rng, &cs, &rs, 2);
                format!("{lhs} <= {rhs}.")
            }
            5 | 6 => format!("{} and {} <= bot.", pick(rng, &cs), pick(rng, &cs)),
            7 if !rs.is_empty() => format!("exists {}.{} <= bot.", pick(rng, &rs), pick(rng, &cs)),
            8 if !rs.is_empty() => format!("role {} <= {}.", pick(rng, &rs), pick(rng, &rs)),
            9 if shape.chains && !rs.is_empty() => {
                format!("{} o {} <= {}.", pick(rng, &rs), pick(rng, &rs), pick(rng, &rs))
            }
            _ => format!("{} <= {}.", pick(rng, &cs), pick(rng, &cs)),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("%abox\n");
    for _ in 0..rng.random_range(0..=shape.assertions) {
        if !rs.is_empty() && rng.random_bool(0.4) {
            out.push_str(&format!("{}({},{}).\n", pick(rng, &rs), pick(rng, &inds), pick(rng, &inds)));
        } else {
            out.push_str(&format!("{}({}).\n", pick(rng, &cs), pick(rng, &inds)));
        }
    }
    out.push_str("%rules\n");
    for i in &inds {
        out.push_str(&format!("o({i}).\n"));
    }
    // the guard facts count towards the rule budget
    for _ in 0..rng.random_range(0..=shape.rules.saturating_sub(inds.len())) {
        out.push_str(&random_rule(rng, &cs, &rs, &ps, &inds));
        out.push('\n');
    }
    out
}

fn random_rule(rng: &mut ChaCha8Rng, cs: &[String], rs: &[String], ps: &[String], inds: &[String]) -> String {
    let ground = rng.random_bool(0.3);
    let term = |rng: &mut ChaCha8Rng| -> String {
        if ground {
            pick(rng, inds).to_string()
        } else if rng.random_bool(0.75) {
            "X".to_string()
        } else {
            "Y".to_string()
        }
    };
    let atom = |rng: &mut ChaCha8Rng| -> String {
        let k = rng.random_range(0..10);
        if k < 5 {
            format!("{}({})", pick(rng, cs), term(rng))
        } else if k < 7 && !rs.is_empty() {
            format!("{}({},{})", pick(rng, rs), term(rng), term(rng))
        } else if k < 9 {
            format!("{}({})", pick(rng, ps), term(rng))
        } else {
            "u".to_string()
        }
    };
    let head = atom(rng);
    let mut body = Vec::new();
    for _ in 0..rng.random_range(0..=3) {
        let a = atom(rng);
        body.push(if rng.random_bool(0.5) { format!("not {a}") } else { a });
    }
    let text = format!("{head} {}", body.join(" "));
    for v in ["X", "Y"] {
        if text.contains(&format!("({v}")) || text.contains(&format!(",{v}")) {
            body.push(format!("o({v})"));
        }
    }
    if body.is_empty() {
        format!("{head}.")
    } else {
        format!("{head} :- {}.", body.join(", "))
    }
}

/// A random normal program over a few constants, with unrestricted
/// variables.
pub fn random_program(rng: &mut ChaCha8Rng) -> String {
    let preds = ["p", "q", "r", "s"];
    let consts = ["a", "b"];
    let mut out = String::new();
    for _ in 0..rng.random_range(1..=8) {
        let atom = |rng: &mut ChaCha8Rng| -> String {
            // r and s are propositional, p and q unary
            let p = preds[rng.random_range(0..preds.len())];
            match rng.random_range(0..3) {
                _ if p == "r" || p == "s" => p.to_string(),
                0 => format!("{p}(X)"),
                _ => format!("{p}({})", consts[rng.random_range(0..consts.len())]),
            }
        };
        let head = atom(rng);
        let mut body = Vec::new();
        for _ in 0..rng.random_range(0..=3) {
            let a = atom(rng);
            body.push(if rng.random_bool(0.5) { format!("not {a}") } else { a });
        }
        if body.is_empty() {
            out.push_str(&format!("{head}.\n"));
        } else {
            out.push_str(&format!("{head} :- {}.\n", body.join(", ")));
        }
    }
    out
}

// ---------------------------------------------------------------- oracles

/// Naive well-founded model of a program: the W_P iteration with the
/// greatest unfounded set, over the program's ground instantiation.
pub fn naive_wfs(program: &Program) -> BTreeMap<GroundAtom, Truth> {
    let domain: Vec<ConstId> = program.constants().into_iter().collect();
    let ground = ground_rules(&program.rules, &domain);
    let rules: Vec<(GroundAtom, Vec<GroundAtom>, Vec<GroundAtom>)> = ground
        .rules
        .iter()
        .map(|r| {
            let g = |a: &hybrid_mknf::Atom| a.to_ground().unwrap();
            let pos = r.body.iter().filter_map(|l| if let Literal::Pos(a) = l { Some(g(a)) } else { None }).collect();
            let neg = r.body.iter().filter_map(|l| if let Literal::Neg(a) = l { Some(g(a)) } else { None }).collect();
            (g(&r.head), pos, neg)
        })
        .collect();
    let mut atoms: BTreeSet<GroundAtom> = BTreeSet::new();
    for (h, p, n) in &rules {
        atoms.insert(h.clone());
        atoms.extend(p.iter().cloned());
        atoms.extend(n.iter().cloned());
    }
    let mut t: BTreeSet<GroundAtom> = BTreeSet::new();
    let mut f: BTreeSet<GroundAtom> = BTreeSet::new();
    loop {
        // T_P: heads of rules whose body is true
        let t2: BTreeSet<GroundAtom> = rules
            .iter()
            .filter(|(_, p, n)| p.iter().all(|a| t.contains(a)) && n.iter().all(|a| f.contains(a)))
            .map(|(h, _, _)| h.clone())
            .collect();
        // greatest unfounded set: atoms without a possible derivation
        let mut possible: BTreeSet<GroundAtom> = BTreeSet::new();
        loop {
            let mut changed = false;
            for (h, p, n) in &rules {
                if possible.contains(h) {
                    continue;
                }
                let body_ok = p.iter().all(|a| !f.contains(a) && possible.contains(a))
                    && n.iter().all(|a| !t.contains(a));
                if body_ok {
                    possible.insert(h.clone());
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let f2: BTreeSet<GroundAtom> = atoms.difference(&possible).cloned().collect();
        let t2: BTreeSet<GroundAtom> = t.union(&t2).cloned().collect();
        let f2: BTreeSet<GroundAtom> = f.union(&f2).cloned().collect();
        if t2 == t && f2 == f {
            break;
        }
        t = t2;
        f = f2;
    }
    atoms
        .into_iter()
        .map(|a| {
            let v = if t.contains(&a) {
                Truth::True
            } else if f.contains(&a) {
                Truth::False
            } else {
                Truth::Undefined
            };
            (a, v)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    C(Concept),
    I(ConstId),
}

/// Naive completion: CR1-CR7 applied in full passes until nothing changes.
pub struct NaiveCompletion {
    pub s: BTreeMap<Node, BTreeSet<Concept>>,
    pub t: BTreeMap<PredId, BTreeSet<(Node, Node)>>,
}

impl NaiveCompletion {
    /// `extra` individuals get a node even without assertions.
    pub fn run(nt: &NormalizedTBox, abox: &[Assertion], extra: &[ConstId]) -> Self {
        let mut s: BTreeMap<Node, BTreeSet<Concept>> = BTreeMap::new();
        let mut t: BTreeMap<PredId, BTreeSet<(Node, Node)>> = BTreeMap::new();
        for c in nt.basic_concepts() {
            s.insert(Node::C(c), BTreeSet::from([c, Concept::Top]));
        }
        for &i in extra {
            s.insert(Node::I(i), BTreeSet::from([Concept::Top]));
        }
        for a in abox {
            match *a {
                Assertion::Concept(c, i) => {
                    s.entry(Node::I(i)).or_insert_with(|| BTreeSet::from([Concept::Top])).insert(Concept::Named(c));
                }
                Assertion::Role(r, i, j) => {
                    s.entry(Node::I(i)).or_insert_with(|| BTreeSet::from([Concept::Top]));
                    s.entry(Node::I(j)).or_insert_with(|| BTreeSet::from([Concept::Top]));
                    t.entry(r).or_default().insert((Node::I(i), Node::I(j)));
                }
            }
        }
        loop {
            let mut add_s: Vec<(Node, Concept)> = Vec::new();
            let mut add_t: Vec<(PredId, Node, Node)> = Vec::new();
            for (&x, sx) in &s {
                for ax in &nt.axioms {
                    match *ax {
                        NormalAxiom::Sub { sub, sup } if sx.contains(&sub) => add_s.push((x, sup)),
                        NormalAxiom::Conj { left, right, sup } if sx.contains(&left) && sx.contains(&right) => {
                            add_s.push((x, sup))
                        }
                        NormalAxiom::SubExists { sub, role, filler } if sx.contains(&sub) => {
                            add_t.push((role, x, Node::C(filler)))
                        }
                        _ => {}
                    }
                }
            }
            for (&r, pairs) in &t {
                for &(x, y) in pairs {
                    let sy = &s[&y];
                    if sy.contains(&Concept::Bottom) {
                        add_s.push((x, Concept::Bottom));
                    }
                    for ax in &nt.axioms {
                        match *ax {
                            NormalAxiom::ExistsSub { role, filler, sup } if role == r && sy.contains(&filler) => {
                                add_s.push((x, sup))
                            }
                            NormalAxiom::RoleSub { sub, sup } if sub == r => add_t.push((sup, x, y)),
                            NormalAxiom::RoleChain { first, second, sup } if first == r => {
                                for &(y2, z) in t.get(&second).into_iter().flatten() {
                                    if y2 == y {
                                        add_t.push((sup, x, z));
                                    }
                                }
                            }
                            _ => {}
                        }
                    }
                }
            }
            let mut changed = false;
            for (x, c) in add_s {
                changed |= s.get_mut(&x).unwrap().insert(c);
            }
            for (r, x, y) in add_t {
                s.entry(y).or_insert_with(|| match y {
                    Node::C(c) => BTreeSet::from([c, Concept::Top]),
                    Node::I(_) => BTreeSet::from([Concept::Top]),
                });
                changed |= t.entry(r).or_default().insert((x, y));
            }
            if !changed {
                return NaiveCompletion { s, t };
            }
        }
    }

    pub fn concept_s(&self) -> BTreeMap<Concept, BTreeSet<Concept>> {
        self.s.iter().filter_map(|(n, v)| if let Node::C(c) = n { Some((*c, v.clone())) } else { None }).collect()
    }

    pub fn concept_t(&self) -> BTreeMap<PredId, BTreeSet<(Concept, Concept)>> {
        let mut out: BTreeMap<PredId, BTreeSet<(Concept, Concept)>> = BTreeMap::new();
        for (&r, pairs) in &self.t {
            for &(x, y) in pairs {
                if let (Node::C(c), Node::C(d)) = (x, y) {
                    out.entry(r).or_default().insert((c, d));
                }
            }
        }
        out
    }

    /// Named concepts per individual and role pairs between individuals.
    pub fn instances(&self) -> InstanceSets {
        let mut cs = BTreeSet::new();
        let mut rs = BTreeSet::new();
        for (n, v) in &self.s {
            if let Node::I(a) = n {
                for c in v {
                    if let Concept::Named(p) = c {
                        cs.insert((*p, *a));
                    }
                }
            }
        }
        for (&r, pairs) in &self.t {
            for &(x, y) in pairs {
                if let (Node::I(a), Node::I(b)) = (x, y) {
                    rs.insert((r, a, b));
                }
            }
        }
        (cs, rs)
    }

    pub fn inconsistent(&self) -> bool {
        self.s.iter().any(|(n, v)| {
            v.contains(&Concept::Bottom) && (matches!(n, Node::I(_)) || *n == Node::C(Concept::Top))
        })
    }
}

// ---------------------------------------------------------------- corpora

/// Programs with positive and negative loops.
pub const LOOP_PROGRAMS: &[&str] = &[
    "p :- p.",
    "p :- not p.",
    "p :- not q. q :- not p.",
    "p :- not q. q :- not r. r.",
    "a :- not b. b :- not c. c :- not a.",
    "p :- q, not r. q :- p. q :- not s. s :- not q. r :- not r.",
    "p(a). p(b). q(X) :- p(X), not r(X). r(a) :- not q(a).",
    "w :- not w, x. x :- not y. y :- not x. x.",
    "p :- q. q :- p. r :- not p.",
    "p :- not q, not r. q :- not r, not p. r :- not p, not q.",
    "e(a,b). e(b,a). e(b,c). win(X) :- e(X,Y), not win(Y).",
];

/// Parses a KB and compiles it; `None` for parse errors or an inconsistent
/// ontology.
pub fn compile(src: &str) -> Option<(hybrid_mknf::HybridKb, hybrid_mknf::transform::CompiledKb)> {
    let kb = hybrid_mknf::parse_kb(src).ok()?;
    let c = hybrid_mknf::transform::build_combined(&kb).ok()?;
    Some((kb, c))
}

/// `n` random KBs with consistent ontologies, deterministic in `seed`.
pub fn random_corpus(seed: u64, n: usize, shape: Shape) -> Vec<String> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let src = random_kb(&mut r, shape);
        if compile(&src).is_some() {
            out.push(src);
        }
    }
    out
}
