//! Tabled evaluation with delaying, simplification, SCC-based completion
//! and answer completion.

use crate::error::{Error, Result};
use crate::logic::{Atom, GroundAtom, Literal, Pred, Program, Rule, Term, Truth};
use crate::symbols::{ConstId, SymbolTable};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

/// Order in which pending work is picked up.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Depth-first: newest work first.
    #[default]
    Local,
    /// Breadth-first: oldest work first.
    Batched,
}

pub const DEFAULT_STEP_BUDGET: u64 = 50_000_000;

pub type SubgoalId = u32;
type AnsId = u32;
/// Condition `k` of answer `a` of table `s`.
type CondRef = (SubgoalId, AnsId, u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum T {
    V(u32),
    C(ConstId),
}

#[derive(Clone, Debug)]
struct CAtom {
    pred: Pred,
    args: Vec<T>,
}

#[derive(Clone, Debug)]
struct Clause {
    head: CAtom,
    /// Positive literals first, in source order, then negative ones.
    body: Vec<(bool, CAtom)>,
    nvars: usize,
}

#[derive(Default)]
struct PredIndex {
    all: Vec<u32>,
    by_arg: Vec<HashMap<ConstId, Vec<u32>>>,
    var_at: Vec<Vec<u32>>,
}

/// A delayed literal inside a conditional answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DelayLit {
    /// `not S`, S a ground subgoal.
    Neg(SubgoalId),
    /// A positive call resolved against a conditional answer.
    Pos(SubgoalId, u32),
}

#[derive(Clone, Debug)]
struct Cond {
    lits: Vec<DelayLit>,
    alive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    True,
    Cond,
    False,
}

#[derive(Clone, Debug)]
struct Answer {
    args: Vec<ConstId>,
    status: Status,
    conds: Vec<Cond>,
}

impl Answer {
    fn has_live_cond(&self) -> bool {
        self.conds.iter().any(|c| c.alive)
    }
}

#[derive(Clone, Debug)]
struct Frame {
    sid: SubgoalId,
    clause: u32,
    pos: u32,
    binds: Vec<Option<ConstId>>,
    delays: Vec<DelayLit>,
}

#[derive(Clone, Debug)]
struct Table {
    pred: Pred,
    goal: Vec<T>,
    answers: Vec<Answer>,
    index: HashMap<Vec<ConstId>, AnsId>,
    complete: bool,
    has_true: bool,
    failed_fired: bool,
    consumers: Vec<Frame>,
    neg_waiters: Vec<Frame>,
    pos_deps: Vec<SubgoalId>,
    neg_deps: Vec<SubgoalId>,
    dep_set: HashSet<SubgoalId>,
}

impl Table {
    fn is_failed(&self) -> bool {
        self.complete && self.answers.iter().all(|a| a.status == Status::False)
    }
}

enum Event {
    AnsTrue(SubgoalId, AnsId),
    AnsFalse(SubgoalId, AnsId),
    Failed(SubgoalId),
}

/// An SLG evaluator over one program. Tables persist across calls, so
/// repeated queries reuse earlier work.
pub struct Engine {
    clauses: Vec<Clause>,
    index: HashMap<Pred, PredIndex>,
    domain: Vec<ConstId>,
    strategy: Strategy,
    budget: u64,
    steps: u64,
    tables: Vec<Table>,
    /// Incomplete tables.
    open: BTreeSet<SubgoalId>,
    table_of: HashMap<(Pred, Vec<T>), SubgoalId>,
    queue: VecDeque<Frame>,
    pos_refs: HashMap<(SubgoalId, AnsId), Vec<CondRef>>,
    neg_refs: HashMap<SubgoalId, Vec<CondRef>>,
    events: Vec<Event>,
    touched: Vec<(SubgoalId, AnsId)>,
}

fn compile_clause(rule: &Rule) -> Clause {
    let vars = rule.vars();
    let t = |term: &Term| match term {
        Term::Const(c) => T::C(*c),
        Term::Var(v) => T::V(vars.iter().position(|w| w == v).unwrap() as u32),
    };
    let atom = |a: &Atom| CAtom { pred: a.pred, args: a.args.iter().map(t).collect() };
    let mut body: Vec<(bool, CAtom)> = Vec::new();
    body.extend(rule.body.iter().filter_map(|l| match l {
        Literal::Pos(a) => Some((true, atom(a))),
        _ => None,
    }));
    body.extend(rule.body.iter().filter_map(|l| match l {
        Literal::Neg(a) => Some((false, atom(a))),
        _ => None,
    }));
    Clause { head: atom(&rule.head), body, nvars: vars.len() }
}

impl Engine {
    pub fn new(program: &Program, strategy: Strategy) -> Self {
        let mut e = Engine {
            clauses: Vec::new(),
            index: HashMap::new(),
            domain: program.constants().into_iter().collect(),
            strategy,
            budget: DEFAULT_STEP_BUDGET,
            steps: 0,
            tables: Vec::new(),
            open: BTreeSet::new(),
            table_of: HashMap::new(),
            queue: VecDeque::new(),
            pos_refs: HashMap::new(),
            neg_refs: HashMap::new(),
            events: Vec::new(),
            touched: Vec::new(),
        };
        for r in &program.rules {
            e.add_clause(r);
        }
        e
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Work units spent so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn domain(&self) -> &[ConstId] {
        &self.domain
    }

    fn add_clause(&mut self, rule: &Rule) {
        let c = compile_clause(rule);
        let k = self.clauses.len() as u32;
        let ix = self.index.entry(c.head.pred).or_default();
        if ix.by_arg.len() < c.head.args.len() {
            ix.by_arg.resize_with(c.head.args.len(), HashMap::new);
            ix.var_at.resize_with(c.head.args.len(), Vec::new);
        }
        ix.all.push(k);
        for (i, a) in c.head.args.iter().enumerate() {
            match a {
                T::C(x) => ix.by_arg[i].entry(*x).or_default().push(k),
                T::V(_) => ix.var_at[i].push(k),
            }
        }
        self.clauses.push(c);
    }

    /// Replaces the clauses of the query predicate and forgets its tables.
    /// Nothing else can depend on them.
    pub(crate) fn set_query_rule(&mut self, rule: &Rule) {
        let q = Pred::query();
        // old clause slots stay allocated but become unreachable
        self.index.remove(&q);
        self.table_of.retain(|(p, _), _| *p != q);
        self.add_clause(rule);
    }

    fn candidates(&self, pred: Pred, goal: &[T]) -> Vec<u32> {
        let Some(ix) = self.index.get(&pred) else { return Vec::new() };
        let mut best: Option<Vec<u32>> = None;
        for (i, a) in goal.iter().enumerate() {
            if let T::C(c) = a {
                if i >= ix.by_arg.len() {
                    return Vec::new();
                }
                let hit = ix.by_arg[i].get(c).map_or(0, Vec::len) + ix.var_at[i].len();
                if best.as_ref().is_none_or(|b| hit < b.len()) {
                    let mut v: Vec<u32> = ix.by_arg[i].get(c).cloned().unwrap_or_default();
                    v.extend(&ix.var_at[i]);
                    v.sort_unstable();
                    best = Some(v);
                }
            }
        }
        best.unwrap_or_else(|| ix.all.clone())
    }

    fn canonical(pred: Pred, args: &[T], binds: &[Option<ConstId>]) -> (Pred, Vec<T>) {
        let mut seen: Vec<u32> = Vec::new();
        let out = args
            .iter()
            .map(|a| match *a {
                T::C(c) => T::C(c),
                T::V(v) => match binds[v as usize] {
                    Some(c) => T::C(c),
                    None => {
                        let k = seen.iter().position(|&w| w == v).unwrap_or_else(|| {
                            seen.push(v);
                            seen.len() - 1
                        });
                        T::V(k as u32)
                    }
                },
            })
            .collect();
        (pred, out)
    }

    /// The table for a goal, created (and scheduled) if new.
    fn subgoal(&mut self, pred: Pred, goal: Vec<T>) -> SubgoalId {
        if let Some(&s) = self.table_of.get(&(pred, goal.clone())) {
            return s;
        }
        let sid = self.tables.len() as SubgoalId;
        self.tables.push(Table {
            pred,
            goal: goal.clone(),
            answers: Vec::new(),
            index: HashMap::new(),
            complete: false,
            has_true: false,
            failed_fired: false,
            consumers: Vec::new(),
            neg_waiters: Vec::new(),
            pos_deps: Vec::new(),
            neg_deps: Vec::new(),
            dep_set: HashSet::new(),
        });
        self.table_of.insert((pred, goal.clone()), sid);
        self.open.insert(sid);
        for k in self.candidates(pred, &goal) {
            let c = &self.clauses[k as usize];
            let mut binds = vec![None; c.nvars];
            let mut gv: Vec<Option<T>> = Vec::new();
            if unify_head(&c.head.args, &goal, &mut binds, &mut gv) {
                self.push(Frame { sid, clause: k, pos: 0, binds, delays: Vec::new() });
            }
        }
        sid
    }

    fn push(&mut self, f: Frame) {
        self.queue.push_back(f);
    }

    fn pop(&mut self) -> Option<Frame> {
        match self.strategy {
            Strategy::Local => self.queue.pop_back(),
            Strategy::Batched => self.queue.pop_front(),
        }
    }

    fn add_dep(&mut self, from: SubgoalId, to: SubgoalId, positive: bool) {
        let t = &mut self.tables[from as usize];
        let key = if positive { to } else { to | 1 << 31 };
        if t.dep_set.insert(key) {
            if positive {
                t.pos_deps.push(to);
            } else {
                t.neg_deps.push(to);
            }
        }
    }

    /// Evaluates a goal to completion and returns its table.
    pub fn evaluate(&mut self, goal: &Atom) -> Result<SubgoalId> {
        let vars = goal.vars().collect::<Vec<_>>();
        let args: Vec<T> = goal
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => T::C(*c),
                Term::Var(v) => T::V(vars.iter().position(|w| w == v).unwrap() as u32),
            })
            .collect();
        let (pred, canon) = Self::canonical(goal.pred, &args, &vec![None; vars.len()]);
        let sid = self.subgoal(pred, canon);
        self.run()?;
        Ok(sid)
    }

    fn run(&mut self) -> Result<()> {
        loop {
            while let Some(f) = self.pop() {
                self.steps += 1;
                if self.steps > self.budget {
                    return Err(Error::StepBudget(self.budget));
                }
                self.step(f);
            }
            if !self.complete_some() {
                return Ok(());
            }
        }
    }

    fn step(&mut self, mut f: Frame) {
        let clause = &self.clauses[f.clause as usize];
        if f.pos as usize == clause.body.len() {
            self.emit(f);
            return;
        }
        let (positive, lit) = clause.body[f.pos as usize].clone();
        if positive {
            let (pred, canon) = Self::canonical(lit.pred, &lit.args, &f.binds);
            let sid = self.subgoal(pred, canon);
            self.add_dep(f.sid, sid, true);
            let answers: Vec<AnsId> = (0..self.tables[sid as usize].answers.len() as AnsId).collect();
            for a in answers {
                self.feed(&f, sid, a);
            }
            if !self.tables[sid as usize].complete {
                self.tables[sid as usize].consumers.push(f);
            }
            return;
        }
        // a negative literal; unbound variables range over the domain
        let unbound: Vec<u32> = lit
            .args
            .iter()
            .filter_map(|a| match a {
                T::V(v) if f.binds[*v as usize].is_none() => Some(*v),
                _ => None,
            })
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        if !unbound.is_empty() {
            for b in instantiations(&unbound, &self.domain) {
                let mut g = f.clone();
                for (v, c) in unbound.iter().zip(b) {
                    g.binds[*v as usize] = Some(c);
                }
                self.push(g);
            }
            return;
        }
        let (pred, canon) = Self::canonical(lit.pred, &lit.args, &f.binds);
        let sid = self.subgoal(pred, canon);
        self.add_dep(f.sid, sid, false);
        let t = &self.tables[sid as usize];
        if t.has_true {
            return;
        }
        if t.complete {
            if !t.is_failed() {
                f.delays.push(DelayLit::Neg(sid));
            }
            f.pos += 1;
            self.push(f);
        } else {
            self.tables[sid as usize].neg_waiters.push(f);
        }
    }

    /// Resumes a consumer frame with one answer of `sid`.
    fn feed(&mut self, f: &Frame, sid: SubgoalId, a: AnsId) {
        let ans = &self.tables[sid as usize].answers[a as usize];
        if ans.status == Status::False {
            return;
        }
        let lit = &self.clauses[f.clause as usize].body[f.pos as usize].1;
        let mut binds = f.binds.clone();
        for (t, &c) in lit.args.iter().zip(&ans.args) {
            match *t {
                T::C(k) if k != c => return,
                T::C(_) => {}
                T::V(v) => match binds[v as usize] {
                    Some(b) if b != c => return,
                    Some(_) => {}
                    None => binds[v as usize] = Some(c),
                },
            }
        }
        let mut delays = f.delays.clone();
        if ans.status == Status::Cond {
            delays.push(DelayLit::Pos(sid, a));
        }
        self.push(Frame { sid: f.sid, clause: f.clause, pos: f.pos + 1, binds, delays });
    }

    fn emit(&mut self, f: Frame) {
        let head = &self.clauses[f.clause as usize].head;
        let unbound: Vec<u32> = head
            .args
            .iter()
            .filter_map(|a| match a {
                T::V(v) if f.binds[*v as usize].is_none() => Some(*v),
                _ => None,
            })
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let head_args = head.args.clone();
        let ground = |binds: &[Option<ConstId>]| -> Vec<ConstId> {
            head_args
                .iter()
                .map(|a| match *a {
                    T::C(c) => c,
                    T::V(v) => binds[v as usize].unwrap(),
                })
                .collect()
        };
        if unbound.is_empty() {
            let args = ground(&f.binds);
            self.add_answer(f.sid, args, f.delays);
        } else {
            for b in instantiations(&unbound, &self.domain.clone()) {
                let mut binds = f.binds.clone();
                for (v, c) in unbound.iter().zip(b) {
                    binds[*v as usize] = Some(c);
                }
                let args = ground(&binds);
                self.add_answer(f.sid, args, f.delays.clone());
            }
        }
    }

    /// Drops satisfied delay literals; `None` if the list is already false.
    fn simplify(&self, delays: Vec<DelayLit>) -> Option<Vec<DelayLit>> {
        let mut out = Vec::with_capacity(delays.len());
        for d in delays {
            match d {
                DelayLit::Pos(s, a) => match self.tables[s as usize].answers[a as usize].status {
                    Status::True => {}
                    Status::False => return None,
                    Status::Cond => out.push(d),
                },
                DelayLit::Neg(s) => {
                    let t = &self.tables[s as usize];
                    if t.has_true {
                        return None;
                    }
                    if !t.is_failed() {
                        out.push(d);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    fn add_answer(&mut self, sid: SubgoalId, args: Vec<ConstId>, delays: Vec<DelayLit>) {
        if !matches_goal(&self.tables[sid as usize].goal, &args) {
            return;
        }
        let Some(delays) = self.simplify(delays) else { return };
        let existing = self.tables[sid as usize].index.get(&args).copied();
        if let Some(a) = existing {
            if self.tables[sid as usize].answers[a as usize].status == Status::True {
                return;
            }
            if delays.is_empty() {
                self.make_true(sid, a);
                self.process_events();
                return;
            }
            let ans = &mut self.tables[sid as usize].answers[a as usize];
            if !ans.conds.iter().any(|c| c.alive && c.lits == delays) {
                let k = ans.conds.len() as u32;
                ans.conds.push(Cond { lits: delays.clone(), alive: true });
                self.register(sid, a, k, &delays);
            }
            return;
        }
        let uncond = delays.is_empty();
        let t = &mut self.tables[sid as usize];
        let a = t.answers.len() as AnsId;
        t.index.insert(args.clone(), a);
        t.answers.push(Answer {
            args,
            status: if uncond { Status::True } else { Status::Cond },
            conds: if uncond { Vec::new() } else { vec![Cond { lits: delays.clone(), alive: true }] },
        });
        if uncond {
            t.has_true = true;
        } else {
            self.register(sid, a, 0, &delays);
        }
        let consumers = self.tables[sid as usize].consumers.clone();
        for c in &consumers {
            self.feed(c, sid, a);
        }
        if uncond {
            // `not S` delayed on a ground S that just became true
            self.events.push(Event::AnsTrue(sid, a));
            self.process_events();
        }
    }

    fn register(&mut self, sid: SubgoalId, a: AnsId, k: u32, lits: &[DelayLit]) {
        for d in lits {
            match *d {
                DelayLit::Pos(s, b) => self.pos_refs.entry((s, b)).or_default().push((sid, a, k)),
                DelayLit::Neg(s) => self.neg_refs.entry(s).or_default().push((sid, a, k)),
            }
        }
    }

    fn make_true(&mut self, sid: SubgoalId, a: AnsId) {
        let t = &mut self.tables[sid as usize];
        let ans = &mut t.answers[a as usize];
        if ans.status == Status::True {
            return;
        }
        ans.status = Status::True;
        for c in &mut ans.conds {
            c.alive = false;
        }
        t.has_true = true;
        self.events.push(Event::AnsTrue(sid, a));
    }

    fn kill_cond(&mut self, sid: SubgoalId, a: AnsId, k: u32) {
        let t = &mut self.tables[sid as usize];
        let ans = &mut t.answers[a as usize];
        let c = &mut ans.conds[k as usize];
        if !c.alive || ans.status != Status::Cond {
            return;
        }
        c.alive = false;
        if t.complete {
            if ans.has_live_cond() {
                self.touched.push((sid, a));
            } else {
                ans.status = Status::False;
                self.events.push(Event::AnsFalse(sid, a));
            }
        }
    }

    fn remove_lit(&mut self, sid: SubgoalId, a: AnsId, k: u32, lit: DelayLit) {
        let ans = &mut self.tables[sid as usize].answers[a as usize];
        let c = &mut ans.conds[k as usize];
        if !c.alive || ans.status != Status::Cond {
            return;
        }
        c.lits.retain(|d| *d != lit);
        if c.lits.is_empty() {
            self.make_true(sid, a);
        }
    }

    fn process_events(&mut self) {
        while let Some(e) = self.events.pop() {
            match e {
                Event::AnsTrue(s, a) => {
                    for (t, b, k) in self.pos_refs.get(&(s, a)).cloned().unwrap_or_default() {
                        self.remove_lit(t, b, k, DelayLit::Pos(s, a));
                    }
                    for (t, b, k) in self.neg_refs.get(&s).cloned().unwrap_or_default() {
                        self.kill_cond(t, b, k);
                    }
                }
                Event::AnsFalse(s, a) => {
                    for (t, b, k) in self.pos_refs.get(&(s, a)).cloned().unwrap_or_default() {
                        self.kill_cond(t, b, k);
                    }
                    if self.tables[s as usize].is_failed() {
                        self.events.push(Event::Failed(s));
                    }
                }
                Event::Failed(s) => {
                    if std::mem::replace(&mut self.tables[s as usize].failed_fired, true) {
                        continue;
                    }
                    for (t, b, k) in self.neg_refs.get(&s).cloned().unwrap_or_default() {
                        self.remove_lit(t, b, k, DelayLit::Neg(s));
                    }
                }
            }
        }
    }

    /// With no work left: complete the lowest SCCs of incomplete tables, or
    /// delay the negative literals of a negative loop. Returns whether new
    /// work may exist.
    fn complete_some(&mut self) -> bool {
        if self.open.is_empty() {
            return false;
        }
        let open = self.closed_suffix();
        let mut g: DiGraph<SubgoalId, ()> = DiGraph::with_capacity(open.len(), 0);
        let mut node: HashMap<SubgoalId, NodeIndex> = HashMap::new();
        for &s in &open {
            node.insert(s, g.add_node(s));
        }
        for &s in &open {
            let t = &self.tables[s as usize];
            for d in t.pos_deps.iter().chain(&t.neg_deps) {
                if let Some(&n) = node.get(d) {
                    g.add_edge(node[&s], n, ());
                }
            }
        }
        // Components come lowest first. One round handles every component
        // whose outside dependencies are complete and that has no work
        // queued in this round.
        let mut busy: HashSet<SubgoalId> = HashSet::new();
        for scc in tarjan_scc(&g) {
            let members: HashSet<SubgoalId> = scc.iter().map(|&n| g[n]).collect();
            let blocked = members.iter().any(|&s| {
                let t = &self.tables[s as usize];
                busy.contains(&s)
                    || t.pos_deps.iter().chain(&t.neg_deps).any(|d| {
                        !self.tables[*d as usize].complete && !members.contains(d)
                    })
            });
            if blocked {
                continue;
            }
            let mut ordered: Vec<SubgoalId> = members.iter().copied().collect();
            ordered.sort_unstable();
            let before = self.queue.len();
            // negative waiters from inside the component: a negative loop
            let mut delayed = false;
            for &s in &ordered {
                let waiters = std::mem::take(&mut self.tables[s as usize].neg_waiters);
                let (inside, outside): (Vec<Frame>, Vec<Frame>) =
                    waiters.into_iter().partition(|f| members.contains(&f.sid));
                self.tables[s as usize].neg_waiters = outside;
                for mut f in inside {
                    delayed = true;
                    if self.tables[s as usize].has_true {
                        continue;
                    }
                    f.delays.push(DelayLit::Neg(s));
                    f.pos += 1;
                    self.push(f);
                }
            }
            if delayed {
                busy.extend(&ordered);
            } else {
                self.complete_scc(&ordered);
            }
            busy.extend(self.queue.iter().skip(before).map(|f| f.sid));
        }
        true
    }

    /// The youngest open tables that depend on no older open table. Their
    /// lowest components are lowest among all open tables, and looking only
    /// at them keeps each completion round proportional to recent work.
    fn closed_suffix(&self) -> Vec<SubgoalId> {
        let mut reach = SubgoalId::MAX;
        for &s in self.open.iter().rev() {
            let t = &self.tables[s as usize];
            for &d in t.pos_deps.iter().chain(&t.neg_deps) {
                if !self.tables[d as usize].complete {
                    reach = reach.min(d);
                }
            }
            if reach >= s {
                return self.open.range(s..).copied().collect();
            }
        }
        self.open.iter().copied().collect()
    }

    fn complete_scc(&mut self, scc: &[SubgoalId]) {
        for &s in scc {
            self.open.remove(&s);
            let t = &mut self.tables[s as usize];
            t.complete = true;
            t.consumers.clear();
        }
        for &s in scc {
            for a in 0..self.tables[s as usize].answers.len() as AnsId {
                let ans = &mut self.tables[s as usize].answers[a as usize];
                if ans.status == Status::Cond {
                    if ans.has_live_cond() {
                        self.touched.push((s, a));
                    } else {
                        ans.status = Status::False;
                        self.events.push(Event::AnsFalse(s, a));
                    }
                }
            }
            if self.tables[s as usize].is_failed() {
                self.events.push(Event::Failed(s));
            }
        }
        loop {
            self.process_events();
            if !self.answer_completion() {
                break;
            }
        }
        for &s in scc {
            let waiters = std::mem::take(&mut self.tables[s as usize].neg_waiters);
            let (has_true, failed) = (self.tables[s as usize].has_true, self.tables[s as usize].is_failed());
            for mut f in waiters {
                if has_true {
                    continue;
                }
                if !failed {
                    f.delays.push(DelayLit::Neg(s));
                }
                f.pos += 1;
                self.push(f);
            }
        }
    }

    /// Conditional answers of complete tables that are supported only
    /// through positive loops become false. Returns whether any did.
    fn answer_completion(&mut self) -> bool {
        let cands: Vec<(SubgoalId, AnsId)> = std::mem::take(&mut self.touched)
            .into_iter()
            .filter(|&(s, a)| {
                let t = &self.tables[s as usize];
                t.complete && t.answers[a as usize].status == Status::Cond
            })
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        if cands.is_empty() {
            return false;
        }
        let cand_set: HashSet<(SubgoalId, AnsId)> = cands.iter().copied().collect();
        let mut supported: HashSet<(SubgoalId, AnsId)> = HashSet::new();
        loop {
            let mut changed = false;
            for &(s, a) in &cands {
                if supported.contains(&(s, a)) {
                    continue;
                }
                let ans = &self.tables[s as usize].answers[a as usize];
                let ok = ans.conds.iter().filter(|c| c.alive).any(|c| {
                    c.lits.iter().all(|d| match *d {
                        DelayLit::Neg(_) => true,
                        DelayLit::Pos(t, b) => {
                            let st = self.tables[t as usize].answers[b as usize].status;
                            st == Status::True
                                || (st == Status::Cond
                                    && (!cand_set.contains(&(t, b)) || supported.contains(&(t, b))))
                        }
                    })
                });
                if ok {
                    supported.insert((s, a));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut any = false;
        for (s, a) in cands {
            if !supported.contains(&(s, a)) {
                let ans = &mut self.tables[s as usize].answers[a as usize];
                ans.status = Status::False;
                for c in &mut ans.conds {
                    c.alive = false;
                }
                self.events.push(Event::AnsFalse(s, a));
                any = true;
            }
        }
        any
    }

    /// Truth value of a ground atom (evaluating it if needed).
    pub fn value(&mut self, atom: &GroundAtom) -> Result<Truth> {
        let sid = self.evaluate(&atom.to_atom())?;
        Ok(self.table_value(sid, &atom.args))
    }

    fn table_value(&self, sid: SubgoalId, args: &[ConstId]) -> Truth {
        let t = &self.tables[sid as usize];
        match t.index.get(args).map(|&a| t.answers[a as usize].status) {
            Some(Status::True) => Truth::True,
            Some(Status::Cond) => Truth::Undefined,
            _ => Truth::False,
        }
    }

    /// Answers of an evaluated goal with their values; false answers are
    /// left out.
    pub fn answers(&mut self, goal: &Atom) -> Result<Vec<(GroundAtom, Truth)>> {
        let sid = self.evaluate(goal)?;
        let t = &self.tables[sid as usize];
        let mut out: Vec<(GroundAtom, Truth)> = t
            .answers
            .iter()
            .filter(|a| a.status != Status::False)
            .map(|a| {
                let v = if a.status == Status::True { Truth::True } else { Truth::Undefined };
                (GroundAtom::new(t.pred, a.args.clone()), v)
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Values of every ground atom the evaluation has touched: all answers
    /// of all tables, plus ground subgoals without answers (false).
    pub fn answer_table(&self) -> BTreeMap<GroundAtom, Truth> {
        let mut out = BTreeMap::new();
        for t in &self.tables {
            if t.pred == Pred::query() {
                continue;
            }
            for a in &t.answers {
                let v = match a.status {
                    Status::True => Truth::True,
                    Status::Cond => Truth::Undefined,
                    Status::False => Truth::False,
                };
                out.insert(GroundAtom::new(t.pred, a.args.clone()), v);
            }
            if let Some(args) = ground_goal(&t.goal) {
                out.entry(GroundAtom::new(t.pred, args)).or_insert(Truth::False);
            }
        }
        out
    }

    /// Number of tables created so far.
    pub fn table_count(&self) -> usize {
        self.tables.len()
    }

    /// Predicates that have a table.
    pub fn tabled_preds(&self) -> HashSet<Pred> {
        self.tables.iter().map(|t| t.pred).collect()
    }

    /// Deterministic dump of every table in creation order.
    pub fn export_forest(&self, syms: &SymbolTable) -> String {
        let mut out = String::new();
        let goal = |t: &Table| {
            let args: Vec<String> = t
                .goal
                .iter()
                .map(|a| match a {
                    T::C(c) => syms.const_name(*c).to_string(),
                    T::V(v) => format!("_V{v}"),
                })
                .collect();
            if args.is_empty() {
                t.pred.name(syms)
            } else {
                format!("{}({})", t.pred.name(syms), args.join(","))
            }
        };
        for (i, t) in self.tables.iter().enumerate() {
            let status = if t.complete { "complete" } else { "incomplete" };
            let _ = writeln!(out, "table {i} {} [{status}]", goal(t));
            for a in &t.answers {
                let atom = GroundAtom::new(t.pred, a.args.clone()).display(syms);
                match a.status {
                    Status::True => {
                        let _ = writeln!(out, "  answer {atom} true");
                    }
                    Status::False => {
                        let _ = writeln!(out, "  answer {atom} false");
                    }
                    Status::Cond => {
                        let conds: Vec<String> = a
                            .conds
                            .iter()
                            .filter(|c| c.alive)
                            .map(|c| {
                                let ls: Vec<String> = c
                                    .lits
                                    .iter()
                                    .map(|d| match *d {
                                        DelayLit::Neg(s) => format!("not {}", goal(&self.tables[s as usize])),
                                        DelayLit::Pos(s, b) => GroundAtom::new(
                                            self.tables[s as usize].pred,
                                            self.tables[s as usize].answers[b as usize].args.clone(),
                                        )
                                        .display(syms),
                                    })
                                    .collect();
                                format!("{{{}}}", ls.join(", "))
                            })
                            .collect();
                        let _ = writeln!(out, "  answer {atom} undefined delays {}", conds.join(" | "));
                    }
                }
            }
            if !t.pos_deps.is_empty() || !t.neg_deps.is_empty() {
                let p: Vec<String> = t.pos_deps.iter().map(|d| d.to_string()).collect();
                let n: Vec<String> = t.neg_deps.iter().map(|d| d.to_string()).collect();
                let _ = writeln!(out, "  calls +[{}] -[{}]", p.join(","), n.join(","));
            }
        }
        out
    }
}

fn ground_goal(goal: &[T]) -> Option<Vec<ConstId>> {
    goal.iter().map(|a| if let T::C(c) = a { Some(*c) } else { None }).collect()
}

/// Unifies a clause head with a canonical goal. Goal variables are
/// tracked in `gv` so that repeated goal variables stay consistent.
fn unify_head(head: &[T], goal: &[T], binds: &mut [Option<ConstId>], gv: &mut Vec<Option<T>>) -> bool {
    for (h, g) in head.iter().zip(goal) {
        match (*h, *g) {
            (T::C(a), T::C(b)) => {
                if a != b {
                    return false;
                }
            }
            (T::V(v), T::C(b)) => match binds[v as usize] {
                Some(a) if a != b => return false,
                _ => binds[v as usize] = Some(b),
            },
            (_, T::V(w)) => {
                let w = w as usize;
                if gv.len() <= w {
                    gv.resize(w + 1, None);
                }
                match gv[w] {
                    None => gv[w] = Some(*h),
                    Some(T::C(a)) => {
                        if let T::C(b) = *h {
                            if a != b {
                                return false;
                            }
                        }
                    }
                    Some(T::V(_)) => {}
                }
            }
        }
    }
    true
}

fn matches_goal(goal: &[T], args: &[ConstId]) -> bool {
    let mut seen: HashMap<u32, ConstId> = HashMap::new();
    for (g, &c) in goal.iter().zip(args) {
        match *g {
            T::C(k) if k != c => return false,
            T::C(_) => {}
            T::V(v) => {
                if *seen.entry(v).or_insert(c) != c {
                    return false;
                }
            }
        }
    }
    true
}

/// Every assignment of domain constants to `n` variables.
fn instantiations(vars: &[u32], domain: &[ConstId]) -> Vec<Vec<ConstId>> {
    let mut out = vec![Vec::new()];
    for _ in vars {
        out = out
            .into_iter()
            .flat_map(|p| {
                domain.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}
