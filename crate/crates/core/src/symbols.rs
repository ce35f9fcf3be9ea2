//! Interned names for predicates, individuals and variables.
//!
//! Concept and role names are predicates of arity 1 and 2 that carry the DL
//! flag; rule-only predicates share the same id space so a rule atom can refer
//! to a concept directly.

use indexmap::IndexSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

#[derive(Clone, Debug, Default)]
struct Interner {
    names: IndexSet<String>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(i) = self.names.get_index_of(name) {
            return i as u32;
        }
        self.names.insert_full(name.to_string()).0 as u32
    }

    fn get(&self, name: &str) -> Option<u32> {
        self.names.get_index_of(name).map(|i| i as u32)
    }

    fn resolve(&self, id: u32) -> &str {
        self.names
            .get_index(id as usize)
            .map(String::as_str)
            .unwrap_or("<?>")
    }

    fn len(&self) -> usize {
        self.names.len()
    }
}

/// Per-predicate metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredInfo {
    pub arity: usize,
    /// Occurs in the ontology (TBox or ABox).
    pub dl: bool,
    /// Introduced by normalization rather than written by the user.
    pub fresh: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    preds: Interner,
    info: Vec<PredInfo>,
    consts: Interner,
    vars: Interner,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns a predicate. The arity of an existing predicate is not changed;
    /// callers check for arity clashes via [`SymbolTable::info`].
    pub fn intern_pred(&mut self, name: &str, arity: usize) -> PredId {
        let id = self.preds.intern(name);
        if id as usize == self.info.len() {
            self.info.push(PredInfo {
                arity,
                dl: false,
                fresh: false,
            });
        }
        PredId(id)
    }

    pub fn pred(&self, name: &str) -> Option<PredId> {
        self.preds.get(name).map(PredId)
    }

    pub fn pred_name(&self, id: PredId) -> &str {
        self.preds.resolve(id.0)
    }

    pub fn info(&self, id: PredId) -> &PredInfo {
        &self.info[id.0 as usize]
    }

    pub fn set_dl(&mut self, id: PredId) {
        self.info[id.0 as usize].dl = true;
    }

    pub fn is_dl(&self, id: PredId) -> bool {
        self.info.get(id.0 as usize).is_some_and(|i| i.dl)
    }

    pub fn arity(&self, id: PredId) -> usize {
        self.info[id.0 as usize].arity
    }

    /// Introduces a DL predicate with a name of the form `_<prefix><k>` that
    /// is not yet taken. Such names cannot clash with parsed user names
    /// because the parser rejects a leading underscore outside variables.
    pub fn fresh_pred(&mut self, prefix: &str, arity: usize) -> PredId {
        let mut k = self.preds.len();
        loop {
            let name = format!("_{prefix}{k}");
            if self.preds.get(&name).is_none() {
                let id = self.intern_pred(&name, arity);
                let info = &mut self.info[id.0 as usize];
                info.dl = true;
                info.fresh = true;
                return id;
            }
            k += 1;
        }
    }

    pub fn num_preds(&self) -> usize {
        self.info.len()
    }

    pub fn preds(&self) -> impl Iterator<Item = PredId> + '_ {
        (0..self.info.len() as u32).map(PredId)
    }

    /// Concept names: DL predicates of arity 1.
    pub fn concepts(&self) -> impl Iterator<Item = PredId> + '_ {
        self.preds().filter(|&p| self.info(p).dl && self.info(p).arity == 1)
    }

    /// Role names: DL predicates of arity 2.
    pub fn roles(&self) -> impl Iterator<Item = PredId> + '_ {
        self.preds().filter(|&p| self.info(p).dl && self.info(p).arity == 2)
    }

    pub fn intern_const(&mut self, name: &str) -> ConstId {
        ConstId(self.consts.intern(name))
    }

    pub fn constant(&self, name: &str) -> Option<ConstId> {
        self.consts.get(name).map(ConstId)
    }

    pub fn const_name(&self, id: ConstId) -> &str {
        self.consts.resolve(id.0)
    }

    pub fn num_consts(&self) -> usize {
        self.consts.len()
    }

    pub fn consts(&self) -> impl Iterator<Item = ConstId> + '_ {
        (0..self.consts.len() as u32).map(ConstId)
    }

    pub fn intern_var(&mut self, name: &str) -> VarId {
        VarId(self.vars.intern(name))
    }

    /// Variable names are only used for printing; ids beyond the interned
    /// range (renamed-apart copies) print as `_G<n>`.
    pub fn var_name(&self, id: VarId) -> String {
        if (id.0 as usize) < self.vars.len() {
            self.vars.resolve(id.0).to_string()
        } else {
            format!("_G{}", id.0)
        }
    }
}

impl fmt::Display for PredId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}
