//! Hybrid MKNF knowledge bases over EL+ ontologies.
//!
//! A knowledge base pairs an EL+ ontology with DL-safe rules under default
//! negation. The crate classifies and reduces the ontology, compiles the whole
//! base into one doubled rule program, and evaluates it under the
//! well-founded semantics, either top-down with tabled SLG resolution
//! ([`slg`]) or bottom-up with the alternating fixpoint ([`wfs`]).

pub mod cli;
pub mod el;
pub mod error;
pub mod kb;
pub mod logic;
pub mod ontology;
pub mod parser;
pub mod serialize;
pub mod slg;
pub mod symbols;
pub mod transform;
pub mod wfs;

pub use error::{Error, Location, Result};
pub use kb::HybridKb;
pub use logic::{Atom, GroundAtom, Literal, Pred, PredKind, Program, Rule, Term, Truth};
pub use parser::{parse_kb, parse_program, parse_query, Query};
