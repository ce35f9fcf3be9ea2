//! A KB whose rules contradict its ontology. The compiled program stays
//! paraconsistent: the contradiction is confined to R(a), which the probe
//! flags, while unrelated atoms keep their values.

use hybrid_mknf::slg::{inconsistency_probe, query_literal, Engine, Strategy};
use hybrid_mknf::transform::build_combined;
use hybrid_mknf::{parse_kb, parse_query};

pub fn main() {
    let kb = parse_kb(include_str!("kb/marker.kb")).unwrap();
    let compiled = build_combined(&kb).unwrap();
    let mut syms = compiled.symbols.clone();
    let mut engine = Engine::new(&compiled.program(), Strategy::Local);

    for text in ["Q(a)", "R(a)", "R^d(a)", "not R(a)", "p(a)"] {
        let q = parse_query(text, &mut syms).unwrap();
        println!("{text}: {}", query_literal(&mut engine, &q.body[0]).unwrap().as_str());
    }
    for text in ["Q(a)", "R(a)"] {
        let atom = parse_query(text, &mut syms).unwrap().body[0].atom().to_ground().unwrap();
        let flagged = inconsistency_probe(&mut engine, &atom).unwrap();
        println!("probe {text}: {}", if flagged { "MKNF-inconsistent" } else { "not flagged" });
    }
}
