//! Top-down queries: the full pipeline answers ground and open queries.

use hybrid_mknf::slg::{answer_query, query_literal, Engine, Strategy};
use hybrid_mknf::transform::build_combined;
use hybrid_mknf::{parse_kb, parse_query, Truth};

pub fn main() {
    let kb = parse_kb(include_str!("kb/existential.kb")).unwrap();
    let compiled = build_combined(&kb).unwrap();
    let mut syms = compiled.symbols.clone();
    let mut engine = Engine::new(&compiled.program(), Strategy::Local);

    for text in ["G(a)", "G(b)", "not G(b)"] {
        let q = parse_query(text, &mut syms).unwrap();
        let v = query_literal(&mut engine, &q.body[0]).unwrap();
        println!("{text}: {}", v.as_str());
    }

    let q = parse_query("G(X), o(X)", &mut syms).unwrap();
    for a in answer_query(&mut engine, &q).unwrap() {
        println!("X = {}: {}", syms.const_name(a.binding[0]), a.value.as_str());
        assert_eq!(a.value, Truth::True);
    }
    println!("{} tables, {} steps", engine.table_count(), engine.steps());
}
