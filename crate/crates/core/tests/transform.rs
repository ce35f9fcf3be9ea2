mod common;

use hybrid_mknf::logic::{Literal, PredKind};
use hybrid_mknf::transform::*;
use hybrid_mknf::{parse_kb, HybridKb};
use std::collections::BTreeSet;

fn shown(rules: &[TaggedRule], kb: &hybrid_mknf::symbols::SymbolTable) -> BTreeSet<String> {
    rules.iter().map(|t| t.rule.display(kb).to_string()).collect()
}

#[test]
fn running_example_doubles_to_eight_rules() {
    let kb = parse_kb(include_str!("../examples/kb/running.kb")).unwrap();
    let rules = double_rules(&kb.program, &kb.symbols);
    let want: BTreeSet<String> = [
        "p(X) :- not D^d(X), o(X).",
        "p^d(X) :- not D(X), o^d(X).",
        "E(X) :- not E^d(X), o(X).",
        "E^d(X) :- not E(X), o^d(X), not N^E(X).",
        "o(a).",
        "o^d(a).",
        "o(b).",
        "o^d(b).",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    assert_eq!(rules.len(), 8);
    assert_eq!(shown(&rules, &kb.symbols), want);
    let marked = rules
        .iter()
        .filter(|t| t.rule.body.iter().any(|l| l.atom().pred.kind == PredKind::Marker))
        .count();
    assert_eq!(marked, 1);
}

#[test]
fn guards_can_stay_undoubled() {
    let kb = parse_kb(include_str!("../examples/kb/running.kb")).unwrap();
    let rules = double_rules_with(&kb.program, &kb.symbols, DoublingOptions { undouble_guards: true });
    let s = shown(&rules, &kb.symbols);
    assert!(s.contains("p^d(X) :- not D(X), o(X)."));
    assert!(!s.iter().any(|r| r.contains("o^d")));
}

#[test]
fn existential_example_compiles() {
    let kb = parse_kb(include_str!("../examples/kb/existential.kb")).unwrap();
    let c = build_combined(&kb).unwrap();
    let s = shown(&c.rules, &c.symbols);
    // C <= exists R.D is gone after reduction; exists R.C <= D stays
    assert!(s.contains("D(X) :- R(X,Y), C(Y)."));
    assert!(s.contains("D^d(X) :- R^d(X,Y), C^d(Y), not N^D(X)."));
    assert!(c.rules.iter().all(|t| t.tag != Tag::A1 || t.rule.body.is_empty()));
}

#[test]
fn disjointness_yields_markers() {
    let kb = parse_kb("%tbox\nA and B <= bot.\nexists R.A <= bot.\n%abox\n%rules\n").unwrap();
    let c = build_combined(&kb).unwrap();
    let s = shown(&c.rules, &c.symbols);
    assert!(s.contains("N^A(X) :- B(X)."), "{s:?}");
    assert!(s.contains("N^B(X) :- A(X)."), "{s:?}");
    assert!(s.contains("N^R(X,Y) :- A(Y)."), "{s:?}");
}

#[test]
fn role_axioms_translate() {
    let kb = parse_kb("%tbox\nrole R <= S.\nR o S <= T.\n%abox\nR(a,b).\n%rules\n").unwrap();
    let c = build_combined(&kb).unwrap();
    let tags: BTreeSet<Tag> = c.rules.iter().map(|t| t.tag).collect();
    assert!(tags.contains(&Tag::R1));
    assert!(tags.contains(&Tag::R2));
    assert!(tags.contains(&Tag::A2));
    let s = shown(&c.rules, &c.symbols);
    assert!(s.contains("S(X,Y) :- R(X,Y)."), "{s:?}");
}

#[test]
fn inconsistent_ontology_is_refused() {
    let kb = parse_kb("%tbox\nA and B <= bot.\n%abox\nA(a).\nB(a).\n%rules\n").unwrap();
    let err = build_combined(&kb).unwrap_err();
    assert_eq!(err.exit_code(), 5);
}

/// Every compiled rule is either a truth rule over plain atoms, or a
/// non-falsity rule whose positive body and head are doubled.
#[test]
fn compiled_rules_are_well_formed() {
    for src in common::random_corpus(31, 100, common::Shape::small()) {
        let kb: HybridKb = parse_kb(&src).unwrap();
        let c = build_combined(&kb).unwrap();
        for t in &c.rules {
            let r = &t.rule;
            match r.head.pred.kind {
                PredKind::Base => assert!(r.positive().all(|a| a.pred.kind == PredKind::Base)),
                PredKind::Doubled => {
                    assert!(r.positive().all(|a| a.pred.kind == PredKind::Doubled));
                    assert!(r.negative().all(|a| a.pred.kind != PredKind::Doubled));
                }
                PredKind::Marker => {
                    assert!(r.body.iter().all(|l| matches!(l, Literal::Pos(a) if a.pred.kind == PredKind::Base)))
                }
                PredKind::Query => panic!("query head in compiled program"),
            }
            assert!(Tag::parse(t.tag.as_str()) == Some(t.tag));
        }
    }
}
