mod common;

use hybrid_mknf::el::{classify, normalize};
use hybrid_mknf::serialize::*;
use hybrid_mknf::symbols::SymbolTable;
use hybrid_mknf::transform::build_combined;
use hybrid_mknf::wfs::{compiled_model, ThreeValuedModel};
use hybrid_mknf::{parse_kb, parse_program};
use proptest::prelude::*;

#[test]
fn kb_text_round_trips_on_examples() {
    for src in [
        include_str!("../examples/kb/running.kb"),
        include_str!("../examples/kb/existential.kb"),
        include_str!("../examples/kb/marker.kb"),
        include_str!("../examples/kb/empty.kb"),
    ] {
        let once = kb_text(&parse_kb(src).unwrap());
        assert_eq!(kb_text(&parse_kb(&once).unwrap()), once);
    }
}

#[test]
fn empty_model_has_three_sections() {
    let text = model_text(&ThreeValuedModel::default(), &SymbolTable::new(), Format::Text);
    assert_eq!(text, "%true\n%undefined\n%false\n");
    assert_eq!(model_text(&ThreeValuedModel::default(), &SymbolTable::new(), Format::Structured), "");
}

#[test]
fn running_example_model() {
    let kb = parse_kb(include_str!("../examples/kb/running.kb")).unwrap();
    let c = build_combined(&kb).unwrap();
    let m = compiled_model(&c).unwrap();
    let text = model_text(&m, &c.symbols, Format::Text);
    let sections: Vec<&str> = text.split('%').collect();
    assert!(sections[1].starts_with("true") && sections[1].contains("p(a)."));
    assert!(sections[2].starts_with("undefined") && sections[2].contains("E(a)."));
    assert!(sections[3].starts_with("false") && sections[3].contains("D(a)."));
    let s = model_text(&m, &c.symbols, Format::Structured);
    assert!(s.lines().any(|l| l == "kind=atom value=undefined text=E(a)"));
}

#[test]
fn compiled_program_round_trips() {
    let kb = parse_kb(include_str!("../examples/kb/existential.kb")).unwrap();
    let c = build_combined(&kb).unwrap();
    let text = program_text(&c.rules, &c.symbols, Format::Text);
    assert!(text.lines().any(|l| l == "D(X) :- R(X,Y), C(Y).  #tag: c3"));
    // the text form is a rule file with comments
    let mut syms = c.symbols.clone();
    assert_eq!(parse_program(&text, &mut syms).unwrap(), c.program());

    let structured = program_text(&c.rules, &c.symbols, Format::Structured);
    let mut syms = c.symbols.clone();
    let back = parse_structured_program(&structured, &mut syms).unwrap();
    assert_eq!(back, c.rules);
    assert_eq!(program_text(&back, &syms, Format::Structured), structured);
}

#[test]
fn structured_errors() {
    let mut syms = SymbolTable::new();
    assert!(parse_structured_program("kind=atom text=p.", &mut syms).is_err());
    assert!(parse_structured_program("kind=rule tag=zz text=p.", &mut syms).is_err());
    let err = parse_structured_program("kind=rule tag=c1 text=p.\nkind=rule tag=c1 text=p :-", &mut syms).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().starts_with("2:"), "{err}");
}

#[test]
fn classification_dump() {
    let mut kb = parse_kb("%tbox\nA <= exists R.B.\n%abox\n%rules\n").unwrap();
    let nt = normalize(&kb.ontology.tbox.clone(), &mut kb.symbols);
    let maps = classify(&nt);
    let text = classification_text(&maps, &kb.symbols, Format::Text);
    assert!(text.contains("S(A) = {top, A}"), "{text}");
    assert!(text.contains("T(R) = {(A, B)}"), "{text}");
    let s = classification_text(&maps, &kb.symbols, Format::Structured);
    assert!(s.contains("kind=t role=R sub=A filler=B"));
    let empty = parse_kb("").unwrap();
    let mut syms = empty.symbols.clone();
    let nt = normalize(&[], &mut syms);
    assert_eq!(classification_text(&classify(&nt), &syms, Format::Text), "S(top) = {top}\n");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_kbs_round_trip(seed in any::<u64>()) {
        let src = common::random_kb(&mut common::rng(seed), common::Shape::small());
        let kb = parse_kb(&src).unwrap();
        let once = kb_text(&kb);
        let again = parse_kb(&once).unwrap();
        prop_assert_eq!(kb_text(&again), once);
        prop_assert_eq!(again.ontology, kb.ontology);
    }

    #[test]
    fn generated_programs_round_trip(seed in any::<u64>()) {
        let src = common::random_kb(&mut common::rng(seed), common::Shape::small());
        if let Some((_, c)) = common::compile(&src) {
            let s = program_text(&c.rules, &c.symbols, Format::Structured);
            let mut syms = c.symbols.clone();
            prop_assert_eq!(parse_structured_program(&s, &mut syms).unwrap(), c.rules);
        }
    }
}
