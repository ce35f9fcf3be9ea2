//! Compile a hybrid KB into one doubled rule program, with the schema
//! behind every rule.

use hybrid_mknf::parse_kb;
use hybrid_mknf::serialize::{parse_structured_program, program_text, Format};
use hybrid_mknf::transform::build_combined;

pub fn main() {
    let kb = parse_kb(include_str!("kb/running.kb")).unwrap();
    let compiled = build_combined(&kb).unwrap();
    print!("{}", program_text(&compiled.rules, &compiled.symbols, Format::Text));

    let structured = program_text(&compiled.rules, &compiled.symbols, Format::Structured);
    let mut syms = compiled.symbols.clone();
    let back = parse_structured_program(&structured, &mut syms).unwrap();
    assert_eq!(back, compiled.rules);
    println!("{} rules, structured dump reads back", back.len());
}
