//! The three-valued model of a KB, read off the compiled program, in text
//! and structured form.

use hybrid_mknf::parse_kb;
use hybrid_mknf::serialize::{kb_text, model_text, Format};
use hybrid_mknf::transform::build_combined;
use hybrid_mknf::wfs::compiled_model;

pub fn main() {
    let kb = parse_kb(include_str!("kb/running.kb")).unwrap();
    print!("{}", kb_text(&kb));
    let compiled = build_combined(&kb).unwrap();
    let model = compiled_model(&compiled).unwrap();
    print!("{}", model_text(&model, &compiled.symbols, Format::Text));
    print!("{}", model_text(&model, &compiled.symbols, Format::Structured));
    println!("MKNF-consistent: {}", model.mknf_consistent());
}
