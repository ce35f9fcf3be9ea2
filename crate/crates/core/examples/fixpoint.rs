//! The bottom-up reference semantics: the alternating fixpoint of a KB,
//! its doubled counterpart and the MKNF-consistency test.

use hybrid_mknf::parse_kb;
use hybrid_mknf::wfs::{
    alternating_fixpoint, alternating_fixpoint_d, consistency_check, GroundKb, OntologyOracle,
    PositiveEntailment,
};

pub fn main() {
    for (name, src) in [
        ("running", include_str!("kb/running.kb")),
        ("contradiction", include_str!("kb/contradiction.kb")),
        ("existential", include_str!("kb/existential.kb")),
    ] {
        let kb = parse_kb(src).unwrap();
        let oracle = OntologyOracle::new(&kb, PositiveEntailment::default());
        let g = GroundKb::original(&kb, Some(&oracle)).unwrap();
        let trace = alternating_fixpoint(&g);
        println!("== {name}");
        print!("{}", trace.render(&kb.symbols));
        println!("verdict: {:?}", consistency_check(&g, &trace));

        let d = GroundKb::doubled(&kb, Some(&oracle)).unwrap();
        let td = alternating_fixpoint_d(&d);
        println!("doubled fixpoint reached after {} steps", td.p.len() - 1);
    }
}
