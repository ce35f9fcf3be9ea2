//! Greatest unfounded sets along the doubled alternating fixpoint.

use hybrid_mknf::parse_kb;
use hybrid_mknf::wfs::{
    alternating_fixpoint_d, AtomSet, GroundKb, OntologyOracle, PositiveEntailment, UnfoundedChecker,
    DEFAULT_UNFOUNDED_CAP,
};

pub fn main() {
    let kb = parse_kb(include_str!("kb/undefined_body.kb")).unwrap();
    let oracle = OntologyOracle::new(&kb, PositiveEntailment::default());
    let g = GroundKb::doubled(&kb, Some(&oracle)).unwrap();
    let trace = alternating_fixpoint_d(&g);
    let checker = UnfoundedChecker::new(&g, DEFAULT_UNFOUNDED_CAP).unwrap();
    let show = |s: &AtomSet| s.iter().map(|a| a.display(&kb.symbols)).collect::<Vec<_>>().join(", ");
    for i in 0..trace.n.len() - 1 {
        let f: AtomSet = g.ka.difference(&trace.n[i]).cloned().collect();
        let u = checker.greatest(&trace.p[i], &f);
        let next: AtomSet = g.ka.difference(&trace.n[i + 1]).cloned().collect();
        println!("step {i}: U = {{{}}}", show(&u));
        println!("        KA \\ N_{} = {{{}}}", i + 1, show(&next));
    }
}
