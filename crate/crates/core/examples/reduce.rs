//! Normal form, completed TBox and reduced TBox.

use hybrid_mknf::el::{classify, complete_tbox, normalize, reduce_direct, reduce_tbox};
use hybrid_mknf::parse_kb;
use hybrid_mknf::serialize::{axioms_text, Format};

pub fn main() {
    let mut kb = parse_kb(include_str!("kb/existential.kb")).unwrap();
    let nt = normalize(&kb.ontology.tbox.clone(), &mut kb.symbols);
    let maps = classify(&nt);
    let completed = complete_tbox(&nt, &maps);
    let reduced = reduce_tbox(&completed);

    println!("# normal form");
    print!("{}", axioms_text(&nt.axioms, &kb.symbols, Format::Text));
    println!("# completed");
    print!("{}", axioms_text(&completed, &kb.symbols, Format::Text));
    println!("# reduced");
    print!("{}", axioms_text(&reduced, &kb.symbols, Format::Text));

    // reducing directly from the maps gives the same axioms
    let mut direct = reduce_direct(&nt, &maps);
    let mut r = reduced.clone();
    direct.sort();
    r.sort();
    assert_eq!(direct, r);
}
