//! Classify an EL+ TBox: the S and T maps and a few subsumption checks.

use hybrid_mknf::el::{classify, normalize, subsumes, Concept};
use hybrid_mknf::parse_kb;
use hybrid_mknf::serialize::{classification_text, Format};

pub fn main() {
    let mut kb = parse_kb(
        "%tbox
         Heart <= Organ and exists partOf.Circulatory.
         exists partOf.Circulatory <= CirculatoryPart.
         partOf o partOf <= partOf.
         Organ and CirculatoryPart <= VitalOrgan.",
    )
    .expect("valid TBox");
    let nt = normalize(&kb.ontology.tbox.clone(), &mut kb.symbols);
    let maps = classify(&nt);
    print!("{}", classification_text(&maps, &kb.symbols, Format::Text));

    let c = |n: &str| Concept::Named(kb.symbols.pred(n).unwrap());
    let vital = subsumes(&maps, c("Heart"), c("VitalOrgan")).unwrap();
    println!("Heart <= VitalOrgan: {vital}");
    assert!(vital);
}
