//! EL+ reasoning: normal form, classification, completed and reduced TBoxes,
//! instance saturation and ontology consistency.

mod normalize;
mod saturate;

pub use normalize::{normalize, Concept, FreshOrigin, NormalAxiom, NormalizedTBox};
pub(crate) use saturate::{instance_saturate_indexed, AxiomIndex};
pub use saturate::{
    check_ontology_consistency, classify, instance_saturate, subsumes, ClassificationMaps,
    Consistency, InstanceGraph,
};

/// The completed TBox: `nt` plus `C <= D` for every `D in S(C)` and
/// `C <= exists R.D` for every `(C,D) in T(R)`, without the trivial
/// `C <= C` and `C <= top`.
pub fn complete_tbox(nt: &NormalizedTBox, maps: &ClassificationMaps) -> Vec<NormalAxiom> {
    let mut out = nt.axioms.clone();
    let mut seen: std::collections::HashSet<NormalAxiom> = out.iter().copied().collect();
    for (&c, ds) in &maps.s {
        for &d in ds {
            if d == c || d == Concept::Top {
                continue;
            }
            let ax = NormalAxiom::Sub { sub: c, sup: d };
            if seen.insert(ax) {
                out.push(ax);
            }
        }
    }
    for (&r, pairs) in &maps.t {
        for &(c, d) in pairs {
            let ax = NormalAxiom::SubExists { sub: c, role: r, filler: d };
            if seen.insert(ax) {
                out.push(ax);
            }
        }
    }
    out
}

/// Drops every `C <= exists R.D`.
pub fn reduce_tbox(completed: &[NormalAxiom]) -> Vec<NormalAxiom> {
    completed.iter().copied().filter(|a| !a.is_sub_exists()).collect()
}

/// The shortcut: the normalized TBox without its existential right-hand
/// sides, plus the S-derived subsumptions. Equal to
/// `reduce_tbox(complete_tbox(nt, maps))`.
pub fn reduce_direct(nt: &NormalizedTBox, maps: &ClassificationMaps) -> Vec<NormalAxiom> {
    let mut out: Vec<NormalAxiom> = nt.axioms.iter().copied().filter(|a| !a.is_sub_exists()).collect();
    let mut seen: std::collections::HashSet<NormalAxiom> = out.iter().copied().collect();
    for (&c, ds) in &maps.s {
        for &d in ds {
            if d == c || d == Concept::Top {
                continue;
            }
            let ax = NormalAxiom::Sub { sub: c, sup: d };
            if seen.insert(ax) {
                out.push(ax);
            }
        }
    }
    out
}
