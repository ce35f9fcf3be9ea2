mod common;

use common::{random_kb, rng, InstanceSets as Sets, NaiveCompletion, Shape};
use hybrid_mknf::el::*;
use hybrid_mknf::parse_kb;
use hybrid_mknf::wfs::{OntologyOracle, PositiveEntailment};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn normalized(src: &str) -> (hybrid_mknf::HybridKb, NormalizedTBox) {
    let mut kb = parse_kb(src).unwrap();
    let nt = normalize(&kb.ontology.tbox.clone(), &mut kb.symbols);
    (kb, nt)
}

#[test]
fn classify_example() {
    let (kb, nt) = normalized("%tbox\nA <= exists R.B.\nexists R.B <= C.\nC and A <= D.\n%abox\n%rules\n");
    let maps = classify(&nt);
    let c = |n: &str| Concept::Named(kb.symbols.pred(n).unwrap());
    assert!(subsumes(&maps, c("A"), c("D")).unwrap());
    assert!(!subsumes(&maps, c("B"), c("C")).unwrap());
    assert!(subsumes(&maps, c("A"), Concept::Top).unwrap());
}

#[test]
fn role_chain_propagates() {
    let src = "%tbox\nA <= exists R.B.\nB <= exists R.C.\nR o R <= S.\nexists S.C <= D.\n%abox\n%rules\n";
    let (kb, nt) = normalized(src);
    let maps = classify(&nt);
    let c = |n: &str| Concept::Named(kb.symbols.pred(n).unwrap());
    assert!(subsumes(&maps, c("A"), c("D")).unwrap());
}

#[test]
fn unsatisfiable_concept_is_below_everything() {
    let (kb, nt) = normalized("%tbox\nA <= B.\nB and A <= bot.\nC <= exists R.A.\n%abox\n%rules\n");
    let maps = classify(&nt);
    let c = |n: &str| Concept::Named(kb.symbols.pred(n).unwrap());
    assert!(maps.s[&c("A")].contains(&Concept::Bottom));
    assert!(maps.s[&c("C")].contains(&Concept::Bottom));
    assert!(subsumes(&maps, c("A"), c("C")).unwrap());
}

#[test]
fn empty_tbox_has_only_seeds() {
    let (_, nt) = normalized("%tbox\n%abox\n%rules\n");
    let maps = classify(&nt);
    assert_eq!(maps.s.len(), 1);
    assert_eq!(maps.s[&Concept::Top], BTreeSet::from([Concept::Top]));
}

#[test]
fn inconsistent_abox_is_detected() {
    let (kb, nt) = normalized("%tbox\nA and B <= bot.\n%abox\nA(a).\nB(a).\n%rules\n");
    let a = kb.symbols.constant("a").unwrap();
    assert_eq!(check_ontology_consistency(&nt, &kb.ontology.abox), Consistency::Inconsistent(Some(a)));
    let (kb, nt) = normalized("%tbox\ntop <= bot.\n%abox\n%rules\n");
    assert_eq!(check_ontology_consistency(&nt, &kb.ontology.abox), Consistency::Inconsistent(None));
}

#[test]
fn normal_forms_are_flat() {
    let (_, nt) = normalized(
        "%tbox\nA and exists R.(B and exists S.C) <= exists R.(D and E).\nR o S o T <= U.\n%abox\n%rules\n",
    );
    for ax in &nt.axioms {
        match *ax {
            NormalAxiom::Sub { sub, .. } | NormalAxiom::SubExists { sub, .. } => assert_ne!(sub, Concept::Bottom),
            NormalAxiom::Conj { left, right, .. } => {
                assert_ne!(left, Concept::Bottom);
                assert_ne!(right, Concept::Bottom);
            }
            NormalAxiom::ExistsSub { filler, .. } => assert_ne!(filler, Concept::Bottom),
            _ => {}
        }
    }
    assert!(nt.axioms.iter().any(|a| matches!(a, NormalAxiom::RoleChain { .. })));
    assert!(!nt.fresh.is_empty());
}

/// CR1-CR7 applied once more to the maps adds nothing.
fn cr_closed(nt: &NormalizedTBox, maps: &ClassificationMaps) -> bool {
    let empty = BTreeSet::new();
    for (&c, s) in &maps.s {
        if !s.contains(&c) || !s.contains(&Concept::Top) {
            return false;
        }
        for ax in &nt.axioms {
            match *ax {
                NormalAxiom::Sub { sub, sup } if s.contains(&sub) && !s.contains(&sup) => return false,
                NormalAxiom::Conj { left, right, sup }
                    if s.contains(&left) && s.contains(&right) && !s.contains(&sup) =>
                {
                    return false
                }
                NormalAxiom::SubExists { sub, role, filler }
                    if s.contains(&sub) && !maps.t.get(&role).unwrap_or(&BTreeSet::new()).contains(&(c, filler)) =>
                {
                    return false
                }
                _ => {}
            }
        }
    }
    for (&r, pairs) in &maps.t {
        for &(c, d) in pairs {
            let sc = &maps.s[&c];
            let sd = maps.s.get(&d).unwrap_or(&empty);
            if sd.contains(&Concept::Bottom) && !sc.contains(&Concept::Bottom) {
                return false;
            }
            for ax in &nt.axioms {
                match *ax {
                    NormalAxiom::ExistsSub { role, filler, sup } if role == r && sd.contains(&filler) => {
                        if !sc.contains(&sup) {
                            return false;
                        }
                    }
                    NormalAxiom::RoleSub { sub, sup } if sub == r => {
                        if !maps.t.get(&sup).is_some_and(|p| p.contains(&(c, d))) {
                            return false;
                        }
                    }
                    NormalAxiom::RoleChain { first, second, sup } if first == r => {
                        for &(d2, e) in maps.t.get(&second).unwrap_or(&BTreeSet::new()) {
                            if d2 == d && !maps.t.get(&sup).is_some_and(|p| p.contains(&(c, e))) {
                                return false;
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classifier_matches_naive_oracle(seed in any::<u64>()) {
        let (_, nt) = normalized(&random_kb(&mut rng(seed), Shape::small()));
        let maps = classify(&nt);
        let naive = NaiveCompletion::run(&nt, &[], &[]);
        prop_assert_eq!(&maps.s, &naive.concept_s());
        let t: std::collections::BTreeMap<_, _> =
            maps.t.iter().filter(|(_, v)| !v.is_empty()).map(|(k, v)| (*k, v.clone())).collect();
        prop_assert_eq!(t, naive.concept_t());
        prop_assert!(cr_closed(&nt, &maps));
    }

    #[test]
    fn instance_saturation_matches_naive_oracle(seed in any::<u64>()) {
        let (kb, nt) = normalized(&random_kb(&mut rng(seed), Shape::small()));
        let g = instance_saturate(&nt, &kb.ontology.abox, []);
        let naive = NaiveCompletion::run(&nt, &kb.ontology.abox, &[]);
        let (cs, rs) = naive.instances();
        let mine: BTreeSet<_> = g
            .individuals
            .iter()
            .flat_map(|(&a, s)| s.iter().filter_map(move |c| match c {
                Concept::Named(p) => Some((*p, a)),
                _ => None,
            }))
            .collect();
        prop_assert_eq!(mine, cs);
        let roles: BTreeSet<_> =
            g.roles.iter().flat_map(|(&r, p)| p.iter().map(move |&(a, b)| (r, a, b))).collect();
        prop_assert_eq!(roles, rs);
        let consistent = check_ontology_consistency(&nt, &kb.ontology.abox) == Consistency::Consistent;
        prop_assert_eq!(consistent, !naive.inconsistent());
    }

    #[test]
    fn reduced_tbox_drops_only_existentials(seed in any::<u64>()) {
        let (_, nt) = normalized(&random_kb(&mut rng(seed), Shape::small()));
        let maps = classify(&nt);
        let completed = complete_tbox(&nt, &maps);
        let reduced = reduce_tbox(&completed);
        prop_assert!(reduced.iter().all(|a| !a.is_sub_exists()));
        prop_assert!(nt.axioms.iter().filter(|a| !a.is_sub_exists()).all(|a| completed.contains(a)));
        prop_assert!(reduced.iter().all(|a| completed.contains(a)));
        let direct: BTreeSet<_> = reduce_direct(&nt, &maps).into_iter().collect();
        prop_assert_eq!(direct, reduced.into_iter().collect::<BTreeSet<_>>());
    }

    /// Named subsumptions asserted in the TBox are entailed.
    #[test]
    fn told_subsumptions_hold(seed in any::<u64>()) {
        let (kb, nt) = normalized(&random_kb(&mut rng(seed), Shape::small()));
        let maps = classify(&nt);
        for ax in &kb.ontology.tbox {
            if let hybrid_mknf::ontology::TBoxAxiom::Gci {
                sub: hybrid_mknf::ontology::ConceptExpr::Name(a),
                sup: hybrid_mknf::ontology::ConceptExpr::Name(b),
            } = ax
            {
                if a != b {
                    prop_assert!(subsumes(&maps, Concept::Named(*a), Concept::Named(*b)).unwrap());
                }
            }
        }
    }
}

/// Instance sets of the translated reduced TBox against the completion
/// oracle on the unreduced TBox, restricted to source names. Without role
/// chains the two agree.
#[test]
fn reduced_translation_matches_completion_without_chains() {
    let shape = Shape { chains: false, ..Shape::small() };
    let mut checked = 0;
    for seed in 0..300u64 {
        let (kb, nt) = normalized(&random_kb(&mut rng(seed), shape));
        if check_ontology_consistency(&nt, &kb.ontology.abox) != Consistency::Consistent {
            continue;
        }
        checked += 1;
        let (want_c, want_r) = instance_sets_naive(&kb, &nt);
        let (got_c, got_r) = instance_sets_translated(&kb);
        assert_eq!(got_c, want_c, "seed {seed}");
        assert_eq!(got_r, want_r, "seed {seed}");
    }
    assert!(checked > 100);
}

fn instance_sets_naive(kb: &hybrid_mknf::HybridKb, nt: &NormalizedTBox) -> Sets {
    let extra: Vec<_> = kb.individuals().into_iter().collect();
    let (cs, rs) = NaiveCompletion::run(nt, &kb.ontology.abox, &extra).instances();
    let keep = |p| !nt.is_fresh(p);
    (cs.into_iter().filter(|x| keep(x.0)).collect(), rs.into_iter().filter(|x| keep(x.0)).collect())
}

fn instance_sets_translated(kb: &hybrid_mknf::HybridKb) -> Sets {
    let o = OntologyOracle::new(kb, PositiveEntailment::Translation);
    let c = o.closure(std::iter::empty());
    let src: BTreeSet<_> = kb.symbols.preds().collect();
    (
        c.concepts.into_iter().filter(|x| src.contains(&x.0)).collect(),
        c.roles.into_iter().filter(|x| src.contains(&x.0)).collect(),
    )
}

/// With role chains the reduced TBox loses instance consequences: an
/// existential whose role feeds a chain back onto a named individual.
#[test]
fn reduction_loses_chain_consequences() {
    let src = "%tbox\nD <= exists R.F.\nR o R <= R.\nexists R.F <= G.\n%abox\nR(a,b).\nD(b).\n%rules\n";
    let (kb, nt) = normalized(src);
    let g = kb.symbols.pred("G").unwrap();
    let a = kb.symbols.constant("a").unwrap();
    let (naive, _) = instance_sets_naive(&kb, &nt);
    assert!(naive.contains(&(g, a)));
    let (translated, _) = instance_sets_translated(&kb);
    assert!(!translated.contains(&(g, a)));
}
