//! Library results against independent brute-force computations, then
//! frozen values.

mod common;

use std::collections::{BTreeSet, HashSet};

use common::*;
use selfsim::catalog;
use selfsim::morphism::{self, HomIter};
use selfsim::power;
use selfsim::tree;
use selfsim::{ElemId, GroupTable, Perm};

#[test]
fn closure_orders_match_naive_closure() {
    for entry in catalog::default_entries() {
        let g = entry.build().unwrap();
        let gens: Vec<Perm> = g.gen_ids().iter().map(|&x| g.perm(x)).collect();
        assert_eq!(naive_closure(g.degree(), &gens).len(), g.order(), "{}", entry.name);
        assert_eq!(g.order() as u64, entry.expected_order, "{}", entry.name);
        assert_eq!(g.exponent(), entry.expected_exponent, "{}", entry.name);
    }
}

#[test]
fn table_products_match_permutation_products() {
    for name in ["d8", "q8", "heisenberg3", "wreath_c3c3", "extraspecial_p5_3"] {
        let g = build(name);
        let n = g.order() as u32;
        for x in (0..n).step_by(7) {
            for y in (0..n).step_by(5) {
                assert_eq!(g.perm(g.mul(x, y)), g.perm(x).then(&g.perm(y)), "{name}");
            }
            assert_eq!(g.perm(g.inv(x)), g.perm(x).inverse());
            assert_eq!(g.order_of(x) as u64, g.perm(x).order());
        }
    }
}

#[test]
fn unitriangular_matrices_over_z3() {
    let mut mats = HashSet::new();
    for x in 0..3 {
        for y in 0..3 {
            for z in 0..3 {
                mats.insert((x, y, z));
            }
        }
    }
    let g = build("heisenberg3");
    assert_eq!(g.order(), mats.len());
    assert_eq!(g.order(), 27);
    let center: Vec<ElemId> = g
        .elements()
        .filter(|&z| g.elements().all(|x| g.mul(x, z) == g.mul(z, x)))
        .collect();
    assert_eq!(center.len(), 3);
    let [a, b, c] = g.gen_ids() else { panic!() };
    assert_eq!(g.comm(*a, *b), *c);
    assert!(center.contains(c));
}

#[test]
fn dihedral_involutions_generate_everything() {
    let g = build("d8");
    let set = power::omega_set(&g, &g.whole(), 2, 1).unwrap();
    assert_eq!(set.len(), 6);
    assert_eq!(naive_order(&g, &set), 8);
    assert_eq!(power::omega_subgroup(&g, &g.whole(), 2, 1).unwrap().order(), 8);
}

#[test]
fn subgroup_counts_match_subset_scan() {
    for (name, expected) in [("c4", 3), ("c2xc2", 5), ("q8", 6), ("d8", 10), ("c8", 4), ("c2xc2xc2", 16)] {
        let g = build(name);
        let brute = subsets_closed_under_products(&g);
        assert_eq!(brute, expected, "{name}");
        assert_eq!(g.all_subgroups().unwrap().len(), brute, "{name}");
    }
}

#[test]
fn reflection_has_trivial_core_in_d8() {
    let g = build("d8");
    let reflection = g.elements().find(|&x| g.order_of(x) == 2 && !g.is_normal(&g.subgroup_generated(&[x]))).unwrap();
    let h = g.subgroup_generated(&[reflection]);
    assert!(g.normal_core(&h).is_trivial());
    let conjugates: BTreeSet<ElemId> = g.elements().map(|x| g.conj(reflection, x)).collect();
    assert_eq!(conjugates.len(), 2);
}

/// Homomorphisms `C3 × C3 → heisenberg3` are commuting pairs of elements of
/// order dividing 3: `|G| · (number of conjugacy classes) = 27 · 11`.
#[test]
fn hom_count_c3xc3_into_heisenberg3() {
    let dom = build("c3xc3");
    let cod = build("heisenberg3");
    let brute = cod
        .elements()
        .flat_map(|x| cod.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| {
            let (px, py) = (cod.perm(x), cod.perm(y));
            px.then(&py) == py.then(&px) && px.pow(3).is_identity() && py.pow(3).is_identity()
        })
        .count();
    let classes: HashSet<BTreeSet<ElemId>> = cod
        .elements()
        .map(|x| cod.elements().map(|g| cod.conj(x, g)).collect())
        .collect();
    assert_eq!(classes.len(), 11);
    assert_eq!(brute, 27 * 11);
    let homs = morphism::enumerate_homs(&dom, &dom.whole(), &cod, 3).unwrap();
    assert_eq!(homs.len(), brute);
    assert_eq!(homs.len(), 297);
}

#[test]
fn c4_has_two_homs_from_its_maximal_subgroup() {
    let g = build("c4");
    let maximal = g.maximal_subgroups(2).unwrap();
    assert_eq!(maximal.len(), 1);
    let homs = morphism::enumerate_homs(&g, &maximal[0], &g, 2).unwrap();
    assert_eq!(homs.len(), 2);
    for f in &homs {
        assert_eq!(morphism::f_core(&g, &maximal[0], f), maximal[0]);
    }
}

#[test]
fn extraspecial_243_has_40_maximal_subgroups() {
    let g = build("extraspecial_p5_3");
    let kernels = index_p_kernels(&g, 3);
    assert_eq!(kernels.len(), 40);
    let maximal = g.maximal_subgroups(3).unwrap();
    assert_eq!(maximal.len(), 40);
    let found: HashSet<BTreeSet<ElemId>> = maximal.iter().map(|h| h.members().iter().copied().collect()).collect();
    assert_eq!(found, kernels);
    assert_eq!(g.frattini_quotient(&g.whole(), 3).unwrap().rank(), 4);
}

#[test]
fn derived_subgroups_by_naive_closure() {
    let g = build("extraspecial_p5_3");
    let commutators = |ids: &[ElemId]| -> Vec<ElemId> {
        let mut out: Vec<ElemId> = ids.iter().flat_map(|&x| ids.iter().map(move |&y| (x, y))).map(|(x, y)| g.comm(x, y)).collect();
        out.sort_unstable();
        out.dedup();
        out
    };
    let all: Vec<ElemId> = g.elements().collect();
    let derived = naive_order(&g, &commutators(&all));
    assert_eq!(derived, 3);
    for h in g.maximal_subgroups(3).unwrap() {
        assert_eq!(naive_order(&g, &commutators(h.members())), derived);
    }
    assert!(morphism::derived_obstruction(&g, 3).unwrap());
    assert!(!morphism::derived_obstruction(&build("heisenberg3"), 3).unwrap());
    assert!(!morphism::derived_obstruction(&build("c4"), 2).unwrap());
}

#[test]
fn f_core_matches_subgroup_scan_on_d8() {
    let g = build("d8");
    for h in g.maximal_subgroups(2).unwrap() {
        for f in HomIter::new(&g, &h, &g, 2).unwrap() {
            let core: BTreeSet<ElemId> = morphism::f_core(&g, &h, &f).members().iter().copied().collect();
            assert_eq!(core, brute_fcore(&g, &h, &f));
        }
    }
}

/// Hall regularity from the definition with naive closures, on every pair.
#[test]
fn regularity_from_the_definition() {
    for (name, p, expected) in [("d8", 2, false), ("heisenberg3", 3, true), ("c4xc2", 2, true), ("q8", 2, false)] {
        let g = build(name);
        let pp = p as u64;
        let regular = g.elements().all(|a| {
            g.elements().all(|b| {
                let pa = g.perm(a);
                let pb = g.perm(b);
                let lhs = pa.then(&pb).pow(pp);
                let base = pa.pow(pp).then(&pb.pow(pp));
                let pair: Vec<Perm> = naive_closure(g.degree(), &[pa, pb])
                    .into_iter()
                    .map(|v| Perm::from_images(v).unwrap())
                    .collect();
                let comms: Vec<Perm> = pair
                    .iter()
                    .flat_map(|x| pair.iter().map(move |y| x.inverse().then(&y.inverse()).then(x).then(y)))
                    .collect();
                let derived: Vec<Perm> = naive_closure(g.degree(), &comms)
                    .into_iter()
                    .map(|v| Perm::from_images(v).unwrap())
                    .collect();
                let powers: Vec<Perm> = derived.iter().map(|x| x.pow(pp)).collect();
                let agemo = naive_closure(g.degree(), &powers);
                agemo.contains(base.inverse().then(&lhs).images())
            })
        });
        assert_eq!(regular, expected, "{name}");
        assert_eq!(power::is_regular(&g, &g.whole(), p).unwrap(), expected, "{name}");
    }
}

#[test]
fn wreath_c3c3_power_structure() {
    let g = build("wreath_c3c3");
    let cubes: Vec<ElemId> = g.elements().map(|x| g.pow(x, 3)).collect();
    assert_eq!(naive_order(&g, &cubes), 3);
    assert_eq!(power::agemo_subgroup(&g, &g.whole(), 3, 1).unwrap().order(), 3);
    let omega = power::omega_set(&g, &g.whole(), 3, 1).unwrap();
    assert_eq!(omega.len(), 45);
    assert_eq!(naive_order(&g, &omega), 81);
    assert!(!power::power_abelian(&g, 3).unwrap());
}

#[test]
fn separating_depth_matches_word_scan() {
    let (endo, t) = catalog::heisenberg_endo(3).unwrap();
    let a = tree::build_automaton(&endo, &t).unwrap();
    let all: Vec<u32> = (0..a.len() as u32).collect();
    assert_eq!(tree::separating_depth(&a, &all, 6), Ok(2));
    assert_eq!(brute_separating_depth(&a, &all, 4), Some(2));

    let g = build("c2xc2");
    let found = morphism::search_simple_endos(&g, 2, None, morphism::SearchMode::All).unwrap();
    for endo in &found.endos {
        let t = tree::Transversal::preferred(endo).unwrap();
        let a = tree::build_automaton(endo, &t).unwrap();
        let all: Vec<u32> = (0..a.len() as u32).collect();
        let d = tree::separating_depth(&a, &all, 6).unwrap();
        assert_eq!(Some(d), brute_separating_depth(&a, &all, 6));
        assert!(d <= 3);
    }
}

#[test]
fn non_simple_endomorphism_is_not_faithful() {
    let g = build("c4");
    let h = g.maximal_subgroups(2).unwrap().remove(0);
    let f = HomIter::new(&g, &h, &g, 2).unwrap().next().unwrap();
    let endo = selfsim::VirtualEndomorphism::new(g.clone(), 2, std::sync::Arc::new(h), f).unwrap();
    assert!(!endo.is_simple());
    let t = tree::Transversal::least(&g, endo.h()).unwrap();
    let a = tree::build_automaton(&endo, &t).unwrap();
    let all: Vec<u32> = (0..a.len() as u32).collect();
    let collisions = tree::separating_depth(&a, &all, 6).unwrap_err();
    assert!(!collisions.groups.is_empty());
    // states in one class act identically on every word up to the cap
    let class = &collisions.groups[0];
    for w in words(2, 6) {
        assert_eq!(brute_act(&a, class[0], &w), brute_act(&a, class[1], &w));
    }
}

#[test]
fn frozen_fingerprints() {
    assert_eq!(
        build("heisenberg3").fingerprint(),
        "2beabbaaf42c86a875a14531574e8c810ea6e68d61048621f27897dd3a3ebf0b"
    );
    let g: &GroupTable = &build("heisenberg3");
    assert_eq!(g.gen_ids(), &[1, 2, 3]);
}
