mod common;

use std::sync::{Arc, OnceLock};

use common::*;
use proptest::prelude::*;
use selfsim::io::GroupFile;
use selfsim::morphism::{self, SearchMode};
use selfsim::tree::{self, MealyAutomaton, Transversal};
use selfsim::{GroupTable, Perm, VirtualEndomorphism};

fn perm_strategy(degree: usize) -> impl Strategy<Value = Perm> {
    Just((0..degree as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

const GROUPS: &[&str] = &["c2xc2", "d8", "q8", "c3xc3", "heisenberg3", "m27", "wreath_c3c3", "c2xc2xc2"];

fn groups() -> &'static Vec<Arc<GroupTable>> {
    static CELL: OnceLock<Vec<Arc<GroupTable>>> = OnceLock::new();
    CELL.get_or_init(|| GROUPS.iter().map(|n| build(n)).collect())
}

/// A few simple endomorphisms per self-similar group, with their automata.
fn automata() -> &'static Vec<(VirtualEndomorphism, MealyAutomaton)> {
    static CELL: OnceLock<Vec<(VirtualEndomorphism, MealyAutomaton)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for name in ["c2xc2", "d8", "c3xc3", "heisenberg3", "wreath_c3c3"] {
            let g = build(name);
            let p = g.p_group_prime().unwrap();
            let found = morphism::search_simple_endos(&g, p, Some(2_000), SearchMode::All).unwrap();
            for endo in found.endos.into_iter().step_by(97).take(3) {
                let t = Transversal::preferred(&endo).unwrap();
                let a = tree::build_automaton(&endo, &t).unwrap();
                out.push((endo, a));
            }
        }
        let (endo, t) = selfsim::catalog::heisenberg_endo(3).unwrap();
        let a = tree::build_automaton(&endo, &t).unwrap();
        out.push((endo, a));
        out
    })
}

proptest! {
    #[test]
    fn inverse_laws(p in perm_strategy(9), q in perm_strategy(9)) {
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert!(p.inverse().then(&p).is_identity());
        prop_assert_eq!(p.then(&q).inverse(), q.inverse().then(&p.inverse()));
        prop_assert!(p.pow(p.order()).is_identity());
    }

    #[test]
    fn action_is_right_composition(p in perm_strategy(7), q in perm_strategy(7), x in 0u32..7) {
        prop_assert_eq!(p.then(&q).apply(x), q.apply(p.apply(x)));
    }

    #[test]
    fn cycles_round_trip(p in perm_strategy(10)) {
        prop_assert_eq!(Perm::from_cycles(10, &p.cycles()).unwrap(), p);
    }

    #[test]
    fn table_laws(k in 0..GROUPS.len(), x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let g = &groups()[k];
        let n = g.order() as u32;
        let (x, y, z) = (x % n, y % n, z % n);
        prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        prop_assert_eq!(g.mul(x, g.inv(x)), 0);
        prop_assert_eq!(g.mul(0, x), x);
        prop_assert_eq!(g.perm(g.mul(x, y)), g.perm(x).then(&g.perm(y)));
        prop_assert_eq!(g.pow(x, g.order_of(x) as u64), 0);
    }

    #[test]
    fn homomorphisms_are_multiplicative(k in 0..GROUPS.len(), pick in any::<prop::sample::Index>(), x in any::<u32>(), y in any::<u32>()) {
        let g = &groups()[k];
        let p = g.p_group_prime().unwrap();
        let maximal = g.maximal_subgroups(p).unwrap();
        let h = pick.get(&maximal);
        let homs: Vec<_> = morphism::HomIter::new(g, h, g, p).unwrap().take(50).collect();
        let f = pick.get(&homs);
        let x = h.members()[x as usize % h.order()];
        let y = h.members()[y as usize % h.order()];
        prop_assert_eq!(f.image(g.mul(x, y)).unwrap(), g.mul(f.image(x).unwrap(), f.image(y).unwrap()));
        prop_assert!(f.is_multiplicative(g, g));
    }

    #[test]
    fn f_core_is_normal_invariant_and_inside_h(k in 0..GROUPS.len(), pick in any::<prop::sample::Index>()) {
        let g = &groups()[k];
        let p = g.p_group_prime().unwrap();
        let maximal = g.maximal_subgroups(p).unwrap();
        let h = pick.get(&maximal);
        let homs: Vec<_> = morphism::HomIter::new(g, h, g, p).unwrap().take(50).collect();
        let f = pick.get(&homs);
        let core = morphism::f_core(g, h, f);
        prop_assert!(core.is_subset_of(h));
        prop_assert!(g.is_normal(&core));
        prop_assert!(core.members().iter().all(|&m| core.contains(f.image(m).unwrap())));
    }

    /// `act(gh, w) = act(h, act(g, w))` for states that are group elements.
    #[test]
    fn action_is_a_homomorphism(k in any::<prop::sample::Index>(), x in any::<u32>(), y in any::<u32>(), word in prop::collection::vec(0u8..5, 0..7)) {
        let (endo, a) = k.get(automata());
        let g = endo.group();
        let p = endo.p() as u8;
        let word: Vec<u8> = word.into_iter().map(|l| l % p).collect();
        let n = g.order() as u32;
        let (x, y) = (x % n, y % n);
        let sx = a.state_of_element(x).unwrap();
        let sy = a.state_of_element(y).unwrap();
        let sxy = a.state_of_element(g.mul(x, y)).unwrap();
        prop_assert_eq!(a.act(sxy, &word), a.act(sy, &a.act(sx, &word)));
        prop_assert_eq!(a.act(sx, &word), brute_act(a, sx, &word));
    }

    /// Prefixes go to prefixes.
    #[test]
    fn action_preserves_prefixes(k in any::<prop::sample::Index>(), x in any::<u32>(), word in prop::collection::vec(0u8..5, 1..7), cut in any::<prop::sample::Index>()) {
        let (endo, a) = k.get(automata());
        let p = endo.p() as u8;
        let word: Vec<u8> = word.into_iter().map(|l| l % p).collect();
        let s = a.state_of_element(x % endo.group().order() as u32).unwrap();
        let cut = cut.index(word.len() + 1);
        let full = a.act(s, &word);
        prop_assert_eq!(&full[..cut], &a.act(s, &word[..cut])[..]);
    }

    #[test]
    fn level_perms_compose(k in any::<prop::sample::Index>(), x in any::<u32>(), y in any::<u32>(), depth in 1usize..4) {
        let (endo, a) = k.get(automata());
        let g = endo.group();
        let n = g.order() as u32;
        let (x, y) = (x % n, y % n);
        let l = |z| tree::level_perm(a, a.state_of_element(z).unwrap(), depth);
        prop_assert_eq!(l(g.mul(x, y)), l(x).then(&l(y)));
    }
}

#[test]
fn automaton_json_round_trips() {
    for (_, a) in automata() {
        let back = MealyAutomaton::from_json(&a.to_json()).unwrap();
        assert_eq!(&back, a);
    }
}

#[test]
fn group_files_round_trip() {
    for g in groups() {
        let file = GroupFile::from_table(g);
        let back = GroupFile::from_json(&file.to_json()).unwrap().build(1 << 16).unwrap();
        assert_eq!(back.fingerprint(), g.fingerprint());
    }
}

#[test]
fn first_level_stabilizer_is_h() {
    for (endo, a) in automata() {
        let stab = tree::first_level_stabilizer(a, endo.group());
        assert_eq!(&stab, endo.h());
    }
}
