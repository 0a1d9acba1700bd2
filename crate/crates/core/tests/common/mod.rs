//! Brute-force oracles shared by the integration tests. None of these go
//! through the library's subgroup, Frattini, search or automaton code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use selfsim::catalog;
use selfsim::tree::{MealyAutomaton, StateId};
use selfsim::{ElemId, GroupHom, GroupTable, Perm, Subgroup};

pub fn build(name: &str) -> Arc<GroupTable> {
    Arc::new(catalog::lookup(name).unwrap().build().unwrap())
}

/// Closure of `gens` by repeated right multiplication until nothing new appears.
pub fn naive_closure(degree: usize, gens: &[Perm]) -> HashSet<Vec<u32>> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut frontier = vec![Perm::identity(degree)];
    seen.insert(Perm::identity(degree).into_images());
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = x.then(s);
            if seen.insert(y.images().to_vec()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Order of the subgroup of `g` generated by `ids`, by permutation closure.
pub fn naive_order(g: &GroupTable, ids: &[ElemId]) -> usize {
    let gens: Vec<Perm> = ids.iter().map(|&x| g.perm(x)).collect();
    naive_closure(g.degree(), &gens).len()
}

/// Every subset of `G` closed under products, for tiny groups.
pub fn subsets_closed_under_products(g: &GroupTable) -> usize {
    let n = g.order();
    assert!(n <= 16);
    let perms: Vec<Perm> = g.elements().map(|x| g.perm(x)).collect();
    let id_of = |p: &Perm| perms.iter().position(|q| q == p).unwrap();
    let mut count = 0;
    for mask in 1u32..(1 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let closed = (0..n).filter(|i| mask >> i & 1 == 1).all(|i| {
            (0..n)
                .filter(|j| mask >> j & 1 == 1)
                .all(|j| mask >> id_of(&perms[i].then(&perms[j])) & 1 == 1)
        });
        if closed {
            count += 1;
        }
    }
    count
}

fn normal_by_all_elements(g: &GroupTable, k: &Subgroup) -> bool {
    g.elements().all(|x| {
        let xi = g.perm(x).inverse();
        k.members().iter().all(|&m| {
            let c = xi.then(&g.perm(m)).then(&g.perm(x));
            k.contains(g.lookup(&c).unwrap())
        })
    })
}

/// Largest subgroup of `H` that is normal in `G` and mapped into itself by `f`,
/// scanning every subgroup of `G`.
pub fn brute_fcore(g: &GroupTable, h: &Subgroup, f: &GroupHom) -> BTreeSet<ElemId> {
    let mut best: BTreeSet<ElemId> = BTreeSet::from([0]);
    for k in g.all_subgroups().unwrap() {
        if k.order() <= best.len() || !k.is_subset_of(h) {
            continue;
        }
        let invariant = k.members().iter().all(|&m| k.contains(f.image(m).unwrap()));
        if invariant && normal_by_all_elements(g, &k) {
            best = k.members().iter().copied().collect();
        }
    }
    best
}

/// Tree action computed straight from the transition table, one letter at a time.
pub fn brute_act(a: &MealyAutomaton, s: StateId, word: &[u8]) -> Vec<u8> {
    match word.split_first() {
        None => Vec::new(),
        Some((&x, rest)) => {
            let mut out = vec![a.output(s).apply(x as u32) as u8];
            out.extend(brute_act(a, a.delta(s, x as usize), rest));
            out
        }
    }
}

/// All words of length `d` in lexicographic order.
pub fn words(p: usize, d: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..p as u8).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Least depth at which the listed states act differently on some word.
pub fn brute_separating_depth(a: &MealyAutomaton, states: &[StateId], cap: usize) -> Option<usize> {
    (1..=cap).find(|&d| {
        let ws = words(a.p(), d);
        let mut seen = HashSet::new();
        states.iter().all(|&s| {
            let image: Vec<Vec<u8>> = ws.iter().map(|w| brute_act(a, s, w)).collect();
            seen.insert(image)
        })
    })
}

/// Kernels of the surjections `G → Z/p`, found by trying every assignment of
/// values to the generators and keeping the consistent ones.
pub fn index_p_kernels(g: &GroupTable, p: u32) -> HashSet<BTreeSet<ElemId>> {
    let gens = g.gen_ids().to_vec();
    let mut kernels = HashSet::new();
    let mut values = vec![0u32; gens.len()];
    'assignments: loop {
        if values.iter().any(|&v| v != 0) {
            let mut phi: Vec<Option<u32>> = vec![None; g.order()];
            phi[0] = Some(0);
            let mut consistent = true;
            let mut stack = vec![0];
            while let Some(x) = stack.pop() {
                for (k, &s) in gens.iter().enumerate() {
                    let y = g.mul(x, s);
                    let v = (phi[x as usize].unwrap() + values[k]) % p;
                    match phi[y as usize] {
                        None => {
                            phi[y as usize] = Some(v);
                            stack.push(y);
                        }
                        Some(w) if w != v => consistent = false,
                        Some(_) => {}
                    }
                }
            }
            if consistent {
                kernels.insert(g.elements().filter(|&x| phi[x as usize] == Some(0)).collect());
            }
        }
        for v in values.iter_mut() {
            *v += 1;
            if *v < p {
                continue 'assignments;
            }
            *v = 0;
        }
        return kernels;
    }
}
