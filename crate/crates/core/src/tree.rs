//! Tree representations induced by virtual endomorphisms, as Mealy automata
//! acting on words over `{0, …, p-1}`.
//!
//! Conventions: elements act on the right and compose left to right, the
//! transversal satisfies `H t_i g = H t_{σ(i)}`, and the section of `g` at
//! letter `i` is `f(t_i g t_{σ(i)}⁻¹)`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ElemId, GroupTable, Perm, Subgroup};
use crate::morphism::VirtualEndomorphism;

pub type StateId = u32;

/// Right-coset representatives `t_0 = 1, t_1, …, t_{p-1}` of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    reps: Vec<ElemId>,
    coset_of: Vec<u8>,
}

impl Transversal {
    /// Checks that `reps` lie in distinct cosets covering `G` and start at the identity.
    pub fn new(g: &GroupTable, h: &Subgroup, reps: Vec<ElemId>) -> Result<Self> {
        if reps.first() != Some(&0) {
            return Err(Error::input("transversal must start with the identity"));
        }
        if reps.len() * h.order() != g.order() || reps.len() > u8::MAX as usize {
            return Err(Error::input("transversal size does not match the index"));
        }
        let mut coset_of = vec![u8::MAX; g.order()];
        for (i, &t) in reps.iter().enumerate() {
            for &x in h.members() {
                let y = g.mul(x, t) as usize;
                if coset_of[y] != u8::MAX {
                    return Err(Error::input("transversal elements share a coset"));
                }
                coset_of[y] = i as u8;
            }
        }
        Ok(Transversal { reps, coset_of })
    }

    /// `{1, a, …, a^{p-1}}` for an element `a ∉ H` (requires prime index).
    pub fn powers_of(g: &GroupTable, h: &Subgroup, a: ElemId) -> Result<Self> {
        let p = g.order() / h.order();
        let reps = (0..p as u64).map(|k| g.pow(a, k)).collect();
        Self::new(g, h, reps)
    }

    /// The least id in each coset, sorted; the first is the identity.
    pub fn least(g: &GroupTable, h: &Subgroup) -> Result<Self> {
        let mut reps: Vec<ElemId> = Vec::new();
        let mut covered = vec![false; g.order()];
        for x in g.elements() {
            if covered[x as usize] {
                continue;
            }
            reps.push(x);
            for &m in h.members() {
                covered[g.mul(m, x) as usize] = true;
            }
        }
        Self::new(g, h, reps)
    }

    /// Powers of the split witness when one exists, else least representatives.
    pub fn preferred(endo: &VirtualEndomorphism) -> Result<Self> {
        let g = endo.group();
        match split_witness(endo) {
            Some(a) => Self::powers_of(g, endo.h(), a),
            None => Self::least(g, endo.h()),
        }
    }

    pub fn reps(&self) -> &[ElemId] {
        &self.reps
    }

    pub fn coset_of(&self, x: ElemId) -> usize {
        self.coset_of[x as usize] as usize
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Least-id element of order `p` in `H^f \ H`, if any.
pub fn split_witness(endo: &VirtualEndomorphism) -> Option<ElemId> {
    let g = endo.group();
    let image = endo.image_subgroup();
    image
        .members()
        .iter()
        .copied()
        .find(|&x| !endo.h().contains(x) && g.order_of(x) == endo.p())
}

/// `σ(g)` with `H t_i g = H t_{σ(i)}`.
pub fn coset_action(g: &GroupTable, t: &Transversal, x: ElemId) -> Perm {
    let images = t
        .reps
        .iter()
        .map(|&ti| t.coset_of(g.mul(ti, x)) as u32)
        .collect();
    Perm::from_images(images).expect("cosets are permuted")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct State {
    pub label: String,
    /// Group element this state represents, when it comes from a group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<ElemId>,
}

/// A finite-state transducer over the alphabet `{0, …, p-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyAutomaton {
    p: usize,
    states: Vec<State>,
    output: Vec<Perm>,
    delta: Vec<StateId>,
    initials: BTreeMap<String, StateId>,
}

impl MealyAutomaton {
    /// Validates totality of `delta` and the output permutations.
    pub fn new(
        p: usize,
        states: Vec<State>,
        output: Vec<Perm>,
        delta: Vec<StateId>,
        initials: BTreeMap<String, StateId>,
    ) -> Result<Self> {
        let n = states.len();
        if p == 0 || output.len() != n || delta.len() != n * p {
            return Err(Error::input("automaton tables have inconsistent sizes"));
        }
        if output.iter().any(|o| o.degree() != p) {
            return Err(Error::input("output permutation has the wrong degree"));
        }
        if delta.iter().chain(initials.values()).any(|&s| s as usize >= n) {
            return Err(Error::input("transition to a nonexistent state"));
        }
        Ok(MealyAutomaton {
            p,
            states,
            output,
            delta,
            initials,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn output(&self, s: StateId) -> &Perm {
        &self.output[s as usize]
    }

    #[inline]
    pub fn delta(&self, s: StateId, letter: usize) -> StateId {
        self.delta[s as usize * self.p + letter]
    }

    pub fn children(&self, s: StateId) -> &[StateId] {
        let base = s as usize * self.p;
        &self.delta[base..base + self.p]
    }

    pub fn initials(&self) -> &BTreeMap<String, StateId> {
        &self.initials
    }

    pub fn initial(&self, name: &str) -> Option<StateId> {
        self.initials.get(name).copied()
    }

    /// State id for a group element, if some state represents it.
    pub fn state_of_element(&self, x: ElemId) -> Option<StateId> {
        self.states
            .iter()
            .position(|s| s.element == Some(x))
            .map(|i| i as StateId)
    }

    /// A state by initial name or numeric id.
    pub fn resolve_state(&self, key: &str) -> Option<StateId> {
        self.initial(key).or_else(|| {
            key.parse::<StateId>()
                .ok()
                .filter(|&s| (s as usize) < self.len())
        })
    }

    /// Image of `word` under state `s`.
    pub fn act(&self, mut s: StateId, word: &[u8]) -> Vec<u8> {
        word.iter()
            .map(|&letter| {
                let out = self.output[s as usize].apply(letter as u32) as u8;
                s = self.delta(s, letter as usize);
                out
            })
            .collect()
    }

    /// States reachable from `roots`, renumbered breadth-first.
    pub fn reachable(&self, roots: &[StateId]) -> MealyAutomaton {
        let mut new_id: HashMap<StateId, StateId> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &r in roots {
            if let std::collections::hash_map::Entry::Vacant(e) = new_id.entry(r) {
                e.insert(order.len() as StateId);
                order.push(r);
                queue.push_back(r);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &t in self.children(s) {
                if let std::collections::hash_map::Entry::Vacant(e) = new_id.entry(t) {
                    e.insert(order.len() as StateId);
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let states = order.iter().map(|&s| self.states[s as usize].clone()).collect();
        let output = order.iter().map(|&s| self.output[s as usize].clone()).collect();
        let delta = order
            .iter()
            .flat_map(|&s| self.children(s).iter().map(|t| new_id[t]))
            .collect();
        let initials = self
            .initials
            .iter()
            .filter_map(|(k, v)| new_id.get(v).map(|&id| (k.clone(), id)))
            .collect();
        MealyAutomaton {
            p: self.p,
            states,
            output,
            delta,
            initials,
        }
    }

    /// Rewrites every state label and initial-state name.
    pub fn map_labels(mut self, f: impl Fn(&str) -> String) -> Self {
        for s in &mut self.states {
            s.label = f(&s.label);
        }
        self.initials = self.initials.into_iter().map(|(k, v)| (f(&k), v)).collect();
        self
    }

    /// Appends a state; its transitions must point at existing states or itself.
    pub(crate) fn push_state(&mut self, state: State, output: Perm, children: Vec<StateId>) -> StateId {
        let id = self.states.len() as StateId;
        assert_eq!(children.len(), self.p);
        assert!(children.iter().all(|&c| c <= id));
        self.states.push(state);
        self.output.push(output);
        self.delta.extend(children);
        id
    }

    pub(crate) fn set_initial(&mut self, name: impl Into<String>, s: StateId) {
        self.initials.insert(name.into(), s);
    }

    pub(crate) fn clear_initials(&mut self) {
        self.initials.clear();
    }
}

/// The automaton of `φ`: one state per element of `G`.
///
/// Initial states are the generators of `G`, named `a`, `b`, ….
pub fn build_automaton(endo: &VirtualEndomorphism, t: &Transversal) -> Result<MealyAutomaton> {
    let g = endo.group();
    let p = t.len();
    let n = g.order();
    let mut states = Vec::with_capacity(n);
    let mut output = Vec::with_capacity(n);
    let mut delta = Vec::with_capacity(n * p);
    for x in g.elements() {
        let sigma = coset_action(g, t, x);
        for (i, &ti) in t.reps().iter().enumerate() {
            let tj = t.reps()[sigma.apply(i as u32) as usize];
            let y = g.mul(g.mul(ti, x), g.inv(tj));
            let fy = endo.apply(y).ok_or(Error::NotInH(y))?;
            delta.push(fy);
        }
        states.push(State {
            label: g.label(x),
            element: Some(x),
        });
        output.push(sigma);
    }
    let initials = g
        .gen_ids()
        .iter()
        .enumerate()
        .map(|(k, &x)| (GroupTable::gen_name(k), x))
        .collect();
    MealyAutomaton::new(p, states, output, delta, initials)
}

/// Root permutations of all sections above depth `d`, level by level in
/// lexicographic node order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Portrait {
    pub depth: usize,
    pub node_perms: Vec<Perm>,
}

pub fn portrait(a: &MealyAutomaton, s: StateId, depth: usize) -> Portrait {
    let mut level = vec![s];
    let mut node_perms = Vec::new();
    for _ in 0..depth {
        node_perms.extend(level.iter().map(|&x| a.output(x).clone()));
        level = level.iter().flat_map(|&x| a.children(x).iter().copied()).collect();
    }
    Portrait { depth, node_perms }
}

/// Groups of the given states that still share a portrait at the cap,
/// largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collisions {
    pub cap: usize,
    pub groups: Vec<Vec<StateId>>,
}

/// Least `d ≤ cap` at which the depth-`d` portraits of `states` are pairwise distinct.
///
/// Refines exact portrait classes level by level: the depth-`d` class of a
/// state is determined by its output and the depth-`(d-1)` classes of its
/// children.
pub fn separating_depth(
    a: &MealyAutomaton,
    states: &[StateId],
    cap: usize,
) -> std::result::Result<usize, Collisions> {
    assert!(cap >= 1, "depth cap must be at least 1");
    let scope = a.reachable(states);
    let m = scope.len();
    // the first states of `scope` are the distinct requested ones, in order
    let root_index: Vec<usize> = {
        let mut first_seen: HashMap<StateId, usize> = HashMap::new();
        states
            .iter()
            .map(|s| {
                let next = first_seen.len();
                *first_seen.entry(*s).or_insert(next)
            })
            .collect()
    };
    let mut class: Vec<u32> = {
        let mut ids: HashMap<&[u32], u32> = HashMap::new();
        (0..m)
            .map(|s| {
                let next = ids.len() as u32;
                *ids.entry(scope.output[s].images()).or_insert(next)
            })
            .collect()
    };
    let distinct = |class: &[u32]| {
        let mut seen: HashMap<u32, ()> = HashMap::new();
        let mut uniq: Vec<usize> = root_index.clone();
        uniq.sort_unstable();
        uniq.dedup();
        uniq.iter().all(|&i| seen.insert(class[i], ()).is_none())
    };
    for d in 1..=cap {
        if d > 1 {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
            class = (0..m as StateId)
                .map(|s| {
                    let mut key = Vec::with_capacity(scope.p + 1);
                    key.push(class[s as usize]);
                    key.extend(scope.children(s).iter().map(|&c| class[c as usize]));
                    let next = ids.len() as u32;
                    *ids.entry(key).or_insert(next)
                })
                .collect();
        }
        if distinct(&class) {
            return Ok(d);
        }
    }
    let mut by_class: BTreeMap<u32, Vec<StateId>> = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for (k, &s) in states.iter().enumerate() {
        if seen.insert(s) {
            by_class.entry(class[root_index[k]]).or_default().push(s);
        }
    }
    let mut groups: Vec<Vec<StateId>> = by_class.into_values().filter(|g| g.len() > 1).collect();
    groups.sort_by(|x, y| y.len().cmp(&x.len()).then_with(|| x.cmp(y)));
    Err(Collisions { cap, groups })
}

/// Leaf permutation of state `s` on the `p^depth` words of length `depth`,
/// leaves numbered lexicographically (first letter most significant).
pub fn level_perm(a: &MealyAutomaton, s: StateId, depth: usize) -> Perm {
    let p = a.p();
    let leaves = p.pow(depth as u32);
    let mut images = Vec::with_capacity(leaves);
    let mut word = vec![0u8; depth];
    for leaf in 0..leaves {
        let mut x = leaf;
        for slot in word.iter_mut().rev() {
            *slot = (x % p) as u8;
            x /= p;
        }
        let out = a.act(s, &word);
        images.push(out.iter().fold(0u32, |acc, &l| acc * p as u32 + l as u32));
    }
    Perm::from_images(images).expect("tree automorphisms permute leaves")
}

/// The group generated by `gens` acting on level `depth`.
pub fn level_perm_group(a: &MealyAutomaton, gens: &[StateId], depth: usize, cap: usize) -> Result<GroupTable> {
    assert!(depth >= 1, "depth must be at least 1");
    let perms: Vec<Perm> = gens.iter().map(|&s| level_perm(a, s, depth)).collect();
    GroupTable::from_generators(a.p().pow(depth as u32), &perms, cap)
}

/// Elements whose output fixes letter 0.
pub fn first_level_stabilizer(a: &MealyAutomaton, g: &GroupTable) -> Subgroup {
    let fixing = a
        .states()
        .iter()
        .zip(&a.output)
        .filter(|(_, o)| o.apply(0) == 0)
        .filter_map(|(s, _)| s.element);
    g.span_greedy(fixing)
}

// -- serialization --

#[derive(Serialize, Deserialize)]
struct StateJson {
    id: StateId,
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    element: Option<ElemId>,
    output: Vec<u32>,
    delta: Vec<StateId>,
}

#[derive(Serialize, Deserialize)]
struct AutomatonJson {
    p: usize,
    states: Vec<StateJson>,
    initials: BTreeMap<String, StateId>,
}

impl MealyAutomaton {
    pub fn to_json(&self) -> String {
        let doc = AutomatonJson {
            p: self.p,
            states: (0..self.len())
                .map(|s| StateJson {
                    id: s as StateId,
                    label: self.states[s].label.clone(),
                    element: self.states[s].element,
                    output: self.output[s].images().to_vec(),
                    delta: self.children(s as StateId).to_vec(),
                })
                .collect(),
            initials: self.initials.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("automaton serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: AutomatonJson = serde_json::from_str(text)?;
        let mut states = Vec::new();
        let mut output = Vec::new();
        let mut delta = Vec::new();
        for (k, s) in doc.states.into_iter().enumerate() {
            if s.id as usize != k {
                return Err(Error::input(format!("state {k} has id {}", s.id)));
            }
            if s.delta.len() != doc.p {
                return Err(Error::input(format!("state {k} needs {} transitions", doc.p)));
            }
            states.push(State {
                label: s.label,
                element: s.element,
            });
            output.push(Perm::from_images(s.output)?);
            delta.extend(s.delta);
        }
        MealyAutomaton::new(doc.p, states, output, delta, doc.initials)
    }

    /// Graphviz rendering: one node per state labeled `name|cycles`, one
    /// edge per letter labeled `i/output(i)`.
    pub fn to_dot(&self) -> String {
        let mut names: Vec<String> = self.states.iter().map(|s| s.label.clone()).collect();
        for (name, &s) in &self.initials {
            if names[s as usize] != *name {
                names[s as usize] = format!("{name}={}", names[s as usize]);
            }
        }
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=record];\n");
        for (s, name) in names.iter().enumerate() {
            let _ = writeln!(
                out,
                "  s{s} [label=\"{}|{}\"];",
                escape(name),
                self.output[s]
            );
        }
        for s in 0..self.len() {
            for (i, &t) in self.children(s as StateId).iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  s{s} -> s{t} [label=\"{i}/{}\"];",
                    self.output[s].apply(i as u32)
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\")
        .replace('"', "\\\"")
        .replace('|', "\\|")
        .replace('{', "\\{")
        .replace('}', "\\}")
}
