use std::collections::{HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use super::table::GroupTable;
use super::ElemId;

/// Bitset membership is kept for parents up to this order.
const MASK_LIMIT: usize = 65_536;

/// A subgroup of some [`GroupTable`], stored as a sorted id list.
///
/// The parent table is not referenced; every operation takes it explicitly.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: Vec<ElemId>,
    gens: Vec<ElemId>,
    mask: Option<FixedBitSet>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Wraps an already-closed member set. `members` must be sorted.
    pub(crate) fn from_parts(parent_order: usize, members: Vec<ElemId>, gens: Vec<ElemId>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let mask = (parent_order <= MASK_LIMIT).then(|| {
            let mut m = FixedBitSet::with_capacity(parent_order);
            for &x in &members {
                m.insert(x as usize);
            }
            m
        });
        Subgroup { members, gens, mask }
    }

    pub fn members(&self) -> &[ElemId] {
        &self.members
    }

    pub fn gens(&self) -> &[ElemId] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    #[inline]
    pub fn contains(&self, x: ElemId) -> bool {
        match &self.mask {
            Some(m) => m.contains(x as usize),
            None => self.members.binary_search(&x).is_ok(),
        }
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.len() <= other.members.len() && self.members.iter().all(|&x| other.contains(x))
    }
}

impl GroupTable {
    pub fn whole(&self) -> Subgroup {
        let mut gens = self.gen_ids().to_vec();
        gens.sort_unstable();
        gens.dedup();
        gens.retain(|&g| g != 0);
        Subgroup::from_parts(self.order(), self.elements().collect(), gens)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_parts(self.order(), vec![0], Vec::new())
    }

    /// Closure of `gens` under right multiplication, starting from the identity.
    fn close(&self, gens: &[ElemId]) -> Vec<ElemId> {
        let mut seen = FixedBitSet::with_capacity(self.order());
        seen.insert(0);
        let mut queue = VecDeque::from([0]);
        let mut members = vec![0];
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen.put(y as usize) {
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// The smallest subgroup containing `seed`; its generators are the seed itself.
    pub fn subgroup_generated(&self, seed: &[ElemId]) -> Subgroup {
        let mut gens = seed.to_vec();
        gens.sort_unstable();
        gens.dedup();
        let members = self.close(&gens);
        Subgroup::from_parts(self.order(), members, gens)
    }

    /// Span of `seed`, keeping only the seed elements that enlarge the span.
    pub fn span_greedy(&self, seed: impl IntoIterator<Item = ElemId>) -> Subgroup {
        let mut current = self.trivial_subgroup();
        for x in seed {
            if !current.contains(x) {
                current = self.extend(&current, x);
            }
        }
        current
    }

    /// `⟨s, x⟩`, reusing the members of `s`.
    pub fn extend(&self, s: &Subgroup, x: ElemId) -> Subgroup {
        if s.contains(x) {
            return s.clone();
        }
        let mut gens = s.gens.clone();
        gens.push(x);
        let mut seen = FixedBitSet::with_capacity(self.order());
        for &m in &s.members {
            seen.insert(m as usize);
        }
        let mut members = s.members.clone();
        let mut queue: VecDeque<ElemId> = s.members.iter().copied().collect();
        while let Some(y) = queue.pop_front() {
            for &g in &gens {
                let z = self.mul(y, g);
                if !seen.put(z as usize) {
                    members.push(z);
                    queue.push_back(z);
                }
            }
        }
        members.sort_unstable();
        Subgroup::from_parts(self.order(), members, gens)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        b.gens.iter().fold(a.clone(), |acc, &g| self.extend(&acc, g))
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.span_greedy(a.members.iter().copied().filter(|&x| b.contains(x)))
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        self.gen_ids()
            .iter()
            .all(|&g| s.gens.iter().all(|&x| s.contains(self.conj(x, g))))
    }

    /// The largest normal subgroup of `self` contained in `s`.
    ///
    /// Repeatedly keeps the elements whose conjugates by every generator stay
    /// inside the current set; the fixed point is conjugation-stable.
    pub fn normal_core(&self, s: &Subgroup) -> Subgroup {
        let mut current: Vec<ElemId> = s.members.clone();
        let mut mask = FixedBitSet::with_capacity(self.order());
        loop {
            mask.clear();
            for &x in &current {
                mask.insert(x as usize);
            }
            let next: Vec<ElemId> = current
                .iter()
                .copied()
                .filter(|&x| {
                    self.gen_ids()
                        .iter()
                        .all(|&g| mask.contains(self.conj(x, g) as usize))
                })
                .collect();
            if next.len() == current.len() {
                break;
            }
            current = next;
        }
        if current.len() == s.members.len() {
            return s.clone();
        }
        self.span_greedy(current)
    }

    /// `⟨[a, b] : a ∈ A, b ∈ B⟩`.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut seen = FixedBitSet::with_capacity(self.order());
        let mut comms = Vec::new();
        for &x in &a.members {
            for &y in &b.members {
                let c = self.comm(x, y);
                if !seen.put(c as usize) {
                    comms.push(c);
                }
            }
        }
        comms.sort_unstable();
        self.span_greedy(comms)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = self.whole();
        self.commutator_subgroup(&g, &g)
    }

    /// `γ_1 = G`, `γ_{i+1} = [γ_i, G]`.
    pub fn lower_central(&self, i: usize) -> Subgroup {
        assert!(i >= 1, "lower central series is indexed from 1");
        let g = self.whole();
        let mut gamma = g.clone();
        for _ in 1..i {
            if gamma.is_trivial() {
                break;
            }
            gamma = self.commutator_subgroup(&gamma, &g);
        }
        gamma
    }

    /// Every subgroup exactly once, ordered by (order, members).
    ///
    /// Exponential; refuses parents above [`ALL_SUBGROUPS_LIMIT`].
    pub fn all_subgroups(&self) -> crate::Result<Vec<Subgroup>> {
        if self.order() > ALL_SUBGROUPS_LIMIT {
            return Err(crate::Error::TooLarge {
                order: self.order(),
                limit: ALL_SUBGROUPS_LIMIT,
            });
        }
        let mut found = vec![self.trivial_subgroup()];
        let mut seen: HashSet<Vec<ElemId>> = HashSet::from([vec![0]]);
        let mut i = 0;
        while i < found.len() {
            for x in self.elements() {
                if found[i].contains(x) {
                    continue;
                }
                let s = self.extend(&found[i], x);
                if seen.insert(s.members.clone()) {
                    found.push(s);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        Ok(found)
    }
}

pub const ALL_SUBGROUPS_LIMIT: usize = 32;
