//! Homomorphisms `H → G`, f-cores and the search for simple virtual
//! endomorphisms of index `p`.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{ElemId, GroupTable, Subgroup, NONE};

/// A homomorphism from a subgroup of a domain table into a codomain table.
///
/// `image_of` is dense over the domain table's ids; ids outside the domain
/// subgroup hold [`NONE`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    gens: Vec<ElemId>,
    gen_images: Vec<ElemId>,
    image_of: Vec<ElemId>,
}

impl GroupHom {
    pub fn gens(&self) -> &[ElemId] {
        &self.gens
    }

    pub fn gen_images(&self) -> &[ElemId] {
        &self.gen_images
    }

    /// `f(x)`, or `None` outside the domain.
    pub fn image(&self, x: ElemId) -> Option<ElemId> {
        match self.image_of.get(x as usize) {
            Some(&y) if y != NONE => Some(y),
            _ => None,
        }
    }

    /// Domain members paired with their images, in id order.
    pub fn pairs(&self) -> impl Iterator<Item = (ElemId, ElemId)> + '_ {
        self.image_of
            .iter()
            .enumerate()
            .filter(|(_, &y)| y != NONE)
            .map(|(x, &y)| (x as ElemId, y))
    }

    /// Exhaustive multiplicativity check over all domain pairs.
    pub fn is_multiplicative(&self, dom: &GroupTable, cod: &GroupTable) -> bool {
        let pairs: Vec<_> = self.pairs().collect();
        pairs.iter().all(|&(x, fx)| {
            pairs.iter().all(|&(y, fy)| {
                self.image(dom.mul(x, y)) == Some(cod.mul(fx, fy))
            })
        })
    }
}

/// Closes the pairs `(gens[k], images[k])` inside `dom × cod`.
///
/// Returns the graph as a dense map when it is a function, i.e. when no
/// domain element picks up two different images.
fn graph_closure(
    dom: &GroupTable,
    cod: &GroupTable,
    gens: &[ElemId],
    images: &[ElemId],
) -> Option<Vec<ElemId>> {
    let mut map = vec![NONE; dom.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([0 as ElemId]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x as usize];
        for (&g, &c) in gens.iter().zip(images) {
            let y = dom.mul(x, g);
            let fy = cod.mul(fx, c);
            match map[y as usize] {
                NONE => {
                    map[y as usize] = fy;
                    queue.push_back(y);
                }
                prev if prev != fy => return None,
                _ => {}
            }
        }
    }
    Some(map)
}

/// Extends `gens[k] ↦ images[k]` to a homomorphism on `h`, if one exists.
pub fn extend_hom(
    dom: &GroupTable,
    h: &Subgroup,
    cod: &GroupTable,
    gens: &[ElemId],
    images: &[ElemId],
) -> Result<Option<GroupHom>> {
    if gens.len() != images.len() {
        return Err(Error::input(format!(
            "{} generators but {} images",
            gens.len(),
            images.len()
        )));
    }
    if let Some(&bad) = images.iter().find(|&&y| y as usize >= cod.order()) {
        return Err(Error::input(format!("image id {bad} out of range")));
    }
    if gens.iter().any(|&g| g as usize >= dom.order()) || dom.subgroup_generated(gens) != *h {
        return Err(Error::GeneratorsDontGenerate);
    }
    Ok(graph_closure(dom, cod, gens, images).map(|image_of| GroupHom {
        gens: gens.to_vec(),
        gen_images: images.to_vec(),
        image_of,
    }))
}

/// Backtracking enumeration of every homomorphism `h → cod`.
///
/// Branches over the images of a minimal generating set of `h`, in codomain
/// id order, keeping only images whose order divides the generator's order
/// and pruning any partial assignment whose graph closure is not a function.
pub struct HomIter<'a> {
    dom: &'a GroupTable,
    cod: &'a GroupTable,
    gens: Vec<ElemId>,
    candidates: Vec<Vec<ElemId>>,
    assignment: Vec<ElemId>,
    stack: Vec<usize>,
    done: bool,
}

impl<'a> HomIter<'a> {
    pub fn new(dom: &'a GroupTable, h: &Subgroup, cod: &'a GroupTable, p: u32) -> Result<Self> {
        let gens = dom.minimal_generators(h, p)?;
        Ok(Self::with_generators(dom, gens, cod))
    }

    /// Enumerates over a caller-chosen generating list of the domain subgroup.
    pub fn with_generators(dom: &'a GroupTable, gens: Vec<ElemId>, cod: &'a GroupTable) -> Self {
        let candidates = gens
            .iter()
            .map(|&g| {
                let n = dom.order_of(g);
                cod.elements().filter(|&c| n.is_multiple_of(cod.order_of(c))).collect()
            })
            .collect();
        HomIter {
            dom,
            cod,
            assignment: vec![0; gens.len()],
            gens,
            candidates,
            stack: vec![0],
            done: false,
        }
    }
}

impl Iterator for HomIter<'_> {
    type Item = GroupHom;

    fn next(&mut self) -> Option<GroupHom> {
        if self.done {
            return None;
        }
        if self.gens.is_empty() {
            self.done = true;
            let mut image_of = vec![NONE; self.dom.order()];
            image_of[0] = 0;
            return Some(GroupHom {
                gens: Vec::new(),
                gen_images: Vec::new(),
                image_of,
            });
        }
        let r = self.gens.len();
        loop {
            let Some(k) = self.stack.len().checked_sub(1) else {
                self.done = true;
                return None;
            };
            let pos = self.stack[k];
            if pos >= self.candidates[k].len() {
                self.stack.pop();
                if let Some(last) = self.stack.last_mut() {
                    *last += 1;
                }
                continue;
            }
            self.assignment[k] = self.candidates[k][pos];
            let closed = graph_closure(
                self.dom,
                self.cod,
                &self.gens[..=k],
                &self.assignment[..=k],
            );
            match closed {
                None => self.stack[k] += 1,
                Some(image_of) if k + 1 == r => {
                    self.stack[k] += 1;
                    return Some(GroupHom {
                        gens: self.gens.clone(),
                        gen_images: self.assignment.clone(),
                        image_of,
                    });
                }
                Some(_) => self.stack.push(0),
            }
        }
    }
}

/// Every homomorphism `h → cod`, in enumeration order.
pub fn enumerate_homs(dom: &GroupTable, h: &Subgroup, cod: &GroupTable, p: u32) -> Result<Vec<GroupHom>> {
    Ok(HomIter::new(dom, h, cod, p)?.collect())
}

/// The largest `K ≤ H` that is normal in `g` and satisfies `f(K) ≤ K`.
///
/// Descending iteration `K₀ = core(H)`, `K_{i+1} = core(K_i ∩ f⁻¹(K_i))`.
pub fn f_core(g: &GroupTable, h: &Subgroup, f: &GroupHom) -> Subgroup {
    let mut k = g.normal_core(h);
    loop {
        if k.is_trivial() {
            return k;
        }
        let kept: Vec<ElemId> = k
            .members()
            .iter()
            .copied()
            .filter(|&x| f.image(x).is_some_and(|y| k.contains(y)))
            .collect();
        if kept.len() == k.order() {
            return k;
        }
        let next = g.span_greedy(kept);
        k = g.normal_core(&next);
    }
}

/// A homomorphism from an index-`p` subgroup `H` into its parent group,
/// with its f-core cached.
#[derive(Clone, Debug)]
pub struct VirtualEndomorphism {
    group: Arc<GroupTable>,
    p: u32,
    h: Arc<Subgroup>,
    f: GroupHom,
    fcore: Subgroup,
    simple: bool,
}

impl VirtualEndomorphism {
    pub fn new(group: Arc<GroupTable>, p: u32, h: Arc<Subgroup>, f: GroupHom) -> Result<Self> {
        if h.order() * p as usize != group.order() {
            return Err(Error::input(format!(
                "subgroup of order {} does not have index {p} in a group of order {}",
                h.order(),
                group.order()
            )));
        }
        if f.image_of.len() != group.order() || h.members().iter().any(|&x| f.image(x).is_none()) {
            return Err(Error::input("homomorphism is not defined on all of H"));
        }
        let fcore = f_core(&group, &h, &f);
        let simple = fcore.is_trivial();
        Ok(VirtualEndomorphism {
            group,
            p,
            h,
            f,
            fcore,
            simple,
        })
    }

    /// Builds the endomorphism extending `h_gens[k] ↦ images[k]`; `Ok(None)`
    /// if the map does not extend.
    pub fn from_map(group: Arc<GroupTable>, p: u32, h_gens: &[ElemId], images: &[ElemId]) -> Result<Option<Self>> {
        if h_gens.iter().any(|&x| x as usize >= group.order()) {
            return Err(Error::input("generator id out of range"));
        }
        let h = group.subgroup_generated(h_gens);
        match extend_hom(&group, &h, &group, h_gens, images)? {
            Some(f) => Self::new(group, p, Arc::new(h), f).map(Some),
            None => Ok(None),
        }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> &Subgroup {
        &self.h
    }

    pub fn f(&self) -> &GroupHom {
        &self.f
    }

    pub fn fcore(&self) -> &Subgroup {
        &self.fcore
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    /// `f(x)` for `x ∈ H`.
    pub fn apply(&self, x: ElemId) -> Option<ElemId> {
        self.f.image(x)
    }

    /// The image subgroup `H^f`.
    pub fn image_subgroup(&self) -> Subgroup {
        self.group.subgroup_generated(self.f.gen_images())
    }
}

/// Result of [`search_simple_endos`].
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub endos: Vec<VirtualEndomorphism>,
    /// The whole search space was covered.
    pub exhausted: bool,
    pub homs_examined: u64,
    pub maximal_subgroups: usize,
}

impl SearchOutcome {
    /// An exhausted search with no result proves `G` is not self-similar of degree `p`.
    pub fn proves_not_self_similar(&self) -> bool {
        self.exhausted && self.endos.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first simple endomorphism.
    First,
    All,
}

/// Runs over `maximal_subgroups(G, p) × enumerate_homs` and keeps the simple
/// endomorphisms. `budget` caps the number of homomorphisms examined.
pub fn search_simple_endos(
    group: &Arc<GroupTable>,
    p: u32,
    budget: Option<u64>,
    mode: SearchMode,
) -> Result<SearchOutcome> {
    let maximal = group.maximal_subgroups(p)?;
    let mut out = SearchOutcome {
        endos: Vec::new(),
        exhausted: true,
        homs_examined: 0,
        maximal_subgroups: maximal.len(),
    };
    'outer: for h in maximal {
        let h = Arc::new(h);
        for f in HomIter::new(group, &h, group, p)? {
            if budget.is_some_and(|b| out.homs_examined >= b) {
                out.exhausted = false;
                break 'outer;
            }
            out.homs_examined += 1;
            let endo = VirtualEndomorphism::new(group.clone(), p, h.clone(), f)?;
            if endo.simple {
                out.endos.push(endo);
                if mode == SearchMode::First {
                    out.exhausted = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(out)
}

/// Per-subgroup detail behind [`derived_obstruction`].
#[derive(Clone, Debug, Serialize)]
pub struct DerivedObstruction {
    pub derived_order: usize,
    pub maximal_count: usize,
    /// `|[H,H]|` for each maximal subgroup in enumeration order.
    pub maximal_derived_orders: Vec<usize>,
    pub holds: bool,
}

/// True iff `[G,G] ≠ 1` and `[H,H] = [G,G]` for every maximal `H`.
///
/// Then `f([H,H]) ≤ [G,G] = [H,H]` for every `f: H → G`, and `[H,H]` is
/// normal in `G`, so no virtual endomorphism of index `p` is simple.
pub fn derived_obstruction(g: &GroupTable, p: u32) -> Result<bool> {
    Ok(derived_obstruction_detail(g, p)?.holds)
}

pub fn derived_obstruction_detail(g: &GroupTable, p: u32) -> Result<DerivedObstruction> {
    g.require_p_group(p)?;
    let derived = g.derived_subgroup();
    let maximal = g.maximal_subgroups(p)?;
    let orders: Vec<usize> = maximal
        .iter()
        .map(|h| g.commutator_subgroup(h, h).order())
        .collect();
    // [H,H] ≤ [G,G] always, so equal orders mean equal subgroups.
    let holds = !derived.is_trivial() && orders.iter().all(|&o| o == derived.order());
    Ok(DerivedObstruction {
        derived_order: derived.order(),
        maximal_count: maximal.len(),
        maximal_derived_orders: orders,
        holds,
    })
}

/// The restriction `f: H ∩ H^f → H^f`, with `H^f` rebuilt as its own table.
pub fn restrict_endo(endo: &VirtualEndomorphism) -> Result<VirtualEndomorphism> {
    let g = &endo.group;
    let image = endo.image_subgroup();
    if image.is_subset_of(&endo.h) {
        return Err(Error::DegenerateRestriction);
    }
    let gens: Vec<_> = image.gens().iter().map(|&x| g.perm(x)).collect();
    let k = GroupTable::from_generators(g.degree(), &gens, g.order())?;
    let k = match g.name() {
        Some(name) => k.with_name(format!("{name}/image")),
        None => k,
    };
    let k = Arc::new(k.with_prime(endo.p)?);
    // ids of K in G and back
    let to_g: Vec<ElemId> = k
        .elements()
        .map(|x| g.lookup(&k.perm(x)).expect("image lies in G"))
        .collect();
    let mut to_k = vec![NONE; g.order()];
    for (xk, &xg) in to_g.iter().enumerate() {
        to_k[xg as usize] = xk as ElemId;
    }
    let inter: Vec<ElemId> = k
        .elements()
        .filter(|&x| endo.h.contains(to_g[x as usize]))
        .collect();
    let h2 = Arc::new(k.span_greedy(inter));
    let mut image_of = vec![NONE; k.order()];
    for &x in h2.members() {
        let fx = endo.apply(to_g[x as usize]).expect("x lies in H");
        image_of[x as usize] = to_k[fx as usize];
    }
    let gens = h2.gens().to_vec();
    let gen_images = gens.iter().map(|&x| image_of[x as usize]).collect();
    let f = GroupHom {
        gens,
        gen_images,
        image_of,
    };
    VirtualEndomorphism::new(k, endo.p, h2, f)
}
