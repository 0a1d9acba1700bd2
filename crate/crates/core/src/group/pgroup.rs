//! Frattini quotients and maximal subgroups of finite p-groups.

use super::subgroup::Subgroup;
use super::table::GroupTable;
use super::ElemId;
use crate::error::Result;

/// Coordinates of `S / Φ(S)` as an `F_p`-vector space.
///
/// `basis[i]` lifts the i-th basis vector; every member of `S` gets the
/// coordinate vector of its coset.
#[derive(Clone, Debug)]
pub struct FrattiniQuotient {
    pub p: u32,
    pub frattini: Subgroup,
    pub basis: Vec<ElemId>,
    coords: Vec<Option<Vec<u8>>>,
}

impl FrattiniQuotient {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x`, or `None` if `x` lies outside the subgroup.
    pub fn coords(&self, x: ElemId) -> Option<&[u8]> {
        self.coords[x as usize].as_deref()
    }
}

impl GroupTable {
    /// `Φ(S) = ⟨[S,S], s^p⟩` for a p-subgroup `S`.
    pub fn frattini_of(&self, s: &Subgroup, p: u32) -> Subgroup {
        let derived = self.commutator_subgroup(s, s);
        let powers: Vec<ElemId> = s.members().iter().map(|&x| self.pow(x, p as u64)).collect();
        self.span_greedy(derived.gens().iter().copied().chain(powers))
    }

    pub fn frattini(&self, p: u32) -> Result<Subgroup> {
        self.require_p_group(p)?;
        Ok(self.frattini_of(&self.whole(), p))
    }

    /// Burnside basis: greedy lifts of a basis of `S/Φ(S)`, preferring the
    /// listed generators of `S`, then members in id order.
    pub fn frattini_quotient(&self, s: &Subgroup, p: u32) -> Result<FrattiniQuotient> {
        super::table::log_p(s.order() as u64, p).ok_or(crate::Error::NotAPGroup {
            order: s.order(),
            p,
        })?;
        let frattini = self.frattini_of(s, p);
        let mut span = frattini.clone();
        let mut basis = Vec::new();
        for &x in s.gens().iter().chain(s.members()) {
            if !span.contains(x) {
                basis.push(x);
                span = self.extend(&span, x);
            }
        }
        debug_assert_eq!(span.order(), s.order());

        let r = basis.len();
        let mut coords = vec![None; self.order()];
        let mut e = vec![0u8; r];
        loop {
            let rep = e
                .iter()
                .zip(&basis)
                .fold(0, |acc, (&k, &b)| self.mul(acc, self.pow(b, k as u64)));
            for &f in frattini.members() {
                coords[self.mul(rep, f) as usize] = Some(e.clone());
            }
            if !next_vector(&mut e, p) {
                break;
            }
        }
        Ok(FrattiniQuotient {
            p,
            frattini,
            basis,
            coords,
        })
    }

    /// Minimal generating set of `S` (size = rank of `S/Φ(S)`).
    pub fn minimal_generators(&self, s: &Subgroup, p: u32) -> Result<Vec<ElemId>> {
        Ok(self.frattini_quotient(s, p)?.basis)
    }

    /// All subgroups of index `p`, as preimages of the hyperplanes of `G/Φ(G)`.
    ///
    /// Hyperplanes are kernels of the normalized functionals (first nonzero
    /// coefficient 1), taken in lexicographic order of the coefficient vector.
    pub fn maximal_subgroups(&self, p: u32) -> Result<Vec<Subgroup>> {
        self.require_p_group(p)?;
        let q = self.frattini_quotient(&self.whole(), p)?;
        let r = q.rank();
        let pu = p as u8;
        let mut out = Vec::new();
        let mut c = vec![0u8; r];
        while next_vector(&mut c, p) {
            let Some(pivot) = c.iter().position(|&x| x != 0) else {
                continue;
            };
            if c[pivot] != 1 {
                continue;
            }
            let members: Vec<ElemId> = self
                .elements()
                .filter(|&x| {
                    let v = q.coords(x).expect("every element has coordinates");
                    dot(&c, v, p) == 0
                })
                .collect();
            // kernel basis: e_i - c_i e_pivot for i != pivot
            let kernel_lifts = (0..r).filter(|&i| i != pivot).map(|i| {
                let neg = (pu - c[i] % pu) % pu;
                self.mul(q.basis[i], self.pow(q.basis[pivot], neg as u64))
            });
            let mut gens: Vec<ElemId> = q.frattini.gens().to_vec();
            gens.extend(kernel_lifts);
            gens.retain(|&g| g != 0);
            out.push(Subgroup::from_parts(self.order(), members, gens));
        }
        debug_assert_eq!(out.len() as u64, ((p as u64).pow(r as u32) - 1) / (p as u64 - 1));
        Ok(out)
    }
}

/// Mixed-radix increment; returns false after wrapping back to zero.
fn next_vector(v: &mut [u8], p: u32) -> bool {
    for x in v.iter_mut().rev() {
        *x += 1;
        if (*x as u32) < p {
            return true;
        }
        *x = 0;
    }
    false
}

fn dot(a: &[u8], b: &[u8], p: u32) -> u32 {
    a.iter().zip(b).map(|(&x, &y)| x as u32 * y as u32).sum::<u32>() % p
}
