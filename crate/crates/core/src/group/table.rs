use std::collections::HashMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::perm::{lcm, Perm};
use super::ElemId;
use crate::error::{Error, Result};

/// Default element cap for [`GroupTable::from_generators`].
pub const DEFAULT_CLOSURE_CAP: usize = 250_000;

/// Groups up to this order get a dense product table.
const DENSE_LIMIT: usize = 2048;

const NO_GEN: u16 = u16::MAX;

/// A fully enumerated finite permutation group.
///
/// Elements are numbered breadth-first from the identity (id 0), extending
/// by the generators in input order. The numbering only depends on the
/// generator list, so ids are stable across runs.
#[derive(Clone)]
pub struct GroupTable {
    name: Option<String>,
    degree: usize,
    perms: Vec<u32>,
    index: HashMap<Box<[u32]>, ElemId>,
    gen_ids: Vec<ElemId>,
    /// `right_gen[x * ngens + k]` is `x * gen_k`.
    right_gen: Vec<ElemId>,
    /// BFS tree: element = parent * gen.
    parent: Vec<(ElemId, u16)>,
    mul: Option<Vec<ElemId>>,
    inv: Vec<ElemId>,
    order_of: Vec<u32>,
    prime_hint: Option<u32>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("gen_ids", &self.gen_ids)
            .finish()
    }
}

impl GroupTable {
    /// Breadth-first product closure of `generators`.
    pub fn from_generators(degree: usize, generators: &[Perm], cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::input("closure cap must be at least 1"));
        }
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        if generators.len() >= NO_GEN as usize {
            return Err(Error::input("too many generators"));
        }
        let ngens = generators.len();
        let mut perms: Vec<u32> = (0..degree as u32).collect();
        let mut index: HashMap<Box<[u32]>, ElemId> = HashMap::new();
        index.insert(perms.clone().into_boxed_slice(), 0);
        let mut parent = vec![(0, NO_GEN)];
        let mut right_gen = Vec::new();
        let mut scratch = vec![0u32; degree];
        let mut x = 0usize;
        while x < parent.len() {
            for (k, g) in generators.iter().enumerate() {
                let base = x * degree;
                for i in 0..degree {
                    scratch[i] = g.apply(perms[base + i]);
                }
                let id = match index.get(scratch.as_slice()) {
                    Some(&id) => id,
                    None => {
                        let id = parent.len();
                        if id >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        index.insert(scratch.clone().into_boxed_slice(), id as ElemId);
                        perms.extend_from_slice(&scratch);
                        parent.push((x as ElemId, k as u16));
                        id as ElemId
                    }
                };
                right_gen.push(id);
            }
            x += 1;
        }
        let n = parent.len();
        let gen_ids = (0..ngens).map(|k| right_gen[k]).collect();

        let mut table = GroupTable {
            name: None,
            degree,
            perms,
            index,
            gen_ids,
            right_gen,
            parent,
            mul: None,
            inv: Vec::new(),
            order_of: Vec::new(),
            prime_hint: None,
        };
        table.inv = (0..n as ElemId)
            .map(|x| table.lookup(&table.perm(x).inverse()).expect("closed under inverses"))
            .collect();
        table.order_of = (0..n as ElemId).map(|x| table.perm(x).order() as u32).collect();
        if n <= DENSE_LIMIT {
            table.mul = Some(table.dense_product_table());
        }
        Ok(table)
    }

    /// Fills `x * y` column by column: `x * y = (x * parent(y)) * gen(y)`.
    fn dense_product_table(&self) -> Vec<ElemId> {
        let n = self.order();
        let ngens = self.gen_ids.len();
        let mut t = vec![0 as ElemId; n * n];
        for x in 0..n {
            t[x * n] = x as ElemId;
        }
        for y in 1..n {
            let (py, k) = self.parent[y];
            for x in 0..n {
                let xp = t[x * n + py as usize] as usize;
                t[x * n + y] = self.right_gen[xp * ngens + k as usize];
            }
        }
        t
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Records the prime `p`; fails unless the order is a power of `p`.
    pub fn with_prime(mut self, p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        if log_p(self.order() as u64, p).is_none() {
            return Err(Error::NotAPGroup {
                order: self.order(),
                p,
            });
        }
        self.prime_hint = Some(p);
        Ok(self)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    pub fn prime_hint(&self) -> Option<u32> {
        self.prime_hint
    }

    pub fn gen_ids(&self) -> &[ElemId] {
        &self.gen_ids
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> {
        0..self.order() as ElemId
    }

    /// Image list of element `x`.
    pub fn perm(&self, x: ElemId) -> Perm {
        Perm::from_images_unchecked(self.images(x).to_vec())
    }

    pub fn images(&self, x: ElemId) -> &[u32] {
        let base = x as usize * self.degree;
        &self.perms[base..base + self.degree]
    }

    pub fn lookup(&self, perm: &Perm) -> Option<ElemId> {
        self.index.get(perm.images()).copied()
    }

    #[inline]
    pub fn mul(&self, x: ElemId, y: ElemId) -> ElemId {
        match &self.mul {
            Some(t) => t[x as usize * self.order() + y as usize],
            None => {
                let (a, b) = (self.images(x), self.images(y));
                let prod: Vec<u32> = a.iter().map(|&i| b[i as usize]).collect();
                self.index[prod.as_slice()]
            }
        }
    }

    #[inline]
    pub fn inv(&self, x: ElemId) -> ElemId {
        self.inv[x as usize]
    }

    #[inline]
    pub fn order_of(&self, x: ElemId) -> u32 {
        self.order_of[x as usize]
    }

    pub fn pow(&self, x: ElemId, mut k: u64) -> ElemId {
        k %= self.order_of(x) as u64;
        let (mut acc, mut base) = (0, x);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `x^g = g⁻¹ x g`.
    pub fn conj(&self, x: ElemId, g: ElemId) -> ElemId {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn comm(&self, x: ElemId, y: ElemId) -> ElemId {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(self.inv(yx), xy)
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.order_of.iter().fold(1, |acc, &o| lcm(acc, o as u64))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gen_ids;
        g.iter()
            .all(|&x| g.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }

    /// The prime `p` if the order is `p^k` with `k ≥ 1`; the hint for the trivial group.
    pub fn p_group_prime(&self) -> Option<u32> {
        if let Some(p) = self.prime_hint {
            return Some(p);
        }
        let n = self.order() as u64;
        let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
        log_p(n, p as u32).map(|_| p as u32)
    }

    pub(crate) fn require_p_group(&self, p: u32) -> Result<u32> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        log_p(self.order() as u64, p).ok_or(Error::NotAPGroup {
            order: self.order(),
            p,
        })
    }

    /// Shortest word (as generator indices) reaching `x` in the BFS tree.
    pub fn word(&self, mut x: ElemId) -> Vec<usize> {
        let mut w = Vec::new();
        while x != 0 {
            let (px, k) = self.parent[x as usize];
            w.push(k as usize);
            x = px;
        }
        w.reverse();
        w
    }

    /// Generator `k` is named `a`, `b`, `c`, … (then `g26`, `g27`, …).
    pub fn gen_name(k: usize) -> String {
        if k < 26 {
            ((b'a' + k as u8) as char).to_string()
        } else {
            format!("g{k}")
        }
    }

    /// A readable label such as `cb^2`; the identity is `1`.
    pub fn label(&self, x: ElemId) -> String {
        let w = self.word(x);
        if w.is_empty() {
            return "1".into();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            out.push_str(&Self::gen_name(w[i]));
            if j - i > 1 {
                let _ = write!(out, "^{}", j - i);
            }
            i = j;
        }
        out
    }

    /// Hex SHA-256 over the degree and the numbered element list.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.degree as u64).to_le_bytes());
        for &x in &self.perms {
            h.update(x.to_le_bytes());
        }
        h.finalize().iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `k` with `n = p^k`, if any.
pub fn log_p(mut n: u64, p: u32) -> Option<u32> {
    let p = p as u64;
    if n == 0 || p < 2 {
        return None;
    }
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    (n == 1).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, c: &[u32]) -> Perm {
        Perm::from_cycles(n, &[c.to_vec()]).unwrap()
    }

    #[test]
    fn identity_generator_gives_trivial_group() {
        let g = GroupTable::from_generators(3, &[Perm::identity(3)], 10).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.gen_ids(), &[0]);
        assert_eq!(g.exponent(), 1);
    }

    #[test]
    fn three_cycle_gives_c3() {
        let g = GroupTable::from_generators(3, &[cyc(3, &[0, 1, 2])], 10).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.exponent(), 3);
        assert!(g.is_abelian());
        assert_eq!(g.p_group_prime(), Some(3));
    }

    #[test]
    fn cap_and_degree_errors() {
        let s3 = [cyc(3, &[0, 1, 2]), cyc(3, &[0, 1])];
        assert!(matches!(
            GroupTable::from_generators(3, &s3, 5),
            Err(Error::CapExceeded { cap: 5 })
        ));
        assert!(matches!(
            GroupTable::from_generators(4, &s3, 10),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn dense_and_sparse_products_agree() {
        let s4 = GroupTable::from_generators(4, &[cyc(4, &[0, 1, 2, 3]), cyc(4, &[0, 1])], 100)
            .unwrap();
        assert_eq!(s4.order(), 24);
        let mut sparse = s4.clone();
        sparse.mul = None;
        for x in s4.elements() {
            for y in s4.elements() {
                assert_eq!(s4.mul(x, y), sparse.mul(x, y));
                let direct = s4.lookup(&s4.perm(x).then(&s4.perm(y))).unwrap();
                assert_eq!(s4.mul(x, y), direct);
            }
            assert_eq!(s4.mul(x, s4.inv(x)), 0);
        }
    }

    #[test]
    fn numbering_is_bfs_and_labels_follow_words() {
        let c4 = GroupTable::from_generators(4, &[cyc(4, &[0, 1, 2, 3])], 10).unwrap();
        assert_eq!(c4.label(0), "1");
        assert_eq!(c4.label(1), "a");
        assert_eq!(c4.label(2), "a^2");
        assert_eq!(c4.word(3), vec![0, 0, 0]);
    }

    #[test]
    fn prime_helpers() {
        assert!(is_prime(2) && is_prime(3) && is_prime(101));
        assert!(!is_prime(1) && !is_prime(9));
        assert_eq!(log_p(243, 3), Some(5));
        assert_eq!(log_p(1, 3), Some(0));
        assert_eq!(log_p(12, 2), None);
    }
}
