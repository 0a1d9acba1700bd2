//! Deterministic constructors for the small p-groups the checks run on.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupTable, Perm, DEFAULT_CLOSURE_CAP};
use crate::morphism::VirtualEndomorphism;
use crate::tree::Transversal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Abelian,
    Extraspecial,
    Wreath,
    Dihedral,
    Quaternion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// `C_n` as one n-cycle.
    Cyclic { n: u32 },
    /// Unitriangular 3×3 matrices over `Z/p`, regular action.
    Heisenberg { p: u32 },
    /// `Z/p² ⋊ Z/p` with `y x y⁻¹ = x^{1+p}`, regular action.
    ExtraspecialExpP2 { p: u32 },
    /// Central product of two Heisenberg groups, regular action.
    ExtraspecialP5 { p: u32 },
    /// Dihedral group of order `n` on `n/2` points.
    Dihedral { n: u32 },
    Quaternion8,
    /// `C_p ≀ C_p` on `p²` points.
    WreathCpCp { p: u32 },
    /// Direct product on the disjoint union of the two point sets.
    Product { factors: Vec<Construction> },
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub p: u32,
    pub construction: Construction,
    pub expected_order: u64,
    pub expected_exponent: u64,
    pub tags: Vec<Tag>,
    /// Part of the default verification suite.
    pub default: bool,
}

fn entry(
    name: &str,
    p: u32,
    construction: Construction,
    order: u64,
    exponent: u64,
    tags: &[Tag],
) -> CatalogEntry {
    CatalogEntry {
        name: name.to_owned(),
        p,
        construction,
        expected_order: order,
        expected_exponent: exponent,
        tags: tags.to_vec(),
        default: true,
    }
}

fn cyc(n: u32) -> Construction {
    Construction::Cyclic { n }
}

fn prod(factors: Vec<Construction>) -> Construction {
    Construction::Product { factors }
}

/// Every named entry, in catalog order.
pub fn entries() -> Vec<CatalogEntry> {
    use Construction::*;
    let mut out = vec![
        entry("c2", 2, cyc(2), 2, 2, &[Tag::Abelian]),
        entry("c3", 3, cyc(3), 3, 3, &[Tag::Abelian]),
        entry("c4", 2, cyc(4), 4, 4, &[Tag::Abelian]),
        entry("c5", 5, cyc(5), 5, 5, &[Tag::Abelian]),
        entry("c2xc2", 2, prod(vec![cyc(2), cyc(2)]), 4, 2, &[Tag::Abelian]),
        entry("c8", 2, cyc(8), 8, 8, &[Tag::Abelian]),
        entry("c4xc2", 2, prod(vec![cyc(4), cyc(2)]), 8, 4, &[Tag::Abelian]),
        entry("c2xc2xc2", 2, prod(vec![cyc(2), cyc(2), cyc(2)]), 8, 2, &[Tag::Abelian]),
        entry("d8", 2, Heisenberg { p: 2 }, 8, 4, &[Tag::Dihedral, Tag::Extraspecial]),
        entry("q8", 2, Quaternion8, 8, 4, &[Tag::Quaternion, Tag::Extraspecial]),
        entry("wreath_c2c2", 2, WreathCpCp { p: 2 }, 8, 4, &[Tag::Wreath, Tag::Dihedral]),
        entry("c9", 3, cyc(9), 9, 9, &[Tag::Abelian]),
        entry("c3xc3", 3, prod(vec![cyc(3), cyc(3)]), 9, 3, &[Tag::Abelian]),
        entry("c4xc4", 2, prod(vec![cyc(4), cyc(4)]), 16, 4, &[Tag::Abelian]),
        entry("d16", 2, Dihedral { n: 16 }, 16, 8, &[Tag::Dihedral]),
        entry("c27", 3, cyc(27), 27, 27, &[Tag::Abelian]),
        entry("c9xc3", 3, prod(vec![cyc(9), cyc(3)]), 27, 9, &[Tag::Abelian]),
        entry("c3xc3xc3", 3, prod(vec![cyc(3), cyc(3), cyc(3)]), 27, 3, &[Tag::Abelian]),
        entry("heisenberg3", 3, Heisenberg { p: 3 }, 27, 3, &[Tag::Extraspecial]),
        entry("m27", 3, ExtraspecialExpP2 { p: 3 }, 27, 9, &[Tag::Extraspecial]),
        entry("wreath_c3c3", 3, WreathCpCp { p: 3 }, 81, 9, &[Tag::Wreath]),
        entry("heisenberg5", 5, Heisenberg { p: 5 }, 125, 5, &[Tag::Extraspecial]),
        entry("extraspecial_p5_3", 3, ExtraspecialP5 { p: 3 }, 243, 3, &[Tag::Extraspecial]),
        entry(
            "heisenberg3xheisenberg3",
            3,
            prod(vec![Heisenberg { p: 3 }, Heisenberg { p: 3 }]),
            729,
            3,
            &[],
        ),
        entry(
            "c3xheisenberg3",
            3,
            prod(vec![cyc(3), Heisenberg { p: 3 }]),
            81,
            3,
            &[],
        ),
        entry("m125", 5, ExtraspecialExpP2 { p: 5 }, 125, 25, &[Tag::Extraspecial]),
        entry("wreath_c5c5", 5, WreathCpCp { p: 5 }, 15_625, 25, &[Tag::Wreath]),
    ];
    for e in out.iter_mut() {
        if matches!(e.name.as_str(), "c3xheisenberg3" | "m125" | "wreath_c5c5") {
            e.default = false;
        }
    }
    out
}

/// Entries run by the default verification suite.
pub fn default_entries() -> Vec<CatalogEntry> {
    entries().into_iter().filter(|e| e.default).collect()
}

const ALIASES: &[(&str, &str)] = &[
    ("heisenberg2", "d8"),
    ("extraspecial27", "heisenberg3"),
    ("dihedral8", "d8"),
];

/// Finds a named entry; also accepts aliases and `c<n>` / `heisenberg<p>`
/// for other primes.
pub fn lookup(name: &str) -> Option<CatalogEntry> {
    let canonical = ALIASES
        .iter()
        .find(|(alias, _)| *alias == name)
        .map_or(name, |(_, target)| target);
    if let Some(e) = entries().into_iter().find(|e| e.name == canonical) {
        return Some(e);
    }
    if let Some(n) = name.strip_prefix('c').and_then(|s| s.parse::<u32>().ok()) {
        let p = (2..=n).find(|d| n % d == 0)?;
        crate::group::log_p(n as u64, p)?;
        let mut e = entry(name, p, cyc(n), n as u64, n as u64, &[Tag::Abelian]);
        e.default = false;
        return Some(e);
    }
    if let Some(p) = name.strip_prefix("heisenberg").and_then(|s| s.parse::<u32>().ok()) {
        if crate::group::is_prime(p) && p > 2 {
            let order = (p as u64).pow(3);
            let mut e = entry(name, p, Construction::Heisenberg { p }, order, p as u64, &[Tag::Extraspecial]);
            e.default = false;
            return Some(e);
        }
    }
    None
}

impl CatalogEntry {
    pub fn build(&self) -> Result<GroupTable> {
        self.build_with_cap(DEFAULT_CLOSURE_CAP)
    }

    pub fn build_with_cap(&self, cap: usize) -> Result<GroupTable> {
        let (degree, gens) = realize(&self.construction)?;
        GroupTable::from_generators(degree, &gens, cap)?
            .with_name(self.name.clone())
            .with_prime(self.p)
    }

    pub fn has_tag(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }
}

/// Point count and generator list for a construction.
pub fn realize(c: &Construction) -> Result<(usize, Vec<Perm>)> {
    match *c {
        Construction::Cyclic { n } => {
            let cycle: Vec<u32> = (0..n).collect();
            Ok((n as usize, vec![Perm::from_cycles(n as usize, &[cycle])?]))
        }
        Construction::Heisenberg { p } => {
            let mul = move |x: &[u32; 3], y: &[u32; 3]| {
                [(x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p]
            };
            Ok(regular_action([0; 3], &[[1, 0, 0], [0, 1, 0], [0, 0, 1]], mul))
        }
        Construction::ExtraspecialExpP2 { p } => {
            let q = p * p;
            let r = 1 + p;
            let mul = move |x: &[u32; 2], y: &[u32; 2]| {
                let twist = (0..x[1]).fold(1u32, |acc, _| acc * r % q);
                [(x[0] + y[0] * twist) % q, (x[1] + y[1]) % p]
            };
            Ok(regular_action([0; 2], &[[1, 0], [0, 1]], mul))
        }
        Construction::ExtraspecialP5 { p } => {
            let mul = move |x: &[u32; 5], y: &[u32; 5]| {
                [
                    (x[0] + y[0]) % p,
                    (x[1] + y[1]) % p,
                    (x[2] + y[2]) % p,
                    (x[3] + y[3]) % p,
                    (x[4] + y[4] + x[0] * y[1] + x[2] * y[3]) % p,
                ]
            };
            let gens = [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]];
            Ok(regular_action([0; 5], &gens, mul))
        }
        Construction::Dihedral { n } => {
            if n < 4 || n % 2 != 0 {
                return Err(Error::input(format!("dihedral order {n} must be even and at least 4")));
            }
            let m = n / 2;
            let rot = Perm::from_images((0..m).map(|i| (i + 1) % m).collect())?;
            let refl = Perm::from_images((0..m).map(|i| (m - i) % m).collect())?;
            Ok((m as usize, vec![rot, refl]))
        }
        Construction::Quaternion8 => {
            // x^i y^j with x^4 = 1, y^2 = x^2, y x y⁻¹ = x⁻¹
            let mul = |a: &[u32; 2], b: &[u32; 2]| {
                let sign = if a[1] == 1 { 3 } else { 1 };
                let mut i = a[0] + b[0] * sign;
                let mut j = a[1] + b[1];
                if j >= 2 {
                    j -= 2;
                    i += 2;
                }
                [i % 4, j]
            };
            Ok(regular_action([0; 2], &[[1, 0], [0, 1]], mul))
        }
        Construction::WreathCpCp { p } => {
            let n = (p * p) as usize;
            let base = Perm::from_cycles(n, &[(0..p).collect()])?;
            let top = Perm::from_images((0..p * p).map(|i| (i + p) % (p * p)).collect())?;
            Ok((n, vec![base, top]))
        }
        Construction::Product { ref factors } => {
            let parts = factors.iter().map(realize).collect::<Result<Vec<_>>>()?;
            let degree: usize = parts.iter().map(|(d, _)| d).sum();
            let mut gens = Vec::new();
            let mut offset = 0;
            for (d, part_gens) in &parts {
                for g in part_gens {
                    let mut images: Vec<u32> = (0..degree as u32).collect();
                    for i in 0..*d {
                        images[offset + i] = (offset as u32) + g.apply(i as u32);
                    }
                    gens.push(Perm::from_images(images)?);
                }
                offset += d;
            }
            Ok((degree, gens))
        }
    }
}

/// Right regular action `x ↦ x·g` of the group generated under `mul`.
fn regular_action<T, F>(identity: T, gens: &[T], mul: F) -> (usize, Vec<Perm>)
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut elems = vec![identity.clone()];
    let mut index = HashMap::from([(identity, 0u32)]);
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let y = mul(&elems[i], g);
            if !index.contains_key(&y) {
                index.insert(y.clone(), elems.len() as u32);
                elems.push(y);
            }
        }
        i += 1;
    }
    let perms = gens
        .iter()
        .map(|g| {
            let images = elems.iter().map(|x| index[&mul(x, g)]).collect();
            Perm::from_images(images).expect("right multiplication is a bijection")
        })
        .collect();
    (elems.len(), perms)
}

/// The standard endomorphism of the Heisenberg group `⟨a, b, c⟩` with
/// `[a, b] = c`: `H = ⟨a, c⟩`, `f(a) = c`, `f(c) = b`, together with the
/// transversal `{1, b, …, b^{p-1}}`.
pub fn heisenberg_endo(p: u32) -> Result<(VirtualEndomorphism, Transversal)> {
    let entry = lookup(&format!("heisenberg{p}"))
        .ok_or_else(|| Error::input(format!("no Heisenberg group for {p}")))?;
    let g = Arc::new(entry.build()?);
    let [a, b, c] = g.gen_ids() else {
        return Err(Error::input("Heisenberg group needs three generators"));
    };
    let (a, b, c) = (*a, *b, *c);
    let endo = VirtualEndomorphism::from_map(g.clone(), p, &[a, c], &[c, b])?
        .ok_or_else(|| Error::input("a -> c, c -> b does not extend"))?;
    let t = Transversal::powers_of(&g, endo.h(), b)?;
    Ok((endo, t))
}
