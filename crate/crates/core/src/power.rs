//! Power structure of finite p-groups: Ω and ℧ sets and subgroups, power
//! abelian, powerful, potent and regular predicates.
//!
//! Every function works on a subgroup `S` of a table `G` (pass
//! `g.whole()` for the group itself), so the power structure of a maximal
//! subgroup can be read without rebuilding it.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{log_p, ElemId, GroupTable, Subgroup};

fn require(s: &Subgroup, p: u32) -> Result<u32> {
    if !crate::group::is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    log_p(s.order() as u64, p).ok_or(Error::NotAPGroup { order: s.order(), p })
}

fn p_power(g: &GroupTable, x: ElemId, p: u32, n: u32) -> ElemId {
    (0..n).fold(x, |y, _| g.pow(y, p as u64))
}

/// `{x ∈ S : x^{p^n} = 1}`.
pub fn omega_set(g: &GroupTable, s: &Subgroup, p: u32, n: u32) -> Result<Vec<ElemId>> {
    require(s, p)?;
    let bound = (p as u64).saturating_pow(n);
    Ok(s.members()
        .iter()
        .copied()
        .filter(|&x| bound.is_multiple_of(g.order_of(x) as u64))
        .collect())
}

/// `Ω_n(S) = ⟨x ∈ S : x^{p^n} = 1⟩`.
pub fn omega_subgroup(g: &GroupTable, s: &Subgroup, p: u32, n: u32) -> Result<Subgroup> {
    Ok(g.span_greedy(omega_set(g, s, p, n)?))
}

/// `({x^{p^n}}, ℧_n(S) = ⟨x^{p^n}⟩)`.
pub fn agemo(g: &GroupTable, s: &Subgroup, p: u32, n: u32) -> Result<(Vec<ElemId>, Subgroup)> {
    require(s, p)?;
    let mut set: Vec<ElemId> = s.members().iter().map(|&x| p_power(g, x, p, n)).collect();
    set.sort_unstable();
    set.dedup();
    let sub = g.span_greedy(set.iter().copied());
    Ok((set, sub))
}

pub fn agemo_subgroup(g: &GroupTable, s: &Subgroup, p: u32, n: u32) -> Result<Subgroup> {
    Ok(agemo(g, s, p, n)?.1)
}

/// Power data at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerLevel {
    pub n: u32,
    pub omega_set_size: usize,
    pub omega_is_subgroup: bool,
    pub omega_subgroup_size: usize,
    pub agemo_set_size: usize,
    pub agemo_set_is_subgroup: bool,
    pub agemo_subgroup_size: usize,
    /// `|℧_n(S)| = |S : Ω_n(S)|`.
    pub index_match: bool,
}

impl PowerLevel {
    pub fn holds(&self) -> bool {
        self.omega_is_subgroup && self.agemo_set_is_subgroup && self.index_match
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerProfile {
    pub p: u32,
    pub order: usize,
    pub exponent: u64,
    /// One record for each `n` with `1 ≤ p^n ≤ exponent`.
    pub levels: Vec<PowerLevel>,
    pub power_abelian: bool,
}

impl PowerProfile {
    pub fn of(g: &GroupTable, p: u32) -> Result<Self> {
        Self::of_subgroup(g, &g.whole(), p)
    }

    pub fn of_subgroup(g: &GroupTable, s: &Subgroup, p: u32) -> Result<Self> {
        require(s, p)?;
        let exponent = subgroup_exponent(g, s);
        let top = log_p(exponent, p).expect("p-group exponent is a power of p");
        let levels = (1..=top)
            .map(|n| {
                let omega_set = omega_set(g, s, p, n)?;
                let omega = g.span_greedy(omega_set.iter().copied());
                let (agemo_set, agemo) = agemo(g, s, p, n)?;
                Ok(PowerLevel {
                    n,
                    omega_set_size: omega_set.len(),
                    omega_is_subgroup: omega_set.len() == omega.order(),
                    omega_subgroup_size: omega.order(),
                    agemo_set_size: agemo_set.len(),
                    agemo_set_is_subgroup: agemo_set.len() == agemo.order(),
                    agemo_subgroup_size: agemo.order(),
                    index_match: agemo.order() * omega.order() == s.order(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let power_abelian = levels.iter().all(PowerLevel::holds);
        Ok(PowerProfile {
            p,
            order: s.order(),
            exponent,
            levels,
            power_abelian,
        })
    }

    /// Least `n ≥ 1` whose Ω-set is a nontrivial subgroup.
    pub fn least_subgroup_omega(&self) -> Option<u32> {
        self.levels
            .iter()
            .find(|l| l.omega_is_subgroup && l.omega_set_size > 1)
            .map(|l| l.n)
    }
}

pub fn subgroup_exponent(g: &GroupTable, s: &Subgroup) -> u64 {
    s.members()
        .iter()
        .map(|&x| g.order_of(x) as u64)
        .max()
        .unwrap_or(1)
}

pub fn power_abelian(g: &GroupTable, p: u32) -> Result<bool> {
    Ok(PowerProfile::of(g, p)?.power_abelian)
}

/// `[S,S] ≤ ℧_1(S)` for odd `p`, `[S,S] ≤ ℧_2(S)` for `p = 2`.
pub fn is_powerful(g: &GroupTable, s: &Subgroup, p: u32) -> Result<bool> {
    require(s, p)?;
    let derived = g.commutator_subgroup(s, s);
    let n = if p == 2 { 2 } else { 1 };
    Ok(derived.is_subset_of(&agemo_subgroup(g, s, p, n)?))
}

/// `γ_{p-1}(S) ≤ ℧_1(S)` for odd `p`, `[S,S] ≤ ℧_2(S)` for `p = 2`.
pub fn is_potent(g: &GroupTable, s: &Subgroup, p: u32) -> Result<bool> {
    require(s, p)?;
    if p == 2 {
        return is_powerful(g, s, p);
    }
    let mut gamma = s.clone();
    for _ in 1..p - 1 {
        if gamma.is_trivial() {
            break;
        }
        gamma = g.commutator_subgroup(&gamma, s);
    }
    Ok(gamma.is_subset_of(&agemo_subgroup(g, s, p, 1)?))
}

/// Hall regularity: `(ab)^p ∈ a^p b^p ℧_1([⟨a,b⟩, ⟨a,b⟩])` for all `a, b ∈ S`.
pub fn is_regular(g: &GroupTable, s: &Subgroup, p: u32) -> Result<bool> {
    Ok(regularity_counterexample(g, s, p)?.is_none())
}

/// A pair violating regularity, scanning pairs in id order.
pub fn regularity_counterexample(
    g: &GroupTable,
    s: &Subgroup,
    p: u32,
) -> Result<Option<(ElemId, ElemId)>> {
    require(s, p)?;
    let mut memo: HashMap<Vec<ElemId>, Subgroup> = HashMap::new();
    let pp = p as u64;
    for &a in s.members() {
        for &b in s.members() {
            let ab = g.mul(a, b);
            let lhs = g.pow(ab, pp);
            let apbp = g.mul(g.pow(a, pp), g.pow(b, pp));
            if lhs == apbp {
                continue;
            }
            let pair = g.subgroup_generated(&[a, b]);
            let key = pair.members().to_vec();
            let agemo_derived = memo.entry(key).or_insert_with(|| {
                let d = g.commutator_subgroup(&pair, &pair);
                agemo(g, &d, p, 1).expect("subgroup of a p-group").1
            });
            // lhs = a^p b^p c  with c ∈ ℧_1(D)
            if !agemo_derived.contains(g.mul(g.inv(apbp), lhs)) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Power-structure predicates of a whole group.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub name: Option<String>,
    pub order: usize,
    pub exponent: u64,
    pub p: u32,
    pub abelian: bool,
    pub power_abelian: bool,
    pub powerful: bool,
    pub potent: bool,
    pub regular: bool,
    pub profile: PowerProfile,
}

pub fn analyze(g: &GroupTable, p: u32) -> Result<Analysis> {
    let whole = g.whole();
    let profile = PowerProfile::of(g, p)?;
    Ok(Analysis {
        name: g.name().map(str::to_owned),
        order: g.order(),
        exponent: g.exponent(),
        p,
        abelian: g.is_abelian(),
        power_abelian: profile.power_abelian,
        powerful: is_powerful(g, &whole, p)?,
        potent: is_potent(g, &whole, p)?,
        regular: is_regular(g, &whole, p)?,
        profile,
    })
}

impl Analysis {
    pub fn to_table(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}: order {}, exponent {}, p = {}",
            self.name.as_deref().unwrap_or("group"),
            self.order,
            self.exponent,
            self.p
        );
        let _ = writeln!(
            out,
            "abelian {}  power_abelian {}  powerful {}  potent {}  regular {}",
            self.abelian, self.power_abelian, self.powerful, self.potent, self.regular
        );
        let _ = writeln!(
            out,
            "{:>3} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>6}",
            "n", "|Ωset|", "Ωsub?", "|Ω|", "|℧set|", "℧sub?", "|℧|", "(3)"
        );
        for l in &self.profile.levels {
            let _ = writeln!(
                out,
                "{:>3} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>6}",
                l.n,
                l.omega_set_size,
                l.omega_is_subgroup,
                l.omega_subgroup_size,
                l.agemo_set_size,
                l.agemo_set_is_subgroup,
                l.agemo_subgroup_size,
                l.index_match
            );
        }
        out
    }
}
