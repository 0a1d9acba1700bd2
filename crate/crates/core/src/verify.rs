//! Executable checks of the exponent and splitting results over discovered
//! simple virtual endomorphisms, the wreath-product lift, and the catalog
//! suite that ties them together.
//!
//! Every check is a finite-scale check on concrete groups, not a proof.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::group::{log_p, ElemId, GroupTable, Perm, Subgroup, DEFAULT_CLOSURE_CAP};
use crate::morphism::{self, SearchMode, VirtualEndomorphism};
use crate::power::{self, PowerProfile};
use crate::tree::{self, MealyAutomaton, State, StateId, Transversal};

pub const SCOPE: &str = "finite-scale check";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub hypothesis_met: bool,
    pub conclusion_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<ElemId>>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: &str, hypothesis_met: bool, conclusion_holds: bool) -> Self {
        Check {
            name: name.to_owned(),
            hypothesis_met,
            conclusion_holds,
            witness: None,
            detail: String::new(),
        }
    }

    fn witness(mut self, w: Vec<ElemId>) -> Self {
        self.witness = Some(w);
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    pub fn violated(&self) -> bool {
        self.hypothesis_met && !self.conclusion_holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subject {
    pub group: String,
    pub p: u32,
    pub h_gens: Vec<ElemId>,
    pub images: Vec<ElemId>,
}

impl Subject {
    pub fn of(endo: &VirtualEndomorphism) -> Self {
        Subject {
            group: endo.group().name().unwrap_or("group").to_owned(),
            p: endo.p(),
            h_gens: endo.f().gens().to_vec(),
            images: endo.f().gen_images().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub subject: Subject,
    pub scope: &'static str,
    pub checks: Vec<Check>,
    /// False iff some check meets its hypothesis but misses its conclusion.
    pub holds: bool,
}

impl TheoremReport {
    pub fn new(subject: Subject, checks: Vec<Check>) -> Self {
        let holds = !checks.iter().any(Check::violated);
        TheoremReport {
            subject,
            scope: SCOPE,
            checks,
            holds,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn single(endo: &VirtualEndomorphism, check: Check) -> TheoremReport {
    TheoremReport::new(Subject::of(endo), vec![check])
}

fn require_simple(endo: &VirtualEndomorphism) -> Result<()> {
    if endo.is_simple() {
        Ok(())
    } else {
        Err(Error::input("the endomorphism is not simple"))
    }
}

fn exponent_bound_check(endo: &VirtualEndomorphism, profile: &PowerProfile) -> Check {
    let p = endo.p() as u64;
    match profile.least_subgroup_omega() {
        Some(n) => {
            let bound = p.pow(n);
            Check::new("exponent_bound", true, profile.exponent <= bound)
                .detail(format!("n = {n}, exponent {} vs p^n = {bound}", profile.exponent))
        }
        None => Check::new("exponent_bound", false, true).detail("no n with a nontrivial Ω-subgroup"),
    }
}

/// Least `n` whose Ω-set of `G` is a nontrivial subgroup; the conclusion is
/// `exp(G) ≤ p^n`.
pub fn check_theorem1(endo: &VirtualEndomorphism) -> Result<TheoremReport> {
    require_simple(endo)?;
    let profile = PowerProfile::of(endo.group(), endo.p())?;
    Ok(single(endo, exponent_bound_check(endo, &profile)))
}

fn power_abelian_split_check(endo: &VirtualEndomorphism, h_power_abelian: bool) -> Check {
    let g = endo.group();
    let h = endo.h();
    let p = endo.p();
    let h_exp = power::subgroup_exponent(g, h);
    let exponent_ok = h.is_trivial() || h_exp == p as u64;
    let witness = g
        .elements()
        .find(|&x| !h.contains(x) && g.order_of(x) == p && g.extend(h, x).order() == g.order());
    let check = Check::new("power_abelian_split", h_power_abelian, exponent_ok && witness.is_some())
        .detail(format!("exp(H) = {h_exp}"));
    match witness {
        Some(a) => check.witness(vec![a]),
        None => check,
    }
}

/// If `H` is power abelian then `exp(H) = p` and `G = H ⋊ ⟨a⟩` with `|a| = p`.
pub fn check_theorem2(endo: &VirtualEndomorphism) -> Result<TheoremReport> {
    require_simple(endo)?;
    let h_pa = PowerProfile::of_subgroup(endo.group(), endo.h(), endo.p())?.power_abelian;
    Ok(single(endo, power_abelian_split_check(endo, h_pa)))
}

fn split_check(endo: &VirtualEndomorphism) -> Check {
    let g = endo.group();
    let h = endo.h();
    let p = endo.p();
    let has_order_p = h.members().iter().any(|&x| g.order_of(x) == p);
    match tree::split_witness(endo) {
        Some(a) => {
            let cyclic = g.subgroup_generated(&[a]);
            let ok = g.order_of(a) == p
                && !h.contains(a)
                && g.intersection(&cyclic, h).is_trivial()
                && g.extend(h, a).order() == g.order();
            Check::new("split_witness", has_order_p, ok).witness(vec![a])
        }
        None => Check::new("split_witness", has_order_p, false).detail("no element of order p in H^f \\ H"),
    }
}

/// If `H` has elements of order `p`, some order-`p` element of `H^f` lies
/// outside `H` and splits `G` over `H`.
pub fn check_split_lemma(endo: &VirtualEndomorphism) -> Result<TheoremReport> {
    require_simple(endo)?;
    Ok(single(endo, split_check(endo)))
}

/// Re-checks a split witness from raw permutations, without the product
/// table: `a` has order `p`, no power `a^k` (0 < k < p) lies in `H`, and
/// `⟨H, a⟩` closes to all of `G`.
pub fn reverify_split_witness(g: &GroupTable, h: &Subgroup, a: ElemId, p: u32) -> bool {
    let pa = g.perm(a);
    if pa.order() != p as u64 {
        return false;
    }
    let h_perms: HashSet<Vec<u32>> = h.members().iter().map(|&x| g.images(x).to_vec()).collect();
    if (1..p as u64).any(|k| h_perms.contains(pa.pow(k).images())) {
        return false;
    }
    let mut gens: Vec<Perm> = h.gens().iter().map(|&x| g.perm(x)).collect();
    gens.push(pa);
    GroupTable::from_generators(g.degree(), &gens, g.order() + 1)
        .is_ok_and(|joined| joined.order() == g.order())
}

fn restriction_check(endo: &VirtualEndomorphism) -> Check {
    match morphism::restrict_endo(endo) {
        Ok(r) => {
            let index_ok = r.h().order() * endo.p() as usize == r.group().order();
            Check::new("restriction", true, r.is_simple() && index_ok).detail(format!(
                "|H^f| = {}, |H ∩ H^f| = {}",
                r.group().order(),
                r.h().order()
            ))
        }
        Err(Error::DegenerateRestriction) => {
            Check::new("restriction", false, true).detail("H^f ≤ H")
        }
        Err(e) => Check::new("restriction", true, false).detail(e.to_string()),
    }
}

/// `f: H ∩ H^f → H^f` is again simple of index `p` whenever `H^f ⊄ H`.
pub fn check_restriction(endo: &VirtualEndomorphism) -> Result<TheoremReport> {
    require_simple(endo)?;
    Ok(single(endo, restriction_check(endo)))
}

fn transfer_check(endo: &VirtualEndomorphism, max_n: u32) -> Result<Check> {
    let g = endo.group();
    let p = endo.p();
    let image = endo.image_subgroup();
    let mut failing = Vec::new();
    for n in 1..=max_n {
        let h_trivial = power::agemo_subgroup(g, endo.h(), p, n)?.is_trivial();
        let img_trivial = power::agemo_subgroup(g, &image, p, n)?.is_trivial();
        if h_trivial != img_trivial {
            failing.push(n);
        }
    }
    let check = Check::new("exponent_transfer", max_n >= 1, failing.is_empty());
    Ok(if failing.is_empty() {
        check.detail(format!("n = 1..={max_n}"))
    } else {
        check.detail(format!("fails at n = {failing:?}"))
    })
}

/// `℧_n(H) = 1 ⇔ ℧_n(H^f) = 1` for `n = 1 ..= log_p exp(G)`.
pub fn check_exponent_transfer(endo: &VirtualEndomorphism) -> Result<TheoremReport> {
    require_simple(endo)?;
    let max_n = log_p(endo.group().exponent(), endo.p()).unwrap_or(0);
    Ok(single(endo, transfer_check(endo, max_n)?))
}

/// Shared per-group data for [`check_all_with`].
pub struct GroupContext {
    profile: PowerProfile,
    max_n: u32,
    h_power_abelian: HashMap<Vec<ElemId>, bool>,
}

impl GroupContext {
    pub fn new(g: &GroupTable, p: u32) -> Result<Self> {
        let profile = PowerProfile::of(g, p)?;
        let max_n = log_p(profile.exponent, p).unwrap_or(0);
        let mut h_power_abelian = HashMap::new();
        for h in g.maximal_subgroups(p)? {
            let pa = PowerProfile::of_subgroup(g, &h, p)?.power_abelian;
            h_power_abelian.insert(h.members().to_vec(), pa);
        }
        Ok(GroupContext {
            profile,
            max_n,
            h_power_abelian,
        })
    }
}

/// Every endomorphism-level check on one simple endomorphism.
pub fn check_all(endo: &VirtualEndomorphism) -> Result<TheoremReport> {
    check_all_with(endo, &GroupContext::new(endo.group(), endo.p())?)
}

pub fn check_all_with(endo: &VirtualEndomorphism, ctx: &GroupContext) -> Result<TheoremReport> {
    require_simple(endo)?;
    let h_pa = match ctx.h_power_abelian.get(endo.h().members()) {
        Some(&pa) => pa,
        None => PowerProfile::of_subgroup(endo.group(), endo.h(), endo.p())?.power_abelian,
    };
    let split = split_check(endo);
    let mut checks = vec![exponent_bound_check(endo, &ctx.profile), power_abelian_split_check(endo, h_pa)];
    if let Some(&[a]) = split.witness.as_deref() {
        let ok = reverify_split_witness(endo.group(), endo.h(), a, endo.p());
        checks.push(Check::new("split_witness_reverified", true, ok).witness(vec![a]));
    }
    checks.insert(2, split);
    checks.push(restriction_check(endo));
    checks.push(transfer_check(endo, ctx.max_n)?);
    Ok(TheoremReport::new(Subject::of(endo), checks))
}

// -- wreath lift --

#[derive(Clone, Debug)]
pub struct WreathLift {
    /// Inner automaton plus wrapper states `w_a, w_b, …` and the rooted cycle `sigma`.
    pub automaton: MealyAutomaton,
    /// States generating the lifted group.
    pub generators: Vec<StateId>,
    pub report: TheoremReport,
    pub inner_separating_depth: usize,
    pub depth: usize,
    pub order: usize,
    pub expected_order: u128,
    pub lifted: Option<GroupTable>,
}

/// Splitting element used for the transversal `{1, a, …, a^{p-1}}`.
fn lift_element(endo: &VirtualEndomorphism) -> Result<ElemId> {
    if let Some(a) = tree::split_witness(endo) {
        return Ok(a);
    }
    if endo.h().is_trivial() {
        let g = endo.group();
        if let Some(a) = g.elements().find(|&x| x != 0) {
            return Ok(a);
        }
    }
    Err(Error::input("no splitting element of order p outside H"))
}

fn transitive(outputs: &[&Perm], p: usize) -> bool {
    let mut seen = vec![false; p];
    seen[0] = true;
    let mut stack = vec![0u32];
    while let Some(x) = stack.pop() {
        for o in outputs {
            let y = o.apply(x);
            if !std::mem::replace(&mut seen[y as usize], true) {
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Lifts a simple endomorphism of `G` to a self-similar action of `G ≀ C_p`.
///
/// The inner automaton uses `T = {1, a, …, a^{p-1}}`; each generator `g`
/// gets a wrapper state `(g, 1, …, 1)` and `sigma` is the rooted p-cycle.
/// The lifted group is closed on level `D = d* + 1` (`d*` the inner
/// separating depth), deepening up to `depth_cap` while it undershoots
/// `p·|G|^p`.
pub fn wreath_lift(endo: &VirtualEndomorphism, depth_cap: usize, closure_cap: usize) -> Result<WreathLift> {
    require_simple(endo)?;
    let g = endo.group();
    let p = endo.p() as usize;
    let a = lift_element(endo)?;
    let t = Transversal::powers_of(g, endo.h(), a)?;
    let mut automaton = tree::build_automaton(endo, &t)?;
    let all: Vec<StateId> = (0..automaton.len() as StateId).collect();
    let inner_depth = tree::separating_depth(&automaton, &all, depth_cap).map_err(|c| {
        Error::input(format!("inner automaton does not separate by depth {}", c.cap))
    })?;
    let inner_transitive = transitive(
        &g.gen_ids().iter().map(|&x| automaton.output(x)).collect::<Vec<_>>(),
        p,
    );

    let identity = Perm::identity(p);
    automaton.clear_initials();
    let mut generators = Vec::new();
    for (k, &x) in g.gen_ids().iter().enumerate() {
        let name = format!("w_{}", GroupTable::gen_name(k));
        let mut children = vec![0; p];
        children[0] = x;
        let state = State {
            label: name.clone(),
            element: None,
        };
        let id = automaton.push_state(state, identity.clone(), children);
        automaton.set_initial(name, id);
        generators.push(id);
    }
    let rotation = Perm::from_images((0..p as u32).map(|i| (i + 1) % p as u32).collect())?;
    let sigma = automaton.push_state(
        State {
            label: "sigma".into(),
            element: None,
        },
        rotation,
        vec![0; p],
    );
    automaton.set_initial("sigma", sigma);
    generators.push(sigma);
    let expected = p as u128 * (g.order() as u128).pow(p as u32);
    let mut depth = inner_depth + 1;
    let mut lifted = tree::level_perm_group(&automaton, &generators, depth, closure_cap)?;
    while (lifted.order() as u128) < expected && depth < depth_cap.max(inner_depth + 1) {
        depth += 1;
        lifted = tree::level_perm_group(&automaton, &generators, depth, closure_cap)?;
    }
    let lifted_transitive = transitive(
        &generators.iter().map(|&s| automaton.output(s)).collect::<Vec<_>>(),
        p,
    );
    let checks = vec![
        Check::new("state_closure", true, true).detail(format!("{} states", automaton.len())),
        Check::new("level1_transitive", true, inner_transitive && lifted_transitive),
        Check::new("wreath_order", true, lifted.order() as u128 == expected)
            .detail(format!("|P| = {} at depth {depth}, p·|G|^p = {expected}", lifted.order())),
    ];
    Ok(WreathLift {
        report: TheoremReport::new(Subject::of(endo), checks),
        generators,
        inner_separating_depth: inner_depth,
        depth,
        order: lifted.order(),
        expected_order: expected,
        lifted: Some(lifted),
        automaton,
    })
}

/// Number of elements of each order.
pub fn order_statistics(g: &GroupTable) -> BTreeMap<u32, usize> {
    let mut out = BTreeMap::new();
    for x in g.elements() {
        *out.entry(g.order_of(x)).or_insert(0) += 1;
    }
    out
}

// -- suite --

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub closure_cap: usize,
    /// Groups up to this order are searched exhaustively.
    pub full_search_max_order: usize,
    /// Homomorphism budget for larger groups.
    pub hom_budget: u64,
    pub depth_cap: usize,
    /// Wreath lifts are attempted when `p·|G|^p` stays below this.
    pub wreath_max_order: u128,
    /// Search groups even when the derived obstruction already rules them out.
    pub search_obstructed: bool,
    /// Keep every per-endomorphism report, not only violations.
    pub keep_reports: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            closure_cap: DEFAULT_CLOSURE_CAP,
            full_search_max_order: 81,
            hom_budget: 20_000,
            depth_cap: 8,
            wreath_max_order: 60_000,
            search_obstructed: false,
            keep_reports: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub hypothesis_met: u64,
    pub conclusion_held: u64,
    pub violations: u64,
}

impl Tally {
    fn add(&mut self, c: &Check) {
        if c.hypothesis_met {
            self.hypothesis_met += 1;
            if c.conclusion_holds {
                self.conclusion_held += 1;
            } else {
                self.violations += 1;
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchSummary {
    pub budget: Option<u64>,
    pub homs_examined: u64,
    pub exhausted: bool,
    pub maximal_subgroups: usize,
    pub simple_found: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct WreathSummary {
    pub inner_separating_depth: usize,
    pub depth: usize,
    pub order: usize,
    pub expected_order: u128,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub name: String,
    pub p: u32,
    pub order: usize,
    pub exponent: u64,
    pub power_abelian: bool,
    pub powerful: bool,
    pub potent: bool,
    pub regular: bool,
    /// `regular ⇒ power abelian` and `potent ⇒ power abelian`.
    pub power_implications_hold: bool,
    pub derived_obstruction: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSummary>,
    /// `yes`, `no` or `unknown` for degree `p`.
    pub self_similar: &'static str,
    pub checks: BTreeMap<String, Tally>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wreath: Option<WreathSummary>,
    pub violations: Vec<TheoremReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<TheoremReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteSummary {
    pub groups: usize,
    pub errors: usize,
    pub simple_endomorphisms: u64,
    pub hypotheses_met: u64,
    pub conclusions_held: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub scope: &'static str,
    pub groups: Vec<GroupSummary>,
    pub summary: SuiteSummary,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn group(&self, name: &str) -> Option<&GroupSummary> {
        self.groups.iter().find(|g| g.name == name)
    }
}

/// Runs analysis, obstruction, search and every check over `entries`.
/// Entries run in parallel; the report keeps catalog order.
pub fn run_suite(entries: &[CatalogEntry], cfg: &SuiteConfig) -> SuiteReport {
    let groups: Vec<GroupSummary> = entries.par_iter().map(|e| run_group(e, cfg)).collect();
    let mut summary = SuiteSummary {
        groups: groups.len(),
        ..Default::default()
    };
    for g in &groups {
        if g.error.is_some() {
            summary.errors += 1;
        }
        summary.simple_endomorphisms += g.search.as_ref().map_or(0, |s| s.simple_found as u64);
        for t in g.checks.values() {
            summary.hypotheses_met += t.hypothesis_met;
            summary.conclusions_held += t.conclusion_held;
            summary.violations += t.violations;
        }
        if !g.power_implications_hold {
            summary.violations += 1;
        }
    }
    SuiteReport {
        scope: SCOPE,
        groups,
        summary,
    }
}

fn run_group(entry: &CatalogEntry, cfg: &SuiteConfig) -> GroupSummary {
    let mut summary = GroupSummary {
        name: entry.name.clone(),
        p: entry.p,
        order: 0,
        exponent: 0,
        power_abelian: false,
        powerful: false,
        potent: false,
        regular: false,
        power_implications_hold: true,
        derived_obstruction: false,
        search: None,
        self_similar: "unknown",
        checks: BTreeMap::new(),
        wreath: None,
        violations: Vec::new(),
        reports: Vec::new(),
        error: None,
    };
    if let Err(e) = fill_group(entry, cfg, &mut summary) {
        summary.error = Some(e.to_string());
    }
    summary
}

fn fill_group(entry: &CatalogEntry, cfg: &SuiteConfig, out: &mut GroupSummary) -> Result<()> {
    let p = entry.p;
    let g = Arc::new(entry.build_with_cap(cfg.closure_cap)?);
    out.order = g.order();
    out.exponent = g.exponent();

    let analysis = power::analyze(&g, p)?;
    out.power_abelian = analysis.power_abelian;
    out.powerful = analysis.powerful;
    out.potent = analysis.potent;
    out.regular = analysis.regular;
    out.power_implications_hold =
        (!analysis.regular || analysis.power_abelian) && (!analysis.potent || analysis.power_abelian);

    out.derived_obstruction = morphism::derived_obstruction(&g, p)?;
    if out.derived_obstruction {
        out.self_similar = "no";
        if !cfg.search_obstructed {
            return Ok(());
        }
    }

    let budget = (g.order() > cfg.full_search_max_order).then_some(cfg.hom_budget);
    let search = morphism::search_simple_endos(&g, p, budget, SearchMode::All)?;
    out.search = Some(SearchSummary {
        budget,
        homs_examined: search.homs_examined,
        exhausted: search.exhausted,
        maximal_subgroups: search.maximal_subgroups,
        simple_found: search.endos.len(),
    });
    out.self_similar = if !search.endos.is_empty() {
        "yes"
    } else if search.exhausted || out.derived_obstruction {
        "no"
    } else {
        "unknown"
    };

    let ctx = GroupContext::new(&g, p)?;
    let reports = search
        .endos
        .par_iter()
        .map(|endo| check_all_with(endo, &ctx))
        .collect::<Result<Vec<_>>>()?;
    for r in &reports {
        for c in &r.checks {
            out.checks.entry(c.name.clone()).or_default().add(c);
        }
        if !r.holds {
            out.violations.push(r.clone());
        }
    }
    if cfg.keep_reports {
        out.reports = reports;
    }

    let expected = p as u128 * (g.order() as u128).pow(p);
    if let Some(endo) = search.endos.first().filter(|_| expected <= cfg.wreath_max_order) {
        let lift = wreath_lift(endo, cfg.depth_cap, cfg.closure_cap)?;
        for c in &lift.report.checks {
            out.checks.entry(format!("wreath.{}", c.name)).or_default().add(c);
        }
        if !lift.report.holds {
            out.violations.push(lift.report.clone());
        }
        out.wreath = Some(WreathSummary {
            inner_separating_depth: lift.inner_separating_depth,
            depth: lift.depth,
            order: lift.order,
            expected_order: lift.expected_order,
            holds: lift.report.holds,
        });
    }
    Ok(())
}
