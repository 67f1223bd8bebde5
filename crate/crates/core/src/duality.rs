//! Finite and restricted homomorphism dualities over explicit samples.
//!
//! Every "for all G in the class" statement is checked over a
//! [`ClassSample`], and reports carry the sample description as scope.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::approx::{is_t_approximation, quotient_approximation, theta_oracle, ApproxResult, ThetaOutcome};
use crate::canon::{canonical_code, CANON_CAP};
use crate::error::{Error, Result};
use crate::generators::{digraphs_of_order, graphs_of_order, structures_of_order, SubdivisionCertificate};
use crate::graph::Digraph;
use crate::hom::{core, hom_count, hom_equivalent, hom_exists, is_core, is_subgraph_isomorphic, HomSearchConfig, Propagation};
use crate::ops::{categorical_product, components, disjoint_union, disjoint_union_all, is_connected, pre_set_keeping_loops};
use crate::structure::{Homomorphism, Signature, Structure, ToStructure};

/// Largest product order [`product_dual`] will build.
pub const PRODUCT_CAP: usize = 4096;
/// Brute-force recheck is used when `|B|^|A|` stays below this.
const RECHECK_COUNT_LIMIT: f64 = 1e7;

/// Closure properties the caller asserts about the class a sample stands for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassFlags {
    pub hereditary: bool,
    pub addable: bool,
    pub monotone: bool,
    pub topologically_closed: bool,
}

impl ClassFlags {
    pub fn hereditary_addable_monotone() -> Self {
        ClassFlags {
            hereditary: true,
            addable: true,
            monotone: true,
            topologically_closed: false,
        }
    }
}

impl fmt::Display for ClassFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (self.hereditary, "hereditary"),
            (self.addable, "addable"),
            (self.monotone, "monotone"),
            (self.topologically_closed, "topologically_closed"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|(_, n)| *n)
        .collect();
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

/// Explicit finite stand-in for a class of structures.
#[derive(Clone, Debug)]
pub struct ClassSample {
    members: Vec<Structure>,
    flags: ClassFlags,
    description: String,
    certificates: Vec<Option<SubdivisionCertificate>>,
}

fn dedupe_key(s: &Structure) -> Result<Vec<u8>> {
    if s.order() <= CANON_CAP {
        canonical_code(s)
    } else {
        // too large for canonical codes: only literal duplicates are merged
        Ok(crate::io::format_structure(s).into_bytes())
    }
}

impl ClassSample {
    /// Keeps the first member of each isomorphism class, in input order.
    pub fn new(members: Vec<Structure>, flags: ClassFlags, description: impl Into<String>) -> Result<Self> {
        if let Some(first) = members.first() {
            if let Some(bad) = members.iter().find(|m| m.signature() != first.signature()) {
                return Err(Error::SignatureMismatch(format!(
                    "sample mixes signatures {} and {}",
                    first.signature(),
                    bad.signature()
                )));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut kept = Vec::new();
        for m in members {
            if seen.insert(dedupe_key(&m)?) {
                kept.push(m);
            }
        }
        let certificates = vec![None; kept.len()];
        Ok(ClassSample {
            members: kept,
            flags,
            description: description.into(),
            certificates,
        })
    }

    pub fn members(&self) -> &[Structure] {
        &self.members
    }

    pub fn flags(&self) -> ClassFlags {
        self.flags
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn signature(&self) -> Option<&Signature> {
        self.members.first().map(Structure::signature)
    }

    pub fn certificates(&self) -> &[Option<SubdivisionCertificate>] {
        &self.certificates
    }

    /// Attaches one certificate per member; each is checked against its member.
    pub fn set_certificates(&mut self, certs: Vec<Option<SubdivisionCertificate>>) -> Result<()> {
        if certs.len() != self.members.len() {
            return Err(Error::Argument(format!(
                "{} certificates for {} members",
                certs.len(),
                self.members.len()
            )));
        }
        for (m, c) in self.members.iter().zip(&certs) {
            if let Some(c) = c {
                if !c.certifies(m)? {
                    return Err(Error::Construction("subdivision certificate does not match its member".into()));
                }
            }
        }
        self.certificates = certs;
        Ok(())
    }

    /// Sub-sample of members satisfying `keep`. Flags are cleared because
    /// a filtered sample need not inherit closure properties.
    pub fn filter(&self, description: impl Into<String>, mut keep: impl FnMut(&Structure) -> bool) -> ClassSample {
        let (members, certificates) = self
            .members
            .iter()
            .zip(&self.certificates)
            .filter(|(m, _)| keep(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .unzip();
        ClassSample {
            members,
            flags: ClassFlags::default(),
            description: description.into(),
            certificates,
        }
    }

    pub fn with_flags(mut self, flags: ClassFlags) -> Self {
        self.flags = flags;
        self
    }
}

/// A forbidden family together with a candidate dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityInstance {
    pub family: Vec<Structure>,
    pub dual: Structure,
}

impl DualityInstance {
    pub fn new(family: Vec<Structure>, dual: Structure) -> Result<Self> {
        if let Some(bad) = family.iter().find(|f| f.signature() != dual.signature()) {
            return Err(Error::SignatureMismatch(format!(
                "family member over {} but dual over {}",
                bad.signature(),
                dual.signature()
            )));
        }
        Ok(DualityInstance { family, dual })
    }
}

/// Which part of a checked statement failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Some family member maps to G, yet G maps to the dual.
    ForbiddenMapsToDual,
    /// No family member maps to G, yet G does not map to the dual.
    FreeAvoidsDual,
    /// A family member maps to the dual.
    FamilyMapsToDual,
    /// A family member is disconnected.
    DisconnectedMember,
    /// A family member is not a subgraph of any sample member.
    MemberOutsideSample,
    /// The source does not map to the proposed approximation.
    SourceAvoidsApprox,
    /// A small induced substructure of the approximation does not map back.
    SubstructureAvoidsSource,
    /// A sample graph of large odd-girth does not map to the constructed dual.
    OddGirthGraphAvoidsDual,
    /// The forbidden cycle maps to the constructed dual.
    CycleMapsToDual,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::ForbiddenMapsToDual => "forbidden-maps-to-dual",
            Direction::FreeAvoidsDual => "free-avoids-dual",
            Direction::FamilyMapsToDual => "family-maps-to-dual",
            Direction::DisconnectedMember => "disconnected-member",
            Direction::MemberOutsideSample => "member-outside-sample",
            Direction::SourceAvoidsApprox => "source-avoids-approx",
            Direction::SubstructureAvoidsSource => "substructure-avoids-source",
            Direction::OddGirthGraphAvoidsDual => "odd-girth-graph-avoids-dual",
            Direction::CycleMapsToDual => "cycle-maps-to-dual",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a check over a finite scope.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub holds: bool,
    pub scope: String,
    /// Number of structures the statement was checked on.
    pub checked: usize,
    pub direction: Option<Direction>,
    pub counterexample: Option<Structure>,
    /// A homomorphism backing the failure, when it is of the "maps" kind.
    pub witness: Option<Homomorphism>,
    /// Whether no family member maps to the dual, when a dual is involved.
    pub family_avoids_dual: Option<bool>,
    /// Two sample members whose disjoint union breaks a disconnected member.
    pub pair: Option<(Structure, Structure)>,
}

impl Verdict {
    pub fn holds(scope: impl Into<String>, checked: usize) -> Self {
        Verdict {
            holds: true,
            scope: scope.into(),
            checked,
            direction: None,
            counterexample: None,
            witness: None,
            family_avoids_dual: None,
            pair: None,
        }
    }

    pub fn fails(
        scope: impl Into<String>,
        direction: Direction,
        counterexample: Structure,
        witness: Option<Homomorphism>,
    ) -> Self {
        Verdict {
            holds: false,
            scope: scope.into(),
            checked: 0,
            direction: Some(direction),
            counterexample: Some(counterexample),
            witness,
            family_avoids_dual: None,
            pair: None,
        }
    }

    pub fn verdict_str(&self) -> &'static str {
        if self.holds {
            "holds"
        } else {
            "fails"
        }
    }
}

/// Decides `a -> b` a second time without arc consistency: by brute-force
/// counting when small enough, by plain backtracking otherwise. Errors out
/// loudly when it disagrees with `expected`.
fn recheck(a: &Structure, b: &Structure, expected: bool, cfg: &HomSearchConfig) -> Result<()> {
    let exists = if (b.order() as f64).powi(a.order() as i32) <= RECHECK_COUNT_LIMIT {
        hom_count(a, b)? > 0
    } else {
        let plain = HomSearchConfig {
            propagation: Propagation::None,
            enumerate_all: false,
            injective: false,
            ..cfg.clone()
        };
        hom_exists(a, b, &plain)?.is_some()
    };
    if exists != expected {
        return Err(Error::Construction(format!(
            "independent recheck disagrees on a {}-element source and {}-element target",
            a.order(),
            b.order()
        )));
    }
    Ok(())
}

/// Checks `(some F -> G) <=> (G -/-> D)` for every sample member `G`.
/// The first failing member in sample order is reported, re-validated
/// by an independent search.
pub fn verify_duality(inst: &DualityInstance, universe: &ClassSample, cfg: &HomSearchConfig) -> Result<Verdict> {
    if let Some(sig) = universe.signature() {
        if sig != inst.dual.signature() {
            return Err(Error::SignatureMismatch(format!(
                "sample over {} but dual over {}",
                sig,
                inst.dual.signature()
            )));
        }
    }
    let mut family_avoids_dual = true;
    for f in &inst.family {
        if hom_exists(f, &inst.dual, cfg)?.is_some() {
            family_avoids_dual = false;
        }
    }
    let outcomes: Vec<Result<Option<Verdict>>> = universe
        .members()
        .par_iter()
        .map(|g| {
            let mut forbidden = None;
            for f in &inst.family {
                if let Some(h) = hom_exists(f, g, cfg)? {
                    forbidden = Some(h);
                    break;
                }
            }
            let to_dual = hom_exists(g, &inst.dual, cfg)?;
            let scope = universe.description();
            Ok(match (forbidden, to_dual) {
                (Some(_), Some(w)) => Some(Verdict::fails(scope, Direction::ForbiddenMapsToDual, g.clone(), Some(w))),
                (None, None) => Some(Verdict::fails(scope, Direction::FreeAvoidsDual, g.clone(), None)),
                _ => None,
            })
        })
        .collect();
    let mut first = None;
    for o in outcomes {
        if let Some(v) = o? {
            first.get_or_insert(v);
        }
    }
    let mut verdict = match first {
        None => Verdict::holds(universe.description(), universe.len()),
        Some(v) => {
            let g = v.counterexample.as_ref().expect("failure carries a member");
            match v.direction {
                Some(Direction::ForbiddenMapsToDual) => {
                    let w = v.witness.as_ref().expect("witness");
                    if !w.is_valid(g, &inst.dual) {
                        return Err(Error::Construction("reported witness is not a homomorphism".into()));
                    }
                    let mapping = inst.family.iter().find(|f| matches!(hom_exists(*f, g, cfg), Ok(Some(_))));
                    let f = mapping.ok_or_else(|| Error::Construction("no family member maps on recheck".into()))?;
                    recheck(f, g, true, cfg)?;
                }
                _ => {
                    for f in &inst.family {
                        recheck(f, g, false, cfg)?;
                    }
                    recheck(g, &inst.dual, false, cfg)?;
                }
            }
            v
        }
    };
    verdict.family_avoids_dual = Some(family_avoids_dual);
    Ok(verdict)
}

/// The directed path on `k + 1` vertices against the transitive tournament on `k`.
pub fn ghrv_instance(k: usize) -> Result<DualityInstance> {
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    let path = Digraph::directed_path(k + 1).to_structure().into_owned();
    let tournament = Digraph::transitive_tournament(k).to_structure().into_owned();
    DualityInstance::new(vec![path], tournament)
}

fn sort_family(family: &mut Vec<Structure>) -> Result<()> {
    let mut keyed: BTreeMap<(usize, Vec<u8>), Structure> = BTreeMap::new();
    for f in family.drain(..) {
        keyed.entry((f.order(), dedupe_key(&f)?)).or_insert(f);
    }
    family.extend(keyed.into_values());
    Ok(())
}

/// Reduces a verified family to a fixed point of three rules, tried in
/// this order and re-verified after each change: replace a member by its
/// core, drop a member, replace a member by all graphs obtained from it by
/// identifying two elements.
pub fn minimize_family(inst: &DualityInstance, universe: &ClassSample, cfg: &HomSearchConfig) -> Result<DualityInstance> {
    let start = verify_duality(inst, universe, cfg)?;
    if !start.holds {
        return Err(Error::Precondition("minimization needs a duality that verifies over the sample".into()));
    }
    let holds = |family: &Vec<Structure>| -> Result<bool> {
        let candidate = DualityInstance::new(family.clone(), inst.dual.clone())?;
        Ok(verify_duality(&candidate, universe, cfg)?.holds)
    };
    let mut family = inst.family.clone();
    sort_family(&mut family)?;
    'fixpoint: loop {
        for i in 0..family.len() {
            let c = core(&family[i])?.core;
            if c.order() < family[i].order() {
                let mut next = family.clone();
                next[i] = c;
                sort_family(&mut next)?;
                if holds(&next)? {
                    family = next;
                    continue 'fixpoint;
                }
            }
        }
        for i in 0..family.len() {
            let mut next = family.clone();
            next.remove(i);
            if holds(&next)? {
                family = next;
                continue 'fixpoint;
            }
        }
        for i in 0..family.len() {
            let pre = pre_set_keeping_loops(&family[i])?;
            if pre.is_empty() {
                continue;
            }
            let mut next = family.clone();
            next.remove(i);
            next.extend(pre);
            sort_family(&mut next)?;
            if holds(&next)? {
                family = next;
                continue 'fixpoint;
            }
        }
        break;
    }
    debug_assert!(family.iter().all(|f| is_core(f, &HomSearchConfig::default()).unwrap_or(true)));
    DualityInstance::new(family, inst.dual.clone())
}

/// Checks the connectivity consequences of minimality: every member is
/// connected when the class is addable; when it is monotone, every member
/// also occurs as a subgraph of a sample member and avoids the dual.
pub fn connectivity_check(inst: &DualityInstance, universe: &ClassSample, cfg: &HomSearchConfig) -> Result<Verdict> {
    let flags = universe.flags();
    if !flags.addable && !flags.monotone {
        return Err(Error::Precondition("connectivity check needs an addable or monotone sample".into()));
    }
    let scope = universe.description();
    for f in &inst.family {
        if flags.addable && !is_connected(f) {
            let mut v = Verdict::fails(scope, Direction::DisconnectedMember, f.clone(), None);
            v.pair = union_breaking_pair(f, inst, universe, cfg)?;
            return Ok(v);
        }
        if flags.monotone {
            let mut inside = false;
            for g in universe.members() {
                if g.order() >= f.order() && is_subgraph_isomorphic(f, g, cfg)? {
                    inside = true;
                    break;
                }
            }
            if !inside {
                return Ok(Verdict::fails(scope, Direction::MemberOutsideSample, f.clone(), None));
            }
            if let Some(w) = hom_exists(f, &inst.dual, cfg)? {
                return Ok(Verdict::fails(scope, Direction::FamilyMapsToDual, f.clone(), Some(w)));
            }
        }
    }
    Ok(Verdict::holds(scope, inst.family.len()))
}

/// Two sample members that both map to the dual although the disconnected
/// member `f` maps to their disjoint union.
fn union_breaking_pair(
    f: &Structure,
    inst: &DualityInstance,
    universe: &ClassSample,
    cfg: &HomSearchConfig,
) -> Result<Option<(Structure, Structure)>> {
    let parts = components(f);
    let mut to_dual = Vec::new();
    for g in universe.members() {
        let hit = parts.iter().any(|p| matches!(hom_exists(p, g, cfg), Ok(Some(_))));
        if hit && hom_exists(g, &inst.dual, cfg)?.is_some() {
            to_dual.push(g);
        }
    }
    for (i, g1) in to_dual.iter().enumerate() {
        for g2 in &to_dual[i..] {
            let union = disjoint_union(*g1, *g2)?;
            if hom_exists(f, &union, cfg)?.is_some() {
                return Ok(Some(((*g1).clone(), (*g2).clone())));
            }
        }
    }
    Ok(None)
}

/// How [`dual_construct`] approximates sample members.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxStrategy {
    /// Exact minimum-order search, with candidates up to the given order.
    Oracle { max_order: usize },
    /// The coloring-and-retraction quotient.
    Quotient,
    /// Oracle when the member is small, quotient otherwise.
    Auto,
}

/// Largest member order for which [`ApproxStrategy::Auto`] uses the oracle.
pub const AUTO_ORACLE_ORDER: usize = 5;

#[derive(Clone, Debug)]
pub struct DualConstruction {
    pub dual: Structure,
    /// The approximations whose disjoint union is the dual.
    pub parts: Vec<ApproxResult>,
    /// Sample members no family member maps to.
    pub free_members: usize,
    pub verdict: Verdict,
}

fn approximate(a: &Structure, t: usize, strategy: ApproxStrategy, cfg: &HomSearchConfig) -> Result<ApproxResult> {
    let oracle = |max_order: usize| -> Result<Option<ApproxResult>> {
        Ok(match theta_oracle(a, t, max_order.min(a.order()), cfg)? {
            ThetaOutcome::Found(r) => Some(r),
            ThetaOutcome::NotFound { .. } => None,
        })
    };
    let found = match strategy {
        ApproxStrategy::Oracle { max_order } => oracle(max_order)?,
        ApproxStrategy::Quotient => Some(quotient_approximation(a, t, cfg)?.0),
        ApproxStrategy::Auto => {
            if a.order() <= AUTO_ORACLE_ORDER {
                oracle(AUTO_ORACLE_ORDER)?
            } else {
                match quotient_approximation(a, t, cfg) {
                    Ok((r, _)) => Some(r),
                    Err(e) if e.is_resource() => None,
                    Err(e) => return Err(e),
                }
            }
        }
    };
    match found {
        Some(r) => Ok(r),
        None => {
            // a core is always a t-approximation of its structure
            let c = core(a)?;
            Ok(ApproxResult {
                approx: c.core,
                forward: c.retraction,
                t,
                exact: false,
            })
        }
    }
}

/// Builds a dual of a connected family relative to the sample: the
/// disjoint union of `t`-approximations of every member that no family
/// member maps to, skipping approximations isomorphic or hom-equivalent
/// to one already taken. Both postconditions are checked.
pub fn dual_construct(
    family: &[Structure],
    universe: &ClassSample,
    t: usize,
    strategy: ApproxStrategy,
    cfg: &HomSearchConfig,
) -> Result<DualConstruction> {
    let first = family
        .first()
        .ok_or_else(|| Error::Precondition("dual construction needs a non-empty family".into()))?;
    let sig = first.signature().clone();
    for f in family {
        if !is_connected(f) {
            return Err(Error::Precondition("every family member must be connected".into()));
        }
        if f.order() > t {
            return Err(Error::Precondition(format!(
                "t = {t} is below the order {} of a family member",
                f.order()
            )));
        }
    }
    let free: Vec<Result<Option<ApproxResult>>> = universe
        .members()
        .par_iter()
        .map(|a| {
            for f in family {
                if hom_exists(f, a, cfg)?.is_some() {
                    return Ok(None);
                }
            }
            approximate(a, t, strategy, cfg).map(Some)
        })
        .collect();
    let mut parts: Vec<ApproxResult> = Vec::new();
    let mut codes = std::collections::BTreeSet::new();
    let mut free_members = 0;
    for r in free {
        let Some(r) = r? else { continue };
        free_members += 1;
        if !codes.insert(dedupe_key(&r.approx)?) {
            continue;
        }
        let mut redundant = false;
        for p in &parts {
            if hom_equivalent(&p.approx, &r.approx, cfg)? {
                redundant = true;
                break;
            }
        }
        if !redundant {
            parts.push(r);
        }
    }
    let dual = disjoint_union_all(&sig, parts.iter().map(|p| &p.approx))?;
    for f in family {
        if hom_exists(f, &dual, cfg)?.is_some() {
            return Err(Error::Construction(format!(
                "a family member of order {} maps to the constructed dual; t = {t} is too small for this sample",
                f.order()
            )));
        }
    }
    let inst = DualityInstance::new(family.to_vec(), dual.clone())?;
    let verdict = verify_duality(&inst, universe, cfg)?;
    if !verdict.holds {
        return Err(Error::Construction(format!(
            "constructed dual fails verification ({})",
            verdict.direction.map_or("unknown", Direction::as_str)
        )));
    }
    Ok(DualConstruction {
        dual,
        parts,
        free_members,
        verdict,
    })
}

/// Categorical product of the given duals, left to right.
pub fn product_dual(duals: &[Structure]) -> Result<Structure> {
    let (first, rest) = duals
        .split_first()
        .ok_or_else(|| Error::Argument("product of no duals".into()))?;
    let order: usize = duals.iter().try_fold(1usize, |acc, d| acc.checked_mul(d.order())).unwrap_or(usize::MAX);
    if order > PRODUCT_CAP {
        return Err(Error::capacity("product order", order, PRODUCT_CAP));
    }
    let mut acc = first.clone();
    for d in rest {
        acc = categorical_product(&acc, d)?;
    }
    Ok(acc)
}

/// One template of the product bound and its dual relative to the sample.
#[derive(Clone, Debug)]
pub struct TemplateDual {
    pub template: Structure,
    pub dual: Structure,
}

/// The product-of-duals bound on `t`-approximation orders over a sample,
/// with per-member checks of the bound's construction.
#[derive(Clone, Debug)]
pub struct ThetaBound {
    pub t: usize,
    /// Duals of the connected cores of order at most `t` that miss some member.
    pub templates: Vec<TemplateDual>,
    /// Product of the orders of all template duals.
    pub bound: usize,
    /// Largest exact approximation order over the sample.
    pub sup_theta: usize,
    /// Largest order of a member's product of duals.
    pub max_product_order: usize,
    /// Members whose product of duals is not a valid `t`-approximation.
    pub failures: Vec<Structure>,
}

impl ThetaBound {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.sup_theta <= self.bound
    }
}

fn connected_cores(sig: &Signature, like: &Structure, max_order: usize, tuple_cap: usize) -> Result<Vec<Structure>> {
    let mut out = Vec::new();
    for m in 1..=max_order {
        let candidates: Vec<Structure> = if like.as_graph().is_some() {
            graphs_of_order(m)?.iter().map(|g| g.to_structure().into_owned()).collect()
        } else if like.as_digraph().is_some() {
            digraphs_of_order(m)?.iter().map(|g| g.to_structure().into_owned()).collect()
        } else {
            structures_of_order(sig, m, tuple_cap)?
        };
        for c in candidates {
            if is_connected(&c) && is_core(&c, &HomSearchConfig::default())? {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Computes the product-of-duals bound `C(t)` for a sample and checks,
/// member by member, that the product of the duals of the templates
/// missing the member receives it and is a `t`-approximation of it, and
/// that the exact approximation order never exceeds `C(t)`.
pub fn theta_product_bound(universe: &ClassSample, t: usize, tuple_cap: usize, cfg: &HomSearchConfig) -> Result<ThetaBound> {
    let Some(like) = universe.members().first() else {
        return Err(Error::Argument("empty sample".into()));
    };
    let sig = like.signature().clone();
    let mut templates = Vec::new();
    for template in connected_cores(&sig, like, t, tuple_cap)? {
        let mut misses = false;
        for a in universe.members() {
            if hom_exists(&template, a, cfg)?.is_none() {
                misses = true;
                break;
            }
        }
        if misses {
            let built = dual_construct(
                std::slice::from_ref(&template),
                universe,
                template.order() + 1,
                ApproxStrategy::Auto,
                cfg,
            )?;
            templates.push(TemplateDual {
                template,
                dual: built.dual,
            });
        }
    }
    let bound = templates
        .iter()
        .try_fold(1usize, |acc, d| acc.checked_mul(d.dual.order()))
        .unwrap_or(usize::MAX);
    let mut sup_theta = 0;
    let mut max_product_order = 0;
    let mut failures = Vec::new();
    for a in universe.members() {
        let mut missing = Vec::new();
        for td in &templates {
            if hom_exists(&td.template, a, cfg)?.is_none() {
                missing.push(td.dual.clone());
            }
        }
        if !missing.is_empty() {
            let product = product_dual(&missing)?;
            max_product_order = max_product_order.max(product.order());
            if !is_t_approximation(a, &product, t, cfg)?.holds {
                failures.push(a.clone());
            }
        }
        match theta_oracle(a, t, a.order(), cfg)? {
            ThetaOutcome::Found(r) => sup_theta = sup_theta.max(r.approx.order()),
            ThetaOutcome::NotFound { .. } => {
                return Err(Error::Construction("a structure is always its own approximation".into()))
            }
        }
    }
    Ok(ThetaBound {
        t,
        templates,
        bound,
        sup_theta,
        max_product_order,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{enumerate, GeneratorSpec};
    use crate::graph::Graph;

    fn s(g: &Graph) -> Structure {
        g.to_structure().into_owned()
    }

    fn graphs(max: usize) -> ClassSample {
        enumerate(&GeneratorSpec::all_graphs(max)).unwrap()
    }

    #[test]
    fn edge_against_point() {
        let inst = DualityInstance::new(vec![s(&Graph::complete(2))], s(&Graph::complete(1))).unwrap();
        let v = verify_duality(&inst, &graphs(5), &HomSearchConfig::default()).unwrap();
        assert!(v.holds);
        assert_eq!(v.family_avoids_dual, Some(true));
        assert_eq!(v.scope, "graphs<=5");
    }

    #[test]
    fn triangle_against_edge_fails_on_pentagon() {
        let inst = DualityInstance::new(vec![s(&Graph::cycle(3))], s(&Graph::complete(2))).unwrap();
        let v = verify_duality(&inst, &graphs(5), &HomSearchConfig::default()).unwrap();
        assert!(!v.holds);
        assert_eq!(v.direction, Some(Direction::FreeAvoidsDual));
        let cex = v.counterexample.unwrap();
        assert_eq!(canonical_code(&cex).unwrap(), canonical_code(&Graph::cycle(5)).unwrap());
    }

    #[test]
    fn ghrv_small() {
        let one = ghrv_instance(1).unwrap();
        assert_eq!(one.dual.order(), 1);
        assert_eq!(one.family[0].order(), 2);
        let sample = enumerate(&GeneratorSpec::all_digraphs(4)).unwrap();
        for k in 1..=3 {
            let v = verify_duality(&ghrv_instance(k).unwrap(), &sample, &HomSearchConfig::default()).unwrap();
            assert!(v.holds, "k = {k}");
            assert_eq!(v.scope, "digraphs<=4");
        }
        assert!(ghrv_instance(0).is_err());
    }

    #[test]
    fn minimize_drops_implied_member() {
        let inst = DualityInstance::new(vec![s(&Graph::complete(2)), s(&Graph::path(3))], s(&Graph::complete(1))).unwrap();
        let min = minimize_family(&inst, &graphs(4), &HomSearchConfig::default()).unwrap();
        assert_eq!(min.family.len(), 1);
        assert_eq!(canonical_code(&min.family[0]).unwrap(), canonical_code(&Graph::complete(2)).unwrap());
    }

    #[test]
    fn minimize_replaces_by_core_on_bipartite_sample() {
        let all = graphs(5);
        let bip = all.filter("bipartite graphs<=5", |m| m.as_graph().unwrap().is_bipartite());
        let inst = DualityInstance::new(vec![s(&Graph::cycle(6))], s(&Graph::complete(1))).unwrap();
        let min = minimize_family(&inst, &bip, &HomSearchConfig::default()).unwrap();
        assert_eq!(min.family.len(), 1);
        assert_eq!(canonical_code(&min.family[0]).unwrap(), canonical_code(&Graph::complete(2)).unwrap());
    }

    #[test]
    fn minimize_keeps_ghrv() {
        let sample = enumerate(&GeneratorSpec::all_digraphs(4)).unwrap();
        let inst = ghrv_instance(2).unwrap();
        let min = minimize_family(&inst, &sample, &HomSearchConfig::default()).unwrap();
        assert_eq!(min, inst);
        assert!(connectivity_check(&min, &sample, &HomSearchConfig::default()).unwrap().holds);
    }

    #[test]
    fn disconnected_member_is_reported_with_pair() {
        let two_edges = disjoint_union(&Graph::complete(2), &Graph::complete(2)).unwrap();
        let inst = DualityInstance::new(vec![two_edges], s(&Graph::complete(1))).unwrap();
        let v = connectivity_check(&inst, &graphs(3), &HomSearchConfig::default()).unwrap();
        assert_eq!(v.direction, Some(Direction::DisconnectedMember));
        // not minimal, so no pair of edgeless graphs receives it
        assert!(v.pair.is_none());
        let two_triangles = disjoint_union(&Graph::complete(3), &Graph::complete(3)).unwrap();
        let inst2 = DualityInstance::new(vec![two_triangles], s(&Graph::complete(3))).unwrap();
        let v = connectivity_check(&inst2, &graphs(3), &HomSearchConfig::default()).unwrap();
        let (g1, g2) = v.pair.unwrap();
        assert!(g1.tuple_count() > 0 && g2.tuple_count() > 0);
        let plain = graphs(3).with_flags(ClassFlags::default());
        assert!(connectivity_check(&inst, &plain, &HomSearchConfig::default()).is_err());
    }

    #[test]
    fn dual_of_edge_is_edgeless() {
        let built = dual_construct(&[s(&Graph::complete(2))], &graphs(4), 2, ApproxStrategy::Auto, &HomSearchConfig::default()).unwrap();
        assert!(hom_equivalent(&built.dual, &Graph::complete(1), &HomSearchConfig::default()).unwrap());
    }

    #[test]
    fn dual_of_triangle_over_small_graphs() {
        let cfg = HomSearchConfig::default();
        let built = dual_construct(&[s(&Graph::cycle(3))], &graphs(4), 4, ApproxStrategy::Auto, &cfg).unwrap();
        assert!(hom_exists(&Graph::cycle(3), &built.dual, &cfg).unwrap().is_none());
        assert!(built.verdict.holds);
    }

    #[test]
    fn dual_is_empty_when_family_maps_everywhere() {
        let sig = Signature::binary();
        let point = Structure::empty(sig, 1);
        let built = dual_construct(&[point], &graphs(3), 1, ApproxStrategy::Auto, &HomSearchConfig::default()).unwrap();
        assert_eq!(built.dual.order(), 0);
        assert!(built.verdict.holds);
    }

    #[test]
    fn t_equal_to_family_order_can_break_soundness() {
        let sample = ClassSample::new(vec![s(&Graph::cycle(5))], ClassFlags::default(), "pentagon").unwrap();
        let err = dual_construct(&[s(&Graph::cycle(3))], &sample, 3, ApproxStrategy::Auto, &HomSearchConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
        let ok = dual_construct(&[s(&Graph::cycle(3))], &sample, 4, ApproxStrategy::Auto, &HomSearchConfig::default()).unwrap();
        assert!(ok.verdict.holds);
    }

    #[test]
    fn product_of_edge_and_triangle() {
        let p = product_dual(&[s(&Graph::complete(2)), s(&Graph::complete(3))]).unwrap();
        assert_eq!(p.order(), 6);
        let cfg = HomSearchConfig::default();
        for g in graphs(4).members() {
            let bip = g.as_graph().unwrap().is_bipartite();
            assert_eq!(hom_exists(g, &p, &cfg).unwrap().is_some(), bip);
        }
        let single = product_dual(&[s(&Graph::cycle(5))]).unwrap();
        assert_eq!(single, s(&Graph::cycle(5)));
        let flat = product_dual(&[s(&Graph::edgeless(2)), s(&Graph::complete(3))]).unwrap();
        assert_eq!(flat.tuple_count(), 0);
        assert!(product_dual(&[]).is_err());
    }
}
