//! `Δ*(B±(G))` by a sweep over subsets of `G ∖ {0}`, the checks built on it,
//! and invariant reports for comparing groups.
//!
//! Two reductions keep the sweep small. Replacing `−g` by `g` in a sequence
//! leaves σ± unchanged and lifts every factorization of the image, so it is a
//! transfer homomorphism `B±(G₀) → B±(G₀')` where `G₀'` keeps one element of
//! each pair `{g, −g}`. Lengths, atoms lengths and `min Δ` are preserved, and
//! the sweep only visits subsets of a fixed set of class representatives.
//! Automorphisms of `G` permute those classes and give isomorphic monoids, so
//! one representative per orbit of class masks is enough.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::atoms::{enumerate_atoms_cached, AtomCache};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::limits::Limits;
use crate::relations::{format_int_set, min_delta_of, rho_k_of};
use crate::sequence::format_subset;

/// Largest number of sign classes a complete sweep will visit (one bit each).
pub const MAX_SWEEP_CLASSES: usize = 24;

/// The pairs `{g, −g}` of nonzero elements and the permutations of them
/// induced by automorphisms.
#[derive(Debug, Clone)]
pub struct SignClasses {
    group: Group,
    /// representative (least index) of each class, ascending
    reps: Vec<usize>,
    class_of: Vec<Option<usize>>,
    perms: Vec<Vec<usize>>,
    automorphisms_used: bool,
}

impl SignClasses {
    /// Uses automorphisms when they can be enumerated within `limits`, and
    /// sign classes alone otherwise.
    pub fn new(group: &Group, limits: &Limits) -> Self {
        let n = group.order();
        let mut reps = Vec::new();
        let mut class_of = vec![None; n];
        for x in 1..n {
            if class_of[x].is_none() {
                let c = reps.len();
                reps.push(x);
                class_of[x] = Some(c);
                class_of[group.neg_idx(x)] = Some(c);
            }
        }
        let identity: Vec<usize> = (0..reps.len()).collect();
        let (perms, automorphisms_used) = match group.automorphisms(limits) {
            Ok(auts) => {
                let mut seen = HashSet::new();
                let mut perms = Vec::new();
                for a in auts {
                    let p: Vec<usize> = reps
                        .iter()
                        .map(|&r| class_of[a.apply_idx(r)].expect("nonzero"))
                        .collect();
                    if seen.insert(p.clone()) {
                        perms.push(p);
                    }
                }
                (perms, true)
            }
            Err(_) => (vec![identity], false),
        };
        SignClasses {
            group: group.clone(),
            reps,
            class_of,
            perms,
            automorphisms_used,
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn automorphisms_used(&self) -> bool {
        self.automorphisms_used
    }

    /// Distinct class permutations in use (1 when only signs are reduced).
    pub fn symmetry_count(&self) -> usize {
        self.perms.len()
    }

    /// One element from each class.
    pub fn representatives(&self) -> Vec<GroupElement> {
        self.reps.iter().map(|&r| self.group.element_at(r)).collect()
    }

    /// Bit mask of the classes met by `subset`; 0 is ignored.
    pub fn mask_of(&self, subset: &[GroupElement]) -> Result<u64> {
        if self.len() > 63 {
            return Err(Error::resource("sign classes in one mask", 63));
        }
        let mut mask = 0u64;
        for g in subset {
            if !self.group.contains(g) {
                return Err(Error::NotAnElement {
                    element: g.to_string(),
                    group: self.group.to_string(),
                });
            }
            if let Some(c) = self.class_of[self.group.index_of(g)] {
                mask |= 1 << c;
            }
        }
        Ok(mask)
    }

    fn apply(&self, perm: &[usize], mask: u64) -> u64 {
        let mut out = 0;
        let mut m = mask;
        while m != 0 {
            let c = m.trailing_zeros() as usize;
            out |= 1 << perm[c];
            m &= m - 1;
        }
        out
    }

    /// Least mask in the orbit of `mask`.
    pub fn canonical_mask(&self, mask: u64) -> u64 {
        self.perms
            .iter()
            .map(|p| self.apply(p, mask))
            .min()
            .unwrap_or(mask)
    }

    pub fn subset_of_mask(&self, mask: u64) -> Vec<GroupElement> {
        (0..self.len())
            .filter(|&c| mask >> c & 1 == 1)
            .map(|c| self.group.element_at(self.reps[c]))
            .collect()
    }

    /// Canonical representative of the orbit of `subset`.
    pub fn canonical_subset(&self, subset: &[GroupElement]) -> Result<Vec<GroupElement>> {
        Ok(self.subset_of_mask(self.canonical_mask(self.mask_of(subset)?)))
    }

    /// One canonical mask per orbit of nonempty masks, ascending.
    pub fn orbit_masks(&self) -> Result<Vec<u64>> {
        let k = self.len();
        if k > MAX_SWEEP_CLASSES {
            return Err(Error::resource(
                format!("complete subset sweep over {k} sign classes"),
                MAX_SWEEP_CLASSES as u64,
            ));
        }
        let total = 1usize << k;
        let mut visited = vec![false; total];
        let mut out = Vec::new();
        for mask in 1..total {
            if visited[mask] {
                continue;
            }
            out.push(mask as u64);
            for p in &self.perms {
                visited[self.apply(p, mask as u64) as usize] = true;
            }
        }
        Ok(out)
    }
}

/// Canonical representatives of the orbits of nonempty subsets of
/// `G ∖ {0}` under automorphisms and sign changes.
pub fn subset_orbits(group: &Group, limits: &Limits) -> Result<Vec<Vec<GroupElement>>> {
    let classes = SignClasses::new(group, limits);
    Ok(classes
        .orbit_masks()?
        .into_iter()
        .map(|m| classes.subset_of_mask(m))
        .collect())
}

/// For odd elementary p-groups: `true` when the lines through the elements
/// of `subset` are not independent, in which case `min Δ = 1`.
fn forces_min_delta_one(group: &Group, subset: &[GroupElement]) -> bool {
    let Some(p) = group.elementary_prime() else {
        return false;
    };
    if p == 2 {
        return false;
    }
    let mut lines: Vec<GroupElement> = Vec::new();
    for g in subset {
        let lead = *g.coords().iter().find(|&&c| c != 0).expect("nonzero");
        // scale so the leading coordinate is 1
        let inv = (1..p).find(|&t| t * lead % p == 1).expect("p prime");
        let line = group.scale(inv as i64, g).expect("element of the group");
        if !lines.contains(&line) {
            lines.push(line);
        }
    }
    !group.is_independent(&lines).expect("elements of the group")
}

/// Min Δ of one subset, with the sweep's pruning rules.
pub fn subset_min_delta(
    group: &Group,
    subset: &[GroupElement],
    limits: &Limits,
    cache: Option<&AtomCache>,
) -> Result<Option<u64>> {
    if limits.prune && forces_min_delta_one(group, subset) {
        return Ok(Some(1));
    }
    let atoms = enumerate_atoms_cached(group, subset, limits, cache)?;
    Ok(min_delta_of(&atoms))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub subset: Vec<GroupElement>,
    pub min_delta: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedEntry {
    pub subset: Vec<GroupElement>,
    pub reason: String,
}

/// Result of a Δ* sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaStarReport {
    pub group: Group,
    /// Every orbit was visited and none was skipped.
    pub complete: bool,
    /// Sorted by subset size, then by element indices.
    pub table: Vec<TableEntry>,
    pub skipped: Vec<SkippedEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRecord {
    pub subset: String,
    pub min_delta: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedRecord {
    pub subset: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaStarRecord {
    pub group: String,
    pub complete: bool,
    pub delta_star: Vec<u64>,
    pub max: Option<u64>,
    pub witnesses: BTreeMap<u64, String>,
    pub table: Vec<TableRecord>,
    pub skipped: Vec<SkippedRecord>,
}

impl DeltaStarReport {
    pub fn delta_star(&self) -> BTreeSet<u64> {
        self.table.iter().filter_map(|e| e.min_delta).collect()
    }

    pub fn max(&self) -> Option<u64> {
        self.delta_star().last().copied()
    }

    /// First subset in table order achieving each value.
    pub fn witnesses(&self) -> BTreeMap<u64, Vec<GroupElement>> {
        let mut out = BTreeMap::new();
        for e in &self.table {
            if let Some(d) = e.min_delta {
                out.entry(d).or_insert_with(|| e.subset.clone());
            }
        }
        out
    }

    pub fn to_record(&self) -> DeltaStarRecord {
        DeltaStarRecord {
            group: self.group.to_string(),
            complete: self.complete,
            delta_star: self.delta_star().into_iter().collect(),
            max: self.max(),
            witnesses: self
                .witnesses()
                .into_iter()
                .map(|(d, s)| (d, format_subset(&s)))
                .collect(),
            table: self
                .table
                .iter()
                .map(|e| TableRecord {
                    subset: format_subset(&e.subset),
                    min_delta: e.min_delta,
                })
                .collect(),
            skipped: self
                .skipped
                .iter()
                .map(|s| SkippedRecord {
                    subset: format_subset(&s.subset),
                    reason: s.reason.clone(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for DeltaStarReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "group {} ({})",
            self.group,
            if self.complete { "complete" } else { "partial" }
        )?;
        for e in &self.table {
            let v = e.min_delta.map_or("-".to_string(), |d| d.to_string());
            writeln!(f, "  {:<40} {v}", format_subset(&e.subset))?;
        }
        for s in &self.skipped {
            writeln!(f, "  {:<40} skipped: {}", format_subset(&s.subset), s.reason)?;
        }
        write!(f, "Δ* = {}", format_int_set(&self.delta_star()))?;
        if let Some(m) = self.max() {
            write!(f, ", max {m}")?;
        }
        Ok(())
    }
}

/// Sweep configuration.
#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    pub limits: Limits,
    pub cache: Option<AtomCache>,
    /// Extra subsets to include; only these and the small default targets
    /// are visited when the group is too large for a complete sweep.
    pub targets: Vec<Vec<GroupElement>>,
}

fn subset_key(group: &Group, s: &[GroupElement]) -> (usize, Vec<usize>) {
    (s.len(), s.iter().map(|g| group.index_of(g)).collect())
}

/// `Δ*(B±(G))`. Groups within `sweep_max_order` get a complete sweep over
/// all orbits; larger ones a partial report over singletons, pairs and the
/// requested targets. Work is spread over the current rayon pool.
pub fn delta_star(group: &Group, opts: &SweepOptions) -> Result<DeltaStarReport> {
    let limits = &opts.limits;
    let classes = SignClasses::new(group, limits);
    let full = group.order() <= limits.sweep_max_order && classes.len() <= MAX_SWEEP_CLASSES;
    let mut masks: Vec<u64> = if full {
        classes.orbit_masks()?
    } else {
        let k = classes.len().min(63);
        let mut m: BTreeSet<u64> = BTreeSet::new();
        for i in 0..k {
            m.insert(classes.canonical_mask(1 << i));
            for j in i + 1..k {
                m.insert(classes.canonical_mask(1 << i | 1 << j));
            }
        }
        m.into_iter().collect()
    };
    for t in &opts.targets {
        let m = classes.canonical_mask(classes.mask_of(t)?);
        if m != 0 && !masks.contains(&m) {
            masks.push(m);
        }
    }
    let results: Vec<(Vec<GroupElement>, Result<Option<u64>>)> = masks
        .par_iter()
        .map(|&m| {
            let subset = classes.subset_of_mask(m);
            let r = subset_min_delta(group, &subset, limits, opts.cache.as_ref());
            (subset, r)
        })
        .collect();
    let mut table = Vec::new();
    let mut skipped = Vec::new();
    for (subset, r) in results {
        match r {
            Ok(min_delta) => table.push(TableEntry { subset, min_delta }),
            Err(e @ Error::Resource { .. }) => skipped.push(SkippedEntry {
                subset,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    table.sort_by_cached_key(|e| subset_key(group, &e.subset));
    skipped.sort_by_cached_key(|e| subset_key(group, &e.subset));
    Ok(DeltaStarReport {
        group: group.clone(),
        complete: full && skipped.is_empty(),
        table,
        skipped,
    })
}

/// Runs `f` on a dedicated pool of `jobs` worker threads, which all the
/// parallel sweeps inside `f` share.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// `D(B±(G))`, computed over one element per sign class.
pub fn monoid_davenport_full(group: &Group, limits: &Limits, cache: Option<&AtomCache>) -> Result<u64> {
    let reps = SignClasses::new(group, limits).representatives();
    Ok(enumerate_atoms_cached(group, &reps, limits, cache)?
        .length_profile()
        .max_len
        .max(if group.is_trivial() { 0 } else { 1 }))
}

/// `ρ_k(B±(G))`, computed over one element per sign class.
pub fn rho_k_full(group: &Group, k: u32, limits: &Limits, cache: Option<&AtomCache>) -> Result<u64> {
    let reps = SignClasses::new(group, limits).representatives();
    rho_k_of(&enumerate_atoms_cached(group, &reps, limits, cache)?, k, limits)
}

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
    /// The data needed to decide (a complete sweep, an exact Davenport
    /// constant) is not available within the limits.
    Inconclusive,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::NotApplicable => "n/a",
            CheckStatus::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub group: String,
    pub status: CheckStatus,
    pub details: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckReport {
    pub fn new(id: &str, group: &Group, status: CheckStatus, details: impl Into<String>) -> Self {
        CheckReport {
            id: id.to_string(),
            group: group.to_string(),
            status,
            details: details.into(),
            counterexample: None,
        }
    }

    pub fn pass(id: &str, group: &Group, details: impl Into<String>) -> Self {
        Self::new(id, group, CheckStatus::Pass, details)
    }

    pub fn fail(id: &str, group: &Group, details: impl Into<String>, counterexample: impl Into<String>) -> Self {
        CheckReport {
            counterexample: Some(counterexample.into()),
            ..Self::new(id, group, CheckStatus::Fail, details)
        }
    }

    pub fn not_applicable(id: &str, group: &Group, details: impl Into<String>) -> Self {
        Self::new(id, group, CheckStatus::NotApplicable, details)
    }

    pub fn inconclusive(id: &str, group: &Group, details: impl Into<String>) -> Self {
        Self::new(id, group, CheckStatus::Inconclusive, details)
    }

    /// Pass or fail with a counterexample, from a boolean.
    pub fn verdict(id: &str, group: &Group, ok: bool, details: String, counterexample: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(id, group, details)
        } else {
            Self::fail(id, group, details, counterexample())
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} {}: {}", self.status, self.id, self.group, self.details)?;
        if let Some(c) = &self.counterexample {
            write!(f, " (counterexample: {c})")?;
        }
        Ok(())
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Witness subset for a value, for counterexample strings.
fn witness_for(report: &DeltaStarReport, d: u64) -> String {
    report
        .witnesses()
        .get(&d)
        .map(|s| format!("{d} via {}", format_subset(s)))
        .unwrap_or_else(|| d.to_string())
}

/// Structural invariants of a report: `1 ∈ Δ*` exactly when `|G| ≥ 3`, and
/// `max Δ* ≤ D(B±(G)) − 2`.
pub fn check_report_invariants(report: &DeltaStarReport, monoid_d: Option<u64>) -> CheckReport {
    const ID: &str = "report-invariants";
    let g = &report.group;
    let ds = report.delta_star();
    if let (Some(max), Some(d)) = (report.max(), monoid_d) {
        if max + 2 > d {
            return CheckReport::fail(ID, g, format!("max Δ* = {max} exceeds D(H) − 2 = {}", d as i64 - 2), witness_for(report, max));
        }
    }
    if g.order() <= 2 {
        if let Some(&d) = ds.iter().next() {
            return CheckReport::fail(ID, g, "Δ* must be empty for |G| ≤ 2", witness_for(report, d));
        }
        return if report.complete {
            CheckReport::pass(ID, g, "Δ* = ∅ and Δ(H) = ∅")
        } else {
            CheckReport::inconclusive(ID, g, "sweep incomplete")
        };
    }
    if !report.complete {
        return CheckReport::inconclusive(ID, g, "sweep incomplete");
    }
    if monoid_d.is_none() {
        return CheckReport::inconclusive(ID, g, "D(B±(G)) not available");
    }
    CheckReport::verdict(
        ID,
        g,
        ds.contains(&1),
        format!("Δ* = {}, D(H) = {}", format_int_set(&ds), monoid_d.unwrap()),
        || "1 ∉ Δ*".to_string(),
    )
}

/// For odd `|G|` with `n = exp(G) ≥ 3`: `D₁ ⊆ Δ* ⊆ D₂` and `max Δ* = n − 2`,
/// where `D₁ = {d − 2 : d | n, d ≥ 3}` and `D₂` is the set of divisors of
/// elements of `D₁`.
pub fn verify_delta_ast_odd(report: &DeltaStarReport) -> CheckReport {
    const ID: &str = "delta-star-odd";
    let g = &report.group;
    let n = g.exponent();
    if g.order() % 2 == 0 || n < 3 {
        return CheckReport::not_applicable(ID, g, "needs |G| odd and exp(G) ≥ 3");
    }
    let d1: BTreeSet<u64> = divisors(n).into_iter().filter(|&d| d >= 3).map(|d| d - 2).collect();
    let d2: BTreeSet<u64> = d1.iter().flat_map(|&x| divisors(x)).collect();
    let ds = report.delta_star();
    let details = format!(
        "D₁ = {}, D₂ = {}, Δ* = {}",
        format_int_set(&d1),
        format_int_set(&d2),
        format_int_set(&ds)
    );
    if let Some(&bad) = ds.iter().find(|d| !d2.contains(d)) {
        return CheckReport::fail(ID, g, details, witness_for(report, bad));
    }
    if let Some(&missing) = d1.iter().find(|d| !ds.contains(d)) {
        return if report.complete {
            CheckReport::fail(ID, g, details, format!("{missing} ∈ D₁ missing"))
        } else {
            CheckReport::inconclusive(ID, g, details)
        };
    }
    if report.max() != Some(n - 2) {
        return CheckReport::fail(ID, g, details, format!("max Δ* = {:?}, expected {}", report.max(), n - 2));
    }
    if report.complete {
        CheckReport::pass(ID, g, details)
    } else {
        CheckReport::inconclusive(ID, g, details)
    }
}

/// For `|G| ≥ 5`: `Δ*` contains an even element iff `|G|` is even.
pub fn verify_parity(report: &DeltaStarReport) -> CheckReport {
    const ID: &str = "parity";
    let g = &report.group;
    if g.order() < 5 {
        return CheckReport::not_applicable(ID, g, "needs |G| ≥ 5");
    }
    let ds = report.delta_star();
    let even = ds.iter().copied().find(|d| d % 2 == 0);
    let details = format!("|G| = {}, Δ* = {}", g.order(), format_int_set(&ds));
    match (g.order() % 2 == 0, even) {
        (true, Some(_)) => CheckReport::pass(ID, g, details),
        (false, Some(d)) => CheckReport::fail(ID, g, details, witness_for(report, d)),
        (false, None) if report.complete => CheckReport::pass(ID, g, details),
        (true, None) if report.complete => {
            CheckReport::fail(ID, g, details, "no even element in a complete sweep")
        }
        _ => CheckReport::inconclusive(ID, g, details),
    }
}

/// `{gcd(d₁, …, d_r) : dᵢ ∈ D}`.
pub fn gcd_closure(d: &BTreeSet<u64>, r: usize) -> BTreeSet<u64> {
    let mut out: BTreeSet<u64> = d.clone();
    for _ in 1..r {
        let next: BTreeSet<u64> = out
            .iter()
            .flat_map(|&a| d.iter().map(move |&b| a.gcd(&b)))
            .collect();
        out = next;
    }
    out
}

/// For `G = C_p^r` with `p` odd: `Δ*(G)` is the set of gcds of `r`-tuples
/// from `Δ*(C_p)`.
pub fn verify_elementary_p(report: &DeltaStarReport, cyclic: &DeltaStarReport) -> CheckReport {
    const ID: &str = "elementary-p";
    let g = &report.group;
    let Some(p) = g.elementary_prime().filter(|&p| p != 2) else {
        return CheckReport::not_applicable(ID, g, "needs an elementary p-group with p odd");
    };
    if cyclic.group.order() as u64 != p || !cyclic.group.is_cyclic() {
        return CheckReport::not_applicable(ID, g, format!("reference report is not C{p}"));
    }
    if !report.complete || !cyclic.complete {
        return CheckReport::inconclusive(ID, g, "sweep incomplete");
    }
    let want = gcd_closure(&cyclic.delta_star(), g.rank());
    let got = report.delta_star();
    let details = format!("Δ*(C{p}) = {}, closure = {}, Δ* = {}", format_int_set(&cyclic.delta_star()), format_int_set(&want), format_int_set(&got));
    CheckReport::verdict(ID, g, got == want, details, || {
        let extra: BTreeSet<u64> = got.symmetric_difference(&want).copied().collect();
        format!("differing values {}", format_int_set(&extra))
    })
}

/// Which groups are asserted to have `max Δ* = 1`, resp. `= 2`.
pub fn small_max_prediction(group: &Group) -> (bool, bool) {
    let f = group.factors();
    let one = group.exponent() == 3 || f == [2, 2] || f == [4];
    let two = f == [2, 2, 2] || f == [2, 4];
    (one, two)
}

/// `max Δ* = 1` exactly for exponent 3, `C₂²`, `C₄`; `max Δ* = 2` exactly
/// for `C₂³`, `C₂ ⊕ C₄`.
pub fn check_small_max(report: &DeltaStarReport) -> CheckReport {
    const ID: &str = "small-max";
    let g = &report.group;
    if g.order() <= 2 {
        return CheckReport::not_applicable(ID, g, "Δ* is empty");
    }
    if !report.complete {
        return CheckReport::inconclusive(ID, g, "sweep incomplete");
    }
    let max = report.max();
    let (one, two) = small_max_prediction(g);
    let details = format!(
        "max Δ* = {}, predicted max = 1: {one}, predicted max = 2: {two}",
        max.map_or("none".into(), |m| m.to_string())
    );
    let ok = (max == Some(1)) == one && (max == Some(2)) == two;
    CheckReport::verdict(ID, g, ok, details, || witness_for(report, max.unwrap_or(0)))
}

/// `{ord(g) − 2 : ord(g) ≥ 3 odd} ⊆ Δ*`.
pub fn check_lem_delta(report: &DeltaStarReport) -> CheckReport {
    const ID: &str = "odd-orders";
    let g = &report.group;
    let want: BTreeSet<u64> = (1..g.order())
        .map(|x| g.order_idx(x))
        .filter(|&o| o >= 3 && o % 2 == 1)
        .map(|o| o - 2)
        .collect();
    if want.is_empty() {
        return CheckReport::not_applicable(ID, g, "no element of odd order ≥ 3");
    }
    let ds = report.delta_star();
    let details = format!("required {}, Δ* = {}", format_int_set(&want), format_int_set(&ds));
    match want.iter().find(|d| !ds.contains(d)) {
        None => CheckReport::pass(ID, g, details),
        Some(_) if !report.complete => CheckReport::inconclusive(ID, g, details),
        Some(&d) => CheckReport::fail(ID, g, details, format!("{d} missing")),
    }
}

/// `D*(B±(G)) = m₁ + ⋯ + m_r + 1` when every invariant factor is even,
/// `2mᵢ` being the factors.
pub fn monoid_d_star_even(group: &Group) -> Option<u64> {
    let f = group.factors();
    if f.is_empty() || f.iter().any(|n| n % 2 == 1) {
        return None;
    }
    Some(f.iter().map(|n| n / 2).sum::<u64>() + 1)
}

/// The shape-dependent statements about `Δ*(B±(G))`: for cyclic `G` of order
/// ≥ 3 `max Δ* = D(H) − 2`; for elementary 2-groups of order ≥ 4
/// `Δ* = [1, D(H) − 2]`; for exponent dividing 4 and order ≥ 4
/// `[1, D*(H) − 2] ⊆ Δ* ⊆ [1, D(H) − 2]`.
pub fn check_delta_star_shapes(report: &DeltaStarReport, monoid_d: Option<u64>) -> Vec<CheckReport> {
    let g = &report.group;
    let ds = report.delta_star();
    let mut out = Vec::new();
    let Some(d) = monoid_d else {
        out.push(CheckReport::inconclusive("shape", g, "D(B±(G)) not available"));
        return out;
    };
    let interval = |hi: u64| -> BTreeSet<u64> { (1..=hi.saturating_sub(2)).collect() };
    if g.is_cyclic() && g.order() >= 3 {
        let ok = report.max() == Some(d - 2);
        out.push(if report.complete || !ok {
            CheckReport::verdict("shape-cyclic", g, ok, format!("max Δ* = {:?}, D(H) − 2 = {}", report.max(), d - 2), || "max differs".into())
        } else {
            CheckReport::inconclusive("shape-cyclic", g, "sweep incomplete")
        });
    }
    if g.elementary_prime() == Some(2) && g.order() >= 4 {
        let want = interval(d);
        let details = format!("Δ* = {}, [1, D(H) − 2] = {}", format_int_set(&ds), format_int_set(&want));
        out.push(if report.complete {
            CheckReport::verdict("shape-elementary-2", g, ds == want, details, || "sets differ".into())
        } else {
            CheckReport::inconclusive("shape-elementary-2", g, details)
        });
    }
    if 4 % g.exponent() == 0 && g.order() >= 4 {
        let lower = interval(monoid_d_star_even(g).expect("even factors"));
        let upper = interval(d);
        let details = format!(
            "[1, D*(H) − 2] = {} ⊆ Δ* = {} ⊆ [1, D(H) − 2] = {}",
            format_int_set(&lower),
            format_int_set(&ds),
            format_int_set(&upper)
        );
        let upper_ok = ds.is_subset(&upper);
        let lower_ok = lower.is_subset(&ds);
        out.push(if !upper_ok || (report.complete && !lower_ok) {
            CheckReport::fail("shape-exponent-4", g, details, "interval bound violated")
        } else if lower_ok {
            CheckReport::pass("shape-exponent-4", g, details)
        } else {
            CheckReport::inconclusive("shape-exponent-4", g, details)
        });
    }
    out
}

/// Invariants used to tell groups apart by their monoids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharReport {
    pub group: String,
    pub order: usize,
    pub exponent: u64,
    /// `D(G)`, when computable.
    pub davenport: Option<u64>,
    /// `D(B±(G))`.
    pub monoid_davenport: u64,
    /// `ρ₂(B±(G))`.
    pub rho_2: u64,
    pub delta_star: Vec<u64>,
    pub max_delta_star: Option<u64>,
    /// `Δ*` contains an even element.
    pub parity: bool,
    pub complete: bool,
}

pub fn char_invariants(group: &Group, opts: &SweepOptions) -> Result<CharReport> {
    let report = delta_star(group, opts)?;
    let lim = &opts.limits;
    let cache = opts.cache.as_ref();
    let ds = report.delta_star();
    Ok(CharReport {
        group: group.to_string(),
        order: group.order(),
        exponent: group.exponent(),
        davenport: group.davenport(lim).ok(),
        monoid_davenport: monoid_davenport_full(group, lim, cache)?,
        rho_2: rho_k_full(group, 2, lim, cache)?,
        parity: ds.iter().any(|d| d % 2 == 0),
        max_delta_star: ds.last().copied(),
        delta_star: ds.into_iter().collect(),
        complete: report.complete,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharComparison {
    pub left: CharReport,
    pub right: CharReport,
    /// Names of the invariants that differ.
    pub distinguished_by: Vec<String>,
    pub verdict: String,
    pub note: String,
}

/// Compares the invariants readable from the monoids: `max Δ*` (which is
/// `exp(G) − 2` for odd groups), `D(B±(G)) = ρ₂`, and the parity flag.
pub fn char_compare(left: CharReport, right: CharReport) -> CharComparison {
    let mut by = Vec::new();
    if left.max_delta_star != right.max_delta_star {
        by.push("max_delta_star".to_string());
    }
    if left.rho_2 != right.rho_2 {
        by.push("rho_2".to_string());
    }
    if left.parity != right.parity {
        by.push("parity".to_string());
    }
    let verdict = if by.is_empty() {
        "indistinguishable by these invariants".to_string()
    } else {
        format!("distinguished by {}", by.join(", "))
    };
    let note = if left.delta_star != right.delta_star && by.is_empty() {
        "Δ* sets differ; equal systems of sets of lengths only force agreement of Δ* above max/2".to_string()
    } else {
        String::new()
    };
    CharComparison {
        left,
        right,
        distinguished_by: by,
        verdict,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::min_delta;

    fn grp(s: &str) -> Group {
        s.parse().unwrap()
    }

    fn opts() -> SweepOptions {
        SweepOptions::default()
    }

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    fn literals(v: &[Vec<GroupElement>]) -> Vec<String> {
        v.iter().map(|s| format_subset(s)).collect()
    }

    #[test]
    fn orbits() {
        let lim = Limits::default();
        assert_eq!(literals(&subset_orbits(&grp("C3"), &lim).unwrap()), ["[(1)]"]);
        assert_eq!(literals(&subset_orbits(&grp("C5"), &lim).unwrap()), ["[(1)]", "[(1),(2)]"]);
        assert_eq!(
            literals(&subset_orbits(&grp("C2xC2"), &lim).unwrap()),
            ["[(0,1)]", "[(0,1),(1,0)]", "[(0,1),(1,0),(1,1)]"]
        );
        assert!(subset_orbits(&Group::trivial(), &lim).unwrap().is_empty());
        let sign_only = Limits {
            automorphism_order_cap: 1,
            ..Limits::default()
        };
        let c = SignClasses::new(&grp("C5"), &sign_only);
        assert!(!c.automorphisms_used());
        assert_eq!(c.orbit_masks().unwrap().len(), 3);
    }

    #[test]
    fn small_tables() {
        for (name, want) in [
            ("C3", vec![1]),
            ("C4", vec![1]),
            ("C2xC2", vec![1]),
            ("C5", vec![1, 3]),
            ("C7", vec![1, 5]),
            ("C9", vec![1, 7]),
            ("C2xC2xC2", vec![1, 2]),
        ] {
            let r = delta_star(&grp(name), &opts()).unwrap();
            assert!(r.complete, "{name}");
            assert_eq!(r.delta_star(), set(&want), "{name}");
        }
        let r = delta_star(&grp("C8"), &opts()).unwrap();
        assert_eq!(r.max(), Some(3));
        assert!(set(&[1, 2, 3]).is_subset(&r.delta_star()));
        assert_eq!(delta_star(&grp("C2xC4"), &opts()).unwrap().max(), Some(2));
        assert!(delta_star(&grp("C2"), &opts()).unwrap().delta_star().is_empty());
    }

    #[test]
    fn expected_counterexample_at_order_six() {
        let r = delta_star(&grp("C6"), &opts()).unwrap();
        assert_eq!(r.delta_star(), set(&[1, 2]));
        assert_eq!(check_small_max(&r).status, CheckStatus::Fail);
    }

    #[test]
    fn orbit_soundness_against_raw_subsets() {
        let lim = Limits::default();
        for name in ["C5", "C6", "C2xC4", "C8", "C3xC3"] {
            let g = grp(name);
            let report = delta_star(&g, &opts()).unwrap();
            let by_subset: BTreeMap<String, Option<u64>> = report
                .table
                .iter()
                .map(|e| (format_subset(&e.subset), e.min_delta))
                .collect();
            let classes = SignClasses::new(&g, &lim);
            let nonzero: Vec<GroupElement> = g.elements().skip(1).collect();
            for bits in 1u32..(1 << nonzero.len()) {
                let raw: Vec<GroupElement> = (0..nonzero.len())
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| nonzero[i].clone())
                    .collect();
                let canon = format_subset(&classes.canonical_subset(&raw).unwrap());
                let direct = min_delta(&g, &raw, &Limits::generous()).unwrap();
                assert_eq!(by_subset[&canon], direct, "{name} {}", format_subset(&raw));
            }
        }
    }

    #[test]
    fn elementary_pruning_is_exact() {
        let g = grp("C3xC3");
        let pruned = delta_star(&g, &opts()).unwrap();
        let plain = delta_star(
            &g,
            &SweepOptions {
                limits: Limits {
                    prune: false,
                    ..Limits::default()
                },
                ..opts()
            },
        )
        .unwrap();
        assert_eq!(pruned, plain);
        assert!(forces_min_delta_one(&g, &[g.element(&[1, 1]).unwrap(), g.element(&[1, 0]).unwrap(), g.element(&[0, 1]).unwrap()]));
        assert!(!forces_min_delta_one(&g, &[g.element(&[1, 0]).unwrap(), g.element(&[2, 0]).unwrap(), g.element(&[0, 1]).unwrap()]));
    }

    #[test]
    fn checks_on_small_groups() {
        let c5 = delta_star(&grp("C5"), &opts()).unwrap();
        assert_eq!(verify_delta_ast_odd(&c5).status, CheckStatus::Pass);
        assert_eq!(verify_parity(&c5).status, CheckStatus::Pass);
        assert_eq!(verify_elementary_p(&c5, &c5).status, CheckStatus::Pass);
        let c9 = delta_star(&grp("C9"), &opts()).unwrap();
        assert_eq!(verify_delta_ast_odd(&c9).status, CheckStatus::Pass);
        let c33 = delta_star(&grp("C3xC3"), &opts()).unwrap();
        let c3 = delta_star(&grp("C3"), &opts()).unwrap();
        assert_eq!(verify_elementary_p(&c33, &c3).status, CheckStatus::Pass);
        assert_eq!(verify_delta_ast_odd(&c33).status, CheckStatus::Pass);
        let c8 = delta_star(&grp("C8"), &opts()).unwrap();
        assert_eq!(verify_parity(&c8).status, CheckStatus::Pass);
        assert_eq!(verify_delta_ast_odd(&c8).status, CheckStatus::NotApplicable);
        let c2 = delta_star(&grp("C2"), &opts()).unwrap();
        assert_eq!(check_report_invariants(&c2, Some(2)).status, CheckStatus::Pass);
        assert_eq!(verify_parity(&c2).status, CheckStatus::NotApplicable);
        assert_eq!(check_small_max(&c2).status, CheckStatus::NotApplicable);
        assert_eq!(gcd_closure(&set(&[1, 3]), 2), set(&[1, 3]));
        assert_eq!(gcd_closure(&set(&[4, 6]), 2), set(&[2, 4, 6]));
    }

    #[test]
    fn monoid_davenport_values() {
        let lim = Limits::default();
        for (name, d) in [("C3", 3), ("C4", 3), ("C6", 4), ("C8", 5), ("C9", 9), ("C3xC3", 5), ("C2xC4", 4), ("C2", 2), ("C1", 0)] {
            assert_eq!(monoid_davenport_full(&grp(name), &lim, None).unwrap(), d, "{name}");
        }
        assert_eq!(rho_k_full(&grp("C6"), 2, &lim, None).unwrap(), 4);
    }

    #[test]
    fn comparisons() {
        let c = |s: &str| char_invariants(&grp(s), &opts()).unwrap();
        let v = char_compare(c("C3"), c("C2xC2"));
        assert!(v.distinguished_by.is_empty(), "{v:?}");
        let v = char_compare(c("C5"), c("C7"));
        assert!(v.distinguished_by.contains(&"max_delta_star".to_string()));
        let v = char_compare(c("C9"), c("C3xC3"));
        assert_eq!(v.left.monoid_davenport, 9);
        assert_eq!(v.right.monoid_davenport, 5);
        assert!(v.distinguished_by.contains(&"max_delta_star".to_string()));
        assert!(v.distinguished_by.contains(&"rho_2".to_string()));
    }

    #[test]
    fn report_json_shape() {
        let r = delta_star(&grp("C5"), &opts()).unwrap();
        let v = serde_json::to_value(r.to_record()).unwrap();
        assert_eq!(v["delta_star"], serde_json::json!([1, 3]));
        assert_eq!(v["max"], 3);
        assert_eq!(v["witnesses"]["3"], "[(1)]");
        assert_eq!(v["table"][0]["subset"], "[(1)]");
        assert_eq!(v["complete"], true);
    }

    #[test]
    fn partial_mode_for_large_groups() {
        let g = grp("C17");
        let mut o = opts();
        o.targets.push(vec![g.element(&[1]).unwrap(), g.element(&[4]).unwrap()]);
        let r = delta_star(&g, &o).unwrap();
        assert!(!r.complete);
        assert!(r.delta_star().contains(&3));
        assert!(r.delta_star().contains(&15));
    }
}
