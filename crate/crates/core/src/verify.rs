//! The verification suite: every check on every group in scope, plus fixed
//! instances on larger groups.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::atoms::enumerate_atoms_cached;
use crate::delta_star::{
    check_delta_star_shapes, check_lem_delta, check_report_invariants, check_small_max,
    delta_star, monoid_davenport_full, rho_k_full, verify_delta_ast_odd,
    verify_elementary_p, verify_parity, CheckReport, CheckStatus, DeltaStarRecord,
    DeltaStarReport, SweepOptions,
};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::relations::{format_int_set, length_set, min_delta_of};
use crate::sequence::{format_subset, Sequence};

/// Largest order swept by the `all-small` scope.
pub const SMALL_ORDER: u64 = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    /// All groups of order ≤ [`SMALL_ORDER`] and the fixed larger instances.
    AllSmall,
    Group(Group),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::AllSmall => f.write_str("all-small"),
            Scope::Group(g) => write!(f, "{g}"),
        }
    }
}

impl std::str::FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "all-small" {
            Ok(Scope::AllSmall)
        } else {
            Ok(Scope::Group(s.parse()?))
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub scope: String,
    pub tally: Tally,
    pub checks: Vec<CheckReport>,
    pub sweeps: Vec<DeltaStarRecord>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn passed(&self) -> bool {
        self.tally.fail == 0 && self.tally.inconclusive == 0
    }
}

/// Turns resource failures into an inconclusive check; domain errors are
/// bugs in the suite and propagate.
fn guarded(id: &str, g: &Group, f: impl FnOnce() -> Result<CheckReport>) -> Result<CheckReport> {
    match f() {
        Err(e @ Error::Resource { .. }) => Ok(CheckReport::inconclusive(id, g, e.to_string())),
        other => other,
    }
}

fn els(g: &Group, coords: &[&[u64]]) -> Vec<GroupElement> {
    coords.iter().map(|c| g.element(c).expect("fixed instance")).collect()
}

/// Known Δ* values and bounds for small groups.
fn golden_table(report: &DeltaStarReport) -> Option<CheckReport> {
    const ID: &str = "golden-delta-star";
    let g = &report.group;
    let ds = report.delta_star();
    let name = g.to_string();
    let exact: Option<&[u64]> = match name.as_str() {
        "C3" | "C4" | "C2xC2" => Some(&[1]),
        "C5" => Some(&[1, 3]),
        "C7" => Some(&[1, 5]),
        "C9" => Some(&[1, 7]),
        "C2xC2xC2" => Some(&[1, 2]),
        _ => None,
    };
    let details = format!("Δ* = {}", format_int_set(&ds));
    if let Some(want) = exact {
        let want: BTreeSet<u64> = want.iter().copied().collect();
        return Some(CheckReport::verdict(ID, g, ds == want, details, || {
            format!("expected {}", format_int_set(&want))
        }));
    }
    match name.as_str() {
        "C2xC4" => Some(CheckReport::verdict(ID, g, report.max() == Some(2), details, || {
            "expected max 2".into()
        })),
        "C8" => {
            let ok = report.max() == Some(3) && [1, 2, 3].iter().all(|d| ds.contains(d));
            Some(CheckReport::verdict(ID, g, ok, details, || {
                "expected max 3 with {1,2,3} ⊆ Δ*".into()
            }))
        }
        _ => None,
    }
}

/// `D(B±(G)) = D(G)` for odd groups and `= m + 1` for `C_{2m}`; `ρ₂ = D(H)`.
fn davenport_checks(g: &Group, monoid_d: u64, opts: &SweepOptions) -> Result<Vec<CheckReport>> {
    let lim = &opts.limits;
    let mut out = Vec::new();
    if g.order() % 2 == 1 && !g.is_trivial() {
        out.push(guarded("monoid-davenport-odd", g, || {
            let d = g.davenport(lim)?;
            Ok(CheckReport::verdict(
                "monoid-davenport-odd",
                g,
                d == monoid_d,
                format!("D(G) = {d}, D(B±(G)) = {monoid_d}"),
                || "values differ".into(),
            ))
        })?);
    }
    if g.is_cyclic() && g.order() % 2 == 0 && g.order() >= 4 {
        let m = g.order() as u64 / 2;
        out.push(CheckReport::verdict(
            "monoid-davenport-even-cyclic",
            g,
            monoid_d == m + 1,
            format!("D(B±(G)) = {monoid_d}, m + 1 = {}", m + 1),
            || "values differ".into(),
        ));
    }
    out.push(guarded("rho2", g, || {
        let r = rho_k_full(g, 2, lim, opts.cache.as_ref())?;
        Ok(CheckReport::verdict(
            "rho2",
            g,
            r == monoid_d,
            format!("ρ₂ = {r}, D(H) = {monoid_d}"),
            || "values differ".into(),
        ))
    })?);
    Ok(out)
}

/// The construction with independent generators `eᵢ` of even order `2mᵢ`
/// and `e₀ = Σ mᵢeᵢ`, over the invariant-factor basis.
fn lem_even_instance(g: &Group, opts: &SweepOptions) -> Result<Option<CheckReport>> {
    const ID: &str = "even-construction";
    let f = g.factors();
    let even: Vec<usize> = (0..f.len()).filter(|&i| f[i] % 2 == 0).collect();
    let m_sum: u64 = even.iter().map(|&i| f[i] / 2).sum();
    if even.is_empty() || m_sum < 2 {
        return Ok(None);
    }
    let unit = |i: usize, k: u64| {
        let mut c = vec![0u64; f.len()];
        c[i] = k;
        g.element(&c).expect("coordinates in range")
    };
    let mut g0: Vec<GroupElement> = even.iter().map(|&i| unit(i, 1)).collect();
    let mut e0 = g.zero();
    for &i in &even {
        e0 = g.add(&e0, &unit(i, f[i] / 2))?;
    }
    g0.push(e0);
    Some(guarded(ID, g, || {
        let atoms = enumerate_atoms_cached(g, &g0, &opts.limits, opts.cache.as_ref())?;
        let got = min_delta_of(&atoms);
        Ok(CheckReport::verdict(
            ID,
            g,
            got == Some(m_sum - 1),
            format!("G₀ = {}, min Δ = {got:?}, expected {}", format_subset(&g0), m_sum - 1),
            || format_subset(&g0),
        ))
    }))
    .transpose()
}

/// All checks for one group.
pub fn verify_group(g: &Group, opts: &SweepOptions) -> Result<(Vec<CheckReport>, DeltaStarReport)> {
    let report = delta_star(g, opts)?;
    let monoid_d = match monoid_davenport_full(g, &opts.limits, opts.cache.as_ref()) {
        Ok(d) => Some(d),
        Err(Error::Resource { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut checks = vec![check_report_invariants(&report, monoid_d)];
    if let Some(c) = golden_table(&report) {
        checks.push(c);
    }
    checks.push(verify_delta_ast_odd(&report));
    checks.push(verify_parity(&report));
    checks.push(check_small_max(&report));
    checks.push(check_lem_delta(&report));
    if g.order() >= 3 {
        checks.extend(check_delta_star_shapes(&report, monoid_d));
    }
    match g.elementary_prime() {
        Some(p) if p != 2 => {
            let cyclic = delta_star(&Group::cyclic(p)?, opts)?;
            checks.push(verify_elementary_p(&report, &cyclic));
        }
        _ => checks.push(verify_elementary_p(&report, &report)),
    }
    if let Some(d) = monoid_d {
        checks.extend(davenport_checks(g, d, opts)?);
    } else {
        checks.push(CheckReport::inconclusive("monoid-davenport", g, "D(B±(G)) not available"));
    }
    if let Some(c) = lem_even_instance(g, opts)? {
        checks.push(c);
    }
    Ok((checks, report))
}

fn min_delta_instance(
    id: &str,
    g: &Group,
    g0: Vec<GroupElement>,
    want: u64,
    want_gcd: Option<u64>,
    opts: &SweepOptions,
) -> Result<CheckReport> {
    guarded(id, g, || {
        let atoms = enumerate_atoms_cached(g, &g0, &opts.limits, opts.cache.as_ref())?;
        let got = min_delta_of(&atoms);
        let gcd = atoms.length_profile().gcd_lengths_minus_2;
        let ok = got == Some(want) && want_gcd.is_none_or(|w| w == gcd);
        Ok(CheckReport::verdict(
            id,
            g,
            ok,
            format!(
                "G₀ = {}, min Δ = {got:?} (expected {want}), gcd{{|A|−2}} = {gcd}",
                format_subset(&g0)
            ),
            || format_subset(&g0),
        ))
    })
}

fn length_set_instance(
    id: &str,
    g: &Group,
    g0: Vec<GroupElement>,
    element: &str,
    want: &[u64],
    opts: &SweepOptions,
) -> Result<CheckReport> {
    guarded(id, g, || {
        let atoms = enumerate_atoms_cached(g, &g0, &opts.limits, opts.cache.as_ref())?;
        let b = Sequence::parse(g, element)?;
        let got = length_set(&b, &atoms, &opts.limits)?;
        let want: BTreeSet<u64> = want.iter().copied().collect();
        Ok(CheckReport::verdict(
            id,
            g,
            got == want,
            format!("L({b}) = {}, expected {}", format_int_set(&got), format_int_set(&want)),
            || b.to_string(),
        ))
    })
}

/// Fixed instances on groups beyond the complete-sweep range.
pub fn targeted_checks(opts: &SweepOptions) -> Result<(Vec<CheckReport>, Vec<DeltaStarReport>)> {
    let mut checks = Vec::new();
    let mut sweeps = Vec::new();
    let c = |s: &str| -> Group { s.parse().expect("fixed group") };

    let c5 = c("C5");
    checks.push(min_delta_instance("one-generator", &c5, els(&c5, &[&[1]]), 3, Some(3), opts)?);
    let c8 = c("C8");
    checks.push(min_delta_instance("c8-pair", &c8, els(&c8, &[&[1], &[3]]), 2, None, opts)?);
    let c17 = c("C17");
    checks.push(min_delta_instance("square-plus-one", &c17, els(&c17, &[&[1], &[4]]), 3, Some(3), opts)?);
    let c24 = c("C2^4");
    let coset: Vec<GroupElement> = c24.elements().filter(|e| e.coords()[0] == 1).collect();
    checks.push(min_delta_instance("coset", &c24, coset, 1, Some(2), opts)?);
    let c15 = c("C15");
    // e₁ = 5 of order 3, e₂ = 3 of order 5, e₀ = e₁ + e₂
    checks.push(min_delta_instance("odd-construction", &c15, els(&c15, &[&[8], &[5], &[3]]), 1, None, opts)?);
    let c33 = c("C3xC3");
    checks.push(min_delta_instance("odd-construction", &c33, els(&c33, &[&[1, 1], &[1, 0], &[0, 1]]), 1, None, opts)?);

    let c44 = c("C4xC4");
    checks.push(length_set_instance(
        "even-construction-lengths",
        &c44,
        els(&c44, &[&[2, 2], &[1, 0], &[0, 1]]),
        "[(2,2)^2,(1,0)^4,(0,1)^4]",
        &[2, 5],
        opts,
    )?);

    // C₃ ⊕ C₆ with G₀ = {e₁ + e₂, e₂}
    let c36 = c("C3xC6");
    let g0 = els(&c36, &[&[1, 1], &[0, 1]]);
    checks.push(length_set_instance("mixed-lengths", &c36, g0.clone(), "[(1,1)^6,(0,1)^6]", &[2, 6], opts)?);
    // D*(B±(C_n ⊕ C_2n)) = (n − 1) + n + 1 = 2n
    let d_star = 6u64;
    checks.push(guarded("mixed-max", &c36, || {
        let atoms = enumerate_atoms_cached(&c36, &g0, &opts.limits, opts.cache.as_ref())?;
        let md = min_delta_of(&atoms);
        let d = monoid_davenport_full(&c36, &opts.limits, opts.cache.as_ref())?;
        let ok = md == Some(d_star - 2) && d_star - 2 <= d - 2;
        Ok(CheckReport::verdict(
            "mixed-max",
            &c36,
            ok,
            format!("min Δ = {md:?}, D*(H) − 2 = {}, D(H) − 2 = {}", d_star - 2, d - 2),
            || format_subset(&g0),
        ))
    })?);
    let mut o = opts.clone();
    o.targets = vec![g0.clone(), els(&c36, &[&[0, 3], &[0, 1]])];
    let partial = delta_star(&c36, &o)?;
    checks.push(verify_parity(&partial));
    sweeps.push(partial);

    // C₅² needs the complete sweep, which fits once the order cap is lifted
    let c55 = c("C5xC5");
    let mut o = opts.clone();
    o.limits.sweep_max_order = o.limits.sweep_max_order.max(25);
    let full = delta_star(&c55, &o)?;
    let cyclic = delta_star(&c5, opts)?;
    checks.push(verify_elementary_p(&full, &cyclic));
    checks.push(verify_delta_ast_odd(&full));
    sweeps.push(full);

    Ok((checks, sweeps))
}

/// Runs the suite over the current rayon pool.
pub fn run_suite(scope: &Scope, opts: &SweepOptions) -> Result<SuiteReport> {
    let groups: Vec<Group> = match scope {
        Scope::AllSmall => Group::all_up_to_order(SMALL_ORDER),
        Scope::Group(g) => vec![g.clone()],
    };
    let per_group: Vec<Result<(Vec<CheckReport>, DeltaStarReport)>> =
        groups.par_iter().map(|g| verify_group(g, opts)).collect();
    let mut checks = Vec::new();
    let mut sweeps = Vec::new();
    for r in per_group {
        let (c, s) = r?;
        checks.extend(c);
        sweeps.push(s);
    }
    if *scope == Scope::AllSmall {
        let (c, s) = targeted_checks(opts)?;
        checks.extend(c);
        sweeps.extend(s);
    }
    let mut tally = Tally::default();
    for c in &checks {
        match c.status {
            CheckStatus::Pass => tally.pass += 1,
            CheckStatus::Fail => tally.fail += 1,
            CheckStatus::NotApplicable => tally.not_applicable += 1,
            CheckStatus::Inconclusive => tally.inconclusive += 1,
        }
    }
    Ok(SuiteReport {
        scope: scope.to_string(),
        tally,
        checks,
        sweeps: sweeps.iter().map(DeltaStarReport::to_record).collect(),
    })
}
