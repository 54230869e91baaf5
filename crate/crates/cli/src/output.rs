use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};

use pmzs::atoms::normalize_ground;
use pmzs::delta_star::monoid_davenport_full;
use pmzs::relations::{format_int_set, min_delta_of, rho_k_of};
use pmzs::{
    char_compare, char_invariants, delta_star, enumerate_atoms_cached, factorizations,
    format_subset, parse_subset, run_suite, AtomCache, Error, Group, GroupElement, Scope,
    Sequence, SweepOptions,
};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::{CliError, Command};

/// One command's result in all three renderings.
pub struct Output {
    format: Format,
    text: String,
    json: Value,
    csv: Vec<Vec<String>>,
    verify: Option<(usize, usize)>,
}

impl Output {
    pub fn print(&self) -> Result<(), CliError> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match self.format {
            Format::Table => writeln!(out, "{}", self.text.trim_end())?,
            Format::Json => writeln!(out, "{}", pretty(&self.json)?)?,
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                for row in &self.csv {
                    w.write_record(row)
                        .map_err(|e| CliError::Io(io::Error::other(e)))?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }

    pub fn status(&self) -> Result<(), CliError> {
        match self.verify {
            Some((failed, inconclusive)) if failed > 0 || inconclusive > 0 => {
                Err(CliError::Verify { failed, inconclusive })
            }
            _ => Ok(()),
        }
    }
}

fn pretty(v: &Value) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Io(io::Error::other(e)))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn row<I: IntoIterator<Item = S>, S: ToString>(items: I) -> Vec<String> {
    items.into_iter().map(|s| s.to_string()).collect()
}

fn opt(v: Option<u64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn parse_group(s: &str) -> Result<Group, CliError> {
    Ok(s.trim().parse()?)
}

/// Parses a subset literal, defaulting to the whole group.
fn ground(group: &Group, subset: Option<&str>) -> Result<Vec<GroupElement>, CliError> {
    match subset {
        Some(s) => Ok(parse_subset(group, s)?),
        None => Ok(group.elements().collect()),
    }
}

fn sweep_options(cfg: &RunConfig) -> Result<SweepOptions, CliError> {
    Ok(SweepOptions {
        limits: cfg.limits.clone(),
        cache: cfg.cache_dir.as_ref().map(AtomCache::new).transpose()?,
        targets: Vec::new(),
    })
}

pub fn dispatch(cmd: Command, cfg: &RunConfig) -> Result<Output, CliError> {
    let opts = sweep_options(cfg)?;
    let lim = &cfg.limits;
    let cache = opts.cache.as_ref();
    let mut out = Output {
        format: cfg.format,
        text: String::new(),
        json: Value::Null,
        csv: Vec::new(),
        verify: None,
    };
    let t = &mut out.text;
    match cmd {
        Command::Group { group } => {
            let g = parse_group(&group)?;
            let inv = g.invariants();
            let (d, exact) = match g.davenport(lim) {
                Ok(d) => (d, true),
                Err(Error::Resource { .. }) => (g.d_star(), false),
                Err(e) => return Err(e.into()),
            };
            writeln!(t, "group     {g}").unwrap();
            writeln!(t, "order     {}", inv.order).unwrap();
            writeln!(t, "exponent  {}", inv.exponent).unwrap();
            writeln!(t, "rank      {}", inv.rank).unwrap();
            for (p, r) in &inv.p_ranks {
                writeln!(t, "r_{p}       {r}").unwrap();
            }
            writeln!(t, "D*        {}", inv.d_star).unwrap();
            if exact {
                writeln!(t, "D         {d}").unwrap();
            } else {
                writeln!(t, "D         ≥ {d} (lower bound)").unwrap();
            }
            out.json = json!({
                "group": g.to_string(),
                "order": inv.order,
                "exponent": inv.exponent,
                "rank": inv.rank,
                "p_ranks": inv.p_ranks,
                "d_star": inv.d_star,
                "davenport": d,
                "davenport_exact": exact,
            });
            out.csv.push(row(["key", "value"]));
            out.csv.push(row(["group".to_string(), g.to_string()]));
            out.csv.push(row(["order".to_string(), inv.order.to_string()]));
            out.csv.push(row(["exponent".to_string(), inv.exponent.to_string()]));
            out.csv.push(row(["rank".to_string(), inv.rank.to_string()]));
            for (p, r) in &inv.p_ranks {
                out.csv.push(row([format!("r_{p}"), r.to_string()]));
            }
            out.csv.push(row(["d_star".to_string(), inv.d_star.to_string()]));
            out.csv.push(row(["davenport".to_string(), d.to_string()]));
            out.csv.push(row(["davenport_exact".to_string(), exact.to_string()]));
        }
        Command::Atoms { group, subset } => {
            let g = parse_group(&group)?;
            let g0 = ground(&g, subset.as_deref())?;
            let atoms = enumerate_atoms_cached(&g, &g0, lim, cache)?;
            let prof = atoms.length_profile();
            writeln!(t, "B±({}) over {g}", format_subset(&g0)).unwrap();
            out.csv.push(row(["index", "atom", "length"]));
            for i in 0..atoms.len() {
                let s = atoms.atom_sequence(i);
                writeln!(t, "  A{i:<4} len {:<3} {s}", atoms.atom_len(i)).unwrap();
                out.csv.push(row([i.to_string(), s.to_string(), atoms.atom_len(i).to_string()]));
            }
            if atoms.includes_zero() {
                writeln!(t, "  (plus the prime atom (0))").unwrap();
            }
            writeln!(t, "{} atoms, D(B±(G₀)) = {}, gcd{{|A|−2}} = {}", atoms.len(), prof.max_len, prof.gcd_lengths_minus_2).unwrap();
            let mut v = to_value(&atoms.to_record());
            v["max_len"] = json!(prof.max_len);
            v["gcd_lengths_minus_2"] = json!(prof.gcd_lengths_minus_2);
            out.json = v;
        }
        Command::MinDelta { group, subset } => {
            let g = parse_group(&group)?;
            let g0 = ground(&g, subset.as_deref())?;
            let atoms = enumerate_atoms_cached(&g, &g0, lim, cache)?;
            let md = min_delta_of(&atoms);
            match md {
                Some(d) => writeln!(t, "min Δ = {d}").unwrap(),
                None => writeln!(t, "min Δ = none (half-factorial)").unwrap(),
            }
            out.json = json!({
                "group": g.to_string(),
                "subset": format_subset(&g0),
                "min_delta": md,
                "half_factorial": md.is_none(),
            });
            out.csv.push(row(["group", "subset", "min_delta"]));
            out.csv.push(row([g.to_string(), format_subset(&g0), opt(md)]));
        }
        Command::Lengths { group, element, subset } => {
            let g = parse_group(&group)?;
            let b = Sequence::parse(&g, &element)?;
            let g0 = match subset.as_deref() {
                Some(s) => parse_subset(&g, s)?,
                None => b.support(),
            };
            let atoms = enumerate_atoms_cached(&g, &g0, lim, cache)?;
            let f = factorizations(&b, &atoms, lim)?;
            writeln!(t, "{f}").unwrap();
            let (ground, _) = normalize_ground(&g, &g0)?;
            writeln!(t, "atoms over {}:", format_subset(&ground)).unwrap();
            for i in 0..atoms.len() {
                writeln!(t, "  A{i} = {}", atoms.atom_sequence(i)).unwrap();
            }
            if atoms.includes_zero() {
                writeln!(t, "  A{} = [(0)]", atoms.len()).unwrap();
            }
            out.json = to_value(&f.to_record());
            out.csv.push(row(["factorization", "length"]));
            for z in &f.factorizations {
                let parts: Vec<String> = z.iter().map(|(i, c)| format!("{i}^{c}")).collect();
                let len: u32 = z.iter().map(|&(_, c)| c).sum();
                out.csv.push(row([parts.join(" "), len.to_string()]));
            }
        }
        Command::Rho { group, k, subset } => {
            let g = parse_group(&group)?;
            let g0 = ground(&g, subset.as_deref())?;
            if k > lim.rho_cap {
                return Err(Error::Resource {
                    what: format!("ρ_k for k = {k}"),
                    limit: lim.rho_cap as u64,
                    hint: Some("raise --rho-cap".into()),
                }
                .into());
            }
            let atoms = enumerate_atoms_cached(&g, &g0, lim, cache)?;
            let r = rho_k_of(&atoms, k, lim)?;
            writeln!(t, "ρ_{k} = {r}").unwrap();
            out.json = json!({"group": g.to_string(), "subset": format_subset(&g0), "k": k, "rho": r});
            out.csv.push(row(["group", "subset", "k", "rho"]));
            out.csv.push(row([g.to_string(), format_subset(&g0), k.to_string(), r.to_string()]));
        }
        Command::DeltaStar { group, targets } => {
            let g = parse_group(&group)?;
            let mut o = opts.clone();
            for s in &targets {
                o.targets.push(parse_subset(&g, s)?);
            }
            let report = delta_star(&g, &o)?;
            writeln!(t, "{report}").unwrap();
            out.json = to_value(&report.to_record());
            out.csv.push(row(["subset", "min_delta"]));
            for e in &report.table {
                out.csv.push(row([format_subset(&e.subset), opt(e.min_delta)]));
            }
        }
        Command::Davenport { group, subset } => {
            let g = parse_group(&group)?;
            let (d, exact) = match g.davenport(lim) {
                Ok(d) => (d, true),
                Err(Error::Resource { .. }) => (g.d_star(), false),
                Err(e) => return Err(e.into()),
            };
            let monoid = match subset.as_deref() {
                Some(s) => {
                    let g0 = parse_subset(&g, s)?;
                    enumerate_atoms_cached(&g, &g0, lim, cache)?.length_profile().max_len
                }
                None => monoid_davenport_full(&g, lim, cache)?,
            };
            let subset_text = subset.clone().unwrap_or_else(|| g.to_string());
            writeln!(t, "D({g}) {} {d}", if exact { "=" } else { "≥" }).unwrap();
            writeln!(t, "D(B±({subset_text})) = {monoid}").unwrap();
            out.json = json!({
                "group": g.to_string(),
                "subset": subset,
                "davenport": d,
                "davenport_exact": exact,
                "monoid_davenport": monoid,
            });
            out.csv.push(row(["group", "davenport", "davenport_exact", "monoid_davenport"]));
            out.csv.push(row([g.to_string(), d.to_string(), exact.to_string(), monoid.to_string()]));
        }
        Command::Compare { left, right } => {
            let a = char_invariants(&parse_group(&left)?, &opts)?;
            let b = char_invariants(&parse_group(&right)?, &opts)?;
            let v = char_compare(a, b);
            out.csv.push(row(["group", "exponent", "davenport", "monoid_davenport", "rho_2", "delta_star", "max_delta_star", "parity", "complete"]));
            for c in [&v.left, &v.right] {
                let ds: std::collections::BTreeSet<u64> = c.delta_star.iter().copied().collect();
                writeln!(
                    t,
                    "{:<10} exp {:<3} D {:<4} D(H) {:<3} ρ₂ {:<3} Δ* {} parity {}{}",
                    c.group,
                    c.exponent,
                    opt(c.davenport),
                    c.monoid_davenport,
                    c.rho_2,
                    format_int_set(&ds),
                    c.parity,
                    if c.complete { "" } else { " (partial)" }
                )
                .unwrap();
                out.csv.push(row([
                    c.group.clone(),
                    c.exponent.to_string(),
                    opt(c.davenport),
                    c.monoid_davenport.to_string(),
                    c.rho_2.to_string(),
                    format_int_set(&ds),
                    opt(c.max_delta_star),
                    c.parity.to_string(),
                    c.complete.to_string(),
                ]));
            }
            writeln!(t, "{}", v.verdict).unwrap();
            if !v.note.is_empty() {
                writeln!(t, "note: {}", v.note).unwrap();
            }
            out.json = to_value(&v);
        }
        Command::Verify { scope, artifact } => {
            let scope: Scope = scope.trim().parse()?;
            let report = run_suite(&scope, &opts)?;
            for c in &report.checks {
                writeln!(t, "{c}").unwrap();
            }
            let n = &report.tally;
            writeln!(
                t,
                "{}: {} passed, {} failed, {} not applicable, {} inconclusive",
                report.scope, n.pass, n.fail, n.not_applicable, n.inconclusive
            )
            .unwrap();
            out.json = to_value(&report);
            if let Some(path) = artifact {
                fs::write(&path, pretty(&out.json)? + "\n")?;
            }
            out.csv.push(row(["id", "group", "status", "details", "counterexample"]));
            for c in &report.checks {
                let status = to_value(&c.status);
                out.csv.push(row([
                    c.id.clone(),
                    c.group.clone(),
                    status.as_str().unwrap_or_default().to_string(),
                    c.details.clone(),
                    c.counterexample.clone().unwrap_or_default(),
                ]));
            }
            for c in report.failures() {
                eprintln!("counterexample: {c}");
            }
            out.verify = Some((n.fail, n.inconclusive));
        }
    }
    Ok(out)
}
