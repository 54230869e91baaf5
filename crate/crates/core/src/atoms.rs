//! Atoms of `B±(G₀)`: atomicity tests, complete enumeration, and the
//! Davenport constant of the monoid.
//!
//! Enumeration walks every exponent vector over the ground set with total
//! length at most `D(⟨G₀⟩)`, each vector exactly once, carrying the σ± set
//! of the current vector down the recursion. Atoms are then extracted from
//! the plus-minus weighted zero-sum vectors in order of increasing length: a
//! vector is reducible exactly when some shorter atom divides it with a
//! plus-minus weighted zero-sum cofactor.
//!
//! The one pruning rule is exact. If `y` is a nonempty zero-sum sequence of
//! elements of order 2 then `σ±(y) = {0}`, so for any `z` the sequence `yz`
//! has `σ±(yz) = σ±(z)`: either `yz` is not a plus-minus weighted zero-sum
//! sequence or it factors as `y · z`. No proper extension of a vector that
//! contains such a `y` is an atom, and the search stops there.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{ElementSet, Group, GroupElement};
use crate::limits::Limits;
use crate::sequence::{format_subset, pm_step, Sequence};

/// Bumped whenever the enumeration could produce different output; part of
/// every cache key.
pub const CODE_VERSION: &str = "atoms-v1";

/// Complete list of atoms of `B±(G₀)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSet {
    group: Group,
    ground: Vec<GroupElement>,
    atoms: Vec<Vec<u32>>,
    includes_zero: bool,
    bound: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AtomLengthProfile {
    /// `D(B±(G₀))`.
    pub max_len: u64,
    /// `gcd{|A| − 2}` over the listed atoms; 0 when there are none.
    pub gcd_lengths_minus_2: u64,
}

impl AtomSet {
    pub fn group(&self) -> &Group {
        &self.group
    }

    /// `G₀` with 0 removed, sorted by element index.
    pub fn ground(&self) -> &[GroupElement] {
        &self.ground
    }

    /// Exponent vectors over [`AtomSet::ground`], sorted by length and then
    /// in decreasing lexicographic order.
    pub fn atoms(&self) -> &[Vec<u32>] {
        &self.atoms
    }

    pub fn includes_zero(&self) -> bool {
        self.includes_zero
    }

    /// Length bound the enumeration was complete for.
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom_len(&self, i: usize) -> u64 {
        self.atoms[i].iter().map(|&e| e as u64).sum()
    }

    pub fn atom_sequence(&self, i: usize) -> Sequence {
        Sequence::from_exponents(&self.group, &self.ground, &self.atoms[i])
            .expect("atoms live over the ground set")
    }

    pub fn lengths(&self) -> Vec<u64> {
        (0..self.len()).map(|i| self.atom_len(i)).collect()
    }

    pub fn length_profile(&self) -> AtomLengthProfile {
        let lengths = self.lengths();
        let max_len = match lengths.iter().max() {
            Some(&m) => m,
            None if self.includes_zero => 1,
            None => 0,
        };
        let gcd = lengths.iter().fold(0u64, |acc, &l| acc.gcd(&(l - 2)));
        AtomLengthProfile {
            max_len,
            gcd_lengths_minus_2: gcd,
        }
    }

    /// Exponent vector of `b` over the ground set, ignoring copies of 0.
    pub fn exponents_of(&self, b: &Sequence) -> Result<Vec<u32>> {
        if b.group() != &self.group {
            return Err(Error::GroupMismatch {
                left: b.group().to_string(),
                right: self.group.to_string(),
            });
        }
        let zero = self.group.zero();
        let mut exps = vec![0u32; self.ground.len()];
        for (g, m) in b.iter() {
            if *g == zero {
                if !self.includes_zero {
                    return Err(Error::Domain(format!("{b} uses 0, which is not in G₀")));
                }
                continue;
            }
            match self.ground.iter().position(|h| h == g) {
                Some(i) => exps[i] = m as u32,
                None => return Err(Error::Domain(format!("{b} is not a sequence over G₀"))),
            }
        }
        Ok(exps)
    }

    pub fn to_record(&self) -> AtomSetRecord {
        AtomSetRecord {
            group: self.group.to_string(),
            ground_set: self.ground.iter().map(|g| g.coords().to_vec()).collect(),
            bound: self.bound,
            atoms: self.atoms.clone(),
            includes_zero: self.includes_zero,
        }
    }

    pub fn from_record(rec: &AtomSetRecord) -> Result<AtomSet> {
        let group: Group = rec.group.parse()?;
        let ground = rec
            .ground_set
            .iter()
            .map(|c| group.element(c))
            .collect::<Result<Vec<_>>>()?;
        if let Some(a) = rec.atoms.iter().find(|a| a.len() != ground.len()) {
            return Err(Error::Domain(format!(
                "atom {a:?} does not match a ground set of size {}",
                ground.len()
            )));
        }
        Ok(AtomSet {
            group,
            ground,
            atoms: rec.atoms.clone(),
            includes_zero: rec.includes_zero,
            bound: rec.bound,
        })
    }
}

/// On-disk and JSON form of an [`AtomSet`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomSetRecord {
    pub group: String,
    pub ground_set: Vec<Vec<u64>>,
    pub bound: u64,
    pub atoms: Vec<Vec<u32>>,
    pub includes_zero: bool,
}

/// `true` iff `b` is an atom of `B±(supp b)` (and so of every `B±(G₀)` that
/// contains its support, these being divisor-closed).
///
/// The single-element sequence `0` is an atom.
pub fn is_atom(b: &Sequence) -> bool {
    if b.is_empty() {
        return false;
    }
    let group = b.group();
    let zero = group.zero();
    if b.multiplicity(&zero) > 0 {
        return b.len() == 1;
    }
    if !b.is_pm_zero_sum() {
        return false;
    }
    let support: Vec<(usize, u64)> = b.iter().map(|(g, m)| (group.index_of(g), m)).collect();
    let tables: Vec<(Vec<u32>, Vec<u32>)> = support
        .iter()
        .map(|&(x, _)| (group.translation(x), group.translation(group.neg_idx(x))))
        .collect();
    let total = b.len();
    // every split has a side holding a copy of the first support element;
    // enumerate that side
    let mut part = vec![0u64; support.len()];
    part[0] = 1;
    let start = pm_step(&ElementSet::singleton(group.order(), 0), &tables[0].0, &tables[0].1);
    !has_split(&support, &tables, &mut part, 0, &start, total)
}

fn pm_of(tables: &[(Vec<u32>, Vec<u32>)], counts: &[u64], universe: usize) -> ElementSet {
    let mut set = ElementSet::singleton(universe, 0);
    for (t, &c) in tables.iter().zip(counts) {
        for _ in 0..c {
            set = pm_step(&set, &t.0, &t.1);
        }
    }
    set
}

fn has_split(
    support: &[(usize, u64)],
    tables: &[(Vec<u32>, Vec<u32>)],
    part: &mut Vec<u64>,
    pos: usize,
    set: &ElementSet,
    total: u64,
) -> bool {
    let taken: u64 = part.iter().sum();
    if taken < total && set.contains(0) {
        let rest: Vec<u64> = support.iter().zip(part.iter()).map(|(&(_, m), &p)| m - p).collect();
        if pm_of(tables, &rest, set.universe()).contains(0) {
            return true;
        }
    }
    for j in pos..support.len() {
        if part[j] < support[j].1 {
            part[j] += 1;
            let next = pm_step(set, &tables[j].0, &tables[j].1);
            if has_split(support, tables, part, j, &next, total) {
                part[j] -= 1;
                return true;
            }
            part[j] -= 1;
        }
    }
    false
}

/// Normalizes a list of elements into `(ground, includes_zero)`: validated,
/// deduplicated, 0 removed and the rest sorted by index.
pub fn normalize_ground(group: &Group, g0: &[GroupElement]) -> Result<(Vec<GroupElement>, bool)> {
    let zero = group.zero();
    let mut ground = Vec::new();
    let mut includes_zero = false;
    for g in g0 {
        group.check(g)?;
        if *g == zero {
            includes_zero = true;
        } else {
            ground.push(g.clone());
        }
    }
    ground.sort_by_key(|g| group.index_of(g));
    ground.dedup();
    Ok((ground, includes_zero))
}

/// An upper bound for atom lengths over `ground`: `D(⟨ground⟩)` when it is
/// available, the order of `⟨ground⟩` otherwise.
pub fn atom_length_bound(group: &Group, ground: &[GroupElement], limits: &Limits) -> Result<u64> {
    if ground.is_empty() {
        return Ok(0);
    }
    let (span, ty) = group.subgroup_generated(ground)?;
    match ty.davenport(limits) {
        Ok(d) => Ok(d),
        Err(Error::Resource { .. }) => Ok(span.len() as u64),
        Err(e) => Err(e),
    }
}

/// Complete list of atoms of `B±(G₀)`.
pub fn enumerate_atoms(group: &Group, g0: &[GroupElement], limits: &Limits) -> Result<AtomSet> {
    let (ground, includes_zero) = normalize_ground(group, g0)?;
    if ground.len() > limits.max_ground {
        return Err(Error::Resource {
            what: format!("ground set size ({} elements)", ground.len()),
            limit: limits.max_ground as u64,
            hint: Some("raise max_ground".into()),
        });
    }
    let bound = atom_length_bound(group, &ground, limits)?;
    if bound > limits.max_atom_len {
        return Err(Error::Resource {
            what: format!("atom length bound {bound} for {}", format_subset(&ground)),
            limit: limits.max_atom_len,
            hint: Some("raise max_atom_len".into()),
        });
    }
    let atoms = Enumerator::new(group, &ground, bound, limits).run()?;
    Ok(AtomSet {
        group: group.clone(),
        ground,
        atoms,
        includes_zero,
        bound,
    })
}

struct Enumerator<'a> {
    group: &'a Group,
    plus: Vec<Vec<u32>>,
    minus: Vec<Vec<u32>>,
    idx: Vec<usize>,
    involution: Vec<bool>,
    bound: u64,
    prune: bool,
    nodes: u64,
    max_nodes: u64,
    /// pm status of every visited vector
    seen: HashMap<Vec<u8>, bool>,
}

impl<'a> Enumerator<'a> {
    fn new(group: &'a Group, ground: &[GroupElement], bound: u64, limits: &Limits) -> Self {
        let idx: Vec<usize> = ground.iter().map(|g| group.index_of(g)).collect();
        Enumerator {
            group,
            plus: idx.iter().map(|&x| group.translation(x)).collect(),
            minus: idx.iter().map(|&x| group.translation(group.neg_idx(x))).collect(),
            involution: idx.iter().map(|&x| group.add_idx(x, x) == 0).collect(),
            idx,
            bound,
            prune: limits.prune,
            nodes: 0,
            max_nodes: limits.max_nodes,
            seen: HashMap::new(),
        }
    }

    fn run(mut self) -> Result<Vec<Vec<u32>>> {
        let k = self.idx.len();
        if k == 0 {
            return Ok(Vec::new());
        }
        if self.bound > u8::MAX as u64 {
            return Err(Error::resource("atom length bound", u8::MAX as u64));
        }
        let mut x = vec![0u8; k];
        let zero = ElementSet::singleton(self.group.order(), 0);
        let inv_sums = ElementSet::singleton(self.group.order(), 0);
        self.visit(0, &mut x, 0, &zero, &inv_sums)?;

        let mut candidates: Vec<Vec<u8>> = self
            .seen
            .iter()
            .filter(|(v, &pm)| pm && v.iter().any(|&c| c > 0))
            .map(|(v, _)| v.clone())
            .collect();
        candidates.sort_by(|a, b| {
            let la: u32 = a.iter().map(|&c| c as u32).sum();
            let lb: u32 = b.iter().map(|&c| c as u32).sum();
            la.cmp(&lb).then_with(|| b.cmp(a))
        });
        let mut atoms: Vec<Vec<u8>> = Vec::new();
        let mut diff = vec![0u8; k];
        for cand in candidates {
            let reducible = atoms.iter().any(|a| {
                if a.iter().zip(&cand).any(|(p, q)| p > q) || *a == cand {
                    return false;
                }
                for ((d, p), q) in diff.iter_mut().zip(a).zip(&cand) {
                    *d = q - p;
                }
                self.is_pm(&diff)
            });
            if !reducible {
                atoms.push(cand);
            }
        }
        Ok(atoms
            .into_iter()
            .map(|a| a.into_iter().map(u32::from).collect())
            .collect())
    }

    fn is_pm(&self, v: &[u8]) -> bool {
        if let Some(&pm) = self.seen.get(v) {
            return pm;
        }
        let mut set = ElementSet::singleton(self.group.order(), 0);
        for (j, &c) in v.iter().enumerate() {
            for _ in 0..c {
                set = pm_step(&set, &self.plus[j], &self.minus[j]);
            }
        }
        set.contains(0)
    }

    /// Visits `x` (coordinates before `pos` fixed, the rest zero) and every
    /// vector obtained by raising coordinates at or after `pos`.
    fn visit(
        &mut self,
        pos: usize,
        x: &mut Vec<u8>,
        len: u64,
        set: &ElementSet,
        inv_sums: &ElementSet,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Resource {
                what: "atom enumeration nodes".into(),
                limit: self.max_nodes,
                hint: Some("partial result discarded".into()),
            });
        }
        self.seen.insert(x.clone(), set.contains(0));
        for j in pos..x.len() {
            let mut s = set.clone();
            let mut inv = inv_sums.clone();
            let mut c = 0u64;
            while len + c < self.bound {
                c += 1;
                s = pm_step(&s, &self.plus[j], &self.minus[j]);
                let mut saturated = false;
                if self.prune && self.involution[j] {
                    // a zero-sum involution subsequence appears
                    if c >= 2 || inv.contains(self.idx[j]) {
                        saturated = true;
                    } else {
                        inv = inv.sumset_with_zero(self.idx[j], self.group);
                    }
                }
                x[j] = c as u8;
                if saturated {
                    // only an all-involution vector can still be an atom here
                    let all_inv = x
                        .iter()
                        .zip(&self.involution)
                        .all(|(&cnt, &inv)| cnt == 0 || inv);
                    if all_inv {
                        self.seen.insert(x.clone(), s.contains(0));
                    }
                    x[j] = 0;
                    break;
                }
                self.visit(j + 1, x, len + c, &s, &inv)?;
                x[j] = 0;
            }
        }
        Ok(())
    }
}

impl ElementSet {
    /// `self ∪ (self + g)`: subset sums after adjoining one copy of `g`.
    fn sumset_with_zero(&self, g: usize, group: &Group) -> ElementSet {
        let mut out = self.clone();
        for x in self.iter() {
            out.insert(group.add_idx(x, g));
        }
        out
    }
}

/// `D(B±(G₀))`, the maximal atom length.
pub fn davenport_monoid(group: &Group, g0: &[GroupElement], limits: &Limits) -> Result<u64> {
    Ok(enumerate_atoms(group, g0, limits)?.length_profile().max_len)
}

/// Directory of persisted atom sets, keyed by a content hash of
/// (code version, group, ground set, zero flag, bound).
#[derive(Debug, Clone)]
pub struct AtomCache {
    dir: PathBuf,
}

impl AtomCache {
    pub fn new(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(AtomCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn key(group: &Group, ground: &[GroupElement], includes_zero: bool, bound: u64) -> String {
        let mut h = Sha256::new();
        h.update(CODE_VERSION.as_bytes());
        h.update(b"|");
        h.update(group.to_string().as_bytes());
        h.update(b"|");
        h.update(format_subset(ground).as_bytes());
        h.update(if includes_zero { b"|0|" } else { b"|-|" });
        h.update(bound.to_string().as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(
        &self,
        group: &Group,
        ground: &[GroupElement],
        includes_zero: bool,
        bound: u64,
    ) -> Option<AtomSet> {
        let path = self.path(&Self::key(group, ground, includes_zero, bound));
        let text = fs::read_to_string(path).ok()?;
        let rec: AtomSetRecord = serde_json::from_str(&text).ok()?;
        let set = AtomSet::from_record(&rec).ok()?;
        (set.group == *group
            && set.ground == ground
            && set.includes_zero == includes_zero
            && set.bound == bound)
            .then_some(set)
    }

    pub fn store(&self, set: &AtomSet) -> io::Result<()> {
        let key = Self::key(&set.group, &set.ground, set.includes_zero, set.bound);
        static COUNTER: AtomicU64 = AtomicU64::new(0);
        let n = COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!("{key}.tmp{}-{n}", std::process::id()));
        let text = serde_json::to_string(&set.to_record()).map_err(io::Error::other)?;
        fs::write(&tmp, text)?;
        fs::rename(tmp, self.path(&key))
    }
}

/// [`enumerate_atoms`] backed by an optional cache.
pub fn enumerate_atoms_cached(
    group: &Group,
    g0: &[GroupElement],
    limits: &Limits,
    cache: Option<&AtomCache>,
) -> Result<AtomSet> {
    let Some(cache) = cache else {
        return enumerate_atoms(group, g0, limits);
    };
    let (ground, includes_zero) = normalize_ground(group, g0)?;
    let bound = atom_length_bound(group, &ground, limits)?;
    if let Some(hit) = cache.load(group, &ground, includes_zero, bound) {
        return Ok(hit);
    }
    let set = enumerate_atoms(group, g0, limits)?;
    // a failed write only costs a recomputation next time
    let _ = cache.store(&set);
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(s: &str) -> Group {
        s.parse().unwrap()
    }

    fn el(g: &Group, c: &[u64]) -> GroupElement {
        g.element(c).unwrap()
    }

    fn seq(g: &Group, s: &str) -> Sequence {
        Sequence::parse(g, s).unwrap()
    }

    fn atom_strings(a: &AtomSet) -> Vec<String> {
        (0..a.len()).map(|i| a.atom_sequence(i).to_string()).collect()
    }

    #[test]
    fn atomicity() {
        let c8 = grp("C8");
        assert!(is_atom(&seq(&c8, "[(3)^2]")));
        assert!(is_atom(&seq(&c8, "[(1)^3,(3)]")));
        assert!(is_atom(&seq(&c8, "[(1),(3)^3]")));
        assert!(!is_atom(&seq(&c8, "[(1)^8]")));
        assert!(!is_atom(&seq(&c8, "[(2)^4]")));
        assert!(is_atom(&seq(&c8, "[(4)^2]")));
        assert!(is_atom(&seq(&c8, "[(0)]")));
        assert!(!is_atom(&seq(&c8, "[(0)^2]")));
        assert!(!is_atom(&seq(&c8, "[(0),(1)^2]")));
        assert!(!is_atom(&Sequence::empty(&c8)));
        assert!(!is_atom(&seq(&c8, "[(1),(3)]")));
        let c5 = grp("C5");
        assert!(is_atom(&seq(&c5, "[(1)^5]")));
        assert!(!is_atom(&seq(&c5, "[(1)^4]")));
    }

    #[test]
    fn one_generator_atoms() {
        let c5 = grp("C5");
        let a = enumerate_atoms(&c5, &[el(&c5, &[1])], &Limits::default()).unwrap();
        assert_eq!(atom_strings(&a), ["[(1)^2]", "[(1)^5]"]);
        let p = a.length_profile();
        assert_eq!((p.max_len, p.gcd_lengths_minus_2), (5, 3));
        let c8 = grp("C8");
        let a = enumerate_atoms(&c8, &[el(&c8, &[2])], &Limits::default()).unwrap();
        assert_eq!(atom_strings(&a), ["[(2)^2]"]);
    }

    #[test]
    fn c8_pair_atoms() {
        let c8 = grp("C8");
        let a = enumerate_atoms(&c8, &[el(&c8, &[1]), el(&c8, &[3])], &Limits::default()).unwrap();
        assert_eq!(
            atom_strings(&a),
            ["[(1)^2]", "[(3)^2]", "[(1)^3,(3)]", "[(1),(3)^3]"]
        );
    }

    #[test]
    fn lem_even_shape_atoms() {
        let g = grp("C4xC4");
        let g0 = [el(&g, &[2, 2]), el(&g, &[1, 0]), el(&g, &[0, 1])];
        let a = enumerate_atoms(&g, &g0, &Limits::default()).unwrap();
        let mut got = atom_strings(&a);
        got.sort();
        let mut want = vec![
            "[(2,2)^2]".to_string(),
            "[(1,0)^2]".into(),
            "[(0,1)^2]".into(),
            "[(0,1)^2,(1,0)^2,(2,2)]".into(),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn a_squared_plus_one_profile() {
        let c17 = grp("C17");
        let a = enumerate_atoms(&c17, &[el(&c17, &[1]), el(&c17, &[4])], &Limits::default()).unwrap();
        let mut lengths = a.lengths();
        lengths.sort();
        let mut want = vec![2, 2, 17, 17];
        want.extend((1..=4).map(|w| 17 - 3 * w));
        // e^(4-k) (4e)^(1+4k), including k = 0
        want.extend((0..=3).map(|k| 5 + 3 * k));
        want.sort();
        assert_eq!(lengths, want);
        assert!(is_atom(&seq(&c17, "[(1)^4,(4)]")));
        assert_eq!(a.length_profile().gcd_lengths_minus_2, 3);
    }

    #[test]
    fn coset_profile() {
        let g = grp("C2^4");
        let g0: Vec<GroupElement> = g
            .elements()
            .filter(|e| e.coords()[0] == 1)
            .collect();
        assert_eq!(g0.len(), 8);
        let a = enumerate_atoms(&g, &g0, &Limits::default()).unwrap();
        assert_eq!(a.length_profile().gcd_lengths_minus_2, 2);
        assert!(a.lengths().iter().all(|l| l % 2 == 0));
    }

    #[test]
    fn monoid_davenport() {
        let lim = Limits::default();
        let full = |s: &str| {
            let g = grp(s);
            let all: Vec<GroupElement> = g.elements().collect();
            davenport_monoid(&g, &all, &lim).unwrap()
        };
        assert_eq!(full("C5"), 5);
        assert_eq!(full("C8"), 5);
        assert_eq!(full("C2xC4"), 4);
        assert_eq!(full("C2"), 2);
        let c3 = grp("C3");
        let only_zero = enumerate_atoms(&c3, &[c3.zero()], &lim).unwrap();
        assert!(only_zero.is_empty());
        assert_eq!(only_zero.length_profile().max_len, 1);
        assert_eq!(enumerate_atoms(&c3, &[], &lim).unwrap().length_profile().max_len, 0);
    }

    #[test]
    fn pruning_does_not_change_results() {
        let no_prune = Limits {
            prune: false,
            ..Limits::generous()
        };
        for name in ["C2xC2xC2", "C2xC4", "C6", "C10", "C2xC2"] {
            let g = grp(name);
            let all: Vec<GroupElement> = g.elements().skip(1).collect();
            let a = enumerate_atoms(&g, &all, &Limits::generous()).unwrap();
            let b = enumerate_atoms(&g, &all, &no_prune).unwrap();
            assert_eq!(a, b, "{name}");
        }
    }

    #[test]
    fn enumeration_agrees_with_atom_test() {
        for name in ["C6", "C2xC4", "C3xC3", "C7"] {
            let g = grp(name);
            let all: Vec<GroupElement> = g.elements().skip(1).collect();
            let a = enumerate_atoms(&g, &all, &Limits::generous()).unwrap();
            for i in 0..a.len() {
                assert!(is_atom(&a.atom_sequence(i)), "{name}: {}", a.atom_sequence(i));
            }
            // every pm-zero-sum sequence of length ≤ 4 that passes the direct test is listed
            let listed: std::collections::HashSet<Vec<u32>> = a.atoms().iter().cloned().collect();
            let k = a.ground().len();
            let mut v = vec![0u32; k];
            fn walk(
                pos: usize,
                left: u32,
                v: &mut Vec<u32>,
                a: &AtomSet,
                listed: &std::collections::HashSet<Vec<u32>>,
            ) {
                if v.iter().any(|&c| c > 0) {
                    let s = Sequence::from_exponents(a.group(), a.ground(), v).unwrap();
                    assert_eq!(is_atom(&s), listed.contains(v), "{s}");
                }
                for j in pos..v.len() {
                    for c in 1..=left {
                        v[j] = c;
                        walk(j + 1, left - c, v, a, listed);
                    }
                    v[j] = 0;
                }
            }
            walk(0, 4, &mut v, &a, &listed);
        }
    }

    #[test]
    fn caps_are_errors() {
        let g = grp("C2^4");
        let all: Vec<GroupElement> = g.elements().collect();
        let narrow = Limits {
            max_ground: 8,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_atoms(&g, &all, &narrow),
            Err(Error::Resource { .. })
        ));
        let c17 = grp("C17");
        let tight = Limits {
            max_atom_len: 10,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_atoms(&c17, &[el(&c17, &[1])], &tight),
            Err(Error::Resource { .. })
        ));
        let tiny = Limits {
            max_nodes: 5,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_atoms(&c17, &[el(&c17, &[1]), el(&c17, &[4])], &tiny),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = AtomCache::new(dir.path()).unwrap();
        let c8 = grp("C8");
        let g0 = [el(&c8, &[1]), el(&c8, &[3]), c8.zero()];
        let cold = enumerate_atoms_cached(&c8, &g0, &Limits::default(), Some(&cache)).unwrap();
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        let warm = enumerate_atoms_cached(&c8, &g0, &Limits::default(), Some(&cache)).unwrap();
        assert_eq!(cold, warm);
        assert!(warm.includes_zero());
        let json = serde_json::to_value(cold.to_record()).unwrap();
        assert_eq!(json["group"], "C8");
        assert_eq!(json["ground_set"], serde_json::json!([[1], [3]]));
        assert_eq!(json["atoms"], serde_json::json!([[2, 0], [0, 2], [3, 1], [1, 3]]));
    }
}
