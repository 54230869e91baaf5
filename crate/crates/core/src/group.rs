//! Finite abelian groups in invariant-factor form.
//!
//! A group `C_{n_1} ⊕ … ⊕ C_{n_r}` with `n_1 | … | n_r` is stored by its
//! invariant factors. Elements are coordinate vectors, and every element also
//! has a dense *mixed-radix index* in `0..|G|` (first coordinate most
//! significant), so that index order is the lexicographic order of
//! coordinates. All hot loops in the crate work on indices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Largest group order the crate agrees to index densely.
pub const MAX_GROUP_ORDER: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Group {
    factors: Vec<u64>,
    order: usize,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse("element", s, "expected \"(a1,...,ar)\""))?;
        if inner.trim().is_empty() {
            return Ok(GroupElement::new(Vec::new()));
        }
        let coords = inner
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::parse("element", s, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.iter().any(|&c| c < 0) {
            return Err(Error::parse("element", s, "coordinates must be non-negative"));
        }
        Ok(GroupElement::new(coords.into_iter().map(|c| c as u64).collect()))
    }
}

/// Structural invariants of a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupInvariants {
    pub order: u64,
    pub exponent: u64,
    pub rank: usize,
    /// `r_p(G)` for every prime `p` dividing the order.
    pub p_ranks: BTreeMap<u64, usize>,
    pub d_star: u64,
}

/// Dense subset of a group, one bit per element index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    words: Vec<u64>,
    universe: usize,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn singleton(universe: usize, idx: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(idx);
        s
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, idx: usize) {
        self.words[idx / 64] |= 1u64 << (idx % 64);
    }

    pub fn contains(&self, idx: usize) -> bool {
        idx < self.universe && self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }

    /// `{x + g : x ∈ self}` for a translation given as an index table.
    pub fn translated(&self, table: &[u32]) -> ElementSet {
        let mut out = ElementSet::empty(self.universe);
        for x in self.iter() {
            out.insert(table[x] as usize);
        }
        out
    }

    pub fn negated(&self, group: &Group) -> ElementSet {
        let mut out = ElementSet::empty(self.universe);
        for x in self.iter() {
            out.insert(group.neg_idx(x));
        }
        out
    }

    /// Minkowski sum `{x + y}`.
    pub fn sumset(&self, other: &ElementSet, group: &Group) -> ElementSet {
        let mut out = ElementSet::empty(self.universe);
        for x in self.iter() {
            for y in other.iter() {
                out.insert(group.add_idx(x, y));
            }
        }
        out
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Group {
    /// Builds the group `⊕ C_{n_i}` from any list of cyclic orders and
    /// returns it in invariant-factor form (`[2, 3]` becomes `[6]`).
    pub fn new(cyclic_orders: &[u64]) -> Result<Group> {
        if let Some(&bad) = cyclic_orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidOrder(bad));
        }
        let mut order: u64 = 1;
        for &n in cyclic_orders {
            order = order
                .checked_mul(n)
                .filter(|&o| o <= MAX_GROUP_ORDER)
                .ok_or_else(|| Error::Domain(format!("group order exceeds {MAX_GROUP_ORDER}")))?;
        }
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in cyclic_orders {
            for (p, e) in prime_powers(n) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; rank];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.into_iter().enumerate() {
                factors[rank - 1 - i] *= p.pow(e);
            }
        }
        Ok(Group {
            factors,
            order: order as usize,
        })
    }

    pub fn cyclic(n: u64) -> Result<Group> {
        Group::new(&[n])
    }

    pub fn trivial() -> Group {
        Group {
            factors: Vec::new(),
            order: 1,
        }
    }

    /// All groups of order `n` up to isomorphism, sorted by their textual form.
    pub fn all_of_order(n: u64) -> Vec<Group> {
        fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
            if n == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for first in (1..=n.min(max)).rev() {
                for mut rest in partitions(n - first, first) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        if n == 1 {
            return vec![Group::trivial()];
        }
        let mut choices: Vec<Vec<u64>> = vec![Vec::new()];
        for (p, e) in prime_powers(n) {
            let mut next = Vec::new();
            for base in &choices {
                for part in partitions(e, e) {
                    let mut c = base.clone();
                    c.extend(part.iter().map(|&k| p.pow(k)));
                    next.push(c);
                }
            }
            choices = next;
        }
        let mut groups: Vec<Group> = choices
            .iter()
            .map(|c| Group::new(c).expect("prime powers are valid orders"))
            .collect();
        groups.sort_by_key(|g| g.to_string());
        groups
    }

    /// All groups of order at most `n`, ascending by order.
    pub fn all_up_to_order(n: u64) -> Vec<Group> {
        (1..=n).flat_map(Group::all_of_order).collect()
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    /// `Some(p)` when the exponent is a power of the prime `p`.
    pub fn p_group_prime(&self) -> Option<u64> {
        match prime_powers(self.exponent()).as_slice() {
            [(p, _)] => Some(*p),
            _ => None,
        }
    }

    /// `Some(p)` when every invariant factor equals the prime `p`.
    pub fn elementary_prime(&self) -> Option<u64> {
        let p = self.p_group_prime()?;
        (self.exponent() == p).then_some(p)
    }

    /// `r_m(G) = |{i : m | n_i}|`.
    pub fn m_rank(&self, m: u64) -> Result<usize> {
        if m <= 1 {
            return Err(Error::Domain(format!("m-rank needs m ≥ 2, got {m}")));
        }
        Ok(self.factors.iter().filter(|&&n| n % m == 0).count())
    }

    /// `D*(G) = 1 + Σ (n_i − 1)`.
    pub fn d_star(&self) -> u64 {
        1 + self.factors.iter().map(|n| n - 1).sum::<u64>()
    }

    pub fn invariants(&self) -> GroupInvariants {
        let mut p_ranks = BTreeMap::new();
        for (p, _) in prime_powers(self.order as u64) {
            p_ranks.insert(p, self.m_rank(p).expect("primes are at least 2"));
        }
        GroupInvariants {
            order: self.order as u64,
            exponent: self.exponent(),
            rank: self.rank(),
            p_ranks,
            d_star: self.d_star(),
        }
    }

    // ---- elements --------------------------------------------------------

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(vec![0; self.rank()])
    }

    /// Validates `coords` as an element of this group.
    pub fn element(&self, coords: &[u64]) -> Result<GroupElement> {
        let e = GroupElement::new(coords.to_vec());
        self.check(&e)?;
        Ok(e)
    }

    /// Reduces arbitrary integer coordinates modulo the invariant factors.
    pub fn element_mod(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::NotAnElement {
                element: format!("{coords:?}"),
                group: self.to_string(),
            });
        }
        Ok(GroupElement::new(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.coords.len() == self.rank() && e.coords.iter().zip(&self.factors).all(|(c, n)| c < n)
    }

    pub(crate) fn check(&self, e: &GroupElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::NotAnElement {
                element: e.to_string(),
                group: self.to_string(),
            })
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.element_at(self.add_idx(self.index_of(a), self.index_of(b))))
    }

    pub fn negate(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.element_at(self.neg_idx(self.index_of(a))))
    }

    /// `k·a` for a possibly negative integer `k`.
    pub fn scale(&self, k: i64, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let coords: Vec<i64> = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| ((k as i128 * c as i128).rem_euclid(n as i128)) as i64)
            .collect();
        self.element_mod(&coords)
    }

    /// Smallest `k ≥ 1` with `k·g = 0`.
    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        Ok(g
            .coords
            .iter()
            .zip(&self.factors)
            .fold(1u64, |acc, (&c, &n)| acc.lcm(&(n / n.gcd(&c)))))
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_at(i))
    }

    // ---- index arithmetic ------------------------------------------------

    pub fn index_of(&self, e: &GroupElement) -> usize {
        e.coords
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut coords = vec![0u64; self.rank()];
        for (slot, &n) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = (idx % n as usize) as u64;
            idx /= n as usize;
        }
        GroupElement::new(coords)
    }

    pub fn add_idx(&self, mut a: usize, mut b: usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        for &n in self.factors.iter().rev() {
            let n = n as usize;
            let d = (a % n + b % n) % n;
            out += d * place;
            place *= n;
            a /= n;
            b /= n;
        }
        out
    }

    pub fn neg_idx(&self, mut a: usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        for &n in self.factors.iter().rev() {
            let n = n as usize;
            let d = (n - a % n) % n;
            out += d * place;
            place *= n;
            a /= n;
        }
        out
    }

    pub fn scale_idx(&self, k: u64, mut a: usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        for &n in self.factors.iter().rev() {
            let d = ((a as u64 % n) * (k % n)) % n;
            out += d as usize * place;
            place *= n as usize;
            a /= n as usize;
        }
        out
    }

    pub fn order_idx(&self, a: usize) -> u64 {
        self.element_order(&self.element_at(a))
            .expect("indices are in range")
    }

    /// Table of `x ↦ x + g` over all indices.
    pub fn translation(&self, g: usize) -> Vec<u32> {
        (0..self.order).map(|x| self.add_idx(x, g) as u32).collect()
    }

    // ---- structure -------------------------------------------------------

    /// `Σ a_i e_i = 0` forces `a_i e_i = 0` for every `i`.
    pub fn is_independent(&self, elems: &[GroupElement]) -> Result<bool> {
        let mut expected: u64 = 1;
        for e in elems {
            expected = expected.saturating_mul(self.element_order(e)?);
        }
        let (span, _) = self.subgroup_generated(elems)?;
        Ok(span.len() as u64 == expected)
    }

    /// Subgroup generated by `elems`, with its isomorphism type.
    pub fn subgroup_generated(&self, elems: &[GroupElement]) -> Result<(ElementSet, Group)> {
        let mut idx = Vec::with_capacity(elems.len());
        for e in elems {
            self.check(e)?;
            idx.push(self.index_of(e));
        }
        let span = self.span_idx(&idx);
        let ty = self.type_of_subgroup(&span);
        Ok((span, ty))
    }

    pub(crate) fn span_idx(&self, gens: &[usize]) -> ElementSet {
        let mut span = ElementSet::singleton(self.order, 0);
        for &g in gens {
            if span.contains(g) {
                continue;
            }
            let table = self.translation(g);
            let mut frontier = span.clone();
            loop {
                frontier = frontier.translated(&table);
                if frontier.iter().all(|x| span.contains(x)) {
                    break;
                }
                span.union_with(&frontier);
            }
        }
        span
    }

    /// Isomorphism type of a subgroup given by its elements, read off from
    /// the sizes of its `p^j`-torsion parts.
    pub(crate) fn type_of_subgroup(&self, sub: &ElementSet) -> Group {
        let mut prime_power_orders = Vec::new();
        for (p, e) in prime_powers(sub.len() as u64) {
            // logs[j] = log_p |{x ∈ H : p^j x = 0}|
            let mut logs = vec![0u32];
            let mut pj = 1u64;
            for _ in 0..e {
                pj *= p;
                let mut t = sub.iter().filter(|&x| self.scale_idx(pj, x) == 0).count() as u64;
                let mut l = 0;
                while t > 1 {
                    t /= p;
                    l += 1;
                }
                logs.push(l);
            }
            // at_least[j] = number of cyclic p-factors of order ≥ p^(j+1)
            let at_least: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
            for (j, &c) in at_least.iter().enumerate() {
                let next = at_least.get(j + 1).copied().unwrap_or(0);
                for _ in 0..(c - next) {
                    prime_power_orders.push(p.pow(j as u32 + 1));
                }
            }
        }
        Group::new(&prime_power_orders).expect("torsion counts give valid prime powers")
    }

    // ---- Davenport constant ----------------------------------------------

    /// True when `D(G) = D*(G)` is known: p-groups and groups of rank ≤ 2.
    pub fn davenport_formula_applies(&self) -> bool {
        self.rank() <= 2 || self.p_group_prime().is_some()
    }

    /// The classical Davenport constant `D(G)`.
    ///
    /// Uses `D*` where it is known to be exact; otherwise runs the
    /// zero-sum-free search. Above `limits.davenport_order_cap` the result is
    /// a resource error whose hint carries the `D*` lower bound.
    pub fn davenport(&self, limits: &Limits) -> Result<u64> {
        if self.davenport_formula_applies() {
            return Ok(self.d_star());
        }
        if self.order > limits.davenport_order_cap {
            return Err(Error::Resource {
                what: format!("exact Davenport search for {self}"),
                limit: limits.davenport_order_cap as u64,
                hint: Some(format!("lower bound only: D ≥ D* = {}", self.d_star())),
            });
        }
        self.davenport_by_search(limits.davenport_node_budget)
    }

    /// Exhaustive search for the longest zero-sum-free sequence.
    ///
    /// Sequences are grown in non-decreasing index order while the set of
    /// nonempty subsums is carried along. Every zero-sum-free extension adds
    /// at least one new subsum (the total sum), so a branch whose subsum set
    /// is too full to reach the current record is cut.
    pub fn davenport_by_search(&self, node_budget: u64) -> Result<u64> {
        if self.order == 1 {
            return Ok(1);
        }
        struct Search<'a> {
            g: &'a Group,
            tables: Vec<Vec<u32>>,
            orders: Vec<u64>,
            best: usize,
            nodes: u64,
            budget: u64,
        }
        impl Search<'_> {
            fn go(&mut self, start: usize, len: usize, mult: u64, sums: &ElementSet) -> bool {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return false;
                }
                let cap = self.g.order - 1;
                for x in start..self.g.order {
                    let m = if x == start { mult + 1 } else { 1 };
                    if m >= self.orders[x] {
                        continue;
                    }
                    let mut next = sums.translated(&self.tables[x]);
                    next.insert(x);
                    if next.contains(0) {
                        continue;
                    }
                    next.union_with(sums);
                    let len2 = len + 1;
                    if len2 > self.best {
                        self.best = len2;
                    }
                    if len2 + (cap - next.len()) > self.best && !self.go(x, len2, m, &next) {
                        return false;
                    }
                }
                true
            }
        }
        let tables = (0..self.order).map(|g| self.translation(g)).collect();
        let orders = (0..self.order).map(|g| self.order_idx(g)).collect();
        let mut s = Search {
            g: self,
            tables,
            orders,
            best: self.d_star() as usize - 1,
            nodes: 0,
            budget: node_budget,
        };
        let ok = s.go(1, 0, 0, &ElementSet::empty(self.order));
        if !ok {
            return Err(Error::Resource {
                what: format!("zero-sum-free search nodes for {self}"),
                limit: node_budget,
                hint: Some(format!("lower bound only: D ≥ D* = {}", self.d_star())),
            });
        }
        Ok(s.best as u64 + 1)
    }

    // ---- automorphisms ---------------------------------------------------

    /// All automorphisms, each as the permutation it induces on indices.
    ///
    /// Generator images `h_i` with `ord(h_i) | n_i` are chosen one at a time,
    /// keeping the partial map injective; the identity comes first.
    pub fn automorphisms(&self, limits: &Limits) -> Result<Vec<Automorphism>> {
        if self.order > limits.automorphism_order_cap {
            return Err(Error::resource(
                format!("automorphism enumeration for {self}"),
                limits.automorphism_order_cap as u64,
            ));
        }
        let rank = self.rank();
        let candidates: Vec<Vec<usize>> = self
            .factors
            .iter()
            .map(|&n| {
                (0..self.order)
                    .filter(|&h| self.scale_idx(n, h) == 0)
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(rank);
        let mut spans = vec![ElementSet::singleton(self.order, 0)];
        self.extend_auts(&candidates, &mut images, &mut spans, &mut out, limits)?;
        // identity first
        let id: Vec<u32> = (0..self.order as u32).collect();
        if let Some(pos) = out.iter().position(|a: &Automorphism| a.perm == id) {
            out.swap(0, pos);
        }
        Ok(out)
    }

    fn extend_auts(
        &self,
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        spans: &mut Vec<ElementSet>,
        out: &mut Vec<Automorphism>,
        limits: &Limits,
    ) -> Result<()> {
        let i = images.len();
        if i == self.rank() {
            out.push(self.automorphism_from_images(images));
            if out.len() > limits.automorphism_count_cap {
                return Err(Error::resource(
                    format!("automorphism count for {self}"),
                    limits.automorphism_count_cap as u64,
                ));
            }
            return Ok(());
        }
        let n = self.factors[i];
        for &h in &candidates[i] {
            let prev = spans.last().expect("base span present");
            let table = self.translation(h);
            let mut span = prev.clone();
            let mut layer = prev.clone();
            for _ in 1..n {
                layer = layer.translated(&table);
                span.union_with(&layer);
            }
            if span.len() != prev.len() * n as usize {
                continue;
            }
            images.push(h);
            spans.push(span);
            self.extend_auts(candidates, images, spans, out, limits)?;
            spans.pop();
            images.pop();
        }
        Ok(())
    }

    fn automorphism_from_images(&self, images: &[usize]) -> Automorphism {
        let perm = (0..self.order)
            .map(|x| {
                let e = self.element_at(x);
                e.coords
                    .iter()
                    .zip(images)
                    .fold(0usize, |acc, (&c, &h)| self.add_idx(acc, self.scale_idx(c, h)))
                    as u32
            })
            .collect();
        Automorphism { perm }
    }
}

/// An automorphism stored as the permutation of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub perm: Vec<u32>,
}

impl Automorphism {
    pub fn apply_idx(&self, x: usize) -> usize {
        self.perm[x] as usize
    }

    pub fn apply(&self, group: &Group, e: &GroupElement) -> GroupElement {
        group.element_at(self.apply_idx(group.index_of(e)))
    }

    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        // self ∘ other
        Automorphism {
            perm: other.perm.iter().map(|&x| self.perm[x as usize]).collect(),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "C1");
        }
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "C{n}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({self})")
    }
}

impl FromStr for Group {
    type Err = Error;

    /// Parses `"C2xC4"`, case-insensitively. `"C1"` on its own is the
    /// trivial group; factors may come in any order and need not be
    /// invariant factors.
    fn from_str(s: &str) -> Result<Group> {
        let t = s.trim().to_ascii_lowercase();
        if t == "c1" || t == "trivial" {
            return Ok(Group::trivial());
        }
        if t.is_empty() {
            return Err(Error::parse("group", s, "empty group name"));
        }
        let mut orders = Vec::new();
        for part in t.split('x') {
            let part = part.trim();
            let (base, power) = match part.split_once('^') {
                Some((b, p)) => (
                    b,
                    p.parse::<u32>()
                        .map_err(|e| Error::parse("group", s, e.to_string()))?,
                ),
                None => (part, 1),
            };
            let digits = base
                .strip_prefix('c')
                .ok_or_else(|| Error::parse("group", s, "factors look like C<n>"))?;
            let n: u64 = digits
                .parse()
                .map_err(|e: std::num::ParseIntError| Error::parse("group", s, e.to_string()))?;
            if n < 2 {
                return Err(Error::parse("group", s, format!("cyclic order {n} is not ≥ 2")));
            }
            for _ in 0..power {
                orders.push(n);
            }
        }
        Group::new(&orders)
    }
}

impl Serialize for Group {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Group, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
