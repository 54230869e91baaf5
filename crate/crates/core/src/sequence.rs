//! Sequences over a group, i.e. elements of the free commutative monoid
//! `F(G)`, together with plain and plus-minus weighted sums.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ElementSet, Group, GroupElement};

/// A finite multiset of group elements. Zero multiplicities are never stored,
/// and the support is kept sorted so equal sequences hash equally.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    group: Group,
    mult: BTreeMap<GroupElement, u64>,
}

/// JSON entry of a sequence: `{coords, mult}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub coords: Vec<u64>,
    pub mult: u64,
}

impl Sequence {
    pub fn empty(group: &Group) -> Self {
        Sequence {
            group: group.clone(),
            mult: BTreeMap::new(),
        }
    }

    pub fn from_pairs<'a, I>(group: &Group, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a GroupElement, u64)>,
    {
        let mut s = Sequence::empty(group);
        for (g, m) in pairs {
            group.check(g)?;
            if m > 0 {
                *s.mult.entry(g.clone()).or_insert(0) += m;
            }
        }
        Ok(s)
    }

    pub fn from_elements<'a, I>(group: &Group, elems: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        Sequence::from_pairs(group, elems.into_iter().map(|g| (g, 1)))
    }

    /// `∏ ground[i]^exps[i]`.
    pub fn from_exponents(group: &Group, ground: &[GroupElement], exps: &[u32]) -> Result<Self> {
        if ground.len() != exps.len() {
            return Err(Error::Domain(format!(
                "exponent vector of length {} over a ground set of size {}",
                exps.len(),
                ground.len()
            )));
        }
        Sequence::from_pairs(group, ground.iter().zip(exps.iter().map(|&e| e as u64)))
    }

    pub fn from_entries(group: &Group, entries: &[SequenceEntry]) -> Result<Self> {
        let elems = entries
            .iter()
            .map(|e| group.element(&e.coords).map(|g| (g, e.mult)))
            .collect::<Result<Vec<_>>>()?;
        Sequence::from_pairs(group, elems.iter().map(|(g, m)| (g, *m)))
    }

    pub fn entries(&self) -> Vec<SequenceEntry> {
        self.mult
            .iter()
            .map(|(g, &m)| SequenceEntry {
                coords: g.coords().to_vec(),
                mult: m,
            })
            .collect()
    }

    /// Multiplicities of `ground` elements, or `None` if the support leaves it.
    pub fn exponents_over(&self, ground: &[GroupElement]) -> Option<Vec<u32>> {
        if self.mult.keys().any(|g| !ground.contains(g)) {
            return None;
        }
        Some(ground.iter().map(|g| self.multiplicity(g) as u32).collect())
    }

    /// Parses `"[(1,0)^2, (0,3)]"`; a missing `^m` means multiplicity 1.
    pub fn parse(group: &Group, s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::parse("sequence", s, "expected \"[(..)^m, ...]\""))?;
        let mut pairs = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let close = rest
                .find(')')
                .ok_or_else(|| Error::parse("sequence", s, "unclosed element"))?;
            let elem: GroupElement = rest[..=close].trim().parse()?;
            rest = rest[close + 1..].trim_start();
            let mut m = 1u64;
            if let Some(r) = rest.strip_prefix('^') {
                let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                m = r[..end]
                    .parse()
                    .map_err(|e: std::num::ParseIntError| Error::parse("sequence", s, e.to_string()))?;
                rest = r[end..].trim_start();
            }
            pairs.push((elem, m));
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
                if rest.is_empty() {
                    return Err(Error::parse("sequence", s, "trailing comma"));
                }
            } else if !rest.is_empty() {
                return Err(Error::parse("sequence", s, format!("unexpected {rest:?}")));
            }
        }
        for (g, _) in &pairs {
            group.check(g)?;
        }
        Sequence::from_pairs(group, pairs.iter().map(|(g, m)| (g, *m)))
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// `|S|`.
    pub fn len(&self) -> u64 {
        self.mult.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.mult.keys().cloned().collect()
    }

    pub fn multiplicity(&self, g: &GroupElement) -> u64 {
        self.mult.get(g).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, u64)> {
        self.mult.iter().map(|(g, &m)| (g, m))
    }

    fn same_group(&self, other: &Sequence) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                left: self.group.to_string(),
                right: other.group.to_string(),
            })
        }
    }

    pub fn concat(&self, other: &Sequence) -> Result<Sequence> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (g, m) in other.iter() {
            *out.mult.entry(g.clone()).or_insert(0) += m;
        }
        Ok(out)
    }

    /// `S · C⁻¹`; fails unless `C` is a subsequence of `S`.
    pub fn remove(&self, c: &Sequence) -> Result<Sequence> {
        self.same_group(c)?;
        let mut out = self.clone();
        for (g, m) in c.iter() {
            match out.mult.get_mut(g) {
                Some(have) if *have >= m => {
                    *have -= m;
                    if *have == 0 {
                        out.mult.remove(g);
                    }
                }
                _ => return Err(Error::Underflow(format!("{g}^{m}"))),
            }
        }
        Ok(out)
    }

    pub fn is_subsequence_of(&self, other: &Sequence) -> Result<bool> {
        self.same_group(other)?;
        Ok(self.iter().all(|(g, m)| other.multiplicity(g) >= m))
    }

    /// `σ(S)`, the plain sum.
    pub fn sigma(&self) -> GroupElement {
        let g = &self.group;
        let idx = self
            .iter()
            .fold(0usize, |acc, (e, m)| g.add_idx(acc, g.scale_idx(m, g.index_of(e))));
        g.element_at(idx)
    }

    /// `σ±(S)`, the set of all sums `Σ ε_i g_i` with `ε_i = ±1`.
    pub fn sigma_pm(&self) -> ElementSet {
        let g = &self.group;
        let mut set = ElementSet::singleton(g.order(), 0);
        for (e, m) in self.iter() {
            let x = g.index_of(e);
            let plus = g.translation(x);
            let minus = g.translation(g.neg_idx(x));
            for _ in 0..m {
                set = pm_step(&set, &plus, &minus);
            }
        }
        set
    }

    /// `0 ∈ σ±(S)`; the empty sequence qualifies.
    pub fn is_pm_zero_sum(&self) -> bool {
        self.sigma_pm().contains(0)
    }

    pub fn is_zero_sum(&self) -> bool {
        self.group.index_of(&self.sigma()) == 0
    }

    /// `C |_{B±} B`: `C` is a subsequence and both `C` and `B·C⁻¹` are
    /// plus-minus weighted zero-sum sequences.
    pub fn divides_in_bpm(c: &Sequence, b: &Sequence) -> Result<bool> {
        if !c.is_subsequence_of(b)? {
            return Ok(false);
        }
        Ok(c.is_pm_zero_sum() && b.remove(c)?.is_pm_zero_sum())
    }
}

/// One step of the σ± recurrence: `T ↦ (T + g) ∪ (T − g)`.
pub(crate) fn pm_step(set: &ElementSet, plus: &[u32], minus: &[u32]) -> ElementSet {
    let mut out = ElementSet::empty(set.universe());
    for x in set.iter() {
        out.insert(plus[x] as usize);
        out.insert(minus[x] as usize);
    }
    out
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (g, m)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if m == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{m}")?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.group)
    }
}

/// Renders a set of elements as a subset literal `"[(1),(3)]"`.
pub fn format_subset(elems: &[GroupElement]) -> String {
    let parts: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Parses a subset literal; multiplicities are rejected and duplicates merged.
pub fn parse_subset(group: &Group, s: &str) -> Result<Vec<GroupElement>> {
    let seq = Sequence::parse(group, s)?;
    if seq.iter().any(|(_, m)| m > 1) {
        return Err(Error::parse("subset", s, "a subset cannot carry multiplicities"));
    }
    Ok(seq.support())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grp(s: &str) -> Group {
        s.parse().unwrap()
    }

    fn seq(g: &Group, s: &str) -> Sequence {
        Sequence::parse(g, s).unwrap()
    }

    fn idx_set(g: &Group, xs: &[&[u64]]) -> ElementSet {
        let mut s = ElementSet::empty(g.order());
        for x in xs {
            s.insert(g.index_of(&GroupElement::new(x.to_vec())));
        }
        s
    }

    #[test]
    fn sums() {
        let c3 = grp("C3");
        let c8 = grp("C8");
        assert_eq!(Sequence::empty(&c3).sigma(), c3.zero());
        assert_eq!(seq(&c3, "[(1)^3]").sigma(), c3.zero());
        assert_eq!(seq(&c8, "[(1),(3)]").sigma(), GroupElement::new(vec![4]));
    }

    #[test]
    fn signed_sums() {
        let c5 = grp("C5");
        let c8 = grp("C8");
        assert_eq!(seq(&c5, "[(2)]").sigma_pm(), idx_set(&c5, &[&[2], &[3]]));
        assert_eq!(seq(&c5, "[(1)^2]").sigma_pm(), idx_set(&c5, &[&[0], &[2], &[3]]));
        assert_eq!(
            seq(&c8, "[(1),(3)]").sigma_pm(),
            idx_set(&c8, &[&[4], &[2], &[6]])
        );
        assert_eq!(Sequence::empty(&c8).sigma_pm(), idx_set(&c8, &[&[0]]));
    }

    #[test]
    fn pm_zero_sums() {
        let c8 = grp("C8");
        assert!(seq(&c8, "[(1)^2]").is_pm_zero_sum());
        assert!(!seq(&c8, "[(5)]").is_pm_zero_sum());
        assert!(!seq(&c8, "[(1),(3)]").is_pm_zero_sum());
        assert!(seq(&c8, "[(1)^3,(3)]").is_pm_zero_sum());
        assert!(Sequence::empty(&c8).is_pm_zero_sum());
    }

    #[test]
    fn divisibility_in_bpm() {
        let c4 = grp("C4");
        let c8 = grp("C8");
        let b = seq(&c4, "[(1)^4]");
        assert!(Sequence::divides_in_bpm(&Sequence::empty(&c4), &b).unwrap());
        assert!(Sequence::divides_in_bpm(&seq(&c4, "[(1)^2]"), &b).unwrap());
        assert!(!Sequence::divides_in_bpm(&seq(&c8, "[(1)^2]"), &seq(&c8, "[(1)^3,(3)]")).unwrap());
        assert!(Sequence::divides_in_bpm(&seq(&c4, "[(1)^2]"), &seq(&c8, "[(1)^2]")).is_err());
    }

    #[test]
    fn multiset_ops() {
        let c8 = grp("C8");
        assert_eq!(
            seq(&c8, "[(1)^2]").concat(&seq(&c8, "[(1)]")).unwrap(),
            seq(&c8, "[(1)^3]")
        );
        assert_eq!(
            seq(&c8, "[(1)^3,(3)]").remove(&seq(&c8, "[(1),(3)]")).unwrap(),
            seq(&c8, "[(1)^2]")
        );
        assert_eq!(seq(&c8, "[(1)^2,(3)^3]").len(), 5);
        assert_eq!(seq(&c8, "[(1)^2,(3)^3]").support().len(), 2);
        assert!(matches!(
            seq(&c8, "[(1)]").remove(&seq(&c8, "[(1)^2]")),
            Err(Error::Underflow(_))
        ));
    }

    #[test]
    fn literals() {
        let g = grp("C2xC4");
        let s = seq(&g, "[(1,0)^2, (0,3)^1]");
        assert_eq!(s.to_string(), "[(0,3),(1,0)^2]");
        assert_eq!(Sequence::parse(&g, &s.to_string()).unwrap(), s);
        assert!(Sequence::parse(&g, "[(1,7)]").is_err());
        assert!(Sequence::parse(&g, "[(1,0),]").is_err());
        assert!(Sequence::parse(&g, "(1,0)").is_err());
        let json = serde_json::to_string(&s.entries()).unwrap();
        assert_eq!(json, r#"[{"coords":[0,3],"mult":1},{"coords":[1,0],"mult":2}]"#);
        let back: Vec<SequenceEntry> = serde_json::from_str(&json).unwrap();
        assert_eq!(Sequence::from_entries(&g, &back).unwrap(), s);
        assert!(parse_subset(&g, "[(1,0)^2]").is_err());
        assert_eq!(format_subset(&parse_subset(&g, "[(1,0),(0,3)]").unwrap()), "[(0,3),(1,0)]");
    }

    #[test]
    fn single_support_parity() {
        let c9 = grp("C9");
        let g = 2u64;
        for len in 0..12u64 {
            let s = Sequence::from_pairs(&c9, [(&GroupElement::new(vec![g]), len)]).unwrap();
            let mut expected = ElementSet::empty(9);
            for k in 0..=len {
                let v = (len as i64 - 2 * k as i64) * g as i64;
                expected.insert(v.rem_euclid(9) as usize);
            }
            assert_eq!(s.sigma_pm(), expected, "len {len}");
        }
    }

    fn arb_sequence() -> impl Strategy<Value = (Group, Sequence, Sequence)> {
        let groups = prop_oneof![
            Just("C5"),
            Just("C8"),
            Just("C2xC4"),
            Just("C3xC3"),
            Just("C2xC2xC2"),
            Just("C12")
        ];
        groups.prop_flat_map(|name| {
            let g: Group = name.parse().unwrap();
            let n = g.order();
            let part = prop::collection::vec((0..n, 1u64..4), 0..5);
            (Just(g), part.clone(), part).prop_map(|(g, a, b)| {
                let mk = |v: &Vec<(usize, u64)>| {
                    let elems: Vec<(GroupElement, u64)> =
                        v.iter().map(|&(i, m)| (g.element_at(i), m)).collect();
                    Sequence::from_pairs(&g, elems.iter().map(|(e, m)| (e, *m))).unwrap()
                };
                let (s, t) = (mk(&a), mk(&b));
                (g, s, t)
            })
        })
    }

    proptest! {
        #[test]
        fn sigma_pm_laws((g, s, t) in arb_sequence()) {
            let pm = s.sigma_pm();
            prop_assert_eq!(pm.negated(&g), pm.clone());
            prop_assert!(pm.contains(g.index_of(&s.sigma())));
            let st = s.concat(&t).unwrap();
            prop_assert_eq!(st.sigma_pm(), pm.sumset(&t.sigma_pm(), &g));
            if s.is_zero_sum() {
                prop_assert!(s.is_pm_zero_sum());
            }
        }
    }
}
