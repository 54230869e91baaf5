//! Relations between atoms: the integer kernel of the atom matrix, the
//! minimal distance, factorizations, sets of lengths and local elasticities.
//!
//! For a kernel vector `v` of the atom matrix `M`, the positive and negative
//! parts `v⁺`, `v⁻` are two factorizations of the same element whose lengths
//! differ by `Σv`, and every pair of factorizations of one element arises
//! this way. Hence `min Δ = gcd Δ` is the positive generator of the image of
//! `ker M` under the coordinate-sum functional. That image is read off after
//! column-reducing `M` with an extra all-ones row: the columns whose `M`-part
//! vanishes carry the image of a kernel basis in that row.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::atoms::{enumerate_atoms, AtomSet};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::limits::Limits;
use crate::sequence::Sequence;

/// Atom exponent vectors as the columns of a matrix with one row per ground
/// element. The atom 0, if present, is left out: it is prime and takes part
/// in no relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomMatrix {
    rows: usize,
    columns: Vec<Vec<u32>>,
}

impl AtomMatrix {
    pub fn new(rows: usize, columns: Vec<Vec<u32>>) -> Result<Self> {
        for c in &columns {
            if c.len() != rows {
                return Err(Error::Domain(format!(
                    "column of length {} in a matrix with {rows} rows",
                    c.len()
                )));
            }
            if c.iter().all(|&x| x == 0) {
                return Err(Error::Domain("atom matrix column is zero".into()));
            }
        }
        Ok(AtomMatrix { rows, columns })
    }

    pub fn from_atoms(atoms: &AtomSet) -> Self {
        AtomMatrix {
            rows: atoms.ground().len(),
            columns: atoms.atoms().to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    /// `M · v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rows];
        for (col, x) in self.columns.iter().zip(v) {
            for (o, &m) in out.iter_mut().zip(col) {
                *o += x * m;
            }
        }
        out
    }
}

/// A lattice basis of `{v ∈ ℤⁿ : Mv = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    pub vectors: Vec<Vec<BigInt>>,
}

impl KernelBasis {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Positive generator of `{Σv : v ∈ ker}`, or `None` when every kernel
    /// vector has coordinate sum 0.
    pub fn length_gcd(&self) -> Option<u64> {
        let g = self
            .vectors
            .iter()
            .fold(BigInt::zero(), |acc, v| acc.gcd(&v.iter().sum::<BigInt>()));
        if Zero::is_zero(&g) {
            None
        } else {
            Some(g.to_u64().expect("length gcd is bounded by atom lengths"))
        }
    }
}

trait Entry: Clone {
    fn from_u32(x: u32) -> Self;
    fn is_nil(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    /// `self − q·b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    /// truncating quotient
    fn quot(&self, b: &Self) -> Option<Self>;
}

impl Entry for i64 {
    fn from_u32(x: u32) -> Self {
        x as i64
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn quot(&self, b: &Self) -> Option<Self> {
        self.checked_div(*b)
    }
}

impl Entry for BigInt {
    fn from_u32(x: u32) -> Self {
        BigInt::from(x)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn quot(&self, b: &Self) -> Option<Self> {
        Some(self / b)
    }
}

/// Unimodular column operations clearing rows `0..pivot_rows` into column
/// echelon form; all rows are transformed alongside. Returns the rank of the
/// pivot block, or `None` on overflow.
fn column_reduce<T: Entry>(cols: &mut [Vec<T>], pivot_rows: usize) -> Option<usize> {
    let mut p = 0;
    for r in 0..pivot_rows {
        loop {
            let best = (p..cols.len())
                .filter(|&c| !cols[c][r].is_nil())
                .min_by(|&a, &b| {
                    if cols[a][r].abs_lt(&cols[b][r]) {
                        std::cmp::Ordering::Less
                    } else if cols[b][r].abs_lt(&cols[a][r]) {
                        std::cmp::Ordering::Greater
                    } else {
                        a.cmp(&b)
                    }
                });
            let Some(best) = best else { break };
            let mut done = true;
            for c in p..cols.len() {
                if c == best || cols[c][r].is_nil() {
                    continue;
                }
                let q = cols[c][r].quot(&cols[best][r])?;
                let (lo, hi) = if c < best { (c, best) } else { (best, c) };
                let (left, right) = cols.split_at_mut(hi);
                let (target, pivot) = if c < best {
                    (&mut left[lo], &right[0])
                } else {
                    (&mut right[0], &left[lo])
                };
                for (t, b) in target.iter_mut().zip(pivot.iter()) {
                    *t = t.sub_mul(&q, b)?;
                }
                if !target[r].is_nil() {
                    done = false;
                }
            }
            if done {
                cols.swap(p, best);
                p += 1;
                break;
            }
        }
    }
    Some(p)
}

fn kernel_with<T: Entry>(m: &AtomMatrix) -> Option<(usize, Vec<Vec<T>>)> {
    let n = m.columns.len();
    let mut cols: Vec<Vec<T>> = m
        .columns
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let mut col: Vec<T> = c.iter().map(|&x| T::from_u32(x)).collect();
            col.extend((0..n).map(|i| T::from_u32((i == j) as u32)));
            col
        })
        .collect();
    let rank = column_reduce(&mut cols, m.rows)?;
    Some((rank, cols))
}

/// A basis of the integer kernel of `m`, by fraction-free column
/// elimination on `[M; I]`.
pub fn integer_kernel_basis(m: &AtomMatrix) -> KernelBasis {
    let rows = m.rows;
    let vectors = match kernel_with::<i64>(m) {
        Some((rank, cols)) => cols[rank..]
            .iter()
            .map(|c| c[rows..].iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
        None => {
            let (rank, cols) = kernel_with::<BigInt>(m).expect("big integers do not overflow");
            cols[rank..].iter().map(|c| c[rows..].to_vec()).collect()
        }
    };
    KernelBasis { vectors }
}

fn length_gcd_with<T: Entry>(m: &AtomMatrix) -> Option<Vec<T>> {
    let mut cols: Vec<Vec<T>> = m
        .columns
        .iter()
        .map(|c| {
            let mut col: Vec<T> = c.iter().map(|&x| T::from_u32(x)).collect();
            col.push(T::from_u32(1));
            col
        })
        .collect();
    let rank = column_reduce(&mut cols, m.rows)?;
    Some(cols[rank..].iter().map(|c| c[m.rows].clone()).collect())
}

/// `min Δ` of the monoid whose atoms are the columns of `m`; `None` when it
/// is half-factorial.
pub fn min_delta_of_matrix(m: &AtomMatrix) -> Option<u64> {
    let g = match length_gcd_with::<i64>(m) {
        Some(v) => v.into_iter().fold(0u64, |acc, x| acc.gcd(&x.unsigned_abs())),
        None => {
            let v = length_gcd_with::<BigInt>(m).expect("big integers do not overflow");
            v.into_iter()
                .fold(BigInt::zero(), |acc, x| acc.gcd(&x))
                .to_u64()
                .expect("length gcd is bounded by atom lengths")
        }
    };
    (g != 0).then_some(g)
}

/// `min Δ(B±(G₀))` from an enumerated atom set.
pub fn min_delta_of(atoms: &AtomSet) -> Option<u64> {
    min_delta_of_matrix(&AtomMatrix::from_atoms(atoms))
}

/// `min Δ(B±(G₀))`; `None` when `Δ` is empty.
pub fn min_delta(group: &Group, g0: &[GroupElement], limits: &Limits) -> Result<Option<u64>> {
    Ok(min_delta_of(&enumerate_atoms(group, g0, limits)?))
}

/// `true` iff `B±(G₀)` is half-factorial.
pub fn is_half_factorial(group: &Group, g0: &[GroupElement], limits: &Limits) -> Result<bool> {
    Ok(min_delta(group, g0, limits)?.is_none())
}

/// All factorizations of one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationSet {
    pub element: Sequence,
    /// Each factorization as `(atom index, count)` pairs by increasing index.
    /// Indices refer to [`AtomSet::atoms`]; the atom 0, when used, has index
    /// `atoms.len()`.
    pub factorizations: Vec<Vec<(usize, u32)>>,
    pub lengths: BTreeSet<u64>,
    pub delta: BTreeSet<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationSetRecord {
    pub element: String,
    pub factorizations: Vec<Vec<String>>,
    pub lengths: Vec<u64>,
    pub delta: Vec<u64>,
}

impl FactorizationSet {
    pub fn to_record(&self) -> FactorizationSetRecord {
        FactorizationSetRecord {
            element: self.element.to_string(),
            factorizations: self
                .factorizations
                .iter()
                .map(|z| z.iter().map(|(i, c)| format!("{i}^{c}")).collect())
                .collect(),
            lengths: self.lengths.iter().copied().collect(),
            delta: self.delta.iter().copied().collect(),
        }
    }
}

impl fmt::Display for FactorizationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "element {}", self.element)?;
        for z in &self.factorizations {
            let parts: Vec<String> = z.iter().map(|(i, c)| format!("A{i}^{c}")).collect();
            writeln!(f, "  {}", parts.join(" * "))?;
        }
        writeln!(f, "L = {}", format_int_set(&self.lengths))?;
        write!(f, "Δ = {}", format_int_set(&self.delta))
    }
}

pub fn format_int_set(s: &BTreeSet<u64>) -> String {
    let items: Vec<String> = s.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

/// Successive differences of a set of integers.
pub fn delta_of_set(lengths: &BTreeSet<u64>) -> BTreeSet<u64> {
    lengths
        .iter()
        .zip(lengths.iter().skip(1))
        .map(|(a, b)| b - a)
        .collect()
}

/// Length-set and factorization machinery over one atom set, with
/// residual-vector memo tables that are flushed when they reach
/// `limits.memo_cap` entries.
pub struct Factorizer<'a> {
    atoms: &'a AtomSet,
    limits: &'a Limits,
    /// atoms containing ground element `i`, by index
    covering: Vec<Vec<usize>>,
    lengths_memo: HashMap<Vec<u32>, Vec<u64>>,
    max_memo: HashMap<Vec<u32>, Option<u64>>,
}

impl<'a> Factorizer<'a> {
    pub fn new(atoms: &'a AtomSet, limits: &'a Limits) -> Self {
        let k = atoms.ground().len();
        let covering = (0..k)
            .map(|i| (0..atoms.len()).filter(|&j| atoms.atoms()[j][i] > 0).collect())
            .collect();
        Factorizer {
            atoms,
            limits,
            covering,
            lengths_memo: HashMap::new(),
            max_memo: HashMap::new(),
        }
    }

    /// Splits `b` into its nonzero exponent vector and the number of zeros,
    /// checking that it lies in the monoid.
    fn residual(&self, b: &Sequence) -> Result<(Vec<u32>, u64)> {
        let exps = self.atoms.exponents_of(b)?;
        if !b.is_pm_zero_sum() {
            return Err(Error::Domain(format!(
                "{b} is not a plus-minus weighted zero-sum sequence"
            )));
        }
        Ok((exps, b.multiplicity(&self.atoms.group().zero())))
    }

    fn fits(a: &[u32], r: &[u32]) -> bool {
        a.iter().zip(r).all(|(x, y)| x <= y)
    }

    fn minus(r: &[u32], a: &[u32]) -> Vec<u32> {
        r.iter().zip(a).map(|(x, y)| x - y).collect()
    }

    /// Bitset of factorization lengths of the residual `r`; empty when `r`
    /// has no factorization.
    fn lengths_of(&mut self, r: &[u32]) -> Vec<u64> {
        let Some(first) = r.iter().position(|&x| x > 0) else {
            return vec![1];
        };
        if let Some(hit) = self.lengths_memo.get(r) {
            return hit.clone();
        }
        let mut acc: Vec<u64> = Vec::new();
        for idx in 0..self.covering[first].len() {
            let j = self.covering[first][idx];
            let a = &self.atoms.atoms()[j];
            if !Self::fits(a, r) {
                continue;
            }
            let rest = Self::minus(r, a);
            let sub = self.lengths_of(&rest);
            // shift by one: every length grows by the chosen atom
            let mut shifted = vec![0u64; sub.len() + 1];
            for (w, &bits) in sub.iter().enumerate() {
                shifted[w] |= bits << 1;
                shifted[w + 1] |= bits >> 63;
            }
            if acc.len() < shifted.len() {
                acc.resize(shifted.len(), 0);
            }
            for (x, y) in acc.iter_mut().zip(&shifted) {
                *x |= y;
            }
        }
        while acc.last() == Some(&0) {
            acc.pop();
        }
        if self.lengths_memo.len() >= self.limits.memo_cap {
            self.lengths_memo.clear();
        }
        self.lengths_memo.insert(r.to_vec(), acc.clone());
        acc
    }

    fn max_length_of(&mut self, r: &[u32]) -> Option<u64> {
        let Some(first) = r.iter().position(|&x| x > 0) else {
            return Some(0);
        };
        if let Some(&hit) = self.max_memo.get(r) {
            return hit;
        }
        let mut best = None;
        for idx in 0..self.covering[first].len() {
            let j = self.covering[first][idx];
            let a = &self.atoms.atoms()[j];
            if Self::fits(a, r) {
                if let Some(m) = self.max_length_of(&Self::minus(r, a)) {
                    best = best.max(Some(m + 1));
                }
            }
        }
        if self.max_memo.len() >= self.limits.memo_cap {
            self.max_memo.clear();
        }
        self.max_memo.insert(r.to_vec(), best);
        best
    }

    /// `L(b)`.
    pub fn length_set(&mut self, b: &Sequence) -> Result<BTreeSet<u64>> {
        let (r, zeros) = self.residual(b)?;
        let bits = self.lengths_of(&r);
        let mut out = BTreeSet::new();
        for (w, &word) in bits.iter().enumerate() {
            for bit in 0..64 {
                if word >> bit & 1 == 1 {
                    out.insert((w * 64 + bit) as u64 + zeros);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Domain(format!("{b} has no factorization")));
        }
        Ok(out)
    }

    /// `max L` of the product of atoms with the given multiplicities.
    pub fn max_length_of_product(&mut self, counts: &[(usize, u32)]) -> u64 {
        let k = self.atoms.ground().len();
        let mut r = vec![0u32; k];
        for &(j, c) in counts {
            for (x, a) in r.iter_mut().zip(&self.atoms.atoms()[j]) {
                *x += a * c;
            }
        }
        self.max_length_of(&r).expect("a product of atoms factors")
    }

    /// Every factorization of `b`.
    pub fn factorizations(&mut self, b: &Sequence) -> Result<FactorizationSet> {
        let (r, zeros) = self.residual(b)?;
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.list(&r, self.atoms.len(), &mut current, &mut out)?;
        if out.is_empty() && !(r.iter().all(|&x| x == 0)) {
            return Err(Error::Domain(format!("{b} has no factorization")));
        }
        if out.is_empty() {
            out.push(Vec::new());
        }
        let zero_index = self.atoms.len();
        let mut lengths = BTreeSet::new();
        let mut facts: Vec<Vec<(usize, u32)>> = out
            .into_iter()
            .map(|z: Vec<usize>| {
                let mut counts: Vec<(usize, u32)> = Vec::new();
                for j in z.into_iter().rev() {
                    match counts.last_mut() {
                        Some((i, c)) if *i == j => *c += 1,
                        _ => counts.push((j, 1)),
                    }
                }
                if zeros > 0 {
                    counts.push((zero_index, zeros as u32));
                }
                lengths.insert(counts.iter().map(|&(_, c)| c as u64).sum());
                counts
            })
            .collect();
        facts.sort();
        let delta = delta_of_set(&lengths);
        Ok(FactorizationSet {
            element: b.clone(),
            factorizations: facts,
            lengths,
            delta,
        })
    }

    /// Factorizations of `r` using atoms of index `< below`, in
    /// non-increasing index order.
    fn list(
        &mut self,
        r: &[u32],
        below: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if r.iter().all(|&x| x == 0) {
            if !current.is_empty() {
                if out.len() >= self.limits.factorization_cap {
                    return Err(Error::Resource {
                        what: "number of factorizations".into(),
                        limit: self.limits.factorization_cap as u64,
                        hint: Some("raise factorization_cap".into()),
                    });
                }
                out.push(current.clone());
            }
            return Ok(());
        }
        for j in (0..below).rev() {
            let a = &self.atoms.atoms()[j];
            if !Self::fits(a, r) {
                continue;
            }
            let rest = Self::minus(r, a);
            if self.lengths_of(&rest).is_empty() {
                continue;
            }
            current.push(j);
            self.list(&rest, j + 1, current, out)?;
            current.pop();
        }
        Ok(())
    }
}

/// All factorizations of `b` over the given atoms.
pub fn factorizations(b: &Sequence, atoms: &AtomSet, limits: &Limits) -> Result<FactorizationSet> {
    Factorizer::new(atoms, limits).factorizations(b)
}

/// `L(b)`.
pub fn length_set(b: &Sequence, atoms: &AtomSet, limits: &Limits) -> Result<BTreeSet<u64>> {
    Factorizer::new(atoms, limits).length_set(b)
}

/// `Δ(L(b))`.
pub fn delta_of_element(b: &Sequence, atoms: &AtomSet, limits: &Limits) -> Result<BTreeSet<u64>> {
    Ok(delta_of_set(&length_set(b, atoms, limits)?))
}

/// `ρ_k` from an enumerated atom set: the largest `max L` over products of
/// exactly `k` atoms.
pub fn rho_k_of(atoms: &AtomSet, k: u32, limits: &Limits) -> Result<u64> {
    if k == 0 {
        return Err(Error::Domain("ρ_k needs k ≥ 1".into()));
    }
    if k > limits.rho_cap {
        return Err(Error::Resource {
            what: format!("ρ_k for k = {k}"),
            limit: limits.rho_cap as u64,
            hint: Some("raise rho_cap".into()),
        });
    }
    if atoms.is_empty() {
        // only the prime 0 (or nothing) is left
        return Ok(if atoms.includes_zero() { k as u64 } else { 0 });
    }
    let mut f = Factorizer::new(atoms, limits);
    let mut best = 0;
    let mut choice = vec![0usize; k as usize];
    loop {
        let mut counts: Vec<(usize, u32)> = Vec::new();
        for &j in &choice {
            match counts.last_mut() {
                Some((i, c)) if *i == j => *c += 1,
                _ => counts.push((j, 1)),
            }
        }
        best = best.max(f.max_length_of_product(&counts));
        // next non-decreasing tuple
        let n = atoms.len();
        let Some(pos) = choice.iter().rposition(|&j| j + 1 < n) else {
            break;
        };
        let v = choice[pos] + 1;
        for x in &mut choice[pos..] {
            *x = v;
        }
    }
    // products involving the prime 0 never win, as ρ_(j+1) ≥ ρ_j + 1
    Ok(best)
}

/// `ρ_k(B±(G₀))`.
pub fn rho_k(group: &Group, g0: &[GroupElement], k: u32, limits: &Limits) -> Result<u64> {
    if k > limits.rho_cap {
        return Err(Error::Resource {
            what: format!("ρ_k for k = {k}"),
            limit: limits.rho_cap as u64,
            hint: Some("raise rho_cap".into()),
        });
    }
    rho_k_of(&enumerate_atoms(group, g0, limits)?, k, limits)
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

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn kernel_examples() {
        let m = AtomMatrix::new(1, vec![vec![2], vec![5]]).unwrap();
        let k = integer_kernel_basis(&m);
        assert_eq!(k.rank(), 1);
        let v = &k.vectors[0];
        assert!(*v == big(&[5, -2]) || *v == big(&[-5, 2]));
        assert_eq!(k.length_gcd(), Some(3));

        let c8 = grp("C8");
        let atoms = enumerate_atoms(&c8, &[el(&c8, &[1]), el(&c8, &[3])], &Limits::default()).unwrap();
        let m = AtomMatrix::from_atoms(&atoms);
        let k = integer_kernel_basis(&m);
        assert_eq!(k.rank(), 2);
        for v in &k.vectors {
            assert!(m.apply(v).iter().all(Zero::is_zero));
        }
        assert_eq!(k.length_gcd(), Some(2));
        assert_eq!(min_delta_of_matrix(&m), Some(2));

        let injective = AtomMatrix::new(2, vec![vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(integer_kernel_basis(&injective).rank(), 0);
        assert_eq!(min_delta_of_matrix(&injective), None);
        assert!(AtomMatrix::new(1, vec![vec![0]]).is_err());
    }

    #[test]
    fn kernel_spans_known_relations() {
        let c8 = grp("C8");
        let atoms = enumerate_atoms(&c8, &[el(&c8, &[1]), el(&c8, &[3])], &Limits::default()).unwrap();
        let m = AtomMatrix::from_atoms(&atoms);
        // columns: e², (3e)², e³(3e), e(3e)³
        for rel in [[3, 1, -2, 0], [1, 3, 0, -2], [2, 2, -1, -1]] {
            assert!(m.apply(&big(&rel)).iter().all(Zero::is_zero), "{rel:?}");
        }
        assert!(!m.apply(&big(&[1, 1, -1, -1])).iter().all(Zero::is_zero));
    }

    #[test]
    fn big_integer_path_matches() {
        let m = AtomMatrix::new(
            2,
            vec![vec![7, 3], vec![11, 5], vec![13, 2], vec![2, 17], vec![1, 1]],
        )
        .unwrap();
        let (rank, cols) = kernel_with::<BigInt>(&m).unwrap();
        let via_big: Vec<Vec<BigInt>> = cols[rank..].iter().map(|c| c[2..].to_vec()).collect();
        let small = integer_kernel_basis(&m);
        assert_eq!(small.vectors, via_big);
        let g = length_gcd_with::<BigInt>(&m)
            .unwrap()
            .into_iter()
            .fold(BigInt::zero(), |a, x| a.gcd(&x));
        assert_eq!(g.to_u64(), min_delta_of_matrix(&m));
    }

    #[test]
    fn overflow_escalates() {
        let huge = u32::MAX;
        let m = AtomMatrix::new(
            3,
            vec![
                vec![huge, huge - 1, 3],
                vec![huge - 2, huge, 7],
                vec![5, huge - 3, huge],
                vec![1, 2, 3],
                vec![huge, 1, 1],
            ],
        )
        .unwrap();
        let k = integer_kernel_basis(&m);
        assert_eq!(k.rank(), 2);
        for v in &k.vectors {
            assert!(m.apply(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn golden_min_delta() {
        let lim = Limits::generous();
        let c5 = grp("C5");
        assert_eq!(min_delta(&c5, &[el(&c5, &[1])], &lim).unwrap(), Some(3));
        let c8 = grp("C8");
        assert_eq!(min_delta(&c8, &[el(&c8, &[1]), el(&c8, &[3])], &lim).unwrap(), Some(2));
        let c17 = grp("C17");
        assert_eq!(min_delta(&c17, &[el(&c17, &[1]), el(&c17, &[4])], &lim).unwrap(), Some(3));
        let g = grp("C2^4");
        let coset: Vec<GroupElement> = g.elements().filter(|e| e.coords()[0] == 1).collect();
        assert_eq!(min_delta(&g, &coset, &lim).unwrap(), Some(1));
    }

    #[test]
    fn half_factoriality() {
        let lim = Limits::default();
        let g = grp("C2^3");
        for x in g.elements().skip(1) {
            assert!(is_half_factorial(&g, &[x], &lim).unwrap());
        }
        let basis = [el(&g, &[1, 0, 0]), el(&g, &[0, 1, 0]), el(&g, &[0, 0, 1])];
        assert!(is_half_factorial(&g, &basis, &lim).unwrap());
        let dependent = [el(&g, &[0, 0, 1]), el(&g, &[0, 1, 0]), el(&g, &[0, 1, 1])];
        assert!(!is_half_factorial(&g, &dependent, &lim).unwrap());
        let c2 = grp("C2");
        let all: Vec<GroupElement> = c2.elements().collect();
        assert!(is_half_factorial(&c2, &all, &lim).unwrap());
        let c5 = grp("C5");
        assert!(!is_half_factorial(&c5, &[el(&c5, &[1])], &lim).unwrap());
        let c3 = grp("C3");
        let all: Vec<GroupElement> = c3.elements().collect();
        assert!(!is_half_factorial(&c3, &all, &lim).unwrap());
    }

    #[test]
    fn lengths_and_factorizations() {
        let lim = Limits::default();
        let c5 = grp("C5");
        let atoms = enumerate_atoms(&c5, &[el(&c5, &[1])], &lim).unwrap();
        let b = Sequence::parse(&c5, "[(1)^10]").unwrap();
        // 10 = 2a + 5b only for (a, b) = (5, 0), (0, 2)
        assert_eq!(length_set(&b, &atoms, &lim).unwrap(), set(&[2, 5]));
        let f = factorizations(&b, &atoms, &lim).unwrap();
        assert_eq!(f.factorizations.len(), 2);
        assert_eq!(f.delta, set(&[3]));
        let rec = serde_json::to_value(f.to_record()).unwrap();
        assert_eq!(rec["element"], "[(1)^10]");
        assert_eq!(rec["lengths"], serde_json::json!([2, 5]));
        assert_eq!(rec["factorizations"][0], serde_json::json!(["0^5"]));

        let empty = Sequence::empty(&c5);
        assert_eq!(length_set(&empty, &atoms, &lim).unwrap(), set(&[0]));
        let odd = Sequence::parse(&c5, "[(1)^3]").unwrap();
        assert!(matches!(length_set(&odd, &atoms, &lim), Err(Error::Domain(_))));

        let with_zero = enumerate_atoms(&c5, &[el(&c5, &[1]), c5.zero()], &lim).unwrap();
        let b = Sequence::parse(&c5, "[(0)^2,(1)^5]").unwrap();
        let f = factorizations(&b, &with_zero, &lim).unwrap();
        assert_eq!(f.lengths, set(&[3]));
        assert_eq!(f.factorizations, vec![vec![(1, 1), (2, 2)]]);
    }

    #[test]
    fn lem_even_and_prop_delta_star_elements() {
        let lim = Limits::default();
        let g = grp("C4xC4");
        let g0 = [el(&g, &[2, 2]), el(&g, &[1, 0]), el(&g, &[0, 1])];
        let atoms = enumerate_atoms(&g, &g0, &lim).unwrap();
        let u2 = Sequence::parse(&g, "[(2,2)^2,(1,0)^4,(0,1)^4]").unwrap();
        let f = factorizations(&u2, &atoms, &lim).unwrap();
        assert_eq!(f.lengths, set(&[2, 5]));
        assert_eq!(f.delta, set(&[3]));

        let g = grp("C3xC6");
        let g0 = [el(&g, &[1, 1]), el(&g, &[0, 1])];
        let atoms = enumerate_atoms(&g, &g0, &lim).unwrap();
        let u2 = Sequence::parse(&g, "[(1,1)^6,(0,1)^6]").unwrap();
        assert_eq!(length_set(&u2, &atoms, &lim).unwrap(), set(&[2, 6]));
    }

    #[test]
    fn local_elasticities() {
        let lim = Limits::default();
        for (name, want) in [("C5", 5), ("C8", 5), ("C2xC4", 4)] {
            let g = grp(name);
            let all: Vec<GroupElement> = g.elements().collect();
            assert_eq!(rho_k(&g, &all, 1, &lim).unwrap(), 1, "{name}");
            assert_eq!(rho_k(&g, &all, 2, &lim).unwrap(), want, "{name}");
        }
        let c5 = grp("C5");
        assert!(matches!(
            rho_k(&c5, &[el(&c5, &[1])], 4, &lim),
            Err(Error::Resource { .. })
        ));
        assert!(rho_k(&c5, &[el(&c5, &[1])], 0, &lim).is_err());
        assert_eq!(rho_k(&c5, &[el(&c5, &[1])], 3, &lim).unwrap(), 6);
    }
}
