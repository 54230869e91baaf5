use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use pmzs::{
    enumerate_atoms, integer_kernel_basis, is_atom, min_delta, min_delta_of, AtomMatrix, Group,
    GroupElement, Limits, Sequence,
};
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

fn groups(max_order: u64) -> Vec<Group> {
    Group::all_up_to_order(max_order).into_iter().filter(|g| g.order() >= 2).collect()
}

/// A group of order at most `max_order` together with a nonempty set of
/// nonzero elements of it.
fn group_and_subset(max_order: u64) -> impl Strategy<Value = (Group, Vec<GroupElement>)> {
    select(groups(max_order)).prop_flat_map(|g| {
        let nonzero: Vec<GroupElement> = g.elements().skip(1).collect();
        let n = nonzero.len();
        (Just(g), subsequence(nonzero, 1..=n.min(5)))
    })
}

fn group_and_sequence(max_order: u64) -> impl Strategy<Value = (Group, Sequence)> {
    select(groups(max_order)).prop_flat_map(|g| {
        let n = g.order();
        let g2 = g.clone();
        (Just(g), prop::collection::vec((0..n, 1u64..4), 0..5)).prop_map(move |(g, pairs)| {
            let elems: Vec<(GroupElement, u64)> =
                pairs.into_iter().map(|(i, m)| (g2.element_at(i), m)).collect();
            let s = Sequence::from_pairs(&g, elems.iter().map(|(e, m)| (e, *m))).unwrap();
            (g, s)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn sigma_pm_is_symmetric_and_contains_sigma((g, s) in group_and_sequence(12)) {
        let pm = s.sigma_pm();
        prop_assert_eq!(pm.negated(&g), pm.clone());
        prop_assert!(pm.contains(g.index_of(&s.sigma())));
        if s.is_zero_sum() {
            prop_assert!(s.is_pm_zero_sum());
        }
    }

    #[test]
    fn sigma_pm_of_product_is_sumset(
        (g, s, t) in group_and_sequence(12).prop_flat_map(|(g, s)| {
            let n = g.order();
            let g2 = g.clone();
            (Just(g), Just(s), prop::collection::vec((0..n, 1u64..3), 0..4)).prop_map(move |(g, s, p)| {
                let elems: Vec<(GroupElement, u64)> = p.into_iter().map(|(i, m)| (g2.element_at(i), m)).collect();
                let t = Sequence::from_pairs(&g, elems.iter().map(|(e, m)| (e, *m))).unwrap();
                (g, s, t)
            })
        })
    ) {
        let st = s.concat(&t).unwrap();
        prop_assert_eq!(st.sigma_pm(), s.sigma_pm().sumset(&t.sigma_pm(), &g));
        prop_assert_eq!(st.len(), s.len() + t.len());
        prop_assert_eq!(st.remove(&t).unwrap(), s);
    }

    #[test]
    fn atoms_are_atoms_and_respect_the_bound((g, g0) in group_and_subset(10)) {
        let lim = Limits::default();
        let atoms = enumerate_atoms(&g, &g0, &lim).unwrap();
        let (_, h) = g.subgroup_generated(&g0).unwrap();
        let d = h.davenport(&lim).unwrap();
        for i in 0..atoms.len() {
            let a = atoms.atom_sequence(i);
            prop_assert!(is_atom(&a), "{} is not an atom", a);
            prop_assert!(a.len() <= d);
        }
    }

    #[test]
    fn min_delta_divides_every_atom_length_minus_two((g, g0) in group_and_subset(10)) {
        let atoms = enumerate_atoms(&g, &g0, &Limits::default()).unwrap();
        let profile = atoms.length_profile();
        match min_delta_of(&atoms) {
            Some(m) => {
                for l in atoms.lengths() {
                    prop_assert_eq!((l - 2) % m, 0);
                }
                let gl = profile.gcd_lengths_minus_2;
                prop_assert_eq!(gl % m, 0);
                prop_assert_eq!((2 * m) % gl, 0);
                if gl % 2 == 1 {
                    prop_assert_eq!(gl, m);
                }
                prop_assert!(m + 2 <= profile.max_len);
            }
            None => prop_assert_eq!(profile.gcd_lengths_minus_2, 0),
        }
    }

    #[test]
    fn kernel_vectors_are_relations((g, g0) in group_and_subset(10)) {
        let atoms = enumerate_atoms(&g, &g0, &Limits::default()).unwrap();
        let m = AtomMatrix::from_atoms(&atoms);
        let kernel = integer_kernel_basis(&m);
        let cols = m.columns().len();
        prop_assert!(kernel.rank() <= cols);
        prop_assert!(kernel.rank() + m.rows() >= cols);
        for v in &kernel.vectors {
            prop_assert!(v.iter().any(|x| !x.is_zero()));
            prop_assert!(m.apply(v).iter().all(|x| *x == BigInt::zero()));
        }
    }

    #[test]
    fn divisibility_ladder((g, g0) in group_and_subset(9), pick in any::<prop::sample::Index>()) {
        let lim = Limits::default();
        let big = min_delta(&g, &g0, &lim).unwrap();
        let mut small = g0.clone();
        small.remove(pick.index(g0.len()));
        if small.is_empty() {
            return Ok(());
        }
        if let (Some(a), Some(b)) = (big, min_delta(&g, &small, &lim).unwrap()) {
            prop_assert_eq!(b % a, 0, "min Δ over G₀ {} does not divide {} over a subset", a, b);
        }
    }

    #[test]
    fn squares_of_atoms_have_lengths_two_and_len((g, g0) in group_and_subset(10)) {
        let lim = Limits::default();
        let atoms = enumerate_atoms(&g, &g0, &lim).unwrap();
        for i in 0..atoms.len() {
            let a = atoms.atom_sequence(i);
            let l = pmzs::length_set(&a.concat(&a).unwrap(), &atoms, &lim).unwrap();
            prop_assert!(l.contains(&2) && l.contains(&a.len()), "L({}²) = {:?}", a, l);
        }
    }
}

#[test]
fn full_group_min_delta_is_one() {
    let lim = Limits::default();
    for g in Group::all_up_to_order(10) {
        let all: Vec<GroupElement> = g.elements().skip(1).collect();
        let md = if all.is_empty() { None } else { min_delta(&g, &all, &lim).unwrap() };
        if g.order() >= 3 {
            assert_eq!(md, Some(1), "{g}");
        } else {
            assert_eq!(md, None, "{g}");
        }
    }
}

#[test]
fn davenport_branches_agree() {
    let lim = Limits::default();
    for g in Group::all_up_to_order(16) {
        let d = g.davenport(&lim).unwrap();
        assert!(d >= g.d_star(), "{g}");
        if g.davenport_formula_applies() && !g.is_trivial() {
            assert_eq!(g.davenport_by_search(lim.max_nodes).unwrap(), d, "{g}");
            assert_eq!(d, g.d_star(), "{g}");
        }
    }
}

#[test]
fn element_orders_and_automorphisms() {
    let lim = Limits::default();
    for g in Group::all_up_to_order(16) {
        for x in g.elements() {
            let ord = g.element_order(&x).unwrap();
            assert_eq!(g.exponent() % ord, 0);
            assert_eq!(g.scale(ord as i64, &x).unwrap(), g.zero());
        }
        for a in g.automorphisms(&lim).unwrap() {
            let image: BTreeSet<usize> = (0..g.order()).map(|i| a.apply_idx(i)).collect();
            assert_eq!(image.len(), g.order());
            for i in 0..g.order() {
                assert_eq!(g.order_idx(a.apply_idx(i)), g.order_idx(i));
            }
        }
    }
}

#[test]
fn single_support_sigma_pm() {
    for n in 2..=12u64 {
        let g = Group::cyclic(n).unwrap();
        let e = g.element(&[1]).unwrap();
        for l in 0..=2 * n {
            let s = Sequence::from_pairs(&g, [(&e, l)]).unwrap();
            let want: BTreeSet<usize> = (0..=l)
                .map(|k| (l as i64 - 2 * k as i64).rem_euclid(n as i64) as usize)
                .collect();
            let got: BTreeSet<usize> = s.sigma_pm().iter().collect();
            assert_eq!(got, want, "C{n}, length {l}");
        }
    }
}
