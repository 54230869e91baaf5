pub mod atoms;
pub mod delta_star;
pub mod error;
pub mod group;
pub mod limits;
pub mod relations;
pub mod sequence;
pub mod verify;

pub use atoms::{
    davenport_monoid, enumerate_atoms, enumerate_atoms_cached, is_atom, AtomCache,
    AtomLengthProfile, AtomSet, AtomSetRecord,
};
pub use delta_star::{
    char_compare, char_invariants, delta_star, subset_orbits, verify_delta_ast_odd,
    verify_elementary_p, verify_parity, CharComparison, CharReport, CheckReport, CheckStatus,
    DeltaStarReport, SignClasses, SweepOptions, with_jobs,
};
pub use error::{Error, ErrorKind, Result};
pub use group::{Automorphism, ElementSet, Group, GroupElement, GroupInvariants};
pub use limits::Limits;
pub use relations::{
    delta_of_element, factorizations, integer_kernel_basis, is_half_factorial, length_set,
    min_delta, min_delta_of, rho_k, AtomMatrix, FactorizationSet, Factorizer, KernelBasis,
};
pub use verify::{run_suite, Scope, SuiteReport};
pub use sequence::{format_subset, parse_subset, Sequence, SequenceEntry};
