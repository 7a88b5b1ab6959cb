//! Finitely presented groups and the double disk bundle question for
//! spherical space forms and flat manifolds.
//!
//! The crate is layered bottom-up:
//!
//! * [`word`], [`presentation`], [`parse`]: free-group words, finite
//!   presentations, homomorphisms, Tietze elimination and a text syntax.
//! * [`abelian`]: relation matrices, Smith normal form, first homology and
//!   the Z/2-surjection and odd-order tests.
//! * [`coset`], [`perm`]: Todd-Coxeter enumeration, permutation
//!   representations and perfectness.
//! * [`quaternion`], [`catalog`]: spherical space form groups and exact unit
//!   quaternion realizations used to cross-check enumerated orders.
//! * [`gluing`]: disk bundles over S^2 and T^2 leaves, Seifert-van Kampen
//!   pushouts, prism recognition with certificates.
//! * [`verdict`]: decisions on which manifolds are double disk bundles.

pub mod abelian;
pub mod catalog;
pub mod coset;
pub mod error;
pub mod exec;
pub mod gluing;
pub mod parse;
pub mod perm;
pub mod presentation;
pub mod quaternion;
pub mod verdict;
pub mod word;

pub use abelian::{
    h1_invariants, is_finite_odd, relation_matrix, smith_normal_form, surjects_onto_z2, IntMatrix,
    InvariantFactors,
};
pub use catalog::{
    catalog_presentation, enumerate_descriptors, CatalogEntry, Family, SpaceFormDescriptor,
};
pub use coset::{group_order, perm_rep, todd_coxeter, words_equal, CosetTable, EnumLimit};
pub use error::{Error, Result};
pub use exec::Execution;
pub use gluing::{
    analyze_presentation, classify_sphere_leaf, enumerate_gluings, matrix_orbit_reduce,
    recognize_prism, svk_pushout, torus_gluing_pi1, Base, Classification, GluingDatum,
    GluingMatrix, GroupOrder, Leaf, ManifoldName, Pi1Report, SideDescriptor, Sublattice,
};
pub use perm::{PermGroup, Permutation};
pub use presentation::{tietze_eliminate, GroupHom, Presentation};
pub use verdict::{
    check_structural_rules, decide_flat, decide_spaceform, Answer, Assumptions, Rule, RuleStatus,
    Verdict,
};
pub use word::{free_reduce, Syllable, Word};
