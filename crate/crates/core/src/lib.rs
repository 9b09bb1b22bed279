//! Finite polyadic groups, their Post covers, and the correspondence between
//! irreducible representations of an n-ary group and those of its cover.
//!
//! Module map:
//! - [`group`]: ordinary finite groups as Cayley tables.
//! - [`narygroup`]: n-ary groups, skew elements and axiom checks.
//! - [`postcover`]: the covering group `G*_a` and its structure checks.
//! - [`chartab`]: conjugacy classes and complex character tables.
//! - [`polyrep`]: polyadic characters and representations via the cover.
//! - [`cli`]: the command-line driver and its report formats.

pub mod chartab;
pub mod cli;
pub mod group;
pub mod narygroup;
pub mod polyrep;
pub mod postcover;

pub use chartab::{character_table, conjugacy_classes, CharacterTable, ConjugacyClasses};
pub use group::{cyclic_group, direct_product, symmetric_group, FiniteGroup, GroupHom};
pub use narygroup::{b_derived, derived, nary_from_table, AxiomReport, CheckMode, PolyadicGroup};
pub use postcover::{build_post_cover, PostCover};
