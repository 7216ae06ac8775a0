//! Shared kernel for finite forcing experiments: posets of conditions,
//! dense sets with constructive refiners, generic filters, P-names, and a
//! decidable forcing relation on finite posets.
//!
//! The design premise is that every classical forcing argument has a finite
//! shadow that a program can check exhaustively. This crate supplies the
//! vocabulary those checks share:
//!
//! * [`poset::ForcingNotion`] — a poset of conditions with a top element,
//!   where smaller is stronger;
//! * [`poset::DenseSet`] — dense sets paired with refiners that *construct*
//!   the stronger member they promise;
//! * [`poset::build_generic`] — the finite Rasiowa–Sikorski run producing a
//!   [`poset::FilterCertificate`];
//! * [`name::PName`] — finitely branching names with `K_G` evaluation into
//!   hereditarily finite sets;
//! * [`formula::forces`] — the forcing relation on a [`poset::FinitePoset`],
//!   computed from cone generics of minimal elements.
//!
//! Everything is exact: no floating point, no hashing nondeterminism
//! (ordered containers throughout), and every verdict either carries a
//! witness or a stable error code (see [`error::Failure`]).

pub mod error;
pub mod formula;
pub mod hf;
pub mod name;
pub mod poset;

pub use error::{Failure, KernelError};
pub use formula::{forces, parse_formula, parse_name_term, Formula, NameTerm};
pub use hf::HFSet;
pub use name::{
    canonical_gamma, check_name, condition_code, PName, PosetAutomorphism, DEFAULT_RANK_BOUND,
};
pub use poset::{
    antichain_check, atom_generics, build_generic, compatibility, enumerate_posets_with_top,
    is_filter, mix64, AntichainVerdict, Compat, DenseDp, DenseSet, FilterCertificate,
    FinitePoset, ForcingNotion,
};
