//! Definability toolkit over hereditarily finite sets: the eight primitive
//! set operations with their derived algebra, coordinate selection,
//! first-order satisfaction computed by composition and cross-checked by
//! brute-force model checking, and a total `u64` enumeration of
//! straight-line terms.

pub mod error;
pub mod ops;
pub mod sel;
pub mod term;
pub mod val;

pub use error::GodelError;
pub use ops::{
    dom_of, f1, f2, f3, f4, f5, f6, f7, f8, id_rel, intersect, inverse, product_power, range_of,
    union,
};
pub use sel::f_sel;
pub use term::{slot_options, term_at, term_index, GodelTerm, TermEntry};
pub use val::{direct_modelcheck, parse_fo, val, FoFormula, MAX_BASE_NODES, MAX_TUPLE_SPACE};
