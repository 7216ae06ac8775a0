//! Concrete forcing notions: Cohen (row and interval forms), collapse, and
//! the covering forcing, each with its dense families and generic-object
//! extractor. Everything runs on exact rational arithmetic.

pub mod cohen;
pub mod collapse;
pub mod cover;
pub mod error;
pub mod interval;

pub use cohen::{cohen_real, row_swap, BitDecided, CohenCond, CohenNotion, RowSplit};
pub use collapse::{collapse_map, CollapseCond, CollapseNotion, DomainPoint, HitsLabel};
pub use cover::{slalom, CoverCond, CoverNotion, CoversTarget};
pub use error::ClassicError;
pub use interval::{enclosure, AvoidPoint, IntervalCond, IntervalNotion, ShrinkWidth};
