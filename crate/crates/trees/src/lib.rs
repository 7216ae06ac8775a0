//! Tree forcings and their combinatorial support, truncated to desk
//! scale: perfect binary trees with Sacks-style ordering, fusion of
//! freezing sequences, wide trees with starred levels and the open
//! pruning game, sunflower extraction, translation coverings of
//! nowhere-dense leaf-sets, and a dense-matrix dichotomy for colored
//! level products.

pub mod delta;
pub mod error;
pub mod hl;
pub mod namba;
pub mod perfect;
pub mod translate;

pub use delta::{delta_system, sunflower_bound};
pub use error::TreeError;
pub use hl::{hl_check, HlReport, HlSearcher, LevelWitness, SomewhereWitness};
pub use namba::{
    solve_open_game, GameCaps, GameSolution, GameWinner, NambaTree,
};
pub use perfect::{
    fuse, sacks_branch, DodgeBranch, LongStem, PerfectTree, SacksNotion,
};
pub use translate::{cover_by_translations, is_nowhere_dense, translate, tree_code};
