//! Binary symbolic dynamics: words, the cylinder metric, neighbor sets,
//! subshifts of finite type from forbidden words, transitive components and
//! the zero-avoiding subshift construction.

pub mod sft;
pub mod word;
pub mod zeros;

pub use sft::{build_sft, forbidden_words, full_shift, EigenData, GapReport, Sft};
pub use word::{dyadic_rank, metric_rho, neighbors, word_at, Word, MAX_WORD_LEN};
pub use zeros::{isolate_zeros, ZeroSet, ROOT_GRID_POW, ROOT_TOL};
