//! Two-level orthogonal arrays as integer programs and the permutation
//! symmetries of their LP relaxations.
//!
//! An `OA(N, k, 2, t)` corresponds to a frequency vector `f` over the `2^k`
//! factor-level combinations with `M f = J`. `M` stacks the interaction columns
//! of order at most `t`, and `J = (N, 0, ..., 0)`. A coordinate permutation is a
//! symmetry of the LP relaxation exactly when it preserves `Row(M)`. The crate
//! builds the model, realizes the known symmetry groups by explicit generators,
//! recomputes the full group from scratch, and enumerates small arrays up to
//! symmetry.
//!
//! ```
//! use oasym::{group_order, strength2_generators};
//!
//! let gens = strength2_generators(4).unwrap();
//! assert_eq!(group_order(&gens.perms).unwrap(), 1920u32.into());
//! ```

pub mod enumerate;
pub mod error;
pub mod factorial;
pub mod glp;
pub mod group;
pub mod model;
pub mod perm;
pub mod suite;
pub mod symgen;

pub use enumerate::{enumerate_oa, verify_group_action, EnumResult, EnumSummary};
pub use error::{Error, Result};
pub use factorial::{
    design_from_freq, freq_from_design, full_factorial, interaction_column, j_characteristic,
    strength, Design, FrequencyVector, LevelEncoding, SubsetLabel,
};
pub use glp::{brute_force_glp, refine_automorphisms, search_glp, AutSearchResult, SearchMethod};
pub use group::{group_order, PermGroup};
pub use model::{build_j, build_m, gram_projection, is_feasible, perm_preserves_rowspace, ModelMatrix};
pub use perm::Permutation;
pub use symgen::{
    factor_swap_perm, generators, rho_perm, sign_flip_perm, strength2_generators, wreath_generators,
    GeneratorKind, GeneratorSet,
};
