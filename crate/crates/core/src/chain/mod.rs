//! Bounded chain complexes of finite-dimensional rational vector spaces.
//!
//! Sign conventions, fixed once for the whole crate:
//! - a degree-one map `s` witnesses `f ≃ g` iff `d s + s d = f − g`;
//! - `X[k]_n = X_{n−k}` with differential `(−1)^k d`;
//! - homotopy pushout apex `A ⊕ B ⊕ Z[1]`, `d(a,b,z) = (da − u z, db + v z, −dz)`;
//! - homotopy pullback apex `A ⊕ B ⊕ X[−1]`, `d(a,b,t) = (da, db, g b − f a − dt)`.

mod complex;
mod constructions;
mod solve;
mod text;
mod workspace;

pub use complex::{ChainComplex, ChainError, GradedMap, Grading, Homology};
pub use constructions::{
    cylinder, direct_sum, h_pullback_complex, h_pushout_complex, shift, whisker_in_map,
    whisker_out_map, Cylinder, DirectSum, PullbackData, PushoutData,
};
pub use solve::{
    homology_map, is_quasi_isomorphism, minimize, quasi_inverse, solve_homotopy,
    solve_rel_section, solve_section, MinimalModel, RelSectionError,
};
pub use text::{
    format_matrix, parse_matrix, ChainDocument, ChainTextError, ChainTextResult, ChainWriter, CHAIN_HEADER,
};
pub use workspace::ChainWorkspace;
