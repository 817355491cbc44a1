//! Exact computation of sectional-category invariants.
//!
//! - [`hcat`]: the backend contract (homotopy pushouts, pullbacks, whisker maps).
//! - [`chain`]: bounded rational chain complexes implementing the contract.
//! - [`ganea`]: Ganea and Whitehead towers, invariants and certificates.
//! - [`cohom`]: cohomological lower bounds from graded rings.
//! - [`bounds`]: interval propagation of the known inequalities.
//! - [`golden`]: the reproduction suite behind `secat examples`.
//! - [`laws`]: randomized checks of the cube axiom, prism lemma and friends.

pub mod bounds;
pub mod chain;
pub mod cohom;
pub mod hcat;
pub mod ganea;
pub mod golden;
pub mod laws;
pub mod linalg;
pub mod random;
