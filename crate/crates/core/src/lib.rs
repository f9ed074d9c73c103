//! Exact presentations of Schur algebras `S(n,d)` and rational Schur algebras
//! `S(n,r,s)`, with every finite claim about them checked by exact
//! computation: weight-set identities, binomial structure constants,
//! idempotents of torus quotients, vanishing loci of torus ideals, relation
//! families under the tensor-space representations, and PBW straightening.

pub mod arith;
pub mod error;
pub mod matrix;
pub mod presentation;
pub mod relations;
pub mod rewrite;
pub mod tensor;
pub mod torus;
pub mod weights;

pub use error::{Error, Result};
