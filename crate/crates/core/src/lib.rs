//! Numerical toolkit for Legendrian submanifolds of the round contact sphere
//! `S^{2n+1} ⊂ C^{n+1}`: exact 2-jets of immersions, frames and cubic forms,
//! structural identities, pinching thresholds and a zoo of reference families.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod adnum;
pub mod cli;
pub mod contact;
pub mod error;
pub mod geom;
pub mod identities;
pub mod pinch;
pub mod report;
pub mod sample;
pub mod tensor;
pub mod zoo;

pub use error::{Error, Result};
pub use geom::{FrameData, FundamentalData};
pub use tensor::{SymTensor3, Tensor3};
pub use zoo::{FamilyKind, FamilySpec, Immersion, ImmersionFamily};
