//! Constructions: large sets from nonsingular matrices, strong double large
//! set grids, their encoding as multimagic squares, translated families of
//! complementary squares, and the two compositions that combine squares.
//!
//! Every constructor verifies its output before returning it.

mod cms;
mod compose;
mod grid;
mod pipeline;
mod plan;

pub use cms::{build_cms, default_scheme, family_checks, CmsFamily, FamilyChecks, TranslationScheme};
pub use compose::{cms_compose, make_block_assignment, product_compose, BlockAssignment};
pub use grid::{build_loa, build_sdloa_grid, encode_cell, grid_to_ms, SdloaGrid};
pub use pipeline::{build_cms_for, build_ms_q2t1, build_ms_qt, ternary_pair, ternary_scheme};
pub use plan::{plan_order, FactorMethod, OrderPlan, PlanError, PlanFactor};

use thiserror::Error;

use crate::gf::GfError;
use crate::linalg::LinalgError;
use crate::oa::{OaError, SdloaCheck};
use crate::verify::VerifyError;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Oa(#[from] OaError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),
    #[error("grid is not a strong double large set: {0:?}")]
    GridCheck(SdloaCheck),
    #[error("{family} is not a large set")]
    FamilyCheck { family: String },
    #[error("input {what} failed verification")]
    InputCheck { what: String },
    #[error("constructed {what} failed verification ({failures} failed lines)")]
    OutputCheck { what: String, failures: usize },
}

/// Coordinates of grid index `index` as a vector in `F_q^t`.
///
/// The first coordinate is the most significant base-q digit, so index
/// `q^t - 1 - j` is the digitwise complement of `j`.
pub fn index_to_vector(index: usize, q: usize, t: usize) -> Vec<u16> {
    let mut v = vec![0u16; t];
    let mut rest = index;
    for c in v.iter_mut().rev() {
        *c = (rest % q) as u16;
        rest /= q;
    }
    v
}

pub fn vector_to_index(v: &[u16], q: usize) -> usize {
    v.iter().fold(0, |acc, &c| acc * q + c as usize)
}
