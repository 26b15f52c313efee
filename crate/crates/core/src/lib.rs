//! Multimagic squares from strong double large sets of orthogonal arrays.
//!
//! The crate builds `t`-multimagic squares of order `q^t` and `q^(2t-1)` for
//! prime powers `q >= 2t - 1`, composes them into larger orders, and checks
//! every result with exact integer arithmetic.
//!
//! ```
//! use std::sync::Arc;
//! use multimagic::{build_ms_qt, verify_ms, FieldTable};
//!
//! let field = Arc::new(FieldTable::for_order(5).unwrap());
//! let sq = build_ms_qt(&field, 2).unwrap();
//! assert_eq!(sq.order(), 25);
//! assert!(verify_ms(&sq, 2).passed());
//! ```

pub mod cli;
pub mod construct;
pub mod gf;
pub mod io;
pub mod linalg;
pub mod oa;
pub mod verify;

pub use construct::{
    build_cms, build_cms_for, build_loa, build_ms_q2t1, build_ms_qt, build_sdloa_grid, cms_compose,
    default_scheme, encode_cell, grid_to_ms, make_block_assignment, plan_order, product_compose,
    ternary_pair, ternary_scheme, BlockAssignment, CmsFamily, ConstructError, OrderPlan, SdloaGrid,
    TranslationScheme,
};
pub use gf::{build_field, FieldElem, FieldTable};
pub use linalg::{find_cms_pair, find_sdloa_pair, FMatrix, MatrixPairCertificate};
pub use oa::{verify_large_set, verify_oa, verify_sdloa, ArrayFamily, OrthArray};
pub use verify::{magic_sum, verify_cms, verify_ms, CmsReport, MagicSquare, VerifyReport};
