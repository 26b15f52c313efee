use std::sync::Arc;

use super::cms::{build_cms, default_scheme, CmsFamily, TranslationScheme};
use super::compose::{cms_compose, make_block_assignment};
use super::grid::{build_sdloa_grid, grid_to_ms};
use super::ConstructError;
use crate::gf::FieldTable;
use crate::linalg::{find_cms_pair, find_sdloa_pair, FMatrix, MatrixPairCertificate};
use crate::verify::MagicSquare;

const TERNARY_E1: [[u16; 2]; 4] = [[1, 0], [0, 1], [1, 1], [2, 1]];
const TERNARY_E2: [[u16; 2]; 4] = [[0, 1], [2, 0], [1, 2], [1, 1]];
const TERNARY_H_STAR: [[u16; 2]; 9] =
    [[0, 1], [0, 2], [0, 0], [2, 1], [2, 2], [2, 0], [1, 1], [1, 2], [1, 0]];

/// The built-in pair over GF(3) with `t = 2`.
///
/// The scalar search excludes `0, 1, -1`, which leaves nothing in GF(3), so
/// this pair is registered by hand.
pub fn ternary_pair(field: &Arc<FieldTable>) -> Result<MatrixPairCertificate, ConstructError> {
    if field.order() != 3 {
        return Err(ConstructError::Precondition(format!(
            "the built-in pair lives over GF(3), not GF({})",
            field.order()
        )));
    }
    let e1 = FMatrix::from_rows(field.clone(), &TERNARY_E1)?;
    let e2 = FMatrix::from_rows(field.clone(), &TERNARY_E2)?;
    Ok(MatrixPairCertificate::evaluate(e1, e2, None)?)
}

/// Translations paired with [`ternary_pair`]: `H*_i = (2a, b + 1)` for
/// `H_i = (a, b)`.
pub fn ternary_scheme() -> TranslationScheme {
    TranslationScheme::from_vectors(3, 2, &TERNARY_H_STAR).expect("built-in scheme is a permutation")
}

fn check_range(field: &FieldTable, t: usize, min_t: usize) -> Result<(), ConstructError> {
    let q = field.order();
    if t < min_t {
        return Err(ConstructError::Precondition(format!("need t >= {min_t}, got t = {t}")));
    }
    if q < 2 * t - 1 {
        return Err(ConstructError::Precondition(format!(
            "need q >= 2t - 1 = {}, got q = {q}",
            2 * t - 1
        )));
    }
    Ok(())
}

/// A verified `MS(q^t, t)` from a strong double large set grid.
pub fn build_ms_qt(field: &Arc<FieldTable>, t: usize) -> Result<MagicSquare, ConstructError> {
    check_range(field, t, 2)?;
    let cert = if field.order() == 3 && t == 2 {
        ternary_pair(field)?
    } else {
        find_sdloa_pair(field, t)?
    };
    log::info!("pair for GF({}), t = {t}: E2 = {}", field.order(), cert.e2);
    let grid = build_sdloa_grid(&cert)?;
    log::info!("grid of order {} verified", grid.order());
    let sq = grid_to_ms(&grid)?;
    log::info!("MS({}, {t}) verified", sq.order());
    Ok(sq)
}

/// A verified `q^t`-CMS(`q^t`, `t`): the built-in translations over GF(3)
/// at `t = 2`, otherwise a searched pair with `H* = dH`.
pub fn build_cms_for(field: &Arc<FieldTable>, t: usize) -> Result<CmsFamily, ConstructError> {
    if t == 0 {
        return Err(ConstructError::Precondition("need t >= 1".into()));
    }
    let (cert, scheme) = if field.order() == 3 && t == 2 {
        (ternary_pair(field)?, ternary_scheme())
    } else {
        let cert = find_cms_pair(field, t)?;
        let scheme = default_scheme(&cert)?;
        (cert, scheme)
    };
    log::info!(
        "pair for the translated family over GF({}), t = {t}: E2 = {}, d = {:?}",
        field.order(),
        cert.e2,
        cert.d.map(|d| d.index())
    );
    let fam = build_cms(&cert, &scheme)?;
    log::info!("{}-CMS({}, {t}) verified", fam.count(), fam.order());
    Ok(fam)
}

/// A verified `MS(q^(2t-1), t)`: `MS(q^t, t)` block-composed with a
/// `q^(t-1)`-CMS(`q^(t-1)`, `t - 1`).
pub fn build_ms_q2t1(field: &Arc<FieldTable>, t: usize) -> Result<MagicSquare, ConstructError> {
    check_range(field, t, 3)?;
    let a = build_ms_qt(field, t)?;
    let fam = build_cms_for(field, t - 1)?;
    let assign = make_block_assignment(field, t, t - 1)?;
    log::info!("block assignment {}x{} over {} symbols balanced", assign.order(), assign.order(), assign.symbols());
    let sq = cms_compose(&a, &fam, &assign)?;
    log::info!("composed MS({}, {t}) verified", sq.order());
    Ok(sq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Arc<FieldTable> {
        Arc::new(FieldTable::for_order(q).unwrap())
    }

    #[test]
    fn ternary_pair_certifies() {
        let cert = ternary_pair(&gf(3)).unwrap();
        assert!(cert.supports_sdloa());
        assert!(ternary_pair(&gf(5)).is_err());
    }

    #[test]
    fn ternary_scheme_is_affine_image() {
        let s = ternary_scheme();
        for i in 0..9 {
            let h = s.h(i);
            assert_eq!(s.h_star(i), vec![(2 * h[0]) % 3, (h[1] + 1) % 3]);
        }
    }

    #[test]
    fn range_checks() {
        assert!(build_ms_qt(&gf(3), 3).is_err());
        assert!(build_ms_qt(&gf(5), 1).is_err());
        assert!(build_ms_q2t1(&gf(5), 4).is_err());
        assert!(build_ms_q2t1(&gf(5), 2).is_err());
    }

    #[test]
    fn small_squares() {
        assert_eq!(build_ms_qt(&gf(3), 2).unwrap().order(), 9);
        assert_eq!(build_ms_qt(&gf(4), 2).unwrap().order(), 16);
        assert_eq!(build_ms_qt(&gf(5), 2).unwrap().order(), 25);
    }
}
