use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::{index_to_vector, ConstructError};
use crate::gf::FieldTable;
use crate::linalg::{FMatrix, MatrixPairCertificate};
use crate::oa::{self, ArrayFamily, OrthArray, SdloaCheck};
use crate::verify::{verify_ms, MagicSquare};

/// Large set from a nonsingular `k x k` matrix `E = (E1, E2)` whose first
/// `s` columns `E1` have strength `t`.
///
/// Member `Y` (canonical order over `F_q^(k-s)`) has the columns
/// `E1 X + E2 Y` for `X` over `F_q^s`, also in canonical order.
pub fn build_loa(e: &FMatrix, s: usize, t: usize) -> Result<ArrayFamily, ConstructError> {
    let k = e.rows();
    if !e.is_nonsingular()? {
        return Err(ConstructError::Precondition("matrix is singular".into()));
    }
    if s == 0 || s > k {
        return Err(ConstructError::Precondition(format!("cannot split {k} columns at {s}")));
    }
    let e1_rows: Vec<Vec<u16>> =
        (0..k).map(|i| e.row(i)[..s].iter().map(|x| x.index()).collect()).collect();
    let e1 = FMatrix::from_rows(e.field().clone(), &e1_rows)?;
    if !e1.is_strength_t(t)? {
        return Err(ConstructError::Precondition(format!(
            "leading {s} columns do not have strength {t}"
        )));
    }
    let field = e.field();
    let q = field.order();
    let x_count = q.pow(s as u32);
    let y_count = q.pow((k - s) as u32);
    let e_rows = e.to_index_rows();
    let members = (0..y_count)
        .map(|y| {
            let yv = index_to_vector(y, q, k - s);
            let mut cols = Vec::with_capacity(x_count * k);
            for x in 0..x_count {
                let mut arg = index_to_vector(x, q, s);
                arg.extend_from_slice(&yv);
                cols.extend(e_rows.iter().map(|row| dot(field, row, &arg)));
            }
            OrthArray::from_columns(k, q, t, cols)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let family = ArrayFamily::new(members)?;
    if !oa::verify_large_set(&family, t)? {
        return Err(ConstructError::FamilyCheck { family: "matrix-generated family".into() });
    }
    Ok(family)
}

fn dot(field: &FieldTable, a: &[u16], b: &[u16]) -> u16 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add_raw(acc, field.mul_raw(x, y)))
}

fn add_vectors(field: &FieldTable, a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().zip(b).map(|(&x, &y)| field.add_raw(x, y)).collect()
}

/// Cells `E1 (X + h) + E2 (Y + h_star)` for all grid positions `(X, Y)`.
pub(super) fn translated_cells(
    e1: &FMatrix,
    e2: &FMatrix,
    h: &[u16],
    h_star: &[u16],
) -> Vec<u16> {
    let field = &**e1.field();
    let q = field.order();
    let t = e1.cols();
    let k = 2 * t;
    let n = q.pow(t as u32);
    let image = |m: &FMatrix, shift: &[u16]| -> Vec<Vec<u16>> {
        (0..n)
            .map(|i| m.mul_vec(&add_vectors(field, &index_to_vector(i, q, t), shift)))
            .collect()
    };
    let left = image(e1, h);
    let right = image(e2, h_star);
    let mut cells = vec![0u16; n * n * k];
    cells.par_chunks_mut(n * k).enumerate().for_each(|(x, row)| {
        for (y, cell) in row.chunks_exact_mut(k).enumerate() {
            for l in 0..k {
                cell[l] = field.add_raw(left[x][l], right[y][l]);
            }
        }
    });
    cells
}

/// A `q^t x q^t` grid of `2t`-vectors over `GF(q)` that has passed the
/// strong double large set check: grid rows form a large set, grid columns
/// form a large set, and both diagonals are orthogonal arrays of strength t.
#[derive(Clone)]
pub struct SdloaGrid {
    field: Arc<FieldTable>,
    t: usize,
    n: usize,
    cells: Vec<u16>,
    certificate: MatrixPairCertificate,
}

impl fmt::Debug for SdloaGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SdloaGrid")
            .field("q", &self.field.order())
            .field("t", &self.t)
            .field("n", &self.n)
            .finish()
    }
}

impl SdloaGrid {
    /// Wraps raw cells after checking the strong double large set property.
    pub(super) fn checked(
        certificate: &MatrixPairCertificate,
        cells: Vec<u16>,
    ) -> Result<SdloaGrid, ConstructError> {
        let field = certificate.field().clone();
        let t = certificate.t();
        let n = field.order().pow(t as u32);
        let grid = SdloaGrid { field, t, n, cells, certificate: certificate.clone() };
        let check = grid.check();
        if !check.holds() {
            return Err(ConstructError::GridCheck(check));
        }
        Ok(grid)
    }

    pub fn field(&self) -> &Arc<FieldTable> {
        &self.field
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Grid side length `q^t`.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn certificate(&self) -> &MatrixPairCertificate {
        &self.certificate
    }

    /// Cell at grid row `x`, column `y`, as `2t` element indices.
    pub fn cell(&self, x: usize, y: usize) -> &[u16] {
        let k = 2 * self.t;
        let at = (x * self.n + y) * k;
        &self.cells[at..at + k]
    }

    /// Re-runs the strong double large set check.
    pub fn check(&self) -> SdloaCheck {
        let (n, k, q, t) = (self.n, 2 * self.t, self.field.order(), self.t);
        let rows = |x: usize| (0..n).map(|y| self.cell(x, y)).collect::<Vec<_>>();
        let cols = |y: usize| (0..n).map(|x| self.cell(x, y)).collect::<Vec<_>>();
        let main: Vec<&[u16]> = (0..n).map(|j| self.cell(j, j)).collect();
        let back: Vec<&[u16]> = (0..n).map(|j| self.cell(j, n - 1 - j)).collect();
        SdloaCheck {
            large_set: oa::large_set_by(n, rows, k, q, t),
            transposed_large_set: oa::large_set_by(n, cols, k, q, t),
            diagonal: oa::strength_holds(&main, k, q, t),
            back_diagonal: oa::strength_holds(&back, k, q, t),
        }
    }

    /// The grid as an explicit family: member `s` is grid row `s`.
    pub fn to_family(&self) -> Result<ArrayFamily, ConstructError> {
        let k = 2 * self.t;
        let members = (0..self.n)
            .map(|x| {
                let cols = (0..self.n).flat_map(|y| self.cell(x, y).iter().copied()).collect();
                OrthArray::from_columns(k, self.field.order(), self.t, cols)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ArrayFamily::new(members)?)
    }
}

/// Grid with cells `E1 X + E2 Y` from a certified pair.
pub fn build_sdloa_grid(cert: &MatrixPairCertificate) -> Result<SdloaGrid, ConstructError> {
    if !cert.supports_sdloa() || !cert.revalidate() {
        return Err(ConstructError::InvalidCertificate(
            "pair does not carry valid strong double large set conditions".into(),
        ));
    }
    let t = cert.t();
    let zero = vec![0u16; t];
    let cells = translated_cells(&cert.e1, &cert.e2, &zero, &zero);
    SdloaGrid::checked(cert, cells)
}

/// `sum_l cell[l] q^l`: the first component is the least significant digit.
pub fn encode_cell(cell: &[u16], q: usize) -> u64 {
    cell.iter().rev().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
}

/// Encodes every cell as an integer, giving an `MS(q^t, t)`.
pub fn grid_to_ms(grid: &SdloaGrid) -> Result<MagicSquare, ConstructError> {
    let n = grid.n;
    let q = grid.field.order();
    let entries: Vec<u64> = grid.cells.chunks_exact(2 * grid.t).map(|c| encode_cell(c, q)).collect();
    let sq = MagicSquare::new(n, grid.t as u32, entries)?;
    let report = verify_ms(&sq, grid.t as u32);
    if !report.passed() {
        return Err(ConstructError::OutputCheck {
            what: format!("MS({n}, {})", grid.t),
            failures: report.failures.len(),
        });
    }
    Ok(sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::ternary_pair;
    use crate::linalg::find_sdloa_pair;

    fn gf(q: u32) -> Arc<FieldTable> {
        Arc::new(FieldTable::for_order(q).unwrap())
    }

    #[test]
    fn cell_encoding() {
        assert_eq!(encode_cell(&[1, 0, 2, 1], 3), 46);
        assert_eq!(encode_cell(&[0, 0, 0, 0], 5), 0);
        assert_eq!(encode_cell(&[4, 4], 5), 24);
    }

    #[test]
    fn large_set_from_ternary_matrix() {
        let cert = ternary_pair(&gf(3)).unwrap();
        let e = cert.e1.hconcat(&cert.e2).unwrap();
        let fam = build_loa(&e, 2, 2).unwrap();
        assert_eq!((fam.len(), fam.k(), fam.n_cols()), (9, 4, 9));
        // member 0 is E1 X over all X
        let first: Vec<Vec<u16>> = fam.members()[0].columns().map(|c| c.to_vec()).collect();
        assert_eq!(first[1], cert.e1.mul_vec(&[0, 1]));
    }

    #[test]
    fn square_matrix_gives_one_member() {
        let f = gf(5);
        let e = FMatrix::identity(f, 2).unwrap();
        let fam = build_loa(&e, 2, 1).unwrap();
        assert_eq!((fam.len(), fam.n_cols()), (1, 25));
    }

    #[test]
    fn singular_matrix_rejected() {
        let e = FMatrix::from_rows(gf(3), &[[1, 1], [2, 2]]).unwrap();
        assert!(build_loa(&e, 1, 1).is_err());
    }

    #[test]
    fn grid_origin_is_zero() {
        let cert = find_sdloa_pair(&gf(5), 2).unwrap();
        let grid = build_sdloa_grid(&cert).unwrap();
        assert_eq!(grid.order(), 25);
        assert!(grid.cell(0, 0).iter().all(|&c| c == 0));
        assert!(grid.check().holds());
        let sq = grid_to_ms(&grid).unwrap();
        assert!(sq.is_consecutive());
    }

    #[test]
    fn grid_family_round_trip() {
        let cert = find_sdloa_pair(&gf(4), 2).unwrap();
        let grid = build_sdloa_grid(&cert).unwrap();
        let fam = grid.to_family().unwrap();
        assert!(oa::verify_sdloa(&fam, 2).unwrap());
    }
}
