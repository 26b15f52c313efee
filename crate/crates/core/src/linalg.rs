//! Dense matrices over a [`FieldTable`], the strength property (every `t`
//! rows linearly independent) and the search for admissible matrix pairs.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::gf::{FieldElem, FieldTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("entry {index} does not belong to GF({q})")]
    ForeignEntry { index: usize, q: usize },
    #[error("matrices over different fields")]
    FieldMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("strength {t} out of range for a {rows}x{cols} matrix")]
    StrengthOutOfRange { t: usize, rows: usize, cols: usize },
    #[error("parameters out of range: {0}")]
    ParameterRange(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("no admissible matrix pair found after {candidates} candidates")]
    Exhausted { candidates: usize },
}

/// A `rows x cols` matrix over a finite field, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    field: Arc<FieldTable>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FMatrix[GF({})] {}", self.field.order(), self)
    }
}

impl fmt::Display for FMatrix {
    /// Rows separated by `;`, entries by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.index()).join(" "))
            .join("; ");
        f.write_str(&rows)
    }
}

impl FMatrix {
    pub fn new(
        field: Arc<FieldTable>,
        rows: usize,
        cols: usize,
        data: Vec<FieldElem>,
    ) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount { expected: rows * cols, got: data.len() });
        }
        let q = field.order();
        if let Some(bad) = data.iter().find(|e| e.index() as usize >= q) {
            return Err(LinalgError::ForeignEntry { index: bad.index() as usize, q });
        }
        Ok(FMatrix { field, rows, cols, data })
    }

    /// Builds a matrix from rows of element indices.
    pub fn from_rows<R: AsRef<[u16]>>(
        field: Arc<FieldTable>,
        rows: &[R],
    ) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(r) = rows.iter().find(|r| r.as_ref().len() != cols) {
            return Err(LinalgError::ShapeMismatch(format!(
                "ragged rows: {} vs {cols} entries",
                r.as_ref().len()
            )));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&i| FieldElem::new(i)))
            .collect();
        FMatrix::new(field, rows.len(), cols, data)
    }

    pub fn zeros(field: Arc<FieldTable>, rows: usize, cols: usize) -> Result<Self, LinalgError> {
        FMatrix::new(field, rows, cols, vec![FieldElem::ZERO; rows * cols])
    }

    pub fn identity(field: Arc<FieldTable>, n: usize) -> Result<Self, LinalgError> {
        let mut m = FMatrix::zeros(field, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = FieldElem::ONE;
        }
        Ok(m)
    }

    pub fn field(&self) -> &Arc<FieldTable> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_index_rows(&self) -> Vec<Vec<u16>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|e| e.index()).collect()).collect()
    }

    fn same_shape(&self, other: &FMatrix) -> Result<(), LinalgError> {
        if *self.field != *other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &FMatrix,
        op: impl Fn(FieldElem, FieldElem) -> FieldElem,
    ) -> Result<FMatrix, LinalgError> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        Ok(FMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &FMatrix) -> Result<FMatrix, LinalgError> {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &FMatrix) -> Result<FMatrix, LinalgError> {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn scale(&self, c: FieldElem) -> FMatrix {
        let data = self.data.iter().map(|&a| self.field.mul(c, a)).collect();
        FMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Scales rows `0..split` by `top` and the remaining rows by `bottom`.
    pub fn scale_blocks(&self, split: usize, top: FieldElem, bottom: FieldElem) -> FMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            let c = if i < split { top } else { bottom };
            for j in 0..self.cols {
                out.data[i * self.cols + j] = self.field.mul(c, self.get(i, j));
            }
        }
        out
    }

    /// Horizontal concatenation `(self, right)`.
    pub fn hconcat(&self, right: &FMatrix) -> Result<FMatrix, LinalgError> {
        if *self.field != *right.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.rows != right.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "cannot join {} rows with {} rows",
                self.rows, right.rows
            )));
        }
        let cols = self.cols + right.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(right.row(i));
        }
        Ok(FMatrix { field: self.field.clone(), rows: self.rows, cols, data })
    }

    pub fn select_rows(&self, rows: &[usize]) -> FMatrix {
        let data = rows.iter().flat_map(|&i| self.row(i).iter().copied()).collect();
        FMatrix { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    /// `self * x` for a column vector of element indices.
    pub fn mul_vec(&self, x: &[u16]) -> Vec<u16> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).fold(0u16, |acc, (a, &b)| {
                    self.field.add_raw(acc, self.field.mul_raw(a.index(), b))
                })
            })
            .collect()
    }

    /// Rank by Gaussian elimination over the field.
    pub fn rank(&self) -> usize {
        let f = &*self.field;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| m[r * cols + col] != FieldElem::ZERO) else {
                continue;
            };
            for j in 0..cols {
                m.swap(rank * cols + j, pivot * cols + j);
            }
            let inv = f.inv(m[rank * cols + col]).unwrap();
            for j in 0..cols {
                m[rank * cols + j] = f.mul(inv, m[rank * cols + j]);
            }
            for r in 0..rows {
                let factor = m[r * cols + col];
                if r == rank || factor == FieldElem::ZERO {
                    continue;
                }
                for j in 0..cols {
                    let v = f.mul(factor, m[rank * cols + j]);
                    m[r * cols + j] = f.sub(m[r * cols + j], v);
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    pub fn is_nonsingular(&self) -> Result<bool, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rank() == self.rows)
    }

    /// True iff every `t` rows are linearly independent.
    pub fn is_strength_t(&self, t: usize) -> Result<bool, LinalgError> {
        if t == 0 || t > self.rows || t > self.cols {
            return Err(LinalgError::StrengthOutOfRange { t, rows: self.rows, cols: self.cols });
        }
        Ok((0..self.rows).combinations(t).all(|rows| self.select_rows(&rows).rank() == t))
    }
}

/// The `2t x t` matrix whose rows are `(1,0,..,0)`, `(0,..,0,1)` and
/// `(1, x^i, x^2i, .., x^(t-1)i)` for `i = 1..2t-2`, `x` the field's primitive
/// element. Every `t` of its rows are independent whenever `q >= 2t - 1`.
pub fn vandermonde_base(field: &Arc<FieldTable>, t: usize) -> Result<FMatrix, LinalgError> {
    let q = field.order();
    if t < 2 || q < 2 * t - 1 {
        return Err(LinalgError::ParameterRange(format!(
            "need t >= 2 and q >= 2t - 1, got q = {q}, t = {t}"
        )));
    }
    let x = field.primitive_element();
    let mut data = vec![FieldElem::ZERO; 2 * t * t];
    data[0] = FieldElem::ONE;
    data[t + t - 1] = FieldElem::ONE;
    for i in 1..=2 * t - 2 {
        let step = field.pow(x, i as u64);
        let mut v = FieldElem::ONE;
        for j in 0..t {
            data[(i + 1) * t + j] = v;
            v = field.mul(v, step);
        }
    }
    let e = FMatrix::new(field.clone(), 2 * t, t, data)?;
    if !e.is_strength_t(t)? {
        return Err(LinalgError::Internal(format!(
            "base matrix over GF({q}) fails strength {t}"
        )));
    }
    Ok(e)
}

/// One named condition recorded in a [`MatrixPairCertificate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairCheck {
    /// `E1` has strength t.
    E1Strength,
    E2Strength,
    SumStrength,
    DiffStrength,
    /// `(E1, E2)` is nonsingular.
    ENonsingular,
    /// `(E1, E1 + dE2)` is nonsingular; the next three likewise.
    E1Shift,
    E2Shift,
    SumShift,
    DiffShift,
}

impl PairCheck {
    pub const SDLOA: [PairCheck; 5] = [
        PairCheck::E1Strength,
        PairCheck::E2Strength,
        PairCheck::SumStrength,
        PairCheck::DiffStrength,
        PairCheck::ENonsingular,
    ];
    pub const SHIFT: [PairCheck; 4] =
        [PairCheck::E1Shift, PairCheck::E2Shift, PairCheck::SumShift, PairCheck::DiffShift];

    pub fn name(self) -> &'static str {
        match self {
            PairCheck::E1Strength => "e1_mt",
            PairCheck::E2Strength => "e2_mt",
            PairCheck::SumStrength => "sum_mt",
            PairCheck::DiffStrength => "diff_mt",
            PairCheck::ENonsingular => "e_nonsingular",
            PairCheck::E1Shift => "e1_shift_nonsingular",
            PairCheck::E2Shift => "e2_shift_nonsingular",
            PairCheck::SumShift => "sum_shift_nonsingular",
            PairCheck::DiffShift => "diff_shift_nonsingular",
        }
    }

    /// Evaluates this condition for the pair `(e1, e2)` with shift scalar `d`.
    pub fn evaluate(
        self,
        e1: &FMatrix,
        e2: &FMatrix,
        d: Option<FieldElem>,
        t: usize,
    ) -> Result<bool, LinalgError> {
        let shifted = |left: &FMatrix| -> Result<bool, LinalgError> {
            let d = d.ok_or_else(|| {
                LinalgError::ParameterRange("shift conditions need a scalar d".into())
            })?;
            left.hconcat(&e1.add(&e2.scale(d))?)?.is_nonsingular()
        };
        match self {
            PairCheck::E1Strength => e1.is_strength_t(t),
            PairCheck::E2Strength => e2.is_strength_t(t),
            PairCheck::SumStrength => e1.add(e2)?.is_strength_t(t),
            PairCheck::DiffStrength => e1.sub(e2)?.is_strength_t(t),
            PairCheck::ENonsingular => e1.hconcat(e2)?.is_nonsingular(),
            PairCheck::E1Shift => shifted(e1),
            PairCheck::E2Shift => shifted(e2),
            PairCheck::SumShift => shifted(&e1.add(e2)?),
            PairCheck::DiffShift => shifted(&e1.sub(e2)?),
        }
    }
}

/// A pair `(E1, E2)` of `2t x t` matrices, an optional shift scalar `d`, and
/// the outcome of every condition checked on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPairCertificate {
    pub e1: FMatrix,
    pub e2: FMatrix,
    pub d: Option<FieldElem>,
    pub checks: Vec<(PairCheck, bool)>,
}

impl MatrixPairCertificate {
    /// Evaluates the SDLOA conditions, plus the shift conditions when `d` is given.
    pub fn evaluate(e1: FMatrix, e2: FMatrix, d: Option<FieldElem>) -> Result<Self, LinalgError> {
        let t = e1.cols();
        if e1.rows() != 2 * t || e2.rows() != 2 * t || e2.cols() != t {
            return Err(LinalgError::ShapeMismatch(format!(
                "pair must be two 2t x t matrices, got {}x{} and {}x{}",
                e1.rows(),
                e1.cols(),
                e2.rows(),
                e2.cols()
            )));
        }
        let mut names = PairCheck::SDLOA.to_vec();
        if d.is_some() {
            names.extend(PairCheck::SHIFT);
        }
        let checks = names
            .into_iter()
            .map(|c| c.evaluate(&e1, &e2, d, t).map(|ok| (c, ok)))
            .collect::<Result<_, _>>()?;
        Ok(MatrixPairCertificate { e1, e2, d, checks })
    }

    pub fn t(&self) -> usize {
        self.e1.cols()
    }

    pub fn field(&self) -> &Arc<FieldTable> {
        self.e1.field()
    }

    pub fn flag(&self, check: PairCheck) -> Option<bool> {
        self.checks.iter().find(|(c, _)| *c == check).map(|&(_, ok)| ok)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|&(_, ok)| ok)
    }

    /// Holds the SDLOA conditions (all recorded true).
    pub fn supports_sdloa(&self) -> bool {
        PairCheck::SDLOA.iter().all(|&c| self.flag(c) == Some(true))
    }

    /// Holds every condition needed for the translated family.
    pub fn supports_cms(&self) -> bool {
        self.supports_sdloa() && PairCheck::SHIFT.iter().all(|&c| self.flag(c) == Some(true))
    }

    /// Re-derives every recorded flag from the matrices.
    pub fn revalidate(&self) -> bool {
        let t = self.t();
        self.checks
            .iter()
            .all(|&(c, ok)| c.evaluate(&self.e1, &self.e2, self.d, t) == Ok(ok))
    }
}

fn all_hold(
    checks: &[PairCheck],
    e1: &FMatrix,
    e2: &FMatrix,
    d: Option<FieldElem>,
    t: usize,
) -> bool {
    checks.iter().all(|c| c.evaluate(e1, e2, d, t) == Ok(true))
}

/// Scalars excluded from the block-scaled search: 0, 1 and -1.
fn search_scalars(field: &FieldTable) -> Vec<FieldElem> {
    let excluded = [FieldElem::ZERO, FieldElem::ONE, field.minus_one()];
    field.elements().filter(|e| !excluded.contains(e)).collect()
}

/// Searches `E2 = (y E11; z E21)` over scalars `y != z` outside `{0, 1, -1}`,
/// with `E1` the base matrix split into halves `E11`, `E21`. The first
/// candidate meeting all SDLOA conditions wins.
pub fn find_sdloa_pair(
    field: &Arc<FieldTable>,
    t: usize,
) -> Result<MatrixPairCertificate, LinalgError> {
    let e1 = vandermonde_base(field, t)?;
    let scalars = search_scalars(field);
    let mut candidates = 0;
    for &y in &scalars {
        for &z in &scalars {
            if y == z {
                continue;
            }
            candidates += 1;
            let e2 = e1.scale_blocks(t, y, z);
            if all_hold(&PairCheck::SDLOA, &e1, &e2, None, t) {
                return MatrixPairCertificate::evaluate(e1, e2, None);
            }
        }
    }
    Err(LinalgError::Exhausted { candidates })
}

/// Finds `(E1, E2, d)` meeting both the SDLOA and the shift conditions.
///
/// Tries `E2 = (x E11; x^2 E21)`, `d = x` for the primitive element `x`
/// first. That candidate can fail (over GF(5), `x^2 = -1`), in which case
/// the `(y, z)` search of [`find_sdloa_pair`] runs with `d` ranging over
/// the nonzero elements innermost.
pub fn find_cms_pair(
    field: &Arc<FieldTable>,
    t: usize,
) -> Result<MatrixPairCertificate, LinalgError> {
    let q = field.order();
    if q < 4 {
        return Err(LinalgError::ParameterRange(format!("need q >= 4, got q = {q}")));
    }
    let e1 = vandermonde_base(field, t)?;
    let all: Vec<PairCheck> = PairCheck::SDLOA.iter().chain(&PairCheck::SHIFT).copied().collect();

    let x = field.primitive_element();
    let x2 = field.mul(x, x);
    let e2 = e1.scale_blocks(t, x, x2);
    let mut candidates = 1;
    if all_hold(&all, &e1, &e2, Some(x), t) {
        return MatrixPairCertificate::evaluate(e1, e2, Some(x));
    }
    log::debug!("primitive-element candidate rejected over GF({q}); searching");

    let scalars = search_scalars(field);
    for &y in &scalars {
        for &z in &scalars {
            if y == z {
                continue;
            }
            let e2 = e1.scale_blocks(t, y, z);
            if !all_hold(&PairCheck::SDLOA, &e1, &e2, None, t) {
                candidates += q - 1;
                continue;
            }
            for d in field.elements().skip(1) {
                candidates += 1;
                if all_hold(&PairCheck::SHIFT, &e1, &e2, Some(d), t) {
                    return MatrixPairCertificate::evaluate(e1, e2, Some(d));
                }
            }
        }
    }
    Err(LinalgError::Exhausted { candidates })
}

/// True iff the primitive-element candidate passes every condition.
pub fn primitive_candidate_holds(field: &Arc<FieldTable>, t: usize) -> Result<bool, LinalgError> {
    let e1 = vandermonde_base(field, t)?;
    let x = field.primitive_element();
    let e2 = e1.scale_blocks(t, x, field.mul(x, x));
    let all: Vec<PairCheck> = PairCheck::SDLOA.iter().chain(&PairCheck::SHIFT).copied().collect();
    Ok(all_hold(&all, &e1, &e2, Some(x), t))
}
