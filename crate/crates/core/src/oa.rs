//! Orthogonal arrays, large sets, and the double / strong conditions on
//! families of arrays.
//!
//! All checks are exhaustive tallies. The kernels work on borrowed column
//! slices so that a grid of cells can be checked in any orientation without
//! copying it into separate arrays.

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OaError {
    #[error("array needs k >= 1 rows, at least one column and v >= 2 levels")]
    EmptyShape,
    #[error("strength {t} out of range for k = {k}")]
    Strength { t: usize, k: usize },
    #[error("{cols} columns is not a multiple of v^t = {block}")]
    IndexNotIntegral { cols: usize, block: usize },
    #[error("entry {value} at row {row}, column {col} is not below v = {v}")]
    SymbolOutOfRange { row: usize, col: usize, value: u16, v: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("family has {got} columns in total, a large set needs v^k = {expected}")]
    ColumnTotal { got: usize, expected: usize },
    #[error("family must not be empty")]
    EmptyFamily,
}

/// A `k x N` array over `I_v` with declared strength `t`.
///
/// Stored column-major so columns are contiguous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthArray {
    k: usize,
    n_cols: usize,
    v: usize,
    t: usize,
    cols: Vec<u16>,
}

impl OrthArray {
    /// `columns` holds `N` columns of `k` symbols each, concatenated.
    pub fn from_columns(k: usize, v: usize, t: usize, columns: Vec<u16>) -> Result<Self, OaError> {
        if k == 0 || v < 2 || columns.is_empty() {
            return Err(OaError::EmptyShape);
        }
        if !columns.len().is_multiple_of(k) {
            return Err(OaError::Shape(format!(
                "{} symbols do not split into columns of height {k}",
                columns.len()
            )));
        }
        if t == 0 || t > k {
            return Err(OaError::Strength { t, k });
        }
        let n_cols = columns.len() / k;
        let block = v.checked_pow(t as u32).unwrap_or(usize::MAX);
        if !n_cols.is_multiple_of(block) {
            return Err(OaError::IndexNotIntegral { cols: n_cols, block });
        }
        if let Some(pos) = columns.iter().position(|&s| s as usize >= v) {
            return Err(OaError::SymbolOutOfRange {
                row: pos % k,
                col: pos / k,
                value: columns[pos],
                v,
            });
        }
        Ok(OrthArray { k, n_cols, v, t, cols: columns })
    }

    /// Builds from `k` rows of equal length.
    pub fn from_rows<R: AsRef<[u16]>>(v: usize, t: usize, rows: &[R]) -> Result<Self, OaError> {
        let k = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != n) {
            return Err(OaError::Shape("ragged rows".into()));
        }
        let mut cols = Vec::with_capacity(k * n);
        for j in 0..n {
            cols.extend(rows.iter().map(|r| r.as_ref()[j]));
        }
        OrthArray::from_columns(k, v, t, cols)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// `N / v^t`.
    pub fn index(&self) -> usize {
        self.n_cols / self.v.pow(self.t as u32)
    }

    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.cols[col * self.k + row]
    }

    pub fn column(&self, j: usize) -> &[u16] {
        &self.cols[j * self.k..(j + 1) * self.k]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[u16]> {
        self.cols.chunks_exact(self.k)
    }

    pub fn rows(&self) -> Vec<Vec<u16>> {
        (0..self.k).map(|i| (0..self.n_cols).map(|j| self.get(i, j)).collect()).collect()
    }

    pub(crate) fn column_refs(&self) -> Vec<&[u16]> {
        self.columns().collect()
    }
}

/// An ordered family of arrays sharing `k`, `v`, `t` and column count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrayFamily {
    members: Vec<OrthArray>,
}

impl ArrayFamily {
    pub fn new(members: Vec<OrthArray>) -> Result<Self, OaError> {
        let first = members.first().ok_or(OaError::EmptyFamily)?;
        let shape = (first.k, first.v, first.t, first.n_cols);
        if let Some(bad) = members.iter().position(|a| (a.k, a.v, a.t, a.n_cols) != shape) {
            return Err(OaError::Shape(format!("member {bad} differs in shape from member 0")));
        }
        Ok(ArrayFamily { members })
    }

    pub fn members(&self) -> &[OrthArray] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn k(&self) -> usize {
        self.members[0].k
    }

    pub fn v(&self) -> usize {
        self.members[0].v
    }

    pub fn n_cols(&self) -> usize {
        self.members[0].n_cols
    }

    /// The arrays `B_j` whose `s`-th column is the `j`-th column of member `s`.
    pub fn transposed(&self, t: usize) -> Result<ArrayFamily, OaError> {
        let (k, v) = (self.k(), self.v());
        let members = (0..self.n_cols())
            .map(|j| {
                let cols = self.members.iter().flat_map(|a| a.column(j).iter().copied()).collect();
                OrthArray::from_columns(k, v, t, cols)
            })
            .collect::<Result<Vec<_>, _>>()?;
        ArrayFamily::new(members)
    }

    /// `D`, whose `j`-th column is column `j` of member `j`, and `D'`, whose
    /// `j`-th column is column `N-1-j` of member `j`.
    pub fn diagonal_arrays(&self, t: usize) -> Result<(OrthArray, OrthArray), OaError> {
        let n = self.n_cols();
        if self.len() != n {
            return Err(OaError::Shape(format!(
                "diagonals need as many members as columns, got {} members of {n} columns",
                self.len()
            )));
        }
        let (k, v) = (self.k(), self.v());
        let main = (0..n).flat_map(|j| self.members[j].column(j).iter().copied()).collect();
        let back = (0..n).flat_map(|j| self.members[j].column(n - 1 - j).iter().copied()).collect();
        Ok((OrthArray::from_columns(k, v, t, main)?, OrthArray::from_columns(k, v, t, back)?))
    }
}

/// Breakdown of a strong double large set check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SdloaCheck {
    /// Members form a large set.
    pub large_set: bool,
    /// The transposed arrays `B_j` form a large set.
    pub transposed_large_set: bool,
    /// `D` is an orthogonal array.
    pub diagonal: bool,
    /// `D'` is an orthogonal array.
    pub back_diagonal: bool,
}

impl SdloaCheck {
    pub fn holds(&self) -> bool {
        self.large_set && self.transposed_large_set && self.diagonal && self.back_diagonal
    }
}

/// Base-v code of a column, first row least significant.
fn column_code(col: &[u16], v: usize) -> Option<u128> {
    col.iter().rev().try_fold(0u128, |acc, &s| acc.checked_mul(v as u128)?.checked_add(s as u128))
}

/// Every `t`-subset of rows sees every `t`-tuple exactly `N / v^t` times.
pub(crate) fn strength_holds(cols: &[&[u16]], k: usize, v: usize, t: usize) -> bool {
    let Some(block) = v.checked_pow(t as u32) else {
        return false;
    };
    if cols.is_empty() || !cols.len().is_multiple_of(block) {
        return false;
    }
    let lambda = (cols.len() / block) as u32;
    let mut counts = vec![0u32; block];
    (0..k).combinations(t).all(|rows| {
        counts.iter_mut().for_each(|c| *c = 0);
        for col in cols {
            let code = rows.iter().rev().fold(0usize, |acc, &r| acc * v + col[r] as usize);
            counts[code] += 1;
        }
        counts.iter().all(|&c| c == lambda)
    })
}

pub(crate) fn columns_distinct(cols: &[&[u16]], v: usize) -> bool {
    let codes: Option<Vec<u128>> = cols.iter().map(|c| column_code(c, v)).collect();
    match codes {
        Some(mut codes) => {
            codes.sort_unstable();
            codes.windows(2).all(|w| w[0] != w[1])
        }
        None => {
            let mut sorted = cols.to_vec();
            sorted.sort_unstable();
            sorted.windows(2).all(|w| w[0] != w[1])
        }
    }
}

/// The union of all columns hits every k-tuple over `I_v` exactly once.
pub(crate) fn covers_each_tuple_once<'a>(
    cols: impl Iterator<Item = &'a [u16]>,
    total: usize,
    v: usize,
) -> bool {
    let mut seen = vec![false; total];
    for col in cols {
        match column_code(col, v) {
            Some(code) if (code as usize) < total && !seen[code as usize] => {
                seen[code as usize] = true
            }
            _ => return false,
        }
    }
    seen.iter().all(|&s| s)
}

/// Large-set check on `count` members whose columns `member(i)` yields.
///
/// Every member must be a simple OA of strength `t`, and the members'
/// columns must jointly cover `I_v^k` exactly once. Callers guarantee the
/// total column count equals `v^k`.
pub(crate) fn large_set_by<'a, F>(count: usize, member: F, k: usize, v: usize, t: usize) -> bool
where
    F: Fn(usize) -> Vec<&'a [u16]> + Sync,
{
    let each_ok = (0..count).into_par_iter().all(|i| {
        let cols = member(i);
        strength_holds(&cols, k, v, t) && columns_distinct(&cols, v)
    });
    if !each_ok {
        return false;
    }
    let total: usize = (0..count).map(|i| member(i).len()).sum();
    covers_each_tuple_once((0..count).flat_map(&member), total, v)
}

pub(crate) fn tuple_count(k: usize, v: usize) -> Option<usize> {
    v.checked_pow(k as u32)
}

pub fn verify_oa(arr: &OrthArray) -> bool {
    strength_holds(&arr.column_refs(), arr.k, arr.v, arr.t)
}

/// Same as [`verify_oa`] but at an explicit strength.
pub fn verify_oa_at(arr: &OrthArray, t: usize) -> bool {
    t >= 1 && t <= arr.k && strength_holds(&arr.column_refs(), arr.k, arr.v, t)
}

pub fn is_simple(arr: &OrthArray) -> bool {
    columns_distinct(&arr.column_refs(), arr.v)
}

fn check_total(fam: &ArrayFamily, t: usize) -> Result<(), OaError> {
    if t == 0 || t > fam.k() {
        return Err(OaError::Strength { t, k: fam.k() });
    }
    let got = fam.len() * fam.n_cols();
    match tuple_count(fam.k(), fam.v()) {
        Some(expected) if expected == got => Ok(()),
        expected => Err(OaError::ColumnTotal { got, expected: expected.unwrap_or(usize::MAX) }),
    }
}

/// True iff the members are simple OAs of strength `t` whose columns cover
/// every k-tuple exactly once.
pub fn verify_large_set(fam: &ArrayFamily, t: usize) -> Result<bool, OaError> {
    check_total(fam, t)?;
    Ok(large_set_by(fam.len(), |i| fam.members[i].column_refs(), fam.k(), fam.v(), t))
}

/// Full breakdown of the strong double large set conditions.
pub fn check_sdloa(fam: &ArrayFamily, t: usize) -> Result<SdloaCheck, OaError> {
    check_total(fam, t)?;
    let (k, v) = (fam.k(), fam.v());
    let transposed = fam.transposed(t)?;
    let (d, d_back) = fam.diagonal_arrays(t)?;
    Ok(SdloaCheck {
        large_set: large_set_by(fam.len(), |i| fam.members[i].column_refs(), k, v, t),
        transposed_large_set: large_set_by(
            transposed.len(),
            |i| transposed.members[i].column_refs(),
            k,
            v,
            t,
        ),
        diagonal: verify_oa_at(&d, t),
        back_diagonal: verify_oa_at(&d_back, t),
    })
}

pub fn verify_sdloa(fam: &ArrayFamily, t: usize) -> Result<bool, OaError> {
    check_sdloa(fam, t).map(|c| c.holds())
}
