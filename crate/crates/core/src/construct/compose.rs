use rayon::prelude::*;

use super::cms::CmsFamily;
use super::{index_to_vector, vector_to_index, ConstructError};
use crate::gf::{FieldElem, FieldTable};
use crate::verify::{verify_cms, verify_ms, MagicSquare};

fn require_ms(sq: &MagicSquare, t: u32, what: &str) -> Result<(), ConstructError> {
    if sq.base() != 0 || !verify_ms(sq, t).passed() {
        return Err(ConstructError::InputCheck { what: format!("{what} as MS({}, {t})", sq.order()) });
    }
    Ok(())
}

fn checked_output(sq: MagicSquare) -> Result<MagicSquare, ConstructError> {
    let report = verify_ms(&sq, sq.degree());
    if !report.passed() {
        return Err(ConstructError::OutputCheck {
            what: format!("MS({}, {})", sq.order(), sq.degree()),
            failures: report.failures.len(),
        });
    }
    Ok(sq)
}

/// Product of `MS(m, t)` and `MS(n, t)`: entry at row `i1 n + i2`, column
/// `j1 n + j2` is `a[i1][j1] n^2 + b[i2][j2]`.
///
/// The degree is the smaller of the two inputs' degrees.
pub fn product_compose(a: &MagicSquare, b: &MagicSquare) -> Result<MagicSquare, ConstructError> {
    let t = a.degree().min(b.degree());
    require_ms(a, t, "left factor")?;
    require_ms(b, t, "right factor")?;
    let (m, n) = (a.order(), b.order());
    let size = m * n;
    let nn = (n * n) as u64;
    let mut entries = vec![0u64; size * size];
    entries.par_chunks_mut(size).enumerate().for_each(|(row, out)| {
        let (i1, i2) = (row / n, row % n);
        for (col, slot) in out.iter_mut().enumerate() {
            *slot = a.get(i1, col / n) * nn + b.get(i2, col % n);
        }
    });
    checked_output(MagicSquare::new(size, t, entries)?)
}

/// Which family member fills each block of a block-composed square.
///
/// Every row, column and both diagonals of `f` contain each of the `m'`
/// symbols exactly `m / m'` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockAssignment {
    m: usize,
    m_prime: usize,
    f: Vec<usize>,
}

impl BlockAssignment {
    /// Row-major `m x m` table of symbols below `m_prime`.
    pub fn new(m: usize, m_prime: usize, f: Vec<usize>) -> Result<Self, ConstructError> {
        if m == 0 || m_prime == 0 || !m.is_multiple_of(m_prime) {
            return Err(ConstructError::Precondition(format!(
                "symbol count {m_prime} does not divide grid order {m}"
            )));
        }
        if f.len() != m * m || f.iter().any(|&s| s >= m_prime) {
            return Err(ConstructError::Precondition("assignment table has the wrong shape".into()));
        }
        let assign = BlockAssignment { m, m_prime, f };
        let balanced = |cells: &mut dyn Iterator<Item = usize>| {
            let mut tally = vec![0usize; m_prime];
            cells.for_each(|s| tally[s] += 1);
            tally.iter().all(|&c| c == m / m_prime)
        };
        let lines_ok = (0..m).all(|i| {
            balanced(&mut (0..m).map(|j| assign.symbol(i, j)))
                && balanced(&mut (0..m).map(|j| assign.symbol(j, i)))
        });
        if !lines_ok
            || !balanced(&mut (0..m).map(|j| assign.symbol(j, j)))
            || !balanced(&mut (0..m).map(|j| assign.symbol(j, m - 1 - j)))
        {
            return Err(ConstructError::Precondition("assignment is not balanced".into()));
        }
        Ok(assign)
    }

    /// Grid order.
    pub fn order(&self) -> usize {
        self.m
    }

    pub fn symbols(&self) -> usize {
        self.m_prime
    }

    pub fn symbol(&self, i: usize, j: usize) -> usize {
        self.f[i * self.m + j]
    }
}

/// `f(X, Y) = pi(alpha X + beta Y)` over `F_q^t_big`, where `pi` keeps the
/// first `t_small` coordinates.
///
/// `(alpha, beta)` is the first pair in index order (beta outer) with both
/// nonzero, `alpha != beta` and `alpha + beta != 0`. Those conditions make
/// rows, columns, the main diagonal and (through the digitwise complement)
/// the back diagonal balanced.
pub fn make_block_assignment(
    field: &FieldTable,
    t_big: usize,
    t_small: usize,
) -> Result<BlockAssignment, ConstructError> {
    if t_big == 0 || t_small > t_big {
        return Err(ConstructError::Precondition(format!(
            "need 0 <= t_small <= t_big and t_big >= 1, got {t_small} and {t_big}"
        )));
    }
    let q = field.order();
    let (alpha, beta) = scalar_pair(field).ok_or_else(|| {
        ConstructError::Precondition(format!("GF({q}) has no scalars alpha != beta with alpha + beta != 0"))
    })?;
    let m = q.pow(t_big as u32);
    let vectors: Vec<Vec<u16>> = (0..m).map(|i| index_to_vector(i, q, t_big)).collect();
    let scale = |c: FieldElem, v: &[u16]| -> Vec<u16> {
        v.iter().map(|&x| field.mul_raw(c.index(), x)).collect()
    };
    let ax: Vec<Vec<u16>> = vectors.iter().map(|v| scale(alpha, v)).collect();
    let by: Vec<Vec<u16>> = vectors.iter().map(|v| scale(beta, v)).collect();
    let mut f = Vec::with_capacity(m * m);
    for x in &ax {
        for y in &by {
            let sum: Vec<u16> = x[..t_small].iter().zip(&y[..t_small]).map(|(&a, &b)| field.add_raw(a, b)).collect();
            f.push(vector_to_index(&sum, q));
        }
    }
    BlockAssignment::new(m, q.pow(t_small as u32), f)
}

fn scalar_pair(field: &FieldTable) -> Option<(FieldElem, FieldElem)> {
    let nonzero: Vec<FieldElem> = field.elements().skip(1).collect();
    nonzero.iter().find_map(|&beta| {
        nonzero
            .iter()
            .find(|&&alpha| alpha != beta && field.add(alpha, beta) != FieldElem::ZERO)
            .map(|&alpha| (alpha, beta))
    })
}

/// Block composition of `MS(m, t)` with a family of `m'` squares of order
/// `n` and degree `t - 1`: block `(I, J)` is `n^2 a[I][J]` plus member
/// `f(I, J)`.
pub fn cms_compose(
    a: &MagicSquare,
    fam: &CmsFamily,
    assign: &BlockAssignment,
) -> Result<MagicSquare, ConstructError> {
    let t = a.degree();
    if fam.degree() + 1 != t {
        return Err(ConstructError::Precondition(format!(
            "family degree {} must be one less than the square's degree {t}",
            fam.degree()
        )));
    }
    let m = a.order();
    if assign.order() != m || assign.symbols() != fam.count() {
        return Err(ConstructError::Precondition(format!(
            "assignment over {} symbols on a {}x{} grid does not fit {} members and order {m}",
            assign.symbols(),
            assign.order(),
            assign.order(),
            fam.count()
        )));
    }
    require_ms(a, t, "outer square")?;
    if fam.members().iter().any(|s| s.base() != 0) || !verify_cms(fam).passed() {
        return Err(ConstructError::InputCheck {
            what: format!("{}-CMS({}, {})", fam.count(), fam.order(), fam.degree()),
        });
    }
    let n = fam.order();
    let size = m * n;
    let nn = (n * n) as u64;
    let members = fam.members();
    let mut entries = vec![0u64; size * size];
    entries.par_chunks_mut(size).enumerate().for_each(|(row, out)| {
        let (bi, i) = (row / n, row % n);
        for (col, slot) in out.iter_mut().enumerate() {
            let (bj, j) = (col / n, col % n);
            *slot = a.get(bi, bj) * nn + members[assign.symbol(bi, bj)].get(i, j);
        }
    });
    checked_output(MagicSquare::new(size, t, entries)?)
}
