//! Exact verification of magic, multimagic and complementary-family
//! properties.
//!
//! Line sums are accumulated in `u128` whenever a worst-case bound shows they
//! fit, and in arbitrary precision otherwise. No floating point is involved.

use std::fmt;
use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::construct::CmsFamily;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("order and exponent must be positive")]
    ZeroParameter,
    #[error("sum of k^{e} over k < {n}^2 is not divisible by {n}")]
    NonIntegralSum { n: usize, e: u32 },
    #[error("square has {got} entries, expected {expected}")]
    EntryCount { got: usize, expected: usize },
}

/// An `n x n` square of integers with a claimed multimagic degree.
///
/// Entries are stored relative to `base`, so a valid square holds exactly
/// `0..n^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagicSquare {
    n: usize,
    t: u32,
    base: i64,
    entries: Vec<u64>,
}

impl MagicSquare {
    /// Wraps row-major entries. No magic property is checked here.
    pub fn new(n: usize, t: u32, entries: Vec<u64>) -> Result<Self, VerifyError> {
        MagicSquare::with_base(n, t, 0, entries)
    }

    pub fn with_base(n: usize, t: u32, base: i64, entries: Vec<u64>) -> Result<Self, VerifyError> {
        if n == 0 {
            return Err(VerifyError::ZeroParameter);
        }
        if entries.len() != n * n {
            return Err(VerifyError::EntryCount { got: entries.len(), expected: n * n });
        }
        Ok(MagicSquare { n, t, base, entries })
    }

    pub fn from_rows(t: u32, rows: &[Vec<u64>]) -> Result<Self, VerifyError> {
        let n = rows.len();
        let entries: Vec<u64> = rows.iter().flatten().copied().collect();
        MagicSquare::new(n, t, entries)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    pub fn set_degree(&mut self, t: u32) {
        self.t = t;
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.entries[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn transpose(&self) -> MagicSquare {
        let n = self.n;
        let entries = (0..n * n).map(|idx| self.entries[(idx % n) * n + idx / n]).collect();
        MagicSquare { entries, ..self.clone() }
    }

    /// Left-right mirror image.
    pub fn reflect(&self) -> MagicSquare {
        let n = self.n;
        let entries = (0..n * n).map(|idx| self.entries[idx - idx % n + (n - 1 - idx % n)]).collect();
        MagicSquare { entries, ..self.clone() }
    }

    /// True iff the entries are exactly `0..n^2`, each once.
    pub fn is_consecutive(&self) -> bool {
        let total = self.n * self.n;
        let mut seen = vec![false; total];
        for &e in &self.entries {
            match usize::try_from(e) {
                Ok(i) if i < total && !seen[i] => seen[i] = true,
                _ => return false,
            }
        }
        true
    }
}

/// Exact `sum_{k < n^2} k^e / n`.
pub fn magic_sum(n: usize, e: u32) -> Result<BigUint, VerifyError> {
    if n == 0 || e == 0 {
        return Err(VerifyError::ZeroParameter);
    }
    let total = power_sum(n as u64 * n as u64, e);
    let n_big = BigUint::from(n);
    if !(&total % &n_big).is_zero() {
        return Err(VerifyError::NonIntegralSum { n, e });
    }
    Ok(total / n_big)
}

/// `sum_{k < upper} k^e` by direct summation.
fn power_sum(upper: u64, e: u32) -> BigUint {
    let last = upper.saturating_sub(1) as u128;
    let fits = last
        .checked_pow(e)
        .and_then(|m| m.checked_mul(upper as u128))
        .is_some();
    if fits {
        let sum: u128 = (0..upper).map(|k| (k as u128).pow(e)).sum();
        BigUint::from(sum)
    } else {
        (0..upper).map(|k| BigUint::from(k).pow(e)).sum()
    }
}

/// Largest possible sum of `count` terms `x^e` with `x <= max`, if it fits `u128`.
fn sum_bound(count: usize, max: u64, e: u32) -> Option<u128> {
    (max as u128).checked_pow(e)?.checked_mul(count as u128)
}

trait Accum: Clone + PartialEq + Zero + for<'a> AddAssign<&'a Self> + Send {
    fn from_u64(v: u64) -> Self;
    fn times_u64(&self, v: u64) -> Self;
    fn from_big(v: &BigUint) -> Option<Self>;
}

impl Accum for u128 {
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    fn times_u64(&self, v: u64) -> Self {
        self * v as u128
    }
    fn from_big(v: &BigUint) -> Option<Self> {
        v.to_u128()
    }
}

impl Accum for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn times_u64(&self, v: u64) -> Self {
        self * v
    }
    fn from_big(v: &BigUint) -> Option<Self> {
        Some(v.clone())
    }
}

/// Power sums of every line of a square, for exponents `1..=t`.
/// Index `[e - 1][line]`.
struct LineSums<A> {
    rows: Vec<Vec<A>>,
    cols: Vec<Vec<A>>,
    main: Vec<A>,
    back: Vec<A>,
}

fn line_sums<A: Accum>(sq: &MagicSquare, t: u32) -> LineSums<A> {
    let n = sq.n;
    let t = t as usize;
    let mut sums = LineSums {
        rows: vec![vec![A::zero(); n]; t],
        cols: vec![vec![A::zero(); n]; t],
        main: vec![A::zero(); t],
        back: vec![A::zero(); t],
    };
    let mut row_acc = vec![A::zero(); t];
    for i in 0..n {
        row_acc.iter_mut().for_each(|a| *a = A::zero());
        for (j, &x) in sq.row(i).iter().enumerate() {
            let mut p = A::from_u64(x);
            // e indexes five per-degree accumulators in lockstep
            #[allow(clippy::needless_range_loop)]
            for e in 0..t {
                row_acc[e] += &p;
                sums.cols[e][j] += &p;
                if j == i {
                    sums.main[e] += &p;
                }
                if j == n - 1 - i {
                    sums.back[e] += &p;
                }
                if e + 1 < t {
                    p = p.times_u64(x);
                }
            }
        }
        for (rows, acc) in sums.rows.iter_mut().zip(&row_acc) {
            rows[i] = acc.clone();
        }
    }
    sums
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineKind {
    Row,
    Column,
    MainDiagonal,
    BackDiagonal,
}

impl LineKind {
    pub fn name(self) -> &'static str {
        match self {
            LineKind::Row => "row",
            LineKind::Column => "column",
            LineKind::MainDiagonal => "main diagonal",
            LineKind::BackDiagonal => "back diagonal",
        }
    }
}

/// A line whose power sum missed its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LineFailure {
    pub degree: u32,
    pub kind: LineKind,
    pub index: usize,
}

impl fmt::Display for LineFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LineKind::Row | LineKind::Column => {
                write!(f, "degree {} {} {}", self.degree, self.kind.name(), self.index)
            }
            _ => write!(f, "degree {} {}", self.degree, self.kind.name()),
        }
    }
}

/// Pass counts for one exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTally {
    pub degree: u32,
    /// `None` when the target sum is not an integer.
    pub magic_sum: Option<BigUint>,
    pub rows_ok: usize,
    pub columns_ok: usize,
    pub main_ok: bool,
    pub back_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub order: usize,
    pub degree: u32,
    pub consecutive: bool,
    pub tallies: Vec<DegreeTally>,
    /// Every failing line, ordered by degree, kind and index.
    pub failures: Vec<LineFailure>,
    pub verdict: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.verdict
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.verdict { "PASS" } else { "FAIL" };
        writeln!(f, "MS({}, {}): {verdict}", self.order, self.degree)?;
        writeln!(f, "  entries 0..{}^2 each once: {}", self.order, self.consecutive)?;
        for tally in &self.tallies {
            let target = tally.magic_sum.as_ref().map_or("non-integral".into(), |s| s.to_string());
            writeln!(
                f,
                "  degree {}: S = {target}, rows {}/{}, columns {}/{}, main diagonal {}, back diagonal {}",
                tally.degree,
                tally.rows_ok,
                self.order,
                tally.columns_ok,
                self.order,
                ok(tally.main_ok),
                ok(tally.back_ok)
            )?;
        }
        for failure in &self.failures {
            writeln!(f, "  failed: {failure}")?;
        }
        Ok(())
    }
}

fn ok(b: bool) -> &'static str {
    if b { "ok" } else { "FAILED" }
}

fn tally_lines<A: Accum>(sq: &MagicSquare, t: u32, report: &mut VerifyReport) {
    let n = sq.n;
    let sums = line_sums::<A>(sq, t);
    for e in 1..=t {
        let target = magic_sum(n, e).ok();
        let want = target.as_ref().and_then(A::from_big);
        let idx = (e - 1) as usize;
        let hit = |s: &A| want.as_ref() == Some(s);
        let mut tally = DegreeTally {
            degree: e,
            magic_sum: target,
            rows_ok: 0,
            columns_ok: 0,
            main_ok: hit(&sums.main[idx]),
            back_ok: hit(&sums.back[idx]),
        };
        for (kind, lines) in [(LineKind::Row, &sums.rows[idx]), (LineKind::Column, &sums.cols[idx])] {
            for (index, s) in lines.iter().enumerate() {
                if hit(s) {
                    match kind {
                        LineKind::Row => tally.rows_ok += 1,
                        _ => tally.columns_ok += 1,
                    }
                } else {
                    report.failures.push(LineFailure { degree: e, kind, index });
                }
            }
        }
        if !tally.main_ok {
            report.failures.push(LineFailure { degree: e, kind: LineKind::MainDiagonal, index: 0 });
        }
        if !tally.back_ok {
            report.failures.push(LineFailure { degree: e, kind: LineKind::BackDiagonal, index: 0 });
        }
        report.tallies.push(tally);
    }
}

/// Checks every row, column and both diagonals of `sq^e` for `e = 1..=t`
/// against `S_e(n)`, and that the entries are `0..n^2`.
pub fn verify_ms(sq: &MagicSquare, t: u32) -> VerifyReport {
    let n = sq.n;
    let mut report = VerifyReport {
        order: n,
        degree: t,
        consecutive: sq.is_consecutive(),
        tallies: Vec::with_capacity(t as usize),
        failures: Vec::new(),
        verdict: false,
    };
    let max = sq.entries.iter().copied().max().unwrap_or(0);
    if t > 0 && sum_bound(n, max, t).is_some() {
        tally_lines::<u128>(sq, t, &mut report);
    } else {
        tally_lines::<BigUint>(sq, t, &mut report);
    }
    report.verdict = report.consecutive && report.failures.is_empty();
    report
}

/// Which complementary condition a family-level failure belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CmsCondition {
    /// Row totals across all members.
    R1,
    /// Column totals.
    R2,
    /// Main diagonal total.
    R3Main,
    /// Back diagonal total.
    R3Back,
}

impl fmt::Display for CmsCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmsCondition::R1 => "R1 (row)",
            CmsCondition::R2 => "R2 (column)",
            CmsCondition::R3Main => "R3 (main diagonal)",
            CmsCondition::R3Back => "R3 (back diagonal)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmsReport {
    pub count: usize,
    pub order: usize,
    /// Multimagic degree of the members; the family conditions use `degree + 1`.
    pub degree: u32,
    /// `count * S_{degree+1}(order)`, when integral.
    pub target: Option<BigUint>,
    pub members: Vec<VerifyReport>,
    /// Failing family conditions with the line index (0 for diagonals).
    pub failures: Vec<(CmsCondition, usize)>,
    pub verdict: bool,
}

impl CmsReport {
    pub fn passed(&self) -> bool {
        self.verdict
    }
}

impl fmt::Display for CmsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.verdict { "PASS" } else { "FAIL" };
        writeln!(f, "{}-CMS({}, {}): {verdict}", self.count, self.order, self.degree)?;
        let target = self.target.as_ref().map_or("non-integral".into(), |s| s.to_string());
        writeln!(f, "  family target at exponent {}: {target}", self.degree + 1)?;
        let good = self.members.iter().filter(|r| r.verdict).count();
        writeln!(f, "  members passing MS({}, {}): {good}/{}", self.order, self.degree, self.count)?;
        for (i, r) in self.members.iter().enumerate().filter(|(_, r)| !r.verdict) {
            writeln!(f, "  member {i} failed: {} line(s), consecutive {}", r.failures.len(), r.consecutive)?;
        }
        for (cond, idx) in &self.failures {
            match cond {
                CmsCondition::R1 | CmsCondition::R2 => writeln!(f, "  {cond} failed at index {idx}")?,
                _ => writeln!(f, "  {cond} failed")?,
            }
        }
        Ok(())
    }
}

fn family_sums<A: Accum>(fam: &CmsFamily, exp: u32) -> LineSums<A> {
    let n = fam.order();
    let mut total = LineSums {
        rows: vec![vec![A::zero(); n]],
        cols: vec![vec![A::zero(); n]],
        main: vec![A::zero()],
        back: vec![A::zero()],
    };
    for member in fam.members() {
        let sums = line_sums::<A>(member, exp);
        let last = (exp - 1) as usize;
        for i in 0..n {
            total.rows[0][i] += &sums.rows[last][i];
            total.cols[0][i] += &sums.cols[last][i];
        }
        total.main[0] += &sums.main[last];
        total.back[0] += &sums.back[last];
    }
    total
}

fn check_family<A: Accum>(fam: &CmsFamily, target: Option<&BigUint>, failures: &mut Vec<(CmsCondition, usize)>) {
    let exp = fam.degree() + 1;
    let sums = family_sums::<A>(fam, exp);
    let want = target.and_then(A::from_big);
    let hit = |s: &A| want.as_ref() == Some(s);
    for (i, s) in sums.rows[0].iter().enumerate() {
        if !hit(s) {
            failures.push((CmsCondition::R1, i));
        }
    }
    for (j, s) in sums.cols[0].iter().enumerate() {
        if !hit(s) {
            failures.push((CmsCondition::R2, j));
        }
    }
    if !hit(&sums.main[0]) {
        failures.push((CmsCondition::R3Main, 0));
    }
    if !hit(&sums.back[0]) {
        failures.push((CmsCondition::R3Back, 0));
    }
}

/// Checks each member at the family degree `t`, then R1-R3 at exponent `t + 1`.
pub fn verify_cms(fam: &CmsFamily) -> CmsReport {
    let n = fam.order();
    let t = fam.degree();
    let m = fam.count();
    let members: Vec<VerifyReport> = fam.members().iter().map(|sq| verify_ms(sq, t)).collect();
    let target = magic_sum(n, t + 1).ok().map(|s| s * m);
    let mut failures = Vec::new();
    let max = fam.members().iter().flat_map(|s| s.entries().iter().copied()).max().unwrap_or(0);
    if sum_bound(n * m, max, t + 1).is_some() {
        check_family::<u128>(fam, target.as_ref(), &mut failures);
    } else {
        check_family::<BigUint>(fam, target.as_ref(), &mut failures);
    }
    let verdict = members.iter().all(|r| r.verdict) && failures.is_empty();
    CmsReport { count: m, order: n, degree: t, target, members, failures, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;

    // the classical 3x3 square shifted to 0..9
    fn lo_shu() -> MagicSquare {
        MagicSquare::from_rows(1, &[vec![1, 8, 3], vec![6, 4, 2], vec![5, 0, 7]]).unwrap()
    }

    #[test]
    fn magic_sums_for_nine() {
        assert_eq!(magic_sum(9, 1).unwrap(), BigUint::from(360u32));
        assert_eq!(magic_sum(9, 2).unwrap(), BigUint::from(19320u32));
        assert_eq!(magic_sum(9, 3).unwrap(), BigUint::from(1_166_400u32));
        assert_eq!(magic_sum(0, 1), Err(VerifyError::ZeroParameter));
    }

    #[test]
    fn lo_shu_is_magic_not_bimagic() {
        let sq = lo_shu();
        assert!(verify_ms(&sq, 1).passed());
        let r = verify_ms(&sq, 2);
        assert!(!r.passed());
        assert!(r.failures.iter().all(|f| f.degree == 2));
    }

    #[test]
    fn trivial_square() {
        let sq = MagicSquare::new(1, 5, vec![0]).unwrap();
        assert!(verify_ms(&sq, 5).passed());
    }

    #[test]
    fn duplicate_entries_fail_consecutive_check() {
        let sq = MagicSquare::from_rows(1, &[vec![0, 0], vec![0, 0]]).unwrap();
        let r = verify_ms(&sq, 1);
        assert!(!r.consecutive && !r.verdict);
    }

    #[test]
    fn reports_every_failed_line() {
        let mut sq = lo_shu();
        // swap 1 and 6 (rows 0 and 1, column 0)
        sq.set(0, 0, 6);
        sq.set(1, 0, 1);
        let r = verify_ms(&sq, 1);
        assert!(r.consecutive);
        let kinds: Vec<_> = r.failures.iter().map(|f| (f.kind, f.index)).collect();
        assert_eq!(
            kinds,
            vec![(LineKind::Row, 0), (LineKind::Row, 1), (LineKind::MainDiagonal, 0)]
        );
    }

    #[test]
    fn entry_count_checked() {
        assert_eq!(
            MagicSquare::new(2, 1, vec![0, 1, 2]),
            Err(VerifyError::EntryCount { got: 3, expected: 4 })
        );
    }

    #[test]
    fn transpose_and_reflect() {
        let sq = lo_shu();
        assert_eq!(sq.transpose().row(0), &[1, 6, 5]);
        assert_eq!(sq.reflect().row(0), &[3, 8, 1]);
        assert_eq!(sq.transpose().transpose(), sq);
    }
}
