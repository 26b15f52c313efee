#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use multimagic::construct::CmsFamily;
use multimagic::io::{load_cms_bundle, load_oa_family};
use multimagic::oa::ArrayFamily;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// The nine printed bimagic squares of order 9.
pub fn ternary_family() -> CmsFamily {
    load_cms_bundle(&data("ternary_family.cms")).unwrap()
}

/// The nine printed arrays: array `j` holds row `j` of the first grid.
pub fn ternary_grid0() -> ArrayFamily {
    load_oa_family(&data("ternary_grid0.oaf")).unwrap()
}

/// Base-`q` digits of `value`, least significant first.
pub fn digits(value: u64, q: u64, len: usize) -> Vec<u16> {
    (0..len).map(|i| (value / q.pow(i as u32) % q) as u16).collect()
}

/// True iff every `t` rows of the columns see each tuple equally often and
/// the count matches `N / v^t`.
pub fn oa_oracle(cols: &[Vec<u16>], v: usize, t: usize) -> bool {
    let k = cols[0].len();
    let per = cols.len() / v.pow(t as u32);
    if per * v.pow(t as u32) != cols.len() {
        return false;
    }
    let mut rows: Vec<usize> = (0..t).collect();
    loop {
        let mut tally: HashMap<Vec<u16>, usize> = HashMap::new();
        for c in cols {
            *tally.entry(rows.iter().map(|&r| c[r]).collect()).or_default() += 1;
        }
        if tally.len() != v.pow(t as u32) || tally.values().any(|&n| n != per) {
            return false;
        }
        // next t-subset of 0..k
        let mut i = t;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if rows[i] < k - t + i {
                rows[i] += 1;
                for j in i + 1..t {
                    rows[j] = rows[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Members are OAs of strength `t` with distinct columns, and the union of
/// all columns hits every `k`-tuple exactly once.
pub fn large_set_oracle(members: &[Vec<Vec<u16>>], v: usize, t: usize) -> bool {
    let k = members[0][0].len();
    let mut seen: HashMap<&[u16], usize> = HashMap::new();
    for m in members {
        if !oa_oracle(m, v, t) {
            return false;
        }
        for c in m {
            *seen.entry(c.as_slice()).or_default() += 1;
        }
    }
    seen.len() == v.pow(k as u32) && seen.values().all(|&n| n == 1)
}

/// `sum_{k < n^2} k^e / n` by direct summation.
pub fn magic_sum_oracle(n: usize, e: u32) -> u128 {
    let total: u128 = (0..(n * n) as u128).map(|k| k.pow(e)).sum();
    assert_eq!(total % n as u128, 0);
    total / n as u128
}

/// Entries are `0..n^2` and every row, column and diagonal has the right
/// power sums for `e = 1..=t`.
pub fn ms_oracle(sq: &multimagic::MagicSquare, t: u32) -> bool {
    let n = sq.order();
    let mut seen = vec![false; n * n];
    for &v in sq.entries() {
        let v = v as usize;
        if v >= n * n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (1..=t).all(|e| {
        let target = magic_sum_oracle(n, e);
        let line = |cells: &mut dyn Iterator<Item = (usize, usize)>| {
            cells.map(|(i, j)| (sq.get(i, j) as u128).pow(e)).sum::<u128>() == target
        };
        (0..n).all(|i| line(&mut (0..n).map(|j| (i, j))) && line(&mut (0..n).map(|j| (j, i))))
            && line(&mut (0..n).map(|j| (j, j)))
            && line(&mut (0..n).map(|j| (j, n - 1 - j)))
    })
}
