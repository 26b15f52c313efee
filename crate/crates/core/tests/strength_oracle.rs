//! Strength and nonsingularity against a brute-force dependency search: a
//! set of rows is dependent iff some nonzero coefficient vector sends it to
//! zero.

use std::sync::Arc;

use itertools::Itertools;
use multimagic::gf::{FieldElem, FieldTable};
use multimagic::linalg::{
    find_cms_pair, find_sdloa_pair, primitive_candidate_holds, vandermonde_base, FMatrix, PairCheck,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gf(q: u32) -> Arc<FieldTable> {
    Arc::new(FieldTable::for_order(q).unwrap())
}

/// Some nonzero `c` with `sum c_i rows_i = 0`.
fn dependent(f: &FieldTable, rows: &[Vec<u16>]) -> bool {
    let q = f.order();
    let t = rows.len();
    let width = rows[0].len();
    (1..q.pow(t as u32)).any(|code| {
        let coeffs: Vec<u16> = (0..t).map(|i| (code / q.pow(i as u32) % q) as u16).collect();
        (0..width).all(|col| {
            rows.iter().zip(&coeffs).fold(FieldElem::ZERO, |acc, (row, &c)| {
                f.add(acc, f.mul(FieldElem::new(c), FieldElem::new(row[col])))
            }) == FieldElem::ZERO
        })
    })
}

fn strength_oracle(f: &FieldTable, rows: &[Vec<u16>], t: usize) -> bool {
    rows.iter().combinations(t).all(|pick| {
        let pick: Vec<Vec<u16>> = pick.into_iter().cloned().collect();
        !dependent(f, &pick)
    })
}

#[test]
fn exhaustive_small_shapes() {
    // every 4x2 matrix over GF(2) and GF(3), every 3x2 over GF(4)
    for (q, k, s) in [(2u32, 4usize, 2usize), (3, 4, 2), (4, 3, 2)] {
        let f = gf(q);
        let cells = k * s;
        for code in 0..(q as usize).pow(cells as u32) {
            let flat: Vec<u16> = (0..cells).map(|i| (code / (q as usize).pow(i as u32) % q as usize) as u16).collect();
            let rows: Vec<Vec<u16>> = flat.chunks(s).map(|c| c.to_vec()).collect();
            let m = FMatrix::from_rows(f.clone(), &rows).unwrap();
            for t in 1..=s {
                assert_eq!(m.is_strength_t(t).unwrap(), strength_oracle(&f, &rows, t), "q={q} {m} t={t}");
            }
            assert_eq!(m.rank() == s, !dependent_columns(&f, &rows), "q={q} {m}");
        }
    }
}

fn dependent_columns(f: &FieldTable, rows: &[Vec<u16>]) -> bool {
    let cols: Vec<Vec<u16>> = (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    dependent(f, &cols)
}

#[test]
fn random_square_nonsingularity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let f = gf(q);
        for _ in 0..150 {
            let n = rng.gen_range(1..=4);
            let rows: Vec<Vec<u16>> =
                (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..q as u16)).collect()).collect();
            let m = FMatrix::from_rows(f.clone(), &rows).unwrap();
            assert_eq!(m.is_nonsingular().unwrap(), !dependent(&f, &rows), "{m}");
        }
    }
}

#[test]
fn random_tall_strength() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q in [5u32, 7, 8] {
        let f = gf(q);
        for _ in 0..60 {
            let t = rng.gen_range(2..=3);
            let rows: Vec<Vec<u16>> =
                (0..2 * t).map(|_| (0..t).map(|_| rng.gen_range(0..q as u16)).collect()).collect();
            let m = FMatrix::from_rows(f.clone(), &rows).unwrap();
            assert_eq!(m.is_strength_t(t).unwrap(), strength_oracle(&f, &rows, t), "{m}");
        }
    }
}

#[test]
fn base_matrix_has_full_strength() {
    for (q, t) in [(3u32, 2usize), (5, 2), (5, 3), (7, 3), (7, 4), (9, 4)] {
        let f = gf(q);
        let e1 = vandermonde_base(&f, t).unwrap();
        assert_eq!((e1.rows(), e1.cols()), (2 * t, t));
        assert!(strength_oracle(&f, &e1.to_index_rows(), t), "q={q} t={t}");
    }
}

#[test]
fn searched_pairs_pass_oracle() {
    for (q, t) in [(4u32, 2usize), (5, 2), (7, 2), (5, 3), (7, 3), (8, 3), (7, 4)] {
        let f = gf(q);
        let cert = find_sdloa_pair(&f, t).unwrap();
        let e1 = cert.e1.to_index_rows();
        let e2 = cert.e2.to_index_rows();
        let sum: Vec<Vec<u16>> = cert.e1.add(&cert.e2).unwrap().to_index_rows();
        let diff: Vec<Vec<u16>> = cert.e1.sub(&cert.e2).unwrap().to_index_rows();
        for rows in [&e1, &e2, &sum, &diff] {
            assert!(strength_oracle(&f, rows, t));
        }
        let joined: Vec<Vec<u16>> = e1.iter().zip(&e2).map(|(a, b)| [a.clone(), b.clone()].concat()).collect();
        assert!(!dependent(&f, &joined));
        assert!(cert.supports_sdloa() && cert.revalidate());
    }
}

#[test]
fn search_boundaries() {
    // the excluded scalars 0, 1, -1 exhaust GF(3)
    assert!(find_sdloa_pair(&gf(3), 2).is_err());
    assert!(find_cms_pair(&gf(3), 2).is_err());
    // x^2 = -1 over GF(5) defeats the primitive candidate
    let f = gf(5);
    let x = f.primitive_element();
    assert_eq!(f.mul(x, x), f.minus_one());
    assert!(!primitive_candidate_holds(&f, 2).unwrap());
    let cert = find_cms_pair(&f, 2).unwrap();
    assert!(cert.supports_cms());
    for check in PairCheck::SHIFT {
        assert_eq!(cert.flag(check), Some(true), "{}", check.name());
    }
}
