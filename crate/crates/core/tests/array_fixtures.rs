//! The printed ternary arrays and the large-set structure of the printed
//! bimagic family, checked by the library and by test-local tallies.

#![allow(clippy::needless_range_loop)]

mod common;

use common::{digits, large_set_oracle, oa_oracle, ternary_family, ternary_grid0};
use multimagic::oa::{check_sdloa, is_simple, verify_large_set, verify_oa, verify_sdloa, ArrayFamily, OrthArray};

/// Cells of member `h` of the printed family, decoded to 4-vectors.
fn cells() -> Vec<Vec<Vec<Vec<u16>>>> {
    ternary_family()
        .members()
        .iter()
        .map(|sq| (0..9).map(|x| sq.row(x).iter().map(|&e| digits(e, 3, 4)).collect()).collect())
        .collect()
}

fn family_of(members: &[Vec<Vec<u16>>]) -> ArrayFamily {
    ArrayFamily::new(
        members
            .iter()
            .map(|cols| OrthArray::from_columns(4, 3, 2, cols.concat()).unwrap())
            .collect(),
    )
    .unwrap()
}

#[test]
fn first_array_is_oa() {
    let a = ternary_grid0().members()[0].clone();
    assert_eq!((a.n_cols(), a.t(), a.k(), a.v(), a.index()), (9, 2, 4, 3, 1));
    assert!(verify_oa(&a));
    assert!(is_simple(&a));
    let cols: Vec<Vec<u16>> = a.columns().map(|c| c.to_vec()).collect();
    assert!(oa_oracle(&cols, 3, 2));
}

#[test]
fn printed_arrays_form_strong_double_large_set() {
    let fam = ternary_grid0();
    let check = check_sdloa(&fam, 2).unwrap();
    assert!(check.large_set && check.transposed_large_set);
    assert!(check.diagonal && check.back_diagonal);
    assert!(verify_sdloa(&fam, 2).unwrap());
    let (d, d_back) = fam.diagonal_arrays(2).unwrap();
    assert!(verify_oa(&d) && verify_oa(&d_back));
}

#[test]
fn printed_arrays_are_first_grid_row() {
    let c = cells();
    let fam = ternary_grid0();
    for (j, a) in fam.members().iter().enumerate() {
        let from_square: Vec<Vec<u16>> = c[0][j].to_vec();
        let printed: Vec<Vec<u16>> = a.columns().map(|col| col.to_vec()).collect();
        // A_{0j} is row j of the first grid: column l is cell (j, l)
        assert_eq!(printed, from_square, "A_0{j}");
    }
}

#[test]
fn fixed_row_families_are_large_sets() {
    let c = cells();
    for x in 0..9 {
        let members: Vec<Vec<Vec<u16>>> = (0..9).map(|h| c[h][x].clone()).collect();
        assert!(large_set_oracle(&members, 3, 2), "row {x}");
        assert!(verify_large_set(&family_of(&members), 2).unwrap());
    }
}

#[test]
fn fixed_column_families_are_large_sets() {
    let c = cells();
    for y in 0..9 {
        let members: Vec<Vec<Vec<u16>>> =
            (0..9).map(|h| (0..9).map(|x| c[h][x][y].clone()).collect()).collect();
        assert!(large_set_oracle(&members, 3, 2), "column {y}");
        assert!(verify_large_set(&family_of(&members), 2).unwrap());
    }
}

/// The printed family's diagonal cells repeat: 27 distinct vectors, three
/// times each. Each member diagonal is still an OA and the degree-3 totals
/// still balance, so the family is complementary without this large set.
#[test]
fn diagonal_families_are_not_large_sets() {
    let c = cells();
    let main: Vec<Vec<Vec<u16>>> = (0..9).map(|h| (0..9).map(|j| c[h][j][j].clone()).collect()).collect();
    let back: Vec<Vec<Vec<u16>>> = (0..9).map(|h| (0..9).map(|j| c[h][j][8 - j].clone()).collect()).collect();
    for diag in [&main, &back] {
        assert!(diag.iter().all(|m| oa_oracle(m, 3, 2)));
        assert!(!large_set_oracle(diag, 3, 2));
        assert!(!verify_large_set(&family_of(diag), 2).unwrap());
        let mut all: Vec<&Vec<u16>> = diag.iter().flatten().collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 27);
    }
}

#[test]
fn corrupted_array_rejected() {
    let a = ternary_grid0().members()[0].clone();
    let mut rows = a.rows();
    rows[3][0] = (rows[3][0] + 1) % 3;
    let bad = OrthArray::from_rows(3, 2, &rows).unwrap();
    assert!(!verify_oa(&bad));
    let cols: Vec<Vec<u16>> = bad.columns().map(|c| c.to_vec()).collect();
    assert!(!oa_oracle(&cols, 3, 2));
}
