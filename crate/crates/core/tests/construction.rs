//! End-to-end constructions, each result re-checked by test-local oracles.

mod common;

use std::sync::Arc;

use common::{magic_sum_oracle, ms_oracle, ternary_family};
use multimagic::construct::{
    build_cms, build_cms_for, build_ms_q2t1, build_ms_qt, build_sdloa_grid, cms_compose, default_scheme,
    family_checks, grid_to_ms, make_block_assignment, product_compose, ternary_pair, ternary_scheme,
    BlockAssignment, CmsFamily,
};
use multimagic::gf::{prime_power, FieldTable};
use multimagic::linalg::{find_cms_pair, find_sdloa_pair};
use multimagic::oa::verify_sdloa;
use multimagic::verify::verify_cms;
use multimagic::MagicSquare;

fn gf(q: u32) -> Arc<FieldTable> {
    Arc::new(FieldTable::for_order(q).unwrap())
}

#[test]
fn ternary_family_matches_printed_squares() {
    let built = build_cms_for(&gf(3), 2).unwrap();
    let printed = ternary_family();
    assert_eq!(built, printed);
    assert_eq!(built.members()[0].row(0), &[46, 65, 0, 61, 26, 42, 13, 32, 75]);
    assert_eq!(&built.members()[8].row(8)[..3], &[28, 74, 9]);
}

#[test]
fn ternary_family_sums() {
    let fam = ternary_family();
    assert_eq!(magic_sum_oracle(9, 1), 360);
    assert_eq!(magic_sum_oracle(9, 2), 19320);
    assert_eq!(9 * magic_sum_oracle(9, 3), 10_497_600);
    for sq in fam.members() {
        assert!(ms_oracle(sq, 2));
    }
    let cube = |v: u64| (v as u128).pow(3);
    let m = fam.members();
    for i in 0..9 {
        let row: u128 = m.iter().flat_map(|s| s.row(i).iter().map(|&v| cube(v))).sum();
        let col: u128 = m.iter().flat_map(|s| (0..9).map(move |x| cube(s.get(x, i)))).sum();
        assert_eq!((row, col), (10_497_600, 10_497_600));
    }
    let main: u128 = m.iter().flat_map(|s| (0..9).map(move |j| cube(s.get(j, j)))).sum();
    let back: u128 = m.iter().flat_map(|s| (0..9).map(move |j| cube(s.get(j, 8 - j)))).sum();
    assert_eq!((main, back), (10_497_600, 10_497_600));
    assert!(verify_cms(&fam).passed());
}

#[test]
fn ternary_translations_miss_diagonal_large_sets() {
    let checks = family_checks(&ternary_pair(&gf(3)).unwrap(), &ternary_scheme()).unwrap();
    assert!(checks.rows.iter().all(|&ok| ok));
    assert!(checks.columns.iter().all(|&ok| ok));
    assert!(!checks.main_diagonal && !checks.back_diagonal);
}

/// Every grid with `q^t <= 2401` and `q >= 2t - 1` is a strong double large
/// set and encodes to a multimagic square.
#[test]
fn all_small_grids() {
    for t in 2..=4usize {
        for q in (2 * t as u32 - 1)..=49 {
            if prime_power(q).is_none() || (q as usize).pow(t as u32) > 2401 {
                continue;
            }
            let f = gf(q);
            let cert = if q == 3 { ternary_pair(&f).unwrap() } else { find_sdloa_pair(&f, t).unwrap() };
            let grid = build_sdloa_grid(&cert).unwrap();
            if grid.order() <= 125 {
                assert!(verify_sdloa(&grid.to_family().unwrap(), t).unwrap(), "q={q} t={t}");
            }
            let sq = grid_to_ms(&grid).unwrap();
            if grid.order() <= 343 {
                assert!(ms_oracle(&sq, t as u32), "q={q} t={t}");
            }
        }
    }
}

#[test]
fn pipeline_squares_of_order_q_to_t() {
    for (q, t, n) in [(3, 2, 9), (4, 2, 16), (5, 2, 25), (5, 3, 125), (7, 3, 343)] {
        let sq = build_ms_qt(&gf(q), t).unwrap();
        assert_eq!(sq.order(), n);
        assert!(ms_oracle(&sq, t as u32));
    }
    assert!(build_ms_qt(&gf(3), 3).is_err());
}

#[test]
fn default_translation_families() {
    for (q, t) in [(4, 2), (5, 2), (7, 2), (8, 2), (9, 2), (5, 3)] {
        let f = gf(q);
        let cert = find_cms_pair(&f, t).unwrap();
        let scheme = default_scheme(&cert).unwrap();
        assert!(family_checks(&cert, &scheme).unwrap().holds(), "q={q} t={t}");
        let fam = build_cms(&cert, &scheme).unwrap();
        let n = (q as usize).pow(t as u32);
        assert_eq!((fam.count(), fam.order()), (n, n));
        assert!(fam.members().iter().take(3).all(|sq| ms_oracle(sq, t as u32)));
        // every grid row across the family covers 0..n^2 exactly
        let mut seen = vec![false; n * n];
        for sq in fam.members() {
            for &v in sq.row(1) {
                assert!(!std::mem::replace(&mut seen[v as usize], true));
            }
        }
    }
}

#[test]
fn product_of_printed_square_with_itself() {
    let c0 = ternary_family().members()[0].clone();
    let sq = product_compose(&c0, &c0).unwrap();
    assert_eq!(sq.order(), 81);
    assert_eq!(sq.get(0, 0), 3772);
    assert!(ms_oracle(&sq, 2));
}

#[test]
fn single_member_block_composition_is_product() {
    let c0 = ternary_family().members()[0].clone();
    let mut member = c0.clone();
    member.set_degree(1);
    let fam = CmsFamily::new(1, vec![member]).unwrap();
    let assign = make_block_assignment(&gf(9), 1, 0).unwrap();
    let composed = cms_compose(&c0, &fam, &assign).unwrap();
    assert_eq!(composed, product_compose(&c0, &c0).unwrap());
    let by_hand = BlockAssignment::new(9, 1, vec![0; 81]).unwrap();
    assert_eq!(cms_compose(&c0, &fam, &by_hand).unwrap(), composed);
}

#[test]
fn block_composition_origin() {
    let f = gf(5);
    let a = build_ms_qt(&f, 3).unwrap();
    let fam = build_cms_for(&f, 2).unwrap();
    assert_eq!((fam.count(), fam.order(), fam.degree()), (25, 25, 2));
    let assign = make_block_assignment(&f, 3, 2).unwrap();
    let sq = cms_compose(&a, &fam, &assign).unwrap();
    assert_eq!(sq.order(), 3125);
    assert_eq!(sq.get(0, 0), 625 * a.get(0, 0) + fam.members()[assign.symbol(0, 0)].get(0, 0));
    assert_eq!(sq.get(30, 57), 625 * a.get(1, 2) + fam.members()[assign.symbol(1, 2)].get(5, 7));
    let wrong = CmsFamily::new(2, vec![a.clone()]).unwrap();
    let assign = make_block_assignment(&f, 2, 0).unwrap();
    assert!(cms_compose(&a, &wrong, &assign).is_err());
}

#[test]
fn flagship_square() {
    let sq = build_ms_q2t1(&gf(5), 3).unwrap();
    assert_eq!(sq.order(), 3125);
    assert!(ms_oracle(&sq, 3));
    assert!(build_ms_q2t1(&gf(5), 4).is_err());
}

#[test]
fn block_assignment_balance() {
    for (q, big, small) in [(4, 1, 1), (5, 1, 1), (5, 2, 1), (7, 2, 1), (8, 1, 1), (9, 2, 1), (5, 3, 2)] {
        let a = make_block_assignment(&gf(q), big, small).unwrap();
        let (m, s) = (a.order(), a.symbols());
        let each = m / s;
        let balanced = |cells: Vec<(usize, usize)>| {
            let mut tally = vec![0; s];
            cells.into_iter().for_each(|(i, j)| tally[a.symbol(i, j)] += 1);
            tally.iter().all(|&c| c == each)
        };
        for i in 0..m {
            assert!(balanced((0..m).map(|j| (i, j)).collect()));
            assert!(balanced((0..m).map(|j| (j, i)).collect()));
        }
        assert!(balanced((0..m).map(|j| (j, j)).collect()));
        assert!(balanced((0..m).map(|j| (j, m - 1 - j)).collect()));
    }
}

#[test]
fn perturbed_inputs_refused() {
    let c0 = ternary_family().members()[0].clone();
    let mut bad = c0.entries().to_vec();
    bad.swap(0, 10);
    let bad = MagicSquare::new(9, 2, bad).unwrap();
    assert!(product_compose(&bad, &c0).is_err());
}
