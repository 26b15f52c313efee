//! Exact verification: a bimagic square passes, a single swap is caught on
//! the affected lines, and a random array fails the strength test.

use std::sync::Arc;

use multimagic::{build_ms_qt, magic_sum, verify_ms, verify_oa, FieldTable, OrthArray};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sq = build_ms_qt(&Arc::new(FieldTable::for_order(4)?), 2)?;
    println!("S_1(16) = {}, S_2(16) = {}", magic_sum(16, 1)?, magic_sum(16, 2)?);
    print!("{}", verify_ms(&sq, 2));

    let mut bad = sq.clone();
    let (a, b) = (sq.get(0, 0), sq.get(5, 3));
    bad.set(0, 0, b);
    bad.set(5, 3, a);
    print!("after swapping (0,0) and (5,3):\n{}", verify_ms(&bad, 2));

    let cols: Vec<u16> = (0..36u16).map(|i| (i * i + i / 5) % 3).collect();
    println!("arbitrary 4x9 ternary array is OA of strength 2: {}", verify_oa(&OrthArray::from_columns(4, 3, 2, cols)?));
    Ok(())
}
