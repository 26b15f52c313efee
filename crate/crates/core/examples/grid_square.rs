//! A strong double large set over GF(5) laid out as a grid, then encoded
//! cell by cell into a bimagic square of order 25.

use std::sync::Arc;

use multimagic::oa::verify_sdloa;
use multimagic::{build_sdloa_grid, encode_cell, find_sdloa_pair, grid_to_ms, verify_ms, FieldTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Arc::new(FieldTable::for_order(5)?);
    let grid = build_sdloa_grid(&find_sdloa_pair(&f, 2)?)?;
    println!("grid of order {} with 4-vector cells", grid.order());
    let cell = grid.cell(1, 2);
    println!("cell (1, 2) = {cell:?} encodes to {}", encode_cell(cell, 5));
    println!("grid rows form a strong double large set: {}", verify_sdloa(&grid.to_family()?, 2)?);

    let sq = grid_to_ms(&grid)?;
    print!("{}", verify_ms(&sq, 2));
    Ok(())
}
