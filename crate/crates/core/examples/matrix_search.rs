//! Deterministic search for a matrix pair over GF(5), printed with the
//! certificate of every checked condition.

use std::sync::Arc;

use multimagic::io::write_pair_certificate;
use multimagic::linalg::primitive_candidate_holds;
use multimagic::{find_cms_pair, find_sdloa_pair, FieldTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Arc::new(FieldTable::for_order(5)?);
    let sdloa = find_sdloa_pair(&f, 2)?;
    println!("SDLOA pair over GF(5), t = 2:\n{}\n{}", sdloa.e1, sdloa.e2);

    // x^2 = -1 here, so the primitive candidate fails and the search falls back
    println!("primitive candidate holds: {}", primitive_candidate_holds(&f, 2)?);
    let cms = find_cms_pair(&f, 2)?;
    write_pair_certificate(&mut std::io::stdout().lock(), &cms)?;
    Ok(())
}
