//! The full pipeline for a trimagic square of order 5^5 = 3125, which no
//! single grid over GF(5) reaches. Pass `--out FILE` to keep it in binary form.

use std::sync::Arc;
use std::time::Instant;

use multimagic::io::save_ms;
use multimagic::{build_ms_q2t1, magic_sum, verify_ms, FieldTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().skip_while(|a| a != "--out").nth(1);
    let start = Instant::now();
    let sq = build_ms_q2t1(&Arc::new(FieldTable::for_order(5)?), 3)?;
    println!("built MS({}, 3) in {:.2?}", sq.order(), start.elapsed());
    for e in 1..=3 {
        println!("S_{e}({}) = {}", sq.order(), magic_sum(sq.order(), e)?);
    }
    print!("{}", verify_ms(&sq, 3));
    if let Some(path) = out {
        save_ms(path.as_ref(), &sq, true)?;
        println!("wrote {path}");
    }
    Ok(())
}
