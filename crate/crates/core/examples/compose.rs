//! Product composition of two bimagic squares, and block composition of a
//! trimagic square with a bimagic complementary family.

use std::sync::Arc;

use multimagic::{
    build_cms_for, build_ms_qt, cms_compose, make_block_assignment, product_compose, verify_ms, FieldTable,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gf3 = Arc::new(FieldTable::for_order(3)?);
    let c0 = build_cms_for(&gf3, 2)?.members()[0].clone();
    let prod = product_compose(&c0, &c0)?;
    println!("product of order {}: top-left {}", prod.order(), prod.get(0, 0));
    print!("{}", verify_ms(&prod, 2));

    // a 125-square blown up by 25-squares chosen by a diagonal latin table
    let gf5 = Arc::new(FieldTable::for_order(5)?);
    let outer = build_ms_qt(&gf5, 3)?;
    let fam = build_cms_for(&gf5, 2)?;
    let assign = make_block_assignment(&gf5, 3, 2)?;
    let sq = cms_compose(&outer, &fam, &assign)?;
    println!("block composition of order {}: top-left {}", sq.order(), sq.get(0, 0));
    println!("trimagic: {}", verify_ms(&sq, 3).passed());
    Ok(())
}
