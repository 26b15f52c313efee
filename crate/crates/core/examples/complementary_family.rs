//! Complementary families: the nine bimagic squares of order 9 from the
//! fixed ternary pair, and a 25-member family over GF(5).

use std::sync::Arc;

use multimagic::construct::family_checks;
use multimagic::{build_cms_for, default_scheme, find_cms_pair, ternary_pair, ternary_scheme, verify_cms, FieldTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gf3 = Arc::new(FieldTable::for_order(3)?);
    let fam = build_cms_for(&gf3, 2)?;
    println!("first row of square 0: {:?}", fam.members()[0].row(0));
    print!("{}", verify_cms(&fam));
    // the ternary translations keep the degree-3 totals without diagonal large sets
    let checks = family_checks(&ternary_pair(&gf3)?, &ternary_scheme())?;
    println!("large-set checks: {:?}\n", checks.first_failure());

    let gf5 = Arc::new(FieldTable::for_order(5)?);
    let cert = find_cms_pair(&gf5, 2)?;
    println!("GF(5) large-set checks hold: {}", family_checks(&cert, &default_scheme(&cert)?)?.holds());
    print!("{}", verify_cms(&build_cms_for(&gf5, 2)?));
    Ok(())
}
