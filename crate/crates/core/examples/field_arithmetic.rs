//! Arithmetic in GF(8): the defining polynomial, a primitive element and a
//! few operations on canonical element indices.

use multimagic::build_field;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = build_field(2, 3)?;
    println!("{f}");
    let x = f.primitive_element();
    println!("primitive element {x} has order {}", f.multiplicative_order(x));
    let powers: Vec<String> = (0..7).map(|k| f.pow(x, k).to_string()).collect();
    println!("powers: {}", powers.join(" "));
    let (a, b) = (f.elem(3)?, f.elem(6)?);
    println!("{a} + {b} = {}", f.add(a, b));
    println!("{a} * {b} = {}", f.mul(a, b));
    let inv = f.inv(a).expect("nonzero");
    println!("{a}^-1 = {inv}, check {}", f.mul(a, inv));
    println!("digits of {b}: {:?}", f.digits(b));
    Ok(())
}
