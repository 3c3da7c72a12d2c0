//! GF(2^w) elements and polynomial arithmetic over them.
//!
//! Run with `cargo run --example field_arithmetic`.

use extractorforge::field::{field_modulus, Gf2m};
use extractorforge::poly::{FieldPoly, IrreduciblePoly};

fn main() -> extractorforge::Result<()> {
    let gf16 = Gf2m::new(4)?;
    println!("GF(16) modulus: {:#b}", field_modulus(4)?);

    let a = gf16.element(0b0110)?;
    let b = gf16.element(0b1011)?;
    let prod = a.mul(&b)?;
    println!("{a:?} * {b:?} = {prod:?}");
    println!("inverse of {a:?} is {:?}", a.inv()?);
    println!("{a:?}^15 = {:?}", a.pow(15));

    // Z^2 + Z + 2 has no root in GF(4), so it is irreducible there.
    let gf4 = Gf2m::new(2)?;
    let e = IrreduciblePoly::new(FieldPoly::new(gf4, vec![2, 1, 1])?)?;
    let f = FieldPoly::new(gf4, vec![3, 1])?;
    for exp in [1u64, 2, 5, 15] {
        println!("(Z + 3)^{exp} mod {e:?} = {:?}", e.pow_mod(&f, exp)?);
    }
    Ok(())
}
