//! The Reed-Solomon then Hadamard code used inside the Trevisan extractor.
//!
//! Run with `cargo run --example code`.

use extractorforge::codes::{code_distance, codeword, encode_bit, CodeSpec};
use extractorforge::BitString;

fn main() -> extractorforge::Result<()> {
    // Three GF(8) symbols per message: 9 message bits, 64 codeword bits.
    let spec = CodeSpec::new(3, 3)?;
    let x = BitString::from_u64(0b101_011_110, spec.message_bits());
    let c = codeword(&spec, &x)?;
    println!("message  {x}");
    println!("codeword {c}");
    println!("bit 42 computed locally: {}", encode_bit(&spec, &x, 42)?);
    println!("relative distance at least {}", code_distance(&spec));
    Ok(())
}
