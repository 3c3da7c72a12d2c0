//! Composing extractors: condense-then-extract and the two-block
//! construction for sources with small entropy deficiency.
//!
//! Run with `cargo run --release --example compose`.

use extractorforge::compose::{build_high_entropy_extractor, condense_extract, high_entropy_extractor};
use extractorforge::condenser::{build_condenser, GuvCondenser};
use extractorforge::extractor::SeededFunction;
use extractorforge::hashing::ToeplitzSpec;
use extractorforge::BitString;

fn main() -> extractorforge::Result<()> {
    let c = GuvCondenser::new(build_condenser(12, 6, 0.25, 1.0)?)?;
    let e = ToeplitzSpec::new(c.output_len() + c.seed_len(), 4)?;
    let ce = condense_extract(&c, e)?;
    let x = BitString::from_u64(0x5a5, 12);
    let y1 = BitString::from_u64(0x3f0, c.seed_len());
    for shift in 0..4 {
        let y2: BitString = (0..e.seed_len()).map(|i| (i + shift) % 3 == 0).collect();
        println!("condense then extract, seed variant {shift}: {}", ce.extract_split(&x, &y1, &y2)?);
    }

    let spec = build_high_entropy_extractor(24, 4, 0.125)?;
    println!(
        "two-block extractor: seed {} bits, output {} bits, block entropy {}, error budget {}",
        spec.seed_len(),
        spec.output_len(),
        spec.block_entropy,
        spec.error_budget
    );
    let he = high_entropy_extractor(&spec)?;
    let x = BitString::from_u64(0xc0ffee, 24);
    for shift in 0..4 {
        let y: BitString = (0..spec.seed_len()).map(|i| (i * 5 + shift) % 7 < 3).collect();
        println!("E(x, y{shift}) = {}", he.apply(&x, &y)?);
    }
    Ok(())
}
