//! The GUV lossless condenser and its strong form.
//!
//! Run with `cargo run --release --example condenser`.

use extractorforge::condenser::{build_condenser, GuvCondenser};
use extractorforge::oracle::{approx, injective_fraction, output_distance_to_min_entropy, sample_flat_sources, Budget};
use extractorforge::BitString;

fn main() -> extractorforge::Result<()> {
    let spec = build_condenser(12, 6, 0.25, 1.0)?;
    println!("{}", spec.to_json());
    let d = spec.seed_len();
    let kappa = (d + spec.target_entropy) as u32;
    let c = GuvCondenser::new(spec)?;

    let x = BitString::from_u64(0xabc, 12);
    let y = BitString::from_u64(0x155, d);
    println!("C(x, y) = {}", c.condense(&x, &y)?);

    let words = c.strong_words()?;
    for (i, source) in sample_flat_sources(12, 6, 3, 9)?.iter().enumerate() {
        let inj = injective_fraction(&words, source, &Budget::default())?;
        let dist = output_distance_to_min_entropy(&words, source, kappa, &Budget::default())?;
        println!("source {i}: injective {:.4}, distance to {kappa} bits {:.4}", approx(&inj), approx(&dist));
    }
    Ok(())
}
