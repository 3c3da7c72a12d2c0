//! Toeplitz hashing, checked against the exact oracle on a small source.
//!
//! Run with `cargo run --release --example toeplitz`.

use extractorforge::hashing::{toeplitz_extract, ToeplitzSpec};
use extractorforge::oracle::{approx, extractor_distance, sample_flat_sources, Budget};
use extractorforge::BitString;

fn main() -> extractorforge::Result<()> {
    let spec = ToeplitzSpec::new(10, 2)?;
    let x = BitString::from_u64(0b1100101011, 10);
    let y = BitString::from_u64(0b01101001101, spec.seed_len());
    println!("T(y)·x = {}", toeplitz_extract(&spec, &x, &y)?);

    // Leftover hash lemma: k = 6, m = 2 gives distance at most 2^-2.
    let words = spec.words()?;
    for (i, source) in sample_flat_sources(10, 6, 5, 1)?.iter().enumerate() {
        let d = extractor_distance(&words, source, &Budget::default())?;
        println!("source {i}: distance {d} ~ {:.4}", approx(&d));
    }
    Ok(())
}
