//! Exact finite-distribution oracle: statistical distance, min-entropy and
//! the distance of a seeded function's output from uniform.
//!
//! Run with `cargo run --release --example oracle`.

use extractorforge::extractor::FnWord;
use extractorforge::oracle::{
    distance_to_min_entropy, extractor_distance, min_entropy, stat_distance, Budget, FiniteDistribution, FlatSource,
};

fn main() -> extractorforge::Result<()> {
    let skewed = FiniteDistribution::from_weights(8, [(0, 4), (1, 2), (2, 1), (3, 1)])?;
    let uniform = FiniteDistribution::uniform(8)?;
    println!("distance from uniform: {}", stat_distance(&skewed, &uniform)?);
    println!("min-entropy: {:.3} bits", min_entropy(&skewed)?);
    println!("distance to 2 bits of min-entropy: {}", distance_to_min_entropy(&skewed, 2)?);

    // A function that ignores its seed and outputs the low bit of x.
    let low_bit = FnWord::new(4, 2, 1, |x, _| x & 1);
    let even = FlatSource::new(4, 3, (0..16).step_by(2).collect())?;
    let all = FlatSource::full(4)?;
    println!("low bit on even inputs: {}", extractor_distance(&low_bit, &even, &Budget::default())?);
    println!("low bit on all inputs: {}", extractor_distance(&low_bit, &all, &Budget::default())?);
    Ok(())
}
