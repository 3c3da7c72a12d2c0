//! The full pipeline for sources with bounded storage leakage.
//!
//! Run with `cargo run --release --example pipeline`.

use extractorforge::compose::{build_pipeline, pipeline_extractor};
use extractorforge::extractor::SeededFunction;
use extractorforge::BitString;

fn main() -> extractorforge::Result<()> {
    let spec = build_pipeline(256, 100, 0.2, 0.25)?;
    println!("zeta {:.4}, alpha {:.4}", spec.zeta, spec.alpha);
    println!("seed {} bits, output {} bits, total error {}", spec.t, spec.m, spec.error_total);
    for note in &spec.roundings {
        println!("  {note}");
    }
    let e = pipeline_extractor(&spec)?;
    let x: BitString = (0..spec.n).map(|i| (i * 7) % 5 < 2).collect();
    let y: BitString = (0..e.seed_len()).map(|i| (i * 11) % 7 < 3).collect();
    println!("output {}", e.apply(&x, &y)?);
    Ok(())
}
