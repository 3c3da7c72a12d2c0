//! Building and running a Trevisan extractor from a preset.
//!
//! Run with `cargo run --release --example trevisan`.

use std::time::Instant;

use extractorforge::trevisan::{build_trevisan, Preset, TrevisanExtractor};
use extractorforge::BitString;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> extractorforge::Result<()> {
    let n = 1 << 20;
    for preset in [Preset::Thm42, Preset::Thm43] {
        let spec = build_trevisan(preset, n, 128, 1e-3)?;
        println!(
            "{preset:?}: n={} t={} m={} field width {} ({} symbols)",
            spec.n, spec.t, spec.m, spec.code.field_width, spec.code.message_symbols
        );
        let ext = TrevisanExtractor::new(spec)?;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x: BitString = (0..n).map(|_| rng.gen::<bool>()).collect();
        let y: BitString = (0..ext.spec().t).map(|_| rng.gen::<bool>()).collect();
        let start = Instant::now();
        let out = ext.extract(&x, &y)?;
        println!("  output {out} in {:.2?}", start.elapsed());
    }
    Ok(())
}
