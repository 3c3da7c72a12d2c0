//! Content-addressed spec documents, as read and written by the CLI.
//!
//! Run with `cargo run --example spec_files`.

use extractorforge::cli::SpecDocument;
use extractorforge::hashing::ToeplitzSpec;
use extractorforge::BitString;

fn main() -> extractorforge::Result<()> {
    let doc = SpecDocument::Toeplitz(ToeplitzSpec::new(16, 4)?);
    let json = doc.to_json_pretty();
    println!("{json}");
    println!("hash {}", doc.hash());

    let back = SpecDocument::from_json(&json).expect("round trip");
    assert_eq!(back.hash(), doc.hash());
    let f = back.seeded()?;
    let out = f.apply(&BitString::ones(16), &BitString::from_u64(0x12345, f.seed_len()))?;
    println!("extract: {out}");
    Ok(())
}
