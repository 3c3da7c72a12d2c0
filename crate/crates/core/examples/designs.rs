//! Combinatorial designs: the polynomial construction and the certified
//! greedy weak design.
//!
//! Run with `cargo run --example designs`.

use extractorforge::designs::{build_greedy_weak_design, build_poly_design, verify_design};

fn main() -> extractorforge::Result<()> {
    let poly = build_poly_design(64, 8)?;
    let report = verify_design(&poly);
    println!(
        "polynomial design: {} sets of size {} in [{}], max overlap {}",
        poly.m(),
        poly.l,
        poly.t,
        report.max_overlap
    );
    println!("first set: {:?}", poly.sets[0]);

    let weak = build_greedy_weak_design(64, 8, 2.0, 32)?;
    let report = verify_design(&weak);
    println!(
        "weak design: {} sets of size {} in [{}], worst weak sum / (m-1) = {:.3}, valid = {}",
        weak.m(),
        weak.l,
        weak.t,
        report.max_weak_sum_ratio,
        report.valid
    );
    Ok(())
}
