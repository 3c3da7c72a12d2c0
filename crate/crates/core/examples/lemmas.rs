//! Checking the side-information inequalities on a joint table.
//!
//! Run with `cargo run --example lemmas`.

use extractorforge::oracle::{
    cond_min_entropy_classical, inner_product_probe, lemma_suite, random_joint_table, Budget, FiniteDistribution,
    JointTable,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> extractorforge::Result<()> {
    // S leaks the parity of X.
    let x = FiniteDistribution::uniform(16)?;
    let leak = JointTable::from_channel(&x, 2, |v| if v.count_ones() % 2 == 0 { vec![1, 0] } else { vec![0, 1] })?;
    println!("H_min(X|S) = {:.3}", cond_min_entropy_classical(&leak));
    let report = lemma_suite(&leak, 2, &inner_product_probe(4), &Budget::default())?;
    for c in &report.checks {
        println!("{:<16} {} <= {}  {}", c.name, c.lhs, c.rhs, if c.pass { "ok" } else { "VIOLATED" });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let random = random_joint_table(3, 4, &mut rng);
    let report = lemma_suite(&random, 1, &inner_product_probe(3), &Budget::default())?;
    println!("random table: all pass = {}", report.all_pass);
    Ok(())
}
