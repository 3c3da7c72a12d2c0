//! Exact verification by enumeration.
//!
//! Everything here works on finite distributions with exact rational
//! probabilities. Extractor and condenser checks enumerate the full product
//! of a source's support with the seed space, accumulate integer counts, and
//! only then divide, so every reported distance is an exact fraction.
//! Enumeration sizes are checked against a [`Budget`] up front and an
//! oversized request fails with [`Error::BudgetExceeded`](crate::Error)
//! instead of sampling.

mod distribution;
mod enumerate;
mod joint;
mod lemmas;
mod source;

pub use distribution::{distance_to_min_entropy, min_entropy, stat_distance, FiniteDistribution};
pub use enumerate::{
    extractor_distance, extractor_distance_weighted, extractor_distance_with_side_info, injective_fraction,
    output_distance_to_min_entropy, output_distribution, WeightedSource,
};
pub use joint::{cond_min_entropy_classical, JointTable};
pub use lemmas::{inner_product_probe, lemma_suite, random_joint_table, LemmaCheck, LemmaReport};
pub use source::{sample_flat_sources, Budget, FlatSource, MAX_MEM_ENV};

use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Floating-point view of an exact value, for reports.
pub fn approx(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `-log2` of a positive rational.
pub(crate) fn neg_log2(r: &BigRational) -> f64 {
    use num_traits::Signed;
    debug_assert!(r.is_positive());
    // split off powers of two so huge numerators and denominators stay finite
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift >= 0 {
        r / BigRational::from_integer(num_bigint::BigInt::from(1u8) << shift as usize)
    } else {
        r * BigRational::from_integer(num_bigint::BigInt::from(1u8) << (-shift) as usize)
    };
    -(approx(&scaled).log2() + shift as f64)
}
