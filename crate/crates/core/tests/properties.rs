//! Algebraic properties under random inputs.

use std::sync::OnceLock;

use proptest::prelude::*;

use extractorforge::codes::{encode_bit, CodeSpec};
use extractorforge::condenser::{build_condenser, smallest_irreducible, GuvCondenser};
use extractorforge::designs::{build_greedy_weak_design, build_poly_design, verify_design};
use extractorforge::extractor::SeededFunction;
use extractorforge::field::Gf2m;
use extractorforge::hashing::ToeplitzSpec;
use extractorforge::poly::{is_irreducible, FieldPoly};
use extractorforge::trevisan::{build_trevisan, Preset, TrevisanExtractor};
use extractorforge::BitString;

fn bits(len: usize) -> impl Strategy<Value = BitString> {
    proptest::collection::vec(any::<bool>(), len).prop_map(BitString::from_bits)
}

fn poly(field: Gf2m, max_len: usize) -> impl Strategy<Value = FieldPoly> {
    proptest::collection::vec(0..=field.mask(), 0..=max_len).prop_map(move |c| FieldPoly::new(field, c).unwrap())
}

/// The modulus search dominates construction time, so build once.
fn condenser_64() -> &'static GuvCondenser {
    static C: OnceLock<GuvCondenser> = OnceLock::new();
    C.get_or_init(|| GuvCondenser::new(build_condenser(64, 30, 0.25, 1.0).unwrap()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bytes_round_trip(v in proptest::collection::vec(any::<bool>(), 0..200)) {
        let b = BitString::from_bits(v.clone());
        let back = BitString::from_bytes(b.as_bytes(), v.len()).unwrap();
        prop_assert_eq!(back.iter().collect::<Vec<_>>(), v);
    }

    #[test]
    fn concat_then_slice(a in bits(37), b in bits(50)) {
        let c = a.concat(&b);
        prop_assert_eq!(c.slice(0, 37).unwrap(), a);
        prop_assert_eq!(c.slice(37, 87).unwrap(), b);
    }

    #[test]
    fn field_inverse_and_distributivity(w in 1u32..=32, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = Gf2m::new(w).unwrap();
        let (a, b, c) = (a & f.mask(), b & f.mask(), c & f.mask());
        prop_assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn division_identity(p in poly(Gf2m::new(5).unwrap(), 9), d in poly(Gf2m::new(5).unwrap(), 5)) {
        prop_assume!(!d.is_zero());
        let (q, r) = p.div_rem(&d).unwrap();
        prop_assert_eq!(q.mul(&d).unwrap().add(&r).unwrap(), p);
        prop_assert!(r.degree().is_none_or(|dr| dr < d.degree().unwrap()));
    }

    #[test]
    fn pow_mod_adds_exponents(f in poly(Gf2m::new(3).unwrap(), 4), e1 in 0u64..1000, e2 in 0u64..1000) {
        let m = smallest_irreducible(Gf2m::new(3).unwrap(), 3).unwrap();
        prop_assert!(is_irreducible(m.poly()));
        let lhs = m.pow_mod(&f, e1 + e2).unwrap();
        let rhs = m.mul_mod(&m.pow_mod(&f, e1).unwrap(), &m.pow_mod(&f, e2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn code_is_linear(x in bits(12), y in bits(12), idx in 0u64..64) {
        let spec = CodeSpec::new(3, 4).unwrap();
        let xy = x.xor(&y).unwrap();
        prop_assert_eq!(
            encode_bit(&spec, &xy, idx).unwrap(),
            encode_bit(&spec, &x, idx).unwrap() ^ encode_bit(&spec, &y, idx).unwrap()
        );
    }

    #[test]
    fn toeplitz_is_linear_in_input_and_seed(x in bits(40), x2 in bits(40), y in bits(55), y2 in bits(55)) {
        let t = ToeplitzSpec::new(40, 16).unwrap();
        let sum = t.apply(&x.xor(&x2).unwrap(), &y).unwrap();
        prop_assert_eq!(sum, t.apply(&x, &y).unwrap().xor(&t.apply(&x2, &y).unwrap()).unwrap());
        let sum = t.apply(&x, &y.xor(&y2).unwrap()).unwrap();
        prop_assert_eq!(sum, t.apply(&x, &y).unwrap().xor(&t.apply(&x, &y2).unwrap()).unwrap());
    }

    #[test]
    fn condenser_is_deterministic_and_sized(x in bits(64), y in any::<u64>()) {
        let c = condenser_64();
        let y = BitString::from_u64(y, c.seed_len());
        let out = c.condense(&x, &y).unwrap();
        prop_assert_eq!(out.len(), c.output_len());
        prop_assert_eq!(c.condense(&x, &y).unwrap(), out);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trevisan_is_linear_in_input(seed in any::<u64>(), preset in prop_oneof![Just(Preset::Thm42), Just(Preset::Thm43)]) {
        let spec = build_trevisan(preset, 300, 12, 0.05).unwrap();
        let ext = TrevisanExtractor::new(spec).unwrap();
        let mut s = seed | 1;
        let mut next = || { s ^= s << 13; s ^= s >> 7; s ^= s << 17; s & 1 == 1 };
        let x: BitString = (0..300).map(|_| next()).collect();
        let x2: BitString = (0..300).map(|_| next()).collect();
        let y: BitString = (0..ext.seed_len()).map(|_| next()).collect();
        let lhs = ext.extract(&x.xor(&x2).unwrap(), &y).unwrap();
        let rhs = ext.extract(&x, &y).unwrap().xor(&ext.extract(&x2, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ext.extract(&BitString::zeros(300), &y).unwrap(), BitString::zeros(12));
    }

    #[test]
    fn designs_certify(m in 1usize..80, l in 1usize..10) {
        let p = build_poly_design(m, l).unwrap();
        prop_assert!(verify_design(&p).valid);
        let w = build_greedy_weak_design(m, l, 2.0, 4 * l).unwrap();
        prop_assert!(verify_design(&w).valid);
    }
}
