//! Randomized invariants.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ssloc_core::fq::{FqField, FqSubspace, SymplecticSpace};
use ssloc_core::hermitian::{standard_space, HermitianSpace, Variant};
use ssloc_core::oe::{FieldParams, OEElement};
use ssloc_core::strata::weyl::SignedPermutation;
use ssloc_core::verify::{random_lattice, random_subspace};

fn space(n: usize) -> Arc<HermitianSpace> {
    let v = if n % 2 == 1 { Variant::Odd } else { Variant::SplitEven };
    standard_space(n, v, &FieldParams::with_prime(3).unwrap()).unwrap().into_arc()
}

fn element() -> impl Strategy<Value = OEElement> {
    (0i64..6561, 0i64..6561).prop_map(|(a, b)| OEElement::new(&FieldParams::with_prime(3).unwrap(), a, b))
}

proptest! {
    #[test]
    fn norm_is_multiplicative(x in element(), y in element()) {
        prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
        prop_assert_eq!((x * y).conj(), x.conj() * y.conj());
    }

    #[test]
    fn ring_laws(x in element(), y in element(), z in element()) {
        prop_assert_eq!((x * y) * z, x * (y * z));
        prop_assert_eq!(x * (y + z), x * y + x * z);
    }

    #[test]
    fn lattice_sum_and_meet_bracket_both(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = space(n);
        let a = random_lattice(&s, &mut rng).unwrap();
        let b = random_lattice(&s, &mut rng).unwrap();
        let sum = a.sum(&b).unwrap();
        let meet = a.intersection(&b).unwrap();
        prop_assert!(sum.contains(&a).unwrap() && sum.contains(&b).unwrap());
        prop_assert!(a.contains(&meet).unwrap() && b.contains(&meet).unwrap());
        // Lengths: [A+B : A] = [B : A∩B].
        prop_assert_eq!(sum.index(&a).unwrap(), b.index(&meet).unwrap());
    }

    #[test]
    fn dual_reverses_inclusion(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = space(n);
        let a = random_lattice(&s, &mut rng).unwrap();
        let b = a.sum(&random_lattice(&s, &mut rng).unwrap()).unwrap();
        prop_assert!(a.dual().unwrap().contains(&b.dual().unwrap()).unwrap());
    }

    #[test]
    fn subspace_dimension_formula(seed in any::<u64>(), k in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Arc::new(FqField::new(2, k).unwrap());
        let u = random_subspace(&f, 5, &mut rng);
        let w = random_subspace(&f, 5, &mut rng);
        prop_assert_eq!(u.sum(&w).dim() + u.intersection(&w).dim(), u.dim() + w.dim());
    }

    #[test]
    fn perp_exchanges_sum_and_intersection(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = SymplecticSpace::standard(3, 2).unwrap();
        let f = v.field(2).unwrap();
        let u = random_subspace(&f, 4, &mut rng);
        let w = random_subspace(&f, 4, &mut rng);
        prop_assert_eq!(v.perp(&u.sum(&w)), v.perp(&u).intersection(&v.perp(&w)));
        prop_assert_eq!(v.perp(&u.frobenius()), v.perp(&u).frobenius());
    }

    #[test]
    fn frobenius_respects_the_form(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = SymplecticSpace::standard(3, 2).unwrap();
        let f = v.field(3).unwrap();
        let u = random_subspace(&f, 4, &mut rng);
        let w = random_subspace(&f, 4, &mut rng);
        for a in u.basis() {
            for b in w.basis() {
                let fa: Vec<u32> = a.iter().map(|&x| f.frobenius(x)).collect();
                let fb: Vec<u32> = b.iter().map(|&x| f.frobenius(x)).collect();
                prop_assert_eq!(v.pair(&f, &fa, &fb), f.frobenius(v.pair(&f, a, b)));
            }
        }
    }

    #[test]
    fn length_is_inverse_invariant(word in proptest::collection::vec(1usize..=4, 0..12)) {
        let w = SignedPermutation::from_word(4, &word);
        prop_assert_eq!(w.length(), w.inverse().length());
        prop_assert!(w.length() <= word.len());
        prop_assert_eq!(w.length() % 2, word.len() % 2);
    }

    #[test]
    fn rational_subspaces_are_frobenius_fixed(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prime = Arc::new(FqField::new(3, 1).unwrap());
        let big = Arc::new(FqField::new(3, 2).unwrap());
        let u = random_subspace(&prime, 4, &mut rng).base_change(&big).unwrap();
        prop_assert_eq!(u.frobenius(), u.clone());
        prop_assert_eq!(FqSubspace::span(&big, 4, u.basis()), u);
    }
}
