//! Seeded random elements of a submodule, for sweeps over spaces too large
//! to list.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Element, Submodule};
use crate::ring::{RingSpec, Scalar};

/// Magnitude bound for random integer coefficients over `Q`.
const RATIONAL_COEFF_BOUND: i64 = 5;

fn random_scalar(ring: &RingSpec, rng: &mut ChaCha8Rng) -> Scalar {
    match ring.modulus() {
        Some(n) => Scalar::Residue(rng.gen_range(0..n)),
        None => ring.from_i64(rng.gen_range(-RATIONAL_COEFF_BOUND..=RATIONAL_COEFF_BOUND)),
    }
}

/// `count` combinations `Σ c_t g_t` of the generators with independent
/// uniform coefficients. The same seed always gives the same sequence.
pub fn random_combinations(space: &Submodule, count: usize, seed: u64) -> Vec<Element> {
    let ring = *space.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            space.generators().iter().fold(Element::zero(&ring, space.ambient_dim()), |acc, g| {
                acc.add(&ring, &g.scale(&ring, &random_scalar(&ring, &mut rng)))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_inside_the_span() {
        let z5 = RingSpec::zmod(5).unwrap();
        let gens = vec![Element::basis(&z5, 3, 0), Element::basis(&z5, 3, 1)];
        let s = Submodule::span(z5, 3, gens);
        let a = random_combinations(&s, 20, 7);
        assert_eq!(a, random_combinations(&s, 20, 7));
        assert_ne!(a, random_combinations(&s, 20, 8));
        assert!(a.iter().all(|x| s.contains(x)));
    }
}
