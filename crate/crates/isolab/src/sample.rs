//! Deterministic sampling helpers. All randomized searches derive from one
//! seeded ChaCha stream; scenario runs key their streams by name so results
//! are reproducible regardless of execution order.

use exact_linalg::{Scalar, Subspace};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lie::{Alg, Element};

pub type SampleRng = ChaCha8Rng;

/// FNV-1a, for stable name-keyed stream derivation across platforms.
pub fn stable_hash(s: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn rng_for(seed: u64, key: &str) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed ^ stable_hash(key))
}

/// Integer vector with entries in [-bound, bound].
pub fn int_vec(rng: &mut SampleRng, len: usize, bound: i64) -> Vec<Scalar> {
    (0..len)
        .map(|_| Scalar::from_int(rng.random_range(-bound..=bound)))
        .collect()
}

/// Scale a coordinate vector to clear denominators; sampling destinations
/// are subspaces, so scaling changes nothing that is certified downstream
/// and keeps the arithmetic integral.
pub fn clear_denominators(v: &mut [Scalar]) {
    let mut l = BigInt::one();
    for c in v.iter() {
        l = l.lcm(&c.denominator());
    }
    if !l.is_one() {
        let s = Scalar::from_big_ratio(&num_rational::BigRational::from_integer(l));
        for c in v.iter_mut() {
            *c = c.mul(&s);
        }
    }
}

/// Random element of a subspace of the coefficient space, with integer
/// coordinates in the given box (denominators cleared).
pub fn element_in(rng: &mut SampleRng, alg: &Alg, space: &Subspace, bound: i64) -> Element {
    Element::new(alg, vec_in(rng, space, bound))
}

/// Vector in a subspace, in ambient coordinates (denominators cleared).
pub fn vec_in(rng: &mut SampleRng, space: &Subspace, bound: i64) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); space.ambient_dim()];
    for i in 0..space.dim() {
        let c = Scalar::from_int(rng.random_range(-bound..=bound));
        if c.is_zero() {
            continue;
        }
        for (t, b) in v.iter_mut().zip(space.basis_row(i)) {
            *t = t.add(&c.mul(b));
        }
    }
    clear_denominators(&mut v);
    v
}
