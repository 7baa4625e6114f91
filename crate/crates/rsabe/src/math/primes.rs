//! Miller-Rabin primality and random prime sampling.

use super::mont::Mont;
use super::random_below;
use rand::RngCore;

const SMALL_PRIMES: [u128; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// One Miller-Rabin round for odd `n > 2` with witness `a`.
fn witness_passes(ctx: &Mont, n: u128, d: u128, s: u32, a: u128) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = ctx.pow(ctx.to_mont(a), d);
    let one = ctx.one;
    let minus_one = ctx.neg(one);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = ctx.sqr(x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Probabilistic primality test: trial division by small primes, then
/// `rounds` Miller-Rabin witnesses drawn from `rng`.
pub fn is_probable_prime<R: RngCore + ?Sized>(n: u128, rounds: u32, rng: &mut R) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let ctx = Mont::new(n);
    for _ in 0..rounds {
        let a = 2 + random_below(rng, n - 3);
        if !witness_passes(&ctx, n, d, s, a) {
            return false;
        }
    }
    true
}

/// Uniform probable prime with exactly `bits` bits, or `None` once the
/// attempt budget runs out.
pub fn random_prime<R: RngCore + ?Sized>(bits: u32, rng: &mut R, attempts: u32) -> Option<u128> {
    assert!((3..=126).contains(&bits));
    let lo = 1u128 << (bits - 1);
    let span = 1u128 << (bits - 1);
    for _ in 0..attempts {
        let candidate = (lo + random_below(rng, span)) | 1;
        if is_probable_prime(candidate, 24, rng) {
            return Some(candidate);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn classifies_known_values() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for p in [2u128, 3, 65537, 4294967291, (1 << 89) - 1] {
            assert!(is_probable_prime(p, 24, &mut rng), "{p} should be prime");
        }
        for c in [1u128, 4, 65536, 4294967295, (1 << 89) - 3] {
            assert!(!is_probable_prime(c, 24, &mut rng), "{c} is composite");
        }
    }

    #[test]
    fn sampled_primes_have_requested_width() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for bits in [16u32, 24, 32] {
            let p = random_prime(bits, &mut rng, 10_000).unwrap();
            assert_eq!(128 - p.leading_zeros(), bits);
        }
    }
}
