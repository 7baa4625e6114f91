//! Shared unit-test fixtures.

use crate::pairing::GroupDescriptor;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::sync::OnceLock;

pub(crate) fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// One shared desk-scale descriptor (32-bit primes) per test binary.
pub(crate) fn descriptor32() -> &'static GroupDescriptor {
    static DESC: OnceLock<GroupDescriptor> = OnceLock::new();
    DESC.get_or_init(|| crate::pairing::gen_descriptor(32, &mut rng(0xD15C)).unwrap())
}

/// Smaller descriptor for exhaustive sweeps.
pub(crate) fn descriptor16() -> &'static GroupDescriptor {
    static DESC: OnceLock<GroupDescriptor> = OnceLock::new();
    DESC.get_or_init(|| crate::pairing::gen_descriptor(16, &mut rng(0xD16C)).unwrap())
}

/// RNG stub that always yields zero; turns "fresh randomness" into the
/// degenerate all-zero choice some algebraic identity tests need.
pub(crate) struct ZeroRng;

impl RngCore for ZeroRng {
    fn next_u32(&mut self) -> u32 {
        0
    }
    fn next_u64(&mut self) -> u64 {
        0
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        dest.fill(0);
    }
}
