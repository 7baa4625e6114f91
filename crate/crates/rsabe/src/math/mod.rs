//! Fixed-width modular arithmetic on `u128` values.
//!
//! Every modulus in the system (base-field prime q, group order N, the
//! subgroup primes) fits comfortably below 2^126, so all arithmetic runs on
//! native 128-bit words: schoolbook wide multiplication, extended-gcd
//! inversion, and Montgomery reduction for the hot base-field path.

pub mod mont;
pub mod primes;

use rand::RngCore;

/// Full 256-bit product of two `u128`s as `(lo, hi)`.
#[inline]
pub fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = (1u128 << 64) - 1;
    let (a0, a1) = (a & MASK, a >> 64);
    let (b0, b1) = (b & MASK, b >> 64);
    let ll = a0 * b0;
    let lh = a0 * b1;
    let hl = a1 * b0;
    let hh = a1 * b1;
    let mid = (ll >> 64) + (lh & MASK) + (hl & MASK);
    let lo = (ll & MASK) | (mid << 64);
    let hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (lo, hi)
}

/// `(a + b) mod m`; requires `m < 2^127`.
#[inline]
pub fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(a < m && b < m);
    let s = a.wrapping_add(b);
    if s < a || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

/// `(a - b) mod m`.
#[inline]
pub fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(a < m && b < m);
    if a >= b {
        a - b
    } else {
        a + (m - b)
    }
}

/// `(a * b) mod m` by shift-and-add; no precomputation, any odd or even
/// `m < 2^127`. Slow path, used outside the pairing hot loop.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m > 0);
    let mut a = a % m;
    let mut b = b % m;
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut acc = 0u128;
    while b != 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

/// `base^exp mod m`.
pub fn pow_mod(base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u128;
    while exp != 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Modular inverse via extended Euclid; `None` when `gcd(a, m) != 1`.
pub fn inv_mod(a: u128, m: u128) -> Option<u128> {
    if m <= 1 {
        return None;
    }
    let a = a % m;
    if a == 0 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        let t = old_r - q * r;
        old_r = r;
        r = t;
        let t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if old_r != 1 {
        return None;
    }
    let mut inv = old_s % m as i128;
    if inv < 0 {
        inv += m as i128;
    }
    Some(inv as u128)
}

/// Uniform value in `[0, bound)` by rejection sampling on the top bits.
pub fn random_below<R: RngCore + ?Sized>(rng: &mut R, bound: u128) -> u128 {
    assert!(bound > 0, "empty sampling range");
    if bound == 1 {
        return 0;
    }
    let bits = 128 - (bound - 1).leading_zeros();
    let mask = if bits == 128 {
        u128::MAX
    } else {
        (1u128 << bits) - 1
    };
    loop {
        let raw = ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128;
        let candidate = raw & mask;
        if candidate < bound {
            return candidate;
        }
    }
}

/// Uniform value in `[1, bound)`.
pub fn random_nonzero_below<R: RngCore + ?Sized>(rng: &mut R, bound: u128) -> u128 {
    assert!(bound > 1, "range has no nonzero element");
    1 + random_below(rng, bound - 1)
}
