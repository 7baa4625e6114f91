//! Montgomery multiplication context for a fixed odd modulus below 2^126.

use super::{inv_mod, mul_wide};

/// Precomputed Montgomery parameters with R = 2^128.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mont {
    pub m: u128,
    /// -m^{-1} mod 2^128.
    neg_inv: u128,
    /// 2^128 mod m: the Montgomery form of 1.
    pub one: u128,
    /// 2^256 mod m, used to enter the Montgomery domain.
    r2: u128,
}

impl Mont {
    pub fn new(m: u128) -> Mont {
        assert!(m & 1 == 1 && m > 2, "modulus must be odd and > 2");
        assert!(m < 1u128 << 126, "modulus too large for this context");
        // Newton-Hensel lift of m^{-1} mod 2: doubles correct bits each round.
        let mut inv: u128 = 1;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(inv)));
        }
        debug_assert_eq!(m.wrapping_mul(inv), 1);
        let one = (u128::MAX % m) + 1;
        let one = if one == m { 0 } else { one };
        let mut r2 = one;
        for _ in 0..128 {
            r2 = super::add_mod(r2, r2, m);
        }
        Mont {
            m,
            neg_inv: inv.wrapping_neg(),
            one,
            r2,
        }
    }

    #[inline]
    fn redc(&self, lo: u128, hi: u128) -> u128 {
        let u = lo.wrapping_mul(self.neg_inv);
        let (ulo, uhi) = mul_wide(u, self.m);
        let (_, carry) = lo.overflowing_add(ulo);
        let mut t = hi + uhi + carry as u128;
        if t >= self.m {
            t -= self.m;
        }
        t
    }

    /// Product of two Montgomery-domain values.
    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (lo, hi) = mul_wide(a, b);
        self.redc(lo, hi)
    }

    #[inline]
    pub fn sqr(&self, a: u128) -> u128 {
        self.mul(a, a)
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        super::add_mod(a, b, self.m)
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        super::sub_mod(a, b, self.m)
    }

    #[inline]
    pub fn neg(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn to_mont(&self, x: u128) -> u128 {
        debug_assert!(x < self.m);
        self.mul(x, self.r2)
    }

    #[inline]
    pub fn from_mont(&self, x: u128) -> u128 {
        self.redc(x, 0)
    }

    /// `a^e` for a Montgomery-domain base; the exponent is a plain integer.
    pub fn pow(&self, a: u128, mut e: u128) -> u128 {
        let mut acc = self.one;
        let mut base = a;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.sqr(base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a Montgomery-domain value, staying in the domain.
    pub fn inv(&self, a: u128) -> Option<u128> {
        let plain = self.from_mont(a);
        inv_mod(plain, self.m).map(|i| self.to_mont(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{mul_mod, pow_mod, random_below};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn matches_plain_arithmetic() {
        let m = (1u128 << 101) - 99; // odd
        let ctx = Mont::new(m);
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        for _ in 0..300 {
            let a = random_below(&mut rng, m);
            let b = random_below(&mut rng, m);
            let am = ctx.to_mont(a);
            let bm = ctx.to_mont(b);
            assert_eq!(ctx.from_mont(ctx.mul(am, bm)), mul_mod(a, b, m));
            assert_eq!(ctx.from_mont(ctx.add(am, bm)), (a + b) % m);
        }
        let a = random_below(&mut rng, m);
        let e = random_below(&mut rng, 1 << 90);
        let am = ctx.to_mont(a);
        assert_eq!(ctx.from_mont(ctx.pow(am, e)), pow_mod(a, e, m));
    }

    #[test]
    fn inverse_in_domain() {
        let m = (1u128 << 89) - 1; // Mersenne prime
        let ctx = Mont::new(m);
        let a = ctx.to_mont(123456789);
        let inv = ctx.inv(a).unwrap();
        assert_eq!(ctx.mul(a, inv), ctx.one);
    }
}
