//! Arithmetic in F_{q^2} = F_q[i]/(i^2 + 1), valid because q ≡ 3 (mod 4).
//!
//! Values are pairs of Montgomery-domain coordinates; all functions take the
//! base-field context explicitly.

use crate::math::mont::Mont;

pub(crate) type Fq2 = (u128, u128);

#[inline]
pub(crate) fn f2_one(fq: &Mont) -> Fq2 {
    (fq.one, 0)
}

#[inline]
pub(crate) fn f2_add(fq: &Mont, a: Fq2, b: Fq2) -> Fq2 {
    (fq.add(a.0, b.0), fq.add(a.1, b.1))
}

#[inline]
pub(crate) fn f2_sub(fq: &Mont, a: Fq2, b: Fq2) -> Fq2 {
    (fq.sub(a.0, b.0), fq.sub(a.1, b.1))
}

/// Karatsuba-style product: 3 base-field multiplications.
#[inline]
pub(crate) fn f2_mul(fq: &Mont, a: Fq2, b: Fq2) -> Fq2 {
    let t0 = fq.mul(a.0, b.0);
    let t1 = fq.mul(a.1, b.1);
    let cross = fq.mul(fq.add(a.0, a.1), fq.add(b.0, b.1));
    (fq.sub(t0, t1), fq.sub(cross, fq.add(t0, t1)))
}

#[inline]
pub(crate) fn f2_sqr(fq: &Mont, a: Fq2) -> Fq2 {
    let re = fq.mul(fq.add(a.0, a.1), fq.sub(a.0, a.1));
    let im = fq.mul(a.0, a.1);
    (re, fq.add(im, im))
}

/// (a + bi)^{-1} = (a - bi) / (a^2 + b^2); `None` only for zero.
pub(crate) fn f2_inv(fq: &Mont, a: Fq2) -> Option<Fq2> {
    let norm = fq.add(fq.sqr(a.0), fq.sqr(a.1));
    let ninv = fq.inv(norm)?;
    Some((fq.mul(a.0, ninv), fq.mul(fq.neg(a.1), ninv)))
}

pub(crate) fn f2_pow(fq: &Mont, a: Fq2, mut e: u128) -> Fq2 {
    let mut acc = f2_one(fq);
    let mut base = a;
    while e != 0 {
        if e & 1 == 1 {
            acc = f2_mul(fq, acc, base);
        }
        base = f2_sqr(fq, base);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_identities() {
        let fq = Mont::new((1u128 << 89) - 1); // 2^89-1 is prime and ≡ 3 mod 4
        let a = (fq.to_mont(123456), fq.to_mont(987654));
        let b = (fq.to_mont(555), fq.to_mont(777));
        let ab = f2_mul(&fq, a, b);
        let ba = f2_mul(&fq, b, a);
        assert_eq!(ab, ba);
        assert_eq!(f2_sqr(&fq, a), f2_mul(&fq, a, a));
        let inv = f2_inv(&fq, a).unwrap();
        assert_eq!(f2_mul(&fq, a, inv), f2_one(&fq));
        // i^2 = -1
        let i = (0, fq.one);
        assert_eq!(f2_sqr(&fq, i), (fq.neg(fq.one), 0));
    }
}
