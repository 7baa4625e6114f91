//! Point arithmetic on the supersingular curve E: y^2 = x^3 + x over F_q.
//!
//! Internal coordinates live in the Montgomery domain. Scalar multiplication
//! runs in Jacobian coordinates to avoid per-step inversions; single additions
//! use the affine chord-tangent law.

use crate::math::mont::Mont;

/// Affine point in the Montgomery domain; `inf` marks the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct MontPoint {
    pub x: u128,
    pub y: u128,
    pub inf: bool,
}

impl MontPoint {
    pub const INFINITY: MontPoint = MontPoint {
        x: 0,
        y: 0,
        inf: true,
    };
}

/// Jacobian point (X : Y : Z); Z = 0 marks the identity.
#[derive(Debug, Clone, Copy)]
struct JPoint {
    x: u128,
    y: u128,
    z: u128,
}

const J_INFINITY: JPoint = JPoint { x: 0, y: 0, z: 0 };

/// x^3 + x, in the Montgomery domain.
#[inline]
pub(crate) fn curve_rhs(fq: &Mont, x: u128) -> u128 {
    fq.add(fq.mul(fq.sqr(x), x), x)
}

pub(crate) fn is_on_curve(fq: &Mont, p: &MontPoint) -> bool {
    p.inf || fq.sqr(p.y) == curve_rhs(fq, p.x)
}

/// General affine addition (handles doubling, inverses, identity).
pub(crate) fn affine_add(fq: &Mont, a: &MontPoint, b: &MontPoint) -> MontPoint {
    if a.inf {
        return *b;
    }
    if b.inf {
        return *a;
    }
    let lambda = if a.x == b.x {
        if a.y != b.y || a.y == 0 {
            return MontPoint::INFINITY;
        }
        // tangent: (3x^2 + 1) / (2y)
        let x2 = fq.sqr(a.x);
        let num = fq.add(fq.add(fq.add(x2, x2), x2), fq.one);
        let den = fq.add(a.y, a.y);
        fq.mul(num, fq.inv(den).expect("2y invertible for y != 0"))
    } else {
        let num = fq.sub(b.y, a.y);
        let den = fq.sub(b.x, a.x);
        fq.mul(num, fq.inv(den).expect("x1 != x2"))
    };
    let x3 = fq.sub(fq.sub(fq.sqr(lambda), a.x), b.x);
    let y3 = fq.sub(fq.mul(lambda, fq.sub(a.x, x3)), a.y);
    MontPoint {
        x: x3,
        y: y3,
        inf: false,
    }
}

#[inline]
pub(crate) fn affine_neg(fq: &Mont, a: &MontPoint) -> MontPoint {
    MontPoint {
        x: a.x,
        y: fq.neg(a.y),
        inf: a.inf,
    }
}

/// Jacobian doubling for curve coefficient a = 1 (dbl-2007-bl).
fn jacobian_double(fq: &Mont, p: &JPoint) -> JPoint {
    if p.z == 0 || p.y == 0 {
        return J_INFINITY;
    }
    let xx = fq.sqr(p.x);
    let yy = fq.sqr(p.y);
    let yyyy = fq.sqr(yy);
    let zz = fq.sqr(p.z);
    let mut s = fq.sub(fq.sub(fq.sqr(fq.add(p.x, yy)), xx), yyyy);
    s = fq.add(s, s);
    let m = fq.add(fq.add(fq.add(xx, xx), xx), fq.sqr(zz));
    let x3 = fq.sub(fq.sqr(m), fq.add(s, s));
    let mut y8 = fq.add(yyyy, yyyy);
    y8 = fq.add(y8, y8);
    y8 = fq.add(y8, y8);
    let y3 = fq.sub(fq.mul(m, fq.sub(s, x3)), y8);
    let z3 = fq.sub(fq.sub(fq.sqr(fq.add(p.y, p.z)), yy), zz);
    JPoint {
        x: x3,
        y: y3,
        z: z3,
    }
}

/// Mixed Jacobian + affine addition (madd-2007-bl).
fn jacobian_add_mixed(fq: &Mont, p: &JPoint, q: &MontPoint) -> JPoint {
    if q.inf {
        return *p;
    }
    if p.z == 0 {
        return JPoint {
            x: q.x,
            y: q.y,
            z: fq.one,
        };
    }
    let z1z1 = fq.sqr(p.z);
    let u2 = fq.mul(q.x, z1z1);
    let s2 = fq.mul(fq.mul(q.y, p.z), z1z1);
    if u2 == p.x {
        if s2 == p.y {
            return jacobian_double(fq, p);
        }
        return J_INFINITY;
    }
    let h = fq.sub(u2, p.x);
    let hh = fq.sqr(h);
    let mut i = fq.add(hh, hh);
    i = fq.add(i, i);
    let j = fq.mul(h, i);
    let r = {
        let t = fq.sub(s2, p.y);
        fq.add(t, t)
    };
    let v = fq.mul(p.x, i);
    let x3 = fq.sub(fq.sub(fq.sqr(r), j), fq.add(v, v));
    let yj = fq.mul(p.y, j);
    let y3 = fq.sub(fq.mul(r, fq.sub(v, x3)), fq.add(yj, yj));
    let z3 = fq.sub(fq.sub(fq.sqr(fq.add(p.z, h)), z1z1), hh);
    JPoint {
        x: x3,
        y: y3,
        z: z3,
    }
}

fn jacobian_to_affine(fq: &Mont, p: &JPoint) -> MontPoint {
    if p.z == 0 {
        return MontPoint::INFINITY;
    }
    let zinv = fq.inv(p.z).expect("nonzero z");
    let zinv2 = fq.sqr(zinv);
    MontPoint {
        x: fq.mul(p.x, zinv2),
        y: fq.mul(p.y, fq.mul(zinv2, zinv)),
        inf: false,
    }
}

/// `k * P` by left-to-right double-and-add.
pub(crate) fn scalar_mul(fq: &Mont, p: &MontPoint, k: u128) -> MontPoint {
    if k == 0 || p.inf {
        return MontPoint::INFINITY;
    }
    let mut acc = J_INFINITY;
    let top = 127 - k.leading_zeros();
    for bit in (0..=top).rev() {
        acc = jacobian_double(fq, &acc);
        if (k >> bit) & 1 == 1 {
            acc = jacobian_add_mixed(fq, &acc, p);
        }
    }
    jacobian_to_affine(fq, &acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Small pairing-friendly toy field: q = 1019 is prime, q ≡ 3 mod 4.
    fn toy() -> (Mont, MontPoint) {
        let fq = Mont::new(1019);
        // find a point: x = 2 -> rhs = 10, is it a square mod 1019?
        let mut p = None;
        for x in 1u128..1019 {
            let rhs = curve_rhs(&fq, fq.to_mont(x));
            let y = fq.pow(rhs, (1019 + 1) / 4);
            if fq.sqr(y) == rhs {
                p = Some(MontPoint {
                    x: fq.to_mont(x),
                    y,
                    inf: false,
                });
                break;
            }
        }
        (fq, p.unwrap())
    }

    #[test]
    fn group_laws_hold() {
        let (fq, p) = toy();
        assert!(is_on_curve(&fq, &p));
        let p2 = affine_add(&fq, &p, &p);
        assert!(is_on_curve(&fq, &p2));
        let p3 = affine_add(&fq, &p2, &p);
        assert_eq!(p3, affine_add(&fq, &p, &p2));
        assert_eq!(scalar_mul(&fq, &p, 3), p3);
        let neg = affine_neg(&fq, &p);
        assert_eq!(affine_add(&fq, &p, &neg), MontPoint::INFINITY);
        // the whole curve has order q + 1 = 1020
        assert_eq!(scalar_mul(&fq, &p, 1020), MontPoint::INFINITY);
    }

    #[test]
    fn scalar_mul_matches_repeated_addition() {
        let (fq, p) = toy();
        let mut acc = MontPoint::INFINITY;
        for k in 0..40u128 {
            assert_eq!(scalar_mul(&fq, &p, k), acc, "k = {k}");
            acc = affine_add(&fq, &acc, &p);
        }
    }
}
