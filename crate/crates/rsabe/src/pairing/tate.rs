//! Tate pairing via Miller's algorithm with the distortion map
//! φ(x, y) = (−x, i·y), followed by the final exponentiation (q^2 − 1)/N.
//!
//! Denominator elimination: vertical-line factors evaluate inside F_q (the
//! distorted point keeps an F_q x-coordinate), and every F_q^* value is
//! killed by the (q − 1) part of the final exponent, so they are skipped.
//! The loop also tolerates the accumulator hitting the identity mid-way,
//! which happens whenever the first argument lies in a proper subgroup of
//! the order-N group.

use super::curve::MontPoint;
use super::field::{f2_mul, f2_one, f2_pow, f2_sqr, Fq2};
use crate::math::mont::Mont;

/// Line through `v` with slope `lambda`, evaluated at the distorted point
/// φ(Q) = (−x_q, i·y_q): the value is (λ·(x_q + x_v) − y_v) + i·y_q.
#[inline]
fn line_value(fq: &Mont, v: &MontPoint, lambda: u128, xq: u128, yq: u128) -> Fq2 {
    (fq.sub(fq.mul(lambda, fq.add(xq, v.x)), v.y), yq)
}

/// Miller accumulator step state: affine point plus the running value.
struct Miller<'c> {
    fq: &'c Mont,
    xq: u128,
    yq: u128,
    f: Fq2,
    v: MontPoint,
}

impl Miller<'_> {
    fn double(&mut self) {
        self.f = f2_sqr(self.fq, self.f);
        if self.v.inf {
            return;
        }
        if self.v.y == 0 {
            // vertical tangent: factor lies in F_q, dropped
            self.v = MontPoint::INFINITY;
            return;
        }
        let fq = self.fq;
        let x2 = fq.sqr(self.v.x);
        let num = fq.add(fq.add(fq.add(x2, x2), x2), fq.one);
        let den = fq.add(self.v.y, self.v.y);
        let lambda = fq.mul(num, fq.inv(den).expect("2y != 0"));
        let l = line_value(fq, &self.v, lambda, self.xq, self.yq);
        self.f = f2_mul(fq, self.f, l);
        let x3 = fq.sub(fq.sub(fq.sqr(lambda), self.v.x), self.v.x);
        let y3 = fq.sub(fq.mul(lambda, fq.sub(self.v.x, x3)), self.v.y);
        self.v = MontPoint {
            x: x3,
            y: y3,
            inf: false,
        };
    }

    fn add_base(&mut self, p: &MontPoint) {
        if self.v.inf {
            // vertical through P, dropped
            self.v = *p;
            return;
        }
        let fq = self.fq;
        let lambda = if self.v.x == p.x {
            if self.v.y != p.y || p.y == 0 {
                // chord is vertical, dropped
                self.v = MontPoint::INFINITY;
                return;
            }
            let x2 = fq.sqr(p.x);
            let num = fq.add(fq.add(fq.add(x2, x2), x2), fq.one);
            let den = fq.add(p.y, p.y);
            fq.mul(num, fq.inv(den).expect("2y != 0"))
        } else {
            fq.mul(
                fq.sub(p.y, self.v.y),
                fq.inv(fq.sub(p.x, self.v.x)).expect("distinct x"),
            )
        };
        let l = line_value(fq, &self.v, lambda, self.xq, self.yq);
        self.f = f2_mul(fq, self.f, l);
        let x3 = fq.sub(fq.sub(fq.sqr(lambda), self.v.x), p.x);
        let y3 = fq.sub(fq.mul(lambda, fq.sub(self.v.x, x3)), self.v.y);
        self.v = MontPoint {
            x: x3,
            y: y3,
            inf: false,
        };
    }
}

/// f_{order,P}(φ(Q)) ^ final_exp. Both points must be non-identity affine
/// Montgomery-domain points; the result is in the Montgomery domain.
pub(crate) fn tate_raw(
    fq: &Mont,
    p: &MontPoint,
    q: &MontPoint,
    order: u128,
    final_exp: u128,
) -> Fq2 {
    debug_assert!(!p.inf && !q.inf);
    let mut state = Miller {
        fq,
        xq: q.x,
        yq: q.y,
        f: f2_one(fq),
        v: *p,
    };
    let top = 127 - order.leading_zeros();
    for bit in (0..top).rev() {
        state.double();
        if (order >> bit) & 1 == 1 {
            state.add_base(p);
        }
    }
    debug_assert!(
        state.f.0 != 0 || state.f.1 != 0,
        "Miller value vanished; inputs outside the odd-order subgroup"
    );
    f2_pow(fq, state.f, final_exp)
}
