//! Composite-order symmetric bilinear group.
//!
//! The group is the order-N subgroup of E(F_q), E: y^2 = x^3 + x, with
//! N = p1·p2·p3, q = c·N − 1 prime, q ≡ 3 (mod 4). The curve is
//! supersingular, E(F_q) is cyclic of order q + 1, and the distortion map
//! φ(x, y) = (−x, i·y) turns the Tate pairing into a symmetric pairing that
//! is non-degenerate on the order-N subgroup. Prime-order subgroups pair to
//! the identity against each other, which is the property the whole scheme
//! leans on.
//!
//! Parameters are desk-scale and deliberately insecure.

mod codec;
mod curve;
mod field;
mod scalar;
mod tate;

pub use scalar::Scalar;

use crate::error::{Error, Result};
use crate::math::{self, mont::Mont, primes};
use curve::MontPoint;
use rand::RngCore;

/// Point of the order-N subgroup (or the identity), in plain affine form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    x: u128,
    y: u128,
    infinity: bool,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        x: 0,
        y: 0,
        infinity: true,
    };

    pub fn is_identity(&self) -> bool {
        self.infinity
    }
}

/// Element of the order-N subgroup of F_{q^2}^*, post final exponentiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TargetElement {
    re: u128,
    im: u128,
}

impl TargetElement {
    pub const ONE: TargetElement = TargetElement { re: 1, im: 0 };

    pub fn is_one(&self) -> bool {
        self.re == 1 && self.im == 0
    }
}

/// Shareable arithmetic context: everything needed to compute group and
/// pairing operations without knowing the factorization of N.
#[derive(Debug, Clone)]
pub struct PairingCtx {
    q: u128,
    n: u128,
    cofactor: u128,
    final_exp: u128,
    fq: Mont,
}

impl PartialEq for PairingCtx {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.n == other.n
    }
}
impl Eq for PairingCtx {}

impl PairingCtx {
    /// Rebuild the context from the public pair (q, N).
    pub fn from_parts(q: u128, n: u128) -> Result<PairingCtx> {
        if n < 2 || q < 3 || q % 4 != 3 {
            return Err(Error::InvalidParameter(
                "field prime must satisfy q ≡ 3 (mod 4)".into(),
            ));
        }
        if (q + 1) % n != 0 {
            return Err(Error::InvalidParameter("N must divide q + 1".into()));
        }
        if q >= 1u128 << 125 {
            return Err(Error::InvalidParameter("field prime too large".into()));
        }
        let cofactor = (q + 1) / n;
        let final_exp = (q - 1)
            .checked_mul(cofactor)
            .ok_or_else(|| Error::InvalidParameter("final exponent overflows".into()))?;
        Ok(PairingCtx {
            q,
            n,
            cofactor,
            final_exp,
            fq: Mont::new(q),
        })
    }

    pub fn field_q(&self) -> u128 {
        self.q
    }

    pub fn modulus_n(&self) -> u128 {
        self.n
    }

    pub(crate) fn fq(&self) -> &Mont {
        &self.fq
    }

    fn lift(&self, a: &GroupElement) -> MontPoint {
        if a.infinity {
            MontPoint::INFINITY
        } else {
            MontPoint {
                x: self.fq.to_mont(a.x),
                y: self.fq.to_mont(a.y),
                inf: false,
            }
        }
    }

    fn drop(&self, p: &MontPoint) -> GroupElement {
        if p.inf {
            GroupElement::IDENTITY
        } else {
            GroupElement {
                x: self.fq.from_mont(p.x),
                y: self.fq.from_mont(p.y),
                infinity: false,
            }
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.drop(&curve::affine_add(&self.fq, &self.lift(a), &self.lift(b)))
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        self.drop(&curve::affine_neg(&self.fq, &self.lift(a)))
    }

    pub fn exp(&self, a: &GroupElement, k: &Scalar) -> GroupElement {
        self.exp_raw(a, k.value())
    }

    pub fn exp_raw(&self, a: &GroupElement, k: u128) -> GroupElement {
        self.drop(&curve::scalar_mul(&self.fq, &self.lift(a), k))
    }

    /// Symmetric pairing e(a, b) = Tate(a, φ(b)).
    pub fn pair(&self, a: &GroupElement, b: &GroupElement) -> TargetElement {
        if a.infinity || b.infinity {
            return TargetElement::ONE;
        }
        let pa = self.lift(a);
        let pb = self.lift(b);
        let f = tate::tate_raw(&self.fq, &pa, &pb, self.n, self.final_exp);
        TargetElement {
            re: self.fq.from_mont(f.0),
            im: self.fq.from_mont(f.1),
        }
    }

    pub fn gt_one(&self) -> TargetElement {
        TargetElement::ONE
    }

    pub fn gt_mul(&self, a: &TargetElement, b: &TargetElement) -> TargetElement {
        let fq = &self.fq;
        let r = field::f2_mul(
            fq,
            (fq.to_mont(a.re), fq.to_mont(a.im)),
            (fq.to_mont(b.re), fq.to_mont(b.im)),
        );
        TargetElement {
            re: fq.from_mont(r.0),
            im: fq.from_mont(r.1),
        }
    }

    pub fn gt_inv(&self, a: &TargetElement) -> TargetElement {
        let fq = &self.fq;
        let r = field::f2_inv(fq, (fq.to_mont(a.re), fq.to_mont(a.im)))
            .expect("target elements are nonzero");
        TargetElement {
            re: fq.from_mont(r.0),
            im: fq.from_mont(r.1),
        }
    }

    pub fn gt_exp(&self, a: &TargetElement, k: &Scalar) -> TargetElement {
        self.gt_exp_raw(a, k.value())
    }

    pub fn gt_exp_raw(&self, a: &TargetElement, k: u128) -> TargetElement {
        let fq = &self.fq;
        let r = field::f2_pow(fq, (fq.to_mont(a.re), fq.to_mont(a.im)), k);
        TargetElement {
            re: fq.from_mont(r.0),
            im: fq.from_mont(r.1),
        }
    }

    /// Uniform scalar mod N.
    pub fn random_zn<R: RngCore + ?Sized>(&self, rng: &mut R) -> Scalar {
        Scalar::random(rng, self.n)
    }

    pub fn scalar(&self, value: u128) -> Scalar {
        Scalar::new(value, self.n)
    }

    pub(crate) fn on_curve(&self, a: &GroupElement) -> bool {
        if a.infinity {
            return true;
        }
        a.x < self.q && a.y < self.q && curve::is_on_curve(&self.fq, &self.lift(a))
    }

    /// Membership in the order-N subgroup.
    pub(crate) fn in_group(&self, a: &GroupElement) -> bool {
        self.on_curve(a) && self.exp_raw(a, self.n).is_identity()
    }

    pub(crate) fn gt_in_group(&self, a: &TargetElement) -> bool {
        (a.re != 0 || a.im != 0) && a.re < self.q && a.im < self.q && {
            self.gt_exp_raw(a, self.n).is_one()
        }
    }
}

/// Which subgroup to sample from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subgroup {
    P1,
    P2,
    P3,
    P1P2,
    P1P3,
    Full,
}

/// Full group descriptor: the public context plus the factorization of N
/// and one generator per prime-order subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescriptor {
    ctx: PairingCtx,
    p: [u128; 3],
    g_bar: [GroupElement; 3],
    g_full: GroupElement,
}

const PRIME_ATTEMPTS: u32 = 20_000;
const COFACTOR_ROUNDS: u32 = 64;
const POINT_ATTEMPTS: u32 = 512;

/// Search parameters for a composite-order group with `lambda`-bit subgroup
/// primes. Deterministic for a fixed RNG stream.
pub fn gen_descriptor<R: RngCore + ?Sized>(lambda: u32, rng: &mut R) -> Result<GroupDescriptor> {
    if lambda < 16 {
        return Err(Error::InvalidParameter(
            "lambda below 16 bits degenerates subgroup sampling".into(),
        ));
    }
    if lambda > 38 {
        return Err(Error::InvalidParameter(
            "lambda above 38 bits overflows 128-bit arithmetic".into(),
        ));
    }
    for _ in 0..COFACTOR_ROUNDS {
        let p1 = primes::random_prime(lambda, rng, PRIME_ATTEMPTS)
            .ok_or_else(|| Error::ParameterSearch("prime sampling budget exhausted".into()))?;
        let p2 = loop {
            let p = primes::random_prime(lambda, rng, PRIME_ATTEMPTS)
                .ok_or_else(|| Error::ParameterSearch("prime sampling budget exhausted".into()))?;
            if p != p1 {
                break p;
            }
        };
        let p3 = loop {
            let p = primes::random_prime(lambda, rng, PRIME_ATTEMPTS)
                .ok_or_else(|| Error::ParameterSearch("prime sampling budget exhausted".into()))?;
            if p != p1 && p != p2 {
                break p;
            }
        };
        let n = p1 * p2 * p3;

        // q = c·N − 1 with 4 | c keeps q ≡ 3 (mod 4); the c bound keeps the
        // final exponent (q − 1)·c inside u128.
        let c_cap = isqrt((1u128 << 126) / n).min(1 << 20) & !3u128;
        let mut found = None;
        let mut c = 4u128;
        while c <= c_cap {
            let q = c * n - 1;
            debug_assert_eq!(q % 4, 3);
            if primes::is_probable_prime(q, 24, rng) {
                found = Some((q, c));
                break;
            }
            c += 4;
        }
        let Some((q, _)) = found else {
            continue;
        };
        let ctx = PairingCtx::from_parts(q, n)?;
        if let Some(desc) = find_generators(ctx, [p1, p2, p3], rng) {
            return Ok(desc);
        }
    }
    Err(Error::ParameterSearch(
        "no pairing-friendly parameters within the retry budget".into(),
    ))
}

fn find_generators<R: RngCore + ?Sized>(
    ctx: PairingCtx,
    p: [u128; 3],
    rng: &mut R,
) -> Option<GroupDescriptor> {
    let fq = &ctx.fq;
    let n = ctx.n;
    for _ in 0..POINT_ATTEMPTS {
        let x = math::random_below(rng, ctx.q);
        let xm = fq.to_mont(x);
        let rhs = curve::curve_rhs(fq, xm);
        let ym = fq.pow(rhs, (ctx.q + 1) / 4);
        if fq.sqr(ym) != rhs {
            continue;
        }
        let pt = MontPoint {
            x: xm,
            y: ym,
            inf: false,
        };
        // clear the cofactor, then demand exact order N
        let h = curve::scalar_mul(fq, &pt, ctx.cofactor);
        if h.inf {
            continue;
        }
        if (0..3).any(|i| curve::scalar_mul(fq, &h, n / p[i]).inf) {
            continue;
        }
        let h_pub = ctx.drop(&h);
        let g_bar = [
            ctx.exp_raw(&h_pub, n / p[0]),
            ctx.exp_raw(&h_pub, n / p[1]),
            ctx.exp_raw(&h_pub, n / p[2]),
        ];
        let g_full = ctx.mul(&ctx.mul(&g_bar[0], &g_bar[1]), &g_bar[2]);
        return Some(GroupDescriptor {
            ctx,
            p,
            g_bar,
            g_full,
        });
    }
    None
}

fn isqrt(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut x = 1u128 << (64 - (v.leading_zeros() / 2).min(63));
    loop {
        let nx = (x + v / x) / 2;
        if nx >= x {
            return x;
        }
        x = nx;
    }
}

impl GroupDescriptor {
    pub fn ctx(&self) -> &PairingCtx {
        &self.ctx
    }

    pub fn primes(&self) -> (u128, u128, u128) {
        (self.p[0], self.p[1], self.p[2])
    }

    pub fn modulus_n(&self) -> u128 {
        self.ctx.n
    }

    /// Generator of the prime subgroup G_{p_i}, i in 1..=3.
    pub fn g_bar(&self, i: usize) -> &GroupElement {
        &self.g_bar[i - 1]
    }

    /// ḡ1·ḡ2·ḡ3, a generator of the full order-N subgroup.
    pub fn g_full(&self) -> &GroupElement {
        &self.g_full
    }

    /// Uniform element of the named subgroup.
    pub fn sample<R: RngCore + ?Sized>(&self, which: Subgroup, rng: &mut R) -> GroupElement {
        let ctx = &self.ctx;
        let part = |i: usize, rng: &mut R| {
            let r = math::random_nonzero_below(rng, self.p[i]);
            ctx.exp_raw(&self.g_bar[i], r)
        };
        match which {
            Subgroup::P1 => part(0, rng),
            Subgroup::P2 => part(1, rng),
            Subgroup::P3 => part(2, rng),
            Subgroup::P1P2 => {
                let a = part(0, rng);
                let b = part(1, rng);
                ctx.mul(&a, &b)
            }
            Subgroup::P1P3 => {
                let a = part(0, rng);
                let b = part(2, rng);
                ctx.mul(&a, &b)
            }
            Subgroup::Full => {
                let r = math::random_below(rng, ctx.n);
                ctx.exp_raw(&self.g_full, r)
            }
        }
    }
}
