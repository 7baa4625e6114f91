//! Instance builders for the three subgroup-decision-style assumptions the
//! scheme's security rests on.
//!
//! These exist as harness fixtures: they exercise the sampler over every
//! distribution the assumptions name and let tests verify the *shapes*
//! (subgroup memberships) of the tuples. No hardness claim is made or
//! testable at desk-scale parameters; at these sizes the instances are
//! trivially distinguishable by factoring N.

use crate::pairing::{GroupDescriptor, GroupElement, Subgroup, TargetElement};
use crate::scheme::PublicInfo;
use rand::RngCore;

/// Subgroup decision: W1 ← G_{p1} vs W2 ← G_{p1·p2}, given g1, g3.
#[derive(Debug, Clone)]
pub struct Assumption1Instance {
    pub public_info: PublicInfo,
    pub g1: GroupElement,
    pub g3: GroupElement,
    pub w1: GroupElement,
    pub w2: GroupElement,
}

pub fn assumption1<R: RngCore + ?Sized>(
    desc: &GroupDescriptor,
    rng: &mut R,
) -> Assumption1Instance {
    Assumption1Instance {
        public_info: public_info(desc),
        g1: desc.sample(Subgroup::P1, rng),
        g3: desc.sample(Subgroup::P3, rng),
        w1: desc.sample(Subgroup::P1, rng),
        w2: desc.sample(Subgroup::P1P2, rng),
    }
}

/// General subgroup decision: W1 ← G vs W2 ← G_{p1·p3}, given g1, g3 and
/// the blended elements X1·Y1 and Y2·Z1.
#[derive(Debug, Clone)]
pub struct Assumption2Instance {
    pub public_info: PublicInfo,
    pub g1: GroupElement,
    pub g3: GroupElement,
    pub x1y1: GroupElement,
    pub y2z1: GroupElement,
    pub w1: GroupElement,
    pub w2: GroupElement,
}

pub fn assumption2<R: RngCore + ?Sized>(
    desc: &GroupDescriptor,
    rng: &mut R,
) -> Assumption2Instance {
    let ctx = desc.ctx();
    let x1 = desc.sample(Subgroup::P1, rng);
    let y1 = desc.sample(Subgroup::P2, rng);
    let y2 = desc.sample(Subgroup::P2, rng);
    let z1 = desc.sample(Subgroup::P3, rng);
    Assumption2Instance {
        public_info: public_info(desc),
        g1: desc.sample(Subgroup::P1, rng),
        g3: desc.sample(Subgroup::P3, rng),
        x1y1: ctx.mul(&x1, &y1),
        y2z1: ctx.mul(&y2, &z1),
        w1: desc.sample(Subgroup::Full, rng),
        w2: desc.sample(Subgroup::P1P3, rng),
    }
}

/// Composite Diffie-Hellman: W1 ← G_T vs W2 = e(g1, g1)^{s·α}, given
/// g1, g2, g3 and the masked powers g1^α·Y1, g1^s·Y2.
#[derive(Debug, Clone)]
pub struct Assumption3Instance {
    pub public_info: PublicInfo,
    pub g1: GroupElement,
    pub g2: GroupElement,
    pub g3: GroupElement,
    pub g1_alpha_y1: GroupElement,
    pub g1_s_y2: GroupElement,
    pub w1: TargetElement,
    pub w2: TargetElement,
}

pub fn assumption3<R: RngCore + ?Sized>(
    desc: &GroupDescriptor,
    rng: &mut R,
) -> Assumption3Instance {
    let ctx = desc.ctx();
    let alpha = ctx.random_zn(rng);
    let s = ctx.random_zn(rng);
    let g1 = desc.sample(Subgroup::P1, rng);
    let y1 = desc.sample(Subgroup::P2, rng);
    let y2 = desc.sample(Subgroup::P2, rng);
    let gt_gen = ctx.pair(desc.g_full(), desc.g_full());
    Assumption3Instance {
        public_info: public_info(desc),
        g1,
        g2: desc.sample(Subgroup::P2, rng),
        g3: desc.sample(Subgroup::P3, rng),
        g1_alpha_y1: ctx.mul(&ctx.exp(&g1, &alpha), &y1),
        g1_s_y2: ctx.mul(&ctx.exp(&g1, &s), &y2),
        w1: ctx.gt_exp(&gt_gen, &ctx.random_zn(rng)),
        w2: ctx.gt_exp(&ctx.pair(&g1, &g1), &alpha.mul(&s)),
    }
}

fn public_info(desc: &GroupDescriptor) -> PublicInfo {
    // the adversary-visible tuple (N, G, G_T, e)
    crate::scheme::PublicInfo::from_ctx(desc.ctx().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{descriptor16, rng};

    #[test]
    fn instance_shapes() {
        let desc = descriptor16();
        let ctx = desc.ctx();
        let (p1, p2, p3) = desc.primes();
        let mut r = rng(77);

        let a1 = assumption1(desc, &mut r);
        assert!(ctx.exp_raw(&a1.g1, p1).is_identity());
        assert!(ctx.exp_raw(&a1.g3, p3).is_identity());
        assert!(ctx.exp_raw(&a1.w1, p1).is_identity());
        assert!(ctx.exp_raw(&a1.w2, p1 * p2).is_identity());

        let a2 = assumption2(desc, &mut r);
        assert!(ctx.exp_raw(&a2.x1y1, p1 * p2).is_identity());
        assert!(ctx.exp_raw(&a2.y2z1, p2 * p3).is_identity());
        assert!(ctx.exp_raw(&a2.w1, p1 * p2 * p3).is_identity());
        assert!(ctx.exp_raw(&a2.w2, p1 * p3).is_identity());

        let a3 = assumption3(desc, &mut r);
        assert!(ctx.exp_raw(&a3.g2, p2).is_identity());
        assert!(ctx.gt_exp_raw(&a3.w1, p1 * p2 * p3).is_one());
        assert!(ctx.gt_exp_raw(&a3.w2, p1).is_one());
        // the blinded powers keep their G_{p1·p2} shape
        assert!(ctx.exp_raw(&a3.g1_alpha_y1, p1 * p2).is_identity());
        assert!(ctx.exp_raw(&a3.g1_s_y2, p1 * p2).is_identity());
    }
}
