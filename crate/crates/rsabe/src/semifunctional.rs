//! Semi-functional key and ciphertext generation, used as a test oracle.
//!
//! These variants plant extra G_{p2} components in keys (on K_1 rows) and
//! in ABE headers (on C_0 and the C_1 components). Because G_{p2} pairs to
//! 1 against both G_{p1} and G_{p3}, a semi-functional artifact is
//! indistinguishable in function from a standard one unless *both* sides
//! of a decryption are semi-functional, in which case a residual
//! e(g_2, g_2)^{c·ζ} ≠ 1 factor corrupts the recovered plaintext.
//!
//! Construction requires a generator of G_{p2}, so an [`SfContext`] only
//! comes from the descriptor (authority side); nothing here serializes.
//! The SUE header has no semi-functional form in this artifact; only the
//! ABE side and the shared C_0 are transformed.

use crate::abe::{AbeHeader, AbePublicKey};
use crate::attrs::AttributeUniverse;
use crate::error::Result;
use crate::lsss::AccessStructure;
use crate::pairing::{GroupDescriptor, GroupElement, PairingCtx, Scalar, Subgroup, TargetElement};
use crate::scheme::{
    rsabe_encrypt, rsabe_genkey, PublicInfo, RsabeCiphertext, RsabeMasterKey, RsabePrivateKey,
    RsabePublicKey,
};
use crate::subset_cover::UserTree;
use rand::RngCore;

/// Fixed semi-functional exponents: one ζ and η per tree node, one z per
/// expanded attribute, plus the G_{p2} generator they ride on.
#[derive(Debug, Clone)]
pub struct SfContext {
    g2: GroupElement,
    /// Per-node key exponents; chosen nonzero mod p2 so residuals never
    /// vanish by accident.
    zeta: Vec<Scalar>,
    /// Per-node time-update exponents. Housed for completeness; the SUE
    /// semi-functional path that would consume them is out of scope.
    eta: Vec<Scalar>,
    /// z[attr][copy − 1] over the expanded universe.
    z_attr: Vec<Vec<Scalar>>,
    p2: u128,
}

impl SfContext {
    pub fn new<R: RngCore + ?Sized>(
        desc: &GroupDescriptor,
        universe: &AttributeUniverse,
        tree: &UserTree,
        rng: &mut R,
    ) -> SfContext {
        let ctx = desc.ctx();
        let (_, p2, _) = desc.primes();
        let g2 = loop {
            let g2 = desc.sample(Subgroup::P2, rng);
            if !g2.is_identity() {
                break g2;
            }
        };
        let nonzero_mod_p2 = |rng: &mut R| loop {
            let s = ctx.random_zn(rng);
            if s.value() % p2 != 0 {
                break s;
            }
        };
        let zeta = (0..tree.node_count()).map(|_| nonzero_mod_p2(rng)).collect();
        let eta = (0..tree.node_count()).map(|_| ctx.random_zn(rng)).collect();
        let z_attr = (0..universe.len())
            .map(|_| (0..universe.dup()).map(|_| ctx.random_zn(rng)).collect())
            .collect();
        SfContext {
            g2,
            zeta,
            eta,
            z_attr,
            p2,
        }
    }

    pub fn g2(&self) -> &GroupElement {
        &self.g2
    }

    pub fn p2(&self) -> u128 {
        self.p2
    }

    pub fn zeta(&self, node: u64) -> &Scalar {
        &self.zeta[node as usize]
    }

    pub fn eta(&self, node: u64) -> &Scalar {
        &self.eta[node as usize]
    }

    pub fn z_attr(&self, attr: u32, copy: u32) -> &Scalar {
        &self.z_attr[attr as usize][(copy - 1) as usize]
    }
}

/// What `sf_genkey` did, for white-box assertions: the standard key it
/// started from and the v̂ vector used per path node.
#[derive(Debug, Clone)]
pub struct SfKeyTrace {
    pub standard: RsabePrivateKey,
    pub hat_vs: Vec<Vec<Scalar>>,
}

/// Semi-functional RS-ABE.GenKeySF: generate a standard key, then multiply
/// each row's K_1 by g_2^{B_i·v̂} with v̂ = (ζ_node, r′_2, …, r′_m) fresh
/// per sub-key. K_2 rows stay untouched.
pub fn sf_genkey<R: RngCore + ?Sized>(
    sf: &SfContext,
    pi: &PublicInfo,
    pk: &RsabePublicKey,
    mk: &RsabeMasterKey,
    structure: &AccessStructure,
    user: u64,
    rng: &mut R,
) -> Result<(RsabePrivateKey, SfKeyTrace)> {
    let ctx = pi.ctx();
    let n = ctx.modulus_n();
    let standard = rsabe_genkey(pi, pk, mk, structure, user, rng)?;
    let mut key = standard.clone();
    let mut hat_vs = Vec::with_capacity(key.private_set().len());
    let nodes: Vec<u64> = key.private_set().nodes().to_vec();
    for (sub, node) in key.sub_keys.iter_mut().zip(nodes) {
        let mut hat_v = Vec::with_capacity(structure.cols());
        hat_v.push(*sf.zeta(node));
        for _ in 1..structure.cols() {
            hat_v.push(Scalar::random(rng, n));
        }
        for i in 0..structure.rows() {
            let exp = crate::lsss::dot(structure.row(i), &hat_v);
            sub.pairs[i].0 = ctx.mul(&sub.pairs[i].0, &ctx.exp(&sf.g2, &exp));
        }
        hat_vs.push(hat_v);
    }
    Ok((key, SfKeyTrace { standard, hat_vs }))
}

fn sf_transform_abe_header(
    sf: &SfContext,
    ctx: &PairingCtx,
    header: &AbeHeader,
    c: &Scalar,
) -> AbeHeader {
    let mut out = header.clone();
    out.c0 = ctx.mul(&out.c0, &ctx.exp(&sf.g2, c));
    let attrs: Vec<u32> = out.attrs().to_vec();
    for (pos, &attr) in attrs.iter().enumerate() {
        for copy in 1..=out.c1[pos].len() as u32 {
            let exp = c.mul(sf.z_attr(attr, copy));
            out.c1[pos][(copy - 1) as usize] =
                ctx.mul(&out.c1[pos][(copy - 1) as usize], &ctx.exp(&sf.g2, &exp));
        }
    }
    out
}

/// Semi-functional ABE.EncryptSF: standard header and session key first,
/// then C_0 ← C_0·g_2^c and C_{1,a} ← C_{1,a}·g_2^{c·z_a}. Returns
/// C = M · EK′ like the standard path.
pub fn sf_abe_encrypt<S: AsRef<str>, R: RngCore + ?Sized>(
    sf: &SfContext,
    pi: &PublicInfo,
    pk_abe: &AbePublicKey,
    set: &[S],
    m: &TargetElement,
    c: &Scalar,
    rng: &mut R,
) -> Result<(TargetElement, AbeHeader)> {
    let ctx = pi.ctx();
    let s = ctx.random_zn(rng);
    let (header, ek) = crate::abe::abe_encrypt(ctx, pk_abe, set, &s)?;
    let payload = ctx.gt_mul(m, &ek);
    Ok((payload, sf_transform_abe_header(sf, ctx, &header, c)))
}

/// Semi-functional RS-ABE.EncryptSF: standard ciphertext first, then one
/// shared c ← Z_N feeds the ABE transform. The SUE header stays standard
/// (no SUE semi-functional form exists here), so the shared C_0 diverges
/// between the two headers by exactly g_2^c.
pub fn sf_rsabe_encrypt<S: AsRef<str>, R: RngCore + ?Sized>(
    sf: &SfContext,
    pi: &PublicInfo,
    pk: &RsabePublicKey,
    m: &TargetElement,
    set: &[S],
    time: u64,
    rng: &mut R,
) -> Result<RsabeCiphertext> {
    let ctx = pi.ctx();
    let mut ct = rsabe_encrypt(pi, pk, m, set, time, rng)?;
    let c = ctx.random_zn(rng);
    ct.abe_header = sf_transform_abe_header(sf, ctx, &ct.abe_header, &c);
    Ok(ct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lsss::{compile_policy, parse_policy};
    use crate::scheme::{rsabe_decrypt, rsabe_setup_with_descriptor, rsabe_updatekey, RsabeSetup};
    use crate::testutil::{descriptor32, rng};
    use std::collections::BTreeSet;

    fn universe() -> AttributeUniverse {
        AttributeUniverse::new(vec!["a", "b", "c"], 4).unwrap()
    }

    fn setup(seed: u64) -> (RsabeSetup, SfContext) {
        let s = rsabe_setup_with_descriptor(descriptor32().clone(), &universe(), 6, 4, &mut rng(seed))
            .unwrap();
        let sf = SfContext::new(
            &s.descriptor,
            s.public_key.universe(),
            s.master_key.tree(),
            &mut rng(seed + 1000),
        );
        (s, sf)
    }

    fn message(pi: &PublicInfo, seed: u64) -> TargetElement {
        let d = descriptor32();
        let ctx = pi.ctx();
        ctx.gt_exp(&ctx.pair(d.g_full(), d.g_full()), &ctx.random_zn(&mut rng(seed)))
    }

    #[test]
    fn sf_factors_live_in_gp2_and_strip_cleanly() {
        let (s, sf) = setup(1);
        let ctx = s.public_info.ctx();
        let structure = compile_policy(
            &parse_policy("a AND b").unwrap(),
            s.public_key.universe(),
            ctx.modulus_n(),
        )
        .unwrap();
        let (key, trace) = sf_genkey(
            &sf,
            &s.public_info,
            &s.public_key,
            &s.master_key,
            &structure,
            2,
            &mut rng(10),
        )
        .unwrap();
        for (h, (sub, std_sub)) in key
            .sub_keys()
            .iter()
            .zip(trace.standard.sub_keys())
            .enumerate()
        {
            for i in 0..structure.rows() {
                let (k1, k2) = &sub.pairs()[i];
                let (k1s, k2s) = &std_sub.pairs()[i];
                assert_eq!(k2, k2s, "K2 rows must stay untouched");
                // quotient has order dividing p2
                let quot = ctx.mul(k1, &ctx.inv(k1s));
                assert!(!quot.is_identity());
                assert!(ctx.exp_raw(&quot, sf.p2()).is_identity());
                // stripping g2^{B_i·v̂} recovers the standard key bit-exactly
                let exp = crate::lsss::dot(structure.row(i), &trace.hat_vs[h]);
                let stripped = ctx.mul(k1, &ctx.inv(&ctx.exp(sf.g2(), &exp)));
                assert_eq!(&stripped, k1s);
            }
        }
    }

    #[test]
    fn four_cell_decryption_matrix() {
        let (s, sf) = setup(2);
        let pi = &s.public_info;
        let ctx = pi.ctx();
        let structure = compile_policy(
            &parse_policy("a AND b").unwrap(),
            s.public_key.universe(),
            ctx.modulus_n(),
        )
        .unwrap();
        let mut r = rng(20);
        let tk = rsabe_updatekey(pi, &s.public_key, &s.master_key, 4, &BTreeSet::new(), &mut r)
            .unwrap();
        for trial in 0..10 {
            let m = message(pi, 1000 + trial);
            let sk_std =
                rsabe_genkey(pi, &s.public_key, &s.master_key, &structure, 1, &mut r).unwrap();
            let (sk_sf, _) = sf_genkey(
                &sf,
                pi,
                &s.public_key,
                &s.master_key,
                &structure,
                2,
                &mut r,
            )
            .unwrap();
            let ct_std = rsabe_encrypt(pi, &s.public_key, &m, &["a", "b"], 2, &mut r).unwrap();
            let ct_sf =
                sf_rsabe_encrypt(&sf, pi, &s.public_key, &m, &["a", "b"], 2, &mut r).unwrap();

            assert_eq!(rsabe_decrypt(pi, &ct_std, &sk_std, &tk).unwrap(), m);
            assert_eq!(rsabe_decrypt(pi, &ct_std, &sk_sf, &tk).unwrap(), m);
            assert_eq!(rsabe_decrypt(pi, &ct_sf, &sk_std, &tk).unwrap(), m);
            // both sides semi-functional: randomized plaintext with a
            // residual of order dividing p2
            let got = rsabe_decrypt(pi, &ct_sf, &sk_sf, &tk).unwrap();
            assert_ne!(got, m);
            let residual = ctx.gt_mul(&got, &ctx.gt_inv(&m));
            assert!(ctx.gt_exp_raw(&residual, sf.p2()).is_one());
        }
    }

    #[test]
    fn zero_c_reduces_to_standard() {
        let (s, sf) = setup(3);
        let pi = &s.public_info;
        let ctx = pi.ctx();
        let desc = &s.descriptor;
        let (mk_abe, pk_abe) = crate::abe::abe_setup(desc, s.public_key.universe(), &mut rng(30));
        let m = message(pi, 31);
        let (payload, header) =
            sf_abe_encrypt(&sf, pi, &pk_abe, &["a"], &m, &ctx.scalar(0), &mut rng(32)).unwrap();
        // with c = 0 the header is a plain header: a standard key decrypts
        // it to the standard session key and C/EK recovers M
        let structure = compile_policy(
            &parse_policy("a").unwrap(),
            s.public_key.universe(),
            ctx.modulus_n(),
        )
        .unwrap();
        let sk = crate::abe::abe_genkey(ctx, &pk_abe.params, &mk_abe, &structure, &mut rng(33))
            .unwrap();
        let ek = crate::abe::abe_decrypt(ctx, &sk, &header).unwrap();
        assert_eq!(ctx.gt_mul(&payload, &ctx.gt_inv(&ek)), m);
    }

    #[test]
    fn standalone_sf_abe_header_quotients() {
        let (s, sf) = setup(4);
        let pi = &s.public_info;
        let ctx = pi.ctx();
        let (_, pk_abe) = crate::abe::abe_setup(&s.descriptor, s.public_key.universe(), &mut rng(40));
        let m = message(pi, 41);
        let c = ctx.random_zn(&mut rng(42));
        let s_exp = ctx.random_zn(&mut rng(43));
        let header_std =
            crate::abe::abe_encrypt(ctx, &pk_abe, &["a", "c"], &s_exp).unwrap().0;
        // rebuild the SF header over the very same base header
        let sf_header = super::sf_transform_abe_header(&sf, ctx, &header_std, &c);
        let q0 = ctx.mul(sf_header.c0(), &ctx.inv(header_std.c0()));
        assert!(ctx.exp_raw(&q0, sf.p2()).is_identity());
        for &attr in header_std.attrs() {
            for copy in 1..=s.public_key.universe().dup() {
                let q = ctx.mul(
                    sf_header.c1(attr, copy).unwrap(),
                    &ctx.inv(header_std.c1(attr, copy).unwrap()),
                );
                assert!(ctx.exp_raw(&q, sf.p2()).is_identity());
            }
        }
    }
}
