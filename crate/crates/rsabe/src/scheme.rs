//! The composed revocable-storage scheme.
//!
//! Setup splits one master exponent α per tree node: node ν_i carries γ_i
//! for its ABE role and α − γ_i for its SUE role, so the two session values
//! recovered during decryption multiply to e(g, g)^{α·s} no matter which
//! node the complete-subset match lands on. Private keys hold one ABE
//! sub-key per node of the user's path; time-update keys hold one SUE
//! sub-key per node of the revocation cover; a ciphertext is the two
//! headers sharing a single exponent s plus C = Ω^s · M.

use crate::abe::{self, AbeHeader, AbeMasterKey, AbePublicParams, AbeSecretKey};
use crate::attrs::AttributeUniverse;
use crate::error::{Error, Result};
use crate::lsss::AccessStructure;
use crate::pairing::{
    gen_descriptor, GroupDescriptor, GroupElement, PairingCtx, Scalar, Subgroup, TargetElement,
};
use crate::serial::{Reader, Writer};
use crate::subset_cover::{CoverSet, PrivateSet, UserTree};
use crate::sue::{self, SueHeader, SueMasterKey, SuePublicParams, SueSecretKey};
use rand::RngCore;
use std::collections::BTreeSet;

pub const FORMAT_MAGIC: &[u8; 8] = b"RSABE001";

const KIND_MASTER_KEY: u8 = 0x01;
const KIND_PUBLIC_KEY: u8 = 0x02;
const KIND_PRIVATE_KEY: u8 = 0x03;
const KIND_UPDATE_KEY: u8 = 0x04;
const KIND_CIPHERTEXT: u8 = 0x05;

/// The adversary-visible part of the group: (N, G, G_T, e) as an operations
/// context. Deliberately omits the factorization of N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicInfo {
    ctx: PairingCtx,
}

impl PublicInfo {
    pub(crate) fn from_ctx(ctx: PairingCtx) -> PublicInfo {
        PublicInfo { ctx }
    }

    pub fn ctx(&self) -> &PairingCtx {
        &self.ctx
    }

    pub fn modulus_n(&self) -> u128 {
        self.ctx.modulus_n()
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        w.uint(self.ctx.field_q());
        w.uint(self.ctx.modulus_n());
    }

    pub(crate) fn decode(r: &mut Reader<'_>) -> Result<PublicInfo> {
        let q = r.uint()?;
        let n = r.uint()?;
        Ok(PublicInfo {
            ctx: PairingCtx::from_parts(q, n)?,
        })
    }
}

/// MK = (α, per-node γ_i, Z). The per-node ABE master key (γ_i, Z) and SUE
/// master key (α − γ_i, Z) are views over this, not stored copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsabeMasterKey {
    alpha: Scalar,
    tree: UserTree,
    gammas: Vec<Scalar>,
    z: GroupElement,
}

impl RsabeMasterKey {
    pub fn tree(&self) -> &UserTree {
        &self.tree
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn gamma(&self, node: u64) -> &Scalar {
        &self.gammas[node as usize]
    }

    /// ABE view of node ν: MK = (γ_ν, Z).
    pub(crate) fn abe_view(&self, node: u64) -> AbeMasterKey {
        AbeMasterKey {
            gamma: self.gammas[node as usize],
            z: self.z,
        }
    }

    /// SUE view of node ν: MK = (α − γ_ν, Z).
    pub(crate) fn sue_view(&self, node: u64) -> SueMasterKey {
        SueMasterKey {
            beta: self.alpha.sub(&self.gammas[node as usize]),
            z: self.z,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.bytes(FORMAT_MAGIC);
        w.u8(KIND_MASTER_KEY);
        w.u64(self.tree.n_max());
        self.alpha.encode(&mut w);
        w.u32(self.gammas.len() as u32);
        for g in &self.gammas {
            g.encode(&mut w);
        }
        self.z.encode(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8], pi: &PublicInfo) -> Result<RsabeMasterKey> {
        let mut r = Reader::new(bytes);
        r.magic(FORMAT_MAGIC)?;
        if r.u8()? != KIND_MASTER_KEY {
            return Err(Error::Codec("not a master key".into()));
        }
        let n = pi.modulus_n();
        let tree = UserTree::new(r.u64()?)?;
        let alpha = Scalar::decode(&mut r, n)?;
        let count = r.u32()? as u64;
        if count != tree.node_count() {
            return Err(Error::Codec("per-node exponent count mismatch".into()));
        }
        let mut gammas = Vec::with_capacity(count as usize);
        for _ in 0..count {
            gammas.push(Scalar::decode(&mut r, n)?);
        }
        let z = GroupElement::decode(&mut r, pi.ctx())?;
        r.finish()?;
        Ok(RsabeMasterKey {
            alpha,
            tree,
            gammas,
            z,
        })
    }
}

/// PK = (Ω = e(g,g)^α, ABE header material, SUE header material). Neither
/// sub-key carries its own pairing constant; Ω is the only one published.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsabePublicKey {
    omega: TargetElement,
    abe: AbePublicParams,
    sue: SuePublicParams,
    tree: UserTree,
}

impl RsabePublicKey {
    pub fn omega(&self) -> &TargetElement {
        &self.omega
    }

    pub fn abe(&self) -> &AbePublicParams {
        &self.abe
    }

    pub fn sue(&self) -> &SuePublicParams {
        &self.sue
    }

    pub fn tree(&self) -> &UserTree {
        &self.tree
    }

    pub fn universe(&self) -> &AttributeUniverse {
        self.abe.universe()
    }

    pub fn t_max(&self) -> u64 {
        self.sue.t_max()
    }

    /// Self-contained encoding: embeds the public info so a client can
    /// operate from this one blob.
    pub fn to_bytes(&self, pi: &PublicInfo) -> Vec<u8> {
        let mut w = Writer::new();
        w.bytes(FORMAT_MAGIC);
        w.u8(KIND_PUBLIC_KEY);
        pi.encode(&mut w);
        w.u64(self.tree.n_max());
        self.omega.encode(&mut w);
        self.abe.encode(&mut w);
        self.sue.encode(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<(PublicInfo, RsabePublicKey)> {
        let mut r = Reader::new(bytes);
        r.magic(FORMAT_MAGIC)?;
        if r.u8()? != KIND_PUBLIC_KEY {
            return Err(Error::Codec("not a public key".into()));
        }
        let pi = PublicInfo::decode(&mut r)?;
        let tree = UserTree::new(r.u64()?)?;
        let omega = TargetElement::decode(&mut r, pi.ctx())?;
        let abe = AbePublicParams::decode(&mut r, pi.ctx())?;
        let sue = SuePublicParams::decode(&mut r, pi.ctx())?;
        r.finish()?;
        Ok((
            pi,
            RsabePublicKey {
                omega,
                abe,
                sue,
                tree,
            },
        ))
    }
}

/// SK_{A,u}: the user's private set and one ABE sub-key per path node, each
/// generated under that node's γ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsabePrivateKey {
    user: u64,
    pv: PrivateSet,
    pub(crate) sub_keys: Vec<AbeSecretKey>,
}

impl RsabePrivateKey {
    pub fn user(&self) -> u64 {
        self.user
    }

    pub fn private_set(&self) -> &PrivateSet {
        &self.pv
    }

    pub fn sub_keys(&self) -> &[AbeSecretKey] {
        &self.sub_keys
    }

    pub fn structure(&self) -> &AccessStructure {
        self.sub_keys[0].structure()
    }

    pub fn sub_key_for(&self, node: u64) -> Option<&AbeSecretKey> {
        let idx = self.pv.nodes().iter().position(|&n| n == node)?;
        Some(&self.sub_keys[idx])
    }

    /// Total group elements across all sub-keys: 2·l·(depth + 1).
    pub fn element_count(&self) -> usize {
        self.sub_keys.iter().map(AbeSecretKey::element_count).sum()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.bytes(FORMAT_MAGIC);
        w.u8(KIND_PRIVATE_KEY);
        w.u64(self.user);
        self.pv.encode(&mut w);
        w.u32(self.sub_keys.len() as u32);
        for k in &self.sub_keys {
            k.encode(&mut w);
        }
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8], pi: &PublicInfo) -> Result<RsabePrivateKey> {
        let mut r = Reader::new(bytes);
        r.magic(FORMAT_MAGIC)?;
        if r.u8()? != KIND_PRIVATE_KEY {
            return Err(Error::Codec("not a private key".into()));
        }
        let user = r.u64()?;
        let pv = PrivateSet::decode(&mut r, user)?;
        let count = r.u32()? as usize;
        if count != pv.len() {
            return Err(Error::Codec("sub-key count must match the path".into()));
        }
        let mut sub_keys = Vec::with_capacity(count);
        for _ in 0..count {
            sub_keys.push(AbeSecretKey::decode(&mut r, pi.ctx())?);
        }
        r.finish()?;
        Ok(RsabePrivateKey { user, pv, sub_keys })
    }
}

/// TK_{T,R}: the revocation cover and one SUE sub-key per cover node, each
/// generated under that node's α − γ. Public material by design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeUpdateKey {
    time: u64,
    cover: CoverSet,
    sub_keys: Vec<SueSecretKey>,
}

impl TimeUpdateKey {
    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn cover(&self) -> &CoverSet {
        &self.cover
    }

    pub fn sub_keys(&self) -> &[SueSecretKey] {
        &self.sub_keys
    }

    pub fn sub_key_for(&self, node: u64) -> Option<&SueSecretKey> {
        let idx = self.cover.nodes().iter().position(|&n| n == node)?;
        Some(&self.sub_keys[idx])
    }

    pub fn element_count(&self) -> usize {
        self.sub_keys.iter().map(SueSecretKey::element_count).sum()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.bytes(FORMAT_MAGIC);
        w.u8(KIND_UPDATE_KEY);
        w.u64(self.time);
        self.cover.encode(&mut w);
        w.u32(self.sub_keys.len() as u32);
        for k in &self.sub_keys {
            k.encode(&mut w);
        }
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8], pi: &PublicInfo, pk: &RsabePublicKey) -> Result<TimeUpdateKey> {
        let mut r = Reader::new(bytes);
        r.magic(FORMAT_MAGIC)?;
        if r.u8()? != KIND_UPDATE_KEY {
            return Err(Error::Codec("not a time-update key".into()));
        }
        let time = r.u64()?;
        let cover = CoverSet::decode(&mut r)?;
        let count = r.u32()? as usize;
        if count != cover.len() {
            return Err(Error::Codec("sub-key count must match the cover".into()));
        }
        let mut sub_keys = Vec::with_capacity(count);
        for _ in 0..count {
            let k = SueSecretKey::decode(&mut r, pi.ctx(), pk.sue.d_max())?;
            if k.time() != time {
                return Err(Error::Codec("sub-key time mismatch".into()));
            }
            sub_keys.push(k);
        }
        r.finish()?;
        Ok(TimeUpdateKey {
            time,
            cover,
            sub_keys,
        })
    }
}

/// CT_{S,T} = (CH_ABE, CH_SUE, C = Ω^s·M) with one shared s; the shared
/// C_0 = g^s is stored once on the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsabeCiphertext {
    pub(crate) abe_header: AbeHeader,
    sue_header: SueHeader,
    c: TargetElement,
}

impl RsabeCiphertext {
    pub fn abe_header(&self) -> &AbeHeader {
        &self.abe_header
    }

    pub fn sue_header(&self) -> &SueHeader {
        &self.sue_header
    }

    pub fn c(&self) -> &TargetElement {
        &self.c
    }

    pub fn time(&self) -> u64 {
        self.sue_header.time()
    }

    pub fn attrs(&self) -> &[u32] {
        self.abe_header.attrs()
    }

    /// Shared-randomness invariant: both headers expose the same C_0.
    pub fn shared_c0_consistent(&self) -> bool {
        self.abe_header.c0() == self.sue_header.c0()
    }

    /// Group elements: |S′| ABE components + SUE components + shared C_0
    /// and the blinded payload C.
    pub fn element_count(&self) -> usize {
        (self.abe_header.element_count() - 1) + self.sue_header.element_count_without_c0() + 2
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.bytes(FORMAT_MAGIC);
        w.u8(KIND_CIPHERTEXT);
        self.abe_header.c0().encode(&mut w);
        self.abe_header.encode_body(&mut w);
        self.sue_header.encode_body(&mut w);
        self.c.encode(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8], pi: &PublicInfo, pk: &RsabePublicKey) -> Result<RsabeCiphertext> {
        let mut r = Reader::new(bytes);
        r.magic(FORMAT_MAGIC)?;
        if r.u8()? != KIND_CIPHERTEXT {
            return Err(Error::Codec("not a ciphertext".into()));
        }
        let c0 = GroupElement::decode(&mut r, pi.ctx())?;
        let abe_header = AbeHeader::decode_body(&mut r, pi.ctx(), c0)?;
        let sue_header = SueHeader::decode_body(&mut r, pi.ctx(), pk.sue.d_max(), c0)?;
        let c = TargetElement::decode(&mut r, pi.ctx())?;
        r.finish()?;
        Ok(RsabeCiphertext {
            abe_header,
            sue_header,
            c,
        })
    }
}

/// Everything Setup produces. The descriptor stays on the authority side;
/// `public_info` is the shareable view of it.
#[derive(Debug, Clone)]
pub struct RsabeSetup {
    pub descriptor: GroupDescriptor,
    pub master_key: RsabeMasterKey,
    pub public_info: PublicInfo,
    pub public_key: RsabePublicKey,
}

/// RS-ABE.Setup: group, user tree with per-node γ, α, shared Z, and the
/// ABE/SUE header material.
pub fn rsabe_setup<R: RngCore + ?Sized>(
    lambda: u32,
    universe: &AttributeUniverse,
    t_max: u64,
    n_max: u64,
    rng: &mut R,
) -> Result<RsabeSetup> {
    let descriptor = gen_descriptor(lambda, rng)?;
    rsabe_setup_with_descriptor(descriptor, universe, t_max, n_max, rng)
}

/// Setup over a pre-generated group; lets a harness reuse one descriptor
/// across many otherwise-independent scheme instances.
pub fn rsabe_setup_with_descriptor<R: RngCore + ?Sized>(
    descriptor: GroupDescriptor,
    universe: &AttributeUniverse,
    t_max: u64,
    n_max: u64,
    rng: &mut R,
) -> Result<RsabeSetup> {
    let tree = UserTree::new(n_max)?;
    let ctx = descriptor.ctx().clone();
    let alpha = ctx.random_zn(rng);
    let gammas: Vec<Scalar> = (0..tree.node_count())
        .map(|_| ctx.random_zn(rng))
        .collect();
    let z = loop {
        let z = descriptor.sample(Subgroup::P3, rng);
        if !z.is_identity() {
            break z;
        }
    };
    // ABE side: header material only (no Λ per node is ever published)
    let (_, abe_pk) = abe::abe_setup(&descriptor, universe, rng);
    let abe = abe_pk.params;
    // SUE side: header material only (no e(g,g)^β either)
    let (_, sue_pk) = sue::sue_setup(&descriptor, t_max, rng)?;
    let sue = sue_pk.params;
    let g = *descriptor.g_bar(1);
    let omega = ctx.gt_exp(&ctx.pair(&g, &g), &alpha);
    let master_key = RsabeMasterKey {
        alpha,
        tree,
        gammas,
        z,
    };
    let public_key = RsabePublicKey {
        omega,
        abe,
        sue,
        tree,
    };
    Ok(RsabeSetup {
        public_info: PublicInfo { ctx },
        descriptor,
        master_key,
        public_key,
    })
}

/// RS-ABE.GenKey: one ABE sub-key per node on the user's path, each under
/// that node's (γ_ν, Z).
pub fn rsabe_genkey<R: RngCore + ?Sized>(
    pi: &PublicInfo,
    pk: &RsabePublicKey,
    mk: &RsabeMasterKey,
    structure: &AccessStructure,
    user: u64,
    rng: &mut R,
) -> Result<RsabePrivateKey> {
    let pv = mk.tree.assign(user)?;
    let mut sub_keys = Vec::with_capacity(pv.len());
    for &node in pv.nodes() {
        let mk_view = mk.abe_view(node);
        sub_keys.push(abe::abe_genkey(pi.ctx(), &pk.abe, &mk_view, structure, rng)?);
    }
    Ok(RsabePrivateKey {
        user,
        pv,
        sub_keys,
    })
}

/// RS-ABE.UpdateKey: one SUE sub-key per cover node, each under that
/// node's (α − γ_ν, Z).
pub fn rsabe_updatekey<R: RngCore + ?Sized>(
    pi: &PublicInfo,
    pk: &RsabePublicKey,
    mk: &RsabeMasterKey,
    time: u64,
    revoked: &BTreeSet<u64>,
    rng: &mut R,
) -> Result<TimeUpdateKey> {
    if time > pk.sue.t_max() {
        return Err(Error::TimeOutOfRange(time));
    }
    let cover = mk.tree.cover(revoked)?;
    let mut sub_keys = Vec::with_capacity(cover.len());
    for &node in cover.nodes() {
        let mk_view = mk.sue_view(node);
        sub_keys.push(sue::sue_genkey(pi.ctx(), &pk.sue, &mk_view, time, rng)?);
    }
    Ok(TimeUpdateKey {
        time,
        cover,
        sub_keys,
    })
}

/// RS-ABE.Encrypt: one s for both headers and for C = Ω^s · M.
pub fn rsabe_encrypt<S: AsRef<str>, R: RngCore + ?Sized>(
    pi: &PublicInfo,
    pk: &RsabePublicKey,
    m: &TargetElement,
    set: &[S],
    time: u64,
    rng: &mut R,
) -> Result<RsabeCiphertext> {
    let s = pi.ctx().random_zn(rng);
    rsabe_encrypt_with_s(pi, pk, m, set, time, &s, rng)
}

/// Deterministic-randomness variant; tests pin s with it.
pub(crate) fn rsabe_encrypt_with_s<S: AsRef<str>, R: RngCore + ?Sized>(
    pi: &PublicInfo,
    pk: &RsabePublicKey,
    m: &TargetElement,
    set: &[S],
    time: u64,
    s: &Scalar,
    rng: &mut R,
) -> Result<RsabeCiphertext> {
    let ctx = pi.ctx();
    let abe_header = abe::abe_encrypt_header(ctx, &pk.abe, set, s)?;
    let sue_header = sue::sue_encrypt_header(ctx, &pk.sue, time, s, rng)?;
    debug_assert_eq!(abe_header.c0(), sue_header.c0());
    let c = ctx.gt_mul(&ctx.gt_exp(&pk.omega, s), m);
    Ok(RsabeCiphertext {
        abe_header,
        sue_header,
        c,
    })
}

/// RS-ABE.Decrypt. Succeeds exactly when the user is unrevoked, the
/// ciphertext time is not past the update key, and the attribute set
/// satisfies the key policy; each failing condition has its own error:
/// `Revoked`, then `NotAuthorized`, then `TimeTooEarly`.
pub fn rsabe_decrypt(
    pi: &PublicInfo,
    ct: &RsabeCiphertext,
    sk: &RsabePrivateKey,
    tk: &TimeUpdateKey,
) -> Result<TargetElement> {
    let ctx = pi.ctx();
    let node = tk
        .cover
        .find_match(&sk.pv)
        .ok_or(Error::Revoked)?;
    let abe_sub = sk
        .sub_key_for(node)
        .expect("matched node lies on the private path");
    let sue_sub = tk
        .sub_key_for(node)
        .expect("matched node lies in the cover");
    // EK_ABE = e(g,g)^{γ_ν s}; raises NotAuthorized when S ∉ A
    let ek_abe = abe::abe_decrypt(ctx, abe_sub, &ct.abe_header)?;
    // EK_SUE = e(g,g)^{(α − γ_ν) s}; raises NoMatchingHeader when T > T′
    let ek_sue = match sue::sue_decrypt(ctx, sue_sub, &ct.sue_header) {
        Ok(v) => v,
        Err(Error::NoMatchingHeader) => return Err(Error::TimeTooEarly),
        Err(e) => return Err(e),
    };
    let ek = ctx.gt_mul(&ek_abe, &ek_sue);
    Ok(ctx.gt_mul(&ct.c, &ctx.gt_inv(&ek)))
}

/// RS-ABE.UpdateCT: advance only the SUE header; CH_ABE and C stay put, so
/// the SUE re-randomization keeps the global s offset at zero and the
/// shared-C_0 invariant intact.
pub fn rsabe_update_ct<R: RngCore + ?Sized>(
    pi: &PublicInfo,
    pk: &RsabePublicKey,
    ct: &RsabeCiphertext,
    rng: &mut R,
) -> Result<RsabeCiphertext> {
    let sue_header = sue::sue_update_ct(pi.ctx(), &pk.sue, &ct.sue_header, rng)?;
    debug_assert_eq!(ct.abe_header.c0(), sue_header.c0());
    Ok(RsabeCiphertext {
        abe_header: ct.abe_header.clone(),
        sue_header,
        c: ct.c,
    })
}
