//! Key-policy attribute-based encryption over the composite-order group.
//!
//! Keys carry an LSSS access structure; headers carry an attribute set.
//! Per-row key material lives in G_{p1·p3} (G_{p3} blinders wash out under
//! the pairing), headers live in G_{p1}. Decryption pairs header against
//! key row by row and combines with the reconstruction coefficients: the
//! session value is Λ^s = e(g, g)^{γ·s}.
//!
//! The public key covers the expanded universe (every attribute times the
//! configured duplication factor), and a header publishes components for
//! every copy of each attribute it names, so policies may reuse attributes
//! up to that factor while the row labeling stays injective.

use crate::attrs::AttributeUniverse;
use crate::error::{Error, Result};
use crate::lsss::{self, AccessStructure};
use crate::pairing::{GroupDescriptor, GroupElement, PairingCtx, Scalar, Subgroup, TargetElement};
use crate::serial::{Reader, Writer};
use rand::RngCore;
use std::collections::BTreeSet;

/// Header-building material: the G_{p1} generator and one T element per
/// expanded attribute. No Λ term; the composed scheme never publishes one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbePublicParams {
    g: GroupElement,
    /// t[attr][copy − 1], copies 1..=universe.dup().
    t: Vec<Vec<GroupElement>>,
    universe: AttributeUniverse,
}

impl AbePublicParams {
    pub fn g(&self) -> &GroupElement {
        &self.g
    }

    pub fn universe(&self) -> &AttributeUniverse {
        &self.universe
    }

    pub fn t(&self, attr: u32, copy: u32) -> &GroupElement {
        &self.t[attr as usize][(copy - 1) as usize]
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        self.universe.encode(w);
        self.g.encode(w);
        for per_attr in &self.t {
            for e in per_attr {
                e.encode(w);
            }
        }
    }

    pub(crate) fn decode(r: &mut Reader<'_>, ctx: &PairingCtx) -> Result<AbePublicParams> {
        let universe = AttributeUniverse::decode(r)?;
        let g = GroupElement::decode(r, ctx)?;
        let mut t = Vec::with_capacity(universe.len());
        for _ in 0..universe.len() {
            let mut per_attr = Vec::with_capacity(universe.dup() as usize);
            for _ in 0..universe.dup() {
                per_attr.push(GroupElement::decode(r, ctx)?);
            }
            t.push(per_attr);
        }
        Ok(AbePublicParams { g, t, universe })
    }
}

/// Standalone public key: header material plus Λ = e(g, g)^γ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbePublicKey {
    pub params: AbePublicParams,
    pub lambda: TargetElement,
}

/// MK = (γ, Z) with Z a non-identity element of G_{p3}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbeMasterKey {
    pub(crate) gamma: Scalar,
    pub(crate) z: GroupElement,
}

/// Secret key: the access structure plus one (K_1, K_2) pair per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbeSecretKey {
    structure: AccessStructure,
    pub(crate) pairs: Vec<(GroupElement, GroupElement)>,
}

impl AbeSecretKey {
    pub fn structure(&self) -> &AccessStructure {
        &self.structure
    }

    pub fn pairs(&self) -> &[(GroupElement, GroupElement)] {
        &self.pairs
    }

    /// Group elements held: exactly 2l.
    pub fn element_count(&self) -> usize {
        2 * self.pairs.len()
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        self.structure.encode(w);
        w.u32(self.pairs.len() as u32);
        for (k1, k2) in &self.pairs {
            k1.encode(w);
            k2.encode(w);
        }
    }

    pub(crate) fn decode(r: &mut Reader<'_>, ctx: &PairingCtx) -> Result<AbeSecretKey> {
        let structure = AccessStructure::decode(r, ctx.modulus_n())?;
        let count = r.u32()? as usize;
        if count != structure.rows() {
            return Err(Error::Codec("key pair count does not match rows".into()));
        }
        let mut pairs = Vec::with_capacity(count);
        for _ in 0..count {
            pairs.push((GroupElement::decode(r, ctx)?, GroupElement::decode(r, ctx)?));
        }
        Ok(AbeSecretKey { structure, pairs })
    }
}

/// Header: C_0 = g^s plus C_{1,a} = T_a^s for every expanded attribute of S.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbeHeader {
    /// Sorted base attribute indices of S.
    attrs: Vec<u32>,
    dup: u32,
    pub(crate) c0: GroupElement,
    /// c1[pos][copy − 1] aligned with `attrs`.
    pub(crate) c1: Vec<Vec<GroupElement>>,
}

impl AbeHeader {
    pub fn attrs(&self) -> &[u32] {
        &self.attrs
    }

    pub fn c0(&self) -> &GroupElement {
        &self.c0
    }

    pub fn c1(&self, attr: u32, copy: u32) -> Option<&GroupElement> {
        let pos = self.attrs.binary_search(&attr).ok()?;
        self.c1[pos].get((copy - 1) as usize)
    }

    /// |S′| + 1 group elements.
    pub fn element_count(&self) -> usize {
        1 + self.attrs.len() * self.dup as usize
    }

    pub(crate) fn encode_body(&self, w: &mut Writer) {
        w.u32(self.attrs.len() as u32);
        for &a in &self.attrs {
            w.u32(a);
        }
        w.u32(self.dup);
        for per_attr in &self.c1 {
            for e in per_attr {
                e.encode(w);
            }
        }
    }

    pub(crate) fn decode_body(
        r: &mut Reader<'_>,
        ctx: &PairingCtx,
        c0: GroupElement,
    ) -> Result<AbeHeader> {
        let count = r.u32()? as usize;
        let mut attrs = Vec::with_capacity(count);
        for _ in 0..count {
            attrs.push(r.u32()?);
        }
        if attrs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Codec("header attributes not sorted".into()));
        }
        let dup = r.u32()?;
        if dup == 0 {
            return Err(Error::Codec("zero duplication factor".into()));
        }
        let mut c1 = Vec::with_capacity(count);
        for _ in 0..count {
            let mut per_attr = Vec::with_capacity(dup as usize);
            for _ in 0..dup {
                per_attr.push(GroupElement::decode(r, ctx)?);
            }
            c1.push(per_attr);
        }
        Ok(AbeHeader {
            attrs,
            dup,
            c0,
            c1,
        })
    }

    /// Standalone encoding: attribute ids, then all components, C_0 first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.u32(self.element_count() as u32);
        self.c0.encode(&mut w);
        self.encode_body(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8], ctx: &PairingCtx) -> Result<AbeHeader> {
        let mut r = Reader::new(bytes);
        let count = r.u32()? as usize;
        let c0 = GroupElement::decode(&mut r, ctx)?;
        let h = AbeHeader::decode_body(&mut r, ctx, c0)?;
        if h.element_count() != count {
            return Err(Error::Codec("header component count mismatch".into()));
        }
        r.finish()?;
        Ok(h)
    }
}

/// ABE.Setup: γ ← Z_N, Z ← G_{p3}, T_a ← G_{p1} per expanded attribute.
pub fn abe_setup<R: RngCore + ?Sized>(
    desc: &GroupDescriptor,
    universe: &AttributeUniverse,
    rng: &mut R,
) -> (AbeMasterKey, AbePublicKey)
{
    let ctx = desc.ctx();
    let gamma = ctx.random_zn(rng);
    let z = loop {
        let z = desc.sample(Subgroup::P3, rng);
        if !z.is_identity() {
            break z;
        }
    };
    let g = *desc.g_bar(1);
    let t = (0..universe.len())
        .map(|_| {
            (0..universe.dup())
                .map(|_| desc.sample(Subgroup::P1, rng))
                .collect()
        })
        .collect();
    let lambda = ctx.gt_exp(&ctx.pair(&g, &g), &gamma);
    (
        AbeMasterKey { gamma, z },
        AbePublicKey {
            params: AbePublicParams {
                g,
                t,
                universe: universe.clone(),
            },
            lambda,
        },
    )
}

/// ABE.GenKey with v = (γ, r_2, …, r_m):
/// K_{1,i} = g^{B_i·v} · T_{ρ(i)}^{s_i} · Z_{1,i},  K_{2,i} = g^{s_i} · Z_{2,i}.
pub fn abe_genkey<R: RngCore + ?Sized>(
    ctx: &PairingCtx,
    params: &AbePublicParams,
    mk: &AbeMasterKey,
    structure: &AccessStructure,
    rng: &mut R,
) -> Result<AbeSecretKey> {
    abe_genkey_with_blinders(ctx, params, mk, structure, rng, true)
}

/// Test hook: `blind = false` forces Z_{1,i} = Z_{2,i} = identity so the
/// intermediate algebra is assertable. The production path always blinds.
pub(crate) fn abe_genkey_with_blinders<R: RngCore + ?Sized>(
    ctx: &PairingCtx,
    params: &AbePublicParams,
    mk: &AbeMasterKey,
    structure: &AccessStructure,
    rng: &mut R,
    blind: bool,
) -> Result<AbeSecretKey> {
    let n = ctx.modulus_n();
    if structure.modulus() != n {
        return Err(Error::InvalidParameter(
            "structure compiled for a different modulus".into(),
        ));
    }
    let universe = &params.universe;
    let mut seen = BTreeSet::new();
    for i in 0..structure.rows() {
        let e = structure.rho(i);
        if e.attr as usize >= universe.len() {
            return Err(Error::UnknownAttribute(format!("#{}", e.attr)));
        }
        if e.copy == 0 || e.copy > universe.dup() {
            return Err(Error::Policy(format!(
                "row {i} binds attribute copy {} outside the universe",
                e.copy
            )));
        }
        if !seen.insert(e) {
            return Err(Error::Policy("row labeling is not injective".into()));
        }
    }
    // v = (γ, r_2, …, r_m)
    let mut v = Vec::with_capacity(structure.cols());
    v.push(mk.gamma);
    for _ in 1..structure.cols() {
        v.push(Scalar::random(rng, n));
    }
    let mut pairs = Vec::with_capacity(structure.rows());
    for i in 0..structure.rows() {
        let share = lsss::dot(structure.row(i), &v);
        let s_i = Scalar::random(rng, n);
        let rho = structure.rho(i);
        let mut k1 = ctx.mul(
            &ctx.exp(&params.g, &share),
            &ctx.exp(params.t(rho.attr, rho.copy), &s_i),
        );
        let mut k2 = ctx.exp(&params.g, &s_i);
        if blind {
            let z1 = ctx.exp(&mk.z, &Scalar::random(rng, n));
            let z2 = ctx.exp(&mk.z, &Scalar::random(rng, n));
            k1 = ctx.mul(&k1, &z1);
            k2 = ctx.mul(&k2, &z2);
        }
        pairs.push((k1, k2));
    }
    Ok(AbeSecretKey {
        structure: structure.clone(),
        pairs,
    })
}

/// Header for attribute set S at caller-supplied randomness s; the composed
/// scheme shares one s across its components.
pub fn abe_encrypt_header<S: AsRef<str>>(
    ctx: &PairingCtx,
    params: &AbePublicParams,
    set: &[S],
    s: &Scalar,
) -> Result<AbeHeader> {
    let attrs = params.universe.resolve_set(set)?;
    let dup = params.universe.dup();
    let c0 = ctx.exp(&params.g, s);
    let c1 = attrs
        .iter()
        .map(|&a| {
            (1..=dup)
                .map(|copy| ctx.exp(params.t(a, copy), s))
                .collect()
        })
        .collect();
    Ok(AbeHeader {
        attrs,
        dup,
        c0,
        c1,
    })
}

/// ABE.Encrypt: returns the header and EK = Λ^s.
pub fn abe_encrypt<S: AsRef<str>>(
    ctx: &PairingCtx,
    pk: &AbePublicKey,
    set: &[S],
    s: &Scalar,
) -> Result<(AbeHeader, TargetElement)> {
    let header = abe_encrypt_header(ctx, &pk.params, set, s)?;
    Ok((header, ctx.gt_exp(&pk.lambda, s)))
}

/// Convenience wrapper sampling s internally for standalone use.
pub fn abe_encrypt_random<S: AsRef<str>, R: RngCore + ?Sized>(
    ctx: &PairingCtx,
    pk: &AbePublicKey,
    set: &[S],
    rng: &mut R,
) -> Result<(AbeHeader, TargetElement, Scalar)> {
    let s = ctx.random_zn(rng);
    let (header, ek) = abe_encrypt(ctx, pk, set, &s)?;
    Ok((header, ek, s))
}

/// ABE.Decrypt:
/// EK = ∏_{ρ(i) ∈ S′} ( e(C_0, K_{1,i}) / e(C_{1,ρ(i)}, K_{2,i}) )^{ω_i}.
pub fn abe_decrypt(
    ctx: &PairingCtx,
    sk: &AbeSecretKey,
    header: &AbeHeader,
) -> Result<TargetElement> {
    let set: BTreeSet<u32> = header.attrs.iter().copied().collect();
    let omega = lsss::recon_coeffs(&sk.structure, &set)?;
    let mut ek = ctx.gt_one();
    for (&i, w) in &omega {
        if w.is_zero() {
            continue;
        }
        let rho = sk.structure.rho(i);
        let c1 = header.c1(rho.attr, rho.copy).ok_or_else(|| {
            Error::Codec("header lacks a component the key row needs".into())
        })?;
        let (k1, k2) = &sk.pairs[i];
        let num = ctx.pair(&header.c0, k1);
        let den = ctx.pair(c1, k2);
        let term = ctx.gt_mul(&num, &ctx.gt_inv(&den));
        ek = ctx.gt_mul(&ek, &ctx.gt_exp(&term, w));
    }
    Ok(ek)
}

/// ABE.RandomizeCT: shift the header randomness from s to s + s̄ and the
/// session value from EK to EK · Λ^{s̄}.
pub fn abe_randomize(
    ctx: &PairingCtx,
    pk: &AbePublicKey,
    ek: &TargetElement,
    header: &AbeHeader,
    s_bar: &Scalar,
) -> (TargetElement, AbeHeader) {
    let ek2 = ctx.gt_mul(ek, &ctx.gt_exp(&pk.lambda, s_bar));
    let c0 = ctx.mul(&header.c0, &ctx.exp(&pk.params.g, s_bar));
    let c1 = header
        .attrs
        .iter()
        .enumerate()
        .map(|(pos, &a)| {
            (1..=header.dup)
                .map(|copy| {
                    ctx.mul(
                        &header.c1[pos][(copy - 1) as usize],
                        &ctx.exp(pk.params.t(a, copy), s_bar),
                    )
                })
                .collect()
        })
        .collect();
    (
        ek2,
        AbeHeader {
            attrs: header.attrs.clone(),
            dup: header.dup,
            c0,
            c1,
        },
    )
}
