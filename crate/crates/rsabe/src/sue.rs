//! Self-updatable encryption: headers carry a time T, anyone can advance a
//! header from T to T+1 using only public material, and a key for time T′
//! opens exactly the headers with T ≤ T′.
//!
//! Times map to the nodes of a perfect binary tree of depth d_max by
//! pre-order traversal (root = 0, left subtree, right subtree), so the set
//! of times ≥ T is covered by the label L(T) together with one "right
//! sibling" label per zero bit of L(T). A header holds one sub-header per
//! cover label: the main sub-header commits to L(T) level by level with
//! per-level randomness, and each future sub-header reuses the main
//! prefix and adds one fresh last level. Keys commit to the full label of
//! their time; decryption uses the unique sub-header whose label prefixes
//! the key's label, and extension past a committed level is impossible
//! without that level's randomness, which is what makes updates one-way.

use crate::error::{Error, Result};
use crate::pairing::{GroupDescriptor, GroupElement, PairingCtx, Scalar, Subgroup, TargetElement};
use crate::serial::{Reader, Writer};
use rand::RngCore;

/// Bit string addressing a node of the time tree; levels are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeLabel {
    bits: u64,
    len: u32,
}

impl TimeLabel {
    pub const EMPTY: TimeLabel = TimeLabel { bits: 0, len: 0 };

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at 1-based level i.
    pub fn bit(&self, i: u32) -> u8 {
        debug_assert!(i >= 1 && i <= self.len);
        (self.bits >> (i - 1) & 1) as u8
    }

    pub fn child(&self, bit: u8) -> TimeLabel {
        TimeLabel {
            bits: self.bits | ((bit as u64) << self.len),
            len: self.len + 1,
        }
    }

    pub fn prefix(&self, len: u32) -> TimeLabel {
        debug_assert!(len <= self.len);
        TimeLabel {
            bits: self.bits & ((1u64 << len) - 1),
            len,
        }
    }

    pub fn is_prefix_of(&self, other: &TimeLabel) -> bool {
        self.len <= other.len && other.prefix(self.len) == *self
    }

    /// Levels i with bit 0: the future sub-headers of a header live there.
    pub fn zero_levels(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=self.len).filter(|&i| self.bit(i) == 0)
    }
}

impl std::fmt::Display for TimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        for i in 1..=self.len {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

/// d_max = ⌈log2(T_max + 2)⌉ − 1; the tree then holds 2^(d_max+1) − 1 ≥
/// T_max + 1 times.
pub fn max_label_depth(t_max: u64) -> u32 {
    let v = t_max + 2;
    let ceil_log2 = 64 - (v - 1).leading_zeros();
    ceil_log2 - 1
}

/// Pre-order position → label. Root is time 0, then the left subtree, then
/// the right.
pub fn time_to_label(t: u64, d_max: u32) -> Result<TimeLabel> {
    let capacity = (1u64 << (d_max + 1)) - 1;
    if t >= capacity {
        return Err(Error::TimeOutOfRange(t));
    }
    let mut label = TimeLabel::EMPTY;
    let mut remaining = t;
    while remaining > 0 {
        remaining -= 1; // step off the current node
        let left_size = (1u64 << (d_max - label.len())) - 1;
        if remaining < left_size {
            label = label.child(0);
        } else {
            remaining -= left_size;
            label = label.child(1);
        }
    }
    Ok(label)
}

pub fn label_to_time(label: &TimeLabel, d_max: u32) -> u64 {
    let mut t = 0u64;
    for i in 1..=label.len() {
        if label.bit(i) == 0 {
            t += 1;
        } else {
            t += 1u64 << (d_max - (i - 1));
        }
    }
    t
}

/// MK = (β, Z); in the composed scheme β is instantiated per node as α − γ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SueMasterKey {
    pub(crate) beta: Scalar,
    pub(crate) z: GroupElement,
}

/// Header-building material: g, w, and per-level pair elements u, h in
/// G_{p1}. The level factor F_{i,b} = u_{i,b}·h_{i,b} is what headers and
/// keys actually consume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuePublicParams {
    g: GroupElement,
    w: GroupElement,
    u: Vec<[GroupElement; 2]>,
    h: Vec<[GroupElement; 2]>,
    d_max: u32,
    t_max: u64,
}

impl SuePublicParams {
    pub fn g(&self) -> &GroupElement {
        &self.g
    }

    pub fn w(&self) -> &GroupElement {
        &self.w
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn t_max(&self) -> u64 {
        self.t_max
    }

    /// F_{level,bit} = u_{level,bit} · h_{level,bit}; levels are 1-based.
    pub fn level_factor(&self, ctx: &PairingCtx, level: u32, bit: u8) -> GroupElement {
        let i = (level - 1) as usize;
        ctx.mul(&self.u[i][bit as usize], &self.h[i][bit as usize])
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        w.u64(self.t_max);
        w.u32(self.d_max);
        self.g.encode(w);
        self.w.encode(w);
        for level in 0..self.d_max as usize {
            for b in 0..2 {
                self.u[level][b].encode(w);
            }
            for b in 0..2 {
                self.h[level][b].encode(w);
            }
        }
    }

    pub(crate) fn decode(r: &mut Reader<'_>, ctx: &PairingCtx) -> Result<SuePublicParams> {
        let t_max = r.u64()?;
        let d_max = r.u32()?;
        if t_max < 1 || d_max != max_label_depth(t_max) {
            return Err(Error::Codec("inconsistent time-tree depth".into()));
        }
        let g = GroupElement::decode(r, ctx)?;
        let w = GroupElement::decode(r, ctx)?;
        let mut u = Vec::with_capacity(d_max as usize);
        let mut h = Vec::with_capacity(d_max as usize);
        for _ in 0..d_max {
            u.push([GroupElement::decode(r, ctx)?, GroupElement::decode(r, ctx)?]);
            h.push([GroupElement::decode(r, ctx)?, GroupElement::decode(r, ctx)?]);
        }
        Ok(SuePublicParams {
            g,
            w,
            u,
            h,
            d_max,
            t_max,
        })
    }
}

/// Standalone public key: params plus e(g, g)^β for session-key creation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuePublicKey {
    pub params: SuePublicParams,
    pub lambda: TargetElement,
}

/// Key for time T′: K_0 = g^β·w^r·Z_0, K_1 = g^r·Z_1, and one
/// K_{2,j} = F_{j,L′[j]}^r·Z_{2,j} per label level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SueSecretKey {
    time: u64,
    label: TimeLabel,
    k0: GroupElement,
    k1: GroupElement,
    k2: Vec<GroupElement>,
}

impl SueSecretKey {
    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn label(&self) -> &TimeLabel {
        &self.label
    }

    /// |L′| + 2 group elements.
    pub fn element_count(&self) -> usize {
        2 + self.k2.len()
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        w.u64(self.time);
        w.u32(self.label.len());
        self.k0.encode(w);
        self.k1.encode(w);
        for k in &self.k2 {
            k.encode(w);
        }
    }

    pub(crate) fn decode(r: &mut Reader<'_>, ctx: &PairingCtx, d_max: u32) -> Result<SueSecretKey> {
        let time = r.u64()?;
        let len = r.u32()?;
        let label = time_to_label(time, d_max).map_err(|_| Error::Codec("time too large".into()))?;
        if label.len() != len {
            return Err(Error::Codec("label length does not match time".into()));
        }
        let k0 = GroupElement::decode(r, ctx)?;
        let k1 = GroupElement::decode(r, ctx)?;
        let mut k2 = Vec::with_capacity(len as usize);
        for _ in 0..len {
            k2.push(GroupElement::decode(r, ctx)?);
        }
        Ok(SueSecretKey {
            time,
            label,
            k0,
            k1,
            k2,
        })
    }
}

/// One future sub-header: the right sibling at `level` of the main label's
/// prefix. Shares the main C_2 components below its level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SueFutureHeader {
    level: u32,
    c1: GroupElement,
    c2: GroupElement,
}

/// Header for time T: shared C_0 = g^s, the main sub-header for label L(T)
/// (C_1 plus per-level C_2), and one future sub-header per zero bit of L(T).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SueHeader {
    time: u64,
    label: TimeLabel,
    c0: GroupElement,
    c1: GroupElement,
    c2: Vec<GroupElement>,
    futures: Vec<SueFutureHeader>,
}

impl SueHeader {
    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn label(&self) -> &TimeLabel {
        &self.label
    }

    pub fn c0(&self) -> &GroupElement {
        &self.c0
    }

    pub(crate) fn set_c0(&mut self, c0: GroupElement) {
        self.c0 = c0;
    }

    /// Labels of all sub-headers: main first, then futures (deepest last).
    pub fn cover_labels(&self) -> Vec<TimeLabel> {
        let mut out = vec![self.label];
        for f in &self.futures {
            out.push(self.label.prefix(f.level - 1).child(1));
        }
        out
    }

    /// Element count including the shared C_0.
    pub fn element_count(&self) -> usize {
        1 + self.element_count_without_c0()
    }

    /// Count with C_0 excluded, for callers that deduplicate it.
    pub fn element_count_without_c0(&self) -> usize {
        1 + self.c2.len() + 2 * self.futures.len()
    }

    pub(crate) fn encode_body(&self, w: &mut Writer) {
        w.u64(self.time);
        w.u32(self.label.len());
        self.c1.encode(w);
        for c in &self.c2 {
            c.encode(w);
        }
        w.u32(self.futures.len() as u32);
        for f in &self.futures {
            w.u32(f.level);
            f.c1.encode(w);
            f.c2.encode(w);
        }
    }

    pub(crate) fn decode_body(
        r: &mut Reader<'_>,
        ctx: &PairingCtx,
        d_max: u32,
        c0: GroupElement,
    ) -> Result<SueHeader> {
        let time = r.u64()?;
        let len = r.u32()?;
        let label = time_to_label(time, d_max).map_err(|_| Error::Codec("time too large".into()))?;
        if label.len() != len {
            return Err(Error::Codec("label length does not match time".into()));
        }
        let c1 = GroupElement::decode(r, ctx)?;
        let mut c2 = Vec::with_capacity(len as usize);
        for _ in 0..len {
            c2.push(GroupElement::decode(r, ctx)?);
        }
        let fcount = r.u32()? as usize;
        let mut futures = Vec::with_capacity(fcount);
        for _ in 0..fcount {
            let level = r.u32()?;
            let c1 = GroupElement::decode(r, ctx)?;
            let c2 = GroupElement::decode(r, ctx)?;
            futures.push(SueFutureHeader { level, c1, c2 });
        }
        let expected: Vec<u32> = label.zero_levels().collect();
        let got: Vec<u32> = futures.iter().map(|f| f.level).collect();
        if expected != got {
            return Err(Error::Codec(
                "future sub-headers do not match the label's zero levels".into(),
            ));
        }
        Ok(SueHeader {
            time,
            label,
            c0,
            c1,
            c2,
            futures,
        })
    }

    /// Standalone encoding: T ‖ main sub-header ‖ futures ‖ shared C_0.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.encode_body(&mut w);
        self.c0.encode(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8], ctx: &PairingCtx, d_max: u32) -> Result<SueHeader> {
        let mut r = Reader::new(bytes);
        let mut h = SueHeader::decode_body(&mut r, ctx, d_max, GroupElement::IDENTITY)?;
        h.c0 = GroupElement::decode(&mut r, ctx)?;
        r.finish()?;
        Ok(h)
    }
}

/// SUE.Setup for a maximum time `t_max ≥ 1`.
pub fn sue_setup<R: RngCore + ?Sized>(
    desc: &GroupDescriptor,
    t_max: u64,
    rng: &mut R,
) -> Result<(SueMasterKey, SuePublicKey)> {
    if t_max < 1 {
        return Err(Error::InvalidParameter("t_max must be at least 1".into()));
    }
    let d_max = max_label_depth(t_max);
    if d_max > 40 {
        return Err(Error::InvalidParameter("time tree too deep".into()));
    }
    let ctx = desc.ctx();
    let beta = ctx.random_zn(rng);
    let z = loop {
        let z = desc.sample(Subgroup::P3, rng);
        if !z.is_identity() {
            break z;
        }
    };
    let g = *desc.g_bar(1);
    let w = desc.sample(Subgroup::P1, rng);
    let mut u = Vec::with_capacity(d_max as usize);
    let mut h = Vec::with_capacity(d_max as usize);
    for _ in 0..d_max {
        u.push([
            desc.sample(Subgroup::P1, rng),
            desc.sample(Subgroup::P1, rng),
        ]);
        h.push([
            desc.sample(Subgroup::P1, rng),
            desc.sample(Subgroup::P1, rng),
        ]);
    }
    let lambda = ctx.gt_exp(&ctx.pair(&g, &g), &beta);
    Ok((
        SueMasterKey { beta, z },
        SuePublicKey {
            params: SuePublicParams {
                g,
                w,
                u,
                h,
                d_max,
                t_max,
            },
            lambda,
        },
    ))
}

/// SUE.GenKey for time T′ with label L′:
/// K_0 = g^β·w^r·Z_0, K_1 = g^r·Z_1, K_{2,j} = F_{j,L′[j]}^r·Z_{2,j}.
pub fn sue_genkey<R: RngCore + ?Sized>(
    ctx: &PairingCtx,
    params: &SuePublicParams,
    mk: &SueMasterKey,
    t_prime: u64,
    rng: &mut R,
) -> Result<SueSecretKey> {
    if t_prime > params.t_max {
        return Err(Error::TimeOutOfRange(t_prime));
    }
    let label = time_to_label(t_prime, params.d_max)?;
    let n = ctx.modulus_n();
    let r = Scalar::random(rng, n);
    let blind = |rng: &mut R, e: &GroupElement| {
        let z = ctx.exp(&mk.z, &Scalar::random(rng, n));
        ctx.mul(e, &z)
    };
    let k0 = {
        let base = ctx.mul(&ctx.exp(&params.g, &mk.beta), &ctx.exp(&params.w, &r));
        blind(rng, &base)
    };
    let k1 = blind(rng, &ctx.exp(&params.g, &r));
    let mut k2 = Vec::with_capacity(label.len() as usize);
    for j in 1..=label.len() {
        let f = params.level_factor(ctx, j, label.bit(j));
        k2.push(blind(rng, &ctx.exp(&f, &r)));
    }
    Ok(SueSecretKey {
        time: t_prime,
        label,
        k0,
        k1,
        k2,
    })
}

/// Header for time T at caller-supplied global randomness s.
pub fn sue_encrypt_header<R: RngCore + ?Sized>(
    ctx: &PairingCtx,
    params: &SuePublicParams,
    t: u64,
    s: &Scalar,
    rng: &mut R,
) -> Result<SueHeader> {
    if t > params.t_max {
        return Err(Error::TimeOutOfRange(t));
    }
    let label = time_to_label(t, params.d_max)?;
    let n = ctx.modulus_n();
    let c0 = ctx.exp(&params.g, s);
    let w_s = ctx.exp(&params.w, s);
    // walk the label once: emit the future sub-header for each zero bit
    // before folding that level into the running prefix product
    let mut prefix = w_s;
    let mut c2 = Vec::with_capacity(label.len() as usize);
    let mut futures = Vec::new();
    for i in 1..=label.len() {
        if label.bit(i) == 0 {
            let s_fut = Scalar::random(rng, n);
            let f1 = params.level_factor(ctx, i, 1);
            futures.push(SueFutureHeader {
                level: i,
                c1: ctx.mul(&prefix, &ctx.exp(&f1, &s_fut)),
                c2: ctx.exp(&params.g, &s_fut),
            });
        }
        let s_i = Scalar::random(rng, n);
        let f = params.level_factor(ctx, i, label.bit(i));
        prefix = ctx.mul(&prefix, &ctx.exp(&f, &s_i));
        c2.push(ctx.exp(&params.g, &s_i));
    }
    Ok(SueHeader {
        time: t,
        label,
        c0,
        c1: prefix,
        c2,
        futures,
    })
}

/// SUE.Encrypt: header plus EK = e(g, g)^{β·s}.
pub fn sue_encrypt<R: RngCore + ?Sized>(
    ctx: &PairingCtx,
    pk: &SuePublicKey,
    t: u64,
    s: &Scalar,
    rng: &mut R,
) -> Result<(SueHeader, TargetElement)> {
    let header = sue_encrypt_header(ctx, &pk.params, t, s, rng)?;
    Ok((header, ctx.gt_exp(&pk.lambda, s)))
}

/// Convenience wrapper sampling s internally for standalone use.
pub fn sue_encrypt_random<R: RngCore + ?Sized>(
    ctx: &PairingCtx,
    pk: &SuePublicKey,
    t: u64,
    rng: &mut R,
) -> Result<(SueHeader, TargetElement, Scalar)> {
    let s = ctx.random_zn(rng);
    let (header, ek) = sue_encrypt(ctx, pk, t, &s, rng)?;
    Ok((header, ek, s))
}

/// SUE.Decrypt: locate the unique sub-header whose label prefixes the key
/// label, then EK = e(C_0, K_0) · ∏_j e(C_{2,j}, K_{2,j}) / e(C_1, K_1).
///
/// Delegating the sub-header down to the key label multiplies C_1 by
/// F_{j,L′[j]}^{s̃} and appends C_{2,j} = g^{s̃}; those factors cancel in
/// the product for any s̃, so the implementation fixes s̃ = 0 and simply
/// pairs over the sub-header's own levels. Succeeds exactly when T ≤ T′.
pub fn sue_decrypt(ctx: &PairingCtx, sk: &SueSecretKey, header: &SueHeader) -> Result<TargetElement> {
    // at most one sub-header label can prefix the key label: the main label
    // and its future siblings pairwise disagree on some level
    let matched: Option<&SueFutureHeader> = if header.label.is_prefix_of(&sk.label) {
        None
    } else {
        Some(
            header
                .futures
                .iter()
                .find(|f| {
                    header
                        .label
                        .prefix(f.level - 1)
                        .child(1)
                        .is_prefix_of(&sk.label)
                })
                .ok_or(Error::NoMatchingHeader)?,
        )
    };
    let (c1, levels) = match matched {
        None => (&header.c1, header.label.len()),
        Some(f) => (&f.c1, f.level),
    };
    let mut ek = ctx.pair(&header.c0, &sk.k0);
    for j in 1..=levels {
        // shared main prefix below the matched level, own C_2 at it
        let c2 = match matched {
            Some(f) if j == levels => &f.c2,
            _ => &header.c2[(j - 1) as usize],
        };
        ek = ctx.gt_mul(&ek, &ctx.pair(c2, &sk.k2[(j - 1) as usize]));
    }
    ek = ctx.gt_mul(&ek, &ctx.gt_inv(&ctx.pair(c1, &sk.k1)));
    Ok(ek)
}

/// SUE.UpdateCT: advance T to T+1 publicly.
///
/// Internal node: the pre-order successor is the left child, so the main
/// sub-header is delegated by bit 0 and a fresh future sub-header for the
/// right child joins the cover. Leaf node: the successor is the deepest
/// future sub-header, which gets promoted to main. Finishes with a full
/// re-randomization at offset 0 so per-level randomness never survives an
/// update while the global s (and the session key) stays put.
pub fn sue_update_ct<R: RngCore + ?Sized>(
    ctx: &PairingCtx,
    params: &SuePublicParams,
    header: &SueHeader,
    rng: &mut R,
) -> Result<SueHeader> {
    if header.time >= params.t_max {
        return Err(Error::TimeOutOfRange(header.time + 1));
    }
    let n = ctx.modulus_n();
    let label = header.label;
    let advanced = if label.len() < params.d_max {
        let level = label.len() + 1;
        let s_main = Scalar::random(rng, n);
        let s_fut = Scalar::random(rng, n);
        let mut c2 = header.c2.clone();
        c2.push(ctx.exp(&params.g, &s_main));
        let mut futures = header.futures.clone();
        futures.push(SueFutureHeader {
            level,
            c1: ctx.mul(
                &header.c1,
                &ctx.exp(&params.level_factor(ctx, level, 1), &s_fut),
            ),
            c2: ctx.exp(&params.g, &s_fut),
        });
        SueHeader {
            time: header.time + 1,
            label: label.child(0),
            c0: header.c0,
            c1: ctx.mul(
                &header.c1,
                &ctx.exp(&params.level_factor(ctx, level, 0), &s_main),
            ),
            c2,
            futures,
        }
    } else {
        // promote the deepest future sub-header: the pre-order successor
        let f = header
            .futures
            .last()
            .ok_or(Error::TimeOutOfRange(header.time + 1))?
            .clone();
        let new_label = label.prefix(f.level - 1).child(1);
        let mut c2: Vec<GroupElement> = header.c2[..(f.level - 1) as usize].to_vec();
        c2.push(f.c2);
        SueHeader {
            time: header.time + 1,
            label: new_label,
            c0: header.c0,
            c1: f.c1,
            c2,
            futures: header.futures[..header.futures.len() - 1].to_vec(),
        }
    };
    debug_assert_eq!(
        advanced.label,
        time_to_label(advanced.time, params.d_max).unwrap()
    );
    debug_assert_eq!(
        advanced.futures.iter().map(|f| f.level).collect::<Vec<_>>(),
        advanced.label.zero_levels().collect::<Vec<_>>()
    );
    Ok(sue_randomize_ct(ctx, params, &advanced, &Scalar::zero(n), rng))
}

/// SUE.RandomizeCT: shift the global randomness by s̄ and refresh every
/// per-level exponent, keeping the shared-prefix structure intact. With
/// fresh draws the output is distributed exactly like a fresh encryption
/// at total randomness s + s̄.
pub fn sue_randomize_ct<R: RngCore + ?Sized>(
    ctx: &PairingCtx,
    params: &SuePublicParams,
    header: &SueHeader,
    s_bar: &Scalar,
    rng: &mut R,
) -> SueHeader {
    let n = ctx.modulus_n();
    let label = header.label;
    let w_bar = ctx.exp(&params.w, s_bar);
    let c0 = ctx.mul(&header.c0, &ctx.exp(&params.g, s_bar));
    let mut c1 = ctx.mul(&header.c1, &w_bar);
    let mut c2 = header.c2.clone();
    // running prefix offset ∏_{k<i} F_{k,L[k]}^{δ_k}, needed by futures;
    // draws follow the encrypt order (future before main at each level) so
    // a zero-randomness header randomized with a given stream reproduces a
    // fresh encryption driven by the same stream
    let mut prefix_delta = ctx.identity();
    let mut futures = Vec::with_capacity(header.futures.len());
    for i in 1..=label.len() {
        if label.bit(i) == 0 {
            let f = header
                .futures
                .iter()
                .find(|f| f.level == i)
                .expect("future sub-headers mirror the zero levels");
            let d_fut = Scalar::random(rng, n);
            futures.push(SueFutureHeader {
                level: i,
                c1: ctx.mul(
                    &ctx.mul(&f.c1, &w_bar),
                    &ctx.mul(
                        &prefix_delta,
                        &ctx.exp(&params.level_factor(ctx, i, 1), &d_fut),
                    ),
                ),
                c2: ctx.mul(&f.c2, &ctx.exp(&params.g, &d_fut)),
            });
        }
        let delta = Scalar::random(rng, n);
        let f_level = ctx.exp(&params.level_factor(ctx, i, label.bit(i)), &delta);
        c1 = ctx.mul(&c1, &f_level);
        c2[(i - 1) as usize] = ctx.mul(&c2[(i - 1) as usize], &ctx.exp(&params.g, &delta));
        prefix_delta = ctx.mul(&prefix_delta, &f_level);
    }
    SueHeader {
        time: header.time,
        label,
        c0,
        c1,
        c2,
        futures,
    }
}

#[cfg(test)]
mod tests;
