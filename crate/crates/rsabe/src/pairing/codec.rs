//! Canonical binary encodings for group values and the descriptor.
//!
//! Layouts:
//!   Scalar        = uint (2-byte length ‖ minimal big-endian magnitude)
//!   GroupElement  = 0x00                      (identity)
//!                 | 0x01 ‖ x ‖ y              (affine, coordinates mod q)
//!   TargetElement = re ‖ im                   (F_q coefficients)
//!   Descriptor    = "RSABEGD1" ‖ q ‖ N ‖ p1 ‖ p2 ‖ p3 ‖ ḡ1 ‖ ḡ2 ‖ ḡ3

use super::{GroupDescriptor, GroupElement, PairingCtx, Scalar, TargetElement};
use crate::error::{Error, Result};
use crate::serial::{Reader, Writer};

pub const DESCRIPTOR_MAGIC: &[u8; 8] = b"RSABEGD1";

impl Scalar {
    pub(crate) fn encode(&self, w: &mut Writer) {
        w.uint(self.value());
    }

    pub(crate) fn decode(r: &mut Reader<'_>, modulus: u128) -> Result<Scalar> {
        let v = r.uint()?;
        if v >= modulus {
            return Err(Error::Codec("scalar not reduced".into()));
        }
        Ok(Scalar::new(v, modulus))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.encode(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8], modulus: u128) -> Result<Scalar> {
        let mut r = Reader::new(bytes);
        let s = Scalar::decode(&mut r, modulus)?;
        r.finish()?;
        Ok(s)
    }
}

impl GroupElement {
    pub(crate) fn encode(&self, w: &mut Writer) {
        if self.infinity {
            w.u8(0x00);
        } else {
            w.u8(0x01);
            w.uint(self.x);
            w.uint(self.y);
        }
    }

    pub(crate) fn decode(r: &mut Reader<'_>, ctx: &PairingCtx) -> Result<GroupElement> {
        match r.u8()? {
            0x00 => Ok(GroupElement::IDENTITY),
            0x01 => {
                let x = r.uint()?;
                let y = r.uint()?;
                if x >= ctx.field_q() || y >= ctx.field_q() {
                    return Err(Error::Codec("coordinate not reduced mod q".into()));
                }
                let e = GroupElement {
                    x,
                    y,
                    infinity: false,
                };
                if !ctx.on_curve(&e) {
                    return Err(Error::Codec("point not on curve".into()));
                }
                if !ctx.in_group(&e) {
                    return Err(Error::Codec("point outside the order-N subgroup".into()));
                }
                Ok(e)
            }
            t => Err(Error::Codec(format!("unknown point tag {t:#04x}"))),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.encode(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8], ctx: &PairingCtx) -> Result<GroupElement> {
        let mut r = Reader::new(bytes);
        let e = GroupElement::decode(&mut r, ctx)?;
        r.finish()?;
        Ok(e)
    }
}

impl TargetElement {
    pub(crate) fn encode(&self, w: &mut Writer) {
        w.uint(self.re);
        w.uint(self.im);
    }

    pub(crate) fn decode(r: &mut Reader<'_>, ctx: &PairingCtx) -> Result<TargetElement> {
        let re = r.uint()?;
        let im = r.uint()?;
        let e = TargetElement { re, im };
        if !ctx.gt_in_group(&e) {
            return Err(Error::Codec("target element order check failed".into()));
        }
        Ok(e)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.encode(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8], ctx: &PairingCtx) -> Result<TargetElement> {
        let mut r = Reader::new(bytes);
        let e = TargetElement::decode(&mut r, ctx)?;
        r.finish()?;
        Ok(e)
    }
}

impl GroupDescriptor {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.bytes(DESCRIPTOR_MAGIC);
        w.uint(self.ctx.field_q());
        w.uint(self.ctx.modulus_n());
        for p in self.p {
            w.uint(p);
        }
        for g in &self.g_bar {
            g.encode(&mut w);
        }
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<GroupDescriptor> {
        let mut r = Reader::new(bytes);
        r.magic(DESCRIPTOR_MAGIC)?;
        let q = r.uint()?;
        let n = r.uint()?;
        let p = [r.uint()?, r.uint()?, r.uint()?];
        if p[0] == p[1] || p[0] == p[2] || p[1] == p[2] {
            return Err(Error::Codec("subgroup primes not distinct".into()));
        }
        let prod = p[0]
            .checked_mul(p[1])
            .and_then(|v| v.checked_mul(p[2]))
            .ok_or_else(|| Error::Codec("prime product overflows".into()))?;
        if prod != n {
            return Err(Error::Codec("N is not the product of the primes".into()));
        }
        let ctx = PairingCtx::from_parts(q, n)?;
        let mut g_bar = [GroupElement::IDENTITY; 3];
        for (i, g) in g_bar.iter_mut().enumerate() {
            let e = GroupElement::decode(&mut r, &ctx)?;
            if e.is_identity() || !ctx.exp_raw(&e, p[i]).is_identity() {
                return Err(Error::Codec(format!(
                    "generator {} fails its order check",
                    i + 1
                )));
            }
            *g = e;
        }
        r.finish()?;
        let g_full = ctx.mul(&ctx.mul(&g_bar[0], &g_bar[1]), &g_bar[2]);
        Ok(GroupDescriptor {
            ctx,
            p,
            g_bar,
            g_full,
        })
    }
}
