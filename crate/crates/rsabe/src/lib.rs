//! Key-policy revocable-storage attribute-based encryption (RS-ABE).
//!
//! The crate composes four building blocks into one scheme:
//!
//! * [`pairing`] — a composite-order symmetric bilinear group on a
//!   supersingular curve, with subgroup sampling and canonical encodings;
//! * [`subset_cover`] — the complete-subset revocation framework over a
//!   perfect binary user tree;
//! * [`lsss`] — a monotone policy language compiled to a linear secret
//!   sharing matrix over Z_N;
//! * [`abe`] and [`sue`] — key-policy attribute-based encryption and
//!   self-updatable (time-evolving) encryption, merged in [`scheme`].
//!
//! [`semifunctional`] holds proof-apparatus variants used as test oracles,
//! and [`game`] is an executable IND-CPA challenger with restriction
//! enforcement and Monte-Carlo advantage estimation.
//!
//! Everything runs at desk-scale parameters (default 32-bit subgroup
//! primes). This is a study artifact: **none of it is cryptographically
//! secure** and no parameter choice offered here changes that.

pub mod abe;
pub mod attrs;
pub mod error;
pub(crate) mod math;
pub mod lsss;
pub mod pairing;
pub mod scheme;
pub mod semifunctional;
pub(crate) mod serial;
pub mod subset_cover;
pub mod sue;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
