//! Residue scalars carrying their modulus (Z_N or a prime subgroup order).

use crate::error::{Error, Result};
use crate::math;
use rand::RngCore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u128,
    modulus: u128,
}

impl Scalar {
    pub fn new(value: u128, modulus: u128) -> Scalar {
        assert!(modulus > 1, "modulus must exceed 1");
        Scalar {
            value: value % modulus,
            modulus,
        }
    }

    pub fn zero(modulus: u128) -> Scalar {
        Scalar::new(0, modulus)
    }

    pub fn one(modulus: u128) -> Scalar {
        Scalar::new(1, modulus)
    }

    /// Uniform over [0, modulus).
    pub fn random<R: RngCore + ?Sized>(rng: &mut R, modulus: u128) -> Scalar {
        Scalar {
            value: math::random_below(rng, modulus),
            modulus,
        }
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &Scalar) {
        debug_assert_eq!(self.modulus, other.modulus, "mixed-modulus arithmetic");
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check(other);
        Scalar {
            value: math::add_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.check(other);
        Scalar {
            value: math::sub_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check(other);
        Scalar {
            value: math::mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            value: if self.value == 0 {
                0
            } else {
                self.modulus - self.value
            },
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse; a nonzero non-invertible value exposes a
    /// factor of the modulus, reported as such.
    pub fn inv(&self) -> Result<Scalar> {
        if self.value == 0 {
            return Err(Error::NotAuthorized);
        }
        match math::inv_mod(self.value, self.modulus) {
            Some(v) => Ok(Scalar {
                value: v,
                modulus: self.modulus,
            }),
            None => Err(Error::ModulusFactor(math::gcd(self.value, self.modulus))),
        }
    }
}
