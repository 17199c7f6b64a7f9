//! The degree-l unramified extension of Z/p^k (a Galois ring), plus its
//! Teichmueller group of order p^l - 1.
//!
//! This is the prime-power analogue of GF(p^l): coefficients live mod p^k
//! instead of mod p, the defining polynomial is the same irreducible lifted
//! verbatim. Its cyclic subgroup of order q - 1 = p^l - 1 plays the role the
//! (p-1)st roots of unity play in Z/p^k, with q - 1 coprime to p, so
//! geometric sums over it vanish exactly.

use crate::error::{Error, Result};
use crate::numtheory::gf::{field_generator, find_irreducible, poly_mul_mod};
use crate::numtheory::{checked_prime_power, mod_inv_raw};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    pub p: u64,
    pub k: u32,
    pub ell: u32,
    /// Coefficient modulus p^k.
    pub modulus: u64,
    /// Non-leading coefficients of the lifted monic irreducible.
    pub f: Vec<u64>,
    /// Generator of the Teichmueller group, of exact order q - 1.
    pub teichmueller: RingElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    pub coeffs: Vec<u64>,
}

impl RingSpec {
    /// Builds the extension of Z/p^k defined by the smallest irreducible of
    /// degree `ell` over Z/p.
    pub fn new(p: u64, k: u32, ell: u32) -> Result<RingSpec> {
        let modulus = checked_prime_power(p, k)?;
        let field = find_irreducible(p, ell);
        let g = field_generator(&field);
        let mut spec = RingSpec {
            p,
            k,
            ell,
            modulus,
            f: field.f,
            teichmueller: RingElement {
                coeffs: vec![0; ell as usize],
            },
        };
        // Raising a lift of a field generator to the p-part of the unit group
        // order projects onto the Teichmueller component without disturbing
        // its image in GF(q)^*.
        let lift = RingElement { coeffs: g.coeffs };
        let p_part = checked_prime_power(p, (k - 1) * ell)?;
        spec.teichmueller = spec.pow_unsigned(&lift, p_part);
        Ok(spec)
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.ell)
    }

    pub fn one(&self) -> RingElement {
        let mut coeffs = vec![0; self.ell as usize];
        coeffs[0] = 1 % self.modulus;
        RingElement { coeffs }
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coeffs: poly_mul_mod(&a.coeffs, &b.coeffs, &self.f, self.modulus),
        }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| ((x as u128 + y as u128) % self.modulus as u128) as u64)
            .collect();
        RingElement { coeffs }
    }

    pub fn pow_unsigned(&self, a: &RingElement, mut e: u64) -> RingElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a Teichmueller group member via the group order.
    pub fn unity_inv(&self, a: &RingElement) -> RingElement {
        self.pow_unsigned(a, self.q() - 2)
    }

    /// Power with a signed exponent, valid for Teichmueller group members.
    pub fn unity_pow(&self, a: &RingElement, e: i64) -> RingElement {
        if e >= 0 {
            self.pow_unsigned(a, e as u64)
        } else {
            self.pow_unsigned(&self.unity_inv(a), e.unsigned_abs())
        }
    }

    /// The constant term of an element asserted to lie in Z/p^k.
    pub fn constant_part(&self, a: &RingElement) -> Result<u64> {
        if a.coeffs[1..].iter().any(|&c| c != 0) {
            return Err(Error::NonRationalSum);
        }
        Ok(a.coeffs[0])
    }

    /// Inverse of q - 1 in Z/p^k (always a unit: q - 1 is coprime to p).
    pub fn q_minus_1_inv(&self) -> u64 {
        mod_inv_raw((self.q() - 1) % self.modulus, self.modulus)
            .expect("q - 1 is coprime to p")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmueller_generator_has_exact_order() {
        for (p, k, ell) in [(3u64, 2u32, 2u32), (3, 3, 2), (5, 2, 2), (2, 3, 4), (7, 2, 2)] {
            let spec = RingSpec::new(p, k, ell).unwrap();
            let one = spec.one();
            let g = spec.teichmueller.clone();
            let q = spec.q();
            let mut cur = g.clone();
            for _ in 1..q - 1 {
                assert_ne!(cur, one, "premature identity, p={p} k={k} ell={ell}");
                cur = spec.mul(&cur, &g);
            }
            assert_eq!(cur, one);
        }
    }

    #[test]
    fn unity_inverse_roundtrip() {
        let spec = RingSpec::new(3, 2, 2).unwrap();
        let g = spec.teichmueller.clone();
        let x = spec.pow_unsigned(&g, 5);
        assert_eq!(spec.mul(&x, &spec.unity_inv(&x)), spec.one());
        assert_eq!(
            spec.mul(&spec.unity_pow(&x, -3), &spec.unity_pow(&x, 3)),
            spec.one()
        );
    }

    #[test]
    fn k1_reduces_to_the_field() {
        let spec = RingSpec::new(3, 1, 2).unwrap();
        assert_eq!(spec.modulus, 3);
        assert_eq!(spec.f, vec![1, 0]);
    }
}
