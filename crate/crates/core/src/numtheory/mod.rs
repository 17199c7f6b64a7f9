//! Primes, modular arithmetic with signed exponents, primitive roots, and
//! cyclic root-of-unity groups in Z/p^j.
//!
//! All moduli are kept below 2^62 so products fit in u128 without overflow.
//! Primality is plain trial division throughout.

use crate::error::{Error, Result};

pub mod gf;
pub mod gr;

/// Every modulus handled by the crate stays below this bound.
pub const MODULUS_LIMIT: u64 = 1 << 62;

/// A value reduced into `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Residue {
        Residue {
            value: reduce_signed(value, modulus),
            modulus,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce_signed(v: i64, m: u64) -> u64 {
    let m_i = m as i128;
    (((v as i128 % m_i) + m_i) % m_i) as u64
}

pub fn check_modulus(m: u64) -> Result<()> {
    if m < 2 || m >= MODULUS_LIMIT {
        return Err(Error::ModulusTooLarge(m));
    }
    Ok(())
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

fn pow_mod_u(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse by extended gcd.
pub fn mod_inv_raw(a: u64, m: u64) -> Result<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible(a % m, m));
    }
    Ok((((old_s % m as i128) + m as i128) % m as i128) as u64)
}

pub fn mod_inv(a: Residue) -> Result<Residue> {
    Ok(Residue {
        value: mod_inv_raw(a.value, a.modulus)?,
        modulus: a.modulus,
    })
}

/// `base^exp` with signed exponents; negative exponents go through the inverse.
pub fn mod_pow_raw(base: u64, exp: i64, m: u64) -> Result<u64> {
    if exp >= 0 {
        Ok(pow_mod_u(base, exp as u64, m))
    } else {
        let inv = mod_inv_raw(base, m)?;
        Ok(pow_mod_u(inv, exp.unsigned_abs(), m))
    }
}

pub fn mod_pow(base: Residue, exp: i64) -> Result<Residue> {
    Ok(Residue {
        value: mod_pow_raw(base.value, exp, base.modulus)?,
        modulus: base.modulus,
    })
}

/// Trial division up to the square root.
pub fn is_prime(u: u64) -> bool {
    if u < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= u {
        if u % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime strictly greater than `u`.
pub fn next_prime(u: u64) -> Result<u64> {
    let mut c = u.saturating_add(1).max(2);
    loop {
        if c >= MODULUS_LIMIT {
            return Err(Error::ModulusTooLarge(c));
        }
        if is_prime(c) {
            return Ok(c);
        }
        c += 1;
    }
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d as u128 * d as u128 <= n as u128 {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// True when `g` has exact multiplicative order `order` mod `m`, given the
/// prime factors of `order`.
fn has_order(g: u64, order: u64, factors: &[(u64, u32)], m: u64) -> bool {
    if pow_mod_u(g, order, m) != 1 {
        return false;
    }
    factors
        .iter()
        .all(|&(t, _)| pow_mod_u(g, order / t, m) != 1)
}

/// Smallest primitive root mod a prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = factorize(p - 1);
    let mut g = 2;
    loop {
        if has_order(g, p - 1, &factors, p) {
            return g;
        }
        g += 1;
    }
}

/// Smallest generator of the full unit group of Z/p^j, which is cyclic of
/// order (p-1)p^(j-1) for odd p.
pub fn unit_group_generator(p: u64, j: u32) -> Result<u64> {
    if p == 2 {
        return Err(Error::OddPrimeRequired);
    }
    let m = checked_prime_power(p, j)?;
    let phi = (p - 1) * m / p;
    let factors = factorize(phi);
    let mut g = 2;
    loop {
        if g % p != 0 && has_order(g, phi, &factors, m) {
            return Ok(g);
        }
        g += 1;
    }
}

pub fn checked_prime_power(p: u64, k: u32) -> Result<u64> {
    let mut m: u64 = 1;
    for _ in 0..k {
        m = m
            .checked_mul(p)
            .filter(|&v| v < MODULUS_LIMIT)
            .ok_or(Error::ModulusTooLarge(u64::MAX))?;
    }
    Ok(m)
}

/// A cyclic group of roots of unity inside Z/p^j, presented by a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnityGroup {
    pub modulus: u64,
    pub order: u64,
    pub generator: u64,
}

impl UnityGroup {
    /// Successive powers of the generator: exactly `order` elements, never
    /// materialized as a set.
    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        let m = self.modulus;
        let g = self.generator;
        let mut cur = 1u64 % m;
        (0..self.order).map(move |_| {
            let out = cur;
            cur = mul_mod(cur, g, m);
            out
        })
    }
}

/// The (p-1)st roots of unity in Z/p^k: the Teichmueller lift of the
/// multiplicative group mod p, generated by primitive_root(p)^(p^(k-1)).
pub fn teichmueller_generator(p: u64, k: u32) -> Result<UnityGroup> {
    if p == 2 {
        return Err(Error::OddPrimeRequired);
    }
    let m = checked_prime_power(p, k)?;
    let root = primitive_root(p);
    let g = pow_mod_u(root, p.pow(k - 1), m);
    Ok(UnityGroup {
        modulus: m,
        order: p - 1,
        generator: g,
    })
}

/// The group of r-th roots of unity in Z/p^j, for r dividing (p-1)p^(j-1).
pub fn unity_group(p: u64, j: u32, r: u64) -> Result<UnityGroup> {
    if p == 2 {
        return Err(Error::OddPrimeRequired);
    }
    let m = checked_prime_power(p, j)?;
    let phi = (p - 1) * m / p;
    if r == 0 || phi % r != 0 {
        return Err(Error::OrderNotDividing(r, phi));
    }
    let g = pow_mod_u(unit_group_generator(p, j)?, phi / r, m);
    Ok(UnityGroup {
        modulus: m,
        order: r,
        generator: g,
    })
}
