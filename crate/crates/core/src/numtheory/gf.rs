//! GF(p^l) in the polynomial basis: schoolbook arithmetic modulo a monic
//! irreducible found by exhaustive search.

use crate::error::{Error, Result};
use crate::numtheory::{factorize, is_prime};

/// Description of GF(p^l) as Z/p[x] modulo a monic irreducible `f`.
///
/// `f` stores the non-leading coefficients from the constant term up; the
/// leading coefficient is implicitly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub ell: u32,
    pub f: Vec<u64>,
}

/// A field element as its coefficient vector of length `ell`, low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub coeffs: Vec<u64>,
}

impl FieldSpec {
    pub fn q(&self) -> u64 {
        self.p.pow(self.ell)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.ell as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_constant(1 % self.p)
    }

    pub fn from_constant(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.ell as usize];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    /// Element number `enc` in the base-p encoding (digit i = coefficient of x^i).
    pub fn element(&self, mut enc: u64) -> FieldElement {
        let mut coeffs = vec![0; self.ell as usize];
        for c in coeffs.iter_mut() {
            *c = enc % self.p;
            enc /= self.p;
        }
        FieldElement { coeffs }
    }
}

/// Multiply two coefficient vectors and reduce by the monic polynomial `f`
/// (non-leading coefficients, degree = f.len()), all mod `m`.
///
/// Shared by the field case (m = p) and the prime-power ring case (m = p^k).
pub(crate) fn poly_mul_mod(a: &[u64], b: &[u64], f: &[u64], m: u64) -> Vec<u64> {
    let ell = f.len();
    let mut wide = vec![0u64; 2 * ell - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            wide[i + j] = ((wide[i + j] as u128 + ai as u128 * bj as u128) % m as u128) as u64;
        }
    }
    for d in (ell..2 * ell - 1).rev() {
        let c = wide[d];
        if c != 0 {
            wide[d] = 0;
            for j in 0..ell {
                // x^d contributes -c * f[j] at x^(d-ell+j)
                let sub = (c as u128 * f[j] as u128) % m as u128;
                let cur = wide[d - ell + j] as u128;
                wide[d - ell + j] = ((cur + m as u128 - sub) % m as u128) as u64;
            }
        }
    }
    wide.truncate(ell);
    wide
}

pub fn gf_add(a: &FieldElement, b: &FieldElement, spec: &FieldSpec) -> FieldElement {
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| (x + y) % spec.p)
        .collect();
    FieldElement { coeffs }
}

pub fn gf_mul(a: &FieldElement, b: &FieldElement, spec: &FieldSpec) -> FieldElement {
    FieldElement {
        coeffs: poly_mul_mod(&a.coeffs, &b.coeffs, &spec.f, spec.p),
    }
}

fn gf_pow_unsigned(a: &FieldElement, mut e: u64, spec: &FieldSpec) -> FieldElement {
    let mut acc = spec.one();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = gf_mul(&acc, &base, spec);
        }
        base = gf_mul(&base, &base, spec);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero element as x^(q-2).
pub fn gf_inv(a: &FieldElement, spec: &FieldSpec) -> Result<FieldElement> {
    if a.coeffs.iter().all(|&c| c == 0) {
        return Err(Error::ZeroInverse);
    }
    Ok(gf_pow_unsigned(a, spec.q() - 2, spec))
}

/// Square-and-multiply power with signed exponents; negative exponents invert
/// the base first.
pub fn gf_pow(a: &FieldElement, e: i64, spec: &FieldSpec) -> Result<FieldElement> {
    if e >= 0 {
        Ok(gf_pow_unsigned(a, e as u64, spec))
    } else {
        let inv = gf_inv(a, spec)?;
        Ok(gf_pow_unsigned(&inv, e.unsigned_abs(), spec))
    }
}

/// Remainder of the monic polynomial `num` (full coefficients, low first)
/// divided by the monic divisor `div` (non-leading coefficients), mod p.
fn poly_rem_is_zero(num: &[u64], div: &[u64], p: u64) -> bool {
    let d = div.len();
    let mut r = num.to_vec();
    for top in (d..r.len()).rev() {
        let c = r[top] % p;
        if c != 0 {
            r[top] = 0;
            for j in 0..d {
                r[top - d + j] = ((r[top - d + j] as u128
                    + (p - c) as u128 * div[j] as u128)
                    % p as u128) as u64;
            }
        }
    }
    r[..d].iter().all(|&c| c % p == 0)
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let ell = f.len();
    let mut full = f.to_vec();
    full.push(1);
    for d in 1..=ell / 2 {
        for enc in 0..p.pow(d as u32) {
            let mut div = vec![0u64; d];
            let mut e = enc;
            for c in div.iter_mut() {
                *c = e % p;
                e /= p;
            }
            if poly_rem_is_zero(&full, &div, p) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `ell` over Z/p, ordered by the
/// base-p integer encoding of the coefficient vector.
pub fn find_irreducible(p: u64, ell: u32) -> FieldSpec {
    debug_assert!(is_prime(p));
    if ell == 1 {
        return FieldSpec {
            p,
            ell,
            f: vec![0],
        };
    }
    for enc in 0..p.pow(ell) {
        let mut f = vec![0u64; ell as usize];
        let mut e = enc;
        for c in f.iter_mut() {
            *c = e % p;
            e /= p;
        }
        if is_irreducible(&f, p) {
            return FieldSpec { p, ell, f };
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

/// Smallest generator of GF(q)^* by element encoding.
pub fn field_generator(spec: &FieldSpec) -> FieldElement {
    let q = spec.q();
    let factors = factorize(q - 1);
    let one = spec.one();
    for enc in 1..q {
        let g = spec.element(enc);
        if gf_pow_unsigned(&g, q - 1, spec) != one {
            continue;
        }
        if factors
            .iter()
            .all(|&(t, _)| gf_pow_unsigned(&g, (q - 1) / t, spec) != one)
        {
            return g;
        }
    }
    unreachable!("GF(q)^* is cyclic");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_examples() {
        assert_eq!(find_irreducible(3, 2).f, vec![1, 0]); // x^2 + 1
        assert_eq!(find_irreducible(2, 4).f, vec![1, 1, 0, 0]); // x^4 + x + 1
        assert_eq!(find_irreducible(7, 1).f, vec![0]); // x
    }

    #[test]
    fn gf9_examples() {
        let spec = find_irreducible(3, 2);
        let x = spec.element(3); // the generator polynomial x
        let xx = gf_mul(&x, &x, &spec);
        assert_eq!(xx, spec.from_constant(2)); // x^2 = -1 = 2

        let xinv = gf_inv(&x, &spec).unwrap();
        assert_eq!(xinv, spec.element(6)); // 2x
        assert_eq!(gf_mul(&x, &xinv, &spec), spec.one());

        assert_eq!(gf_pow(&x, 0, &spec).unwrap(), spec.one());
        assert_eq!(gf_inv(&spec.zero(), &spec), Err(Error::ZeroInverse));
    }

    #[test]
    fn nonzero_elements_form_group_of_order_q_minus_1() {
        for (p, ell) in [(2u64, 2u32), (2, 4), (3, 2), (3, 4), (5, 2), (7, 2)] {
            let spec = find_irreducible(p, ell);
            let q = spec.q();
            let one = spec.one();
            for enc in 1..q {
                let e = spec.element(enc);
                assert_eq!(gf_pow(&e, (q - 1) as i64, &spec).unwrap(), one);
                let inv = gf_inv(&e, &spec).unwrap();
                assert_eq!(gf_mul(&e, &inv, &spec), one);
            }
            // the chosen generator really has order q-1
            let g = field_generator(&spec);
            let mut cur = g.clone();
            for _ in 1..q - 1 {
                assert_ne!(cur, one);
                cur = gf_mul(&cur, &g, &spec);
            }
            assert_eq!(cur, one);
        }
    }
}
