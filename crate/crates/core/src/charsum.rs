//! Character and power sum evaluators.
//!
//! Each evaluator streams the instance through a fresh cursor pass per
//! summation point, keeping live state to a handful of residues: the outer
//! accumulator, the current point, the inner running product, and scratch
//! for one exponentiation.

use crate::decider::Meter;
use crate::error::{Error, Result};
use crate::model::{capacity, scan, vector_capacity, Instance, VectorInstance};
use crate::numtheory::gf::{gf_mul, gf_pow, FieldSpec};
use crate::numtheory::gr::{RingElement, RingSpec};
use crate::numtheory::{
    add_mod, check_modulus, checked_prime_power, mod_pow_raw, mul_mod, teichmueller_generator,
    unity_group, Residue,
};

/// Sum of x^k over x = 1..p-1 mod p: p-1 when (p-1) | k, else 0.
pub fn power_sum(p: u64, k: i64) -> Residue {
    let order = (p - 1).max(1) as i64;
    let value = if k.rem_euclid(order) == 0 { p - 1 } else { 0 };
    Residue { value, modulus: p }
}

/// The base sum: sum over x = 1..p-1 of x^(-B) prod(1 + x^(m_i)) mod p.
///
/// Requires p > C; equals -A mod p.
pub fn charsum_mod_p(instance: &Instance, p: u64) -> Result<Residue> {
    let mut meter = Meter::disabled();
    charsum_mod_p_metered(instance, p, &mut meter)
}

pub fn charsum_mod_p_metered(
    instance: &Instance,
    p: u64,
    meter: &mut Meter,
) -> Result<Residue> {
    let c = capacity(instance).0;
    if p <= c {
        return Err(Error::PrimeTooSmall(p, c));
    }
    check_modulus(p)?;

    let mut cursor = scan(instance);
    let mut outer: u64 = 0;
    for x in 1..p {
        meter.update("x", x);
        meter.update("exp", instance.b.unsigned_abs());
        meter.update("exp", x);
        let mut inner = mod_pow_raw(x, -instance.b, p)?;
        meter.update("inner", inner);
        cursor.rewind();
        let mut i: u64 = 0;
        while let Some(mi) = cursor.read() {
            i += 1;
            meter.update("i", i);
            meter.update("cursor", cursor.position() as u64);
            meter.update("exp", mi.unsigned_abs());
            let t = mod_pow_raw(x, mi, p)?;
            meter.update("exp", t);
            inner = mul_mod(inner, (1 + t) % p, p);
            meter.update("inner", inner);
        }
        outer = add_mod(outer, inner, p);
        meter.update("outer", outer);
    }
    Ok(Residue {
        value: outer,
        modulus: p,
    })
}

/// The same sum over all of GF(q)^* with q = p^l > C. The total always lands
/// in the prime subfield; its constant term equals (q-1) A = -A mod p.
pub fn charsum_over_fq(instance: &Instance, spec: &FieldSpec) -> Result<Residue> {
    let c = capacity(instance).0;
    let q = spec.q();
    if q <= c {
        return Err(Error::FieldTooSmall(q, c));
    }
    let mut total = spec.zero();
    for enc in 1..q {
        let x = spec.element(enc);
        let mut cursor = scan(instance);
        let mut term = gf_pow(&x, -instance.b, spec)?;
        while let Some(mi) = cursor.read() {
            let mut xm = gf_pow(&x, mi, spec)?;
            xm.coeffs[0] = (xm.coeffs[0] + 1) % spec.p;
            term = gf_mul(&term, &xm, spec);
        }
        total = crate::numtheory::gf::gf_add(&total, &term, spec);
    }
    if total.coeffs[1..].iter().any(|&v| v != 0) {
        return Err(Error::NonRationalSum);
    }
    Ok(Residue {
        value: total.coeffs[0],
        modulus: spec.p,
    })
}

/// Sum over the (p-1)st roots of unity in Z/p^k; equals (p-1) A mod p^k.
/// Requires odd p > C.
pub fn charsum_mu(instance: &Instance, p: u64, k: u32) -> Result<Residue> {
    let c = capacity(instance).0;
    if p <= c {
        return Err(Error::PrimeTooSmall(p, c));
    }
    let group = teichmueller_generator(p, k)?;
    let m = group.modulus;
    check_modulus(m)?;
    let mut outer: u64 = 0;
    let mut cursor = scan(instance);
    for x in group.elements() {
        let mut inner = mod_pow_raw(x, -instance.b, m)?;
        cursor.rewind();
        while let Some(mi) = cursor.read() {
            let t = mod_pow_raw(x, mi, m)?;
            inner = mul_mod(inner, add_mod(t, 1, m), m);
        }
        outer = add_mod(outer, inner, m);
    }
    Ok(Residue {
        value: outer,
        modulus: m,
    })
}

/// Sum over the r-th roots of unity in Z/p^(k+l), with r = (p-1)p^l for the
/// smallest l >= 1 making r > C. Returns the undivided sum and l.
///
/// Note the quotient by r counts the subsets whose deviation from B is
/// divisible by p-1, which is coarser than the exact count whenever
/// p - 1 <= C; see `counting::count_mod_prime_power` for the evaluator that
/// recovers A itself.
pub fn charsum_mu_r(instance: &Instance, p: u64, k: u32) -> Result<(Residue, u32)> {
    if p == 2 {
        return Err(Error::OddPrimeRequired);
    }
    let c = capacity(instance).0;
    let mut ell: u32 = 1;
    while (p - 1).saturating_mul(p.saturating_pow(ell)) <= c {
        ell += 1;
    }
    let r = (p - 1) * checked_prime_power(p, ell)?;
    let group = unity_group(p, k + ell, r)?;
    let m = group.modulus;
    let mut outer: u64 = 0;
    let mut cursor = scan(instance);
    for x in group.elements() {
        let mut inner = mod_pow_raw(x, -instance.b, m)?;
        cursor.rewind();
        while let Some(mi) = cursor.read() {
            let t = mod_pow_raw(x, mi, m)?;
            inner = mul_mod(inner, add_mod(t, 1, m), m);
        }
        outer = add_mod(outer, inner, m);
    }
    Ok((
        Residue {
            value: outer,
            modulus: m,
        },
        ell,
    ))
}

/// Sum over the order-(q-1) Teichmueller group of the degree-l extension of
/// Z/p^k, with q = p^l > C; equals (q-1) A mod p^k.
///
/// Because q - 1 is coprime to p, the geometric sums over this group vanish
/// exactly for every nonzero exponent of magnitude below q - 1, so the
/// quotient recovers A mod p^k even when p <= C.
pub fn charsum_gr(instance: &Instance, spec: &RingSpec) -> Result<Residue> {
    let c = capacity(instance).0;
    let q = spec.q();
    if q <= c {
        return Err(Error::FieldTooSmall(q, c));
    }
    let g = spec.teichmueller.clone();
    let g_inv = spec.unity_inv(&g);
    let mut x = spec.one();
    let mut x_inv = spec.one();
    let mut total = RingElement {
        coeffs: vec![0; spec.ell as usize],
    };
    let mut cursor = scan(instance);
    for _ in 0..q - 1 {
        let mut term = signed_unity_pow(spec, &x, &x_inv, -instance.b);
        cursor.rewind();
        while let Some(mi) = cursor.read() {
            let mut xm = signed_unity_pow(spec, &x, &x_inv, mi);
            xm.coeffs[0] = add_mod(xm.coeffs[0], 1, spec.modulus);
            term = spec.mul(&term, &xm);
        }
        total = spec.add(&total, &term);
        x = spec.mul(&x, &g);
        x_inv = spec.mul(&x_inv, &g_inv);
    }
    let value = spec.constant_part(&total)?;
    Ok(Residue {
        value,
        modulus: spec.modulus,
    })
}

fn signed_unity_pow(spec: &RingSpec, x: &RingElement, x_inv: &RingElement, e: i64) -> RingElement {
    if e >= 0 {
        spec.pow_unsigned(x, e as u64)
    } else {
        spec.pow_unsigned(x_inv, e.unsigned_abs())
    }
}

/// The k-fold nested sum over x_1..x_k in 1..p-1; equals (-1)^k A mod p.
///
/// Each coordinate contributes a factor -1 when its exponent vanishes, so the
/// sign alternates with the dimension (for k = 1 this is `charsum_mod_p`).
pub fn charsum_multivariate(vinstance: &VectorInstance, p: u64) -> Result<Residue> {
    let c = vector_capacity(vinstance).0;
    if p <= c {
        return Err(Error::PrimeTooSmall(p, c));
    }
    check_modulus(p)?;
    let k = vinstance.k();
    let n = vinstance.n();
    let span = (p - 1) as usize;

    // Power tables per coordinate value: x^(-B_j) and x^(m_ij).
    let mut pow_b = vec![vec![0u64; span]; k];
    let mut pow_m = vec![vec![0u64; span]; n * k];
    for x in 1..p {
        let xi = (x - 1) as usize;
        for j in 0..k {
            pow_b[j][xi] = mod_pow_raw(x, -vinstance.b[j], p)?;
        }
        for (i, row) in vinstance.m.iter().enumerate() {
            for (j, &mij) in row.iter().enumerate() {
                pow_m[i * k + j][xi] = mod_pow_raw(x, mij, p)?;
            }
        }
    }

    let item_acc = vec![1u64 % p; n];
    let total = nested_sum(p, k, n, 0, 1 % p, &item_acc, &pow_b, &pow_m);
    Ok(Residue {
        value: total,
        modulus: p,
    })
}

#[allow(clippy::too_many_arguments)]
fn nested_sum(
    p: u64,
    k: usize,
    n: usize,
    depth: usize,
    target_acc: u64,
    item_acc: &[u64],
    pow_b: &[Vec<u64>],
    pow_m: &[Vec<u64>],
) -> u64 {
    if depth == k {
        let mut term = target_acc;
        for &a in item_acc {
            term = mul_mod(term, add_mod(a, 1, p), p);
        }
        return term;
    }
    let mut total = 0u64;
    let mut next_acc = vec![0u64; n];
    for x in 1..p {
        let xi = (x - 1) as usize;
        let t = mul_mod(target_acc, pow_b[depth][xi], p);
        for i in 0..n {
            next_acc[i] = mul_mod(item_acc[i], pow_m[i * k + depth][xi], p);
        }
        total = add_mod(
            total,
            nested_sum(p, k, n, depth + 1, t, &next_acc, pow_b, pow_m),
            p,
        );
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::gf::find_irreducible;
    use crate::numtheory::is_prime;

    fn inst(m: &[i64], b: i64) -> Instance {
        Instance::new(m.to_vec(), b)
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum(5, 4).value, 4);
        assert_eq!(power_sum(5, 3).value, 0);
        assert_eq!(power_sum(7, 0).value, 6);
        assert_eq!(power_sum(2, 7).value, 1);
        assert_eq!(power_sum(5, -4).value, 4);
    }

    #[test]
    fn power_sum_matches_naive() {
        for p in (2..=31u64).filter(|&p| is_prime(p)) {
            let o = (p - 1) as i64;
            for k in -2 * o..=2 * o {
                let naive = (1..p).fold(0u64, |acc, x| {
                    add_mod(acc, mod_pow_raw(x, k, p).unwrap(), p)
                });
                assert_eq!(power_sum(p, k).value, naive, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn charsum_mod_p_examples() {
        assert_eq!(charsum_mod_p(&inst(&[1, 2, 3], 3), 11).unwrap().value, 9);
        assert_eq!(charsum_mod_p(&inst(&[], 0), 3).unwrap().value, 2);
        assert_eq!(charsum_mod_p(&inst(&[1, 2], 4), 11).unwrap().value, 0);
        assert_eq!(
            charsum_mod_p(&inst(&[1, 2, 3], 3), 7),
            Err(Error::PrimeTooSmall(7, 10))
        );
    }

    #[test]
    fn charsum_over_fq_examples() {
        // A = 2 for m=[1,2,3], B=3
        let spec = find_irreducible(2, 4); // GF(16)
        assert_eq!(charsum_over_fq(&inst(&[1, 2, 3], 3), &spec).unwrap().value, 0);
        let spec = find_irreducible(3, 3); // GF(27)
        assert_eq!(charsum_over_fq(&inst(&[1, 2, 3], 3), &spec).unwrap().value, 1);
        let spec = find_irreducible(2, 2); // GF(4)
        assert_eq!(charsum_over_fq(&inst(&[], 0), &spec).unwrap().value, 1);
        let spec = find_irreducible(3, 1);
        assert_eq!(
            charsum_over_fq(&inst(&[1, 2, 3], 3), &spec),
            Err(Error::FieldTooSmall(3, 10))
        );
    }

    #[test]
    fn charsum_mu_examples() {
        let r = charsum_mu(&inst(&[1, 2, 3], 3), 11, 2).unwrap();
        assert_eq!((r.value, r.modulus), (20, 121)); // (p-1) A = 10 * 2
        let r = charsum_mu(&inst(&[], 0), 3, 2).unwrap();
        assert_eq!((r.value, r.modulus), (2, 9));
        let r = charsum_mu(&inst(&[1], 2), 5, 2).unwrap();
        assert_eq!((r.value, r.modulus), (0, 25));
    }

    #[test]
    fn charsum_mu_r_examples() {
        // C = 10 forces l = 2, r = 18. The sum counts subsets whose
        // deviation is a multiple of p-1 = 2 (four of them), times r:
        // 18 * 4 = 72 = 18 mod 27.
        let (r, ell) = charsum_mu_r(&inst(&[1, 2, 3], 3), 3, 1).unwrap();
        assert_eq!((r.value, r.modulus, ell), (18, 27, 2));
        // C = 1: l = 1, r = 6, single subset with zero deviation
        let (r, ell) = charsum_mu_r(&inst(&[], 0), 3, 1).unwrap();
        assert_eq!((r.value, r.modulus, ell), (6, 9, 1));
        // A = 0 and no deviation divisible by 4; modulus p^(k+l) = 25
        let (r, ell) = charsum_mu_r(&inst(&[1], 2), 5, 1).unwrap();
        assert_eq!((r.value, r.modulus, ell), (0, 25, 1));
        assert_eq!(
            charsum_mu_r(&inst(&[1], 2), 2, 1),
            Err(Error::OddPrimeRequired)
        );
    }

    #[test]
    fn charsum_mu_r_counts_congruent_subsets() {
        // Exhaustive cross-check of the quotient structure on a small corpus.
        for (m, b) in [
            (vec![1i64, 2, 3], 3i64),
            (vec![2, 2, -1], 1),
            (vec![4], 0),
            (vec![1, 1, 1, 1], 2),
        ] {
            let instance = Instance::new(m.clone(), b);
            for p in [3u64, 5, 7] {
                for k in 1..=2u32 {
                    let (s, ell) = charsum_mu_r(&instance, p, k).unwrap();
                    let r = (p - 1) * p.pow(ell);
                    let congruent = (0..1u64 << m.len())
                        .filter(|mask| {
                            let sum: i64 = m
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| mask >> i & 1 == 1)
                                .map(|(_, &v)| v)
                                .sum();
                            (sum - b).rem_euclid((p - 1) as i64) == 0
                        })
                        .count() as u64;
                    assert_eq!(
                        s.value,
                        mul_mod(r % s.modulus, congruent % s.modulus, s.modulus),
                        "m={m:?} b={b} p={p} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn charsum_gr_recovers_prime_power_counts() {
        // m=[1,2,3], B=3 has A=2; C=10
        let spec = RingSpec::new(3, 2, 3).unwrap(); // q = 27 > 10, mod 9
        let s = charsum_gr(&inst(&[1, 2, 3], 3), &spec).unwrap();
        // (q-1) A = 26 * 2 = 52 = 7 mod 9
        assert_eq!((s.value, s.modulus), (7, 9));
        let a = mul_mod(s.value, spec.q_minus_1_inv(), 9);
        assert_eq!(a, 2);

        // the case the mu_r route gets wrong: m=[4], B=0, A=1
        let spec = RingSpec::new(5, 1, 2).unwrap(); // q = 25 > 5
        let s = charsum_gr(&inst(&[4], 0), &spec).unwrap();
        let a = mul_mod(s.value, spec.q_minus_1_inv(), 5);
        assert_eq!(a, 1);
    }

    #[test]
    fn charsum_multivariate_examples() {
        // sum = (-1)^k A; k = 2 here, so the raw sum equals A
        let v = VectorInstance::new(vec![vec![1, 0], vec![0, 1]], vec![1, 1]).unwrap();
        assert_eq!(charsum_multivariate(&v, 7).unwrap().value, 1);
        let v = VectorInstance::new(vec![], vec![0, 0]).unwrap();
        assert_eq!(charsum_multivariate(&v, 7).unwrap().value, 1);
        let v = VectorInstance::new(vec![vec![1, 1]], vec![1, 0]).unwrap();
        assert_eq!(charsum_multivariate(&v, 5).unwrap().value, 0);
    }

    #[test]
    fn multivariate_matches_scalar_for_k1() {
        let v = VectorInstance::new(vec![vec![1], vec![2], vec![3]], vec![3]).unwrap();
        let s = Instance::new(vec![1, 2, 3], 3);
        for p in [11u64, 13, 17] {
            assert_eq!(
                charsum_multivariate(&v, p).unwrap(),
                charsum_mod_p(&s, p).unwrap()
            );
        }
    }
}
