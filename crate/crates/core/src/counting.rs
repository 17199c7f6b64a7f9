//! Solution counting: residues mod p and p^k, exact CRT reconstruction, and
//! the fixed-point approximation of A through a bracketing modulus.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::charsum::{charsum_gr, charsum_mod_p, charsum_mu, charsum_over_fq};
use crate::decider::decide;
use crate::error::{Error, Result};
use crate::model::{capacity, Instance};
use crate::numtheory::gf::find_irreducible;
use crate::numtheory::gr::RingSpec;
use crate::numtheory::{
    check_modulus, checked_prime_power, is_prime, mod_inv_raw, mul_mod, next_prime, Residue,
};

/// A prime power modulus p^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePower {
    pub p: u64,
    pub k: u32,
}

impl PrimePower {
    pub fn new(p: u64, k: u32) -> Result<PrimePower> {
        if !is_prime(p) || k == 0 {
            return Err(Error::ParseError(format!("{p}^{k} is not a prime power")));
        }
        checked_prime_power(p, k)?;
        Ok(PrimePower { p, k })
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }
}

/// Distinct primes whose product serves as a combined modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusBasket {
    pub primes: Vec<u64>,
}

impl ModulusBasket {
    pub fn new(primes: Vec<u64>) -> Result<ModulusBasket> {
        let mut seen = primes.clone();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicatePrime(w[0]));
            }
        }
        Ok(ModulusBasket { primes })
    }

    pub fn product(&self) -> BigUint {
        self.primes
            .iter()
            .fold(BigUint::one(), |acc, &p| acc * BigUint::from(p))
    }
}

/// A fraction numerator / 2^bits in [0, 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedFraction {
    pub bits: u32,
    pub numerator: BigUint,
}

/// A floating estimate mantissa * 2^exponent with a fixed mantissa width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxCount {
    pub mantissa: u64,
    pub exponent: i32,
    pub zero: bool,
}

impl ApproxCount {
    /// The estimate as an exact scaled integer pair (value = num / 2^denom_bits).
    pub fn as_scaled(&self) -> (BigUint, u32) {
        if self.exponent >= 0 {
            (BigUint::from(self.mantissa) << self.exponent as u32, 0)
        } else {
            (BigUint::from(self.mantissa), (-self.exponent) as u32)
        }
    }
}

/// A mod p for any prime: directly above the capacity, through GF(p^l) below it.
pub fn count_mod_prime(instance: &Instance, p: u64) -> Result<Residue> {
    check_modulus(p)?;
    let c = capacity(instance).0;
    if p > c {
        let s = charsum_mod_p(instance, p)?;
        Ok(Residue {
            value: (p - s.value) % p,
            modulus: p,
        })
    } else {
        let mut ell = 1u32;
        while checked_prime_power(p, ell)? <= c {
            ell += 1;
        }
        let spec = find_irreducible(p, ell);
        let s = charsum_over_fq(instance, &spec)?;
        // q - 1 = -1 mod p, so A = -s
        Ok(Residue {
            value: (p - s.value) % p,
            modulus: p,
        })
    }
}

/// A mod p^k for odd p: the Teichmueller sum in Z/p^k above the capacity,
/// the Teichmueller sum of the unramified degree-l extension below it.
pub fn count_mod_prime_power(instance: &Instance, pp: PrimePower) -> Result<Residue> {
    if pp.p == 2 {
        return Err(Error::OddPrimeRequired);
    }
    let c = capacity(instance).0;
    let m = pp.modulus();
    check_modulus(m)?;
    if pp.p > c {
        let s = charsum_mu(instance, pp.p, pp.k)?;
        let inv = mod_inv_raw((pp.p - 1) % m, m)?;
        Ok(Residue {
            value: mul_mod(s.value, inv, m),
            modulus: m,
        })
    } else {
        let mut ell = 1u32;
        while checked_prime_power(pp.p, ell)? <= c {
            ell += 1;
        }
        let ring = RingSpec::new(pp.p, pp.k, ell)?;
        let s = charsum_gr(instance, &ring)?;
        Ok(Residue {
            value: mul_mod(s.value, ring.q_minus_1_inv(), m),
            modulus: m,
        })
    }
}

/// CRT combination of residues `(value, prime)` into the unique value below
/// the product of the primes.
fn crt_combine(residues: &[(u64, u64)]) -> BigUint {
    let mut x = BigUint::zero();
    let mut modulus = BigUint::one();
    for &(a, p) in residues {
        let m_mod_p = (&modulus % p).to_u64().expect("prime fits u64");
        let x_mod_p = (&x % p).to_u64().expect("prime fits u64");
        let inv = mod_inv_raw(m_mod_p, p).expect("basket primes are distinct");
        let t = mul_mod((a + p - x_mod_p) % p, inv, p);
        x += &modulus * BigUint::from(t);
        modulus *= BigUint::from(p);
    }
    x
}

/// Exact A by CRT over enough primes above the capacity.
///
/// Stores n-bit intermediates, so this is deliberately outside the
/// small-space regime the decider honors.
pub fn count_exact(instance: &Instance) -> Result<BigUint> {
    let c = capacity(instance).0;
    let bound = BigUint::one() << instance.n();
    let mut residues = Vec::new();
    let mut product = BigUint::one();
    let mut p = next_prime(c)?;
    while product <= bound {
        let a = count_mod_prime(instance, p)?;
        residues.push((a.value, p));
        product *= BigUint::from(p);
        p = next_prime(p)?;
    }
    Ok(crt_combine(&residues))
}

fn ceil_log2(x: u64) -> u32 {
    64 - (x - 1).leading_zeros()
}

/// A/N mod 1 as a t-bit fixed-point fraction, accumulated with guard bits.
pub fn approx_fraction(
    instance: &Instance,
    basket: &ModulusBasket,
    t: u32,
) -> Result<FixedFraction> {
    let basket = ModulusBasket::new(basket.primes.clone())?; // re-checks distinctness
    if basket.primes.is_empty() {
        return Ok(FixedFraction {
            bits: t,
            numerator: BigUint::zero(),
        });
    }
    let guard = ceil_log2(basket.primes.len() as u64 + 1) + 2;
    let total_bits = t + guard;
    let n_product = basket.product();
    let mut acc = BigUint::zero();
    for &p in &basket.primes {
        let a = count_mod_prime(instance, p)?.value;
        let n_i = &n_product / p;
        let n_i_mod_p = (&n_i % p).to_u64().expect("prime fits u64");
        let b = mod_inv_raw(n_i_mod_p, p)?;
        let c = mul_mod(a, b, p);
        acc += (BigUint::from(c) << total_bits) / p;
    }
    let mask = (BigUint::one() << total_bits) - BigUint::one();
    acc &= mask;
    // round to t bits, wrapping mod 1
    let rounded = (acc + (BigUint::one() << (guard - 1))) >> guard;
    let numerator = rounded & ((BigUint::one() << t) - BigUint::one());
    Ok(FixedFraction { bits: t, numerator })
}

/// True A for the current basket, valid while the basket product exceeds A.
fn basket_count(instance: &Instance, primes: &[u64]) -> Result<BigUint> {
    let residues: Result<Vec<(u64, u64)>> = primes
        .iter()
        .map(|&p| count_mod_prime(instance, p).map(|r| (r.value, p)))
        .collect();
    Ok(crt_combine(&residues?))
}

/// Finds a basket of distinct primes whose product N satisfies A < N < 2A
/// (N = 2 when A = 1, where no integer bracket exists).
///
/// Starts above 2^n and shrinks: drop the prime 2 when present, otherwise
/// replace the smallest prime q by the largest prime in [ceil(q/2), q-1].
/// The 1/2 threshold is decided by exact integer comparison.
pub fn find_bracketing_modulus(instance: &Instance) -> Result<ModulusBasket> {
    let (feasible, _) = decide(instance)?;
    if !feasible {
        return Err(Error::ZeroCount);
    }
    let c = capacity(instance).0;
    let bound = BigUint::one() << instance.n();
    let mut primes = Vec::new();
    let mut product = BigUint::one();
    let mut p = next_prime(c)?;
    while product <= bound {
        primes.push(p);
        product *= BigUint::from(p);
        p = next_prime(p)?;
    }

    let a = basket_count(instance, &primes)?;
    let two_a = &a * 2u32;
    while product > two_a {
        shrink(&mut primes, &mut product)?;
    }
    if product == two_a && a > BigUint::one() {
        // land strictly inside (A, 2A)
        let q = *primes.iter().min().expect("basket nonempty");
        if q >= 3 {
            shrink(&mut primes, &mut product)?;
        } else {
            let p = largest_prime_below(&two_a, &a)?;
            primes = vec![p];
        }
    }
    ModulusBasket::new(primes)
}

fn shrink(primes: &mut Vec<u64>, product: &mut BigUint) -> Result<()> {
    if let Some(pos) = primes.iter().position(|&p| p == 2) {
        primes.remove(pos);
        *product /= 2u32;
        return Ok(());
    }
    let (pos, &q) = primes
        .iter()
        .enumerate()
        .min_by_key(|&(_, &p)| p)
        .ok_or_else(|| Error::Internal("cannot shrink an empty basket".into()))?;
    let replacement = largest_prime_in_range(q.div_ceil(2), q - 1)?;
    primes[pos] = replacement;
    *product = &*product / q * replacement;
    Ok(())
}

fn largest_prime_in_range(lo: u64, hi: u64) -> Result<u64> {
    let mut c = hi;
    while c >= lo.max(2) {
        if is_prime(c) {
            return Ok(c);
        }
        c -= 1;
    }
    Err(Error::Internal(format!("no prime in [{lo}, {hi}]")))
}

fn largest_prime_below(hi_exclusive: &BigUint, lo_exclusive: &BigUint) -> Result<u64> {
    let hi = hi_exclusive
        .to_u64()
        .ok_or_else(|| Error::Internal("bracket out of range".into()))?;
    let lo = lo_exclusive
        .to_u64()
        .ok_or_else(|| Error::Internal("bracket out of range".into()))?;
    let mut c = hi - 1;
    while c > lo {
        if is_prime(c) {
            return Ok(c);
        }
        c -= 1;
    }
    Err(Error::Internal(format!("no prime in ({lo}, {hi})")))
}

/// Estimate of A to t significant bits via the bracketing modulus, with
/// relative error at most 2^-(t-3).
pub fn approx_count(instance: &Instance, t: u32) -> Result<ApproxCount> {
    let (feasible, _) = decide(instance)?;
    if !feasible {
        return Ok(ApproxCount {
            mantissa: 0,
            exponent: 0,
            zero: true,
        });
    }
    let basket = find_bracketing_modulus(instance)?;
    let inner_bits = t + 3;
    let f = approx_fraction(instance, &basket, inner_bits)?;
    let x = f.numerator * basket.product();
    // x / 2^inner_bits, rounded to t significant bits
    let len = x.bits() as i64;
    let (mantissa, shift) = if len > t as i64 {
        let shift = (len - t as i64) as u32;
        let mut m = (&x + (BigUint::one() << (shift - 1))) >> shift;
        let mut shift = shift as i64;
        if m.bits() as i64 > t as i64 {
            m >>= 1u32;
            shift += 1;
        }
        (m, shift)
    } else {
        let shift = t as i64 - len;
        (x << shift as u32, -shift)
    };
    Ok(ApproxCount {
        mantissa: mantissa.to_u64().expect("mantissa has t <= 64 bits"),
        exponent: (shift - inner_bits as i64) as i32,
        zero: false,
    })
}
