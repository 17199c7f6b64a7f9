//! The main decision loop: sweep primes above the capacity, test the
//! character sum, and stop once the accumulated bit budget exceeds n.
//! Also hosts the working-space meter that backs the small-space claim
//! empirically.

use serde::Serialize;

use crate::charsum::charsum_mod_p_metered;
use crate::error::Result;
use crate::model::{capacity, check_capacity, Instance, DEFAULT_MAX_CAPACITY};
use crate::numtheory::next_prime;

/// Tracks the peak total bit-length of the named working registers.
///
/// Each register is charged the bit-length of the largest value it ever
/// holds; `peak_bits` is the sum over registers. Input tape contents and
/// output bits are not charged, matching the usual read-only-input
/// convention. A disabled meter reports the 0 sentinel.
#[derive(Debug)]
pub struct Meter {
    enabled: bool,
    regs: Vec<(&'static str, u32)>,
}

impl Meter {
    pub fn disabled() -> Meter {
        Meter {
            enabled: false,
            regs: Vec::new(),
        }
    }

    pub fn enabled() -> Meter {
        Meter {
            enabled: true,
            regs: Vec::new(),
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    /// Declares a register with an explicit bit width.
    pub fn register(&mut self, name: &'static str, bit_width: u32) {
        if !self.enabled {
            return;
        }
        match self.regs.iter_mut().find(|(n, _)| *n == name) {
            Some((_, w)) => *w = (*w).max(bit_width),
            None => self.regs.push((name, bit_width)),
        }
    }

    /// Records a value held by the register; its bit-length widens it.
    pub fn update(&mut self, name: &'static str, value: u64) {
        if !self.enabled {
            return;
        }
        self.register(name, 64 - value.leading_zeros());
    }

    /// Sum of per-register peak widths; 0 when disabled.
    pub fn peak_bits(&self) -> u32 {
        self.regs.iter().map(|&(_, w)| w).sum()
    }
}

/// Outcome of a metered decider run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpaceReport {
    pub peak_bits: u32,
    pub primes_checked: u64,
    pub result: bool,
}

fn floor_log2(p: u64) -> u64 {
    63 - u64::from(p.leading_zeros())
}

/// Decides whether any subset of `m` sums to `B`, without metering.
pub fn decide(instance: &Instance) -> Result<(bool, SpaceReport)> {
    decide_with(instance, false, DEFAULT_MAX_CAPACITY)
}

/// Same decision with the working-space meter switched on.
pub fn decide_metered(instance: &Instance) -> Result<(bool, SpaceReport)> {
    decide_with(instance, true, DEFAULT_MAX_CAPACITY)
}

pub fn decide_with(
    instance: &Instance,
    metered: bool,
    max_capacity: u64,
) -> Result<(bool, SpaceReport)> {
    let cap = check_capacity(capacity(instance), max_capacity)?;
    let n = instance.n() as u64;
    let mut meter = if metered {
        Meter::enabled()
    } else {
        Meter::disabled()
    };

    let mut c: u64 = 0;
    let mut p = next_prime(cap.0)?;
    let mut primes_checked = 0;
    meter.update("c", c);
    meter.update("p", p);

    let result = loop {
        if c > n {
            break false;
        }
        primes_checked += 1;
        let s = charsum_mod_p_metered(instance, p, &mut meter)?;
        if !s.is_zero() {
            break true;
        }
        c += floor_log2(p);
        p = next_prime(p)?;
        meter.update("c", c);
        meter.update("p", p);
    };

    Ok((
        result,
        SpaceReport {
            peak_bits: meter.peak_bits(),
            primes_checked,
            result,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decide_examples() {
        let (res, rep) = decide(&Instance::new(vec![1, 2, 3], 3)).unwrap();
        assert!(res);
        assert_eq!(rep.primes_checked, 1); // p = 11 already witnesses A = 2

        let (res, rep) = decide(&Instance::new(vec![1, 2], 4)).unwrap();
        assert!(!res);
        // C = 8, p = 11 gives 0, c jumps to 3 > n = 2
        assert_eq!(rep.primes_checked, 1);

        let (res, _) = decide(&Instance::new(vec![], 0)).unwrap();
        assert!(res);

        let (res, _) = decide(&Instance::new(vec![], 5)).unwrap();
        assert!(!res);
    }

    #[test]
    fn meter_accounting_is_additive() {
        let mut m = Meter::enabled();
        m.register("a", 4);
        m.register("b", 4);
        assert!(m.peak_bits() >= 8);
        m.update("a", 255); // widens a to 8 bits
        assert_eq!(m.peak_bits(), 12);
    }

    #[test]
    fn metered_run_respects_register_bound() {
        let inst = Instance::new(vec![1, 2], 4);
        let (_, rep) = decide_metered(&inst).unwrap();
        assert!(rep.peak_bits > 0);
        // eight registers of at most ceil(log2 11) bits each
        assert!(rep.peak_bits <= 8 * 4, "peak {} too large", rep.peak_bits);
    }

    #[test]
    fn unmetered_run_reports_zero_sentinel() {
        let (_, rep) = decide(&Instance::new(vec![1, 2], 4)).unwrap();
        assert_eq!(rep.peak_bits, 0);
    }

    #[test]
    fn capacity_cap_is_enforced() {
        let inst = Instance::new(vec![i64::MAX / 2], 0);
        assert!(decide(&inst).is_err());
    }
}
