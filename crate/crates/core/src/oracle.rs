//! Independent cross-check routines used by the verification suites.
//!
//! Nothing in here is allowed to call into the engines it checks: the
//! continued-fraction expansion below works directly on certified interval
//! endpoints with the classical Euclidean recurrence, so it can serve as
//! ground truth for the enumeration engines on `1 x 1` systems.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::precision::CertifiedReal;

/// Partial quotients of every real in `[lo, hi]`, i.e. the common prefix of
/// their continued fraction expansions, with `0 < lo <= hi`.
pub fn cf_expand_interval(lo: &BigRational, hi: &BigRational, max_terms: usize) -> Vec<u64> {
    assert!(lo.is_positive() && lo <= hi);
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let mut out = Vec::new();
    while out.len() < max_terms {
        let flo = lo.floor().to_integer();
        let fhi = hi.floor().to_integer();
        if flo != fhi {
            break; // the interval no longer determines the next quotient
        }
        out.push(match u64::try_from(&flo) {
            Ok(v) => v,
            Err(_) => break,
        });
        let frac_lo = &lo - BigRational::from(flo.clone());
        let frac_hi = &hi - BigRational::from(flo);
        if frac_lo.is_zero() || frac_hi.is_zero() {
            break; // rational endpoint reached: expansion terminates here
        }
        // Reciprocal swaps the ends.
        lo = frac_hi.recip();
        hi = frac_lo.recip();
    }
    out
}

/// Convergent denominators `q_k <= bound` of the number enclosed by `value`,
/// deduplicated (a leading quotient 1 repeats the denominator 1).
///
/// These are exactly the record norms of the scalar form `||q xi||`, which
/// is what makes this the ground-truth oracle for `1 x 1` sequences.
pub fn convergent_denominators(value: &CertifiedReal, bound: u64) -> Vec<u64> {
    let lo = value.lo_rational();
    let hi = value.hi_rational();
    // Work with the integer part stripped; quotient a0 does not affect
    // denominators.
    let shift = BigRational::from(lo.floor().to_integer());
    let lo = &lo - &shift;
    let hi = &hi - &shift;
    let one = BigRational::one();
    assert!(lo.is_positive() && hi < one, "value must be strictly inside (k, k+1)");
    // Reciprocal swaps the interval ends.
    let quots = cf_expand_interval(&hi.recip(), &lo.recip(), 256);
    // Denominators of [0; q1, q2, ...] where q1 is the integer part of 1/x.
    let mut denoms = vec![1u64];
    let mut q_prev = BigInt::zero();
    let mut q_cur = BigInt::one();
    for a in quots {
        let q = BigInt::from(a) * &q_cur + &q_prev;
        q_prev = std::mem::replace(&mut q_cur, q.clone());
        match u64::try_from(&q) {
            Ok(v) if v <= bound => {
                if denoms.last() != Some(&v) {
                    denoms.push(v);
                }
            }
            _ => break,
        }
    }
    denoms
}

/// Fibonacci numbers up to `bound` starting 1, 2, 3, 5, ...
pub fn fibonacci_up_to(bound: u64) -> Vec<u64> {
    let mut out = vec![1u64, 2];
    loop {
        let n = out[out.len() - 1] + out[out.len() - 2];
        if n > bound {
            break;
        }
        out.push(n);
    }
    out.retain(|v| *v <= bound);
    out
}

/// Pell-recurrence denominators 1, 2, 5, 12, 29, ... up to `bound`
/// (convergent denominators of sqrt 2).
pub fn pell_denominators_up_to(bound: u64) -> Vec<u64> {
    let mut out = vec![1u64, 2];
    loop {
        let n = 2 * out[out.len() - 1] + out[out.len() - 2];
        if n > bound {
            break;
        }
        out.push(n);
    }
    out.retain(|v| *v <= bound);
    out
}
