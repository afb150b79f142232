//! Certified fixed-point interval arithmetic.
//!
//! Every real quantity is carried as a dyadic interval `center ± radius`
//! where both parts are integers scaled by `2^-scale`. Operations widen the
//! radius to cover their own rounding, so a stored interval always encloses
//! the exact value. Comparisons that gate algorithmic decisions either
//! return a certified answer or fail with [`Error::Indeterminate`], in which
//! case the caller doubles the precision and retries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const MIN_MANTISSA_BITS: u32 = 64;
pub const DEFAULT_GUARD_BITS: u32 = 32;
/// How many times a decision-gating computation may double its precision
/// before giving up with a hard error.
pub const MAX_RETRIES: u32 = 3;

/// Global precision policy: `mantissa_bits` is the certified resolution,
/// `guard_bits` absorbs accumulation during a computation. The working
/// scale (bits after the binary point) is the sum of the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    mantissa_bits: u32,
    guard_bits: u32,
}

impl PrecisionContext {
    pub fn new(mantissa_bits: u32, guard_bits: u32) -> Result<Self> {
        if mantissa_bits < MIN_MANTISSA_BITS {
            return Err(Error::InvalidInput(format!(
                "mantissa_bits must be at least {MIN_MANTISSA_BITS}, got {mantissa_bits}"
            )));
        }
        if guard_bits == 0 {
            return Err(Error::InvalidInput("guard_bits must be positive".into()));
        }
        Ok(PrecisionContext {
            mantissa_bits,
            guard_bits,
        })
    }

    pub fn with_mantissa(mantissa_bits: u32) -> Result<Self> {
        Self::new(mantissa_bits, DEFAULT_GUARD_BITS)
    }

    /// Default policy for an experiment that enumerates up to sup-norm
    /// `bound`: the smallest form value met in practice scales like a small
    /// power of the bound, so the mantissa grows with `log2(bound)`.
    pub fn for_enumeration_bound(bound: u64) -> Self {
        let lg = 64 - bound.max(1).leading_zeros();
        PrecisionContext {
            mantissa_bits: (4 * lg + 64).max(MIN_MANTISSA_BITS),
            guard_bits: DEFAULT_GUARD_BITS,
        }
    }

    pub fn mantissa_bits(&self) -> u32 {
        self.mantissa_bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Bits after the binary point in the fixed-point representation.
    pub fn scale(&self) -> u32 {
        self.mantissa_bits + self.guard_bits
    }

    pub fn doubled(&self) -> Self {
        PrecisionContext {
            mantissa_bits: self.mantissa_bits * 2,
            guard_bits: self.guard_bits,
        }
    }

    /// Largest radius (at this scale) a constructed quantity of magnitude
    /// bound `mag` may carry: `2^{-mantissa+guard}` relative to `max(1, mag)`.
    pub fn radius_tolerance(&self, magnitude: &CertifiedReal) -> BigInt {
        let unit = BigInt::one() << self.scale();
        let mag = magnitude.mantissa.magnitude().clone();
        let bound = unit.magnitude().clone().max(mag);
        let shift = self.mantissa_bits - self.guard_bits.min(self.mantissa_bits - 1);
        BigInt::from(bound) >> shift.min(self.scale())
    }
}

/// Shift right by `k`, rounding to nearest (ties up). Returns the rounded
/// value and whether rounding lost information.
fn shr_round_nearest(v: &BigInt, k: u32) -> (BigInt, bool) {
    if k == 0 {
        return (v.clone(), false);
    }
    let exact = v.is_zero() || v.trailing_zeros().unwrap_or(0) >= k as u64;
    let half = BigInt::one() << (k - 1);
    ((v + half) >> k, !exact)
}

/// Shift a nonnegative value right by `k`, rounding up.
fn shr_ceil(v: &BigInt, k: u32) -> BigInt {
    debug_assert!(!v.is_negative());
    if k == 0 {
        return v.clone();
    }
    let exact = v.is_zero() || v.trailing_zeros().unwrap_or(0) >= k as u64;
    let floor = v >> k;
    if exact {
        floor
    } else {
        floor + 1
    }
}

/// Dyadic interval `mantissa/2^scale ± radius/2^scale` enclosing one real
/// number. `radius == 0` exactly when the value is exactly representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    mantissa: BigInt,
    radius: BigInt,
    scale: u32,
}

impl CertifiedReal {
    pub fn new(mantissa: BigInt, radius: BigInt, scale: u32) -> Self {
        debug_assert!(!radius.is_negative());
        CertifiedReal {
            mantissa,
            radius,
            scale,
        }
    }

    pub fn zero(scale: u32) -> Self {
        CertifiedReal::new(BigInt::zero(), BigInt::zero(), scale)
    }

    pub fn from_integer(v: i64, scale: u32) -> Self {
        CertifiedReal::new(BigInt::from(v) << scale, BigInt::zero(), scale)
    }

    /// Round `num/den` to the scale. The radius is one ulp when the division
    /// is inexact and zero otherwise.
    pub fn from_rational(num: &BigInt, den: &BigInt, scale: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("rational with zero denominator".into()));
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let scaled = num << scale;
        let (q, r) = num_integer::Integer::div_rem(&scaled, &den);
        if r.is_zero() {
            return Ok(CertifiedReal::new(q, BigInt::zero(), scale));
        }
        // Round to nearest.
        let two_r = r.abs() << 1;
        let q = if two_r >= den {
            if scaled.is_negative() {
                q - 1
            } else {
                q + 1
            }
        } else {
            q
        };
        Ok(CertifiedReal::new(q, BigInt::one(), scale))
    }

    pub fn from_big_rational(v: &BigRational, scale: u32) -> Result<Self> {
        Self::from_rational(v.numer(), v.denom(), scale)
    }

    /// Exact dyadic `num / 2^bits`.
    pub fn from_dyadic(num: &BigInt, bits: u32, scale: u32) -> Self {
        if bits <= scale {
            CertifiedReal::new(num << (scale - bits), BigInt::zero(), scale)
        } else {
            let (m, inexact) = shr_round_nearest(num, bits - scale);
            let r = if inexact { BigInt::one() } else { BigInt::zero() };
            CertifiedReal::new(m, r, scale)
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn radius(&self) -> &BigInt {
        &self.radius
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    /// Lower interval endpoint, in mantissa units of this scale.
    pub fn lo(&self) -> BigInt {
        &self.mantissa - &self.radius
    }

    /// Upper interval endpoint, in mantissa units of this scale.
    pub fn hi(&self) -> BigInt {
        &self.mantissa + &self.radius
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo(), BigInt::one() << self.scale)
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi(), BigInt::one() << self.scale)
    }

    pub fn center_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.scale)
    }

    /// Re-target the interval to another scale. Raising the scale is exact;
    /// lowering rounds the center and widens the radius accordingly.
    pub fn rescale(&self, scale: u32) -> CertifiedReal {
        if scale == self.scale {
            return self.clone();
        }
        if scale > self.scale {
            let k = scale - self.scale;
            CertifiedReal::new(&self.mantissa << k, &self.radius << k, scale)
        } else {
            let k = self.scale - scale;
            let (m, inexact) = shr_round_nearest(&self.mantissa, k);
            let mut r = shr_ceil(&self.radius, k);
            if inexact {
                r += 1;
            }
            CertifiedReal::new(m, r, scale)
        }
    }

    fn assert_scale(&self, other: &CertifiedReal) {
        assert_eq!(
            self.scale, other.scale,
            "mixing precisions is rejected; rescale explicitly"
        );
    }

    pub fn add(&self, other: &CertifiedReal) -> CertifiedReal {
        self.assert_scale(other);
        CertifiedReal::new(
            &self.mantissa + &other.mantissa,
            &self.radius + &other.radius,
            self.scale,
        )
    }

    pub fn sub(&self, other: &CertifiedReal) -> CertifiedReal {
        self.assert_scale(other);
        CertifiedReal::new(
            &self.mantissa - &other.mantissa,
            &self.radius + &other.radius,
            self.scale,
        )
    }

    pub fn neg(&self) -> CertifiedReal {
        CertifiedReal::new(-&self.mantissa, self.radius.clone(), self.scale)
    }

    pub fn abs(&self) -> CertifiedReal {
        CertifiedReal::new(self.mantissa.abs(), self.radius.clone(), self.scale)
    }

    pub fn mul_i64(&self, k: i64) -> CertifiedReal {
        CertifiedReal::new(
            &self.mantissa * k,
            &self.radius * k.unsigned_abs(),
            self.scale,
        )
    }

    pub fn mul(&self, other: &CertifiedReal) -> CertifiedReal {
        self.assert_scale(other);
        let s = self.scale;
        let prod = &self.mantissa * &other.mantissa;
        let (center, inexact) = shr_round_nearest(&prod, s);
        let cross = self.mantissa.magnitude() * other.radius.magnitude()
            + other.mantissa.magnitude() * self.radius.magnitude()
            + self.radius.magnitude() * other.radius.magnitude();
        let mut radius = shr_ceil(&BigInt::from(cross), s);
        if inexact {
            radius += 1;
        }
        CertifiedReal::new(center, radius, s)
    }

    /// Nonnegative integer power by repeated multiplication.
    pub fn pow(&self, k: u32) -> CertifiedReal {
        let mut acc = CertifiedReal::from_integer(1, self.scale);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Nearest integer, certified. Fails with [`Error::AmbiguousRounding`]
    /// when the interval straddles a half-integer.
    pub fn nearest_integer(&self) -> Result<BigInt> {
        let s = self.scale;
        let (n, _) = shr_round_nearest(&self.mantissa, s);
        let half = BigInt::one() << (s - 1);
        let d = (&self.mantissa - (&n << s)).abs();
        if !self.radius.is_zero() && &d + &self.radius > half {
            return Err(Error::AmbiguousRounding);
        }
        Ok(n)
    }

    /// Certified distance to the nearest integer, the scalar `‖·‖`.
    ///
    /// Requires `radius < 1/4`. The result encloses `min_p |t - p|` and lies
    /// in `[0, 1/2]`.
    pub fn frac_dist(&self) -> Result<CertifiedReal> {
        let s = self.scale;
        let quarter = BigInt::one() << (s - 2);
        if self.radius >= quarter {
            return Err(Error::InvalidInput(
                "frac_dist requires radius < 1/4".into(),
            ));
        }
        let n = self.nearest_integer()?;
        let d = (&self.mantissa - (n << s)).abs();
        Ok(CertifiedReal::new(d, self.radius.clone(), s))
    }

    /// `‖v‖`: max over components of the distance to the nearest integer.
    pub fn vec_frac_dist(v: &[CertifiedReal]) -> Result<CertifiedReal> {
        assert!(!v.is_empty());
        let scale = v[0].scale;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for comp in v {
            assert_eq!(comp.scale, scale, "mixed scales in vec_frac_dist");
            let d = comp.frac_dist()?;
            let dlo = d.lo().max(BigInt::zero());
            let dhi = d.hi();
            lo = Some(match lo {
                None => dlo,
                Some(cur) => cur.max(dlo),
            });
            hi = Some(match hi {
                None => dhi,
                Some(cur) => cur.max(dhi),
            });
        }
        let (lo, hi) = (lo.unwrap(), hi.unwrap());
        Ok(CertifiedReal::from_endpoints(lo, hi, scale))
    }

    /// Interval from integer endpoints at the given scale.
    pub fn from_endpoints(lo: BigInt, hi: BigInt, scale: u32) -> CertifiedReal {
        debug_assert!(lo <= hi);
        let (center, inexact) = shr_round_nearest(&(&lo + &hi), 1);
        let mut radius = shr_ceil(&(&hi - &lo), 1);
        if inexact {
            radius += 1;
        }
        debug_assert!(&center - &radius <= lo && hi <= &center + &radius);
        CertifiedReal::new(center, radius, scale)
    }

    /// Certified strict order: `Ok(true)` only if every value in `self` is
    /// below every value in `other`, `Ok(false)` only if none is.
    pub fn certified_less_than(&self, other: &CertifiedReal) -> Result<bool> {
        self.assert_scale(other);
        if self.hi() < other.lo() {
            Ok(true)
        } else if self.lo() >= other.hi() {
            Ok(false)
        } else {
            Err(Error::Indeterminate)
        }
    }

    /// Certified `self >= num/den` (`den > 0`): `Ok(true)` when the whole
    /// interval is at or above the rational, `Ok(false)` when wholly below.
    pub fn certified_ge_rational(&self, num: &BigInt, den: &BigInt) -> Result<bool> {
        debug_assert!(den.is_positive());
        let lhs_lo = self.lo() * den;
        let lhs_hi = self.hi() * den;
        let rhs = num << self.scale;
        if lhs_lo >= rhs {
            Ok(true)
        } else if lhs_hi < rhs {
            Ok(false)
        } else {
            Err(Error::Indeterminate)
        }
    }

    /// Certified `self <= num/den` (`den > 0`).
    pub fn certified_le_rational(&self, num: &BigInt, den: &BigInt) -> Result<bool> {
        debug_assert!(den.is_positive());
        let lhs_lo = self.lo() * den;
        let lhs_hi = self.hi() * den;
        let rhs = num << self.scale;
        if lhs_hi <= rhs {
            Ok(true)
        } else if lhs_lo > rhs {
            Ok(false)
        } else {
            Err(Error::Indeterminate)
        }
    }

    /// Whether the interval contains zero.
    pub fn contains_zero(&self) -> bool {
        !self.lo().is_positive() && !self.hi().is_negative()
    }

    /// True when the enclosed value is certainly zero (exact zero).
    pub fn is_certified_zero(&self) -> bool {
        self.mantissa.is_zero() && self.radius.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        big_to_f64(&self.mantissa) * (2.0f64).powi(-(self.scale as i32))
    }

    pub fn radius_f64(&self) -> f64 {
        big_to_f64(&self.radius) * (2.0f64).powi(-(self.scale as i32))
    }

    /// `log2 |center|`; `-inf` for zero. Accurate to ~1e-14, which is all the
    /// exponent estimators need.
    pub fn log2_abs(&self) -> f64 {
        big_log2_abs(&self.mantissa) - self.scale as f64
    }

    /// Fixed-point enclosure at `target_bits` fractional bits, clamped to
    /// `i128`. Returns `None` when the value does not fit. The lower end is
    /// rounded down and the upper end up, so the enclosure stays valid.
    pub fn to_fixed_i128(&self, target_bits: u32) -> Option<(i128, i128)> {
        let lo = self.lo();
        let hi = self.hi();
        if target_bits >= self.scale {
            let k = target_bits - self.scale;
            Some(((lo << k).to_i128()?, (hi << k).to_i128()?))
        } else {
            let k = self.scale - target_bits;
            Some(((lo >> k).to_i128()?, shr_ceil_signed(&hi, k).to_i128()?))
        }
    }

    /// Print with 15 significant digits plus the certified radius.
    pub fn to_report_string(&self) -> String {
        let v = self.to_f64();
        let r = self.radius_f64();
        if self.is_exact() {
            format!("{v:.14e}±0")
        } else {
            format!("{v:.14e}±{r:.2e}")
        }
    }
}

/// Ceil division by a power of two for signed values.
fn shr_ceil_signed(v: &BigInt, k: u32) -> BigInt {
    if v.is_negative() {
        -((-v) >> k)
    } else {
        shr_ceil(v, k)
    }
}

/// `f64` approximation robust to mantissas wider than 1024 bits.
pub fn big_to_f64(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 996 {
        return v.to_f64().unwrap_or(0.0);
    }
    let top = (v >> (bits - 64)).to_f64().unwrap_or(0.0);
    top * (2.0f64).powi((bits - 64) as i32)
}

/// `log2 |v|`; `-inf` for zero.
pub fn big_log2_abs(v: &BigInt) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 64 {
        return (v.abs().to_f64().unwrap()).log2();
    }
    let top = (v.abs() >> (bits - 64)).to_f64().unwrap();
    top.log2() + (bits - 64) as f64
}

/// Run a decision that may come back [`Error::Indeterminate`] or
/// [`Error::AmbiguousRounding`], doubling the precision between attempts.
pub fn with_precision_retries<T>(
    ctx: &PrecisionContext,
    mut attempt: impl FnMut(&PrecisionContext) -> Result<T>,
) -> Result<T> {
    let mut current = *ctx;
    let mut retries = 0;
    loop {
        match attempt(&current) {
            Err(Error::Indeterminate) | Err(Error::AmbiguousRounding) => {
                if retries >= MAX_RETRIES {
                    return Err(Error::PrecisionExhausted { retries });
                }
                retries += 1;
                current = current.doubled();
            }
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Roots;

    const S: u32 = 192;

    fn dy(num: i64, den_pow2: u32) -> CertifiedReal {
        CertifiedReal::from_dyadic(&BigInt::from(num), den_pow2, S)
    }

    /// Independent oracle: `sqrt(k)` as a certified dyadic via integer sqrt.
    fn sqrt_oracle(k: u64, scale: u32) -> CertifiedReal {
        let target = BigInt::from(k) << (2 * scale);
        let root = target.sqrt();
        // root <= sqrt(k)*2^scale < root + 1
        CertifiedReal::from_endpoints(root.clone(), root + 1, scale)
    }

    fn golden_oracle(scale: u32) -> CertifiedReal {
        let half = CertifiedReal::from_rational(&BigInt::one(), &BigInt::from(2), scale).unwrap();
        sqrt_oracle(5, scale)
            .add(&CertifiedReal::from_integer(1, scale))
            .mul(&half)
    }

    #[test]
    fn frac_dist_simple_values() {
        // 0.3 -> 0.3 (dyadic approximation thereof)
        let t = CertifiedReal::from_rational(&BigInt::from(3), &BigInt::from(10), S).unwrap();
        let d = t.frac_dist().unwrap();
        let expect = CertifiedReal::from_rational(&BigInt::from(3), &BigInt::from(10), S).unwrap();
        assert!(d.sub(&expect).abs().hi() <= BigInt::from(4));

        // -0.7 -> 0.3 (distance to -1)
        let t = CertifiedReal::from_rational(&BigInt::from(-7), &BigInt::from(10), S).unwrap();
        let d = t.frac_dist().unwrap();
        assert!(d.sub(&expect).abs().hi() <= BigInt::from(4));
    }

    #[test]
    fn frac_dist_golden_ratio() {
        // Distance of (1+sqrt 5)/2 to the nearest integer, against the
        // integer-sqrt oracle: 2 - golden = 0.3819660113...
        let phi = golden_oracle(S);
        let d = phi.frac_dist().unwrap();
        let expect = CertifiedReal::from_integer(2, S).sub(&golden_oracle(S));
        assert!(d.sub(&expect).abs().hi() <= BigInt::from(16));
        let f = d.to_f64();
        assert!((f - 0.3819660113).abs() < 1e-9);
    }

    #[test]
    fn vec_frac_dist_examples() {
        let v = [dy(1, 0).mul(&dy(1, 4)), dy(1, 0).mul(&dy(1, 1))];
        // (1/16, 1/2) -> 1/2
        let d = CertifiedReal::vec_frac_dist(&v).unwrap();
        assert_eq!(d.mantissa, BigInt::one() << (S - 1));
        assert!(d.is_exact());

        // integer vector -> 0
        let v = [
            CertifiedReal::from_integer(1, S),
            CertifiedReal::from_integer(2, S),
        ];
        let d = CertifiedReal::vec_frac_dist(&v).unwrap();
        assert!(d.is_certified_zero());

        // (sqrt2, 2 sqrt2) -> dist(sqrt2) = sqrt2 - 1 = 0.41421...
        let r2 = sqrt_oracle(2, S);
        let v = [r2.clone(), r2.mul_i64(2)];
        let d = CertifiedReal::vec_frac_dist(&v).unwrap();
        assert!((d.to_f64() - 0.41421356).abs() < 1e-7);
    }

    #[test]
    fn frac_dist_exact_half_is_fine() {
        let t = dy(1, 1); // exactly 1/2
        let d = t.frac_dist().unwrap();
        assert!(d.is_exact());
        assert_eq!(d.mantissa, BigInt::one() << (S - 1));
    }

    #[test]
    fn frac_dist_ambiguous_near_half() {
        // center exactly 1/2 with a nonzero radius straddles the half-integer
        let t = CertifiedReal::new(BigInt::one() << (S - 1), BigInt::from(10), S);
        assert!(matches!(t.frac_dist(), Err(Error::AmbiguousRounding)));
    }

    #[test]
    fn certified_less_than_examples() {
        let a = dy(1, 1); // 0.5 exact
        let b = CertifiedReal::from_rational(&BigInt::from(6), &BigInt::from(10), S).unwrap();
        assert_eq!(a.certified_less_than(&b).unwrap(), true);
        assert_eq!(b.certified_less_than(&a).unwrap(), false);

        // overlapping: 0.5 +- 0.2 vs 0.6 +- 0.2
        let wide = |c: i64| {
            CertifiedReal::new(
                (BigInt::from(c) << S) / 10,
                (BigInt::one() << S) / 5,
                S,
            )
        };
        assert!(matches!(
            wide(5).certified_less_than(&wide(6)),
            Err(Error::Indeterminate)
        ));
    }

    #[test]
    fn rational_comparisons() {
        let r2 = sqrt_oracle(2, S);
        assert!(r2
            .certified_ge_rational(&BigInt::from(14142), &BigInt::from(10000))
            .unwrap());
        assert!(r2
            .certified_le_rational(&BigInt::from(14143), &BigInt::from(10000))
            .unwrap());
        assert!(!r2
            .certified_ge_rational(&BigInt::from(14143), &BigInt::from(10000))
            .unwrap());
    }

    #[test]
    fn periodicity_and_evenness() {
        for num in [-37i64, -3, 1, 5, 11] {
            let t = dy(num, 4); // num/16
            let base = t.frac_dist().unwrap();
            for k in [-3i64, -1, 2, 7] {
                let shifted = t.add(&CertifiedReal::from_integer(k, S));
                assert_eq!(shifted.frac_dist().unwrap(), base, "1-periodicity");
            }
            assert_eq!(t.neg().frac_dist().unwrap(), base, "evenness");
            let half = BigInt::one() << (S - 1);
            assert!(base.lo() >= BigInt::zero() - base.radius());
            assert!(base.hi() <= half);
        }
    }

    #[test]
    fn monotone_refinement_keeps_decisions() {
        // A decision made at low precision must not flip at high precision.
        let mk = |scale: u32| {
            let a = sqrt_oracle(2, scale);
            let b = CertifiedReal::from_rational(&BigInt::from(3), &BigInt::from(2), scale).unwrap();
            a.certified_less_than(&b)
        };
        let low = mk(S).unwrap();
        let high = mk(4 * S).unwrap();
        assert_eq!(low, high);
    }

    #[test]
    fn mul_exactness_tracking() {
        let a = dy(3, 2); // 0.75 exact
        let b = dy(5, 3); // 0.625 exact
        let p = a.mul(&b);
        assert!(p.is_exact());
        assert_eq!(
            p.center_rational(),
            BigRational::new(BigInt::from(15), BigInt::from(32))
        );
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let phi = golden_oracle(S);
        let sq = phi.pow(2);
        // golden^2 = golden + 1
        let alt = phi.add(&CertifiedReal::from_integer(1, S));
        assert!(sq.sub(&alt).abs().hi() <= (sq.radius() + alt.radius() + BigInt::from(4)));
    }

    #[test]
    fn retry_helper_escalates() {
        let ctx = PrecisionContext::with_mantissa(64).unwrap();
        let mut seen = Vec::new();
        let out: Result<u32> = with_precision_retries(&ctx, |c| {
            seen.push(c.mantissa_bits());
            if c.mantissa_bits() < 256 {
                Err(Error::Indeterminate)
            } else {
                Ok(c.mantissa_bits())
            }
        });
        assert_eq!(out.unwrap(), 256);
        assert_eq!(seen, vec![64, 128, 256]);

        let out: Result<()> = with_precision_retries(&ctx, |_| Err(Error::Indeterminate));
        assert!(matches!(out, Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn fixed_i128_enclosure() {
        let r2 = sqrt_oracle(2, S);
        let (lo, hi) = r2.to_fixed_i128(96).unwrap();
        let v = 2f64.sqrt() * 2f64.powi(96);
        assert!((lo as f64) <= v && v <= (hi as f64) + 2.0);
        assert!(hi - lo <= 2);
    }
}
