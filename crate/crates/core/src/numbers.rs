//! Number sources: continued fractions, substitution words, Liouville sums.
//!
//! Every witness number is described by a small spec that can be re-realized
//! at any precision, so decision retries can regenerate their inputs instead
//! of trusting stale roundings.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::precision::{CertifiedReal, PrecisionContext};

/// How the partial quotients of a continued fraction are produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CfRule {
    /// The number is exactly the finite continued fraction `[0; a1, ..., ak]`.
    Explicit(Vec<u64>),
    /// Quotients cycle through the given block forever.
    Periodic(Vec<u64>),
    /// Quotients follow the fixed point of the substitution
    /// `a -> ab, b -> a`, read as values `a` and `b`.
    Fibonacci { a: u64, b: u64 },
    /// Quotients follow the standard word of the given angle: the two-letter
    /// schedule `s_k = s_{k-1}^{d_k} s_{k-2}` driven by the angle's partial
    /// quotients `d_k` (cycled). The golden angle reproduces `Fibonacci`.
    Sturmian { a: u64, b: u64, angle: Vec<u64> },
}

/// A continued fraction `[0; a1, a2, ...]` with an expansion budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfSpec {
    pub rule: CfRule,
    /// Maximum number of quotients `cf_to_real` may expand.
    pub max_quotients: u32,
}

impl CfSpec {
    pub fn new(rule: CfRule, max_quotients: u32) -> Self {
        CfSpec {
            rule,
            max_quotients,
        }
    }

    pub fn golden_conjugate() -> Self {
        CfSpec::new(CfRule::Periodic(vec![1]), 512)
    }

    pub fn sqrt2_fractional() -> Self {
        CfSpec::new(CfRule::Periodic(vec![2]), 512)
    }

    pub fn fibonacci(a: u64, b: u64) -> Self {
        CfSpec::new(CfRule::Fibonacci { a, b }, 512)
    }

    /// First `count` partial quotients, or as many as the rule can provide.
    pub fn quotients(&self, count: usize) -> Vec<u64> {
        match &self.rule {
            CfRule::Explicit(list) => list.iter().copied().take(count).collect(),
            CfRule::Periodic(block) => {
                assert!(!block.is_empty());
                block.iter().cycle().copied().take(count).collect()
            }
            CfRule::Fibonacci { a, b } => fibonacci_word(*a, *b, count),
            CfRule::Sturmian { a, b, angle } => standard_word(*a, *b, angle, count),
        }
    }

    fn is_finite(&self) -> bool {
        matches!(self.rule, CfRule::Explicit(_))
    }

    /// Certified value of the continued fraction.
    ///
    /// Expands quotients until the convergent sandwich is tighter than the
    /// context tolerance `2^{-mantissa_bits}` (finite explicit fractions are
    /// returned exactly). Fails with `InsufficientQuotients` when the budget
    /// cannot reach the tolerance.
    pub fn value(&self, ctx: &PrecisionContext) -> Result<CertifiedReal> {
        let scale = ctx.scale();
        if self.is_finite() {
            let qs = self.quotients(self.max_quotients as usize);
            let (p, q) = finite_cf_rational(&qs);
            return CertifiedReal::from_rational(&p, &q, scale);
        }
        // Expand until the sandwich gap reaches full scale resolution, or
        // the quotient budget runs out; a budget-limited gap is still
        // accepted if it beats the context's relative tolerance.
        let full: BigInt = BigInt::one() << (scale + 2);
        let acceptable: BigInt =
            BigInt::one() << (ctx.mantissa_bits() - ctx.guard_bits().min(ctx.mantissa_bits() - 1));
        let quotients = self.quotients(self.max_quotients as usize);
        let mut conv = ConvergentIter::new();
        let mut prev: Option<(BigInt, BigInt)> = None;
        let mut last_pair: Option<((BigInt, BigInt), (BigInt, BigInt))> = None;
        for &a in &quotients {
            let (p, q) = conv.push(a);
            if let Some((pp, pq)) = &prev {
                // Consecutive convergents alternate around the value, so
                // they enclose it with gap 1/(q_k q_{k+1}).
                if pq * &q >= full {
                    return Ok(sandwich_value(pp, pq, &p, &q, scale));
                }
                last_pair = Some(((pp.clone(), pq.clone()), (p.clone(), q.clone())));
            }
            prev = Some((p, q));
        }
        if let Some(((pp, pq), (p, q))) = last_pair {
            if &pq * &q >= acceptable {
                return Ok(sandwich_value(&pp, &pq, &p, &q, scale));
            }
        }
        Err(Error::InsufficientQuotients {
            available: quotients.len(),
        })
    }
}

/// Convergent recurrence for `[0; a1, a2, ...]`.
pub struct ConvergentIter {
    p_prev: BigInt,
    p_cur: BigInt,
    q_prev: BigInt,
    q_cur: BigInt,
}

impl ConvergentIter {
    pub fn new() -> Self {
        // p_{-1}/q_{-1} = 1/0, p_0/q_0 = 0/1 for a zero integer part.
        ConvergentIter {
            p_prev: BigInt::one(),
            p_cur: BigInt::zero(),
            q_prev: BigInt::zero(),
            q_cur: BigInt::one(),
        }
    }

    /// Feed one quotient, returning the new convergent `(p, q)`.
    pub fn push(&mut self, a: u64) -> (BigInt, BigInt) {
        let p = BigInt::from(a) * &self.p_cur + &self.p_prev;
        let q = BigInt::from(a) * &self.q_cur + &self.q_prev;
        self.p_prev = std::mem::replace(&mut self.p_cur, p.clone());
        self.q_prev = std::mem::replace(&mut self.q_cur, q.clone());
        (p, q)
    }
}

impl Default for ConvergentIter {
    fn default() -> Self {
        Self::new()
    }
}

/// Exact value of a finite continued fraction `[0; a1, ..., ak]`.
pub fn finite_cf_rational(quotients: &[u64]) -> (BigInt, BigInt) {
    let mut conv = ConvergentIter::new();
    let mut last = (BigInt::zero(), BigInt::one());
    for &a in quotients {
        last = conv.push(a);
    }
    last
}

/// Certified enclosure from two consecutive convergents.
fn sandwich_value(p1: &BigInt, q1: &BigInt, p2: &BigInt, q2: &BigInt, scale: u32) -> CertifiedReal {
    let one = BigInt::one() << scale;
    let lo1 = (p1 * &one) / q1; // floor
    let lo2 = (p2 * &one) / q2;
    let (lo, hi) = if &lo1 < &lo2 { (lo1, lo2) } else { (lo2, lo1) };
    // Widen by one ulp on each side for the floor roundings.
    CertifiedReal::from_endpoints(lo - 1, hi + 1, scale)
}

/// Prefix of the fixed point of `a -> ab, b -> a`, starting from `a`.
pub fn fibonacci_word(a: u64, b: u64, len: usize) -> Vec<u64> {
    assert!(a != b, "fibonacci rule needs distinct symbols");
    // s_1 = a, s_2 = ab, s_{k+1} = s_k s_{k-1}
    let mut prev = vec![a];
    let mut cur = vec![a, b];
    if len <= 1 {
        return prev.into_iter().take(len).collect();
    }
    while cur.len() < len {
        let next: Vec<u64> = cur.iter().chain(prev.iter()).copied().collect();
        prev = std::mem::replace(&mut cur, next);
    }
    cur.truncate(len);
    cur
}

/// Prefix of the standard word with schedule `d` (cycled):
/// `s_{-1} = b, s_0 = a, s_k = s_{k-1}^{d_k} s_{k-2}`.
pub fn standard_word(a: u64, b: u64, d: &[u64], len: usize) -> Vec<u64> {
    assert!(a != b, "sturmian rule needs distinct symbols");
    assert!(!d.is_empty());
    let mut s_prev = vec![b];
    let mut s_cur = vec![a];
    let mut k = 0usize;
    while s_cur.len() < len {
        let reps = d[k % d.len()] as usize;
        let mut next = Vec::with_capacity(s_cur.len() * reps + s_prev.len());
        for _ in 0..reps {
            next.extend_from_slice(&s_cur);
        }
        next.extend_from_slice(&s_prev);
        s_prev = std::mem::replace(&mut s_cur, next);
        k += 1;
    }
    s_cur.truncate(len);
    s_cur
}

/// A re-realizable description of one real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumberSpec {
    Rational { num: i64, den: i64 },
    Cf(CfSpec),
    /// `base + mul * xi` with rational `base`, `mul`.
    Affine {
        base: (i64, i64),
        mul: (i64, i64),
        xi: CfSpec,
    },
    /// `xi^k`.
    Power { xi: CfSpec, k: u32 },
    /// `sum_{j=1..terms} base^{-j!}`.
    Liouville { base: u32, terms: u32 },
    /// Bit `t` of the entry is bit `t mod 64` of the seeded stream word
    /// `t / 64`; a fixed real number in `[0,1)` realizable at any precision.
    UniformBits { seed: u64, stream: u64 },
}

impl NumberSpec {
    pub fn golden() -> Self {
        NumberSpec::Affine {
            base: (1, 1),
            mul: (1, 1),
            xi: CfSpec::golden_conjugate(),
        }
    }

    pub fn sqrt2() -> Self {
        NumberSpec::Affine {
            base: (1, 1),
            mul: (1, 1),
            xi: CfSpec::sqrt2_fractional(),
        }
    }

    pub fn realize(&self, ctx: &PrecisionContext) -> Result<CertifiedReal> {
        let scale = ctx.scale();
        match self {
            NumberSpec::Rational { num, den } => {
                CertifiedReal::from_rational(&BigInt::from(*num), &BigInt::from(*den), scale)
            }
            NumberSpec::Cf(spec) => spec.value(ctx),
            NumberSpec::Affine { base, mul, xi } => {
                let b =
                    CertifiedReal::from_rational(&BigInt::from(base.0), &BigInt::from(base.1), scale)?;
                let m =
                    CertifiedReal::from_rational(&BigInt::from(mul.0), &BigInt::from(mul.1), scale)?;
                Ok(b.add(&m.mul(&xi.value(ctx)?)))
            }
            NumberSpec::Power { xi, k } => Ok(xi.value(ctx)?.pow(*k)),
            NumberSpec::Liouville { base, terms } => liouville_number(*base, *terms, ctx),
            NumberSpec::UniformBits { seed, stream } => Ok(uniform_bits(*seed, *stream, scale)),
        }
    }
}

/// `sum_{k=1..terms} base^{-k!}` with the tail `2 base^{-(terms+1)!}` folded
/// into the radius.
pub fn liouville_number(base: u32, terms: u32, ctx: &PrecisionContext) -> Result<CertifiedReal> {
    if base < 2 || terms < 1 {
        return Err(Error::InvalidInput(
            "liouville_number needs base >= 2 and terms >= 1".into(),
        ));
    }
    let scale = ctx.scale();
    // Tail exponent (terms+1)! * log2(base) must stay within the scale, or
    // the radius contribution degenerates to rounding noise.
    let mut fact: u64 = 1;
    for j in 2..=(terms as u64 + 1) {
        fact = fact.saturating_mul(j);
    }
    let lb = (base as f64).log2();
    if (fact as f64) * lb > scale as f64 {
        return Err(Error::PrecisionOverflow(format!(
            "liouville tail base^{{-{fact}}} below 2^-{scale} resolution"
        )));
    }
    let b = BigInt::from(base);
    let mut kfact: u64 = 1;
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for k in 1..=terms as u64 {
        kfact *= k;
        let d = b.pow(kfact as u32);
        // num/den + 1/d
        num = num * &d + &den;
        den *= d;
    }
    let sum = CertifiedReal::from_rational(&num, &den, scale)?;
    let tail = b.pow(fact as u32);
    let tail_radius = {
        // ceil(2 * 2^scale / tail)
        let numer = BigInt::from(2) << scale;
        let (q, r) = num_integer::Integer::div_rem(&numer, &tail);
        if r.is_zero() {
            q
        } else {
            q + 1
        }
    };
    Ok(CertifiedReal::new(
        sum.mantissa().clone(),
        sum.radius() + tail_radius,
        scale,
    ))
}

/// Deterministic uniform value in `[0,1)` built from the seeded bit stream.
fn uniform_bits(seed: u64, stream: u64, scale: u32) -> CertifiedReal {
    let words = (scale as usize).div_ceil(64);
    let mut mantissa = BigInt::zero();
    for w in 0..words {
        let bits = crate::rng::word(seed, stream, w as u64);
        mantissa = (mantissa << 64) | BigInt::from(bits);
    }
    let extra = (words * 64) as u32 - scale;
    mantissa >>= extra;
    debug_assert!(!mantissa.is_negative());
    // The unseen tail of the stream is below one ulp.
    CertifiedReal::new(mantissa, BigInt::one(), scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx64() -> PrecisionContext {
        PrecisionContext::with_mantissa(64).unwrap()
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_mantissa(160).unwrap()
    }

    #[test]
    fn fibonacci_word_prefixes() {
        assert_eq!(fibonacci_word(1, 2, 1), vec![1]);
        assert_eq!(fibonacci_word(1, 2, 5), vec![1, 2, 1, 1, 2]);
        assert_eq!(fibonacci_word(1, 2, 8), vec![1, 2, 1, 1, 2, 1, 2, 1]);
    }

    #[test]
    fn fibonacci_word_prefix_property() {
        let long = fibonacci_word(3, 7, 144);
        for len in [1usize, 2, 5, 21, 89] {
            assert_eq!(fibonacci_word(3, 7, len), long[..len].to_vec());
        }
    }

    #[test]
    fn sturmian_golden_angle_is_fibonacci() {
        let fib = fibonacci_word(1, 2, 100);
        let sturm = standard_word(1, 2, &[1], 100);
        assert_eq!(fib, sturm);
    }

    #[test]
    fn cf_value_golden_conjugate() {
        let spec = CfSpec::new(CfRule::Periodic(vec![1]), 40);
        let v = spec.value(&ctx64()).unwrap();
        assert!((v.to_f64() - 0.6180339887).abs() < 1e-10);
        assert!(v.radius_f64() < 1e-15);
    }

    #[test]
    fn cf_value_sqrt2_fractional() {
        let spec = CfSpec::new(CfRule::Periodic(vec![2]), 40);
        let v = spec.value(&ctx64()).unwrap();
        assert!((v.to_f64() - 0.4142135624).abs() < 1e-10);
        assert!(v.radius_f64() < 1e-15);
    }

    #[test]
    fn cf_single_quotient_exact() {
        let spec = CfSpec::new(CfRule::Explicit(vec![4]), 8);
        let v = spec.value(&ctx64()).unwrap();
        assert!(v.is_exact());
        assert_eq!(v.to_f64(), 0.25);
    }

    #[test]
    fn cf_insufficient_quotients() {
        let spec = CfSpec::new(CfRule::Periodic(vec![1]), 10);
        assert!(matches!(
            spec.value(&ctx64()),
            Err(Error::InsufficientQuotients { .. })
        ));
    }

    #[test]
    fn convergents_alternate_around_value() {
        let spec = CfSpec::new(CfRule::Periodic(vec![1]), 256);
        let v = spec.value(&ctx()).unwrap().center_rational();
        let mut conv = ConvergentIter::new();
        let mut side = Vec::new();
        for &a in &spec.quotients(20) {
            let (p, q) = conv.push(a);
            let c = num_rational::BigRational::new(p, q);
            side.push(c < v);
        }
        for w in side.windows(2) {
            assert_ne!(w[0], w[1], "consecutive convergents on the same side");
        }
    }

    #[test]
    fn liouville_values() {
        // base 10, 1 term: 0.1 with tail radius 2e-2
        let v = liouville_number(10, 1, &ctx()).unwrap();
        assert!((v.to_f64() - 0.1).abs() < 1e-15);
        assert!((v.radius_f64() - 0.02).abs() < 1e-12);

        // base 10, 3 terms: 0.110001 with tail 2e-24
        let v = liouville_number(10, 3, &ctx()).unwrap();
        assert!((v.to_f64() - 0.110001).abs() < 1e-15);
        assert!(v.radius_f64() <= 2.1e-24);

        // base 2, 2 terms: 0.75 with tail 2^-5
        let v = liouville_number(2, 2, &ctx()).unwrap();
        assert!((v.to_f64() - 0.75).abs() < 1e-15);
        assert!((v.radius_f64() - 2.0 * (2.0f64).powi(-6)).abs() < 1e-12);
    }

    #[test]
    fn liouville_overflow() {
        let c = PrecisionContext::with_mantissa(64).unwrap();
        assert!(matches!(
            liouville_number(10, 4, &c),
            Err(Error::PrecisionOverflow(_))
        ));
    }

    #[test]
    fn uniform_bits_deterministic_and_refinable() {
        let a = NumberSpec::UniformBits { seed: 9, stream: 3 };
        let v1 = a.realize(&ctx()).unwrap();
        let v2 = a.realize(&ctx()).unwrap();
        assert_eq!(v1, v2);
        // Refinement stays inside the coarse enclosure.
        let fine = a.realize(&ctx().doubled()).unwrap();
        assert!(fine.lo_rational() >= v1.lo_rational());
        assert!(fine.hi_rational() <= v1.hi_rational());
    }

    #[test]
    fn golden_satisfies_quadratic() {
        let phi = NumberSpec::golden().realize(&ctx()).unwrap();
        // phi^2 - phi - 1 = 0
        let residue = phi.pow(2).sub(&phi).sub(&CertifiedReal::from_integer(1, phi.scale()));
        assert!(residue.contains_zero());
        assert!(residue.radius_f64() < 1e-40);
    }
}
