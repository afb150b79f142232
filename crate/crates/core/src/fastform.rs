//! Fixed-point `i128` pre-filter for form evaluation.
//!
//! Shell enumeration touches hundreds of millions of vectors; evaluating
//! every one in big-integer arithmetic would dominate the runtime. This
//! evaluator carries each entry as a 96-bit fixed-point enclosure and
//! returns certified lower/upper bounds on the sup-distance, good enough to
//! reject almost every candidate. Ambiguous candidates fall back to the
//! exact path.

use crate::precision::CertifiedReal;

/// Fractional bits of the fast representation.
pub const FAST_BITS: u32 = 96;
const MODULUS: i128 = 1 << FAST_BITS;

struct FastRow {
    coeffs: Vec<i128>,
    /// Per-coefficient enclosure width in `2^-96` units.
    errs: Vec<i128>,
    shift: i128,
    shift_err: i128,
}

/// Certified fast evaluator for `v -> ||F v + shift||` (sup-distance over
/// the rows).
pub struct FastForms {
    rows: Vec<FastRow>,
    max_coord: i64,
}

impl FastForms {
    /// Build from rows of certified coefficients and shifts. Returns `None`
    /// when magnitudes rule out overflow-free `i128` evaluation.
    pub fn new(rows_in: &[(Vec<CertifiedReal>, Option<CertifiedReal>)]) -> Option<FastForms> {
        let mut rows = Vec::with_capacity(rows_in.len());
        let mut max_abs: i128 = 1;
        for (coeffs_cr, shift_cr) in rows_in {
            let mut coeffs = Vec::with_capacity(coeffs_cr.len());
            let mut errs = Vec::with_capacity(coeffs_cr.len());
            for c in coeffs_cr {
                let (lo, hi) = c.to_fixed_i128(FAST_BITS)?;
                coeffs.push(lo);
                errs.push(hi - lo);
                max_abs = max_abs.max(lo.abs().max(hi.abs()));
            }
            let (shift, shift_err) = match shift_cr {
                Some(s) => {
                    let (lo, hi) = s.to_fixed_i128(FAST_BITS)?;
                    (lo.rem_euclid(MODULUS), hi - lo)
                }
                None => (0, 0),
            };
            rows.push(FastRow {
                coeffs,
                errs,
                shift,
                shift_err,
            });
        }
        let width = rows_in.first().map(|(c, _)| c.len()).unwrap_or(0).max(1);
        // Keep every partial product clear of i128 range:
        // |v_i| * max_abs < 2^126 / width.
        let denom = max_abs.checked_mul(width as i128)?;
        let cap = (i128::MAX / 4) / denom;
        if cap < 2 {
            return None;
        }
        Some(FastForms {
            rows,
            max_coord: cap.min(i64::MAX as i128) as i64,
        })
    }

    /// Largest coordinate magnitude this table certifies.
    pub fn max_coord(&self) -> i64 {
        self.max_coord
    }

    /// Certified enclosure of the sup-distance, in `2^-96` units.
    #[inline]
    pub fn eval(&self, v: &[i64]) -> (i128, i128) {
        debug_assert!(v.iter().all(|c| c.abs() <= self.max_coord));
        let mut lo = i128::MIN;
        let mut hi = i128::MIN;
        for row in &self.rows {
            let mut acc: i128 = row.shift;
            let mut err: i128 = row.shift_err;
            for (k, &c) in row.coeffs.iter().enumerate() {
                let vk = v[k] as i128;
                if vk != 0 {
                    acc += (vk * c).rem_euclid(MODULUS);
                    err += vk.abs() * row.errs[k];
                }
            }
            let s = acc.rem_euclid(MODULUS);
            let d = s.min(MODULUS - s);
            let rlo = (d - err).max(0);
            let rhi = (d + err).min(MODULUS / 2);
            lo = lo.max(rlo);
            hi = hi.max(rhi);
        }
        (lo, hi)
    }
}

/// Fast table for the column forms `M(y) = ||tA y||` of a system.
pub fn m_side(sys: &crate::system::LinearSystem) -> Option<FastForms> {
    let mut rows = Vec::with_capacity(sys.m());
    for j in 0..sys.m() {
        let coeffs: Vec<CertifiedReal> = (0..sys.n()).map(|i| sys.entry(i, j).clone()).collect();
        rows.push((coeffs, None));
    }
    FastForms::new(&rows)
}

/// Fast table for the shifted row forms `||A x + theta||`.
pub fn l_side(sys: &crate::system::LinearSystem, theta: &[CertifiedReal]) -> Option<FastForms> {
    debug_assert_eq!(theta.len(), sys.n());
    let mut rows = Vec::with_capacity(sys.n());
    for i in 0..sys.n() {
        let coeffs: Vec<CertifiedReal> = (0..sys.m()).map(|j| sys.entry(i, j).clone()).collect();
        rows.push((coeffs, Some(theta[i].clone())));
    }
    FastForms::new(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::NumberSpec;
    use crate::precision::PrecisionContext;
    use crate::system::SystemSpec;

    #[test]
    fn fast_bounds_enclose_exact_value() {
        let ctx = PrecisionContext::with_mantissa(128).unwrap();
        let sys = SystemSpec::powers(
            crate::numbers::CfSpec::fibonacci(1, 2),
            2,
            crate::system::Orientation::Column,
        )
        .realize(&ctx)
        .unwrap();
        let fast = m_side(&sys).expect("fast table");
        for y in [[1i64, 0], [0, 1], [3, -5], [987, -610], [-4181, 6765]] {
            let mut yc = y;
            crate::enumerate::canonicalize(&mut yc);
            let (lo, hi) = fast.eval(&yc);
            let exact = sys.eval_m(&yc).unwrap();
            let scale = 2f64.powi(-(FAST_BITS as i32));
            let v = exact.to_f64();
            assert!(lo as f64 * scale <= v + 1e-18, "lo bound violated for {yc:?}");
            assert!(v - 1e-18 <= hi as f64 * scale, "hi bound violated for {yc:?}");
            assert!((hi - lo) < (1 << 30), "enclosure too wide for {yc:?}");
        }
    }

    #[test]
    fn fast_shifted_rows_match_inhom_eval() {
        let ctx = PrecisionContext::with_mantissa(128).unwrap();
        let sys = SystemSpec::scalar(NumberSpec::sqrt2(), "sqrt2")
            .realize(&ctx)
            .unwrap();
        let theta = vec![CertifiedReal::from_rational(
            &num_bigint::BigInt::from(1),
            &num_bigint::BigInt::from(3),
            ctx.scale(),
        )
        .unwrap()];
        let fast = l_side(&sys, &theta).expect("fast table");
        for x in [[0i64], [1], [-7], [99], [-12345]] {
            let (lo, hi) = fast.eval(&x);
            let exact = sys.eval_l_inhom(&x, &theta).unwrap().to_f64();
            let scale = 2f64.powi(-(FAST_BITS as i32));
            assert!(lo as f64 * scale <= exact + 1e-18);
            assert!(exact - 1e-18 <= hi as f64 * scale);
        }
    }
}
