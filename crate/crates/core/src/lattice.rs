//! Exact integer LLL and bounded box enumeration.
//!
//! The guided engines phrase "find all vectors with small sup-norm whose
//! form values are small" as lattice-point enumeration in a box. The basis
//! is reduced with exact rational LLL (dimensions here are at most 7), then
//! candidates are generated by a Fincke-Pohst sweep over an inflated
//! Euclidean ball and filtered exactly. Candidates are always re-verified by
//! certified arithmetic downstream, so the float stage only has to be
//! generous, not perfect.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::precision::big_to_f64;
use crate::system::LinearSystem;

const LLL_DELTA_NUM: i64 = 3;
const LLL_DELTA_DEN: i64 = 4;
const MAX_POINTS: usize = 2_000_000;

fn gram_schmidt(basis: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let d = basis.len();
    let mut mu = vec![vec![BigRational::zero(); d]; d];
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(d);
    let mut norms = vec![BigRational::zero(); d];
    for i in 0..d {
        let mut v: Vec<BigRational> = basis[i]
            .iter()
            .map(|x| BigRational::from(x.clone()))
            .collect();
        for j in 0..i {
            if norms[j].is_zero() {
                continue;
            }
            let mut dot = BigRational::zero();
            for c in 0..v.len() {
                dot += BigRational::from(basis[i][c].clone()) * &star[j][c];
            }
            let coeff = dot / &norms[j];
            for c in 0..v.len() {
                let delta = &coeff * &star[j][c];
                v[c] -= delta;
            }
            mu[i][j] = coeff;
        }
        let mut n = BigRational::zero();
        for c in &v {
            n += c * c;
        }
        norms[i] = n;
        star.push(v);
    }
    (mu, norms)
}

fn round_rational(v: &BigRational) -> BigInt {
    v.round().to_integer()
}

/// In-place exact LLL reduction with delta = 3/4.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) {
    let d = basis.len();
    if d <= 1 {
        return;
    }
    let delta = BigRational::new(BigInt::from(LLL_DELTA_NUM), BigInt::from(LLL_DELTA_DEN));
    let (mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    while k < d {
        // Size-reduce b_k against previous vectors, updating mu in place
        // (the starred vectors and norms are unaffected).
        for j in (0..k).rev() {
            let r = round_rational(&mu[k][j]);
            if !r.is_zero() {
                for c in 0..basis[k].len() {
                    let sub = &r * &basis[j][c];
                    basis[k][c] -= sub;
                }
                let r_rat = BigRational::from(r);
                for jp in 0..j {
                    let sub = &r_rat * &mu[j][jp];
                    mu[k][jp] -= sub;
                }
                mu[k][j] -= r_rat;
            }
        }
        // Lovasz condition.
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let gs = gram_schmidt(basis);
            mu = gs.0;
            norms = gs.1;
            k = k.max(2) - 1;
        }
    }
}

/// All lattice points `p = sum u_r basis_r` with `|p_c - target_c| <=
/// bounds_c` for every coordinate. Complete up to float slack in the
/// candidate stage (every reported point is exactly checked).
pub fn enumerate_box(
    basis: &[Vec<BigInt>],
    target: &[BigInt],
    bounds: &[BigInt],
) -> Result<Vec<Vec<BigInt>>> {
    let d = basis.len();
    assert!(d >= 1 && basis.iter().all(|r| r.len() == d));
    assert_eq!(target.len(), d);
    assert_eq!(bounds.len(), d);
    assert!(bounds.iter().all(|b| b.is_positive()));

    // Equalize coordinate bounds so one Euclidean radius covers the box.
    let max_bound = bounds.iter().max().unwrap().clone();
    let big = &max_bound << 10;
    let scales: Vec<BigInt> = bounds.iter().map(|b| &big / b).collect();
    let mut scaled: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|row| row.iter().zip(&scales).map(|(v, s)| v * s).collect())
        .collect();
    lll_reduce(&mut scaled);

    let basis_f: Vec<Vec<f64>> = scaled
        .iter()
        .map(|row| row.iter().map(big_to_f64).collect())
        .collect();
    let target_f: Vec<f64> = target
        .iter()
        .zip(&scales)
        .map(|(t, s)| big_to_f64(&(t * s)))
        .collect();
    let big_f = big_to_f64(&big);
    // Scaled box fits in the sup-ball of radius ~big; inflate generously.
    let radius2 = (d as f64) * big_f * big_f * 1.01 + 1.0;

    let coeffs = enumerate_ball_f64(&basis_f, &target_f, radius2)?;

    // The coefficients refer to the reduced scaled basis; undo the
    // per-coordinate scaling (exact, rows stay integer combinations).
    let reduced: Vec<Vec<BigInt>> = scaled
        .iter()
        .map(|row| {
            row.iter()
                .zip(&scales)
                .map(|(v, s)| {
                    debug_assert!((v % s).is_zero());
                    v / s
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for u in coeffs {
        let mut p = vec![BigInt::zero(); d];
        for (r, &ur) in u.iter().enumerate() {
            if ur != 0 {
                for c in 0..d {
                    p[c] += &reduced[r][c] * BigInt::from(ur);
                }
            }
        }
        let ok = (0..d).all(|c| (&p[c] - &target[c]).abs() <= bounds[c]);
        if ok {
            out.push(p);
        }
    }
    Ok(out)
}

/// Fincke-Pohst sweep over `||p - t||^2 <= radius2` in float arithmetic,
/// returning coefficient vectors with respect to the given basis.
fn enumerate_ball_f64(
    basis: &[Vec<f64>],
    target: &[f64],
    radius2: f64,
) -> Result<Vec<Vec<i64>>> {
    let d = basis.len();
    // Float Gram-Schmidt.
    let mut star = basis.to_vec();
    let mut mu = vec![vec![0.0f64; d]; d];
    let mut norms = vec![0.0f64; d];
    for i in 0..d {
        for j in 0..i {
            if norms[j] == 0.0 {
                continue;
            }
            let dot: f64 = (0..d).map(|c| basis[i][c] * star[j][c]).sum();
            mu[i][j] = dot / norms[j];
            for c in 0..d {
                star[i][c] -= mu[i][j] * star[j][c];
            }
        }
        norms[i] = (0..d).map(|c| star[i][c] * star[i][c]).sum();
        if !(norms[i] > 0.0) {
            return Err(Error::InvalidInput(
                "degenerate basis in box enumeration".into(),
            ));
        }
    }
    // Target coefficients in the Gram-Schmidt frame.
    let mut tau = vec![0.0f64; d];
    for j in 0..d {
        let dot: f64 = (0..d).map(|c| target[c] * star[j][c]).sum();
        tau[j] = dot / norms[j];
    }

    let slack = 1.0 + 1e-9;
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut u = vec![0i64; d];
    // w[j] accumulates sum_{r>j} u_r mu_{r,j}.
    fn descend(
        level: isize,
        rem: f64,
        u: &mut Vec<i64>,
        mu: &[Vec<f64>],
        norms: &[f64],
        tau: &[f64],
        slack: f64,
        out: &mut Vec<Vec<i64>>,
    ) -> Result<()> {
        if level < 0 {
            if out.len() >= MAX_POINTS {
                return Err(Error::BudgetExceeded {
                    spent: out.len() as u64,
                    partial: None,
                });
            }
            out.push(u.clone());
            return Ok(());
        }
        let j = level as usize;
        let mut center = tau[j];
        for r in (j + 1)..norms.len() {
            center -= u[r] as f64 * mu[r][j];
        }
        let width = (rem.max(0.0) / norms[j]).sqrt() * slack + 1e-9;
        let lo = (center - width).floor() as i64;
        let hi = (center + width).ceil() as i64;
        for cand in lo..=hi {
            let diff = cand as f64 - center;
            let used = diff * diff * norms[j];
            if used <= rem * slack + 1e-9 {
                u[j] = cand;
                descend(level - 1, rem - used, u, mu, norms, tau, slack, out)?;
            }
        }
        u[j] = 0;
        Ok(())
    }
    descend(
        d as isize - 1,
        radius2,
        &mut u,
        &mu,
        &norms,
        &tau,
        slack,
        &mut out,
    )?;
    Ok(out)
}

/// Which family of forms the candidate search targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormSide {
    /// Column forms `M(y) = ||tA y||` on `Z^n`.
    Columns,
    /// Row forms `||A x + theta||` on `Z^m`.
    Rows,
}

/// Candidate coordinate vectors `v` with `|v| <= v_bound` whose form values
/// can lie below `delta` (modulo integers), optionally shifted by a target.
///
/// Superset semantics: every vector below the bound is intended to be
/// produced, extra vectors are fine, and callers must re-verify each
/// candidate with certified arithmetic.
pub fn form_box_candidates(
    sys: &LinearSystem,
    side: FormSide,
    v_bound: u64,
    delta: &BigRational,
    target: Option<&[BigRational]>,
) -> Result<Vec<Vec<i64>>> {
    assert!(delta.is_positive());
    let (k, l) = match side {
        FormSide::Columns => (sys.n(), sys.m()),
        FormSide::Rows => (sys.m(), sys.n()),
    };
    let d = k + l;
    // Value resolution: fine enough that entry rounding (about k*v_bound in
    // absolute size) is negligible against Q*delta.
    let kv = BigInt::from(k as u64) * BigInt::from(v_bound) + BigInt::from(2);
    let q_num = (&kv << 20) * delta.denom();
    let q = num_integer::Integer::div_ceil(&q_num, delta.numer());

    let coeff = |ci: usize, vj: usize| -> &crate::precision::CertifiedReal {
        match side {
            FormSide::Columns => sys.entry(ci, vj),
            FormSide::Rows => sys.entry(vj, ci),
        }
    };

    let mut basis = vec![vec![BigInt::zero(); d]; d];
    for i in 0..k {
        basis[i][i] = BigInt::one();
        for j in 0..l {
            let approx = coeff(i, j).center_rational() * BigRational::from(q.clone());
            basis[i][k + j] = round_rational(&approx);
        }
    }
    for j in 0..l {
        basis[k + j][k + j] = q.clone();
    }

    let mut target_vec = vec![BigInt::zero(); d];
    if let Some(t) = target {
        assert_eq!(t.len(), l);
        for j in 0..l {
            let scaled = -(t[j].clone()) * BigRational::from(q.clone());
            target_vec[k + j] = round_rational(&scaled);
        }
    }

    let val_bound: BigInt = {
        let qd = BigRational::from(q.clone()) * delta;
        round_rational(&qd) + (&kv >> 1) + BigInt::from(2)
    };
    let mut bounds = vec![BigInt::from(v_bound); d];
    for b in bounds.iter_mut().skip(k) {
        *b = val_bound.clone();
    }

    let points = enumerate_box(&basis, &target_vec, &bounds)?;
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let mut v = Vec::with_capacity(k);
        let mut ok = true;
        for c in p.iter().take(k) {
            match c.to_i64() {
                Some(x) => v.push(x),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(v);
        }
    }
    Ok(out)
}
