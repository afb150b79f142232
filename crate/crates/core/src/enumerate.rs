//! Sup-norm shell enumeration over integer vectors.
//!
//! Vectors are visited in canonical form only: the first nonzero coordinate
//! is positive (`y` and `-y` carry the same information for every form in
//! this crate). A shell is the set `|y| = norm` exactly; the recursion prunes
//! so that no interior point is ever produced.

use std::ops::ControlFlow;

/// Visit every canonical vector of sup-norm exactly `norm` in `dim`
/// dimensions, in lexicographic order. The visitor may break early.
pub fn for_each_canonical_shell<B>(
    dim: usize,
    norm: i64,
    mut visit: impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    assert!(dim >= 1 && norm >= 1);
    let mut buf = vec![0i64; dim];
    rec(&mut buf, 0, norm, false, false, &mut visit)
}

fn rec<B>(
    buf: &mut [i64],
    pos: usize,
    norm: i64,
    any_nonzero: bool,
    hit_max: bool,
    visit: &mut impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let dim = buf.len();
    if pos == dim {
        debug_assert!(hit_max && any_nonzero);
        return visit(buf);
    }
    let last = pos == dim - 1;
    if !hit_max && last {
        // The final coordinate must realize the norm.
        buf[pos] = norm;
        rec(buf, pos + 1, norm, true, true, visit)?;
        if any_nonzero {
            buf[pos] = -norm;
            rec(buf, pos + 1, norm, true, true, visit)?;
        }
        return ControlFlow::Continue(());
    }
    let lo = if any_nonzero { -norm } else { 0 };
    for v in lo..=norm {
        buf[pos] = v;
        rec(
            buf,
            pos + 1,
            norm,
            any_nonzero || v != 0,
            hit_max || v.unsigned_abs() == norm.unsigned_abs(),
            visit,
        )?;
    }
    ControlFlow::Continue(())
}

/// Visit every canonical nonzero vector of sup-norm up to `max_norm`, by
/// increasing shells.
pub fn for_each_canonical_ball<B>(
    dim: usize,
    max_norm: i64,
    mut visit: impl FnMut(i64, &[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    for norm in 1..=max_norm {
        for_each_canonical_shell(dim, norm, |v| visit(norm, v))?;
    }
    ControlFlow::Continue(())
}

/// Visit the full shell `|v| = norm` (both signs; inhomogeneous forms are
/// not symmetric under negation).
pub fn for_each_full_shell<B>(
    dim: usize,
    norm: i64,
    mut visit: impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    assert!(dim >= 1 && norm >= 1);
    let mut buf = vec![0i64; dim];
    rec_full(&mut buf, 0, norm, false, &mut visit)
}

fn rec_full<B>(
    buf: &mut [i64],
    pos: usize,
    norm: i64,
    hit_max: bool,
    visit: &mut impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let dim = buf.len();
    if pos == dim {
        debug_assert!(hit_max);
        return visit(buf);
    }
    let last = pos == dim - 1;
    if !hit_max && last {
        for v in [-norm, norm] {
            buf[pos] = v;
            rec_full(buf, pos + 1, norm, true, visit)?;
        }
        return ControlFlow::Continue(());
    }
    for v in -norm..=norm {
        buf[pos] = v;
        rec_full(
            buf,
            pos + 1,
            norm,
            hit_max || v.unsigned_abs() == norm.unsigned_abs(),
            visit,
        )?;
    }
    ControlFlow::Continue(())
}

pub fn sup_norm(v: &[i64]) -> i64 {
    v.iter().map(|c| c.abs()).max().unwrap_or(0)
}

pub fn is_canonical(v: &[i64]) -> bool {
    match v.iter().find(|c| **c != 0) {
        Some(first) => *first > 0,
        None => false,
    }
}

/// Flip a nonzero vector into canonical form.
pub fn canonicalize(v: &mut [i64]) {
    if !is_canonical(v) {
        for c in v.iter_mut() {
            *c = -*c;
        }
    }
}
