//! Best-approximation sequences for the column forms `M(y) = ||tA y||`.
//!
//! The exhaustive engine scans sup-norm shells and certifies minimality by
//! construction. The guided engine keeps the exhaustive prefix and extends
//! it with record candidates harvested from reduced lattice bases at a
//! geometric ladder of scales; beyond the exhaustive bound the records are
//! genuine but minimality between them is best effort.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::enumerate::{for_each_canonical_shell, sup_norm};
use crate::error::{Error, Result};
use crate::fastform::{self, FAST_BITS};
use crate::precision::{CertifiedReal, MAX_RETRIES};
use crate::system::LinearSystem;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Which engine certified an item.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Exhaustive,
    ReductionGuided,
}

impl Engine {
    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Exhaustive => "exhaustive",
            Engine::ReductionGuided => "guided",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BestApproxItem {
    pub y: Vec<i64>,
    pub norm: u64,
    pub value: CertifiedReal,
    pub engine: Engine,
}

#[derive(Debug, Clone)]
pub struct BestApproxSequence {
    pub items: Vec<BestApproxItem>,
    /// Dimensions of the underlying system (`y` lives in `Z^n`).
    pub n: usize,
    pub m: usize,
    pub y_max: u64,
    /// Norm bound below which minimality is certified by full enumeration.
    pub exhaustive_up_to: u64,
    pub evaluations: u64,
    pub system_record: String,
}

impl BestApproxSequence {
    /// Assemble a sequence directly; used by synthetic tests and validators.
    pub fn from_parts(
        items: Vec<BestApproxItem>,
        n: usize,
        m: usize,
        y_max: u64,
        exhaustive_up_to: u64,
    ) -> Self {
        BestApproxSequence {
            items,
            n,
            m,
            y_max,
            exhaustive_up_to,
            evaluations: 0,
            system_record: String::new(),
        }
    }

    pub fn norms(&self) -> Vec<u64> {
        self.items.iter().map(|it| it.norm).collect()
    }

    /// Strict monotonicity both directions plus canonical storage.
    pub fn verify_invariants(&self) -> Result<()> {
        if self.items.is_empty() {
            return Ok(());
        }
        if self.items[0].norm != 1 {
            return Err(Error::InvalidInput(format!(
                "first record norm must be 1, got {}",
                self.items[0].norm
            )));
        }
        for it in &self.items {
            if !crate::enumerate::is_canonical(&it.y) {
                return Err(Error::InvalidInput(format!(
                    "stored vector not canonical: {:?}",
                    it.y
                )));
            }
            if sup_norm(&it.y) as u64 != it.norm {
                return Err(Error::InvalidInput("stored norm mismatch".into()));
            }
        }
        for w in self.items.windows(2) {
            if w[0].norm >= w[1].norm {
                return Err(Error::InvalidInput("norms not strictly increasing".into()));
            }
            if w[1].value.hi_rational() >= w[0].value.lo_rational() {
                return Err(Error::InvalidInput(
                    "form values not certified strictly decreasing".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Lazily refined realizations of one system, for decision retries.
pub(crate) struct SystemLadder<'a> {
    base: &'a LinearSystem,
    refined: Vec<LinearSystem>,
}

impl<'a> SystemLadder<'a> {
    pub fn new(base: &'a LinearSystem) -> Self {
        SystemLadder {
            base,
            refined: Vec::new(),
        }
    }

    fn level(&mut self, k: usize) -> Result<&LinearSystem> {
        if k == 0 {
            return Ok(self.base);
        }
        while self.refined.len() < k {
            let next_ctx = self
                .refined
                .last()
                .map(|s| *s.ctx())
                .unwrap_or(*self.base.ctx())
                .doubled();
            self.refined.push(self.base.refine(&next_ctx)?);
        }
        Ok(&self.refined[k - 1])
    }

    /// Evaluate `M(y)`, refining until the interval certifies a nonzero
    /// value, and failing with `DegenerateForm` when it cannot.
    pub fn eval_m_nonzero(&mut self, y: &[i64]) -> Result<CertifiedReal> {
        for k in 0..=MAX_RETRIES as usize {
            let v = self.level(k)?.eval_m(y)?;
            if v.is_certified_zero() {
                return Err(Error::DegenerateForm { y: y.to_vec() });
            }
            if !v.contains_zero() {
                return Ok(v);
            }
        }
        Err(Error::DegenerateForm { y: y.to_vec() })
    }

    /// Certified strict `M(ya) < M(yb)` with refinement retries. Intervals
    /// that stay bitwise identical through every refinement come from the
    /// same value (evaluation is deterministic) and resolve as `false`: a
    /// tie is not a new record.
    pub fn less_than(
        &mut self,
        ya: &[i64],
        va: &CertifiedReal,
        yb: &[i64],
        vb: &CertifiedReal,
    ) -> Result<bool> {
        let s = va.scale().max(vb.scale());
        let (a0, b0) = (va.rescale(s), vb.rescale(s));
        match a0.certified_less_than(&b0) {
            Ok(ans) => return Ok(ans),
            Err(Error::Indeterminate) => {}
            Err(e) => return Err(e),
        }
        let mut identical = a0 == b0;
        for k in 1..=MAX_RETRIES as usize {
            let sys = self.level(k)?;
            let a = sys.eval_m(ya)?;
            let b = sys.eval_m(yb)?;
            match a.certified_less_than(&b) {
                Ok(ans) => return Ok(ans),
                Err(Error::Indeterminate) => identical = identical && a == b,
                Err(e) => return Err(e),
            }
        }
        if identical {
            return Ok(false);
        }
        Err(Error::PrecisionExhausted {
            retries: MAX_RETRIES,
        })
    }
}

struct Candidate {
    y: Vec<i64>,
    value: CertifiedReal,
    fast_hi: i128,
}

impl Candidate {
    fn new(y: Vec<i64>, value: CertifiedReal) -> Candidate {
        let fast_hi = value
            .to_fixed_i128(FAST_BITS)
            .map(|(_, hi)| hi)
            .unwrap_or(i128::MAX);
        Candidate { y, value, fast_hi }
    }
}

/// Scan every canonical nonzero vector with `|y| <= y_max` by shells,
/// certifying each record against the full enclosing ball.
pub fn build_sequence_exhaustive(
    sys: &LinearSystem,
    y_max: u64,
    budget: u64,
) -> Result<BestApproxSequence> {
    if sys.n() > 3 {
        return Err(Error::InvalidInput(
            "exhaustive engine supports n <= 3".into(),
        ));
    }
    if y_max < 1 {
        return Err(Error::InvalidInput("y_max must be >= 1".into()));
    }
    let mut ladder = SystemLadder::new(sys);
    let fast = fastform::m_side(sys).filter(|f| f.max_coord() as u64 >= y_max);
    let mut items: Vec<BestApproxItem> = Vec::new();
    let mut best: Option<Candidate> = None;
    let mut evals: u64 = 0;

    for norm in 1..=y_max as i64 {
        let mut shell_best: Option<Candidate> = None;
        let flow = for_each_canonical_shell(sys.n(), norm, |y| {
            evals += 1;
            if evals > budget {
                return ControlFlow::Break(Err(Error::BudgetExceeded {
                    spent: evals,
                    partial: None,
                }));
            }
            // Threshold this candidate has to beat strictly.
            let threshold_fast = shell_best
                .as_ref()
                .or(best.as_ref())
                .map(|c| c.fast_hi)
                .unwrap_or(i128::MAX);
            if let Some(f) = &fast {
                let (flo, _) = f.eval(y);
                if flo >= threshold_fast {
                    return ControlFlow::Continue(());
                }
            }
            let value = match ladder.eval_m_nonzero(y) {
                Ok(v) => v,
                Err(e) => return ControlFlow::Break(Err(e)),
            };
            let beats = {
                let threshold = shell_best.as_ref().or(best.as_ref());
                match threshold {
                    None => Ok(true),
                    Some(t) => ladder.less_than(y, &value, &t.y, &t.value),
                }
            };
            match beats {
                Ok(true) => {
                    shell_best = Some(Candidate::new(y.to_vec(), value));
                    ControlFlow::Continue(())
                }
                Ok(false) => ControlFlow::Continue(()),
                Err(e) => ControlFlow::Break(Err(e)),
            }
        });
        if let ControlFlow::Break(res) = flow {
            match res {
                Err(Error::BudgetExceeded { spent, .. }) => {
                    let partial = BestApproxSequence {
                        items,
                        n: sys.n(),
                        m: sys.m(),
                        y_max: norm as u64 - 1,
                        exhaustive_up_to: norm as u64 - 1,
                        evaluations: spent,
                        system_record: sys.to_text_record(),
                    };
                    return Err(Error::BudgetExceeded {
                        spent,
                        partial: Some(Box::new(partial)),
                    });
                }
                Err(e) => return Err(e),
                Ok(()) => unreachable!(),
            }
        }
        if let Some(c) = shell_best {
            items.push(BestApproxItem {
                y: c.y.clone(),
                norm: norm as u64,
                value: c.value.clone(),
                engine: Engine::Exhaustive,
            });
            best = Some(c);
        }
    }

    let seq = BestApproxSequence {
        items,
        n: sys.n(),
        m: sys.m(),
        y_max,
        exhaustive_up_to: y_max,
        evaluations: evals,
        system_record: sys.to_text_record(),
    };
    seq.verify_invariants()?;
    Ok(seq)
}

#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub y_max: u64,
    pub exhaustive_up_to: u64,
    pub ladder_ratio: f64,
    pub budget: u64,
}

impl BuildConfig {
    pub fn guided(y_max: u64, exhaustive_up_to: u64) -> Self {
        BuildConfig {
            y_max,
            exhaustive_up_to: exhaustive_up_to.min(y_max),
            ladder_ratio: 2.0,
            budget: DEFAULT_BUDGET,
        }
    }

    /// Default exhaustive bound by dimension, sized so the full scan stays
    /// within a couple of seconds.
    pub fn default_exhaustive_bound(n: usize) -> u64 {
        match n {
            1 => 1_000_000,
            2 => 10_000,
            _ => 300,
        }
    }
}

/// Exhaustive prefix up to `exhaustive_up_to`, then lattice-guided record
/// candidates on a geometric ladder of scales up to `y_max`.
pub fn build_sequence_guided(sys: &LinearSystem, cfg: &BuildConfig) -> Result<BestApproxSequence> {
    let e = cfg.exhaustive_up_to.min(cfg.y_max).max(1);
    let mut seq = build_sequence_exhaustive(sys, e, cfg.budget)?;
    seq.y_max = cfg.y_max;
    seq.exhaustive_up_to = e;
    if cfg.y_max <= e {
        return Ok(seq);
    }
    if cfg.ladder_ratio <= 1.0 {
        return Err(Error::InvalidInput("ladder_ratio must exceed 1".into()));
    }
    let mut ladder = SystemLadder::new(sys);
    let mut window_lo = e;
    while window_lo < cfg.y_max {
        let next = ((window_lo as f64) * cfg.ladder_ratio).ceil() as u64;
        let window_hi = next.max(window_lo + 1).min(cfg.y_max);
        let last = match seq.items.last() {
            Some(it) => it,
            None => break,
        };
        // Any new record must beat the last one; its certified upper bound
        // is a complete search radius for the window.
        let delta = last.value.hi_rational();
        if delta <= BigRational::zero() {
            break;
        }
        let cands = crate::lattice::form_box_candidates(
            sys,
            crate::lattice::FormSide::Columns,
            window_hi,
            &delta,
            None,
        )?;
        let mut scored: Vec<(u64, Vec<i64>)> = Vec::new();
        for mut y in cands {
            if y.iter().all(|c| *c == 0) {
                continue;
            }
            crate::enumerate::canonicalize(&mut y);
            let norm = sup_norm(&y) as u64;
            if norm <= window_lo || norm > window_hi {
                continue;
            }
            scored.push((norm, y));
        }
        scored.sort();
        scored.dedup();
        for (norm, y) in scored {
            let value = ladder.eval_m_nonzero(&y)?;
            let last = seq.items.last().expect("nonempty");
            if norm <= last.norm {
                continue;
            }
            if ladder.less_than(&y, &value, &last.y, &last.value)? {
                seq.items.push(BestApproxItem {
                    y,
                    norm,
                    value,
                    engine: Engine::ReductionGuided,
                });
            }
        }
        window_lo = window_hi;
    }
    seq.verify_invariants()?;
    Ok(seq)
}

/// Outcome of one validator pass.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub name: &'static str,
    pub applicable: usize,
    pub violations: Vec<usize>,
    /// Smallest slack seen, in log-ratio units (negative means violated).
    pub min_margin: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Geometric-growth step check: `Y_{i+3^{m+n}} >= 2 Y_{i+1}` for every
/// applicable index.
pub fn validate_lemma1(seq: &BestApproxSequence, n: usize, m: usize) -> ValidationReport {
    let step = 3usize.saturating_pow((m + n) as u32);
    let len = seq.items.len();
    let mut violations = Vec::new();
    let mut applicable = 0;
    let mut min_margin = f64::INFINITY;
    if len >= step + 1 {
        for i in 1..=(len - step) {
            applicable += 1;
            let lhs = seq.items[i + step - 1].norm;
            let rhs = 2 * seq.items[i].norm;
            let margin = lhs as f64 / rhs as f64 - 1.0;
            min_margin = min_margin.min(margin);
            if lhs < rhs {
                violations.push(i);
            }
        }
    }
    ValidationReport {
        name: "growth_step",
        applicable,
        violations,
        min_margin,
    }
}

/// Pigeonhole bound: `M_i <= Y_{i+1}^{-n/m}` for every item with a
/// successor, checked in exact rational arithmetic.
pub fn validate_dirichlet(seq: &BestApproxSequence, n: usize, m: usize) -> ValidationReport {
    let mut violations = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut applicable = 0;
    for i in 0..seq.items.len().saturating_sub(1) {
        applicable += 1;
        let m_hi = seq.items[i].value.hi_rational();
        let y_next = BigInt::from(seq.items[i + 1].norm);
        // M_i^m * Y_{i+1}^n <= 1
        let lhs = pow_rational(&m_hi, m as u32) * BigRational::from(y_next.pow(n as u32));
        let log_m = seq.items[i].value.log2_abs();
        let log_y = (seq.items[i + 1].norm as f64).log2();
        let margin = -log_m / log_y - n as f64 / m as f64;
        min_margin = min_margin.min(margin);
        if lhs > BigRational::one() {
            violations.push(i);
        }
    }
    ValidationReport {
        name: "dirichlet_bound",
        applicable,
        violations,
        min_margin,
    }
}

fn pow_rational(v: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= v;
    }
    acc
}

/// Distribution of last indices violating `||y_i . theta|| >= Y_i^{-delta}`
/// over sampled `theta`; the violations must die out at bounded indices for
/// almost every target.
#[derive(Debug, Clone)]
pub struct TailViolationReport {
    pub delta: f64,
    /// Per-sample last violating index (0-based into the sequence), if any.
    pub last_violation: Vec<Option<usize>>,
    /// Samples where some form value vanished exactly (measure-zero targets).
    pub degenerate_samples: Vec<usize>,
}

impl TailViolationReport {
    pub fn samples_clean_beyond(&self, index: usize) -> usize {
        self.last_violation
            .iter()
            .filter(|lv| match lv {
                None => true,
                Some(i) => *i <= index,
            })
            .count()
    }
}

/// Last index where `||y_i . theta|| < Y_i^{-delta}`, or `None`.
/// `theta` is exact rational; the comparison is done in logs with exact
/// fallback near the boundary.
pub fn last_tail_violation(
    seq: &BestApproxSequence,
    delta: f64,
    theta: &[BigRational],
) -> (Option<usize>, bool) {
    assert!(delta > 0.0);
    let mut last = None;
    let mut degenerate = false;
    for (idx, it) in seq.items.iter().enumerate() {
        let mut dot = BigRational::zero();
        for (c, t) in it.y.iter().zip(theta) {
            dot += BigRational::from(BigInt::from(*c)) * t;
        }
        let dist = rational_frac_dist(&dot);
        if dist.is_zero() {
            degenerate = true;
            last = Some(idx);
            continue;
        }
        let log_dist = crate::precision::big_log2_abs(dist.numer())
            - crate::precision::big_log2_abs(dist.denom());
        let bound = -delta * (it.norm as f64).log2();
        if log_dist < bound {
            last = Some(idx);
        }
    }
    (last, degenerate)
}

/// Exact distance of a rational to the nearest integer.
pub fn rational_frac_dist(v: &BigRational) -> BigRational {
    let rounded = v.round();
    (v - rounded).abs()
}

pub fn lemma2_statistical_check(
    seq: &BestApproxSequence,
    delta: f64,
    samples: usize,
    seed: u64,
) -> TailViolationReport {
    let mut stream = crate::rng::Stream::new(seed, 0x7e7a);
    let mut last_violation = Vec::with_capacity(samples);
    let mut degenerate_samples = Vec::new();
    for s in 0..samples {
        let theta: Vec<BigRational> = (0..seq.n)
            .map(|_| {
                BigRational::new(
                    BigInt::from(stream.next_u64() >> 1),
                    BigInt::one() << 63,
                )
            })
            .collect();
        let (last, degenerate) = last_tail_violation(seq, delta, &theta);
        if degenerate {
            degenerate_samples.push(s);
        }
        last_violation.push(last);
    }
    TailViolationReport {
        delta,
        last_violation,
        degenerate_samples,
    }
}

/// Serialize as a columnar table: `i, Y_i, y coordinates, M_i, engine`.
pub fn sequence_table(seq: &BestApproxSequence) -> crate::report::Table {
    let mut columns = vec!["i".to_string(), "Y".to_string()];
    for k in 0..seq.n {
        columns.push(format!("y{}", k + 1));
    }
    columns.push("M".to_string());
    columns.push("engine".to_string());
    let mut rows = Vec::with_capacity(seq.items.len());
    for (i, it) in seq.items.iter().enumerate() {
        let mut row = vec![(i + 1).to_string(), it.norm.to_string()];
        for c in &it.y {
            row.push(c.to_string());
        }
        row.push(it.value.to_report_string());
        row.push(it.engine.as_str().to_string());
        rows.push(row);
    }
    crate::report::Table {
        name: "best_approx".into(),
        columns,
        rows,
    }
}
