//! Systems of linear forms and the duality bound tying both orientations.
//!
//! A system is an `n x m` real matrix `A`. Its rows give the forms
//! `L_i(x) = sum_j a_ij x_j` evaluated on integer `m`-tuples (the
//! inhomogeneous side), its columns give `M_j(y) = sum_i a_ij y_i` whose
//! sup-distance to the integers `M(y) = ||tA y||` drives the best
//! approximation sequence.

use std::fmt::Write as _;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::One;

use crate::enumerate::for_each_canonical_ball;
use crate::error::{Error, Result};
use crate::numbers::NumberSpec;
use crate::precision::{CertifiedReal, PrecisionContext};

/// Re-realizable description of a system: dimensions plus one number spec
/// per entry, row-major. This is the provenance record embedded in reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    pub n: usize,
    pub m: usize,
    pub entries: Vec<NumberSpec>,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Row,
    Column,
}

impl SystemSpec {
    pub fn new(n: usize, m: usize, entries: Vec<NumberSpec>, label: impl Into<String>) -> Self {
        assert_eq!(entries.len(), n * m, "entry count must match dimensions");
        assert!(n >= 1 && m >= 1);
        SystemSpec {
            n,
            m,
            entries,
            label: label.into(),
        }
    }

    /// `1 x 1` system `(xi)`.
    pub fn scalar(xi: NumberSpec, label: impl Into<String>) -> Self {
        SystemSpec::new(1, 1, vec![xi], label)
    }

    /// Successive powers `xi, xi^2, ..., xi^deg` as a row (`1 x deg`) or a
    /// column (`deg x 1`) system.
    pub fn powers(xi: crate::numbers::CfSpec, deg: u32, orientation: Orientation) -> Self {
        assert!(deg >= 1);
        let entries: Vec<NumberSpec> = (1..=deg)
            .map(|k| NumberSpec::Power {
                xi: xi.clone(),
                k,
            })
            .collect();
        let label = format!(
            "powers(deg={deg},{})",
            match orientation {
                Orientation::Row => "row",
                Orientation::Column => "column",
            }
        );
        match orientation {
            Orientation::Row => SystemSpec::new(1, deg as usize, entries, label),
            Orientation::Column => SystemSpec::new(deg as usize, 1, entries, label),
        }
    }

    /// Entries i.i.d. uniform on `[0,1)`, derived from the seed and the
    /// entry position; identical seeds give bit-identical systems.
    pub fn random(seed: u64, n: usize, m: usize) -> Self {
        let entries = (0..n * m)
            .map(|idx| NumberSpec::UniformBits {
                seed,
                stream: idx as u64,
            })
            .collect();
        SystemSpec::new(n, m, entries, format!("random(seed={seed})"))
    }

    pub fn transpose(&self) -> SystemSpec {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.m {
            for i in 0..self.n {
                entries.push(self.entries[i * self.m + j].clone());
            }
        }
        SystemSpec::new(self.m, self.n, entries, format!("transpose({})", self.label))
    }

    pub fn realize(&self, ctx: &PrecisionContext) -> Result<LinearSystem> {
        let entries: Result<Vec<CertifiedReal>> = self
            .entries
            .iter()
            .map(|spec| spec.realize(ctx))
            .collect();
        let entries = entries?;
        for e in &entries {
            let tol = ctx.radius_tolerance(e);
            if e.radius() > &tol {
                return Err(Error::PrecisionOverflow(format!(
                    "entry radius exceeds context tolerance in {}",
                    self.label
                )));
            }
        }
        Ok(LinearSystem {
            spec: self.clone(),
            ctx: *ctx,
            entries,
        })
    }
}

/// A realized system: certified entries at one precision, plus the spec that
/// produced them (so decisions can re-realize at higher precision).
#[derive(Debug, Clone)]
pub struct LinearSystem {
    spec: SystemSpec,
    ctx: PrecisionContext,
    entries: Vec<CertifiedReal>,
}

impl LinearSystem {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn entry(&self, i: usize, j: usize) -> &CertifiedReal {
        &self.entries[i * self.spec.m + j]
    }

    pub fn transpose(&self) -> Result<LinearSystem> {
        self.spec.transpose().realize(&self.ctx)
    }

    /// Re-realize the same spec at another precision.
    pub fn refine(&self, ctx: &PrecisionContext) -> Result<LinearSystem> {
        self.spec.realize(ctx)
    }

    /// `M(y) = ||tA y||`: sup-distance of the column forms to the integers.
    /// `y` must have length `n`; the zero vector yields exact zero.
    pub fn eval_m(&self, y: &[i64]) -> Result<CertifiedReal> {
        assert_eq!(y.len(), self.spec.n);
        let scale = self.ctx.scale();
        if y.iter().all(|c| *c == 0) {
            return Ok(CertifiedReal::zero(scale));
        }
        let mut comps = Vec::with_capacity(self.spec.m);
        for j in 0..self.spec.m {
            let mut acc = CertifiedReal::zero(scale);
            for (i, &yi) in y.iter().enumerate() {
                if yi != 0 {
                    acc = acc.add(&self.entry(i, j).mul_i64(yi));
                }
            }
            comps.push(acc);
        }
        CertifiedReal::vec_frac_dist(&comps)
    }

    /// `||A x + theta||`: sup-distance of the shifted row forms to the
    /// integers. `x` has length `m`, `theta` length `n` (at this scale).
    pub fn eval_l_inhom(&self, x: &[i64], theta: &[CertifiedReal]) -> Result<CertifiedReal> {
        assert_eq!(x.len(), self.spec.m);
        assert_eq!(theta.len(), self.spec.n);
        let scale = self.ctx.scale();
        let mut comps = Vec::with_capacity(self.spec.n);
        for i in 0..self.spec.n {
            let mut acc = theta[i].rescale(scale);
            for (j, &xj) in x.iter().enumerate() {
                if xj != 0 {
                    acc = acc.add(&self.entry(i, j).mul_i64(xj));
                }
            }
            comps.push(acc);
        }
        CertifiedReal::vec_frac_dist(&comps)
    }

    /// Both sides of the duality bound
    /// `||y.theta|| <= n|y| ||Ax+theta|| + m|x| M(y)`.
    pub fn duality_check(
        &self,
        x: &[i64],
        y: &[i64],
        theta: &[CertifiedReal],
    ) -> Result<DualityWitness> {
        let scale = self.ctx.scale();
        let mut dot = CertifiedReal::zero(scale);
        for (i, &yi) in y.iter().enumerate() {
            if yi != 0 {
                dot = dot.add(&theta[i].rescale(scale).mul_i64(yi));
            }
        }
        let lhs = dot.frac_dist()?;
        let y_norm = crate::enumerate::sup_norm(y);
        let x_norm = crate::enumerate::sup_norm(x);
        let l_part = self
            .eval_l_inhom(x, theta)?
            .mul_i64(self.spec.n as i64 * y_norm);
        let m_part = self.eval_m(y)?.mul_i64(self.spec.m as i64 * x_norm);
        let rhs = l_part.add(&m_part);
        Ok(DualityWitness {
            x: x.to_vec(),
            y: y.to_vec(),
            lhs,
            rhs,
        })
    }

    /// Bounded search for an integer relation among the column forms.
    ///
    /// Scans nonzero `|y| <= height_bound` for `M(y)` certified below
    /// `2^{-mantissa_bits/2}`; rank `m+n` over the integers (which the rest
    /// of the construction assumes) means none should be found.
    pub fn degeneracy_probe(&self, height_bound: u64) -> Result<DegeneracyReport> {
        assert!(height_bound >= 1);
        let threshold_num = BigInt::one();
        let threshold_den = BigInt::one() << (self.ctx.mantissa_bits() / 2);
        let mut found: Option<(Vec<i64>, CertifiedReal)> = None;
        let flow = for_each_canonical_ball(self.spec.n, height_bound as i64, |_, y| {
            match self.eval_m(y) {
                Ok(value) => {
                    let below = value
                        .certified_le_rational(&threshold_num, &threshold_den)
                        .unwrap_or(true);
                    if below {
                        found = Some((y.to_vec(), value));
                        return ControlFlow::Break(Ok(()));
                    }
                    ControlFlow::Continue(())
                }
                Err(e) => ControlFlow::Break(Err(e)),
            }
        });
        if let ControlFlow::Break(res) = flow {
            res?;
        }
        Ok(DegeneracyReport {
            height_bound,
            relation: found,
        })
    }

    /// Text record with dimensions, certified entry digits, and provenance.
    pub fn to_text_record(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "system n={} m={} label={} mantissa_bits={}",
            self.spec.n,
            self.spec.m,
            self.spec.label,
            self.ctx.mantissa_bits()
        );
        for i in 0..self.spec.n {
            for j in 0..self.spec.m {
                let _ = writeln!(out, "entry[{i}][{j}] = {}", self.entry(i, j).to_report_string());
            }
        }
        out
    }
}

/// Certified evaluation of the two sides of the duality bound.
#[derive(Debug, Clone)]
pub struct DualityWitness {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub lhs: CertifiedReal,
    pub rhs: CertifiedReal,
}

impl DualityWitness {
    /// The bound must hold up to the combined interval radii.
    pub fn holds(&self) -> bool {
        self.lhs.lo() <= self.rhs.hi()
    }
}

#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    pub height_bound: u64,
    /// The found relation and its certified form value, if any.
    pub relation: Option<(Vec<i64>, CertifiedReal)>,
}

impl DegeneracyReport {
    pub fn is_clean(&self) -> bool {
        self.relation.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{CfRule, CfSpec};

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_mantissa(128).unwrap()
    }

    fn sqrt2_system() -> LinearSystem {
        SystemSpec::scalar(NumberSpec::sqrt2(), "sqrt2")
            .realize(&ctx())
            .unwrap()
    }

    #[test]
    fn eval_m_sqrt2_times_five() {
        // 5*sqrt2 = 7.0710678...; distance 0.0710678
        let sys = sqrt2_system();
        let v = sys.eval_m(&[5]).unwrap();
        assert!((v.to_f64() - 0.0710678).abs() < 1e-6);
    }

    #[test]
    fn eval_m_zero_vector() {
        let sys = sqrt2_system();
        assert!(sys.eval_m(&[0]).unwrap().is_certified_zero());
    }

    #[test]
    fn eval_m_matches_componentwise_frac_dist() {
        // Column system (xi, xi^2): M((1)) = max(||xi||, ||xi^2||).
        let xi = CfSpec::fibonacci(1, 2);
        let spec = SystemSpec::powers(xi.clone(), 2, Orientation::Column);
        let sys = spec.realize(&ctx()).unwrap();
        let direct = sys.eval_m(&[1, 0]).unwrap();
        let e = sys.entry(0, 0).frac_dist().unwrap();
        assert!((direct.to_f64() - e.to_f64()).abs() < 1e-20);
    }

    #[test]
    fn eval_l_inhom_examples() {
        let sys = sqrt2_system();
        let scale = sys.ctx().scale();
        let zero = CertifiedReal::zero(scale);
        // x = 0, theta = 0 -> 0
        assert!(sys.eval_l_inhom(&[0], &[zero.clone()]).unwrap().is_certified_zero());
        // x = 0, theta -> ||theta||
        let theta = CertifiedReal::from_rational(&BigInt::from(3), &BigInt::from(10), scale).unwrap();
        let d = sys.eval_l_inhom(&[0], &[theta.clone()]).unwrap();
        assert!((d.to_f64() - 0.3).abs() < 1e-20);
        // x = 5, theta = 0.05 -> ||7.1210678|| = 0.1210678
        let theta = CertifiedReal::from_rational(&BigInt::from(1), &BigInt::from(20), scale).unwrap();
        let d = sys.eval_l_inhom(&[5], &[theta]).unwrap();
        assert!((d.to_f64() - 0.1210678).abs() < 1e-6);
    }

    #[test]
    fn duality_witness_worked_example() {
        let sys = sqrt2_system();
        let scale = sys.ctx().scale();
        let theta =
            vec![CertifiedReal::from_rational(&BigInt::from(1), &BigInt::from(20), scale).unwrap()];
        let w = sys.duality_check(&[5], &[3], &theta).unwrap();
        // lhs = ||3 * 0.05|| = 0.15
        assert!((w.lhs.to_f64() - 0.15).abs() < 1e-12);
        assert!(w.holds());
        // rhs = 1*3*||5 sqrt2 + 0.05|| + 1*5*||3 sqrt2||
        let expect = 3.0 * 0.1210678 + 5.0 * 0.2426407;
        assert!((w.rhs.to_f64() - expect).abs() < 1e-5);
    }

    #[test]
    fn duality_zero_case() {
        let sys = sqrt2_system();
        let scale = sys.ctx().scale();
        let theta =
            vec![CertifiedReal::from_rational(&BigInt::from(7), &BigInt::from(13), scale).unwrap()];
        let w = sys.duality_check(&[0], &[0], &theta).unwrap();
        assert!(w.lhs.is_certified_zero());
        assert!(w.rhs.is_certified_zero());
        assert!(w.holds());
    }

    #[test]
    fn degeneracy_finds_rational_relation() {
        let spec = SystemSpec::scalar(NumberSpec::Rational { num: 1, den: 2 }, "half");
        let sys = spec.realize(&ctx()).unwrap();
        let rep = sys.degeneracy_probe(2).unwrap();
        let (y, v) = rep.relation.expect("relation must be found");
        assert_eq!(y, vec![2]);
        assert!(v.is_certified_zero());
    }

    #[test]
    fn degeneracy_clean_for_sqrt2() {
        let sys = sqrt2_system();
        assert!(sys.degeneracy_probe(100).unwrap().is_clean());
    }

    #[test]
    fn degeneracy_constructed_dependence() {
        // Column (xi, 2 xi + 3): y = (2, -1) gives ||2 xi - 2 xi - 3|| = 0.
        let xi = CfSpec::sqrt2_fractional();
        let spec = SystemSpec::new(
            2,
            1,
            vec![
                NumberSpec::Cf(xi.clone()),
                NumberSpec::Affine {
                    base: (3, 1),
                    mul: (2, 1),
                    xi,
                },
            ],
            "dependent",
        );
        let sys = spec.realize(&ctx()).unwrap();
        let rep = sys.degeneracy_probe(10).unwrap();
        let (y, _) = rep.relation.expect("constructed relation");
        assert_eq!(y, vec![2, -1]);
    }

    #[test]
    fn transpose_involution() {
        let spec = SystemSpec::powers(CfSpec::fibonacci(1, 2), 3, Orientation::Row);
        let sys = spec.realize(&ctx()).unwrap();
        let back = sys.transpose().unwrap().transpose().unwrap();
        assert_eq!(sys.n(), back.n());
        assert_eq!(sys.m(), back.m());
        for i in 0..sys.n() {
            for j in 0..sys.m() {
                assert_eq!(sys.entry(i, j), back.entry(i, j));
            }
        }
    }

    #[test]
    fn forms_columns_duality_exact() {
        // M of the system equals ||A'x|| of the transpose with swapped roles.
        let spec = SystemSpec::powers(CfSpec::fibonacci(1, 2), 2, Orientation::Column);
        let sys = spec.realize(&ctx()).unwrap();
        let t = sys.transpose().unwrap();
        let scale = sys.ctx().scale();
        let zeros: Vec<CertifiedReal> = (0..t.n()).map(|_| CertifiedReal::zero(scale)).collect();
        for y in [[1i64, 0], [0, 1], [3, -2], [5, 8]] {
            let a = sys.eval_m(&y).unwrap();
            let b = t.eval_l_inhom(&y, &zeros).unwrap();
            assert_eq!(a.mantissa(), b.mantissa());
        }
    }

    #[test]
    fn random_system_contract() {
        let a = SystemSpec::random(7, 2, 3).realize(&ctx()).unwrap();
        let b = SystemSpec::random(7, 2, 3).realize(&ctx()).unwrap();
        let c = SystemSpec::random(8, 2, 3).realize(&ctx()).unwrap();
        assert_eq!(a.n(), 2);
        assert_eq!(a.m(), 3);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(a.entry(i, j), b.entry(i, j));
            }
        }
        assert!((0..2).any(|i| (0..3).any(|j| a.entry(i, j) != c.entry(i, j))));
    }
}
