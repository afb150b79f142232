//! Flat key-value experiment manifests.
//!
//! Hand-editable, diff-able text: one `key = value` per line, `#` comments.
//! A manifest plus the seeded generators is everything needed to replay an
//! experiment bit for bit.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::numbers::{CfRule, CfSpec, NumberSpec};
use crate::precision::PrecisionContext;
use crate::system::{Orientation, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    BestApprox,
    HomExponents,
    InhomExponents,
    GenericTheorem,
    Transference,
    Adversarial,
    KhintchineAudit,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::BestApprox => "best_approx",
            ExperimentKind::HomExponents => "hom_exponents",
            ExperimentKind::InhomExponents => "inhom_exponents",
            ExperimentKind::GenericTheorem => "generic_theorem",
            ExperimentKind::Transference => "transference",
            ExperimentKind::Adversarial => "adversarial",
            ExperimentKind::KhintchineAudit => "khintchine_audit",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "best_approx" => ExperimentKind::BestApprox,
            "hom_exponents" => ExperimentKind::HomExponents,
            "inhom_exponents" => ExperimentKind::InhomExponents,
            "generic_theorem" => ExperimentKind::GenericTheorem,
            "transference" => ExperimentKind::Transference,
            "adversarial" => ExperimentKind::Adversarial,
            "khintchine_audit" => ExperimentKind::KhintchineAudit,
            other => {
                return Err(Error::InvalidManifest(format!(
                    "unknown experiment kind '{other}'"
                )))
            }
        })
    }

    pub fn all() -> [ExperimentKind; 7] {
        [
            ExperimentKind::BestApprox,
            ExperimentKind::HomExponents,
            ExperimentKind::InhomExponents,
            ExperimentKind::GenericTheorem,
            ExperimentKind::Transference,
            ExperimentKind::Adversarial,
            ExperimentKind::KhintchineAudit,
        ]
    }
}

#[derive(Debug, Clone)]
pub struct Manifest {
    pub kind: ExperimentKind,
    /// All entries in file order, including `kind`.
    pub entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidManifest(format!("expected key = value at line {}", lineno + 1))
            })?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        let kind = ExperimentKind::parse(
            entries
                .iter()
                .find(|(k, _)| k == "kind")
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::InvalidManifest("missing 'kind'".into()))?,
        )?;
        let m = Manifest { kind, entries };
        m.validate()?;
        Ok(m)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<u64>().map(Some).map_err(|_| {
                Error::InvalidManifest(format!("'{key}' must be a nonnegative integer, got '{v}'"))
            }),
        }
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<f64>().map(Some).map_err(|_| {
                Error::InvalidManifest(format!("'{key}' must be a real number, got '{v}'"))
            }),
        }
    }

    pub fn get_bool(&self, key: &str) -> Result<bool> {
        match self.get(key) {
            None => Ok(false),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(v) => Err(Error::InvalidManifest(format!(
                "'{key}' must be true/false, got '{v}'"
            ))),
        }
    }

    pub fn require_u64(&self, key: &str) -> Result<u64> {
        self.get_u64(key)?
            .ok_or_else(|| Error::InvalidManifest(format!("missing required key '{key}'")))
    }

    pub fn validate(&self) -> Result<()> {
        for key in ["bounds.y_max", "bounds.x_max", "bounds.x_bound", "bounds.y"] {
            if let Some(v) = self.get_u64(key)? {
                if v == 0 {
                    return Err(Error::InvalidManifest(format!("'{key}' must be positive")));
                }
            }
        }
        let samples = self.get_u64("samples")?.unwrap_or(0);
        if samples > 0 && self.get("seed").is_none() {
            return Err(Error::InvalidManifest(
                "'seed' is required when samples > 0".into(),
            ));
        }
        self.system_spec()?;
        Ok(())
    }

    /// Seed defaults to 0 for unseeded experiments.
    pub fn seed(&self) -> Result<u64> {
        Ok(self.get_u64("seed")?.unwrap_or(0))
    }

    pub fn budget(&self) -> Result<u64> {
        // Environment override, echoed into reports by the runner.
        if let Ok(v) = std::env::var("DIOLAB_BUDGET") {
            return v.parse::<u64>().map_err(|_| {
                Error::InvalidManifest("DIOLAB_BUDGET must be an integer".into())
            });
        }
        Ok(self
            .get_u64("budget")?
            .unwrap_or(crate::bestapprox::DEFAULT_BUDGET))
    }

    pub fn precision(&self) -> Result<PrecisionContext> {
        if let Ok(v) = std::env::var("DIOLAB_MANTISSA_BITS") {
            let bits = v.parse::<u32>().map_err(|_| {
                Error::InvalidManifest("DIOLAB_MANTISSA_BITS must be an integer".into())
            })?;
            return PrecisionContext::with_mantissa(bits);
        }
        if let Some(bits) = self.get_u64("precision.mantissa_bits")? {
            return PrecisionContext::with_mantissa(bits as u32);
        }
        let bound = self
            .get_u64("bounds.y_max")?
            .or(self.get_u64("bounds.x_max")?)
            .unwrap_or(1_000_000);
        Ok(PrecisionContext::for_enumeration_bound(bound))
    }

    pub fn system_spec(&self) -> Result<SystemSpec> {
        let text = self
            .get("system")
            .ok_or_else(|| Error::InvalidManifest("missing 'system'".into()))?;
        parse_system(text)
    }

    /// A ready-to-edit manifest for the given experiment kind.
    pub fn template(kind: ExperimentKind) -> Manifest {
        let mut entries: Vec<(String, String)> =
            vec![("kind".into(), kind.as_str().to_string())];
        let mut push = |k: &str, v: &str| entries.push((k.to_string(), v.to_string()));
        match kind {
            ExperimentKind::BestApprox | ExperimentKind::HomExponents => {
                push("system", "scalar(golden)");
                push("engine", "guided");
                push("bounds.y_max", "1000000");
                push("bounds.exhaustive_up_to", "10000");
            }
            ExperimentKind::InhomExponents => {
                push("system", "scalar(sqrt2)");
                push("theta", "random");
                push("samples", "5");
                push("seed", "42");
                push("bounds.x_max", "100000");
                push("bounds.y_max", "1000000");
            }
            ExperimentKind::GenericTheorem => {
                push("system", "powers(fib(1,2),2,row)");
                push("samples", "20");
                push("seed", "42");
                push("bounds.x_max", "100000");
                push("bounds.y_max", "1000000");
            }
            ExperimentKind::Transference => {
                push("system", "scalar(sqrt2)");
                push("samples", "10");
                push("seed", "42");
                push("bounds.y", "30");
            }
            ExperimentKind::Adversarial => {
                push("system", "scalar(golden)");
                push("bounds.y_max", "10000000");
                push("bounds.x_bound", "10000");
            }
            ExperimentKind::KhintchineAudit => {
                push("system", "powers(fib(1,2),2,row)");
                push("bounds.y_max", "1000000");
                push("tol", "0.1");
            }
        }
        Manifest {
            kind,
            entries,
        }
    }
}

/// `name(args)` splitter: returns (name, inside-parens) or (name, "").
fn call_parts(s: &str) -> (&str, &str) {
    match s.find('(') {
        Some(i) if s.ends_with(')') => (&s[..i], &s[i + 1..s.len() - 1]),
        _ => (s, ""),
    }
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidManifest(format!("bad integer list item '{p}'")))
        })
        .collect()
}

/// Continued-fraction number grammar:
/// `golden | sqrt2 | fib(a,b) | periodic(a,...) | explicit(a,...) |
/// sturmian(a,b;d,...)`.
pub fn parse_cf(text: &str) -> Result<CfSpec> {
    let (name, args) = call_parts(text.trim());
    match name {
        "golden" => Ok(CfSpec::golden_conjugate()),
        "sqrt2" => Ok(CfSpec::sqrt2_fractional()),
        "fib" => {
            let v = parse_u64_list(args)?;
            if v.len() != 2 || v[0] == v[1] || v.iter().any(|q| *q == 0) {
                return Err(Error::InvalidManifest(
                    "fib(a,b) needs two distinct positive quotients".into(),
                ));
            }
            Ok(CfSpec::fibonacci(v[0], v[1]))
        }
        "periodic" => {
            let v = parse_u64_list(args)?;
            if v.is_empty() || v.iter().any(|q| *q == 0) {
                return Err(Error::InvalidManifest(
                    "periodic(...) needs positive quotients".into(),
                ));
            }
            Ok(CfSpec::new(CfRule::Periodic(v), 512))
        }
        "explicit" => {
            let v = parse_u64_list(args)?;
            if v.is_empty() || v.iter().any(|q| *q == 0) {
                return Err(Error::InvalidManifest(
                    "explicit(...) needs positive quotients".into(),
                ));
            }
            let len = v.len() as u32;
            Ok(CfSpec::new(CfRule::Explicit(v), len))
        }
        "sturmian" => {
            let (ab, angle) = args.split_once(';').ok_or_else(|| {
                Error::InvalidManifest("sturmian(a,b;angle quotients) syntax".into())
            })?;
            let ab = parse_u64_list(ab)?;
            let angle = parse_u64_list(angle)?;
            if ab.len() != 2 || ab[0] == ab[1] || angle.is_empty() {
                return Err(Error::InvalidManifest("bad sturmian spec".into()));
            }
            Ok(CfSpec::new(
                CfRule::Sturmian {
                    a: ab[0],
                    b: ab[1],
                    angle,
                },
                512,
            ))
        }
        other => Err(Error::InvalidManifest(format!(
            "unknown continued fraction '{other}'"
        ))),
    }
}

/// Number grammar: a continued fraction, or
/// `rational(p,q) | liouville(base,terms) | golden_ratio | sqrt2_full`.
pub fn parse_number(text: &str) -> Result<NumberSpec> {
    let (name, args) = call_parts(text.trim());
    match name {
        // Full values (integer part included).
        "golden" => Ok(NumberSpec::golden()),
        "sqrt2" => Ok(NumberSpec::sqrt2()),
        "rational" => {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::InvalidManifest("rational(p,q) syntax".into()));
            }
            let num = parts[0].parse::<i64>().map_err(|_| {
                Error::InvalidManifest(format!("bad rational numerator '{}'", parts[0]))
            })?;
            let den = parts[1].parse::<i64>().map_err(|_| {
                Error::InvalidManifest(format!("bad rational denominator '{}'", parts[1]))
            })?;
            if den == 0 {
                return Err(Error::InvalidManifest("rational with zero denominator".into()));
            }
            Ok(NumberSpec::Rational { num, den })
        }
        "liouville" => {
            let v = parse_u64_list(args)?;
            if v.len() != 2 || v[0] < 2 || v[1] < 1 {
                return Err(Error::InvalidManifest(
                    "liouville(base >= 2, terms >= 1) syntax".into(),
                ));
            }
            Ok(NumberSpec::Liouville {
                base: v[0] as u32,
                terms: v[1] as u32,
            })
        }
        _ => Ok(NumberSpec::Cf(parse_cf(text)?)),
    }
}

/// System grammar:
/// `scalar(<number>) | powers(<cf>,deg,row|column) | random(n,m)`.
pub fn parse_system(text: &str) -> Result<SystemSpec> {
    let text = text.trim();
    let (name, args) = call_parts(text);
    match name {
        "scalar" => Ok(SystemSpec::scalar(parse_number(args)?, args)),
        "powers" => {
            // split from the right: deg and orientation
            let parts: Vec<&str> = args.rsplitn(3, ',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::InvalidManifest(
                    "powers(<cf>,deg,row|column) syntax".into(),
                ));
            }
            let orient = match parts[0] {
                "row" => Orientation::Row,
                "column" | "col" => Orientation::Column,
                other => {
                    return Err(Error::InvalidManifest(format!(
                        "orientation must be row or column, got '{other}'"
                    )))
                }
            };
            let deg = parts[1].parse::<u32>().map_err(|_| {
                Error::InvalidManifest(format!("bad degree '{}'", parts[1]))
            })?;
            if deg == 0 || deg > 4 {
                return Err(Error::InvalidManifest("degree must be in 1..=4".into()));
            }
            let xi = parse_cf(parts[2])?;
            Ok(SystemSpec::powers(xi, deg, orient))
        }
        "random" => {
            let v = parse_u64_list(args)?;
            if v.len() != 3 {
                return Err(Error::InvalidManifest("random(seed,n,m) syntax".into()));
            }
            let (n, m) = (v[1] as usize, v[2] as usize);
            if !(1..=4).contains(&n) || !(1..=4).contains(&m) {
                return Err(Error::InvalidManifest(
                    "random dimensions must be in 1..=4".into(),
                ));
            }
            Ok(SystemSpec::random(v[0], n, m))
        }
        other => Err(Error::InvalidManifest(format!(
            "unknown system generator '{other}'"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_round_trips() {
        for kind in ExperimentKind::all() {
            let t = Manifest::template(kind);
            let text = t.render();
            let back = Manifest::parse(&text).unwrap();
            assert_eq!(back.kind, kind);
            assert_eq!(back.entries, t.entries);
        }
    }

    #[test]
    fn zero_bound_rejected() {
        let text = "kind = best_approx\nsystem = scalar(sqrt2)\nbounds.y_max = 0\n";
        assert!(matches!(
            Manifest::parse(text),
            Err(Error::InvalidManifest(_))
        ));
    }

    #[test]
    fn samples_require_seed() {
        let text = "kind = generic_theorem\nsystem = scalar(sqrt2)\nsamples = 5\n";
        assert!(matches!(
            Manifest::parse(text),
            Err(Error::InvalidManifest(_))
        ));
    }

    #[test]
    fn system_grammar() {
        let s = parse_system("scalar(golden)").unwrap();
        assert_eq!((s.n, s.m), (1, 1));
        let s = parse_system("powers(fib(1,2),2,column)").unwrap();
        assert_eq!((s.n, s.m), (2, 1));
        let s = parse_system("powers(periodic(2),3,row)").unwrap();
        assert_eq!((s.n, s.m), (1, 3));
        let s = parse_system("random(7,2,3)").unwrap();
        assert_eq!((s.n, s.m), (2, 3));
        assert!(parse_system("powers(fib(1,1),2,row)").is_err());
        assert!(parse_system("frobnicate(1)").is_err());
    }

    #[test]
    fn number_grammar() {
        assert!(matches!(
            parse_number("rational(1,3)").unwrap(),
            NumberSpec::Rational { num: 1, den: 3 }
        ));
        assert!(matches!(
            parse_number("liouville(10,3)").unwrap(),
            NumberSpec::Liouville { base: 10, terms: 3 }
        ));
        assert!(parse_number("rational(1,0)").is_err());
        // sturmian with golden angle equals the fibonacci rule's quotients
        let st = parse_cf("sturmian(1,2;1)").unwrap();
        let fib = parse_cf("fib(1,2)").unwrap();
        assert_eq!(st.quotients(50), fib.quotients(50));
    }
}
