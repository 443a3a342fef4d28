//! Sources of the real number `xi` and the precision context built on them.
//!
//! A source is anything that can enclose `xi` in arbitrarily (or boundedly)
//! small dyadic intervals. Sources are selected by the prefix of a textual
//! spec through [`XiRegistry`]; `dec:` and `alg:` are built in.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebraic::{bisect_root, low_degree_minimal_polynomial, parse_rational, DegreeBound, UniPoly};
use crate::error::{LabError, Result};
use crate::interval::Interval;

pub const DEFAULT_CEILING: u32 = 1 << 16;

/// Guard bits carried internally above the requested precision.
const GUARD: u32 = 8;

/// Whether `1, xi, xi^3` are known to be linearly independent over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    Proven,
    Assumed(String),
}

pub trait XiSource: Send + Sync + fmt::Debug {
    /// Registry prefix of this kind of source.
    fn kind(&self) -> &'static str;

    /// Canonical spec string; parsing it yields an equivalent source.
    fn spec(&self) -> String;

    /// Interval at `scale` fractional bits containing `xi`, of width at most `4 * 2^-scale`.
    /// Only called with `scale <= max_precision() + GUARD` when a cap exists.
    fn enclose(&self, scale: u32) -> Interval;

    /// Largest usable precision, for sources that carry finite information.
    fn max_precision(&self) -> Option<u32>;

    fn independence(&self) -> Independence;
}

/// `xi` known only through a truncated decimal expansion: `xi` lies between
/// the literal and the literal moved one unit of the last digit away from zero.
#[derive(Debug)]
pub struct DecimalXi {
    literal: String,
    lo: BigRational,
    hi: BigRational,
    cap: u32,
}

impl DecimalXi {
    pub fn parse(body: &str) -> Result<Self> {
        let invalid = |reason: &str| LabError::InvalidXi {
            spec: format!("dec:{body}"),
            reason: reason.into(),
        };
        let lit = body.trim();
        let digits_after = lit.split_once('.').map_or(0, |(_, f)| f.len());
        let value = parse_rational(lit).map_err(|_| invalid("not a decimal literal"))?;
        if lit.contains('/') {
            return Err(invalid("not a decimal literal"));
        }
        let ulp = BigRational::new(BigInt::one(), BigInt::from(10).pow(digits_after as u32));
        let (lo, hi) = if lit.starts_with('-') {
            (&value - &ulp, value.clone())
        } else {
            (value.clone(), &value + &ulp)
        };
        // 2^bits <= 10^k; the cap keeps the ulp within half the enclosure budget
        let tenk = BigInt::from(10).pow(digits_after as u32);
        let bits = tenk.bits().saturating_sub(1) as u32;
        let cap = bits.saturating_sub(GUARD - 1);
        if cap < 16 {
            return Err(invalid("too few digits after the decimal point"));
        }
        Ok(DecimalXi {
            literal: lit.to_string(),
            lo,
            hi,
            cap,
        })
    }
}

impl XiSource for DecimalXi {
    fn kind(&self) -> &'static str {
        "dec"
    }

    fn spec(&self) -> String {
        format!("dec:{}", self.literal)
    }

    fn enclose(&self, scale: u32) -> Interval {
        Interval::from_rational_bounds(&self.lo, &self.hi, scale)
    }

    fn max_precision(&self) -> Option<u32> {
        Some(self.cap)
    }

    fn independence(&self) -> Independence {
        Independence::Assumed(
            "decimal input: linear independence of 1, xi, xi^3 cannot be certified".into(),
        )
    }
}

/// Real root of an integer polynomial isolated by a rational interval.
#[derive(Debug)]
pub struct AlgebraicXi {
    poly: UniPoly,
    squarefree: UniPoly,
    a: BigRational,
    b: BigRational,
    independence: Independence,
    // tightest isolating interval found so far
    cache: Mutex<(BigRational, BigRational)>,
}

impl AlgebraicXi {
    pub fn parse(body: &str) -> Result<Self> {
        let spec = format!("alg:{body}");
        let invalid = |reason: String| LabError::InvalidXi {
            spec: spec.clone(),
            reason,
        };
        let (poly_s, range_s) = body
            .rsplit_once(" in ")
            .ok_or_else(|| invalid("expected `<polynomial> in [a,b]`".into()))?;
        let poly = UniPoly::parse(poly_s).map_err(|e| invalid(e.to_string()))?;
        let inner = range_s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| invalid("interval must be written [a,b]".into()))?;
        let (a_s, b_s) = inner
            .split_once(',')
            .ok_or_else(|| invalid("interval must be written [a,b]".into()))?;
        let a = parse_rational(a_s).map_err(|e| invalid(e.to_string()))?;
        let b = parse_rational(b_s).map_err(|e| invalid(e.to_string()))?;
        Self::new(poly, a, b).map_err(|e| match e {
            LabError::InvalidXi { reason, .. } => invalid(reason),
            other => other,
        })
    }

    pub fn new(poly: UniPoly, a: BigRational, b: BigRational) -> Result<Self> {
        let spec = format!("alg:{poly} in [{a},{b}]");
        let invalid = |reason: &str| LabError::InvalidXi {
            spec: spec.clone(),
            reason: reason.into(),
        };
        if (0..=poly.degree().unwrap_or(0)).any(|i| !poly.coeff(i).is_integer()) {
            return Err(invalid("polynomial coefficients must be integers"));
        }
        if poly.degree().unwrap_or(0) < 1 {
            return Err(invalid("polynomial must be nonconstant"));
        }
        if a >= b {
            return Err(invalid("empty interval"));
        }
        let squarefree = poly.squarefree_part();
        let roots = squarefree.count_roots_closed(&a, &b);
        if roots != 1 {
            return Err(invalid(&format!(
                "interval must contain exactly one real root, found {roots}"
            )));
        }
        for end in [&a, &b] {
            if squarefree.eval(end).is_zero() {
                return Err(LabError::LinearDependence(format!("xi = {end} is rational")));
            }
        }
        let independence = match low_degree_minimal_polynomial(&squarefree, &a, &b) {
            DegreeBound::Low(min) => {
                let deg = min.len() - 1;
                let mp = UniPoly::new(min.iter().map(|c| BigRational::from_integer(c.clone())).collect());
                if deg <= 2 {
                    return Err(LabError::LinearDependence(format!(
                        "minimal polynomial {mp} has degree {deg}"
                    )));
                }
                if min[2].is_zero() {
                    return Err(LabError::LinearDependence(format!(
                        "minimal polynomial {mp} has no x^2 term"
                    )));
                }
                Independence::Proven
            }
            DegreeBound::AtLeastFour => Independence::Proven,
            DegreeBound::Inconclusive => Independence::Assumed(
                "factor search too large: minimal polynomial degree not certified".into(),
            ),
        };
        Ok(AlgebraicXi {
            cache: Mutex::new((a.clone(), b.clone())),
            poly,
            squarefree,
            a,
            b,
            independence,
        })
    }

    pub fn polynomial(&self) -> &UniPoly {
        &self.poly
    }
}

impl XiSource for AlgebraicXi {
    fn kind(&self) -> &'static str {
        "alg"
    }

    fn spec(&self) -> String {
        format!("alg:{} in [{},{}]", self.poly, self.a, self.b)
    }

    fn enclose(&self, scale: u32) -> Interval {
        let width = BigRational::new(BigInt::one(), BigInt::one() << scale);
        let mut cache = self.cache.lock().expect("xi cache poisoned");
        if &cache.1 - &cache.0 > width {
            // The endpoints never vanish (checked at construction), and a
            // bisection point hitting the root would make it rational, which
            // the degree analysis has excluded.
            let refined = bisect_root(&self.squarefree, &cache.0, &cache.1, &width)
                .unwrap_or_else(|r| (r.clone(), r));
            *cache = refined;
        }
        Interval::from_rational_bounds(&cache.0, &cache.1, scale)
    }

    fn max_precision(&self) -> Option<u32> {
        None
    }

    fn independence(&self) -> Independence {
        self.independence.clone()
    }
}

pub type XiParser = fn(&str) -> Result<Arc<dyn XiSource>>;

/// Prefix-keyed table of source parsers.
#[derive(Clone)]
pub struct XiRegistry {
    parsers: BTreeMap<&'static str, XiParser>,
}

impl Default for XiRegistry {
    fn default() -> Self {
        let mut r = XiRegistry {
            parsers: BTreeMap::new(),
        };
        r.register("dec", |s| Ok(Arc::new(DecimalXi::parse(s)?)));
        r.register("alg", |s| Ok(Arc::new(AlgebraicXi::parse(s)?)));
        r
    }
}

impl XiRegistry {
    pub fn register(&mut self, prefix: &'static str, parser: XiParser) {
        self.parsers.insert(prefix, parser);
    }

    pub fn kinds(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.parsers.keys().copied()
    }

    pub fn parse(&self, spec: &str) -> Result<Arc<dyn XiSource>> {
        let (prefix, body) = spec.split_once(':').ok_or_else(|| LabError::InvalidXi {
            spec: spec.into(),
            reason: "missing `<kind>:` prefix".into(),
        })?;
        let parser = self.parsers.get(prefix.trim()).ok_or_else(|| LabError::InvalidXi {
            spec: spec.into(),
            reason: format!(
                "unknown kind `{prefix}` (known: {})",
                self.kinds().collect::<Vec<_>>().join(", ")
            ),
        })?;
        parser(body)
    }
}

pub fn parse_xi(spec: &str) -> Result<Arc<dyn XiSource>> {
    XiRegistry::default().parse(spec)
}

/// Enclosures of `xi`, `xi^2`, `xi^3` at a fixed working precision.
/// Immutable; [`RealContext::escalate`] returns a new, finer context.
#[derive(Clone)]
pub struct RealContext {
    source: Arc<dyn XiSource>,
    precision: u32,
    ceiling: u32,
    xi: Interval,
    xi2: Interval,
    xi3: Interval,
}

impl fmt::Debug for RealContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealContext")
            .field("spec", &self.source.spec())
            .field("precision", &self.precision)
            .field("ceiling", &self.ceiling)
            .finish()
    }
}

impl RealContext {
    /// Working precision is clamped to what the source supports.
    pub fn new(source: Arc<dyn XiSource>, precision: u32, ceiling: u32) -> Result<Self> {
        if precision == 0 {
            return Err(LabError::InvalidArgument("precision must be positive".into()));
        }
        let ceiling = match source.max_precision() {
            Some(cap) => ceiling.min(cap),
            None => ceiling,
        };
        let precision = precision.min(ceiling);
        let scale = precision + GUARD;
        let xi = source.enclose(scale);
        let xi2 = xi.square();
        let xi3 = xi2.mul(&xi);
        Ok(RealContext {
            source,
            precision,
            ceiling,
            xi,
            xi2,
            xi3,
        })
    }

    pub fn from_spec(spec: &str, precision: u32) -> Result<Self> {
        Self::new(parse_xi(spec)?, precision, DEFAULT_CEILING)
    }

    pub fn source(&self) -> &Arc<dyn XiSource> {
        &self.source
    }

    pub fn spec(&self) -> String {
        self.source.spec()
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision
    }

    pub fn ceiling(&self) -> u32 {
        self.ceiling
    }

    pub fn xi(&self) -> &Interval {
        &self.xi
    }

    pub fn xi2(&self) -> &Interval {
        &self.xi2
    }

    pub fn xi3(&self) -> &Interval {
        &self.xi3
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        Self::new(self.source.clone(), precision, self.ceiling)
    }

    /// Double the precision, or fail once the ceiling has been used.
    pub fn escalate(&self, what: &str, x0: &str) -> Result<Self> {
        if self.precision >= self.ceiling {
            return Err(LabError::PrecisionCeiling {
                ceiling: self.ceiling,
                what: what.into(),
                x0: x0.into(),
            });
        }
        log::debug!("escalating precision to {} bits while {what}", self.precision * 2);
        self.with_precision(self.precision.saturating_mul(2))
    }

    /// `2^-precision * max(1, |xi|^3)`, an upper bound for every enclosure width.
    pub fn width_bound(&self) -> BigRational {
        let m = self.xi3.lo().abs().max(self.xi3.hi().abs()).max(BigRational::one());
        m / BigRational::from_integer(BigInt::one() << self.precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn fourth_root_of_two() {
        let ctx = RealContext::from_spec("alg:x^4-2 in [1,2]", 80).unwrap();
        let mid = ctx.xi().mid_f64();
        assert!((mid - 2f64.powf(0.25)).abs() < 1e-15);
        assert!((ctx.xi3().mid_f64() - 2f64.powf(0.75)).abs() < 1e-15);
        assert_eq!(ctx.source().independence(), Independence::Proven);
    }

    #[test]
    fn enclosure_widths_respect_precision() {
        for spec in ["alg:x^4-2 in [1,2]", "alg:x^4-x-1 in [1.2,1.3]", "alg:x^4-x-1 in [-1,0]"] {
            for p in [20, 64, 200, 700] {
                let ctx = RealContext::from_spec(spec, p).unwrap();
                let bound = ctx.width_bound();
                for e in [ctx.xi(), ctx.xi2(), ctx.xi3()] {
                    assert!(e.width() <= bound, "{spec} at {p} bits");
                }
            }
        }
        let pi = "dec:3.14159265358979323846264338327950288419716939937510582097494";
        let ctx = RealContext::from_spec(pi, 1000).unwrap();
        assert!(ctx.precision_bits() < 200);
        let bound = ctx.width_bound();
        for e in [ctx.xi(), ctx.xi2(), ctx.xi3()] {
            assert!(e.width() <= bound);
        }
    }

    #[test]
    fn escalation_doubles_until_ceiling() {
        let src = parse_xi("alg:x^4-2 in [1,2]").unwrap();
        let ctx = RealContext::new(src, 40, 100).unwrap();
        let c1 = ctx.escalate("testing", "1").unwrap();
        assert_eq!(c1.precision_bits(), 80);
        let c2 = c1.escalate("testing", "1").unwrap();
        assert_eq!(c2.precision_bits(), 100);
        let err = c2.escalate("testing", "7").unwrap_err();
        assert!(matches!(err, LabError::PrecisionCeiling { ceiling: 100, .. }));
        assert!(c2.xi().width() < c1.xi().width());
    }

    #[test]
    fn decimal_prefix_encloses_value() {
        let src = DecimalXi::parse("0.50000000000000000001").unwrap();
        let e = src.enclose(80);
        assert!(e.lo() > rat(1, 2));
        let neg = DecimalXi::parse("-1.189207115002721066717").unwrap();
        let e = neg.enclose(60);
        let lit = parse_rational("-1.189207115002721066717").unwrap();
        assert!(e.hi() <= lit.clone() + rat(1, 1 << 50));
        let ulp = BigRational::new(BigInt::one(), BigInt::from(10).pow(21));
        assert!(e.lo() <= lit - ulp);
        assert!(DecimalXi::parse("2").is_err());
        assert!(DecimalXi::parse("abc").is_err());
        assert!(matches!(src.independence(), Independence::Assumed(_)));
    }

    #[test]
    fn rejects_dependent_or_malformed_specs() {
        for spec in [
            "alg:3x-2 in [0,1]",
            "alg:x^2-2 in [1,2]",
            "alg:x^3-2 in [1,2]",
            "alg:x^3+x-1 in [0,1]",
            "alg:x-1 in [1,2]",
            "alg:(x^2-2)*(x^3-3x^2-1) in [1,2]",
        ] {
            let r = parse_xi(spec);
            if spec.contains('(') {
                assert!(r.is_err());
            } else {
                assert!(matches!(r, Err(LabError::LinearDependence(_))), "{spec}");
            }
        }
        // (x^2-2)(x^4-x-1) with the quartic's root isolated: independent.
        let ok = parse_xi("alg:x^6 - 2x^4 - x^3 - x^2 + 2x + 2 in [1.2,1.3]").unwrap();
        assert_eq!(ok.independence(), Independence::Proven);
        // the sqrt 2 root of the same product is caught
        assert!(matches!(
            parse_xi("alg:x^6 - 2x^4 - x^3 - x^2 + 2x + 2 in [1.4,1.5]"),
            Err(LabError::LinearDependence(_))
        ));
        // cubic with an x^2 term is fine
        assert!(parse_xi("alg:x^3-x^2-1 in [1,2]").is_ok());
        assert!(matches!(parse_xi("alg:x^4-2 in [-2,2]"), Err(LabError::InvalidXi { .. })));
        assert!(matches!(parse_xi("foo:1"), Err(LabError::InvalidXi { .. })));
        assert!(matches!(parse_xi("x^4-2"), Err(LabError::InvalidXi { .. })));
    }

    #[test]
    fn spec_strings_round_trip() {
        let src = parse_xi("alg:x^4 - x - 1 in [6/5, 13/10]").unwrap();
        let again = parse_xi(&src.spec()).unwrap();
        assert_eq!(src.spec(), again.spec());
        assert_eq!(src.kind(), "alg");
    }
}
