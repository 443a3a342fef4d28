//! Univariate polynomials over Q: parsing, Sturm root counting, bisection
//! refinement, and a Kronecker search for factors of degree at most three.
//! That search is what decides exactly whether `1, xi, xi^3` are dependent
//! for an algebraic `xi`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{LabError, Result};

/// Dense polynomial, `coeffs[i]` is the coefficient of `x^i`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&k| BigRational::from_integer(k.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(x.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Euclidean division.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        let lead = d.leading();
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / &lead;
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &f * c;
            }
            quot[k] = f;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    fn sign_changes(seq: &[Self], x: &BigRational) -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        let sf = self.squarefree_part();
        let seq = sf.sturm_sequence();
        Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b))
    }

    /// Number of distinct real roots in the closed interval `[a, b]`.
    pub fn count_roots_closed(&self, a: &BigRational, b: &BigRational) -> usize {
        let at_a = usize::from(self.eval(a).is_zero());
        self.count_roots(a, b) + at_a
    }

    /// Primitive integer polynomial proportional to `self`, positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -1 } else { 1 };
        ints.iter().map(|c| c / &g * sign).collect()
    }

    pub fn parse(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

fn parse_poly(s: &str) -> Result<UniPoly> {
    let err = |m: &str| LabError::Parse(format!("polynomial `{s}`: {m}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty"));
    }
    let mut coeffs: Vec<BigRational> = Vec::new();
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && i == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    for (neg, t) in terms {
        if t.is_empty() {
            return Err(err("empty term"));
        }
        let (coef_str, exp) = match t.find('x') {
            None => (t.as_str(), 0usize),
            Some(pos) => {
                let rest = &t[pos + 1..];
                let exp = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<usize>().map_err(|_| err("bad exponent"))?
                } else {
                    return Err(err("unexpected text after x"));
                };
                (t[..pos].trim_end_matches('*'), exp)
            }
        };
        let mut c = if coef_str.is_empty() {
            BigRational::one()
        } else {
            parse_rational(coef_str).map_err(|_| err("bad coefficient"))?
        };
        if neg {
            c = -c;
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigRational::zero());
        }
        coeffs[exp] += c;
    }
    let p = UniPoly::new(coeffs);
    if p.is_zero() {
        return Err(err("zero polynomial"));
    }
    Ok(p)
}

/// Parse `p/q`, a decimal literal, or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || LabError::Parse(format!("bad rational `{s}`"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) || (ip.is_empty() && fp.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let den = BigInt::from(10).pow(fp.len() as u32);
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Bisect the unique root of squarefree `p` in `(lo, hi)` until the interval is
/// at most `width` wide. Requires `p(lo)` and `p(hi)` of opposite signs.
/// Returns `Err(root)` if a bisection point hits the root exactly.
pub fn bisect_root(
    p: &UniPoly,
    lo: &BigRational,
    hi: &BigRational,
    width: &BigRational,
) -> std::result::Result<(BigRational, BigRational), BigRational> {
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let sa = p.eval(&a).is_positive();
    let two = BigRational::from_integer(2.into());
    while &b - &a > *width {
        let m = (&a + &b) / &two;
        let v = p.eval(&m);
        if v.is_zero() {
            return Err(m);
        }
        if v.is_positive() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((a, b))
}

/// Outcome of the factor search for the minimal polynomial of an isolated root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeBound {
    /// The root's minimal polynomial (primitive, integer) has this low degree.
    Low(Vec<BigInt>),
    /// No factor of degree <= 3 vanishes at the root.
    AtLeastFour,
    /// The search space was too large to finish.
    Inconclusive,
}

const KRONECKER_LIMIT: u64 = 2_000_000;

/// Find the minimal polynomial of the root of `p` isolated in `[a, b]`, if its
/// degree is at most 3.
pub fn low_degree_minimal_polynomial(p: &UniPoly, a: &BigRational, b: &BigRational) -> DegreeBound {
    let sf = p.squarefree_part();
    let deg = sf.degree().unwrap_or(0);
    let ints = sf.primitive_integer();
    let q = UniPoly::new(ints.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    let mut inconclusive = false;
    for d in 1..=3usize.min(deg) {
        if d == deg {
            // q itself has degree d; every smaller factor has been excluded.
            return DegreeBound::Low(ints);
        }
        match kronecker_factors(&q, d) {
            None => inconclusive = true,
            Some(cands) => {
                for f in cands {
                    if f.count_roots_closed(a, b) > 0 {
                        return DegreeBound::Low(f.primitive_integer());
                    }
                }
            }
        }
    }
    if inconclusive {
        DegreeBound::Inconclusive
    } else {
        DegreeBound::AtLeastFour
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i * i != n {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
        if i > 10_000_000 {
            return None;
        }
    }
    out.sort();
    Some(out)
}

/// All integer divisors of `q` of exact degree `d` (up to sign), by Kronecker's
/// interpolation method. `None` when the search is too large.
fn kronecker_factors(q: &UniPoly, d: usize) -> Option<Vec<UniPoly>> {
    let mut pts: Vec<(BigInt, BigInt)> = (-30i64..=30)
        .map(BigInt::from)
        .filter_map(|t| {
            let v = q.eval_int(&t);
            if v.is_zero() {
                None
            } else {
                Some((t, v.to_integer()))
            }
        })
        .collect();
    pts.sort_by(|x, y| x.1.abs().cmp(&y.1.abs()).then(x.0.cmp(&y.0)));
    if pts.len() < d + 1 {
        return None;
    }
    let chosen: Vec<(BigInt, Vec<BigInt>)> = pts
        .into_iter()
        .take(d + 1)
        .map(|(t, v)| divisors(&v).map(|ds| (t, ds)))
        .collect::<Option<_>>()?;
    let mut total: u64 = 1;
    for (i, (_, ds)) in chosen.iter().enumerate() {
        let mult = if i == 0 { ds.len() as u64 } else { 2 * ds.len() as u64 };
        total = total.checked_mul(mult)?;
    }
    if total > KRONECKER_LIMIT {
        return None;
    }
    let mut found = Vec::new();
    let mut idx = vec![0usize; d + 1];
    loop {
        // First value positive fixes the overall sign.
        let values: Vec<BigInt> = chosen
            .iter()
            .zip(idx.iter())
            .enumerate()
            .map(|(i, ((_, ds), &k))| {
                if i == 0 {
                    ds[k].clone()
                } else {
                    let n = ds.len();
                    if k < n {
                        ds[k].clone()
                    } else {
                        -ds[k - n].clone()
                    }
                }
            })
            .collect();
        let xs: Vec<BigInt> = chosen.iter().map(|(t, _)| t.clone()).collect();
        if let Some(f) = interpolate(&xs, &values) {
            if f.degree() == Some(d) && q.div_rem(&f).1.is_zero() {
                found.push(f);
            }
        }
        // advance mixed-radix counter
        let mut pos = 0;
        loop {
            if pos > d {
                return Some(found);
            }
            let radix = if pos == 0 { chosen[0].1.len() } else { 2 * chosen[pos].1.len() };
            idx[pos] += 1;
            if idx[pos] < radix {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Lagrange interpolation; `None` unless all coefficients are integers.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Option<UniPoly> {
    let n = xs.len();
    let mut acc = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let xj = BigRational::from_integer(xs[j].clone());
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xj;
            }
            basis = next;
            denom *= BigRational::from_integer(&xs[i] - &xs[j]);
        }
        let w = BigRational::from_integer(ys[i].clone()) / denom;
        for (k, c) in basis.iter().enumerate() {
            acc[k] += c * &w;
        }
    }
    if acc.iter().all(|c| c.is_integer()) {
        Some(UniPoly::new(acc))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_polynomials() {
        assert_eq!(UniPoly::parse("x^4-2").unwrap(), UniPoly::from_ints(&[-2, 0, 0, 0, 1]));
        assert_eq!(UniPoly::parse("x^4 - x - 1").unwrap(), UniPoly::from_ints(&[-1, -1, 0, 0, 1]));
        assert_eq!(UniPoly::parse("3x-2").unwrap(), UniPoly::from_ints(&[-2, 3]));
        assert_eq!(UniPoly::parse("2*x^3+x-5").unwrap(), UniPoly::from_ints(&[-5, 1, 0, 2]));
        assert_eq!(UniPoly::parse("-x^2+1").unwrap(), UniPoly::from_ints(&[1, 0, -1]));
        assert!(UniPoly::parse("x^").is_err());
        assert!(UniPoly::parse("y+1").is_err());
        assert!(UniPoly::parse("x-x").is_err());
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn sturm_counts_roots() {
        let p = UniPoly::from_ints(&[-2, 0, 0, 0, 1]);
        assert_eq!(p.count_roots(&rat(1, 1), &rat(2, 1)), 1);
        assert_eq!(p.count_roots(&rat(-2, 1), &rat(2, 1)), 2);
        // (x-1)^2 (x-2): squarefree part counted once per root.
        let q = UniPoly::from_ints(&[-2, 5, -4, 1]);
        assert_eq!(q.count_roots(&rat(0, 1), &rat(3, 1)), 2);
        assert_eq!(q.count_roots_closed(&rat(1, 1), &rat(3, 2)), 1);
    }

    #[test]
    fn bisection_refines() {
        let p = UniPoly::from_ints(&[-2, 0, 0, 0, 1]);
        let (a, b) = bisect_root(&p, &rat(1, 1), &rat(2, 1), &rat(1, 1_000_000)).unwrap();
        assert!(b.clone() - a.clone() <= rat(1, 1_000_000));
        assert!(p.eval(&a).is_negative() && p.eval(&b).is_positive());
    }

    #[test]
    fn low_degree_detection() {
        let quartic = UniPoly::from_ints(&[-2, 0, 0, 0, 1]);
        assert_eq!(
            low_degree_minimal_polynomial(&quartic, &rat(1, 1), &rat(2, 1)),
            DegreeBound::AtLeastFour
        );
        let q2 = UniPoly::from_ints(&[-1, -1, 0, 0, 1]);
        assert_eq!(
            low_degree_minimal_polynomial(&q2, &rat(6, 5), &rat(13, 10)),
            DegreeBound::AtLeastFour
        );
        // (x^2 - 2)(x^3 - x - 1): root sqrt 2 has degree two.
        let prod = UniPoly::from_ints(&[2, 2, -1, -3, 0, 1]);
        assert_eq!(
            low_degree_minimal_polynomial(&prod, &rat(14, 10), &rat(15, 10)),
            DegreeBound::Low(vec![(-2).into(), 0.into(), 1.into()])
        );
        // the real root of x^3 - x - 1 (about 1.3247) in the same product
        assert_eq!(
            low_degree_minimal_polynomial(&prod, &rat(13, 10), &rat(134, 100)),
            DegreeBound::Low(vec![(-1).into(), (-1).into(), 0.into(), 1.into()])
        );
        let lin = UniPoly::from_ints(&[-2, 3]);
        assert_eq!(
            low_degree_minimal_polynomial(&lin, &rat(0, 1), &rat(1, 1)),
            DegreeBound::Low(vec![(-2).into(), 3.into()])
        );
    }

    #[test]
    fn display_round_trips() {
        let p = UniPoly::from_ints(&[-1, -1, 0, 0, 1]);
        assert_eq!(p.to_string(), "x^4 - x - 1");
        assert_eq!(UniPoly::parse(&p.to_string()).unwrap(), p);
    }
}
