//! Outward-rounded dyadic intervals.
//!
//! An [`Interval`] is `[lo, hi] / 2^scale` with integer `lo <= hi`. Sums and
//! integer multiples are exact; products and quotients are rounded outward
//! to the larger of the operand scales. All decisions made from intervals
//! (`certainly_lt` and friends) are therefore rigorous.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    scale: u32,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Interval {
    pub fn from_bounds(lo: BigInt, hi: BigInt, scale: u32) -> Self {
        assert!(lo <= hi, "interval bounds out of order");
        Interval { lo, hi, scale }
    }

    pub fn point_int(n: &BigInt) -> Self {
        Interval {
            lo: n.clone(),
            hi: n.clone(),
            scale: 0,
        }
    }

    /// Smallest dyadic interval at `scale` containing the rational `r`.
    pub fn from_rational(r: &BigRational, scale: u32) -> Self {
        let num = r.numer() << scale;
        let den = r.denom();
        Interval {
            lo: floor_div(&num, den),
            hi: ceil_div(&num, den),
            scale,
        }
    }

    /// Smallest dyadic interval at `scale` containing `[a, b]`.
    pub fn from_rational_bounds(a: &BigRational, b: &BigRational, scale: u32) -> Self {
        assert!(a <= b);
        let lo = Self::from_rational(a, scale).lo;
        let hi = Self::from_rational(b, scale).hi;
        Interval { lo, hi, scale }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn lo_mantissa(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_mantissa(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.scale))
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.scale))
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, pow2(self.scale))
    }

    pub fn mid_f64(&self) -> f64 {
        let mid = BigRational::new(&self.lo + &self.hi, pow2(self.scale + 1));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.lo() <= *r && *r <= self.hi()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Re-express at a finer scale (exact).
    pub fn rescale_up(&self, scale: u32) -> Self {
        assert!(scale >= self.scale);
        let sh = scale - self.scale;
        Interval {
            lo: &self.lo << sh,
            hi: &self.hi << sh,
            scale,
        }
    }

    /// Round outward to a coarser scale.
    pub fn round_to(&self, scale: u32) -> Self {
        if scale >= self.scale {
            return self.rescale_up(scale);
        }
        let d = pow2(self.scale - scale);
        Interval {
            lo: floor_div(&self.lo, &d),
            hi: ceil_div(&self.hi, &d),
            scale,
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let s = self.scale.max(other.scale);
        (self.rescale_up(s), other.rescale_up(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Interval {
            lo: a.lo + b.lo,
            hi: a.hi + b.hi,
            scale: a.scale,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn add_int(&self, n: &BigInt) -> Self {
        let shifted = n << self.scale;
        Interval {
            lo: &self.lo + &shifted,
            hi: &self.hi + &shifted,
            scale: self.scale,
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            scale: self.scale,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Interval { lo: b, hi: a, scale: self.scale }
        } else {
            Interval { lo: a, hi: b, scale: self.scale }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().cloned().unwrap();
        let hi = cands.iter().max().cloned().unwrap();
        Interval {
            lo,
            hi,
            scale: self.scale + other.scale,
        }
        .round_to(self.scale.max(other.scale))
    }

    pub fn square(&self) -> Self {
        let a = self.abs();
        let lo = if self.contains_zero() {
            BigInt::zero()
        } else {
            &a.lo * &a.lo
        };
        Interval {
            lo,
            hi: &a.hi * &a.hi,
            scale: 2 * self.scale,
        }
        .round_to(self.scale)
    }

    /// Quotient rounded outward at `scale`; `None` if the divisor straddles 0.
    pub fn div(&self, other: &Self, scale: u32) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let (a, b) = self.aligned(other);
        // (a/2^s) / (b/2^s) = a/b; scale by 2^scale.
        let sh = pow2(scale);
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for n in [&a.lo, &a.hi] {
            for d in [&b.lo, &b.hi] {
                let num = n * &sh;
                let (dn, nn) = if d.is_negative() { (-d, -num) } else { (d.clone(), num) };
                let l = floor_div(&nn, &dn);
                let h = ceil_div(&nn, &dn);
                lo = Some(lo.map_or(l.clone(), |x: BigInt| x.min(l)));
                hi = Some(hi.map_or(h.clone(), |x: BigInt| x.max(h)));
            }
        }
        Some(Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            scale,
        })
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Interval {
                lo: BigInt::zero(),
                hi: (-&self.lo).max(self.hi.clone()),
                scale: self.scale,
            }
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Interval {
            lo: a.lo.max(b.lo),
            hi: a.hi.max(b.hi),
            scale: a.scale,
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Interval {
            lo: a.lo.min(b.lo),
            hi: a.hi.min(b.hi),
            scale: a.scale,
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Interval {
            lo: a.lo.min(b.lo),
            hi: a.hi.max(b.hi),
            scale: a.scale,
        }
    }

    pub fn certainly_lt(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.hi < b.lo
    }

    pub fn certainly_gt(&self, other: &Self) -> bool {
        other.certainly_lt(self)
    }

    pub fn certainly_lt_rational(&self, r: &BigRational) -> bool {
        self.hi() < *r
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `Some(ordering)` of every point against every point of `other`, if decided.
    pub fn decided_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.certainly_lt(other) {
            Some(Ordering::Less)
        } else if self.certainly_gt(other) {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.aligned(other).0 == self.aligned(other).1 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// The integer nearest to every point of the interval, if that is decided
    /// (no half-integer inside).
    pub fn round_nearest(&self) -> Option<BigInt> {
        let half = pow2(self.scale) >> 1u32;
        let unit = pow2(self.scale);
        if self.scale == 0 {
            return if self.lo == self.hi { Some(self.lo.clone()) } else { None };
        }
        // floor(v + 1/2) must agree at both ends, and no point may be a half-integer.
        let l = floor_div(&(&self.lo + &half), &unit);
        let h = floor_div(&(&self.hi + &half), &unit);
        if l != h {
            return None;
        }
        // lo + 1/2 lands exactly on an integer boundary means lo is a half-integer.
        if (&self.lo + &half).mod_floor(&unit).is_zero() {
            return None;
        }
        Some(l)
    }

    /// Square root of a nonnegative integer.
    pub fn sqrt_int(n: &BigInt, scale: u32) -> Self {
        assert!(!n.is_negative());
        let scaled = n << (2 * scale);
        let r = scaled.sqrt();
        let hi = if &r * &r == scaled { r.clone() } else { &r + 1 };
        Interval { lo: r, hi, scale }
    }

    /// Natural logarithm of a positive integer.
    pub fn ln_int(n: &BigInt, scale: u32) -> Self {
        assert!(n.is_positive(), "ln of non-positive integer");
        let work = scale + 16;
        let k = n.bits() - 1;
        let pk = pow2(k as u32);
        // n = 2^k m, m in [1,2); ln m = 2 atanh((n - 2^k)/(n + 2^k)).
        let num = n - &pk;
        let den = n + &pk;
        let (al, ah) = atanh_sum(&num, &den, work);
        let (l2l, l2h) = atanh_sum(&BigInt::one(), &BigInt::from(3), work);
        let kk = BigInt::from(k);
        Interval {
            lo: 2 * (&kk * l2l + al),
            hi: 2 * (&kk * l2h + ah),
            scale: work,
        }
        .round_to(scale)
    }

    /// Natural logarithm of a certainly-positive interval, at this interval's scale.
    pub fn ln(&self) -> Option<Self> {
        if !self.certainly_positive() {
            return None;
        }
        let s = self.scale.max(64);
        let ln2_s = Interval::ln_int(&BigInt::from(2), s).mul_int(&BigInt::from(self.scale));
        let lo = Interval::ln_int(&self.lo, s).sub(&ln2_s);
        let hi = Interval::ln_int(&self.hi, s).sub(&ln2_s);
        Some(lo.hull(&hi))
    }

    pub fn to_rational_pair(&self) -> (BigRational, BigRational) {
        (self.lo(), self.hi())
    }
}

/// Lower and upper bounds, at `work` fractional bits, of
/// `sum_{i>=0} z^{2i+1}/(2i+1)` for `z = a/b` with `0 <= z <= 1/3`.
fn atanh_sum(a: &BigInt, b: &BigInt, work: u32) -> (BigInt, BigInt) {
    debug_assert!(BigInt::from(3) * a <= *b);
    if a.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let unit = pow2(work);
    let a2 = a * a;
    let b2 = b * b;
    // t = z^{2i+1} 2^work, lower and upper.
    let mut tl = floor_div(&(a * &unit), b);
    let mut th = ceil_div(&(a * &unit), b);
    let mut sl = BigInt::zero();
    let mut sh = BigInt::zero();
    let mut i: u64 = 0;
    loop {
        let d = BigInt::from(2 * i + 1);
        sl += floor_div(&tl, &d);
        sh += ceil_div(&th, &d);
        tl = floor_div(&(&tl * &a2), &b2);
        th = ceil_div(&(&th * &a2), &b2);
        i += 1;
        if th <= BigInt::one() {
            break;
        }
    }
    // Tail: sum_{j>=i} z^{2j+1}/(2j+1) <= th / (2i+1) / (1 - z^2) <= 9 th / (8 (2i+1)).
    let d = BigInt::from(8 * (2 * i + 1));
    sh += ceil_div(&(th * 9), &d) + 1;
    (sl, sh)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", rat_to_f64(&self.lo()), rat_to_f64(&self.hi()))
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering of a rational truncated toward zero to `digits`
/// fractional digits. Deterministic, no floating point involved.
pub fn rational_to_decimal(r: &BigRational, digits: usize) -> String {
    let neg = r.numer().sign() == Sign::Minus;
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (r.numer().abs() * &scale) / r.denom();
    let int_part = &scaled / &scale;
    let frac = &scaled % &scale;
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        s.push('.');
        let fs = frac.to_string();
        for _ in fs.len()..digits {
            s.push('0');
        }
        s.push_str(&fs);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_is_enclosing() {
        let a = Interval::from_rational(&rat(1, 3), 40);
        let b = Interval::from_rational(&rat(-2, 7), 40);
        assert!(a.add(&b).contains(&rat(1, 21)));
        assert!(a.mul(&b).contains(&rat(-2, 21)));
        assert!(a.sub(&b).contains(&rat(13, 21)));
        assert!(a.div(&b, 40).unwrap().contains(&rat(-7, 6)));
        assert!(b.abs().contains(&rat(2, 7)));
        assert!(b.square().contains(&rat(4, 49)));
    }

    #[test]
    fn rounding_to_nearest_integer() {
        assert_eq!(
            Interval::from_rational(&rat(47568, 10000), 30).round_nearest(),
            Some(BigInt::from(5))
        );
        // Exactly one half is never decided.
        assert_eq!(Interval::from_rational(&rat(1, 2), 30).round_nearest(), None);
        let straddle = Interval::from_rational_bounds(&rat(49, 100), &rat(51, 100), 30);
        assert_eq!(straddle.round_nearest(), None);
        assert_eq!(
            Interval::from_rational(&rat(-27, 10), 30).round_nearest(),
            Some(BigInt::from(-3))
        );
    }

    #[test]
    fn sqrt_encloses() {
        let s = Interval::sqrt_int(&BigInt::from(11), 100);
        assert!(s.lo() * s.lo() <= rat(11, 1));
        assert!(s.hi() * s.hi() >= rat(11, 1));
        assert!(s.width() <= rat(1, 1) / BigRational::from(pow2(99)));
        let exact = Interval::sqrt_int(&BigInt::from(16), 10);
        assert!(exact.is_point());
    }

    #[test]
    fn ln_encloses_reference_values() {
        // ln 2 = 0.693147180559945309417232121458...
        let l2 = Interval::ln_int(&BigInt::from(2), 100);
        let lo = rat(693147180559945309, 1_000_000_000_000_000_000);
        let hi = rat(693147180559945310, 1_000_000_000_000_000_000);
        assert!(l2.lo() >= lo && l2.hi() <= hi, "{l2}");
        // ln 1 = 0 exactly enclosed.
        assert!(Interval::ln_int(&BigInt::from(1), 50).contains(&rat(0, 1)));
        // ln 10 = 2.302585092994045684017991454684...
        let l10 = Interval::ln_int(&BigInt::from(10), 80);
        assert!(l10.width() < rat(1, 1_000_000_000_000_000_000));
        assert!(l10.lo() < rat(2302585092994045685, 1_000_000_000_000_000_000));
        assert!(l10.hi() > rat(2302585092994045684, 1_000_000_000_000_000_000));
        // ln of a big power of two.
        let big = BigInt::one() << 1000u32;
        let lb = Interval::ln_int(&big, 60);
        let ref_val = 1000.0 * std::f64::consts::LN_2;
        assert!((lb.mid_f64() - ref_val).abs() < 1e-9);
    }

    #[test]
    fn ln_of_fraction() {
        // ln(1/4) = -ln 4.
        let q = Interval::from_rational(&rat(1, 4), 64);
        let l = q.ln().unwrap();
        assert!((l.mid_f64() + 4f64.ln()).abs() < 1e-15);
        assert!(l.lo() <= l.hi());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_to_decimal(&rat(1, 3), 5), "0.33333");
        assert_eq!(rational_to_decimal(&rat(-7, 2), 2), "-3.50");
        assert_eq!(rational_to_decimal(&rat(5, 1), 0), "5");
    }
}
