use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::forms::{big_phi, phi};
use crate::vec3::Vec3Z;

/// Homogeneous element of `R_l`: `sum a_(m,n) T^(l-2m-3n) F^m (S^2 V)^n`.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElem {
    degree: u32,
    coeffs: BTreeMap<(u32, u32), BigRational>,
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(k.into())
}

impl RingElem {
    pub fn zero(degree: u32) -> Self {
        RingElem {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn fits(degree: u32, (m, n): (u32, u32)) -> bool {
        2 * m as u64 + 3 * n as u64 <= degree as u64
    }

    pub fn monomial(degree: u32, key: (u32, u32), c: BigRational) -> Result<Self> {
        Self::from_coeffs(degree, [(key, c)])
    }

    pub fn from_coeffs(
        degree: u32,
        coeffs: impl IntoIterator<Item = ((u32, u32), BigRational)>,
    ) -> Result<Self> {
        let mut e = Self::zero(degree);
        for (k, c) in coeffs {
            if !Self::fits(degree, k) {
                return Err(LabError::InvalidArgument(format!(
                    "index ({}, {}) does not fit degree {degree}",
                    k.0, k.1
                )));
            }
            e.add_coeff(k, c);
        }
        Ok(e)
    }

    pub fn from_ints(degree: u32, coeffs: &[((u32, u32), i64)]) -> Self {
        Self::from_coeffs(degree, coeffs.iter().map(|&(k, c)| (k, int(c)))).expect("indices fit")
    }

    fn add_coeff(&mut self, k: (u32, u32), c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, k: (u32, u32)) -> BigRational {
        self.coeffs.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> Vec<(u32, u32)> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of `T` in the monomial indexed by `(m, n)`.
    pub fn t_exponent(&self, (m, n): (u32, u32)) -> u32 {
        self.degree - 2 * m - 3 * n
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding elements of different degrees");
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_coeff(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(self.degree);
        }
        RingElem {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(key, c)| (*key, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for ((m1, n1), a) in &self.coeffs {
            for ((m2, n2), b) in &other.coeffs {
                out.add_coeff((m1 + m2, n1 + n2), a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_ints(0, &[((0, 0), 1)]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Positive rational multiple with coprime integer coefficients, and the
    /// factor used. The sign is kept.
    pub fn primitive_integer(&self) -> (Self, BigRational) {
        if self.is_zero() {
            return (self.clone(), BigRational::one());
        }
        let l = self.coeffs.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let g = self
            .coeffs
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(&(c * BigRational::from_integer(l.clone())).to_integer()));
        let factor = BigRational::new(l, g);
        (self.scale(&factor), factor)
    }

    /// Coprime integer coefficients with the coefficient at `key` positive.
    pub fn normalized_at(&self, key: (u32, u32)) -> Self {
        let (p, _) = self.primitive_integer();
        if p.coeff(key).is_negative() {
            p.scale(&-BigRational::one())
        } else {
            p
        }
    }

    /// Coprime integer coefficients with the first (lexicographic) coefficient positive.
    pub fn normalized(&self) -> Self {
        match self.coeffs.keys().next() {
            Some(&k) => self.normalized_at(k),
            None => self.clone(),
        }
    }

    /// Whether `other` is a nonzero rational multiple of `self`.
    pub fn is_proportional_to(&self, other: &Self) -> bool {
        if self.degree != other.degree || self.is_zero() || other.is_zero() {
            return false;
        }
        self.normalized() == other.normalized()
    }

    /// Value at given `S, T, U, V`.
    pub fn evaluate_stuv(&self, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) -> BigRational {
        let f = t * t - 4 * s * u;
        let w = s * s * v;
        self.evaluate_tfw(t, &f, &w)
    }

    /// Value at given `T, F, S^2 V`.
    pub fn evaluate_tfw(&self, t: &BigInt, f: &BigInt, w: &BigInt) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |acc, (&(m, n), c)| {
            let term = t.pow(self.degree - 2 * m - 3 * n) * f.pow(m) * w.pow(n);
            acc + c * BigRational::from_integer(term)
        })
    }

    /// Value at the pair `(x, y)`: `S = phi(x)`, `T = Phi(x,x,y)`, `U = Phi(x,y,y)`, `V = phi(y)`.
    pub fn evaluate(&self, x: &Vec3Z, y: &Vec3Z) -> BigRational {
        self.evaluate_stuv(&phi(x), &big_phi(x, x, y), &big_phi(x, y, y), &phi(y))
    }
}

pub const NAMES: [&str; 10] = ["T", "F", "S2V", "A", "B", "M", "N", "D2", "D3", "D6"];

/// The distinguished elements by name.
pub fn named(name: &str) -> Result<RingElem> {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    Ok(match name {
        "T" => RingElem::from_ints(1, &[((0, 0), 1)]),
        "F" => RingElem::from_ints(2, &[((1, 0), 1)]),
        "S2V" => RingElem::from_ints(3, &[((0, 1), 1)]),
        // 4A = T^2 + 3F
        "A" => RingElem::from_coeffs(2, [((0, 0), q(1, 4)), ((1, 0), q(3, 4))])?,
        // 4B = T^3 - 9TF - 108 S^2V
        "B" => RingElem::from_coeffs(3, [((0, 0), q(1, 4)), ((1, 0), q(-9, 4)), ((0, 1), q(-27, 1))])?,
        "M" => RingElem::from_ints(4, &[((2, 0), 1), ((0, 1), -3)]),
        "N" | "D3" => RingElem::from_ints(6, &[((3, 0), 1), ((1, 1), -18), ((0, 2), -135)]),
        "D2" => RingElem::from_ints(6, &[((3, 0), 1), ((0, 2), 27)]),
        "D6" => RingElem::from_ints(
            9,
            &[
                ((4, 0), 1),
                ((3, 1), 10),
                ((2, 1), -11),
                ((1, 2), -180),
                ((0, 2), -1),
                ((0, 3), -675),
            ],
        ),
        other => {
            return Err(LabError::InvalidArgument(format!(
                "unknown element `{other}` (known: {})",
                NAMES.join(", ")
            )))
        }
    })
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg={}", self.degree)?;
        for ((m, n), c) in &self.coeffs {
            write!(f, "; ({m},{n}):{}/{}", c.numer(), c.denom())?;
        }
        Ok(())
    }
}

impl FromStr for RingElem {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| LabError::Parse(format!("ring element `{s}`: {why}"));
        let mut parts = s.split(';').map(str::trim).filter(|p| !p.is_empty());
        let head = parts.next().ok_or_else(|| bad("empty"))?;
        let degree: u32 = head
            .strip_prefix("deg=")
            .ok_or_else(|| bad("missing deg="))?
            .trim()
            .parse()
            .map_err(|_| bad("bad degree"))?;
        let mut coeffs = Vec::new();
        for p in parts {
            let (key, val) = p.split_once(':').ok_or_else(|| bad("expected (m,n):num/den"))?;
            let key = key
                .trim()
                .strip_prefix('(')
                .and_then(|k| k.strip_suffix(')'))
                .ok_or_else(|| bad("expected (m,n)"))?;
            let (m, n) = key.split_once(',').ok_or_else(|| bad("expected (m,n)"))?;
            let m: u32 = m.trim().parse().map_err(|_| bad("bad m"))?;
            let n: u32 = n.trim().parse().map_err(|_| bad("bad n"))?;
            let (num, den) = val.trim().split_once('/').unwrap_or((val.trim(), "1"));
            let num: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
            let den: BigInt = den.trim().parse().map_err(|_| bad("bad denominator"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            coeffs.push(((m, n), BigRational::new(num, den)));
        }
        RingElem::from_coeffs(degree, coeffs).map_err(|e| bad(&e.to_string()))
    }
}

impl Serialize for RingElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .map(|((m, n), c)| (format!("({m},{n})"), c.to_string()))
            .collect();
        let mut st = s.serialize_struct("RingElem", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::big_f;

    fn v(a: i64, b: i64, c: i64) -> Vec3Z {
        Vec3Z::from_i64(a, b, c)
    }

    #[test]
    fn text_format_round_trips() {
        let d2 = named("D2").unwrap();
        let s = d2.to_string();
        assert_eq!(s, "deg=6; (0,2):27/1; (3,0):1/1");
        assert_eq!(s.parse::<RingElem>().unwrap(), d2);
        let a = named("A").unwrap();
        assert_eq!(a.to_string(), "deg=2; (0,0):1/4; (1,0):3/4");
        assert_eq!(RingElem::zero(5).to_string(), "deg=5");
        assert_eq!("deg=5".parse::<RingElem>().unwrap(), RingElem::zero(5));
        assert!("deg=2; (2,0):1/1".parse::<RingElem>().is_err());
        assert!("(0,0):1".parse::<RingElem>().is_err());
    }

    #[test]
    fn named_tables() {
        let d3 = named("D3").unwrap();
        assert_eq!(d3.coeff((1, 1)), int(-18));
        assert_eq!(d3, named("N").unwrap());
        let d6 = named("D6").unwrap();
        assert_eq!(d6.degree(), 9);
        assert_eq!(d6.coeffs().len(), 6);
        assert!(named("X").is_err());
    }

    #[test]
    fn f_from_a_and_t() {
        // F = (4A - T^2) / 3
        let t = named("T").unwrap();
        let lhs = named("A")
            .unwrap()
            .scale(&int(4))
            .sub(&t.mul(&t))
            .scale(&BigRational::new(1.into(), 3.into()));
        assert_eq!(lhs, named("F").unwrap());
    }

    #[test]
    fn m_cubed_minus_n_squared() {
        let m = named("M").unwrap();
        let n = named("N").unwrap();
        let rhs = named("S2V").unwrap().mul(&named("D6").unwrap()).scale(&int(27));
        assert_eq!(m.pow(3).sub(&n.pow(2)), rhs);
    }

    #[test]
    fn evaluation_matches_forms() {
        let (x, y) = (v(1, 1, 2), v(4, 5, 7));
        let f = named("F").unwrap();
        assert_eq!(f.evaluate(&x, &y), BigRational::from_integer(big_f(&x, &y)));
        let t = named("T").unwrap();
        assert_eq!(t.evaluate(&x, &x), BigRational::from_integer(3 * phi(&x)));
        let d2 = named("D2").unwrap();
        let expect = big_f(&x, &y).pow(3) + 27 * (phi(&x).pow(2) * phi(&y)).pow(2);
        assert_eq!(d2.evaluate(&x, &y), BigRational::from_integer(expect));
    }

    #[test]
    fn normalization() {
        let e = RingElem::from_coeffs(3, [((0, 0), BigRational::new((-2).into(), 3.into())), ((0, 1), int(4))]).unwrap();
        assert_eq!(e.normalized().to_string(), "deg=3; (0,0):1/1; (0,1):-6/1");
        assert_eq!(e.normalized_at((0, 1)).to_string(), "deg=3; (0,0):-1/1; (0,1):6/1");
        assert!(e.is_proportional_to(&e.scale(&int(-7))));
    }
}
