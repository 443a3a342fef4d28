//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent arrays, so iteration order
//! and therefore every printed or serialized form is deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub const MAX_VARS: usize = 8;

pub type Exps = [u16; MAX_VARS];

/// Coefficient rings in use: Z and Q.
pub trait Coeff:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(k: i64) -> Self;
}

impl Coeff for BigInt {
    fn from_i64(k: i64) -> Self {
        BigInt::from(k)
    }
}

impl Coeff for BigRational {
    fn from_i64(k: i64) -> Self {
        BigRational::from_integer(k.into())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly<C> {
    terms: BTreeMap<Exps, C>,
}

impl<C: Coeff> Default for MPoly<C> {
    fn default() -> Self {
        MPoly { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> MPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, [0; MAX_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Self::term(C::one(), e)
    }

    pub fn term(c: C, e: Exps) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exps) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, e: Exps, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c.clone() * k.clone())).collect(),
        }
    }

    /// Product keeping only terms with exponent of `var` below `limit`.
    pub fn mul_truncated(&self, other: &Self, var: usize, limit: u16) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                if ea[var] + eb[var] >= limit {
                    continue;
                }
                let mut e = *ea;
                for k in 0..MAX_VARS {
                    e[k] += eb[k];
                }
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn truncate(&self, var: usize, limit: u16) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[var] < limit)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Smallest exponent of `var` over all terms; `None` for zero.
    pub fn min_degree(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|e| e[var]).min()
    }

    pub fn max_degree(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Coefficient of `var^k`, as a polynomial in the other variables.
    pub fn coeff_of(&self, var: usize, k: u16) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[var] == k)
                .map(|(e, c)| {
                    let mut e = *e;
                    e[var] = 0;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Replace each variable `i` by `images[i]` (missing entries stay put).
    pub fn substitute(&self, images: &[Option<Self>]) -> Self {
        let mut pow_cache: Vec<Vec<Self>> = vec![Vec::new(); MAX_VARS];
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            let mut kept = [0u16; MAX_VARS];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match images.get(i).and_then(|x| x.as_ref()) {
                    Some(img) => {
                        let cache = &mut pow_cache[i];
                        if cache.is_empty() {
                            cache.push(Self::constant(C::one()));
                        }
                        while cache.len() <= k as usize {
                            let next = cache.last().unwrap() * img;
                            cache.push(next);
                        }
                        t = &t * &cache[k as usize];
                    }
                    None => kept[i] = k,
                }
            }
            out = out + &t * &Self::term(C::one(), kept);
        }
        out
    }

    pub fn eval(&self, values: &[C]) -> C {
        self.terms.iter().fold(C::zero(), |acc, (e, c)| {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t * values[i].clone();
                }
            }
            acc + t
        })
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::<D>::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }

    /// Partial derivative in `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[var] -= 1;
            out.add_term(e2, c.clone() * C::from_i64(e[var] as i64));
        }
        out
    }
}

impl MPoly<BigInt> {
    pub fn to_rational(&self) -> MPoly<BigRational> {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }
}

impl<C: Coeff> From<i32> for MPoly<C> {
    fn from(k: i32) -> Self {
        Self::constant(C::from_i64(k as i64))
    }
}

impl<C: Coeff> Add for MPoly<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<C: Coeff> Sub for MPoly<C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl<C: Coeff> Neg for MPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        MPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<C: Coeff> Mul for &MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: Self) -> MPoly<C> {
        self.mul_truncated(rhs, 0, u16::MAX)
    }
}

impl<C: Coeff> Mul for MPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// Renders with variable names `names[i]`.
pub struct Named<'a, C>(pub &'a MPoly<C>, pub &'a [&'a str]);

impl<C: Coeff> fmt::Display for Named<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.0.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &d) in e.iter().enumerate() {
                match d {
                    0 => {}
                    1 => write!(f, "*{}", self.1[i])?,
                    _ => write!(f, "*{}^{d}", self.1[i])?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = MPoly<BigInt>;

    fn x(i: usize) -> P {
        P::var(i)
    }

    #[test]
    fn arithmetic() {
        let p = x(0) + x(1);
        let sq = p.pow(2);
        assert_eq!(sq, x(0) * x(0) + P::from(2) * x(0) * x(1) + x(1) * x(1));
        assert!((p.clone() - p).is_zero());
        assert_eq!(sq.max_degree(0), Some(2));
        assert_eq!(sq.min_degree(1), Some(0));
        assert_eq!(sq.coeff_of(0, 1), P::from(2) * x(1));
        assert_eq!(sq.truncate(0, 1), x(1) * x(1));
    }

    #[test]
    fn substitution_and_eval() {
        let p = x(0) * x(0) * x(1) - P::from(3) * x(1);
        let img = x(2) + P::from(1);
        let s = p.substitute(&[Some(img.clone()), None]);
        assert_eq!(s, img.pow(2) * x(1) - P::from(3) * x(1));
        let vals: Vec<BigInt> = [2, 5, 7].iter().map(|&k| BigInt::from(k)).collect();
        assert_eq!(p.eval(&vals), BigInt::from(4 * 5 - 15));
        assert_eq!(p.derivative(0), P::from(2) * x(0) * x(1));
    }

    fn small_poly() -> impl Strategy<Value = P> {
        proptest::collection::vec(((0u16..3, 0u16..3, 0u16..3), -5i64..=5), 0..6).prop_map(|ts| {
            ts.into_iter().fold(P::zero(), |acc, ((a, b, c), k)| {
                let mut e = [0; MAX_VARS];
                e[0] = a;
                e[1] = b;
                e[2] = c;
                acc + P::term(BigInt::from(k), e)
            })
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(b.clone() + c.clone()), &a * &b + &a * &c);
        }

        #[test]
        fn substitution_is_a_homomorphism(a in small_poly(), b in small_poly(), img in small_poly()) {
            let imgs = [None, Some(img.clone()), None];
            prop_assert_eq!((&a * &b).substitute(&imgs), &a.substitute(&imgs) * &b.substitute(&imgs));
        }

        #[test]
        fn truncated_product_agrees(a in small_poly(), b in small_poly(), lim in 0u16..6) {
            prop_assert_eq!(a.mul_truncated(&b, 0, lim), (&a * &b).truncate(0, lim));
        }
    }
}
