//! The cubic form `phi(x) = x0^2 x2 - x1^3`, its trilinear polarization and
//! the polynomials built from them.
//!
//! Everything here is generic over a commutative ring so the same code
//! evaluates on integer points and on symbolic polynomials (see
//! [`crate::mpoly`]), which is how the polynomial identities are checked.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::error::Result;
use crate::interval::Interval;
use crate::real::RealContext;
use crate::vec3::{Vec3, Vec3Z};

pub trait FormScalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + From<i32>
{
}

impl<R> FormScalar for R where
    R: Clone + Add<Output = R> + Sub<Output = R> + Mul<Output = R> + Neg<Output = R> + From<i32>
{
}

fn c<R: FormScalar>(k: i32) -> R {
    R::from(k)
}

/// `x0^2 x2 - x1^3`.
pub fn phi<R: FormScalar>(x: &Vec3<R>) -> R {
    let [x0, x1, x2] = &x.0;
    x0.clone() * x0.clone() * x2.clone() - x1.clone() * x1.clone() * x1.clone()
}

/// Symmetric trilinear form with `big_phi(x, x, x) = 3 phi(x)`.
pub fn big_phi<R: FormScalar>(x: &Vec3<R>, y: &Vec3<R>, z: &Vec3<R>) -> R {
    let (x, y, z) = (&x.0, &y.0, &z.0);
    x[0].clone() * y[0].clone() * z[2].clone()
        + x[0].clone() * y[2].clone() * z[0].clone()
        + x[2].clone() * y[0].clone() * z[0].clone()
        - c::<R>(3) * x[1].clone() * y[1].clone() * z[1].clone()
}

/// `Phi(x,x,y)^2 - 4 phi(x) Phi(x,y,y)`.
pub fn big_f<R: FormScalar>(x: &Vec3<R>, y: &Vec3<R>) -> R {
    let t = big_phi(x, x, y);
    t.clone() * t - c::<R>(4) * phi(x) * big_phi(x, y, y)
}

/// `Phi(x,x,y) x - 2 phi(x) y`.
pub fn psi<R: FormScalar>(x: &Vec3<R>, y: &Vec3<R>) -> Vec3<R> {
    let t = big_phi(x, x, y);
    let s2 = c::<R>(2) * phi(x);
    Vec3(std::array::from_fn(|k| {
        t.clone() * x.0[k].clone() - s2.clone() * y.0[k].clone()
    }))
}

/// Polarized variant `Phi(x,u,y)Phi(x,x,y) - Phi(x,x,u)Phi(x,y,y) - phi(x)Phi(u,y,y)`.
pub fn g_form<R: FormScalar>(x: &Vec3<R>, u: &Vec3<R>, y: &Vec3<R>) -> R {
    big_phi(x, u, y) * big_phi(x, x, y)
        - big_phi(x, x, u) * big_phi(x, y, y)
        - phi(x) * big_phi(u, y, y)
}

/// Exterior (cross) product.
pub fn cross<R: FormScalar>(x: &Vec3<R>, y: &Vec3<R>) -> Vec3<R> {
    let (x, y) = (&x.0, &y.0);
    Vec3([
        x[1].clone() * y[2].clone() - x[2].clone() * y[1].clone(),
        x[2].clone() * y[0].clone() - x[0].clone() * y[2].clone(),
        x[0].clone() * y[1].clone() - x[1].clone() * y[0].clone(),
    ])
}

/// `det(a, b, c) = a . (b x c)`.
pub fn det3<R: FormScalar>(a: &Vec3<R>, b: &Vec3<R>, cc: &Vec3<R>) -> R {
    let w = cross(b, cc);
    a.0[0].clone() * w.0[0].clone() + a.0[1].clone() * w.0[1].clone() + a.0[2].clone() * w.0[2].clone()
}

pub fn content(v: &Vec3Z) -> BigInt {
    v.content()
}

/// Enclosure of `delta(x) = 2 x0 xi^3 - 3 x1 xi^2 + x2`.
pub fn delta_of(x: &Vec3Z, ctx: &RealContext) -> Interval {
    let [x0, x1, x2] = &x.0;
    ctx.xi3()
        .mul_int(&(x0 * 2))
        .sub(&ctx.xi2().mul_int(&(x1 * 3)))
        .add_int(x2)
}

/// Enclosure of `L(x) = max(|x1 - x0 xi|, |x2 - x0 xi^3|)` together with the
/// exact sup norm of `x`.
pub fn l_norm(x: &Vec3Z, ctx: &RealContext) -> (Interval, BigInt) {
    (l_enclosure(x, ctx), x.sup_norm())
}

pub(crate) fn l_enclosure(x: &Vec3Z, ctx: &RealContext) -> Interval {
    let [x0, x1, x2] = &x.0;
    let e1 = ctx.xi().mul_int(x0).neg().add_int(x1).abs();
    let e2 = ctx.xi3().mul_int(x0).neg().add_int(x2).abs();
    e1.max(&e2)
}

/// Decide `L(x) < L(y)` strictly, escalating precision until the enclosures
/// separate. Returns the context that was finally used.
pub fn compare_l(
    x: &Vec3Z,
    y: &Vec3Z,
    ctx: &RealContext,
) -> Result<(std::cmp::Ordering, Option<RealContext>)> {
    let mut owned: Option<RealContext> = None;
    loop {
        let cur = owned.as_ref().unwrap_or(ctx);
        let lx = l_enclosure(x, cur);
        let ly = l_enclosure(y, cur);
        if lx.certainly_lt(&ly) {
            return Ok((std::cmp::Ordering::Less, owned));
        }
        if ly.certainly_lt(&lx) {
            return Ok((std::cmp::Ordering::Greater, owned));
        }
        if x == y || *x == -y.clone() {
            return Ok((std::cmp::Ordering::Equal, owned));
        }
        owned = Some(cur.escalate(&format!("comparing L{x} with L{y}"), &x.x0().to_string())?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(a: i64, b: i64, c: i64) -> Vec3Z {
        Vec3Z::from_i64(a, b, c)
    }

    fn z(k: i64) -> BigInt {
        BigInt::from(k)
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&v(1, 1, 1)), z(0));
        assert_eq!(phi(&v(8, 4, 1)), z(0));
        assert_eq!(phi(&v(1, 2, 3)), z(-5));
    }

    #[test]
    fn big_phi_examples() {
        let x = v(1, 2, 3);
        assert_eq!(big_phi(&x, &x, &x), z(-15));
        assert_eq!(big_phi(&v(1, 0, 0), &v(1, 0, 0), &v(0, 0, 1)), z(1));
        assert_eq!(big_phi(&v(1, 1, 1), &v(1, 0, 0), &v(0, 1, 0)), z(0));
    }

    #[test]
    fn big_f_examples() {
        let x = v(1, 2, 3);
        assert_eq!(big_f(&x, &x), z(-75));
        assert_eq!(big_f(&v(1, 0, 0), &v(0, 0, 5)), z(25));
    }

    #[test]
    fn psi_examples() {
        let x = v(1, 2, 3);
        assert_eq!(psi(&x, &x), v(-5, -10, -15));
        assert_eq!(psi(&v(1, 0, 0), &v(0, 1, 0)), v(0, 0, 0));
        // Lemma identity on a fixed pair.
        let (x, y) = (v(1, 1, 2), v(1, 0, 1));
        let lhs = phi(&psi(&x, &y));
        let rhs = -phi(&x) * big_phi(&x, &x, &y) * big_f(&x, &y)
            - z(8) * phi(&x).pow(3) * phi(&y);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn g_form_examples() {
        assert_eq!(g_form(&v(1, 0, 0), &v(0, 1, 0), &v(0, 0, 1)), z(0));
        let o = v(1, 1, 1);
        assert_eq!(g_form(&o, &o, &o), z(0));
        let (x, y) = (v(3, -2, 7), v(-1, 4, 5));
        assert_eq!(g_form(&x, &x, &y), big_f(&x, &y));
    }

    #[test]
    fn cross_examples() {
        assert_eq!(cross(&v(1, 0, 0), &v(0, 1, 0)), v(0, 0, 1));
        let x = v(4, 5, 7);
        assert_eq!(cross(&x, &x), v(0, 0, 0));
        assert_eq!(cross(&v(1, 1, 2), &v(4, 5, 7)), v(-3, 1, 1));
    }

    #[test]
    fn content_examples() {
        assert_eq!(content(&v(2, 4, 6)), z(2));
        assert_eq!(content(&v(0, 0, 0)), z(0));
        assert_eq!(content(&v(-3, 1, 1)), z(1));
    }

    fn triple() -> impl Strategy<Value = Vec3Z> {
        (-50i64..=50, -50i64..=50, -50i64..=50).prop_map(|(a, b, c)| v(a, b, c))
    }

    proptest! {
        #[test]
        fn big_phi_is_symmetric(x in triple(), y in triple(), w in triple()) {
            let base = big_phi(&x, &y, &w);
            prop_assert_eq!(&base, &big_phi(&x, &w, &y));
            prop_assert_eq!(&base, &big_phi(&y, &x, &w));
            prop_assert_eq!(&base, &big_phi(&y, &w, &x));
            prop_assert_eq!(&base, &big_phi(&w, &x, &y));
            prop_assert_eq!(&base, &big_phi(&w, &y, &x));
        }

        #[test]
        fn polarization(x in triple()) {
            prop_assert_eq!(big_phi(&x, &x, &x), phi(&x) * 3);
        }

        #[test]
        fn multilinear_expansion(x in triple(), y in triple(), a in -20i64..=20, b in -20i64..=20) {
            let (a, b) = (z(a), z(b));
            let comb = x.scale(&a) + y.scale(&b);
            let rhs = a.pow(3) * phi(&x)
                + &a * &a * &b * big_phi(&x, &x, &y)
                + &a * &b * &b * big_phi(&x, &y, &y)
                + b.pow(3) * phi(&y);
            prop_assert_eq!(phi(&comb), rhs);
        }

        #[test]
        fn psi_identity(x in triple(), y in triple()) {
            let lhs = phi(&psi(&x, &y));
            let rhs = -phi(&x) * big_phi(&x, &x, &y) * big_f(&x, &y)
                - z(8) * phi(&x).pow(3) * phi(&y);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cross_is_orthogonal(x in triple(), y in triple()) {
            let w = cross(&x, &y);
            prop_assert_eq!(w.dot(&x), z(0));
            prop_assert_eq!(w.dot(&y), z(0));
        }

        #[test]
        fn g_degenerates_to_f(x in triple(), y in triple()) {
            prop_assert_eq!(g_form(&x, &x, &y), big_f(&x, &y));
        }
    }
}
