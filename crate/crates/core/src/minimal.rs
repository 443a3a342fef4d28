//! The sequence of minimal points of `(1, xi, xi^3)`, the index set where
//! three consecutive points span Z^3 rationally, and the integer data
//! attached to consecutive indices of that set.
//!
//! A point with `L(x) < 1/2` has nearest-integer coordinates, so there is one
//! candidate per `x0`, and candidate norms strictly increase with `x0`.
//! Records of `L` along `x0 = 1, 2, ...` are therefore exactly the minimal
//! points.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::forms::{big_phi, cross, delta_of, det3, l_enclosure, phi};
use crate::interval::Interval;
use crate::real::{Independence, RealContext};
use crate::vec3::Vec3Z;

#[derive(Clone, Debug)]
pub struct MinimalPoint {
    /// 1-based position in the sequence.
    pub index: usize,
    pub point: Vec3Z,
    pub norm: BigInt,
    pub err_l: Interval,
    pub delta: Interval,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub block_size: u64,
    pub parallel: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            block_size: 4096,
            parallel: true,
        }
    }
}

fn round_escalating(
    x0: u64,
    ctx: &RealContext,
    f: impl Fn(&RealContext) -> Interval,
    what: &str,
) -> Result<BigInt> {
    let mut owned: Option<RealContext> = None;
    loop {
        let cur = owned.as_ref().unwrap_or(ctx);
        if let Some(r) = f(cur).round_nearest() {
            return Ok(r);
        }
        owned = Some(cur.escalate(what, &x0.to_string())?);
    }
}

/// `(x0, round(x0 xi), round(x0 xi^3))`, each rounding certified.
pub fn candidate_for(x0: u64, ctx: &RealContext) -> Result<Vec3Z> {
    if x0 == 0 {
        return Err(LabError::InvalidArgument("x0 must be positive".into()));
    }
    let k = BigInt::from(x0);
    let x1 = round_escalating(x0, ctx, |c| c.xi().mul_int(&k), "rounding x0*xi")?;
    let x2 = round_escalating(x0, ctx, |c| c.xi3().mul_int(&k), "rounding x0*xi^3")?;
    Ok(Vec3Z::new(k, x1, x2))
}

/// Largest `x0` whose candidate can have norm at most `bound`.
fn x0_limit(ctx: &RealContext, bound: u64) -> u64 {
    // norm >= x0, and norm >= |x0 xi^3| - 1/2
    let m = ctx.xi3().abs().lo();
    if m <= BigRational::one() {
        return bound;
    }
    let lim = (BigRational::from_integer(bound.into()) + BigRational::new(1.into(), 2.into())) / m;
    lim.floor().to_integer().to_u64().unwrap_or(bound).min(bound)
}

/// Local records of one contiguous block of `x0`, in increasing order.
fn block_records(lo: u64, hi: u64, ctx: &RealContext, bound: &BigInt) -> Result<Vec<Vec3Z>> {
    let half = Interval::from_rational(&BigRational::new(1.into(), 2.into()), 2);
    let mut out: Vec<Vec3Z> = Vec::new();
    let mut best: Option<(Vec3Z, Interval)> = None;
    for x0 in lo..hi {
        let x = candidate_for(x0, ctx)?;
        if x.sup_norm() > *bound {
            break;
        }
        let lx = l_enclosure(&x, ctx);
        let enters = match &best {
            None => strictly_below_half(&x, &lx, ctx, &half)?,
            Some((b, lb)) => {
                if lx.certainly_lt(lb) {
                    true
                } else if lb.certainly_lt(&lx) {
                    false
                } else {
                    crate::forms::compare_l(&x, b, ctx)?.0 == Ordering::Less
                }
            }
        };
        if enters {
            best = Some((x.clone(), lx));
            out.push(x);
        }
    }
    Ok(out)
}

fn strictly_below_half(x: &Vec3Z, lx: &Interval, ctx: &RealContext, half: &Interval) -> Result<bool> {
    if lx.certainly_lt(half) {
        return Ok(true);
    }
    if half.certainly_lt(lx) {
        return Ok(false);
    }
    let mut cur = ctx.escalate("comparing L with 1/2", &x.x0().to_string())?;
    loop {
        let l = l_enclosure(x, &cur);
        if l.certainly_lt(half) {
            return Ok(true);
        }
        if half.certainly_lt(&l) {
            return Ok(false);
        }
        cur = cur.escalate("comparing L with 1/2", &x.x0().to_string())?;
    }
}

/// Minimal points with norm at most `norm_bound`.
pub fn minimal_sequence(ctx: &RealContext, norm_bound: u64) -> Result<Vec<MinimalPoint>> {
    minimal_sequence_with(ctx, norm_bound, ScanOptions::default())
}

pub fn minimal_sequence_with(
    ctx: &RealContext,
    norm_bound: u64,
    opts: ScanOptions,
) -> Result<Vec<MinimalPoint>> {
    if norm_bound < 1 {
        return Err(LabError::InvalidArgument("norm bound must be at least 1".into()));
    }
    if let Independence::Assumed(why) = ctx.source().independence() {
        log::warn!("assuming 1, xi, xi^3 independent ({why})");
    }
    let limit = x0_limit(ctx, norm_bound);
    let bound = BigInt::from(norm_bound);
    let bs = opts.block_size.max(1);
    let blocks: Vec<(u64, u64)> = (0..limit.div_ceil(bs))
        .map(|b| (1 + b * bs, (1 + (b + 1) * bs).min(limit + 1)))
        .collect();
    let locals: Vec<Result<Vec<Vec3Z>>> = if opts.parallel {
        blocks
            .par_iter()
            .map(|&(lo, hi)| block_records(lo, hi, ctx, &bound))
            .collect()
    } else {
        blocks
            .iter()
            .map(|&(lo, hi)| block_records(lo, hi, ctx, &bound))
            .collect()
    };
    // Ordered merge: a global record is a local record below every earlier global one.
    let mut points: Vec<Vec3Z> = Vec::new();
    for local in locals {
        for x in local? {
            let enters = match points.last() {
                None => true,
                Some(prev) => crate::forms::compare_l(&x, prev, ctx)?.0 == Ordering::Less,
            };
            if enters {
                points.push(x);
            }
        }
    }
    finalize(points, ctx)
}

/// Attach enclosures at the least precision (from `ctx` upward) that
/// certifies `1/2 > L_1 > L_2 > ...`; independent of how the scan was split.
fn finalize(points: Vec<Vec3Z>, ctx: &RealContext) -> Result<Vec<MinimalPoint>> {
    for x in &points {
        if !x.is_primitive() {
            return Err(LabError::InvariantViolation(format!(
                "minimal point {x} is not primitive"
            )));
        }
    }
    let half = Interval::from_rational(&BigRational::new(1.into(), 2.into()), 2);
    let mut cur = ctx.clone();
    loop {
        let ls: Vec<Interval> = points.iter().map(|x| l_enclosure(x, &cur)).collect();
        let ordered = ls.first().is_none_or(|l| l.certainly_lt(&half))
            && ls.windows(2).all(|w| w[1].certainly_lt(&w[0]));
        if ordered {
            return Ok(points
                .into_iter()
                .zip(ls)
                .enumerate()
                .map(|(k, (x, l))| MinimalPoint {
                    index: k + 1,
                    norm: x.sup_norm(),
                    delta: delta_of(&x, &cur),
                    err_l: l,
                    point: x,
                })
                .collect());
        }
        let x0 = points.last().map(|x| x.x0().to_string()).unwrap_or_default();
        cur = cur.escalate("certifying the record order", &x0)?;
    }
}

/// 1-based indices `i` with `det(x_{i-1}, x_i, x_{i+1}) != 0`.
pub fn independence_set(seq: &[MinimalPoint]) -> Vec<usize> {
    independence_set_of(&seq.iter().map(|m| m.point.clone()).collect::<Vec<_>>())
}

pub fn independence_set_of(points: &[Vec3Z]) -> Vec<usize> {
    (1..points.len().saturating_sub(1))
        .filter(|&k| !det3(&points[k - 1], &points[k], &points[k + 1]).is_zero())
        .map(|k| k + 1)
        .collect()
}

/// The integers `(p, q)` with `xj = p xi + q xip1`.
pub fn decompose_pair(xi: &Vec3Z, xip1: &Vec3Z, xj: &Vec3Z) -> Result<(BigInt, BigInt)> {
    let not_in_span = || LabError::NotInSpan {
        base0: xi.to_string(),
        base1: xip1.to_string(),
        target: xj.to_string(),
    };
    let w = cross(xi, xip1);
    let k = w.0.iter().position(|c| !c.is_zero()).ok_or_else(not_in_span)?;
    // xi ^ xj = q (xi ^ xip1) and xj ^ xip1 = p (xi ^ xip1)
    let wq = cross(xi, xj);
    let wp = cross(xj, xip1);
    let (q, rq) = wq.0[k].div_rem(&w.0[k]);
    let (p, rp) = wp.0[k].div_rem(&w.0[k]);
    if !rq.is_zero() || !rp.is_zero() {
        return Err(not_in_span());
    }
    if xi.scale(&p) + xip1.scale(&q) != *xj {
        return Err(not_in_span());
    }
    Ok((p, q))
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub x_i: Vec3Z,
    pub x_ip1: Vec3Z,
    pub x_j: Vec3Z,
    #[serde(serialize_with = "ser_big")]
    pub p: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub q: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub s: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub t: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub u: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub v: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub a: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub b: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub f: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub d2: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub d3: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub d6: BigInt,
    /// Squared Euclidean norm of `x_i ^ x_{i+1}`.
    #[serde(serialize_with = "ser_big")]
    pub height_sq: BigInt,
}

pub(crate) fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Values of the invariants at a pair of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairInvariants {
    pub s: BigInt,
    pub t: BigInt,
    pub u: BigInt,
    pub v: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub f: BigInt,
    pub d2: BigInt,
    pub d3: BigInt,
    pub d6: BigInt,
}

impl PairInvariants {
    pub fn of(x: &Vec3Z, y: &Vec3Z) -> Self {
        let s = phi(x);
        let t = big_phi(x, x, y);
        let u = big_phi(x, y, y);
        let v = phi(y);
        Self::from_stuv(s, t, u, v)
    }

    pub fn from_stuv(s: BigInt, t: BigInt, u: BigInt, v: BigInt) -> Self {
        let su = &s * &u;
        let a = &t * &t - 3 * &su;
        let f = &t * &t - 4 * &su;
        let w = &s * &s * &v;
        let b = -2 * t.pow(3) + 9 * &t * &su - 27 * &w;
        let f2 = &f * &f;
        let f3 = &f2 * &f;
        let w2 = &w * &w;
        let t2 = &t * &t;
        let d2 = &f3 + 27 * &w2;
        let d3 = &f3 - 18 * &t * &f * &w - 135 * &w2;
        let d6 = &t * &f2 * &f2 + 10 * &f3 * &w - 11 * &t2 * &f2 * &w - 180 * &t * &f * &w2
            - &t2 * &t * &w2
            - 675 * &w2 * &w;
        PairInvariants { s, t, u, v, a, b, f, d2, d3, d6 }
    }

    /// `S^2 V`.
    pub fn w(&self) -> BigInt {
        &self.s * &self.s * &self.v
    }
}

impl PairRecord {
    pub fn invariants(&self) -> PairInvariants {
        PairInvariants {
            s: self.s.clone(),
            t: self.t.clone(),
            u: self.u.clone(),
            v: self.v.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
            f: self.f.clone(),
            d2: self.d2.clone(),
            d3: self.d3.clone(),
            d6: self.d6.clone(),
        }
    }

    pub fn w(&self) -> BigInt {
        &self.s * &self.s * &self.v
    }

    pub fn build(i: usize, j: usize, x_i: &Vec3Z, x_ip1: &Vec3Z, x_j: &Vec3Z) -> Result<Self> {
        let (p, q) = decompose_pair(x_i, x_ip1, x_j)?;
        let inv = PairInvariants::of(x_i, x_j);
        Ok(PairRecord {
            i,
            j,
            x_i: x_i.clone(),
            x_ip1: x_ip1.clone(),
            x_j: x_j.clone(),
            p,
            q,
            s: inv.s,
            t: inv.t,
            u: inv.u,
            v: inv.v,
            a: inv.a,
            b: inv.b,
            f: inv.f,
            d2: inv.d2,
            d3: inv.d3,
            d6: inv.d6,
            height_sq: cross(x_i, x_ip1).norm_sq(),
        })
    }
}

/// One record per consecutive pair `i < j` of `index_set` (1-based indices into `seq`).
pub fn build_pair_records(seq: &[MinimalPoint], index_set: &[usize]) -> Result<Vec<PairRecord>> {
    let pt = |k: usize| &seq[k - 1].point;
    index_set
        .windows(2)
        .map(|w| {
            let (i, j) = (w[0], w[1]);
            PairRecord::build(i, j, pt(i), pt(i + 1), pt(j))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: i64, b: i64, c: i64) -> Vec3Z {
        Vec3Z::from_i64(a, b, c)
    }

    fn z(k: i64) -> BigInt {
        BigInt::from(k)
    }

    fn ctx() -> RealContext {
        RealContext::from_spec("alg:x^4-2 in [1,2]", 64).unwrap()
    }

    #[test]
    fn candidates() {
        let c = ctx();
        assert_eq!(candidate_for(1, &c).unwrap(), v(1, 1, 2));
        assert_eq!(candidate_for(4, &c).unwrap(), v(4, 5, 7));
        let near_half = RealContext::from_spec("dec:0.50000000000000000000001", 64).unwrap();
        assert_eq!(candidate_for(1, &near_half).unwrap(), v(1, 1, 0));
    }

    #[test]
    fn first_points() {
        let seq = minimal_sequence(&ctx(), 10).unwrap();
        let pts: Vec<Vec3Z> = seq.iter().map(|m| m.point.clone()).collect();
        assert_eq!(pts[..2], [v(1, 1, 2), v(4, 5, 7)]);
        // L(6,7,10) is about 0.135 < L(4,5,7)
        assert_eq!(pts[2..], [v(6, 7, 10)]);
        assert_eq!(seq[0].index, 1);
        assert_eq!(seq[1].norm, z(7));
        assert!(minimal_sequence(&ctx(), 1).unwrap().is_empty());
    }

    #[test]
    fn parallel_matches_serial() {
        let c = ctx();
        let serial = minimal_sequence_with(&c, 50_000, ScanOptions { block_size: 1 << 20, parallel: false }).unwrap();
        for bs in [1, 7, 1000] {
            let par = minimal_sequence_with(&c, 50_000, ScanOptions { block_size: bs, parallel: true }).unwrap();
            assert_eq!(serial.len(), par.len());
            for (a, b) in serial.iter().zip(&par) {
                assert_eq!(a.point, b.point);
                assert_eq!(a.err_l, b.err_l);
            }
        }
    }

    #[test]
    fn sequence_invariants() {
        let seq = minimal_sequence(&ctx(), 100_000).unwrap();
        for w in seq.windows(2) {
            assert!(w[0].norm < w[1].norm);
            assert!(w[1].err_l.certainly_lt(&w[0].err_l));
            assert!(!cross(&w[0].point, &w[1].point).is_zero());
        }
        assert!(seq.iter().all(|m| m.point.is_primitive()));
        assert!(!independence_set(&seq).is_empty());
    }

    #[test]
    fn independence_set_examples() {
        assert_eq!(independence_set_of(&[v(1, 0, 0), v(0, 1, 0), v(0, 0, 1)]), vec![2]);
        assert!(independence_set_of(&[v(1, 0, 0), v(0, 1, 0), v(1, 1, 0)]).is_empty());
    }

    #[test]
    fn decompositions() {
        assert_eq!(decompose_pair(&v(1, 0, 0), &v(0, 1, 0), &v(3, 5, 0)).unwrap(), (z(3), z(5)));
        let (a, b) = (v(1, 1, 2), v(4, 5, 7));
        assert_eq!(decompose_pair(&a, &b, &b).unwrap(), (z(0), z(1)));
        assert!(matches!(
            decompose_pair(&v(1, 0, 0), &v(0, 1, 0), &v(0, 0, 1)),
            Err(LabError::NotInSpan { .. })
        ));
        assert!(matches!(
            decompose_pair(&v(2, 0, 0), &v(0, 1, 0), &v(1, 0, 0)),
            Err(LabError::NotInSpan { .. })
        ));
    }

    #[test]
    fn synthetic_pair_record() {
        let r = PairRecord::build(1, 3, &v(1, 0, 0), &v(0, 1, 0), &v(2, 3, 0)).unwrap();
        assert_eq!((r.p.clone(), r.q.clone()), (z(2), z(3)));
        assert_eq!((r.s.clone(), r.t.clone(), r.u.clone()), (z(0), z(0), z(0)));
        assert_eq!(r.v, z(-27));
        assert_eq!(r.a, z(0));
        assert_eq!(r.b, z(0));
        assert_eq!(r.f, z(0));
        assert_eq!(r.height_sq, z(1));
    }

    #[test]
    fn invariant_identities_on_records() {
        let seq = minimal_sequence(&ctx(), 100_000).unwrap();
        let idx = independence_set(&seq);
        let recs = build_pair_records(&seq, &idx).unwrap();
        assert_eq!(recs.len() + 1, idx.len());
        for (r, next) in recs.iter().zip(recs.iter().skip(1)) {
            assert_eq!(r.v, next.s);
        }
        for r in &recs {
            assert_eq!(4 * &r.a, &r.t * &r.t + 3 * &r.f);
            assert_eq!(4 * &r.b, r.t.pow(3) - 9 * &r.t * &r.f - 108 * r.w());
            assert_eq!(cross(&r.x_i, &r.x_j), cross(&r.x_i, &r.x_ip1).scale(&r.q));
            assert!(!r.q.is_zero());
        }
    }
}
