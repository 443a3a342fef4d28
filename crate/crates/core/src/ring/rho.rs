use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::elem::RingElem;
use super::{basis_of, tau};
use crate::error::{LabError, Result};
use crate::linalg::Echelon;
use crate::mpoly::{MPoly, MAX_VARS};

/// Polynomial in `q, S, T, U, V` (variable indices below).
pub type ExpandedPoly = MPoly<BigRational>;

pub const Q: usize = 0;
pub const S: usize = 1;
pub const T: usize = 2;
pub const U: usize = 3;
pub const V: usize = 4;
pub const VAR_NAMES: [&str; 5] = ["q", "S", "T", "U", "V"];

type ZPoly = MPoly<BigInt>;

fn zvar(i: usize) -> ZPoly {
    ZPoly::var(i)
}

fn zc(k: i32) -> ZPoly {
    ZPoly::from(k)
}

/// `F = T^2 - 4SU` in the expanded variables.
fn f_expanded() -> ZPoly {
    zvar(T) * zvar(T) - zc(4) * zvar(S) * zvar(U)
}

/// `S^2 V`.
fn w_expanded() -> ZPoly {
    zvar(S) * zvar(S) * zvar(V)
}

/// Unique representative of `e` in `Q[S, T, U, V]`.
pub fn expand(e: &RingElem) -> ExpandedPoly {
    let t = zvar(T);
    let f = f_expanded();
    let w = w_expanded();
    let mut tp: HashMap<u32, ZPoly> = HashMap::new();
    let mut fp: HashMap<u32, ZPoly> = HashMap::new();
    let mut wp: HashMap<u32, ZPoly> = HashMap::new();
    let mut out = ExpandedPoly::zero();
    for (&(m, n), c) in e.coeffs() {
        let a = e.t_exponent((m, n));
        let tt = tp.entry(a).or_insert_with(|| t.pow(a)).clone();
        let ff = fp.entry(m).or_insert_with(|| f.pow(m)).clone();
        let ww = wp.entry(n).or_insert_with(|| w.pow(n)).clone();
        out = out + (tt * ff * ww).to_rational().scale(c);
    }
    out
}

/// Images of the variables under `rho`: `T -> 3S + qT`, `U -> 3S + 2qT + q^2 U`,
/// `V -> S + qT + q^2 U + q^3 V`, `S` fixed.
fn rho_images() -> Vec<Option<ZPoly>> {
    let q = zvar(Q);
    let (s, t, u, v) = (zvar(S), zvar(T), zvar(U), zvar(V));
    let q2 = &q * &q;
    let q3 = &q2 * &q;
    vec![
        None,
        None,
        Some(zc(3) * s.clone() + &q * &t),
        Some(zc(3) * s.clone() + zc(2) * (&q * &t) + &q2 * &u),
        Some(s + &q * &t + &q2 * &u + &q3 * &v),
    ]
}

/// Apply `rho` to a polynomial free of `q`.
pub fn rho(p: &ExpandedPoly) -> ExpandedPoly {
    assert!(
        p.max_degree(Q).unwrap_or(0) == 0,
        "rho is defined on polynomials free of q"
    );
    let imgs: Vec<Option<ExpandedPoly>> = rho_images()
        .into_iter()
        .map(|o| o.map(|z| z.to_rational()))
        .collect();
    p.substitute(&imgs)
}

/// `rho` images of the generators `T`, `F`, `S^2 V`, computed directly.
fn generator_images() -> (ZPoly, ZPoly, ZPoly) {
    let q = zvar(Q);
    let (s, t) = (zvar(S), zvar(T));
    let rt = zc(3) * s.clone() + &q * &t;
    // rho(F) = -3S^2 - 2qST + q^2 F
    let rf = zc(-3) * (&s * &s) + zc(-2) * (&q * &(&s * &t)) + &(&q * &q) * &f_expanded();
    // rho(S^2 V) = S^2 (S + qT + q^2 U + q^3 V)
    let rw = &(&s * &s) * rho_images()[V].as_ref().expect("image of V");
    (rt, rf, rw)
}

/// Integer columns `rho(T^(d-2m-3n) F^m (S^2V)^n) mod q^limit`, one per index.
pub fn rho_columns(degree: u32, support: &[(u32, u32)], limit: u16) -> Vec<MPoly<BigInt>> {
    let (rt, rf, rw) = generator_images();
    // F^m (S^2V)^n products, memoized along n then m
    let mut fw: BTreeMap<(u32, u32), ZPoly> = BTreeMap::new();
    let max_m = support.iter().map(|k| k.0).max().unwrap_or(0);
    let max_n = support.iter().map(|k| k.1).max().unwrap_or(0);
    let one = ZPoly::from(1);
    let mut wpow = vec![one];
    for n in 1..=max_n {
        let next = wpow[n as usize - 1].mul_truncated(&rw, Q, limit);
        wpow.push(next);
    }
    let needed: std::collections::BTreeSet<(u32, u32)> = support.iter().copied().collect();
    for n in 0..=max_n {
        let mut cur = wpow[n as usize].clone();
        let top = needed.iter().filter(|k| k.1 == n).map(|k| k.0).max();
        let Some(top) = top else { continue };
        for m in 0..=top.min(max_m) {
            if m > 0 {
                cur = cur.mul_truncated(&rf, Q, limit);
            }
            if needed.contains(&(m, n)) {
                fw.insert((m, n), cur.clone());
            }
        }
    }
    support
        .par_iter()
        .map(|&(m, n)| {
            let a = degree - 2 * m - 3 * n;
            let mut col = fw[&(m, n)].clone();
            for _ in 0..a {
                col = col.mul_truncated(&rt, Q, limit);
            }
            col
        })
        .collect()
}

/// Rows of the linear map coefficient-vector -> coefficient of `q^level`.
fn level_rows(cols: &[MPoly<BigInt>], level: u16) -> Vec<Vec<BigInt>> {
    let mut rows: BTreeMap<[u16; MAX_VARS], Vec<BigInt>> = BTreeMap::new();
    for (j, c) in cols.iter().enumerate() {
        for (e, v) in c.terms() {
            if e[Q] != level {
                continue;
            }
            rows.entry(*e).or_insert_with(|| vec![BigInt::zero(); cols.len()])[j] = v.clone();
        }
    }
    rows.into_values().collect()
}

/// Dimensions of `span(support) ∩ J^(k)` in `R_degree` for `k = 0..=limit`,
/// with the echelon data needed to produce bases.
#[derive(Clone, Debug)]
pub struct Filtration {
    degree: u32,
    support: Vec<(u32, u32)>,
    // echelon of the conditions for q^0 .. q^(k-1), for each k
    stages: Vec<Echelon>,
}

impl Filtration {
    pub fn new(degree: u32, support: &[(u32, u32)], limit: u32) -> Self {
        let mut support = support.to_vec();
        support.sort();
        support.dedup();
        let lim = u16::try_from(limit).expect("filtration limit fits u16");
        let cols = rho_columns(degree, &support, lim);
        let mut e = Echelon::new(support.len());
        let mut stages = vec![e.clone()];
        for level in 0..lim {
            if e.nullity() > 0 {
                for r in level_rows(&cols, level) {
                    e.insert(r);
                }
            }
            stages.push(e.clone());
        }
        Filtration {
            degree,
            support,
            stages,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn support(&self) -> &[(u32, u32)] {
        &self.support
    }

    pub fn limit(&self) -> u32 {
        self.stages.len() as u32 - 1
    }

    pub fn dim(&self, k: u32) -> usize {
        self.stages[k as usize].nullity()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.stages.iter().map(Echelon::nullity).collect()
    }

    /// Basis of `span(support) ∩ J^(k)`, canonical (reduced, content 1).
    pub fn basis(&self, k: u32) -> Vec<RingElem> {
        self.stages[k as usize]
            .nullspace()
            .into_iter()
            .map(|v| {
                RingElem::from_coeffs(
                    self.degree,
                    self.support
                        .iter()
                        .zip(v)
                        .map(|(key, c)| (*key, BigRational::from_integer(c))),
                )
                .expect("support fits the degree")
            })
            .collect()
    }
}

/// Basis of `R_l ∩ J^(k)`.
pub fn j_subspace(l: u32, k: u32) -> Vec<RingElem> {
    Filtration::new(l, &basis_of(l), k).basis(k)
}

/// Largest `k` with `q^k | rho(e)`, from truncated integer columns.
pub fn j_valuation(e: &RingElem) -> Result<u32> {
    if e.is_zero() {
        return Err(LabError::ZeroElement);
    }
    let support = e.support();
    let limit = e.degree() + 1;
    let cols = rho_columns(e.degree(), &support, limit as u16);
    let mut acc = ExpandedPoly::zero();
    for (key, col) in support.iter().zip(&cols) {
        acc = acc + col.to_rational().scale(&e.coeff(*key));
    }
    match acc.min_degree(Q) {
        Some(k) => Ok(k as u32),
        // divisible by q^(l+1): only possible if the dimension theorem failed
        None => j_valuation_symbolic(e),
    }
}

/// Same valuation via the full symbolic route `rho(expand(e))`.
pub fn j_valuation_symbolic(e: &RingElem) -> Result<u32> {
    if e.is_zero() {
        return Err(LabError::ZeroElement);
    }
    Ok(rho(&expand(e)).min_degree(Q).expect("rho is injective") as u32)
}

/// `dim R_l ∩ J^(k)` as predicted: `tau(l) - tau(k-1)` for `k <= l`, else 0.
pub fn expected_dim(l: u32, k: u32) -> usize {
    if k > l {
        0
    } else {
        tau(l as i64) - tau(k as i64 - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::named;
    use proptest::prelude::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn var(i: usize) -> ExpandedPoly {
        ExpandedPoly::var(i)
    }

    #[test]
    fn expand_examples() {
        let f = expand(&named("F").unwrap());
        assert_eq!(f, var(T) * var(T) - ExpandedPoly::from(4) * var(S) * var(U));
        let a = expand(&named("A").unwrap());
        assert_eq!(a, var(T) * var(T) - ExpandedPoly::from(3) * var(S) * var(U));
        assert_eq!(expand(&named("S2V").unwrap()), var(S) * var(S) * var(V));
    }

    #[test]
    fn rho_examples() {
        let q = var(Q);
        assert_eq!(rho(&var(S)), var(S));
        assert_eq!(rho(&var(T)), ExpandedPoly::from(3) * var(S) + &q * &var(T));
        let a = expand(&named("A").unwrap());
        assert_eq!(rho(&a), &(&q * &q) * &a);
        let b = expand(&named("B").unwrap());
        assert_eq!(rho(&b), &(&(&q * &q) * &q) * &b);
    }

    #[test]
    fn generator_images_agree_with_substitution() {
        let (rt, rf, rw) = generator_images();
        assert_eq!(rt.to_rational(), rho(&expand(&named("T").unwrap())));
        assert_eq!(rf.to_rational(), rho(&expand(&named("F").unwrap())));
        assert_eq!(rw.to_rational(), rho(&expand(&named("S2V").unwrap())));
    }

    #[test]
    fn named_valuations() {
        let v = |n: &str| j_valuation(&named(n).unwrap()).unwrap();
        assert_eq!(v("T"), 0);
        assert_eq!(v("S2V"), 0);
        assert_eq!(v("A"), 2);
        assert_eq!(v("B"), 3);
        assert!(v("M") >= 2);
        assert!(v("D2") >= 2);
        assert!(v("D3") >= 3);
        assert!(v("D6") >= 6);
        for n in super::super::NAMES {
            let e = named(n).unwrap();
            assert_eq!(j_valuation(&e).unwrap(), j_valuation_symbolic(&e).unwrap(), "{n}");
        }
        assert!(matches!(j_valuation(&RingElem::zero(3)), Err(LabError::ZeroElement)));
    }

    #[test]
    fn dimension_table_small() {
        for l in 0..=6u32 {
            let f = Filtration::new(l, &basis_of(l), l + 2);
            for k in 0..=l + 2 {
                assert_eq!(f.dim(k), expected_dim(l, k), "l={l} k={k}");
            }
        }
        assert_eq!(j_subspace(6, 2).len(), 6);
        assert!(j_subspace(6, 7).is_empty());
        assert_eq!(j_subspace(4, 0).len(), tau(4));
    }

    #[test]
    fn subspace_members_have_valuation() {
        for v in j_subspace(6, 3) {
            assert!(j_valuation(&v).unwrap() >= 3);
        }
    }

    fn ring_elem(deg: u32) -> impl Strategy<Value = RingElem> {
        let keys = basis_of(deg);
        proptest::collection::vec(-4i64..=4, keys.len()).prop_map(move |cs| {
            RingElem::from_coeffs(deg, keys.iter().copied().zip(cs.into_iter().map(r))).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rho_is_multiplicative(a in ring_elem(3), b in ring_elem(2)) {
            let (ea, eb) = (expand(&a), expand(&b));
            prop_assert_eq!(rho(&(&ea * &eb)), &rho(&ea) * &rho(&eb));
        }

        #[test]
        fn valuation_is_additive(a in ring_elem(3), b in ring_elem(4)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let va = j_valuation(&a).unwrap();
            let vb = j_valuation(&b).unwrap();
            prop_assert_eq!(j_valuation(&a.mul(&b)).unwrap(), va + vb);
        }

        #[test]
        fn fast_and_symbolic_valuations_agree(a in ring_elem(5)) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!(j_valuation(&a).unwrap(), j_valuation_symbolic(&a).unwrap());
        }
    }
}
