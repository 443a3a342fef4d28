//! Linear-algebra searches in `R`: elements of maximal J-valuation on a
//! monomial support, the one-parameter family on the supports `E_l`, the
//! decomposition of `H P_l` in the subring `Q[F, G, H]`, lattice-triangle
//! counts, and the logarithmic inequality on pair records.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::interval::Interval;
use crate::linalg::{integer_direction, Echelon};
use crate::mpoly::MPoly;
use crate::ring::{basis_of, named, Filtration, RingElem};

/// Nonempty set of indices `(m, n)` with `2m + 3n <= d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    pub degree: u32,
    pub elems: BTreeSet<(u32, u32)>,
}

impl SupportSet {
    pub fn new(degree: u32, elems: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let elems: BTreeSet<(u32, u32)> = elems.into_iter().collect();
        if elems.is_empty() {
            return Err(LabError::InvalidArgument("support must be nonempty".into()));
        }
        if let Some(k) = elems.iter().find(|&&k| !RingElem::fits(degree, k)) {
            return Err(LabError::InvalidArgument(format!(
                "({}, {}) is outside T_{degree}",
                k.0, k.1
            )));
        }
        Ok(SupportSet { degree, elems })
    }

    /// All of `T_d`.
    pub fn full(degree: u32) -> Self {
        SupportSet {
            degree,
            elems: basis_of(degree).into_iter().collect(),
        }
    }

    /// `T*_{2l}`: the indices spanning `Q[F, G, H]` in degree `2l`.
    pub fn s_cone(two_ell: u32) -> Result<Self> {
        if two_ell % 2 != 0 {
            return Err(LabError::InvalidArgument("degree must be even".into()));
        }
        let l = two_ell / 2;
        Self::new(
            two_ell,
            basis_of(two_ell).into_iter().filter(|&(m, n)| m + 2 * n >= l),
        )
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn as_vec(&self) -> Vec<(u32, u32)> {
        self.elems.iter().copied().collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub k_max: u32,
    pub basis: Vec<RingElem>,
    /// `(k, dim span(E) ∩ J^(k))` for every `k` up to one past `k_max`.
    pub dims: Vec<(u32, usize)>,
    /// Set when the maximal-valuation subspace has dimension above one.
    pub non_unique: bool,
}

/// Elements of maximal J-valuation supported on `s`.
///
/// Every nonzero element of `R_d` has valuation at most `d`, so the
/// conditions for `q^0 .. q^d` suffice; dimensions for all `k` come out of a
/// single incremental elimination.
pub fn maximal_j_element(s: &SupportSet) -> Result<SearchResult> {
    let filt = Filtration::new(s.degree, &s.as_vec(), s.degree + 1);
    let dims = filt.dims();
    let k_max = (0..dims.len())
        .rev()
        .find(|&k| dims[k] > 0)
        .expect("dimension at k = 0 is |E| > 0") as u32;
    if k_max > s.degree {
        return Err(LabError::InvariantViolation(format!(
            "nonzero element of R_{} divisible by q^{}",
            s.degree,
            s.degree + 1
        )));
    }
    let basis = filt.basis(k_max);
    Ok(SearchResult {
        k_max,
        non_unique: basis.len() > 1,
        basis,
        dims: dims
            .iter()
            .enumerate()
            .take(k_max as usize + 2)
            .map(|(k, &d)| (k as u32, d))
            .collect(),
    })
}

/// `E_l = {(m, n): 2m + 3n <= 12l + 2, m/(6l+1) + n/(3l) >= 1}`.
pub fn special_support(ell: i64) -> Result<SupportSet> {
    if ell < 1 {
        return Err(LabError::InvalidEll(ell));
    }
    let l = ell as u32;
    let d = 12 * l + 2;
    // m/(6l+1) + n/(3l) >= 1  <=>  3l m + (6l+1) n >= 3l (6l+1)
    SupportSet::new(
        d,
        basis_of(d)
            .into_iter()
            .filter(|&(m, n)| 3 * l * m + (6 * l + 1) * n >= 3 * l * (6 * l + 1)),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecialFamily {
    pub ell: u32,
    pub degree: u32,
    /// `dim V_l ∩ J^(6l+2)`.
    pub dim: usize,
    /// `dim V_l ∩ J^(6l+3)`.
    pub dim_next: usize,
    pub support_size: usize,
    pub element: RingElem,
    #[serde(serialize_with = "crate::minimal::ser_big")]
    pub anchor_f: BigInt,
    #[serde(serialize_with = "crate::minimal::ser_big")]
    pub anchor_g: BigInt,
}

/// The generator of `V_l ∩ J^(6l+2)`, with coprime integer coefficients and
/// positive coefficient at `(0, 3l)`.
pub fn special_family(ell: i64) -> Result<SpecialFamily> {
    let sup = special_support(ell)?;
    let l = ell as u32;
    let k = 6 * l + 2;
    let filt = Filtration::new(sup.degree, &sup.as_vec(), k + 1);
    let dim = filt.dim(k);
    if dim != 1 {
        return Err(LabError::DimensionMismatch(dim));
    }
    let p = filt.basis(k).remove(0).normalized_at((0, 3 * l));
    let anchor_f = p.coeff((6 * l + 1, 0)).to_integer();
    let anchor_g = p.coeff((0, 3 * l)).to_integer();
    Ok(SpecialFamily {
        ell: l,
        degree: sup.degree,
        dim,
        dim_next: filt.dim(k + 1),
        support_size: sup.len(),
        element: p,
        anchor_f,
        anchor_g,
    })
}

/// `dim S_{2l} ∩ J^(k)`, with `S_{2l}` spanned by the indices of `T*_{2l}`.
pub fn s_subspace_dim(two_ell: u32, k: u32) -> Result<usize> {
    let cone = SupportSet::s_cone(two_ell)?;
    Ok(Filtration::new(two_ell, &cone.as_vec(), k).dim(k))
}

/// Dimensions of `S_{2l} ∩ J^(k)` for `k = 0..=limit`.
pub fn s_subspace_dims(two_ell: u32, limit: u32) -> Result<Vec<usize>> {
    let cone = SupportSet::s_cone(two_ell)?;
    Ok(Filtration::new(two_ell, &cone.as_vec(), limit).dims())
}

/// One named parity or identity check of the decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HpDecomposition {
    pub ell: u32,
    #[serde(serialize_with = "ser_bigs")]
    pub r: Vec<BigInt>,
    #[serde(serialize_with = "ser_bigs")]
    pub s: Vec<BigInt>,
    #[serde(serialize_with = "ser_bigs")]
    pub t: Vec<BigInt>,
    /// Coefficient of `G^(3l+2)` in the `Z[F, G, H]` expansion.
    #[serde(serialize_with = "crate::minimal::ser_big")]
    pub a: BigInt,
    /// Coefficient of `F^(6l+1)` in the rescaled `P_l`.
    #[serde(serialize_with = "crate::minimal::ser_big")]
    pub b: BigInt,
    /// Factor taking the input element to the one with coprime `(r, s, t)`.
    pub scale: String,
    pub checks: Vec<Check>,
}

impl HpDecomposition {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn ser_bigs<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn odd(x: &BigInt) -> bool {
    x.is_odd()
}

/// Coordinates of `H P_l` (`H = S^4 V^2`) in the basis `F^(L-2m-3n) M^m N^n`
/// of `S_{2L}`, `L = 6l + 4`, with the mod-2 consequences checked.
pub fn hp_decompose(p: &RingElem, ell: i64) -> Result<HpDecomposition> {
    if ell < 1 {
        return Err(LabError::InvalidEll(ell));
    }
    let l = ell as u32;
    if p.degree() != 12 * l + 2 {
        return Err(LabError::InvalidArgument(format!(
            "expected an element of degree {}, got {}",
            12 * l + 2,
            p.degree()
        )));
    }
    let h = named("S2V")?.pow(2);
    let hp = h.mul(p);
    let big_l = 6 * l + 4;
    let (f, m, n) = (named("F")?, named("M")?, named("N")?);
    let idx = basis_of(big_l);
    let gens: Vec<RingElem> = idx
        .iter()
        .map(|&(a, b)| f.pow(big_l - 2 * a - 3 * b).mul(&m.pow(a)).mul(&n.pow(b)))
        .collect();
    // Solve hp = sum c_i gens_i: kernel of [gens | hp] over the R_{2L} basis.
    let keys = basis_of(2 * big_l);
    let mut ech = Echelon::new(gens.len() + 1);
    for key in &keys {
        let mut row: Vec<BigRational> = gens.iter().map(|g| g.coeff(*key)).collect();
        row.push(hp.coeff(*key));
        ech.insert_rational(&row);
    }
    let ker = ech.nullspace();
    let sol = match ker.as_slice() {
        [v] if !v[gens.len()].is_zero() => v,
        _ => {
            return Err(LabError::DecompositionFailure(format!(
                "H*P is not a unique combination of F^a M^m N^n (kernel dimension {})",
                ker.len()
            )))
        }
    };
    let denom = -sol[gens.len()].clone();
    let coord = |key: (u32, u32)| -> BigRational {
        idx.iter()
            .position(|&k| k == key)
            .map(|i| BigRational::new(sol[i].clone(), denom.clone()))
            .unwrap_or_else(BigRational::zero)
    };
    let mut allowed: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut rst: Vec<BigRational> = Vec::new();
    for k in 0..=l {
        let keys = [(3 * k, 2 * l - 2 * k + 1), (3 * k + 1, 2 * l - 2 * k), (3 * k + 2, 2 * l - 2 * k)];
        for key in keys {
            allowed.insert(key);
            rst.push(coord(key));
        }
    }
    for (i, key) in idx.iter().enumerate() {
        if !sol[i].is_zero() && !allowed.contains(key) {
            return Err(LabError::DecompositionFailure(format!(
                "unexpected term F^{} M^{} N^{}",
                big_l - 2 * key.0 - 3 * key.1,
                key.0,
                key.1
            )));
        }
    }
    if rst.iter().all(Zero::is_zero) {
        return Err(LabError::DecompositionFailure("all coefficients vanish".into()));
    }
    let ints = integer_direction(&rst);
    let pos = rst.iter().position(|c| !c.is_zero()).unwrap();
    let scale = BigRational::from_integer(ints[pos].clone()) / &rst[pos];
    let (mut r, mut s, mut t) = (Vec::new(), Vec::new(), Vec::new());
    for chunk in ints.chunks(3) {
        r.push(chunk[0].clone());
        s.push(chunk[1].clone());
        t.push(chunk[2].clone());
    }

    // Z[F, G, H] expansion with M = F^2 - 3G, N = F^3 - 18FG - 135H.
    type Z3 = MPoly<BigInt>;
    let (fv, gv, hv) = (Z3::var(0), Z3::var(1), Z3::var(2));
    let mz = &fv * &fv - Z3::from(3) * gv.clone();
    let nz = &(&fv * &fv) * &fv - Z3::from(18) * (&fv * &gv) - Z3::from(135) * hv.clone();
    let mut expansion = Z3::zero();
    for k in 0..=l as usize {
        let tail = &mz.pow(3 * k as u32) * &nz.pow(2 * l - 2 * k as u32);
        let head = (&fv * &nz).scale(&r[k]) + (&(&fv * &fv) * &mz).scale(&s[k]) + (&mz * &mz).scale(&t[k]);
        expansion = expansion + &head * &tail;
    }
    let mut g_exp = [0u16; crate::mpoly::MAX_VARS];
    g_exp[1] = (3 * l + 2) as u16;
    let a = expansion.coeff(&g_exp);
    let h_free_ok = expansion
        .terms()
        .filter(|(e, _)| e[2] == 0)
        .all(|(e, _)| *e == g_exp);

    // Same product computed from the element itself: T^k F^m W^n with W = S^2 V,
    // times H, is F^m G^k H^((n + 2 - k)/2).
    let scaled = p.scale(&scale);
    let mut direct = Z3::zero();
    let mut direct_ok = scaled.is_integral();
    for (&(mm, nn), c) in scaled.coeffs() {
        let k = scaled.t_exponent((mm, nn));
        if k > nn + 2 || (nn + 2 - k) % 2 != 0 || !c.is_integer() {
            direct_ok = false;
            continue;
        }
        let mut e = [0u16; crate::mpoly::MAX_VARS];
        e[0] = mm as u16;
        e[1] = k as u16;
        e[2] = ((nn + 2 - k) / 2) as u16;
        direct = direct + Z3::term(c.to_integer(), e);
    }
    let b_rat = scaled.coeff((6 * l + 1, 0));
    let b = b_rat.to_integer();

    let mut checks = vec![
        Check {
            name: "H*P expands in Z[F,G,H] to the same polynomial both ways".into(),
            pass: direct_ok && direct == expansion,
        },
        Check {
            name: "H-free part is a*G^(3l+2)".into(),
            pass: h_free_ok,
        },
        Check {
            name: "a odd".into(),
            pass: odd(&a),
        },
    ];
    let mut all_binom = true;
    for k in 0..=l {
        let c = [binomial(3 * l + 2, 3 * k), binomial(3 * l + 2, 3 * k + 1), binomial(3 * l + 2, 3 * k + 2)];
        let got = [&r[k as usize], &s[k as usize], &t[k as usize]];
        for j in 0..3 {
            all_binom &= odd(got[j]) == (odd(&a) && odd(&c[j]));
        }
    }
    checks.push(Check {
        name: "r_k, s_k, t_k = a*C(3l+2, 3k+j) mod 2".into(),
        pass: all_binom,
    });
    let sum_r: BigInt = r.iter().sum();
    checks.push(Check {
        name: "b integer and b = sum r_k mod 2".into(),
        pass: b_rat.is_integer() && odd(&b) == odd(&sum_r),
    });
    checks.push(Check {
        name: "b odd".into(),
        pass: b_rat.is_integer() && odd(&b),
    });
    let binom_sum: BigInt = (0..=l).map(|k| binomial(3 * l + 2, 3 * k)).sum();
    let closed = (BigInt::from(2).pow(3 * l + 2) - if l % 2 == 0 { 1 } else { -1 }) / 3;
    checks.push(Check {
        name: "sum_k C(3l+2, 3k) = (2^(3l+2) - (-1)^l)/3, odd".into(),
        pass: binom_sum == closed && odd(&binom_sum),
    });
    Ok(HpDecomposition {
        ell: l,
        r,
        s,
        t,
        a,
        b,
        scale: scale.to_string(),
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeCount {
    pub count: u64,
    pub lower: String,
    pub upper: String,
    pub sandwich_holds: bool,
}

/// `#{(m, n) in N^2 : a m + b n <= c}` with the bounds `c^2/(2ab)` and `(a+b+c)^2/(2ab)`.
pub fn lattice_triangle_count(a: &BigRational, b: &BigRational, c: &BigRational) -> Result<LatticeCount> {
    if !a.is_positive() || !b.is_positive() || c.is_negative() {
        return Err(LabError::InvalidArgument(
            "need a, b > 0 and c >= 0".into(),
        ));
    }
    let mut count: u64 = 0;
    let mut m = BigInt::zero();
    loop {
        let rest = c - a * BigRational::from_integer(m.clone());
        if rest.is_negative() {
            break;
        }
        let nmax = (rest / b).floor().to_integer();
        count += nmax.to_u64().expect("count fits u64") + 1;
        m += 1;
    }
    let two_ab = BigRational::from_integer(2.into()) * a * b;
    let lower = c * c / &two_ab;
    let s = a + b + c;
    let upper = &s * &s / &two_ab;
    let cnt = BigRational::from_integer(count.into());
    Ok(LatticeCount {
        count,
        sandwich_holds: lower <= cnt && cnt <= upper,
        lower: lower.to_string(),
        upper: upper.to_string(),
    })
}

/// Outcome of the logarithmic inequality on one pair.
#[derive(Clone, Debug, Serialize)]
pub struct Prop8Outcome {
    pub holds: bool,
    /// Decided by an exact identity among logarithms rather than by enclosure.
    pub exact: bool,
    pub precision: u32,
    pub f: f64,
    pub s: f64,
    pub t: f64,
    pub sigma: f64,
}

/// Pairwise coprime integers `> 1` such that each input is a product of
/// their powers; returns the base and the exponent vector of each input.
pub fn coprime_base(values: &[BigInt]) -> (Vec<BigInt>, Vec<Vec<u32>>) {
    let mut base: Vec<BigInt> = values.iter().map(|v| v.abs()).filter(|v| *v > BigInt::one()).collect();
    base.sort();
    base.dedup();
    'refine: loop {
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    let (a, b) = (&base[i] / &g, &base[j] / &g);
                    base.remove(j);
                    base.remove(i);
                    for x in [a, b, g] {
                        if x > BigInt::one() {
                            base.push(x);
                        }
                    }
                    base.sort();
                    base.dedup();
                    continue 'refine;
                }
            }
        }
        break;
    }
    let exps = values
        .iter()
        .map(|v| {
            let mut x = v.abs();
            base.iter()
                .map(|b| {
                    let mut e = 0;
                    while !x.is_zero() && (&x % b).is_zero() {
                        x /= b;
                        e += 1;
                    }
                    e
                })
                .collect()
        })
        .collect();
    (base, exps)
}

/// Decide `log|T^2/F| * log|T^3/(S^2V)| >= 6 (log|T|)^2 - (6 - eps)(log|q|)^2`.
///
/// The difference of the two sides is a quadratic form in the logarithms of
/// a coprime base of `|T|, |F|, |S^2V|, |q|`; if that form vanishes
/// identically the sides are equal. Otherwise interval logarithms are
/// refined until the sign is certain or `ceiling` bits are exhausted.
pub fn prop8_inequality(
    t: &BigInt,
    f: &BigInt,
    w: &BigInt,
    q: &BigInt,
    eps: &BigRational,
    ceiling: u32,
) -> Result<Prop8Outcome> {
    if t.is_zero() || f.is_zero() || w.is_zero() || q.is_zero() {
        return Err(LabError::InvalidArgument("T, F, S^2V and q must be nonzero".into()));
    }
    if q.abs() < BigInt::from(3) {
        return Err(LabError::InvalidArgument("|q| must be at least 3".into()));
    }
    if eps.is_negative() {
        return Err(LabError::InvalidArgument("epsilon must be nonnegative".into()));
    }
    let lf = |x: &BigInt| x.abs().to_f64().map_or(f64::NAN, f64::ln);
    let (ltf, lff, lwf, lqf) = (lf(t), lf(f), lf(w), lf(q));
    let (fd, sd, td) = (lff / lqf, lwf / lqf, ltf / lqf);
    let diag = |holds, exact, precision| Prop8Outcome {
        holds,
        exact,
        precision,
        f: fd,
        s: sd,
        t: td,
        sigma: (2.0 * td - fd) * (3.0 * td - sd),
    };

    // D = (2lt - lf)(3lt - lw) - 6 lt^2 + (6 - eps) lq^2, as a form in base logs.
    let (base, ex) = coprime_base(&[t.clone(), f.clone(), w.clone(), q.clone()]);
    let nb = base.len();
    let lin = |coef: &[(usize, i64)]| -> Vec<BigRational> {
        (0..nb)
            .map(|i| {
                coef.iter()
                    .map(|&(which, c)| BigRational::from_integer(BigInt::from(c) * ex[which][i]))
                    .sum()
            })
            .collect()
    };
    let a1 = lin(&[(0, 2), (1, -1)]);
    let a2 = lin(&[(0, 3), (2, -1)]);
    let lt = lin(&[(0, 1)]);
    let lq = lin(&[(3, 1)]);
    let six_minus = BigRational::from_integer(6.into()) - eps;
    let mut form = vec![vec![BigRational::zero(); nb]; nb];
    for i in 0..nb {
        for j in 0..nb {
            form[i][j] = &a1[i] * &a2[j] - BigRational::from_integer(6.into()) * &lt[i] * &lt[j]
                + &six_minus * &lq[i] * &lq[j];
        }
    }
    let symmetric_zero = (0..nb).all(|i| (0..nb).all(|j| (&form[i][j] + &form[j][i]).is_zero()));
    if symmetric_zero {
        return Ok(diag(true, true, 0));
    }
    let mut prec = 64u32;
    loop {
        let logs: Vec<Interval> = base.iter().map(|b| Interval::ln_int(b, prec)).collect();
        let mut d = Interval::point_int(&BigInt::zero());
        for i in 0..nb {
            for j in 0..nb {
                if form[i][j].is_zero() {
                    continue;
                }
                let c = Interval::from_rational(&form[i][j], prec);
                d = d.add(&c.mul(&logs[i].mul(&logs[j])));
            }
        }
        if d.certainly_positive() {
            return Ok(diag(true, false, prec));
        }
        if d.certainly_negative() {
            return Ok(diag(false, false, prec));
        }
        if prec >= ceiling {
            return Err(LabError::Undecidable(ceiling));
        }
        prec = (prec * 2).min(ceiling);
    }
}
