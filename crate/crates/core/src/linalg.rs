//! Fraction-free integer row echelon forms and exact nullspaces.
//!
//! Rows are inserted one at a time; each stored row is primitive with a
//! positive pivot, so entries stay small and the final basis does not depend
//! on the order rows arrive in beyond the row space they span.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Divide by the gcd of the entries; zero vectors are left alone.
pub fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
}

/// Primitive, first nonzero entry positive.
pub fn normalize_vector(v: &mut [BigInt]) {
    make_primitive(v);
    if v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        for c in v.iter_mut() {
            *c = -c.clone();
        }
    }
}

/// Integer vector proportional to a rational one (common denominator cleared,
/// then made primitive with positive leading entry).
pub fn integer_direction(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    normalize_vector(&mut out);
    out
}

#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    // sorted by pivot column
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rows.len()
    }

    fn eliminate(target: &mut Vec<BigInt>, col: usize, row: &[BigInt]) {
        let b = &target[col];
        if b.is_zero() {
            return;
        }
        let a = &row[col];
        let g = a.gcd(b);
        let (fa, fb) = (a / &g, b / &g);
        for (t, r) in target.iter_mut().zip(row) {
            *t = &*t * &fa - r * &fb;
        }
        make_primitive(target);
    }

    /// Add a row; returns whether the rank grew.
    pub fn insert(&mut self, mut row: Vec<BigInt>) -> bool {
        assert_eq!(row.len(), self.ncols);
        for (p, r) in &self.rows {
            Self::eliminate(&mut row, *p, r);
        }
        let Some(pivot) = row.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        normalize_vector(&mut row);
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, row));
        true
    }

    pub fn insert_rational(&mut self, row: &[BigRational]) -> bool {
        let l = row.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        self.insert(
            row.iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect(),
        )
    }

    /// Basis of the right kernel, one vector per non-pivot column in
    /// increasing column order, each primitive with positive leading entry.
    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        let mut rows = self.rows.clone();
        // reduced form: clear every pivot column above its pivot row
        for k in (0..rows.len()).rev() {
            let (pk, rk) = rows[k].clone();
            for (_, ri) in rows.iter_mut().take(k) {
                Self::eliminate(ri, pk, &rk);
            }
        }
        let pivots: Vec<usize> = rows.iter().map(|(p, _)| *p).collect();
        let lead_lcm = rows.iter().fold(BigInt::one(), |l, (p, r)| l.lcm(&r[*p]));
        (0..self.ncols)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![BigInt::zero(); self.ncols];
                v[f] = lead_lcm.clone();
                for (p, r) in &rows {
                    v[*p] = -(&lead_lcm / &r[*p]) * &r[f];
                }
                normalize_vector(&mut v);
                v
            })
            .collect()
    }
}

/// Kernel basis of the integer matrix with the given rows.
pub fn nullspace(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r.clone());
    }
    e.nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&k| BigInt::from(k)).collect()
    }

    fn apply(rows: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
        rows.iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn small_kernel() {
        let rows = vec![zv(&[1, 2, 3]), zv(&[2, 4, 6])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(apply(&rows, v).iter().all(Zero::is_zero));
        }
        assert_eq!(ns[0], zv(&[2, -1, 0]));
        assert_eq!(ns[1], zv(&[3, 0, -1]));
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let rows = vec![zv(&[1, 0]), zv(&[0, 1]), zv(&[5, 7])];
        assert!(nullspace(&rows, 2).is_empty());
    }

    #[test]
    fn rational_rows() {
        let mut e = Echelon::new(2);
        let r = vec![BigRational::new(1.into(), 2.into()), BigRational::new((-1).into(), 3.into())];
        assert!(e.insert_rational(&r));
        assert_eq!(e.nullspace(), vec![zv(&[2, 3])]);
        assert_eq!(integer_direction(&[BigRational::new((-1).into(), 2.into()), BigRational::new(1.into(), 3.into())]), zv(&[3, -2]));
    }

    proptest! {
        #[test]
        fn kernel_is_annihilated_and_dimension_matches(
            entries in proptest::collection::vec(-6i64..=6, 12),
            nrows in 1usize..=4,
        ) {
            let ncols = 3;
            let rows: Vec<Vec<BigInt>> = entries.chunks(ncols).take(nrows).map(zv).collect();
            let mut e = Echelon::new(ncols);
            for r in &rows {
                e.insert(r.clone());
            }
            let ns = e.nullspace();
            prop_assert_eq!(ns.len() + e.rank(), ncols);
            for v in &ns {
                prop_assert!(apply(&rows, v).iter().all(Zero::is_zero));
            }
            // row order does not matter
            let mut rev = rows.clone();
            rev.reverse();
            prop_assert_eq!(nullspace(&rev, ncols), ns);
        }
    }
}
