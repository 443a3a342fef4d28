//! The graded ring `R = Q[T, F, S^2 V]`, the substitution `rho`, and the
//! filtration `J^(k)` it defines.
//!
//! `R_l` has basis `T^(l-2m-3n) F^m (S^2 V)^n` over the pairs `(m, n)` with
//! `2m + 3n <= l`, listed lexicographically by [`basis_of`].

mod elem;
mod rho;

pub use elem::{named, RingElem, NAMES};
pub use rho::{
    expand, expected_dim, j_subspace, j_valuation, j_valuation_symbolic, rho, rho_columns, ExpandedPoly, Filtration,
    Q, S, T, U, V, VAR_NAMES,
};

/// Number of `(m, n)` in `N^2` with `2m + 3n <= l`; zero for negative `l`.
pub fn tau(l: i64) -> usize {
    if l < 0 {
        return 0;
    }
    (0..=l / 3).map(|n| ((l - 3 * n) / 2 + 1) as usize).sum()
}

/// Basis indices of `R_l`, lexicographic in `(m, n)`.
pub fn basis_of(l: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(tau(l as i64));
    for m in 0..=l / 2 {
        for n in 0..=(l - 2 * m) / 3 {
            out.push((m, n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_values() {
        assert_eq!(tau(-1), 0);
        assert_eq!(tau(0), 1);
        assert_eq!(tau(2), 2);
        assert_eq!(tau(5), 5);
        assert_eq!(tau(6), 7);
        assert_eq!(tau(7), 8);
        assert_eq!(tau(9), 12);
    }

    #[test]
    fn basis_order_and_size() {
        assert_eq!(basis_of(0), vec![(0, 0)]);
        assert_eq!(basis_of(2), vec![(0, 0), (1, 0)]);
        assert_eq!(basis_of(6).len(), 7);
        for l in 0..40u32 {
            let b = basis_of(l);
            assert_eq!(b.len(), tau(l as i64));
            assert!(b.windows(2).all(|w| w[0] < w[1]));
            // brute-force count
            let brute = (0..=l).flat_map(|m| (0..=l).map(move |n| (m, n))).filter(|&(m, n)| 2 * m + 3 * n <= l).count();
            assert_eq!(brute, b.len());
        }
    }
}
