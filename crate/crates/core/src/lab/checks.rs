//! Exact checks on pair records, registered by name.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{LabError, Result};
use crate::forms::cross;
use crate::minimal::PairRecord;

/// A record together with the following one, when there is one.
#[derive(Clone, Copy, Debug)]
pub struct PairView<'a> {
    pub rec: &'a PairRecord,
    pub next: Option<&'a PairRecord>,
}

pub trait PairCheck: Send + Sync {
    fn name(&self) -> &'static str;
    fn holds(&self, pair: PairView<'_>) -> bool;
}

struct FnCheck {
    name: &'static str,
    f: fn(PairView<'_>) -> bool,
}

impl PairCheck for FnCheck {
    fn name(&self) -> &'static str {
        self.name
    }

    fn holds(&self, pair: PairView<'_>) -> bool {
        (self.f)(pair)
    }
}

/// `d | n`, with `0 | n` only for `n = 0`.
pub fn divides(d: &BigInt, n: &BigInt) -> bool {
    if d.is_zero() {
        n.is_zero()
    } else {
        (n % d).is_zero()
    }
}

fn q_pow_divides(r: &PairRecord, k: u32, n: &BigInt) -> bool {
    divides(&r.q.pow(k), n)
}

/// `|q|^k <= |n|` whenever `n != 0`.
fn size_bound(r: &PairRecord, k: u32, n: &BigInt) -> bool {
    n.is_zero() || r.q.abs().pow(k) <= n.abs()
}

fn standard_checks() -> Vec<FnCheck> {
    let c = |name, f| FnCheck { name, f };
    vec![
        c("q_nonzero", |v| !v.rec.q.is_zero()),
        c("gcd_p_q", |v| v.rec.p.gcd(&v.rec.q) == BigInt::from(1)),
        c("t_cong", |v| {
            let r = v.rec;
            divides(&r.q, &(&r.t - 3 * &r.p * &r.s))
        }),
        c("u_cong", |v| {
            let r = v.rec;
            divides(&r.q, &(&r.u - 3 * &r.p * &r.p * &r.s))
        }),
        c("v_cong", |v| {
            let r = v.rec;
            divides(&r.q, &(&r.v - r.p.pow(3) * &r.s))
        }),
        c("gcd_q_s_eq_gcd_q_v", |v| v.rec.q.gcd(&v.rec.s) == v.rec.q.gcd(&v.rec.v)),
        c("q2_divides_a", |v| q_pow_divides(v.rec, 2, &v.rec.a)),
        c("q3_divides_b", |v| q_pow_divides(v.rec, 3, &v.rec.b)),
        c("q2_divides_d2", |v| q_pow_divides(v.rec, 2, &v.rec.d2)),
        c("q3_divides_d3", |v| q_pow_divides(v.rec, 3, &v.rec.d3)),
        c("q6_divides_d6", |v| q_pow_divides(v.rec, 6, &v.rec.d6)),
        c("cross_primitive", |v| cross(&v.rec.x_i, &v.rec.x_ip1).is_primitive()),
        c("cross_ratio", |v| {
            let r = v.rec;
            cross(&r.x_i, &r.x_j) == cross(&r.x_i, &r.x_ip1) * &r.q
        }),
        c("identity_4a", |v| {
            let r = v.rec;
            4 * &r.a == &r.t * &r.t + 3 * &r.f
        }),
        c("identity_4b", |v| {
            let r = v.rec;
            4 * &r.b == r.t.pow(3) - 9 * &r.t * &r.f - 108 * r.w()
        }),
        c("v_eq_next_s", |v| v.next.is_none_or(|n| n.s == v.rec.v)),
        c("bound_d2", |v| size_bound(v.rec, 2, &v.rec.d2)),
        c("bound_d3", |v| size_bound(v.rec, 3, &v.rec.d3)),
        c("bound_d6", |v| size_bound(v.rec, 6, &v.rec.d6)),
    ]
}

/// Named checks in registration order.
pub struct CheckRegistry {
    checks: Vec<Box<dyn PairCheck>>,
}

impl Default for CheckRegistry {
    fn default() -> Self {
        let mut reg = CheckRegistry { checks: Vec::new() };
        for c in standard_checks() {
            reg.register(Box::new(c));
        }
        reg
    }
}

impl CheckRegistry {
    pub fn empty() -> Self {
        CheckRegistry { checks: Vec::new() }
    }

    /// Adds a check, replacing any previous one of the same name in place.
    pub fn register(&mut self, check: Box<dyn PairCheck>) {
        match self.checks.iter().position(|c| c.name() == check.name()) {
            Some(i) => self.checks[i] = check,
            None => self.checks.push(check),
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn PairCheck> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    /// The named checks in registration order; all of them for an empty list.
    pub fn select(&self, names: &[String]) -> Result<Vec<&dyn PairCheck>> {
        if let Some(bad) = names.iter().find(|n| self.get(n).is_none()) {
            return Err(LabError::InvalidArgument(format!(
                "unknown check `{bad}`; known: {}",
                self.names().join(", ")
            )));
        }
        Ok(self
            .checks
            .iter()
            .filter(|c| names.is_empty() || names.iter().any(|n| n == c.name()))
            .map(|c| c.as_ref())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3::Vec3Z;

    fn rec() -> PairRecord {
        // x_j = 2 x_i + 3 x_{i+1}
        let xi = Vec3Z::from_i64(1, 1, 2);
        let xn = Vec3Z::from_i64(4, 5, 7);
        let xj = xi.clone() * &BigInt::from(2) + xn.clone() * &BigInt::from(3);
        PairRecord::build(1, 3, &xi, &xn, &xj).unwrap()
    }

    #[test]
    fn algebraic_checks_hold_on_any_decomposition() {
        let r = rec();
        let reg = CheckRegistry::default();
        let view = PairView { rec: &r, next: None };
        for name in [
            "q_nonzero", "gcd_p_q", "t_cong", "u_cong", "v_cong", "gcd_q_s_eq_gcd_q_v", "q2_divides_a",
            "q3_divides_b", "q2_divides_d2", "q3_divides_d3", "q6_divides_d6", "cross_primitive",
            "cross_ratio", "identity_4a", "identity_4b", "v_eq_next_s", "bound_d2", "bound_d3", "bound_d6",
        ] {
            assert!(reg.get(name).unwrap().holds(view), "{name}");
        }
    }

    #[test]
    fn corrupted_record_fails() {
        let mut r = rec();
        r.d6 += 1;
        r.t += 1;
        let reg = CheckRegistry::default();
        let view = PairView { rec: &r, next: None };
        assert!(!reg.get("q6_divides_d6").unwrap().holds(view));
        assert!(!reg.get("t_cong").unwrap().holds(view));
    }

    #[test]
    fn selection_and_registration() {
        let mut reg = CheckRegistry::default();
        assert_eq!(reg.select(&[]).unwrap().len(), reg.names().len());
        let sel = reg.select(&["q6_divides_d6".into(), "gcd_p_q".into()]).unwrap();
        assert_eq!(sel.iter().map(|c| c.name()).collect::<Vec<_>>(), ["gcd_p_q", "q6_divides_d6"]);
        assert!(reg.select(&["nope".into()]).is_err());
        struct Always;
        impl PairCheck for Always {
            fn name(&self) -> &'static str {
                "gcd_p_q"
            }
            fn holds(&self, _: PairView<'_>) -> bool {
                false
            }
        }
        let n = reg.names().len();
        reg.register(Box::new(Always));
        assert_eq!(reg.names().len(), n);
        let r = rec();
        assert!(!reg.get("gcd_p_q").unwrap().holds(PairView { rec: &r, next: None }));
    }

    #[test]
    fn divides_handles_zero() {
        assert!(divides(&BigInt::from(0), &BigInt::from(0)));
        assert!(!divides(&BigInt::from(0), &BigInt::from(3)));
        assert!(divides(&BigInt::from(-3), &BigInt::from(9)));
    }
}
