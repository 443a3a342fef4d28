//! End-to-end experiments: minimal points, pair records, exact checks on
//! every record, the logarithmic inequality, and diagnostic traces.
//!
//! Reports contain no floating-point values; diagnostics are rendered as
//! strings with a fixed format so repeated runs are byte-identical.

mod checks;

use std::io::Write;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checks::{divides, CheckRegistry, PairCheck, PairView};

use crate::algebraic::parse_rational;
use crate::error::{LabError, Result};
use crate::forms::cross;
use crate::interval::{rat_to_f64, rational_to_decimal, Interval};
use crate::minimal::{
    build_pair_records, independence_set, minimal_sequence_with, MinimalPoint, PairRecord, ScanOptions,
};
use crate::real::{Independence, RealContext, DEFAULT_CEILING};
use crate::search::prop8_inequality;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub xi: String,
    pub norm_bound: u64,
    pub precision_bits: u32,
    pub ceiling: u32,
    /// Positive rational, `p/q` or decimal.
    pub epsilon: String,
    /// Pair checks to run; empty means all registered checks.
    pub checks: Vec<String>,
    pub prop8: bool,
    pub prop8_ceiling: u32,
    /// Trailing window for the exponent estimate.
    pub window: usize,
    pub block_size: u64,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub reproducer: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            xi: String::new(),
            norm_bound: 100_000,
            precision_bits: 128,
            ceiling: DEFAULT_CEILING,
            epsilon: "1/10".into(),
            checks: Vec::new(),
            prop8: true,
            prop8_ceiling: 4096,
            window: 10,
            block_size: 4096,
            csv: None,
            json: None,
            reproducer: None,
        }
    }
}

impl ExperimentConfig {
    pub fn epsilon_value(&self) -> Result<BigRational> {
        let e = parse_rational(&self.epsilon)?;
        if !e.is_positive() {
            return Err(LabError::InvalidArgument("epsilon must be positive".into()));
        }
        Ok(e)
    }

    pub fn validate(&self, registry: &CheckRegistry) -> Result<()> {
        if self.xi.is_empty() {
            return Err(LabError::InvalidArgument("xi is required".into()));
        }
        if self.norm_bound < 1 {
            return Err(LabError::InvalidArgument("norm bound must be at least 1".into()));
        }
        if self.precision_bits == 0 || self.block_size == 0 || self.window == 0 {
            return Err(LabError::InvalidArgument(
                "precision, block size and window must be positive".into(),
            ));
        }
        self.epsilon_value()?;
        registry.select(&self.checks)?;
        Ok(())
    }
}

/// `{:.15e}` rendering used for every diagnostic number.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.15e}")
}

fn ln_f64(n: &BigInt) -> f64 {
    let n = n.abs();
    match n.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        _ => {
            let shift = n.bits().saturating_sub(64);
            (&n >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointRow {
    pub index: usize,
    pub x0: String,
    pub x1: String,
    pub x2: String,
    pub norm: String,
    pub l: String,
    pub delta: String,
    /// `log(1/L_i) / log X_{i+1}`, absent for the last point.
    pub lambda_hat: Option<String>,
    /// `log X_{i+1} / log X_i`, absent when undefined.
    pub rho: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub check: String,
    /// Sequence indices involved.
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRow {
    #[serde(flatten)]
    pub record: PairRecord,
    pub norm_i: String,
    pub norm_ip1: String,
    pub norm_j: String,
    /// `(check name, pass)` in registry order.
    pub flags: Vec<(String, bool)>,
    pub lambda_hat: Option<String>,
    pub rho: Option<String>,
    /// `log|q_i| / log X_{i+1}`.
    pub log_q_ratio: Option<String>,
    /// `|x_i ^ x_j| / (X_j L_i)`.
    pub height_ratio: String,
    /// `holds`, `fails`, `undecidable` or `skipped`.
    pub prop8: String,
    pub prop8_diagnostics: Option<[String; 4]>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Prop8Summary {
    pub holds: usize,
    pub fails: usize,
    pub undecidable: usize,
    pub skipped: usize,
}

/// Traces of asymptotic quantities. Diagnostic only, never pass/fail.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Monitors {
    pub zero_s: usize,
    pub zero_f: usize,
    pub zero_d2: usize,
    pub zero_d3: usize,
    pub zero_d6: usize,
    pub lambda_hat_min: Option<String>,
    pub lambda_hat_max: Option<String>,
    /// Enclosure `[lo, hi]` of the trailing-window minimum of the lambda-hat trace.
    pub exponent_estimate: Option<[String; 2]>,
    pub rho_min: Option<String>,
    pub rho_max: Option<String>,
    pub log_q_ratio_min: Option<String>,
    pub log_q_ratio_max: Option<String>,
    pub height_ratio_min: Option<String>,
    pub height_ratio_max: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Constant {
    pub name: &'static str,
    pub formula: &'static str,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// Canonical form of the xi specification.
    pub xi_spec: String,
    pub xi_kind: String,
    pub independence: String,
    pub sequence: Vec<PointRow>,
    pub index_set: Vec<usize>,
    pub pairs: Vec<PairRow>,
    pub sequence_checks: Vec<Verdict>,
    pub pair_checks: Vec<Verdict>,
    pub failures: Vec<Failure>,
    pub prop8: Prop8Summary,
    pub monitors: Monitors,
    pub constants: Vec<Constant>,
    pub all_pass: bool,
}

/// `log(1/L) / log X` as an enclosure; `None` when `L` is not certainly
/// positive or `X <= 1`.
pub fn lambda_hat(l: &Interval, x_next: &BigInt) -> Option<Interval> {
    if *x_next <= BigInt::from(1) {
        return None;
    }
    let scale = l.scale().max(64);
    let num = l.ln()?.neg();
    let den = Interval::ln_int(x_next, scale);
    num.div(&den, scale)
}

/// Enclosure of the minimum of the last `window` values.
pub fn estimate_uniform_exponent(trace: &[Interval], window: usize) -> Result<Interval> {
    if trace.len() < 2 {
        return Err(LabError::InvalidArgument(
            "exponent estimate needs at least three minimal points".into(),
        ));
    }
    let start = trace.len().saturating_sub(window.max(1));
    let mut it = trace[start..].iter();
    let first = it.next().expect("nonempty window").clone();
    Ok(it.fold(first, |m, x| m.min(x)))
}

/// Threshold constants at 40 decimal places.
pub fn constants() -> Vec<Constant> {
    let s = 256;
    let sq = |n: i64| Interval::sqrt_int(&BigInt::from(n), s);
    let int = |n: i64| Interval::point_int(&BigInt::from(n));
    let div = |a: Interval, d: i64| a.div(&int(d), s).expect("nonzero divisor");
    let mid = |x: Interval| {
        let (lo, hi) = x.to_rational_pair();
        rational_to_decimal(&((lo + hi) / BigRational::from_integer(2.into())), 40)
    };
    let entries: Vec<(&'static str, &'static str, Interval)> = vec![
        ("mu", "2(9+sqrt 11)/35", div(sq(11).add_int(&9.into()).mul_int(&2.into()), 35)),
        ("lambda0", "(1+3 sqrt 5)/11", div(sq(5).mul_int(&3.into()).add_int(&1.into()), 11)),
        ("c1", "(5-sqrt 13)/2", div(sq(13).neg().add_int(&5.into()), 2)),
        ("c2", "sqrt 3 - 1", sq(3).add_int(&(-1).into())),
        ("c3", "5/7", div(int(5), 7)),
        ("beta0", "(5+3 sqrt 5)/2", div(sq(5).mul_int(&3.into()).add_int(&5.into()), 2)),
        ("nu", "2+sqrt 11", sq(11).add_int(&2.into())),
    ];
    entries
        .into_iter()
        .map(|(name, formula, x)| Constant {
            name,
            formula,
            value: mid(x),
        })
        .collect()
}

fn sequence_verdicts(seq: &[MinimalPoint], failures: &mut Vec<Failure>) -> Vec<Verdict> {
    let mut prim = Verdict {
        name: "points_primitive".into(),
        checked: seq.len(),
        failed: 0,
    };
    for p in seq.iter().filter(|p| !p.point.is_primitive()) {
        prim.failed += 1;
        failures.push(Failure {
            check: prim.name.clone(),
            indices: vec![p.index],
        });
    }
    let mut consec = Verdict {
        name: "consecutive_cross_primitive".into(),
        checked: seq.len().saturating_sub(1),
        failed: 0,
    };
    for w in seq.windows(2) {
        if !cross(&w[0].point, &w[1].point).is_primitive() {
            consec.failed += 1;
            failures.push(Failure {
                check: consec.name.clone(),
                indices: vec![w[0].index, w[1].index],
            });
        }
    }
    let mut indep = Verdict {
        name: "pairwise_independent".into(),
        checked: seq.len() * seq.len().saturating_sub(1) / 2,
        failed: 0,
    };
    for (a, pa) in seq.iter().enumerate() {
        for pb in &seq[a + 1..] {
            if cross(&pa.point, &pb.point).is_zero() {
                indep.failed += 1;
                failures.push(Failure {
                    check: indep.name.clone(),
                    indices: vec![pa.index, pb.index],
                });
            }
        }
    }
    vec![prim, consec, indep]
}

fn extrema(values: impl Iterator<Item = f64>) -> (Option<String>, Option<String>) {
    let v: Vec<f64> = values.filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return (None, None);
    }
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (Some(fmt_f64(min)), Some(fmt_f64(max)))
}

fn parse_f(s: &Option<String>) -> f64 {
    s.as_deref().and_then(|x| x.parse().ok()).unwrap_or(f64::NAN)
}

/// Run the full pipeline for one configuration with the standard checks.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with(cfg, &CheckRegistry::default())
}

pub fn run_experiment_with(cfg: &ExperimentConfig, registry: &CheckRegistry) -> Result<ExperimentReport> {
    cfg.validate(registry)?;
    let eps = cfg.epsilon_value()?;
    let selected = registry.select(&cfg.checks)?;
    let source = crate::real::parse_xi(&cfg.xi)?;
    let independence = match source.independence() {
        Independence::Proven => "proven".to_string(),
        Independence::Assumed(why) => {
            log::warn!("linear independence of 1, xi, xi^3 assumed: {why}");
            format!("assumed: {why}")
        }
    };
    let ctx = RealContext::new(source, cfg.precision_bits, cfg.ceiling)?;
    let seq = minimal_sequence_with(
        &ctx,
        cfg.norm_bound,
        ScanOptions {
            block_size: cfg.block_size,
            parallel: true,
        },
    )?;
    let index_set = if seq.len() >= 3 { independence_set(&seq) } else { Vec::new() };
    let records = build_pair_records(&seq, &index_set)?;

    let lambda: Vec<Option<Interval>> = (0..seq.len())
        .map(|k| seq.get(k + 1).and_then(|n| lambda_hat(&seq[k].err_l, &n.norm)))
        .collect();
    let sequence = point_rows(&seq);

    let pt = |k: usize| &seq[k - 1];
    let pairs: Vec<PairRow> = records
        .par_iter()
        .enumerate()
        .map(|(n, rec)| {
            let view = PairView {
                rec,
                next: records.get(n + 1),
            };
            let flags = selected.iter().map(|c| (c.name().to_string(), c.holds(view))).collect();
            let (xi, xn, xj) = (pt(rec.i), pt(rec.i + 1), pt(rec.j));
            let ln_xn = ln_f64(&xn.norm);
            let log_q_ratio = (ln_xn > 0.0).then(|| fmt_f64(ln_f64(&rec.q) / ln_xn));
            let wedge = 0.5 * ln_f64(&rec.height_sq) + ln_f64(&rec.q);
            let l_i = xi.err_l.mid_f64();
            let height_ratio = fmt_f64((wedge - ln_f64(&xj.norm) - l_i.ln()).exp());
            let (prop8, diag) = if !cfg.prop8 {
                ("skipped".to_string(), None)
            } else {
                match prop8_inequality(&rec.t, &rec.f, &rec.w(), &rec.q, &eps, cfg.prop8_ceiling) {
                    Ok(o) => (
                        if o.holds { "holds" } else { "fails" }.to_string(),
                        Some([fmt_f64(o.f), fmt_f64(o.s), fmt_f64(o.t), fmt_f64(o.sigma)]),
                    ),
                    Err(LabError::Undecidable(_)) => ("undecidable".to_string(), None),
                    Err(_) => ("skipped".to_string(), None),
                }
            };
            PairRow {
                record: rec.clone(),
                norm_i: xi.norm.to_string(),
                norm_ip1: xn.norm.to_string(),
                norm_j: xj.norm.to_string(),
                flags,
                lambda_hat: sequence[rec.i - 1].lambda_hat.clone(),
                rho: sequence[rec.i - 1].rho.clone(),
                log_q_ratio,
                height_ratio,
                prop8,
                prop8_diagnostics: diag,
            }
        })
        .collect();

    let mut failures = Vec::new();
    let sequence_checks = sequence_verdicts(&seq, &mut failures);
    let pair_checks: Vec<Verdict> = selected
        .iter()
        .enumerate()
        .map(|(c, check)| {
            let mut v = Verdict {
                name: check.name().to_string(),
                checked: pairs.len(),
                failed: 0,
            };
            for row in pairs.iter().filter(|r| !r.flags[c].1) {
                v.failed += 1;
                failures.push(Failure {
                    check: v.name.clone(),
                    indices: vec![row.record.i, row.record.i + 1, row.record.j],
                });
            }
            v
        })
        .collect();

    let mut prop8 = Prop8Summary::default();
    for r in &pairs {
        match r.prop8.as_str() {
            "holds" => prop8.holds += 1,
            "fails" => prop8.fails += 1,
            "undecidable" => prop8.undecidable += 1,
            _ => prop8.skipped += 1,
        }
    }

    let trace: Vec<Interval> = lambda.iter().flatten().cloned().collect();
    let (lambda_hat_min, lambda_hat_max) = extrema(trace.iter().map(Interval::mid_f64));
    let (rho_min, rho_max) = extrema(sequence.iter().map(|r| parse_f(&r.rho)));
    let (log_q_ratio_min, log_q_ratio_max) = extrema(pairs.iter().map(|r| parse_f(&r.log_q_ratio)));
    let (height_ratio_min, height_ratio_max) =
        extrema(pairs.iter().map(|r| parse_f(&Some(r.height_ratio.clone()))));
    let zero = |f: fn(&PairRecord) -> &BigInt| records.iter().filter(|r| f(r).is_zero()).count();
    let monitors = Monitors {
        zero_s: zero(|r| &r.s),
        zero_f: zero(|r| &r.f),
        zero_d2: zero(|r| &r.d2),
        zero_d3: zero(|r| &r.d3),
        zero_d6: zero(|r| &r.d6),
        lambda_hat_min,
        lambda_hat_max,
        exponent_estimate: estimate_uniform_exponent(&trace, cfg.window).ok().map(|e| {
            let (lo, hi) = e.to_rational_pair();
            [fmt_f64(rat_to_f64(&lo)), fmt_f64(rat_to_f64(&hi))]
        }),
        rho_min,
        rho_max,
        log_q_ratio_min,
        log_q_ratio_max,
        height_ratio_min,
        height_ratio_max,
    };

    let all_pass = failures.is_empty();
    let report = ExperimentReport {
        config: cfg.clone(),
        xi_spec: ctx.spec(),
        xi_kind: ctx.source().kind().to_string(),
        independence,
        sequence,
        index_set,
        pairs,
        sequence_checks,
        pair_checks,
        failures,
        prop8,
        monitors,
        constants: constants(),
        all_pass,
    };
    if !all_pass {
        if let Some(path) = &cfg.reproducer {
            write_reproducer(&report, &seq, path)?;
        }
    }
    if let Some(path) = &cfg.csv {
        write_pairs_csv(&report, std::fs::File::create(path)?)?;
    }
    if let Some(path) = &cfg.json {
        let mut f = std::fs::File::create(path)?;
        f.write_all(report_json(&report)?.as_bytes())?;
    }
    Ok(report)
}

#[derive(Serialize)]
struct Reproducer<'a> {
    xi: &'a str,
    precision_bits: u32,
    norm_bound: u64,
    failures: Vec<ReproFailure<'a>>,
}

#[derive(Serialize)]
struct ReproFailure<'a> {
    check: &'a str,
    points: Vec<ReproPoint>,
}

#[derive(Serialize)]
struct ReproPoint {
    index: usize,
    x0: String,
    triple: [String; 3],
}

/// Standalone description of every failed check: the xi, and the points involved.
pub fn write_reproducer(report: &ExperimentReport, seq: &[MinimalPoint], path: &std::path::Path) -> Result<()> {
    let failures = report
        .failures
        .iter()
        .map(|f| ReproFailure {
            check: &f.check,
            points: f
                .indices
                .iter()
                .map(|&k| {
                    let p = &seq[k - 1].point;
                    ReproPoint {
                        index: k,
                        x0: p.x0().to_string(),
                        triple: [p.x0().to_string(), p.x1().to_string(), p.x2().to_string()],
                    }
                })
                .collect(),
        })
        .collect();
    let r = Reproducer {
        xi: &report.xi_spec,
        precision_bits: report.config.precision_bits,
        norm_bound: report.config.norm_bound,
        failures,
    };
    std::fs::write(path, serde_json::to_string_pretty(&r)? + "\n")?;
    Ok(())
}

/// JSON summary: everything except the per-pair and per-point rows.
pub fn report_json(report: &ExperimentReport) -> Result<String> {
    #[derive(Serialize)]
    struct Summary<'a> {
        config: &'a ExperimentConfig,
        xi_spec: &'a str,
        xi_kind: &'a str,
        independence: &'a str,
        points: usize,
        index_set: &'a [usize],
        pairs: usize,
        sequence_checks: &'a [Verdict],
        pair_checks: &'a [Verdict],
        failures: &'a [Failure],
        prop8: &'a Prop8Summary,
        monitors: &'a Monitors,
        constants: &'a [Constant],
        all_pass: bool,
    }
    let s = Summary {
        config: &report.config,
        xi_spec: &report.xi_spec,
        xi_kind: &report.xi_kind,
        independence: &report.independence,
        points: report.sequence.len(),
        index_set: &report.index_set,
        pairs: report.pairs.len(),
        sequence_checks: &report.sequence_checks,
        pair_checks: &report.pair_checks,
        failures: &report.failures,
        prop8: &report.prop8,
        monitors: &report.monitors,
        constants: &report.constants,
        all_pass: report.all_pass,
    };
    Ok(serde_json::to_string_pretty(&s)? + "\n")
}

const PAIR_FIELDS: [&str; 17] = [
    "i", "j", "X_i", "X_ip1", "X_j", "p", "q", "S", "T", "U", "V", "A", "B", "F", "D2", "D3", "D6",
];

/// One row per pair record.
pub fn write_pairs_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = PAIR_FIELDS.iter().map(|s| s.to_string()).collect();
    if let Some(first) = report.pairs.first() {
        header.extend(first.flags.iter().map(|(n, _)| n.clone()));
    }
    header.extend(["lambda_hat", "rho", "log_q_ratio", "height_ratio", "prop8"].map(String::from));
    w.write_record(&header)?;
    for row in &report.pairs {
        let r = &row.record;
        let mut fields: Vec<String> = vec![r.i.to_string(), r.j.to_string(), row.norm_i.clone(), row.norm_ip1.clone(), row.norm_j.clone()];
        fields.extend([&r.p, &r.q, &r.s, &r.t, &r.u, &r.v, &r.a, &r.b, &r.f, &r.d2, &r.d3, &r.d6].map(|x| x.to_string()));
        fields.extend(row.flags.iter().map(|(_, ok)| if *ok { "PASS" } else { "FAIL" }.to_string()));
        fields.push(row.lambda_hat.clone().unwrap_or_default());
        fields.push(row.rho.clone().unwrap_or_default());
        fields.push(row.log_q_ratio.clone().unwrap_or_default());
        fields.push(row.height_ratio.clone());
        fields.push(row.prop8.clone());
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per minimal point.
pub fn write_sequence_csv<W: Write>(rows: &[PointRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "x0", "x1", "x2", "norm", "L", "delta", "lambda_hat", "rho"])?;
    for r in rows {
        w.write_record([
            r.index.to_string(),
            r.x0.clone(),
            r.x1.clone(),
            r.x2.clone(),
            r.norm.clone(),
            r.l.clone(),
            r.delta.clone(),
            r.lambda_hat.clone().unwrap_or_default(),
            r.rho.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Rows for a bare sequence, as written by [`write_sequence_csv`].
pub fn point_rows(seq: &[MinimalPoint]) -> Vec<PointRow> {
    (0..seq.len())
        .map(|k| {
            let p = &seq[k];
            let next = seq.get(k + 1);
            let li = ln_f64(&p.norm);
            PointRow {
                index: p.index,
                x0: p.point.x0().to_string(),
                x1: p.point.x1().to_string(),
                x2: p.point.x2().to_string(),
                norm: p.norm.to_string(),
                l: fmt_f64(p.err_l.mid_f64()),
                delta: fmt_f64(p.delta.mid_f64()),
                lambda_hat: next.and_then(|n| lambda_hat(&p.err_l, &n.norm)).map(|x| fmt_f64(x.mid_f64())),
                rho: next.filter(|_| li > 0.0).map(|n| fmt_f64(ln_f64(&n.norm) / li)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(xi: &str, bound: u64) -> ExperimentConfig {
        ExperimentConfig {
            xi: xi.into(),
            norm_bound: bound,
            ..Default::default()
        }
    }

    #[test]
    fn small_run_passes() {
        let r = run_experiment(&cfg("alg:x^4-2 in [1,2]", 2000)).unwrap();
        assert!(r.all_pass, "{:?}", r.failures);
        assert!(!r.pairs.is_empty());
        assert_eq!(r.independence, "proven");
        assert!(r.pair_checks.iter().all(|v| v.failed == 0 && v.checked == r.pairs.len()));
    }

    #[test]
    fn rational_xi_is_rejected() {
        assert!(matches!(
            run_experiment(&cfg("alg:2x-3 in [1,2]", 100)),
            Err(LabError::LinearDependence(_))
        ));
    }

    #[test]
    fn config_validation() {
        let reg = CheckRegistry::default();
        assert!(cfg("", 10).validate(&reg).is_err());
        assert!(cfg("dec:1.5", 0).validate(&reg).is_err());
        let mut c = cfg("dec:1.5", 10);
        c.epsilon = "0".into();
        assert!(c.validate(&reg).is_err());
        c.epsilon = "0.25".into();
        assert!(c.validate(&reg).is_ok());
        c.checks = vec!["bogus".into()];
        assert!(c.validate(&reg).is_err());
    }

    #[test]
    fn lambda_hat_of_exact_square_root_decay() {
        // L_i = X_{i+1}^{-1/2} with X_{i+1} = 4^k
        let trace: Vec<Interval> = (1..8u32)
            .map(|k| {
                let l = Interval::from_bounds(BigInt::from(1), BigInt::from(1), k);
                lambda_hat(&l, &(BigInt::from(1) << (2 * k))).unwrap()
            })
            .collect();
        let half = BigRational::new(1.into(), 2.into());
        for x in &trace {
            assert!(x.contains(&half));
        }
        let e = estimate_uniform_exponent(&trace, 3).unwrap();
        assert!(e.contains(&half));
        assert!(rat_to_f64(&e.width()) < 1e-12);
        assert!(estimate_uniform_exponent(&trace[..1], 3).is_err());
    }

    #[test]
    fn window_takes_the_minimum() {
        let pt = |n: i64| Interval::point_int(&BigInt::from(n));
        let e = estimate_uniform_exponent(&[pt(1), pt(5), pt(3), pt(4)], 3).unwrap();
        assert_eq!(e, pt(3));
    }

    #[test]
    fn constants_match_floating_point() {
        let want = [
            2.0 * (9.0 + 11f64.sqrt()) / 35.0,
            (1.0 + 3.0 * 5f64.sqrt()) / 11.0,
            (5.0 - 13f64.sqrt()) / 2.0,
            3f64.sqrt() - 1.0,
            5.0 / 7.0,
            (5.0 + 3.0 * 5f64.sqrt()) / 2.0,
            2.0 + 11f64.sqrt(),
        ];
        let got = constants();
        for (c, w) in got.iter().zip(want) {
            assert!((c.value.parse::<f64>().unwrap() - w).abs() < 1e-14, "{}", c.name);
        }
        // beta0 = 2(1 - lambda0)/(3 lambda0 - 2) and nu = 2(1 - mu)/(3 mu - 2)
        let l0 = want[1];
        assert!((2.0 * (1.0 - l0) / (3.0 * l0 - 2.0) - want[5]).abs() < 1e-12);
        let mu = want[0];
        assert!((2.0 * (1.0 - mu) / (3.0 * mu - 2.0) - want[6]).abs() < 1e-12);
    }

    #[test]
    fn reports_are_deterministic() {
        let c = cfg("alg:x^4-x-1 in [1.2,1.3]", 3000);
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(report_json(&a).unwrap(), report_json(&b).unwrap());
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        write_pairs_csv(&a, &mut ca).unwrap();
        write_pairs_csv(&b, &mut cb).unwrap();
        assert_eq!(ca, cb);
    }

    #[test]
    fn reproducer_is_written_on_failure() {
        struct Never;
        impl PairCheck for Never {
            fn name(&self) -> &'static str {
                "never"
            }
            fn holds(&self, _: PairView<'_>) -> bool {
                false
            }
        }
        let dir = std::env::temp_dir().join(format!("lab-repro-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("repro.json");
        let mut reg = CheckRegistry::empty();
        reg.register(Box::new(Never));
        let mut c = cfg("alg:x^4-2 in [1,2]", 500);
        c.reproducer = Some(path.clone());
        let r = run_experiment_with(&c, &reg).unwrap();
        assert!(!r.all_pass);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"never\"") && text.contains("x^4 - 2"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
