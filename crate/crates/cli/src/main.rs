//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error,
//! 3 precision ceiling reached.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use cubelab::lab::{self, ExperimentConfig};
use cubelab::minimal::{minimal_sequence_with, ScanOptions};
use cubelab::ring::{expected_dim, j_subspace};
use cubelab::search::{self, SupportSet};
use cubelab::{LabError, RealContext};

#[derive(Parser, Debug)]
#[command(name = "cubelab", version, about = "Minimal points of (1, xi, xi^3) and their divisibility invariants")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// TOML file whose keys mirror the long flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal points up to a norm bound, as CSV.
    Minpoints(MinpointsArgs),
    /// Dimensions of R_l and S_2l intersected with J^(k), against the closed form.
    RingDims(RingDimsArgs),
    /// Element of maximal J-valuation on a monomial support.
    FindRelation(FindRelationArgs),
    /// The generator P_l of the special family and the H P_l certificates.
    SpecialFamily(SpecialFamilyArgs),
    /// Symbolic and seeded random checks of the polynomial identities.
    VerifyIdentities(VerifyArgs),
    /// Full experiment: sequence, pair records, every check, reports.
    Run(RunArgs),
}

#[derive(Args, Debug, Default)]
struct XiArgs {
    /// `dec:<decimal>` or `alg:<integer polynomial> in [a,b]`.
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long)]
    precision: Option<u32>,
    /// Precision ceiling in bits.
    #[arg(long)]
    ceiling: Option<u32>,
    #[arg(long)]
    block_size: Option<u64>,
}

#[derive(Args, Debug)]
struct MinpointsArgs {
    #[command(flatten)]
    xi: XiArgs,
    /// Output path; standard output when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RingDimsArgs {
    #[arg(long)]
    lmax: Option<u32>,
    /// Also tabulate S_2l for l up to this bound.
    #[arg(long)]
    smax: Option<u32>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FindRelationArgs {
    #[arg(long)]
    degree: Option<u32>,
    /// Indices `m,n` separated by `;`, e.g. `3,0;0,2`. Defaults to all of T_d.
    #[arg(long)]
    support: Option<String>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpecialFamilyArgs {
    #[arg(long)]
    ell: Option<i64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    xi: XiArgs,
    #[arg(long)]
    epsilon: Option<String>,
    /// Comma-separated pair checks; all when absent.
    #[arg(long)]
    checks: Option<String>,
    /// Skip the logarithmic inequality.
    #[arg(long)]
    no_prop8: bool,
    #[arg(long)]
    prop8_ceiling: Option<u32>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    reproducer: Option<PathBuf>,
}

/// Keys accepted in the config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    threads: Option<usize>,
    xi: Option<String>,
    bound: Option<u64>,
    precision: Option<u32>,
    ceiling: Option<u32>,
    block_size: Option<u64>,
    csv: Option<PathBuf>,
    json: Option<PathBuf>,
    lmax: Option<u32>,
    smax: Option<u32>,
    degree: Option<u32>,
    support: Option<String>,
    ell: Option<i64>,
    samples: Option<usize>,
    seed: Option<u64>,
    epsilon: Option<String>,
    checks: Option<String>,
    prop8: Option<bool>,
    prop8_ceiling: Option<u32>,
    window: Option<usize>,
    reproducer: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), LabError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), LabError> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn context(a: &XiArgs, f: &FileConfig) -> Result<(RealContext, u64, u64), LabError> {
    let xi = pick(a.xi.clone(), f.xi.clone()).ok_or_else(|| LabError::InvalidArgument("--xi is required".into()))?;
    let bound = pick(a.bound, f.bound).ok_or_else(|| LabError::InvalidArgument("--bound is required".into()))?;
    let precision = pick(a.precision, f.precision).unwrap_or(128);
    let ceiling = pick(a.ceiling, f.ceiling).unwrap_or(cubelab::real::DEFAULT_CEILING);
    let block = pick(a.block_size, f.block_size).unwrap_or(4096);
    if precision == 0 || block == 0 {
        return Err(LabError::InvalidArgument("precision and block size must be positive".into()));
    }
    let ctx = RealContext::new(cubelab::parse_xi(&xi)?, precision, ceiling)?;
    Ok((ctx, bound, block))
}

fn minpoints(a: &MinpointsArgs, f: &FileConfig) -> Result<Outcome, LabError> {
    let (ctx, bound, block) = context(&a.xi, f)?;
    let seq = minimal_sequence_with(
        &ctx,
        bound,
        ScanOptions {
            block_size: block,
            parallel: true,
        },
    )?;
    let mut buf = Vec::new();
    lab::write_sequence_csv(&lab::point_rows(&seq), &mut buf)?;
    emit(pick(a.csv.as_deref(), f.csv.as_deref()), &String::from_utf8_lossy(&buf))?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct DimRow {
    space: &'static str,
    l: u32,
    k: u32,
    dim: usize,
    expected: usize,
    pass: bool,
}

fn ring_dims(a: &RingDimsArgs, f: &FileConfig) -> Result<Outcome, LabError> {
    let lmax = pick(a.lmax, f.lmax).unwrap_or(10);
    let smax = pick(a.smax, f.smax);
    let mut rows = Vec::new();
    for l in 0..=lmax {
        for k in 0..=l + 2 {
            let dim = j_subspace(l, k).len();
            let expected = expected_dim(l, k);
            rows.push(DimRow {
                space: "R",
                l,
                k,
                dim,
                expected,
                pass: dim == expected,
            });
        }
    }
    for l in smax.map_or(1..=0, |s| 0..=s) {
        for (k, dim) in search::s_subspace_dims(2 * l, l + 2)?.into_iter().enumerate() {
            let expected = expected_dim(l, k as u32);
            rows.push(DimRow {
                space: "S",
                l: 2 * l,
                k: k as u32,
                dim,
                expected,
                pass: dim == expected,
            });
        }
    }
    let mut out = String::from("space\tdegree\tk\tdim\texpected\tverdict\n");
    for r in &rows {
        out += &format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.space,
            r.l,
            r.k,
            r.dim,
            r.expected,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    emit(None, &out)?;
    if let Some(p) = pick(a.json.as_deref(), f.json.as_deref()) {
        write_json(p, &rows)?;
    }
    Ok(if rows.iter().all(|r| r.pass) { Outcome::Pass } else { Outcome::Fail })
}

fn parse_support(text: &str) -> Result<Vec<(u32, u32)>, LabError> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (m, n) = pair
                .split_once(',')
                .ok_or_else(|| LabError::Parse(format!("expected `m,n`, got `{pair}`")))?;
            let p = |s: &str| s.trim().parse::<u32>().map_err(|e| LabError::Parse(format!("`{s}`: {e}")));
            Ok((p(m)?, p(n)?))
        })
        .collect()
}

fn find_relation(a: &FindRelationArgs, f: &FileConfig) -> Result<Outcome, LabError> {
    let d = pick(a.degree, f.degree).ok_or_else(|| LabError::InvalidArgument("--degree is required".into()))?;
    let set = match pick(a.support.clone(), f.support.clone()) {
        Some(s) => SupportSet::new(d, parse_support(&s)?)?,
        None => SupportSet::full(d),
    };
    let r = search::maximal_j_element(&set)?;
    let mut out = format!("k_max\t{}\nnon_unique\t{}\n", r.k_max, r.non_unique);
    for (k, dim) in &r.dims {
        out += &format!("dim\t{k}\t{dim}\n");
    }
    for b in &r.basis {
        out += &format!("element\t{b}\n");
    }
    emit(None, &out)?;
    if let Some(p) = pick(a.json.as_deref(), f.json.as_deref()) {
        write_json(p, &r)?;
    }
    Ok(Outcome::Pass)
}

fn special_family(a: &SpecialFamilyArgs, f: &FileConfig) -> Result<Outcome, LabError> {
    let ell = pick(a.ell, f.ell).ok_or_else(|| LabError::InvalidArgument("--ell is required".into()))?;
    let fam = search::special_family(ell)?;
    let hp = search::hp_decompose(&fam.element, ell)?;
    let mut out = format!(
        "ell\t{}\ndegree\t{}\nsupport\t{}\ndim\t{}\ndim_next\t{}\nanchor_f\t{}\nanchor_g\t{}\nelement\t{}\n",
        fam.ell, fam.degree, fam.support_size, fam.dim, fam.dim_next, fam.anchor_f, fam.anchor_g, fam.element
    );
    for (k, ((r, s), t)) in hp.r.iter().zip(&hp.s).zip(&hp.t).enumerate() {
        out += &format!("rst\t{k}\t{r}\t{s}\t{t}\n");
    }
    out += &format!("a\t{}\nb\t{}\nscale\t{}\n", hp.a, hp.b, hp.scale);
    for c in &hp.checks {
        out += &format!("check\t{}\t{}\n", c.name, if c.pass { "PASS" } else { "FAIL" });
    }
    emit(None, &out)?;
    if let Some(p) = pick(a.json.as_deref(), f.json.as_deref()) {
        #[derive(Serialize)]
        struct Both<'a> {
            family: &'a search::SpecialFamily,
            decomposition: &'a search::HpDecomposition,
        }
        write_json(
            p,
            &Both {
                family: &fam,
                decomposition: &hp,
            },
        )?;
    }
    Ok(if hp.all_pass() { Outcome::Pass } else { Outcome::Fail })
}

fn verify(a: &VerifyArgs, f: &FileConfig) -> Result<Outcome, LabError> {
    let samples = pick(a.samples, f.samples).unwrap_or(200);
    let seed = pick(a.seed, f.seed).unwrap_or(0);
    let checks = cubelab::identities::verify_identities(samples, seed);
    let mut out = String::new();
    for c in &checks {
        out += &format!("{}\t{}\t{}\n", if c.pass { "PASS" } else { "FAIL" }, c.samples, c.name);
    }
    emit(None, &out)?;
    if let Some(p) = pick(a.json.as_deref(), f.json.as_deref()) {
        write_json(p, &checks)?;
    }
    Ok(if checks.iter().all(|c| c.pass) { Outcome::Pass } else { Outcome::Fail })
}

fn run(a: &RunArgs, f: &FileConfig) -> Result<Outcome, LabError> {
    let d = ExperimentConfig::default();
    let cfg = ExperimentConfig {
        xi: pick(a.xi.xi.clone(), f.xi.clone()).unwrap_or_default(),
        norm_bound: pick(a.xi.bound, f.bound).unwrap_or(d.norm_bound),
        precision_bits: pick(a.xi.precision, f.precision).unwrap_or(d.precision_bits),
        ceiling: pick(a.xi.ceiling, f.ceiling).unwrap_or(d.ceiling),
        epsilon: pick(a.epsilon.clone(), f.epsilon.clone()).unwrap_or(d.epsilon),
        checks: pick(a.checks.clone(), f.checks.clone())
            .map(|s| s.split(',').map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect())
            .unwrap_or_default(),
        prop8: if a.no_prop8 { false } else { f.prop8.unwrap_or(d.prop8) },
        prop8_ceiling: pick(a.prop8_ceiling, f.prop8_ceiling).unwrap_or(d.prop8_ceiling),
        window: pick(a.window, f.window).unwrap_or(d.window),
        block_size: pick(a.xi.block_size, f.block_size).unwrap_or(d.block_size),
        csv: pick(a.csv.clone(), f.csv.clone()),
        json: pick(a.json.clone(), f.json.clone()),
        reproducer: pick(a.reproducer.clone(), f.reproducer.clone()),
    };
    let report = lab::run_experiment(&cfg)?;
    let mut out = format!(
        "xi\t{}\nindependence\t{}\npoints\t{}\nindex_set\t{}\npairs\t{}\n",
        report.xi_spec,
        report.independence,
        report.sequence.len(),
        report.index_set.len(),
        report.pairs.len()
    );
    for v in report.sequence_checks.iter().chain(&report.pair_checks) {
        out += &format!(
            "{}\t{}\t{}/{}\n",
            if v.failed == 0 { "PASS" } else { "FAIL" },
            v.name,
            v.checked - v.failed,
            v.checked
        );
    }
    let p = &report.prop8;
    out += &format!(
        "prop8\tholds {}\tfails {}\tundecidable {}\tskipped {}\n",
        p.holds, p.fails, p.undecidable, p.skipped
    );
    if let Some([lo, hi]) = &report.monitors.exponent_estimate {
        out += &format!("exponent_estimate\t[{lo}, {hi}]\t(diagnostic)\n");
    }
    emit(None, &out)?;
    Ok(if report.all_pass { Outcome::Pass } else { Outcome::Fail })
}

fn exit_code(e: &LabError) -> u8 {
    match e {
        LabError::PrecisionCeiling { .. } | LabError::Undecidable(_) => 3,
        LabError::InvariantViolation(_)
        | LabError::DimensionMismatch(_)
        | LabError::DecompositionFailure(_)
        | LabError::NotInSpan { .. } => 1,
        _ => 2,
    }
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, LabError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| LabError::Parse(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let result = load_config(cli.config.as_deref()).and_then(|file| {
        if let Some(n) = cli.threads.or(file.threads) {
            if n == 0 {
                return Err(LabError::InvalidArgument("--threads must be positive".into()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| LabError::InvalidArgument(e.to_string()))?;
        }
        match &cli.command {
            Command::Minpoints(a) => minpoints(a, &file),
            Command::RingDims(a) => ring_dims(a, &file),
            Command::FindRelation(a) => find_relation(a, &file),
            Command::SpecialFamily(a) => special_family(a, &file),
            Command::VerifyIdentities(a) => verify(a, &file),
            Command::Run(a) => run(a, &file),
        }
    });
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
