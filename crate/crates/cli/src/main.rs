//! `rankdist`: exact rank distributions of random matrices over finite
//! fields, from the command line.
//!
//! Exit status is 0 when every check passes, 1 when a check fails or a
//! computation cannot be completed, and 2 for invalid arguments.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rankdist::ensembles::{finite_pmf, limit_pmf, EnsembleId, Family, ProbEntry};
use rankdist::gfmatrix::{bench_rank, empirical_pmf, Realization, SampleOptions};
use rankdist::markov::{build_chain, simulate_chain_vs_matrix, verify_stationarity};
use rankdist::qseries::{check_product_inequalities, default_trunc};
use rankdist::rational::{rat_str, to_f64};
use rankdist::stein::{moment_identities, stein_pair_finite, stein_solution, stein_sup_norm, verify_solution_bounds, SteinPair};
use rankdist::tvbounds::{grid_rows, tv_grid, verify_tv_theorem_with, TvGridSpec, Truncations};
use rankdist::Error;
use serde::Serialize;
use serde_json::json;

use output::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "rankdist", version, about = "Rank distributions of random matrices over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact finite-n law of Q_n = n - rank.
    Dist(DistArgs),
    /// Certified enclosure of the limiting law.
    Limit(LimitArgs),
    /// Certified TV distance against the theorem window.
    Tv(TvArgs),
    /// Stein pair registration, solution bounds and sup norms.
    Stein(SteinArgs),
    /// Exact moment identities.
    Moments(DistArgs),
    /// Run every check over a grid.
    Verify(VerifyArgs),
    /// Monte-Carlo histogram against the exact law.
    Sample(SampleArgs),
    /// Rank chain under rank-one updates.
    Markov(MarkovArgs),
    /// Packed vs generic GF(2) rank timings.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
struct EnsembleArgs {
    /// uniform, symmetric, zerodiag (alias skew, symplectic), skewcentro, hermitian
    #[arg(long, short = 'e', default_value = "uniform")]
    ensemble: String,
    /// Extra columns for the uniform ensemble.
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long, short = 'q')]
    q: u32,
    #[arg(long, short = 'n')]
    n: u32,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    #[arg(long, short = 'f', value_enum, default_value = "table")]
    format: Format,
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct TruncArgs {
    /// Explicit limit terms; RANKDIST_TRUNC="K" or "K:T" sets the default.
    #[arg(long)]
    trunc_k: Option<u32>,
    /// Truncation of the infinite q-products.
    #[arg(long)]
    qprod_trunc: Option<u32>,
}

#[derive(Debug, Args)]
struct DistArgs {
    #[command(flatten)]
    ens: EnsembleArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long, short = 'e', default_value = "uniform")]
    ensemble: String,
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long, short = 'q')]
    q: u32,
    /// Parity of n for ensembles whose limit depends on it.
    #[arg(long, value_parser = ["even", "odd"], default_value = "even")]
    parity: String,
    #[command(flatten)]
    trunc: TruncArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct TvArgs {
    #[command(flatten)]
    ens: EnsembleArgs,
    #[command(flatten)]
    trunc: TruncArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SteinArgs {
    #[arg(long, short = 'e', default_value = "uniform")]
    ensemble: String,
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long, short = 'q')]
    q: u32,
    #[arg(long, value_parser = ["even", "odd"], default_value = "even")]
    parity: String,
    /// Largest k with an explicit sup-norm enclosure.
    #[arg(long, default_value_t = 40)]
    k_max: u32,
    /// Comma-separated set A; prints the solution f_A.
    #[arg(long)]
    set: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Every ensemble over the grid.
    #[arg(long, conflicts_with_all = ["ensemble", "q", "n"])]
    all: bool,
    #[arg(long, short = 'e')]
    ensemble: Option<String>,
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long, short = 'q')]
    q: Option<u32>,
    #[arg(long, short = 'n')]
    n: Option<u32>,
    #[arg(long, default_value_t = 5)]
    qmax: u32,
    #[arg(long, default_value_t = 10)]
    nmax: u32,
    #[arg(long, default_value_t = 2)]
    mmax: u32,
    /// Require the Hermitian q >= 3 window.
    #[arg(long)]
    refined: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    ens: EnsembleArgs,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Thread count; 0 uses all cores. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// auto, skew or symplectic (zero-diagonal ensembles only).
    #[arg(long, default_value = "auto")]
    realize: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct MarkovArgs {
    #[arg(long, short = 'q')]
    q: u32,
    #[arg(long, short = 'n')]
    n: u32,
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Also simulate the chain and the rank-one dynamics.
    #[arg(long)]
    simulate: bool,
    #[arg(long, default_value_t = 100_000)]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to 10 n.
    #[arg(long)]
    burn_in: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "64,256,1024")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

/// Why a command did not succeed.
enum Failure {
    Usage(String),
    Check(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::Parity { .. } | Error::Unrealizable(_) | Error::EnumerationGuard { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dist(a) => cmd_dist(a),
        Command::Limit(a) => cmd_limit(a),
        Command::Tv(a) => cmd_tv(a),
        Command::Stein(a) => cmd_stein(a),
        Command::Moments(a) => cmd_moments(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Markov(a) => cmd_markov(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn ensemble_of(name: &str, n: u32, m: u32) -> Result<EnsembleId, Failure> {
    let family = Family::from_str(name)?;
    if family != Family::Uniform && m != 0 {
        return Err(Failure::Usage("--m applies to the uniform ensemble only".into()));
    }
    Ok(family.at(n, m))
}

fn check_q(q: u32) -> Result<(), Failure> {
    if q < 2 {
        return Err(Failure::Usage(format!("q must be at least 2, got {q}")));
    }
    Ok(())
}

impl EnsembleArgs {
    fn resolve(&self) -> Result<EnsembleId, Failure> {
        check_q(self.q)?;
        let e = ensemble_of(&self.ensemble, self.n, self.m)?;
        e.check_n(self.n)?;
        Ok(e)
    }
}

fn parity_n(parity: &str) -> u32 {
    if parity == "odd" {
        1
    } else {
        0
    }
}

/// `(trunc_k, qprod_trunc)` from flags, then RANKDIST_TRUNC, then defaults.
fn truncations(t: &TruncArgs, default_k: u32, q: u32) -> Result<(u32, u32), Failure> {
    let (mut k, mut qp) = (default_k, default_trunc(q));
    if let Ok(v) = std::env::var("RANKDIST_TRUNC") {
        let mut parts = v.split(':');
        let parse = |s: Option<&str>| -> Result<Option<u32>, Failure> {
            s.map(|x| x.trim().parse().map_err(|_| Failure::Usage(format!("bad RANKDIST_TRUNC {v:?}"))))
                .transpose()
        };
        if let Some(x) = parse(parts.next())? {
            k = x;
        }
        if let Some(x) = parse(parts.next())? {
            qp = x;
        }
    }
    Ok((t.trunc_k.unwrap_or(k), t.qprod_trunc.unwrap_or(qp)))
}

fn cmd_dist(a: DistArgs) -> Outcome {
    let e = a.ens.resolve()?;
    let pmf = finite_pmf(e, a.ens.q, a.ens.n)?;
    let rows = pmf
        .probs
        .iter()
        .enumerate()
        .map(|(k, p)| vec![k.to_string(), rat_str(p), format!("{:.12e}", to_f64(p))])
        .collect();
    Report::new(pmf.to_json(), &["k", "prob", "approx"], rows).emit(a.out.format, a.out.out.as_deref())?;
    Ok(())
}

fn cmd_limit(a: LimitArgs) -> Outcome {
    check_q(a.q)?;
    let e = ensemble_of(&a.ensemble, parity_n(&a.parity), a.m)?;
    let (k, qp) = truncations(&a.trunc, 20, a.q)?;
    let lim = limit_pmf(e, a.q, k, qp)?;
    let json = lim.to_json();
    let rows = json
        .probs
        .iter()
        .filter_map(|p| match p {
            ProbEntry::Interval { k, .. } => {
                let iv = &lim.probs[*k as usize];
                Some(vec![k.to_string(), format!("{:.12e}", to_f64(iv.lo())), format!("{:.12e}", to_f64(iv.hi()))])
            }
            ProbEntry::Exact { .. } => None,
        })
        .chain(std::iter::once(vec![
            "tail".into(),
            format!("{:.12e}", to_f64(lim.tail.lo())),
            format!("{:.12e}", to_f64(lim.tail.hi())),
        ]))
        .collect();
    Report::new(json, &["k", "lo", "hi"], rows).emit(a.out.format, a.out.out.as_deref())?;
    Ok(())
}

fn cmd_tv(a: TvArgs) -> Outcome {
    let e = a.ens.resolve()?;
    let pmf_max = e.support_max(a.ens.n);
    let (k, qp) = truncations(&a.trunc, pmf_max + 8, a.ens.q)?;
    let tr = Truncations {
        extra_k: k.saturating_sub(pmf_max),
        qprod_trunc: Some(qp),
        ..Truncations::default()
    };
    let r = verify_tv_theorem_with(e, a.ens.q, a.ens.n, tr)?;
    let cell = rankdist::tvbounds::GridCell {
        ensemble: e,
        q: a.ens.q,
        n: a.ens.n,
        result: Ok(r.clone()),
    };
    let rows = tv_table(&[cell]);
    Report::new(&r, TV_HEADER, rows).emit(a.out.format, a.out.out.as_deref())?;
    if r.all_pass() {
        Ok(())
    } else {
        Err(Failure::Check(r.to_string()))
    }
}

const TV_HEADER: &[&str] = &["ensemble", "q", "n", "window", "tv_lo", "tv_hi", "window_lo", "window_hi", "pass"];

fn tv_table(cells: &[rankdist::tvbounds::GridCell]) -> Vec<Vec<String>> {
    grid_rows(cells)
        .into_iter()
        .map(|r| {
            let f = |s: &str| rankdist::rational::parse_rat(s).map_or(String::new(), |x| format!("{:.6e}", to_f64(&x)));
            vec![
                r.ensemble,
                r.q.to_string(),
                r.n.to_string(),
                r.error.unwrap_or(r.window),
                f(&r.tv_lo),
                f(&r.tv_hi),
                f(&r.window_lo),
                f(&r.window_hi),
                r.pass.to_string(),
            ]
        })
        .collect()
}

fn parse_set(s: &str) -> Result<std::collections::BTreeSet<u32>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| Failure::Usage(format!("bad set element {t:?}"))))
        .collect()
}

fn cmd_stein(a: SteinArgs) -> Outcome {
    check_q(a.q)?;
    let e = ensemble_of(&a.ensemble, parity_n(&a.parity), a.m)?;
    let report = verify_solution_bounds(e, &[a.q], a.k_max)?;
    let target = e.limit_target();
    let pair = SteinPair::limit(target, a.q);
    let lim = limit_pmf(target, a.q, a.k_max + 2, default_trunc(a.q))?;
    let reg = rankdist::stein::register_limit(&pair, &lim);
    let sup: Vec<_> = (0..=a.k_max).map(|k| stein_sup_norm(&pair, &lim, k)).collect::<Result<_, _>>()?;
    let solution = match &a.set {
        Some(s) => Some(stein_solution(&pair, &lim, &parse_set(s)?, a.k_max)?),
        None => None,
    };
    let rows = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.k.map_or("tail".into(), |k| (k + 1).to_string()),
                c.label.clone(),
                format!("{:.6e}", to_f64(c.sup.hi())),
                format!("{:.6e}", to_f64(&c.bound)),
                c.pass.to_string(),
            ]
        })
        .collect();
    #[derive(Serialize)]
    struct SteinJson<'a> {
        pair: &'a SteinPair,
        registration: &'a rankdist::stein::LimitRegistration,
        bounds: &'a rankdist::stein::SolutionBoundReport,
        sup_norm: &'a [rankdist::IntervalRat],
        solution: Option<&'a rankdist::stein::SteinSolution>,
    }
    let json = SteinJson {
        pair: &pair,
        registration: &reg,
        bounds: &report,
        sup_norm: &sup,
        solution: solution.as_ref(),
    };
    Report::new(json, &["j", "bound", "sup |f_A(j)|", "constant", "pass"], rows).emit(a.out.format, a.out.out.as_deref())?;
    if report.all_pass && reg.ok {
        Ok(())
    } else {
        Err(Failure::Check(format!("{e} q={}: solution bound or registration failed", a.q)))
    }
}

fn cmd_moments(a: DistArgs) -> Outcome {
    let e = a.ens.resolve()?;
    let r = moment_identities(e, a.ens.q, a.ens.n)?;
    let (_, reg) = stein_pair_finite(e, a.ens.q, a.ens.n)?;
    let rows = r
        .checks
        .iter()
        .map(|c| vec![c.name.clone(), rat_str(&c.lhs), rat_str(&c.rhs), c.pass.to_string()])
        .collect();
    Report::new(json!({"moments": r, "registration": reg}), &["identity", "lhs", "rhs", "pass"], rows)
        .emit(a.out.format, a.out.out.as_deref())?;
    if r.all_pass && reg.ok {
        Ok(())
    } else {
        Err(Failure::Check(format!("{e} q={} n={}", a.ens.q, a.ens.n)))
    }
}

/// One line of the verification report.
#[derive(Debug, Serialize)]
struct CheckRecord {
    section: &'static str,
    anchor: String,
    item: String,
    pass: bool,
    detail: String,
}

fn record(section: &'static str, anchor: impl Into<String>, item: impl Into<String>, pass: bool, detail: impl Into<String>) -> CheckRecord {
    CheckRecord {
        section,
        anchor: anchor.into(),
        item: item.into(),
        pass,
        detail: detail.into(),
    }
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let qmax = a.qmax.max(2);
    let (ensembles, qs, ns): (Vec<EnsembleId>, Vec<u32>, Vec<u32>) = if a.all {
        (EnsembleId::all(0..=a.mmax), (2..=qmax).collect(), (1..=a.nmax).collect())
    } else {
        let name = a.ensemble.as_deref().ok_or_else(|| Failure::Usage("pass --all or --ensemble".into()))?;
        let qs = match a.q {
            Some(q) => {
                check_q(q)?;
                vec![q]
            }
            None => (2..=qmax).collect(),
        };
        let ns: Vec<u32> = match a.n {
            Some(0) => return Err(Failure::Usage("the TV theorems need n >= 1".into())),
            Some(n) => vec![n],
            None => (1..=a.nmax).collect(),
        };
        let family = Family::from_str(name)?;
        if family != Family::Uniform && a.m != 0 {
            return Err(Failure::Usage("--m applies to the uniform ensemble only".into()));
        }
        let mut es: Vec<EnsembleId> = ns.iter().map(|&n| family.at(n, a.m)).collect();
        es.dedup();
        if let Some(n) = a.n {
            es[0].check_n(n)?;
        }
        if a.refined && (family != Family::Hermitian || qs.iter().any(|&q| q < 3)) {
            return Err(Failure::Usage("--refined needs --ensemble hermitian with q >= 3".into()));
        }
        (es, qs, ns)
    };

    let mut records = Vec::new();

    let cells = tv_grid(&TvGridSpec {
        ensembles: ensembles.clone(),
        qs: qs.clone(),
        ns: ns.clone(),
    });
    for c in &cells {
        let item = format!("{} q={} n={}", c.ensemble, c.q, c.n);
        match &c.result {
            Ok(r) => {
                records.push(record("tv", r.anchor.clone(), item.clone(), r.pass, format!("TV in [{:.6e}, {:.6e}]", to_f64(r.tv.lo()), to_f64(r.tv.hi()))));
                if let Some(x) = &r.refined {
                    records.push(record("tv", x.window.anchor.clone(), item.clone(), x.pass, ""));
                } else if a.refined {
                    records.push(record("tv", "hermitian, q >= 3 refinement", item.clone(), false, "window missing"));
                }
                records.push(record("tv", "lower bound through p_0", item.clone(), r.lower_mechanism_ok, ""));
                if let Some(ok) = r.reduction_agrees {
                    records.push(record("tv", "skew centrosymmetric even n equals square uniform at n/2", item, ok, ""));
                }
            }
            Err(e) => records.push(record("tv", "TV window", item, false, e.to_string())),
        }
    }

    let mut targets: Vec<EnsembleId> = ensembles.iter().map(|e| e.limit_target()).collect();
    targets.sort_by_key(|e| e.to_string());
    targets.dedup();
    for &e in &targets {
        match verify_solution_bounds(e, &qs, 40) {
            Ok(r) => {
                for c in &r.checks {
                    let at = c.k.map_or("tail".to_string(), |k| format!("j={}", k + 1));
                    records.push(record("stein", format!("solution bound {}", c.label), format!("{} q={} {at}", c.ensemble, c.q), c.pass, ""));
                }
            }
            Err(err) => records.push(record("stein", "solution bounds", e.to_string(), false, err.to_string())),
        }
    }

    for &e in &ensembles {
        for &q in &qs {
            for &n in &ns {
                if !e.accepts_n(n) {
                    continue;
                }
                let item = format!("{e} q={q} n={n}");
                match moment_identities(e, q, n) {
                    Ok(r) => {
                        for c in &r.checks {
                            records.push(record("moments", c.name.clone(), item.clone(), c.pass, ""));
                        }
                    }
                    Err(err) => records.push(record("moments", "moment identities", item.clone(), false, err.to_string())),
                }
                match stein_pair_finite(e, q, n) {
                    Ok(_) => records.push(record("stein", "a(k) p_(k-1) = b(k) p_k", item, true, "")),
                    Err(err) => records.push(record("stein", "a(k) p_(k-1) = b(k) p_k", item, false, err.to_string())),
                }
            }
        }
    }

    for &q in &qs {
        match check_product_inequalities(q, 30) {
            Ok(r) => {
                let fails: Vec<String> = r.failures().map(|c| format!("{} n={:?} m={:?}", c.name, c.n, c.m)).collect();
                records.push(record("qseries", "product inequalities", format!("q={q}"), fails.is_empty(), format!("{} checks {fails:?}", r.checks.len())));
            }
            Err(err) => records.push(record("qseries", "product inequalities", format!("q={q}"), false, err.to_string())),
        }
    }

    let ms: Vec<u32> = ensembles
        .iter()
        .filter_map(|e| match e {
            EnsembleId::UniformRect { m } => Some(*m),
            _ => None,
        })
        .collect();
    for &m in &ms {
        for &q in &qs {
            for &n in &ns {
                let item = format!("q={q} n={n} m={m}");
                match build_chain(q, n, m).and_then(|c| verify_stationarity(&c)) {
                    Ok(r) => records.push(record("markov", "pi M = pi", item, r.pass, "")),
                    Err(err) => records.push(record("markov", "pi M = pi", item, false, err.to_string())),
                }
            }
        }
    }

    let failed = records.iter().filter(|r| !r.pass).count();
    let mut by_section: std::collections::BTreeMap<&str, (usize, usize)> = Default::default();
    for r in &records {
        let e = by_section.entry(r.section).or_default();
        e.0 += 1;
        e.1 += (!r.pass) as usize;
    }
    for (s, (total, bad)) in &by_section {
        eprintln!("{s:<8} {total:>6} checks, {bad} failed");
    }
    let rows = records
        .iter()
        .map(|r| vec![r.section.to_string(), r.anchor.clone(), r.item.clone(), r.pass.to_string(), r.detail.clone()])
        .collect();
    Report::new(
        json!({"pass": failed == 0, "checks": records.len(), "failed": failed, "records": records}),
        &["section", "anchor", "item", "pass", "detail"],
        rows,
    )
    .emit(a.out.format, a.out.out.as_deref())?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{failed} of {} checks failed", records.len())))
    }
}

fn cmd_sample(a: SampleArgs) -> Outcome {
    let e = a.ens.resolve()?;
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let realization = Realization::from_str(&a.realize)?;
    let r = empirical_pmf(
        e,
        a.ens.q,
        a.ens.n,
        a.trials,
        a.seed,
        SampleOptions {
            realization,
            workers: a.workers,
        },
    )?;
    let rows = r
        .counts
        .iter()
        .zip(&r.exact)
        .enumerate()
        .map(|(k, (c, p))| {
            vec![
                k.to_string(),
                c.to_string(),
                format!("{:.6}", *c as f64 / a.trials as f64),
                format!("{:.6}", to_f64(p)),
            ]
        })
        .collect();
    let json = json!({
        "ensemble": e.to_string(),
        "q": r.q,
        "n": r.n,
        "trials": r.trials,
        "seed": r.seed,
        "realization": r.realization,
        "counts": r.counts,
        "exact": r.exact.iter().map(rat_str).collect::<Vec<_>>(),
        "empirical_tv": r.empirical_tv,
        "chi2": r.chi2,
        "dof": r.dof,
    });
    Report::new(json, &["k", "count", "empirical", "exact"], rows).emit(a.out.format, a.out.out.as_deref())?;
    eprintln!("empirical TV {:.5}, chi2 {:.2} on {} dof", r.empirical_tv, r.chi2, r.dof);
    Ok(())
}

fn cmd_markov(a: MarkovArgs) -> Outcome {
    check_q(a.q)?;
    let chain = build_chain(a.q, a.n, a.m)?;
    let stat = verify_stationarity(&chain)?;
    let sim = if a.simulate {
        Some(simulate_chain_vs_matrix(a.q, a.n, a.m, a.steps, a.seed, a.burn_in)?)
    } else {
        None
    };
    let rows = (0..chain.states())
        .map(|i| {
            vec![
                i.to_string(),
                rat_str(&chain.down[i]),
                rat_str(&chain.stay[i]),
                rat_str(&chain.up[i]),
                rat_str(&stat.defect[i]),
            ]
        })
        .collect();
    let json = json!({
        "q": a.q,
        "n": a.n,
        "m": a.m,
        "chain": chain,
        "stationarity": stat,
        "simulation": sim,
    });
    Report::new(json, &["state", "down", "stay", "up", "defect"], rows).emit(a.out.format, a.out.out.as_deref())?;
    if !stat.pass {
        return Err(Failure::Check("stationarity defect is nonzero".into()));
    }
    if let Some(s) = sim {
        eprintln!("occupation TV: chain {:.5}, matrix {:.5}", s.empirical_tv_chain, s.empirical_tv_matrix);
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Outcome {
    if a.sizes.is_empty() || a.sizes.contains(&0) {
        return Err(Failure::Usage("--sizes needs positive sizes".into()));
    }
    let rows = bench_rank(&a.sizes, a.seed)?;
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.size.to_string(),
                format!("{:.6}", r.packed_secs),
                format!("{:.6}", r.generic_secs),
                r.packed_rank.to_string(),
                r.generic_rank.to_string(),
                r.agree.to_string(),
            ]
        })
        .collect();
    Report::new(&rows, &["size", "packed_secs", "generic_secs", "packed_rank", "generic_rank", "agree"], table)
        .emit(a.out.format, a.out.out.as_deref())?;
    if rows.iter().all(|r| r.agree) {
        Ok(())
    } else {
        Err(Failure::Check("packed and generic ranks disagree".into()))
    }
}
