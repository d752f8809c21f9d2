//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rankdist::ensembles::{finite_pmf, rank_count_qbinomial, skewcentro_even_reduction, EnsembleId};
use rankdist::gfmatrix::{empirical_pmf, enumerate_ensemble, Realization, SampleOptions, Sampler, ENUMERATION_GUARD};
use rankdist::markov::{build_chain, simulate_chain_vs_matrix, verify_stationarity};
use rankdist::qseries::check_product_inequalities;
use rankdist::rational::Rat;
use rankdist::stein::{
    moment_identities, register_limit, stein_pair_finite, verify_solution_bounds, SteinPair,
};
use rankdist::tvbounds::{tv_grid, TvGridSpec};
use rankdist::{limit_pmf, qseries::default_trunc};

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn non_uniform() -> Vec<EnsembleId> {
    vec![
        EnsembleId::Symmetric,
        EnsembleId::ZeroDiagEven,
        EnsembleId::ZeroDiagOdd,
        EnsembleId::SkewCentroEven,
        EnsembleId::SkewCentroOdd,
        EnsembleId::Hermitian,
    ]
}

fn tv_cells(ensembles: Vec<EnsembleId>) -> Outcome {
    let spec = TvGridSpec {
        ensembles,
        qs: vec![2, 3, 4, 5],
        ns: (1..=10).collect(),
    };
    let cells = tv_grid(&spec);
    let mut failures = Vec::new();
    let mut windows = 0;
    for c in &cells {
        match &c.result {
            Ok(r) => {
                windows += 1 + r.refined.is_some() as usize;
                if !r.all_pass() {
                    failures.push(format!("{r}"));
                }
            }
            Err(e) => failures.push(format!("{} q={} n={}: {e}", c.ensemble, c.q, c.n)),
        }
    }
    ok(
        failures.is_empty() && !cells.is_empty(),
        format!("{} cells, {windows} windows, {} failures {:?}", cells.len(), failures.len(), failures),
    )
}

fn criterion1() -> Outcome {
    tv_cells(vec![
        EnsembleId::UniformRect { m: 0 },
        EnsembleId::UniformRect { m: 1 },
        EnsembleId::UniformRect { m: 2 },
    ])
}

fn criterion2() -> Outcome {
    tv_cells(non_uniform())
}

fn criterion3() -> Outcome {
    let mut checks = 0;
    let mut failures = Vec::new();
    for e in EnsembleId::all(0..=3) {
        for q in 2..=5 {
            for n in 0..=12 {
                if !e.accepts_n(n) {
                    continue;
                }
                match moment_identities(e, q, n) {
                    Ok(r) => {
                        checks += r.checks.len();
                        if !r.all_pass {
                            failures.push(format!("{e} q={q} n={n}"));
                        }
                    }
                    Err(err) => failures.push(format!("{e} q={q} n={n}: {err}")),
                }
            }
        }
    }
    ok(failures.is_empty(), format!("{checks} exact identities, failures {failures:?}"))
}

fn criterion4() -> Outcome {
    let mut failures = Vec::new();
    let mut registered = 0;
    for e in EnsembleId::all(0..=3) {
        for q in 2..=5 {
            for n in 0..=12 {
                if e.accepts_n(n) {
                    match stein_pair_finite(e, q, n) {
                        Ok(_) => registered += 1,
                        Err(err) => failures.push(format!("finite {e} q={q} n={n}: {err}")),
                    }
                }
            }
            let lim = match limit_pmf(e, q, 42, default_trunc(q)) {
                Ok(l) => l,
                Err(err) => {
                    failures.push(format!("limit {e} q={q}: {err}"));
                    continue;
                }
            };
            if register_limit(&SteinPair::limit(e, q), &lim).ok {
                registered += 1;
            } else {
                failures.push(format!("limit registration {e} q={q}"));
            }
        }
    }
    let mut bound_checks = 0;
    for e in EnsembleId::all(0..=3) {
        if e == EnsembleId::SkewCentroEven {
            continue;
        }
        match verify_solution_bounds(e, &[2, 3, 4, 5], 40) {
            Ok(r) => {
                bound_checks += r.checks.len();
                for c in r.checks.iter().filter(|c| !c.pass) {
                    failures.push(format!("{} q={} k={:?} {}", c.ensemble, c.q, c.k, c.label));
                }
            }
            Err(err) => failures.push(format!("bounds {e}: {err}")),
        }
    }
    ok(
        failures.is_empty(),
        format!("{registered} exact registrations, {bound_checks} sup-norm checks (k <= 40 plus tail), failures {failures:?}"),
    )
}

fn product_count(k: u32, n: u32, r: u32, q: u32) -> Rat {
    let qb = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        let qi = qb.pow(i);
        num *= (qb.pow(k) - &qi) * (qb.pow(n) - &qi);
        den *= qb.pow(r) - &qi;
    }
    Rat::new(num, den) / Rat::from_integer(qb.pow(k * n))
}

fn criterion5() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    for e in EnsembleId::all(0..=3) {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            for n in 0..=8 {
                if !e.accepts_n(n) {
                    continue;
                }
                let Ok(s) = Sampler::new(e, q, n, Realization::Auto) else { continue };
                if s.ensemble_size() > ENUMERATION_GUARD / 16 {
                    continue;
                }
                let counts = match enumerate_ensemble(e, q, n, Realization::Auto) {
                    Ok(c) => c,
                    Err(err) => {
                        failures.push(format!("{e} q={q} n={n}: {err}"));
                        continue;
                    }
                };
                cases += 1;
                if counts.pmf() != finite_pmf(e, q, n).unwrap().probs {
                    failures.push(format!("{e} q={q} n={n}: {:?}", counts.by_rank));
                }
            }
        }
    }
    let spot = [
        (EnsembleId::UniformRect { m: 0 }, 2, 2, vec![1u64, 9, 6]),
        (EnsembleId::Symmetric, 2, 2, vec![1, 3, 4]),
        (EnsembleId::Hermitian, 3, 1, vec![1, 2]),
    ];
    for (e, q, n, want) in spot {
        let got = enumerate_ensemble(e, q, n, Realization::Auto).map(|c| c.by_rank);
        if got.as_ref() != Ok(&want) {
            failures.push(format!("spot {e} q={q} n={n}: {got:?}"));
        }
    }
    let mut qb = 0;
    for q in 2..=4 {
        for k in 0..=8 {
            for extra in 0..=3 {
                let cols = k + extra;
                for r in 0..=k {
                    qb += 1;
                    if rank_count_qbinomial(k, cols, r, q).ok() != Some(product_count(k, cols, r, q)) {
                        failures.push(format!("qbinomial q={q} {k}x{cols} r={r}"));
                    }
                }
            }
        }
    }
    ok(failures.is_empty(), format!("{cases} enumerations, {qb} rank counts, failures {failures:?}"))
}

fn criterion6() -> Outcome {
    let mut failures = Vec::new();
    let mut rows = 0;
    for q in [3, 5] {
        for n in (0..=12).step_by(2) {
            match skewcentro_even_reduction(q, n) {
                Ok(w) => {
                    rows += w.rows.len();
                    if !w.all_equal {
                        failures.push(format!("q={q} n={n}"));
                    }
                }
                Err(e) => failures.push(format!("q={q} n={n}: {e}")),
            }
        }
    }
    ok(failures.is_empty(), format!("{rows} terms equal, failures {failures:?}"))
}

fn criterion7() -> Outcome {
    let mut failures = Vec::new();
    let mut chains = 0;
    for q in 2..=5 {
        for n in 1..=12 {
            for m in 0..=3 {
                chains += 1;
                let r = build_chain(q, n, m).and_then(|c| verify_stationarity(&c));
                match r {
                    Ok(r) if r.pass && r.defect.iter().all(Zero::is_zero) => {}
                    Ok(_) => failures.push(format!("q={q} n={n} m={m}")),
                    Err(e) => failures.push(format!("q={q} n={n} m={m}: {e}")),
                }
            }
        }
    }
    let mut sims = Vec::new();
    for (q, n, m) in [(2, 4, 0), (3, 3, 1)] {
        match simulate_chain_vs_matrix(q, n, m, 100_000, 2024, None) {
            Ok(r) => {
                sims.push(format!(
                    "q={q} n={n} m={m}: chain {:.4}, matrix {:.4}",
                    r.empirical_tv_chain, r.empirical_tv_matrix
                ));
                if r.empirical_tv_chain >= 0.05 || r.empirical_tv_matrix >= 0.05 {
                    failures.push(format!("simulation q={q} n={n} m={m}"));
                }
            }
            Err(e) => failures.push(format!("simulation q={q} n={n} m={m}: {e}")),
        }
    }
    ok(failures.is_empty(), format!("{chains} chains with zero defect; {}; failures {failures:?}", sims.join("; ")))
}

fn criterion8() -> Outcome {
    let cases = [
        (EnsembleId::UniformRect { m: 0 }, 2, 6, Realization::Auto),
        (EnsembleId::UniformRect { m: 2 }, 3, 5, Realization::Auto),
        (EnsembleId::Symmetric, 3, 6, Realization::Auto),
        (EnsembleId::ZeroDiagEven, 3, 4, Realization::Skew),
        (EnsembleId::ZeroDiagEven, 2, 6, Realization::Symplectic),
        (EnsembleId::ZeroDiagOdd, 5, 5, Realization::Skew),
        (EnsembleId::ZeroDiagOdd, 4, 5, Realization::Symplectic),
        (EnsembleId::SkewCentroEven, 3, 6, Realization::Auto),
        (EnsembleId::SkewCentroOdd, 3, 7, Realization::Auto),
        (EnsembleId::Hermitian, 3, 4, Realization::Auto),
    ];
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (e, q, n, realization) in cases {
        let run = |workers| empirical_pmf(e, q, n, 100_000, 99, SampleOptions { realization, workers });
        match (run(1), run(4)) {
            (Ok(a), Ok(b)) => {
                worst = worst.max(a.empirical_tv);
                if a.empirical_tv >= 0.02 {
                    failures.push(format!("{e} q={q} n={n}: TV {:.4}", a.empirical_tv));
                }
                if a.counts != b.counts {
                    failures.push(format!("{e} q={q} n={n}: not deterministic"));
                }
            }
            (Err(err), _) | (_, Err(err)) => failures.push(format!("{e} q={q} n={n}: {err}")),
        }
    }
    ok(
        failures.is_empty(),
        format!("{} ensembles at 1e5 trials, worst TV {worst:.4}, failures {failures:?}", cases.len()),
    )
}

fn criterion9() -> Outcome {
    let mut failures = Vec::new();
    let mut checks = 0;
    for q in 2..=9 {
        match check_product_inequalities(q, 30) {
            Ok(r) => {
                checks += r.checks.len();
                failures.extend(r.failures().map(|c| format!("{} q={} n={:?} m={:?}", c.name, c.q, c.n, c.m)));
            }
            Err(e) => failures.push(format!("q={q}: {e}")),
        }
    }
    ok(failures.is_empty(), format!("{checks} exact checks, failures {failures:?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("uniform TV windows, q<=5, m<=2, n<=10", criterion1),
        ("structured-ensemble TV windows, q<=5, n<=10", criterion2),
        ("moment identities exact, q<=5, n<=12", criterion3),
        ("Stein registration and solution bounds, k<=40", criterion4),
        ("exact laws equal exhaustive enumeration", criterion5),
        ("skew centrosymmetric even n equals square uniform at n/2", criterion6),
        ("rank chain stationarity and simulation", criterion7),
        ("Monte-Carlo consistency at 1e5 trials", criterion8),
        ("product inequalities, q<=9, n<=30", criterion9),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "criterion {}: {} - {name} [{:.1}s] {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
