//! Stein characterizations of the rank laws.
//!
//! A pair `(a, b)` characterizes a law `{p_k}` on an integer interval when
//! `a(k) p_{k-1} = b(k) p_k` for every `k`; equivalently
//! `E[a(X+1) f(X+1)] = E[b(X) f(X)]` for all test functions `f`. For the
//! limiting laws the Stein equation
//! `a(k+1) f(k+1) - b(k) f(k) = h(k) - E h(Q)` is solved explicitly and the
//! supremum of `|f_A(k+1)|` over all sets `A` is computed in closed form.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ensembles::{finite_pmf, EnsembleId, LimitPmf};
use crate::error::{Error, Result};
use crate::interval::IntervalRat;
use crate::rational::{decimal, int, qpow, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PairKind {
    /// Finite-`n` law of an ensemble.
    Finite { ensemble: EnsembleId, q: u32, n: u32 },
    /// Limiting law of an ensemble.
    Limit { ensemble: EnsembleId, q: u32 },
    /// Poisson(lambda) conditioned on `{0..kmax}`: `a = lambda`, `b(k) = k`.
    TruncatedPoisson {
        #[serde(with = "crate::rational::as_str")]
        lambda: Rat,
        kmax: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    /// `{0, ..., K}`
    Bounded(u32),
    /// `N_0`
    Naturals,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinPair {
    pub kind: PairKind,
}

fn pow_minus_one(q: u32, e: i64) -> Rat {
    qpow(q, e) - int(1)
}

fn is_even(x: i64) -> bool {
    x.rem_euclid(2) == 0
}

impl SteinPair {
    pub fn finite(ensemble: EnsembleId, q: u32, n: u32) -> Result<Self> {
        ensemble.check_n(n)?;
        Ok(SteinPair {
            kind: PairKind::Finite { ensemble, q, n },
        })
    }

    pub fn limit(ensemble: EnsembleId, q: u32) -> Self {
        SteinPair {
            kind: PairKind::Limit {
                ensemble: ensemble.limit_target(),
                q,
            },
        }
    }

    pub fn truncated_poisson(lambda: Rat, kmax: u32) -> Self {
        SteinPair {
            kind: PairKind::TruncatedPoisson { lambda, kmax },
        }
    }

    pub fn support(&self) -> Support {
        match &self.kind {
            PairKind::Finite { ensemble, n, .. } => Support::Bounded(ensemble.support_max(*n)),
            PairKind::Limit { .. } => Support::Naturals,
            PairKind::TruncatedPoisson { kmax, .. } => Support::Bounded(*kmax),
        }
    }

    pub fn q(&self) -> Option<u32> {
        match &self.kind {
            PairKind::Finite { q, .. } | PairKind::Limit { q, .. } => Some(*q),
            PairKind::TruncatedPoisson { .. } => None,
        }
    }

    pub fn a(&self, k: i64) -> Rat {
        match &self.kind {
            PairKind::Finite { ensemble, q, n } => finite_a(*ensemble, *q, *n as i64, k),
            PairKind::Limit { ensemble, q } => limit_a(*ensemble, *q),
            PairKind::TruncatedPoisson { lambda, kmax } => {
                if k <= *kmax as i64 {
                    lambda.clone()
                } else {
                    Rat::zero()
                }
            }
        }
    }

    pub fn b(&self, k: i64) -> Rat {
        match &self.kind {
            PairKind::Finite { ensemble, q, .. } | PairKind::Limit { ensemble, q } => {
                b_fn(*ensemble, *q, k)
            }
            PairKind::TruncatedPoisson { .. } => int(k),
        }
    }
}

fn limit_a(ensemble: EnsembleId, q: u32) -> Rat {
    match ensemble {
        EnsembleId::UniformRect { .. }
        | EnsembleId::SkewCentroEven
        | EnsembleId::SkewCentroOdd
        | EnsembleId::Hermitian => int(q as i64),
        EnsembleId::Symmetric => int(1),
        EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd => int(q as i64 * q as i64),
    }
}

/// `b` is shared by the finite and limiting pairs of each ensemble.
fn b_fn(ensemble: EnsembleId, q: u32, k: i64) -> Rat {
    match ensemble {
        EnsembleId::UniformRect { m } => pow_minus_one(q, k) * pow_minus_one(q, k + m as i64),
        EnsembleId::SkewCentroEven => b_fn(EnsembleId::UniformRect { m: 0 }, q, k),
        EnsembleId::Symmetric => pow_minus_one(q, k),
        EnsembleId::ZeroDiagEven => pow_minus_one(q, 2 * k - 1) * pow_minus_one(q, 2 * k),
        EnsembleId::ZeroDiagOdd => pow_minus_one(q, 2 * k + 1) * pow_minus_one(q, 2 * k),
        EnsembleId::SkewCentroOdd => pow_minus_one(q, k) * pow_minus_one(q, k + 1),
        EnsembleId::Hermitian => pow_minus_one(q, 2 * k),
    }
}

fn finite_a(ensemble: EnsembleId, q: u32, n: i64, k: i64) -> Rat {
    let qr = int(q as i64);
    match ensemble {
        EnsembleId::UniformRect { .. } => &qr * (int(1) - qpow(q, -n + k - 1)),
        EnsembleId::SkewCentroEven => finite_a(EnsembleId::UniformRect { m: 0 }, q, n / 2, k),
        EnsembleId::Symmetric => {
            if is_even(n - k + 1) {
                int(1) - qpow(q, -n + k - 1)
            } else {
                int(1)
            }
        }
        EnsembleId::ZeroDiagEven => {
            let half = n / 2;
            &qr * &qr - qpow(q, -2 * (half - k))
        }
        EnsembleId::ZeroDiagOdd => {
            let half = (n - 1) / 2;
            &qr * &qr - qpow(q, -2 * (half - k))
        }
        EnsembleId::SkewCentroOdd => qr - qpow(q, k - (n - 1) / 2),
        EnsembleId::Hermitian => {
            let sign = if is_even(n - k + 1) { int(1) } else { int(-1) };
            qr - sign * qpow(q, k - n)
        }
    }
}

/// Per-`k` registration record `a(k) p_{k-1}` vs `b(k) p_k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegistrationReport {
    pub pair: SteinPair,
    /// `max_k |a(k) p_{k-1} - b(k) p_k|`; exactly zero when registered.
    #[serde(with = "crate::rational::as_str")]
    pub max_defect: Rat,
    /// `a(K+1)` for bounded supports.
    #[serde(with = "crate::rational::as_str")]
    pub a_past_support: Rat,
    pub ok: bool,
}

/// Exact registration check against a pmf on `{0..K}`; requires `b(0) = 0`
/// implicitly through `k = 0` and `a(K+1) = 0` through `k = K+1`.
pub fn registration_defect(pair: &SteinPair, probs: &[Rat]) -> Rat {
    let p = |k: i64| -> Rat {
        if k < 0 || k as usize >= probs.len() {
            Rat::zero()
        } else {
            probs[k as usize].clone()
        }
    };
    let kmax = probs.len() as i64 - 1;
    (0..=kmax + 1)
        .map(|k| (pair.a(k) * p(k - 1) - pair.b(k) * p(k)).abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// Builds the pair for a finite law and registers it exactly.
pub fn stein_pair_finite(ensemble: EnsembleId, q: u32, n: u32) -> Result<(SteinPair, RegistrationReport)> {
    let pair = SteinPair::finite(ensemble, q, n)?;
    let pmf = finite_pmf(ensemble, q, n)?;
    let max_defect = registration_defect(&pair, &pmf.probs);
    let a_past_support = pair.a(pmf.support_max() as i64 + 1);
    let ok = max_defect.is_zero() && a_past_support.is_zero();
    let report = RegistrationReport {
        pair: pair.clone(),
        max_defect,
        a_past_support,
        ok,
    };
    if !ok {
        return Err(Error::Inconsistent(format!("registration failed for {ensemble} q={q} n={n}")));
    }
    Ok((pair, report))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitRegistration {
    /// Exact defect of `a(k) w_{k-1} = b(k) w_k` on the exact weights.
    #[serde(with = "crate::rational::as_str")]
    pub weight_defect: Rat,
    /// Whether `a(k) p_{k-1}` and `b(k) p_k` intersect for all `k <= trunc_k`.
    pub intervals_intersect: bool,
    pub ok: bool,
}

/// Registers a limit pair against its certified limit law.
pub fn register_limit(pair: &SteinPair, limit: &LimitPmf) -> LimitRegistration {
    let weight_defect = registration_defect_prefix(pair, &limit.weights);
    let mut intervals_intersect = true;
    for k in 0..=limit.trunc_k as i64 {
        let rhs = limit.probs[k as usize].scale(&pair.b(k));
        let lhs = if k == 0 {
            IntervalRat::zero()
        } else {
            limit.probs[k as usize - 1].scale(&pair.a(k))
        };
        intervals_intersect &= lhs.intersects(&rhs);
    }
    LimitRegistration {
        ok: weight_defect.is_zero() && intervals_intersect,
        weight_defect,
        intervals_intersect,
    }
}

/// Like [`registration_defect`] but for a prefix of an infinite law: no
/// boundary condition past the last explicit term.
fn registration_defect_prefix(pair: &SteinPair, w: &[Rat]) -> Rat {
    let mut worst = pair.b(0) * &w[0];
    worst = worst.abs();
    for k in 1..w.len() {
        let d = (pair.a(k as i64) * &w[k - 1] - pair.b(k as i64) * &w[k]).abs();
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Test functions for the characterization identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "fn", content = "j")]
pub enum TrialFn {
    Zero,
    Indicator(i64),
    Identity,
    Square,
    /// `q^x`
    QPow,
    /// `q^-x`
    QPowInv,
    /// `q^{2x}`
    Q2Pow,
}

impl TrialFn {
    pub fn eval(self, x: i64, q: u32) -> Rat {
        match self {
            TrialFn::Zero => Rat::zero(),
            TrialFn::Indicator(j) => {
                if x == j {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            }
            TrialFn::Identity => int(x),
            TrialFn::Square => int(x * x),
            TrialFn::QPow => qpow(q, x),
            TrialFn::QPowInv => qpow(q, -x),
            TrialFn::Q2Pow => qpow(q, 2 * x),
        }
    }

    /// Indicators of every point in `{0..=kmax+1}` plus the analytic trial
    /// functions.
    pub fn standard(kmax: u32) -> Vec<TrialFn> {
        let mut v: Vec<TrialFn> = (0..=kmax as i64 + 1).map(TrialFn::Indicator).collect();
        v.extend([
            TrialFn::Zero,
            TrialFn::Identity,
            TrialFn::Square,
            TrialFn::QPow,
            TrialFn::QPowInv,
            TrialFn::Q2Pow,
        ]);
        v
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialDefect {
    pub trial: TrialFn,
    #[serde(with = "crate::rational::as_str")]
    pub defect: Rat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub defects: Vec<TrialDefect>,
    #[serde(with = "crate::rational::as_str")]
    pub max_defect: Rat,
}

/// `E[a(X+1) f(X+1)] - E[b(X) f(X)]` for each trial function, exactly.
pub fn characterization_check(pair: &SteinPair, probs: &[Rat], trials: &[TrialFn]) -> Result<CharacterizationReport> {
    if let Support::Bounded(k) = pair.support() {
        if k as usize + 1 != probs.len() {
            return Err(Error::InvalidParameter(format!(
                "pmf support {{0..{}}} does not match pair support {{0..{k}}}",
                probs.len().saturating_sub(1)
            )));
        }
    }
    let q = pair.q().unwrap_or(2);
    let defects: Vec<TrialDefect> = trials
        .iter()
        .map(|&f| {
            let mut d = Rat::zero();
            for (k, p) in probs.iter().enumerate() {
                let k = k as i64;
                d += p * (pair.a(k + 1) * f.eval(k + 1, q) - pair.b(k) * f.eval(k, q));
            }
            TrialDefect { trial: f, defect: d }
        })
        .collect();
    let max_defect = defects.iter().map(|d| d.defect.abs()).max().unwrap_or_else(Rat::zero);
    Ok(CharacterizationReport { defects, max_defect })
}

/// Poisson(lambda) restricted to `{0..kmax}` and renormalized.
pub fn truncated_poisson_pmf(lambda: &Rat, kmax: u32) -> Vec<Rat> {
    let mut w = vec![Rat::one()];
    for k in 1..=kmax as i64 {
        let next = w.last().unwrap() * lambda / int(k);
        w.push(next);
    }
    let total = w.iter().fold(Rat::zero(), |a, x| a + x);
    w.into_iter().map(|x| x / &total).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Le,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentCheck {
    pub name: String,
    pub relation: Relation,
    #[serde(with = "crate::rational::as_str")]
    pub lhs: Rat,
    #[serde(with = "crate::rational::as_str")]
    pub rhs: Rat,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentReport {
    pub ensemble: EnsembleId,
    pub q: u32,
    pub n: u32,
    pub checks: Vec<MomentCheck>,
    pub all_pass: bool,
}

fn moment(name: impl Into<String>, relation: Relation, lhs: Rat, rhs: Rat) -> MomentCheck {
    let pass = match relation {
        Relation::Eq => lhs == rhs,
        Relation::Le => lhs <= rhs,
    };
    MomentCheck {
        name: name.into(),
        relation,
        lhs,
        rhs,
        pass,
    }
}

/// Exact moment identities (and the Hermitian moment bound) evaluated
/// from the finite law, plus the recursions for `c_k = E[q^{k Q_n}]`
/// derived from each finite characterization.
pub fn moment_identities(ensemble: EnsembleId, q: u32, n: u32) -> Result<MomentReport> {
    let pmf = finite_pmf(ensemble, q, n)?;
    let c = |k: i64| pmf.expect(|x| qpow(q, k * x));
    let ni = n as i64;
    let one = int(1);
    let mut checks = Vec::new();
    match ensemble {
        EnsembleId::UniformRect { .. } | EnsembleId::SkewCentroEven => {
            let (m, nn) = match ensemble {
                EnsembleId::UniformRect { m } => (m as i64, ni),
                _ => (0, ni / 2),
            };
            checks.push(moment(
                "E[q^Q] = 1 + q^-m - q^-(n+m)",
                Relation::Eq,
                c(1),
                &one + qpow(q, -m) - qpow(q, -(nn + m)),
            ));
            for k in -1..=2 {
                let lhs = qpow(q, m) * c(k + 2);
                let rhs = (&one + qpow(q, m) - qpow(q, -nn + k + 1)) * c(k + 1) + (qpow(q, k + 1) - &one) * c(k);
                checks.push(moment(format!("c_k recursion at k = {k}"), Relation::Eq, lhs, rhs));
            }
        }
        EnsembleId::Symmetric => {
            let lhs = pmf.expect(|x| if is_even(ni - x) { qpow(q, x) } else { Rat::zero() });
            checks.push(moment("E[1(n-Q even) q^Q] = 1", Relation::Eq, lhs, one.clone()));
        }
        EnsembleId::ZeroDiagEven => {
            let half = ni / 2;
            checks.push(moment("E[q^2Q] = q + 1 - q^(1-n)", Relation::Eq, c(2), int(q as i64) + &one - qpow(q, 1 - ni)));
            let qi = qpow(q, -1);
            for k in [-2, 0, 1, 2] {
                let lhs = &qi * c(k + 4) - (&one + &qi - qpow(q, -2 * half + 2 + k)) * c(k + 2) + (&one - qpow(q, k + 2)) * c(k);
                checks.push(moment(format!("c_k recursion at k = {k}"), Relation::Eq, lhs, Rat::zero()));
            }
        }
        EnsembleId::ZeroDiagOdd => {
            let half = (ni - 1) / 2;
            checks.push(moment("E[q^2Q] = 1 + q^-1 - q^-n", Relation::Eq, c(2), &one + qpow(q, -1) - qpow(q, -ni)));
            let qr = int(q as i64);
            for k in [-2, 0, 1, 2] {
                let lhs = &qr * c(k + 4) - (&one + &qr - qpow(q, -2 * half + 2 + k)) * c(k + 2) + (&one - qpow(q, k + 2)) * c(k);
                checks.push(moment(format!("c_k recursion at k = {k}"), Relation::Eq, lhs, Rat::zero()));
            }
        }
        EnsembleId::SkewCentroOdd => {
            let s = (ni - 1) / 2;
            checks.push(moment(
                "E[q^Q] = 1 + 1/q - q^-((n+1)/2)",
                Relation::Eq,
                c(1),
                &one + qpow(q, -1) - qpow(q, -(ni + 1) / 2),
            ));
            let qr = int(q as i64);
            for k in -1..=2 {
                let lhs = &qr * c(k + 2);
                let rhs = (&qr + &one - qpow(q, k + 1 - s)) * c(k + 1) + (qpow(q, k + 1) - &one) * c(k);
                checks.push(moment(format!("c_k recursion at k = {k}"), Relation::Eq, lhs, rhs));
            }
        }
        EnsembleId::Hermitian => {
            let exact = pmf.expect(|x| {
                let sign = if is_even(ni - x) { int(1) } else { int(-1) };
                int(2) * qpow(q, -x) - sign * qpow(q, -ni)
            });
            checks.push(moment("E[q^Q] = E[2 q^-Q - (-1)^(n-Q) q^-n]", Relation::Eq, c(1), exact));
            checks.push(moment("E[q^Q] <= 2 + q^-n", Relation::Le, c(1), int(2) + qpow(q, -ni)));
        }
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(MomentReport {
        ensemble,
        q,
        n,
        checks,
        all_pass,
    })
}

fn check_limit_pair(pair: &SteinPair, limit: &LimitPmf) -> Result<()> {
    match &pair.kind {
        PairKind::Limit { ensemble, q } if *ensemble == limit.ensemble.limit_target() && *q == limit.q => Ok(()),
        _ => Err(Error::InvalidParameter("pair is not the limit pair of this law".into())),
    }
}

/// Solution of the Stein equation for `h = 1_A` against a limit law.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SteinSolution {
    pub target_set: BTreeSet<u32>,
    pub k_max: u32,
    /// `values[k]` encloses `f_A(k)`, `values[0] = 0`, for `k <= k_max + 1`.
    pub values: Vec<IntervalRat>,
    /// The partial-sum route `sum_{j<=k} (h(j) - P(A)) p_j / (a(k+1) p_k)`.
    pub partial_sum: Vec<IntervalRat>,
    /// The cross-form route through `P(A ∩ U_k)` and `P(A ∩ U_k^c)`.
    pub cross_form: Vec<IntervalRat>,
}

pub fn stein_solution(pair: &SteinPair, limit: &LimitPmf, target: &BTreeSet<u32>, k_max: u32) -> Result<SteinSolution> {
    check_limit_pair(pair, limit)?;
    if k_max >= limit.trunc_k {
        return Err(Error::InvalidParameter(format!(
            "k_max = {k_max} must be below trunc_k = {}",
            limit.trunc_k
        )));
    }
    if let Some(&big) = target.iter().next_back() {
        if big > k_max {
            return Err(Error::InvalidParameter(format!("set element {big} exceeds k_max = {k_max}")));
        }
    }
    let w = &limit.weights;
    let scale = &limit.scale;
    let w_a = target.iter().fold(Rat::zero(), |acc, &j| acc + &w[j as usize]);

    let mut values = vec![IntervalRat::zero()];
    let mut partial_sum = vec![IntervalRat::zero()];
    let mut cross_form = vec![IntervalRat::zero()];
    let mut w_a_upto = Rat::zero();
    for k in 0..=k_max {
        if target.contains(&k) {
            w_a_upto += &w[k as usize];
        }
        let w_upto = limit.weight_upto(k);
        let denom = pair.a(k as i64 + 1) * &w[k as usize];
        if !denom.is_positive() {
            return Err(Error::Blowup(format!("a(k+1) p_k not positive at k = {k}")));
        }
        let inv = denom.recip();

        let partial = scale.scale(&-(&w_a * &w_upto)).add_rat(&w_a_upto).scale(&inv);

        let w_a_above = &w_a - &w_a_upto;
        let inner = limit
            .weight_above(k)
            .scale(&w_a_upto)
            .add_rat(&-(&w_a_above * &w_upto));
        let cross = (scale * &inner).scale(&inv);

        let both = partial.intersect(&cross).ok_or_else(|| {
            Error::Inconsistent(format!("Stein solution routes disagree at k = {k}: {partial:?} vs {cross:?}"))
        })?;
        partial_sum.push(partial);
        cross_form.push(cross);
        values.push(both);
    }
    Ok(SteinSolution {
        target_set: target.clone(),
        k_max,
        values,
        partial_sum,
        cross_form,
    })
}

/// Whether `a(k+1) f(k+1) - b(k) f(k)` encloses `1_A(k) - P(A)` for every
/// `k <= k_max`.
pub fn stein_equation_holds(pair: &SteinPair, limit: &LimitPmf, sol: &SteinSolution) -> bool {
    let w_a = sol
        .target_set
        .iter()
        .fold(Rat::zero(), |acc, &j| acc + &limit.weights[j as usize]);
    let p_a = limit.scale.scale(&w_a);
    (0..=sol.k_max as usize).all(|k| {
        let lhs = &sol.values[k + 1].scale(&pair.a(k as i64 + 1)) - &sol.values[k].scale(&pair.b(k as i64));
        let h = if sol.target_set.contains(&(k as u32)) { int(1) } else { Rat::zero() };
        let rhs = (-&p_a).add_rat(&h);
        lhs.intersects(&rhs)
    })
}

/// `sup_A |f_A(k+1)| = P(U_k) P(U_k^c) / (a(k+1) p_k)`, attained at
/// `A = U_k` (and `A = U_k^c` for the infimum).
pub fn stein_sup_norm(pair: &SteinPair, limit: &LimitPmf, k: u32) -> Result<IntervalRat> {
    check_limit_pair(pair, limit)?;
    if k > limit.trunc_k {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds trunc_k = {}", limit.trunc_k)));
    }
    let w_upto = limit.weight_upto(k);
    let denom = pair.a(k as i64 + 1) * &limit.weights[k as usize];
    let coeff = w_upto / denom;
    Ok((&limit.scale * &limit.weight_above(k)).scale(&coeff))
}

/// Which arguments of `f_A` a solution bound constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundScope {
    /// `|f_A(1)|` (k = 0)
    AtOne,
    /// `|f_A(j)|` for `j >= 2` (k >= 1)
    FromTwo,
    /// every `j >= 1`
    All,
}

impl BoundScope {
    fn covers(self, k: u32) -> bool {
        match self {
            BoundScope::AtOne => k == 0,
            BoundScope::FromTwo => k >= 1,
            BoundScope::All => true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionBound {
    pub label: String,
    pub scope: BoundScope,
    #[serde(with = "crate::rational::as_str")]
    pub value: Rat,
}

fn bound(label: &str, scope: BoundScope, value: Rat) -> SolutionBound {
    SolutionBound {
        label: label.to_string(),
        scope,
        value,
    }
}

/// The explicit solution bounds for the limit pair of an ensemble.
pub fn solution_bounds(ensemble: EnsembleId, q: u32) -> Vec<SolutionBound> {
    let r = |e: i64| qpow(q, -e);
    use BoundScope::*;
    match ensemble.limit_target() {
        EnsembleId::UniformRect { m } => {
            let m = m as i64;
            let mut v = vec![bound("2/q^(m+2)", All, int(2) * r(m + 2))];
            if m == 0 {
                v.push(bound("1/q^2 + 1/q^3", All, r(2) + r(3)));
            }
            v
        }
        EnsembleId::Symmetric => vec![
            bound("1/q + 1/q^3", AtOne, r(1) + r(3)),
            bound("2/q^2", FromTwo, int(2) * r(2)),
        ],
        EnsembleId::ZeroDiagEven => vec![
            bound("1/q^3 + 1/q^5", AtOne, r(3) + r(5)),
            bound("1.31/q^7", FromTwo, decimal("1.31") * r(7)),
        ],
        EnsembleId::ZeroDiagOdd => vec![
            bound("2/q^5", AtOne, int(2) * r(5)),
            bound("1.14/q^9", FromTwo, decimal("1.14") * r(9)),
        ],
        EnsembleId::SkewCentroOdd => vec![bound("2/q^3", All, int(2) * r(3))],
        EnsembleId::Hermitian => {
            let mut v = vec![
                bound("1.1/q^2", AtOne, decimal("1.1") * r(2)),
                bound("1.8/q^4", FromTwo, decimal("1.8") * r(4)),
            ];
            if q >= 3 {
                v.push(bound("1.4/q^4 (q >= 3)", FromTwo, decimal("1.4") * r(4)));
            }
            v
        }
        EnsembleId::SkewCentroEven => unreachable!("limit_target maps to uniform"),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCheck {
    pub ensemble: EnsembleId,
    pub q: u32,
    /// `None` for the tail argument covering every `k > k_max`.
    pub k: Option<u32>,
    pub label: String,
    /// Enclosure of `sup_A |f_A(k+1)|`, or the geometric tail majorant.
    pub sup: IntervalRat,
    #[serde(with = "crate::rational::as_str")]
    pub bound: Rat,
    #[serde(with = "crate::rational::as_str")]
    pub margin: Rat,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionBoundReport {
    pub ensemble: EnsembleId,
    pub k_max: u32,
    pub checks: Vec<BoundCheck>,
    pub all_pass: bool,
}

/// Geometric majorant of `sup_A |f_A(k+1)|` valid for every `k' >= k`:
/// `P(U_k^c)/(a p_k) <= r/(a (1 - r))` with `r = a/b(k+1)`, decreasing in `k`.
pub fn sup_norm_tail_majorant(pair: &SteinPair, k: u32) -> Option<Rat> {
    let a = pair.a(k as i64 + 1);
    let r = &a / pair.b(k as i64 + 1);
    if r >= Rat::one() {
        return None;
    }
    Some(&r / (a * (Rat::one() - &r)))
}

/// Checks every solution bound of the ensemble's limit pair for each `q`:
/// exact sup-norm enclosures for `k <= k_max` and the monotone geometric
/// majorant for all larger `k`. Also records the general `|f_A(1)|` bound
/// `P(Q >= 1)/a(1)`, which the closed-form supremum attains.
pub fn verify_solution_bounds(ensemble: EnsembleId, q_list: &[u32], k_max: u32) -> Result<SolutionBoundReport> {
    let mut checks = Vec::new();
    for &q in q_list {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("q = {q} < 2")));
        }
        let target = ensemble.limit_target();
        let limit = crate::ensembles::limit_pmf(target, q, (k_max + 2).max(4), crate::qseries::default_trunc(q))?;
        let pair = SteinPair::limit(target, q);
        let bounds = solution_bounds(target, q);
        let sups: Vec<IntervalRat> = (0..=k_max).map(|k| stein_sup_norm(&pair, &limit, k)).collect::<Result<_>>()?;

        for b in &bounds {
            for k in 0..=k_max {
                if !b.scope.covers(k) {
                    continue;
                }
                let sup = &sups[k as usize];
                let margin = &b.value - sup.hi();
                checks.push(BoundCheck {
                    ensemble,
                    q,
                    k: Some(k),
                    label: b.label.clone(),
                    sup: sup.clone(),
                    bound: b.value.clone(),
                    pass: !margin.is_negative(),
                    margin,
                });
            }
            if b.scope != BoundScope::AtOne {
                let maj = sup_norm_tail_majorant(&pair, k_max + 1)
                    .ok_or_else(|| Error::TailRatio { k: k_max + 1 })?;
                let margin = &b.value - &maj;
                checks.push(BoundCheck {
                    ensemble,
                    q,
                    k: None,
                    label: format!("{} (all k > {k_max})", b.label),
                    sup: IntervalRat::new(Rat::zero(), maj.clone())?,
                    bound: b.value.clone(),
                    pass: !margin.is_negative(),
                    margin,
                });
            }
        }

        let general = (&limit.scale * &limit.weight_above(0)).scale(&pair.a(1).recip());
        let margin = general.hi() - sups[0].hi();
        checks.push(BoundCheck {
            ensemble,
            q,
            k: Some(0),
            label: "P(Q >= 1)/a(1)".into(),
            sup: sups[0].clone(),
            bound: general.hi().clone(),
            pass: !margin.is_negative(),
            margin,
        });
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(SolutionBoundReport {
        ensemble,
        k_max,
        checks,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::limit_pmf;
    use crate::rational::frac;

    #[test]
    fn uniform_limit_pair_values() {
        let pair = SteinPair::limit(EnsembleId::UniformRect { m: 0 }, 2);
        for k in 0..6 {
            assert_eq!(pair.a(k), int(2));
            let e = int(2).pow(k as i32) - int(1);
            assert_eq!(pair.b(k), &e * &e);
        }
    }

    #[test]
    fn symmetric_finite_a_indicator() {
        let pair = SteinPair::finite(EnsembleId::Symmetric, 2, 3).unwrap();
        assert_eq!(pair.a(2), frac(3, 4));
        assert_eq!(pair.a(3), int(1));
        assert_eq!(pair.a(4), int(0));
    }

    #[test]
    fn bounded_pairs_vanish_past_support() {
        for e in EnsembleId::all(0..=2) {
            for q in 2..=4 {
                for n in 0..=7 {
                    if e.accepts_n(n) {
                        let pair = SteinPair::finite(e, q, n).unwrap();
                        assert!(pair.a(e.support_max(n) as i64 + 1).is_zero(), "{e} q={q} n={n}");
                        assert!(pair.b(0).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn finite_registration_exact() {
        for e in EnsembleId::all(0..=3) {
            for q in 2..=5 {
                for n in 0..=12 {
                    if e.accepts_n(n) {
                        let (_, rep) = stein_pair_finite(e, q, n).unwrap();
                        assert!(rep.max_defect.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn limit_registration() {
        for e in EnsembleId::all(0..=2) {
            for q in 2..=5 {
                let lim = limit_pmf(e, q, 10, 40).unwrap();
                let reg = register_limit(&SteinPair::limit(e, q), &lim);
                assert!(reg.ok, "{e} q={q}");
            }
        }
    }

    #[test]
    fn characterization_examples() {
        let pmf = finite_pmf(EnsembleId::Symmetric, 2, 4).unwrap();
        let pair = SteinPair::finite(EnsembleId::Symmetric, 2, 4).unwrap();
        let rep = characterization_check(&pair, &pmf.probs, &[TrialFn::Indicator(2), TrialFn::Zero]).unwrap();
        assert!(rep.max_defect.is_zero());

        let e = EnsembleId::UniformRect { m: 1 };
        let pmf = finite_pmf(e, 3, 5).unwrap();
        let pair = SteinPair::finite(e, 3, 5).unwrap();
        let rep = characterization_check(&pair, &pmf.probs, &TrialFn::standard(5)).unwrap();
        assert!(rep.max_defect.is_zero());
    }

    #[test]
    fn characterization_detects_wrong_law() {
        let pmf = finite_pmf(EnsembleId::Symmetric, 2, 4).unwrap();
        let pair = SteinPair::finite(EnsembleId::Hermitian, 2, 4).unwrap();
        let rep = characterization_check(&pair, &pmf.probs, &TrialFn::standard(4)).unwrap();
        assert!(!rep.max_defect.is_zero());
        let short = &pmf.probs[..3];
        assert!(characterization_check(&pair, short, &[TrialFn::Zero]).is_err());
    }

    #[test]
    fn poisson_sanity_instance() {
        let lambda = frac(3, 2);
        let probs = truncated_poisson_pmf(&lambda, 9);
        let pair = SteinPair::truncated_poisson(lambda, 9);
        assert!(registration_defect(&pair, &probs).is_zero());
        let rep = characterization_check(&pair, &probs, &TrialFn::standard(9)).unwrap();
        assert!(rep.max_defect.is_zero());
    }

    #[test]
    fn moment_examples() {
        let rep = moment_identities(EnsembleId::UniformRect { m: 0 }, 2, 1).unwrap();
        assert_eq!(rep.checks[0].lhs, frac(3, 2));
        assert!(rep.all_pass);
        let rep = moment_identities(EnsembleId::ZeroDiagEven, 2, 4).unwrap();
        assert_eq!(rep.checks[0].lhs, frac(23, 8));
        assert!(rep.all_pass);
        let rep = moment_identities(EnsembleId::Hermitian, 3, 1).unwrap();
        assert_eq!(rep.checks[0].lhs, frac(5, 3));
        assert!(rep.all_pass);
    }

    #[test]
    fn empty_set_solution_is_zero() {
        let e = EnsembleId::UniformRect { m: 0 };
        let lim = limit_pmf(e, 2, 12, 80).unwrap();
        let pair = SteinPair::limit(e, 2);
        let sol = stein_solution(&pair, &lim, &BTreeSet::new(), 8).unwrap();
        assert!(sol.values.iter().all(|v| v.lo().is_zero() && v.hi().is_zero()));
    }

    #[test]
    fn complement_flips_sign() {
        let e = EnsembleId::Hermitian;
        let lim = limit_pmf(e, 3, 12, 60).unwrap();
        let pair = SteinPair::limit(e, 3);
        let k_max = 8;
        let a: BTreeSet<u32> = [0, 2, 3].into();
        let all: BTreeSet<u32> = (0..=k_max).collect();
        let ac: BTreeSet<u32> = all.difference(&a).copied().collect();
        let fa = stein_solution(&pair, &lim, &a, k_max).unwrap();
        let fc = stein_solution(&pair, &lim, &ac, k_max).unwrap();
        let fall = stein_solution(&pair, &lim, &all, k_max).unwrap();
        // h_A + h_{A^c} = h_{U_kmax}, so f_A + f_{A^c} = f_{U_kmax}.
        for k in 1..=k_max as usize + 1 {
            let s = &fa.values[k] + &fc.values[k];
            assert!(s.intersects(&fall.values[k]), "k={k}");
        }
    }

    #[test]
    fn f1_for_singleton_zero() {
        let e = EnsembleId::UniformRect { m: 0 };
        let lim = limit_pmf(e, 2, 12, 80).unwrap();
        let pair = SteinPair::limit(e, 2);
        let sol = stein_solution(&pair, &lim, &BTreeSet::from([0]), 6).unwrap();
        let expected = (&IntervalRat::point(int(1)) - &lim.probs[0]).scale(&frac(1, 2));
        assert!(sol.values[1].intersects(&expected));
        assert!((sol.values[1].midpoint_f64() - (1.0 - 0.288_788_095_086_602_4) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn solution_satisfies_stein_equation() {
        for e in EnsembleId::all(0..=1) {
            let q = 3;
            let lim = limit_pmf(e, q, 22, 60).unwrap();
            let pair = SteinPair::limit(e, q);
            let a: BTreeSet<u32> = [1, 4, 5].into();
            let sol = stein_solution(&pair, &lim, &a, 20).unwrap();
            assert!(stein_equation_holds(&pair, &lim, &sol), "{e}");
        }
    }

    #[test]
    fn sup_norm_attained_at_u_k() {
        let e = EnsembleId::Symmetric;
        let lim = limit_pmf(e, 2, 12, 80).unwrap();
        let pair = SteinPair::limit(e, 2);
        for k in 0..6u32 {
            let uk: BTreeSet<u32> = (0..=k).collect();
            let sol = stein_solution(&pair, &lim, &uk, 8).unwrap();
            let sup = stein_sup_norm(&pair, &lim, k).unwrap();
            assert!(sup.intersects(&sol.values[k as usize + 1]));
        }
    }

    #[test]
    fn sup_norm_bound_examples() {
        let e = EnsembleId::UniformRect { m: 0 };
        let rep = verify_solution_bounds(e, &[2], 20).unwrap();
        assert!(rep.all_pass);
        assert!(rep.checks.iter().any(|c| c.label == "1/q^2 + 1/q^3"));
        let rep = verify_solution_bounds(EnsembleId::UniformRect { m: 2 }, &[2], 20).unwrap();
        assert!(rep.all_pass);
        let rep = verify_solution_bounds(EnsembleId::ZeroDiagOdd, &[2], 10).unwrap();
        let f1 = rep.checks.iter().find(|c| c.label == "2/q^5").unwrap();
        assert_eq!(f1.k, Some(0));
        assert!(f1.pass);
        let rep = verify_solution_bounds(EnsembleId::SkewCentroOdd, &[5], 10).unwrap();
        assert!(rep.all_pass);
        assert!(rep.checks.iter().all(|c| c.label != "2/q^3" || c.bound == frac(2, 125)));
        let rep = verify_solution_bounds(EnsembleId::Hermitian, &[3], 10).unwrap();
        assert!(rep.all_pass);
        assert!(rep.checks.iter().any(|c| c.label.starts_with("1.4/q^4")));
    }

    #[test]
    fn sup_norm_vanishes_deep_in_tail() {
        let e = EnsembleId::UniformRect { m: 0 };
        let lim = limit_pmf(e, 2, 30, 80).unwrap();
        let pair = SteinPair::limit(e, 2);
        let s = stein_sup_norm(&pair, &lim, 25).unwrap();
        assert!(s.hi() < &qpow(2, -20));
    }
}
