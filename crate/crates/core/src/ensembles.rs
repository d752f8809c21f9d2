//! Exact finite-`n` rank laws and certified limiting laws for the six
//! matrix ensembles.
//!
//! All laws are indexed by `k`, the value of `Q_n`: `n - rank` for the
//! rectangular, symmetric and Hermitian ensembles, `(n - rank) / 2` for
//! even-`n` alternating ensembles and `(n - 1 - rank) / 2` for odd-`n` ones.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalRat;
use crate::qseries::{finite_qproduct, infinite_qproduct, qbinomial, QProductSpec, Sign};
use crate::rational::{big_pow, qpow, RatJson, Rat};
use crate::stein::SteinPair;

/// Bits kept when rounding the limit normalizing constant outward.
pub const SCALE_BITS: u32 = 160;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum EnsembleId {
    /// Uniform `n x (n+m)` matrices.
    UniformRect { m: u32 },
    Symmetric,
    /// Symmetric with zero diagonal (characteristic 2) or skew-symmetric
    /// (odd characteristic), `n` even.
    ZeroDiagEven,
    ZeroDiagOdd,
    SkewCentroEven,
    SkewCentroOdd,
    Hermitian,
}

/// Ensemble names as accepted on the command line; the zero-diagonal and
/// skew-centrosymmetric families pick their even/odd member from `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Uniform,
    Symmetric,
    ZeroDiag,
    SkewCentro,
    Hermitian,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" | "rect" => Ok(Family::Uniform),
            "symmetric" | "sym" => Ok(Family::Symmetric),
            "zerodiag" | "zero-diag" | "skew" | "symplectic" => Ok(Family::ZeroDiag),
            "skewcentro" | "skew-centro" => Ok(Family::SkewCentro),
            "hermitian" | "herm" => Ok(Family::Hermitian),
            other => Err(Error::InvalidParameter(format!("unknown ensemble {other:?}"))),
        }
    }
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Uniform,
        Family::Symmetric,
        Family::ZeroDiag,
        Family::SkewCentro,
        Family::Hermitian,
    ];

    pub fn at(self, n: u32, m: u32) -> EnsembleId {
        match self {
            Family::Uniform => EnsembleId::UniformRect { m },
            Family::Symmetric => EnsembleId::Symmetric,
            Family::ZeroDiag if n.is_multiple_of(2) => EnsembleId::ZeroDiagEven,
            Family::ZeroDiag => EnsembleId::ZeroDiagOdd,
            Family::SkewCentro if n.is_multiple_of(2) => EnsembleId::SkewCentroEven,
            Family::SkewCentro => EnsembleId::SkewCentroOdd,
            Family::Hermitian => EnsembleId::Hermitian,
        }
    }
}

/// `Some((p, e))` when `q = p^e` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl EnsembleId {
    pub fn family(self) -> Family {
        match self {
            EnsembleId::UniformRect { .. } => Family::Uniform,
            EnsembleId::Symmetric => Family::Symmetric,
            EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd => Family::ZeroDiag,
            EnsembleId::SkewCentroEven | EnsembleId::SkewCentroOdd => Family::SkewCentro,
            EnsembleId::Hermitian => Family::Hermitian,
        }
    }

    /// Every ensemble except the rectangular one, plus `UniformRect` for each `m`.
    pub fn all(ms: impl IntoIterator<Item = u32>) -> Vec<EnsembleId> {
        let mut out: Vec<EnsembleId> = ms.into_iter().map(|m| EnsembleId::UniformRect { m }).collect();
        out.extend([
            EnsembleId::Symmetric,
            EnsembleId::ZeroDiagEven,
            EnsembleId::ZeroDiagOdd,
            EnsembleId::SkewCentroEven,
            EnsembleId::SkewCentroOdd,
            EnsembleId::Hermitian,
        ]);
        out
    }

    pub fn accepts_n(self, n: u32) -> bool {
        match self {
            EnsembleId::ZeroDiagEven | EnsembleId::SkewCentroEven => n.is_multiple_of(2),
            EnsembleId::ZeroDiagOdd | EnsembleId::SkewCentroOdd => n % 2 == 1,
            _ => true,
        }
    }

    pub fn check_n(self, n: u32) -> Result<()> {
        if self.accepts_n(n) {
            Ok(())
        } else {
            let requirement = if n.is_multiple_of(2) { "odd n" } else { "even n" };
            Err(Error::Parity {
                ensemble: self.to_string(),
                requirement,
                n,
            })
        }
    }

    /// Largest value of `Q_n`.
    pub fn support_max(self, n: u32) -> u32 {
        match self {
            EnsembleId::UniformRect { .. } | EnsembleId::Symmetric | EnsembleId::Hermitian => n,
            EnsembleId::ZeroDiagEven | EnsembleId::SkewCentroEven => n / 2,
            EnsembleId::ZeroDiagOdd | EnsembleId::SkewCentroOdd => n.saturating_sub(1) / 2,
        }
    }

    /// `Q_n` for a matrix of the given rank; `None` if the rank is
    /// impossible for the ensemble (wrong parity or too large).
    pub fn k_from_rank(self, n: u32, rank: u32) -> Option<u32> {
        if rank > n {
            return None;
        }
        match self {
            EnsembleId::UniformRect { .. } | EnsembleId::Symmetric | EnsembleId::Hermitian => Some(n - rank),
            EnsembleId::ZeroDiagEven | EnsembleId::SkewCentroEven => {
                (n - rank).is_multiple_of(2).then_some((n - rank) / 2)
            }
            EnsembleId::ZeroDiagOdd | EnsembleId::SkewCentroOdd => {
                (n > rank && (n - 1 - rank).is_multiple_of(2)).then(|| (n - 1 - rank) / 2)
            }
        }
    }

    /// Whether a matrix ensemble over `F_q` with this law exists.
    pub fn field_realizable(self, q: u32) -> bool {
        let Some((p, _)) = prime_power(q) else {
            return false;
        };
        match self {
            EnsembleId::UniformRect { .. } | EnsembleId::Symmetric => true,
            // Symmetric zero-diagonal when p = 2, skew-symmetric when p is odd.
            EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd => true,
            EnsembleId::SkewCentroEven | EnsembleId::SkewCentroOdd | EnsembleId::Hermitian => p != 2,
        }
    }

    /// The limit pmf this ensemble converges to (the even skew
    /// centrosymmetric law reduces to the square uniform one).
    pub fn limit_target(self) -> EnsembleId {
        match self {
            EnsembleId::SkewCentroEven => EnsembleId::UniformRect { m: 0 },
            other => other,
        }
    }
}

impl fmt::Display for EnsembleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleId::UniformRect { m } => write!(f, "uniform[m={m}]"),
            EnsembleId::Symmetric => f.write_str("symmetric"),
            EnsembleId::ZeroDiagEven => f.write_str("zerodiag-even"),
            EnsembleId::ZeroDiagOdd => f.write_str("zerodiag-odd"),
            EnsembleId::SkewCentroEven => f.write_str("skewcentro-even"),
            EnsembleId::SkewCentroOdd => f.write_str("skewcentro-odd"),
            EnsembleId::Hermitian => f.write_str("hermitian"),
        }
    }
}

/// Exact law of `Q_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankPmf {
    pub ensemble: EnsembleId,
    pub q: u32,
    pub n: u32,
    pub probs: Vec<Rat>,
    pub field_realizable: bool,
}

impl RankPmf {
    pub fn support_max(&self) -> u32 {
        self.probs.len() as u32 - 1
    }

    /// `P(Q_n = k)`, zero outside the support.
    pub fn prob(&self, k: i64) -> Rat {
        if k < 0 {
            return Rat::zero();
        }
        self.probs.get(k as usize).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total(&self) -> Rat {
        self.probs.iter().fold(Rat::zero(), |a, p| a + p)
    }

    /// `E[f(Q_n)]`.
    pub fn expect(&self, f: impl Fn(i64) -> Rat) -> Rat {
        self.probs
            .iter()
            .enumerate()
            .fold(Rat::zero(), |acc, (k, p)| acc + p * f(k as i64))
    }

    pub fn to_json(&self) -> PmfJson {
        PmfJson {
            ensemble: self.ensemble.to_string(),
            q: self.q,
            n: Some(self.n),
            field_realizable: self.field_realizable,
            probs: self
                .probs
                .iter()
                .enumerate()
                .map(|(k, p)| ProbEntry::Exact {
                    k: k as u32,
                    num: p.numer().to_string(),
                    den: p.denom().to_string(),
                    value: crate::rational::rat_str(p),
                })
                .collect(),
            tail: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbEntry {
    Exact {
        k: u32,
        num: String,
        den: String,
        /// The same value as a `"num/den"` string.
        value: String,
    },
    Interval {
        k: u32,
        lo: RatJson,
        hi: RatJson,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfJson {
    pub ensemble: String,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub field_realizable: bool,
    pub probs: Vec<ProbEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailJson {
    pub lo: RatJson,
    pub hi: RatJson,
}

fn prod_qi_minus_one(q: u32, lo: u32, hi: u32) -> BigInt {
    (lo..=hi).fold(BigInt::one(), |acc, i| acc * (big_pow(q, i) - 1u32))
}

fn minus_prod(q: u32, hi: i64) -> Rat {
    finite_qproduct(q, 1, hi, Sign::Minus)
}

/// Rank-`2h` count for symmetric and zero-diagonal matrices:
/// `prod_{i=1}^h q^{2i - shift}/(q^{2i}-1) * prod_{i=0}^{len-1} (q^{n-i}-1)`.
fn symmetric_type_count(q: u32, n: u32, h: u32, shift: u32, len: u32) -> Rat {
    let mut c = Rat::one();
    for i in 1..=h {
        c *= Rat::new(big_pow(q, 2 * i - shift), big_pow(q, 2 * i) - 1u32);
    }
    for i in 0..len {
        c *= Rat::from_integer(big_pow(q, n - i) - 1u32);
    }
    c
}

fn uniform_prob(q: u32, n: u32, m: u32, k: u32) -> Rat {
    let (n, m, k) = (n as i64, m as i64, k as i64);
    qpow(q, -k * (m + k)) * minus_prod(q, n + m) * finite_qproduct(q, k + 1, n, Sign::Minus)
        / (minus_prod(q, n - k) * minus_prod(q, m + k))
}

/// Number of `n x n` skew centrosymmetric matrices of rank `2h`, `n` even.
fn skew_centro_even_count(q: u32, n: u32, h: u32) -> Rat {
    let half = n / 2;
    let mut c = Rat::one();
    for j in 0..(half - h) {
        c *= Rat::new(big_pow(q, half) - big_pow(q, j), big_pow(q, half - h) - big_pow(q, j));
    }
    for i in 0..h {
        c *= Rat::from_integer(big_pow(q, half) - big_pow(q, i));
    }
    c
}

/// Same for odd `n`, with `s = (n-1)/2`.
fn skew_centro_odd_count(q: u32, n: u32, h: u32) -> Rat {
    let s = (n - 1) / 2;
    let mut c = Rat::one();
    for j in 0..=(s - h) {
        c *= Rat::new(big_pow(q, s + 1) - big_pow(q, j), big_pow(q, s + 1 - h) - big_pow(q, j));
    }
    for i in 0..h {
        c *= Rat::from_integer(big_pow(q, s) - big_pow(q, i));
    }
    c
}

fn hermitian_count(q: u32, n: u32, r: u32) -> Rat {
    let mut c = Rat::from_integer(big_pow(q, r * r.saturating_sub(1) / 2));
    for i in 1..=r {
        let num = big_pow(q, 2 * n - 2 * (r - i)) - 1u32;
        let den = if i % 2 == 0 {
            big_pow(q, i) - 1u32
        } else {
            big_pow(q, i) + 1u32
        };
        c *= Rat::new(num, den);
    }
    c
}

/// Exact law of `Q_n` for the ensemble.
pub fn finite_pmf(ensemble: EnsembleId, q: u32, n: u32) -> Result<RankPmf> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q} < 2")));
    }
    ensemble.check_n(n)?;
    let kmax = ensemble.support_max(n);
    let probs: Vec<Rat> = match ensemble {
        EnsembleId::UniformRect { m } => (0..=kmax).map(|k| uniform_prob(q, n, m, k)).collect(),
        EnsembleId::Symmetric => {
            let total = Rat::from_integer(big_pow(q, n * (n + 1) / 2));
            (0..=kmax)
                .map(|k| {
                    let rank = n - k;
                    let h = rank / 2;
                    symmetric_type_count(q, n, h, 0, rank) / &total
                })
                .collect()
        }
        EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd => {
            let total = Rat::from_integer(big_pow(q, n * n.saturating_sub(1) / 2));
            let top = if n.is_multiple_of(2) { n } else { n - 1 };
            (0..=kmax)
                .map(|k| {
                    let rank = top - 2 * k;
                    symmetric_type_count(q, n, rank / 2, 2, rank) / &total
                })
                .collect()
        }
        EnsembleId::SkewCentroEven => {
            let total = Rat::from_integer(big_pow(q, (n / 2) * (n / 2)));
            (0..=kmax)
                .map(|k| skew_centro_even_count(q, n, n / 2 - k) / &total)
                .collect()
        }
        EnsembleId::SkewCentroOdd => {
            let s = (n - 1) / 2;
            let total = Rat::from_integer(big_pow(q, s * s + s));
            (0..=kmax).map(|k| skew_centro_odd_count(q, n, s - k) / &total).collect()
        }
        EnsembleId::Hermitian => {
            let total = Rat::from_integer(big_pow(q, n * n));
            (0..=kmax).map(|k| hermitian_count(q, n, n - k) / &total).collect()
        }
    };
    let pmf = RankPmf {
        ensemble,
        q,
        n,
        probs,
        field_realizable: ensemble.field_realizable(q),
    };
    if !pmf.total().is_one() || pmf.probs.iter().any(|p| p < &Rat::zero()) {
        return Err(Error::Inconsistent(format!(
            "{ensemble} q={q} n={n}: probabilities do not form a distribution"
        )));
    }
    Ok(pmf)
}

/// Certified limiting law: `p_k = scale * weights[k]` with `scale` an
/// interval and `weights` exact, plus an enclosure of the mass beyond
/// `trunc_k`.
#[derive(Debug, Clone)]
pub struct LimitPmf {
    pub ensemble: EnsembleId,
    pub q: u32,
    pub trunc_k: u32,
    pub qprod_trunc: u32,
    pub scale: IntervalRat,
    pub weights: Vec<Rat>,
    /// `prefix[k] = sum_{j <= k} weights[j]`.
    pub prefix: Vec<Rat>,
    /// Tail mass in weight units: `sum_{k > trunc_k} weights[k]`.
    pub tail_weight: IntervalRat,
    pub probs: Vec<IntervalRat>,
    pub tail: IntervalRat,
}

impl LimitPmf {
    pub fn prob(&self, k: u32) -> Option<&IntervalRat> {
        self.probs.get(k as usize)
    }

    /// `sum_{j <= k} weights[j]`, for `k <= trunc_k`.
    pub fn weight_upto(&self, k: u32) -> Rat {
        self.prefix[(k as usize).min(self.prefix.len() - 1)].clone()
    }

    /// Weight of `{j > k}` including the tail, as an interval.
    pub fn weight_above(&self, k: u32) -> IntervalRat {
        let last = self.prefix.last().expect("nonempty");
        let inner = if k >= self.trunc_k {
            Rat::zero()
        } else {
            last - &self.prefix[k as usize]
        };
        self.tail_weight.add_rat(&inner)
    }

    /// `Σ probs + tail`, which must enclose 1.
    pub fn total(&self) -> IntervalRat {
        &IntervalRat::sum(self.probs.iter()) + &self.tail
    }

    pub fn to_json(&self) -> PmfJson {
        PmfJson {
            ensemble: self.ensemble.to_string(),
            q: self.q,
            n: None,
            field_realizable: self.ensemble.field_realizable(self.q),
            probs: self
                .probs
                .iter()
                .enumerate()
                .map(|(k, p)| ProbEntry::Interval {
                    k: k as u32,
                    lo: p.lo().into(),
                    hi: p.hi().into(),
                })
                .collect(),
            tail: Some(TailJson {
                lo: self.tail.lo().into(),
                hi: self.tail.hi().into(),
            }),
        }
    }
}

fn limit_weight(ensemble: EnsembleId, q: u32, k: u32) -> Rat {
    let k = k as i64;
    match ensemble {
        EnsembleId::UniformRect { m } => {
            let m = m as i64;
            qpow(q, -k * (m + k)) / (minus_prod(q, k) * minus_prod(q, m + k))
        }
        EnsembleId::SkewCentroEven => limit_weight(EnsembleId::UniformRect { m: 0 }, q, k as u32),
        EnsembleId::Symmetric => Rat::new(BigInt::one(), prod_qi_minus_one(q, 1, k as u32)),
        EnsembleId::ZeroDiagEven => Rat::new(big_pow(q, 2 * k as u32), prod_qi_minus_one(q, 1, 2 * k as u32)),
        EnsembleId::ZeroDiagOdd => {
            Rat::new(big_pow(q, 2 * k as u32 + 1), prod_qi_minus_one(q, 1, 2 * k as u32 + 1))
        }
        EnsembleId::SkewCentroOdd => {
            let pk = minus_prod(q, k);
            (qpow(q, k * k + k) * (Rat::one() - qpow(q, -(k + 1))) * &pk * &pk).recip()
        }
        EnsembleId::Hermitian => {
            let mut d = qpow(q, k * k);
            for i in 1..=k {
                d *= Rat::one() - qpow(q, -2 * i);
            }
            d.recip()
        }
    }
}

fn limit_scale(ensemble: EnsembleId, q: u32, qprod_trunc: u32) -> Result<IntervalRat> {
    let spec = |start, step, sign| QProductSpec {
        q,
        start,
        step,
        sign,
        trunc: qprod_trunc.max(start),
    };
    let iv = match ensemble {
        EnsembleId::UniformRect { .. } | EnsembleId::SkewCentroEven | EnsembleId::SkewCentroOdd => {
            infinite_qproduct(&spec(1, 1, Sign::Minus))?
        }
        EnsembleId::Symmetric | EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd => {
            infinite_qproduct(&spec(1, 2, Sign::Minus))?
        }
        EnsembleId::Hermitian => infinite_qproduct(&spec(1, 2, Sign::Plus))?.recip()?,
    };
    Ok(iv.tighten(SCALE_BITS))
}

/// Certified limiting law with explicit terms up to `trunc_k`.
///
/// The tail beyond `trunc_k` is bounded geometrically from the Stein ratio
/// `p_{k+1}/p_k = a(k+1)/b(k+1)`, which is decreasing because `a` is
/// constant and `b` increasing for every limit pair.
pub fn limit_pmf(ensemble: EnsembleId, q: u32, trunc_k: u32, qprod_trunc: u32) -> Result<LimitPmf> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q} < 2")));
    }
    if trunc_k < 4 {
        return Err(Error::InvalidParameter(format!("trunc_k = {trunc_k} < 4")));
    }
    let scale = limit_scale(ensemble, q, qprod_trunc)?;
    let weights: Vec<Rat> = (0..=trunc_k).map(|k| limit_weight(ensemble, q, k)).collect();

    let pair = SteinPair::limit(ensemble.limit_target(), q);
    let ratio = pair.a(trunc_k as i64 + 1) / pair.b(trunc_k as i64 + 1);
    if ratio >= Rat::one() {
        return Err(Error::TailRatio { k: trunc_k });
    }
    let last = &weights[trunc_k as usize];
    let tail_weight = IntervalRat::new(last * &ratio, last * &ratio / (Rat::one() - &ratio))?;

    let prefix: Vec<Rat> = weights
        .iter()
        .scan(Rat::zero(), |acc, w| {
            *acc += w;
            Some(acc.clone())
        })
        .collect();
    let probs: Vec<IntervalRat> = weights.iter().map(|w| scale.scale(w)).collect();
    let tail = &scale * &tail_weight;
    let out = LimitPmf {
        ensemble,
        q,
        trunc_k,
        qprod_trunc,
        scale,
        weights,
        prefix,
        tail_weight,
        probs,
        tail,
    };
    if !out.total().contains(&Rat::one()) {
        return Err(Error::Inconsistent(format!(
            "{ensemble} q={q}: limit enclosure misses total mass 1"
        )));
    }
    Ok(out)
}

/// Rank probability of a uniform `k_rows x n_cols` matrix via the
/// alternating q-binomial sum.
pub fn rank_count_qbinomial(k_rows: u32, n_cols: u32, r: u32, q: u32) -> Result<Rat> {
    if r > k_rows.min(n_cols) {
        return Err(Error::InvalidParameter(format!(
            "rank {r} exceeds min({k_rows}, {n_cols})"
        )));
    }
    let (k, n, r) = (k_rows as i64, n_cols as i64, r as i64);
    let mut sum = BigInt::zero();
    for l in 0..=r {
        let d = r - l;
        let term = qbinomial(r, l, q) * big_pow(q, (k * l + d * (d - 1) / 2) as u32);
        if d % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(Rat::new(qbinomial(n, r, q) * sum, big_pow(q, (k * n) as u32)))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionRow {
    pub k: u32,
    #[serde(with = "crate::rational::as_str")]
    pub skew_centro: Rat,
    #[serde(with = "crate::rational::as_str")]
    pub uniform: Rat,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionWitness {
    pub q: u32,
    pub n: u32,
    pub rows: Vec<ReductionRow>,
    pub all_equal: bool,
}

/// Term-by-term comparison of the even skew centrosymmetric law at `n`
/// with the square uniform law at `n/2`.
pub fn skewcentro_even_reduction(q: u32, n: u32) -> Result<ReductionWitness> {
    let skew = finite_pmf(EnsembleId::SkewCentroEven, q, n)?;
    let uni = finite_pmf(EnsembleId::UniformRect { m: 0 }, q, n / 2)?;
    let len = skew.probs.len().max(uni.probs.len());
    let rows: Vec<ReductionRow> = (0..len as i64)
        .map(|k| {
            let a = skew.prob(k);
            let b = uni.prob(k);
            ReductionRow {
                k: k as u32,
                equal: a == b,
                skew_centro: a,
                uniform: b,
            }
        })
        .collect();
    let all_equal = rows.iter().all(|r| r.equal);
    Ok(ReductionWitness { q, n, rows, all_equal })
}
