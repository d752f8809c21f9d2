//! Certified total-variation distances between finite and limiting rank
//! laws, checked against the explicit windows for every ensemble.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{finite_pmf, limit_pmf, EnsembleId, LimitPmf, RankPmf};
use crate::error::{Error, Result};
use crate::interval::IntervalRat;
use crate::qseries::default_trunc;
use crate::rational::{decimal, frac, qpow, rat_str, to_f64, Rat};

/// Bits kept when rounding accumulated sums outward.
const SUM_BITS: u32 = 256;

/// `1/2 sum_k |p_{k,n} - p_k|`, with the limit mass above `trunc_k` added
/// as an interval.
pub fn tv_distance(pmf: &RankPmf, limit: &LimitPmf) -> Result<IntervalRat> {
    if pmf.ensemble.limit_target() != limit.ensemble.limit_target() || pmf.q != limit.q {
        return Err(Error::InvalidParameter(format!(
            "cannot compare {} (q={}) with the limit of {} (q={})",
            pmf.ensemble, pmf.q, limit.ensemble, limit.q
        )));
    }
    if limit.trunc_k < pmf.support_max() {
        return Err(Error::TruncationTooSmall { trunc: limit.trunc_k });
    }
    let mut acc = limit.tail.clone();
    for k in 0..=limit.trunc_k {
        let pk = &limit.probs[k as usize];
        let term = match pmf.probs.get(k as usize) {
            Some(pkn) => (-pk).add_rat(pkn).abs(),
            None => pk.clone(),
        };
        acc = (&acc + &term).tighten(SUM_BITS);
    }
    let half = frac(1, 2);
    let tv = acc.scale(&half);
    let one = IntervalRat::point(Rat::from_integer(1.into()));
    Ok(tv.intersect(&IntervalRat::new(Rat::zero(), one.hi().clone())?).unwrap_or(tv))
}

/// Exact TV between two finite laws on `{0..}`.
pub fn tv_finite(p: &[Rat], r: &[Rat]) -> Rat {
    let len = p.len().max(r.len());
    let zero = Rat::zero();
    let s = (0..len).fold(Rat::zero(), |acc, k| {
        let a = p.get(k).unwrap_or(&zero);
        let b = r.get(k).unwrap_or(&zero);
        acc + (a - b).abs()
    });
    s / Rat::from_integer(2.into())
}

/// A theorem window `[lower, upper]` for the TV distance at `(q, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TvWindow {
    /// Statement of the window in closed form.
    pub anchor: String,
    #[serde(with = "crate::rational::as_str")]
    pub lower: Rat,
    #[serde(with = "crate::rational::as_str")]
    pub upper: Rat,
}

fn window(anchor: String, lo: Rat, hi: Rat, scale: Rat) -> TvWindow {
    TvWindow {
        anchor,
        lower: lo * &scale,
        upper: hi * scale,
    }
}

/// The primary window, plus the Hermitian `q >= 3` refinement when it applies.
pub fn tv_windows(ensemble: EnsembleId, q: u32, n: u32) -> Result<Vec<TvWindow>> {
    if n < 1 {
        return Err(Error::InvalidParameter("TV windows require n >= 1".into()));
    }
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q} < 2")));
    }
    ensemble.check_n(n)?;
    let ni = n as i64;
    let d = decimal;
    let w = match ensemble {
        EnsembleId::UniformRect { m } => vec![window(
            "uniform: 1/(8 q^(n+m+1)) <= TV <= 3/q^(n+m+1)".into(),
            frac(1, 8),
            d("3"),
            qpow(q, -(ni + m as i64 + 1)),
        )],
        EnsembleId::Symmetric if n.is_multiple_of(2) => vec![window(
            "symmetric, n even: .18/q^(n+1) <= TV <= 2.25/q^(n+1)".into(),
            d("0.18"),
            d("2.25"),
            qpow(q, -(ni + 1)),
        )],
        EnsembleId::Symmetric => vec![window(
            "symmetric, n odd: .18/q^(n+2) <= TV <= 2/q^(n+2)".into(),
            d("0.18"),
            d("2"),
            qpow(q, -(ni + 2)),
        )],
        EnsembleId::ZeroDiagEven => vec![window(
            "zero diagonal, n even: .18/q^(n+1) <= TV <= 1.5/q^(n+1)".into(),
            d("0.18"),
            d("1.5"),
            qpow(q, -(ni + 1)),
        )],
        EnsembleId::ZeroDiagOdd => vec![window(
            "zero diagonal, n odd: .37/q^(n+2) <= TV <= 2.2/q^(n+2)".into(),
            d("0.37"),
            d("2.2"),
            qpow(q, -(ni + 2)),
        )],
        EnsembleId::SkewCentroEven => vec![window(
            "skew centrosymmetric, n even: 1/(8 q^(n/2+1)) <= TV <= 3/q^(n/2+1)".into(),
            frac(1, 8),
            d("3"),
            qpow(q, -(ni / 2 + 1)),
        )],
        EnsembleId::SkewCentroOdd => vec![window(
            "skew centrosymmetric, n odd: 1/(4 q^((n+3)/2)) <= TV <= 3/q^((n+3)/2)".into(),
            frac(1, 4),
            d("3"),
            qpow(q, -(ni + 3) / 2),
        )],
        EnsembleId::Hermitian => {
            let mut v = vec![window(
                "hermitian: .07/q^(n+1) <= TV <= 2.3/q^(n+1)".into(),
                d("0.07"),
                d("2.3"),
                qpow(q, -(ni + 1)),
            )];
            if q >= 3 {
                v.push(window(
                    "hermitian, q >= 3: .19/q^(n+1) <= TV <= 1.5/q^(n+1)".into(),
                    d("0.19"),
                    d("1.5"),
                    qpow(q, -(ni + 1)),
                ));
            }
            v
        }
    };
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Inside,
    Outside,
    Straddles,
}

fn classify(tv: &IntervalRat, w: &TvWindow) -> Verdict {
    if &w.lower <= tv.lo() && tv.hi() <= &w.upper {
        Verdict::Inside
    } else if tv.hi() < &w.lower || tv.lo() > &w.upper {
        Verdict::Outside
    } else {
        Verdict::Straddles
    }
}

/// Outcome for one window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowCheck {
    pub window: TvWindow,
    /// `tv.lo - lower`
    #[serde(with = "crate::rational::as_str")]
    pub lower_margin: Rat,
    /// `upper - tv.hi`
    #[serde(with = "crate::rational::as_str")]
    pub upper_margin: Rat,
    pub pass: bool,
}

fn window_check(tv: &IntervalRat, w: &TvWindow) -> WindowCheck {
    let lower_margin = tv.lo() - &w.lower;
    let upper_margin = &w.upper - tv.hi();
    WindowCheck {
        pass: !lower_margin.is_negative() && !upper_margin.is_negative(),
        window: w.clone(),
        lower_margin,
        upper_margin,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TvResult {
    pub ensemble: EnsembleId,
    pub q: u32,
    pub n: u32,
    pub tv: IntervalRat,
    #[serde(with = "crate::rational::as_str")]
    pub theorem_lower: Rat,
    #[serde(with = "crate::rational::as_str")]
    pub theorem_upper: Rat,
    pub pass: bool,
    pub anchor: String,
    #[serde(with = "crate::rational::as_str")]
    pub lower_margin: Rat,
    #[serde(with = "crate::rational::as_str")]
    pub upper_margin: Rat,
    /// The Hermitian `q >= 3` window, when it applies.
    pub refined: Option<WindowCheck>,
    /// `1/2 (p_{0,n} - p_0)`, or `1/2 (p_0 - p_{0,n})` for Hermitian odd `n`.
    pub lower_mechanism: IntervalRat,
    /// The mechanism is consistent with the TV enclosure.
    pub lower_mechanism_ok: bool,
    /// For skew centrosymmetric even `n`: the same check run through the
    /// square uniform law at `n/2`, and whether both TV enclosures agree.
    pub reduction_agrees: Option<bool>,
    pub trunc_k: u32,
    pub qprod_trunc: u32,
}

impl TvResult {
    /// Passes the primary window and every refinement.
    pub fn all_pass(&self) -> bool {
        self.pass && self.refined.as_ref().is_none_or(|r| r.pass) && self.lower_mechanism_ok && self.reduction_agrees != Some(false)
    }
}

/// Starting truncations, overridable for experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncations {
    /// Extra limit terms beyond the finite support.
    pub extra_k: u32,
    /// `None` picks [`default_trunc`].
    pub qprod_trunc: Option<u32>,
    /// Refinement rounds before giving up.
    pub max_rounds: u32,
}

impl Default for Truncations {
    fn default() -> Self {
        Truncations {
            extra_k: 8,
            qprod_trunc: None,
            max_rounds: 6,
        }
    }
}

/// Certified TV with truncations raised until every window verdict is
/// decided.
pub fn verify_tv_theorem(ensemble: EnsembleId, q: u32, n: u32) -> Result<TvResult> {
    verify_tv_theorem_with(ensemble, q, n, Truncations::default())
}

pub fn verify_tv_theorem_with(ensemble: EnsembleId, q: u32, n: u32, tr: Truncations) -> Result<TvResult> {
    let windows = tv_windows(ensemble, q, n)?;
    let pmf = finite_pmf(ensemble, q, n)?;
    let mut trunc_k = (pmf.support_max() + tr.extra_k).max(4);
    let mut qprod = tr.qprod_trunc.unwrap_or_else(|| default_trunc(q));
    let mut round = 0;
    let (limit, tv) = loop {
        let limit = limit_pmf(ensemble, q, trunc_k, qprod)?;
        let tv = tv_distance(&pmf, &limit)?;
        if windows.iter().all(|w| classify(&tv, w) != Verdict::Straddles) {
            break (limit, tv);
        }
        round += 1;
        if round > tr.max_rounds {
            return Err(Error::Budget(format!(
                "{ensemble} q={q} n={n}: TV enclosure {tv} still straddles a window after {} rounds",
                tr.max_rounds
            )));
        }
        trunc_k += 8;
        qprod *= 2;
    };

    let main = window_check(&tv, &windows[0]);
    let refined = windows.get(1).map(|w| window_check(&tv, w));

    let p0n = pmf.probs[0].clone();
    let p0 = &limit.probs[0];
    let diff = if ensemble == EnsembleId::Hermitian && n % 2 == 1 {
        p0.add_rat(&-p0n)
    } else {
        (-p0).add_rat(&p0n)
    };
    let lower_mechanism = diff.scale(&frac(1, 2));
    let lower_mechanism_ok = lower_mechanism.lo() <= tv.hi();

    let reduction_agrees = if ensemble == EnsembleId::SkewCentroEven {
        let uni = EnsembleId::UniformRect { m: 0 };
        let upmf = finite_pmf(uni, q, n / 2)?;
        let ulim = limit_pmf(uni, q, trunc_k, qprod)?;
        let utv = tv_distance(&upmf, &ulim)?;
        Some(upmf.probs == pmf.probs && utv == tv)
    } else {
        None
    };

    Ok(TvResult {
        ensemble,
        q,
        n,
        theorem_lower: windows[0].lower.clone(),
        theorem_upper: windows[0].upper.clone(),
        pass: main.pass,
        anchor: windows[0].anchor.clone(),
        lower_margin: main.lower_margin,
        upper_margin: main.upper_margin,
        tv,
        refined,
        lower_mechanism,
        lower_mechanism_ok,
        reduction_agrees,
        trunc_k,
        qprod_trunc: qprod,
    })
}

/// Cartesian grid of ensembles, `q` and `n`; cells with the wrong parity
/// are skipped.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TvGridSpec {
    pub ensembles: Vec<EnsembleId>,
    pub qs: Vec<u32>,
    pub ns: Vec<u32>,
}

impl TvGridSpec {
    pub fn cells(&self) -> Vec<(EnsembleId, u32, u32)> {
        let mut out = Vec::new();
        for &e in &self.ensembles {
            for &q in &self.qs {
                for &n in &self.ns {
                    if e.accepts_n(n) {
                        out.push((e, q, n));
                    }
                }
            }
        }
        out
    }
}

/// One grid cell's outcome; errors are kept per cell.
#[derive(Debug, Clone)]
pub struct GridCell {
    pub ensemble: EnsembleId,
    pub q: u32,
    pub n: u32,
    pub result: Result<TvResult>,
}

/// Runs every cell in parallel; output order follows [`TvGridSpec::cells`].
pub fn tv_grid(spec: &TvGridSpec) -> Vec<GridCell> {
    spec.cells()
        .into_par_iter()
        .map(|(ensemble, q, n)| GridCell {
            ensemble,
            q,
            n,
            result: verify_tv_theorem(ensemble, q, n),
        })
        .collect()
}

/// Flat row for CSV and JSON grid reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TvRow {
    pub ensemble: String,
    pub q: u32,
    pub n: u32,
    pub window: String,
    pub tv_lo: String,
    pub tv_hi: String,
    pub window_lo: String,
    pub window_hi: String,
    pub pass: bool,
    pub lower_margin: String,
    pub upper_margin: String,
    pub tv_mid: f64,
    pub error: Option<String>,
}

pub fn grid_rows(cells: &[GridCell]) -> Vec<TvRow> {
    let mut rows = Vec::new();
    for c in cells {
        match &c.result {
            Ok(r) => {
                let mut push = |w: &TvWindow, pass: bool, lm: &Rat, um: &Rat| {
                    rows.push(TvRow {
                        ensemble: r.ensemble.to_string(),
                        q: r.q,
                        n: r.n,
                        window: w.anchor.clone(),
                        tv_lo: rat_str(r.tv.lo()),
                        tv_hi: rat_str(r.tv.hi()),
                        window_lo: rat_str(&w.lower),
                        window_hi: rat_str(&w.upper),
                        pass,
                        lower_margin: rat_str(lm),
                        upper_margin: rat_str(um),
                        tv_mid: r.tv.midpoint_f64(),
                        error: None,
                    })
                };
                let main = TvWindow {
                    anchor: r.anchor.clone(),
                    lower: r.theorem_lower.clone(),
                    upper: r.theorem_upper.clone(),
                };
                push(&main, r.pass, &r.lower_margin, &r.upper_margin);
                if let Some(x) = &r.refined {
                    push(&x.window, x.pass, &x.lower_margin, &x.upper_margin);
                }
            }
            Err(e) => rows.push(TvRow {
                ensemble: c.ensemble.to_string(),
                q: c.q,
                n: c.n,
                window: String::new(),
                tv_lo: String::new(),
                tv_hi: String::new(),
                window_lo: String::new(),
                window_hi: String::new(),
                pass: false,
                lower_margin: String::new(),
                upper_margin: String::new(),
                tv_mid: f64::NAN,
                error: Some(e.to_string()),
            }),
        }
    }
    rows
}

/// `max_A |P_n(A) - P(A)|` evaluated at `A = {k : p_{k,n} > hi(p_k)}`,
/// checked against the sum-formula enclosure. Terms whose sign is not
/// certified can only lower the set value, by at most their total size.
pub fn max_set_consistent(pmf: &RankPmf, limit: &LimitPmf, tv: &IntervalRat) -> bool {
    let mut set_val = IntervalRat::zero();
    let mut undecided = Rat::zero();
    for k in 0..=limit.trunc_k as usize {
        let pk = &limit.probs[k];
        let pkn = pmf.probs.get(k).cloned().unwrap_or_else(Rat::zero);
        if &pkn > pk.hi() {
            set_val = &set_val + &(-pk).add_rat(&pkn);
        } else if &pkn >= pk.lo() {
            undecided += pk.hi() - &pkn;
        }
    }
    let lo = tv.lo() - undecided;
    match IntervalRat::new(lo, tv.hi().clone()) {
        Ok(widened) => set_val.intersects(&widened),
        Err(_) => false,
    }
}

/// `TV(P_n, P) <= TV(P_n, P_{n+2}) + TV(P_{n+2}, P)` within enclosures.
pub fn triangle_holds(ensemble: EnsembleId, q: u32, n: u32) -> Result<bool> {
    let a = finite_pmf(ensemble, q, n)?;
    let b = finite_pmf(ensemble, q, n + 2)?;
    let k = b.support_max() + 8;
    let limit = limit_pmf(ensemble, q, k, default_trunc(q))?;
    let lhs = tv_distance(&a, &limit)?;
    let mid = tv_finite(&a.probs, &b.probs);
    let rhs = tv_distance(&b, &limit)?.add_rat(&mid);
    Ok(lhs.lo() <= rhs.hi())
}

impl std::fmt::Display for TvResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} q={} n={}: TV in [{:.6e}, {:.6e}], window [{:.6e}, {:.6e}] {}",
            self.ensemble,
            self.q,
            self.n,
            to_f64(self.tv.lo()),
            to_f64(self.tv.hi()),
            to_f64(&self.theorem_lower),
            to_f64(&self.theorem_upper),
            if self.all_pass() { "ok" } else { "FAIL" }
        )
    }
}
