//! q-products, truncated infinite q-products with certified tails, and
//! Gaussian binomial coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalRat;
use crate::rational::{big_pow, int, qpow, Rat};

/// Factors are `1 - q^-i` (`Minus`) or `1 + q^-i` (`Plus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    fn apply(self, x: Rat) -> Rat {
        match self {
            Sign::Minus => Rat::one() - x,
            Sign::Plus => Rat::one() + x,
        }
    }
}

/// `prod_{i=lo}^{hi} (1 ± q^-i)`, with the empty product equal to 1.
pub fn finite_qproduct(q: u32, lo: i64, hi: i64, sign: Sign) -> Rat {
    (lo..=hi).fold(Rat::one(), |acc, i| acc * sign.apply(qpow(q, -i)))
}

/// `prod (1 ± q^-i)` over `i = start, start+step, ...` up to `hi`.
pub fn stepped_qproduct(q: u32, start: u32, step: u32, hi: u32, sign: Sign) -> Rat {
    let mut acc = Rat::one();
    let mut i = start;
    while i <= hi {
        acc *= sign.apply(qpow(q, -(i as i64)));
        i += step;
    }
    acc
}

/// An infinite product `prod_{i >= start, i ≡ start (mod step)} (1 ± q^-i)`
/// evaluated exactly up to `trunc` with the remainder bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QProductSpec {
    pub q: u32,
    pub start: u32,
    pub step: u32,
    pub sign: Sign,
    pub trunc: u32,
}

impl QProductSpec {
    pub fn new(q: u32, start: u32, step: u32, sign: Sign) -> Self {
        QProductSpec {
            q,
            start,
            step,
            sign,
            trunc: default_trunc(q).max(start),
        }
    }

    pub fn with_trunc(mut self, trunc: u32) -> Self {
        self.trunc = trunc;
        self
    }
}

/// Smallest `T` with `2 q^-(T+1) < 2^-64`.
pub fn default_trunc(q: u32) -> u32 {
    let bound = BigInt::one() << 65usize;
    let mut t = 0u32;
    let mut pow = BigInt::from(q);
    while pow <= bound {
        pow *= q;
        t += 1;
    }
    t
}

/// Tail factor `2 q^-(T+1)`.
fn tail_factor(q: u32, trunc: u32) -> Rat {
    int(2) * qpow(q, -(trunc as i64 + 1))
}

/// Certified enclosure of an infinite q-product.
///
/// For `Minus` the remainder `prod_{i>T}(1 - q^-i)` lies in `[1 - 2q^-(T+1), 1]`;
/// for `Plus` the remainder lies in `[1, 1/(1 - 2q^-(T+1))]` because
/// `1/(1+x) >= 1-x` reduces it to the `Minus` case.
pub fn infinite_qproduct(spec: &QProductSpec) -> Result<IntervalRat> {
    if spec.q < 2 {
        return Err(Error::InvalidParameter(format!("q = {} < 2", spec.q)));
    }
    if spec.step != 1 && spec.step != 2 {
        return Err(Error::InvalidParameter(format!("step = {} not in {{1, 2}}", spec.step)));
    }
    if spec.start < 1 || spec.trunc < spec.start {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= start <= trunc, got start = {}, trunc = {}",
            spec.start, spec.trunc
        )));
    }
    let eps = tail_factor(spec.q, spec.trunc);
    if eps >= Rat::one() {
        return Err(Error::TruncationTooSmall { trunc: spec.trunc });
    }
    let partial = stepped_qproduct(spec.q, spec.start, spec.step, spec.trunc, spec.sign);
    let shrink = Rat::one() - eps;
    match spec.sign {
        Sign::Minus => IntervalRat::new(&partial * &shrink, partial),
        Sign::Plus => IntervalRat::new(partial.clone(), partial / shrink),
    }
}

/// Gaussian binomial `[n m]_q`; zero outside `0 <= m <= n`.
pub fn qbinomial(n: i64, m: i64, q: u32) -> BigInt {
    if m < 0 || n < 0 || m > n {
        return BigInt::zero();
    }
    let m = m.min(n - m);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..m {
        num *= big_pow(q, (n - j) as u32) - 1u32;
        den *= big_pow(q, (m - j) as u32) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// One inequality instance `lhs >= rhs`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub q: u32,
    pub n: Option<u32>,
    pub m: Option<i64>,
    pub lhs: IntervalRat,
    #[serde(with = "crate::rational::as_str")]
    pub rhs: Rat,
    /// `lhs.lo - rhs`; nonnegative iff the check passes.
    #[serde(with = "crate::rational::as_str")]
    pub margin: Rat,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductInequalityReport {
    pub q: u32,
    pub n_max: u32,
    pub checks: Vec<InequalityCheck>,
    pub all_pass: bool,
}

impl ProductInequalityReport {
    pub fn failures(&self) -> impl Iterator<Item = &InequalityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn check(
    name: &'static str,
    q: u32,
    n: Option<u32>,
    m: Option<i64>,
    lhs: IntervalRat,
    rhs: Rat,
) -> InequalityCheck {
    let margin = lhs.lo() - &rhs;
    let pass = margin >= Rat::zero();
    InequalityCheck {
        name: name.to_string(),
        q,
        n,
        m,
        lhs,
        rhs,
        margin,
        pass,
    }
}

/// Checks `prod (1 - a_i) >= 1 - sum a_i` for `a_i = q^-i` over the index set.
fn product_vs_sum(q: u32, idx: impl Iterator<Item = i64>) -> (Rat, Rat) {
    let mut prod = Rat::one();
    let mut sum = Rat::zero();
    for i in idx {
        let a = qpow(q, -i);
        prod *= Rat::one() - &a;
        sum += a;
    }
    (prod, Rat::one() - sum)
}

/// Encloses an infinite product, doubling the truncation until the
/// enclosure lies entirely on one side of `rhs` or the budget runs out.
fn decided_enclosure(spec: QProductSpec, rhs: &Rat) -> Result<IntervalRat> {
    let mut spec = spec;
    for _ in 0..6 {
        let iv = infinite_qproduct(&spec)?;
        if iv.lo() >= rhs || iv.hi() < rhs {
            return Ok(iv);
        }
        let next = spec.trunc * 2;
        spec = spec.with_trunc(next);
    }
    infinite_qproduct(&spec)
}

/// Verifies the product lower bounds used throughout the solution-bound
/// arguments, exactly for finite products and with certified enclosures for
/// infinite ones. Failures are reported, never raised.
pub fn check_product_inequalities(q: u32, n_max: u32) -> Result<ProductInequalityReport> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q} < 2")));
    }
    let one = Rat::one();
    let r = |e: i64| qpow(q, -e);
    let mut checks = Vec::new();

    // prod_{i=1}^n (1 - q^-i) >= 1 - 1/q - 1/q^2
    let rhs_first = &one - r(1) - r(2);
    for n in 1..=n_max {
        let lhs = finite_qproduct(q, 1, n as i64, Sign::Minus);
        checks.push(check("finite_full_product", q, Some(n), None, lhs.into(), rhs_first.clone()));
    }

    let pentagonal = &one - r(1) - r(2) + r(5) + r(7) - r(12) - r(15);
    let full = decided_enclosure(QProductSpec::new(q, 1, 1, Sign::Minus), &pentagonal)?;
    checks.push(check("infinite_full_product", q, None, None, full, pentagonal));

    let rhs_odd = &one - r(1) - r(3);
    let odd = decided_enclosure(QProductSpec::new(q, 1, 2, Sign::Minus), &rhs_odd)?;
    checks.push(check("infinite_odd_product", q, None, None, odd, rhs_odd));

    let rhs_odd3 = &one - int(2) * r(3);
    let odd3 = decided_enclosure(QProductSpec::new(q, 3, 2, Sign::Minus), &rhs_odd3)?;
    checks.push(check("infinite_odd_from_3_product", q, None, None, odd3, rhs_odd3));

    // prod_{i=m+1}^n (1 - q^-i) >= 1 - 2/q^{m+1} for 0 <= m+1 <= n
    for n in 1..=n_max as i64 {
        for m in -1..n {
            let lhs = finite_qproduct(q, m + 1, n, Sign::Minus);
            let rhs = &one - int(2) * r(m + 1);
            checks.push(check("finite_tail_product", q, Some(n as u32), Some(m), lhs.into(), rhs));
        }
    }

    // prod (1 - a_i) >= 1 - sum a_i on the same factor sets.
    for n in 1..=n_max as i64 {
        for m in 0..n {
            let (prod, rhs) = product_vs_sum(q, m + 1..=n);
            checks.push(check("product_ge_one_minus_sum", q, Some(n as u32), Some(m), prod.into(), rhs));
        }
        let (prod, rhs) = product_vs_sum(q, (1..=n).step_by(2));
        checks.push(check("product_ge_one_minus_sum_odd", q, Some(n as u32), None, prod.into(), rhs));
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(ProductInequalityReport {
        q,
        n_max,
        checks,
        all_pass,
    })
}
