//! The rank chain of `n x (n+m)` matrices under addition of a uniformly
//! chosen rank-one matrix. The state is `Q = n - rank`.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ensembles::{finite_pmf, EnsembleId};
use crate::error::{Error, Result};
use crate::gfmatrix::{random_nonzero, stream_rng, Field, MatrixGF};
use crate::rational::{qpow, rat_str, to_f64, Rat};
use crate::tvbounds::tv_finite;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankChain {
    pub q: u32,
    pub n: u32,
    pub m: u32,
    /// `up[i] = M(i, i+1)`
    #[serde(with = "rats")]
    pub up: Vec<Rat>,
    /// `down[i] = M(i, i-1)`
    #[serde(with = "rats")]
    pub down: Vec<Rat>,
    /// `stay[i] = M(i, i)`
    #[serde(with = "rats")]
    pub stay: Vec<Rat>,
}

mod rats {
    use super::Rat;
    use crate::rational::{parse_rat, rat_str};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rat_str))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rat(t).ok_or_else(|| D::Error::custom(format!("bad rational {t:?}"))))
            .collect()
    }
}

pub fn build_chain(q: u32, n: u32, m: u32) -> Result<RankChain> {
    if q < 2 || n < 1 {
        return Err(Error::InvalidParameter(format!("chain needs q >= 2 and n >= 1 (q={q}, n={n})")));
    }
    let (ni, mi) = (n as i64, m as i64);
    let one = Rat::one();
    let den = (qpow(q, ni) - &one) * (qpow(q, ni + mi) - &one);
    let mut up = Vec::new();
    let mut down = Vec::new();
    let mut stay = Vec::new();
    for i in 0..=ni {
        let u = qpow(q, ni - i - 1) * (qpow(q, ni - i) - &one) / &den;
        let d = (qpow(q, ni) - qpow(q, ni - i)) * (qpow(q, ni + mi) - qpow(q, ni - i)) / &den;
        stay.push(&one - &u - &d);
        up.push(u);
        down.push(d);
    }
    Ok(RankChain { q, n, m, up, down, stay })
}

impl RankChain {
    pub fn states(&self) -> usize {
        self.n as usize + 1
    }

    /// `M(i, j)`, zero off the tridiagonal band.
    pub fn entry(&self, i: usize, j: usize) -> Rat {
        if j == i {
            self.stay[i].clone()
        } else if j == i + 1 {
            self.up[i].clone()
        } else if i >= 1 && j == i - 1 {
            self.down[i].clone()
        } else {
            Rat::zero()
        }
    }

    /// `mu M`
    pub fn step(&self, mu: &[Rat]) -> Vec<Rat> {
        let s = self.states();
        (0..s)
            .map(|j| {
                let mut acc = Rat::zero();
                for i in j.saturating_sub(1)..(j + 2).min(s) {
                    acc += &mu[i] * self.entry(i, j);
                }
                acc
            })
            .collect()
    }

    pub fn rows_stochastic(&self) -> bool {
        (0..self.states()).all(|i| {
            let row: Vec<Rat> = (0..self.states()).map(|j| self.entry(i, j)).collect();
            row.iter().all(|x| !x.is_negative() && x <= &Rat::one()) && row.iter().sum::<Rat>() == Rat::one()
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StationarityReport {
    pub q: u32,
    pub n: u32,
    pub m: u32,
    /// `pi M - pi`, entrywise.
    #[serde(with = "rats")]
    pub defect: Vec<Rat>,
    /// `pi_i M(i,i+1) - pi_{i+1} M(i+1,i)`
    #[serde(with = "rats")]
    pub balance_defect: Vec<Rat>,
    pub rows_stochastic: bool,
    pub pass: bool,
}

/// Exact check of `pi M = pi` and detailed balance with `pi` the uniform
/// rectangular law.
pub fn verify_stationarity(chain: &RankChain) -> Result<StationarityReport> {
    let pi = finite_pmf(EnsembleId::UniformRect { m: chain.m }, chain.q, chain.n)?.probs;
    let next = chain.step(&pi);
    let defect: Vec<Rat> = next.iter().zip(&pi).map(|(a, b)| a - b).collect();
    let balance_defect: Vec<Rat> = (0..chain.n as usize)
        .map(|i| &pi[i] * &chain.up[i] - &pi[i + 1] * &chain.down[i + 1])
        .collect();
    let rows_stochastic = chain.rows_stochastic();
    let pass = rows_stochastic && defect.iter().all(Zero::is_zero) && balance_defect.iter().all(Zero::is_zero);
    Ok(StationarityReport {
        q: chain.q,
        n: chain.n,
        m: chain.m,
        defect,
        balance_defect,
        rows_stochastic,
        pass,
    })
}

/// Exact `||delta_start M^t - pi||_TV` for `t = 0..=t_max`.
pub fn chain_power_tv(chain: &RankChain, start: usize, t_max: u32) -> Result<Vec<Rat>> {
    if start >= chain.states() {
        return Err(Error::InvalidParameter(format!("start state {start} out of range")));
    }
    let pi = finite_pmf(EnsembleId::UniformRect { m: chain.m }, chain.q, chain.n)?.probs;
    let mut mu = vec![Rat::zero(); chain.states()];
    mu[start] = Rat::one();
    let mut out = vec![tv_finite(&mu, &pi)];
    for _ in 0..t_max {
        mu = chain.step(&mu);
        out.push(tv_finite(&mu, &pi));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationReport {
    pub q: u32,
    pub n: u32,
    pub m: u32,
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub stationarity_defect: String,
    pub occupation_chain: Vec<u64>,
    pub occupation_matrix: Vec<u64>,
    pub empirical_tv_chain: f64,
    pub empirical_tv_matrix: f64,
}

fn occupation_tv(counts: &[u64], pi: &[Rat]) -> f64 {
    let total: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(pi)
        .map(|(&c, p)| (c as f64 / total as f64 - to_f64(p)).abs())
        .sum::<f64>()
        / 2.0
}

/// Runs the chain from its matrix and the rank-one-update dynamics from the
/// zero matrix, both starting at `Q = n`, and compares occupation measures
/// over `steps` transitions after `burn_in` (default `10 n`).
pub fn simulate_chain_vs_matrix(q: u32, n: u32, m: u32, steps: u64, seed: u64, burn_in: Option<u64>) -> Result<SimulationReport> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let chain = build_chain(q, n, m)?;
    let field = Arc::new(Field::of_order(q)?);
    let burn_in = burn_in.unwrap_or(10 * n as u64);
    let stat = verify_stationarity(&chain)?;
    let worst = stat.defect.iter().map(|d| d.abs()).max().unwrap_or_else(Rat::zero);
    let pi = finite_pmf(EnsembleId::UniformRect { m }, q, n)?.probs;

    let probs: Vec<[f64; 2]> = (0..chain.states())
        .map(|i| [to_f64(&chain.down[i]), to_f64(&chain.up[i])])
        .collect();
    let (occupation_chain, occupation_matrix) = rayon::join(
        || {
            let mut rng = stream_rng(seed, 0);
            let mut state = n as usize;
            let mut counts = vec![0u64; chain.states()];
            for t in 0..burn_in + steps {
                let u: f64 = rng.gen();
                let [d, up] = probs[state];
                if u < d {
                    state -= 1;
                } else if u < d + up {
                    state += 1;
                }
                if t >= burn_in {
                    counts[state] += 1;
                }
            }
            counts
        },
        || {
            let mut rng = stream_rng(seed, 1);
            let (rows, cols) = (n as usize, (n + m) as usize);
            let mut a = MatrixGF::zeros(field.clone(), rows, cols);
            let mut counts = vec![0u64; rows + 1];
            for t in 0..burn_in + steps {
                let u = random_nonzero(&field, rows, &mut rng);
                let v = random_nonzero(&field, cols, &mut rng);
                for i in 0..rows {
                    for j in 0..cols {
                        let x = field.add(a.get(i, j), field.mul(u[i], v[j]));
                        a.set(i, j, x);
                    }
                }
                if t >= burn_in {
                    counts[rows - a.rank()] += 1;
                }
            }
            counts
        },
    );
    Ok(SimulationReport {
        q,
        n,
        m,
        steps,
        burn_in,
        seed,
        stationarity_defect: rat_str(&worst),
        empirical_tv_chain: occupation_tv(&occupation_chain, &pi),
        empirical_tv_matrix: occupation_tv(&occupation_matrix, &pi),
        occupation_chain,
        occupation_matrix,
    })
}
