//! Finite-field matrices: arithmetic, structured samplers, rank, exhaustive
//! enumeration and Monte-Carlo comparison against the exact laws.

mod field;
mod layout;
mod matrix;

pub use field::{Elem, Field, FieldSpec, MAX_ORDER};
pub use layout::{satisfies_relations, Cell, Layout, Realization, Sampler, SlotKind};
pub use matrix::{MatrixGF, PackedGf2};

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{finite_pmf, EnsembleId};
use crate::error::{Error, Result};
use crate::rational::{int, to_f64, Rat};

/// Largest ensemble [`enumerate_ensemble`] will walk.
pub const ENUMERATION_GUARD: u128 = 1 << 24;

/// Trials per RNG stream.
pub const CHUNK: u64 = 1024;

/// Generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `f` on a pool of `workers` threads, or the global pool for 0.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationCounts {
    pub ensemble: EnsembleId,
    pub q: u32,
    pub n: u32,
    pub total: u64,
    /// Matrices by rank.
    pub by_rank: Vec<u64>,
    /// Matrices by `k`, the statistic of the exact law.
    pub by_k: Vec<u64>,
}

impl EnumerationCounts {
    pub fn pmf(&self) -> Vec<Rat> {
        self.by_k
            .iter()
            .map(|&c| Rat::new(int(c as i64).to_integer(), int(self.total as i64).to_integer()))
            .collect()
    }
}

/// Tallies ranks over every matrix in the ensemble.
pub fn enumerate_ensemble(ensemble: EnsembleId, q: u32, n: u32, realization: Realization) -> Result<EnumerationCounts> {
    let s = Sampler::new(ensemble, q, n, realization)?;
    let size = s.ensemble_size();
    if size > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard {
            size,
            guard: ENUMERATION_GUARD,
        });
    }
    let mut by_rank = vec![0u64; n as usize + 1];
    let mut by_k = vec![0u64; ensemble.support_max(n) as usize + 1];
    let mut bad = None;
    s.for_each(|m| {
        let r = m.rank();
        by_rank[r] += 1;
        match ensemble.k_from_rank(n, r as u32) {
            Some(k) => by_k[k as usize] += 1,
            None => bad = Some(r),
        }
    });
    if let Some(r) = bad {
        return Err(Error::Inconsistent(format!("{ensemble} n={n} has a matrix of rank {r}")));
    }
    Ok(EnumerationCounts {
        ensemble,
        q,
        n,
        total: size as u64,
        by_rank,
        by_k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SampleOptions {
    pub realization: Realization,
    /// Thread count; 0 uses the global pool. Results do not depend on it.
    pub workers: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmpiricalReport {
    pub ensemble: EnsembleId,
    pub q: u32,
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub realization: Realization,
    pub counts: Vec<u64>,
    #[serde(with = "rat_vec")]
    pub exact: Vec<Rat>,
    pub empirical_tv: f64,
    pub chi2: f64,
    /// Degrees of freedom of `chi2`.
    pub dof: usize,
}

mod rat_vec {
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

/// Samples `trials` matrices and compares the histogram of `Q_n` with the
/// exact law. Trials are split into fixed chunks, each with its own RNG
/// stream, so the output depends only on `seed`.
pub fn empirical_pmf(ensemble: EnsembleId, q: u32, n: u32, trials: u64, seed: u64, opts: SampleOptions) -> Result<EmpiricalReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let sampler = Sampler::new(ensemble, q, n, opts.realization)?;
    let exact = finite_pmf(ensemble, q, n)?.probs;
    let kmax = exact.len();
    let chunks = trials.div_ceil(CHUNK);
    let partial: Vec<Result<Vec<u64>>> = with_workers(opts.workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = stream_rng(seed, c);
                let len = CHUNK.min(trials - c * CHUNK);
                let mut counts = vec![0u64; kmax];
                for _ in 0..len {
                    let m = sampler.sample(&mut rng);
                    counts[sampler.k_of(&m)? as usize] += 1;
                }
                Ok(counts)
            })
            .collect()
    })?;
    let mut counts = vec![0u64; kmax];
    for p in partial {
        for (a, b) in counts.iter_mut().zip(p?) {
            *a += b;
        }
    }
    let t = trials as f64;
    let mut tv = 0.0;
    let mut chi2 = 0.0;
    let mut cells = 0;
    for (c, p) in counts.iter().zip(&exact) {
        let pf = to_f64(p);
        tv += (*c as f64 / t - pf).abs();
        if p.is_zero() {
            if *c > 0 {
                chi2 = f64::INFINITY;
            }
        } else {
            cells += 1;
            let e = t * pf;
            chi2 += (*c as f64 - e).powi(2) / e;
        }
    }
    Ok(EmpiricalReport {
        ensemble,
        q,
        n,
        trials,
        seed,
        realization: sampler.realization,
        counts,
        exact,
        empirical_tv: tv / 2.0,
        chi2,
        dof: cells.max(1) - 1,
    })
}

/// Uniformly random nonzero vector of length `len`.
pub fn random_nonzero(field: &Field, len: usize, rng: &mut impl Rng) -> Vec<Elem> {
    loop {
        let v: Vec<Elem> = (0..len).map(|_| rng.gen_range(0..field.order())).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRow {
    pub size: usize,
    pub packed_secs: f64,
    pub generic_secs: f64,
    pub packed_rank: usize,
    pub generic_rank: usize,
    pub agree: bool,
}

/// Times the packed and generic `GF(2)` rank on one random square matrix
/// per size.
pub fn bench_rank(sizes: &[usize], seed: u64) -> Result<Vec<BenchRow>> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("no sizes given".into()));
    }
    let field = std::sync::Arc::new(Field::of_order(2)?);
    let mut rows = Vec::new();
    for (i, &size) in sizes.iter().enumerate() {
        let mut rng = stream_rng(seed, i as u64);
        let packed = PackedGf2::random(size, size, &mut rng);
        let m = packed.to_matrix(field.clone());
        let t = Instant::now();
        let packed_rank = packed.rank();
        let packed_secs = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let generic_rank = m.rank_generic();
        let generic_secs = t.elapsed().as_secs_f64();
        rows.push(BenchRow {
            size,
            packed_secs,
            generic_secs,
            packed_rank,
            generic_rank,
            agree: packed_rank == generic_rank,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn enumeration_examples() {
        let sym = enumerate_ensemble(EnsembleId::Symmetric, 2, 2, Realization::Auto).unwrap();
        assert_eq!(sym.total, 8);
        assert_eq!(sym.by_rank, vec![1, 3, 4]);
        let uni = enumerate_ensemble(EnsembleId::UniformRect { m: 0 }, 2, 2, Realization::Auto).unwrap();
        assert_eq!(uni.by_rank, vec![1, 9, 6]);
        let her = enumerate_ensemble(EnsembleId::Hermitian, 3, 1, Realization::Auto).unwrap();
        assert_eq!(her.by_rank, vec![1, 2]);
        assert_eq!(her.pmf(), vec![frac(2, 3), frac(1, 3)]);
    }

    #[test]
    fn enumeration_guard() {
        let r = enumerate_ensemble(EnsembleId::UniformRect { m: 0 }, 2, 5, Realization::Auto);
        assert!(matches!(r, Err(Error::EnumerationGuard { .. })));
    }

    #[test]
    fn single_trial_is_point_mass() {
        let r = empirical_pmf(EnsembleId::Symmetric, 3, 3, 1, 5, SampleOptions::default()).unwrap();
        assert_eq!(r.counts.iter().sum::<u64>(), 1);
        assert_eq!(r.counts.iter().filter(|&&c| c == 1).count(), 1);
        assert!(empirical_pmf(EnsembleId::Symmetric, 3, 3, 0, 5, SampleOptions::default()).is_err());
    }

    #[test]
    fn determinism_across_workers() {
        let e = EnsembleId::UniformRect { m: 1 };
        let a = empirical_pmf(e, 3, 4, 5000, 11, SampleOptions { workers: 1, ..Default::default() }).unwrap();
        let b = empirical_pmf(e, 3, 4, 5000, 11, SampleOptions { workers: 3, ..Default::default() }).unwrap();
        assert_eq!(a.counts, b.counts);
        let c = empirical_pmf(e, 3, 4, 5000, 12, SampleOptions::default()).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn bench_agrees() {
        let rows = bench_rank(&[8, 64, 100], 1).unwrap();
        assert!(rows.iter().all(|r| r.agree));
        assert!(bench_rank(&[], 1).is_err());
    }
}
