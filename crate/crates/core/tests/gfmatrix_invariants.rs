use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankdist::ensembles::{finite_pmf, EnsembleId};
use rankdist::gfmatrix::*;
use rankdist::qseries::{finite_qproduct, Sign};
use rankdist::rational::to_f64;

fn gf(q: u32) -> Arc<Field> {
    Arc::new(Field::of_order(q).unwrap())
}

fn random_invertible(f: &Arc<Field>, n: usize, rng: &mut ChaCha8Rng) -> MatrixGF {
    loop {
        let m = MatrixGF::random(f.clone(), n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

#[test]
fn rank_equals_transpose_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for q in [2, 3, 4, 5, 9] {
        let f = gf(q);
        for _ in 0..500 {
            let (r, c) = (rng.gen_range(1..9), rng.gen_range(1..9));
            let mut m = MatrixGF::random(f.clone(), r, c, &mut rng);
            // Bias towards rank deficiency by duplicating a row.
            if r > 1 && rng.gen_bool(0.5) {
                for j in 0..c {
                    let v = m.get(0, j);
                    m.set(r - 1, j, v);
                }
            }
            assert_eq!(m.rank(), m.transpose().rank(), "q={q}\n{m}");
        }
    }
}

#[test]
fn rank_invariant_under_permutation_and_invertible_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for q in [2, 3, 4, 5, 9] {
        let f = gf(q);
        for _ in 0..200 {
            let n = rng.gen_range(1..8);
            let a = MatrixGF::random(f.clone(), n, n, &mut rng);
            let low = a.mul(&MatrixGF::random(f.clone(), n, n, &mut rng));
            for m in [&a, &low] {
                let r = m.rank();
                let mut rp: Vec<usize> = (0..n).collect();
                let mut cp = rp.clone();
                rp.shuffle(&mut rng);
                cp.shuffle(&mut rng);
                assert_eq!(m.permute(&rp, &cp).rank(), r);
                let g = random_invertible(&f, n, &mut rng);
                let h = random_invertible(&f, n, &mut rng);
                assert_eq!(g.mul(m).rank(), r);
                assert_eq!(m.mul(&h).rank(), r);
            }
        }
    }
}

#[test]
fn packed_rank_matches_generic() {
    let f = gf(2);
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for i in 0..1000 {
        let (r, c) = if i < 20 { (128, 128) } else { (rng.gen_range(1..=128), rng.gen_range(1..=128)) };
        let p = PackedGf2::random(r, c, &mut rng);
        let mut m = p.to_matrix(f.clone());
        if i % 3 == 0 && r > 2 {
            // Force a dependency: row 2 = row 0 + row 1.
            for j in 0..c {
                let v = f.add(m.get(0, j), m.get(1, j));
                m.set(2, j, v);
            }
        }
        assert_eq!(PackedGf2::from_matrix(&m).rank(), m.rank_generic());
    }
}

#[test]
fn full_rank_frequency_64() {
    let trials = 100_000u64;
    let hits: u64 = (0..trials / CHUNK)
        .map(|c| {
            let mut rng = stream_rng(7, c);
            (0..CHUNK).filter(|_| PackedGf2::random(64, 64, &mut rng).rank() == 64).count() as u64
        })
        .sum();
    let n = (trials / CHUNK) * CHUNK;
    let p = to_f64(&finite_qproduct(2, 1, 64, Sign::Minus));
    let freq = hits as f64 / n as f64;
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    assert!((freq - p).abs() < 3.0 * sigma, "freq {freq} vs {p}");
}

fn binom2(n: u32) -> u32 {
    n * n.saturating_sub(1) / 2
}

fn expected_exponent(e: EnsembleId, n: u32) -> u32 {
    match e {
        EnsembleId::UniformRect { m } => n * (n + m),
        EnsembleId::Symmetric => binom2(n + 1),
        EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd => binom2(n),
        EnsembleId::SkewCentroEven => (n / 2) * (n / 2),
        EnsembleId::SkewCentroOdd => (n - 1) * (n - 1) / 4 + (n - 1) / 2,
        EnsembleId::Hermitian => n * n,
    }
}

/// Dimension over GF(p) of the matrices satisfying the defining relations,
/// from the rank of the constraint system on base-p coordinates.
fn constraint_dimension(e: EnsembleId, real: Realization, field: &Field, n: usize) -> usize {
    let (p, deg) = (field.spec.p, field.spec.e as usize);
    let fp = Arc::new(Field::of_order(p).unwrap());
    let vars = n * n * deg;
    let var = |i: usize, j: usize, d: usize| (i * n + j) * deg + d;
    let neg = |x: u32| (p - x) % p;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut eq = |terms: &[(usize, u32)]| {
        let mut r = vec![0u32; vars];
        for &(v, c) in terms {
            r[v] = (r[v] + c) % p;
        }
        rows.push(r);
    };
    let skew_zero = match real {
        Realization::Skew => true,
        Realization::Symplectic => false,
        Realization::Auto => p != 2,
    };
    for i in 0..n {
        for j in 0..n {
            for d in 0..deg {
                match e {
                    EnsembleId::Symmetric => eq(&[(var(i, j, d), 1), (var(j, i, d), neg(1))]),
                    EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd => {
                        let s = if skew_zero { 1 } else { neg(1) };
                        eq(&[(var(i, j, d), 1), (var(j, i, d), s)]);
                        if i == j {
                            eq(&[(var(i, i, d), 1)]);
                        }
                    }
                    EnsembleId::SkewCentroEven | EnsembleId::SkewCentroOdd => {
                        eq(&[(var(i, j, d), 1), (var(j, i, d), 1)]);
                        eq(&[(var(i, j, d), 1), (var(n - 1 - j, n - 1 - i, d), neg(1))]);
                    }
                    EnsembleId::Hermitian => {
                        // conj(a + b theta) = a - b theta
                        let c = if d == 0 { neg(1) } else { 1 };
                        eq(&[(var(j, i, d), 1), (var(i, j, d), c)]);
                    }
                    EnsembleId::UniformRect { .. } => {}
                }
            }
        }
    }
    if rows.is_empty() {
        return vars;
    }
    vars - MatrixGF::from_rows(fp, &rows).rank_generic()
}

#[test]
fn free_coordinates_match_cardinality_exponents() {
    let cases: Vec<(EnsembleId, u32, Realization)> = vec![
        (EnsembleId::Symmetric, 3, Realization::Auto),
        (EnsembleId::Symmetric, 4, Realization::Auto),
        (EnsembleId::ZeroDiagEven, 3, Realization::Skew),
        (EnsembleId::ZeroDiagEven, 4, Realization::Symplectic),
        (EnsembleId::ZeroDiagOdd, 5, Realization::Skew),
        (EnsembleId::ZeroDiagOdd, 2, Realization::Symplectic),
        (EnsembleId::SkewCentroEven, 3, Realization::Auto),
        (EnsembleId::SkewCentroEven, 9, Realization::Auto),
        (EnsembleId::SkewCentroOdd, 5, Realization::Auto),
        (EnsembleId::Hermitian, 3, Realization::Auto),
        (EnsembleId::Hermitian, 5, Realization::Auto),
    ];
    for (e, q, real) in cases {
        for n in 1..=8 {
            if !e.accepts_n(n) {
                continue;
            }
            let s = Sampler::new(e, q, n, real).unwrap();
            assert_eq!(s.free_coordinates(), expected_exponent(e, n), "{e} q={q} n={n}");
            let base_degree = match e {
                EnsembleId::Hermitian => 1,
                _ => s.field.spec.e as usize,
            };
            let dim = constraint_dimension(e, real, &s.field, n as usize);
            assert_eq!(dim, s.free_coordinates() as usize * base_degree, "{e} q={q} n={n}");
        }
    }
}

#[test]
fn samples_satisfy_relations_and_even_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let cases: Vec<(EnsembleId, u32, Realization)> = vec![
        (EnsembleId::UniformRect { m: 2 }, 4, Realization::Auto),
        (EnsembleId::Symmetric, 5, Realization::Auto),
        (EnsembleId::ZeroDiagEven, 3, Realization::Skew),
        (EnsembleId::ZeroDiagOdd, 8, Realization::Symplectic),
        (EnsembleId::SkewCentroEven, 3, Realization::Auto),
        (EnsembleId::SkewCentroOdd, 9, Realization::Auto),
        (EnsembleId::Hermitian, 7, Realization::Auto),
    ];
    for (e, q, real) in cases {
        for n in 1..=9 {
            if !e.accepts_n(n) {
                continue;
            }
            let s = Sampler::new(e, q, n, real).unwrap();
            for _ in 0..50 {
                let m = s.sample(&mut rng);
                assert!(satisfies_relations(e, s.realization, &m), "{e} q={q}\n{m}");
                let even_rank = matches!(
                    e,
                    EnsembleId::SkewCentroEven | EnsembleId::SkewCentroOdd | EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd
                );
                if even_rank {
                    assert_eq!(m.rank() % 2, 0, "{e} q={q}\n{m}");
                }
            }
        }
    }
}

#[test]
fn enumeration_reproduces_exact_laws() {
    let mut checked = 0;
    for e in EnsembleId::all(0..=2) {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            for n in 0..=6 {
                if !e.accepts_n(n) {
                    continue;
                }
                let Ok(s) = Sampler::new(e, q, n, Realization::Auto) else { continue };
                if s.ensemble_size() > 1 << 16 {
                    continue;
                }
                let counts = enumerate_ensemble(e, q, n, Realization::Auto).unwrap();
                assert_eq!(counts.pmf(), finite_pmf(e, q, n).unwrap().probs, "{e} q={q} n={n}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 40, "only {checked} cases");
}

#[test]
fn skew_realization_matches_zero_diag_law() {
    let r = empirical_pmf(EnsembleId::ZeroDiagEven, 3, 4, 100_000, 3, SampleOptions::default()).unwrap();
    assert_eq!(r.realization, Realization::Skew);
    assert!(r.empirical_tv < 0.02, "{}", r.empirical_tv);
}

#[test]
fn uniform_square_empirical() {
    let r = empirical_pmf(EnsembleId::UniformRect { m: 0 }, 2, 6, 100_000, 7, SampleOptions::default()).unwrap();
    assert!(r.empirical_tv < 0.02, "{}", r.empirical_tv);
    assert_eq!(r.counts.iter().sum::<u64>(), 100_000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_bounded_by_dims(seed in any::<u64>(), r in 1usize..12, c in 1usize..12, qi in 0usize..5) {
        let q = [2, 3, 4, 5, 9][qi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = MatrixGF::random(gf(q), r, c, &mut rng);
        let k = m.rank();
        prop_assert!(k <= r.min(c));
        prop_assert_eq!(k, m.rank_generic());
    }

    #[test]
    fn sum_rank_subadditive(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = gf(3);
        let a = MatrixGF::random(f.clone(), n, n, &mut rng);
        let b = MatrixGF::random(f, n, n, &mut rng);
        prop_assert!(a.add(&b).rank() <= a.rank() + b.rank());
    }
}
