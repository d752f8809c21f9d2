//! Free-coordinate layouts of the structured ensembles.
//!
//! A layout lists independent slots, each uniform over the field or over
//! its prime subfield, and states every matrix entry as zero or as a slot
//! value, possibly negated and/or conjugated. Uniform sampling and
//! exhaustive enumeration both run through the same layout.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::{Elem, Field, FieldSpec};
use super::matrix::MatrixGF;
use crate::ensembles::{prime_power, EnsembleId};
use crate::error::{Error, Result};

/// How zero-diagonal matrices are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    /// Skew-symmetric for odd `q`, symplectic for even `q`.
    #[default]
    Auto,
    /// `A^T = -A`, zero diagonal; odd `q`.
    Skew,
    /// `A^T = A`, zero diagonal; `q` in `{2, 4, 8}`.
    Symplectic,
}

impl std::str::FromStr for Realization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Realization::Auto),
            "skew" => Ok(Realization::Skew),
            "symplectic" => Ok(Realization::Symplectic),
            _ => Err(Error::InvalidParameter(format!("unknown realization {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    Full,
    PrimeSubfield,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Zero,
    Slot { idx: usize, neg: bool, conj: bool },
}

#[derive(Debug, Clone)]
pub struct Layout {
    pub rows: usize,
    pub cols: usize,
    pub slots: Vec<SlotKind>,
    pub cells: Vec<Cell>,
}

fn slot(idx: usize) -> Cell {
    Cell::Slot {
        idx,
        neg: false,
        conj: false,
    }
}

impl Layout {
    fn new(rows: usize, cols: usize) -> Self {
        Layout {
            rows,
            cols,
            slots: Vec::new(),
            cells: vec![Cell::Zero; rows * cols],
        }
    }

    fn push(&mut self, kind: SlotKind) -> usize {
        self.slots.push(kind);
        self.slots.len() - 1
    }

    fn uniform(rows: usize, cols: usize) -> Self {
        let mut l = Layout::new(rows, cols);
        for c in 0..rows * cols {
            let s = l.push(SlotKind::Full);
            l.cells[c] = slot(s);
        }
        l
    }

    /// Upper triangle free, lower triangle `±` the mirror; optional zero diagonal.
    fn mirrored(n: usize, diag: bool, neg: bool) -> Self {
        let mut l = Layout::new(n, n);
        for i in 0..n {
            for j in i..n {
                if i == j && !diag {
                    continue;
                }
                let s = l.push(SlotKind::Full);
                l.cells[i * n + j] = slot(s);
                if i != j {
                    l.cells[j * n + i] = Cell::Slot {
                        idx: s,
                        neg,
                        conj: false,
                    };
                }
            }
        }
        l
    }

    fn hermitian(n: usize) -> Self {
        let mut l = Layout::new(n, n);
        for i in 0..n {
            let s = l.push(SlotKind::PrimeSubfield);
            l.cells[i * n + i] = slot(s);
            for j in i + 1..n {
                let s = l.push(SlotKind::Full);
                l.cells[i * n + j] = slot(s);
                l.cells[j * n + i] = Cell::Slot {
                    idx: s,
                    neg: false,
                    conj: true,
                };
            }
        }
        l
    }

    /// Orbits of `(i,j) -> (j,i)` with sign `-1` and
    /// `(i,j) -> (n-1-j, n-1-i)` with sign `+1`; an orbit reached with
    /// both signs is forced to zero.
    fn skew_centro(n: usize) -> Self {
        let mut l = Layout::new(n, n);
        let mut seen: Vec<Option<bool>> = vec![None; n * n];
        for start in 0..n * n {
            if seen[start].is_some() {
                continue;
            }
            let mut orbit = vec![];
            let mut forced_zero = false;
            let mut queue = VecDeque::from([(start, false)]);
            seen[start] = Some(false);
            while let Some((c, neg)) = queue.pop_front() {
                orbit.push((c, neg));
                let (i, j) = (c / n, c % n);
                for (next, flip) in [(j * n + i, true), ((n - 1 - j) * n + (n - 1 - i), false)] {
                    let s = neg ^ flip;
                    match seen[next] {
                        None => {
                            seen[next] = Some(s);
                            queue.push_back((next, s));
                        }
                        Some(t) if t != s => forced_zero = true,
                        Some(_) => {}
                    }
                }
            }
            if !forced_zero {
                let idx = l.push(SlotKind::Full);
                for (c, neg) in orbit {
                    l.cells[c] = Cell::Slot { idx, neg, conj: false };
                }
            }
        }
        l
    }
}

/// Uniform sampler over one ensemble at fixed `(q, n)`.
#[derive(Debug, Clone)]
pub struct Sampler {
    pub ensemble: EnsembleId,
    pub q: u32,
    pub n: u32,
    pub realization: Realization,
    pub field: Arc<Field>,
    pub layout: Layout,
}

fn unrealizable(ensemble: EnsembleId, q: u32, why: &str) -> Error {
    Error::Unrealizable(format!("{ensemble} at q = {q}: {why}"))
}

impl Sampler {
    pub fn new(ensemble: EnsembleId, q: u32, n: u32, realization: Realization) -> Result<Self> {
        ensemble.check_n(n)?;
        let (p, _) = prime_power(q).ok_or_else(|| unrealizable(ensemble, q, "q is not a prime power"))?;
        let nn = n as usize;
        let is_zero_diag = matches!(ensemble, EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd);
        if !is_zero_diag && realization != Realization::Auto {
            return Err(Error::InvalidParameter(format!("{ensemble} has a single realization")));
        }
        let realization = match (is_zero_diag, realization) {
            (true, Realization::Auto) if p == 2 => Realization::Symplectic,
            (true, Realization::Auto) => Realization::Skew,
            (_, r) => r,
        };
        let field_spec = match ensemble {
            EnsembleId::Hermitian => {
                if p == 2 || p != q {
                    return Err(unrealizable(ensemble, q, "needs GF(q^2) over an odd prime q"));
                }
                FieldSpec::new(q, 2)?
            }
            _ => FieldSpec::of_order(q)?,
        };
        let layout = match ensemble {
            EnsembleId::UniformRect { m } => Layout::uniform(nn, nn + m as usize),
            EnsembleId::Symmetric => Layout::mirrored(nn, true, false),
            EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd => match realization {
                Realization::Skew if p != 2 => Layout::mirrored(nn, false, true),
                Realization::Symplectic if p == 2 => Layout::mirrored(nn, false, false),
                Realization::Skew => return Err(unrealizable(ensemble, q, "skew-symmetric needs odd q")),
                _ => return Err(unrealizable(ensemble, q, "symplectic needs q a power of 2")),
            },
            EnsembleId::SkewCentroEven | EnsembleId::SkewCentroOdd => {
                if p == 2 {
                    return Err(unrealizable(ensemble, q, "skew centrosymmetric needs odd q"));
                }
                Layout::skew_centro(nn)
            }
            EnsembleId::Hermitian => Layout::hermitian(nn),
        };
        Ok(Sampler {
            ensemble,
            q,
            n,
            realization,
            field: Arc::new(Field::new(field_spec)),
            layout,
        })
    }

    fn slot_card(&self, k: SlotKind) -> u32 {
        match k {
            SlotKind::Full => self.field.order(),
            SlotKind::PrimeSubfield => self.field.char(),
        }
    }

    /// `log_q` of the ensemble size.
    pub fn free_coordinates(&self) -> u32 {
        let full = if self.field.order() == self.q { 1 } else { 2 };
        self.layout
            .slots
            .iter()
            .map(|&k| match k {
                SlotKind::Full => full,
                SlotKind::PrimeSubfield => 1,
            })
            .sum()
    }

    /// Number of matrices in the ensemble, saturating.
    pub fn ensemble_size(&self) -> u128 {
        self.layout
            .slots
            .iter()
            .fold(1u128, |acc, &k| acc.saturating_mul(self.slot_card(k) as u128))
    }

    pub fn fill(&self, values: &[Elem]) -> MatrixGF {
        let f = &self.field;
        let mut m = MatrixGF::zeros(f.clone(), self.layout.rows, self.layout.cols);
        for (c, cell) in self.layout.cells.iter().enumerate() {
            if let Cell::Slot { idx, neg, conj } = *cell {
                let mut v = values[idx];
                if conj {
                    v = f.conj(v);
                }
                if neg {
                    v = f.neg(v);
                }
                m.entries[c] = v;
            }
        }
        m
    }

    pub fn sample(&self, rng: &mut impl Rng) -> MatrixGF {
        let values: Vec<Elem> = self
            .layout
            .slots
            .iter()
            .map(|&k| rng.gen_range(0..self.slot_card(k)))
            .collect();
        self.fill(&values)
    }

    /// Calls `visit` on every matrix of the ensemble.
    pub fn for_each(&self, mut visit: impl FnMut(&MatrixGF)) {
        let cards: Vec<u32> = self.layout.slots.iter().map(|&k| self.slot_card(k)).collect();
        let mut values = vec![0; cards.len()];
        loop {
            visit(&self.fill(&values));
            let mut i = 0;
            loop {
                if i == cards.len() {
                    return;
                }
                values[i] += 1;
                if values[i] < cards[i] {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
        }
    }

    /// `Q_n` for a sampled matrix.
    pub fn k_of(&self, m: &MatrixGF) -> Result<u32> {
        let r = m.rank() as u32;
        self.ensemble
            .k_from_rank(self.n, r)
            .ok_or_else(|| Error::Inconsistent(format!("{} n={} produced rank {r}", self.ensemble, self.n)))
    }
}

/// Checks the defining relations entry by entry, independent of any layout.
pub fn satisfies_relations(ensemble: EnsembleId, realization: Realization, m: &MatrixGF) -> bool {
    let f = &m.field;
    let n = m.rows;
    let all = |pred: &dyn Fn(usize, usize) -> bool| (0..n).all(|i| (0..m.cols).all(|j| pred(i, j)));
    match ensemble {
        EnsembleId::UniformRect { m: extra } => m.cols == n + extra as usize,
        _ if m.cols != n => false,
        EnsembleId::Symmetric => all(&|i, j| m.get(i, j) == m.get(j, i)),
        EnsembleId::ZeroDiagEven | EnsembleId::ZeroDiagOdd => {
            let skew = match realization {
                Realization::Skew => true,
                Realization::Symplectic => false,
                Realization::Auto => f.char() != 2,
            };
            all(&|i, j| {
                let t = if skew { f.neg(m.get(j, i)) } else { m.get(j, i) };
                m.get(i, j) == t && (i != j || m.get(i, i) == 0)
            })
        }
        EnsembleId::SkewCentroEven | EnsembleId::SkewCentroOdd => {
            all(&|i, j| m.get(i, j) == f.neg(m.get(j, i)) && m.get(i, j) == m.get(n - 1 - j, n - 1 - i))
        }
        EnsembleId::Hermitian => all(&|i, j| m.get(j, i) == f.conj(m.get(i, j))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn skewcentro_odd_n1_is_zero() {
        let s = Sampler::new(EnsembleId::SkewCentroOdd, 3, 1, Realization::Auto).unwrap();
        assert_eq!(s.free_coordinates(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            assert_eq!(s.sample(&mut rng).entries, vec![0]);
        }
    }

    #[test]
    fn hermitian_n1_prime_field_entry() {
        let s = Sampler::new(EnsembleId::Hermitian, 3, 1, Realization::Auto).unwrap();
        assert_eq!(s.ensemble_size(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut seen = [false; 3];
        for _ in 0..100 {
            let v = s.sample(&mut rng).entries[0];
            assert!(v < 3);
            seen[v as usize] = true;
        }
        assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn skewcentro_even_n2_one_coordinate() {
        let s = Sampler::new(EnsembleId::SkewCentroEven, 3, 2, Realization::Auto).unwrap();
        assert_eq!(s.free_coordinates(), 1);
    }

    #[test]
    fn unrealizable_cases() {
        assert!(Sampler::new(EnsembleId::Hermitian, 2, 2, Realization::Auto).is_err());
        assert!(Sampler::new(EnsembleId::Hermitian, 9, 2, Realization::Auto).is_err());
        assert!(Sampler::new(EnsembleId::SkewCentroEven, 4, 2, Realization::Auto).is_err());
        assert!(Sampler::new(EnsembleId::ZeroDiagEven, 3, 2, Realization::Symplectic).is_err());
        assert!(Sampler::new(EnsembleId::ZeroDiagEven, 4, 2, Realization::Skew).is_err());
        assert!(Sampler::new(EnsembleId::Symmetric, 6, 2, Realization::Auto).is_err());
        assert!(Sampler::new(EnsembleId::Symmetric, 3, 2, Realization::Skew).is_err());
    }

    #[test]
    fn auto_realization() {
        let s = Sampler::new(EnsembleId::ZeroDiagEven, 3, 4, Realization::Auto).unwrap();
        assert_eq!(s.realization, Realization::Skew);
        let s = Sampler::new(EnsembleId::ZeroDiagOdd, 8, 3, Realization::Auto).unwrap();
        assert_eq!(s.realization, Realization::Symplectic);
    }
}
