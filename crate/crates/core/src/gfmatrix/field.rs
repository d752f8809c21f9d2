//! Table-driven arithmetic in small finite fields.
//!
//! Elements of `GF(p^e)` are encoded as integers `0..p^e` whose base-`p`
//! digits are the polynomial coefficients (constant term first), so the
//! prime subfield is exactly `0..p`.

use serde::{Deserialize, Serialize};

use crate::ensembles::prime_power;
use crate::error::{Error, Result};

pub type Elem = u32;

/// Largest field order with precomputed tables.
pub const MAX_ORDER: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    /// Monic modulus coefficients, constant term first, leading 1 omitted.
    pub modulus: Vec<u32>,
    /// `theta^2` for `GF(p^2) = GF(p)(theta)` with `p` odd.
    pub theta_sq: Option<u32>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn smallest_nonresidue(p: u32) -> u32 {
    (2..p)
        .find(|&s| (1..p).all(|x| (x as u64 * x as u64 % p as u64) as u32 != s))
        .expect("odd prime has a non-residue")
}

impl FieldSpec {
    /// `GF(p)`, `GF(p^2)` for odd `p`, `GF(4)` and `GF(8)`.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Unrealizable(format!("{p} is not prime")));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::Unrealizable(format!("GF({p}^{e}) is too large")))?;
        let (modulus, theta_sq) = match (p, e) {
            (_, 1) => (vec![0], None),
            (2, 2) => (vec![1, 1], None),
            (2, 3) => (vec![1, 1, 0], None),
            (_, 2) => {
                let s = smallest_nonresidue(p);
                (vec![(p - s) % p, 0], Some(s))
            }
            _ => return Err(Error::Unrealizable(format!("GF({p}^{e}) is not supported"))),
        };
        Ok(FieldSpec {
            p,
            e,
            q,
            modulus,
            theta_sq,
        })
    }

    /// The field of order `q`.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::Unrealizable(format!("{q} is not a prime power")))?;
        FieldSpec::new(p, e)
    }
}

#[derive(Debug, Clone)]
pub struct Field {
    pub spec: FieldSpec,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    frob: Vec<Elem>,
}

fn digits(x: Elem, p: u32, e: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(e as usize);
    let mut x = x;
    for _ in 0..e {
        d.push(x % p);
        x /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> Elem {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_mul(a: &[u32], b: &[u32], spec: &FieldSpec) -> Vec<u32> {
    let (p, e) = (spec.p as u64, spec.e as usize);
    let mut prod = vec![0u64; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
        }
    }
    // x^e = -(modulus), reduced from the top.
    for d in (e..2 * e).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (i, &m) in spec.modulus.iter().enumerate() {
            prod[d - e + i] = (prod[d - e + i] + (p - c) * m as u64) % p;
        }
    }
    prod.truncate(e);
    prod.into_iter().map(|x| x as u32).collect()
}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.q as usize;
        let (p, e) = (spec.p, spec.e);
        let ds: Vec<Vec<u32>> = (0..q as u32).map(|x| digits(x, p, e)).collect();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = ds[a].iter().zip(&ds[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p);
                mul[a * q + b] = undigits(&poly_mul(&ds[a], &ds[b], &spec), p);
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem)
            .collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as Elem })
            .collect();
        let frob = (0..q)
            .map(|a| {
                let mut r = 1usize;
                for _ in 0..p {
                    r = mul[r * q + a] as usize;
                }
                r as Elem
            })
            .collect();
        Field {
            spec,
            add,
            mul,
            neg,
            inv,
            frob,
        }
    }

    pub fn of_order(q: u32) -> Result<Self> {
        Ok(Field::new(FieldSpec::of_order(q)?))
    }

    pub fn order(&self) -> u32 {
        self.spec.q
    }

    pub fn char(&self) -> u32 {
        self.spec.p
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[(a * self.spec.q + b) as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[(a * self.spec.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0) = 0`.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    /// `a^p`; for `e = 2` this is the conjugation fixing `GF(p)`.
    #[inline]
    pub fn conj(&self, a: Elem) -> Elem {
        self.frob[a as usize]
    }

    /// The prime subfield `{0..p}` is closed under the encoding.
    pub fn in_prime_subfield(&self, a: Elem) -> bool {
        a < self.spec.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axioms(f: &Field) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
    }

    #[test]
    fn field_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 25] {
            axioms(&Field::of_order(q).unwrap());
        }
    }

    #[test]
    fn conjugation_is_involution_fixing_prime_field() {
        for p in [3u32, 5, 7] {
            let f = Field::new(FieldSpec::new(p, 2).unwrap());
            let s = f.spec.theta_sq.unwrap();
            let theta = p;
            assert_eq!(f.mul(theta, theta), s);
            for a in 0..f.order() {
                assert_eq!(f.conj(f.conj(a)), a);
                assert_eq!(f.conj(a) == a, f.in_prime_subfield(a));
                // a + b theta -> a - b theta
                let (x, y) = (a % p, a / p);
                assert_eq!(f.conj(a), x + ((p - y) % p) * p);
            }
        }
    }

    #[test]
    fn unsupported_orders() {
        assert!(FieldSpec::of_order(6).is_err());
        assert!(FieldSpec::of_order(16).is_err());
        assert!(FieldSpec::of_order(27).is_err());
        assert_eq!(FieldSpec::new(3, 2).unwrap().theta_sq, Some(2));
        assert_eq!(FieldSpec::new(7, 2).unwrap().theta_sq, Some(3));
    }
}
