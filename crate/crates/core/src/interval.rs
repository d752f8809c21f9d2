//! Closed intervals with exact rational endpoints.
//!
//! Every operation encloses the true result whenever the operands enclose
//! their true values. Endpoints are exact, so the only widening comes from
//! the operations themselves and from explicit [`IntervalRat::tighten`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{ceil_dyadic, floor_dyadic, rat_str, to_f64, Rat};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRat {
    #[serde(with = "crate::rational::as_str")]
    lo: Rat,
    #[serde(with = "crate::rational::as_str")]
    hi: Rat,
}

impl IntervalRat {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval);
        }
        Ok(IntervalRat { lo, hi })
    }

    pub fn point(x: Rat) -> Self {
        IntervalRat {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rat::zero())
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rat::zero())
    }

    /// `other ⊆ self`.
    pub fn encloses(&self, other: &IntervalRat) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &IntervalRat) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &IntervalRat) -> Option<IntervalRat> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        if lo <= hi {
            Some(IntervalRat {
                lo: lo.clone(),
                hi: hi.clone(),
            })
        } else {
            None
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &IntervalRat) -> IntervalRat {
        IntervalRat {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn scale(&self, c: &Rat) -> IntervalRat {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            IntervalRat { lo: b, hi: a }
        } else {
            IntervalRat { lo: a, hi: b }
        }
    }

    pub fn add_rat(&self, c: &Rat) -> IntervalRat {
        IntervalRat {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn recip(&self) -> Result<IntervalRat> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(IntervalRat {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &IntervalRat) -> Result<IntervalRat> {
        Ok(self * &other.recip()?)
    }

    pub fn abs(&self) -> IntervalRat {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            IntervalRat {
                lo: Rat::zero(),
                hi: self.hi.clone().max(-self.lo.clone()),
            }
        }
    }

    pub fn max(&self, other: &IntervalRat) -> IntervalRat {
        IntervalRat {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a IntervalRat>>(items: I) -> IntervalRat {
        let mut acc = IntervalRat::zero();
        for it in items {
            acc.lo += &it.lo;
            acc.hi += &it.hi;
        }
        acc
    }

    /// Round endpoints outward to multiples of `2^-bits`, bounding the size
    /// of the rationals carried through long computations.
    pub fn tighten(&self, bits: u32) -> IntervalRat {
        IntervalRat {
            lo: floor_dyadic(&self.lo, bits),
            hi: ceil_dyadic(&self.hi, bits),
        }
    }

    /// Certified `self < other` (every point of self below every point of other).
    pub fn certainly_lt(&self, other: &IntervalRat) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &IntervalRat) -> bool {
        self.hi <= other.lo
    }
}

impl fmt::Debug for IntervalRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", rat_str(&self.lo), rat_str(&self.hi))
    }
}

impl fmt::Display for IntervalRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", to_f64(&self.lo), to_f64(&self.hi))
    }
}

impl From<Rat> for IntervalRat {
    fn from(x: Rat) -> Self {
        IntervalRat::point(x)
    }
}

impl Add for &IntervalRat {
    type Output = IntervalRat;
    fn add(self, rhs: &IntervalRat) -> IntervalRat {
        IntervalRat {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &IntervalRat {
    type Output = IntervalRat;
    fn sub(self, rhs: &IntervalRat) -> IntervalRat {
        IntervalRat {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Neg for &IntervalRat {
    type Output = IntervalRat;
    fn neg(self) -> IntervalRat {
        IntervalRat {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul for &IntervalRat {
    type Output = IntervalRat;
    fn mul(self, rhs: &IntervalRat) -> IntervalRat {
        // Fast path for the common all-nonnegative case.
        if !self.lo.is_negative() && !rhs.lo.is_negative() {
            return IntervalRat {
                lo: &self.lo * &rhs.lo,
                hi: &self.hi * &rhs.hi,
            };
        }
        let cands = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        IntervalRat { lo, hi }
    }
}
