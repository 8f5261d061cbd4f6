//! Exact Laurent polynomials over the integers, plus exact determinants of
//! matrices of them.
//!
//! Everything here is arbitrary precision; there is no floating point anywhere
//! in the engine.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Sparse Laurent polynomial in one variable `t`, exponents in `i32`,
/// coefficients in `BigInt`. Zero coefficients are never stored, so structural
/// equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::term(c, 0)
    }

    /// The monomial `c * t^e`.
    pub fn term(c: i64, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, BigInt::from(c));
        }
        LaurentPoly { terms }
    }

    pub fn from_pairs<I: IntoIterator<Item = (i32, BigInt)>>(pairs: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Term list sorted by ascending exponent.
    pub fn pairs(&self) -> Vec<(i32, BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c.clone())).collect()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, e: i32, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(*e, c);
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(*e, &(-c));
        }
        r
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                r.add_term(e1 + e2, &(c1 * c2));
            }
        }
        r
    }

    /// Multiply by the monomial `c * t^e`.
    pub fn mul_term(&self, c: &BigInt, e: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, v)| (k + e, v * c)).collect(),
        }
    }

    /// Shift exponents: `p(t) * t^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitute `t -> t^{-1}`.
    pub fn flip(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// True iff `p(t) = p(t^{-1})`.
    pub fn is_symmetric(&self) -> bool {
        *self == self.flip()
    }

    /// Evaluate at `t = 1` or `t = -1` (the only points where negative
    /// exponents need no fractions).
    pub fn eval_at_unit(&self, t: i64) -> BigInt {
        assert!(t == 1 || t == -1, "eval_at_unit only supports t = +/-1");
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            if t == 1 || e % 2 == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }

    /// Substitute `t = u^2` in reverse: given a polynomial in `u` with only
    /// even exponents, return the polynomial in `t`. `None` if any exponent is
    /// odd.
    pub fn halve_exponents(&self) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e % 2 != 0 {
                return None;
            }
            terms.insert(e / 2, c.clone());
        }
        Some(LaurentPoly { terms })
    }

    /// Exact division in the Laurent ring: `Some(q)` with `self = d * q`, or
    /// `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let a0 = self.min_exp().unwrap();
        let b0 = d.min_exp().unwrap();
        let deg_n = (self.max_exp().unwrap() - a0) as usize;
        let deg_d = (d.max_exp().unwrap() - b0) as usize;
        if deg_n < deg_d {
            return None;
        }
        // Dense coefficient vectors of self / t^a0 and d / t^b0.
        let mut num: Vec<BigInt> = vec![BigInt::zero(); deg_n + 1];
        for (e, c) in &self.terms {
            num[(e - a0) as usize] = c.clone();
        }
        let mut den: Vec<BigInt> = vec![BigInt::zero(); deg_d + 1];
        for (e, c) in &d.terms {
            den[(e - b0) as usize] = c.clone();
        }
        let lead = den[deg_d].clone();
        let mut quot: Vec<BigInt> = vec![BigInt::zero(); deg_n - deg_d + 1];
        for k in (0..=deg_n - deg_d).rev() {
            let c = num[k + deg_d].clone();
            if c.is_zero() {
                continue;
            }
            if !(&c % &lead).is_zero() {
                return None;
            }
            let q = &c / &lead;
            for i in 0..=deg_d {
                let delta = &q * &den[i];
                num[k + i] -= delta;
            }
            quot[k] = q;
        }
        if num.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let offset = a0 - b0;
        Some(Self::from_pairs(
            quot.into_iter()
                .enumerate()
                .map(|(i, c)| (offset + i as i32, c)),
        ))
    }
}

impl fmt::Display for LaurentPoly {
    /// Pinned text form: terms ascending by exponent, coefficient always
    /// written (including +/-1), `t^0` elided. Example: `-2*t^-1+5-2*t^1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            let mag = c.abs();
            if *e == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*t^{e}")?;
            }
            first = false;
        }
        Ok(())
    }
}

pub type LaurentMatrix = Vec<Vec<LaurentPoly>>;

/// Exact determinant. Cofactor expansion for small matrices, fraction-free
/// (Bareiss) elimination above that: each elimination step is one
/// multiply-subtract followed by one exact division by the previous pivot, so
/// intermediate entries stay minors of the input and never leave the ring.
pub fn det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    for row in m {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    if n <= 8 {
        det_cofactor(m)
    } else {
        det_bareiss(m.to_vec())
    }
}

fn det_cofactor(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    // Expand along the row with the most zeros; the matrices this engine
    // builds are sparse and this prunes most of the recursion.
    let row = (0..n)
        .max_by_key(|&i| m[i].iter().filter(|p| p.is_zero()).count())
        .unwrap();
    let mut acc = LaurentPoly::zero();
    for col in 0..n {
        if m[row][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPoly>> = (0..n)
            .filter(|&i| i != row)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != col)
                    .map(|j| m[i][j].clone())
                    .collect()
            })
            .collect();
        let cof = m[row][col].mul(&det_cofactor(&minor));
        if (row + col) % 2 == 0 {
            acc = acc.add(&cof);
        } else {
            acc = acc.sub(&cof);
        }
    }
    acc
}

fn det_bareiss(mut a: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = a.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut negate = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !a[r][k].is_zero());
        let pivot_row = match pivot_row {
            Some(r) => r,
            None => return LaurentPoly::zero(),
        };
        if pivot_row != k {
            a.swap(pivot_row, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("fraction-free elimination: division must be exact");
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}
